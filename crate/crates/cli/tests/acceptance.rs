//! One PASS/FAIL line per acceptance criterion, written straight to stderr so
//! it shows without `--nocapture`.

mod common;

use std::io::Write;
use std::time::Instant;

use blockalg::harness::{
    default_configs, suite_bracket_consistency, suite_derivations, suite_iso, suite_jacobi,
    suite_simplicity, Check, Ctx, Mutation, Sampler, SuiteParams, SuiteReport,
};
use blockalg::isomorphism::{decide_iso, moduli_key, shear_forbidden, transport, NotIsoReason};
use blockalg::lattice::map_lattice;
use blockalg::rat::rat;
use blockalg::{
    AlgebraSpec, GroupTag, IsoParams, IsoVerdict, JSpec, Lattice, Rat, ShearScale, Vec2,
};
use blockalg::derivations::Named;

use common::{blockalg as cli, fixture, golden};

fn verdict(id: &str, what: &str, problems: &[String], extra: &str) -> bool {
    let ok = problems.is_empty();
    let status = if ok { "PASS" } else { "FAIL" };
    let mut line = format!("criterion {id:<3} {status}  {what}");
    if !extra.is_empty() {
        line.push_str(&format!(" [{extra}]"));
    }
    for p in problems.iter().take(3) {
        line.push_str(&format!("\n    {p}"));
    }
    if problems.len() > 3 {
        line.push_str(&format!("\n    .. {} more", problems.len() - 3));
    }
    let _ = writeln!(std::io::stderr(), "{line}");
    ok
}

fn collect(report: &SuiteReport, out: &mut Vec<String>) {
    for f in &report.failures {
        out.push(format!("{} | {}: {} [{}] {}", report.suite, report.spec, f.check, f.inputs.join(" | "), f.detail));
    }
}

fn section_trials(report: &SuiteReport, check: &str) -> usize {
    report.section(check).map_or(0, |s| s.trials)
}

const SMALL: [(i64, i64); 10] = [(1, 1), (-1, 1), (2, 1), (-2, 1), (3, 1), (1, 2), (-1, 2), (3, 2), (-5, 3), (5, 1)];

fn small(s: &mut Sampler) -> Rat {
    let (n, d) = *s.pick(&SMALL);
    rat(n, d)
}

/// Random Γ of rank 0, 1 or 2, often with a redundant generator.
fn random_lattice(s: &mut Sampler) -> Lattice {
    let shape = *s.pick(&[0u8, 1, 1, 2, 2, 2, 2, 3]);
    let v = |s: &mut Sampler| Vec2 { c1: small(s), c2: small(s) };
    loop {
        let gens = match shape {
            0 => vec![],
            1 => vec![if *s.pick(&[true, false]) { v(s) } else { Vec2::second(small(s).abs()) }],
            2 => vec![v(s), v(s)],
            _ => {
                let (a, b) = (v(s), v(s));
                let k = small(s).floor();
                vec![a.clone(), b.clone(), a.add(&b.scale(&k))]
            }
        };
        let lat = Lattice::new(gens);
        if lat.rank() == shape.min(2) as usize {
            return lat;
        }
    }
}

fn random_spec(s: &mut Sampler) -> AlgebraSpec {
    loop {
        let lat = random_lattice(s);
        let j = *s.pick(&JSpec::ALL);
        if let Ok(spec) = AlgebraSpec::new(lat, j) {
            if !spec.witt_degenerate() {
                return spec;
            }
        }
    }
}

/// Parameters admissible for `spec` whose image is not Witt-degenerate.
fn random_params(s: &mut Sampler, spec: &AlgebraSpec) -> IsoParams {
    loop {
        let b = if shear_forbidden(spec.j()) { Rat::zero() } else { small(s) };
        let p = IsoParams::new(small(s), b).unwrap();
        if !transport(&p, spec).unwrap().witt_degenerate() {
            return p;
        }
    }
}

#[test]
fn criterion_1_jacobi() {
    let start = Instant::now();
    let configs = default_configs();
    let mut problems = Vec::new();
    for (n, spec) in configs.iter().enumerate() {
        let p = SuiteParams { k: 2, l: 3, trials: 1000, seed: 1000 + n as u64, ..SuiteParams::default() };
        let r = suite_jacobi(&Ctx::new(spec), &p);
        if r.passes != 1000 {
            problems.push(format!("{}: {}/{}", r.spec, r.passes, r.trials));
        }
        collect(&r, &mut problems);
    }
    let j_types = JSpec::ALL.iter().all(|j| configs.iter().any(|c| c.j() == *j));
    let sigma = configs.iter().any(|c| c.has_sigma1()) && configs.iter().any(|c| !c.has_sigma1());
    let sigma2 = configs.iter().any(|c| c.has_sigma2()) && configs.iter().any(|c| !c.has_sigma2());
    let simple = configs.iter().any(|c| c.simple_part()) && configs.iter().any(|c| !c.simple_part());
    if !(configs.len() >= 6 && j_types && sigma && sigma2 && simple) {
        problems.push("configuration matrix does not cover the required cases".into());
    }
    let elapsed = start.elapsed();
    if elapsed.as_secs_f64() >= 30.0 {
        problems.push(format!("took {:.1} s", elapsed.as_secs_f64()));
    }
    let extra = format!("{} configs x 1000 triples, {:.1} s", configs.len(), elapsed.as_secs_f64());
    assert!(verdict("1", "Jacobi identity on seeded random triples, K=2 L=3", &problems, &extra));
}

#[test]
fn criterion_2_bracket_consistency() {
    let mut problems = Vec::new();
    let mut centrality = 0;
    let mut closure = 0;
    for (n, spec) in default_configs().iter().enumerate() {
        let p = SuiteParams { k: 2, l: 3, trials: 1000, seed: 2000 + n as u64, ..SuiteParams::default() };
        let r = suite_bracket_consistency(&Ctx::new(spec), &p);
        collect(&r, &mut problems);
        let window = spec.enumerate_window(2, 3).len();
        let want = [
            ("odot_antisymmetrization", 1000),
            ("equal_degree_oracle", 300),
            ("sigma1_centrality", if spec.has_sigma1() { window } else { 0 }),
            ("simple_part_closure", if spec.simple_part() { 300 } else { 0 }),
        ];
        for (check, n) in want {
            if section_trials(&r, check) != n {
                problems.push(format!("{}: {check} ran {} times, expected {n}", r.spec, section_trials(&r, check)));
            }
        }
        centrality += section_trials(&r, "sigma1_centrality");
        closure += section_trials(&r, "simple_part_closure");
    }
    let extra = format!("{centrality} centrality checks, {closure} simple-part pairs");
    assert!(verdict("2", "bracket consistency: odot, equal-degree oracle, centrality, simple-part closure", &problems, &extra));
}

#[test]
fn criterion_3_derivations() {
    let mut problems = Vec::new();
    let mut laws = 0;
    for (n, spec) in default_configs().iter().enumerate() {
        let p = SuiteParams { k: 2, l: 3, trials: 500, seed: 3000 + n as u64, ..SuiteParams::default() };
        let r = suite_derivations(&Ctx::new(spec), &p);
        collect(&r, &mut problems);
        let named = [Named::D1, Named::D1Bar, Named::D2, Named::Dt1, Named::Dt2];
        let defined = named.iter().filter(|w| w.defined_in(spec).is_ok()).count();
        let constructors = 1 + usize::from(spec.gamma().rank() > 0) + defined;
        if section_trials(&r, "derivation_law") != 500 * constructors {
            problems.push(format!("{}: derivation law ran {} times", r.spec, section_trials(&r, "derivation_law")));
        }
        let window = spec.enumerate_window(2, 3).len();
        let ext = named[..3].iter().filter(|w| w.defined_in(spec).is_ok()).count();
        if section_trials(&r, "extension_ad") != ext * window {
            problems.push(format!("{}: extension ad ran {} times", r.spec, section_trials(&r, "extension_ad")));
        }
        let dt1 = if Named::Dt1.defined_in(spec).is_ok() { window } else { 0 };
        if section_trials(&r, "dt1_identity") != dt1 {
            problems.push(format!("{}: dt1 identity ran {} times", r.spec, section_trials(&r, "dt1_identity")));
        }
        laws += section_trials(&r, "derivation_law");
    }
    let extra = format!("{laws} law checks");
    assert!(verdict("3", "derivation law, extension ad agreement, dt1 = ad(1) - d_pi1", &problems, &extra));
}

#[test]
fn criterion_4_explicit_isomorphisms() {
    let mut problems = Vec::new();
    let lattices = [Lattice::standard(), Lattice::new(vec![Vec2::new(2, 3), Vec2::new(0, 5)])];
    let mut seed = 4000;
    for lat in &lattices {
        for j in JSpec::ALL {
            let spec = AlgebraSpec::new(lat.clone(), j).unwrap();
            seed += 1;
            let p = SuiteParams { k: 2, l: 3, trials: 20, pairs: 300, seed, ..SuiteParams::default() };
            let r = suite_iso(&Ctx::new(&spec), &p);
            collect(&r, &mut problems);
            for (check, n) in [("psi_bracket", 6000), ("psi_grading", 6000), ("psi_triangular", 20 * spec.enumerate_window(2, 3).len())] {
                if section_trials(&r, check) != n {
                    problems.push(format!("{}: {check} ran {} times", r.spec, section_trials(&r, check)));
                }
            }
        }
    }
    assert!(verdict("4", "psi homomorphism, grading, triangularity for 20 (a,b) per J type", &problems, "8 specs x 20 params x 300 pairs"));
}

#[test]
fn criterion_5_decision_procedure() {
    let mut problems = Vec::new();
    let mut s = Sampler::new(5000, vec![]);
    let (mut found, mut mutations, mut rigid) = (0, 0, 0);
    for _ in 0..200 {
        let spec = random_spec(&mut s);
        let params = random_params(&mut s, &spec);
        let ctx = Ctx::new(&spec);
        match Check::DecideRoundTrip(params.clone()).run(&ctx) {
            Ok(()) => found += 1,
            Err(e) => problems.push(format!("{spec} with {params}: {e}")),
        }
        let muts = JSpec::ALL.into_iter().map(Mutation::JFlip).chain([Mutation::HShift]);
        for m in muts {
            if m.apply(&spec).is_some() {
                mutations += 1;
                if let Err(e) = Check::MutationRejected(m).run(&ctx) {
                    problems.push(format!("{spec}: {e}"));
                }
            }
        }
    }
    // π₁(Γ) = 0 against any different lattice
    for _ in 0..100 {
        let j = *s.pick(&[JSpec::NAT_ZERO, JSpec::NAT_NAT]);
        let h = small(&mut s).abs();
        let vertical = AlgebraSpec::new(Lattice::new(vec![Vec2::second(h.clone())]), j).unwrap();
        let other = loop {
            let lat = random_lattice(&mut s);
            if lat != *vertical.gamma() {
                if let Ok(o) = AlgebraSpec::new(lat, j) {
                    if !o.witt_degenerate() {
                        break o;
                    }
                }
            }
        };
        for (a, b) in [(&vertical, &other), (&other, &vertical)] {
            rigid += 1;
            let want = IsoVerdict::NotIsomorphic { reason: NotIsoReason::Pi1ZeroRigidity };
            match decide_iso(a, b) {
                Ok(v) if v == want => {}
                other => problems.push(format!("{a} vs {b}: {other:?}")),
            }
        }
    }
    let extra = format!("{found} round trips, {mutations} mutations, {rigid} rigidity pairs");
    assert!(verdict("5", "decide_iso round trip, mutations, pi1 = 0 rigidity", &problems, &extra));
}

#[test]
fn criterion_6_moduli() {
    let mut problems = Vec::new();
    let mut s = Sampler::new(6000, vec![]);
    for group in [GroupTag::G1, GroupTag::G2] {
        for _ in 0..200 {
            let lat = random_lattice(&mut s);
            let want = lat.canonical_form(group);
            let mut cur = lat.clone();
            for _ in 0..20 {
                let b = if group == GroupTag::G2 { Rat::zero() } else { small(&mut s) };
                let g = ShearScale::new(small(&mut s), b, group).unwrap();
                cur = map_lattice(&g.as_shear_map(), &cur).unwrap();
                let got = cur.canonical_form(group);
                if got != want {
                    problems.push(format!("{group:?} {lat}: {cur} has {got}, expected {want}"));
                }
            }
        }
    }
    let mut agree = 0;
    for n in 0..200 {
        let a = random_spec(&mut s);
        let b = if n % 2 == 0 {
            transport(&random_params(&mut s, &a), &a).unwrap()
        } else {
            random_spec(&mut s)
        };
        let same_key = moduli_key(&a).unwrap() == moduli_key(&b).unwrap();
        let iso = decide_iso(&a, &b).unwrap().is_found();
        if same_key == iso {
            agree += 1;
        } else {
            problems.push(format!("{a} vs {b}: keys equal {same_key}, isomorphic {iso}"));
        }
    }
    let extra = format!("2 x 200 lattices x 20 moves, {agree}/200 key agreements");
    assert!(verdict("6", "canonical form is an orbit invariant; moduli keys match decide_iso", &problems, &extra));
}

#[test]
fn criterion_7_simplicity_probe() {
    let mut problems = Vec::new();
    let fixtures = [
        AlgebraSpec::new(Lattice::standard(), JSpec::NAT_NAT).unwrap(),
        AlgebraSpec::new(Lattice::standard(), JSpec::ZERO).unwrap(),
    ];
    for (n, spec) in fixtures.iter().enumerate() {
        let p = SuiteParams { k: 2, l: 2, trials: 10, seed: 7000 + n as u64, ..SuiteParams::default() };
        let r = suite_simplicity(&Ctx::new(spec), &p, 6);
        if r.passes != 10 {
            problems.push(format!("{}: {}/10 seeds reached the window", r.spec, r.passes));
        }
        collect(&r, &mut problems);
    }
    assert!(verdict("7", "simplicity probe reaches the K=2 L=2 window from 10 seeds, depth 6", &problems, "ZxZ (N,N) and simple part of ZxZ (0,0)"));
}

/// Nilpotence of dt2, the growth law with coefficient `coeff`, and d_mu
/// eigenvectors, over every config.
fn locality(linear: bool) -> (Vec<String>, String) {
    let mut problems = Vec::new();
    let (mut nil, mut growth, mut dmu) = (0, 0, 0);
    let mut s = Sampler::new(8000, vec![]);
    for spec in default_configs() {
        let ctx = Ctx::new(&spec);
        let window = spec.enumerate_window(2, 3);
        let rank = spec.gamma().rank();
        for b in &window {
            if Named::Dt2.defined_in(&spec).is_ok() {
                nil += 1;
                if let Err(e) = Check::Nilpotence(Named::Dt2, b.clone()).run(&ctx) {
                    problems.push(format!("{spec}: dt2 on {b}: {e}"));
                }
            }
            if rank > 0 {
                let values: Vec<String> = (0..rank).map(|_| small(&mut s).to_string()).collect();
                dmu += 1;
                if let Err(e) = Check::DmuClosure(format!("dmu({})", values.join(",")), b.clone()).run(&ctx) {
                    problems.push(format!("{spec}: d_mu on {b}: {e}"));
                }
            }
            if !b.alpha.c1.is_zero() {
                growth += 1;
                let check = if linear { Check::GrowthLawLinear(b.clone(), 5) } else { Check::GrowthLaw(b.clone(), 5) };
                if let Err(e) = check.run(&ctx) {
                    problems.push(format!("{spec}: ad {b}: {e}"));
                }
            }
        }
    }
    (problems, format!("{nil} nilpotence, {growth} growth, {dmu} d_mu checks"))
}

#[test]
fn criterion_8_locality_witnesses() {
    let (problems, extra) = locality(true);
    let what = "dt2 nilpotence, growth law with leading coefficient k!*beta1 for k<=5, d_mu ClosureDim(1)";
    assert!(verdict("8", what, &problems, &extra));
}

#[test]
fn criterion_8_locality_witnesses_exponent_corrected() {
    let (problems, extra) = locality(false);
    let what = "as 8, with the leading coefficient k!*beta1^k";
    assert!(verdict("8b", what, &problems, &extra));
}

#[test]
fn criterion_9_cli_golden_identities() {
    let mut problems = Vec::new();
    let z2 = fixture("z2nn.json");
    let vert = fixture("vertical_nn.json");
    let runs: [(&[&str], &str); 5] = [
        (&["bracket", "--spec", &z2, "x[0,0;0,0]", "x[1,1;2,0]"], "bracket_unit.out"),
        (&["apply-der", "--spec", &z2, "--der", "ad(x[0,0;0,0])", "x[2,-1;3,1]"], "unit_action.out"),
        (&["bracket", "--spec", &vert, "x[0,0;1,0]", "x[0,3;0,0]"], "vertical_unit.out"),
        (&["reduce", "--spec", &z2, "x[0,1;0,0]"], "sigma1_reduce.out"),
        (&["reduce", "--spec", &z2, "x[0,1;0,0] + x[1,1;0,0]"], "sigma1_reduce_sum.out"),
    ];
    for (args, file) in runs {
        let run = cli(args);
        let want = golden(file);
        if run.code != 0 || run.stdout != want {
            problems.push(format!("{args:?}: exit {} output {:?}, golden {:?}", run.code, run.stdout, want));
        }
    }
    assert!(verdict("9", "CLI reproduces [1,x], [x^(0,1_1), x^(beta,0)] and the sigma1 reduction", &problems, "5 golden runs"));
}
