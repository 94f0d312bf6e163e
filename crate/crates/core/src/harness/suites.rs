use std::time::Instant;

use rand::Rng;

use crate::algebra::{BasisIdx, JSpec};
use crate::derivations::Named;
use crate::isomorphism::{shear_forbidden, transport, IsoParams};
use crate::rat::{rat, Rat};

use super::{Check, Ctx, Mutation, Sampler, SuiteReport};

/// Knobs shared by every suite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteParams {
    pub k: u32,
    pub l: u32,
    pub trials: usize,
    pub seed: u64,
    /// Sample pairs per parameter draw in the isomorphism suite.
    pub pairs: usize,
    /// Iteration cap for the locality suite.
    pub cap: u32,
}

impl Default for SuiteParams {
    fn default() -> SuiteParams {
        SuiteParams { k: 2, l: 3, trials: 1000, seed: 0, pairs: 300, cap: 5 }
    }
}

impl SuiteParams {
    fn sampler(&self, ctx: &Ctx<'_>) -> Sampler {
        Sampler::new(self.seed, ctx.spec.enumerate_window(self.k, self.l))
    }
}

fn finish(mut report: SuiteReport, start: Instant) -> SuiteReport {
    report.finish(start.elapsed());
    report
}

pub fn suite_jacobi(ctx: &Ctx<'_>, p: &SuiteParams) -> SuiteReport {
    let start = Instant::now();
    let mut report = SuiteReport::new("jacobi", ctx.spec, p.seed);
    let mut s = p.sampler(ctx);
    for _ in 0..p.trials {
        let (u, v, w) = (s.element(), s.element(), s.element());
        report.run(ctx, Check::Jacobi(u, v, w));
    }
    finish(report, start)
}

pub fn suite_bracket_consistency(ctx: &Ctx<'_>, p: &SuiteParams) -> SuiteReport {
    let start = Instant::now();
    let spec = ctx.spec;
    let mut report = SuiteReport::new("bracket", spec, p.seed);
    let mut s = p.sampler(ctx);
    for _ in 0..p.trials {
        let (u, v) = (s.element(), s.element());
        report.run(ctx, Check::OdotAntisymmetrization(u.clone(), v.clone()));
        report.run(ctx, Check::Antisymmetry(u.clone(), v));
        report.run(ctx, Check::SelfBracket(u));
    }
    let oracle_trials = p.trials.min(300);
    let vertical: Vec<BasisIdx> = s.window().iter().filter(|b| b.alpha.c1.is_zero()).cloned().collect();
    for _ in 0..oracle_trials {
        let a = s.pick(&vertical).clone();
        let same: Vec<BasisIdx> = vertical.iter().filter(|b| b.alpha == a.alpha).cloned().collect();
        let b = s.pick(&same).clone();
        report.run(ctx, Check::EqualDegree(a, b));
        let (a, b) = (s.basis(), s.basis());
        report.run(ctx, Check::LeadingOrder(a, b));
        report.run(ctx, Check::IdentityAction(s.basis()));
    }
    if spec.has_sigma1() {
        for b in s.window().to_vec() {
            report.run(ctx, Check::Sigma1Centrality(b));
        }
    }
    if spec.simple_part() {
        for _ in 0..oracle_trials {
            let (u, v) = (s.element(), s.element());
            report.run(ctx, Check::SimplePartClosure(u, v));
        }
    }
    finish(report, start)
}

const NAMED: [Named; 5] = [Named::D1, Named::D1Bar, Named::D2, Named::Dt1, Named::Dt2];

fn dmu_literal(s: &mut Sampler, rank: usize) -> String {
    let values: Vec<String> = (0..rank).map(|_| s.coeff().to_string()).collect();
    format!("dmu({})", values.join(","))
}

pub fn suite_derivations(ctx: &Ctx<'_>, p: &SuiteParams) -> SuiteReport {
    let start = Instant::now();
    let spec = ctx.spec;
    let mut report = SuiteReport::new("derivations", spec, p.seed);
    let mut s = p.sampler(ctx);
    let rank = spec.gamma().rank();
    let defined: Vec<Named> = NAMED.into_iter().filter(|n| n.defined_in(spec).is_ok()).collect();

    for _ in 0..p.trials {
        let lit = format!("ad({})", s.element());
        let (u, v) = (s.element(), s.element());
        report.run(ctx, Check::DerivationLaw(lit, u, v));
    }
    if rank > 0 {
        for _ in 0..p.trials {
            let lit = dmu_literal(&mut s, rank);
            let (u, v) = (s.element(), s.element());
            report.run(ctx, Check::DerivationLaw(lit, u, v));
        }
    }
    for which in &defined {
        for _ in 0..p.trials {
            let (u, v) = (s.element(), s.element());
            report.run(ctx, Check::DerivationLaw(which.name().to_string(), u, v));
        }
    }

    let window = s.window().to_vec();
    for b in &window {
        for which in &defined {
            report.run(ctx, Check::Homogeneity(which.name().to_string(), which.degree(), b.clone()));
            if matches!(which, Named::D1 | Named::D1Bar | Named::D2) {
                report.run(ctx, Check::ExtensionAd(*which, b.clone()));
            }
        }
        let g = s.basis();
        report.run(ctx, Check::Homogeneity(format!("ad({g})"), g.alpha.clone(), b.clone()));
        if defined.contains(&Named::Dt1) {
            report.run(ctx, Check::Dt1Identity(b.clone()));
        }
    }
    finish(report, start)
}

/// Draws `(a, b)` with `b ≠ 0` whenever J permits a shear.
fn sample_params(s: &mut Sampler, j: JSpec) -> IsoParams {
    const A: [(i64, i64); 8] = [(1, 1), (-1, 1), (2, 1), (-2, 1), (1, 2), (-1, 3), (3, 2), (-3, 1)];
    const B: [(i64, i64); 5] = [(1, 1), (-1, 1), (1, 2), (-2, 1), (5, 3)];
    let (n, d) = A[s.rng().gen_range(0..A.len())];
    let b = if shear_forbidden(j) {
        Rat::zero()
    } else {
        let (n, d) = B[s.rng().gen_range(0..B.len())];
        rat(n, d)
    };
    IsoParams::new(rat(n, d), b).expect("a is nonzero")
}

/// `trials` parameter draws, each checked on `pairs` sample pairs and the
/// whole window, plus every applicable non-isomorphism mutation.
pub fn suite_iso(ctx: &Ctx<'_>, p: &SuiteParams) -> SuiteReport {
    let start = Instant::now();
    let spec = ctx.spec;
    let mut report = SuiteReport::new("iso", spec, p.seed);
    let mut s = p.sampler(ctx);
    let window = s.window().to_vec();
    for _ in 0..p.trials {
        let params = loop {
            // a shear can carry Γ onto a Witt-degenerate lattice; redraw those
            let q = sample_params(&mut s, spec.j());
            if spec.witt_degenerate() || transport(&q, spec).is_ok_and(|t| !t.witt_degenerate()) {
                break q;
            }
        };
        for _ in 0..p.pairs {
            let (u, v) = (s.element(), s.element());
            report.run(ctx, Check::PsiBracket(params.clone(), u.clone(), v));
            report.run(ctx, Check::PsiGrading(params.clone(), u));
        }
        for b in &window {
            report.run(ctx, Check::PsiTriangular(params.clone(), b.clone()));
        }
        if !spec.witt_degenerate() {
            report.run(ctx, Check::DecideRoundTrip(params.clone()));
            report.run(ctx, Check::ModuliAgreement(params));
        }
    }
    if !spec.witt_degenerate() {
        let mutations = JSpec::ALL
            .into_iter()
            .map(Mutation::JFlip)
            .chain([Mutation::HShift, Mutation::RankBump]);
        for m in mutations {
            if m.apply(spec).is_some() {
                report.run(ctx, Check::MutationRejected(m));
            }
        }
    }
    finish(report, start)
}

/// Probes simplicity from `trials` random nonzero seeds.
pub fn suite_simplicity(ctx: &Ctx<'_>, p: &SuiteParams, depth: u32) -> SuiteReport {
    let start = Instant::now();
    let mut report = SuiteReport::new("simplicity", ctx.spec, p.seed);
    let mut s = p.sampler(ctx);
    for _ in 0..p.trials {
        let seed = s.nonzero_element();
        report.run(ctx, Check::Simplicity(seed, p.k, p.l, depth));
    }
    finish(report, start)
}

pub fn suite_locality(ctx: &Ctx<'_>, p: &SuiteParams) -> SuiteReport {
    let start = Instant::now();
    let spec = ctx.spec;
    let mut report = SuiteReport::new("locality", spec, p.seed);
    let mut s = p.sampler(ctx);
    let rank = spec.gamma().rank();
    let window = s.window().to_vec();
    for b in &window {
        for which in [Named::Dt1, Named::Dt2] {
            if which.defined_in(spec).is_ok() {
                report.run(ctx, Check::Nilpotence(which, b.clone()));
            }
        }
        if rank > 0 {
            let lit = dmu_literal(&mut s, rank);
            report.run(ctx, Check::DmuClosure(lit, b.clone()));
        }
        report.run(ctx, Check::Ad1Closure(b.clone()));
    }
    let mut generators: Vec<BasisIdx> = Vec::new();
    for b in &window {
        if !b.alpha.c1.is_zero() && !generators.iter().any(|g| g.alpha == b.alpha) {
            generators.push(b.clone());
        }
    }
    for g in generators {
        let g = if s.rng().gen_bool(0.5) { g } else { s.pick(&window_at(&window, &g)).clone() };
        report.run(ctx, Check::GrowthLaw(g, p.cap));
    }
    finish(report, start)
}

fn window_at(window: &[BasisIdx], g: &BasisIdx) -> Vec<BasisIdx> {
    window.iter().filter(|b| b.alpha == g.alpha).cloned().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraSpec;
    use crate::harness::{default_configs, recheck, Fault};
    use crate::lattice::Lattice;

    fn small(seed: u64) -> SuiteParams {
        SuiteParams { k: 1, l: 2, trials: 40, seed, pairs: 20, cap: 4 }
    }

    #[test]
    fn suites_pass_on_every_config() {
        for spec in default_configs() {
            let ctx = Ctx::new(&spec);
            let p = small(3);
            for report in [
                suite_jacobi(&ctx, &p),
                suite_bracket_consistency(&ctx, &p),
                suite_derivations(&ctx, &p),
                suite_iso(&ctx, &SuiteParams { trials: 3, ..p.clone() }),
                suite_locality(&ctx, &p),
            ] {
                assert!(report.passed(), "{report}");
                assert_eq!(report.passes + report.failures.len(), report.trials);
            }
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let spec = AlgebraSpec::new(Lattice::standard(), JSpec::NAT_NAT).unwrap();
        let ctx = Ctx::new(&spec);
        let a = suite_bracket_consistency(&ctx, &small(9));
        let b = suite_bracket_consistency(&ctx, &small(9));
        assert_eq!(a.to_json(), b.to_json());
        assert_eq!(a.to_string(), b.to_string());
    }

    #[test]
    fn shears_are_nonzero_exactly_when_allowed() {
        let mut s = Sampler::new(4, vec![]);
        for _ in 0..50 {
            assert!(!sample_params(&mut s, JSpec::NAT_NAT).b.is_zero());
            assert!(!sample_params(&mut s, JSpec::ZERO).b.is_zero());
            assert!(sample_params(&mut s, JSpec::NAT_ZERO).b.is_zero());
        }
    }

    #[test]
    fn zero_trials_is_an_empty_pass() {
        let spec = AlgebraSpec::new(Lattice::standard(), JSpec::NAT_NAT).unwrap();
        let r = suite_jacobi(&Ctx::new(&spec), &SuiteParams { trials: 0, ..small(1) });
        assert!(r.passed());
        assert_eq!(r.trials, 0);
    }

    #[test]
    fn corrupted_bracket_fails_and_failures_replay() {
        let spec = AlgebraSpec::new(Lattice::standard(), JSpec::NAT_NAT).unwrap();
        let ctx = Ctx::with_fault(&spec, Fault::Corrupt);
        let r = suite_jacobi(&ctx, &small(5));
        assert!(!r.passed());
        for f in &r.failures {
            assert_eq!(recheck(&ctx, f).unwrap(), Err(f.detail.clone()));
        }
    }
}
