//! Individual checks, each a pure function of the algebra and its inputs.

use crate::algebra::{odot, raw_bracket, AlgebraSpec, BasisIdx, Element, JSpec, MultiIndex};
use crate::derivations::{
    is_homogeneous, local_finiteness_probe, nilpotence_degree, Derivation, Locality, Named,
    Nilpotence, Undefined,
};
use crate::isomorphism::{
    decide_iso, moduli_key, phi_apply, phi_check, psi_raw, transport, IsoParams, IsoVerdict,
    NotIsoReason,
};
use crate::lattice::{Echelon, GroupHom, Lattice, Vec2};
use crate::rat::{factorial, Rat};
use crate::syntax::{parse_derivation, parse_element};
use crate::Error;

use super::{Ctx, Failure, SimplicityOutcome};

/// A change to Γ or J that must destroy isomorphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Mutation {
    /// Replace J.
    JFlip(JSpec),
    /// Replace `h` by `h + 1` in the echelon basis.
    HShift,
    /// Add `(0, 1)` to a rank-1 lattice off the second axis.
    RankBump,
}

impl Mutation {
    fn label(&self) -> String {
        match self {
            Mutation::JFlip(j) => format!("jflip {j}"),
            Mutation::HShift => "hshift".to_string(),
            Mutation::RankBump => "rankbump".to_string(),
        }
    }

    fn parse(s: &str) -> Result<Mutation, Error> {
        match s {
            "hshift" => Ok(Mutation::HShift),
            "rankbump" => Ok(Mutation::RankBump),
            _ => {
                let j = s
                    .strip_prefix("jflip ")
                    .ok_or_else(|| Error::Parse(format!("unknown mutation {s:?}")))?;
                Ok(Mutation::JFlip(parse_jspec(j)?))
            }
        }
    }

    /// The mutated spec and the reason `decide_iso` must report, if the
    /// mutation applies to `spec`.
    pub fn apply(&self, spec: &AlgebraSpec) -> Option<(AlgebraSpec, NotIsoReason)> {
        let gamma = spec.gamma();
        let (target, reason) = match self {
            Mutation::JFlip(j) => {
                if *j == spec.j() {
                    return None;
                }
                (AlgebraSpec::new(gamma.clone(), *j).ok()?, NotIsoReason::JMismatch)
            }
            Mutation::HShift => {
                let one = Rat::one();
                let (lat, reason) = match gamma.echelon() {
                    Echelon::Full { c, s, h } => (
                        Lattice::new(vec![Vec2 { c1: c.clone(), c2: s.clone() }, Vec2::second(h + &one)]),
                        NotIsoReason::LatticeInvariantMismatch,
                    ),
                    Echelon::Vertical { h } => {
                        (Lattice::new(vec![Vec2::second(h + &one)]), NotIsoReason::Pi1ZeroRigidity)
                    }
                    _ => return None,
                };
                (AlgebraSpec::new(lat, spec.j()).ok()?, reason)
            }
            Mutation::RankBump => match gamma.echelon() {
                Echelon::Slanted { c, s } => {
                    let lat = Lattice::new(vec![Vec2 { c1: c.clone(), c2: s.clone() }, Vec2::new(0, 1)]);
                    (AlgebraSpec::new(lat, spec.j()).ok()?, NotIsoReason::LatticeInvariantMismatch)
                }
                _ => return None,
            },
        };
        (!target.witt_degenerate()).then_some((target, reason))
    }
}

fn parse_jspec(s: &str) -> Result<JSpec, Error> {
    use crate::algebra::JKind;
    let kind = |t: &str| match t.trim() {
        "0" => Ok(JKind::Zero),
        "N" => Ok(JKind::Nat),
        other => Err(Error::Parse(format!("bad J factor {other:?}"))),
    };
    let inner = s
        .trim()
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(|| Error::Parse(format!("bad J {s:?}")))?;
    let (a, b) = inner.split_once(',').ok_or_else(|| Error::Parse(format!("bad J {s:?}")))?;
    Ok(JSpec::new(kind(a)?, kind(b)?))
}

fn parse_vec2(s: &str) -> Result<Vec2, Error> {
    let inner = s
        .trim()
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(|| Error::Parse(format!("bad point {s:?}")))?;
    let (a, b) = inner.split_once(',').ok_or_else(|| Error::Parse(format!("bad point {s:?}")))?;
    let p = |t: &str| t.trim().parse::<Rat>().map_err(|e| Error::Parse(e.to_string()));
    Ok(Vec2 { c1: p(a)?, c2: p(b)? })
}

fn parse_basis(s: &str) -> Result<BasisIdx, Error> {
    let e = parse_element(s)?;
    let single = e.terms().next().filter(|(_, c)| e.len() == 1 && c.is_one()).map(|(b, _)| b.clone());
    single.ok_or_else(|| Error::Parse(format!("expected a single basis symbol, got {s:?}")))
}

fn parse_named(s: &str) -> Result<Named, Error> {
    [Named::D1, Named::D1Bar, Named::D2, Named::Dt1, Named::Dt2]
        .into_iter()
        .find(|n| n.name() == s)
        .ok_or_else(|| Error::Parse(format!("unknown derivation {s:?}")))
}

fn parse_rat(s: &str) -> Result<Rat, Error> {
    s.parse::<Rat>().map_err(|e| Error::Parse(e.to_string()))
}

/// A single verifiable claim.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Check {
    Jacobi(Element, Element, Element),
    OdotAntisymmetrization(Element, Element),
    Antisymmetry(Element, Element),
    SelfBracket(Element),
    /// Closed form of `[x^{β,j}, x^{β,k}]` for `β₁ = 0`.
    EqualDegree(BasisIdx, BasisIdx),
    /// Top-filtration coefficient of `[x^{β,j}, x^{γ,k}]`.
    LeadingOrder(BasisIdx, BasisIdx),
    Sigma1Centrality(BasisIdx),
    SimplePartClosure(Element, Element),
    IdentityAction(BasisIdx),
    DerivationLaw(String, Element, Element),
    Homogeneity(String, Vec2, BasisIdx),
    ExtensionAd(Named, BasisIdx),
    Dt1Identity(BasisIdx),
    Nilpotence(Named, BasisIdx),
    /// `ad^k_{x^{β,i}}(x^{2β,0})` leads with `k!·β₁^k·x^{(k+2)β,k·i}` for `k <= cap`.
    GrowthLaw(BasisIdx, u32),
    /// The same iterates against the coefficient `k!·β₁`.
    GrowthLawLinear(BasisIdx, u32),
    DmuClosure(String, BasisIdx),
    Ad1Closure(BasisIdx),
    PsiBracket(IsoParams, Element, Element),
    PsiGrading(IsoParams, Element),
    PsiTriangular(IsoParams, BasisIdx),
    DecideRoundTrip(IsoParams),
    ModuliAgreement(IsoParams),
    MutationRejected(Mutation),
    /// Seed, window box, level cap, depth.
    Simplicity(Element, u32, u32, u32),
}

fn expect_eq(lhs: &Element, rhs: &Element) -> Result<(), String> {
    if lhs == rhs {
        Ok(())
    } else {
        Err(format!("{lhs} != {rhs}"))
    }
}

fn expect_zero(e: &Element) -> Result<(), String> {
    if e.is_zero() {
        Ok(())
    } else {
        Err(format!("got {e}, expected 0"))
    }
}

fn build_der(spec: &AlgebraSpec, lit: &str) -> Result<Derivation, String> {
    parse_derivation(lit)
        .and_then(|d| d.build(spec, Undefined::Reject))
        .map_err(|e| e.to_string())
}

fn basis_el(b: &BasisIdx) -> Element {
    Element::basis(b.clone())
}

fn x(alpha: Vec2, i1: i64, i2: i64, c: Rat, out: &mut Element) {
    if i1 >= 0 && i2 >= 0 {
        out.add_term(BasisIdx::x(alpha, i1 as u32, i2 as u32), c);
    }
}

impl Check {
    pub fn name(&self) -> &'static str {
        match self {
            Check::Jacobi(..) => "jacobi",
            Check::OdotAntisymmetrization(..) => "odot_antisymmetrization",
            Check::Antisymmetry(..) => "antisymmetry",
            Check::SelfBracket(..) => "self_bracket",
            Check::EqualDegree(..) => "equal_degree_oracle",
            Check::LeadingOrder(..) => "leading_order_oracle",
            Check::Sigma1Centrality(..) => "sigma1_centrality",
            Check::SimplePartClosure(..) => "simple_part_closure",
            Check::IdentityAction(..) => "identity_action",
            Check::DerivationLaw(..) => "derivation_law",
            Check::Homogeneity(..) => "homogeneity",
            Check::ExtensionAd(..) => "extension_ad",
            Check::Dt1Identity(..) => "dt1_identity",
            Check::Nilpotence(..) => "nilpotence",
            Check::GrowthLaw(..) => "growth_law",
            Check::GrowthLawLinear(..) => "growth_law_linear",
            Check::DmuClosure(..) => "dmu_closure",
            Check::Ad1Closure(..) => "ad1_closure",
            Check::PsiBracket(..) => "psi_bracket",
            Check::PsiGrading(..) => "psi_grading",
            Check::PsiTriangular(..) => "psi_triangular",
            Check::DecideRoundTrip(..) => "decide_round_trip",
            Check::ModuliAgreement(..) => "moduli_agreement",
            Check::MutationRejected(..) => "mutation_rejected",
            Check::Simplicity(..) => "simplicity",
        }
    }

    /// Textual inputs, replayable through [`Check::parse`].
    pub fn inputs(&self) -> Vec<String> {
        let s = |e: &dyn ToString| e.to_string();
        let params = |p: &IsoParams| vec![p.a.to_string(), p.b.to_string()];
        match self {
            Check::Jacobi(u, v, w) => vec![s(u), s(v), s(w)],
            Check::OdotAntisymmetrization(u, v)
            | Check::Antisymmetry(u, v)
            | Check::SimplePartClosure(u, v) => vec![s(u), s(v)],
            Check::SelfBracket(u) => vec![s(u)],
            Check::EqualDegree(a, b) | Check::LeadingOrder(a, b) => vec![s(a), s(b)],
            Check::Sigma1Centrality(b)
            | Check::IdentityAction(b)
            | Check::Dt1Identity(b)
            | Check::Ad1Closure(b) => vec![s(b)],
            Check::DerivationLaw(d, u, v) => vec![d.clone(), s(u), s(v)],
            Check::Homogeneity(d, deg, b) => vec![d.clone(), s(deg), s(b)],
            Check::ExtensionAd(n, b) | Check::Nilpotence(n, b) => vec![n.name().to_string(), s(b)],
            Check::GrowthLaw(b, cap) | Check::GrowthLawLinear(b, cap) => vec![s(b), cap.to_string()],
            Check::DmuClosure(d, b) => vec![d.clone(), s(b)],
            Check::PsiBracket(p, u, v) => [params(p), vec![s(u), s(v)]].concat(),
            Check::PsiGrading(p, u) => [params(p), vec![s(u)]].concat(),
            Check::PsiTriangular(p, b) => [params(p), vec![s(b)]].concat(),
            Check::DecideRoundTrip(p) | Check::ModuliAgreement(p) => params(p),
            Check::MutationRejected(m) => vec![m.label()],
            Check::Simplicity(e, k, l, d) => vec![s(e), k.to_string(), l.to_string(), d.to_string()],
        }
    }

    /// Rebuilds a check from a failure record.
    pub fn parse(name: &str, inputs: &[String]) -> Result<Check, Error> {
        let arg = |i: usize| {
            inputs
                .get(i)
                .map(String::as_str)
                .ok_or_else(|| Error::Parse(format!("{name}: missing input {i}")))
        };
        let el = |i: usize| parse_element(arg(i)?);
        let bx = |i: usize| parse_basis(arg(i)?);
        let uint = |i: usize| arg(i)?.parse::<u32>().map_err(|e| Error::Parse(e.to_string()));
        let params = || -> Result<IsoParams, Error> { IsoParams::new(parse_rat(arg(0)?)?, parse_rat(arg(1)?)?) };
        Ok(match name {
            "jacobi" => Check::Jacobi(el(0)?, el(1)?, el(2)?),
            "odot_antisymmetrization" => Check::OdotAntisymmetrization(el(0)?, el(1)?),
            "antisymmetry" => Check::Antisymmetry(el(0)?, el(1)?),
            "self_bracket" => Check::SelfBracket(el(0)?),
            "equal_degree_oracle" => Check::EqualDegree(bx(0)?, bx(1)?),
            "leading_order_oracle" => Check::LeadingOrder(bx(0)?, bx(1)?),
            "sigma1_centrality" => Check::Sigma1Centrality(bx(0)?),
            "simple_part_closure" => Check::SimplePartClosure(el(0)?, el(1)?),
            "identity_action" => Check::IdentityAction(bx(0)?),
            "derivation_law" => Check::DerivationLaw(arg(0)?.to_string(), el(1)?, el(2)?),
            "homogeneity" => Check::Homogeneity(arg(0)?.to_string(), parse_vec2(arg(1)?)?, bx(2)?),
            "extension_ad" => Check::ExtensionAd(parse_named(arg(0)?)?, bx(1)?),
            "dt1_identity" => Check::Dt1Identity(bx(0)?),
            "nilpotence" => Check::Nilpotence(parse_named(arg(0)?)?, bx(1)?),
            "simplicity" => Check::Simplicity(el(0)?, uint(1)?, uint(2)?, uint(3)?),
            "growth_law" | "growth_law_linear" => {
                let cap = uint(1)?;
                if name == "growth_law" {
                    Check::GrowthLaw(bx(0)?, cap)
                } else {
                    Check::GrowthLawLinear(bx(0)?, cap)
                }
            }
            "dmu_closure" => Check::DmuClosure(arg(0)?.to_string(), bx(1)?),
            "ad1_closure" => Check::Ad1Closure(bx(0)?),
            "psi_bracket" => Check::PsiBracket(params()?, el(2)?, el(3)?),
            "psi_grading" => Check::PsiGrading(params()?, el(2)?),
            "psi_triangular" => Check::PsiTriangular(params()?, bx(2)?),
            "decide_round_trip" => Check::DecideRoundTrip(params()?),
            "moduli_agreement" => Check::ModuliAgreement(params()?),
            "mutation_rejected" => Check::MutationRejected(Mutation::parse(arg(0)?)?),
            other => return Err(Error::Parse(format!("unknown check {other:?}"))),
        })
    }

    pub fn run(&self, ctx: &Ctx<'_>) -> Result<(), String> {
        let spec = ctx.spec;
        let j = spec.j();
        let br = |u: &Element, v: &Element| ctx.bracket(u, v);
        match self {
            Check::Jacobi(u, v, w) => {
                let total: Element =
                    [br(&br(u, v), w), br(&br(v, w), u), br(&br(w, u), v)].into_iter().sum();
                expect_zero(&total)
            }
            Check::OdotAntisymmetrization(u, v) => {
                let via_odot = spec.quotient(&(&odot(j, u, v) - &odot(j, v, u)));
                expect_eq(&br(u, v), &via_odot)
            }
            Check::Antisymmetry(u, v) => expect_eq(&br(u, v), &-&br(v, u)),
            Check::SelfBracket(u) => expect_zero(&br(u, u)),
            Check::EqualDegree(a, b) => {
                if a.alpha != b.alpha || !a.alpha.c1.is_zero() {
                    return Err("needs two symbols of one degree with β₁ = 0".into());
                }
                let beta2m = &a.alpha.c2 - &Rat::one();
                let (j1, j2) = (a.idx.i1 as i64, a.idx.i2 as i64);
                let (k1, k2) = (b.idx.i1 as i64, b.idx.i2 as i64);
                let two = a.alpha.add(&a.alpha);
                let mut want = Element::zero();
                x(two.clone(), j1 + k1 - 1, j2 + k2, &beta2m * &Rat::from_int(j1 - k1), &mut want);
                x(two, j1 + k1 - 1, j2 + k2 - 1, Rat::from_int(j1 * k2 - k1 * j2), &mut want);
                expect_eq(&br(&basis_el(a), &basis_el(b)), &spec.quotient(&want))
            }
            Check::LeadingOrder(a, b) => {
                let got = br(&basis_el(a), &basis_el(b));
                let deg = a.alpha.add(&b.alpha);
                let one = Rat::one();
                let (b1, b2) = (&a.alpha.c1, &a.alpha.c2);
                let (g1, g2) = (&b.alpha.c1, &b.alpha.c2);
                let (top, want) = if !spec.gamma().proj_generator(1).is_zero() {
                    let idx = MultiIndex::new(a.idx.i1 + b.idx.i1, a.idx.i2 + b.idx.i2);
                    (idx, &(b1 * &(g2 - &one)) - &(g1 * &(b2 - &one)))
                } else {
                    let s1 = a.idx.i1 + b.idx.i1;
                    if s1 == 0 {
                        return Ok(());
                    }
                    let idx = MultiIndex::new(s1 - 1, a.idx.i2 + b.idx.i2);
                    let c = &(&Rat::from(a.idx.i1) * &(g2 - &one)) - &(&Rat::from(b.idx.i1) * &(b2 - &one));
                    (idx, c)
                };
                let target = BasisIdx::new(deg, top);
                let want = if spec.is_killed(&target) { Rat::zero() } else { want };
                let have = got.coeff(&target);
                if have == want {
                    Ok(())
                } else {
                    Err(format!("coefficient of {target} is {have}, expected {want}"))
                }
            }
            Check::Sigma1Centrality(b) => {
                let z = Element::basis(BasisIdx::x(Vec2::sigma1(), 0, 0));
                expect_zero(&raw_bracket(j, &z, &basis_el(b)))
            }
            Check::SimplePartClosure(u, v) => {
                expect_zero(&raw_bracket(j, u, v).grade_component(&Vec2::sigma2()))
            }
            Check::IdentityAction(b) => {
                let mut want = Element::zero();
                want.add_term(b.clone(), b.alpha.c1.clone());
                x(b.alpha.clone(), b.idx.i1 as i64 - 1, b.idx.i2 as i64, Rat::from(b.idx.i1), &mut want);
                expect_eq(&br(&Element::one(), &basis_el(b)), &spec.quotient(&want))
            }
            Check::DerivationLaw(lit, u, v) => {
                let d = build_der(spec, lit)?;
                let lhs = d.act(spec, &br(u, v));
                let rhs = &br(&d.act(spec, u), v) + &br(u, &d.act(spec, v));
                expect_eq(&lhs, &rhs)
            }
            Check::Homogeneity(lit, deg, b) => {
                let d = build_der(spec, lit)?;
                if is_homogeneous(|v| d.act(spec, v), deg, std::slice::from_ref(b)) {
                    Ok(())
                } else {
                    Err(format!("image {} leaves degree {}", d.act(spec, &basis_el(b)), b.alpha.add(deg)))
                }
            }
            Check::ExtensionAd(which, b) => {
                let d = Derivation::named(spec, *which, Undefined::Reject).map_err(|e| e.to_string())?;
                let gen = match which {
                    Named::D1 => BasisIdx::x(Vec2::sigma1(), 0, 1),
                    Named::D1Bar => BasisIdx::x(Vec2::sigma1(), 1, 0),
                    Named::D2 => BasisIdx::x(Vec2::sigma2(), 0, 0),
                    _ => return Err(format!("{} is not an extension ad", which.name())),
                };
                let via_ext = spec.quotient(&spec.extension().bracket(&basis_el(&gen), &basis_el(b)));
                expect_eq(&d.act(spec, &basis_el(b)), &via_ext)
            }
            Check::Dt1Identity(b) => {
                let dt1 = Derivation::dt1(spec, Undefined::Reject).map_err(|e| e.to_string())?;
                let pi1 = Derivation::dmu(spec, GroupHom::pi1(spec.gamma())).map_err(|e| e.to_string())?;
                let v = basis_el(b);
                let combo = &br(&Element::one(), &v) - &pi1.act(spec, &v);
                expect_eq(&combo, &dt1.act(spec, &v))
            }
            Check::Nilpotence(which, b) => {
                let d = Derivation::named(spec, *which, Undefined::Reject).map_err(|e| e.to_string())?;
                let p = if *which == Named::Dt1 { 1 } else { 2 };
                // the last nonzero iterate sits at index i − i_p·1_p, unless the quotient kills it
                let bottom = if p == 1 { MultiIndex::new(0, b.idx.i2) } else { MultiIndex::new(b.idx.i1, 0) };
                let killed = spec.is_killed(&BasisIdx::new(b.alpha.clone(), bottom));
                let want = Nilpotence::Degree(b.idx.get(p) + u32::from(!killed));
                let got = nilpotence_degree(|v| d.act(spec, v), &basis_el(b), b.idx.level() + 2);
                if got == want {
                    Ok(())
                } else {
                    Err(format!("{got:?}, expected {want:?}"))
                }
            }
            Check::GrowthLaw(g, cap) | Check::GrowthLawLinear(g, cap) => {
                let linear = matches!(self, Check::GrowthLawLinear(..));
                growth(ctx, g, *cap, linear)
            }
            Check::DmuClosure(lit, b) => {
                let d = build_der(spec, lit)?;
                match local_finiteness_probe(|v| d.act(spec, v), &basis_el(b), 4) {
                    Locality::ClosureDim(1) => Ok(()),
                    other => Err(format!("{other:?}, expected ClosureDim(1)")),
                }
            }
            Check::Ad1Closure(b) => {
                let d = Derivation::ad(Element::one());
                match local_finiteness_probe(|v| d.act(spec, v), &basis_el(b), b.idx.level() + 3) {
                    Locality::ClosureDim(k) if k <= b.idx.i1 + 1 => Ok(()),
                    other => Err(format!("{other:?}, expected ClosureDim(<= {})", b.idx.i1 + 1)),
                }
            }
            Check::PsiBracket(p, u, v) => {
                let target = transport(p, spec).map_err(|e| e.to_string())?;
                let psi = |e: &Element| psi_raw(p, &target, e);
                expect_eq(&target.bracket(&psi(u), &psi(v)), &psi(&br(u, v)))
            }
            Check::PsiGrading(p, u) => {
                let target = transport(p, spec).map_err(|e| e.to_string())?;
                let image = psi_raw(p, &target, u);
                for deg in u.degrees() {
                    let lhs = image.grade_component(&phi_apply(p, &deg));
                    let rhs = psi_raw(p, &target, &u.grade_component(&deg));
                    expect_eq(&lhs, &rhs)?;
                }
                Ok(())
            }
            Check::PsiTriangular(p, b) => {
                let target = transport(p, spec).map_err(|e| e.to_string())?;
                let image = psi_raw(p, &target, &basis_el(b));
                let diag_idx = BasisIdx::new(phi_apply(p, &b.alpha), b.idx);
                let diag = p.a.pow(b.idx.i1) / &p.a;
                if image.coeff(&diag_idx) != diag {
                    return Err(format!("diagonal of {b} is {}, expected {diag}", image.coeff(&diag_idx)));
                }
                let stray = image
                    .support()
                    .find(|t| t.alpha != diag_idx.alpha || (*t != &diag_idx && t.idx >= b.idx))
                    .cloned();
                match stray {
                    None => Ok(()),
                    Some(t) => Err(format!("{b} ↦ {image}: {t} is not below the diagonal")),
                }
            }
            Check::DecideRoundTrip(p) => {
                let target = transport(p, spec).map_err(|e| e.to_string())?;
                match decide_iso(spec, &target).map_err(|e| e.to_string())? {
                    v @ IsoVerdict::Found { .. } => {
                        let q = v.params().expect("found carries params");
                        if phi_check(&q, spec, &target) {
                            Ok(())
                        } else {
                            Err(format!("{q} fails re-verification"))
                        }
                    }
                    other => Err(format!("{other}")),
                }
            }
            Check::ModuliAgreement(p) => {
                let target = transport(p, spec).map_err(|e| e.to_string())?;
                let (ka, kb) = (moduli_key(spec), moduli_key(&target));
                match (ka, kb) {
                    (Ok(a), Ok(b)) if a == b => Ok(()),
                    (a, b) => Err(format!("keys differ: {a:?} vs {b:?}")),
                }
            }
            Check::Simplicity(seed, k, l, depth) => {
                let bracket = |u: &Element, v: &Element| ctx.bracket(u, v);
                match super::simplicity::probe_with(spec, bracket, seed, *k, *l, *depth) {
                    Ok(SimplicityOutcome::ReachedFullWindow { .. }) => Ok(()),
                    Ok(SimplicityOutcome::Inconclusive { missed }) => {
                        let shown: Vec<String> = missed.iter().take(5).map(|b| b.to_string()).collect();
                        Err(format!("inconclusive, {} window symbols missed: {} ..", missed.len(), shown.join(" ")))
                    }
                    Err(e) => Err(e.to_string()),
                }
            }
            Check::MutationRejected(m) => {
                let Some((target, reason)) = m.apply(spec) else {
                    return Err(format!("mutation {} does not apply", m.label()));
                };
                let verdict = decide_iso(spec, &target).map_err(|e| e.to_string())?;
                if verdict != (IsoVerdict::NotIsomorphic { reason }) {
                    return Err(format!("{verdict}, expected not isomorphic ({reason})"));
                }
                let (ka, kb) = (moduli_key(spec), moduli_key(&target));
                if ka.is_ok() && ka == kb {
                    return Err(format!("moduli keys coincide: {:?}", ka));
                }
                Ok(())
            }
        }
    }
}

fn growth(ctx: &Ctx<'_>, g: &BasisIdx, cap: u32, linear: bool) -> Result<(), String> {
    let beta = &g.alpha;
    if beta.c1.is_zero() {
        return Err("growth law needs β₁ ≠ 0".into());
    }
    let ad = basis_el(g);
    let start = Element::basis(BasisIdx::x(beta.add(beta), 0, 0));
    let probe = local_finiteness_probe(|v| ctx.bracket(&ad, v), &start, cap);
    let Locality::GrowthWitness(trace) = probe else {
        return Err(format!("{probe:?}, expected a growth witness"));
    };
    for step in trace {
        let k = step.k;
        let deg = beta.scale(&Rat::from(k + 2));
        let idx = MultiIndex::new(k * g.idx.i1, k * g.idx.i2);
        let want = if linear { &factorial(k) * &beta.c1 } else { &factorial(k) * &beta.c1.pow(k) };
        if step.degree != deg || step.leading != BasisIdx::new(deg.clone(), idx) {
            return Err(format!("step {k}: leading symbol {}, expected degree {deg} index {idx:?}", step.leading));
        }
        if step.coeff != want {
            return Err(format!("step {k}: leading coefficient {}, expected {want}", step.coeff));
        }
    }
    Ok(())
}

/// Replays a failure record; `Ok(Err(detail))` reproduces a failure.
pub fn recheck(ctx: &Ctx<'_>, failure: &Failure) -> Result<Result<(), String>, Error> {
    let check = Check::parse(&failure.check, &failure.inputs)?;
    Ok(check.run(ctx))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::Fault;

    #[test]
    fn inputs_round_trip() {
        let u = parse_element("3/2 x[1,-1;2,0] - x[0,1;1,0]").unwrap();
        let v = parse_element("x[2,0;0,0]").unwrap();
        let b = BasisIdx::x(Vec2::new(1, 2), 1, 0);
        let p = IsoParams::new(Rat::from_int(-2), crate::rat::rat(1, 2)).unwrap();
        let checks = vec![
            Check::Jacobi(u.clone(), v.clone(), u.clone()),
            Check::DerivationLaw("ad(x[0,0;1,0]) + 2*dt2".into(), u.clone(), v.clone()),
            Check::Homogeneity("d1".into(), Vec2::sigma1(), b.clone()),
            Check::Nilpotence(Named::Dt2, b.clone()),
            Check::GrowthLaw(b.clone(), 5),
            Check::PsiBracket(p.clone(), u.clone(), v.clone()),
            Check::PsiTriangular(p.clone(), b.clone()),
            Check::MutationRejected(Mutation::JFlip(JSpec::ZERO_NAT)),
            Check::MutationRejected(Mutation::HShift),
        ];
        for c in checks {
            assert_eq!(Check::parse(c.name(), &c.inputs()).unwrap(), c);
        }
    }

    #[test]
    fn corrupted_bracket_is_caught_and_replayed() {
        let spec = AlgebraSpec::new(Lattice::standard(), JSpec::NAT_NAT).unwrap();
        let bad = Ctx::with_fault(&spec, Fault::Corrupt);
        let u = parse_element("x[1,0;0,0]").unwrap();
        let v = parse_element("x[-1,1;1,0]").unwrap();
        let w = parse_element("x[1,2;0,1]").unwrap();
        let check = Check::Jacobi(u, v, w);
        let detail = check.run(&bad).unwrap_err();
        let failure = Failure { check: check.name().into(), inputs: check.inputs(), detail: detail.clone() };
        assert_eq!(recheck(&bad, &failure).unwrap(), Err(detail));
        assert_eq!(recheck(&Ctx::new(&spec), &failure).unwrap(), Ok(()));
    }
}
