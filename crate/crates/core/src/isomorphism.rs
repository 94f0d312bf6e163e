//! Isomorphisms between algebras of the family.
//!
//! ℬ(Γ, J) ≅ ℬ(Γ′, J′) iff `J = J′` and `φ: (β₁, β₂) ↦ (aβ₁, β₂ + bβ₁)` maps Γ
//! onto Γ′ for some `a ≠ 0`, with `b = 0` forced when `J = ℕ×{0}`; when
//! `π₁(Γ) = 0` the algebras are isomorphic only if `(Γ, J) = (Γ′, J′)`. The
//! explicit isomorphism sends `x^{β,j}` to `a⁻¹x′^{φ(β)}(at′₁ + bt′₂)^{j₁}(t′₂)^{j₂}`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraSpec, BasisIdx, Element, JSpec};
use crate::derivations::LawFailure;
use crate::lattice::{map_lattice, CanonicalDescriptor, Echelon, GroupTag, Lattice, ShearMap, Vec2};
use crate::rat::{binomial, Rat};
use crate::Error;

/// Parameters `(a, b)` of φ.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IsoParams {
    pub a: Rat,
    pub b: Rat,
}

impl IsoParams {
    pub fn new(a: Rat, b: Rat) -> Result<IsoParams, Error> {
        if a.is_zero() {
            return Err(Error::Singular);
        }
        Ok(IsoParams { a, b })
    }

    pub fn identity() -> IsoParams {
        IsoParams { a: Rat::one(), b: Rat::zero() }
    }

    pub fn map(&self) -> ShearMap {
        ShearMap { a: self.a.clone(), b: self.b.clone() }
    }

    /// Parameters of `φ_self ∘ φ_other`.
    pub fn compose(&self, other: &IsoParams) -> IsoParams {
        let m = self.map().compose(&other.map());
        IsoParams { a: m.a, b: m.b }
    }
}

impl fmt::Display for IsoParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a={} b={}", self.a, self.b)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NotIsoReason {
    JMismatch,
    Pi1ZeroRigidity,
    LatticeInvariantMismatch,
}

impl fmt::Display for NotIsoReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NotIsoReason::JMismatch => "j_mismatch",
            NotIsoReason::Pi1ZeroRigidity => "pi1_zero_rigidity",
            NotIsoReason::LatticeInvariantMismatch => "lattice_invariant_mismatch",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum IsoVerdict {
    Found { a: Rat, b: Rat },
    NotIsomorphic { reason: NotIsoReason },
}

impl IsoVerdict {
    pub fn params(&self) -> Option<IsoParams> {
        match self {
            IsoVerdict::Found { a, b } => Some(IsoParams { a: a.clone(), b: b.clone() }),
            IsoVerdict::NotIsomorphic { .. } => None,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, IsoVerdict::Found { .. })
    }
}

impl fmt::Display for IsoVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IsoVerdict::Found { a, b } => write!(f, "isomorphic a={a} b={b}"),
            IsoVerdict::NotIsomorphic { reason } => write!(f, "not isomorphic ({reason})"),
        }
    }
}

/// `φ(v) = (a·v₁, v₂ + b·v₁)`.
pub fn phi_apply(params: &IsoParams, v: &Vec2) -> Vec2 {
    params.map().apply(v)
}

/// Whether `b` must vanish for this J.
pub fn shear_forbidden(j: JSpec) -> bool {
    j == JSpec::NAT_ZERO
}

/// True iff the parameters define a group isomorphism `Γ_A ≅ Γ_B` admissible
/// for the common J.
pub fn phi_check(params: &IsoParams, a: &AlgebraSpec, b: &AlgebraSpec) -> bool {
    if params.a.is_zero() || a.j() != b.j() {
        return false;
    }
    if shear_forbidden(a.j()) && !params.b.is_zero() {
        return false;
    }
    let fwd = params.map();
    let inv = fwd.inverse();
    a.gamma().basis().iter().all(|v| b.gamma().contains(&fwd.apply(v)))
        && b.gamma().basis().iter().all(|v| a.gamma().contains(&inv.apply(v)))
}

/// Image of a single symbol under ψ, in 𝒜₂ of the target.
fn psi_basis(params: &IsoParams, j: JSpec, x: &BasisIdx, out: &mut Element, w: &Rat) {
    let alpha = phi_apply(params, &x.alpha);
    let (j1, j2) = (x.idx.i1, x.idx.i2);
    let inv = params.a.recip();
    for k in 0..=j1 {
        let c = &(&(&binomial(j1, k) * &params.a.pow(k)) * &params.b.pow(j1 - k)) * &inv;
        let (i1, i2) = (k, j1 - k + j2);
        if !c.is_zero() && j.admits(i1 as i64, i2 as i64) {
            out.add_term(BasisIdx::x(alpha.clone(), i1, i2), &c * w);
        }
    }
}

/// ψ without the φ check; the caller guarantees the specs match.
pub fn psi_raw(params: &IsoParams, target: &AlgebraSpec, u: &Element) -> Element {
    let mut out = Element::zero();
    for (x, c) in u.terms() {
        psi_basis(params, target.j(), x, &mut out, c);
    }
    target.quotient(&out)
}

/// The explicit isomorphism ψ: ℬ_A → ℬ_B.
pub fn psi_apply(
    params: &IsoParams,
    a: &AlgebraSpec,
    b: &AlgebraSpec,
    u: &Element,
) -> Result<Element, Error> {
    if !phi_check(params, a, b) {
        return Err(Error::PhiCheckFailed);
    }
    Ok(psi_raw(params, b, u))
}

/// Outcome of [`psi_check`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PsiReport {
    pub pairs: usize,
    pub bracket_failures: Vec<LawFailure>,
    pub grading_failures: Vec<String>,
    pub triangularity_failures: Vec<String>,
}

impl PsiReport {
    pub fn passed(&self) -> bool {
        self.bracket_failures.is_empty()
            && self.grading_failures.is_empty()
            && self.triangularity_failures.is_empty()
    }
}

/// Verifies `[ψu, ψv] = ψ[u, v]` on `pairs`, grading preservation on the
/// pair operands, and triangularity of ψ on the symbols of `window`.
pub fn psi_check(
    params: &IsoParams,
    a: &AlgebraSpec,
    b: &AlgebraSpec,
    pairs: &[(Element, Element)],
    window: &[BasisIdx],
) -> Result<PsiReport, Error> {
    if !phi_check(params, a, b) {
        return Err(Error::PhiCheckFailed);
    }
    Ok(psi_check_with(params, a, b, |u| psi_raw(params, b, u), pairs, window))
}

/// [`psi_check`] for an arbitrary candidate map.
pub fn psi_check_with<F>(
    params: &IsoParams,
    a: &AlgebraSpec,
    b: &AlgebraSpec,
    psi: F,
    pairs: &[(Element, Element)],
    window: &[BasisIdx],
) -> PsiReport
where
    F: Fn(&Element) -> Element,
{
    let mut report = PsiReport { pairs: pairs.len(), ..PsiReport::default() };
    for (u, v) in pairs {
        let lhs = b.bracket(&psi(u), &psi(v));
        let rhs = psi(&a.bracket(u, v));
        if lhs != rhs {
            report.bracket_failures.push(LawFailure {
                u: u.to_string(),
                v: v.to_string(),
                lhs: lhs.to_string(),
                rhs: rhs.to_string(),
            });
        }
        for w in [u, v] {
            for deg in w.degrees() {
                let image = psi(w).grade_component(&phi_apply(params, &deg));
                if image != psi(&w.grade_component(&deg)) {
                    report.grading_failures.push(format!("{w} at degree {deg}"));
                }
            }
        }
    }
    for x in window {
        let image = psi(&Element::basis(x.clone()));
        let target = BasisIdx::new(phi_apply(params, &x.alpha), x.idx);
        let diag = params.a.pow(x.idx.i1) / &params.a;
        let ok = image.coeff(&target) == diag
            && image.support().all(|t| t.alpha == target.alpha && (t == &target || t.idx < x.idx));
        if !ok {
            report.triangularity_failures.push(format!("{x} ↦ {image}"));
        }
    }
    report
}

/// Exact isomorphism test for two valid specs.
pub fn decide_iso(a: &AlgebraSpec, b: &AlgebraSpec) -> Result<IsoVerdict, Error> {
    if a.witt_degenerate() || b.witt_degenerate() {
        return Err(Error::WittDegenerate);
    }
    let no = |reason| Ok(IsoVerdict::NotIsomorphic { reason });
    if a.j() != b.j() {
        return no(NotIsoReason::JMismatch);
    }
    let (ga, gb) = (a.gamma(), b.gamma());
    let pi1_a = ga.proj_generator(1);
    let pi1_b = gb.proj_generator(1);
    if pi1_a.is_zero() || pi1_b.is_zero() {
        if pi1_a.is_zero() && pi1_b.is_zero() && ga == gb {
            return found(IsoParams::identity(), a, b);
        }
        return no(NotIsoReason::Pi1ZeroRigidity);
    }
    let shear_ok = !shear_forbidden(a.j());
    let candidates: Vec<IsoParams> = match (ga.echelon(), gb.echelon()) {
        (Echelon::Slanted { c, s }, Echelon::Slanted { c: c2, s: s2 }) => {
            pivot_candidates(c, s, c2, s2, shear_ok)
        }
        (Echelon::Full { c, s, h }, Echelon::Full { c: c2, s: s2, h: h2 }) if h == h2 => {
            pivot_candidates(c, s, c2, s2, shear_ok)
        }
        _ => vec![],
    };
    for p in candidates {
        let image = map_lattice(&p.map(), ga)?;
        if &image == gb {
            return found(p, a, b);
        }
    }
    no(NotIsoReason::LatticeInvariantMismatch)
}

/// Maps sending `(c, s)` to `(c′, s′)` (shear allowed) or `(±c′, s)` (shear forbidden).
fn pivot_candidates(c: &Rat, s: &Rat, c2: &Rat, s2: &Rat, shear_ok: bool) -> Vec<IsoParams> {
    let ratio = c2 / c;
    if shear_ok {
        vec![IsoParams { a: ratio, b: &(s2 - s) / c }]
    } else {
        vec![IsoParams { a: ratio.clone(), b: Rat::zero() }, IsoParams { a: -ratio, b: Rat::zero() }]
    }
}

fn found(p: IsoParams, a: &AlgebraSpec, b: &AlgebraSpec) -> Result<IsoVerdict, Error> {
    if !phi_check(&p, a, b) {
        return Err(Error::PhiCheckFailed);
    }
    Ok(IsoVerdict::Found { a: p.a, b: p.b })
}

/// A point of the structure space: the J type and the orbit of Γ.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ModuliKey {
    pub i: u8,
    pub descriptor: CanonicalDescriptor,
}

impl fmt::Display for ModuliKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.i, self.descriptor)
    }
}

pub fn moduli_key(spec: &AlgebraSpec) -> Result<ModuliKey, Error> {
    if spec.witt_degenerate() {
        return Err(Error::WittDegenerate);
    }
    let (i, group) = match spec.j() {
        JSpec::ZERO => (1, GroupTag::G1),
        JSpec::NAT_ZERO => (2, GroupTag::G2),
        JSpec::ZERO_NAT => (3, GroupTag::G1),
        _ => (4, GroupTag::G1),
    };
    Ok(ModuliKey { i, descriptor: spec.gamma().canonical_form(group) })
}

/// The spec `(φ(Γ), J)`.
pub fn transport(params: &IsoParams, spec: &AlgebraSpec) -> Result<AlgebraSpec, Error> {
    let gamma: Lattice = map_lattice(&params.map(), spec.gamma())?;
    AlgebraSpec::new(gamma, spec.j())
}
