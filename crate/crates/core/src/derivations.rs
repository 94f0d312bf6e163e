//! Derivations of ℬ(Γ, J): inner derivations, the outer derivations `d₁`,
//! `d̄₁`, `d₂`, `d_μ`, `∂_{t₁}`, `∂_{t₂}`, the derivation-law checker and
//! one-sided local-finiteness probes.

use std::fmt;

use serde::Serialize;

use crate::algebra::{AlgebraSpec, BasisIdx, Element, JKind, JSpec, MultiIndex};
use crate::lattice::{GroupHom, Vec2};
use crate::rat::Rat;
use crate::Error;

/// What a named-derivation constructor does when its side conditions fail.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Undefined {
    /// Return [`Error::UndefinedInThisAlgebra`].
    #[default]
    Reject,
    /// Return the zero derivation.
    Zero,
}

/// The formal combination `ad_u + d_μ + f₁d₁ + f₂d̄₁ + f₃d₂ + f₄∂_{t₂} + f₅∂_{t₁}`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Derivation {
    pub inner: Element,
    pub mu: Option<GroupHom>,
    /// Coefficient of `d₁`.
    pub f1: Rat,
    /// Coefficient of `d̄₁`.
    pub f2: Rat,
    /// Coefficient of `d₂`.
    pub f3: Rat,
    /// Coefficient of `∂_{t₂}`.
    pub f4: Rat,
    /// Coefficient of `∂_{t₁}`.
    pub f5: Rat,
}

/// Names of the outer derivations with side conditions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Named {
    D1,
    D1Bar,
    D2,
    Dt1,
    Dt2,
}

impl Named {
    pub fn name(self) -> &'static str {
        match self {
            Named::D1 => "d1",
            Named::D1Bar => "d1bar",
            Named::D2 => "d2",
            Named::Dt1 => "dt1",
            Named::Dt2 => "dt2",
        }
    }

    /// `Ok` when the derivation exists in this algebra, otherwise the reason.
    pub fn defined_in(self, spec: &AlgebraSpec) -> Result<(), String> {
        let j = spec.j();
        let need = |ok: bool, why: &str| if ok { Ok(()) } else { Err(why.to_string()) };
        match self {
            Named::D1 => {
                need(spec.has_sigma1(), "requires σ₁ ∈ Γ")?;
                need(j.j2 == JKind::Zero, "requires J₂ = {0}")
            }
            Named::D1Bar => {
                need(spec.has_sigma1(), "requires σ₁ ∈ Γ")?;
                need(j.j1 == JKind::Zero, "requires J₁ = {0}")
            }
            Named::D2 => {
                need(spec.has_sigma2(), "requires σ₂ ∈ Γ")?;
                need(j == JSpec::ZERO, "requires J = {0}")
            }
            Named::Dt1 => need(j.j1 == JKind::Nat, "requires J₁ = ℕ"),
            Named::Dt2 => need(j.j2 == JKind::Nat, "requires J₂ = ℕ"),
        }
    }

    /// Degree of the derivation in the Γ-grading.
    pub fn degree(self) -> Vec2 {
        match self {
            Named::D1 | Named::D1Bar => Vec2::sigma1(),
            Named::D2 => Vec2::sigma2(),
            Named::Dt1 | Named::Dt2 => Vec2::zero(),
        }
    }
}

impl Derivation {
    pub fn zero() -> Derivation {
        Derivation::default()
    }

    /// The inner derivation `ad_u`.
    pub fn ad(u: Element) -> Derivation {
        Derivation { inner: u, ..Derivation::default() }
    }

    pub fn named(spec: &AlgebraSpec, which: Named, mode: Undefined) -> Result<Derivation, Error> {
        if let Err(reason) = which.defined_in(spec) {
            return match mode {
                Undefined::Reject => {
                    Err(Error::UndefinedInThisAlgebra { name: which.name(), reason })
                }
                Undefined::Zero => Ok(Derivation::zero()),
            };
        }
        let mut d = Derivation::zero();
        let slot = match which {
            Named::D1 => &mut d.f1,
            Named::D1Bar => &mut d.f2,
            Named::D2 => &mut d.f3,
            Named::Dt2 => &mut d.f4,
            Named::Dt1 => &mut d.f5,
        };
        *slot = Rat::one();
        Ok(d)
    }

    /// `d₁: x^{β,j} ↦ −β₁x^{σ₁+β,j} − j₁x^{σ₁+β,j−1₁}`.
    pub fn d1(spec: &AlgebraSpec, mode: Undefined) -> Result<Derivation, Error> {
        Derivation::named(spec, Named::D1, mode)
    }

    /// `d̄₁: x^{β,j} ↦ (β₂−1)x^{σ₁+β,j} + j₂x^{σ₁+β,j−1₂}`.
    pub fn d1bar(spec: &AlgebraSpec, mode: Undefined) -> Result<Derivation, Error> {
        Derivation::named(spec, Named::D1Bar, mode)
    }

    /// `d₂: x^{β,0} ↦ −β₁x^{σ₂+β,0}`.
    pub fn d2(spec: &AlgebraSpec, mode: Undefined) -> Result<Derivation, Error> {
        Derivation::named(spec, Named::D2, mode)
    }

    /// `∂_{t₁}: x^{β,j} ↦ j₁x^{β,j−1₁}`.
    pub fn dt1(spec: &AlgebraSpec, mode: Undefined) -> Result<Derivation, Error> {
        Derivation::named(spec, Named::Dt1, mode)
    }

    /// `∂_{t₂}: x^{β,j} ↦ j₂x^{β,j−1₂}`.
    pub fn dt2(spec: &AlgebraSpec, mode: Undefined) -> Result<Derivation, Error> {
        Derivation::named(spec, Named::Dt2, mode)
    }

    /// `d_μ: x^{β,j} ↦ μ(β)x^{β,j}`.
    pub fn dmu(spec: &AlgebraSpec, mu: GroupHom) -> Result<Derivation, Error> {
        check_hom(spec, &mu)?;
        Ok(Derivation { mu: Some(mu), ..Derivation::default() })
    }

    pub fn is_zero(&self) -> bool {
        self.inner.is_zero()
            && self.mu.as_ref().is_none_or(GroupHom::is_zero)
            && [&self.f1, &self.f2, &self.f3, &self.f4, &self.f5].iter().all(|f| f.is_zero())
    }

    pub fn add(&self, other: &Derivation) -> Derivation {
        let mu = match (&self.mu, &other.mu) {
            (Some(a), Some(b)) => Some(a.add(b)),
            (a, b) => a.clone().or_else(|| b.clone()),
        };
        Derivation {
            inner: &self.inner + &other.inner,
            mu,
            f1: &self.f1 + &other.f1,
            f2: &self.f2 + &other.f2,
            f3: &self.f3 + &other.f3,
            f4: &self.f4 + &other.f4,
            f5: &self.f5 + &other.f5,
        }
    }

    pub fn scale(&self, k: &Rat) -> Derivation {
        Derivation {
            inner: self.inner.scale(k),
            mu: self.mu.as_ref().map(|m| m.scale(k)),
            f1: &self.f1 * k,
            f2: &self.f2 * k,
            f3: &self.f3 * k,
            f4: &self.f4 * k,
            f5: &self.f5 * k,
        }
    }

    /// Checks that every nonzero part is defined in `spec`.
    pub fn validate(&self, spec: &AlgebraSpec) -> Result<(), Error> {
        spec.check_element(&self.inner)?;
        if let Some(mu) = &self.mu {
            check_hom(spec, mu)?;
        }
        let parts = [
            (&self.f1, Named::D1),
            (&self.f2, Named::D1Bar),
            (&self.f3, Named::D2),
            (&self.f4, Named::Dt2),
            (&self.f5, Named::Dt1),
        ];
        for (f, which) in parts {
            if !f.is_zero() {
                which
                    .defined_in(spec)
                    .map_err(|reason| Error::UndefinedInThisAlgebra { name: which.name(), reason })?;
            }
        }
        Ok(())
    }

    /// Applies the derivation after validating both operands.
    pub fn apply(&self, spec: &AlgebraSpec, v: &Element) -> Result<Element, Error> {
        self.validate(spec)?;
        spec.check_element(v)?;
        Ok(self.act(spec, v))
    }

    /// Applies the derivation without validation.
    pub fn act(&self, spec: &AlgebraSpec, v: &Element) -> Element {
        let mut out = if self.inner.is_zero() {
            Element::zero()
        } else {
            spec.bracket(&self.inner, v)
        };
        let j = spec.j();
        for (b, c) in v.terms() {
            let (b1, b2) = (&b.alpha.c1, &b.alpha.c2);
            let (j1, j2) = (b.idx.i1, b.idx.i2);
            if let Some(mu) = &self.mu {
                if let Ok(val) = mu.eval(spec.gamma(), &b.alpha) {
                    out.add_term(b.clone(), &val * c);
                }
            }
            if !self.f1.is_zero() {
                let w = &self.f1 * c;
                let deg = Vec2::sigma1().add(&b.alpha);
                push(j, &mut out, &deg, j1 as i64, j2 as i64, -&(b1 * &w));
                push(j, &mut out, &deg, j1 as i64 - 1, j2 as i64, -&(&Rat::from(j1) * &w));
            }
            if !self.f2.is_zero() {
                let w = &self.f2 * c;
                let deg = Vec2::sigma1().add(&b.alpha);
                push(j, &mut out, &deg, j1 as i64, j2 as i64, &(b2 - &Rat::one()) * &w);
                push(j, &mut out, &deg, j1 as i64, j2 as i64 - 1, &Rat::from(j2) * &w);
            }
            if !self.f3.is_zero() && b.idx == MultiIndex::ZERO {
                let deg = Vec2::sigma2().add(&b.alpha);
                push(j, &mut out, &deg, 0, 0, -&(&(b1 * &self.f3) * c));
            }
            if !self.f4.is_zero() {
                push(j, &mut out, &b.alpha, j1 as i64, j2 as i64 - 1, &(&Rat::from(j2) * &self.f4) * c);
            }
            if !self.f5.is_zero() {
                push(j, &mut out, &b.alpha, j1 as i64 - 1, j2 as i64, &(&Rat::from(j1) * &self.f5) * c);
            }
        }
        spec.quotient(&out)
    }
}

fn push(j: JSpec, out: &mut Element, alpha: &Vec2, i1: i64, i2: i64, coeff: Rat) {
    if !coeff.is_zero() && j.admits(i1, i2) {
        out.add_term(BasisIdx::x(alpha.clone(), i1 as u32, i2 as u32), coeff);
    }
}

fn check_hom(spec: &AlgebraSpec, mu: &GroupHom) -> Result<(), Error> {
    if mu.values.len() != spec.gamma().rank() {
        return Err(Error::SpecMismatch(format!(
            "homomorphism has {} values but Γ has rank {}",
            mu.values.len(),
            spec.gamma().rank()
        )));
    }
    Ok(())
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if !self.inner.is_zero() {
            parts.push(format!("ad({})", self.inner));
        }
        if let Some(mu) = self.mu.as_ref().filter(|m| !m.is_zero()) {
            let vals: Vec<String> = mu.values.iter().map(|v| v.to_string()).collect();
            parts.push(format!("dmu({})", vals.join(",")));
        }
        let named = [
            (&self.f1, "d1"),
            (&self.f2, "d1bar"),
            (&self.f3, "d2"),
            (&self.f4, "dt2"),
            (&self.f5, "dt1"),
        ];
        for (c, name) in named {
            if c.is_one() {
                parts.push(name.to_string());
            } else if !c.is_zero() {
                parts.push(format!("{c}*{name}"));
            }
        }
        if parts.is_empty() {
            return f.write_str("0");
        }
        f.write_str(&parts.join(" + "))
    }
}

/// One violation of `D[u,v] = [Du,v] + [u,Dv]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LawFailure {
    pub u: String,
    pub v: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LawReport {
    pub checked: usize,
    pub failures: Vec<LawFailure>,
}

impl LawReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks the derivation law for an arbitrary linear operator on ℬ.
pub fn check_derivation_law<F>(spec: &AlgebraSpec, op: F, pairs: &[(Element, Element)]) -> LawReport
where
    F: Fn(&Element) -> Element,
{
    let mut report = LawReport::default();
    for (u, v) in pairs {
        report.checked += 1;
        let lhs = op(&spec.bracket(u, v));
        let rhs = &spec.bracket(&op(u), v) + &spec.bracket(u, &op(v));
        if lhs != rhs {
            report.failures.push(LawFailure {
                u: u.to_string(),
                v: v.to_string(),
                lhs: lhs.to_string(),
                rhs: rhs.to_string(),
            });
        }
    }
    report
}

/// True iff `op(x^{β,j}) ∈ ℬ_{α+β}` for every symbol of `window`.
pub fn is_homogeneous<F>(op: F, alpha: &Vec2, window: &[BasisIdx]) -> bool
where
    F: Fn(&Element) -> Element,
{
    window.iter().all(|b| {
        let target = b.alpha.add(alpha);
        op(&Element::basis(b.clone())).support().all(|t| t.alpha == target)
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Nilpotence {
    /// Least `k` with `Dᵏv = 0` (1 for `v = 0`).
    Degree(u32),
    Exceeded,
}

pub fn nilpotence_degree<F>(op: F, v: &Element, cap: u32) -> Nilpotence
where
    F: Fn(&Element) -> Element,
{
    let mut cur = v.clone();
    for k in 1..=cap {
        cur = op(&cur);
        if cur.is_zero() {
            return Nilpotence::Degree(k);
        }
    }
    Nilpotence::Exceeded
}

/// One iterate in a growth witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GrowthStep {
    pub k: u32,
    pub degree: Vec2,
    pub leading: BasisIdx,
    pub coeff: Rat,
    pub max_level: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Locality {
    /// `Dᵏv` is the first iterate in the span of the earlier ones; the span of
    /// the orbit has dimension `k`.
    ClosureDim(u32),
    /// All iterates up to the cap are independent and their extreme degree or
    /// level escalates strictly at every step.
    GrowthWitness(Vec<GrowthStep>),
    /// Neither pattern was observed within the cap.
    Inconclusive,
}

/// Sparse row echelon over ℚ; rows keyed by their largest basis symbol.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: std::collections::BTreeMap<BasisIdx, Element>,
}

impl Echelon {
    pub fn new() -> Echelon {
        Echelon::default()
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the stored rows; zero iff `v` lies in their span.
    pub fn reduce(&self, v: &Element) -> Element {
        let mut cur = v.clone();
        loop {
            let hit = cur
                .terms()
                .rev()
                .find(|(b, _)| self.rows.contains_key(*b))
                .map(|(b, c)| (b.clone(), c.clone()));
            match hit {
                None => return cur,
                Some((b, c)) => {
                    let row = &self.rows[&b];
                    cur = &cur - &row.scale(&c);
                }
            }
        }
    }

    /// Inserts `v`; returns false when it was already in the span.
    pub fn insert(&mut self, v: &Element) -> bool {
        let r = self.reduce(v);
        let Some((pivot, c)) = r.terms().next_back().map(|(b, c)| (b.clone(), c.clone())) else {
            return false;
        };
        let r = r.scale(&c.recip());
        // keep rows fully reduced at their pivots so reduction terminates
        for row in self.rows.values_mut() {
            let k = row.coeff(&pivot);
            if !k.is_zero() {
                *row = &*row - &r.scale(&k);
            }
        }
        self.rows.insert(pivot, r);
        true
    }

    pub fn contains(&self, v: &Element) -> bool {
        self.reduce(v).is_zero()
    }
}

/// One-sided local-finiteness probe for `D` on `v`.
pub fn local_finiteness_probe<F>(op: F, v: &Element, cap: u32) -> Locality
where
    F: Fn(&Element) -> Element,
{
    if v.is_zero() {
        return Locality::ClosureDim(0);
    }
    let mut span = Echelon::new();
    span.insert(v);
    let mut iterates = vec![v.clone()];
    let mut cur = v.clone();
    for k in 1..=cap {
        cur = op(&cur);
        if !span.insert(&cur) {
            return Locality::ClosureDim(k);
        }
        iterates.push(cur.clone());
    }
    growth_trace(&iterates).map_or(Locality::Inconclusive, Locality::GrowthWitness)
}

fn growth_trace(iterates: &[Element]) -> Option<Vec<GrowthStep>> {
    let max_deg: Vec<Vec2> = iterates.iter().map(|e| e.degrees().last().cloned().unwrap()).collect();
    let min_deg: Vec<Vec2> = iterates.iter().map(|e| e.degrees()[0].clone()).collect();
    let levels: Vec<u32> = iterates.iter().map(|e| e.max_level().unwrap()).collect();
    let rising = max_deg.windows(2).all(|w| w[0] < w[1]);
    let falling = min_deg.windows(2).all(|w| w[0] > w[1]);
    let deepening = levels.windows(2).all(|w| w[0] < w[1]);
    if !(rising || falling || deepening) {
        return None;
    }
    let steps = iterates
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, e)| {
            let degree = if rising || !falling { max_deg[k].clone() } else { min_deg[k].clone() };
            let (leading, coeff) = e.leading_term(&degree).expect("degree taken from support");
            GrowthStep { k: k as u32, degree, leading, coeff, max_level: levels[k] }
        })
        .collect();
    Some(steps)
}

/// Hom* as a family of homomorphisms: the dual basis of Γ, without the first
/// vector when `π₁(Γ) ≠ 0` and `J₁ = {0}` (then `d_{π₁} = ad_1` is inner).
pub fn hom_star_basis(spec: &AlgebraSpec) -> Vec<GroupHom> {
    let rank = spec.gamma().rank();
    let skip_first = !spec.gamma().proj_generator(1).is_zero() && spec.j().j1 == JKind::Zero;
    (0..rank)
        .filter(|&i| !(skip_first && i == 0))
        .map(|i| GroupHom::new((0..rank).map(|k| if k == i { Rat::one() } else { Rat::zero() }).collect()))
        .collect()
}

/// A generating family of the degree-α component of Der ℬ, restricted to
/// inner parts from the level-`l` window.
pub fn der_component_generators(
    spec: &AlgebraSpec,
    alpha: &Vec2,
    l: u32,
) -> Result<Vec<Derivation>, Error> {
    if !spec.gamma().contains(alpha) {
        return Err(Error::AlphaNotInGamma(alpha.clone()));
    }
    let mut out: Vec<Derivation> = spec
        .window_indices(l)
        .into_iter()
        .map(|m| BasisIdx::new(alpha.clone(), m))
        .filter(|b| !spec.is_killed(b))
        .map(|b| Derivation::ad(Element::basis(b)))
        .collect();
    let named = |w| Derivation::named(spec, w, Undefined::Reject).ok();
    if alpha.is_zero() {
        for mu in hom_star_basis(spec) {
            out.push(Derivation::dmu(spec, mu)?);
        }
        out.extend(named(Named::Dt2));
    }
    if alpha == &Vec2::sigma1() {
        out.extend(named(Named::D1));
        out.extend(named(Named::D1Bar));
    }
    if alpha == &Vec2::sigma2() {
        out.extend(named(Named::D2));
    }
    Ok(out)
}
