//! The algebras 𝒜₂(Γ, J) and ℬ(Γ, J).
//!
//! 𝒜₂ has basis `x^{α,i}` with `α ∈ Γ`, `i ∈ J = J₁×J₂`, product
//! `x^{α,i}·x^{β,j} = x^{α+β,i+j}` and the commuting derivations
//! `∂_p(x^{α,i}) = α_p x^{α,i} + i_p x^{α,i−1_p}`. The Lie bracket
//! `[u,v] = ∂₁u·∂₂v − ∂₁v·∂₂u + u·∂₁v − v·∂₁u` makes `x^{σ₁,0}` central, and
//! ℬ is the quotient by its span. When `J = 0` and `σ₂ ∈ Γ` we work in the
//! simple part ℬ⁽¹⁾, spanned by the degrees outside `{σ₁, σ₂}`.
//!
//! A single [`Element`] type carries both views; functions taking a
//! [`JSpec`] work in 𝒜₂, methods on [`AlgebraSpec`] work in ℬ.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::lattice::{Lattice, Vec2};
use crate::rat::Rat;
use crate::Error;

/// One factor of J: `{0}` or ℕ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum JKind {
    #[serde(rename = "0")]
    Zero,
    #[serde(rename = "N")]
    Nat,
}

impl JKind {
    pub fn is_nat(self) -> bool {
        self == JKind::Nat
    }
}

impl fmt::Display for JKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            JKind::Zero => "0",
            JKind::Nat => "N",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct JSpec {
    pub j1: JKind,
    pub j2: JKind,
}

impl JSpec {
    pub const ZERO: JSpec = JSpec { j1: JKind::Zero, j2: JKind::Zero };
    pub const NAT_ZERO: JSpec = JSpec { j1: JKind::Nat, j2: JKind::Zero };
    pub const ZERO_NAT: JSpec = JSpec { j1: JKind::Zero, j2: JKind::Nat };
    pub const NAT_NAT: JSpec = JSpec { j1: JKind::Nat, j2: JKind::Nat };
    pub const ALL: [JSpec; 4] = [JSpec::ZERO, JSpec::NAT_ZERO, JSpec::ZERO_NAT, JSpec::NAT_NAT];

    pub fn new(j1: JKind, j2: JKind) -> JSpec {
        JSpec { j1, j2 }
    }

    pub fn kind(&self, p: u8) -> JKind {
        match p {
            1 => self.j1,
            2 => self.j2,
            _ => panic!("J factor index must be 1 or 2, got {p}"),
        }
    }

    pub fn admits(&self, i1: i64, i2: i64) -> bool {
        i1 >= 0 && i2 >= 0 && (i1 == 0 || self.j1.is_nat()) && (i2 == 0 || self.j2.is_nat())
    }
}

impl fmt::Display for JSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.j1, self.j2)
    }
}

/// A multi-index `i = (i₁, i₂) ∈ ℕ²`.
///
/// Ordered by level `|i| = i₁ + i₂`, then by `i₁`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct MultiIndex {
    pub i1: u32,
    pub i2: u32,
}

impl MultiIndex {
    pub const ZERO: MultiIndex = MultiIndex { i1: 0, i2: 0 };

    pub fn new(i1: u32, i2: u32) -> MultiIndex {
        MultiIndex { i1, i2 }
    }

    pub fn level(&self) -> u32 {
        self.i1 + self.i2
    }

    pub fn get(&self, p: u8) -> u32 {
        match p {
            1 => self.i1,
            2 => self.i2,
            _ => panic!("index component must be 1 or 2, got {p}"),
        }
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        index_cmp(self, other)
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// The total order on J: `i > j` if `|i| > |j|`, or `|i| = |j|` and `i₁ > j₁`.
pub fn index_cmp(i: &MultiIndex, j: &MultiIndex) -> Ordering {
    i.level().cmp(&j.level()).then(i.i1.cmp(&j.i1))
}

/// A basis symbol `x^{α,i}`.
///
/// Sorted by `α` ascending, then by multi-index descending, which is the
/// printing order of elements.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BasisIdx {
    pub alpha: Vec2,
    pub idx: MultiIndex,
}

impl BasisIdx {
    pub fn new(alpha: Vec2, idx: MultiIndex) -> BasisIdx {
        BasisIdx { alpha, idx }
    }

    /// `x^{α,(i₁,i₂)}`.
    pub fn x(alpha: Vec2, i1: u32, i2: u32) -> BasisIdx {
        BasisIdx { alpha, idx: MultiIndex::new(i1, i2) }
    }
}

impl Ord for BasisIdx {
    fn cmp(&self, other: &Self) -> Ordering {
        self.alpha.cmp(&other.alpha).then_with(|| index_cmp(&other.idx, &self.idx))
    }
}

impl PartialOrd for BasisIdx {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BasisIdx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x[{},{};{},{}]", self.alpha.c1, self.alpha.c2, self.idx.i1, self.idx.i2)
    }
}

impl fmt::Debug for BasisIdx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A finite linear combination of basis symbols with nonzero rational
/// coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Element {
    terms: BTreeMap<BasisIdx, Rat>,
}

impl Element {
    pub fn zero() -> Element {
        Element::default()
    }

    pub fn basis(b: BasisIdx) -> Element {
        Element::term(b, Rat::one())
    }

    pub fn term(b: BasisIdx, coeff: Rat) -> Element {
        let mut e = Element::zero();
        e.add_term(b, coeff);
        e
    }

    /// `c·x^{α,(i₁,i₂)}`.
    pub fn monomial(alpha: Vec2, i1: u32, i2: u32, coeff: Rat) -> Element {
        Element::term(BasisIdx::x(alpha, i1, i2), coeff)
    }

    /// The identity `1 = x^{0,0}` of 𝒜₂.
    pub fn one() -> Element {
        Element::basis(BasisIdx::x(Vec2::zero(), 0, 0))
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (BasisIdx, Rat)>) -> Element {
        let mut e = Element::zero();
        for (b, c) in terms {
            e.add_term(b, c);
        }
        e
    }

    pub fn add_term(&mut self, b: BasisIdx, coeff: Rat) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(b) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                *slot.get_mut() += &coeff;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&BasisIdx, &Rat)> + '_ {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &BasisIdx> + '_ {
        self.terms.keys()
    }

    pub fn coeff(&self, b: &BasisIdx) -> Rat {
        self.terms.get(b).cloned().unwrap_or_default()
    }

    pub fn into_terms(self) -> BTreeMap<BasisIdx, Rat> {
        self.terms
    }

    pub fn scale(&self, k: &Rat) -> Element {
        if k.is_zero() {
            return Element::zero();
        }
        Element { terms: self.terms.iter().map(|(b, c)| (b.clone(), c * k)).collect() }
    }

    pub fn retain(&mut self, mut keep: impl FnMut(&BasisIdx) -> bool) {
        self.terms.retain(|b, _| keep(b));
    }

    /// The sub-sum of terms of degree `alpha`.
    pub fn grade_component(&self, alpha: &Vec2) -> Element {
        Element {
            terms: self
                .terms
                .iter()
                .filter(|(b, _)| &b.alpha == alpha)
                .map(|(b, c)| (b.clone(), c.clone()))
                .collect(),
        }
    }

    /// Distinct degrees present, ascending.
    pub fn degrees(&self) -> Vec<Vec2> {
        let mut out: Vec<Vec2> = Vec::new();
        for b in self.terms.keys() {
            if out.last() != Some(&b.alpha) {
                out.push(b.alpha.clone());
            }
        }
        out
    }

    /// The term of degree `alpha` with the largest multi-index.
    pub fn leading_term(&self, alpha: &Vec2) -> Option<(BasisIdx, Rat)> {
        // within one degree the map order is descending in the index
        self.terms
            .iter()
            .find(|(b, _)| &b.alpha == alpha)
            .map(|(b, c)| (b.clone(), c.clone()))
    }

    /// Largest multi-index level among the terms, if any.
    pub fn max_level(&self) -> Option<u32> {
        self.terms.keys().map(|b| b.idx.level()).max()
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, (b, c)) in self.terms.iter().enumerate() {
            let mag = c.abs();
            match (n, c.is_negative()) {
                (0, false) => {}
                (0, true) => f.write_str("-")?,
                (_, false) => f.write_str(" + ")?,
                (_, true) => f.write_str(" - ")?,
            }
            if !mag.is_one() {
                write!(f, "{mag} ")?;
            }
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl AddAssign<&Element> for Element {
    fn add_assign(&mut self, rhs: &Element) {
        for (b, c) in &rhs.terms {
            self.add_term(b.clone(), c.clone());
        }
    }
}

impl Add for &Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        let mut out = self.clone();
        for (b, c) in &rhs.terms {
            out.add_term(b.clone(), -c);
        }
        out
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        Element { terms: self.terms.iter().map(|(b, c)| (b.clone(), -c)).collect() }
    }
}

impl std::iter::Sum for Element {
    fn sum<I: Iterator<Item = Element>>(iter: I) -> Element {
        iter.fold(Element::zero(), |mut acc, e| {
            acc += &e;
            acc
        })
    }
}

/// Adds `coeff·x^{alpha,(i1,i2)}` unless the symbol is undefined in `J`
/// (negative component, or positive component over a `{0}` factor).
fn emit(j: JSpec, out: &mut Element, alpha: &Vec2, i1: i64, i2: i64, coeff: Rat) {
    if coeff.is_zero() || !j.admits(i1, i2) {
        return;
    }
    out.add_term(BasisIdx::x(alpha.clone(), i1 as u32, i2 as u32), coeff);
}

/// The associative product of 𝒜₂.
pub fn assoc_mul(j: JSpec, u: &Element, v: &Element) -> Element {
    let mut out = Element::zero();
    for (a, ca) in u.terms() {
        for (b, cb) in v.terms() {
            let alpha = a.alpha.add(&b.alpha);
            let i1 = (a.idx.i1 + b.idx.i1) as i64;
            let i2 = (a.idx.i2 + b.idx.i2) as i64;
            emit(j, &mut out, &alpha, i1, i2, ca * cb);
        }
    }
    out
}

/// `∂_p` on 𝒜₂.
pub fn partial(u: &Element, p: u8) -> Element {
    let mut out = Element::zero();
    for (b, c) in u.terms() {
        out.add_term(b.clone(), b.alpha.coord(p) * c);
        let ip = b.idx.get(p);
        if ip > 0 {
            let mut idx = b.idx;
            match p {
                1 => idx.i1 -= 1,
                _ => idx.i2 -= 1,
            }
            out.add_term(BasisIdx::new(b.alpha.clone(), idx), &Rat::from(ip) * c);
        }
    }
    out
}

/// `u ⊙ v = ∂₁(u)·(∂₂(v) − v)`.
pub fn odot(j: JSpec, u: &Element, v: &Element) -> Element {
    assoc_mul(j, &partial(u, 1), &(&partial(v, 2) - v))
}

/// Bracket of two basis symbols in 𝒜₂, accumulated into `out` with weight `w`.
fn bracket_basis(j: JSpec, a: &BasisIdx, b: &BasisIdx, w: &Rat, out: &mut Element) {
    let one = Rat::one();
    let (a1, a2) = (&a.alpha.c1, &a.alpha.c2);
    let (b1, b2) = (&b.alpha.c1, &b.alpha.c2);
    let (i1, i2) = (a.idx.i1 as i64, a.idx.i2 as i64);
    let (j1, j2) = (b.idx.i1 as i64, b.idx.i2 as i64);
    let a2m = a2 - &one;
    let b2m = b2 - &one;
    let gamma = a.alpha.add(&b.alpha);
    let (s1, s2) = (i1 + j1, i2 + j2);

    let c0 = &(a1 * &b2m) - &(b1 * &a2m);
    emit(j, out, &gamma, s1, s2, &c0 * w);
    if s1 > 0 {
        let c1 = &(&Rat::from_int(i1) * &b2m) - &(&Rat::from_int(j1) * &a2m);
        emit(j, out, &gamma, s1 - 1, s2, &c1 * w);
    }
    if s2 > 0 {
        let c2 = &(a1 * &Rat::from_int(j2)) - &(b1 * &Rat::from_int(i2));
        emit(j, out, &gamma, s1, s2 - 1, &c2 * w);
    }
    let c3 = i1 * j2 - j1 * i2;
    if c3 != 0 {
        emit(j, out, &gamma, s1 - 1, s2 - 1, &Rat::from_int(c3) * w);
    }
}

/// The Lie bracket on 𝒜₂, before passing to the quotient.
pub fn raw_bracket(j: JSpec, u: &Element, v: &Element) -> Element {
    let mut out = Element::zero();
    for (a, ca) in u.terms() {
        for (b, cb) in v.terms() {
            bracket_basis(j, a, b, &(ca * cb), &mut out);
        }
    }
    out
}

/// Γ together with J and the flags derived from them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraSpec {
    gamma: Lattice,
    j: JSpec,
    has_sigma1: bool,
    has_sigma2: bool,
    simple_part: bool,
    witt_degenerate: bool,
}

impl AlgebraSpec {
    /// Validates `π_p(Γ) ≠ {0}` whenever `J_p = {0}` and derives the flags.
    ///
    /// The case `π₂(Γ) = J₂ = {0}` is accepted and flagged as Witt-degenerate.
    pub fn new(gamma: Lattice, j: JSpec) -> Result<AlgebraSpec, Error> {
        let pi1 = !gamma.proj_generator(1).is_zero();
        let pi2 = !gamma.proj_generator(2).is_zero();
        if !pi1 && j.j1 == JKind::Zero {
            return Err(Error::Condition11Violated(1));
        }
        Ok(AlgebraSpec::unchecked(gamma, j, pi2))
    }

    fn unchecked(gamma: Lattice, j: JSpec, pi2: bool) -> AlgebraSpec {
        let has_sigma1 = gamma.contains(&Vec2::sigma1());
        let has_sigma2 = gamma.contains(&Vec2::sigma2());
        AlgebraSpec {
            simple_part: j == JSpec::ZERO && has_sigma2,
            witt_degenerate: !pi2 && j.j2 == JKind::Zero,
            gamma,
            j,
            has_sigma1,
            has_sigma2,
        }
    }

    /// ℬ(Γ, ℕ²), the algebra in which `d₁`, `d̄₁` and `d₂` become inner.
    pub fn extension(&self) -> AlgebraSpec {
        let pi2 = !self.gamma.proj_generator(2).is_zero();
        AlgebraSpec::unchecked(self.gamma.clone(), JSpec::NAT_NAT, pi2)
    }

    pub fn gamma(&self) -> &Lattice {
        &self.gamma
    }

    pub fn j(&self) -> JSpec {
        self.j
    }

    pub fn has_sigma1(&self) -> bool {
        self.has_sigma1
    }

    pub fn has_sigma2(&self) -> bool {
        self.has_sigma2
    }

    pub fn simple_part(&self) -> bool {
        self.simple_part
    }

    pub fn witt_degenerate(&self) -> bool {
        self.witt_degenerate
    }

    /// Whether the symbol is zero in ℬ (or outside ℬ⁽¹⁾ in the simple part).
    pub fn is_killed(&self, b: &BasisIdx) -> bool {
        let s1 = b.alpha == Vec2::sigma1();
        (s1 && b.idx == MultiIndex::ZERO) || (self.simple_part && (s1 || b.alpha == Vec2::sigma2()))
    }

    /// Checks that the symbol exists in 𝒜₂(Γ, J).
    pub fn check_index(&self, b: &BasisIdx) -> Result<(), Error> {
        if !self.gamma.contains(&b.alpha) {
            return Err(Error::IndexOutsideGamma(b.alpha.clone()));
        }
        if !self.j.admits(b.idx.i1 as i64, b.idx.i2 as i64) {
            return Err(Error::IndexOutsideJ(b.idx.i1 as u64, b.idx.i2 as u64));
        }
        Ok(())
    }

    /// Validates raw 𝒜₂ terms and passes to ℬ.
    pub fn reduce(&self, raw: &Element) -> Result<Element, Error> {
        for b in raw.support() {
            self.check_index(b)?;
        }
        Ok(self.quotient(raw))
    }

    /// Drops the symbols killed by the quotient, without validation.
    pub fn quotient(&self, raw: &Element) -> Element {
        let mut out = raw.clone();
        out.retain(|b| !self.is_killed(b));
        out
    }

    /// Ensures `u` is an element of ℬ for this spec.
    pub fn check_element(&self, u: &Element) -> Result<(), Error> {
        for b in u.support() {
            self.check_index(b).map_err(|e| Error::SpecMismatch(format!("{b}: {e}")))?;
            if self.is_killed(b) {
                return Err(Error::SpecMismatch(format!("{b} is zero in this algebra")));
            }
        }
        Ok(())
    }

    /// The bracket of ℬ.
    pub fn bracket(&self, u: &Element, v: &Element) -> Element {
        self.quotient(&raw_bracket(self.j, u, v))
    }

    /// [`AlgebraSpec::bracket`] with operand validation.
    pub fn checked_bracket(&self, u: &Element, v: &Element) -> Result<Element, Error> {
        self.check_element(u)?;
        self.check_element(v)?;
        Ok(self.bracket(u, v))
    }

    /// Lattice points `Σ kᵢ·basisᵢ` with `|kᵢ| <= k`, sorted.
    pub fn window_alphas(&self, k: u32) -> Vec<Vec2> {
        let k = k as i64;
        let mut out = match self.gamma.rank() {
            0 => vec![Vec2::zero()],
            1 => (-k..=k).map(|a| self.gamma.point(&[a])).collect(),
            _ => (-k..=k)
                .flat_map(|a| (-k..=k).map(move |b| (a, b)))
                .map(|(a, b)| self.gamma.point(&[a, b]))
                .collect(),
        };
        out.sort();
        out
    }

    /// Multi-indices in J of level at most `l`, descending.
    pub fn window_indices(&self, l: u32) -> Vec<MultiIndex> {
        let mut out: Vec<MultiIndex> = (0..=l)
            .flat_map(|i1| (0..=l - i1).map(move |i2| MultiIndex::new(i1, i2)))
            .filter(|m| self.j.admits(m.i1 as i64, m.i2 as i64))
            .collect();
        out.sort_by(|a, b| index_cmp(b, a));
        out
    }

    /// All basis symbols of ℬ with lattice coefficients in `[-k, k]` and level
    /// at most `l`, in printing order.
    pub fn enumerate_window(&self, k: u32, l: u32) -> Vec<BasisIdx> {
        let indices = self.window_indices(l);
        self.window_alphas(k)
            .into_iter()
            .flat_map(|a| indices.iter().map(move |m| BasisIdx::new(a.clone(), *m)))
            .filter(|b| !self.is_killed(b))
            .collect()
    }
}

impl fmt::Display for AlgebraSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Γ={} J={}", self.gamma, self.j)?;
        if self.simple_part {
            write!(f, " simple-part")?;
        }
        if self.witt_degenerate {
            write!(f, " witt-degenerate")?;
        }
        Ok(())
    }
}
