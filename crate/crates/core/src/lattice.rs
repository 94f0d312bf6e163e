//! Finitely generated subgroups of ℚ², homomorphisms to ℚ, and the
//! shear-scale group actions whose orbits make up the moduli spaces.
//!
//! Every finitely generated subgroup of ℚ² is free of rank at most two and
//! is stored in a canonical echelon basis:
//!
//! * rank 2: `{(c, s), (0, h)}` with `c > 0`, `h > 0`, `0 <= s < h`;
//! * rank 1: `(c, s)` with `c > 0`, or `(0, h)` with `h > 0`;
//! * rank 0: the empty basis.
//!
//! Here `c` generates the first projection of the group and `h` generates its
//! intersection with the second axis. Two lattices are equal exactly when
//! their echelon data are equal.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::rat::Rat;
use crate::Error;

/// A point of ℚ².
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Vec2 {
    pub c1: Rat,
    pub c2: Rat,
}

impl Vec2 {
    pub fn new(c1: impl Into<Rat>, c2: impl Into<Rat>) -> Vec2 {
        Vec2 { c1: c1.into(), c2: c2.into() }
    }

    pub fn zero() -> Vec2 {
        Vec2::default()
    }

    pub fn is_zero(&self) -> bool {
        self.c1.is_zero() && self.c2.is_zero()
    }

    /// `a_{[1]} = (a, 0)`.
    pub fn first(a: Rat) -> Vec2 {
        Vec2 { c1: a, c2: Rat::zero() }
    }

    /// `a_{[2]} = (0, a)`.
    pub fn second(a: Rat) -> Vec2 {
        Vec2 { c1: Rat::zero(), c2: a }
    }

    /// σ₁ = (0, 1).
    pub fn sigma1() -> Vec2 {
        Vec2::new(0, 1)
    }

    /// σ₂ = (0, 2).
    pub fn sigma2() -> Vec2 {
        Vec2::new(0, 2)
    }

    /// The `p`-th coordinate, `p ∈ {1, 2}`.
    pub fn coord(&self, p: u8) -> &Rat {
        match p {
            1 => &self.c1,
            2 => &self.c2,
            _ => panic!("coordinate index must be 1 or 2, got {p}"),
        }
    }

    pub fn add(&self, other: &Vec2) -> Vec2 {
        Vec2 { c1: &self.c1 + &other.c1, c2: &self.c2 + &other.c2 }
    }

    pub fn sub(&self, other: &Vec2) -> Vec2 {
        Vec2 { c1: &self.c1 - &other.c1, c2: &self.c2 - &other.c2 }
    }

    pub fn neg(&self) -> Vec2 {
        Vec2 { c1: -&self.c1, c2: -&self.c2 }
    }

    pub fn scale(&self, k: &Rat) -> Vec2 {
        Vec2 { c1: &self.c1 * k, c2: &self.c2 * k }
    }
}

impl fmt::Display for Vec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.c1, self.c2)
    }
}

impl fmt::Debug for Vec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Vec2 {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        [&self.c1, &self.c2].serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Vec2 {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Vec2, D::Error> {
        let [c1, c2] = <[Rat; 2]>::deserialize(deserializer)?;
        Ok(Vec2 { c1, c2 })
    }
}

/// Normalized basis data of a lattice.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Echelon {
    Trivial,
    /// Rank 1 generated by `(c, s)`, `c > 0`.
    Slanted { c: Rat, s: Rat },
    /// Rank 1 generated by `(0, h)`, `h > 0`.
    Vertical { h: Rat },
    /// Rank 2 with basis `{(c, s), (0, h)}`, `c > 0`, `h > 0`, `0 <= s < h`.
    Full { c: Rat, s: Rat, h: Rat },
}

/// A finitely generated additive subgroup Γ ⊂ ℚ².
#[derive(Clone, Debug)]
pub struct Lattice {
    generators: Vec<Vec2>,
    echelon: Echelon,
}

impl PartialEq for Lattice {
    fn eq(&self, other: &Self) -> bool {
        self.echelon == other.echelon
    }
}

impl Eq for Lattice {}

impl std::hash::Hash for Lattice {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.echelon.hash(state)
    }
}

impl Lattice {
    /// The subgroup generated by `generators` (possibly empty).
    pub fn new(generators: Vec<Vec2>) -> Lattice {
        let echelon = integer_echelon(&generators);
        Lattice { generators, echelon }
    }

    /// ℤ².
    pub fn standard() -> Lattice {
        Lattice::new(vec![Vec2::new(1, 0), Vec2::new(0, 1)])
    }

    pub fn generators(&self) -> &[Vec2] {
        &self.generators
    }

    pub fn echelon(&self) -> &Echelon {
        &self.echelon
    }

    pub fn rank(&self) -> usize {
        match self.echelon {
            Echelon::Trivial => 0,
            Echelon::Slanted { .. } | Echelon::Vertical { .. } => 1,
            Echelon::Full { .. } => 2,
        }
    }

    pub fn basis(&self) -> Vec<Vec2> {
        match &self.echelon {
            Echelon::Trivial => vec![],
            Echelon::Slanted { c, s } => vec![Vec2 { c1: c.clone(), c2: s.clone() }],
            Echelon::Vertical { h } => vec![Vec2::second(h.clone())],
            Echelon::Full { c, s, h } => {
                vec![Vec2 { c1: c.clone(), c2: s.clone() }, Vec2::second(h.clone())]
            }
        }
    }

    /// Integer coordinates of `v` in the echelon basis, or `None` if `v ∉ Γ`.
    pub fn coordinates(&self, v: &Vec2) -> Option<Vec<BigInt>> {
        match &self.echelon {
            Echelon::Trivial => v.is_zero().then(Vec::new),
            Echelon::Vertical { h } => {
                if !v.c1.is_zero() {
                    return None;
                }
                (&v.c2 / h).to_bigint().map(|k| vec![k])
            }
            Echelon::Slanted { c, s } => {
                let k = (&v.c1 / c).to_bigint()?;
                (v.c2 == s * &Rat::from_bigint(k.clone())).then(|| vec![k])
            }
            Echelon::Full { c, s, h } => {
                let k1 = (&v.c1 / c).to_bigint()?;
                let rest = &v.c2 - &(s * &Rat::from_bigint(k1.clone()));
                let k2 = (&rest / h).to_bigint()?;
                Some(vec![k1, k2])
            }
        }
    }

    pub fn contains(&self, v: &Vec2) -> bool {
        self.coordinates(v).is_some()
    }

    /// The lattice point `Σ kᵢ·basisᵢ`.
    pub fn point(&self, coords: &[i64]) -> Vec2 {
        let basis = self.basis();
        assert_eq!(coords.len(), basis.len(), "coordinate count must equal the rank");
        basis
            .iter()
            .zip(coords)
            .fold(Vec2::zero(), |acc, (b, &k)| acc.add(&b.scale(&Rat::from_int(k))))
    }

    /// Nonnegative generator of the cyclic group π_p(Γ); zero iff π_p(Γ) = {0}.
    pub fn proj_generator(&self, p: u8) -> Rat {
        match (p, &self.echelon) {
            (_, Echelon::Trivial) => Rat::zero(),
            (1, Echelon::Slanted { c, .. } | Echelon::Full { c, .. }) => c.clone(),
            (1, Echelon::Vertical { .. }) => Rat::zero(),
            (2, Echelon::Slanted { s, .. }) => s.abs(),
            (2, Echelon::Vertical { h }) => h.clone(),
            (2, Echelon::Full { s, h, .. }) => rat_gcd(s, h),
            _ => panic!("projection index must be 1 or 2, got {p}"),
        }
    }

    pub fn omega_class(&self) -> OmegaClass {
        let p1 = !self.proj_generator(1).is_zero();
        let p2 = !self.proj_generator(2).is_zero();
        OmegaClass { in_omega1: p1 && p2, in_omega2: p2, in_omega3: p1, in_omega4: true }
    }

    /// Orbit invariant under the given group; see [`CanonicalDescriptor`].
    pub fn canonical_form(&self, group: GroupTag) -> CanonicalDescriptor {
        match (&self.echelon, group) {
            (Echelon::Trivial, _) => CanonicalDescriptor::R0,
            (Echelon::Vertical { h }, _) => CanonicalDescriptor::R1Y { h: h.clone() },
            (Echelon::Slanted { .. }, GroupTag::G1) => CanonicalDescriptor::R1X { s: None },
            // diag(a, 1) rescales the first coordinate only, so (c, s) ~ (1, s) ~ (1, -s)
            (Echelon::Slanted { s, .. }, GroupTag::G2) => {
                CanonicalDescriptor::R1X { s: Some(s.abs()) }
            }
            (Echelon::Full { h, .. }, GroupTag::G1) => {
                CanonicalDescriptor::R2 { h: h.clone(), s: None }
            }
            (Echelon::Full { s, h, .. }, GroupTag::G2) => {
                let flipped = (-s).rem_euclid(h);
                let s_star = if &flipped < s { flipped } else { s.clone() };
                CanonicalDescriptor::R2 { h: h.clone(), s: Some(s_star) }
            }
        }
    }
}

impl fmt::Display for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let basis = self.basis();
        write!(f, "<")?;
        for (i, b) in basis.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{b}")?;
        }
        write!(f, ">")
    }
}

/// Greatest common divisor of two rationals, as a nonnegative rational
/// generating `aℤ + bℤ`.
pub fn rat_gcd(a: &Rat, b: &Rat) -> Rat {
    let d = a.denom().lcm(&b.denom());
    let an = a.numer() * (&d / a.denom());
    let bn = b.numer() * (&d / b.denom());
    Rat::from_bigint(an.gcd(&bn)) / Rat::from_bigint(d)
}

/// Row-reduces the generators over ℤ after clearing denominators.
fn integer_echelon(generators: &[Vec2]) -> Echelon {
    let denom = generators
        .iter()
        .flat_map(|g| [g.c1.denom(), g.c2.denom()])
        .fold(BigInt::one(), |acc, d| acc.lcm(&d));
    let scale = Rat::from_bigint(denom.clone());
    let to_int = |x: &Rat| (x * &scale).to_bigint().expect("cleared denominator");

    let mut pivot: Option<(BigInt, BigInt)> = None;
    let mut kernel = BigInt::zero();
    for g in generators {
        let (x, y) = (to_int(&g.c1), to_int(&g.c2));
        if x.is_zero() {
            kernel = kernel.gcd(&y);
            continue;
        }
        pivot = Some(match pivot.take() {
            None if x.is_negative() => (-x, -y),
            None => (x, y),
            Some((c, s)) => {
                let eg = c.extended_gcd(&x);
                let (mut g, mut u, mut v) = (eg.gcd, eg.x, eg.y);
                if g.is_negative() {
                    g = -g;
                    u = -u;
                    v = -v;
                }
                // [[u, v], [x/g, -c/g]] is unimodular; the second row lands on the axis.
                let residue = (&x / &g) * &s - (&c / &g) * &y;
                kernel = kernel.gcd(&residue);
                (g, u * s + v * y)
            }
        });
    }

    let back = |n: BigInt| Rat::from_bigint(n) / &scale;
    match pivot {
        None if kernel.is_zero() => Echelon::Trivial,
        None => Echelon::Vertical { h: back(kernel) },
        Some((c, s)) if kernel.is_zero() => Echelon::Slanted { c: back(c), s: back(s) },
        Some((c, s)) => {
            let s = s.mod_floor(&kernel);
            Echelon::Full { c: back(c), s: back(s), h: back(kernel) }
        }
    }
}

/// Membership flags for the subgroup classes Ω₁..Ω₄.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OmegaClass {
    pub in_omega1: bool,
    pub in_omega2: bool,
    pub in_omega3: bool,
    pub in_omega4: bool,
}

/// An additive homomorphism Γ → ℚ, given by its values on the echelon basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupHom {
    pub values: Vec<Rat>,
}

impl GroupHom {
    pub fn new(values: Vec<Rat>) -> GroupHom {
        GroupHom { values }
    }

    /// The homomorphism agreeing with a ℚ-linear form `v ↦ l₁v₁ + l₂v₂` on Γ.
    pub fn linear(lattice: &Lattice, l1: &Rat, l2: &Rat) -> GroupHom {
        GroupHom {
            values: lattice.basis().iter().map(|b| &(l1 * &b.c1) + &(l2 * &b.c2)).collect(),
        }
    }

    /// The projection π₁ restricted to Γ.
    pub fn pi1(lattice: &Lattice) -> GroupHom {
        GroupHom::linear(lattice, &Rat::one(), &Rat::zero())
    }

    /// The projection π₂ restricted to Γ.
    pub fn pi2(lattice: &Lattice) -> GroupHom {
        GroupHom::linear(lattice, &Rat::zero(), &Rat::one())
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Rat::is_zero)
    }

    pub fn add(&self, other: &GroupHom) -> GroupHom {
        assert_eq!(self.values.len(), other.values.len());
        GroupHom { values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect() }
    }

    pub fn scale(&self, k: &Rat) -> GroupHom {
        GroupHom { values: self.values.iter().map(|a| a * k).collect() }
    }

    pub fn eval(&self, lattice: &Lattice, v: &Vec2) -> Result<Rat, Error> {
        if self.values.len() != lattice.rank() {
            return Err(Error::HomArity { expected: lattice.rank(), got: self.values.len() });
        }
        let coords = lattice.coordinates(v).ok_or_else(|| Error::NotInLattice(v.clone()))?;
        Ok(coords.into_iter().zip(&self.values).map(|(k, val)| &Rat::from_bigint(k) * val).sum())
    }
}

/// Which shear-scale group acts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupTag {
    /// Matrices `((a, b), (0, 1))`.
    G1,
    /// Matrices `((a, 0), (0, 1))`.
    G2,
}

/// An element `((a, b), (0, 1))` of G₁ or G₂, acting on ℚ² by `α ↦ α·g⁻¹`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShearScale {
    a: Rat,
    b: Rat,
    group: GroupTag,
}

impl ShearScale {
    pub fn new(a: Rat, b: Rat, group: GroupTag) -> Result<ShearScale, Error> {
        if a.is_zero() {
            return Err(Error::Singular);
        }
        if group == GroupTag::G2 && !b.is_zero() {
            return Err(Error::InvalidGroupElement("G2 elements have b = 0".into()));
        }
        Ok(ShearScale { a, b, group })
    }

    pub fn a(&self) -> &Rat {
        &self.a
    }

    pub fn b(&self) -> &Rat {
        &self.b
    }

    pub fn group(&self) -> GroupTag {
        self.group
    }

    /// `v·g⁻¹ = (v₁/a, v₂ − v₁b/a)`.
    pub fn apply(&self, v: &Vec2) -> Vec2 {
        let c1 = &v.c1 / &self.a;
        let c2 = &v.c2 - &(&c1 * &self.b);
        Vec2 { c1, c2 }
    }

    /// The same action written as a shear map `(β₁, β₂) ↦ (a'β₁, β₂ + b'β₁)`.
    pub fn as_shear_map(&self) -> ShearMap {
        let inv = self.a.recip();
        ShearMap { b: -&(&self.b * &inv), a: inv }
    }
}

/// The map `(β₁, β₂) ↦ (aβ₁, β₂ + bβ₁)` with `a ≠ 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ShearMap {
    pub a: Rat,
    pub b: Rat,
}

impl ShearMap {
    pub fn new(a: Rat, b: Rat) -> Result<ShearMap, Error> {
        if a.is_zero() {
            return Err(Error::Singular);
        }
        Ok(ShearMap { a, b })
    }

    pub fn identity() -> ShearMap {
        ShearMap { a: Rat::one(), b: Rat::zero() }
    }

    pub fn apply(&self, v: &Vec2) -> Vec2 {
        Vec2 { c1: &self.a * &v.c1, c2: &v.c2 + &(&self.b * &v.c1) }
    }

    /// `(β₁, β₂) ↦ (β₁/a, β₂ − bβ₁/a)`.
    pub fn inverse(&self) -> ShearMap {
        let inv = self.a.recip();
        ShearMap { b: -&(&self.b * &inv), a: inv }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &ShearMap) -> ShearMap {
        ShearMap { a: &self.a * &other.a, b: &other.b + &(&self.b * &other.a) }
    }
}

impl fmt::Display for ShearMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(a={}, b={})", self.a, self.b)
    }
}

/// Image of a lattice under a shear map.
pub fn map_lattice(map: &ShearMap, lattice: &Lattice) -> Result<Lattice, Error> {
    if map.a.is_zero() {
        return Err(Error::Singular);
    }
    Ok(Lattice::new(lattice.basis().iter().map(|b| map.apply(b)).collect()))
}

/// Complete orbit invariant of a lattice under G₁ or G₂.
///
/// The nominal representatives are `⟨(1, 0)⟩` / `⟨(1, s)⟩` for rank-1 lattices
/// off the second axis, `⟨(0, h)⟩` on it, and `⟨(1, 0), (0, h)⟩` /
/// `⟨(1, s), (0, h)⟩` in rank 2. Under G₂ the offset is only defined up to
/// sign (and modulo `h`), so the smaller of the two choices is recorded.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "shape")]
pub enum CanonicalDescriptor {
    R0,
    R1X {
        #[serde(skip_serializing_if = "Option::is_none")]
        s: Option<Rat>,
    },
    R1Y {
        h: Rat,
    },
    R2 {
        h: Rat,
        #[serde(skip_serializing_if = "Option::is_none")]
        s: Option<Rat>,
    },
}

impl fmt::Display for CanonicalDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CanonicalDescriptor::R0 => write!(f, "R0"),
            CanonicalDescriptor::R1X { s: None } => write!(f, "R1X"),
            CanonicalDescriptor::R1X { s: Some(s) } => write!(f, "R1X s={s}"),
            CanonicalDescriptor::R1Y { h } => write!(f, "R1Y h={h}"),
            CanonicalDescriptor::R2 { h, s: None } => write!(f, "R2 h={h}"),
            CanonicalDescriptor::R2 { h, s: Some(s) } => write!(f, "R2 h={h} s*={s}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn v(a: i64, b: i64) -> Vec2 {
        Vec2::new(a, b)
    }

    fn lat(gens: &[Vec2]) -> Lattice {
        Lattice::new(gens.to_vec())
    }

    /// Brute-force ℤ-span membership over a coefficient box.
    fn in_box_span(gens: &[Vec2], target: &Vec2, bound: i64) -> bool {
        fn rec(gens: &[Vec2], acc: Vec2, target: &Vec2, bound: i64) -> bool {
            match gens.split_first() {
                None => &acc == target,
                Some((g, rest)) => (-bound..=bound)
                    .any(|k| rec(rest, acc.add(&g.scale(&Rat::from_int(k))), target, bound)),
            }
        }
        rec(gens, Vec2::zero(), target, bound)
    }

    #[test]
    fn echelon_examples() {
        let l = lat(&[v(2, 3), v(0, 5)]);
        assert_eq!(l.basis(), vec![v(2, 3), v(0, 5)]);
        assert_eq!(l.rank(), 2);
        // oracle: each basis vector is a small integer combination of the generators and back
        for b in l.basis() {
            assert!(in_box_span(l.generators(), &b, 20));
        }

        let empty = lat(&[]);
        assert_eq!(empty.rank(), 0);
        assert!(empty.basis().is_empty());

        let half = lat(&[Vec2::new(rat(1, 2), 0), v(1, 0)]);
        assert_eq!(half.basis(), vec![Vec2::new(rat(1, 2), 0)]);
        assert!(in_box_span(&half.basis(), &v(1, 0), 20));
    }

    #[test]
    fn echelon_normalizes_sign_and_offset() {
        let l = lat(&[v(-2, -3), v(0, -5), v(4, 1)]);
        assert_eq!(l.basis(), vec![v(2, 3), v(0, 5)]);
        let l = lat(&[v(-3, 7)]);
        assert_eq!(l.basis(), vec![v(3, -7)]);
        let l = lat(&[v(0, -4), v(0, 6)]);
        assert_eq!(l.basis(), vec![v(0, 2)]);
        let l = lat(&[v(1, 1), v(2, 2), v(0, 0)]);
        assert_eq!(l.basis(), vec![v(1, 1)]);
    }

    #[test]
    fn membership_examples() {
        let l = lat(&[Vec2::new(rat(1, 2), 0), v(0, 1)]);
        assert!(l.contains(&Vec2::new(rat(3, 2), 2)));
        assert!(!l.contains(&Vec2::new(rat(1, 3), 0)));
        assert!(l.contains(&Vec2::zero()));
        assert!(lat(&[]).contains(&Vec2::zero()));
        assert!(!lat(&[]).contains(&v(1, 0)));
    }

    #[test]
    fn equality_examples() {
        assert_eq!(lat(&[v(2, 3), v(0, 5)]), lat(&[v(2, 3), v(2, 8)]));
        assert_ne!(lat(&[v(0, 5)]), lat(&[v(0, 7)]));
    }

    #[test]
    fn projection_examples() {
        let l = lat(&[v(2, 3), v(0, 5)]);
        assert_eq!(l.proj_generator(1), Rat::from_int(2));
        assert_eq!(l.proj_generator(2), Rat::from_int(1));
        assert_eq!(lat(&[]).proj_generator(1), Rat::zero());
        assert_eq!(lat(&[]).proj_generator(2), Rat::zero());
        let l = lat(&[Vec2::new(1, rat(3, 4)), Vec2::new(0, rat(1, 2))]);
        assert_eq!(l.proj_generator(2), rat(1, 4));
    }

    #[test]
    fn group_element_examples() {
        let g = ShearScale::new(Rat::from_int(2), Rat::one(), GroupTag::G1).unwrap();
        assert_eq!(g.apply(&v(1, 1)), Vec2::new(rat(1, 2), rat(1, 2)));
        let id = ShearScale::new(Rat::one(), Rat::zero(), GroupTag::G1).unwrap();
        assert_eq!(id.apply(&v(7, -3)), v(7, -3));
        let g = ShearScale::new(Rat::from_int(2), Rat::zero(), GroupTag::G2).unwrap();
        assert_eq!(g.apply(&v(0, 3)), v(0, 3));
        assert!(ShearScale::new(Rat::one(), Rat::one(), GroupTag::G2).is_err());
        assert!(ShearScale::new(Rat::zero(), Rat::zero(), GroupTag::G1).is_err());
    }

    #[test]
    fn group_element_matches_matrix_inverse() {
        // v·g⁻¹ computed by solving w·g = v
        let g = ShearScale::new(rat(-3, 2), rat(5, 7), GroupTag::G1).unwrap();
        let w = g.apply(&Vec2::new(rat(4, 3), -2));
        let back = Vec2 { c1: &w.c1 * g.a(), c2: &(&w.c1 * g.b()) + &w.c2 };
        assert_eq!(back, Vec2::new(rat(4, 3), -2));
        let via_map = g.as_shear_map().apply(&Vec2::new(rat(4, 3), -2));
        assert_eq!(via_map, w);
    }

    #[test]
    fn map_lattice_examples() {
        let l = lat(&[v(1, 0), v(0, 5)]);
        assert_eq!(map_lattice(&ShearMap::identity(), &l).unwrap(), l);
        let m = ShearMap::new(Rat::from_int(3), Rat::one()).unwrap();
        assert_eq!(map_lattice(&m, &l).unwrap(), lat(&[v(3, 1), v(0, 5)]));
        let m = ShearMap::new(rat(1, 2), Rat::from_int(-3)).unwrap();
        let image = map_lattice(&m, &lat(&[v(2, 3), v(0, 5)])).unwrap();
        assert_eq!(image.basis(), vec![v(1, 2), v(0, 5)]);
        assert_eq!(image, lat(&[v(1, -3), v(0, 5)]));
        let singular = ShearMap { a: Rat::zero(), b: Rat::one() };
        assert!(matches!(map_lattice(&singular, &l), Err(Error::Singular)));
    }

    #[test]
    fn hom_eval_examples() {
        let l = Lattice::standard();
        let mu = GroupHom::new(vec![Rat::from_int(5), Rat::from_int(7)]);
        assert_eq!(mu.eval(&l, &v(2, 3)).unwrap(), Rat::from_int(31));
        assert_eq!(mu.eval(&l, &Vec2::zero()).unwrap(), Rat::zero());
        assert!(matches!(mu.eval(&l, &Vec2::new(rat(1, 2), 0)), Err(Error::NotInLattice(_))));
        assert_eq!(GroupHom::pi1(&l).eval(&l, &v(-4, 9)).unwrap(), Rat::from_int(-4));
    }

    #[test]
    fn canonical_form_examples() {
        let l = lat(&[v(2, 3), v(0, 5)]);
        assert_eq!(
            l.canonical_form(GroupTag::G1),
            CanonicalDescriptor::R2 { h: Rat::from_int(5), s: None }
        );
        // diag(a,1) keeps second coordinates: (2,3) ~ (1,3) ~ (1,-3) ≡ (1,2) mod 5
        assert_eq!(
            l.canonical_form(GroupTag::G2),
            CanonicalDescriptor::R2 { h: Rat::from_int(5), s: Some(Rat::from_int(2)) }
        );
        for g in [GroupTag::G1, GroupTag::G2] {
            assert_eq!(
                lat(&[v(0, 4)]).canonical_form(g),
                CanonicalDescriptor::R1Y { h: Rat::from_int(4) }
            );
            assert_eq!(lat(&[]).canonical_form(g), CanonicalDescriptor::R0);
        }
        assert_eq!(
            lat(&[v(-3, 7)]).canonical_form(GroupTag::G2),
            CanonicalDescriptor::R1X { s: Some(Rat::from_int(7)) }
        );
    }

    #[test]
    fn g2_offset_oracle_by_search() {
        // ⟨(2,3),(0,5)⟩ is G2-equivalent to ⟨(1,t),(0,5)⟩ exactly for t ∈ {2, 3}
        let l = lat(&[v(2, 3), v(0, 5)]);
        let hits: Vec<Rat> = (0..40)
            .map(|k| rat(k, 8))
            .filter(|t| {
                let target = lat(&[Vec2::new(1, t.clone()), v(0, 5)]);
                [rat(1, 2), rat(-1, 2)].into_iter().any(|a| {
                    map_lattice(&ShearMap::new(a, Rat::zero()).unwrap(), &l).unwrap() == target
                })
            })
            .collect();
        assert_eq!(hits, vec![Rat::from_int(2), Rat::from_int(3)]);
    }

    #[test]
    fn omega_examples() {
        let flags = |l: Lattice| {
            let o = l.omega_class();
            (o.in_omega1, o.in_omega2, o.in_omega3, o.in_omega4)
        };
        assert_eq!(flags(lat(&[v(2, 3), v(0, 5)])), (true, true, true, true));
        assert_eq!(flags(lat(&[v(0, 5)])), (false, true, false, true));
        assert_eq!(flags(lat(&[])), (false, false, false, true));
    }

    #[test]
    fn rat_gcd_generates_sum() {
        assert_eq!(rat_gcd(&rat(3, 4), &rat(1, 2)), rat(1, 4));
        assert_eq!(rat_gcd(&Rat::zero(), &rat(-2, 3)), rat(2, 3));
    }
}
