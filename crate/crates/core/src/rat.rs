//! Exact rational numbers.
//!
//! [`Rat`] is an arbitrary-precision rational with an inline fast path for
//! values whose numerator and denominator fit in a machine word. Almost every
//! coefficient that appears in a bracket computation is tiny, so the fast path
//! avoids heap traffic; anything larger transparently promotes to a
//! [`BigRational`].

use std::cmp::Ordering;
use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Operands at most this large in absolute value can be combined in `i64`
/// without overflow (products of two stay below 2^62).
const FAST_LIMIT: i64 = 1 << 31;

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    /// Reduced, positive denominator, numerator never `i64::MIN`.
    Small(Ratio<i64>),
    /// Only used for values that do not fit `Small`.
    Big(BigRational),
}

/// An exact rational number in lowest terms with a positive denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rat(Repr);

impl Rat {
    pub fn new(numer: i64, denom: i64) -> Rat {
        assert!(denom != 0, "zero denominator");
        Rat::from_big(BigRational::new(numer.into(), denom.into()))
    }

    pub fn from_int(n: i64) -> Rat {
        if n == i64::MIN {
            Rat(Repr::Big(BigRational::from_integer(n.into())))
        } else {
            Rat(Repr::Small(Ratio::from_integer(n)))
        }
    }

    pub fn from_bigint(n: BigInt) -> Rat {
        Rat::from_big(BigRational::from_integer(n))
    }

    pub fn from_big(r: BigRational) -> Rat {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) if n != i64::MIN => Rat(Repr::Small(Ratio::new_raw(n, d))),
            _ => Rat(Repr::Big(r)),
        }
    }

    pub fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(r) => BigRational::new_raw((*r.numer()).into(), (*r.denom()).into()),
            Repr::Big(r) => r.clone(),
        }
    }

    pub fn zero() -> Rat {
        Rat::from_int(0)
    }

    pub fn one() -> Rat {
        Rat::from_int(1)
    }

    pub fn is_zero(&self) -> bool {
        match &self.0 {
            Repr::Small(r) => r.is_zero(),
            Repr::Big(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        matches!(&self.0, Repr::Small(r) if r.is_one())
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small(r) => r.is_integer(),
            Repr::Big(r) => r.is_integer(),
        }
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn signum(&self) -> i32 {
        match &self.0 {
            Repr::Small(r) => r.numer().signum() as i32,
            Repr::Big(r) => {
                if r.is_zero() {
                    0
                } else if r.is_negative() {
                    -1
                } else {
                    1
                }
            }
        }
    }

    pub fn abs(&self) -> Rat {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small(r) => (*r.numer()).into(),
            Repr::Big(r) => r.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small(r) => (*r.denom()).into(),
            Repr::Big(r) => r.denom().clone(),
        }
    }

    /// The integer value, if this is an integer that fits `i64`.
    pub fn to_i64(&self) -> Option<i64> {
        match &self.0 {
            Repr::Small(r) if r.is_integer() => Some(*r.numer()),
            _ => None,
        }
    }

    /// The integer value as a `BigInt`, if this is an integer.
    pub fn to_bigint(&self) -> Option<BigInt> {
        self.is_integer().then(|| self.numer())
    }

    pub fn recip(&self) -> Rat {
        assert!(!self.is_zero(), "reciprocal of zero");
        match &self.0 {
            Repr::Small(r) => {
                let (n, d) = (*r.numer(), *r.denom());
                if n < 0 {
                    Rat(Repr::Small(Ratio::new_raw(-d, -n)))
                } else {
                    Rat(Repr::Small(Ratio::new_raw(d, n)))
                }
            }
            Repr::Big(r) => Rat::from_big(r.recip()),
        }
    }

    pub fn pow(&self, exp: u32) -> Rat {
        let mut acc = Rat::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// `self - floor(self / modulus) * modulus`, always in `[0, |modulus|)`.
    pub fn rem_euclid(&self, modulus: &Rat) -> Rat {
        assert!(!modulus.is_zero(), "modulus must be nonzero");
        let m = modulus.abs();
        let q = (self / &m).floor();
        self - &(&q * &m)
    }

    pub fn floor(&self) -> Rat {
        match &self.0 {
            Repr::Small(r) => Rat::from_int(r.numer().div_floor(r.denom())),
            Repr::Big(r) => Rat::from_big(r.floor()),
        }
    }

    fn small_operands(&self, other: &Rat) -> Option<(i64, i64, i64, i64)> {
        match (&self.0, &other.0) {
            (Repr::Small(a), Repr::Small(b)) => {
                let fits = |x: i64| x.abs() < FAST_LIMIT;
                if fits(*a.numer()) && fits(*a.denom()) && fits(*b.numer()) && fits(*b.denom()) {
                    Some((*a.numer(), *a.denom(), *b.numer(), *b.denom()))
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    fn reduced(n: i64, d: i64) -> Rat {
        // d > 0 and both far from i64::MIN here
        let g = n.gcd(&d);
        Rat(Repr::Small(Ratio::new_raw(n / g, d / g)))
    }
}

impl Default for Rat {
    fn default() -> Self {
        Rat::zero()
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Self {
        Rat::from_int(n)
    }
}

impl From<i32> for Rat {
    fn from(n: i32) -> Self {
        Rat::from_int(n.into())
    }
}

impl From<u32> for Rat {
    fn from(n: u32) -> Self {
        Rat::from_int(n.into())
    }
}

impl From<BigInt> for Rat {
    fn from(n: BigInt) -> Self {
        Rat::from_bigint(n)
    }
}

impl From<BigRational> for Rat {
    fn from(r: BigRational) -> Self {
        Rat::from_big(r)
    }
}

impl PartialOrd for Rat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rat {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a), Repr::Small(b)) => {
                let lhs = i128::from(*a.numer()) * i128::from(*b.denom());
                let rhs = i128::from(*b.numer()) * i128::from(*a.denom());
                lhs.cmp(&rhs)
            }
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl<'a> Add<&'a Rat> for &'a Rat {
    type Output = Rat;
    fn add(self, rhs: &Rat) -> Rat {
        if let Some((a, b, c, d)) = self.small_operands(rhs) {
            return Rat::reduced(a * d + c * b, b * d);
        }
        Rat::from_big(self.to_big() + rhs.to_big())
    }
}

impl<'a> Sub<&'a Rat> for &'a Rat {
    type Output = Rat;
    fn sub(self, rhs: &Rat) -> Rat {
        if let Some((a, b, c, d)) = self.small_operands(rhs) {
            return Rat::reduced(a * d - c * b, b * d);
        }
        Rat::from_big(self.to_big() - rhs.to_big())
    }
}

impl<'a> Mul<&'a Rat> for &'a Rat {
    type Output = Rat;
    fn mul(self, rhs: &Rat) -> Rat {
        if let Some((a, b, c, d)) = self.small_operands(rhs) {
            return Rat::reduced(a * c, b * d);
        }
        Rat::from_big(self.to_big() * rhs.to_big())
    }
}

impl<'a> Div<&'a Rat> for &'a Rat {
    type Output = Rat;
    fn div(self, rhs: &Rat) -> Rat {
        assert!(!rhs.is_zero(), "division by zero");
        if let Some((a, b, c, d)) = self.small_operands(rhs) {
            let (n, m) = if c < 0 { (-a * d, -b * c) } else { (a * d, b * c) };
            return Rat::reduced(n, m);
        }
        Rat::from_big(self.to_big() / rhs.to_big())
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        match &self.0 {
            Repr::Small(r) => Rat(Repr::Small(Ratio::new_raw(-*r.numer(), *r.denom()))),
            Repr::Big(r) => Rat::from_big(-r),
        }
    }
}

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        -&self
    }
}

macro_rules! owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $trait<&'a Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                (&self).$method(rhs)
            }
        }
        impl<'a> $trait<Rat> for &'a Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                self.$method(&rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);
owned_binop!(Div, div);

impl AddAssign<&Rat> for Rat {
    fn add_assign(&mut self, rhs: &Rat) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Rat> for Rat {
    fn sub_assign(&mut self, rhs: &Rat) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&Rat> for Rat {
    fn mul_assign(&mut self, rhs: &Rat) {
        *self = &*self * rhs;
    }
}

impl Sum for Rat {
    fn sum<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |acc, x| &acc + &x)
    }
}

impl Product for Rat {
    fn product<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        iter.fold(Rat::one(), |acc, x| &acc * &x)
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(r) => fmt::Display::fmt(r, f),
            Repr::Big(r) => fmt::Display::fmt(r, f),
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal {0:?}")]
pub struct ParseRatError(pub String);

impl FromStr for Rat {
    type Err = ParseRatError;

    /// Accepts `p` or `p/q` with `q > 0`; surrounding whitespace is ignored.
    fn from_str(s: &str) -> Result<Rat, ParseRatError> {
        let err = || ParseRatError(s.to_string());
        let t = s.trim();
        let (num, den) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), Some(d.trim())),
            None => (t, None),
        };
        let valid_int = |x: &str, signed: bool| {
            let digits = if signed {
                x.strip_prefix('-').or_else(|| x.strip_prefix('+')).unwrap_or(x)
            } else {
                x
            };
            !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
        };
        if !valid_int(num, true) {
            return Err(err());
        }
        let n: BigInt = num.parse().map_err(|_| err())?;
        let d: BigInt = match den {
            Some(d) if valid_int(d, false) => d.parse().map_err(|_| err())?,
            Some(_) => return Err(err()),
            None => BigInt::one(),
        };
        if d.is_zero() {
            return Err(err());
        }
        Ok(Rat::from_big(BigRational::new(n, d)))
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Rat, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Int(i64),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
            Raw::Int(n) => Ok(Rat::from_int(n)),
        }
    }
}

/// Shorthand for `Rat::new(numer, denom)`.
pub fn rat(numer: i64, denom: i64) -> Rat {
    Rat::new(numer, denom)
}

/// Binomial coefficient as an exact rational.
pub fn binomial(n: u32, k: u32) -> Rat {
    if k > n {
        return Rat::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    Rat::from_bigint(acc)
}

pub fn factorial(n: u32) -> Rat {
    Rat::from_bigint((1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn parse_and_print() {
        assert_eq!("3/2".parse::<Rat>().unwrap(), rat(3, 2));
        assert_eq!("-6/4".parse::<Rat>().unwrap().to_string(), "-3/2");
        assert_eq!("7".parse::<Rat>().unwrap().to_string(), "7");
        assert_eq!(" -0 ".parse::<Rat>().unwrap(), Rat::zero());
        for bad in ["", "1/0", "1/-2", "a", "1//2", "--1", "1/"] {
            assert!(bad.parse::<Rat>().is_err(), "{bad}");
        }
    }

    #[test]
    fn promotes_and_demotes() {
        let huge = Rat::from_int(i64::MAX);
        let sq = &huge * &huge;
        assert!(matches!(sq.0, Repr::Big(_)));
        let back = &sq / &huge;
        assert_eq!(back, huge);
        assert!(matches!(back.0, Repr::Small(_)));
        assert!(matches!(Rat::from_int(i64::MIN).0, Repr::Big(_)));
        assert_eq!(-Rat::from_int(i64::MIN), Rat::from_bigint(BigInt::from(i64::MIN) * -1));
    }

    #[test]
    fn rem_euclid_is_nonnegative() {
        assert_eq!(rat(-3, 2).rem_euclid(&Rat::from_int(5)), rat(7, 2));
        assert_eq!(rat(13, 1).rem_euclid(&Rat::from_int(-5)), Rat::from_int(3));
        assert_eq!(binomial(5, 2), Rat::from_int(10));
        assert_eq!(factorial(5), Rat::from_int(120));
    }

    fn any_rat() -> impl Strategy<Value = (i64, i64)> {
        prop_oneof![
            (-50i64..50, 1i64..20),
            (any::<i64>().prop_filter("not min", |n| *n != i64::MIN), 1i64..i64::MAX),
        ]
    }

    proptest! {
        #[test]
        fn agrees_with_bigrational((a, b) in any_rat(), (c, d) in any_rat()) {
            let (x, y) = (rat(a, b), rat(c, d));
            let (bx, by) = (big(a, b), big(c, d));
            prop_assert_eq!((&x + &y).to_big(), &bx + &by);
            prop_assert_eq!((&x - &y).to_big(), &bx - &by);
            prop_assert_eq!((&x * &y).to_big(), &bx * &by);
            if c != 0 {
                prop_assert_eq!((&x / &y).to_big(), &bx / &by);
            }
            prop_assert_eq!(x.cmp(&y), bx.cmp(&by));
            prop_assert_eq!(x.to_string().parse::<Rat>().unwrap(), x);
        }
    }
}
