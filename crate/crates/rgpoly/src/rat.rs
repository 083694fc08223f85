//! Exact rational arithmetic.
//!
//! `Rat` is an arbitrary-precision rational number stored in lowest terms
//! with a positive denominator. Values that fit in a pair of machine words
//! are kept inline; everything else spills into a heap-allocated
//! `BigRational`. The representation is canonical: a value is stored inline
//! whenever it fits, so equality can compare variants directly.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::Error;

#[derive(Clone, Debug)]
enum Repr {
    /// Numerator / denominator in lowest terms, denominator > 0.
    Small(i64, i64),
    /// Reduced fraction that does not fit in `Small`.
    Big(Box<BigRational>),
}

/// An exact rational number.
#[derive(Clone, Debug)]
pub struct Rat(Repr);

fn gcd_i128(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Reduce `n/d` (d != 0) and store inline if both parts fit in i64.
fn normalize128(mut n: i128, mut d: i128) -> Rat {
    debug_assert!(d != 0, "zero denominator");
    if n == 0 {
        return Rat(Repr::Small(0, 1));
    }
    if d < 0 {
        n = -n;
        d = -d;
    }
    let g = gcd_i128(n, d);
    n /= g;
    d /= g;
    if let (Some(ns), Some(ds)) = (n.to_i64(), d.to_i64()) {
        Rat(Repr::Small(ns, ds))
    } else {
        Rat(Repr::Big(Box::new(BigRational::new(
            BigInt::from(n),
            BigInt::from(d),
        ))))
    }
}

/// Store a reduced `BigRational`, downgrading to the inline form if it fits.
fn normalize_big(r: BigRational) -> Rat {
    if let (Some(n), Some(d)) = (r.numer().to_i64(), r.denom().to_i64()) {
        Rat(Repr::Small(n, d))
    } else {
        Rat(Repr::Big(Box::new(r)))
    }
}

impl Rat {
    pub fn zero() -> Self {
        Rat(Repr::Small(0, 1))
    }

    pub fn one() -> Self {
        Rat(Repr::Small(1, 1))
    }

    /// `n/d` reduced to lowest terms. Panics if `d == 0`.
    pub fn new(n: i64, d: i64) -> Self {
        assert!(d != 0, "zero denominator");
        normalize128(n as i128, d as i128)
    }

    pub fn from_int(n: i64) -> Self {
        Rat(Repr::Small(n, 1))
    }

    pub fn from_big(r: BigRational) -> Self {
        normalize_big(r)
    }

    pub fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(n, d) => BigRational::new(BigInt::from(*n), BigInt::from(*d)),
            Repr::Big(r) => (**r).clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0, _))
    }

    pub fn is_one(&self) -> bool {
        matches!(self.0, Repr::Small(1, 1))
    }

    pub fn is_negative(&self) -> bool {
        match &self.0 {
            Repr::Small(n, _) => *n < 0,
            Repr::Big(r) => r.numer().sign() == Sign::Minus,
        }
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small(_, d) => *d == 1,
            Repr::Big(r) => r.is_integer(),
        }
    }

    pub fn abs(&self) -> Rat {
        if self.is_negative() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn recip(&self) -> Rat {
        match &self.0 {
            Repr::Small(n, d) => {
                assert!(*n != 0, "division by zero");
                normalize128(*d as i128, *n as i128)
            }
            Repr::Big(r) => normalize_big(r.recip()),
        }
    }

    /// Integer power with negative exponents allowed (base must be nonzero
    /// for negative `k`).
    pub fn pow_i(&self, k: i32) -> Rat {
        if k == 0 {
            return Rat::one();
        }
        let base = if k < 0 { self.recip() } else { self.clone() };
        let mut acc = Rat::one();
        for _ in 0..k.unsigned_abs() {
            acc = &acc * &base;
        }
        acc
    }

    /// Exact `n!` as a rational.
    pub fn factorial(n: u64) -> Rat {
        let mut acc = BigInt::one();
        for k in 2..=n {
            acc *= BigInt::from(k);
        }
        normalize_big(BigRational::from_integer(acc))
    }

    /// `2^k` for possibly negative `k`.
    pub fn pow2(k: i32) -> Rat {
        Rat::from_int(2).pow_i(k)
    }

    /// Numerator and denominator as decimal strings, lowest terms.
    pub fn to_frac_string(&self) -> String {
        match &self.0 {
            Repr::Small(n, d) => format!("{}/{}", n, d),
            Repr::Big(r) => format!("{}/{}", r.numer(), r.denom()),
        }
    }
}

impl PartialEq for Rat {
    fn eq(&self, other: &Self) -> bool {
        // Canonical representation: equal values share a variant.
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => a == c && b == d,
            (Repr::Big(a), Repr::Big(b)) => a == b,
            _ => false,
        }
    }
}

impl Eq for Rat {}

impl PartialOrd for Rat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rat {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                // a/b vs c/d with b,d > 0: compare a*d vs c*b exactly.
                (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128))
            }
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl Add for &Rat {
    type Output = Rat;
    fn add(self, rhs: &Rat) -> Rat {
        match (&self.0, &rhs.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                let n = *a as i128 * *d as i128 + *c as i128 * *b as i128;
                let den = *b as i128 * *d as i128;
                normalize128(n, den)
            }
            _ => normalize_big(self.to_big() + rhs.to_big()),
        }
    }
}

impl Sub for &Rat {
    type Output = Rat;
    fn sub(self, rhs: &Rat) -> Rat {
        match (&self.0, &rhs.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                let n = *a as i128 * *d as i128 - *c as i128 * *b as i128;
                let den = *b as i128 * *d as i128;
                normalize128(n, den)
            }
            _ => normalize_big(self.to_big() - rhs.to_big()),
        }
    }
}

impl Mul for &Rat {
    type Output = Rat;
    fn mul(self, rhs: &Rat) -> Rat {
        match (&self.0, &rhs.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                normalize128(*a as i128 * *c as i128, *b as i128 * *d as i128)
            }
            _ => normalize_big(self.to_big() * rhs.to_big()),
        }
    }
}

impl Div for &Rat {
    type Output = Rat;
    fn div(self, rhs: &Rat) -> Rat {
        assert!(!rhs.is_zero(), "division by zero");
        match (&self.0, &rhs.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                normalize128(*a as i128 * *d as i128, *b as i128 * *c as i128)
            }
            _ => normalize_big(self.to_big() / rhs.to_big()),
        }
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        match &self.0 {
            Repr::Small(n, d) => normalize128(-(*n as i128), *d as i128),
            Repr::Big(r) => normalize_big(-(**r).clone()),
        }
    }
}

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        -&self
    }
}

macro_rules! forward_owned {
    ($trait:ident, $method:ident) => {
        impl $trait for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

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

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(n, 1) => write!(f, "{}", n),
            Repr::Small(n, d) => write!(f, "{}/{}", n, d),
            Repr::Big(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
        }
    }
}

impl FromStr for Rat {
    type Err = Error;

    /// Parses `"num"` or `"num/den"` with decimal digits.
    fn from_str(s: &str) -> Result<Self, Error> {
        let parse_int = |t: &str| -> Result<BigInt, Error> {
            t.trim()
                .parse::<BigInt>()
                .map_err(|_| Error::Parse(format!("invalid rational: {s:?}")))
        };
        match s.split_once('/') {
            Some((n, d)) => {
                let den = parse_int(d)?;
                if den.is_zero() {
                    return Err(Error::Parse(format!("zero denominator: {s:?}")));
                }
                Ok(Rat::from_big(BigRational::new(parse_int(n)?, den)))
            }
            None => Ok(Rat::from_big(BigRational::from_integer(parse_int(s)?))),
        }
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Self {
        Rat::from_int(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_arithmetic() {
        let a = Rat::new(1, 2);
        let b = Rat::new(1, 3);
        assert_eq!(&a + &b, Rat::new(5, 6));
        assert_eq!(&a - &b, Rat::new(1, 6));
        assert_eq!(&a * &b, Rat::new(1, 6));
        assert_eq!(&a / &b, Rat::new(3, 2));
        assert_eq!(-&a, Rat::new(-1, 2));
    }

    #[test]
    fn canonical_reduction() {
        assert_eq!(Rat::new(2, 4), Rat::new(1, 2));
        assert_eq!(Rat::new(-3, -6), Rat::new(1, 2));
        assert_eq!(Rat::new(3, -6), Rat::new(-1, 2));
        assert_eq!(Rat::new(0, -7), Rat::zero());
        assert!(Rat::new(0, 5).is_zero());
    }

    #[test]
    fn overflow_spills_to_big_and_back() {
        let big = Rat::from_int(i64::MAX);
        let sq = &big * &big;
        assert_eq!(sq.to_frac_string(), format!("{}/1", (i64::MAX as i128).pow(2)));
        // Dividing back down must return to the inline representation.
        let back = &sq / &big;
        assert_eq!(back, big);
        // Equality through the big path stays canonical.
        let one = &sq / &sq;
        assert!(one.is_one());
    }

    #[test]
    fn pow_and_recip() {
        let t = Rat::new(2, 3);
        assert_eq!(t.pow_i(3), Rat::new(8, 27));
        assert_eq!(t.pow_i(-2), Rat::new(9, 4));
        assert_eq!(t.pow_i(0), Rat::one());
        assert_eq!(t.recip(), Rat::new(3, 2));
        assert_eq!(Rat::pow2(-3), Rat::new(1, 8));
    }

    #[test]
    fn factorial_values() {
        assert_eq!(Rat::factorial(0), Rat::one());
        assert_eq!(Rat::factorial(5), Rat::from_int(120));
        assert_eq!(Rat::factorial(20), Rat::from_int(2432902008176640000));
    }

    #[test]
    fn parse_round_trip() {
        let r: Rat = "-35/3".parse().unwrap();
        assert_eq!(r, Rat::new(-35, 3));
        assert_eq!(r.to_frac_string(), "-35/3");
        let n: Rat = "42".parse().unwrap();
        assert_eq!(n, Rat::from_int(42));
        assert!("1/0".parse::<Rat>().is_err());
        assert!("x".parse::<Rat>().is_err());
        let huge: Rat = "88361050/21".parse().unwrap();
        assert_eq!(huge, Rat::new(88361050, 21));
    }

    #[test]
    fn ordering() {
        assert!(Rat::new(1, 3) < Rat::new(1, 2));
        assert!(Rat::new(-1, 2) < Rat::zero());
        assert!(Rat::new(7, 5) > Rat::one());
    }
}
