//! Exact arithmetic in Q(√2).
//!
//! Every octagon coordinate lives here. Values are `a + b√2` with `a`, `b`
//! arbitrary precision rationals, so sign and comparison are decidable.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An element `a + b√2` of Q(√2).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QuadVal {
    a: BigRational,
    b: BigRational,
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl QuadVal {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        QuadVal { a, b }
    }

    pub fn int(a: i64) -> Self {
        QuadVal::new(rat(a, 1), BigRational::zero())
    }

    /// `a + b√2` with integer parts.
    pub fn ints(a: i64, b: i64) -> Self {
        QuadVal::new(rat(a, 1), rat(b, 1))
    }

    /// `an/ad + (bn/bd)√2`.
    pub fn frac(an: i64, ad: i64, bn: i64, bd: i64) -> Self {
        QuadVal::new(rat(an, ad), rat(bn, bd))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        QuadVal::new(rat(n, d), BigRational::zero())
    }

    pub fn from_rational(a: BigRational) -> Self {
        QuadVal::new(a, BigRational::zero())
    }

    pub fn zero() -> Self {
        QuadVal::default()
    }

    pub fn one() -> Self {
        QuadVal::int(1)
    }

    pub fn sqrt2() -> Self {
        QuadVal::ints(0, 1)
    }

    /// The silver ratio `s = 1 + √2`.
    pub fn silver() -> Self {
        QuadVal::ints(1, 1)
    }

    /// `√2/2`, the cosine of 45°.
    pub fn half_sqrt2() -> Self {
        QuadVal::frac(0, 1, 1, 2)
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn sqrt2_part(&self) -> &BigRational {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.b.is_zero() && self.a.is_integer()
    }

    /// Galois conjugate `a - b√2`.
    pub fn conj(&self) -> Self {
        QuadVal::new(self.a.clone(), -self.b.clone())
    }

    /// Field norm `a² - 2b²`.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - (&self.b * &self.b) * rat(2, 1)
    }

    /// Exact sign: -1, 0 or +1.
    pub fn signum(&self) -> i8 {
        let sa = sgn(&self.a);
        let sb = sgn(&self.b);
        if sa == sb || sb == 0 {
            return sa;
        }
        if sa == 0 {
            return sb;
        }
        // Opposite signs: the larger of a² and 2b² wins.
        match (&self.a * &self.a).cmp(&(&self.b * &self.b * rat(2, 1))) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }

    pub fn abs(&self) -> Self {
        if self.signum() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm();
        Ok(QuadVal::new(&self.a / &n, -(&self.b / &n)))
    }

    pub fn checked_div(&self, rhs: &QuadVal) -> Result<Self> {
        Ok(self * &rhs.inv()?)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = QuadVal::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Largest integer not exceeding the value, computed exactly.
    pub fn floor(&self) -> BigInt {
        // a + b√2 = (N + M√2)/D with D > 0.
        let d = self.a.denom() * self.b.denom();
        let n = self.a.numer() * self.b.denom();
        let m = self.b.numer() * self.a.denom();
        let r = (&m * &m * 2u32).magnitude().sqrt();
        let fm = match m.sign() {
            Sign::NoSign => BigInt::zero(),
            Sign::Plus => BigInt::from(r),
            Sign::Minus => -BigInt::from(r) - 1,
        };
        (n + fm).div_floor(&d)
    }

    /// Nearest double, from an exact truncation with 64 guard bits.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let est = self.a.to_f64().unwrap_or(0.0) + self.b.to_f64().unwrap_or(0.0) * std::f64::consts::SQRT_2;
        let e = if est != 0.0 && est.is_finite() { est.abs().log2().floor() as i64 } else { 0 };
        let shift = 116 - e;
        let scaled = if shift >= 0 {
            self * &QuadVal::from_rational(BigRational::from_integer(BigInt::one() << shift as usize))
        } else {
            self * &QuadVal::from_rational(BigRational::new(BigInt::one(), BigInt::one() << (-shift) as usize))
        };
        let f = scaled.floor().to_f64().unwrap_or(f64::NAN);
        f * 2f64.powi(-shift as i32)
    }
}

fn sgn(x: &BigRational) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

impl PartialOrd for QuadVal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadVal {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum().cmp(&0)
    }
}

impl fmt::Debug for QuadVal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Canonical text form `a/b+c/d*r2`.
impl fmt::Display for QuadVal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b = &self.b;
        if b.is_negative() {
            write!(f, "{}-{}*r2", self.a, -b)
        } else {
            write!(f, "{}+{}*r2", self.a, b)
        }
    }
}

fn parse_rat(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(s.to_string());
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Accepts the canonical form plus the shorthands `3`, `-1/2`, `r2`, `2*r2`, `1-r2`.
impl FromStr for QuadVal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(Error::Parse(s.to_string()));
        }
        let Some(body) = t.strip_suffix("r2") else {
            return Ok(QuadVal::from_rational(parse_rat(&t)?));
        };
        // Split off the √2 coefficient at the last sign that is not leading.
        let body = body.strip_suffix('*').unwrap_or(body);
        let cut = body
            .char_indices()
            .filter(|&(i, c)| i > 0 && (c == '+' || c == '-'))
            .map(|(i, _)| i)
            .last();
        let (ra, rb) = match cut {
            Some(i) => (&body[..i], &body[i..]),
            None => ("0", body),
        };
        let coef = match rb {
            "" | "+" => BigRational::one(),
            "-" => -BigRational::one(),
            x => parse_rat(x.strip_prefix('+').unwrap_or(x))?,
        };
        Ok(QuadVal::new(parse_rat(ra)?, coef))
    }
}

impl Serialize for QuadVal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for QuadVal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! binop {
    ($tr:ident, $f:ident, $body:expr) => {
        impl<'a> $tr<&'a QuadVal> for &'a QuadVal {
            type Output = QuadVal;
            fn $f(self, r: &'a QuadVal) -> QuadVal {
                let g: fn(&QuadVal, &QuadVal) -> QuadVal = $body;
                g(self, r)
            }
        }
        impl $tr<QuadVal> for QuadVal {
            type Output = QuadVal;
            fn $f(self, r: QuadVal) -> QuadVal {
                (&self).$f(&r)
            }
        }
        impl<'a> $tr<&'a QuadVal> for QuadVal {
            type Output = QuadVal;
            fn $f(self, r: &'a QuadVal) -> QuadVal {
                (&self).$f(r)
            }
        }
        impl<'a> $tr<QuadVal> for &'a QuadVal {
            type Output = QuadVal;
            fn $f(self, r: QuadVal) -> QuadVal {
                self.$f(&r)
            }
        }
    };
}

binop!(Add, add, |x, y| QuadVal::new(&x.a + &y.a, &x.b + &y.b));
binop!(Sub, sub, |x, y| QuadVal::new(&x.a - &y.a, &x.b - &y.b));
binop!(Mul, mul, |x, y| QuadVal::new(
    &x.a * &y.a + &x.b * &y.b * rat(2, 1),
    &x.a * &y.b + &x.b * &y.a
));
// Panics on a zero divisor, like integer division. Use `checked_div` otherwise.
binop!(Div, div, |x, y| x.checked_div(y).expect("division by zero in Q(√2)"));

impl Neg for QuadVal {
    type Output = QuadVal;
    fn neg(self) -> QuadVal {
        QuadVal::new(-self.a, -self.b)
    }
}

impl Neg for &QuadVal {
    type Output = QuadVal;
    fn neg(self) -> QuadVal {
        QuadVal::new(-self.a.clone(), -self.b.clone())
    }
}

impl AddAssign<&QuadVal> for QuadVal {
    fn add_assign(&mut self, r: &QuadVal) {
        self.a += &r.a;
        self.b += &r.b;
    }
}

impl SubAssign<&QuadVal> for QuadVal {
    fn sub_assign(&mut self, r: &QuadVal) {
        self.a -= &r.a;
        self.b -= &r.b;
    }
}

impl From<i64> for QuadVal {
    fn from(v: i64) -> Self {
        QuadVal::int(v)
    }
}

impl From<BigInt> for QuadVal {
    fn from(v: BigInt) -> Self {
        QuadVal::from_rational(BigRational::from_integer(v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(s: &str) -> QuadVal {
        s.parse().unwrap()
    }

    #[test]
    fn products() {
        let s = QuadVal::silver();
        assert_eq!(&s * &s, QuadVal::ints(3, 2));
        assert_eq!(QuadVal::ints(-1, 1) * &s, QuadVal::one());
        let s2 = &s * &s;
        assert_eq!(&s2 * &s2, QuadVal::ints(17, 12));
    }

    #[test]
    fn signs() {
        assert_eq!(QuadVal::ints(3, -2).signum(), 1);
        assert_eq!(QuadVal::ints(2, -2).signum(), -1);
        assert_eq!(QuadVal::zero().signum(), 0);
        assert_eq!(QuadVal::ints(-3, 2).signum(), -1);
    }

    #[test]
    fn approx() {
        assert_eq!(QuadVal::silver().to_f64(), 1.0 + std::f64::consts::SQRT_2);
        assert_eq!(QuadVal::zero().to_f64(), 0.0);
        assert!((QuadVal::ints(17, 12).to_f64() - 33.970_562_748_477_14).abs() < 1e-12);
        // Heavy cancellation: s^-20 computed as a difference of huge terms.
        let tiny = QuadVal::ints(-1, 1).pow(20);
        let want = (2f64.sqrt() - 1.0).powi(20);
        assert!((tiny.to_f64() / want - 1.0).abs() < 1e-13);
    }

    #[test]
    fn floors() {
        assert_eq!(QuadVal::sqrt2().floor(), BigInt::from(1));
        assert_eq!((-QuadVal::sqrt2()).floor(), BigInt::from(-2));
        assert_eq!(QuadVal::ratio(9, 4).floor(), BigInt::from(2));
        assert_eq!(QuadVal::ratio(-9, 4).floor(), BigInt::from(-3));
        assert_eq!(QuadVal::int(3).floor(), BigInt::from(3));
        assert_eq!(q("7/3-5/2*r2").floor(), BigInt::from(-2));
    }

    #[test]
    fn text_round_trip() {
        for s in ["1/2+3/4*r2", "-7+0*r2", "0-1/3*r2", "5/6+1*r2"] {
            let v = q(s);
            assert_eq!(q(&v.to_string()), v);
        }
        assert_eq!(q("r2"), QuadVal::sqrt2());
        assert_eq!(q("1-r2"), QuadVal::ints(1, -1));
        assert_eq!(q("-1/2"), QuadVal::ratio(-1, 2));
        assert_eq!(q("2*r2"), QuadVal::ints(0, 2));
        assert!("x".parse::<QuadVal>().is_err());
        assert!("1/0".parse::<QuadVal>().is_err());
    }

    #[test]
    fn zero_division() {
        assert!(QuadVal::zero().inv().is_err());
        assert!(QuadVal::one().checked_div(&QuadVal::zero()).is_err());
    }

    fn arb() -> impl Strategy<Value = QuadVal> {
        (-50i64..50, 1i64..20, -50i64..50, 1i64..20).prop_map(|(a, b, c, d)| QuadVal::frac(a, b, c, d))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]
        #[test]
        fn field_axioms(x in arb(), y in arb(), z in arb()) {
            prop_assert_eq!((&x + &y) + &z, &x + (&y + &z));
            prop_assert_eq!((&x * &y) * &z, &x * (&y * &z));
            prop_assert_eq!(&x * (&y + &z), &x * &y + &x * &z);
            if !x.is_zero() {
                prop_assert_eq!(&x * &x.inv().unwrap(), QuadVal::one());
            }
        }

        #[test]
        fn sign_laws(x in arb()) {
            prop_assert!((&x * &x).signum() >= 0);
            prop_assert_eq!(x.signum(), -(-&x).signum());
            let f = x.to_f64();
            if f.abs() > 1e-6 {
                prop_assert_eq!(x.signum(), if f > 0.0 { 1 } else { -1 });
            }
        }

        #[test]
        fn floor_brackets(x in arb()) {
            let f = QuadVal::from(x.floor());
            prop_assert!(f <= x);
            prop_assert!(x < &f + &QuadVal::one());
        }
    }
}
