//! Arbitrary-precision integers and reduced rationals.
//!
//! Every certificate comparison in this crate is a structural equality over
//! [`Rational`], so values are kept in canonical reduced form at all times:
//! `gcd(|num|, den) = 1`, `den > 0`, zero is `0/1`. Precision arguments are
//! carried by [`PrecP`], a positive exponent `p` standing for the tolerance
//! `2^-p`.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

pub use num_bigint::BigInt;
use num_bigint::Sign;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

/// Errors from exact arithmetic and rational-literal parsing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExactError {
    DivisionByZero,
    /// The literal did not match `-? digits (/ digits | . digits)?`.
    MalformedLiteral(String),
}

impl fmt::Display for ExactError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactError::DivisionByZero => write!(f, "division by zero"),
            ExactError::MalformedLiteral(s) => write!(f, "malformed rational literal `{s}`"),
        }
    }
}

impl std::error::Error for ExactError {}

/// An arbitrary-precision rational in reduced form with positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

impl Rational {
    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    /// Builds `num/den` in reduced form. Panics if `den == 0`; use
    /// [`Rational::checked_div`] when the denominator is data.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "rational with zero denominator");
        Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_bigints(num: BigInt, den: BigInt) -> Result<Self, ExactError> {
        if den.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        Ok(Rational(BigRational::new(num, den)))
    }

    pub fn from_int(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// Exact conversion of a finite `f64` (every finite double is a dyadic
    /// rational). Returns `None` for NaN or infinities.
    pub fn from_f64_exact(x: f64) -> Option<Self> {
        BigRational::from_float(x).map(Rational)
    }

    /// `2^e` for any integer `e`, negative exponents included.
    pub fn pow2(e: i64) -> Self {
        let one = BigInt::one();
        if e >= 0 {
            Rational(BigRational::from_integer(one << e as usize))
        } else {
            Rational(BigRational::new(one.clone(), one << (-e) as usize))
        }
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    /// Sign as -1, 0 or +1.
    pub fn signum(&self) -> i32 {
        match self.0.numer().sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn checked_div(&self, rhs: &Rational) -> Result<Rational, ExactError> {
        if rhs.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        Ok(Rational(&self.0 / &rhs.0))
    }

    /// Integer power, negative exponents allowed for nonzero values.
    pub fn pow(&self, e: i32) -> Rational {
        if e == 0 {
            return Rational::one();
        }
        assert!(!self.is_zero() || e > 0, "zero to a negative power");
        Rational(Pow::pow(&self.0, e))
    }

    /// Nearest `f64`; certificates never round-trip through this, it only
    /// feeds the floating-point SDP layer.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Rounds to the nearest multiple of `2^-p`, ties toward zero. The result
    /// `r` has denominator dividing `2^p` and satisfies `|r - self| <= 2^-(p+1)`.
    pub fn round_dyadic(&self, p: PrecP) -> Rational {
        let scaled = &self.0 * BigRational::from_integer(BigInt::one() << p.get() as usize);
        let k = round_ties_toward_zero(&scaled);
        Rational(BigRational::new(k, BigInt::one() << p.get() as usize))
    }

    /// Smallest integer `c` with `2^c >= self`. Requires `self > 0`.
    pub fn ceil_log2(&self) -> i64 {
        assert!(self.is_positive(), "ceil_log2 of a nonpositive value");
        // bits(n) - bits(d) brackets log2 within one; adjust by comparison.
        let mut c = self.numer().bits() as i64 - self.denom().bits() as i64;
        while Rational::pow2(c) < *self {
            c += 1;
        }
        while c > i64::MIN && Rational::pow2(c - 1) >= *self {
            c -= 1;
        }
        c
    }

    pub fn min(self, other: Rational) -> Rational {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Rational) -> Rational {
        if self >= other {
            self
        } else {
            other
        }
    }
}

fn round_ties_toward_zero(x: &BigRational) -> BigInt {
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    if x.is_negative() {
        (x + half).floor().to_integer()
    } else {
        (x - half).ceil().to_integer()
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

// Debug reuses Display; rationals read better as `5/6` than as a struct dump
// in assertion failures.
impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = ExactError;

    /// Accepts `-? digits`, `-? digits / digits` (positive denominator) and
    /// decimal literals `-? digits . digits` parsed as exact fractions.
    fn from_str(s: &str) -> Result<Self, ExactError> {
        let err = || ExactError::MalformedLiteral(s.to_string());
        let t = s.trim();
        let (neg, t) = match t.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, t),
        };
        let value = if let Some((n, d)) = t.split_once('/') {
            let num = parse_digits(n).ok_or_else(err)?;
            let den = parse_digits(d).ok_or_else(err)?;
            if den.is_zero() {
                return Err(ExactError::DivisionByZero);
            }
            BigRational::new(num, den)
        } else if let Some((int, frac)) = t.split_once('.') {
            let int = parse_digits(int).ok_or_else(err)?;
            if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
                return Err(err());
            }
            let scale = BigInt::from(10u32).pow(frac.len() as u32);
            let frac = parse_digits(frac).ok_or_else(err)?;
            BigRational::new(int * &scale + frac, scale)
        } else {
            BigRational::from_integer(parse_digits(t).ok_or_else(err)?)
        };
        Ok(Rational(if neg { -value } else { value }))
    }
}

fn parse_digits(s: &str) -> Option<BigInt> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational($trait::$method(&self.0, &rhs.0))
            }
        }
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                $trait::$method(&self, &rhs)
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                $trait::$method(&self, rhs)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Div for &Rational {
    type Output = Rational;
    /// Panics on a zero divisor; use [`Rational::checked_div`] for fallible division.
    fn div(self, rhs: &Rational) -> Rational {
        self.checked_div(rhs).expect("division by zero")
    }
}

impl Div for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        &self / &rhs
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&Rational> for Rational {
    fn mul_assign(&mut self, rhs: &Rational) {
        self.0 *= &rhs.0;
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_int(n)
    }
}

/// A precision exponent `p >= 1` standing for the tolerance `2^-p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PrecP(u32);

impl PrecP {
    pub fn new(p: u32) -> PrecP {
        assert!(p >= 1, "precision exponent must be >= 1");
        PrecP(p)
    }

    pub fn get(self) -> u32 {
        self.0
    }

    /// The tolerance `2^-p` this precision stands for.
    pub fn tolerance(self) -> Rational {
        Rational::pow2(-(self.0 as i64))
    }

    pub fn succ(self) -> PrecP {
        PrecP(self.0 + 1)
    }

    pub fn plus(self, k: u32) -> PrecP {
        PrecP(self.0 + k)
    }
}

impl fmt::Display for PrecP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}
