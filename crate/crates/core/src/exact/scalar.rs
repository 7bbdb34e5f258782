use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::ParseError;

/// Exact rational number, always in lowest terms with positive denominator.
pub type Scalar = BigRational;

pub fn int(v: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(v))
}

pub fn frac(num: i64, den: i64) -> Scalar {
    assert!(den != 0, "zero denominator");
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn from_bigint(v: BigInt) -> Scalar {
    BigRational::from_integer(v)
}

pub fn binomial(n: i64, k: i64) -> BigInt {
    if n < 0 || k < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub fn binom(n: i64, k: i64) -> Scalar {
    from_bigint(binomial(n, k))
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Integer value of `s`, if it is an integer that fits in `i64`.
pub fn to_i64(s: &Scalar) -> Option<i64> {
    if !s.is_integer() {
        return None;
    }
    i64::try_from(s.numer()).ok()
}

/// Renders `s` as `p/q`, or `p` when the denominator is one.
pub fn format_scalar(s: &Scalar) -> String {
    if s.is_integer() {
        s.numer().to_string()
    } else {
        format!("{}/{}", s.numer(), s.denom())
    }
}

/// Parses `p`, `p/q` or `-p/q` with arbitrary-size integers.
pub fn parse_scalar(text: &str) -> Result<Scalar, ParseError> {
    let t = text.trim();
    let bad = || ParseError::Rational(text.to_string());
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

pub(crate) fn sign_factor(exp: i64) -> Scalar {
    if exp.rem_euclid(2) == 0 {
        Scalar::one()
    } else {
        -Scalar::one()
    }
}
