use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// `p/q` with `q > 0`, always with a denominator.
pub fn format_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn from_int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

pub fn from_biguint(v: &BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(v.clone()))
}

pub fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// `⌊x n⌋`.
pub fn floor_times(x: &BigRational, n: i64) -> i64 {
    let prod = x * BigInt::from(n);
    let (q, _) = prod.numer().div_mod_floor(prod.denom());
    q.to_i64().expect("degree fits in i64")
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::from(1), |acc, k| acc * BigInt::from(k))
}

pub fn abs_diff_f64(a: &BigRational, b: &BigRational) -> f64 {
    to_f64(&(a - b).abs())
}

/// Parse `"-2"`, `"5/4"` or a decimal such as `"1.25"` exactly.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Input(format!("cannot parse {s:?} as a rational number"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int.starts_with('-');
        let int_part: BigInt = if int.is_empty() || int == "-" { BigInt::zero() } else { int.parse().map_err(|_| bad())? };
        let frac_part: BigInt = frac.parse().map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let frac_r = BigRational::new(frac_part, scale);
        let base = BigRational::from_integer(int_part);
        return Ok(if negative { base - frac_r } else { base + frac_r });
    }
    let v: BigInt = s.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(v))
}
