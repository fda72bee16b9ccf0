//! Exact rational arithmetic helpers.
//!
//! Every weight, Cheeger constant and threshold in this crate is an exact
//! rational; floating point appears only in eigenvalue computations.

use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

pub type Rat = BigRational;

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat_u(n: u64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Fall back to a quotient of lossy conversions for huge operands.
        let n = r.numer().to_f64().unwrap_or(f64::MAX);
        let d = r.denom().to_f64().unwrap_or(f64::MAX);
        n / d
    })
}

/// Formats as `num/den` even for integral values, as the file formats require.
pub fn fmt_frac(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// (numerator, denominator) as i64 when both fit.
pub fn rat_to_i64_pair(r: &Rat) -> Option<(i64, i64)> {
    Some((r.numer().to_i64()?, r.denom().to_i64()?))
}

/// Parses `num/den`, a plain integer, or a decimal such as `0.25` (exact).
pub fn parse_rat(s: &str) -> Result<Rat> {
    let bad = || Error::domain(format!("cannot parse rational from `{s}`"));
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().map_err(|_| bad())?;
        let d: BigInt = den.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::domain(format!("zero denominator in `{s}`")));
        }
        return Ok(Rat::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let int = if int.is_empty() { "0" } else { int };
        let neg = int.starts_with('-');
        let i: BigInt = int.parse().map_err(|_| bad())?;
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let f: BigInt = frac.parse().map_err(|_| bad())?;
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let frac_part = Rat::new(f, scale);
        let whole = Rat::from_integer(i.abs());
        let mag = whole + frac_part;
        return Ok(if neg { -mag } else { mag });
    }
    let n: BigInt = s.trim().parse().map_err(|_| bad())?;
    Ok(Rat::from_integer(n))
}
