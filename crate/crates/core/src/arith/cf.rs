//! Continued-fraction convergents of an approximately known real number.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::numeric::ApproxReal;
use super::Rat;
use crate::{Error, Result};

/// A convergent `a / n` in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Convergent {
    pub a: i64,
    pub n: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Convergents {
    pub convergents: Vec<Convergent>,
    pub partial_quotients: Vec<i64>,
    /// Set when the interval `value ± error_bound` stopped determining the
    /// next partial quotient before the denominator bound was reached.
    pub truncated: bool,
}

/// Convergents with denominators at most `nmax` that hold for every real in
/// `theta.value ± theta.error_bound`.
pub fn cf_convergents(theta: ApproxReal, nmax: u64) -> Result<Convergents> {
    if nmax == 0 {
        return Err(Error::domain("denominator bound must be positive"));
    }
    let v = Rat::from_float(theta.value).ok_or_else(|| Error::domain("non-finite angle"))?;
    let e = Rat::from_float(theta.error_bound)
        .ok_or_else(|| Error::domain("non-finite error bound"))?;
    cf_interval(&v - &e, &v + &e, nmax)
}

/// Convergents common to every real in the closed interval `[lo, hi]`.
pub fn cf_interval(mut lo: Rat, mut hi: Rat, nmax: u64) -> Result<Convergents> {
    // (p0, q0) and (p1, q1) are the two previous convergents
    let (mut p0, mut q0) = (BigInt::zero(), BigInt::one());
    let (mut p1, mut q1) = (BigInt::one(), BigInt::zero());
    let mut out = Convergents {
        convergents: Vec::new(),
        partial_quotients: Vec::new(),
        truncated: false,
    };
    let nmax = BigInt::from(nmax);
    loop {
        let a = lo.floor();
        if hi.floor() != a {
            out.truncated = true;
            break;
        }
        let a = a.to_integer();
        let p = &a * &p1 + &p0;
        let q = &a * &q1 + &q0;
        if q > nmax {
            break;
        }
        let conv = Convergent {
            a: p.to_i64().ok_or_else(|| Error::domain("numerator overflow"))?,
            n: q.to_u64().unwrap(),
        };
        debug_assert!(p.gcd(&q).is_one());
        if out.convergents.last().map(|c| c.n) == Some(conv.n) {
            out.convergents.pop();
        }
        out.convergents.push(conv);
        out.partial_quotients.push(a.to_i64().unwrap_or(i64::MAX));
        (p0, p1, q0, q1) = (p1, p, q1, q);

        let flo = &lo - Rat::from(a.clone());
        let fhi = &hi - Rat::from(a);
        if flo.is_zero() && fhi.is_zero() {
            break;
        }
        if flo.is_zero() || !flo.is_positive() {
            // the interval touches an integer, so the tail is undetermined
            out.truncated = true;
            break;
        }
        (lo, hi) = (fhi.recip(), flo.recip());
    }
    Ok(out)
}
