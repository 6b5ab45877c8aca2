//! Floating approximations carrying rigorous error radii.

use std::f64::consts::LN_2;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

/// Unit roundoff of binary64.
pub(crate) const UNIT_ROUNDOFF: f64 = f64::EPSILON / 2.0;

/// A real number known to lie within `error_bound` of `value`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ApproxReal {
    pub value: f64,
    pub error_bound: f64,
}

impl ApproxReal {
    pub fn new(value: f64, error_bound: f64) -> Self {
        debug_assert!(error_bound >= 0.0);
        ApproxReal { value, error_bound }
    }

    pub fn exact(value: f64) -> Self {
        ApproxReal::new(value, 0.0)
    }

    pub fn lower(&self) -> f64 {
        self.value - self.error_bound
    }

    pub fn upper(&self) -> f64 {
        self.value + self.error_bound
    }

    pub fn contains(&self, x: f64) -> bool {
        (x - self.value).abs() <= self.error_bound
    }
}

impl fmt::Display for ApproxReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ± {:.1e}", self.value, self.error_bound)
    }
}

/// A complex number in the closed disk of radius `error_bound` around `value`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ApproxComplex {
    pub value: Complex64,
    pub error_bound: f64,
}

impl ApproxComplex {
    pub fn new(value: Complex64, error_bound: f64) -> Self {
        debug_assert!(error_bound >= 0.0);
        ApproxComplex { value, error_bound }
    }

    pub fn exact(value: Complex64) -> Self {
        ApproxComplex::new(value, 0.0)
    }

    pub fn real(x: ApproxReal) -> Self {
        ApproxComplex::new(Complex64::new(x.value, 0.0), x.error_bound)
    }

    pub fn re(&self) -> f64 {
        self.value.re
    }

    pub fn im(&self) -> f64 {
        self.value.im
    }

    /// Modulus with the same radius (the modulus is 1-Lipschitz).
    pub fn abs(&self) -> ApproxReal {
        let m = self.value.norm();
        ApproxReal::new(m, self.error_bound + 2.0 * UNIT_ROUNDOFF * m)
    }

    pub fn add(&self, other: &ApproxComplex) -> ApproxComplex {
        let v = self.value + other.value;
        ApproxComplex::new(
            v,
            self.error_bound + other.error_bound + 2.0 * UNIT_ROUNDOFF * v.norm(),
        )
    }

    pub fn sub(&self, other: &ApproxComplex) -> ApproxComplex {
        let v = self.value - other.value;
        ApproxComplex::new(
            v,
            self.error_bound + other.error_bound + 2.0 * UNIT_ROUNDOFF * v.norm(),
        )
    }

    pub fn mul(&self, other: &ApproxComplex) -> ApproxComplex {
        let (a, b) = (self.value.norm(), other.value.norm());
        let (ra, rb) = (self.error_bound, other.error_bound);
        let v = self.value * other.value;
        let rad = a * rb + b * ra + ra * rb + 4.0 * UNIT_ROUNDOFF * a * b;
        ApproxComplex::new(v, rad * (1.0 + 4.0 * UNIT_ROUNDOFF))
    }

    pub fn scale(&self, k: f64) -> ApproxComplex {
        let v = self.value * k;
        ApproxComplex::new(
            v,
            self.error_bound * k.abs() * (1.0 + 2.0 * UNIT_ROUNDOFF) + 2.0 * UNIT_ROUNDOFF * v.norm(),
        )
    }

    pub fn contains(&self, z: Complex64) -> bool {
        (z - self.value).norm() <= self.error_bound
    }
}

impl Serialize for ApproxComplex {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("ApproxComplex", 3)?;
        s.serialize_field("re", &self.value.re)?;
        s.serialize_field("im", &self.value.im)?;
        s.serialize_field("errorBound", &self.error_bound)?;
        s.end()
    }
}

impl fmt::Display for ApproxComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.value.im >= 0.0 {
            write!(f, "{}+{}i", self.value.re, self.value.im)?;
        } else {
            write!(f, "{}{}i", self.value.re, self.value.im)?;
        }
        write!(f, " ± {:.1e}", self.error_bound)
    }
}

/// Natural logarithm of a nonzero big unsigned integer, valid beyond the
/// range of `f64`. Relative error is a few ulps.
pub fn log_biguint(n: &BigUint) -> f64 {
    assert!(!n.is_zero(), "log of zero");
    let bits = n.bits();
    if bits <= 1000 {
        n.to_f64().expect("fits in f64").ln()
    } else {
        let shift = bits - 64;
        let top = (n >> shift).to_f64().expect("64-bit mantissa");
        top.ln() + shift as f64 * LN_2
    }
}

/// `log |n|` for a nonzero big integer.
pub fn log_abs(n: &BigInt) -> f64 {
    log_biguint(n.magnitude())
}

/// `a / b` as an `f64`, for big integers of any size (b nonzero).
pub fn ratio_to_f64(a: &BigInt, b: &BigInt) -> f64 {
    if a.is_zero() {
        return 0.0;
    }
    let sign = if a.is_negative() != b.is_negative() { -1.0 } else { 1.0 };
    let (abits, bbits) = (a.bits(), b.bits());
    if abits <= 1000 && bbits <= 1000 {
        return a.to_f64().unwrap() / b.to_f64().unwrap();
    }
    let shift = abits.max(bbits) - 900;
    if abits.min(bbits) > shift + 60 {
        let an = (a.magnitude() >> shift).to_f64().unwrap();
        let bn = (b.magnitude() >> shift).to_f64().unwrap();
        return sign * an / bn;
    }
    sign * (log_abs(a) - log_abs(b)).exp()
}
