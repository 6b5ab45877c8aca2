use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::Place;
use crate::algebraic::rational_ball;
use crate::arith::numeric::{log_abs, ratio_to_f64, ApproxComplex, ApproxReal, UNIT_ROUNDOFF};
use crate::arith::padic::{int_valuation, require_prime};
use crate::arith::Rat;
use crate::{Error, Result};

/// A point of the projective line: an exact rational, a complex ball (only
/// meaningful at the archimedean place), or infinity.
#[derive(Clone, Debug, PartialEq)]
pub enum PPoint {
    Rational(Rat),
    Complex(ApproxComplex),
    Infinity,
}

impl From<Rat> for PPoint {
    fn from(x: Rat) -> Self {
        PPoint::Rational(x)
    }
}

impl PPoint {
    pub fn int(n: i64) -> Self {
        PPoint::Rational(Rat::from_integer(n.into()))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        PPoint::Rational(Rat::new(n.into(), d.into()))
    }

    fn coords(&self) -> Option<(BigInt, BigInt)> {
        match self {
            PPoint::Rational(q) => Some((q.numer().clone(), q.denom().clone())),
            PPoint::Infinity => Some((BigInt::one(), BigInt::zero())),
            PPoint::Complex(_) => None,
        }
    }

    fn ball(&self) -> Option<ApproxComplex> {
        match self {
            PPoint::Rational(q) => Some(rational_ball(q)),
            PPoint::Complex(z) => Some(*z),
            PPoint::Infinity => None,
        }
    }
}

enum Chordal {
    /// `delta = p^(-k)` or `|cross| / (max_x max_y)`, with `-log delta`
    /// computed from the integers directly.
    Exact { delta: f64, lambda: f64 },
    Numeric { delta: ApproxReal, lambda: Option<ApproxReal> },
}

fn chordal(x: &PPoint, y: &PPoint, v: Place) -> Result<Chordal> {
    if let (Some((x1, x2)), Some((y1, y2))) = (x.coords(), y.coords()) {
        let cross: BigInt = &x1 * &y2 - &y1 * &x2;
        if cross.is_zero() {
            return Ok(Chordal::Exact { delta: 0.0, lambda: f64::INFINITY });
        }
        return Ok(match v {
            Place::Archimedean => {
                let mx = x1.abs().max(x2.abs());
                let my = y1.abs().max(y2.abs());
                let den = &mx * &my;
                Chordal::Exact {
                    delta: ratio_to_f64(&cross.abs(), &den),
                    lambda: log_abs(&den) - log_abs(&cross),
                }
            }
            Place::Finite(p) => {
                require_prime(p)?;
                // reduced coordinates have a unit among them at every prime
                let k = int_valuation(&cross, p);
                Chordal::Exact {
                    delta: (p as f64).powi(-(k as i32)),
                    lambda: k as f64 * (p as f64).ln(),
                }
            }
        });
    }
    if v != Place::Archimedean {
        return Err(Error::domain("complex points only have an archimedean chordal distance"));
    }
    // max(1, |z|) with z given by a ball
    let big = |z: &ApproxComplex| {
        let m = z.value.norm();
        ApproxReal::new(m.max(1.0), if m + z.error_bound > 1.0 { z.error_bound } else { 0.0 })
    };
    let (num, den) = match (x.ball(), y.ball()) {
        (Some(z), Some(w)) => {
            let d = z.sub(&w).abs();
            let (bz, bw) = (big(&z), big(&w));
            let prod = bz.value * bw.value;
            let err = bz.error_bound * bw.value + bw.error_bound * bz.value + bz.error_bound * bw.error_bound;
            (d, ApproxReal::new(prod, err + 2.0 * UNIT_ROUNDOFF * prod))
        }
        (Some(z), None) | (None, Some(z)) => (ApproxReal::exact(1.0), big(&z)),
        (None, None) => return Ok(Chordal::Exact { delta: 0.0, lambda: f64::INFINITY }),
    };
    let delta = ApproxReal::new(
        num.value / den.value,
        (num.error_bound + den.error_bound) / den.lower().max(1.0) + 4.0 * UNIT_ROUNDOFF,
    );
    let lambda = (num.lower() > 0.0).then(|| {
        let value = den.value.ln() - num.value.ln();
        let err = num.error_bound / num.lower() + den.error_bound / den.lower() + 4.0 * UNIT_ROUNDOFF * (1.0 + value.abs());
        ApproxReal::new(value, err)
    });
    Ok(Chordal::Numeric { delta, lambda })
}

/// `delta_v(x, y) = |x1 y2 - y1 x2|_v / (max(|x1|_v, |x2|_v) max(|y1|_v, |y2|_v))`
/// with the plain absolute value of the place. At finite places this lies in
/// `[0, 1]`; at the archimedean place the sup-norm version reaches 2
/// (`delta(-1, 1) = 2`), so `lambda >= -log 2` there.
pub fn chordal_distance(x: &PPoint, y: &PPoint, v: Place) -> Result<ApproxReal> {
    Ok(match chordal(x, y, v)? {
        Chordal::Exact { delta, .. } => ApproxReal::new(delta, 2.0 * UNIT_ROUNDOFF * delta),
        Chordal::Numeric { delta, .. } => delta,
    })
}

/// `lambda_{x,v}(y) = -log delta_v(x, y)`; an error when the points meet.
pub fn lambda(x: &PPoint, y: &PPoint, v: Place) -> Result<ApproxReal> {
    match chordal(x, y, v)? {
        Chordal::Exact { lambda, .. } if lambda.is_finite() => {
            Ok(ApproxReal::new(lambda, 4.0 * UNIT_ROUNDOFF * (1.0 + lambda.abs())))
        }
        Chordal::Numeric { lambda: Some(l), .. } => Ok(l),
        _ => Err(Error::domain(format!("lambda is infinite: {x:?} and {y:?} coincide at {v}"))),
    }
}
