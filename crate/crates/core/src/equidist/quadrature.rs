//! Globally adaptive Gauss–Kronrod (7/15) quadrature.

use std::f64::consts::PI;

use crate::arith::numeric::ApproxReal;
use crate::{Error, Result};

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];

const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// Maximum number of subintervals before giving up.
const MAX_INTERVALS: usize = 4000;

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        kron += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    let (k, g) = (kron * h, gauss * h);
    // |K - G| overestimates the Kronrod error by orders of magnitude, which
    // keeps the bound honest near endpoint singularities
    (k, (k - g).abs() + 50.0 * f64::EPSILON * k.abs())
}

/// `int_a^b f` to absolute tolerance `tol`, splitting first at `breaks`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, breaks: &[f64], tol: f64) -> Result<ApproxReal> {
    let mut pts: Vec<f64> = std::iter::once(a)
        .chain(breaks.iter().copied().filter(|&x| x > a && x < b))
        .chain(std::iter::once(b))
        .collect();
    pts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    pts.dedup();
    let mut parts: Vec<(f64, f64, f64, f64)> = pts
        .windows(2)
        .map(|w| {
            let (v, e) = gk15(&f, w[0], w[1]);
            (w[0], w[1], v, e)
        })
        .collect();
    loop {
        let total: f64 = parts.iter().map(|p| p.2).sum();
        let err: f64 = parts.iter().map(|p| p.3).sum();
        if !total.is_finite() || !err.is_finite() {
            return Err(Error::Quadrature {
                tolerance: tol,
                estimate: total,
                error: err,
            });
        }
        if err <= tol {
            return Ok(ApproxReal::new(total, err));
        }
        if parts.len() >= MAX_INTERVALS {
            return Err(Error::Quadrature {
                tolerance: tol,
                estimate: total,
                error: err,
            });
        }
        let (i, _) = parts
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.partial_cmp(&y.1 .3).unwrap())
            .unwrap();
        let (lo, hi, _, _) = parts.swap_remove(i);
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return Err(Error::Quadrature {
                tolerance: tol,
                estimate: total,
                error: err,
            });
        }
        let (v1, e1) = gk15(&f, lo, mid);
        let (v2, e2) = gk15(&f, mid, hi);
        parts.push((lo, mid, v1, e1));
        parts.push((mid, hi, v2, e2));
    }
}

/// `int f dmu` for the arcsine measure `dx / (pi sqrt(4 - x^2))` on `[-2, 2]`,
/// computed as `(1/pi) int_0^pi f(2 cos theta) d theta`. `x_breaks` are
/// points of `[-2, 2]` where `f` is not smooth.
pub fn arcsine_integral<F: Fn(f64) -> f64>(f: F, x_breaks: &[f64], tol: f64) -> Result<ApproxReal> {
    let th: Vec<f64> = x_breaks
        .iter()
        .filter(|x| x.abs() < 2.0)
        .map(|x| (x / 2.0).acos())
        .collect();
    let r = integrate(|t| f(2.0 * t.cos()), 0.0, PI, &th, tol * PI)?;
    Ok(ApproxReal::new(r.value / PI, r.error_bound / PI))
}
