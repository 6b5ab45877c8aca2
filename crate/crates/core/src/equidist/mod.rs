//! The arcsine measure on `[-2, 2]`, its logarithmic potential, and orbit
//! averages of proximity functions against it.

mod averages;
pub mod quadrature;

use std::sync::OnceLock;

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::arith::numeric::ApproxReal;
use crate::{Error, Result};

pub use averages::{
    az_pairing_estimate, discrepancy, discrepancy_series, fit_loglog_slope, integral_value, orbit_lambda_average,
    total_lambda_identity_check, AzPairingReport, AzRow, DiscrepancyConstants, DiscrepancyRecord,
    LambdaIdentityReport, PlaceTerm,
};
pub use quadrature::arcsine_integral;

/// Tolerance used for the cached value of [`log_plus_integral`].
pub const KAPPA_TOL: f64 = 1e-12;

/// The larger root `w` of `w + 1/w = beta`, i.e. `|w| >= 1`.
pub fn joukowski_root(beta: Complex64) -> Complex64 {
    let s = (beta * beta - 4.0).sqrt();
    let (a, b) = ((beta + s) / 2.0, (beta - s) / 2.0);
    if a.norm() >= b.norm() {
        a
    } else {
        b
    }
}

/// `int log |beta - x| dmu(x) = log |w|` with `beta = w + 1/w`, `|w| >= 1`.
/// Vanishes on the segment.
pub fn equilibrium_potential(beta: Complex64) -> f64 {
    joukowski_root(beta).norm().ln().max(0.0)
}

/// The same potential by direct quadrature of `log |beta - x|`.
pub fn potential_by_quadrature(beta: Complex64, tol: f64) -> Result<ApproxReal> {
    let breaks = if beta.im.abs() < 1e-3 { vec![beta.re] } else { vec![] };
    if beta.im == 0.0 && beta.re.abs() <= 2.0 {
        // 2 cos t - 2 cos t0 = -4 sin((t + t0)/2) sin((t - t0)/2) avoids the
        // cancellation next to the log singularity
        let t0 = (beta.re / 2.0).acos();
        let f = |t: f64| {
            let v = 4.0 * ((t + t0) / 2.0).sin().abs() * ((t - t0) / 2.0).sin().abs();
            if v == 0.0 {
                0.0
            } else {
                v.ln()
            }
        };
        let r = quadrature::integrate(f, 0.0, PI, &[t0], tol * PI)?;
        return Ok(ApproxReal::new(r.value / PI, r.error_bound / PI));
    }
    arcsine_integral(|x| (Complex64::new(x, 0.0) - beta).norm().ln(), &breaks, tol)
}

/// `kappa = int log+ |x| dmu = (2/pi) int_0^{pi/3} log(2 cos t) dt`.
pub fn log_plus_integral() -> Result<ApproxReal> {
    static KAPPA: OnceLock<std::result::Result<ApproxReal, Error>> = OnceLock::new();
    KAPPA
        .get_or_init(|| arcsine_integral(|x| x.abs().ln().max(0.0), &[-1.0, 1.0], KAPPA_TOL))
        .clone()
}

/// `|int f(T_d x) dmu - int f dmu|` for the polynomial `f = sum c_k x^k`.
pub fn invariance_gap(coeffs: &[f64], d: u32) -> Result<f64> {
    if d == 0 {
        return Err(Error::domain("map degree must be positive"));
    }
    let f = |x: f64| coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c);
    let td = |x: f64| 2.0 * (d as f64 * (x / 2.0).clamp(-1.0, 1.0).acos()).cos();
    let scale = 1.0 + coeffs.iter().enumerate().map(|(k, c)| c.abs() * 2f64.powi(k as i32)).sum::<f64>();
    let a = arcsine_integral(|x| f(td(x)), &[], 1e-13 * scale)?;
    let b = arcsine_integral(f, &[], 1e-13 * scale)?;
    Ok((a.value - b.value).abs())
}
