//! Two-term linear forms in logarithms, the resulting lower bound for
//! rational approximations to the angle of a unit-circle algebraic number,
//! and the archimedean proximity bound for preperiodic orbits.

use std::f64::consts::PI;

use num_integer::Integer;
use serde::Serialize;

use crate::algebraic::{AlgebraicNumber, Beta};
use crate::arith::cf::cf_convergents;
use crate::arith::numeric::{ApproxReal, UNIT_ROUNDOFF};
use crate::arith::IntPoly;
use crate::chebyshev::{cyclotomic, PreperiodicOrbit};
use crate::heights::{weil_height, weil_height_algebraic};
use crate::integrality::arch_proximity_beta;
use crate::{Error, Result};

/// Leading constant of the two-logarithm bound.
pub const BAKER_CONSTANT: f64 = 21600.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BakerInstance {
    pub d1: u64,
    pub log_a1: f64,
    pub log_a2: f64,
    pub b1: i64,
    pub b2: i64,
    /// `|b1| / (D1 log A2) + |b2| / (D1 log A1)`.
    pub b: f64,
}

impl BakerInstance {
    /// Checks `log A_j >= 1/D1` and nonzero coefficients, and fills in `B`.
    /// The height conditions on `log A_j` are the caller's to meet.
    pub fn new(d1: u64, log_a1: f64, log_a2: f64, b1: i64, b2: i64) -> Result<Self> {
        if d1 == 0 {
            return Err(Error::domain("D1 must be positive"));
        }
        let floor = 1.0 / d1 as f64;
        if !(log_a1 >= floor && log_a2 >= floor) {
            return Err(Error::domain(format!("log A_j must be at least 1/D1 = {floor}")));
        }
        if b1 == 0 || b2 == 0 {
            return Err(Error::domain("b1 and b2 must be nonzero"));
        }
        let d = d1 as f64;
        let b = b1.unsigned_abs() as f64 / (d * log_a2) + b2.unsigned_abs() as f64 / (d * log_a1);
        Ok(BakerInstance { d1, log_a1, log_a2, b1, b2, b })
    }
}

/// `-21600 D1^4 log A1 log A2 max(10, log B)^2`, the lower bound for
/// `log |b1 log alpha1 + b2 log alpha2|` when the form is nonzero.
pub fn baker_lower_bound(inst: &BakerInstance) -> f64 {
    baker_formula(inst.d1 as f64, inst.log_a1, inst.log_a2, inst.b.ln())
}

/// The bound as a function of `D1`, `log A1`, `log A2` and `log B`.
pub fn baker_formula(d1: f64, log_a1: f64, log_a2: f64, log_b: f64) -> f64 {
    let m = log_b.max(10.0);
    -BAKER_CONSTANT * d1.powi(4) * log_a1 * log_a2 * m * m
}

/// Whether `beta` is a root of unity: its minimal polynomial is some
/// `Phi_m`, and `phi(m) >= sqrt(m/2)` bounds `m <= 2 D^2`.
pub fn is_root_of_unity(beta: &AlgebraicNumber) -> bool {
    let f = beta.minpoly();
    if !f.is_monic() && !(-f.lead() == num_bigint::BigInt::from(1)) {
        return false;
    }
    let d = beta.degree() as u64;
    let neg = IntPoly::new(f.coeffs().iter().map(|c| -c).collect());
    (1..=2 * d * d + 2).any(|m| {
        let c = cyclotomic(m);
        c == *f || c == neg
    })
}

/// `theta0 = arg(beta) / 2 pi` in `[0, 1)`, with the argument error
/// propagated from the root ball.
pub fn unit_angle(beta: &AlgebraicNumber) -> Result<ApproxReal> {
    if !beta.on_unit_circle() {
        return Err(Error::domain(format!("{beta} is not on the unit circle")));
    }
    let z = beta.value();
    let r = z.value.norm();
    if z.error_bound >= r {
        return Err(Error::RootNonConvergence {
            bits: 53,
            best_bound: z.error_bound,
        });
    }
    let t = z.value.im.atan2(z.value.re) / (2.0 * PI);
    let t = if t < 0.0 { t + 1.0 } else { t };
    let err = (z.error_bound / r).min(1.0).asin() / (2.0 * PI) + 2.0 * UNIT_ROUNDOFF;
    Ok(ApproxReal::new(t, err))
}

/// The embedding of `f` with positive imaginary part (the first one when
/// there are several).
pub fn upper_half_root(f: IntPoly) -> Result<AlgebraicNumber> {
    let probe = AlgebraicNumber::new(f.clone(), 0)?;
    let k = probe
        .conjugates()
        .iter()
        .position(|z| z.value.im > 0.0)
        .ok_or_else(|| Error::domain("no root in the upper half plane"))?;
    AlgebraicNumber::new(f, k)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CorollaryGap {
    pub a: i64,
    pub n: i64,
    pub theta0: ApproxReal,
    /// `log |a/N - theta0|`.
    pub lhs: ApproxReal,
    /// `-C_eps D^3 h(beta) |N|^eps`.
    pub rhs: f64,
    /// `|a 2 pi i - N log beta| / (2 pi |N|)` on the principal branch; equals
    /// `|a/N - theta0|`.
    pub linear_form_ratio: f64,
    /// `a/N = theta0`; never set for non-roots of unity.
    pub equal: bool,
    /// `lhs >= rhs` for every value in the certified ball.
    pub holds: bool,
}

/// One instance of the angle bound: either `a/N = theta0` or
/// `log |a/N - theta0| >= -C_eps D^3 h(beta) |N|^eps`.
pub fn corollary_gap(beta: &AlgebraicNumber, a: i64, n: i64, eps: f64, c_eps: f64) -> Result<CorollaryGap> {
    if n == 0 || n.abs() == 1 {
        return Err(Error::domain("N must not be 0 or ±1"));
    }
    if a.gcd(&n) != 1 {
        return Err(Error::domain(format!("gcd({a}, {n}) must be 1")));
    }
    if !(eps > 0.0 && c_eps > 0.0) {
        return Err(Error::domain("eps and C_eps must be positive"));
    }
    if is_root_of_unity(beta) {
        return Err(Error::domain(format!("{beta} is a root of unity")));
    }
    let theta0 = unit_angle(beta)?;
    let x = a as f64 / n as f64 - theta0.value;
    let ex = theta0.error_bound + UNIT_ROUNDOFF * (a as f64 / n as f64).abs();
    if x.abs() <= ex {
        return Err(Error::RootNonConvergence {
            bits: 53,
            best_bound: ex,
        });
    }
    let lhs = ApproxReal::new(x.abs().ln(), ex / (x.abs() - ex) + UNIT_ROUNDOFF);
    let d = beta.degree() as f64;
    let h = weil_height_algebraic(beta).value;
    let rhs = -c_eps * d.powi(3) * h * (n.unsigned_abs() as f64).powf(eps);
    let z = beta.value().value;
    let log_beta = z.im.atan2(z.re);
    let form = (2.0 * PI * a as f64 - n as f64 * log_beta).rem_euclid(2.0 * PI * n.unsigned_abs() as f64);
    let form = form.min(2.0 * PI * n.unsigned_abs() as f64 - form);
    Ok(CorollaryGap {
        a,
        n,
        theta0,
        lhs,
        rhs,
        linear_form_ratio: form / (2.0 * PI * n.unsigned_abs() as f64),
        equal: false,
        holds: lhs.lower() >= rhs,
    })
}

/// The Baker instance behind `(a, N)`: `alpha1 = 1` with `log alpha1 = 2 pi i`,
/// `alpha2 = beta`, `b1 = a`, `b2 = -N`, `log A1 = 1/D`,
/// `log A2 = max(h(beta), 1/D)`.
pub fn corollary_instance(d: u64, h: f64, a: i64, n: i64) -> Result<BakerInstance> {
    let floor = 1.0 / d as f64;
    BakerInstance::new(d, floor, h.max(floor), if a == 0 { 1 } else { a }, -n)
}

/// `C_eps` assembled from the proof: `log |a/N - theta0| >= Baker(N) - log(2 pi N)`,
/// so any `C >= (log(2 pi N) + |Baker(N)|) / (D^3 h N^eps)` for all `N` works.
/// The supremum is taken over a log-spaced grid of `N` with the worst case
/// `|a| = N`, far enough out that the ratio is decreasing.
pub fn explicit_c_eps(d: u64, h: f64, eps: f64) -> Result<f64> {
    if !(eps > 0.0 && h > 0.0) {
        return Err(Error::domain("eps and h(beta) must be positive"));
    }
    let dd = d as f64;
    let log_a1 = 1.0 / dd;
    let log_a2 = h.max(log_a1);
    let top = (40.0f64).max(8.0 / eps);
    let mut best: f64 = 0.0;
    let mut t = 2f64.ln();
    while t <= top {
        let n = t.exp();
        let b = n / (dd * log_a2) + n / (dd * log_a1);
        let m = b.ln().max(10.0);
        let baker = BAKER_CONSTANT * dd.powi(4) * log_a1 * log_a2 * m * m;
        let ratio = ((2.0 * PI * n).ln() + baker) / (dd.powi(3) * h * (eps * t).exp());
        best = best.max(ratio);
        t += 0.01;
    }
    // one grid step of slack in N
    Ok(best * (0.01 * eps).exp())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CorollaryScan {
    pub beta: String,
    pub degree: usize,
    pub height: f64,
    pub theta0: ApproxReal,
    pub eps: f64,
    pub nmax: u64,
    pub explicit_c_eps: f64,
    /// `max(-lhs) / (D^3 h N^eps)` over the convergents.
    pub calibrated_c_eps: f64,
    pub rows: Vec<CorollaryGap>,
    /// Convergent denominators violating the bound with the explicit constant.
    pub violations: Vec<i64>,
    /// The angle ball ran out of precision before `nmax`.
    pub truncated: bool,
}

/// [`corollary_gap`] over the continued-fraction convergents of `theta0` with
/// `2 <= N <= nmax`, using `c_eps` or the explicit constant when absent.
pub fn corollary_scan(beta: &AlgebraicNumber, nmax: u64, eps: f64, c_eps: Option<f64>) -> Result<CorollaryScan> {
    if is_root_of_unity(beta) {
        return Err(Error::domain(format!("{beta} is a root of unity")));
    }
    let theta0 = unit_angle(beta)?;
    let d = beta.degree() as u64;
    let h = weil_height_algebraic(beta).value;
    let explicit = explicit_c_eps(d, h, eps)?;
    let c = c_eps.unwrap_or(explicit);
    let cf = cf_convergents(theta0, nmax)?;
    let mut rows = Vec::new();
    let mut calibrated: f64 = 0.0;
    for cv in cf.convergents.iter().filter(|c| c.n >= 2) {
        let row = corollary_gap(beta, cv.a, cv.n as i64, eps, c)?;
        let scale = (d as f64).powi(3) * h * (cv.n as f64).powf(eps);
        calibrated = calibrated.max(-row.lhs.lower() / scale);
        rows.push(row);
    }
    let violations = rows.iter().filter(|r| !r.holds).map(|r| r.n).collect();
    Ok(CorollaryScan {
        beta: beta.to_string(),
        degree: beta.degree(),
        height: h,
        theta0,
        eps,
        nmax,
        explicit_c_eps: explicit,
        calibrated_c_eps: calibrated,
        rows,
        violations,
        truncated: cf.truncated,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Prop31Row {
    pub orbit_n: u64,
    pub orbit_size: usize,
    /// `max -log |alpha - beta|` over the orbit and the conjugates of `beta`.
    pub proximity: f64,
    /// `C_eps D^3 (h(beta) + 1) |P|^eps`.
    pub bound: f64,
    pub holds: bool,
    /// `|beta| - 2 <= |alpha - beta| <= |beta| + 2`, checked when `|beta| > 2`.
    pub sandwich: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Prop31Report {
    pub beta: String,
    pub degree: usize,
    pub height: f64,
    pub eps: f64,
    pub c_eps: f64,
    pub rows: Vec<Prop31Row>,
    pub violations: Vec<u64>,
}

/// Archimedean proximity of every orbit `N <= nmax` against
/// `C_eps D^3 (h(beta) + 1) |P|^eps`.
pub fn prop31_check(beta: &Beta, nmax: u64, eps: f64, c_eps: f64) -> Result<Prop31Report> {
    beta.require_non_preperiodic()?;
    if !(eps > 0.0 && c_eps > 0.0) {
        return Err(Error::domain("eps and C_eps must be positive"));
    }
    let d = beta.degree();
    let h = weil_height(beta).value;
    let conj = beta.conjugates();
    let mut rows = Vec::with_capacity(nmax as usize);
    for n in 1..=nmax {
        let orbit = PreperiodicOrbit::new(n)?;
        let prox = arch_proximity_beta(&orbit, beta)?;
        let bound = c_eps * (d as f64).powi(3) * (h + 1.0) * (orbit.size() as f64).powf(eps);
        let mut sandwich = None;
        for b in conj.iter().filter(|b| b.value.norm() - b.error_bound > 2.0) {
            let m = b.value.norm();
            let slack = b.error_bound + 1e-12;
            let ok = orbit.conjugates().iter().all(|a| {
                let dist = (b.value - a.value).norm();
                dist >= m - 2.0 - slack - a.error_bound && dist <= m + 2.0 + slack + a.error_bound
            });
            sandwich = Some(sandwich.unwrap_or(true) && ok);
        }
        rows.push(Prop31Row {
            orbit_n: n,
            orbit_size: orbit.size(),
            proximity: prox.value,
            bound,
            holds: prox.upper() < bound && sandwich != Some(false),
            sandwich,
        });
    }
    let violations = rows.iter().filter(|r| !r.holds).map(|r| r.orbit_n).collect();
    Ok(Prop31Report {
        beta: beta.to_string(),
        degree: d,
        height: h,
        eps,
        c_eps,
        rows,
        violations,
    })
}

/// The five unit-circle test points `(q^2 + p^2) x^2 - 2 (q^2 - p^2) x + (q^2 + p^2)`.
pub fn unit_circle_test_points() -> Vec<IntPoly> {
    [[5, -6, 5], [13, -10, 13], [25, -14, 25], [17, -16, 17], [29, -4, 29]]
        .iter()
        .map(|c| IntPoly::from_i64(c))
        .collect()
}
