//! Weil heights, canonical heights for `T_d`, and the Dobrowolski-type floor.

use std::f64::consts::LN_2;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::algebraic::{AlgebraicNumber, Beta};
use crate::arith::numeric::{log_abs, ratio_to_f64, UNIT_ROUNDOFF};
use crate::arith::Rat;
use crate::chebyshev::{cos_point, ChebMap, PreperiodicOrbit};
use crate::{Error, Result};

/// Bit length at which exact iteration hands over to log-magnitude tracking.
pub const EXACT_BITS: u64 = 4096;

/// Iteration budget for [`canonical_height`].
pub const MAX_ITERATIONS: usize = 200;

/// Default constant in `C / (D (log D)^3)`.
pub const DEFAULT_DOBROWOLSKI_C: f64 = 0.25;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HeightMethod {
    ExactRational,
    MahlerNumeric,
    IterationLimit,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct HeightValue {
    pub value: f64,
    pub error_bound: f64,
    pub method: HeightMethod,
}

impl HeightValue {
    pub fn contains(&self, x: f64) -> bool {
        (self.value - x).abs() <= self.error_bound
    }
}

fn log_rounding(v: f64) -> f64 {
    8.0 * UNIT_ROUNDOFF * v.abs() + 4.0 * UNIT_ROUNDOFF
}

/// `h(r/s) = log max(|r|, |s|)` in lowest terms.
pub fn weil_height_rational(x: &Rat) -> HeightValue {
    let m = x.numer().abs().max(x.denom().clone());
    let value = if m.is_zero() { 0.0 } else { log_abs(&m) };
    HeightValue {
        value,
        error_bound: if value == 0.0 { 0.0 } else { log_rounding(value) },
        method: HeightMethod::ExactRational,
    }
}

/// `(1/D) (log |lead| + sum log+ |root_i|)` over certified roots.
pub fn weil_height_algebraic(a: &AlgebraicNumber) -> HeightValue {
    let d = a.degree() as f64;
    let mut total = log_abs(&a.lead());
    let mut err = log_rounding(total);
    for r in a.conjugates() {
        let m = r.value.norm();
        if m > 1.0 {
            let l = m.ln();
            total += l;
            err += log_rounding(l);
        }
        // log+ is 1-Lipschitz on |z| >= 1 after dividing by |z|
        err += r.error_bound / (m - r.error_bound).max(1.0);
    }
    HeightValue {
        value: total / d,
        error_bound: err / d + 4.0 * UNIT_ROUNDOFF * (total / d).abs(),
        method: HeightMethod::MahlerNumeric,
    }
}

pub fn weil_height(beta: &Beta) -> HeightValue {
    match beta {
        Beta::Rational(x) => weil_height_rational(x),
        Beta::Algebraic(a) => weil_height_algebraic(a),
    }
}

/// Weil height of `zeta_N + 1/zeta_N`, from the explicit conjugates.
pub fn weil_height_orbit(orbit: &PreperiodicOrbit) -> HeightValue {
    let d = orbit.size() as f64;
    let mut total = 0.0;
    let mut err = 0.0;
    for c in orbit.conjugates() {
        let m = c.value.abs();
        if m > 1.0 {
            total += m.ln();
            err += log_rounding(m.ln());
        }
        err += c.error_bound;
    }
    HeightValue {
        value: total / d,
        error_bound: err / d,
        method: HeightMethod::MahlerNumeric,
    }
}

/// `C / (D (log D)^3)`.
pub fn dobrowolski_floor(d: u64, c: f64) -> Result<f64> {
    if d < 2 {
        return Err(Error::domain(format!("Dobrowolski floor needs D >= 2, got {d}")));
    }
    if !(c > 0.0) {
        return Err(Error::domain("Dobrowolski constant must be positive"));
    }
    let l = (d as f64).ln();
    Ok(c / (d as f64 * l * l * l))
}

/// Canonical height `lim h(T_d^n x) / d^n`.
///
/// Every step satisfies `|h_T(y) - h(y)| <= log 2`, so the `n`-th estimate is
/// within `log 2 / d^n` of the limit; iteration stops once successive
/// estimates differ by less than `tol` and that bound is below `tol` too.
pub fn canonical_height(x: &Beta, map: ChebMap, tol: f64) -> Result<HeightValue> {
    if !(tol > 0.0) {
        return Err(Error::domain("tolerance must be positive"));
    }
    match x {
        Beta::Rational(q) => canonical_height_rational(q, map, tol),
        Beta::Algebraic(a) => canonical_height_algebraic(a, map, tol),
    }
}

/// Drives the estimate sequence and the stopping rule.
fn iterate<F>(d: u32, tol: f64, mut step: F) -> Result<HeightValue>
where
    F: FnMut(usize) -> (f64, f64),
{
    let df = d as f64;
    let mut prev: Option<f64> = None;
    let mut best = (f64::NAN, f64::INFINITY);
    for n in 0..=MAX_ITERATIONS {
        // (h(T^n x), computational error of that value)
        let (h, comp) = step(n);
        let scale = df.powi(n as i32);
        let est = h / scale;
        let bound = LN_2 / scale + comp / scale;
        best = (est, bound);
        if let Some(p) = prev {
            if (est - p).abs() < tol && bound <= tol {
                return Ok(HeightValue {
                    value: est.max(0.0),
                    error_bound: bound,
                    method: HeightMethod::IterationLimit,
                });
            }
        }
        prev = Some(est);
    }
    Err(Error::IterationBudget {
        iterations: MAX_ITERATIONS,
        estimate: best.0,
        bound: best.1,
    })
}

fn canonical_height_rational(x: &Rat, map: ChebMap, tol: f64) -> Result<HeightValue> {
    let d = map.degree();
    // exact phase on (r, s), always in lowest terms since T_d is monic
    let mut r = x.numer().clone();
    let mut s = x.denom().clone();
    // log phase: log|s|, and either z = r/s or log|z| once |z| is huge
    let mut log_s = 0.0f64;
    let mut z = 0.0f64;
    let mut log_z: Option<f64> = None;
    let mut exact = true;
    let inside = x.abs() <= Rat::from(BigInt::from(2));
    iterate(d, tol, |n| {
        if n > 0 {
            if exact {
                let (nr, ns) = map.apply_homogeneous(&r, &s);
                r = nr;
                s = ns;
            } else {
                log_s *= d as f64;
                match log_z.as_mut() {
                    Some(l) => *l *= d as f64,
                    None if z.abs().ln() * d as f64 > 600.0 => {
                        log_z = Some(z.abs().ln() * d as f64);
                    }
                    None => {
                        z = cheb_f64(d, z);
                        if inside {
                            z = z.clamp(-2.0, 2.0);
                        }
                    }
                }
            }
        }
        if exact && r.bits().max(s.bits()) > EXACT_BITS {
            exact = false;
            log_s = log_abs(&s);
            z = ratio_to_f64(&r, &s);
            if z.abs() > 1e250 || !z.is_finite() {
                log_z = Some(log_abs(&r) - log_s);
            }
        }
        if exact {
            let m = r.abs().max(s.clone());
            let h = if m.is_zero() { 0.0 } else { log_abs(&m) };
            (h, log_rounding(h))
        } else {
            let lp = match log_z {
                Some(l) => l.max(0.0),
                None => z.abs().ln().max(0.0),
            };
            let h = log_s + lp;
            // past the exact phase the orbit is either escaping (relative
            // error growing like d^n, harmless after division) or confined to
            // [-2, 2] where log+ lies in [0, log 2]
            let comp = if inside { LN_2 } else { log_rounding(h) + 1e-12 * h.abs() };
            (h, comp)
        }
    })
}

/// One step of `T_d` in double precision.
fn cheb_f64(d: u32, z: f64) -> f64 {
    let (mut a, mut b) = (2.0, z);
    for _ in 1..d {
        let c = z * b - a;
        a = b;
        b = c;
    }
    b
}

fn cheb_c64(d: u32, z: Complex64) -> Complex64 {
    let (mut a, mut b) = (Complex64::new(2.0, 0.0), z);
    for _ in 1..d {
        let c = z * b - a;
        a = b;
        b = c;
    }
    b
}

/// `(1/D) [log |lead| + sum_j log+ |T^n beta_j|]`, conjugates iterated in
/// double precision (switching to `log |z|` once `|z|` is huge).
fn canonical_height_algebraic(a: &AlgebraicNumber, map: ChebMap, tol: f64) -> Result<HeightValue> {
    let d = map.degree();
    let big_d = a.degree() as f64;
    let lead = log_abs(&a.lead());
    struct Track {
        z: Complex64,
        log_z: Option<f64>,
        confined: bool,
        start_err: f64,
    }
    let mut tracks: Vec<Track> = a
        .conjugates()
        .iter()
        .map(|r| Track {
            z: r.value,
            log_z: None,
            confined: r.value.im == 0.0 && r.value.re.abs() + r.error_bound <= 2.0,
            start_err: r.error_bound,
        })
        .collect();
    iterate(d, tol, |n| {
        let mut total = lead * (d as f64).powi(n as i32);
        let mut comp = log_rounding(total);
        for t in tracks.iter_mut() {
            if n > 0 {
                match t.log_z.as_mut() {
                    Some(l) => *l *= d as f64,
                    None if t.z.norm().ln() * d as f64 > 600.0 => {
                        t.log_z = Some(t.z.norm().ln() * d as f64);
                    }
                    None => {
                        t.z = cheb_c64(d, t.z);
                        if t.confined {
                            t.z = Complex64::new(t.z.re.clamp(-2.0, 2.0), 0.0);
                        }
                    }
                }
            }
            let lp = match t.log_z {
                Some(l) => l,
                None => t.z.norm().ln().max(0.0),
            };
            total += lp;
            comp += if t.confined {
                LN_2
            } else {
                log_rounding(lp) + 1e-12 * lp + t.start_err * (d as f64).powi(n as i32)
            };
        }
        (total / big_d, comp / big_d)
    })
}

/// Canonical height of the conjugate `2 cos(2 pi a / N)` of an orbit, with
/// the iterates computed exactly as angles: `T_d^n` sends `a / N` to
/// `d^n a / N`. The estimates tend to 0.
pub fn canonical_height_orbit_point(orbit: &PreperiodicOrbit, map: ChebMap, tol: f64) -> Result<HeightValue> {
    if !(tol > 0.0) {
        return Err(Error::domain("tolerance must be positive"));
    }
    let n_ord = orbit.order();
    let d = map.degree() as u64;
    let mut nums: Vec<u64> = orbit.numerators().to_vec();
    let size = nums.len() as f64;
    iterate(map.degree(), tol, |n| {
        if n > 0 {
            for a in nums.iter_mut() {
                *a = ((*a as u128 * d as u128) % n_ord as u128) as u64;
            }
        }
        let mut total = 0.0;
        let mut comp = 0.0;
        for &a in &nums {
            let c = cos_point(a, n_ord);
            total += c.value.abs().ln().max(0.0);
            comp += c.error_bound;
        }
        (total / size, comp / size)
    })
}

/// Both heights of `beta` and their gap, reported side by side.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct HeightComparison {
    pub weil: HeightValue,
    pub canonical: HeightValue,
    pub gap: f64,
}

pub fn compare_heights(beta: &Beta, map: ChebMap, tol: f64) -> Result<HeightComparison> {
    let weil = weil_height(beta);
    let canonical = canonical_height(beta, map, tol)?;
    Ok(HeightComparison {
        weil,
        canonical,
        gap: (weil.value - canonical.value).abs(),
    })
}
