use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::{equilibrium_potential, log_plus_integral};
use crate::algebraic::Beta;
use crate::arith::factor::factorize;
use crate::arith::numeric::{log_abs, log_biguint, ApproxReal, UNIT_ROUNDOFF};
use crate::arith::padic::{int_valuation, require_prime};
use crate::arith::Rat;
use crate::chebyshev::{ChebMap, PreperiodicOrbit};
use crate::heights::{canonical_height, weil_height, weil_height_orbit};
use crate::integrality::{
    arch_proximity_beta, difference_valuations, lambda, meeting_primes_trial, meeting_value, newton_polygon_valuations,
    PPoint, Place,
};
use crate::{Error, Result};

fn arch_average(orbit: &PreperiodicOrbit, beta: &Beta) -> Result<ApproxReal> {
    let bs = beta.conjugates();
    let mut total = 0.0;
    let mut err = 0.0;
    for a in orbit.conjugates() {
        let x = PPoint::Complex(crate::arith::numeric::ApproxComplex::real(*a));
        for b in &bs {
            let l = lambda(&x, &PPoint::Complex(*b), Place::Archimedean).map_err(|_| Error::Coincidence {
                point: beta.to_string(),
                order: orbit.order(),
            })?;
            total += l.value;
            err += l.error_bound;
        }
    }
    let n = (orbit.size() * bs.len()) as f64;
    Ok(ApproxReal::new(total / n, err / n + UNIT_ROUNDOFF * total.abs() / n))
}

fn finite_average(orbit: &PreperiodicOrbit, beta: &Beta, p: u64) -> Result<ApproxReal> {
    require_prime(p)?;
    let m = meeting_value(orbit, beta)?;
    let v = int_valuation(&m, p) as f64;
    let value = v * (p as f64).ln() / (orbit.size() * beta.degree()) as f64;
    Ok(ApproxReal::new(value, 4.0 * UNIT_ROUNDOFF * value))
}

/// `(1 / dD) sum lambda_v(sigma(alpha), tau(beta))` over all conjugate pairs.
///
/// At a prime `p` the pair sum equals `v_p(M) log p` where `M` is `F(r, s)`
/// for rational `beta` and the resultant with `Psi_N` otherwise.
pub fn orbit_lambda_average(orbit: &PreperiodicOrbit, beta: &Beta, place: Place) -> Result<ApproxReal> {
    match place {
        Place::Archimedean => {
            meeting_value(orbit, beta)?;
            arch_average(orbit, beta)
        }
        Place::Finite(p) => finite_average(orbit, beta, p),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PlaceTerm {
    pub place: Place,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LambdaIdentityReport {
    pub orbit_n: u64,
    pub orbit_size: usize,
    pub beta: String,
    pub terms: Vec<PlaceTerm>,
    /// Contribution of a cofactor that could not be split into primes.
    pub unfactored: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub gap: f64,
}

/// Sum of the orbit averages over every place against `h(beta) + h(alpha)`.
pub fn total_lambda_identity_check(orbit: &PreperiodicOrbit, beta: &Beta) -> Result<LambdaIdentityReport> {
    let dd = (orbit.size() * beta.degree()) as f64;
    let mut terms = vec![PlaceTerm {
        place: Place::Archimedean,
        value: arch_average(orbit, beta)?.value,
    }];
    // no rho: an unsplit cofactor is lumped into one term, which keeps lhs exact
    let mp = meeting_primes_trial(orbit, beta)?;
    let mut primes: Vec<(BigUint, u64)> = mp.primes.iter().map(|(p, e)| (p.clone(), *e)).collect();
    for q in factorize(&beta.lead())? {
        if !primes.iter().any(|(p, _)| *p == q) {
            primes.push((q, 0));
        }
    }
    primes.sort();
    primes.dedup();
    let mut big = 0.0;
    for (p, e) in primes {
        let value = e as f64 * log_biguint(&p) / dd;
        match p.to_u64() {
            Some(q) => terms.push(PlaceTerm {
                place: Place::Finite(q),
                value,
            }),
            None => big += value,
        }
    }
    let unfactored = big + if mp.cofactor.is_one() { 0.0 } else { log_biguint(&mp.cofactor) / dd };
    let lhs = terms.iter().map(|t| t.value).sum::<f64>() + unfactored;
    let rhs = weil_height(beta).value + weil_height_orbit(orbit).value;
    Ok(LambdaIdentityReport {
        orbit_n: orbit.order(),
        orbit_size: orbit.size(),
        beta: beta.to_string(),
        terms,
        unfactored,
        lhs,
        rhs,
        gap: (lhs - rhs).abs(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DiscrepancyConstants {
    pub c: f64,
    pub delta: f64,
    pub a: f64,
}

impl Default for DiscrepancyConstants {
    fn default() -> Self {
        DiscrepancyConstants { c: 1.0, delta: 0.25, a: 1.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DiscrepancyRecord {
    pub orbit_n: u64,
    pub orbit_size: usize,
    pub place: Place,
    pub orbit_average: f64,
    pub integral_value: f64,
    pub discrepancy: f64,
    pub bound_rhs: f64,
    pub within_bound: bool,
    /// Largest `-log |alpha - beta|_v` over the orbit (at finite places and
    /// algebraic `beta`, the upper bound `v_p(M) log p`).
    pub max_proximity: f64,
    pub hypothesis_holds: bool,
}

/// `int lambda_{beta, v} dmu_v`. At the archimedean place this is
/// `kappa + log+ |beta| - log |w|`, averaged over the conjugates of `beta`;
/// at finite places the measure is the Dirac mass at the Gauss point and the
/// integral vanishes.
pub fn integral_value(beta: &Beta, place: Place) -> Result<f64> {
    match place {
        Place::Archimedean => {
            let kappa = log_plus_integral()?.value;
            let bs = beta.conjugates();
            let sum: f64 = bs
                .iter()
                .map(|b| kappa + b.value.norm().ln().max(0.0) - equilibrium_potential(b.value))
                .sum();
            Ok(sum / bs.len() as f64)
        }
        Place::Finite(p) => {
            require_prime(p)?;
            Ok(0.0)
        }
    }
}

fn log_plus_at(beta: &Beta, place: Place) -> Result<f64> {
    Ok(match place {
        Place::Archimedean => beta
            .conjugates()
            .iter()
            .map(|b| b.value.norm().ln().max(0.0))
            .fold(0.0, f64::max),
        Place::Finite(p) => {
            let vmin = match beta {
                Beta::Rational(x) => -(int_valuation(x.denom(), p) as f64),
                Beta::Algebraic(a) => newton_polygon_valuations(a.minpoly(), p)?[0].to_f64(),
            };
            (-vmin).max(0.0) * (p as f64).ln()
        }
    })
}

fn max_proximity(orbit: &PreperiodicOrbit, beta: &Beta, place: Place) -> Result<f64> {
    match (place, beta) {
        (Place::Archimedean, _) => Ok(arch_proximity_beta(orbit, beta)?.value),
        (Place::Finite(p), Beta::Rational(x)) => {
            let v = difference_valuations(orbit.order(), x, p)?;
            Ok(v.last().unwrap().to_f64() * (p as f64).ln())
        }
        (Place::Finite(p), Beta::Algebraic(_)) => {
            Ok(int_valuation(&meeting_value(orbit, beta)?, p) as f64 * (p as f64).ln())
        }
    }
}

/// Orbit average against the integral, with the rate bound
/// `C |P|^{-delta} sqrt(log |P|) A (h(beta) + log+ |beta|_v + 1)` and the
/// proximity hypothesis `max lambda <= A (h(beta) + 1) |P|^{1/2 - delta}`.
pub fn discrepancy(
    orbit: &PreperiodicOrbit,
    beta: &Beta,
    place: Place,
    k: DiscrepancyConstants,
) -> Result<DiscrepancyRecord> {
    if !(k.delta > 0.0 && k.delta < 0.5) {
        return Err(Error::domain("delta must lie in (0, 1/2)"));
    }
    if !(k.c > 0.0 && k.a > 0.0) {
        return Err(Error::domain("C and A must be positive"));
    }
    let orbit_average = orbit_lambda_average(orbit, beta, place)?.value;
    let integral = integral_value(beta, place)?;
    let size = orbit.size() as f64;
    let h = weil_height(beta).value;
    let bound_rhs = k.c / size.powf(k.delta) * size.ln().sqrt() * k.a * (h + log_plus_at(beta, place)? + 1.0);
    let prox = max_proximity(orbit, beta, place)?;
    let disc = (orbit_average - integral).abs();
    Ok(DiscrepancyRecord {
        orbit_n: orbit.order(),
        orbit_size: orbit.size(),
        place,
        orbit_average,
        integral_value: integral,
        discrepancy: disc,
        bound_rhs,
        within_bound: disc <= bound_rhs,
        max_proximity: prox,
        hypothesis_holds: prox <= k.a * (h + 1.0) * size.powf(0.5 - k.delta),
    })
}

/// [`discrepancy`] over the orbits of the given orders.
pub fn discrepancy_series(
    beta: &Beta,
    place: Place,
    orders: &[u64],
    k: DiscrepancyConstants,
) -> Result<Vec<DiscrepancyRecord>> {
    orders
        .iter()
        .map(|&n| discrepancy(&PreperiodicOrbit::new(n)?, beta, place, k))
        .collect()
}

/// Least-squares slope of `log y` against `log x`; `None` with fewer than two
/// usable points.
pub fn fit_loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AzRow {
    pub orbit_n: u64,
    pub orbit_size: usize,
    /// Sum over all places of the orbit averages.
    pub total: f64,
    pub gap: f64,
    /// `(1 + log |P|^{1/2}) / |P|^{1/2}`.
    pub rate_shape: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AzPairingReport {
    pub beta: String,
    pub nmax: u64,
    pub canonical_height: f64,
    pub arch_integral: f64,
    /// `h_hat(beta) + int lambda_inf dmu`.
    pub limit_prediction: f64,
    /// `h(beta) + kappa`, assembled from the Weil height instead.
    pub weil_assembly: f64,
    pub assembly_gap: f64,
    pub rows: Vec<AzRow>,
    /// `max gap / rate_shape` over orbits of size at least 2.
    pub rate_constant: f64,
}

/// Orbit totals `sum_v (1/|P|) sum lambda_v(alpha, beta)` for `N <= nmax`
/// against their predicted limit. The finite part of each total is
/// `log |F(r, s)| / |P|`.
pub fn az_pairing_estimate(beta: &Rat, nmax: u64) -> Result<AzPairingReport> {
    let b = Beta::Rational(beta.clone());
    b.require_non_preperiodic()?;
    if nmax == 0 {
        return Err(Error::domain("nmax must be >= 1"));
    }
    let hhat = canonical_height(&b, ChebMap::new(2)?, 1e-10)?.value;
    let arch_integral = integral_value(&b, Place::Archimedean)?;
    let limit = hhat + arch_integral;
    let weil_assembly = weil_height(&b).value + log_plus_integral()?.value;
    let mut rows = Vec::with_capacity(nmax as usize);
    let mut rate_constant: f64 = 0.0;
    for n in 1..=nmax {
        let orbit = PreperiodicOrbit::new(n)?;
        let f = orbit.eval_homogeneous(beta.numer(), beta.denom());
        if f.is_zero() {
            return Err(Error::Coincidence {
                point: beta.to_string(),
                order: n,
            });
        }
        let size = orbit.size() as f64;
        let total = arch_average(&orbit, &b)?.value + log_abs(&f) / size;
        let gap = (total - limit).abs();
        let rate_shape = (1.0 + 0.5 * size.ln()) / size.sqrt();
        if orbit.size() >= 2 {
            rate_constant = rate_constant.max(gap / rate_shape);
        }
        rows.push(AzRow {
            orbit_n: n,
            orbit_size: orbit.size(),
            total,
            gap,
            rate_shape,
        });
    }
    Ok(AzPairingReport {
        beta: beta.to_string(),
        nmax,
        canonical_height: hhat,
        arch_integral,
        limit_prediction: limit,
        weil_assembly,
        assembly_gap: (limit - weil_assembly).abs(),
        rows,
        rate_constant,
    })
}
