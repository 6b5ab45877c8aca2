use num_rational::Ratio;
use serde::Serialize;

use super::meeting::prime_meets_orbit;
use super::newton::{difference_polynomial, newton_polygon_valuations};
use crate::algebraic::Beta;
use crate::arith::padic::{int_valuation, require_prime};
use crate::arith::{Rat, Valuation};
use crate::chebyshev::{orbit_size, PreperiodicOrbit};
use crate::{Error, Result};

/// `v_p(beta - sigma(alpha))` over the conjugates of the orbit of order `n`,
/// ascending. Orbits that do not meet `beta` at `p` are answered without
/// building the difference polynomial.
pub fn difference_valuations(n: u64, beta: &Rat, p: u64) -> Result<Vec<Valuation>> {
    require_prime(p)?;
    let size = orbit_size(n) as usize;
    if !prime_meets_orbit(n, beta, p)? {
        // alpha is integral: v(beta - alpha) = min(v(beta), 0) unless they meet
        let vs = int_valuation(beta.denom(), p) as i64;
        return Ok(vec![Valuation::int(-vs); size]);
    }
    let orbit = PreperiodicOrbit::new(n)?;
    newton_polygon_valuations(&difference_polynomial(&orbit, beta), p)
}

fn require_non_preperiodic(beta: &Rat) -> Result<()> {
    Beta::Rational(beta.clone()).require_non_preperiodic()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FlaggedPoint {
    pub orbit_n: u64,
    pub valuation: Valuation,
    /// Number of conjugates in the orbit at this valuation.
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Cor33Report {
    pub beta: String,
    pub p: u64,
    pub nmax: u64,
    /// `1/(p - 1)`: a point is flagged when `v_p(beta - alpha)` reaches it.
    pub threshold: Valuation,
    pub flagged: Vec<FlaggedPoint>,
    pub flagged_points: usize,
    /// At most one flagged point overall.
    pub holds: bool,
}

/// Scans the orbits `N <= nmax` for preperiodic points with
/// `log |beta - alpha|_p^{-1} >= log p / (p - 1)`.
pub fn cor33_check(beta: &Rat, p: u64, nmax: u64) -> Result<Cor33Report> {
    require_prime(p)?;
    require_non_preperiodic(beta)?;
    let threshold = Ratio::new(1, p as i64 - 1);
    let mut flagged = Vec::new();
    for n in 1..=nmax {
        let vals = difference_valuations(n, beta, p)?;
        let mut hits: Vec<&Valuation> = vals
            .iter()
            .filter(|v| v.finite().is_none_or(|r| r >= threshold))
            .collect();
        hits.dedup();
        for v in hits {
            let count = vals.iter().filter(|w| *w == v).count();
            flagged.push(FlaggedPoint {
                orbit_n: n,
                valuation: *v,
                count,
            });
        }
    }
    let flagged_points = flagged.iter().map(|f| f.count).sum();
    Ok(Cor33Report {
        beta: beta.to_string(),
        p,
        nmax,
        threshold: Valuation::Finite(threshold),
        holds: flagged_points <= 1,
        flagged,
        flagged_points,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Prop32Row {
    pub orbit_n: u64,
    pub orbit_size: usize,
    /// Conjugates with `|alpha - beta|_p <= 1 - eps`.
    pub close_count: usize,
    pub max_valuation: Valuation,
    /// `max log |alpha - beta|_p^{-1}` over the orbit.
    pub max_lambda: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Prop32Report {
    pub beta: String,
    pub p: u64,
    pub eps: f64,
    /// `C = p log p / eps`.
    pub c: f64,
    pub rows: Vec<Prop32Row>,
    /// Orbits with more than `C` close conjugates.
    pub violations: Vec<u64>,
    /// Largest `log |alpha - beta|_p^{-1}` among orbits of size above `C`
    /// (the smallest `delta` the conclusion can be checked against).
    pub max_lambda_beyond_c: Option<f64>,
}

/// Counting form of the p-adic proximity statement: at most
/// `p log p / eps` conjugates of an orbit satisfy `|alpha - beta|_p <= 1 - eps`.
pub fn prop32_check(beta: &Rat, p: u64, eps: f64, nmax: u64) -> Result<Prop32Report> {
    require_prime(p)?;
    require_non_preperiodic(beta)?;
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::domain("eps must lie in (0, 1)"));
    }
    let logp = (p as f64).ln();
    let c = p as f64 * logp / eps;
    // p^{-v} <= 1 - eps  iff  v >= -log(1 - eps) / log p
    let vmin = -(1.0 - eps).ln() / logp;
    let mut rows = Vec::with_capacity(nmax as usize);
    for n in 1..=nmax {
        let vals = difference_valuations(n, beta, p)?;
        let max_valuation = *vals.last().unwrap();
        let close_count = vals.iter().filter(|v| v.to_f64() >= vmin).count();
        rows.push(Prop32Row {
            orbit_n: n,
            orbit_size: vals.len(),
            close_count,
            max_valuation,
            max_lambda: max_valuation.to_f64().max(0.0) * logp,
        });
    }
    let violations = rows.iter().filter(|r| r.close_count as f64 > c).map(|r| r.orbit_n).collect();
    let max_lambda_beyond_c = rows
        .iter()
        .filter(|r| r.orbit_size as f64 > c)
        .map(|r| r.max_lambda)
        .fold(None, |m: Option<f64>, x| Some(m.map_or(x, |m| m.max(x))));
    Ok(Prop32Report {
        beta: beta.to_string(),
        p,
        eps,
        c,
        rows,
        violations,
        max_lambda_beyond_c,
    })
}
