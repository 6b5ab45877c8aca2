use crate::algebraic::{rational_ball, Beta};
use crate::arith::numeric::{ApproxComplex, ApproxReal, UNIT_ROUNDOFF};
use crate::chebyshev::PreperiodicOrbit;
use crate::{Error, Result};

/// `max_sigma -log |sigma(alpha) - beta|` at the archimedean place.
pub fn arch_proximity(orbit: &PreperiodicOrbit, beta: &ApproxComplex) -> Result<ApproxReal> {
    let mut best: Option<ApproxReal> = None;
    for c in orbit.conjugates() {
        let d = ApproxComplex::real(*c).sub(beta).abs();
        let lo = d.lower();
        if lo <= 0.0 {
            return Err(Error::Coincidence {
                point: beta.to_string(),
                order: orbit.order(),
            });
        }
        let value = -d.value.ln();
        let err = d.error_bound / lo + 2.0 * UNIT_ROUNDOFF * (1.0 + value.abs());
        if best.is_none_or(|b| value > b.value) {
            best = Some(ApproxReal::new(value, err));
        }
    }
    Ok(best.expect("orbits are nonempty"))
}

/// [`arch_proximity`] maximised over the complex conjugates of `beta`.
pub fn arch_proximity_beta(orbit: &PreperiodicOrbit, beta: &Beta) -> Result<ApproxReal> {
    match beta {
        Beta::Rational(x) => {
            if orbit.contains_rational(x) {
                return Err(Error::Coincidence {
                    point: beta.to_string(),
                    order: orbit.order(),
                });
            }
            arch_proximity(orbit, &rational_ball(x))
        }
        Beta::Algebraic(a) => {
            let mut best: Option<ApproxReal> = None;
            for b in a.conjugates() {
                let v = arch_proximity(orbit, b)?;
                if best.is_none_or(|m| v.value > m.value) {
                    best = Some(v);
                }
            }
            Ok(best.unwrap())
        }
    }
}
