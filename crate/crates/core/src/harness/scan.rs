use num_traits::{One, Signed};
use serde::Serialize;

use crate::algebraic::Beta;
use crate::arith::padic::strip_prime;
use crate::chebyshev::PreperiodicOrbit;
use crate::integrality::{meeting_primes, meeting_value, MeetingPrimes, PlaceSet};
use crate::Result;

/// S-integrality of one orbit: strip the primes of `S` from the meeting
/// value and test for a unit. Returns the verdict and the bit length of
/// what is left.
pub fn s_integral_quick(orbit: &PreperiodicOrbit, beta: &Beta, s: &PlaceSet) -> Result<(bool, u64)> {
    let mut v = meeting_value(orbit, beta)?;
    for p in s.primes() {
        strip_prime(&mut v, p);
    }
    let rest = v.abs();
    Ok((rest.is_one(), if rest.is_one() { 0 } else { rest.bits() }))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ScanOrbit {
    #[serde(rename = "N")]
    pub orbit_n: u64,
    pub size: usize,
    pub meeting_primes: MeetingPrimes,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct OrbitDiagnostic {
    #[serde(rename = "N")]
    pub orbit_n: u64,
    pub size: usize,
    pub is_s_integral: bool,
    /// Bits of the meeting value supported outside `S`.
    pub outside_bits: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ScanResult {
    pub beta: String,
    #[serde(rename = "S")]
    pub s: PlaceSet,
    #[serde(rename = "Nmax")]
    pub nmax: u64,
    pub s_integral_orbits: Vec<ScanOrbit>,
    pub size_threshold: f64,
    /// S-integral orbits larger than the threshold.
    pub exceptional_count: usize,
    /// `|S_fin|`.
    pub exceptional_limit: usize,
    pub threshold_holds: bool,
    /// Largest `N` in the list: no S-integral orbit appears after it.
    pub stabilization: Option<u64>,
    pub per_orbit: Vec<OrbitDiagnostic>,
}

impl ScanResult {
    pub fn orders(&self) -> Vec<u64> {
        self.s_integral_orbits.iter().map(|o| o.orbit_n).collect()
    }
}

/// Every `N <= nmax` whose orbit is S-integral relative to `beta`, with the
/// check that at most `|S_fin|` of them exceed `size_threshold`.
pub fn scan_s_integral_orbits(beta: &Beta, s: &PlaceSet, nmax: u64, size_threshold: f64) -> Result<ScanResult> {
    beta.require_non_preperiodic()?;
    let mut orbits = Vec::new();
    let mut per_orbit = Vec::with_capacity(nmax as usize);
    for n in 1..=nmax {
        let orbit = PreperiodicOrbit::new(n)?;
        let (ok, outside_bits) = s_integral_quick(&orbit, beta, s)?;
        if ok {
            orbits.push(ScanOrbit {
                orbit_n: n,
                size: orbit.size(),
                meeting_primes: meeting_primes(&orbit, beta)?,
            });
        }
        per_orbit.push(OrbitDiagnostic {
            orbit_n: n,
            size: orbit.size(),
            is_s_integral: ok,
            outside_bits,
        });
    }
    let exceptional_count = orbits.iter().filter(|o| o.size as f64 > size_threshold).count();
    let limit = s.primes().count();
    Ok(ScanResult {
        beta: beta.to_string(),
        s: s.clone(),
        nmax,
        stabilization: orbits.last().map(|o| o.orbit_n),
        s_integral_orbits: orbits,
        size_threshold,
        exceptional_count,
        exceptional_limit: limit,
        threshold_holds: exceptional_count <= limit,
        per_orbit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrality::is_s_integral;
    use proptest::prelude::*;

    #[test]
    fn documented_scans() {
        let three = Beta::rational(3, 1);
        let r = scan_s_integral_orbits(&three, &PlaceSet::archimedean(), 100, 1.0).unwrap();
        assert_eq!(r.orders(), vec![1]);
        assert!(r.threshold_holds);

        let s = PlaceSet::with_primes(&[2, 3, 5, 11]).unwrap();
        let r = scan_s_integral_orbits(&three, &s, 12, 1.0).unwrap();
        // Psi_10(3) = 5 puts N = 10 in the list as well
        assert_eq!(r.orders(), vec![1, 2, 3, 4, 5, 6, 10, 12]);
        assert!(!r.orders().contains(&7) && !r.orders().contains(&8));
        let twelve = r.s_integral_orbits.iter().find(|o| o.orbit_n == 12).unwrap();
        assert_eq!(twelve.meeting_primes.small_primes(), vec![2, 3]);

        let half = Beta::rational(1, 2);
        let r = scan_s_integral_orbits(&half, &PlaceSet::with_primes(&[2]).unwrap(), 50, 1.0).unwrap();
        assert!(r.stabilization.unwrap() <= 25, "{:?}", r.orders());

        assert!(scan_s_integral_orbits(&Beta::rational(1, 1), &s, 5, 1.0).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn quick_verdict_matches_report(n in 1u64..=80, num in -40i64..=40, den in 1i64..=40,
                                        ps in prop::collection::btree_set(prop::sample::select(vec![2u64, 3, 5, 7, 11, 13]), 0..4)) {
            let b = Beta::rational(num, den);
            prop_assume!(!b.is_preperiodic());
            let s = PlaceSet::with_primes(&ps.into_iter().collect::<Vec<_>>()).unwrap();
            let o = PreperiodicOrbit::new(n).unwrap();
            let full = is_s_integral(&o, &b, &s).unwrap();
            prop_assert_eq!(s_integral_quick(&o, &b, &s).unwrap().0, full.is_s_integral);
        }
    }
}
