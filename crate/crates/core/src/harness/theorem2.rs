use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::scan::s_integral_quick;
use super::size_threshold;
use crate::algebraic::Beta;
use crate::arith::{IntPoly, Rat};
use crate::chebyshev::PreperiodicOrbit;
use crate::heights::{dobrowolski_floor, weil_height};
use crate::integrality::PlaceSet;
use crate::{Error, Result};

/// `count` rationals `num/den` with `|num| <= bound`, `1 <= den <= bound`,
/// not preperiodic, drawn from ChaCha8 seeded with `seed`.
pub fn seeded_rationals(seed: u64, count: usize, bound: i64) -> Vec<Rat> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let num = rng.gen_range(-bound..=bound);
        let den = rng.gen_range(1..=bound);
        let b = Beta::rational(num, den);
        if !b.is_preperiodic() {
            out.push(Rat::new(num.into(), den.into()));
        }
    }
    out
}

fn sample_quadratic(rng: &mut ChaCha8Rng, bound: i64, height_cap: f64) -> Option<Beta> {
    let a = rng.gen_range(1..=bound);
    let b = rng.gen_range(-bound..=bound);
    let c = rng.gen_range(-bound..=bound);
    if c == 0 || a.gcd(&b).gcd(&c) != 1 {
        return None;
    }
    let disc = b * b - 4 * a * c;
    if disc >= 0 && (disc as f64).sqrt().round().powi(2) == disc as f64 {
        return None;
    }
    let beta = Beta::algebraic(IntPoly::from_i64(&[c, b, a]), 0).ok()?;
    (!beta.is_preperiodic() && weil_height(&beta).value <= height_cap).then_some(beta)
}

/// Non-preperiodic `beta` of degree at most `d_cap` (1 or 2) and height at
/// most `height_cap`; with `d_cap >= 2`, even trials are rational and odd
/// trials quadratic.
pub fn sample_betas(seed: u64, trials: usize, d_cap: usize, height_cap: f64) -> Result<Vec<Beta>> {
    if d_cap == 0 {
        return Err(Error::domain("Dcap must be >= 1"));
    }
    if !(height_cap >= 2f64.ln()) {
        return Err(Error::domain("heightCap must be at least log 2"));
    }
    let bound = (height_cap.exp() + 1e-9).floor() as i64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(trials);
    while out.len() < trials {
        if d_cap >= 2 && out.len() % 2 == 1 {
            if let Some(b) = sample_quadratic(&mut rng, bound, height_cap) {
                out.push(b);
            }
            continue;
        }
        let num = rng.gen_range(-bound..=bound);
        let den = rng.gen_range(1..=bound);
        let b = Beta::rational(num, den);
        if !b.is_preperiodic() {
            out.push(b);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Theorem2Config {
    #[serde(rename = "S")]
    pub s: PlaceSet,
    #[serde(rename = "Dcap")]
    pub d_cap: usize,
    pub height_cap: f64,
    #[serde(rename = "Nmax")]
    pub nmax: u64,
    pub trials: usize,
    pub seed: u64,
    pub threshold_c: f64,
    pub dobrowolski_c: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BetaSummary {
    pub beta: String,
    pub degree: usize,
    pub height: f64,
    /// Orders `N` of the S-integral orbits in the window.
    pub s_integral_orbits: Vec<u64>,
    /// Largest S-integral orbit size seen.
    pub max_orbit_size: usize,
    pub threshold: f64,
    pub exceptional_count: usize,
    pub holds: bool,
    /// Smallest `c` with at most `|S_fin|` orbits above `c D^12` here.
    pub min_c: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ThresholdPoint {
    #[serde(rename = "D")]
    pub degree: usize,
    /// `c D^12`.
    pub threshold: f64,
    /// `C / (D (log D)^3)`, absent at `D = 1`.
    pub dobrowolski_floor: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Theorem2Summary {
    pub config: Theorem2Config,
    pub exceptional_limit: usize,
    pub betas: Vec<BetaSummary>,
    pub max_exceptional: usize,
    pub violations: Vec<String>,
    pub threshold_curve: Vec<ThresholdPoint>,
    /// Smallest `c` that would make every sampled `beta` pass in this window.
    pub min_c_for_window: f64,
}

/// For each sampled `beta`, the S-integral orbits with `N <= nmax` and how
/// many of them exceed `c D^12`; at most `|S_fin|` may.
pub fn theorem2_experiment(cfg: &Theorem2Config) -> Result<Theorem2Summary> {
    if cfg.trials == 0 {
        return Err(Error::domain("trials must be >= 1"));
    }
    if cfg.nmax == 0 {
        return Err(Error::domain("Nmax must be >= 1"));
    }
    let betas = sample_betas(cfg.seed, cfg.trials, cfg.d_cap, cfg.height_cap)?;
    let limit = cfg.s.primes().count();
    let mut out = Vec::with_capacity(betas.len());
    for beta in &betas {
        let degree = beta.degree();
        let threshold = size_threshold(cfg.threshold_c, degree);
        let mut found = Vec::new();
        let mut sizes = Vec::new();
        let mut max_size = 0;
        let mut exceptional = 0;
        for n in 1..=cfg.nmax {
            let orbit = PreperiodicOrbit::new(n)?;
            if s_integral_quick(&orbit, beta, &cfg.s)?.0 {
                found.push(n);
                sizes.push(orbit.size());
                max_size = max_size.max(orbit.size());
                if orbit.size() as f64 > threshold {
                    exceptional += 1;
                }
            }
        }
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        let min_c = sizes.get(limit).map_or(0.0, |&sz| sz as f64 / size_threshold(1.0, degree));
        out.push(BetaSummary {
            beta: beta.to_string(),
            degree,
            height: weil_height(beta).value,
            s_integral_orbits: found,
            max_orbit_size: max_size,
            threshold,
            exceptional_count: exceptional,
            holds: exceptional <= limit,
            min_c,
        });
    }
    let threshold_curve = (1..=cfg.d_cap.max(1))
        .map(|d| {
            Ok(ThresholdPoint {
                degree: d,
                threshold: size_threshold(cfg.threshold_c, d),
                dobrowolski_floor: if d >= 2 { Some(dobrowolski_floor(d as u64, cfg.dobrowolski_c)?) } else { None },
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Theorem2Summary {
        config: cfg.clone(),
        exceptional_limit: limit,
        max_exceptional: out.iter().map(|b| b.exceptional_count).max().unwrap_or(0),
        violations: out.iter().filter(|b| !b.holds).map(|b| b.beta.clone()).collect(),
        min_c_for_window: out.iter().map(|b| b.min_c).fold(0.0, f64::max),
        betas: out,
        threshold_curve,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(nmax: u64, seed: u64) -> Theorem2Config {
        Theorem2Config {
            s: PlaceSet::with_primes(&[2, 3]).unwrap(),
            d_cap: 2,
            height_cap: 100f64.ln(),
            nmax,
            trials: 8,
            seed,
            threshold_c: 1.0,
            dobrowolski_c: 0.25,
        }
    }

    #[test]
    fn sampling_is_deterministic_and_in_range() {
        let a = sample_betas(7, 20, 2, 100f64.ln()).unwrap();
        let b = sample_betas(7, 20, 2, 100f64.ln()).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, sample_betas(8, 20, 2, 100f64.ln()).unwrap());
        for (i, beta) in a.iter().enumerate() {
            assert_eq!(beta.degree(), if i % 2 == 0 { 1 } else { 2 });
            assert!(weil_height(beta).value <= 100f64.ln() + 1e-12);
            assert!(!beta.is_preperiodic());
        }
        assert_eq!(seeded_rationals(3, 5, 50), seeded_rationals(3, 5, 50));
    }

    #[test]
    fn trivial_window_and_determinism() {
        let r = theorem2_experiment(&cfg(1, 1)).unwrap();
        assert!(r.betas.iter().all(|b| b.exceptional_count <= 1));
        let x = theorem2_experiment(&cfg(60, 5)).unwrap();
        let y = theorem2_experiment(&cfg(60, 5)).unwrap();
        assert_eq!(format!("{x:?}"), format!("{y:?}"));
        assert_eq!(x.violations.is_empty(), x.min_c_for_window <= 1.0);
        let again = theorem2_experiment(&Theorem2Config { threshold_c: x.min_c_for_window, ..cfg(60, 5) }).unwrap();
        assert!(again.violations.is_empty());
        assert_eq!(x.threshold_curve[1].threshold, 4096.0);
        assert!(x.threshold_curve[0].dobrowolski_floor.is_none());
        let zero = Theorem2Config { trials: 0, ..cfg(5, 1) };
        assert!(theorem2_experiment(&zero).is_err());
    }
}
