//! Experiment configuration, S-integral orbit scans, and seeded desk-scale
//! checks of the finiteness and counting statements.

mod scan;
mod theorem2;

use serde::Serialize;

use crate::algebraic::Beta;
use crate::integrality::PlaceSet;
use crate::{Error, Result};

pub use scan::{s_integral_quick, scan_s_integral_orbits, OrbitDiagnostic, ScanOrbit, ScanResult};
pub use theorem2::{
    sample_betas, seeded_rationals, theorem2_experiment, BetaSummary, Theorem2Config, Theorem2Summary, ThresholdPoint,
};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Constants {
    #[serde(rename = "C")]
    pub c: f64,
    #[serde(rename = "Ceps")]
    pub c_eps: f64,
    pub eps: f64,
    pub delta: f64,
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "dobrowolskiC")]
    pub dobrowolski_c: f64,
    /// `c` in the exceptional-orbit threshold `c D^12`.
    #[serde(rename = "thresholdC")]
    pub threshold_c: f64,
}

impl Default for Constants {
    fn default() -> Self {
        Constants {
            c: 1.0,
            c_eps: 1.0,
            eps: 0.5,
            delta: 0.25,
            a: 1.0,
            dobrowolski_c: crate::heights::DEFAULT_DOBROWOLSKI_C,
            threshold_c: 1.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ExperimentConfig {
    pub beta: String,
    #[serde(rename = "S")]
    pub s: PlaceSet,
    #[serde(rename = "Nmax")]
    pub nmax: u64,
    pub d: u32,
    pub constants: Constants,
    pub seed: u64,
    pub output: Option<String>,
}

impl ExperimentConfig {
    pub fn new(beta: &str, s: PlaceSet, nmax: u64) -> Self {
        ExperimentConfig {
            beta: beta.to_string(),
            s,
            nmax,
            d: 2,
            constants: Constants::default(),
            seed: 0,
            output: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.nmax == 0 {
            return Err(Error::domain("Nmax must be >= 1"));
        }
        if self.d < 2 {
            return Err(Error::domain("Chebyshev degree d must be >= 2"));
        }
        let k = &self.constants;
        if !(k.delta > 0.0 && k.delta < 0.5) {
            return Err(Error::domain("delta must lie in (0, 1/2)"));
        }
        if !(k.eps > 0.0 && k.c > 0.0 && k.c_eps > 0.0 && k.a > 0.0 && k.threshold_c > 0.0) {
            return Err(Error::domain("constants must be positive"));
        }
        self.parse_beta().map(|_| ())
    }

    pub fn parse_beta(&self) -> Result<Beta> {
        self.beta.parse()
    }
}

/// The exceptional-orbit threshold `c D^12`.
pub fn size_threshold(c: f64, degree: usize) -> f64 {
    c * (degree as f64).powi(12)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        let s: PlaceSet = "inf,2,3".parse().unwrap();
        let mut c = ExperimentConfig::new("3", s.clone(), 10);
        assert!(c.validate().is_ok());
        c.constants.delta = 0.5;
        assert!(c.validate().is_err());
        let c = ExperimentConfig::new("3/x", s.clone(), 10);
        assert!(matches!(c.validate(), Err(Error::Parse(_))));
        let c = ExperimentConfig::new("3", s, 0);
        assert!(c.validate().is_err());
        assert_eq!(size_threshold(1.0, 2), 4096.0);
    }

    #[test]
    fn config_serializes_with_stable_keys() {
        let c = ExperimentConfig::new("7/2", "inf,11".parse().unwrap(), 5);
        let v = serde_json::to_value(&c).unwrap();
        for key in ["beta", "S", "Nmax", "d", "constants", "seed", "output"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["S"], serde_json::json!(["inf", "11"]));
        for key in ["C", "Ceps", "eps", "delta", "A", "dobrowolskiC", "thresholdC"] {
            assert!(v["constants"].get(key).is_some(), "{key}");
        }
    }
}
