//! Places of the rationals, chordal distances and proximity functions,
//! S-integrality of preperiodic orbits relative to a base point, and p-adic
//! structure of the differences `beta - alpha`.

mod chordal;
mod meeting;
mod newton;
mod padic_checks;
mod proximity;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::arith::padic::require_prime;
use crate::{Error, Result};

pub use chordal::{chordal_distance, lambda, PPoint};
pub use meeting::{
    is_s_integral, meeting_primes, prime_meets_orbit, s_integral_verdict, w_order_mod_p, MeetingPrimes,
    SIntegralVerdict, SIntegralityReport,
};
pub use newton::{difference_polynomial, newton_polygon_valuations, root_of_unity_valuation};
pub use padic_checks::{
    cor33_check, difference_valuations, prop32_check, Cor33Report, FlaggedPoint, Prop32Report,
    Prop32Row,
};
pub use proximity::{arch_proximity, arch_proximity_beta};

pub(crate) use meeting::{meeting_primes_trial, meeting_value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Archimedean,
    Finite(u64),
}

impl Place {
    pub fn finite(p: u64) -> Result<Self> {
        require_prime(p)?;
        Ok(Place::Finite(p))
    }

    pub fn prime(&self) -> Option<u64> {
        match self {
            Place::Archimedean => None,
            Place::Finite(p) => Some(*p),
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Archimedean => write!(f, "inf"),
            Place::Finite(p) => write!(f, "{p}"),
        }
    }
}

impl Serialize for Place {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl FromStr for Place {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infty" | "∞" | "oo" => Ok(Place::Archimedean),
            t => {
                let p: u64 = t.parse().map_err(|_| Error::Parse(format!("bad place {t:?}")))?;
                Place::finite(p)
            }
        }
    }
}

/// A finite set of places that always contains the archimedean one.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PlaceSet {
    primes: BTreeSet<u64>,
}

impl PlaceSet {
    /// `{inf}`.
    pub fn archimedean() -> Self {
        Self::default()
    }

    /// `{inf} ∪ primes`.
    pub fn with_primes(primes: &[u64]) -> Result<Self> {
        let mut out = Self::default();
        for &p in primes {
            require_prime(p)?;
            out.primes.insert(p);
        }
        Ok(out)
    }

    pub fn contains(&self, v: Place) -> bool {
        match v {
            Place::Archimedean => true,
            Place::Finite(p) => self.primes.contains(&p),
        }
    }

    pub fn contains_prime(&self, p: u64) -> bool {
        self.primes.contains(&p)
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.primes.iter().copied()
    }

    pub fn places(&self) -> impl Iterator<Item = Place> + '_ {
        std::iter::once(Place::Archimedean).chain(self.primes().map(Place::Finite))
    }
}

impl fmt::Display for PlaceSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.places().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl Serialize for PlaceSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.places())
    }
}

/// Parses a comma-separated list such as `inf,2,3`; the archimedean place is
/// added when missing.
impl FromStr for PlaceSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut out = PlaceSet::default();
        for part in s.split(',').filter(|t| !t.trim().is_empty()) {
            if let Place::Finite(p) = part.parse()? {
                out.primes.insert(p);
            }
        }
        Ok(out)
    }
}
