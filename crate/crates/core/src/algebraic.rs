//! Algebraic numbers given by an integer minimal polynomial and a chosen
//! complex embedding, and the `Beta` input type used across the crate.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::arith::numeric::{ratio_to_f64, ApproxComplex};
use crate::arith::roots::{cauchy_bound, complex_roots, is_irreducible};
use crate::arith::{IntPoly, Rat};
use crate::chebyshev::{is_preperiodic_rational, orbit_size, PreperiodicOrbit};
use crate::{Error, Result};

/// Largest supported degree of an algebraic `beta`.
pub const MAX_DEGREE: usize = 16;

/// An algebraic number: primitive irreducible minimal polynomial (positive
/// leading coefficient), all its certified complex roots in the
/// deterministic root order, and the index of the selected embedding.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraicNumber {
    minpoly: IntPoly,
    roots: Vec<ApproxComplex>,
    embedding: usize,
}

impl AlgebraicNumber {
    pub fn new(minpoly: IntPoly, embedding: usize) -> Result<Self> {
        let f = minpoly.primitive_part();
        let d = f.degree();
        if f.is_zero() || d == 0 {
            return Err(Error::domain("minimal polynomial must have degree >= 1"));
        }
        if d > MAX_DEGREE {
            return Err(Error::domain(format!(
                "degree {d} exceeds the supported maximum {MAX_DEGREE}"
            )));
        }
        if !is_irreducible(&f)? {
            return Err(Error::domain(format!("{f} is reducible over the rationals")));
        }
        if embedding >= d {
            return Err(Error::domain(format!(
                "embedding index {embedding} out of range for degree {d}"
            )));
        }
        let roots = complex_roots(&f, 1e-13 * cauchy_bound(&f))?;
        Ok(AlgebraicNumber {
            minpoly: f,
            roots,
            embedding,
        })
    }

    pub fn from_rational(x: &Rat) -> Self {
        let f = IntPoly::linear(x.denom().clone(), -x.numer().clone());
        let roots = complex_roots(&f, 1.0).expect("linear root");
        AlgebraicNumber {
            minpoly: f,
            roots,
            embedding: 0,
        }
    }

    pub fn minpoly(&self) -> &IntPoly {
        &self.minpoly
    }

    pub fn degree(&self) -> usize {
        self.minpoly.degree()
    }

    pub fn embedding(&self) -> usize {
        self.embedding
    }

    /// All conjugates, sorted by real then imaginary part.
    pub fn conjugates(&self) -> &[ApproxComplex] {
        &self.roots
    }

    /// The selected embedding.
    pub fn value(&self) -> ApproxComplex {
        self.roots[self.embedding]
    }

    pub fn lead(&self) -> BigInt {
        self.minpoly.lead()
    }

    pub fn as_rational(&self) -> Option<Rat> {
        (self.degree() == 1).then(|| Rat::new(-self.minpoly.coeff(0), self.minpoly.coeff(1)))
    }

    /// `N` when this number is a conjugate of `zeta_N + 1/zeta_N`.
    ///
    /// Exact: the minimal polynomial must equal some `Psi_N` with
    /// `|Psi_N| = D`, and `phi(N) >= sqrt(N/2)` bounds `N <= 8 D^2`.
    pub fn preperiodic_order(&self) -> Option<u64> {
        if !self.minpoly.is_monic() {
            return None;
        }
        let d = self.degree() as u64;
        let trace = self.minpoly.to_trace_basis();
        (1..=8 * d * d + 6)
            .filter(|&n| orbit_size(n) == d)
            .find(|&n| PreperiodicOrbit::new(n).unwrap().trace_coeffs() == trace.as_slice())
    }

    /// Whether `|beta| = 1` within the certified radius of the embedding.
    pub fn on_unit_circle(&self) -> bool {
        let v = self.value();
        (v.value.norm() - 1.0).abs() <= v.error_bound + 4.0 * f64::EPSILON
    }
}

impl fmt::Display for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "root #{} of {}", self.embedding, self.minpoly)
    }
}

/// The point `beta`: a rational or an algebraic number.
#[derive(Clone, Debug, PartialEq)]
pub enum Beta {
    Rational(Rat),
    Algebraic(AlgebraicNumber),
}

impl Beta {
    pub fn rational(n: i64, d: i64) -> Self {
        Beta::Rational(Rat::new(n.into(), d.into()))
    }

    /// Builds an algebraic `beta`, collapsing degree 1 to a rational.
    pub fn algebraic(minpoly: IntPoly, embedding: usize) -> Result<Self> {
        let a = AlgebraicNumber::new(minpoly, embedding)?;
        Ok(match a.as_rational() {
            Some(r) => Beta::Rational(r),
            None => Beta::Algebraic(a),
        })
    }

    pub fn degree(&self) -> usize {
        match self {
            Beta::Rational(_) => 1,
            Beta::Algebraic(a) => a.degree(),
        }
    }

    /// Primitive minimal polynomial with positive leading coefficient.
    pub fn minpoly(&self) -> IntPoly {
        match self {
            Beta::Rational(x) => IntPoly::linear(x.denom().clone(), -x.numer().clone()),
            Beta::Algebraic(a) => a.minpoly().clone(),
        }
    }

    pub fn lead(&self) -> BigInt {
        match self {
            Beta::Rational(x) => x.denom().clone(),
            Beta::Algebraic(a) => a.lead(),
        }
    }

    pub fn as_rational(&self) -> Option<&Rat> {
        match self {
            Beta::Rational(x) => Some(x),
            Beta::Algebraic(_) => None,
        }
    }

    /// The selected complex embedding.
    pub fn value(&self) -> ApproxComplex {
        match self {
            Beta::Rational(x) => rational_ball(x),
            Beta::Algebraic(a) => a.value(),
        }
    }

    /// All conjugates (a single one for rationals).
    pub fn conjugates(&self) -> Vec<ApproxComplex> {
        match self {
            Beta::Rational(x) => vec![rational_ball(x)],
            Beta::Algebraic(a) => a.conjugates().to_vec(),
        }
    }

    pub fn is_preperiodic(&self) -> bool {
        self.preperiodic_order().is_some()
    }

    /// The order `N` with `beta` in the orbit of `zeta_N + 1/zeta_N`.
    pub fn preperiodic_order(&self) -> Option<u64> {
        match self {
            Beta::Rational(x) => is_preperiodic_rational(x).then(|| match x.numer().to_i64() {
                Some(2) => 1,
                Some(-2) => 2,
                Some(-1) => 3,
                Some(0) => 4,
                _ => 6,
            }),
            Beta::Algebraic(a) => a.preperiodic_order(),
        }
    }

    /// Rejects preperiodic `beta` with a typed error.
    pub fn require_non_preperiodic(&self) -> Result<()> {
        match self.preperiodic_order() {
            Some(n) => Err(Error::Preperiodic(format!(
                "{self} (in the orbit of order {n})"
            ))),
            None => Ok(()),
        }
    }
}

pub(crate) fn rational_ball(x: &Rat) -> ApproxComplex {
    let v = ratio_to_f64(x.numer(), x.denom());
    let exact = Rat::from_float(v).is_some_and(|r| &r == x);
    let err = if exact {
        0.0
    } else {
        2.0 * crate::arith::numeric::UNIT_ROUNDOFF * v.abs() + f64::MIN_POSITIVE
    };
    ApproxComplex::new(Complex64::new(v, 0.0), err)
}

impl fmt::Display for Beta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Beta::Rational(x) => write!(f, "{x}"),
            Beta::Algebraic(a) => {
                let c: Vec<String> = a.minpoly().coeffs().iter().map(|c| c.to_string()).collect();
                write!(f, "poly:{}@{}", c.join(","), a.embedding())
            }
        }
    }
}

impl Serialize for Beta {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

/// Parses `p/q`, an integer, or `poly:c0,c1,...,cd[@k]` (coefficients lowest
/// degree first, `k` the index of the root in the deterministic order).
impl FromStr for Beta {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("poly:") {
            let (coeffs, k) = match rest.split_once('@') {
                Some((c, k)) => (
                    c,
                    k.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad embedding index in {s:?}")))?,
                ),
                None => (rest, 0),
            };
            let coeffs = coeffs
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse::<BigInt>()
                        .map_err(|_| Error::Parse(format!("bad coefficient {t:?} in {s:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            let f = IntPoly::new(coeffs);
            if f.is_zero() {
                return Err(Error::Parse("zero polynomial".into()));
            }
            return Beta::algebraic(f, k);
        }
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n, d),
            None => (s, "1"),
        };
        let n: BigInt = n
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
        let d: BigInt = d
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        Ok(Beta::Rational(Rat::new(n, d)))
    }
}
