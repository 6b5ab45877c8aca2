//! Exact arithmetic and verification harness for the Chebyshev dynamical
//! system on the projective line over the rationals.
//!
//! The crate is organised bottom-up:
//!
//! * [`arith`] big-integer polynomials, resultants, factorization, p-adic
//!   valuations, certified complex roots and continued fractions;
//! * [`chebyshev`] the maps `T_n` and the Galois orbits of preperiodic points
//!   `zeta + 1/zeta`;
//! * [`algebraic`] algebraic numbers given by a minimal polynomial and an
//!   embedding;
//! * [`heights`] Weil and canonical heights;
//! * [`integrality`] chordal metrics, S-integrality and p-adic proximity;
//! * [`equidist`] the arcsine measure, logarithmic potentials and orbit
//!   averages of proximity functions;
//! * [`baker`] linear forms in logarithms and archimedean proximity bounds;
//! * [`harness`] experiment configuration, orbit scans and desk-scale
//!   theorem checks.

pub mod algebraic;
pub mod arith;
pub mod baker;
pub mod chebyshev;
pub mod equidist;
mod error;
pub mod harness;
pub mod heights;
pub mod integrality;

pub use algebraic::{AlgebraicNumber, Beta};
pub use arith::{ApproxComplex, ApproxReal, IntPoly, Rat, Valuation};
pub use chebyshev::{ChebMap, PreperiodicOrbit};
pub use error::{Error, Result};
