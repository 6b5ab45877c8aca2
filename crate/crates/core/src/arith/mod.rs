//! Exact arithmetic substrate: integers, rationals, polynomials and the
//! numerics used at the archimedean place.

pub mod cf;
pub mod factor;
pub mod numeric;
pub mod padic;
pub mod poly;
pub mod resultant;
pub mod roots;

pub use cf::{cf_convergents, Convergent, Convergents};
pub use factor::{factor_partial, factorize, is_prime_u64, PartialFactorization};
pub use numeric::{log_abs, ApproxComplex, ApproxReal};
pub use padic::{euler_phi, padic_valuation, Valuation};
pub use poly::IntPoly;
pub use resultant::resultant;
pub use roots::{complex_roots, is_irreducible};

/// Exact rationals with arbitrary-precision numerator and denominator,
/// always in lowest terms with positive denominator.
pub type Rat = num_rational::BigRational;
