//! p-adic valuations and small-prime utilities.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::Zero;
use serde::{Serialize, Serializer};

use super::factor::{factorize_u64, is_prime_u64};
use super::Rat;
use crate::{Error, Result};

/// A p-adic valuation: a rational number or `+inf` (the valuation of zero).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(Ratio<i64>),
    Infinite,
}

impl Valuation {
    pub fn int(v: i64) -> Self {
        Valuation::Finite(Ratio::from_integer(v))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Valuation::Finite(Ratio::new(num, den))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Valuation::Finite(_))
    }

    pub fn finite(&self) -> Option<Ratio<i64>> {
        match self {
            Valuation::Finite(r) => Some(*r),
            Valuation::Infinite => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Valuation::Finite(r) => *r.numer() as f64 / *r.denom() as f64,
            Valuation::Infinite => f64::INFINITY,
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Valuation::Finite(r) => *r.numer() > 0,
            Valuation::Infinite => true,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Valuation::Finite(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for Valuation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

pub(crate) fn require_prime(p: u64) -> Result<()> {
    if is_prime_u64(p) {
        Ok(())
    } else {
        Err(Error::domain(format!("{p} is not prime")))
    }
}

/// `v_p(n)` for a nonzero integer.
pub fn int_valuation(n: &BigInt, p: u64) -> u64 {
    debug_assert!(!n.is_zero());
    if p == 2 {
        return n.trailing_zeros().unwrap_or(0);
    }
    let mut v = 0;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(&BigInt::from(p));
        if !r.is_zero() {
            return v;
        }
        m = q;
        v += 1;
    }
}

/// Divides out every factor `p` from `n` in place, returning the count.
pub(crate) fn strip_prime(n: &mut BigInt, p: u64) -> u64 {
    if p == 2 {
        let v = n.trailing_zeros().unwrap_or(0);
        *n >>= v;
        return v;
    }
    let bp = BigInt::from(p);
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&bp);
        if !r.is_zero() {
            return v;
        }
        *n = q;
        v += 1;
    }
}

/// `v_p(q)`, with `v_p(0) = +inf`; `|q|_p = p^(-v_p(q))`.
pub fn padic_valuation(q: &Rat, p: u64) -> Result<Valuation> {
    require_prime(p)?;
    if q.is_zero() {
        return Ok(Valuation::Infinite);
    }
    let v = int_valuation(q.numer(), p) as i64 - int_valuation(q.denom(), p) as i64;
    Ok(Valuation::int(v))
}

/// `|q|_p` as a float.
pub fn padic_abs(q: &Rat, p: u64) -> Result<f64> {
    Ok(match padic_valuation(q, p)? {
        Valuation::Infinite => 0.0,
        v => (p as f64).powf(-v.to_f64()),
    })
}

/// Euler's totient.
pub fn euler_phi(n: u64) -> u64 {
    assert!(n >= 1, "euler_phi needs n >= 1");
    let mut out = n;
    let mut last = 0;
    for p in factorize_u64(n) {
        if p != last {
            out = out / p * (p - 1);
            last = p;
        }
    }
    out
}

/// Möbius function.
pub fn mobius(n: u64) -> i32 {
    let f = factorize_u64(n);
    for w in f.windows(2) {
        if w[0] == w[1] {
            return 0;
        }
    }
    if f.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Positive divisors in ascending order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    let f = factorize_u64(n);
    let mut i = 0;
    while i < f.len() {
        let p = f[i];
        let mut e = 0;
        while i < f.len() && f[i] == p {
            e += 1;
            i += 1;
        }
        let base = out.clone();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            out.extend(base.iter().map(|d| d * pk));
        }
    }
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rat {
        Rat::new(n.into(), d.into())
    }

    #[test]
    fn documented_valuations() {
        assert_eq!(padic_valuation(&q(12, 1), 2).unwrap(), Valuation::int(2));
        assert_eq!(padic_valuation(&q(1, 9), 3).unwrap(), Valuation::int(-2));
        assert_eq!(padic_valuation(&q(0, 1), 5).unwrap(), Valuation::Infinite);
        assert!(padic_valuation(&q(3, 1), 4).is_err());
        assert!((padic_abs(&q(1, 9), 3).unwrap() - 9.0).abs() < 1e-12);
    }

    #[test]
    fn totient_values() {
        assert_eq!(euler_phi(5), 4);
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(12), 4);
        assert_eq!(euler_phi(2207), 2206);
    }

    #[test]
    fn mobius_and_divisors() {
        assert_eq!(mobius(1), 1);
        assert_eq!(mobius(6), 1);
        assert_eq!(mobius(12), 0);
        assert_eq!(mobius(30), -1);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(1), vec![1]);
    }

    #[test]
    fn valuation_ordering_puts_infinity_last() {
        assert!(Valuation::Infinite > Valuation::int(1_000));
        assert!(Valuation::ratio(1, 2) < Valuation::int(1));
        assert_eq!(Valuation::ratio(2, 4).to_string(), "1/2");
    }

    fn nonzero_rat() -> impl Strategy<Value = Rat> {
        (-5000i64..=5000, 1i64..=5000)
            .prop_filter("nonzero", |(n, _)| *n != 0)
            .prop_map(|(n, d)| q(n, d))
    }

    proptest! {
        #[test]
        fn valuation_is_additive(a in nonzero_rat(), b in nonzero_rat(), pi in 0usize..6) {
            let p = [2u64, 3, 5, 7, 11, 13][pi];
            let va = padic_valuation(&a, p).unwrap().to_f64();
            let vb = padic_valuation(&b, p).unwrap().to_f64();
            prop_assert_eq!(padic_valuation(&(&a * &b), p).unwrap().to_f64(), va + vb);
        }

        #[test]
        fn valuation_is_ultrametric(a in nonzero_rat(), b in nonzero_rat(), pi in 0usize..6) {
            let p = [2u64, 3, 5, 7, 11, 13][pi];
            let va = padic_valuation(&a, p).unwrap();
            let vb = padic_valuation(&b, p).unwrap();
            prop_assert!(padic_valuation(&(&a + &b), p).unwrap() >= va.min(vb));
        }
    }
}
