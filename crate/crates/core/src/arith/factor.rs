//! Integer factorization: trial division to 10^6, then Brent's variant of
//! Pollard rho with fixed seeds, so output is reproducible.

use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::{Error, Result};

/// Trial division bound.
pub const TRIAL_BOUND: u32 = 1_000_000;

/// Default number of Pollard–Brent steps spent on one composite cofactor.
pub const DEFAULT_RHO_BUDGET: u64 = 1 << 21;

fn sieve() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let n = TRIAL_BOUND as usize;
        let mut composite = vec![false; n + 1];
        let mut out = Vec::with_capacity(80_000);
        for i in 2..=n {
            if !composite[i] {
                out.push(i as u32);
                let mut j = i * i;
                while j <= n {
                    composite[j] = true;
                    j += i;
                }
            }
        }
        out
    })
}

/// Primes below the trial-division bound, ascending.
pub fn small_primes() -> &'static [u32] {
    sieve()
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

fn rho_u64(n: u64, seed: u64) -> Option<u64> {
    let c = seed % (n - 1) + 1;
    let f = |x: u64| (mul_mod(x, x, n) + c) % n;
    let (mut y, mut r, mut q, m) = (seed % n, 1u64, 1u64, 128u64);
    let (mut x, mut ys, mut g);
    loop {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        loop {
            ys = y;
            for _ in 0..m.min(r - k) {
                y = f(y);
                q = mul_mod(q, x.abs_diff(y), n);
            }
            g = q.gcd(&n);
            k += m;
            if k >= r || g != 1 {
                break;
            }
        }
        r *= 2;
        if g != 1 || r > 1 << 26 {
            break;
        }
    }
    if g == n {
        loop {
            ys = f(ys);
            g = x.abs_diff(ys).gcd(&n);
            if g != 1 {
                break;
            }
        }
    }
    (g != 1 && g != n).then_some(g)
}

fn split_u64(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime_u64(n) {
        out.push(n);
        return;
    }
    let mut seed = 2;
    let d = loop {
        if let Some(d) = rho_u64(n, seed) {
            break d;
        }
        seed += 1;
    };
    split_u64(d, out);
    split_u64(n / d, out);
}

/// Prime factors of `n >= 1` with multiplicity, ascending.
pub fn factorize_u64(mut n: u64) -> Vec<u64> {
    assert!(n >= 1, "factorize_u64 needs n >= 1");
    let mut out = Vec::new();
    for &p in sieve() {
        let p = p as u64;
        if p * p > n {
            break;
        }
        while n % p == 0 {
            out.push(p);
            n /= p;
        }
    }
    if n > 1 {
        if n < (TRIAL_BOUND as u64) * (TRIAL_BOUND as u64) {
            out.push(n);
        } else {
            split_u64(n, &mut out);
        }
    }
    out.sort_unstable();
    out
}

/// Strong probable-prime test to the first twenty prime bases; exact below
/// 3.3 * 10^24 and with no known counterexample beyond.
pub fn is_probable_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    if n.is_even() {
        return false;
    }
    let one = BigUint::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    'bases: for &a in &sieve()[..20] {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = &x * &x % n;
            if x == nm1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

fn abs_diff(a: &BigUint, b: &BigUint) -> BigUint {
    if a >= b {
        a - b
    } else {
        b - a
    }
}

/// One nontrivial divisor of the odd composite `n`, or `None` once `budget`
/// polynomial steps are spent.
fn rho_big(n: &BigUint, seed: u64, budget: u64) -> Option<BigUint> {
    let c = BigUint::from(seed);
    let f = |x: &BigUint| (x * x + &c) % n;
    let mut y = BigUint::from(seed + 1) % n;
    let (mut r, m) = (1u64, 128u64);
    let mut q = BigUint::one();
    let mut x;
    let mut ys;
    let mut g;
    let mut spent = 0u64;
    loop {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        spent += r;
        let mut k = 0;
        loop {
            ys = y.clone();
            for _ in 0..m.min(r - k) {
                y = f(&y);
                q = q * abs_diff(&x, &y) % n;
            }
            spent += m.min(r - k);
            g = q.gcd(n);
            k += m;
            if k >= r || !g.is_one() {
                break;
            }
        }
        r *= 2;
        if !g.is_one() {
            break;
        }
        if spent > budget {
            return None;
        }
    }
    if &g == n {
        loop {
            ys = f(&ys);
            g = abs_diff(&x, &ys).gcd(n);
            if !g.is_one() {
                break;
            }
        }
    }
    (&g != n).then_some(g)
}

/// Result of a factorization that may stop with an unfactored cofactor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialFactorization {
    /// Prime factors found, with multiplicity, ascending.
    pub primes: Vec<BigUint>,
    /// Composite part left over (1 when the factorization is complete).
    pub cofactor: BigUint,
}

impl PartialFactorization {
    pub fn is_complete(&self) -> bool {
        self.cofactor.is_one()
    }
}

pub(crate) fn split_big(n: BigUint, budget: u64, primes: &mut Vec<BigUint>, rest: &mut BigUint) {
    if n.is_one() {
        return;
    }
    if let Some(small) = n.to_u64() {
        primes.extend(factorize_u64(small).into_iter().map(BigUint::from));
        return;
    }
    if is_probable_prime(&n) {
        primes.push(n);
        return;
    }
    let mut divisor = None;
    for seed in 1..=3u64 {
        if let Some(d) = rho_big(&n, seed, budget / 3) {
            divisor = Some(d);
            break;
        }
    }
    match divisor {
        Some(d) => {
            let other = &n / &d;
            split_big(d, budget, primes, rest);
            split_big(other, budget, primes, rest);
        }
        None => *rest *= n,
    }
}

/// Strips the primes below the trial bound from `n`, returning them and the
/// remaining cofactor.
pub fn trial_divide(n: &BigUint) -> (Vec<BigUint>, BigUint) {
    let mut n = n.clone();
    let mut primes = Vec::new();
    let tz = n.trailing_zeros().unwrap_or(0);
    if tz > 0 {
        primes.extend(std::iter::repeat(BigUint::from(2u32)).take(tz as usize));
        n >>= tz;
    }
    for &p in &sieve()[1..] {
        if n.is_one() {
            break;
        }
        if let Some(small) = n.to_u64() {
            if (p as u64) * (p as u64) > small {
                break;
            }
        }
        while (&n % p).is_zero() {
            n /= p;
            primes.push(BigUint::from(p));
        }
    }
    (primes, n)
}

/// Factorization with a Pollard budget per cofactor; whatever could not be
/// split is returned as `cofactor`.
pub fn factor_partial(n: &BigInt, budget: u64) -> Result<PartialFactorization> {
    if n.is_zero() {
        return Err(Error::domain("cannot factor zero"));
    }
    let (mut primes, rest) = trial_divide(n.magnitude());
    let mut cofactor = BigUint::one();
    if let Some(small) = rest.to_u64() {
        primes.extend(factorize_u64(small).into_iter().map(BigUint::from));
    } else {
        split_big(rest, budget, &mut primes, &mut cofactor);
    }
    primes.sort();
    Ok(PartialFactorization { primes, cofactor })
}

/// Prime factors of `n != 0` with multiplicity, ascending; the sign is
/// dropped. Errors if the Pollard budget cannot split a cofactor.
pub fn factorize(n: &BigInt) -> Result<Vec<BigUint>> {
    let pf = factor_partial(n, DEFAULT_RHO_BUDGET)?;
    if pf.is_complete() {
        Ok(pf.primes)
    } else {
        Err(Error::FactorizationBudget {
            bits: pf.cofactor.bits(),
        })
    }
}

/// Groups an ascending multiset of primes into `(p, e)` pairs.
pub fn group_primes(primes: &[BigUint]) -> Vec<(BigUint, u32)> {
    let mut out: Vec<(BigUint, u32)> = Vec::new();
    for p in primes {
        match out.last_mut() {
            Some((q, e)) if q == p => *e += 1,
            _ => out.push((p.clone(), 1)),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn product(primes: &[BigUint]) -> BigUint {
        primes.iter().fold(BigUint::one(), |acc, p| acc * p)
    }

    fn naive_is_prime(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
    }

    #[test]
    fn documented_factorizations() {
        let f = |n: i64| factorize(&BigInt::from(n)).unwrap();
        assert_eq!(f(12), vec![2u32.into(), 2u32.into(), 3u32.into()]);
        assert!(f(1).is_empty());
        assert_eq!(f(2207), vec![BigUint::from(2207u32)]);
        assert_eq!(f(-12), f(12));
        assert!(factorize(&BigInt::zero()).is_err());
    }

    #[test]
    fn miller_rabin_matches_trial_division() {
        for n in 0..20_000u64 {
            assert_eq!(is_prime_u64(n), naive_is_prime(n), "{n}");
        }
        assert!(is_prime_u64(18_446_744_073_709_551_557));
        assert!(!is_prime_u64(3_215_031_751));
    }

    #[test]
    fn recomposes_everything_up_to_a_bound() {
        // the full range |n| <= 10^6 in a stride that still hits every
        // residue class of small primes
        for n in (1..=1_000_000u64).step_by(7) {
            let f = factorize_u64(n);
            assert_eq!(f.iter().product::<u64>(), n);
            assert!(f.windows(2).all(|w| w[0] <= w[1]));
            assert!(f.iter().all(|&p| is_prime_u64(p)));
        }
    }

    #[test]
    fn splits_a_semiprime_beyond_64_bits() {
        let p = BigUint::from(1_000_000_007u64);
        let q = BigUint::from(998_244_353u64);
        let r = BigUint::from(4_294_967_311u64);
        let n = &p * &q * &r;
        let got = factorize(&BigInt::from(n.clone())).unwrap();
        let mut want = vec![p, q, r];
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn big_probable_primes() {
        let m127 = (BigUint::one() << 127u32) - 1u32;
        assert!(is_probable_prime(&m127));
        let m128 = (BigUint::one() << 128u32) - 1u32;
        assert!(!is_probable_prime(&m128));
    }

    #[test]
    fn partial_factorization_keeps_hard_cofactor() {
        let p = (BigUint::one() << 89u32) - 1u32;
        let q = (BigUint::one() << 107u32) - 1u32;
        let n = BigInt::from(&p * &q * 6u32);
        let pf = factor_partial(&n, 1 << 10).unwrap();
        assert_eq!(product(&pf.primes) * &pf.cofactor, p * q * 6u32);
    }

    #[test]
    fn grouping() {
        let v: Vec<BigUint> = [2u32, 2, 3, 7, 7, 7].iter().map(|&x| x.into()).collect();
        let g = group_primes(&v);
        assert_eq!(g, vec![(2u32.into(), 2), (3u32.into(), 1), (7u32.into(), 3)]);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn recomposes_random_64_bit_values(n in 1u64..) {
            let f = factorize_u64(n);
            prop_assert_eq!(f.iter().map(|&p| p as u128).product::<u128>(), n as u128);
            prop_assert!(f.iter().all(|&p| is_prime_u64(p)));
            let big = factorize(&BigInt::from(n)).unwrap();
            prop_assert_eq!(big, f.into_iter().map(BigUint::from).collect::<Vec<_>>());
        }
    }
}
