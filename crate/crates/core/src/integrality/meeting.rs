use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use super::PlaceSet;
use crate::algebraic::Beta;
use crate::arith::factor::{is_probable_prime, small_primes, split_big, trial_divide, DEFAULT_RHO_BUDGET};
use crate::arith::padic::{divisors, require_prime, strip_prime};
use crate::arith::Rat;
use crate::chebyshev::PreperiodicOrbit;
use crate::{Error, Result};

/// Cofactors above this size are not handed to Pollard rho.
const RHO_MAX_BITS: u64 = 256;

/// Support of `F(r, s) = s^d Psi_N(r/s)` (or of `Res(Psi_N, f_beta)` for
/// algebraic `beta`), with the total valuation at each prime.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct MeetingPrimes {
    #[serde(serialize_with = "prime_map")]
    pub primes: BTreeMap<BigUint, u64>,
    /// Product of the prime powers that could not be split (1 if complete).
    #[serde(serialize_with = "decimal")]
    pub cofactor: BigUint,
}

impl MeetingPrimes {
    pub fn is_complete(&self) -> bool {
        self.cofactor.is_one()
    }

    pub fn valuation(&self, p: u64) -> u64 {
        self.primes.get(&BigUint::from(p)).copied().unwrap_or(0)
    }

    pub fn small_primes(&self) -> Vec<u64> {
        self.primes.keys().filter_map(|p| p.to_u64()).collect()
    }
}

pub(crate) fn prime_map<S: Serializer>(m: &BTreeMap<BigUint, u64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_map(m.iter().map(|(p, e)| (p.to_string(), *e)))
}

fn decimal<S: Serializer>(n: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&n.to_string())
}

fn opt_decimal<S: Serializer>(n: &Option<BigUint>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match n {
        Some(n) => s.serialize_str(&n.to_string()),
        None => s.serialize_none(),
    }
}

/// The integer whose prime support is the set of meeting primes.
pub(crate) fn meeting_value(orbit: &PreperiodicOrbit, beta: &Beta) -> Result<BigInt> {
    let v = match beta {
        Beta::Rational(x) => orbit.eval_homogeneous(x.numer(), x.denom()),
        Beta::Algebraic(a) => orbit.resultant_with(a.minpoly())?,
    };
    if v.is_zero() {
        return Err(Error::Coincidence {
            point: beta.to_string(),
            order: orbit.order(),
        });
    }
    Ok(v)
}

/// Primes that can divide `F(r, s)` for rational `beta`: those dividing `N`
/// and those congruent to `±1` modulo `N`. Reduction mod such a `p` puts the
/// roots of `w + 1/w = beta` in `F_p` or `F_{p^2}`, so their orders divide
/// `p - 1` or `p + 1`.
fn is_candidate(p: u64, n: u64) -> bool {
    n <= 2 || n % p == 0 || p % n == 1 || p % n == n - 1
}

fn mod_u32(n: &BigUint, p: u32) -> u32 {
    (n % p).to_u32().unwrap()
}

/// Strips the candidate primes below the trial bound; returns the found
/// prime powers and what is left. Every prime factor of the remainder
/// exceeds the last prime tried.
fn strip_candidates(value: &BigInt, n: u64) -> (BTreeMap<BigUint, u64>, BigUint) {
    let mut rest = value.magnitude().clone();
    let mut found = BTreeMap::new();
    for &p in small_primes() {
        if rest.is_one() {
            break;
        }
        if let Some(small) = rest.to_u64() {
            if (p as u64) * (p as u64) > small {
                // rest is prime
                found.insert(rest, 1);
                return (found, BigUint::one());
            }
        }
        if !is_candidate(p as u64, n) || mod_u32(&rest, p) != 0 {
            continue;
        }
        let mut e = 0;
        while mod_u32(&rest, p) == 0 {
            rest /= p;
            e += 1;
        }
        found.insert(BigUint::from(p), e);
    }
    (found, rest)
}

fn finish(rest: BigUint, found: &mut BTreeMap<BigUint, u64>, rho: bool) -> BigUint {
    if rest.is_one() {
        return rest;
    }
    if is_probable_prime(&rest) {
        *found.entry(rest).or_insert(0) += 1;
        return BigUint::one();
    }
    if !rho || rest.bits() > RHO_MAX_BITS {
        return rest;
    }
    let mut primes = Vec::new();
    let mut cofactor = BigUint::one();
    split_big(rest, DEFAULT_RHO_BUDGET, &mut primes, &mut cofactor);
    for p in primes {
        *found.entry(p).or_insert(0) += 1;
    }
    cofactor
}

/// The primes at which some conjugate of `beta` meets some conjugate of the
/// orbit, each with its total valuation. Huge values may be left partially
/// factored; the unsplit part is reported as `cofactor`.
pub fn meeting_primes(orbit: &PreperiodicOrbit, beta: &Beta) -> Result<MeetingPrimes> {
    meeting_primes_with(orbit, beta, true)
}

/// [`meeting_primes`] with trial division and a primality test only.
pub(crate) fn meeting_primes_trial(orbit: &PreperiodicOrbit, beta: &Beta) -> Result<MeetingPrimes> {
    meeting_primes_with(orbit, beta, false)
}

fn meeting_primes_with(orbit: &PreperiodicOrbit, beta: &Beta, rho: bool) -> Result<MeetingPrimes> {
    let value = meeting_value(orbit, beta)?;
    let (mut primes, rest) = match beta {
        Beta::Rational(_) => strip_candidates(&value, orbit.order()),
        Beta::Algebraic(_) => {
            let (small, rest) = trial_divide(value.magnitude());
            let mut found = BTreeMap::new();
            for p in small {
                *found.entry(p).or_insert(0) += 1;
            }
            (found, rest)
        }
    };
    let cofactor = finish(rest, &mut primes, rho);
    Ok(MeetingPrimes { primes, cofactor })
}

/// Exact S-integrality decision without a full factorization: strip the
/// primes of `S` and test whether a unit remains.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SIntegralVerdict {
    pub is_s_integral: bool,
    /// A prime outside `S` at which the orbit meets `beta`, when one was
    /// found below the trial bound or the remainder is itself prime.
    #[serde(serialize_with = "opt_decimal")]
    pub witness: Option<BigUint>,
    /// Bits of the part of the meeting value supported outside `S`.
    pub outside_bits: u64,
}

pub fn s_integral_verdict(orbit: &PreperiodicOrbit, beta: &Beta, s: &PlaceSet) -> Result<SIntegralVerdict> {
    let mut value = meeting_value(orbit, beta)?;
    for p in s.primes() {
        strip_prime(&mut value, p);
    }
    let rest = value.abs();
    if rest.is_one() {
        return Ok(SIntegralVerdict {
            is_s_integral: true,
            witness: None,
            outside_bits: 0,
        });
    }
    let outside_bits = rest.bits();
    let n = match beta {
        Beta::Rational(_) => orbit.order(),
        Beta::Algebraic(_) => 1,
    };
    let mag = rest.magnitude();
    let mut witness = None;
    for &p in small_primes() {
        if let Some(small) = mag.to_u64() {
            if (p as u64) * (p as u64) > small {
                witness = Some(mag.clone());
                break;
            }
        }
        if is_candidate(p as u64, n) && mod_u32(mag, p) == 0 {
            witness = Some(BigUint::from(p));
            break;
        }
    }
    if witness.is_none() && is_probable_prime(mag) {
        witness = Some(mag.clone());
    }
    Ok(SIntegralVerdict {
        is_s_integral: false,
        witness,
        outside_bits,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SIntegralityReport {
    pub orbit_n: u64,
    pub orbit_size: usize,
    #[serde(serialize_with = "display")]
    pub beta: Beta,
    pub s: PlaceSet,
    #[serde(serialize_with = "prime_map")]
    pub meeting_primes: BTreeMap<BigUint, u64>,
    /// Unsplit part of the meeting value, if any.
    #[serde(serialize_with = "opt_decimal")]
    pub unfactored: Option<BigUint>,
    #[serde(rename = "isSIntegral")]
    pub is_s_integral: bool,
    #[serde(serialize_with = "opt_decimal")]
    pub witness: Option<BigUint>,
}

fn display<S: Serializer>(b: &Beta, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&b.to_string())
}

/// Full report: meeting primes with valuations, plus the exact verdict.
pub fn is_s_integral(orbit: &PreperiodicOrbit, beta: &Beta, s: &PlaceSet) -> Result<SIntegralityReport> {
    let mp = meeting_primes(orbit, beta)?;
    let verdict = s_integral_verdict(orbit, beta, s)?;
    let witness = mp
        .primes
        .keys()
        .find(|p| p.to_u64().map_or(true, |q| !s.contains_prime(q)))
        .cloned()
        .or(verdict.witness);
    Ok(SIntegralityReport {
        orbit_n: orbit.order(),
        orbit_size: orbit.size(),
        beta: beta.clone(),
        s: s.clone(),
        meeting_primes: mp.primes,
        unfactored: (!mp.cofactor.is_one()).then_some(mp.cofactor),
        is_s_integral: verdict.is_s_integral,
        witness: if verdict.is_s_integral { None } else { witness },
    })
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

/// `T_m(b) mod p` by the doubling ladder on `(T_k, T_{k+1})`.
fn cheb_mod(m: u64, b: u64, p: u64) -> u64 {
    let two = 2 % p;
    let (mut t0, mut t1) = (two, b % p);
    if m == 0 {
        return t0;
    }
    for i in (0..64 - m.leading_zeros()).rev() {
        let t2k = (mulmod(t0, t0, p) + p - two) % p;
        let t2k1 = (mulmod(t0, t1, p) + p - b % p) % p;
        if (m >> i) & 1 == 1 {
            let t2k2 = (mulmod(t1, t1, p) + p - two) % p;
            (t0, t1) = (t2k1, t2k2);
        } else {
            (t0, t1) = (t2k, t2k1);
        }
    }
    t0
}

fn rat_mod(x: &Rat, p: u64) -> Option<u64> {
    let bp = BigInt::from(p);
    let den = x.denom().mod_floor(&bp).to_u64().unwrap();
    if den == 0 {
        return None;
    }
    let num = x.numer().mod_floor(&bp).to_u64().unwrap();
    // Fermat inverse
    let mut inv = 1u64;
    let (mut b, mut e) = (den, p - 2);
    while e > 0 {
        if e & 1 == 1 {
            inv = mulmod(inv, b, p);
        }
        b = mulmod(b, b, p);
        e >>= 1;
    }
    Some(mulmod(num, if p == 2 { 1 } else { inv }, p))
}

/// Multiplicative order of a root `w` of `w^2 - beta w + 1` over the
/// algebraic closure of `F_p`; `None` when `p` divides the denominator.
pub fn w_order_mod_p(beta: &Rat, p: u64) -> Result<Option<u64>> {
    require_prime(p)?;
    let Some(b) = rat_mod(beta, p) else {
        return Ok(None);
    };
    let mut cands = divisors(p - 1);
    cands.extend(divisors(p + 1));
    cands.sort_unstable();
    cands.dedup();
    // w^m = 1 iff w^m + w^-m = 2
    Ok(cands.into_iter().find(|&m| cheb_mod(m, b, p) == 2 % p))
}

/// Whether `p` divides `s^d Psi_N(r/s)`: over `F_p`, `Psi_N` vanishes
/// exactly at the images of points of order `m` with `N = m p^k`.
pub fn prime_meets_orbit(n: u64, beta: &Rat, p: u64) -> Result<bool> {
    let Some(m) = w_order_mod_p(beta, p)? else {
        return Ok(false);
    };
    if n % m != 0 {
        return Ok(false);
    }
    let mut q = n / m;
    while q % p == 0 {
        q /= p;
    }
    Ok(q == 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::padic::int_valuation;
    use proptest::prelude::*;

    fn orbit(n: u64) -> PreperiodicOrbit {
        PreperiodicOrbit::new(n).unwrap()
    }

    fn map(m: &BTreeMap<BigUint, u64>) -> Vec<(u64, u64)> {
        m.iter().map(|(p, e)| (p.to_u64().unwrap(), *e)).collect()
    }

    #[test]
    fn documented_meeting_primes() {
        let mp = meeting_primes(&orbit(5), &Beta::rational(3, 1)).unwrap();
        assert_eq!(map(&mp.primes), vec![(11, 1)]);
        assert!(meeting_primes(&orbit(1), &Beta::rational(3, 1)).unwrap().primes.is_empty());
        let mp = meeting_primes(&orbit(4), &Beta::rational(4, 3)).unwrap();
        assert_eq!(map(&mp.primes), vec![(2, 2)]);
        assert!(matches!(
            meeting_primes(&orbit(3), &Beta::rational(-1, 1)),
            Err(Error::Coincidence { order: 3, .. })
        ));
    }

    #[test]
    fn documented_s_integrality() {
        let b3 = Beta::rational(3, 1);
        let r = is_s_integral(&orbit(5), &b3, &"inf,11".parse().unwrap()).unwrap();
        assert!(r.is_s_integral && r.witness.is_none());
        let r = is_s_integral(&orbit(5), &b3, &PlaceSet::archimedean()).unwrap();
        assert!(!r.is_s_integral);
        assert_eq!(r.witness, Some(BigUint::from(11u32)));
        let r = is_s_integral(&orbit(1), &b3, &PlaceSet::archimedean()).unwrap();
        assert!(r.is_s_integral);
    }

    #[test]
    fn algebraic_beta_uses_the_resultant() {
        // beta = golden ratio root of x^2 - x - 1 is a conjugate of N = 10
        let phi: Beta = "poly:-1,-1,1".parse().unwrap();
        assert!(matches!(meeting_primes(&orbit(10), &phi), Err(Error::Coincidence { .. })));
        // (3 + 4i)/5: the lead 5 is not a meeting prime by itself
        let b: Beta = "poly:5,-6,5".parse().unwrap();
        let mp = meeting_primes(&orbit(1), &b).unwrap();
        // Res(x - 2, 5x^2 - 6x + 5) = 20 - 12 + 5 = 13
        assert_eq!(map(&mp.primes), vec![(13, 1)]);
        let v = s_integral_verdict(&orbit(1), &b, &"inf,13".parse().unwrap()).unwrap();
        assert!(v.is_s_integral);
    }

    #[test]
    fn lead_primes_can_be_genuine_meetings() {
        // 3x^2 - 7x + 1 has one root of 3-adic valuation -1 and one root
        // congruent to -2 modulo 27
        let b: Beta = "poly:1,-7,3".parse().unwrap();
        assert_eq!(meeting_value(&orbit(2), &b).unwrap(), BigInt::from(27));
        let mp = meeting_primes(&orbit(2), &b).unwrap();
        assert_eq!(map(&mp.primes), vec![(3, 3)]);
    }

    #[test]
    fn orders_mod_p() {
        // beta = 3: w = (3 + sqrt 5)/2; mod 11, Psi_5(3) = 11
        assert_eq!(w_order_mod_p(&Rat::from_integer(3.into()), 11).unwrap(), Some(5));
        assert_eq!(w_order_mod_p(&Rat::from_integer(2.into()), 7).unwrap(), Some(1));
        assert_eq!(w_order_mod_p(&Rat::new(1.into(), 7.into()), 7).unwrap(), None);
        assert!(prime_meets_orbit(5, &Rat::from_integer(3.into()), 11).unwrap());
        assert!(prime_meets_orbit(55, &Rat::from_integer(3.into()), 11).unwrap());
        assert!(!prime_meets_orbit(10, &Rat::from_integer(3.into()), 11).unwrap());
    }

    #[test]
    fn large_orbit_verdict_without_factoring() {
        let o = orbit(997);
        let v = s_integral_verdict(&o, &Beta::rational(3, 1), &PlaceSet::archimedean()).unwrap();
        assert!(!v.is_s_integral);
        assert!(v.outside_bits > 100);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]

        #[test]
        fn meeting_criterion_matches_divisibility(n in 1u64..=60, num in -50i64..=50, den in 1i64..=50,
                                                  p in prop::sample::select(vec![2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97])) {
            let beta = Rat::new(num.into(), den.into());
            let o = orbit(n);
            let f = o.eval_homogeneous(beta.numer(), beta.denom());
            prop_assume!(!f.is_zero());
            prop_assert_eq!(prime_meets_orbit(n, &beta, p).unwrap(), int_valuation(&f, p) > 0);
        }

        #[test]
        fn meeting_primes_multiply_back(n in 1u64..=40, num in -50i64..=50, den in 1i64..=50) {
            let beta = Beta::Rational(Rat::new(num.into(), den.into()));
            let o = orbit(n);
            prop_assume!(!o.contains_rational(beta.as_rational().unwrap()));
            let mp = meeting_primes(&o, &beta).unwrap();
            prop_assert!(mp.is_complete() || !is_probable_prime(&mp.cofactor));
            let mut prod = mp.cofactor.clone();
            for (p, e) in &mp.primes {
                prod *= p.pow(*e as u32);
            }
            let f = meeting_value(&o, &beta).unwrap();
            prop_assert_eq!(&prod, f.magnitude());
        }

        #[test]
        fn small_meeting_values_factor_completely(n in 1u64..=12, num in -20i64..=20, den in 1i64..=20) {
            let beta = Beta::Rational(Rat::new(num.into(), den.into()));
            let o = orbit(n);
            prop_assume!(!o.contains_rational(beta.as_rational().unwrap()));
            prop_assert!(meeting_primes(&o, &beta).unwrap().is_complete());
        }

        #[test]
        fn verdict_matches_report(n in 1u64..=30, num in -30i64..=30, den in 1i64..=30, mask in 0u8..16) {
            let beta = Beta::Rational(Rat::new(num.into(), den.into()));
            let o = orbit(n);
            prop_assume!(!o.contains_rational(beta.as_rational().unwrap()));
            let primes: Vec<u64> = [2u64, 3, 5, 7].iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, p)| *p).collect();
            let s = PlaceSet::with_primes(&primes).unwrap();
            let r = is_s_integral(&o, &beta, &s).unwrap();
            let all_in = r.meeting_primes.keys().all(|p| p.to_u64().is_some_and(|q| s.contains_prime(q)));
            prop_assert_eq!(r.is_s_integral, all_in);
            if !r.is_s_integral {
                let w = r.witness.clone().unwrap();
                prop_assert!(r.meeting_primes.contains_key(&w));
            }
        }
    }
}
