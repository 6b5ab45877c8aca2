use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::arith::padic::{int_valuation, require_prime};
use crate::arith::{IntPoly, Rat, Valuation};
use crate::chebyshev::PreperiodicOrbit;
use crate::{Error, Result};

/// Valuations of the roots of `g` over `C_p`, one entry per root (with
/// multiplicity), ascending; a root at 0 has valuation `inf`.
pub fn newton_polygon_valuations(g: &IntPoly, p: u64) -> Result<Vec<Valuation>> {
    require_prime(p)?;
    if g.is_zero() {
        return Err(Error::domain("Newton polygon of the zero polynomial"));
    }
    let c = g.coeffs();
    let zeros = c.iter().take_while(|x| x.is_zero()).count();
    let pts: Vec<(i64, i64)> = c
        .iter()
        .enumerate()
        .skip(zeros)
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i as i64, int_valuation(x, p) as i64))
        .collect();
    // lower convex hull, left to right
    let mut hull: Vec<(i64, i64)> = Vec::with_capacity(pts.len());
    for &q in &pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            // drop b unless it lies strictly below the chord a-q
            let cross = (b.0 - a.0) * (q.1 - a.1) - (b.1 - a.1) * (q.0 - a.0);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(q);
    }
    let mut out = vec![Valuation::Infinite; zeros];
    for w in hull.windows(2) {
        let (a, b) = (w[0], w[1]);
        let v = Ratio::new(a.1 - b.1, b.0 - a.0);
        out.extend(std::iter::repeat(Valuation::Finite(v)).take((b.0 - a.0) as usize));
    }
    out.sort();
    Ok(out)
}

/// `g(x) = s^d Psi_N(r/s - x)`, an integer polynomial whose roots are the
/// differences `beta - sigma(alpha)`.
pub fn difference_polynomial(orbit: &PreperiodicOrbit, beta: &Rat) -> IntPoly {
    let psi = orbit.minpoly().coeffs();
    let d = psi.len() - 1;
    let (r, s) = (beta.numer(), beta.denom());
    let mut spow = vec![BigInt::one(); d + 1];
    for k in 1..=d {
        spow[k] = &spow[k - 1] * s;
    }
    // Horner in y = r - s x, carrying the homogenising powers of s
    let mut acc: Vec<BigInt> = vec![psi[d].clone()];
    for i in (0..d).rev() {
        let mut next = vec![BigInt::zero(); acc.len() + 1];
        for (j, a) in acc.iter().enumerate() {
            next[j] += r * a;
            next[j + 1] -= s * a;
        }
        next[0] += &psi[i] * &spow[d - i];
        acc = next;
    }
    IntPoly::new(acc)
}

/// `v_p(1 - zeta_m)`: `inf` for `m = 1`, `1/((p - 1) p^(n - 1))` for
/// `m = p^n`, and 0 otherwise.
pub fn root_of_unity_valuation(m: u64, p: u64) -> Result<Valuation> {
    require_prime(p)?;
    if m == 0 {
        return Err(Error::domain("root of unity of order 0"));
    }
    if m == 1 {
        return Ok(Valuation::Infinite);
    }
    let mut q = m;
    let mut n = 0u32;
    while q % p == 0 {
        q /= p;
        n += 1;
    }
    if q != 1 {
        return Ok(Valuation::int(0));
    }
    let den = (p - 1)
        .checked_mul(p.checked_pow(n - 1).ok_or_else(|| Error::domain("order too large"))?)
        .ok_or_else(|| Error::domain("order too large"))?;
    Ok(Valuation::ratio(1, den as i64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::numeric::ApproxComplex;
    use crate::arith::padic::padic_valuation;
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn vals(v: &[Valuation]) -> Vec<String> {
        v.iter().map(|x| x.to_string()).collect()
    }

    #[test]
    fn documented_polygons() {
        for p in [2u64, 3, 5, 7] {
            let pi = p as i64;
            let a = newton_polygon_valuations(&IntPoly::from_i64(&[-pi, 0, 1]), p).unwrap();
            assert_eq!(vals(&a), ["1/2", "1/2"]);
            let b = newton_polygon_valuations(&IntPoly::from_i64(&[pi, -1, 1]), p).unwrap();
            assert_eq!(vals(&b), ["0", "1"]);
            let c = newton_polygon_valuations(&IntPoly::from_i64(&[1, 1, pi]), p).unwrap();
            assert_eq!(vals(&c), ["-1", "0"]);
        }
        let z = newton_polygon_valuations(&IntPoly::from_i64(&[0, 0, 4, 1]), 2).unwrap();
        assert_eq!(vals(&z), ["2", "inf", "inf"]);
        assert!(newton_polygon_valuations(&IntPoly::zero(), 2).is_err());
    }

    #[test]
    fn documented_root_of_unity_valuations() {
        assert_eq!(root_of_unity_valuation(2, 2).unwrap(), Valuation::int(1));
        assert_eq!(root_of_unity_valuation(9, 3).unwrap(), Valuation::ratio(1, 6));
        assert_eq!(root_of_unity_valuation(5, 3).unwrap(), Valuation::int(0));
        assert_eq!(root_of_unity_valuation(1, 3).unwrap(), Valuation::Infinite);
        assert_eq!(root_of_unity_valuation(6, 3).unwrap(), Valuation::int(0));
    }

    #[test]
    fn root_of_unity_valuation_from_cyclotomic_polygon() {
        // roots of Phi_m(1 - x) are 1 - zeta_m
        for p in [2u64, 3, 5, 7] {
            for m in 2u64..=60 {
                let phi = crate::chebyshev::cyclotomic(m);
                let shifted = phi.compose_linear(&BigInt::from(-1), &BigInt::one());
                let v = newton_polygon_valuations(&shifted, p).unwrap();
                let want = root_of_unity_valuation(m, p).unwrap();
                assert!(v.iter().all(|x| *x == want), "m={m} p={p}: {v:?}");
            }
        }
    }

    #[test]
    fn difference_polynomial_roots() {
        // N = 5, beta = 3: Psi_5(3 - x) = x^2 - 7x + 11
        let o = PreperiodicOrbit::new(5).unwrap();
        let g = difference_polynomial(&o, &Rat::from_integer(3.into()));
        assert_eq!(g, IntPoly::from_i64(&[11, -7, 1]));
        assert_eq!(vals(&newton_polygon_valuations(&g, 11).unwrap()), ["0", "1"]);
        // roots are beta - conjugates
        let o = PreperiodicOrbit::new(9).unwrap();
        let beta = Rat::new(7.into(), 2.into());
        let g = difference_polynomial(&o, &beta);
        for c in o.conjugates() {
            let z = ApproxComplex::exact(Complex64::new(3.5 - c.value, 0.0));
            assert!(g.eval_approx(&z).value.norm() < 1e-8);
        }
    }

    fn poly() -> impl Strategy<Value = IntPoly> {
        prop::collection::vec(-10_000i64..=10_000, 2..10).prop_map(|v| IntPoly::from_i64(&v))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]

        #[test]
        fn slope_sum_rule(g in poly(), p in prop::sample::select(vec![2u64, 3, 5, 7, 11])) {
            prop_assume!(g.degree() >= 1 && !g.coeff(0).is_zero());
            let v = newton_polygon_valuations(&g, p).unwrap();
            prop_assert_eq!(v.len(), g.degree());
            let sum: Ratio<i64> = v.iter().map(|x| x.finite().unwrap()).sum();
            let want = int_valuation(&g.coeff(0), p) as i64 - int_valuation(&g.lead(), p) as i64;
            prop_assert_eq!(sum, Ratio::from_integer(want));
        }

        #[test]
        fn linear_factor_products(roots in prop::collection::vec((-200i64..=200, 1i64..=50), 1..5), p in prop::sample::select(vec![2u64, 3, 5])) {
            // g = prod (b x - a) has root valuations v_p(a/b)
            let mut g = IntPoly::constant(BigInt::one());
            let mut want = Vec::new();
            for &(a, b) in &roots {
                g = &g * &IntPoly::from_i64(&[-a, b]);
                want.push(padic_valuation(&Rat::new(a.into(), b.into()), p).unwrap());
            }
            want.sort();
            prop_assert_eq!(newton_polygon_valuations(&g, p).unwrap(), want);
        }
    }
}
