use cheb_core::arith::Rat;
use cheb_core::harness::scan_s_integral_orbits;
use cheb_core::heights::{canonical_height, weil_height};
use cheb_core::integrality::{cor33_check, is_s_integral, PlaceSet};
use cheb_core::{Beta, ChebMap, PreperiodicOrbit};
use proptest::prelude::*;

fn rat(n: i64, d: i64) -> Rat {
    Rat::new(n.into(), d.into())
}

#[test]
fn scan_examples() {
    let beta = Beta::rational(3, 1);
    let only_inf = scan_s_integral_orbits(&beta, &PlaceSet::archimedean(), 100, 1.0).unwrap();
    assert_eq!(only_inf.orders(), [1]);
    let s: PlaceSet = "inf,2,3,5,11".parse().unwrap();
    let r = scan_s_integral_orbits(&beta, &s, 12, 1.0).unwrap();
    for n in [1, 2, 3, 4, 5, 6, 12] {
        assert!(r.orders().contains(&n));
    }
    assert!(!r.orders().contains(&7) && !r.orders().contains(&8));
}

#[test]
fn sintegral_example() {
    let s: PlaceSet = "inf,11".parse().unwrap();
    let r = is_s_integral(&PreperiodicOrbit::new(5).unwrap(), &Beta::rational(3, 1), &s).unwrap();
    assert!(r.is_s_integral);
    assert_eq!(r.meeting_primes.len(), 1);
    assert_eq!(r.meeting_primes.values().next(), Some(&1));
}

#[test]
fn cor33_examples() {
    let r = cor33_check(&rat(3, 1), 2, 3).unwrap();
    assert_eq!(r.flagged_points, 1);
    assert_eq!(r.flagged[0].orbit_n, 3);
}

#[test]
fn canonical_height_closed_forms() {
    let map = ChebMap::new(2).unwrap();
    let h3 = canonical_height(&Beta::rational(3, 1), map, 1e-10).unwrap();
    assert!((h3.value - ((3.0 + 5f64.sqrt()) / 2.0).ln()).abs() <= 1e-9);
    let half = canonical_height(&Beta::rational(1, 2), map, 1e-10).unwrap();
    assert!((half.value - 2f64.ln()).abs() <= 1e-9);
}

/// Numeric oracle: the minimal polynomial is prod (x - 2 cos(2 pi a / N)).
fn product_coeffs(n: u64) -> Vec<f64> {
    let mut c = vec![1.0];
    for a in (1..=n.max(2) / 2).filter(|a| num_gcd(*a, n) == 1) {
        let r = 2.0 * (2.0 * std::f64::consts::PI * a as f64 / n as f64).cos();
        let mut next = vec![0.0; c.len() + 1];
        for (i, ci) in c.iter().enumerate() {
            next[i + 1] += ci;
            next[i] -= r * ci;
        }
        c = next;
    }
    c
}

fn num_gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        num_gcd(b, a % b)
    }
}

proptest! {
    #[test]
    fn minpoly_matches_root_product(n in 3u64..60) {
        let o = PreperiodicOrbit::new(n).unwrap();
        let exact: Vec<f64> = o.minpoly().coeffs().iter().map(|c| c.to_string().parse().unwrap()).collect();
        let approx = product_coeffs(n);
        prop_assert_eq!(exact.len(), approx.len());
        for (e, a) in exact.iter().zip(&approx) {
            prop_assert!((e - a).abs() < 1e-6 * (1.0 + e.abs()));
        }
    }

    #[test]
    fn weil_height_rational_formula(num in -1000i64..1000, den in 1i64..1000) {
        let b = Beta::rational(num, den);
        let r = rat(num, den);
        let m = r.numer().clone().max(-r.numer().clone()).max(r.denom().clone());
        let expect = if m == 0.into() { 0.0 } else { m.to_string().parse::<f64>().unwrap().ln() };
        prop_assert!((weil_height(&b).value - expect).abs() < 1e-12);
    }
}
