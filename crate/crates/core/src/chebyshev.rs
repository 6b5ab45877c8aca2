//! Chebyshev polynomials `T_n(z + 1/z) = z^n + z^-n` and the Galois orbits
//! of their preperiodic points `zeta + 1/zeta`.

use std::f64::consts::TAU;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::numeric::{ApproxComplex, ApproxReal, UNIT_ROUNDOFF};
use crate::arith::padic::{divisors, mobius};
use crate::arith::{euler_phi, IntPoly, Rat};
use crate::{Error, Result};

/// The map `T_d` for a fixed degree `d >= 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub struct ChebMap {
    degree: u32,
}

impl ChebMap {
    pub fn new(degree: u32) -> Result<Self> {
        if degree < 2 {
            return Err(Error::domain(format!(
                "Chebyshev map needs degree >= 2, got {degree}"
            )));
        }
        Ok(ChebMap { degree })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn poly(&self) -> IntPoly {
        cheb_poly(self.degree as u64).expect("degree >= 2")
    }

    pub fn apply(&self, z: &Rat) -> Rat {
        cheb_eval_rat(self.degree as u64, z)
    }

    /// One step on projective coordinates `(r : s)`, `s != 0`:
    /// `(s^d T_d(r/s), s^d)`, not reduced.
    pub fn apply_homogeneous(&self, r: &BigInt, s: &BigInt) -> (BigInt, BigInt) {
        (cheb_homogeneous(self.degree as u64, r, s), s.pow(self.degree))
    }

    pub fn apply_approx(&self, z: &ApproxComplex) -> ApproxComplex {
        cheb_eval_approx(self.degree as u64, z)
    }
}

/// Coefficients of `T_n` from `T_{k+1} = z T_k - T_{k-1}`, `T_0 = 2`, `T_1 = z`.
pub fn cheb_poly(n: u64) -> Result<IntPoly> {
    if n == 0 {
        return Err(Error::domain("cheb_poly needs n >= 1"));
    }
    let x = IntPoly::x();
    let mut prev = IntPoly::constant(BigInt::from(2));
    let mut cur = x.clone();
    for _ in 1..n {
        let next = &(&x * &cur) - &prev;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// `s^n T_n(r/s)` by the doubling ladder
/// `H_{2k} = H_k^2 - 2 s^{2k}`, `H_{2k+1} = H_k H_{k+1} - r s^{2k}`.
pub fn cheb_homogeneous(n: u64, r: &BigInt, s: &BigInt) -> BigInt {
    if n == 0 {
        return BigInt::from(2);
    }
    // invariant: (a, b) = (H_k, H_{k+1}) and sk = s^k
    let mut a = BigInt::from(2);
    let mut b = r.clone();
    let mut sk = BigInt::one();
    for bit in (0..64 - n.leading_zeros()).rev() {
        let s2k = &sk * &sk;
        let h2k = &a * &a - (&s2k * 2u32);
        let h2k1 = &a * &b - r * &s2k;
        let s2k1 = &s2k * s;
        if (n >> bit) & 1 == 1 {
            // (H_{2k+1}, H_{2k+2})
            let h2k2 = &b * &b - (&s2k1 * s * 2u32);
            a = h2k1;
            b = h2k2;
            sk = s2k1;
        } else {
            a = h2k;
            b = h2k1;
            sk = s2k;
        }
    }
    a
}

/// `T_n(z)` exactly.
pub fn cheb_eval_rat(n: u64, z: &Rat) -> Rat {
    let h = cheb_homogeneous(n, z.numer(), z.denom());
    Rat::new(h, z.denom().pow(n as u32))
}

/// `T_n(z)` on a complex ball, by the same ladder in ball arithmetic.
pub fn cheb_eval_approx(n: u64, z: &ApproxComplex) -> ApproxComplex {
    let two = ApproxComplex::exact(Complex64::new(2.0, 0.0));
    if n == 0 {
        return two;
    }
    let mut a = two;
    let mut b = *z;
    for bit in (0..64 - n.leading_zeros()).rev() {
        let h2k = a.mul(&a).sub(&two);
        let h2k1 = a.mul(&b).sub(z);
        if (n >> bit) & 1 == 1 {
            b = b.mul(&b).sub(&two);
            a = h2k1;
        } else {
            a = h2k;
            b = h2k1;
        }
    }
    a
}

/// The cyclotomic polynomial `Phi_n` from `prod_{d | n} (x^d - 1)^{mu(n/d)}`.
pub fn cyclotomic(n: u64) -> IntPoly {
    assert!(n >= 1, "cyclotomic needs n >= 1");
    let divs = divisors(n);
    let (num, den): (Vec<u64>, Vec<u64>) = {
        let mut num = Vec::new();
        let mut den = Vec::new();
        for &d in &divs {
            match mobius(n / d) {
                1 => num.push(d),
                -1 => den.push(d),
                _ => {}
            }
        }
        (num, den)
    };
    cyclotomic_i128(n, &num, &den)
        .map(|c| IntPoly::new(c.into_iter().map(BigInt::from).collect()))
        .unwrap_or_else(|| IntPoly::new(cyclotomic_big(n, &num, &den)))
}

fn cyclotomic_i128(n: u64, num: &[u64], den: &[u64]) -> Option<Vec<i128>> {
    let len = num.iter().sum::<u64>() as usize + 1;
    let mut p = vec![0i128; len];
    p[0] = 1;
    let mut deg = 0usize;
    for &d in num {
        let d = d as usize;
        // p <- p * (x^d - 1)
        for i in (0..=deg + d).rev() {
            let hi = if i >= d { p[i - d] } else { 0 };
            p[i] = hi.checked_sub(p[i])?;
        }
        deg += d;
    }
    for &d in den {
        let d = d as usize;
        // p = q (x^d - 1)  =>  q_i = q_{i-d} - p_i
        let mut q = vec![0i128; deg + 1 - d];
        for i in 0..q.len() {
            let prev = if i >= d { q[i - d] } else { 0 };
            q[i] = prev.checked_sub(p[i])?;
        }
        deg -= d;
        p[..=deg].copy_from_slice(&q);
        p[deg + 1..].iter_mut().for_each(|c| *c = 0);
    }
    p.truncate(deg + 1);
    debug_assert_eq!(deg as u64, euler_phi(n));
    Some(p)
}

fn cyclotomic_big(n: u64, num: &[u64], den: &[u64]) -> Vec<BigInt> {
    let len = num.iter().sum::<u64>() as usize + 1;
    let mut p = vec![BigInt::zero(); len];
    p[0] = BigInt::one();
    let mut deg = 0usize;
    for &d in num {
        let d = d as usize;
        for i in (0..=deg + d).rev() {
            let hi = if i >= d { p[i - d].clone() } else { BigInt::zero() };
            p[i] = hi - &p[i];
        }
        deg += d;
    }
    for &d in den {
        let d = d as usize;
        let mut q = vec![BigInt::zero(); deg + 1 - d];
        for i in 0..q.len() {
            let prev = if i >= d { q[i - d].clone() } else { BigInt::zero() };
            q[i] = prev - &p[i];
        }
        deg -= d;
        for (i, c) in q.into_iter().enumerate() {
            p[i] = c;
        }
    }
    p.truncate(deg + 1);
    debug_assert_eq!(deg as u64, euler_phi(n));
    p
}

/// Size of the Galois orbit of `zeta_N + 1/zeta_N` over the rationals.
pub fn orbit_size(n: u64) -> u64 {
    assert!(n >= 1, "orbit_size needs N >= 1");
    if n <= 2 {
        1
    } else {
        euler_phi(n) / 2
    }
}

/// Whether the rational `x` is preperiodic for every `T_d`, i.e. of the form
/// `zeta + 1/zeta`: exactly `x in {-2, -1, 0, 1, 2}`.
pub fn is_preperiodic_rational(x: &Rat) -> bool {
    x.is_integer() && x.numer().abs() <= BigInt::from(2)
}

/// Dynamical test under `T_2`: `Some(true)` once the forward orbit repeats,
/// `Some(false)` once it provably escapes (a point outside `[-2, 2]`, or a
/// denominator above 1, which squares at every step), `None` if undecided
/// after `max_steps`.
pub fn preperiodic_by_orbit(x: &Rat, max_steps: usize) -> Option<bool> {
    let two = Rat::from(BigInt::from(2));
    let mut seen: Vec<Rat> = Vec::new();
    let mut z = x.clone();
    for _ in 0..max_steps {
        if seen.contains(&z) {
            return Some(true);
        }
        if z.abs() > two || !z.is_integer() {
            return Some(false);
        }
        seen.push(z.clone());
        z = cheb_eval_rat(2, &z);
    }
    None
}

/// The Galois orbit of `2 cos(2 pi / N)`: minimal polynomial `Psi_N` and the
/// conjugates `2 cos(2 pi a / N)`, `gcd(a, N) = 1`, `1 <= a <= N/2`.
///
/// `Psi_N` is stored in the trace basis `b_0 + sum_{k>=1} b_k T_k`, read off
/// the palindromic `Phi_N` through `z^{-d} Phi_N(z) = Psi_N(z + 1/z)`; the
/// monomial form is built on first use.
#[derive(Debug)]
pub struct PreperiodicOrbit {
    n: u64,
    trace: Vec<BigInt>,
    numerators: Vec<u64>,
    conjugates: Vec<ApproxReal>,
    minpoly: OnceLock<IntPoly>,
}

impl Clone for PreperiodicOrbit {
    fn clone(&self) -> Self {
        PreperiodicOrbit {
            n: self.n,
            trace: self.trace.clone(),
            numerators: self.numerators.clone(),
            conjugates: self.conjugates.clone(),
            minpoly: self.minpoly.clone(),
        }
    }
}

impl PartialEq for PreperiodicOrbit {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
    }
}

impl PreperiodicOrbit {
    pub fn new(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("orbit order N must be >= 1"));
        }
        let trace = match n {
            1 => vec![BigInt::from(-2), BigInt::one()],
            2 => vec![BigInt::from(2), BigInt::one()],
            _ => {
                let phi = cyclotomic(n);
                let d = phi.degree() / 2;
                phi.coeffs()[d..].to_vec()
            }
        };
        let numerators: Vec<u64> = match n {
            1 => vec![0],
            2 => vec![1],
            _ => (1..=n / 2).filter(|a| a.gcd(&n) == 1).collect(),
        };
        let conjugates = numerators.iter().map(|&a| cos_point(a, n)).collect();
        Ok(PreperiodicOrbit {
            n,
            trace,
            numerators,
            conjugates,
            minpoly: OnceLock::new(),
        })
    }

    /// The order `N` of the root of unity.
    pub fn order(&self) -> u64 {
        self.n
    }

    pub fn size(&self) -> usize {
        self.trace.len() - 1
    }

    pub fn degree(&self) -> usize {
        self.size()
    }

    /// `b_0, ..., b_d` with `Psi_N = b_0 + sum b_k T_k`.
    pub fn trace_coeffs(&self) -> &[BigInt] {
        &self.trace
    }

    /// The `a` of each conjugate `2 cos(2 pi a / N)`, ascending.
    pub fn numerators(&self) -> &[u64] {
        &self.numerators
    }

    pub fn conjugates(&self) -> &[ApproxReal] {
        &self.conjugates
    }

    /// Monic `Psi_N` in the monomial basis.
    pub fn minpoly(&self) -> &IntPoly {
        self.minpoly
            .get_or_init(|| IntPoly::from_trace_basis(&self.trace))
    }

    /// Whether the monomial form has been materialised.
    pub fn has_minpoly(&self) -> bool {
        self.minpoly.get().is_some()
    }

    /// `F(r, s) = s^d Psi_N(r/s)` in `O(d)` big-integer steps, using
    /// `H_0 = 2`, `H_1 = r`, `H_{k+1} = r H_k - s^2 H_{k-1}` (`H_k = s^k T_k(r/s)`).
    pub fn eval_homogeneous(&self, r: &BigInt, s: &BigInt) -> BigInt {
        let s2 = s * s;
        let mut acc = self.trace[0].clone();
        let mut h_prev = BigInt::from(2);
        let mut h = r.clone();
        for (k, b) in self.trace.iter().enumerate().skip(1) {
            if k > 1 {
                let next = r * &h - &s2 * &h_prev;
                h_prev = std::mem::replace(&mut h, next);
            }
            acc = acc * s + b * &h;
        }
        acc
    }

    /// `Psi_N(x)` exactly.
    pub fn eval_rat(&self, x: &Rat) -> Rat {
        let f = self.eval_homogeneous(x.numer(), x.denom());
        Rat::new(f, x.denom().pow(self.size() as u32))
    }

    /// Whether the rational `x` is one of the conjugates.
    pub fn contains_rational(&self, x: &Rat) -> bool {
        self.size() == 1 && self.eval_homogeneous(x.numer(), x.denom()).is_zero()
    }

    /// `Res(Psi_N, f)` in the convention of [`crate::arith::resultant`]:
    /// `lead(f)^d prod Psi_N(beta_j)` over the roots of `f`.
    ///
    /// With `a = lead(f)`, `Y = a beta` is a root of the monic
    /// `g(Y) = a^{D-1} f(Y/a)`; the recurrence above runs in `Z[Y]/(g)` with
    /// `s = a`, giving `a^d Psi_N(beta)`, whose norm is `Res(U, g)`.
    pub fn resultant_with(&self, f: &IntPoly) -> Result<BigInt> {
        if f.is_zero() {
            return Err(Error::domain("resultant with the zero polynomial"));
        }
        let big_d = f.degree();
        let d = self.size();
        if big_d == 0 {
            return Ok(f.lead().pow(d as u32));
        }
        if big_d == 1 {
            // f = a x + c: Res = a^d Psi(-c/a) = F(-c, a)
            return Ok(self.eval_homogeneous(&-f.coeff(0), &f.coeff(1)));
        }
        let a = f.lead();
        // g_i = a^{D-1-i} f_i for i < D, g_D = 1
        let mut g: Vec<BigInt> = Vec::with_capacity(big_d + 1);
        let mut apow = BigInt::one();
        let mut tmp = Vec::with_capacity(big_d);
        for i in (0..big_d).rev() {
            tmp.push(f.coeff(i) * &apow);
            apow *= &a;
        }
        tmp.reverse();
        g.extend(tmp);
        g.push(BigInt::one());
        let ring = QuotientRing { g: &g };
        let a2 = &a * &a;
        let y = ring.y();
        let mut acc = ring.constant(self.trace[0].clone());
        let mut h_prev = ring.constant(BigInt::from(2));
        let mut h = y.clone();
        for (k, b) in self.trace.iter().enumerate().skip(1) {
            if k > 1 {
                let next = ring.sub(&ring.mul_y(&h), &ring.scale(&h_prev, &a2));
                h_prev = std::mem::replace(&mut h, next);
            }
            acc = ring.add(&ring.scale(&acc, &a), &ring.scale(&h, b));
        }
        let u = IntPoly::new(acc);
        let norm = if u.is_zero() {
            BigInt::zero()
        } else {
            crate::arith::resultant(&u, &IntPoly::new(g))?
        };
        let den = a.pow((d * (big_d - 1)) as u32);
        let (q, r) = norm.div_rem(&den);
        debug_assert!(r.is_zero(), "norm not divisible by lead power");
        Ok(q)
    }

    /// Certified enclosures of `Psi_N(2 cos(2 pi a / N))` at each conjugate,
    /// evaluated as `b_0 + sum_k b_k 2 cos(2 pi (k a mod N) / N)`.
    pub fn residuals(&self) -> Vec<ApproxReal> {
        let table: Vec<ApproxReal> = (0..self.n).map(|j| cos_point(j, self.n)).collect();
        let coeffs: Vec<f64> = self.trace.iter().map(|b| b.to_f64().unwrap_or(f64::INFINITY)).collect();
        self.numerators
            .iter()
            .map(|&a| {
                let mut value = 0.0f64;
                let mut bound = 0.0f64;
                for (k, &bf) in coeffs.iter().enumerate() {
                    if bf == 0.0 {
                        continue;
                    }
                    let term = if k == 0 {
                        ApproxReal::exact(1.0)
                    } else {
                        table[((k as u64 * a) % self.n) as usize]
                    };
                    value += bf * term.value;
                    bound += bf.abs() * (term.error_bound + 2.0 * UNIT_ROUNDOFF * term.value.abs());
                    bound += 2.0 * UNIT_ROUNDOFF * value.abs();
                }
                ApproxReal::new(value, bound * (1.0 + 1e-12))
            })
            .collect()
    }

    /// The conjugate `2 cos(2 pi a / N)` as a complex ball.
    pub fn conjugate_ball(&self, i: usize) -> ApproxComplex {
        ApproxComplex::real(self.conjugates[i])
    }
}

/// `2 cos(2 pi a / n)` with a rigorous radius; exact at the rational points.
pub fn cos_point(a: u64, n: u64) -> ApproxReal {
    let a = a % n;
    // rational values: a/n in {0, 1/2, 1/3, 2/3, 1/4, 3/4, 1/6, 5/6}
    let g = a.gcd(&n);
    let (ar, nr) = if a == 0 { (0, 1) } else { (a / g, n / g) };
    let exact = match (ar, nr) {
        (0, 1) => Some(2.0),
        (1, 2) => Some(-2.0),
        (_, 3) => Some(-1.0),
        (_, 4) => Some(0.0),
        (_, 6) => Some(1.0),
        _ => None,
    };
    if let Some(v) = exact {
        return ApproxReal::exact(v);
    }
    // reduce to an angle in [0, pi] before rounding
    let m = if 2 * ar > nr { nr - ar } else { ar };
    let theta = TAU * (m as f64) / (nr as f64);
    let v = 2.0 * theta.cos();
    // angle rounding (a few ulps of theta, slope of 2cos at most 2) plus cos
    ApproxReal::new(v, 2.0 * (4.0 * UNIT_ROUNDOFF * theta) + 4.0 * UNIT_ROUNDOFF * (1.0 + v.abs()))
}

/// Minimal arithmetic in `Z[Y]/(g)` for monic `g`.
struct QuotientRing<'a> {
    g: &'a [BigInt],
}

impl QuotientRing<'_> {
    fn dim(&self) -> usize {
        self.g.len() - 1
    }

    fn constant(&self, c: BigInt) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.dim()];
        v[0] = c;
        v
    }

    fn y(&self) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.dim()];
        if self.dim() == 1 {
            v[0] = -&self.g[0];
        } else {
            v[1] = BigInt::one();
        }
        v
    }

    fn mul_y(&self, u: &[BigInt]) -> Vec<BigInt> {
        let n = self.dim();
        let top = u[n - 1].clone();
        let mut v = Vec::with_capacity(n);
        v.push(BigInt::zero());
        v.extend_from_slice(&u[..n - 1]);
        if !top.is_zero() {
            for (vi, gi) in v.iter_mut().zip(self.g) {
                *vi -= &top * gi;
            }
        }
        v
    }

    fn scale(&self, u: &[BigInt], k: &BigInt) -> Vec<BigInt> {
        u.iter().map(|c| c * k).collect()
    }

    fn add(&self, u: &[BigInt], w: &[BigInt]) -> Vec<BigInt> {
        u.iter().zip(w).map(|(a, b)| a + b).collect()
    }

    fn sub(&self, u: &[BigInt], w: &[BigInt]) -> Vec<BigInt> {
        u.iter().zip(w).map(|(a, b)| a - b).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rat {
        Rat::new(n.into(), d.into())
    }

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    #[test]
    fn documented_chebyshev_polynomials() {
        assert_eq!(cheb_poly(1).unwrap(), p(&[0, 1]));
        assert_eq!(cheb_poly(2).unwrap(), p(&[-2, 0, 1]));
        assert_eq!(cheb_poly(4).unwrap(), p(&[2, 0, -4, 0, 1]));
        assert!(cheb_poly(0).is_err());
        assert!(ChebMap::new(1).is_err());
    }

    #[test]
    fn documented_evaluations() {
        assert_eq!(cheb_eval_rat(2, &q(3, 1)), q(7, 1));
        assert_eq!(cheb_eval_rat(3, &q(1, 1)), q(-2, 1));
        assert_eq!(cheb_eval_rat(6, &q(5, 1)), q(12098, 1));
        assert_eq!(cheb_eval_rat(2, &q(1, 2)), q(-7, 4));
    }

    #[test]
    fn ladder_matches_polynomial_evaluation() {
        for n in 1..=30u64 {
            let t = cheb_poly(n).unwrap();
            for z in [q(3, 1), q(-5, 7), q(1, 2), q(0, 1)] {
                assert_eq!(cheb_eval_rat(n, &z), t.eval_rat(&z), "n={n} z={z}");
            }
        }
    }

    #[test]
    fn cyclotomic_small_cases() {
        assert_eq!(cyclotomic(1), p(&[-1, 1]));
        assert_eq!(cyclotomic(2), p(&[1, 1]));
        assert_eq!(cyclotomic(12), p(&[1, 0, -1, 0, 1]));
        // first cyclotomic polynomial with a coefficient of absolute value 2
        assert!(cyclotomic(105).coeffs().iter().any(|c| *c == BigInt::from(-2)));
    }

    #[test]
    fn cyclotomic_big_path_agrees() {
        for n in [1u64, 6, 30, 105, 210, 385] {
            let divs = divisors(n);
            let num: Vec<u64> = divs.iter().copied().filter(|&d| mobius(n / d) == 1).collect();
            let den: Vec<u64> = divs.iter().copied().filter(|&d| mobius(n / d) == -1).collect();
            assert_eq!(IntPoly::new(cyclotomic_big(n, &num, &den)), cyclotomic(n));
        }
    }

    #[test]
    fn documented_orbits() {
        let o1 = PreperiodicOrbit::new(1).unwrap();
        assert_eq!(o1.minpoly(), &p(&[-2, 1]));
        assert_eq!(o1.conjugates()[0], ApproxReal::exact(2.0));
        assert_eq!(PreperiodicOrbit::new(2).unwrap().minpoly(), &p(&[2, 1]));
        assert_eq!(PreperiodicOrbit::new(4).unwrap().minpoly(), &p(&[0, 1]));
        let o5 = PreperiodicOrbit::new(5).unwrap();
        assert_eq!(o5.minpoly(), &p(&[-1, 1, 1]));
        let c72 = 2.0 * (72f64.to_radians()).cos();
        let c144 = 2.0 * (144f64.to_radians()).cos();
        assert!((o5.conjugates()[0].value - c72).abs() < 1e-15);
        assert!((o5.conjugates()[1].value - c144).abs() < 1e-15);
        assert_eq!(PreperiodicOrbit::new(7).unwrap().minpoly(), &p(&[-1, -2, 1, 1]));
        assert!(PreperiodicOrbit::new(0).is_err());
    }

    #[test]
    fn orbit_sizes() {
        assert_eq!(orbit_size(1), 1);
        assert_eq!(orbit_size(5), 2);
        assert_eq!(orbit_size(12), 2);
        for n in 1..=300 {
            let o = PreperiodicOrbit::new(n).unwrap();
            assert_eq!(o.size() as u64, orbit_size(n));
            assert_eq!(o.conjugates().len(), o.size());
            assert_eq!(o.minpoly().degree(), o.size());
            assert!(o.minpoly().is_monic());
        }
    }

    /// `z^d Psi_N(z + 1/z) = Phi_N(z)`, expanded with binomials.
    #[test]
    fn minpoly_recovers_the_cyclotomic_polynomial() {
        for n in 3..=60u64 {
            let o = PreperiodicOrbit::new(n).unwrap();
            let psi = o.minpoly();
            let d = psi.degree();
            let mut out = vec![BigInt::zero(); 2 * d + 1];
            for (k, c) in psi.coeffs().iter().enumerate() {
                // z^{d-k} (z^2 + 1)^k
                let mut binom = BigInt::one();
                for j in 0..=k {
                    out[d - k + 2 * j] += c * &binom;
                    binom = binom * BigInt::from(k - j) / BigInt::from(j + 1);
                }
            }
            assert_eq!(IntPoly::new(out), cyclotomic(n), "N={n}");
        }
    }

    #[test]
    fn minpoly_matches_rounded_product_of_conjugates() {
        for n in 3..=40u64 {
            let o = PreperiodicOrbit::new(n).unwrap();
            let mut prod = vec![1.0f64];
            for c in o.conjugates() {
                let mut next = vec![0.0; prod.len() + 1];
                for (k, a) in prod.iter().enumerate() {
                    next[k + 1] += a;
                    next[k] -= a * c.value;
                }
                prod = next;
            }
            let rounded: Vec<i64> = prod.iter().map(|x| x.round() as i64).collect();
            assert_eq!(o.minpoly(), &IntPoly::from_i64(&rounded), "N={n}");
        }
    }

    #[test]
    fn residuals_and_interval() {
        for n in 1..=200 {
            let o = PreperiodicOrbit::new(n).unwrap();
            for (c, r) in o.conjugates().iter().zip(o.residuals()) {
                assert!(c.lower() >= -2.0 - 1e-15 && c.upper() <= 2.0 + 1e-15);
                assert!(r.value.abs() + r.error_bound <= 1e-9, "N={n}: {r}");
            }
        }
    }

    #[test]
    fn homogeneous_evaluation_matches_minpoly() {
        for n in 1..=40 {
            let o = PreperiodicOrbit::new(n).unwrap();
            for (r, s) in [(3, 1), (4, 3), (-7, 2), (1, 5), (0, 1)] {
                let (r, s) = (BigInt::from(r), BigInt::from(s));
                assert_eq!(o.eval_homogeneous(&r, &s), o.minpoly().eval_homogeneous(&r, &s));
            }
        }
    }

    #[test]
    fn ring_resultant_matches_generic_resultant() {
        let fs = [p(&[-1, 1, 1]), p(&[5, -6, 5]), p(&[-3, 2]), p(&[1, 0, 0, 7]), p(&[13, -10, 13])];
        for n in 1..=30 {
            let o = PreperiodicOrbit::new(n).unwrap();
            for f in &fs {
                let want = crate::arith::resultant(o.minpoly(), f).unwrap();
                assert_eq!(o.resultant_with(f).unwrap(), want, "N={n} f={f}");
            }
        }
    }

    #[test]
    fn preperiodic_rationals() {
        assert!(is_preperiodic_rational(&q(2, 1)));
        assert!(is_preperiodic_rational(&q(1, 1)));
        assert!(!is_preperiodic_rational(&q(3, 1)));
        assert!(!is_preperiodic_rational(&q(1, 2)));
        for num in -30..=30 {
            for den in 1..=6 {
                let x = q(num, den);
                assert_eq!(preperiodic_by_orbit(&x, 64), Some(is_preperiodic_rational(&x)), "{x}");
            }
        }
    }

    #[test]
    fn orbit_closure_under_the_map() {
        for n in 1..=60u64 {
            let o = PreperiodicOrbit::new(n).unwrap();
            for d in 2..=5u64 {
                let target = PreperiodicOrbit::new(n / n.gcd(&d)).unwrap();
                for c in o.conjugates() {
                    let img = cheb_eval_approx(d, &ApproxComplex::real(*c));
                    assert!(
                        target.conjugates().iter().any(|t| (t.value - img.re()).abs() <= t.error_bound + img.error_bound),
                        "N={n} d={d}"
                    );
                }
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]

        #[test]
        fn composition(num in -40i64..=40, den in 1i64..=40, m in 1u64..=12, n in 1u64..=12) {
            let z = q(num, den);
            prop_assert_eq!(cheb_eval_rat(m * n, &z), cheb_eval_rat(m, &cheb_eval_rat(n, &z)));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn trigonometric_identity(theta in 0.0f64..TAU, n in 1u64..=40) {
            let z = ApproxComplex::new(Complex64::new(2.0 * theta.cos(), 0.0), 4.0 * UNIT_ROUNDOFF);
            let v = cheb_eval_approx(n, &z);
            // cos(n theta) with theta exact; the enclosure of z covers the
            // rounding of 2 cos(theta)
            let want = 2.0 * (n as f64 * theta).cos();
            let slack = 8.0 * UNIT_ROUNDOFF * (n as f64 * theta + 2.0);
            prop_assert!((v.re() - want).abs() <= v.error_bound + slack, "{} vs {}", v, want);
        }
    }
}
