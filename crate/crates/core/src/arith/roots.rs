//! Certified complex roots of integer polynomials.
//!
//! Aberth iteration in `f64` provides starting points. These are refined by
//! Weierstrass (Durand–Kerner) steps on fixed-point Gaussian integers with
//! exact polynomial evaluation, doubling the working precision until the
//! inclusion disks `D(z_i, n |f(z_i)| / |a_n prod_{j != i} (z_i - z_j)|)` are
//! pairwise disjoint and small enough. Disjoint Weierstrass disks each hold
//! exactly one root.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::numeric::{ApproxComplex, UNIT_ROUNDOFF};
use super::IntPoly;
use crate::{Error, Result};

/// Precision ceiling used when `CHEB_PRECISION_BITS` is unset.
pub const DEFAULT_PRECISION_BITS: u32 = 256;

/// The precision ceiling from `CHEB_PRECISION_BITS`, falling back to 256.
pub fn precision_bits_ceiling() -> u32 {
    std::env::var("CHEB_PRECISION_BITS")
        .ok()
        .and_then(|s| s.trim().parse::<u32>().ok())
        .filter(|&b| b >= 64)
        .unwrap_or(DEFAULT_PRECISION_BITS)
}

/// Roots of a squarefree `f`, each with `error_bound <= precision`, sorted by
/// real part and then imaginary part.
pub fn complex_roots(f: &IntPoly, precision: f64) -> Result<Vec<ApproxComplex>> {
    complex_roots_with_ceiling(f, precision, precision_bits_ceiling())
}

/// As [`complex_roots`] with an explicit fixed-point precision ceiling.
pub fn complex_roots_with_ceiling(
    f: &IntPoly,
    precision: f64,
    max_bits: u32,
) -> Result<Vec<ApproxComplex>> {
    if f.is_zero() {
        return Err(Error::domain("roots of the zero polynomial"));
    }
    if !(precision > 0.0) {
        return Err(Error::domain("root precision must be positive"));
    }
    let n = f.degree();
    match n {
        0 => return Ok(Vec::new()),
        1 => return Ok(vec![linear_root(f)]),
        _ => {}
    }
    if !f.is_squarefree() {
        return Err(Error::domain(format!("{f} is not squarefree")));
    }
    let start = aberth(f);
    let mut z: Vec<(BigInt, BigInt)> = Vec::new();
    let mut prev_bits = 0u32;
    let mut best = f64::INFINITY;
    let mut bits = 64u32;
    loop {
        let bits_now = bits.min(max_bits);
        z = if z.is_empty() {
            start.iter().map(|w| to_fixed(*w, bits_now)).collect()
        } else {
            z.into_iter()
                .map(|(x, y)| (x << (bits_now - prev_bits), y << (bits_now - prev_bits)))
                .collect()
        };
        prev_bits = bits_now;
        for _ in 0..80 {
            let (next, step) = weierstrass_step(f, &z, bits_now);
            z = next;
            if step < 2f64.powi(-(bits_now as i32) + 16) {
                break;
            }
        }
        if let Some(roots) = certify(f, &z, bits_now) {
            let bound = roots.iter().map(|r| r.error_bound).fold(0.0, f64::max);
            if bound <= precision {
                return Ok(normalize(roots));
            }
            best = best.min(bound);
        }
        if bits_now >= max_bits {
            return Err(Error::RootNonConvergence {
                bits: bits_now,
                best_bound: best,
            });
        }
        bits *= 2;
    }
}

fn linear_root(f: &IntPoly) -> ApproxComplex {
    let exact = BigRational::new(-f.coeff(0), f.coeff(1));
    let v = super::numeric::ratio_to_f64(exact.numer(), exact.denom());
    let err = match BigRational::from_float(v) {
        Some(r) if r == exact => 0.0,
        _ => 2.0 * UNIT_ROUNDOFF * v.abs() + f64::MIN_POSITIVE,
    };
    ApproxComplex::new(Complex64::new(v, 0.0), err)
}

/// `1 + max |c_i / c_n|`, an upper bound on every root modulus.
pub fn cauchy_bound(f: &IntPoly) -> f64 {
    let lead = f.lead();
    let m = f.coeffs()[..f.degree()]
        .iter()
        .map(|c| super::numeric::ratio_to_f64(c, &lead).abs())
        .fold(0.0, f64::max);
    1.0 + m
}

fn coeffs_f64(f: &IntPoly) -> Vec<f64> {
    f.coeffs()
        .iter()
        .map(|c| c.to_f64().unwrap_or(f64::INFINITY))
        .collect()
}

/// Simultaneous Aberth iteration in double precision.
fn aberth(f: &IntPoly) -> Vec<Complex64> {
    let c = coeffs_f64(f);
    let n = c.len() - 1;
    let dc: Vec<f64> = (1..=n).map(|k| c[k] * k as f64).collect();
    let eval = |cs: &[f64], z: Complex64| cs.iter().rev().fold(Complex64::zero(), |a, &k| a * z + k);
    // Fujiwara's bound on the root moduli
    let lead = c[n].abs();
    let radius = (1..=n)
        .map(|k| (c[n - k].abs() / lead).powf(1.0 / k as f64))
        .fold(0.0, f64::max)
        .max(1e-3);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64 + 0.4))
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let p = eval(&c, z[i]);
            if p == Complex64::zero() {
                continue;
            }
            let ratio = p / eval(&dc, z[i]);
            let sum: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| 1.0 / (z[i] - z[j]))
                .sum();
            let w = ratio / (1.0 - ratio * sum);
            if w.is_finite() {
                z[i] -= w;
                moved = moved.max(w.norm() / z[i].norm().max(1.0));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

fn to_fixed(z: Complex64, bits: u32) -> (BigInt, BigInt) {
    (scaled_to_bigint(z.re, bits as i64), scaled_to_bigint(z.im, bits as i64))
}

/// `round(x * 2^k)` as a big integer.
fn scaled_to_bigint(x: f64, k: i64) -> BigInt {
    if x == 0.0 || !x.is_finite() {
        return BigInt::zero();
    }
    let bits = x.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (mant, e) = if exp == 0 {
        (frac, -1074)
    } else {
        (frac | (1u64 << 52), exp - 1075)
    };
    let shift = e + k;
    let mut m = BigInt::from(mant);
    if shift >= 0 {
        m <<= shift as usize;
    } else {
        let s = (-shift) as usize;
        if s > 64 {
            return BigInt::zero();
        }
        m = (m + (BigInt::from(1u8) << (s - 1))) >> s;
    }
    if x < 0.0 {
        -m
    } else {
        m
    }
}

/// Splits a big integer into `m * 2^e` with `m` an `f64` of magnitude below 2^62.
fn split_exp(x: &BigInt) -> (f64, i64) {
    let b = x.bits() as i64;
    if b <= 62 {
        (x.to_f64().unwrap(), 0)
    } else {
        let s = b - 62;
        ((x >> s as usize).to_f64().unwrap(), s)
    }
}

/// `X + iY` as a complex `m * 2^e`.
fn split_complex(x: &BigInt, y: &BigInt) -> (Complex64, i64) {
    let b = x.bits().max(y.bits()) as i64;
    let s = (b - 62).max(0);
    let re = (x >> s as usize).to_f64().unwrap();
    let im = (y >> s as usize).to_f64().unwrap();
    (Complex64::new(re, im), s)
}

/// `2^(P n) f((X + iY) / 2^P)` exactly.
fn eval_fixed(f: &IntPoly, x: &BigInt, y: &BigInt, bits: u32) -> (BigInt, BigInt) {
    let (mut re, mut im) = (BigInt::zero(), BigInt::zero());
    let mut scale = BigInt::from(1u8);
    for c in f.coeffs().iter().rev() {
        let nre = &re * x - &im * y + c * &scale;
        let nim = &re * y + &im * x;
        re = nre;
        im = nim;
        scale <<= bits as usize;
    }
    (re, im)
}

fn ldexp(x: f64, e: i64) -> f64 {
    x * 2f64.powi(e.clamp(-1000, 1000) as i32)
}

/// Weierstrass corrections `w_i = f(z_i) / (a_n prod (z_i - z_j))` as
/// complex mantissas with a binary exponent, in units of 1 (not fixed point).
fn corrections(f: &IntPoly, z: &[(BigInt, BigInt)], bits: u32) -> Vec<(Complex64, i64)> {
    let n = z.len();
    let (lead, lead_e) = split_exp(&f.lead());
    z.iter()
        .enumerate()
        .map(|(i, (x, y))| {
            let (fx, fy) = eval_fixed(f, x, y, bits);
            let (num, num_e) = split_complex(&fx, &fy);
            let mut den = Complex64::new(lead, 0.0);
            let mut den_e = lead_e;
            for (j, (xj, yj)) in z.iter().enumerate() {
                if j == i {
                    continue;
                }
                let (d, e) = split_complex(&(x - xj), &(y - yj));
                den *= d;
                den_e += e - bits as i64;
                let (m, ex) = frexp(den.norm());
                if m > 0.0 {
                    den /= ldexp(1.0, ex);
                    den_e += ex;
                }
            }
            let e = num_e - (bits as i64) * n as i64 - den_e;
            let q = num / den;
            let (m, ex) = frexp(q.norm());
            if m == 0.0 || !q.is_finite() {
                return (q, 0);
            }
            (q / ldexp(1.0, ex), e + ex)
        })
        .collect()
}

fn frexp(x: f64) -> (f64, i64) {
    if x == 0.0 || !x.is_finite() {
        return (x, 0);
    }
    let e = x.log2().floor() as i64;
    (ldexp(x, -e), e)
}

fn weierstrass_step(f: &IntPoly, z: &[(BigInt, BigInt)], bits: u32) -> (Vec<(BigInt, BigInt)>, f64) {
    let ws = corrections(f, z, bits);
    let mut largest = 0.0f64;
    let next = z
        .iter()
        .zip(&ws)
        .map(|((x, y), (w, e))| {
            if !w.is_finite() {
                return (x.clone(), y.clone());
            }
            largest = largest.max(ldexp(w.norm(), *e));
            let k = bits as i64 + e;
            (x - scaled_to_bigint(w.re, k), y - scaled_to_bigint(w.im, k))
        })
        .collect();
    (next, largest)
}

/// Inclusion disks around the fixed-point approximations, if pairwise disjoint.
fn certify(f: &IntPoly, z: &[(BigInt, BigInt)], bits: u32) -> Option<Vec<ApproxComplex>> {
    let n = z.len() as f64;
    let ws = corrections(f, z, bits);
    let mut out = Vec::with_capacity(z.len());
    for ((x, y), (w, e)) in z.iter().zip(&ws) {
        if !w.is_finite() {
            return None;
        }
        // the corrections carry a relative error of a few hundred ulps at most
        let radius = ldexp(w.norm(), *e) * n * (1.0 + 1e-12);
        let (c, ce) = split_complex(x, y);
        let value = Complex64::new(ldexp(c.re, ce - bits as i64), ldexp(c.im, ce - bits as i64));
        // distance from the fixed-point centre to the rounded f64 centre
        let back = to_fixed(value, bits);
        let (d, de) = split_complex(&(x - &back.0), &(y - &back.1));
        let rounding = ldexp(d.norm(), de - bits as i64) * (1.0 + 1e-12) + ldexp(1.0, 2 - bits as i64);
        out.push((value, radius, ApproxComplex::new(value, radius + rounding)));
    }
    for i in 0..out.len() {
        for j in i + 1..out.len() {
            let gap = (out[i].0 - out[j].0).norm();
            if gap <= (out[i].1 + out[j].1) * (1.0 + 1e-9) + 4.0 * UNIT_ROUNDOFF * out[i].0.norm().max(out[j].0.norm()) {
                return None;
            }
        }
    }
    Some(out.into_iter().map(|t| t.2).collect())
}

/// Uses that `f` is real: a disk meeting only its own mirror image holds a
/// real root, and non-real roots pair with their conjugates.
fn normalize(mut roots: Vec<ApproxComplex>) -> Vec<ApproxComplex> {
    let m = roots.len();
    let overlaps = |a: &ApproxComplex, b: &ApproxComplex| {
        (a.value - b.value).norm() <= a.error_bound + b.error_bound
    };
    let mirror = |a: &ApproxComplex| ApproxComplex::new(a.value.conj(), a.error_bound);
    let mut done = vec![false; m];
    for i in 0..m {
        if done[i] {
            continue;
        }
        let mi = mirror(&roots[i]);
        let hits: Vec<usize> = (0..m).filter(|&j| overlaps(&mi, &roots[j])).collect();
        if hits == [i] {
            roots[i].value.im = 0.0;
            done[i] = true;
        } else if hits.len() == 1 && !done[hits[0]] {
            let j = hits[0];
            let (a, b) = (roots[i], roots[j]);
            let centre = (a.value + b.value.conj()) * 0.5;
            let shift = (a.value - b.value.conj()).norm() * 0.5;
            let rad = a.error_bound.max(b.error_bound) + shift + 2.0 * UNIT_ROUNDOFF * centre.norm();
            roots[i] = ApproxComplex::new(centre, rad);
            roots[j] = ApproxComplex::new(centre.conj(), rad);
            done[i] = true;
            done[j] = true;
        }
    }
    roots.sort_by(|a, b| {
        a.value
            .re
            .total_cmp(&b.value.re)
            .then(a.value.im.total_cmp(&b.value.im))
    });
    roots
}

/// Whether `f` (squarefree, nonzero) is irreducible over the rationals, for
/// degree at most 16. Candidate factors are built from subsets of certified
/// roots and confirmed by exact division.
pub fn is_irreducible(f: &IntPoly) -> Result<bool> {
    let n = f.degree();
    if f.is_zero() || n == 0 {
        return Ok(false);
    }
    if n > 16 {
        return Err(Error::domain("irreducibility test limited to degree 16"));
    }
    if !f.content().abs().is_one() {
        return Ok(false);
    }
    if n == 1 {
        return Ok(true);
    }
    if !f.is_squarefree() {
        return Ok(false);
    }
    if f.coeff(0).is_zero() {
        return Ok(false);
    }
    let roots = complex_roots(f, 1e-12 * cauchy_bound(f))?;
    let lead = f.lead().abs();
    let leads: Vec<BigInt> = match lead.to_u64() {
        Some(l) => super::padic::divisors(l).into_iter().map(BigInt::from).collect(),
        None => return Err(Error::domain("leading coefficient too large")),
    };
    for k in 1..=n / 2 {
        let mut subset: Vec<usize> = (0..k).collect();
        loop {
            if let Some(found) = try_subset(f, &roots, &subset, &leads)? {
                if found {
                    return Ok(false);
                }
            }
            if !next_subset(&mut subset, n) {
                break;
            }
        }
    }
    Ok(true)
}

fn next_subset(s: &mut [usize], n: usize) -> bool {
    let k = s.len();
    for i in (0..k).rev() {
        if s[i] < n - k + i {
            s[i] += 1;
            for j in i + 1..k {
                s[j] = s[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// `Some(true)` when the subset yields an exact factor.
fn try_subset(
    f: &IntPoly,
    roots: &[ApproxComplex],
    subset: &[usize],
    leads: &[BigInt],
) -> Result<Option<bool>> {
    // enclosure of prod (x - r) over the subset, coefficient balls
    let one = ApproxComplex::exact(Complex64::new(1.0, 0.0));
    let zero = ApproxComplex::exact(Complex64::zero());
    let mut poly = vec![one];
    for &i in subset {
        let r = roots[i];
        let mut next = vec![zero; poly.len() + 1];
        for (k, c) in poly.iter().enumerate() {
            next[k + 1] = next[k + 1].add(c);
            next[k] = next[k].sub(&c.mul(&r));
        }
        poly = next;
    }
    for l in leads {
        let lf = l.to_f64().unwrap();
        let mut coeffs = Vec::with_capacity(poly.len());
        let mut possible = true;
        for c in &poly {
            let b = c.scale(lf);
            if b.value.im.abs() > b.error_bound {
                possible = false;
                break;
            }
            let lo = (b.value.re - b.error_bound).ceil();
            let hi = (b.value.re + b.error_bound).floor();
            if lo > hi {
                possible = false;
                break;
            }
            if lo != hi {
                return Err(Error::domain("root precision too low to certify irreducibility"));
            }
            coeffs.push(BigInt::from(lo as i64));
        }
        if !possible {
            continue;
        }
        let g = IntPoly::new(coeffs);
        if f.div_exact(&g).is_some() {
            return Ok(Some(true));
        }
    }
    Ok(None)
}
