//! Dense univariate polynomials with big-integer coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::numeric::{ApproxComplex, UNIT_ROUNDOFF};
use super::Rat;

/// Integer polynomial, coefficients stored lowest degree first.
///
/// The coefficient vector never ends in a zero; the zero polynomial has an
/// empty coefficient vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        IntPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive(coeffs: Vec<BigInt>) -> Self {
        IntPoly::new(coeffs).primitive_part()
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: BigInt) -> Self {
        IntPoly::new(vec![c])
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        IntPoly::from_i64(&[0, 1])
    }

    /// `a*x + b`
    pub fn linear(a: BigInt, b: BigInt) -> Self {
        IntPoly::new(vec![b, a])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    /// Leading coefficient (zero for the zero polynomial).
    pub fn lead(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    pub fn primitive_part(&self) -> IntPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut g = self.content();
        if self.lead().is_negative() {
            g = -g;
        }
        IntPoly::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    pub fn scale(&self, k: &BigInt) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// Divides every coefficient by `k`, which must divide the content.
    pub fn div_scalar_exact(&self, k: &BigInt) -> IntPoly {
        IntPoly::new(
            self.coeffs
                .iter()
                .map(|c| {
                    debug_assert!((c % k).is_zero());
                    c / k
                })
                .collect(),
        )
    }

    pub fn derivative(&self) -> IntPoly {
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_rat(&self, x: &Rat) -> Rat {
        if self.is_zero() {
            return Rat::zero();
        }
        let v = self.eval_homogeneous(x.numer(), x.denom());
        Rat::new(v, x.denom().pow(self.degree() as u32))
    }

    /// `s^deg * f(r/s)`, an integer for integer `r`, `s`.
    pub fn eval_homogeneous(&self, r: &BigInt, s: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        let mut s_pow = BigInt::one();
        for c in self.coeffs.iter().rev() {
            acc = acc * r + c * &s_pow;
            s_pow *= s;
        }
        acc
    }

    /// Floating evaluation at a complex ball, returning a ball that contains
    /// every value of `f` on the input ball.
    pub fn eval_approx(&self, z: &ApproxComplex) -> ApproxComplex {
        let n = self.coeffs.len();
        if n == 0 {
            return ApproxComplex::exact(Complex64::new(0.0, 0.0));
        }
        let x = z.value;
        let r = z.error_bound;
        let mut acc = Complex64::new(0.0, 0.0);
        // Magnitude polynomial evaluated at |x| for the rounding bound and at
        // |x| + r for the input-error bound.
        let mut mag = 0.0f64;
        let mut mag_shift = 0.0f64;
        let ax = x.norm();
        for c in self.coeffs.iter().rev() {
            let cf = c.to_f64().unwrap_or(f64::INFINITY);
            acc = acc * x + cf;
            mag = mag * ax + cf.abs();
            mag_shift = mag_shift * (ax + r) + cf.abs();
        }
        let gamma = (4 * n + 4) as f64 * UNIT_ROUNDOFF;
        let rounding = gamma * mag / (1.0 - gamma);
        // |f(x+d) - f(x)| <= sum |c_k| ((|x|+r)^k - |x|^k)
        let propagated = (mag_shift - mag).max(0.0);
        ApproxComplex::new(acc, (rounding + propagated) * (1.0 + 8.0 * UNIT_ROUNDOFF))
    }

    /// `f(a*x + b)` for integers `a`, `b`.
    pub fn compose_linear(&self, a: &BigInt, b: &BigInt) -> IntPoly {
        let lin = IntPoly::linear(a.clone(), b.clone());
        let mut acc = IntPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &lin) + &IntPoly::constant(c.clone());
        }
        acc
    }

    /// Pseudo-division: returns `(q, r)` with `lead(g)^(deg f - deg g + 1) f = q g + r`.
    pub fn pseudo_div_rem(&self, g: &IntPoly) -> (IntPoly, IntPoly) {
        assert!(!g.is_zero(), "pseudo-division by zero polynomial");
        if self.degree() < g.degree() || self.is_zero() {
            return (IntPoly::zero(), self.clone());
        }
        let m = g.degree();
        let lg = g.lead();
        let mut r = self.coeffs.clone();
        let steps = self.degree() - m + 1;
        let mut q = vec![BigInt::zero(); steps];
        for k in (0..steps).rev() {
            let top = r[k + m].clone();
            for qc in q.iter_mut() {
                *qc *= &lg;
            }
            q[k] += &top;
            for c in r.iter_mut() {
                *c *= &lg;
            }
            for (j, gc) in g.coeffs.iter().enumerate() {
                r[k + j] -= &top * gc;
            }
            r.pop();
        }
        (IntPoly::new(q), IntPoly::new(r))
    }

    /// Exact division over the integers, `None` when `g` does not divide `self`.
    pub fn div_exact(&self, g: &IntPoly) -> Option<IntPoly> {
        assert!(!g.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(IntPoly::zero());
        }
        if self.degree() < g.degree() {
            return None;
        }
        let m = g.degree();
        let lg = g.lead();
        let mut r = self.coeffs.clone();
        let steps = self.degree() - m + 1;
        let mut q = vec![BigInt::zero(); steps];
        for k in (0..steps).rev() {
            let (qk, rem) = r[k + m].div_rem(&lg);
            if !rem.is_zero() {
                return None;
            }
            for (j, gc) in g.coeffs.iter().enumerate() {
                r[k + j] -= &qk * gc;
            }
            q[k] = qk;
        }
        if r.iter().all(|c| c.is_zero()) {
            Some(IntPoly::new(q))
        } else {
            None
        }
    }

    /// Greatest common divisor, primitive with positive leading coefficient.
    pub fn gcd(&self, other: &IntPoly) -> IntPoly {
        let (mut a, mut b) = (self.primitive_part(), other.primitive_part());
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let (_, r) = a.pseudo_div_rem(&b);
            a = b;
            b = r.primitive_part();
        }
        a.primitive_part()
    }

    pub fn is_squarefree(&self) -> bool {
        if self.degree() < 2 {
            return !self.is_zero();
        }
        self.gcd(&self.derivative()).degree() == 0
    }

    /// Coefficients in the basis `1, T_1, T_2, ...` where `T_k(z + 1/z) = z^k + z^-k`.
    ///
    /// Horner's scheme with `x*T_k = T_{k+1} + T_{k-1}` (and `x*T_1 = T_2 + 2`).
    pub fn to_trace_basis(&self) -> Vec<BigInt> {
        let n = self.coeffs.len();
        let mut acc: Vec<BigInt> = vec![BigInt::zero(); n.max(1)];
        let mut len = 0usize;
        for c in self.coeffs.iter().rev() {
            // acc <- x * acc
            let mut next = vec![BigInt::zero(); len + 1];
            for k in 0..len {
                let a = &acc[k];
                if a.is_zero() {
                    continue;
                }
                match k {
                    0 => next[1] += a,
                    1 => {
                        next[2] += a;
                        next[0] += a * 2u32;
                    }
                    _ => {
                        next[k + 1] += a;
                        next[k - 1] += a;
                    }
                }
            }
            next[0] += c;
            len += 1;
            acc[..len].clone_from_slice(&next[..len]);
        }
        acc.truncate(len.max(1));
        while acc.len() > 1 && acc.last().is_some_and(|c| c.is_zero()) {
            acc.pop();
        }
        acc
    }

    /// Inverse of [`IntPoly::to_trace_basis`], by Clenshaw's recurrence.
    pub fn from_trace_basis(b: &[BigInt]) -> IntPoly {
        if b.is_empty() {
            return IntPoly::zero();
        }
        // y_k = b_k + x y_{k+1} - y_{k+2};  sum_{k>=1} b_k T_k = x y_1 - 2 y_2.
        // Coefficient buffers are updated in place: y2 <- b_k + x y1 - y2.
        let n = b.len();
        let mut y1: Vec<BigInt> = vec![BigInt::zero(); n + 1];
        let mut y2: Vec<BigInt> = vec![BigInt::zero(); n + 1];
        // y1 has degree `top` - 1 before each step
        let mut top = 0;
        for bk in b.iter().skip(1).rev() {
            for i in (1..=top).rev() {
                let t = std::mem::take(&mut y2[i]);
                y2[i] = &y1[i - 1] - t;
            }
            let t = std::mem::take(&mut y2[0]);
            y2[0] = bk - t;
            std::mem::swap(&mut y1, &mut y2);
            top += 1;
        }
        let mut out = vec![BigInt::zero(); n + 1];
        for i in 0..=n {
            let mut c = BigInt::zero();
            if i > 0 {
                c += &y1[i - 1];
            }
            c -= &y2[i] * 2;
            out[i] = c;
        }
        out[0] += &b[0];
        IntPoly::new(out)
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new(
            (0..n)
                .map(|i| match (self.coeffs.get(i), rhs.coeffs.get(i)) {
                    (Some(a), Some(b)) => a + b,
                    (Some(a), None) => a.clone(),
                    (None, Some(b)) => b.clone(),
                    (None, None) => unreachable!(),
                })
                .collect(),
        )
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        self + &(-rhs)
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = i == 0 || !mag.is_one();
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}
