//! Resultants over the integers by the subresultant remainder sequence.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::IntPoly;
use crate::{Error, Result};

/// Resultant with the convention `Res(f, g) = lead(g)^deg(f) * prod f(b_j)`
/// over the roots `b_j` of `g`.
///
/// This is the Sylvester determinant of `(g, f)`, i.e. `(-1)^(deg f deg g)`
/// times the determinant of `(f, g)`. For `g = s*x - r` it is the homogenized
/// value `s^deg(f) f(r/s)`.
pub fn resultant(f: &IntPoly, g: &IntPoly) -> Result<BigInt> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::domain("resultant of the zero polynomial"));
    }
    Ok(sylvester_order_resultant(g, f))
}

/// `lead(a)^deg(b) * prod b(a_i)` over the roots `a_i` of `a`.
fn sylvester_order_resultant(a: &IntPoly, b: &IntPoly) -> BigInt {
    let (da, db) = (a.degree(), b.degree());
    if da == 0 {
        return a.lead().pow(db as u32);
    }
    if db == 0 {
        return b.lead().pow(da as u32);
    }

    let ca = a.content();
    let cb = b.content();
    let mut a = a.div_scalar_exact(&ca);
    let mut b = b.div_scalar_exact(&cb);
    let t = ca.pow(db as u32) * cb.pow(da as u32);

    let mut sign = 1i32;
    if a.degree() < b.degree() {
        std::mem::swap(&mut a, &mut b);
        if a.degree() % 2 == 1 && b.degree() % 2 == 1 {
            sign = -sign;
        }
    }

    let mut g = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let delta = a.degree() - b.degree();
        if a.degree() % 2 == 1 && b.degree() % 2 == 1 {
            sign = -sign;
        }
        let (_, r) = a.pseudo_div_rem(&b);
        if r.is_zero() {
            return BigInt::zero();
        }
        let divisor = &g * h.pow(delta as u32);
        a = b;
        b = r.div_scalar_exact(&divisor);
        g = a.lead();
        h = match delta {
            0 => h,
            1 => g.clone(),
            _ => {
                let num = g.pow(delta as u32);
                let den = h.pow(delta as u32 - 1);
                let (q, rem) = num.div_rem(&den);
                debug_assert!(rem.is_zero());
                q
            }
        };
        if b.degree() == 0 {
            break;
        }
    }
    let da = a.degree() as u32;
    let num = b.lead().pow(da);
    let den = h.pow(da - 1);
    let (q, rem) = num.div_rem(&den);
    debug_assert!(rem.is_zero());
    let out = q * t;
    if sign < 0 {
        -out
    } else {
        out
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use num_traits::Signed;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    /// Determinant of the Sylvester matrix of `(a, b)` by Bareiss elimination.
    pub(crate) fn sylvester_det(a: &IntPoly, b: &IntPoly) -> BigInt {
        let (m, n) = (a.degree(), b.degree());
        let size = m + n;
        if size == 0 {
            return BigInt::one();
        }
        let mut mat = vec![vec![BigInt::zero(); size]; size];
        for i in 0..n {
            for (j, c) in a.coeffs().iter().rev().enumerate() {
                mat[i][i + j] = c.clone();
            }
        }
        for i in 0..m {
            for (j, c) in b.coeffs().iter().rev().enumerate() {
                mat[n + i][i + j] = c.clone();
            }
        }
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..size {
            if mat[k][k].is_zero() {
                match (k + 1..size).find(|&r| !mat[r][k].is_zero()) {
                    Some(r) => {
                        mat.swap(k, r);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..size {
                for j in k + 1..size {
                    let v = &mat[i][j] * &mat[k][k] - &mat[i][k] * &mat[k][j];
                    mat[i][j] = v / &prev;
                }
            }
            prev = mat[k][k].clone();
        }
        sign * &mat[size - 1][size - 1]
    }

    #[test]
    fn documented_examples() {
        assert_eq!(resultant(&p(&[-1, 1, 1]), &p(&[-3, 1])).unwrap(), 11.into());
        assert_eq!(resultant(&p(&[0, 1]), &p(&[0, 1])).unwrap(), 0.into());
        assert_eq!(resultant(&p(&[1, 0, 1]), &p(&[-2, 0, 1])).unwrap(), 9.into());
    }

    #[test]
    fn zero_input_is_a_domain_error() {
        assert!(resultant(&IntPoly::zero(), &p(&[1, 1])).is_err());
    }

    #[test]
    fn linear_second_argument_homogenizes() {
        // Res(f, 3x - 4) = 3^2 f(4/3)
        let f = p(&[-1, 1, 1]);
        let g = p(&[-4, 3]);
        assert_eq!(resultant(&f, &g).unwrap(), f.eval_homogeneous(&4.into(), &3.into()));
    }

    fn small_poly() -> impl Strategy<Value = IntPoly> {
        prop::collection::vec(-9i64..=9, 1..7)
            .prop_filter("nonzero", |c| c.iter().any(|&x| x != 0))
            .prop_map(|c| IntPoly::from_i64(&c))
    }

    proptest! {
        #[test]
        fn matches_sylvester_determinant(f in small_poly(), g in small_poly()) {
            let expected = sylvester_det(&g, &f);
            prop_assert_eq!(resultant(&f, &g).unwrap(), expected);
        }

        #[test]
        fn swapping_arguments_flips_by_degree_parity(f in small_poly(), g in small_poly()) {
            let sign = if (f.degree() * g.degree()) % 2 == 0 { 1 } else { -1 };
            prop_assert_eq!(
                resultant(&f, &g).unwrap(),
                BigInt::from(sign) * resultant(&g, &f).unwrap()
            );
        }

        #[test]
        fn monic_against_linear_is_homogenized_value(
            c in prop::collection::vec(-20i64..=20, 1..6),
            r in -50i64..=50,
            s in 1i64..=30,
        ) {
            let mut c = c;
            c.push(1);
            let f = IntPoly::from_i64(&c);
            let g = IntPoly::from_i64(&[-r, s]);
            let h = f.eval_homogeneous(&r.into(), &s.into());
            prop_assert_eq!(resultant(&f, &g).unwrap(), h.clone());
            // the homogenized value is the cleared evaluation f(r/s) * s^deg
            let v = f.eval_rat(&crate::Rat::new(r.into(), s.into()));
            let cleared = v * crate::Rat::from(BigInt::from(s).pow(f.degree() as u32));
            prop_assert!(cleared.is_integer());
            prop_assert_eq!(cleared.to_integer().abs(), h.abs());
        }
    }
}
