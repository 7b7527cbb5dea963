//! Polynomials with coefficients in `o_k`, ascending order.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::base_field::{BaseField, OkElem, Residue};
use crate::finite_field::FqPoly;

pub type OkPoly = Vec<OkElem>;

pub fn trim(mut a: OkPoly) -> OkPoly {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

pub fn add(a: &OkPoly, b: &OkPoly) -> OkPoly {
    let n = a.len().max(b.len());
    let z = OkElem::zero();
    trim(
        (0..n)
            .map(|i| a.get(i).unwrap_or(&z).add(b.get(i).unwrap_or(&z)))
            .collect(),
    )
}

pub fn sub(a: &OkPoly, b: &OkPoly) -> OkPoly {
    let n = a.len().max(b.len());
    let z = OkElem::zero();
    trim(
        (0..n)
            .map(|i| a.get(i).unwrap_or(&z).sub(b.get(i).unwrap_or(&z)))
            .collect(),
    )
}

pub fn mul(k: &BaseField, a: &OkPoly, b: &OkPoly) -> OkPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![OkElem::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(&k.mul(x, y));
        }
    }
    trim(out)
}

pub fn derivative(a: &OkPoly) -> OkPoly {
    trim(
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.scale(&BigInt::from(i)))
            .collect(),
    )
}

pub fn conj(k: &BaseField, a: &OkPoly) -> OkPoly {
    a.iter().map(|c| k.conj(c)).collect()
}

/// `f(x + c)`.
pub fn taylor_shift(k: &BaseField, f: &OkPoly, c: &OkElem) -> OkPoly {
    // Horner: ((f_n (x + c) + f_{n-1}) (x + c) + ...)
    let lin = vec![c.clone(), OkElem::one()];
    let mut acc: OkPoly = Vec::new();
    for coeff in f.iter().rev() {
        acc = add(&mul(k, &acc, &lin), &vec![coeff.clone()]);
    }
    acc
}

pub fn reduce(res: &Residue, f: &OkPoly) -> FqPoly {
    res.field().trim(f.iter().map(|c| res.reduce(c)).collect())
}

pub fn lift(res: &Residue, f: &FqPoly) -> OkPoly {
    trim(f.iter().map(|c| res.lift(*c)).collect())
}

/// Determinant by fraction-free (Bareiss) elimination over `o_k`.
pub fn determinant(k: &BaseField, mut m: Vec<Vec<OkElem>>) -> OkElem {
    let n = m.len();
    if n == 0 {
        return OkElem::one();
    }
    let mut sign = false;
    let mut prev = OkElem::one();
    for col in 0..n {
        if m[col][col].is_zero() {
            match (col + 1..n).find(|r| !m[*r][col].is_zero()) {
                Some(r) => {
                    m.swap(col, r);
                    sign = !sign;
                }
                None => return OkElem::zero(),
            }
        }
        for i in col + 1..n {
            for j in col + 1..n {
                let num = k.mul(&m[i][j], &m[col][col]).sub(&k.mul(&m[i][col], &m[col][j]));
                m[i][j] = k.div_exact(&num, &prev).expect("Bareiss quotient is integral");
            }
            m[i][col] = OkElem::zero();
        }
        prev = m[col][col].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign {
        d.neg()
    } else {
        d
    }
}

/// Resultant of two nonzero polynomials via the Sylvester matrix.
pub fn resultant(k: &BaseField, f: &OkPoly, g: &OkPoly) -> OkElem {
    let (m, n) = (f.len() - 1, g.len() - 1);
    let size = m + n;
    if size == 0 {
        return OkElem::one();
    }
    let mut rows = Vec::with_capacity(size);
    for i in 0..n {
        let mut row = vec![OkElem::zero(); size];
        for (j, c) in f.iter().rev().enumerate() {
            row[i + j] = c.clone();
        }
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![OkElem::zero(); size];
        for (j, c) in g.iter().rev().enumerate() {
            row[i + j] = c.clone();
        }
        rows.push(row);
    }
    determinant(k, rows)
}

/// Discriminant of a monic polynomial of degree at least 1.
pub fn discriminant(k: &BaseField, f: &OkPoly) -> OkElem {
    let n = f.len() - 1;
    let r = resultant(k, f, &derivative(f));
    if (n * (n - 1) / 2) % 2 == 1 {
        r.neg()
    } else {
        r
    }
}

/// Integer coefficients of `f * conj(f)` (the absolute norm polynomial).
pub fn norm_poly(k: &BaseField, f: &OkPoly) -> Vec<BigInt> {
    if k.is_rational() {
        return f.iter().map(|c| c.a.clone()).collect();
    }
    let g = mul(k, f, &conj(k, f));
    debug_assert!(g.iter().all(|c| c.b.is_zero()));
    g.into_iter().map(|c| c.a).collect()
}

pub fn is_monic(f: &OkPoly) -> bool {
    f.last().is_some_and(|c| c.is_one())
}

/// Human-readable rendering, highest degree first.
pub fn display(f: &OkPoly) -> String {
    let mut parts = Vec::new();
    for (i, c) in f.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let coeff = if c.b.is_zero() {
            c.a.to_string()
        } else {
            format!("({c})")
        };
        let term = match i {
            0 => coeff,
            _ => {
                let x = if i == 1 { "x".to_string() } else { format!("x^{i}") };
                if c.is_one() {
                    x
                } else if c.b.is_zero() && c.a == -BigInt::one() {
                    format!("-{x}")
                } else {
                    format!("{coeff}*{x}")
                }
            }
        };
        parts.push(term);
    }
    if parts.is_empty() {
        return "0".into();
    }
    let mut s = parts[0].clone();
    for p in &parts[1..] {
        if let Some(rest) = p.strip_prefix('-') {
            s.push_str(" - ");
            s.push_str(rest);
        } else {
            s.push_str(" + ");
            s.push_str(p);
        }
    }
    s
}

/// Integer polynomial rendering used in error messages.
pub fn display_int(f: &[BigInt]) -> String {
    let ok: OkPoly = f.iter().map(|c| OkElem::int(c.clone())).collect();
    display(&ok)
}

/// Upper bound on the absolute value of any coefficient, taken over both embeddings.
pub fn height(k: &BaseField, f: &OkPoly) -> BigInt {
    f.iter()
        .map(|c| c.abs_bound(k))
        .max()
        .unwrap_or_else(BigInt::zero)
        .abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> OkPoly {
        v.iter().map(|c| OkElem::int(*c)).collect()
    }

    #[test]
    fn discriminants_of_cubics() {
        let q = BaseField::rational();
        // x^3 - x - 1 has discriminant -23
        assert_eq!(discriminant(&q, &ints(&[-1, -1, 0, 1])), OkElem::int(-23));
        // x^3 + x + 1 has discriminant -31
        assert_eq!(discriminant(&q, &ints(&[1, 1, 0, 1])), OkElem::int(-31));
        // x^2 - 2: 8
        assert_eq!(discriminant(&q, &ints(&[-2, 0, 1])), OkElem::int(8));
        let k = BaseField::new(-20).unwrap();
        // x^4 - 2x^2 + 9: 2^14 3^2
        assert_eq!(discriminant(&k, &ints(&[9, 0, -2, 0, 1])), OkElem::int(147456));
    }

    #[test]
    fn discriminant_with_quadratic_coefficients() {
        let k = BaseField::new(-23).unwrap();
        // (x - w)(x - 1) has discriminant (w - 1)^2
        let f = mul(&k, &vec![OkElem::new(0, -1), OkElem::one()], &ints(&[-1, 1]));
        let w1 = OkElem::new(-1, 1);
        assert_eq!(discriminant(&k, &f), k.mul(&w1, &w1));
    }

    #[test]
    fn taylor_shift_roundtrip() {
        let k = BaseField::new(-7).unwrap();
        let f = vec![OkElem::new(3, 1), OkElem::new(-2, 0), OkElem::new(0, 5), OkElem::one()];
        let c = OkElem::new(2, -3);
        let g = taylor_shift(&k, &taylor_shift(&k, &f, &c), &c.neg());
        assert_eq!(g, f);
    }

    #[test]
    fn norm_polynomial_is_rational() {
        let k = BaseField::new(-20).unwrap();
        // x - w with w = sqrt(-5): norm x^2 + 5
        let f = vec![OkElem::new(0, -1), OkElem::one()];
        assert_eq!(norm_poly(&k, &f), vec![BigInt::from(5), BigInt::zero(), BigInt::one()]);
    }

    #[test]
    fn rendering() {
        assert_eq!(display(&ints(&[-1, -1, 0, 1])), "x^3 - x - 1");
        let f = vec![OkElem::new(1, 2), OkElem::one()];
        assert_eq!(display(&f), "x + (1+2w)");
    }
}
