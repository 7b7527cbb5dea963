//! Elements and fractional ideals of the base field.
//!
//! A fractional ideal is stored as `(1/den) L` with `L` an integral ideal given
//! by the Hermite normal form of a `Z`-basis, in coordinates `(w, 1)` (just `(1)`
//! over `Q`).

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::base_field::{BaseField, OkElem, PrimeIdeal, PrimeKind};
use crate::class_group::IdealClass;
use crate::error::{Error, Result};
use crate::forms::QuadraticForm;

/// An element `a + b w` of `k` with rational coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KElem {
    pub a: BigRational,
    pub b: BigRational,
}

impl KElem {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        KElem { a, b }
    }

    pub fn int(a: i64) -> Self {
        KElem {
            a: BigRational::from_integer(a.into()),
            b: BigRational::zero(),
        }
    }

    pub fn zero() -> Self {
        Self::int(0)
    }

    pub fn one() -> Self {
        Self::int(1)
    }

    pub fn omega() -> Self {
        KElem {
            a: BigRational::zero(),
            b: BigRational::one(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn add(&self, o: &KElem) -> KElem {
        KElem {
            a: &self.a + &o.a,
            b: &self.b + &o.b,
        }
    }

    pub fn sub(&self, o: &KElem) -> KElem {
        KElem {
            a: &self.a - &o.a,
            b: &self.b - &o.b,
        }
    }

    pub fn neg(&self) -> KElem {
        KElem {
            a: -&self.a,
            b: -&self.b,
        }
    }

    pub fn mul(&self, o: &KElem, k: &BaseField) -> KElem {
        let bd = &self.b * &o.b;
        let tr = BigRational::from_integer(k.omega_trace().into());
        let nm = BigRational::from_integer(k.omega_norm().into());
        KElem {
            a: &self.a * &o.a - &bd * nm,
            b: &self.a * &o.b + &self.b * &o.a + bd * tr,
        }
    }

    pub fn conj(&self, k: &BaseField) -> KElem {
        let tr = BigRational::from_integer(k.omega_trace().into());
        KElem {
            a: &self.a + &self.b * tr,
            b: -&self.b,
        }
    }

    pub fn norm(&self, k: &BaseField) -> BigRational {
        if k.is_rational() {
            return self.a.clone();
        }
        let tr = BigRational::from_integer(k.omega_trace().into());
        let nm = BigRational::from_integer(k.omega_norm().into());
        &self.a * &self.a + &self.a * &self.b * tr + &self.b * &self.b * nm
    }

    pub fn inv(&self, k: &BaseField) -> Option<KElem> {
        if self.is_zero() {
            return None;
        }
        if k.is_rational() {
            return Some(KElem {
                a: self.a.recip(),
                b: BigRational::zero(),
            });
        }
        let n = self.norm(k);
        let c = self.conj(k);
        Some(KElem {
            a: c.a / &n,
            b: c.b / n,
        })
    }
}

impl From<&OkElem> for KElem {
    fn from(x: &OkElem) -> Self {
        KElem {
            a: BigRational::from_integer(x.a.clone()),
            b: BigRational::from_integer(x.b.clone()),
        }
    }
}

impl fmt::Display for KElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{}+({})w", self.a, self.b)
        }
    }
}

/// Hermite normal form of the row lattice spanned by `rows`, pivoting on the
/// first `k` columns; the remaining columns are carried along.
///
/// Returns the transformed rows: those with a pivot first (in echelon form,
/// positive pivots, entries above each pivot reduced into `[0, pivot)`), then
/// the rows that vanish on the first `k` columns.
pub fn hnf_rows(mut rows: Vec<Vec<BigInt>>, k: usize) -> (Vec<Vec<BigInt>>, usize) {
    let m = rows.len();
    let mut r = 0;
    for col in 0..k {
        if r == m {
            break;
        }
        for i in r + 1..m {
            if rows[i][col].is_zero() {
                continue;
            }
            if rows[r][col].is_zero() {
                rows.swap(r, i);
                continue;
            }
            let (a, b) = (rows[r][col].clone(), rows[i][col].clone());
            let e = a.extended_gcd(&b);
            let (g, x, y) = (e.gcd, e.x, e.y);
            let (ag, bg) = (&a / &g, &b / &g);
            let new_r: Vec<BigInt> = rows[r].iter().zip(&rows[i]).map(|(u, v)| &x * u + &y * v).collect();
            let new_i: Vec<BigInt> = rows[r].iter().zip(&rows[i]).map(|(u, v)| &bg * u - &ag * v).collect();
            rows[r] = new_r;
            rows[i] = new_i;
        }
        if rows[r][col].is_zero() {
            continue;
        }
        if rows[r][col].is_negative() {
            rows[r] = rows[r].iter().map(|x| -x).collect();
        }
        let pivot = rows[r][col].clone();
        for i in 0..r {
            let q = rows[i][col].div_floor(&pivot);
            if !q.is_zero() {
                let pr = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(&pr) {
                    *x -= &q * y;
                }
            }
        }
        r += 1;
    }
    (rows, r)
}

/// A nonzero fractional ideal `(1/den) L`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FracIdeal {
    field: BaseField,
    den: BigInt,
    /// HNF rows of `L` in coordinates `(w, 1)`, or `(1)` over `Q`.
    basis: Vec<Vec<BigInt>>,
}

fn dim(k: &BaseField) -> usize {
    k.degree() as usize
}

/// Coordinates `(w, 1)` of `x` scaled by `den`.
fn coords(k: &BaseField, x: &KElem, den: &BigInt) -> Vec<BigInt> {
    let scale = |q: &BigRational| {
        let v = q * BigRational::from_integer(den.clone());
        debug_assert!(v.is_integer());
        v.to_integer()
    };
    if k.is_rational() {
        vec![scale(&x.a)]
    } else {
        vec![scale(&x.b), scale(&x.a)]
    }
}

fn common_den<'a>(xs: impl Iterator<Item = &'a KElem>) -> BigInt {
    let mut d = BigInt::one();
    for x in xs {
        d = d.lcm(x.a.denom()).lcm(x.b.denom());
    }
    d
}

impl FracIdeal {
    /// The `o_k`-ideal generated by `gens`.
    pub fn from_generators(field: &BaseField, gens: &[KElem]) -> Result<Self> {
        let den = common_den(gens.iter());
        let mut rows = Vec::new();
        for g in gens {
            rows.push(coords(field, g, &den));
            if !field.is_rational() {
                rows.push(coords(field, &g.mul(&KElem::omega(), field), &den));
            }
        }
        Self::from_lattice(field, den, rows)
    }

    fn from_lattice(field: &BaseField, den: BigInt, rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let d = dim(field);
        let (rows, rank) = hnf_rows(rows, d);
        if rank < d {
            return Err(Error::SingularBasis);
        }
        let mut basis: Vec<Vec<BigInt>> = rows.into_iter().take(d).collect();
        let mut g = den.clone();
        for row in &basis {
            for x in row {
                g = g.gcd(x);
            }
        }
        let den = &den / &g;
        for row in basis.iter_mut() {
            for x in row.iter_mut() {
                *x = &*x / &g;
            }
        }
        Ok(FracIdeal {
            field: *field,
            den,
            basis,
        })
    }

    pub fn unit(field: &BaseField) -> Self {
        Self::from_generators(field, &[KElem::one()]).expect("unit ideal")
    }

    pub fn principal(field: &BaseField, x: &KElem) -> Result<Self> {
        Self::from_generators(field, std::slice::from_ref(x))
    }

    pub fn from_prime(field: &BaseField, prime: &PrimeIdeal) -> Self {
        let p = KElem::int(prime.p as i64);
        let gens = match prime.kind {
            PrimeKind::Rational | PrimeKind::Inert => vec![p],
            PrimeKind::Split | PrimeKind::Ramified => {
                vec![p, KElem::omega().sub(&KElem::int(prime.root.unwrap_or(0) as i64))]
            }
        };
        Self::from_generators(field, &gens).expect("prime ideal")
    }

    /// The integral ideal `[a, (b - tr)/2 + w]` attached to a form of the field's discriminant.
    pub fn from_form(field: &BaseField, f: &QuadraticForm) -> Self {
        if field.is_rational() {
            return Self::unit(field);
        }
        let b = (f.b - field.omega_trace()) / 2;
        let gens = [KElem::int(f.a), KElem::omega().add(&KElem::int(b))];
        Self::from_generators(field, &gens).expect("ideal of a form")
    }

    pub fn field(&self) -> &BaseField {
        &self.field
    }

    /// A `Z`-basis.
    pub fn z_basis(&self) -> Vec<KElem> {
        let den = BigRational::from_integer(self.den.clone());
        self.basis
            .iter()
            .map(|row| {
                if self.field.is_rational() {
                    KElem::new(BigRational::from_integer(row[0].clone()) / &den, BigRational::zero())
                } else {
                    KElem::new(
                        BigRational::from_integer(row[1].clone()) / &den,
                        BigRational::from_integer(row[0].clone()) / &den,
                    )
                }
            })
            .collect()
    }

    pub fn mul(&self, other: &FracIdeal) -> FracIdeal {
        let mut gens = Vec::new();
        for x in self.z_basis() {
            for y in other.z_basis() {
                gens.push(x.mul(&y, &self.field));
            }
        }
        Self::from_generators(&self.field, &gens).expect("product of nonzero ideals")
    }

    pub fn scale(&self, x: &KElem) -> Result<FracIdeal> {
        let gens: Vec<KElem> = self.z_basis().iter().map(|y| y.mul(x, &self.field)).collect();
        Self::from_generators(&self.field, &gens)
    }

    pub fn add(&self, other: &FracIdeal) -> FracIdeal {
        let gens: Vec<KElem> = self.z_basis().into_iter().chain(other.z_basis()).collect();
        Self::from_generators(&self.field, &gens).expect("sum of nonzero ideals")
    }

    /// Absolute norm.
    pub fn norm(&self) -> BigRational {
        let mut det = BigInt::one();
        for (i, row) in self.basis.iter().enumerate() {
            det *= &row[i];
        }
        BigRational::new(det, self.den.pow(dim(&self.field) as u32))
    }

    pub fn inverse(&self) -> FracIdeal {
        // I conj(I) = (N(I))
        let n = self.norm();
        let inv_n = KElem::new(n.recip(), BigRational::zero());
        let gens: Vec<KElem> = self
            .z_basis()
            .iter()
            .map(|x| x.conj(&self.field).mul(&inv_n, &self.field))
            .collect();
        Self::from_generators(&self.field, &gens).expect("inverse of a nonzero ideal")
    }

    pub fn div(&self, other: &FracIdeal) -> FracIdeal {
        self.mul(&other.inverse())
    }

    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    pub fn contains(&self, x: &KElem) -> bool {
        let den = common_den(std::iter::once(x)).lcm(&self.den);
        let scale = &den / &self.den;
        let mut rows: Vec<Vec<BigInt>> = self
            .basis
            .iter()
            .map(|r| r.iter().map(|v| v * &scale).collect())
            .collect();
        let target = coords(&self.field, x, &den);
        // reduce target against the echelon rows
        let mut t = target;
        for (i, row) in rows.iter_mut().enumerate() {
            let (q, r) = t[i].div_rem(&row[i]);
            if !r.is_zero() {
                return false;
            }
            for (a, b) in t.iter_mut().zip(row.iter()) {
                *a -= &q * b;
            }
        }
        t.iter().all(|v| v.is_zero())
    }

    /// Integral `x in self`, `y in other` with `x + y = 1`, for coprime integral ideals.
    pub fn split_one(&self, other: &FracIdeal) -> Result<(KElem, KElem)> {
        if !self.is_integral() || !other.is_integral() {
            return Err(Error::InvalidAlgebra("split_one needs integral ideals".into()));
        }
        let d = dim(&self.field);
        let gens: Vec<Vec<BigInt>> = self.basis.iter().chain(other.basis.iter()).cloned().collect();
        let m = gens.len();
        let rows: Vec<Vec<BigInt>> = gens
            .iter()
            .enumerate()
            .map(|(i, g)| {
                let mut r = g.clone();
                r.extend((0..m).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
                r
            })
            .collect();
        let (rows, rank) = hnf_rows(rows, d);
        // the sum is o_k exactly when the echelon part is the identity
        if rank < d || (0..d).any(|i| !rows[i][i].is_one()) {
            return Err(Error::InvalidAlgebra("ideals are not coprime".into()));
        }
        let one_row = &rows[d - 1];
        debug_assert!((0..d - 1).all(|j| one_row[j].is_zero()));
        let half = self.basis.len();
        let mut x = KElem::zero();
        let mut y = KElem::zero();
        let self_basis = self.z_basis();
        let other_basis = other.z_basis();
        for j in 0..m {
            let c = KElem::new(BigRational::from_integer(one_row[d + j].clone()), BigRational::zero());
            if j < half {
                x = x.add(&self_basis[j].mul(&c, &self.field));
            } else {
                y = y.add(&other_basis[j - half].mul(&c, &self.field));
            }
        }
        debug_assert!(x.add(&y) == KElem::one());
        Ok((x, y))
    }

    /// Ideal class, as the reduced form of the primitive part of `den * self`.
    pub fn class(&self) -> IdealClass {
        let k = &self.field;
        if k.is_rational() {
            return IdealClass::identity(k);
        }
        // rows (C, B), (0, A): basis {B + C w, A}
        let (c, b, a) = (&self.basis[0][0], &self.basis[0][1], &self.basis[1][1]);
        let a1 = a / c;
        let b1 = b / c;
        let tr = BigInt::from(k.omega_trace());
        let nm = BigInt::from(k.omega_norm());
        let fb = &tr + &b1 * 2;
        let fc = (&b1 * &b1 + &b1 * &tr + nm) / &a1;
        let to_i64 = |x: &BigInt| -> i64 { i64::try_from(x).expect("form coefficient fits in i64") };
        let form = QuadraticForm::new(to_i64(&a1), to_i64(&fb), to_i64(&fc));
        debug_assert_eq!(form.discriminant(), k.discriminant());
        IdealClass(form.reduce())
    }
}

impl fmt::Display for FracIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let basis: Vec<String> = self.z_basis().iter().map(|x| x.to_string()).collect();
        write!(f, "<{}>", basis.join(", "))
    }
}
