//! Central simple algebras over `k`, given by degree and local Hasse invariants.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::base_field::{BaseField, PrimeIdeal};
use crate::error::{Error, Result};
use crate::extension::RelativeExtension;

/// A Hasse invariant `num/den` in `Q/Z`, reduced, `0 <= num < den`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Invariant {
    pub num: u64,
    pub den: u64,
}

impl Invariant {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidAlgebra("invariant with zero denominator".into()));
        }
        if num >= den {
            return Err(Error::InvalidAlgebra(format!(
                "invariant {num}/{den} must satisfy 0 <= r < d"
            )));
        }
        let g = num.gcd(&den);
        Ok(Invariant {
            num: num / g,
            den: den / g,
        })
    }

    pub fn zero() -> Self {
        Invariant { num: 0, den: 1 }
    }

    /// The local index `d_v`.
    pub fn index(&self) -> u64 {
        self.den
    }
}

impl fmt::Display for Invariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraSpec {
    pub field: BaseField,
    pub degree: u32,
    pub finite_invariants: Vec<(PrimeIdeal, Invariant)>,
    /// Invariant at the real place; only meaningful over `Q`.
    pub real_invariant: Option<Invariant>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalIndexDatum {
    pub d: u64,
    pub m: u64,
}

impl AlgebraSpec {
    /// `M_n(k)`.
    pub fn matrix_algebra(field: BaseField, degree: u32) -> Self {
        AlgebraSpec {
            field,
            degree,
            finite_invariants: Vec::new(),
            real_invariant: None,
        }
    }

    pub fn new(
        field: BaseField,
        degree: u32,
        finite_invariants: Vec<(PrimeIdeal, Invariant)>,
        real_invariant: Option<Invariant>,
    ) -> Result<Self> {
        let spec = AlgebraSpec {
            field,
            degree,
            finite_invariants,
            real_invariant,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.degree as u64;
        if n < 3 {
            return Err(Error::InvalidAlgebra(format!("degree {n} is below 3")));
        }
        let mut seen: Vec<&PrimeIdeal> = Vec::new();
        for (prime, inv) in &self.finite_invariants {
            if !self.field.owns(prime) {
                return Err(Error::InvalidPrime {
                    p: prime.p,
                    reason: format!("{prime} is not a prime of {}", self.field),
                });
            }
            if seen.contains(&prime) {
                return Err(Error::InvalidAlgebra(format!("prime {prime} listed twice")));
            }
            seen.push(prime);
            check_reduced(inv)?;
            if !n.is_multiple_of(inv.den) {
                return Err(Error::InvalidAlgebra(format!(
                    "local index {} at {prime} does not divide the degree {n}",
                    inv.den
                )));
            }
        }
        if let Some(inv) = &self.real_invariant {
            check_reduced(inv)?;
            if !self.field.is_rational() && inv.num != 0 {
                return Err(Error::InvalidAlgebra(
                    "an imaginary quadratic field has no real place".into(),
                ));
            }
            if inv.num != 0 && inv.den != 2 {
                return Err(Error::InvalidAlgebra(format!("real invariant {inv} must be 0 or 1/2")));
            }
            if inv.num != 0 && n % 2 == 1 {
                return Err(Error::InvalidAlgebra(
                    "real invariant must be 0 when the degree is odd".into(),
                ));
            }
        }
        let sum = self.invariant_sum();
        if !sum.is_integer() {
            return Err(Error::Reciprocity { sum: format!("{sum}") });
        }
        Ok(())
    }

    /// Sum of all invariants in `Q` (not reduced mod 1).
    pub fn invariant_sum(&self) -> BigRational {
        let mut sum = BigRational::zero();
        let all = self
            .finite_invariants
            .iter()
            .map(|(_, i)| i)
            .chain(self.real_invariant.iter());
        for inv in all {
            sum += BigRational::new(BigInt::from(inv.num), BigInt::from(inv.den));
        }
        sum
    }

    pub fn invariant_at(&self, prime: &PrimeIdeal) -> Invariant {
        self.finite_invariants
            .iter()
            .find(|(p, _)| p == prime)
            .map(|(_, i)| *i)
            .unwrap_or_else(Invariant::zero)
    }

    pub fn local_index(&self, prime: &PrimeIdeal) -> LocalIndexDatum {
        let d = self.invariant_at(prime).den;
        LocalIndexDatum {
            d,
            m: self.degree as u64 / d,
        }
    }

    /// Primes with `d_v > 1`.
    pub fn ramified_primes(&self) -> Vec<PrimeIdeal> {
        self.finite_invariants
            .iter()
            .filter(|(_, i)| i.den > 1)
            .map(|(p, _)| p.clone())
            .collect()
    }

    pub fn is_matrix_algebra(&self) -> bool {
        self.ramified_primes().is_empty() && self.real_invariant.is_none_or(|i| i.num == 0)
    }

    /// `d_v | e f` for every prime of `K` above `prime`.
    pub fn local_embeddable(&self, ext: &RelativeExtension, prime: &PrimeIdeal) -> Result<bool> {
        self.same_field(ext)?;
        let d = self.local_index(prime).d;
        if d == 1 {
            return Ok(true);
        }
        let datum = ext.splitting_type(prime)?;
        if !datum.certified {
            return Err(Error::UndeterminedPrime {
                prime: prime.to_string(),
            });
        }
        Ok(datum
            .factors
            .iter()
            .all(|f| (f.local_degree() as u64).is_multiple_of(d)))
    }

    /// Whether every real completion of `K` has degree divisible by the real index.
    pub fn real_embeddable(&self, ext: &RelativeExtension) -> bool {
        match self.real_invariant {
            Some(inv) if inv.num != 0 && self.field.is_rational() => {
                let coeffs: Vec<BigInt> = ext.min_poly().iter().map(|c| c.a.clone()).collect();
                count_real_roots(&coeffs) == 0
            }
            _ => true,
        }
    }

    /// Local-global embeddability of `K` into the algebra; returns the first
    /// obstructed place, if any.
    pub fn first_obstruction(&self, ext: &RelativeExtension) -> Result<Option<String>> {
        self.same_field(ext)?;
        if ext.degree() != self.degree {
            return Err(Error::InvalidAlgebra(format!(
                "[K:k] = {} differs from the algebra degree {}",
                ext.degree(),
                self.degree
            )));
        }
        for prime in self.ramified_primes() {
            if !self.local_embeddable(ext, &prime)? {
                return Ok(Some(prime.to_string()));
            }
        }
        if !self.real_embeddable(ext) {
            return Ok(Some("the real place".into()));
        }
        Ok(None)
    }

    pub fn global_embeddable(&self, ext: &RelativeExtension) -> Result<bool> {
        Ok(self.first_obstruction(ext)?.is_none())
    }

    fn same_field(&self, ext: &RelativeExtension) -> Result<()> {
        if ext.base() != &self.field {
            return Err(Error::FieldMismatch(format!(
                "algebra over {} with an extension of {}",
                self.field,
                ext.base()
            )));
        }
        Ok(())
    }
}

fn check_reduced(inv: &Invariant) -> Result<()> {
    // gcd(0, d) = d, so zero must be written 0/1
    if inv.den == 0 || inv.num >= inv.den || inv.num.gcd(&inv.den) != 1 {
        return Err(Error::InvalidAlgebra(format!(
            "invariant {inv} is not a reduced fraction in [0, 1)"
        )));
    }
    Ok(())
}

type QPoly = Vec<BigRational>;

fn qtrim(mut a: QPoly) -> QPoly {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

fn qrem(a: &QPoly, b: &QPoly) -> QPoly {
    let mut r = a.clone();
    let db = b.len() - 1;
    let lead = b.last().unwrap().clone();
    while r.len() >= b.len() {
        let c = r.last().unwrap() / &lead;
        let shift = r.len() - 1 - db;
        for (j, y) in b.iter().enumerate() {
            r[shift + j] -= &c * y;
        }
        r.pop();
        r = qtrim(r);
    }
    r
}

/// Number of distinct real roots, by a Sturm sequence.
pub fn count_real_roots(f: &[BigInt]) -> usize {
    let p0: QPoly = qtrim(f.iter().map(|c| BigRational::from_integer(c.clone())).collect());
    let p1: QPoly = qtrim(
        p0.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
            .collect(),
    );
    let mut seq = vec![p0, p1];
    while seq.last().is_some_and(|p| p.len() > 1) {
        let n = seq.len();
        let r = qrem(&seq[n - 2], &seq[n - 1]);
        if r.is_empty() {
            break;
        }
        seq.push(r.into_iter().map(|c| -c).collect());
    }
    let changes = |signs: Vec<i32>| {
        let s: Vec<i32> = signs.into_iter().filter(|s| *s != 0).collect();
        s.windows(2).filter(|w| w[0] != w[1]).count()
    };
    let sign = |c: &BigRational| {
        if c.is_positive() {
            1
        } else if c.is_negative() {
            -1
        } else {
            0
        }
    };
    let at_pos: Vec<i32> = seq.iter().map(|p| p.last().map(sign).unwrap_or(0)).collect();
    let at_neg: Vec<i32> = seq
        .iter()
        .map(|p| {
            let s = p.last().map(sign).unwrap_or(0);
            if (p.len() - 1) % 2 == 1 {
                -s
            } else {
                s
            }
        })
        .collect();
    changes(at_neg) - changes(at_pos)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k23() -> BaseField {
        BaseField::new(-23).unwrap()
    }

    fn hilbert() -> RelativeExtension {
        RelativeExtension::from_rational_coefficients(k23(), &[-1, -1, 0, 1]).unwrap()
    }

    #[test]
    fn validation_examples() {
        let k = k23();
        let ps = k.prime_ideals_above(2).unwrap();
        let third = Invariant::new(1, 3).unwrap();
        let two_thirds = Invariant::new(2, 3).unwrap();
        assert!(AlgebraSpec::new(k, 3, vec![(ps[0].clone(), third), (ps[1].clone(), two_thirds)], None).is_ok());
        assert!(matches!(
            AlgebraSpec::new(k, 3, vec![(ps[0].clone(), third)], None),
            Err(Error::Reciprocity { .. })
        ));
        assert!(AlgebraSpec::new(k, 3, vec![], None).is_ok());
        // index 3 does not divide 4
        assert!(AlgebraSpec::new(k, 4, vec![(ps[0].clone(), third), (ps[1].clone(), two_thirds)], None).is_err());
        // duplicated prime
        assert!(AlgebraSpec::new(k, 3, vec![(ps[0].clone(), third), (ps[0].clone(), two_thirds)], None).is_err());
        // real invariant over Q with odd degree
        let half = Invariant::new(1, 2).unwrap();
        let q = BaseField::rational();
        let p2 = q.prime_ideals_above(2).unwrap()[0].clone();
        assert!(AlgebraSpec::new(q, 3, vec![(p2.clone(), half)], Some(half)).is_err());
        assert!(AlgebraSpec::new(q, 4, vec![(p2, half)], Some(half)).is_ok());
    }

    #[test]
    fn local_indices() {
        let k = k23();
        let ps = k.prime_ideals_above(2).unwrap();
        let m3 = AlgebraSpec::matrix_algebra(k, 3);
        assert_eq!(m3.local_index(&ps[0]), LocalIndexDatum { d: 1, m: 3 });
        let a = AlgebraSpec::new(
            k,
            3,
            vec![
                (ps[0].clone(), Invariant::new(1, 3).unwrap()),
                (ps[1].clone(), Invariant::new(2, 3).unwrap()),
            ],
            None,
        )
        .unwrap();
        assert_eq!(a.local_index(&ps[0]), LocalIndexDatum { d: 3, m: 1 });
        let b = AlgebraSpec::new(
            k,
            6,
            vec![
                (ps[0].clone(), Invariant::new(2, 3).unwrap()),
                (ps[1].clone(), Invariant::new(1, 3).unwrap()),
            ],
            None,
        )
        .unwrap();
        assert_eq!(b.local_index(&ps[0]), LocalIndexDatum { d: 3, m: 2 });
    }

    #[test]
    fn embeddability_in_the_hilbert_class_field_case() {
        let k = k23();
        let ext = hilbert();
        let ps = k.prime_ideals_above(2).unwrap();
        let ramified_at_2 = AlgebraSpec::new(
            k,
            3,
            vec![
                (ps[0].clone(), Invariant::new(1, 3).unwrap()),
                (ps[1].clone(), Invariant::new(2, 3).unwrap()),
            ],
            None,
        )
        .unwrap();
        assert!(ramified_at_2.local_embeddable(&ext, &ps[0]).unwrap());
        assert!(ramified_at_2.global_embeddable(&ext).unwrap());
        assert!(AlgebraSpec::matrix_algebra(k, 3).global_embeddable(&ext).unwrap());
        // primes above 59 are principal, so they split completely in K
        let p59 = k.prime_ideals_above(59).unwrap();
        let at_59 = AlgebraSpec::new(
            k,
            3,
            vec![
                (p59[0].clone(), Invariant::new(1, 3).unwrap()),
                (p59[1].clone(), Invariant::new(2, 3).unwrap()),
            ],
            None,
        )
        .unwrap();
        assert!(!at_59.local_embeddable(&ext, &p59[0]).unwrap());
        assert!(!at_59.global_embeddable(&ext).unwrap());
        // the monogenic order is not maximal above 23
        let p23 = k.prime_ideals_above(23).unwrap()[0].clone();
        let at_23 = AlgebraSpec::new(
            k,
            3,
            vec![
                (p23, Invariant::new(1, 3).unwrap()),
                (ps[0].clone(), Invariant::new(2, 3).unwrap()),
            ],
            None,
        )
        .unwrap();
        assert!(matches!(
            at_23.global_embeddable(&ext),
            Err(Error::UndeterminedPrime { .. })
        ));
    }

    #[test]
    fn real_roots() {
        let z = |v: &[i64]| v.iter().map(|c| BigInt::from(*c)).collect::<Vec<_>>();
        assert_eq!(count_real_roots(&z(&[-1, -1, 0, 1])), 1);
        assert_eq!(count_real_roots(&z(&[1, 0, 0, 0, 1])), 0);
        assert_eq!(count_real_roots(&z(&[9, 0, -2, 0, 1])), 0);
        assert_eq!(count_real_roots(&z(&[2, 0, -4, 0, 1])), 4);
        assert_eq!(count_real_roots(&z(&[0, -1, 0, 1])), 3);
    }
}
