//! Relative extensions `K = k[x]/(f)`: splitting of primes, the Dedekind
//! criterion for the monogenic order, and the norm subgroup of `Cl(k)`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{prime_divisors, primes_up_to};
use crate::base_field::{BaseField, OkElem, PrimeIdeal};
use crate::class_group::{ClassGroup, IdealClass, Subgroup};
use crate::error::{Error, Result};
use crate::finite_field::FqPoly;
use crate::okpoly::{self, OkPoly};
use crate::zpoly;

pub const DEFAULT_SEED: u64 = 0x0e4b_ed00;

/// One prime of `K` above a prime of `k`: ramification index and residue degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LocalFactor {
    pub e: u32,
    pub f: u32,
}

impl LocalFactor {
    pub fn local_degree(&self) -> u32 {
        self.e * self.f
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplittingDatum {
    pub prime: PrimeIdeal,
    pub factors: Vec<LocalFactor>,
    /// Whether the Dedekind criterion shows `o_k[x]/(f)` is maximal at the prime,
    /// so that `factors` describes the primes of `K`.
    pub certified: bool,
}

#[derive(Clone, Debug)]
pub struct RelativeExtension {
    base: BaseField,
    min_poly: OkPoly,
    discriminant: OkElem,
    disc_primes: Vec<PrimeIdeal>,
    seed: u64,
    cache: Arc<Mutex<HashMap<PrimeIdeal, SplittingDatum>>>,
}

impl RelativeExtension {
    /// Validates `min_poly` (ascending coefficients, monic, degree >= 3,
    /// irreducible over `k`).
    pub fn new(base: BaseField, min_poly: OkPoly) -> Result<Self> {
        let min_poly = okpoly::trim(min_poly);
        if !okpoly::is_monic(&min_poly) {
            return Err(Error::InvalidPolynomial("minimal polynomial must be monic".into()));
        }
        let n = min_poly.len() - 1;
        if n < 3 {
            return Err(Error::InvalidPolynomial(format!(
                "degree {n} is below 3; the algebra must satisfy the Eichler condition"
            )));
        }
        let discriminant = okpoly::discriminant(&base, &min_poly);
        if discriminant.is_zero() {
            return Err(Error::Reducible {
                factor: format!("{} has a repeated factor", okpoly::display(&min_poly)),
            });
        }
        check_irreducible(&base, &min_poly)?;
        let norm = base.norm(&discriminant);
        let rational = prime_divisors(&norm)
            .ok_or_else(|| Error::InvalidPolynomial(format!("cannot factor the discriminant norm {norm}")))?;
        let mut disc_primes = Vec::new();
        for p in rational {
            for prime in base.prime_ideals_above(p)? {
                if base.residue(&prime).contains(&discriminant) {
                    disc_primes.push(prime);
                }
            }
        }
        Ok(RelativeExtension {
            base,
            min_poly,
            discriminant,
            disc_primes,
            seed: DEFAULT_SEED,
            cache: Arc::new(Mutex::new(HashMap::new())),
        })
    }

    /// Builds `K` from integer coefficients, ascending.
    pub fn from_rational_coefficients(base: BaseField, coeffs: &[i64]) -> Result<Self> {
        Self::new(base, coeffs.iter().map(|c| OkElem::int(*c)).collect())
    }

    /// Seed for the randomized equal-degree splitting; results do not depend on it.
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self.cache = Arc::new(Mutex::new(HashMap::new()));
        self
    }

    pub fn base(&self) -> &BaseField {
        &self.base
    }

    pub fn min_poly(&self) -> &OkPoly {
        &self.min_poly
    }

    pub fn degree(&self) -> u32 {
        (self.min_poly.len() - 1) as u32
    }

    pub fn discriminant(&self) -> &OkElem {
        &self.discriminant
    }

    /// Primes of `k` dividing `disc(f)`.
    pub fn discriminant_primes(&self) -> &[PrimeIdeal] {
        &self.disc_primes
    }

    pub fn splitting_type(&self, prime: &PrimeIdeal) -> Result<SplittingDatum> {
        if !self.base.owns(prime) {
            return Err(Error::InvalidPrime {
                p: prime.p,
                reason: format!("{prime} is not a prime of {}", self.base),
            });
        }
        if let Some(d) = self.cache.lock().expect("cache lock").get(prime) {
            return Ok(d.clone());
        }
        let datum = self.compute_splitting(prime);
        self.cache
            .lock()
            .expect("cache lock")
            .insert(prime.clone(), datum.clone());
        Ok(datum)
    }

    fn compute_splitting(&self, prime: &PrimeIdeal) -> SplittingDatum {
        let res = self.base.residue(prime);
        let fq = *res.field();
        let fbar = okpoly::reduce(&res, &self.min_poly);
        let stream = prime.p.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ prime.root.unwrap_or(u64::MAX);
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ stream);
        let factors = fq.factor(&fbar, &mut rng);
        let mut local: Vec<LocalFactor> = factors
            .iter()
            .map(|(g, e)| LocalFactor {
                e: *e,
                f: (g.len() - 1) as u32,
            })
            .collect();
        local.sort();

        // Dedekind: g = prod g_i, h = fbar / g, F = (g h - f)/pi; maximal iff gcd(F, g, h) = 1
        let certified = if factors.iter().all(|(_, e)| *e == 1) {
            true
        } else {
            let mut gbar: FqPoly = vec![fq.one()];
            for (g, _) in &factors {
                gbar = fq.poly_mul(&gbar, g);
            }
            let hbar = fq.poly_divrem(&fbar, &gbar).0;
            let g = okpoly::lift(&res, &gbar);
            let h = okpoly::lift(&res, &hbar);
            let diff = okpoly::sub(&okpoly::mul(&self.base, &g, &h), &self.min_poly);
            let big_f = fq.trim(diff.iter().map(|c| res.reduce_div_uniformizer(c)).collect());
            let d = fq.poly_gcd(&fq.poly_gcd(&big_f, &gbar), &hbar);
            d.len() == 1
        };
        SplittingDatum {
            prime: prime.clone(),
            factors: local,
            certified,
        }
    }

    /// Primes dividing `disc(f)` at which the Dedekind criterion fails.
    pub fn maximality_check(&self) -> Vec<PrimeIdeal> {
        self.disc_primes
            .iter()
            .filter(|p| !self.splitting_type(p).map(|d| d.certified).unwrap_or(false))
            .cloned()
            .collect()
    }

    pub fn is_monogenic_maximal(&self) -> bool {
        self.maximality_check().is_empty()
    }

    /// The subgroup of `Cl(k)` generated by the norms of primes of `K` lying
    /// over primes of `k` of norm at most `bound`.
    pub fn norm_class_subgroup(&self, group: &ClassGroup, bound: u64) -> Result<NormSubgroup> {
        if bound < 2 {
            return Err(Error::InvalidBound(bound));
        }
        if group.field() != &self.base {
            return Err(Error::FieldMismatch(format!(
                "class group of {} used with an extension of {}",
                group.field(),
                self.base
            )));
        }
        let mut primes = Vec::new();
        for p in primes_up_to(bound) {
            for prime in self.base.prime_ideals_above(p)? {
                if prime.norm() <= bound {
                    primes.push(prime);
                }
            }
        }
        if group.order() == 1 {
            return Ok(NormSubgroup {
                subgroup: group.trivial_subgroup(),
                sampling_bound: bound,
                stabilized: true,
                primes_sampled: primes.len(),
                skipped: Vec::new(),
            });
        }
        let sampled: Vec<(PrimeIdeal, Option<Vec<IdealClass>>)> = primes
            .par_iter()
            .map(|prime| -> Result<_> {
                let datum = self.splitting_type(prime)?;
                if !datum.certified {
                    return Ok((prime.clone(), None));
                }
                let c = group.ideal_class(prime)?;
                let contrib = datum.factors.iter().map(|lf| c.pow(lf.f as u64)).collect();
                Ok((prime.clone(), Some(contrib)))
            })
            .collect::<Result<_>>()?;
        let mut half_gens = Vec::new();
        let mut gens = Vec::new();
        let mut skipped = Vec::new();
        for (prime, contrib) in &sampled {
            match contrib {
                None => skipped.push(prime.clone()),
                Some(cs) => {
                    if 2 * prime.norm() <= bound {
                        half_gens.extend(cs.iter().copied());
                    }
                    gens.extend(cs.iter().copied());
                }
            }
        }
        gens.sort();
        gens.dedup();
        half_gens.sort();
        half_gens.dedup();
        let subgroup = group.subgroup_generated(&gens)?;
        let half = group.subgroup_generated(&half_gens)?;
        Ok(NormSubgroup {
            stabilized: half == subgroup,
            subgroup,
            sampling_bound: bound,
            primes_sampled: sampled.len(),
            skipped,
        })
    }

    /// `[Cl(k) : N]`, the degree of `K` meet the Hilbert class field over `k`.
    pub fn intersection_degree_hilbert(&self, group: &ClassGroup, bound: u64) -> Result<u64> {
        Ok(self.norm_class_subgroup(group, bound)?.subgroup.index() as u64)
    }
}

/// Class-group image of the idelic norms from `K`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormSubgroup {
    pub subgroup: Subgroup,
    pub sampling_bound: u64,
    /// The primes of norm at most half the bound already generate the subgroup.
    pub stabilized: bool,
    pub primes_sampled: usize,
    /// Primes left out because the Dedekind criterion did not certify them.
    pub skipped: Vec<PrimeIdeal>,
}

/// Checks irreducibility over `k` through the absolute norm of a shifted
/// polynomial: when `N(f(x - s w))` is square-free its factors over `Q`
/// correspond to the factors of `f` over `k`.
fn check_irreducible(base: &BaseField, f: &OkPoly) -> Result<()> {
    let q = BaseField::rational();
    if base.is_rational() {
        let coeffs: Vec<BigInt> = f.iter().map(|c| c.a.clone()).collect();
        return match zpoly::find_factor(&coeffs) {
            None => Ok(()),
            Some(g) => Err(Error::Reducible {
                factor: okpoly::display_int(&g),
            }),
        };
    }
    let n = f.len() as i64;
    for s in 0..=(n * n + 1) {
        let shifted = okpoly::taylor_shift(base, f, &OkElem::new(0, -s));
        let norm = okpoly::norm_poly(base, &shifted);
        let as_ok: OkPoly = norm.iter().map(|c| OkElem::int(c.clone())).collect();
        if okpoly::discriminant(&q, &as_ok).is_zero() {
            continue;
        }
        return match zpoly::find_factor(&norm) {
            None => Ok(()),
            Some(g) => Err(Error::Reducible {
                factor: format!(
                    "{} (factor of the absolute norm of f(x - {s}w))",
                    okpoly::display_int(&g)
                ),
            }),
        };
    }
    unreachable!("a square-free polynomial has a square-free shifted norm for some small shift")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::class_group::class_group;

    fn cubic(d: i64) -> RelativeExtension {
        RelativeExtension::from_rational_coefficients(BaseField::new(d).unwrap(), &[-1, -1, 0, 1]).unwrap()
    }

    #[test]
    fn validation() {
        let k = BaseField::new(-23).unwrap();
        assert!(RelativeExtension::from_rational_coefficients(k, &[1, 0, 1]).is_err());
        assert!(RelativeExtension::from_rational_coefficients(k, &[-1, -1, 0, 2]).is_err());
        // (x - 1)(x^2 + x + 1)
        assert!(matches!(
            RelativeExtension::from_rational_coefficients(k, &[-1, 0, 0, 1]),
            Err(Error::Reducible { .. })
        ));
        // x^3 - 1 + ... irreducible over Q but not over k: x^4 + 5 has roots
        // sqrt(sqrt -5) so x^4 + 5 = (x^2 - w)(x^2 + w) over Q(sqrt -5)
        let k20 = BaseField::new(-20).unwrap();
        assert!(matches!(
            RelativeExtension::from_rational_coefficients(k20, &[5, 0, 0, 0, 1]),
            Err(Error::Reducible { .. })
        ));
        assert!(RelativeExtension::from_rational_coefficients(k20, &[9, 0, -2, 0, 1]).is_ok());
    }

    #[test]
    fn splitting_in_hilbert_class_field() {
        let ext = cubic(-23);
        let k = *ext.base();
        let above2 = k.prime_ideals_above(2).unwrap();
        for p in &above2 {
            let d = ext.splitting_type(p).unwrap();
            assert!(d.certified);
            assert_eq!(d.factors, vec![LocalFactor { e: 1, f: 3 }]);
        }
        // 59 = N(5 + w) is a product of principal primes
        for p in k.prime_ideals_above(59).unwrap() {
            let d = ext.splitting_type(&p).unwrap();
            assert_eq!(d.factors, vec![LocalFactor { e: 1, f: 1 }; 3]);
        }
    }

    /// `K` again, presented by a generator of `o_K` over `o_k` (unit discriminant).
    fn monogenic_hilbert() -> RelativeExtension {
        let k = BaseField::new(-23).unwrap();
        let f = vec![OkElem::int(1), OkElem::new(-2, 1), OkElem::new(-1, -1), OkElem::one()];
        RelativeExtension::new(k, f).unwrap()
    }

    #[test]
    fn maximality() {
        // disc(x^3 - x - 1) = -23 = P^2 while K/k is unramified, so the index is P
        let bad = cubic(-23).maximality_check();
        assert_eq!(bad.len(), 1);
        assert_eq!(bad[0].p, 23);
        let m = monogenic_hilbert();
        assert!(m.discriminant().is_one() || m.discriminant().neg().is_one());
        assert!(m.maximality_check().is_empty());
        assert!(cubic(0).maximality_check().is_empty());
        // x^3 - 8 x - 8 * 3: Eisenstein-free, disc divisible by 2^2 with criterion failing at 2
        let q = BaseField::rational();
        let ext = RelativeExtension::from_rational_coefficients(q, &[-4, 0, 0, 1]);
        // x^3 - 4 = x^3 mod 2 and (x^3 - x^3 + 4)/2 = 2 = 0 mod 2
        let bad = ext.unwrap().maximality_check();
        assert_eq!(bad.iter().map(|p| p.p).collect::<Vec<_>>(), vec![2]);
    }

    #[test]
    fn norm_subgroups() {
        let ext = cubic(-23);
        let g = class_group(ext.base());
        let n = ext.norm_class_subgroup(&g, 200).unwrap();
        assert_eq!(n.subgroup.index(), 3);
        assert!(n.stabilized);
        assert_eq!(n.skipped.iter().map(|p| p.p).collect::<Vec<_>>(), vec![23]);
        let m = monogenic_hilbert().norm_class_subgroup(&g, 200).unwrap();
        assert!(m.skipped.is_empty());
        assert_eq!(m.subgroup, n.subgroup);
        assert!(ext.norm_class_subgroup(&g, 1).is_err());

        let q = cubic(0);
        assert_eq!(q.intersection_degree_hilbert(&class_group(q.base()), 100).unwrap(), 1);
    }

    #[test]
    fn local_degrees_sum_to_degree() {
        let ext = cubic(-23);
        let k = *ext.base();
        for p in primes_up_to(300) {
            for prime in k.prime_ideals_above(p).unwrap() {
                let d = ext.splitting_type(&prime).unwrap();
                let total: u32 = d.factors.iter().map(|f| f.local_degree()).sum();
                assert_eq!(total, 3);
            }
        }
    }

    #[test]
    fn seed_does_not_change_results() {
        let a = cubic(-23);
        let b = cubic(-23).with_seed(12345);
        let k = *a.base();
        for p in primes_up_to(200) {
            for prime in k.prime_ideals_above(p).unwrap() {
                assert_eq!(a.splitting_type(&prime).unwrap(), b.splitting_type(&prime).unwrap());
            }
        }
    }
}
