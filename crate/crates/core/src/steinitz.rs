//! Lattice-theoretic check of the selectivity computation for `M_n(k)`.
//!
//! Maximal orders of `M_n(k)` are the rings `End(L)` of full `o_k`-lattices
//! `L` in `k^n`, and `End(L)` and `End(L')` are conjugate exactly when
//! `L' = c L` for a fractional ideal `c`. Conjugacy classes are therefore
//! Steinitz classes modulo the scaling subgroup `{st(c L)/st(L)}`, which this
//! module computes with pseudo-Hermite reduction rather than by formula.

use serde::{Deserialize, Serialize};

use crate::base_field::BaseField;
use crate::class_field::SelectivityReport;
use crate::class_group::{class_group, ClassGroup, IdealClass, Subgroup};
use crate::error::{Error, Result};
use crate::extension::{NormSubgroup, RelativeExtension};
use crate::ideal::{hnf_rows, FracIdeal, KElem};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

/// `sum a_i v_i` with fractional ideals `a_i` and vectors `v_i` in `k^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PseudoLattice {
    field: BaseField,
    rank: usize,
    gens: Vec<(FracIdeal, Vec<KElem>)>,
}

impl PseudoLattice {
    /// A pseudo-generating system; vectors all have length `rank`.
    pub fn new(field: BaseField, rank: usize, gens: Vec<(FracIdeal, Vec<KElem>)>) -> Result<Self> {
        if gens.iter().any(|(a, v)| v.len() != rank || a.field() != &field) {
            return Err(Error::FieldMismatch(
                "pseudo-generator of the wrong shape or field".into(),
            ));
        }
        Ok(PseudoLattice { field, rank, gens })
    }

    /// `a_1 e_1 + ... + a_n e_n`.
    pub fn diagonal(field: BaseField, ideals: Vec<FracIdeal>) -> Self {
        let n = ideals.len();
        let gens = ideals
            .into_iter()
            .enumerate()
            .map(|(i, a)| {
                let v = (0..n)
                    .map(|j| if i == j { KElem::one() } else { KElem::zero() })
                    .collect();
                (a, v)
            })
            .collect();
        PseudoLattice { field, rank: n, gens }
    }

    pub fn free(field: BaseField, n: usize) -> Self {
        Self::diagonal(field, vec![FracIdeal::unit(&field); n])
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn generators(&self) -> &[(FracIdeal, Vec<KElem>)] {
        &self.gens
    }

    /// `c L`, written with trivial coefficient ideals so that the class of `c`
    /// has to be recovered by reduction.
    pub fn scaled_by(&self, c: &FracIdeal) -> PseudoLattice {
        let k = self.field;
        let one = FracIdeal::unit(&k);
        let mut gens = Vec::new();
        for (a, v) in &self.gens {
            for x in a.mul(c).z_basis() {
                gens.push((one.clone(), v.iter().map(|y| y.mul(&x, &k)).collect()));
            }
        }
        PseudoLattice {
            field: k,
            rank: self.rank,
            gens,
        }
    }

    /// Applies an invertible matrix to every generator vector (`v -> M v`).
    pub fn transform(&self, m: &[Vec<KElem>]) -> PseudoLattice {
        let k = self.field;
        let gens = self
            .gens
            .iter()
            .map(|(a, v)| {
                let w = m
                    .iter()
                    .map(|row| {
                        row.iter()
                            .zip(v)
                            .fold(KElem::zero(), |acc, (x, y)| acc.add(&x.mul(y, &k)))
                    })
                    .collect();
                (a.clone(), w)
            })
            .collect();
        PseudoLattice {
            field: k,
            rank: self.rank,
            gens,
        }
    }

    /// Pseudo-Hermite reduction to a pseudo-basis with unit diagonal.
    pub fn pseudo_hnf(&self) -> Result<PseudoLattice> {
        let k = self.field;
        let n = self.rank;
        let mut active: Vec<(FracIdeal, Vec<KElem>)> = self
            .gens
            .iter()
            .filter(|(_, v)| v.iter().any(|x| !x.is_zero()))
            .cloned()
            .collect();
        let mut basis = Vec::with_capacity(n);
        for i in (0..n).rev() {
            let Some(pj) = active.iter().position(|(_, v)| !v[i].is_zero()) else {
                return Err(Error::SingularBasis);
            };
            let (aj, cj) = active.remove(pj);
            let t = cj[i].clone();
            let tinv = t.inv(&k).expect("nonzero pivot");
            let mut cj: Vec<KElem> = cj.iter().map(|x| x.mul(&tinv, &k)).collect();
            let mut aj = aj.scale(&t)?;
            for (al, cl) in active.iter_mut() {
                if cl[i].is_zero() {
                    continue;
                }
                let a = cl[i].clone();
                let a_al = al.scale(&a)?;
                let delta = a_al.add(&aj);
                let delta_inv = delta.inverse();
                let (x, y) = a_al.mul(&delta_inv).split_one(&aj.mul(&delta_inv))?;
                let u = x.mul(&a.inv(&k).expect("nonzero"), &k);
                let new_l: Vec<KElem> = cl.iter().zip(&cj).map(|(p, q)| p.sub(&q.mul(&a, &k))).collect();
                let new_j: Vec<KElem> = cl
                    .iter()
                    .zip(&cj)
                    .map(|(p, q)| p.mul(&u, &k).add(&q.mul(&y, &k)))
                    .collect();
                let new_al = al.mul(&aj).mul(&delta_inv);
                *cl = new_l;
                *al = new_al;
                cj = new_j;
                aj = delta;
            }
            active.retain(|(_, v)| v.iter().any(|x| !x.is_zero()));
            basis.push((aj, cj));
        }
        if !active.is_empty() {
            return Err(Error::SingularBasis);
        }
        basis.reverse();
        Ok(PseudoLattice {
            field: k,
            rank: n,
            gens: basis,
        })
    }

    /// Hermite normal form of the underlying `Z`-lattice in `Q^{n [k:Q]}`, for equality tests.
    pub fn z_lattice(&self) -> Result<(BigInt, Vec<Vec<BigInt>>)> {
        let k = self.field;
        let mut vecs = Vec::new();
        for (a, v) in &self.gens {
            for x in a.z_basis() {
                vecs.push(v.iter().map(|y| y.mul(&x, &k)).collect::<Vec<_>>());
            }
        }
        let mut den = BigInt::one();
        for v in &vecs {
            for x in v {
                den = den.lcm(x.a.denom()).lcm(x.b.denom());
            }
        }
        let width = self.rank * k.degree() as usize;
        let rows: Vec<Vec<BigInt>> = vecs
            .iter()
            .map(|v| {
                let mut row = Vec::with_capacity(width);
                for x in v {
                    let scale = |q: &num_rational::BigRational| (q * &den).to_integer();
                    row.push(scale(&x.a));
                    if !k.is_rational() {
                        row.push(scale(&x.b));
                    }
                }
                row
            })
            .collect();
        let (rows, rank) = hnf_rows(rows, width);
        if rank < width {
            return Err(Error::SingularBasis);
        }
        let mut basis: Vec<Vec<BigInt>> = rows.into_iter().take(rank).collect();
        let mut g = den.clone();
        for row in &basis {
            for x in row {
                g = g.gcd(x);
            }
        }
        for row in basis.iter_mut() {
            for x in row.iter_mut() {
                *x = &*x / &g;
            }
        }
        Ok((den / g, basis))
    }

    pub fn same_module(&self, other: &PseudoLattice) -> Result<bool> {
        Ok(self.z_lattice()? == other.z_lattice()?)
    }
}

/// The Steinitz class: the class of the product of the coefficient ideals of a
/// reduced pseudo-basis.
pub fn steinitz_class(lat: &PseudoLattice) -> Result<IdealClass> {
    let reduced = lat.pseudo_hnf()?;
    let k = lat.field;
    let mut prod = FracIdeal::unit(&k);
    for (a, _) in reduced.generators() {
        prod = prod.mul(a);
    }
    Ok(prod.class())
}

/// Conjugacy classes of maximal orders of `M_n(k)`, as Steinitz cosets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderClassSet {
    /// `{st(c L)/st(L)}`.
    pub scaling: Subgroup,
    pub cosets: Vec<Vec<IdealClass>>,
}

fn scaling_subgroup(group: &ClassGroup, n: usize) -> Result<Subgroup> {
    let k = *group.field();
    let free = PseudoLattice::free(k, n);
    let base = steinitz_class(&free)?;
    let mut shifts = Vec::new();
    for g in group.generators() {
        let c = FracIdeal::from_form(&k, &g.form());
        let st = steinitz_class(&free.scaled_by(&c))?;
        shifts.push(st.compose(&base.inverse()));
    }
    group.subgroup_generated(&shifts)
}

pub fn maximal_order_class_set(field: &BaseField, n: usize) -> Result<OrderClassSet> {
    if n < 3 {
        return Err(Error::InvalidAlgebra(format!("degree {n} is below 3")));
    }
    let group = class_group(field);
    let scaling = scaling_subgroup(&group, n)?;
    // every class is realized: st(o^{n-1} + c) = [c]
    for c in group.elements() {
        let mut ideals = vec![FracIdeal::unit(field); n - 1];
        ideals.push(FracIdeal::from_form(field, &c.form()));
        let st = steinitz_class(&PseudoLattice::diagonal(*field, ideals))?;
        if st != *c {
            return Err(Error::OracleMismatch(format!("lattice with class {c} reduced to {st}")));
        }
    }
    let cosets = group.cosets(&scaling);
    Ok(OrderClassSet { scaling, cosets })
}

/// How the Steinitz class of `o_K` enters the embeddable set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Anchor {
    /// `o_K = o_k[theta]` is free, so `st(o_K)` is trivial (computed).
    Trivial,
    /// The monogenic order is not maximal; the set is taken relative to `st(o_K)`.
    Relative,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddableSet {
    pub classes: OrderClassSet,
    pub anchor: Anchor,
    /// Cosets of the scaling subgroup containing a lattice with an `o_K`-module structure.
    pub cosets: Vec<Vec<IdealClass>>,
}

/// Steinitz classes of rank-`n` lattices carrying an `o_K`-structure, modulo scaling.
pub fn embeddable_steinitz_set(ext: &RelativeExtension, n: usize, bound: u64) -> Result<EmbeddableSet> {
    let group = class_group(ext.base());
    let norm = ext.norm_class_subgroup(&group, bound)?;
    embeddable_steinitz_set_with(&group, ext, n, &norm)
}

pub fn embeddable_steinitz_set_with(
    group: &ClassGroup,
    ext: &RelativeExtension,
    n: usize,
    norm: &NormSubgroup,
) -> Result<EmbeddableSet> {
    if ext.degree() as usize != n {
        return Err(Error::InvalidAlgebra(format!("[K:k] = {} but n = {n}", ext.degree())));
    }
    let k = *ext.base();
    let classes = maximal_order_class_set(&k, n)?;
    let (anchor, st_ok) = if ext.is_monogenic_maximal() {
        // power basis 1, theta, ..., theta^{n-1} with trivial coefficient ideals
        (Anchor::Trivial, steinitz_class(&PseudoLattice::free(k, n))?)
    } else {
        (Anchor::Relative, group.identity())
    };
    let mut cosets = Vec::new();
    for coset in &classes.cosets {
        if norm
            .subgroup
            .members()
            .iter()
            .any(|x| coset.contains(&st_ok.compose(x)))
        {
            cosets.push(coset.clone());
        }
    }
    Ok(EmbeddableSet {
        classes,
        anchor,
        cosets,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    Direct,
    Inverse,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossCheck {
    pub matches: bool,
    pub orientation: Option<Orientation>,
    pub anchor: Anchor,
    pub detail: String,
}

/// Compares the class-field computation with the lattice computation.
///
/// `applicable` says whether the report was produced for `M_n(k)` with maximal
/// orders; otherwise the oracle does not apply.
pub fn cross_check(report: &SelectivityReport, oracle: &EmbeddableSet, applicable: bool) -> Result<CrossCheck> {
    if !applicable {
        return Err(Error::OracleNotApplicable(
            "the lattice check covers maximal orders of a matrix algebra only".into(),
        ));
    }
    let mut problems = Vec::new();
    if report.genus_classes != oracle.classes.cosets {
        problems.push(format!(
            "genus classes differ: {} cosets from the class field, {} from lattices",
            report.genus_classes.len(),
            oracle.classes.cosets.len()
        ));
    }
    if oracle.cosets.len() as u64 != report.embeddable_class_count {
        problems.push(format!(
            "embeddable count {} vs {} lattice cosets",
            report.embeddable_class_count,
            oracle.cosets.len()
        ));
    }
    let engine = report.embeddable_cosets();
    let inverted: Vec<Vec<IdealClass>> = {
        let mut v: Vec<Vec<IdealClass>> = oracle
            .cosets
            .iter()
            .map(|c| {
                let mut w: Vec<IdealClass> = c.iter().map(|x| x.inverse()).collect();
                w.sort();
                w
            })
            .collect();
        v.sort();
        v
    };
    let orientation = if engine == oracle.cosets {
        Some(Orientation::Direct)
    } else if engine == inverted {
        Some(Orientation::Inverse)
    } else {
        problems.push("embeddable cosets differ in both orientations".into());
        None
    };
    let matches = problems.is_empty();
    let detail = if matches {
        format!(
            "{} of {} cosets agree ({} orientation, {} anchor)",
            engine.len(),
            report.genus_classes.len(),
            match orientation {
                Some(Orientation::Inverse) => "inverse",
                _ => "direct",
            },
            match oracle.anchor {
                Anchor::Trivial => "trivial",
                Anchor::Relative => "relative",
            }
        )
    } else {
        problems.join("; ")
    };
    Ok(CrossCheck {
        matches,
        orientation,
        anchor: oracle.anchor,
        detail,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn k23() -> BaseField {
        BaseField::new(-23).unwrap()
    }

    #[test]
    fn steinitz_examples() {
        let k = k23();
        assert!(steinitz_class(&PseudoLattice::free(k, 3)).unwrap().is_identity());
        let p = FracIdeal::from_prime(&k, &k.prime_ideals_above(2).unwrap()[0]);
        let lat = PseudoLattice::diagonal(k, vec![FracIdeal::unit(&k), FracIdeal::unit(&k), p.clone()]);
        assert_eq!(steinitz_class(&lat).unwrap(), p.class());
        // scaling by P shifts the class by [P]^3 = 1
        let scaled = lat.scaled_by(&p);
        assert_eq!(steinitz_class(&scaled).unwrap(), p.class().compose(&p.class().pow(3)));
        let reduced = scaled.pseudo_hnf().unwrap();
        assert!(reduced.same_module(&scaled).unwrap());
    }

    #[test]
    fn scaling_by_a_rank_two_lattice() {
        let k = BaseField::new(-20).unwrap();
        let p = FracIdeal::from_prime(&k, &k.prime_ideals_above(2).unwrap()[0]);
        let lat = PseudoLattice::free(k, 3);
        // [P] has order 2 so st(P L) = [P]^3 = [P]
        assert_eq!(steinitz_class(&lat.scaled_by(&p)).unwrap(), p.class());
    }

    #[test]
    fn singular_input() {
        let k = k23();
        let v = vec![KElem::one(), KElem::zero(), KElem::zero()];
        let lat = PseudoLattice::new(k, 3, vec![(FracIdeal::unit(&k), v.clone()), (FracIdeal::unit(&k), v)]).unwrap();
        assert!(matches!(steinitz_class(&lat), Err(Error::SingularBasis)));
    }

    #[test]
    fn invariance_under_basis_change() {
        let k = k23();
        let p = FracIdeal::from_prime(&k, &k.prime_ideals_above(2).unwrap()[0]);
        let lat = PseudoLattice::diagonal(k, vec![p.clone(), FracIdeal::unit(&k), p.inverse()]);
        let half = KElem::new(BigRational::new(1.into(), 2.into()), BigRational::one());
        let m = vec![
            vec![KElem::one(), half.clone(), KElem::omega()],
            vec![KElem::zero(), KElem::one(), KElem::int(3)],
            vec![KElem::zero(), KElem::zero(), KElem::one()],
        ];
        let moved = lat.transform(&m);
        assert_eq!(steinitz_class(&moved).unwrap(), steinitz_class(&lat).unwrap());
    }

    #[test]
    fn class_sets() {
        assert_eq!(maximal_order_class_set(&k23(), 3).unwrap().cosets.len(), 3);
        assert_eq!(
            maximal_order_class_set(&BaseField::new(-20).unwrap(), 4)
                .unwrap()
                .cosets
                .len(),
            2
        );
        assert_eq!(
            maximal_order_class_set(&BaseField::rational(), 5).unwrap().cosets.len(),
            1
        );
        // Cl(-23) has order 3, so Cl^4 = Cl
        assert_eq!(maximal_order_class_set(&k23(), 4).unwrap().cosets.len(), 1);
    }

    fn report_and_oracle(ext: &RelativeExtension) -> (SelectivityReport, EmbeddableSet) {
        use crate::class_field::{selectivity_report, OrderGenusSpec};
        use crate::csa::AlgebraSpec;
        let n = ext.degree();
        let spec = OrderGenusSpec::maximal(AlgebraSpec::matrix_algebra(*ext.base(), n));
        let report = selectivity_report(&spec, ext, 1000).unwrap();
        let oracle = embeddable_steinitz_set(ext, n as usize, 1000).unwrap();
        (report, oracle)
    }

    #[test]
    fn hilbert_class_field_cross_check() {
        use crate::okpoly::OkPoly;
        use crate::OkElem;
        let f: OkPoly = vec![OkElem::int(1), OkElem::new(-2, 1), OkElem::new(-1, -1), OkElem::one()];
        let ext = RelativeExtension::new(k23(), f).unwrap();
        let (report, oracle) = report_and_oracle(&ext);
        assert_eq!(oracle.anchor, Anchor::Trivial);
        assert_eq!(oracle.cosets.len(), 1);
        let check = cross_check(&report, &oracle, true).unwrap();
        assert!(check.matches, "{}", check.detail);
        assert_eq!(check.orientation, Some(Orientation::Direct));
        assert!(matches!(
            cross_check(&report, &oracle, false),
            Err(Error::OracleNotApplicable(_))
        ));
    }

    #[test]
    fn non_monogenic_presentation_uses_relative_anchor() {
        let ext = RelativeExtension::from_rational_coefficients(k23(), &[-1, -1, 0, 1]).unwrap();
        let (report, oracle) = report_and_oracle(&ext);
        assert_eq!(oracle.anchor, Anchor::Relative);
        assert!(cross_check(&report, &oracle, true).unwrap().matches);
    }
}
