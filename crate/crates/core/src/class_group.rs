//! The ideal class group `Cl(k)` realized as the form class group of
//! discriminant `D`, and its subgroups.
//!
//! Classes are stored as reduced forms, so equality of classes is equality of
//! representatives. A prime `(p, w - r)` maps to the form
//! `(p, tr - 2r, (r^2 - tr r + nm)/p)`; more generally an integral ideal with
//! Hermite basis `{A, B + w}` maps to `(A, tr + 2B, N(B + w)/A)`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::base_field::{BaseField, PrimeIdeal, PrimeKind};
use crate::error::{Error, Result};
use crate::forms::{reduced_forms, QuadraticForm};

/// An element of `Cl(k)`, represented by its reduced form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IdealClass(pub QuadraticForm);

impl IdealClass {
    pub fn identity(field: &BaseField) -> Self {
        IdealClass(QuadraticForm::principal(field.discriminant()))
    }

    pub fn form(&self) -> QuadraticForm {
        self.0
    }

    pub fn compose(&self, other: &Self) -> Self {
        IdealClass(self.0.compose(&other.0))
    }

    pub fn inverse(&self) -> Self {
        if self.0.discriminant() == 0 {
            return *self;
        }
        IdealClass(self.0.inverse())
    }

    pub fn pow(&self, e: u64) -> Self {
        IdealClass(self.0.pow(e))
    }

    pub fn is_identity(&self) -> bool {
        self.0.a == 1
    }
}

impl fmt::Display for IdealClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// `Cl(k)` with its elements listed in increasing order of reduced form.
#[derive(Clone, Debug)]
pub struct ClassGroup {
    field: BaseField,
    elements: Vec<IdealClass>,
    index: HashMap<IdealClass, usize>,
    generators: Vec<IdealClass>,
    elementary_divisors: Vec<u64>,
}

impl ClassGroup {
    pub fn field(&self) -> &BaseField {
        &self.field
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[IdealClass] {
        &self.elements
    }

    pub fn generators(&self) -> &[IdealClass] {
        &self.generators
    }

    /// Invariant factors `d_1 | d_2 | ...`; empty for the trivial group.
    pub fn elementary_divisors(&self) -> &[u64] {
        &self.elementary_divisors
    }

    pub fn identity(&self) -> IdealClass {
        IdealClass::identity(&self.field)
    }

    pub fn contains(&self, c: &IdealClass) -> bool {
        self.index.contains_key(c)
    }

    pub fn check(&self, c: &IdealClass) -> Result<()> {
        if self.contains(c) {
            Ok(())
        } else {
            Err(Error::NotInGroup(c.to_string()))
        }
    }

    pub fn element_order(&self, c: &IdealClass) -> u64 {
        let mut x = *c;
        let mut k = 1;
        while !x.is_identity() {
            x = x.compose(c);
            k += 1;
        }
        k
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup::from_members(self, [self.identity()].into_iter().collect())
    }

    pub fn full_subgroup(&self) -> Subgroup {
        Subgroup::from_members(self, self.elements.iter().copied().collect())
    }

    /// The smallest subgroup containing `gens`.
    pub fn subgroup_generated(&self, gens: &[IdealClass]) -> Result<Subgroup> {
        for g in gens {
            self.check(g)?;
        }
        let mut members: BTreeSet<IdealClass> = BTreeSet::new();
        members.insert(self.identity());
        let mut frontier = vec![self.identity()];
        while let Some(x) = frontier.pop() {
            for g in gens {
                let y = x.compose(g);
                if members.insert(y) {
                    frontier.push(y);
                }
            }
        }
        Ok(Subgroup::from_members(self, members))
    }

    /// `{c^n : c in Cl(k)}`.
    pub fn power_subgroup(&self, n: u64) -> Result<Subgroup> {
        if n == 0 {
            return Err(Error::InvalidGenus("power subgroup exponent must be positive".into()));
        }
        let members = self.elements.iter().map(|c| c.pow(n)).collect();
        Ok(Subgroup::from_members(self, members))
    }

    /// The class of a prime ideal of the base field.
    pub fn ideal_class(&self, prime: &PrimeIdeal) -> Result<IdealClass> {
        ideal_class(&self.field, prime)
    }

    /// Cosets of `sub`, each sorted, listed by their smallest representative.
    pub fn cosets(&self, sub: &Subgroup) -> Vec<Vec<IdealClass>> {
        let mut seen: BTreeSet<IdealClass> = BTreeSet::new();
        let mut out = Vec::new();
        for c in &self.elements {
            if seen.contains(c) {
                continue;
            }
            let mut coset: Vec<IdealClass> = sub.members().iter().map(|s| c.compose(s)).collect();
            coset.sort();
            seen.extend(coset.iter().copied());
            out.push(coset);
        }
        out.sort();
        out
    }

    /// Greedy generating set of a subset: elements of largest order first.
    fn greedy_generators(&self, members: &BTreeSet<IdealClass>) -> Vec<IdealClass> {
        let mut by_order: Vec<(u64, IdealClass)> = members.iter().map(|c| (self.element_order(c), *c)).collect();
        by_order.sort_by(|x, y| y.0.cmp(&x.0).then(x.1.cmp(&y.1)));
        let mut gens = Vec::new();
        let mut span: BTreeSet<IdealClass> = [self.identity()].into_iter().collect();
        for (_, c) in by_order {
            if span.contains(&c) {
                continue;
            }
            gens.push(c);
            let mut frontier: Vec<IdealClass> = span.iter().copied().collect();
            while let Some(x) = frontier.pop() {
                for g in &gens {
                    let y = x.compose(g);
                    if span.insert(y) {
                        frontier.push(y);
                    }
                }
            }
        }
        gens
    }
}

/// Computes `Cl(k)` by enumerating reduced forms.
pub fn class_group(field: &BaseField) -> ClassGroup {
    let elements: Vec<IdealClass> = if field.is_rational() {
        vec![IdealClass::identity(field)]
    } else {
        reduced_forms(field.discriminant())
            .into_iter()
            .map(IdealClass)
            .collect()
    };
    let index = elements.iter().enumerate().map(|(i, c)| (*c, i)).collect();
    let mut group = ClassGroup {
        field: *field,
        elements,
        index,
        generators: Vec::new(),
        elementary_divisors: Vec::new(),
    };
    let all: BTreeSet<IdealClass> = group.elements.iter().copied().collect();
    group.generators = group.greedy_generators(&all);
    group.elementary_divisors = invariant_factors(&group);
    group
}

fn invariant_factors(group: &ClassGroup) -> Vec<u64> {
    let h = group.order() as u64;
    if h == 1 {
        return Vec::new();
    }
    let orders: Vec<u64> = group.elements.iter().map(|c| group.element_order(c)).collect();
    let torsion = |m: u64| orders.iter().filter(|o| m.is_multiple_of(**o)).count() as u64;
    // for each prime l | h, the number of cyclic l-factors of order >= l^j
    // is log_l(|G[l^j]| / |G[l^{j-1}]|)
    let mut per_prime: Vec<Vec<u64>> = Vec::new(); // sorted descending l-power orders
    let mut rest = h;
    let mut l = 2;
    while rest > 1 {
        if rest.is_multiple_of(l) {
            while rest.is_multiple_of(l) {
                rest /= l;
            }
            let mut counts = Vec::new();
            let mut j = 1;
            let mut prev = 1;
            loop {
                let cur = torsion(l.pow(j));
                if cur == prev {
                    break;
                }
                let mut ratio = cur / prev;
                let mut k = 0;
                while ratio > 1 {
                    ratio /= l;
                    k += 1;
                }
                counts.push(k);
                prev = cur;
                j += 1;
            }
            // counts[j-1] = number of factors with order >= l^j
            let rank = counts[0];
            let mut factors = Vec::new();
            for i in 0..rank {
                let exp = counts.iter().filter(|c| **c > i).count() as u32;
                factors.push(l.pow(exp));
            }
            per_prime.push(factors);
        }
        l += 1;
    }
    let rank = per_prime.iter().map(|v| v.len()).max().unwrap_or(0);
    let mut out = vec![1u64; rank];
    for factors in &per_prime {
        // factors sorted descending; align to the largest invariant factor
        for (i, f) in factors.iter().enumerate() {
            out[rank - 1 - i] *= f;
        }
    }
    out
}

/// The reduced form attached to a prime ideal.
pub fn ideal_class(field: &BaseField, prime: &PrimeIdeal) -> Result<IdealClass> {
    if !field.owns(prime) {
        return Err(Error::InvalidPrime {
            p: prime.p,
            reason: format!("{prime} is not a prime of {field}"),
        });
    }
    match prime.kind {
        PrimeKind::Rational | PrimeKind::Inert => Ok(IdealClass::identity(field)),
        PrimeKind::Split | PrimeKind::Ramified => {
            let p = prime.p as i128;
            let r = prime.root.unwrap_or(0) as i128;
            let tr = field.omega_trace() as i128;
            let nm = field.omega_norm() as i128;
            let c = (r * r - tr * r + nm) / p;
            let f = QuadraticForm::new(prime.p as i64, (tr - 2 * r) as i64, c as i64);
            debug_assert_eq!(f.discriminant(), field.discriminant());
            Ok(IdealClass(f.reduce()))
        }
    }
}

/// A subgroup of `Cl(k)`, stored as its sorted member list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subgroup {
    discriminant: i64,
    ambient_order: usize,
    members: Vec<IdealClass>,
    generators: Vec<IdealClass>,
}

impl Subgroup {
    fn from_members(group: &ClassGroup, members: BTreeSet<IdealClass>) -> Self {
        let generators = group.greedy_generators(&members);
        Subgroup {
            discriminant: group.field.discriminant(),
            ambient_order: group.order(),
            members: members.into_iter().collect(),
            generators,
        }
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn index(&self) -> usize {
        self.ambient_order / self.members.len()
    }

    pub fn members(&self) -> &[IdealClass] {
        &self.members
    }

    pub fn generators(&self) -> &[IdealClass] {
        &self.generators
    }

    pub fn contains(&self, c: &IdealClass) -> bool {
        self.members.binary_search(c).is_ok()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.members.iter().all(|c| other.contains(c))
    }

    fn same_ambient(&self, other: &Subgroup) -> Result<()> {
        if self.discriminant != other.discriminant {
            return Err(Error::FieldMismatch(format!(
                "subgroups of Cl({}) and Cl({})",
                self.discriminant, other.discriminant
            )));
        }
        Ok(())
    }

    /// The product subgroup `H K`.
    pub fn join(&self, other: &Subgroup, group: &ClassGroup) -> Result<Subgroup> {
        self.same_ambient(other)?;
        let gens: Vec<IdealClass> = self.generators.iter().chain(other.generators.iter()).copied().collect();
        group.subgroup_generated(&gens)
    }
}
