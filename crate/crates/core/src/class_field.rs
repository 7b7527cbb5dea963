//! Class fields of genera of orders, computed as quotients of `Cl(k)`, and the
//! selectivity of `o_K` among the conjugacy classes of a genus.
//!
//! For `n >= 3` the idelic double quotient attached to a genus collapses to
//! `Cl(k)/S`, where `S` is generated by `Cl(k)^n` and by `[P]^m` for each prime
//! `P` whose local order has reduced-norm valuations in `m Z`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::base_field::PrimeIdeal;
use crate::class_group::{class_group, ClassGroup, IdealClass, Subgroup};
use crate::csa::AlgebraSpec;
use crate::error::{Error, Result};
use crate::extension::{NormSubgroup, RelativeExtension};

/// Local order type at a prime, through the valuations of its reduced norms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "type")]
pub enum LocalType {
    /// Maximal order of `M_m(D_v)`: norms `o_v^x (k_v^x)^m`.
    MaximalSplit,
    /// Maximal order of a division algebra: every valuation occurs.
    MaximalDivision,
    /// Norm valuations in `g Z` with all units.
    Custom { exponent: u64 },
}

impl fmt::Display for LocalType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LocalType::MaximalSplit => write!(f, "maximal_split"),
            LocalType::MaximalDivision => write!(f, "maximal_division"),
            LocalType::Custom { exponent } => write!(f, "custom(exponent {exponent})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderGenusSpec {
    pub algebra: AlgebraSpec,
    pub local_types: Vec<(PrimeIdeal, LocalType)>,
}

impl OrderGenusSpec {
    /// The genus of maximal orders.
    pub fn maximal(algebra: AlgebraSpec) -> Self {
        OrderGenusSpec {
            algebra,
            local_types: Vec::new(),
        }
    }

    pub fn new(algebra: AlgebraSpec, local_types: Vec<(PrimeIdeal, LocalType)>) -> Result<Self> {
        let spec = OrderGenusSpec { algebra, local_types };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        self.algebra.validate()?;
        let n = self.algebra.degree as u64;
        let field = &self.algebra.field;
        for (i, (prime, ty)) in self.local_types.iter().enumerate() {
            if !field.owns(prime) {
                return Err(Error::InvalidPrime {
                    p: prime.p,
                    reason: format!("{prime} is not a prime of {field}"),
                });
            }
            if self.local_types[..i].iter().any(|(q, _)| q == prime) {
                return Err(Error::InvalidGenus(format!("prime {prime} listed twice")));
            }
            match ty {
                LocalType::MaximalSplit => {}
                LocalType::MaximalDivision => {
                    let d = self.algebra.local_index(prime).d;
                    if d != n {
                        return Err(Error::InvalidGenus(format!(
                            "maximal_division at {prime} needs local index {n}, found {d}"
                        )));
                    }
                }
                LocalType::Custom { exponent } => {
                    if *exponent == 0 || !n.is_multiple_of(*exponent) {
                        return Err(Error::InvalidGenus(format!(
                            "custom exponent {exponent} at {prime} does not divide {n}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn local_type(&self, prime: &PrimeIdeal) -> LocalType {
        self.local_types
            .iter()
            .find(|(p, _)| p == prime)
            .map(|(_, t)| *t)
            .unwrap_or(LocalType::MaximalSplit)
    }

    /// Primes named by the algebra or by a local type, sorted.
    pub fn listed_primes(&self) -> Vec<PrimeIdeal> {
        let mut out: Vec<PrimeIdeal> = self
            .algebra
            .finite_invariants
            .iter()
            .map(|(p, _)| p.clone())
            .chain(self.local_types.iter().map(|(p, _)| p.clone()))
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// Exponent `m` with `[P]^m` in the stabilizer image.
    pub fn exponent_at(&self, prime: &PrimeIdeal) -> u64 {
        match self.local_type(prime) {
            LocalType::MaximalSplit => self.algebra.local_index(prime).m,
            LocalType::MaximalDivision => 1,
            LocalType::Custom { exponent } => exponent,
        }
    }

    /// Whether the ratio is an equality: only maximal local types, every local
    /// index 1 or `n`.
    pub fn exactness(&self) -> Exactness {
        let n = self.algebra.degree as u64;
        let custom = self
            .local_types
            .iter()
            .any(|(_, t)| matches!(t, LocalType::Custom { .. }));
        let intermediate = self
            .algebra
            .finite_invariants
            .iter()
            .any(|(_, i)| i.den != 1 && i.den != n);
        if custom || intermediate {
            Exactness::LowerBound
        } else {
            Exactness::Exact
        }
    }

    pub fn has_division_prime(&self) -> bool {
        self.listed_primes()
            .iter()
            .any(|p| self.algebra.local_index(p).d == self.algebra.degree as u64)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Exactness {
    Exact,
    LowerBound,
}

/// `S`, the class-group image of `k^x N(St(Gamma))`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilizerSubgroup {
    pub subgroup: Subgroup,
    /// `(prime, m)` for every listed prime; `[P]^m` lies in `S`.
    pub derivation: Vec<(PrimeIdeal, u64)>,
}

fn check_field(group: &ClassGroup, spec: &OrderGenusSpec) -> Result<()> {
    if group.field() != &spec.algebra.field {
        return Err(Error::FieldMismatch(format!(
            "class group of {} with a genus over {}",
            group.field(),
            spec.algebra.field
        )));
    }
    Ok(())
}

pub fn stabilizer_subgroup(group: &ClassGroup, spec: &OrderGenusSpec) -> Result<StabilizerSubgroup> {
    spec.validate()?;
    check_field(group, spec)?;
    let n = spec.algebra.degree as u64;
    let mut gens: Vec<IdealClass> = group.power_subgroup(n)?.generators().to_vec();
    let mut derivation = Vec::new();
    for prime in spec.listed_primes() {
        let m = spec.exponent_at(&prime);
        gens.push(group.ideal_class(&prime)?.pow(m));
        derivation.push((prime, m));
    }
    Ok(StabilizerSubgroup {
        subgroup: group.subgroup_generated(&gens)?,
        derivation,
    })
}

/// `[Cl(k) : S]`, the number of classes in the genus.
pub fn genus_class_count(group: &ClassGroup, spec: &OrderGenusSpec) -> Result<u64> {
    Ok(stabilizer_subgroup(group, spec)?.subgroup.index() as u64)
}

fn norm_times_stabilizer(group: &ClassGroup, s: &Subgroup, norm: &NormSubgroup) -> Result<Subgroup> {
    s.join(&norm.subgroup, group)
}

/// `[Cl(k) : N S]`, the degree of `K` meet `k(Gamma)` over `k`.
pub fn selectivity_degree(group: &ClassGroup, spec: &OrderGenusSpec, norm: &NormSubgroup) -> Result<u64> {
    let s = stabilizer_subgroup(group, spec)?;
    Ok(norm_times_stabilizer(group, &s.subgroup, norm)?.index() as u64)
}

/// Whether `o_K` embeds in the orders of the genus class indexed by `c`
/// (relative to an order that contains it).
pub fn decide_class(group: &ClassGroup, spec: &OrderGenusSpec, norm: &NormSubgroup, c: &IdealClass) -> Result<bool> {
    group.check(c)?;
    let s = stabilizer_subgroup(group, spec)?;
    Ok(norm_times_stabilizer(group, &s.subgroup, norm)?.contains(c))
}

/// An exact fraction, serialized as a pair of decimal strings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "[String; 2]", try_from = "[String; 2]")]
pub struct Ratio {
    pub num: u64,
    pub den: u64,
}

impl Ratio {
    pub fn new(num: u64, den: u64) -> Self {
        let g = num_integer::gcd(num, den).max(1);
        Ratio {
            num: num / g,
            den: den / g,
        }
    }
}

impl From<Ratio> for [String; 2] {
    fn from(r: Ratio) -> Self {
        [r.num.to_string(), r.den.to_string()]
    }
}

impl TryFrom<[String; 2]> for Ratio {
    type Error = String;

    fn try_from([num, den]: [String; 2]) -> std::result::Result<Self, String> {
        let num: u64 = num.parse().map_err(|e| format!("numerator {num:?}: {e}"))?;
        let den: u64 = den.parse().map_err(|e| format!("denominator {den:?}: {e}"))?;
        if den == 0 {
            return Err("zero denominator".into());
        }
        Ok(Ratio::new(num, den))
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelectivityReport {
    pub genus_class_count: u64,
    pub class_field_degree: u64,
    pub selectivity_degree: u64,
    pub embeddable_class_count: u64,
    pub ratio: Ratio,
    pub exactness: Exactness,
    pub diagnostics: Vec<String>,
    pub stabilizer: StabilizerSubgroup,
    pub norm: NormSubgroup,
    /// Cosets of `S` in `Cl(k)`, each sorted, in lexicographic order.
    pub genus_classes: Vec<Vec<IdealClass>>,
    /// The cosets admitting the embedding, by smallest representative.
    pub embeddable_classes: Vec<IdealClass>,
}

impl SelectivityReport {
    /// The set of classes (a union of cosets of `S`) that admit the embedding.
    pub fn embeddable_cosets(&self) -> Vec<Vec<IdealClass>> {
        self.genus_classes
            .iter()
            .filter(|c| self.embeddable_classes.contains(&c[0]))
            .cloned()
            .collect()
    }
}

/// Full pipeline with the norm subgroup sampled up to `bound`.
pub fn selectivity_report(spec: &OrderGenusSpec, ext: &RelativeExtension, bound: u64) -> Result<SelectivityReport> {
    spec.validate()?;
    let group = class_group(&spec.algebra.field);
    check_embeddable(spec, ext)?;
    let norm = ext.norm_class_subgroup(&group, bound)?;
    selectivity_report_with(&group, spec, ext, &norm)
}

fn check_embeddable(spec: &OrderGenusSpec, ext: &RelativeExtension) -> Result<()> {
    if let Some(place) = spec.algebra.first_obstruction(ext)? {
        return Err(Error::NotEmbeddable { place });
    }
    Ok(())
}

/// Pipeline with a precomputed norm subgroup.
pub fn selectivity_report_with(
    group: &ClassGroup,
    spec: &OrderGenusSpec,
    ext: &RelativeExtension,
    norm: &NormSubgroup,
) -> Result<SelectivityReport> {
    check_field(group, spec)?;
    if norm.subgroup.members().iter().any(|c| !group.contains(c)) {
        return Err(Error::FieldMismatch("norm subgroup of another class group".into()));
    }
    check_embeddable(spec, ext)?;
    let stabilizer = stabilizer_subgroup(group, spec)?;
    let ns = norm_times_stabilizer(group, &stabilizer.subgroup, norm)?;
    let genus = stabilizer.subgroup.index() as u64;
    let selectivity = ns.index() as u64;
    let embeddable = (ns.order() / stabilizer.subgroup.order()) as u64;
    let genus_classes = group.cosets(&stabilizer.subgroup);
    let embeddable_classes: Vec<IdealClass> = genus_classes.iter().map(|c| c[0]).filter(|c| ns.contains(c)).collect();
    debug_assert_eq!(embeddable_classes.len() as u64, embeddable);

    let exactness = spec.exactness();
    let mut diagnostics = Vec::new();
    if !norm.stabilized {
        diagnostics.push(format!(
            "norm subgroup grew between bound {} and {}; results may be incomplete",
            norm.sampling_bound / 2,
            norm.sampling_bound
        ));
    }
    if !norm.skipped.is_empty() {
        let names: Vec<String> = norm.skipped.iter().map(|p| p.to_string()).collect();
        diagnostics.push(format!(
            "primes skipped while sampling norms (monogenic order not certified maximal): {}",
            names.join(", ")
        ));
    }
    if exactness == Exactness::LowerBound {
        diagnostics
            .push("local data outside the matrix/division dichotomy: the embeddable count is a lower bound".into());
    }
    Ok(SelectivityReport {
        genus_class_count: genus,
        class_field_degree: genus,
        selectivity_degree: selectivity,
        embeddable_class_count: embeddable,
        ratio: Ratio::new(embeddable, genus),
        exactness,
        diagnostics,
        stabilizer,
        norm: norm.clone(),
        genus_classes,
        embeddable_classes,
    })
}
