//! Scenario configuration files (JSON, schema `orderembed.scenario/v1`).
//!
//! Integers may be given as JSON numbers or decimal strings and are written back
//! as strings; fractions are `[numerator, denominator]` pairs.

use std::fmt;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::base_field::{BaseField, OkElem, PrimeIdeal, PrimeKind};
use crate::class_field::{LocalType, OrderGenusSpec};
use crate::csa::{AlgebraSpec, Invariant};
use crate::error::{Error, Result};
use crate::extension::{RelativeExtension, DEFAULT_SEED};

pub const CONFIG_SCHEMA: &str = "orderembed.scenario/v1";
pub const DEFAULT_SAMPLING_BOUND: u64 = 1000;

/// An arbitrary-precision integer, read from a JSON number or a decimal string.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Decimal(pub BigInt);

impl Serialize for Decimal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for Decimal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(n) => Ok(Decimal(n.into())),
            Raw::Str(s) => s
                .trim()
                .parse::<BigInt>()
                .map(Decimal)
                .map_err(|_| serde::de::Error::custom(format!("not a decimal integer: {s:?}"))),
        }
    }
}

impl From<i64> for Decimal {
    fn from(n: i64) -> Self {
        Decimal(n.into())
    }
}

impl fmt::Display for Decimal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Decimal {
    fn to_u64(&self, what: &str) -> Result<u64> {
        self.0
            .to_u64()
            .ok_or_else(|| Error::Config(format!("{what} {} out of range", self.0)))
    }
}

/// `[numerator, denominator]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fraction(pub Decimal, pub Decimal);

impl Fraction {
    pub fn new(num: i64, den: i64) -> Self {
        Fraction(num.into(), den.into())
    }

    fn to_invariant(&self) -> Result<Invariant> {
        Invariant::new(
            self.0.to_u64("invariant numerator")?,
            self.1.to_u64("invariant denominator")?,
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PrimeTag {
    Ramified,
}

/// Which prime above `p`: a root of the minimal polynomial of `w` mod `p`, or the ramified one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RootSelector {
    Root(u64),
    Tag(PrimeTag),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PrimeSpec {
    pub p: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root: Option<RootSelector>,
}

impl PrimeSpec {
    pub fn resolve(&self, field: &BaseField) -> Result<PrimeIdeal> {
        match self.root {
            None => field.resolve_prime(self.p, None),
            Some(RootSelector::Root(r)) => field.resolve_prime(self.p, Some(r)),
            Some(RootSelector::Tag(PrimeTag::Ramified)) => {
                let prime = field.resolve_prime(self.p, None)?;
                if prime.kind != PrimeKind::Ramified {
                    return Err(Error::InvalidPrime {
                        p: self.p,
                        reason: format!("{} is not ramified in {field}", self.p),
                    });
                }
                Ok(prime)
            }
        }
    }
}

impl From<&PrimeIdeal> for PrimeSpec {
    fn from(p: &PrimeIdeal) -> Self {
        let root = match p.kind {
            PrimeKind::Split => p.root.map(RootSelector::Root),
            PrimeKind::Ramified => Some(RootSelector::Tag(PrimeTag::Ramified)),
            _ => None,
        };
        PrimeSpec { p: p.p, root }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InvariantEntry {
    pub prime: PrimeSpec,
    pub invariant: Fraction,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LocalTypeEntry {
    pub prime: PrimeSpec,
    pub local_type: LocalType,
}

fn default_schema() -> String {
    CONFIG_SCHEMA.to_string()
}

fn default_bound() -> u64 {
    DEFAULT_SAMPLING_BOUND
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default = "default_schema")]
    pub schema: String,
    pub base_discriminant: Decimal,
    /// Coefficients `[a, b]` meaning `a + b w`, constant term first.
    pub min_poly: Vec<[Decimal; 2]>,
    pub degree: u32,
    #[serde(default)]
    pub invariants: Vec<InvariantEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub real_invariant: Option<Fraction>,
    #[serde(default)]
    pub order_local_types: Vec<LocalTypeEntry>,
    #[serde(default = "default_bound")]
    pub sampling_bound: u64,
    #[serde(default)]
    pub oracle: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// The objects a configuration describes.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub field: BaseField,
    pub extension: RelativeExtension,
    pub genus: OrderGenusSpec,
}

impl ScenarioConfig {
    /// `M_n(k)` with maximal orders.
    pub fn matrix(discriminant: i64, min_poly: &[(i64, i64)]) -> Self {
        ScenarioConfig {
            schema: default_schema(),
            base_discriminant: discriminant.into(),
            min_poly: min_poly.iter().map(|&(a, b)| [a.into(), b.into()]).collect(),
            degree: (min_poly.len() as u32).saturating_sub(1),
            invariants: Vec::new(),
            real_invariant: None,
            order_local_types: Vec::new(),
            sampling_bound: DEFAULT_SAMPLING_BOUND,
            oracle: false,
            seed: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let config: ScenarioConfig = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        if config.schema != CONFIG_SCHEMA {
            return Err(Error::Config(format!(
                "unsupported schema {:?}, expected {CONFIG_SCHEMA}",
                config.schema
            )));
        }
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn effective_seed(&self) -> u64 {
        self.seed.unwrap_or(DEFAULT_SEED)
    }

    pub fn base_field(&self) -> Result<BaseField> {
        let d = self
            .base_discriminant
            .0
            .to_i64()
            .ok_or_else(|| Error::InvalidDiscriminant {
                discriminant: 0,
                reason: format!("{} does not fit in 64 bits", self.base_discriminant),
            })?;
        BaseField::new(d)
    }

    pub fn extension(&self, field: &BaseField) -> Result<RelativeExtension> {
        let coeffs: Vec<OkElem> = self
            .min_poly
            .iter()
            .map(|[a, b]| OkElem::new(a.0.clone(), b.0.clone()))
            .collect();
        if field.is_rational() && coeffs.iter().any(|c| c.b != BigInt::from(0)) {
            return Err(Error::InvalidPolynomial("w-coefficients given over Q".into()));
        }
        let ext = RelativeExtension::new(*field, coeffs)?.with_seed(self.effective_seed());
        if ext.degree() != self.degree {
            return Err(Error::InvalidAlgebra(format!(
                "degree {} does not match the polynomial degree {}",
                self.degree,
                ext.degree()
            )));
        }
        Ok(ext)
    }

    pub fn genus(&self, field: &BaseField) -> Result<OrderGenusSpec> {
        let mut finite = Vec::with_capacity(self.invariants.len());
        for entry in &self.invariants {
            finite.push((entry.prime.resolve(field)?, entry.invariant.to_invariant()?));
        }
        let real = self.real_invariant.as_ref().map(Fraction::to_invariant).transpose()?;
        let algebra = AlgebraSpec::new(*field, self.degree, finite, real)?;
        let mut types = Vec::with_capacity(self.order_local_types.len());
        for entry in &self.order_local_types {
            types.push((entry.prime.resolve(field)?, entry.local_type));
        }
        OrderGenusSpec::new(algebra, types)
    }

    /// Resolves and validates everything, algebra first.
    pub fn scenario(&self) -> Result<Scenario> {
        if self.sampling_bound < 2 {
            return Err(Error::InvalidBound(self.sampling_bound));
        }
        let field = self.base_field()?;
        let genus = self.genus(&field)?;
        let extension = self.extension(&field)?;
        Ok(Scenario {
            field,
            extension,
            genus,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const HILBERT: &str = r#"{
        "schema": "orderembed.scenario/v1",
        "base_discriminant": -23,
        "min_poly": [["-1", "0"], ["-1", "0"], ["0", "0"], ["1", "0"]],
        "degree": 3,
        "invariants": [
            {"prime": {"p": 2, "root": 0}, "invariant": ["1", "3"]},
            {"prime": {"p": 2, "root": 1}, "invariant": ["2", "3"]}
        ],
        "order_local_types": [
            {"prime": {"p": 2, "root": 0}, "local_type": {"type": "maximal_division"}}
        ],
        "oracle": true
    }"#;

    #[test]
    fn parse_and_round_trip() {
        let c = ScenarioConfig::from_json(HILBERT).unwrap();
        assert_eq!(c.sampling_bound, 1000);
        assert_eq!(c.base_discriminant, Decimal::from(-23));
        assert_eq!(ScenarioConfig::from_json(&c.to_json()).unwrap(), c);
        let s = c.scenario().unwrap();
        assert_eq!(s.genus.algebra.ramified_primes().len(), 2);
        assert_eq!(s.extension.degree(), 3);
    }

    #[test]
    fn prime_selectors() {
        let k = BaseField::new(-20).unwrap();
        let spec: PrimeSpec = serde_json::from_str(r#"{"p": 5, "root": "ramified"}"#).unwrap();
        let p = spec.resolve(&k).unwrap();
        assert_eq!(p.kind, PrimeKind::Ramified);
        assert_eq!(PrimeSpec::from(&p), spec);
        let bad: PrimeSpec = serde_json::from_str(r#"{"p": 3, "root": "ramified"}"#).unwrap();
        assert!(matches!(bad.resolve(&k), Err(Error::InvalidPrime { p: 3, .. })));
        let split: PrimeSpec = serde_json::from_str(r#"{"p": 3}"#).unwrap();
        assert!(split.resolve(&k).is_err());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(ScenarioConfig::from_json("{}"), Err(Error::Config(_))));
        let wrong_schema = HILBERT.replace("scenario/v1", "scenario/v9");
        assert!(matches!(
            ScenarioConfig::from_json(&wrong_schema),
            Err(Error::Config(_))
        ));
        let unknown = HILBERT.replace("\"oracle\"", "\"oracles\"");
        assert!(ScenarioConfig::from_json(&unknown).is_err());
        let reciprocity = HILBERT.replace("[\"2\", \"3\"]", "[\"0\", \"1\"]");
        let c = ScenarioConfig::from_json(&reciprocity).unwrap();
        assert!(matches!(c.scenario(), Err(Error::Reciprocity { .. })));
    }

    #[test]
    fn big_integers_as_strings() {
        let text = HILBERT.replace(
            "\"-1\", \"0\"], [\"-1\"",
            "\"-1\", \"0\"], [\"-100000000000000000000000\"",
        );
        let c = ScenarioConfig::from_json(&text).unwrap();
        assert_eq!(
            c.min_poly[1][0].0,
            "-100000000000000000000000".parse::<BigInt>().unwrap()
        );
        assert_eq!(ScenarioConfig::from_json(&c.to_json()).unwrap(), c);
    }
}
