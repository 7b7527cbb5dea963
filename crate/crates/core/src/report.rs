//! The report document (schema `orderembed.report/v1`) and its plain-text rendering.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::class_field::{Exactness, SelectivityReport};
use crate::class_group::IdealClass;
use crate::config::{Fraction, ScenarioConfig};
use crate::extension::LocalFactor;
use crate::steinitz::{Anchor, Orientation};

pub const REPORT_SCHEMA: &str = "orderembed.report/v1";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSummary {
    pub discriminant: i64,
    pub name: String,
    pub class_number: u64,
    pub elementary_divisors: Vec<u64>,
    /// Generators of `Cl(k)` as reduced forms.
    pub generators: Vec<IdealClass>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionSummary {
    pub min_poly: String,
    pub degree: u32,
    pub discriminant: String,
    pub discriminant_primes: Vec<String>,
    /// Primes where `o_k[x]/(f)` is not certified maximal.
    pub uncertified_primes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraSummary {
    pub degree: u32,
    pub matrix_algebra: bool,
    pub ramified_primes: Vec<String>,
    pub division_primes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub real_invariant: Option<Fraction>,
}

/// One row of the local embeddability table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalRow {
    pub place: String,
    pub invariant: Fraction,
    pub local_index: u64,
    pub matrix_size: u64,
    pub local_type: String,
    /// `(e, f)` for the primes of `K` above the place, when known.
    pub splitting: Vec<LocalFactor>,
    pub certified: bool,
    /// `None` when the local degrees are not certified.
    pub embeds: Option<bool>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Match,
    Mismatch,
    NotApplicable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReport {
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orientation: Option<Orientation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub anchor: Option<Anchor>,
    pub detail: String,
    /// Steinitz cosets the lattice computation found embeddable.
    pub cosets: Vec<Vec<IdealClass>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema: String,
    pub tool_version: String,
    /// Unix seconds; not part of the deterministic content.
    pub generated_at: String,
    pub config: ScenarioConfig,
    pub seed: u64,
    pub base_field: FieldSummary,
    pub extension: ExtensionSummary,
    pub algebra: AlgebraSummary,
    pub local_embeddability: Vec<LocalRow>,
    pub real_place_embeds: bool,
    pub stabilized: bool,
    #[serde(flatten)]
    pub selectivity: SelectivityReport,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleReport>,
}

impl ReportDocument {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> crate::Result<Self> {
        serde_json::from_str(text).map_err(|e| crate::Error::Config(format!("report: {e}")))
    }

    /// JSON with the timestamp blanked, for comparisons.
    pub fn canonical_json(&self) -> String {
        let mut copy = self.clone();
        copy.generated_at = String::new();
        copy.to_json()
    }

    pub fn oracle_mismatch(&self) -> bool {
        self.oracle.as_ref().is_some_and(|o| o.verdict == Verdict::Mismatch)
    }

    /// 0, or 3 on an oracle mismatch.
    pub fn exit_code(&self) -> i32 {
        if self.oracle_mismatch() {
            3
        } else {
            0
        }
    }
}

fn classes(list: &[IdealClass]) -> String {
    if list.is_empty() {
        return "none".into();
    }
    list.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ")
}

/// Plain-text narrative of a report.
pub fn explain(doc: &ReportDocument) -> String {
    let r = &doc.selectivity;
    let mut out = String::new();
    if let Some(o) = doc.oracle.as_ref().filter(|o| o.verdict == Verdict::Mismatch) {
        let _ = writeln!(
            out,
            "*** ORACLE MISMATCH: the lattice computation disagrees with the class field ***"
        );
        let _ = writeln!(out, "*** {} ***", o.detail);
        let _ = writeln!(out);
    }
    let f = &doc.base_field;
    let _ = writeln!(out, "orderembed {} ({})", doc.tool_version, doc.schema);
    let _ = writeln!(
        out,
        "base field {}: class number {}, invariants {:?}, generators {}",
        f.name,
        f.class_number,
        f.elementary_divisors,
        classes(&f.generators)
    );
    let e = &doc.extension;
    let _ = writeln!(
        out,
        "K = k[x]/({}), [K:k] = {}, disc {}",
        e.min_poly, e.degree, e.discriminant
    );
    if !e.uncertified_primes.is_empty() {
        let _ = writeln!(
            out,
            "  k[x]/(f) not certified maximal at {}",
            e.uncertified_primes.join(", ")
        );
    }
    let a = &doc.algebra;
    if a.matrix_algebra {
        let _ = writeln!(out, "A = M_{}(k)", a.degree);
    } else {
        let _ = writeln!(
            out,
            "A of degree {} ramified at {}",
            a.degree,
            a.ramified_primes.join(", ")
        );
    }

    let _ = writeln!(out, "\nlocal embeddability:");
    for row in &doc.local_embeddability {
        let embeds = match row.embeds {
            Some(true) => "embeds",
            Some(false) => "obstructed",
            None => "undetermined",
        };
        let split: Vec<String> = row
            .splitting
            .iter()
            .map(|x| format!("(e={}, f={})", x.e, x.f))
            .collect();
        let _ = writeln!(
            out,
            "  {:<14} inv {}/{}  d={} m={}  {:<18} {}  {}",
            row.place,
            row.invariant.0,
            row.invariant.1,
            row.local_index,
            row.matrix_size,
            row.local_type,
            if split.is_empty() { "-".into() } else { split.join(" ") },
            embeds
        );
    }
    let _ = writeln!(
        out,
        "  real place: {}",
        if doc.real_place_embeds { "embeds" } else { "obstructed" }
    );

    let _ = writeln!(
        out,
        "\nmain criterion: a conjugacy class admits the embedding iff it lies in N S"
    );
    let _ = writeln!(
        out,
        "  S (stabilizer image): order {}, generators {}",
        r.stabilizer.subgroup.order(),
        classes(r.stabilizer.subgroup.generators())
    );
    let _ = writeln!(
        out,
        "  N (norm image): order {}, generators {}, {} primes sampled to bound {}{}",
        r.norm.subgroup.order(),
        classes(r.norm.subgroup.generators()),
        r.norm.primes_sampled,
        r.norm.sampling_bound,
        if doc.stabilized {
            ", stabilized"
        } else {
            ", NOT stabilized"
        }
    );
    let _ = writeln!(out, "  genus class count [Cl : S] = {}", r.genus_class_count);
    let _ = writeln!(out, "  selectivity degree [Cl : N S] = {}", r.selectivity_degree);
    let _ = writeln!(out, "  embeddable cosets: {}", classes(&r.embeddable_classes));

    let verb = if r.embeddable_class_count == 1 {
        "admits"
    } else {
        "admit"
    };
    match r.exactness {
        Exactness::Exact => {
            let _ = writeln!(
                out,
                "\nratio theorem: {} of {} conjugacy classes {verb} the embedding (ratio {})",
                r.embeddable_class_count, r.genus_class_count, r.ratio
            );
        }
        Exactness::LowerBound => {
            let _ = writeln!(
                out,
                "\nratio theorem (lower bound): at least {} of {} conjugacy classes {verb} the embedding (ratio at least {})",
                r.embeddable_class_count, r.genus_class_count, r.ratio
            );
        }
    }
    if !a.division_primes.is_empty() {
        let _ = writeln!(
            out,
            "totally ramified case: A is a division algebra at {}, so every class admits the embedding",
            a.division_primes.join(", ")
        );
    }
    for d in &r.diagnostics {
        let _ = writeln!(out, "note: {d}");
    }
    if let Some(o) = &doc.oracle {
        let label = match o.verdict {
            Verdict::Match => "match",
            Verdict::Mismatch => "MISMATCH",
            Verdict::NotApplicable => "not applicable",
        };
        let _ = writeln!(out, "\nSteinitz oracle: {label} ({})", o.detail);
    }
    out
}
