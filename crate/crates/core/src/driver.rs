//! Runs a scenario end to end.

use std::time::{SystemTime, UNIX_EPOCH};

use crate::base_field::PrimeIdeal;
use crate::class_field::{selectivity_report_with, LocalType, OrderGenusSpec};
use crate::class_group::class_group;
use crate::config::{Fraction, Scenario, ScenarioConfig};
use crate::error::{Error, Result};
use crate::extension::RelativeExtension;
use crate::okpoly;
use crate::report::{
    AlgebraSummary, ExtensionSummary, FieldSummary, LocalRow, OracleReport, ReportDocument, Verdict, REPORT_SCHEMA,
    TOOL_VERSION,
};
use crate::steinitz::{cross_check, embeddable_steinitz_set_with};

fn timestamp() -> String {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
        .to_string()
}

fn local_table(genus: &OrderGenusSpec, ext: &RelativeExtension) -> Result<Vec<LocalRow>> {
    let mut primes: Vec<PrimeIdeal> = genus.listed_primes();
    primes.extend(ext.discriminant_primes().iter().cloned());
    primes.sort();
    primes.dedup();
    let mut rows = Vec::with_capacity(primes.len());
    for prime in primes {
        let inv = genus.algebra.invariant_at(&prime);
        let idx = genus.algebra.local_index(&prime);
        let datum = ext.splitting_type(&prime)?;
        let embeds = if idx.d == 1 {
            Some(true)
        } else if datum.certified {
            Some(genus.algebra.local_embeddable(ext, &prime)?)
        } else {
            None
        };
        let local_type = match genus.local_type(&prime) {
            LocalType::MaximalSplit if idx.d == genus.algebra.degree as u64 => "maximal (division)".to_string(),
            t => t.to_string(),
        };
        rows.push(LocalRow {
            place: prime.to_string(),
            invariant: Fraction::new(inv.num as i64, inv.den as i64),
            local_index: idx.d,
            matrix_size: idx.m,
            local_type,
            splitting: if datum.certified { datum.factors } else { Vec::new() },
            certified: datum.certified,
            embeds,
        });
    }
    Ok(rows)
}

fn oracle_applicable(genus: &OrderGenusSpec) -> bool {
    genus.algebra.is_matrix_algebra() && genus.local_types.iter().all(|(_, t)| *t == LocalType::MaximalSplit)
}

/// Validation, local and global embeddability, class field, selectivity and,
/// if the config asks for it, the lattice cross-check.
///
/// An oracle disagreement is reported in the document, not as an error.
pub fn run(config: &ScenarioConfig) -> Result<ReportDocument> {
    let Scenario {
        field,
        extension: ext,
        genus,
    } = config.scenario()?;
    let group = class_group(&field);
    let rows = local_table(&genus, &ext)?;
    let real_place_embeds = genus.algebra.real_embeddable(&ext);
    if let Some(place) = genus.algebra.first_obstruction(&ext)? {
        return Err(Error::NotEmbeddable { place });
    }
    let norm = ext.norm_class_subgroup(&group, config.sampling_bound)?;
    let selectivity = selectivity_report_with(&group, &genus, &ext, &norm)?;

    let oracle = if config.oracle {
        Some(if oracle_applicable(&genus) {
            let set = embeddable_steinitz_set_with(&group, &ext, genus.algebra.degree as usize, &norm)?;
            let check = cross_check(&selectivity, &set, true)?;
            OracleReport {
                verdict: if check.matches {
                    Verdict::Match
                } else {
                    Verdict::Mismatch
                },
                orientation: check.orientation,
                anchor: Some(check.anchor),
                detail: check.detail,
                cosets: set.cosets,
            }
        } else {
            OracleReport {
                verdict: Verdict::NotApplicable,
                orientation: None,
                anchor: None,
                detail: "the lattice check covers maximal orders of a matrix algebra only".into(),
                cosets: Vec::new(),
            }
        })
    } else {
        None
    };

    let names = |ps: &[PrimeIdeal]| ps.iter().map(|p| p.to_string()).collect::<Vec<_>>();
    let n = genus.algebra.degree as u64;
    let division: Vec<PrimeIdeal> = genus
        .listed_primes()
        .into_iter()
        .filter(|p| genus.algebra.local_index(p).d == n)
        .collect();
    Ok(ReportDocument {
        schema: REPORT_SCHEMA.into(),
        tool_version: TOOL_VERSION.into(),
        generated_at: timestamp(),
        config: config.clone(),
        seed: config.effective_seed(),
        base_field: FieldSummary {
            discriminant: field.discriminant(),
            name: field.to_string(),
            class_number: group.order() as u64,
            elementary_divisors: group.elementary_divisors().to_vec(),
            generators: group.generators().to_vec(),
        },
        extension: ExtensionSummary {
            min_poly: okpoly::display(ext.min_poly()),
            degree: ext.degree(),
            discriminant: ext.discriminant().to_string(),
            discriminant_primes: names(ext.discriminant_primes()),
            uncertified_primes: names(&ext.maximality_check()),
        },
        algebra: AlgebraSummary {
            degree: genus.algebra.degree,
            matrix_algebra: genus.algebra.is_matrix_algebra(),
            ramified_primes: names(&genus.algebra.ramified_primes()),
            division_primes: names(&division),
            real_invariant: genus
                .algebra
                .real_invariant
                .map(|i| Fraction::new(i.num as i64, i.den as i64)),
        },
        local_embeddability: rows,
        real_place_embeds,
        stabilized: norm.stabilized,
        selectivity,
        oracle,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::class_field::Exactness;
    use crate::config::{InvariantEntry, LocalTypeEntry, PrimeSpec};
    use crate::report::explain;

    fn hilbert() -> ScenarioConfig {
        let mut c = ScenarioConfig::matrix(-23, &[(-1, 0), (-1, 0), (0, 0), (1, 0)]);
        c.oracle = true;
        c
    }

    #[test]
    fn hilbert_scenario() {
        let doc = run(&hilbert()).unwrap();
        let r = &doc.selectivity;
        assert_eq!(
            (r.genus_class_count, r.selectivity_degree, r.embeddable_class_count),
            (3, 3, 1)
        );
        assert_eq!((r.ratio.num, r.ratio.den), (1, 3));
        let o = doc.oracle.as_ref().unwrap();
        assert_eq!(o.verdict, Verdict::Match);
        assert_eq!(doc.exit_code(), 0);
        let text = explain(&doc);
        assert!(text.contains("1 of 3 conjugacy classes admits the embedding"), "{text}");
        assert!(!text.contains("MISMATCH"));
        assert_eq!(ReportDocument::from_json(&doc.to_json()).unwrap(), doc);
    }

    #[test]
    fn determinism() {
        let a = run(&hilbert()).unwrap();
        let b = run(&hilbert().clone()).unwrap();
        assert_eq!(a.canonical_json(), b.canonical_json());
    }

    #[test]
    fn reciprocity_failure() {
        let mut c = hilbert();
        c.invariants.push(InvariantEntry {
            prime: PrimeSpec {
                p: 2,
                root: Some(crate::config::RootSelector::Root(0)),
            },
            invariant: Fraction::new(1, 3),
        });
        let err = run(&c).unwrap_err();
        assert!(matches!(err, Error::Reciprocity { .. }));
        assert_eq!(err.exit_code(), 1);
    }

    #[test]
    fn rational_base() {
        let c = ScenarioConfig::matrix(0, &[(-2, 0), (0, 0), (0, 0), (1, 0)]);
        let doc = run(&c).unwrap();
        assert_eq!((doc.selectivity.ratio.num, doc.selectivity.ratio.den), (1, 1));
        assert_eq!(doc.selectivity.genus_class_count, 1);
    }

    #[test]
    fn undetermined_prime() {
        let mut c = hilbert();
        c.invariants = vec![
            InvariantEntry {
                prime: PrimeSpec { p: 23, root: None },
                invariant: Fraction::new(1, 3),
            },
            InvariantEntry {
                prime: PrimeSpec {
                    p: 2,
                    root: Some(crate::config::RootSelector::Root(0)),
                },
                invariant: Fraction::new(2, 3),
            },
        ];
        let err = run(&c).unwrap_err();
        assert!(matches!(err, Error::UndeterminedPrime { .. }), "{err:?}");
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn lower_bound_wording() {
        let mut c = hilbert();
        c.order_local_types.push(LocalTypeEntry {
            prime: PrimeSpec {
                p: 3,
                root: Some(crate::config::RootSelector::Root(0)),
            },
            local_type: LocalType::Custom { exponent: 1 },
        });
        let doc = run(&c).unwrap();
        assert_eq!(doc.selectivity.exactness, Exactness::LowerBound);
        assert_eq!(doc.oracle.as_ref().unwrap().verdict, Verdict::NotApplicable);
        assert!(explain(&doc).contains("at least"));
    }

    #[test]
    fn mismatch_is_flagged() {
        let mut doc = run(&hilbert()).unwrap();
        let o = doc.oracle.as_mut().unwrap();
        o.verdict = Verdict::Mismatch;
        o.detail = "embeddable count 1 vs 2 lattice cosets".into();
        assert_eq!(doc.exit_code(), 3);
        assert!(explain(&doc).starts_with("*** ORACLE MISMATCH"));
    }
}
