//! Built-in corpus: every family through classifier and oracle, plus the
//! closed-form identities of the canonical forms.

use qcenter::families::{samples, Family};
use qcenter::identities::check_all;

use crate::input::SystemRecord;
use crate::report::{analyze_all, FamilySummary, Options, ReportDocument};

/// Parameter draws per closed-form family.
const IDENTITY_DRAWS: usize = 50;

pub struct CorpusOptions {
    pub seed: u64,
    pub count: usize,
    pub family: Option<Family>,
    pub jobs: usize,
    pub invariants: bool,
}

pub fn run(opts: &CorpusOptions) -> ReportDocument {
    let families: Vec<Family> = match opts.family {
        Some(f) => vec![f],
        None => Family::ALL.to_vec(),
    };
    let mut records = Vec::new();
    let mut spans = Vec::new();
    for &family in &families {
        let start = records.len();
        for s in samples(family, opts.seed, opts.count) {
            let record = SystemRecord {
                id: s.id,
                coefficients: s.system.coeffs(),
                expected: None,
            };
            records.push((record, Some(s.note)));
        }
        spans.push((family, start..records.len()));
    }
    let analysis = Options {
        oracle: true,
        invariants: opts.invariants,
    };
    let reports = analyze_all(&records, analysis, opts.jobs);
    let mut doc = ReportDocument::new(reports, &[]);
    doc.families = spans
        .into_iter()
        .map(|(family, span)| {
            let part = &doc.systems[span];
            let compared = part.iter().filter(|s| s.oracle_agrees().is_some()).count();
            FamilySummary {
                family: family.to_string(),
                systems: part.len(),
                compared,
                agreed: part
                    .iter()
                    .filter(|s| s.oracle_agrees() == Some(true))
                    .count(),
                not_applicable: part
                    .iter()
                    .filter(|s| {
                        s.classification
                            .as_ref()
                            .is_some_and(|c| c.center_count.is_none())
                    })
                    .count(),
                failures: part.iter().filter(|s| s.failed()).count(),
            }
        })
        .collect();
    if families.contains(&Family::Canonical) {
        doc.identities = check_all(opts.seed, IDENTITY_DRAWS);
    }
    doc
}
