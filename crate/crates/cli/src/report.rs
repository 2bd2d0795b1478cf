//! Report documents and their text rendering.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use qcenter::classifier::{count_centers_with, Mf};
use qcenter::identities::IdentityReport;
use qcenter::{
    oracle_center_count, ClassificationReport, InvariantTable, OracleVerdict, Rational, SetIndex,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::input::{read_coeffs, write_coeffs, Expected, ParseError, SystemRecord};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, Default)]
pub struct Options {
    pub oracle: bool,
    pub invariants: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemReport {
    pub id: String,
    #[serde(serialize_with = "write_coeffs", deserialize_with = "read_coeffs")]
    pub coefficients: [Rational; 12],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classification: Option<ClassificationReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub invariants: Option<InvariantTable>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleVerdict>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_error: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<Expected>,
    /// Reasons the classification conflicts with the oracle or the expectation.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub disagreements: Vec<String>,
}

impl SystemReport {
    pub fn failed(&self) -> bool {
        self.error.is_some() || !self.disagreements.is_empty()
    }

    /// Whether the classifier count was compared with the oracle and matched.
    pub fn oracle_agrees(&self) -> Option<bool> {
        let count = self.classification.as_ref()?.center_count?;
        match (&self.oracle, &self.oracle_error) {
            (Some(o), _) => Some(o.center_count == Some(count)),
            (None, Some(_)) => Some(false),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetCount {
    pub set_index: SetIndex,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Disagreement {
    pub id: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilySummary {
    pub family: String,
    pub systems: usize,
    pub compared: usize,
    pub agreed: usize,
    pub not_applicable: usize,
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Summary {
    pub systems: usize,
    pub per_set: Vec<SetCount>,
    /// Keyed by `"0"`, `"1"`, `"2"` and `"n/a"`.
    pub per_center_count: BTreeMap<String, usize>,
    pub disagreements: Vec<Disagreement>,
    pub errors: Vec<Disagreement>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub input_errors: Vec<InputError>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema_version: u32,
    pub systems: Vec<SystemReport>,
    pub summary: Summary,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub families: Vec<FamilySummary>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub identities: Vec<IdentityReport>,
}

impl ReportDocument {
    pub fn new(systems: Vec<SystemReport>, input_errors: &[ParseError]) -> Self {
        let summary = summarize(&systems, input_errors);
        ReportDocument {
            schema_version: SCHEMA_VERSION,
            systems,
            summary,
            families: Vec::new(),
            identities: Vec::new(),
        }
    }

    pub fn failed(&self) -> bool {
        !self.summary.disagreements.is_empty()
            || !self.summary.errors.is_empty()
            || !self.summary.input_errors.is_empty()
            || self.families.iter().any(|f| f.failures > 0)
            || self.identities.iter().any(|i| !i.holds())
    }
}

fn count_label(c: Option<u8>) -> String {
    c.map_or_else(|| "n/a".to_string(), |n| n.to_string())
}

/// Classifies one record, optionally with the oracle and the full table.
pub fn analyze(record: &SystemRecord, note: Option<String>, opts: Options) -> SystemReport {
    let sys = record.system();
    let table = InvariantTable::compute(&sys);
    let mut report = SystemReport {
        id: record.id.clone(),
        coefficients: record.coefficients.clone(),
        note,
        classification: None,
        error: None,
        invariants: None,
        oracle: None,
        oracle_error: None,
        expected: record.expected.clone(),
        disagreements: Vec::new(),
    };
    match count_centers_with(&sys, &table) {
        Ok(c) => report.classification = Some(c),
        Err(e) => report.error = Some(e.to_string()),
    }
    if opts.invariants {
        report.invariants = Some(table);
    }
    if opts.oracle {
        match oracle_center_count(&sys) {
            Ok(v) => report.oracle = Some(v),
            Err(e) => report.oracle_error = Some(e.to_string()),
        }
        check_oracle(&mut report);
    }
    if let (Some(want), Some(got)) = (&record.expected, &report.classification) {
        if want.set_index != got.set_index || want.center_count != got.center_count {
            report.disagreements.push(format!(
                "expected {} with {} centers, classified {} with {}",
                want.set_index,
                count_label(want.center_count),
                got.set_index,
                count_label(got.center_count)
            ));
        }
    }
    report
}

fn check_oracle(report: &mut SystemReport) {
    let Some(c) = &report.classification else {
        return;
    };
    if let Some(o) = &report.oracle {
        if let Mf::Finite(m) = c.m_f {
            if o.total_multiplicity() != m as usize {
                report.disagreements.push(format!(
                    "oracle finds total multiplicity {}, partition row {} has {m}",
                    o.total_multiplicity(),
                    c.set_index
                ));
            }
        }
    }
    let Some(count) = c.center_count else { return };
    let oracle_count = match (&report.oracle, &report.oracle_error) {
        (Some(o), _) => count_label(o.center_count),
        (None, Some(e)) => e.clone(),
        _ => return,
    };
    if report.oracle.as_ref().map(|o| o.center_count) != Some(Some(count)) {
        report.disagreements.push(format!(
            "classifier counts {count} centers, oracle {oracle_count}"
        ));
    }
}

/// Analyzes records on `jobs` threads; output order follows input order.
pub fn analyze_all(
    records: &[(SystemRecord, Option<String>)],
    opts: Options,
    jobs: usize,
) -> Vec<SystemReport> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .expect("thread pool");
    pool.install(|| {
        records
            .par_iter()
            .map(|(r, note)| analyze(r, note.clone(), opts))
            .collect()
    })
}

fn summarize(systems: &[SystemReport], input_errors: &[ParseError]) -> Summary {
    let mut per_set: BTreeMap<usize, usize> = BTreeMap::new();
    let mut per_center_count = BTreeMap::new();
    let mut disagreements = Vec::new();
    let mut errors = Vec::new();
    for s in systems {
        if let Some(c) = &s.classification {
            *per_set.entry(c.set_index.number()).or_default() += 1;
            *per_center_count
                .entry(count_label(c.center_count))
                .or_default() += 1;
        }
        if let Some(e) = &s.error {
            errors.push(Disagreement {
                id: s.id.clone(),
                reason: e.clone(),
            });
        }
        for d in &s.disagreements {
            disagreements.push(Disagreement {
                id: s.id.clone(),
                reason: d.clone(),
            });
        }
    }
    Summary {
        systems: systems.len(),
        per_set: per_set
            .into_iter()
            .map(|(n, count)| SetCount {
                set_index: SetIndex::from_number(n).expect("row number"),
                count,
            })
            .collect(),
        per_center_count,
        disagreements,
        errors,
        input_errors: input_errors
            .iter()
            .map(|e| InputError {
                line: e.line,
                column: e.column,
                message: e.message.clone(),
            })
            .collect(),
    }
}

fn system_text(c: &[Rational; 12]) -> String {
    qcenter::QuadSystem::from_coeffs(c.clone()).to_string()
}

/// Multi-line description of one system.
pub fn render_system(s: &SystemReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}: {}", s.id, system_text(&s.coefficients));
    if let Some(note) = &s.note {
        let _ = writeln!(out, "  note          {note}");
    }
    if let Some(c) = &s.classification {
        let m_f = match c.m_f {
            Mf::Finite(n) => n.to_string(),
            Mf::Infinite => "infinite".to_string(),
        };
        let pattern = if c.pattern.is_empty() {
            "-"
        } else {
            c.pattern.as_str()
        };
        let _ = writeln!(out, "  set_index     {}", c.set_index);
        let _ = writeln!(out, "  m_f           {m_f}");
        let _ = writeln!(out, "  pattern       {pattern}");
        let _ = writeln!(out, "  center_count  {}", count_label(c.center_count));
        let _ = writeln!(out, "  fired_rule    {}", c.fired_rule);
        for d in &c.diagnostics {
            let _ = writeln!(out, "  diagnostic    {d}");
        }
    }
    if let Some(e) = &s.error {
        let _ = writeln!(out, "  error         {e}");
    }
    if let Some(o) = &s.oracle {
        let _ = writeln!(
            out,
            "  oracle        {} centers, {} finite points",
            count_label(o.center_count),
            o.points.len()
        );
        for p in &o.points {
            let coord = |v: &qcenter::oracle::Value| match &v.exact {
                Some(r) => qcenter::rational::display_rational(r),
                None if v.im == 0.0 => format!("{:.6}", v.re),
                None => format!("{:.6}{:+.6}i", v.re, v.im),
            };
            let _ = writeln!(
                out,
                "    ({}, {}) x{} {}{}",
                coord(&p.x),
                coord(&p.y),
                p.multiplicity,
                serde_json::to_value(p.kind)
                    .ok()
                    .and_then(|v| v.as_str().map(str::to_string))
                    .unwrap_or_default(),
                if p.center { " center" } else { "" }
            );
        }
    }
    if let Some(e) = &s.oracle_error {
        let _ = writeln!(out, "  oracle        {e}");
    }
    for d in &s.disagreements {
        let _ = writeln!(out, "  DISAGREEMENT  {d}");
    }
    if let Some(t) = &s.invariants {
        out.push_str(&render_invariants(t));
    }
    out
}

/// One line per system.
pub fn render_row(s: &SystemReport) -> String {
    let (set, pattern, count, rule) = match &s.classification {
        Some(c) => (
            c.set_index.to_string(),
            if c.pattern.is_empty() {
                "-".to_string()
            } else {
                c.pattern.clone()
            },
            count_label(c.center_count),
            c.fired_rule.clone(),
        ),
        None => (
            "error".into(),
            "-".into(),
            "-".into(),
            s.error.clone().unwrap_or_default(),
        ),
    };
    let oracle = match (&s.oracle, &s.oracle_error) {
        (Some(o), _) => format!("  oracle={}", count_label(o.center_count)),
        (None, Some(_)) => "  oracle=error".to_string(),
        _ => String::new(),
    };
    let flag = if s.disagreements.is_empty() {
        ""
    } else {
        "  DISAGREEMENT"
    };
    format!(
        "{:<16} {:<4} {:<14} centers={:<3} {}{oracle}{flag}",
        s.id, set, pattern, count, rule
    )
}

pub fn render_summary(doc: &ReportDocument) -> String {
    let s = &doc.summary;
    let mut out = String::new();
    let _ = writeln!(out, "systems: {}", s.systems);
    let sets: Vec<String> = s
        .per_set
        .iter()
        .map(|c| format!("{}={}", c.set_index, c.count))
        .collect();
    let _ = writeln!(
        out,
        "per set: {}",
        if sets.is_empty() {
            "-".to_string()
        } else {
            sets.join(" ")
        }
    );
    let counts: Vec<String> = s
        .per_center_count
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect();
    let _ = writeln!(
        out,
        "per center count: {}",
        if counts.is_empty() {
            "-".to_string()
        } else {
            counts.join(" ")
        }
    );
    if !doc.families.is_empty() {
        let _ = writeln!(
            out,
            "{:<14} {:>7} {:>8} {:>7} {:>5} {:>8}",
            "family", "systems", "compared", "agreed", "n/a", "failures"
        );
        for f in &doc.families {
            let _ = writeln!(
                out,
                "{:<14} {:>7} {:>8} {:>7} {:>5} {:>8}",
                f.family, f.systems, f.compared, f.agreed, f.not_applicable, f.failures
            );
        }
    }
    for i in &doc.identities {
        let status = if i.holds() { "holds" } else { "FAILS" };
        let _ = write!(
            out,
            "identity {:<13} {:<4} {status} (holds in {}/{} draws)",
            i.form,
            i.quantity,
            i.checked - i.failed,
            i.checked
        );
        if let Some(e) = &i.example {
            let _ = write!(out, ": {e}");
        }
        out.push('\n');
    }
    let _ = writeln!(out, "disagreements: {}", s.disagreements.len());
    for d in &s.disagreements {
        let _ = writeln!(out, "  {}: {}", d.id, d.reason);
    }
    if !s.errors.is_empty() {
        let _ = writeln!(out, "errors: {}", s.errors.len());
        for d in &s.errors {
            let _ = writeln!(out, "  {}: {}", d.id, d.reason);
        }
    }
    for e in &s.input_errors {
        let _ = writeln!(
            out,
            "input error at line {}, column {}: {}",
            e.line, e.column, e.message
        );
    }
    out
}

pub fn render_invariants(t: &InvariantTable) -> String {
    use qcenter::rational::display_rational as r;
    let mut out = String::new();
    for (i, a) in t.a.iter().enumerate() {
        let _ = writeln!(out, "  A{:<3} {}", i + 1, r(a));
    }
    let _ = writeln!(out, "  A27  {}", r(&t.a27));
    for (i, c) in t.cs.c.iter().enumerate() {
        let _ = writeln!(out, "  C{:<3} {}", i + 1, r(c));
    }
    let _ = writeln!(out, "  E1   {}", r(&t.cs.e1));
    let _ = writeln!(out, "  E2   {}", r(&t.cs.e2));
    let o = &t.origin;
    for (name, v) in [
        ("I1", &o.i1),
        ("I2", &o.i2),
        ("I3", &o.i3),
        ("I4", &o.i4),
        ("I5", &o.i5),
        ("I6", &o.i6),
        ("I13", &o.i13),
        ("I17", &o.i17),
        ("I20", &o.i20),
        ("J1", &o.j1),
        ("J2", &o.j2),
    ] {
        let _ = writeln!(out, "  {name:<4} {}", r(v));
    }
    let _ = writeln!(out, "  K1   {}", t.k1);
    let c = &t.comitants;
    let _ = writeln!(out, "  mu   {}", r(&c.mu));
    let _ = writeln!(out, "  D    {}", r(&c.d));
    for (name, f) in [
        ("H", &c.h),
        ("G", &c.g),
        ("F", &c.f),
        ("V", &c.v),
        ("P", &c.p),
        ("R", &c.r),
        ("S", &c.s),
        ("T", &c.t),
        ("U", &c.u),
        ("S~", &c.s_tilde),
        ("N~", &c.n_tilde),
    ] {
        let _ = writeln!(out, "  {name:<4} {f}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::input::parse_tuple;

    fn record(text: &str) -> SystemRecord {
        SystemRecord {
            id: "t".into(),
            coefficients: parse_tuple(text, 1).unwrap(),
            expected: None,
        }
    }

    #[test]
    fn json_round_trip() {
        let records = vec![
            (record("0,0,1,0,0,-1, 0,-1,0,1,0,0"), None),
            (record("0,0,0,0,0,0,0,0,0,0,0,0"), Some("zero".to_string())),
            (record("1/2,0,0,-2,4/3,-2, 2,0,0,-9/2,4,-2/3"), None),
        ];
        let doc = ReportDocument::new(
            analyze_all(
                &records,
                Options {
                    oracle: true,
                    invariants: true,
                },
                1,
            ),
            &[],
        );
        let text = serde_json::to_string(&doc).unwrap();
        let back: ReportDocument = serde_json::from_str(&text).unwrap();
        assert_eq!(back, doc);
    }

    #[test]
    fn expectation_mismatch_is_a_disagreement() {
        let mut r = record("0,0,1,0,0,-1, 0,-1,0,1,0,0");
        r.expected = Some(Expected {
            set_index: SetIndex::M1,
            center_count: Some(1),
        });
        let s = analyze(&r, None, Options::default());
        assert_eq!(s.disagreements.len(), 1);
        assert!(ReportDocument::new(vec![s], &[]).failed());
    }

    #[test]
    fn summary_counts() {
        let records = vec![
            (record("0,0,1,0,0,-1, 0,-1,0,1,0,0"), None),
            (record("0,0,1,1,0,0, 0,-1,0,0,0,0"), None),
        ];
        let doc = ReportDocument::new(
            analyze_all(
                &records,
                Options {
                    oracle: true,
                    invariants: false,
                },
                2,
            ),
            &[],
        );
        assert_eq!(doc.summary.per_center_count.get("1"), Some(&1));
        assert_eq!(doc.summary.per_center_count.get("2"), Some(&1));
        assert!(!doc.failed());
    }
}
