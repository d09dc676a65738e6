//! Reports produced by the verification suites and extremal scans.
//!
//! Exact integers are serialized as decimal strings in both JSON and CSV.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Result, TdpError};
use crate::poly::IntPoly;

/// Corpus parameters (sizes, seeds) recorded with every report.
pub type Params = BTreeMap<String, String>;

/// One side of a compared identity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Evidence {
    Poly(IntPoly),
    Value(String),
}

impl From<IntPoly> for Evidence {
    fn from(p: IntPoly) -> Self {
        Evidence::Poly(p)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    /// Edge list of the offending graph, when there is one.
    pub graph: Option<String>,
    pub param: String,
    pub lhs: Evidence,
    pub rhs: Evidence,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub kind: String,
    pub params: Params,
    pub instances: usize,
    pub passed: bool,
    pub failures: Vec<Failure>,
}

impl VerificationReport {
    pub fn new(kind: &str, params: Params, instances: usize, failures: Vec<Failure>) -> Self {
        VerificationReport {
            kind: kind.to_string(),
            params,
            instances,
            passed: failures.is_empty(),
            failures,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{}: {} instances, {} failures\n",
            self.kind,
            self.instances,
            self.failures.len()
        );
        for f in &self.failures {
            let graph = f.graph.as_deref().unwrap_or("-");
            out += &format!(
                "  {} [{}]: lhs {} rhs {}\n",
                graph.trim_end().replace('\n', "; "),
                f.param,
                evidence_text(&f.lhs),
                evidence_text(&f.rhs)
            );
        }
        out
    }
}

fn evidence_text(e: &Evidence) -> String {
    match e {
        Evidence::Poly(p) => p.to_string(),
        Evidence::Value(v) => v.clone(),
    }
}

mod decimal_vec {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|c| c.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| s.parse().map_err(serde::de::Error::custom))
            .collect()
    }
}

/// One instance (or one class of instances, see `count`) of an extremal scan.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanRow {
    pub id: String,
    pub n: usize,
    pub edges: String,
    /// Number of labeled graphs this row stands for.
    pub count: u64,
    /// Number of supporting vertices.
    pub r: usize,
    pub gamma_t: Option<usize>,
    #[serde(with = "decimal_vec")]
    pub coeffs: Vec<BigInt>,
    #[serde(with = "decimal_vec")]
    pub bound: Vec<BigInt>,
    #[serde(with = "decimal_vec")]
    pub observed: Vec<BigInt>,
    pub class: String,
    pub holds: bool,
    pub equality: bool,
    pub identity: Option<bool>,
}

impl ScanRow {
    pub fn violated(&self) -> bool {
        !self.holds || self.identity == Some(false)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanSummary {
    pub rows: usize,
    pub instances: u64,
    pub holds: u64,
    pub equality: u64,
    pub violations: u64,
    pub findings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanReport {
    pub suite: String,
    pub params: Params,
    pub rows: Vec<ScanRow>,
    pub summary: ScanSummary,
}

impl ScanReport {
    /// Builds the summary by counting the rows, weighted by `count`.
    pub fn new(suite: &str, params: Params, rows: Vec<ScanRow>, findings: Vec<String>) -> Self {
        let weighted = |f: &dyn Fn(&ScanRow) -> bool| -> u64 {
            rows.iter().filter(|r| f(r)).map(|r| r.count).sum()
        };
        let summary = ScanSummary {
            rows: rows.len(),
            instances: weighted(&|_| true),
            holds: weighted(&|r| r.holds),
            equality: weighted(&|r| r.equality),
            violations: weighted(&ScanRow::violated),
            findings,
        };
        ScanReport {
            suite: suite.to_string(),
            params,
            rows,
            summary,
        }
    }

    pub fn passed(&self) -> bool {
        self.summary.violations == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Header plus one line per row. Coefficient lists are `;`-separated.
    pub fn to_csv(&self) -> Result<String> {
        #[derive(Serialize)]
        struct Flat<'a> {
            id: &'a str,
            n: usize,
            edges: &'a str,
            count: u64,
            r: usize,
            gamma_t: Option<usize>,
            coeffs: String,
            bound: String,
            observed: String,
            class: &'a str,
            holds: bool,
            equality: bool,
            identity: Option<bool>,
        }
        let join = |v: &[BigInt]| {
            v.iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(";")
        };
        let mut w = csv::Writer::from_writer(Vec::new());
        if self.rows.is_empty() {
            w.write_record([
                "id", "n", "edges", "count", "r", "gamma_t", "coeffs", "bound", "observed",
                "class", "holds", "equality", "identity",
            ])
            .map_err(csv_error)?;
        }
        for row in &self.rows {
            w.serialize(Flat {
                id: &row.id,
                n: row.n,
                edges: &row.edges,
                count: row.count,
                r: row.r,
                gamma_t: row.gamma_t,
                coeffs: join(&row.coeffs),
                bound: join(&row.bound),
                observed: join(&row.observed),
                class: &row.class,
                holds: row.holds,
                equality: row.equality,
                identity: row.identity,
            })
            .map_err(csv_error)?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| TdpError::Inconsistency(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| TdpError::Inconsistency(e.to_string()))
    }

    pub fn to_text(&self) -> String {
        let s = &self.summary;
        let mut out = format!(
            "{}: {} instances in {} rows, {} hold, {} at equality, {} violations\n",
            self.suite, s.instances, s.rows, s.holds, s.equality, s.violations
        );
        for f in &s.findings {
            out += &format!("  finding: {f}\n");
        }
        out
    }
}

fn csv_error(e: csv::Error) -> TdpError {
    TdpError::Inconsistency(format!("csv output: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(id: &str, holds: bool) -> ScanRow {
        ScanRow {
            id: id.into(),
            n: 3,
            edges: "0-1 1-2".into(),
            count: 2,
            r: 1,
            gamma_t: Some(2),
            coeffs: vec![0.into(), 0.into(), 1.into(), 1.into()],
            bound: vec![2.into()],
            observed: vec![],
            class: "tree".into(),
            holds,
            equality: false,
            identity: None,
        }
    }

    #[test]
    fn verification_pass_iff_no_failures() {
        let ok = VerificationReport::new("k", Params::new(), 3, vec![]);
        assert!(ok.passed);
        let bad = VerificationReport::new(
            "k",
            Params::new(),
            3,
            vec![Failure {
                graph: Some("n 2\n0 1\n".into()),
                param: "u=0".into(),
                lhs: IntPoly::from_i64s(&[0, 0, 1]).into(),
                rhs: Evidence::Value("2".into()),
            }],
        );
        assert!(!bad.passed);
        let json = bad.to_json();
        assert!(json.contains(r#""coeffs": ["#));
        let back: VerificationReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, bad);
    }

    #[test]
    fn scan_summary_counts_weighted_rows() {
        let rep = ScanReport::new(
            "s",
            Params::new(),
            vec![row("a", true), row("b", false)],
            vec![],
        );
        assert_eq!(rep.summary.instances, 4);
        assert_eq!(rep.summary.holds, 2);
        assert_eq!(rep.summary.violations, 2);
        assert!(!rep.passed());
    }

    #[test]
    fn csv_has_header_and_one_line_per_row() {
        let rep = ScanReport::new(
            "s",
            Params::new(),
            vec![row("a", true), row("b", true)],
            vec![],
        );
        let csv = rep.to_csv().unwrap();
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[0].starts_with("id,n,edges,count,r,gamma_t,coeffs"));
        assert_eq!(lines[1], "a,3,0-1 1-2,2,1,2,0;0;1;1,2,,tree,true,false,");
        let empty = ScanReport::new("s", Params::new(), vec![], vec![]);
        assert_eq!(empty.to_csv().unwrap().lines().count(), 1);
    }

    #[test]
    fn scan_json_round_trips_with_string_integers() {
        let rep = ScanReport::new("s", Params::new(), vec![row("a", true)], vec!["f".into()]);
        let json = rep.to_json();
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(
            value["rows"][0]["coeffs"],
            serde_json::json!(["0", "0", "1", "1"])
        );
        let back: ScanReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, rep);
    }
}
