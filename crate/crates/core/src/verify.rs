//! Differential verification suites. Each suite compares an identity or
//! formula against the brute-force oracle over a seeded corpus and returns a
//! [`VerificationReport`] with failures in corpus order.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::closed_form::{
    cycle_closed_eval, forest_at_minus_one, path_at_minus_one, path_closed_eval, star_tdp, RootQuad,
};
use crate::corpus::{forest_corpus, params, standard_corpus, CorpusEntry, DEFAULT_SEED};
use crate::error::{Result, TdpError};
use crate::extremal::supporting_identity_with;
use crate::generate::{cycle, path, union};
use crate::graph::Graph;
use crate::oracle::{Condition, Oracle};
use crate::poly::IntPoly;
use crate::reduction::{cycle_tdp, edge_reduction_rhs, path_tdp, vertex_reduction_rhs};
use crate::report::{Evidence, Failure, Params, VerificationReport};

/// Sample points for the closed-form comparison.
pub const CLOSED_FORM_POINTS: [f64; 6] = [1.0, 2.0, -2.0, 0.5, -1.0, -0.5];
/// Relative tolerance `|approx - exact| <= CLOSED_FORM_TOL * (1 + |exact|)`.
pub const CLOSED_FORM_TOL: f64 = 1e-6;

pub const STAR_MINUS_ONE_MAX: usize = 20;
pub const PATH_MINUS_ONE_MAX: usize = 60;

/// Suites addressable from the command line, by their command-line names.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VerifySuite {
    /// Vertex reduction on every vertex of every corpus graph.
    VertexReduction,
    /// Edge reduction on every edge of every corpus graph.
    EdgeReduction,
    /// Conditioned path recurrence on the last vertex.
    PathEndpoint,
    /// Base polynomials, isolated vertices, supporting vertices, unions.
    BaseFacts,
    Recurrence,
    ClosedForm,
    MinusOne,
}

impl VerifySuite {
    pub const ALL: [VerifySuite; 7] = [
        VerifySuite::VertexReduction,
        VerifySuite::EdgeReduction,
        VerifySuite::PathEndpoint,
        VerifySuite::BaseFacts,
        VerifySuite::Recurrence,
        VerifySuite::ClosedForm,
        VerifySuite::MinusOne,
    ];

    pub fn name(self) -> &'static str {
        match self {
            VerifySuite::VertexReduction => "theorem1",
            VerifySuite::EdgeReduction => "theorem3",
            VerifySuite::PathEndpoint => "claim1",
            VerifySuite::BaseFacts => "prop1",
            VerifySuite::Recurrence => "recurrence",
            VerifySuite::ClosedForm => "closedform",
            VerifySuite::MinusOne => "minus-one",
        }
    }

    /// Default `(n_max, trials)` when not given.
    pub fn defaults(self) -> (usize, usize) {
        match self {
            VerifySuite::VertexReduction | VerifySuite::EdgeReduction | VerifySuite::BaseFacts => {
                (10, 100)
            }
            VerifySuite::PathEndpoint => (14, 0),
            VerifySuite::Recurrence => (18, 0),
            VerifySuite::ClosedForm => (30, 0),
            VerifySuite::MinusOne => (16, 500),
        }
    }
}

impl fmt::Display for VerifySuite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for VerifySuite {
    type Err = TdpError;
    fn from_str(s: &str) -> Result<Self> {
        VerifySuite::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| TdpError::domain(format!("unknown verification suite '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyParams {
    pub n_max: Option<usize>,
    pub trials: Option<usize>,
    pub seed: u64,
}

impl Default for VerifyParams {
    fn default() -> Self {
        VerifyParams {
            n_max: None,
            trials: None,
            seed: DEFAULT_SEED,
        }
    }
}

/// Runs one suite with its corpus built from `p`.
pub fn verify_identity(suite: VerifySuite, p: &VerifyParams) -> Result<VerificationReport> {
    let (dn, dt) = suite.defaults();
    let n_max = p.n_max.unwrap_or(dn);
    let trials = p.trials.unwrap_or(dt);
    let header = params(&[
        ("n_max", n_max.to_string()),
        ("trials", trials.to_string()),
        ("seed", p.seed.to_string()),
    ]);
    match suite {
        VerifySuite::VertexReduction => {
            verify_vertex_reduction(&standard_corpus(n_max, trials, p.seed)?, header)
        }
        VerifySuite::EdgeReduction => {
            verify_edge_reduction(&standard_corpus(n_max, trials, p.seed)?, header)
        }
        VerifySuite::PathEndpoint => verify_path_endpoint(n_max),
        VerifySuite::BaseFacts => {
            verify_base_facts(&standard_corpus(n_max, trials, p.seed)?, header)
        }
        VerifySuite::Recurrence => verify_recurrences(n_max),
        VerifySuite::ClosedForm => verify_closed_forms(n_max),
        VerifySuite::MinusOne => verify_minus_one(&forest_corpus(trials, n_max, p.seed)?, header),
    }
}

fn failure(
    g: Option<&Graph>,
    param: String,
    lhs: impl Into<Evidence>,
    rhs: impl Into<Evidence>,
) -> Failure {
    Failure {
        graph: g.map(Graph::to_edge_list),
        param,
        lhs: lhs.into(),
        rhs: rhs.into(),
    }
}

fn value(v: impl ToString) -> Evidence {
    Evidence::Value(v.to_string())
}

/// Runs `check` on each corpus entry in parallel; returns the number of
/// instances and the failures, both in corpus order.
fn fan_out<F>(corpus: &[CorpusEntry], check: F) -> Result<(usize, Vec<Failure>)>
where
    F: Fn(&CorpusEntry) -> Result<(usize, Vec<Failure>)> + Sync + Send,
{
    let parts = corpus.par_iter().map(check).collect::<Result<Vec<_>>>()?;
    let instances = parts.iter().map(|p| p.0).sum();
    Ok((instances, parts.into_iter().flat_map(|p| p.1).collect()))
}

fn connected(e: &CorpusEntry) -> bool {
    !e.graph.is_empty() && e.graph.is_connected()
}

/// `D_t(G)` against the vertex reduction at every vertex of every connected
/// corpus graph.
pub fn verify_vertex_reduction(
    corpus: &[CorpusEntry],
    header: Params,
) -> Result<VerificationReport> {
    let oracle = Oracle::default();
    let (instances, failures) = fan_out(corpus, |e| {
        if !connected(e) {
            return Ok((0, vec![]));
        }
        let lhs = oracle.tdp(&e.graph)?;
        let mut out = Vec::new();
        for u in e.graph.vertices() {
            let rhs = vertex_reduction_rhs(&e.graph, u)?;
            if rhs != lhs {
                out.push(failure(
                    Some(&e.graph),
                    format!("{} u={u}", e.id),
                    lhs.clone(),
                    rhs,
                ));
            }
        }
        Ok((e.graph.order(), out))
    })?;
    Ok(VerificationReport::new(
        VerifySuite::VertexReduction.name(),
        header,
        instances,
        failures,
    ))
}

/// `D_t(G)` against the edge reduction at every edge `uv` (`u < v`) of every
/// connected corpus graph.
pub fn verify_edge_reduction(corpus: &[CorpusEntry], header: Params) -> Result<VerificationReport> {
    let oracle = Oracle::default();
    let (instances, failures) = fan_out(corpus, |e| {
        if !connected(e) {
            return Ok((0, vec![]));
        }
        let lhs = oracle.tdp(&e.graph)?;
        let mut out = Vec::new();
        for (u, v) in e.graph.edges() {
            let rhs = edge_reduction_rhs(&e.graph, u, v)?;
            if rhs != lhs {
                out.push(failure(
                    Some(&e.graph),
                    format!("{} e={u}-{v}", e.id),
                    lhs.clone(),
                    rhs,
                ));
            }
        }
        Ok((e.graph.edge_count(), out))
    })?;
    Ok(VerificationReport::new(
        VerifySuite::EdgeReduction.name(),
        header,
        instances,
        failures,
    ))
}

/// Both sides of the conditioned path recurrence on `P_n` with vertices
/// `0..n`, conditioned on the last vertex being in the set.
pub fn path_endpoint_sides(n: usize) -> Result<(IntPoly, IntPoly)> {
    if n < 5 {
        return Err(TdpError::domain(format!(
            "conditioned path recurrence needs n >= 5, got {n}"
        )));
    }
    let oracle = Oracle::default();
    let end = |k: usize| oracle.tdp_conditioned(&path(k), &Condition::member(k - 1));
    let lhs = end(n)?;
    let rhs = end(n - 1)?.shift(1) + end(n - 3)?.shift(2) + end(n - 4)?.shift(2);
    Ok((lhs, rhs))
}

pub fn verify_path_endpoint(n_max: usize) -> Result<VerificationReport> {
    if n_max < 5 {
        return Err(TdpError::domain(format!(
            "conditioned path recurrence needs n_max >= 5, got {n_max}"
        )));
    }
    let rows = (5..=n_max)
        .into_par_iter()
        .map(|n| Ok((n, path_endpoint_sides(n)?)))
        .collect::<Result<Vec<_>>>()?;
    let failures = rows
        .into_iter()
        .filter(|(_, (l, r))| l != r)
        .map(|(n, (l, r))| failure(Some(&path(n)), format!("n={n}"), l, r))
        .collect();
    Ok(VerificationReport::new(
        VerifySuite::PathEndpoint.name(),
        params(&[("n_min", "5".into()), ("n_max", n_max.to_string())]),
        n_max - 4,
        failures,
    ))
}

/// Base polynomials of `P_1..P_4` and `C_3..C_6`.
pub fn base_polynomials() -> Vec<(String, Graph, IntPoly)> {
    let p = IntPoly::from_i64s;
    vec![
        ("P1".into(), path(1), IntPoly::zero()),
        ("P2".into(), path(2), p(&[0, 0, 1])),
        ("P3".into(), path(3), p(&[0, 0, 2, 1])),
        ("P4".into(), path(4), p(&[0, 0, 1, 2, 1])),
        ("C3".into(), cycle(3), p(&[0, 0, 3, 1])),
        ("C4".into(), cycle(4), p(&[0, 0, 4, 4, 1])),
        ("C5".into(), cycle(5), p(&[0, 0, 0, 5, 5, 1])),
        ("C6".into(), cycle(6), p(&[0, 0, 0, 0, 9, 6, 1])),
    ]
}

/// Base polynomials; an isolated vertex forces `D_t = 0`; the supporting
/// vertex count equals `n - d_t(G, n-1)`; `D_t` is multiplicative over
/// disjoint unions of consecutive corpus graphs.
pub fn verify_base_facts(corpus: &[CorpusEntry], header: Params) -> Result<VerificationReport> {
    let oracle = Oracle::default();
    let mut failures = Vec::new();
    let mut instances = 0;
    for (id, g, expected) in base_polynomials() {
        instances += 1;
        let got = oracle.tdp(&g)?;
        if got != expected {
            failures.push(failure(Some(&g), format!("base {id}"), got, expected));
        }
    }
    let (n, f) = fan_out(corpus, |e| {
        let mut out = Vec::new();
        let with_isolated = union(&e.graph, &Graph::edgeless(1));
        let zero = oracle.tdp(&with_isolated)?;
        if !zero.is_zero() {
            out.push(failure(
                Some(&with_isolated),
                format!("isolated {}", e.id),
                zero,
                IntPoly::zero(),
            ));
        }
        let checkable = !e.graph.is_empty() && e.graph.classify_vertices().isolated.is_empty();
        if checkable && !supporting_identity_with(&oracle, &e.graph)? {
            let d = oracle.tdp(&e.graph)?.coeff(e.graph.order() - 1);
            let r = e.graph.classify_vertices().supporting.len();
            out.push(failure(
                Some(&e.graph),
                format!("supporting {}", e.id),
                value(r),
                value(BigInt::from(e.graph.order()) - d),
            ));
        }
        Ok((2, out))
    })?;
    instances += n;
    failures.extend(f);
    let budget = oracle.budget();
    let pairs: Vec<_> = corpus
        .windows(2)
        .filter(|w| w[0].graph.order() + w[1].graph.order() <= budget)
        .collect();
    let parts = pairs
        .par_iter()
        .map(|w| {
            let (a, b) = (&w[0].graph, &w[1].graph);
            let joint = union(a, b);
            let lhs = oracle.tdp(&joint)?;
            let rhs = oracle.tdp(a)? * oracle.tdp(b)?;
            Ok((lhs != rhs).then(|| {
                failure(
                    Some(&joint),
                    format!("union {}+{}", w[0].id, w[1].id),
                    lhs,
                    rhs,
                )
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    instances += pairs.len();
    failures.extend(parts.into_iter().flatten());
    Ok(VerificationReport::new(
        VerifySuite::BaseFacts.name(),
        header,
        instances,
        failures,
    ))
}

/// Path and cycle recurrences against the oracle, and `γ_t(C_n)` against
/// both the minimum degree of the recurrence polynomial and `3γ_t <= 2n`.
pub fn verify_recurrences(n_max: usize) -> Result<VerificationReport> {
    let oracle = Oracle::default();
    let header = params(&[("n_max", n_max.to_string())]);
    let paths = (1..=n_max)
        .into_par_iter()
        .map(|n| {
            let (rec, brute) = (path_tdp(n)?, oracle.tdp(&path(n))?);
            Ok((rec != brute).then(|| failure(Some(&path(n)), format!("path n={n}"), rec, brute)))
        })
        .collect::<Result<Vec<_>>>()?;
    let cycles = (3..=n_max.max(2))
        .into_par_iter()
        .map(|n| {
            let g = cycle(n);
            let (rec, brute) = (cycle_tdp(n)?, oracle.tdp(&g)?);
            let mut out = Vec::new();
            if rec != brute {
                out.push(failure(
                    Some(&g),
                    format!("cycle n={n}"),
                    rec.clone(),
                    brute,
                ));
            }
            let gamma = oracle.gamma_t(&g)?;
            let min = rec.min_degree();
            if gamma != min || gamma.is_none_or(|k| 3 * k > 2 * n) {
                out.push(failure(
                    Some(&g),
                    format!("gamma_t n={n}"),
                    value(format!("{gamma:?}")),
                    value(format!("{min:?}")),
                ));
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    let instances = paths.len() + 2 * cycles.len();
    let mut failures: Vec<_> = paths.into_iter().flatten().collect();
    failures.extend(cycles.into_iter().flatten());
    Ok(VerificationReport::new(
        VerifySuite::Recurrence.name(),
        header,
        instances,
        failures,
    ))
}

fn close(approx: Complex64, exact: Complex64) -> bool {
    (approx - exact).norm() <= CLOSED_FORM_TOL * (1.0 + exact.norm())
}

/// Closed forms and root-weight sums for paths (`1..=n_max`) and cycles
/// (`3..=n_max`) at [`CLOSED_FORM_POINTS`], and the `x = -1` path table for
/// `n <= max(2 n_max, 60)`.
pub fn verify_closed_forms(n_max: usize) -> Result<VerificationReport> {
    let mut failures = Vec::new();
    let mut instances = 0;
    for x in CLOSED_FORM_POINTS {
        let z = Complex64::new(x, 0.0);
        let (pq, cq) = (RootQuad::path(z)?, RootQuad::cycle(z)?);
        instances += 1;
        if !pq.residuals_ok() {
            failures.push(failure(
                None,
                format!("roots x={x}"),
                value(format!("{:?}", pq.residuals())),
                value("0"),
            ));
        }
        for n in 1..=n_max {
            let exact = path_tdp(n)?.eval_complex(z);
            for (route, approx) in [
                ("path", path_closed_eval(n, z)?),
                ("path weights", pq.evaluate(n)),
            ] {
                instances += 1;
                if !close(approx, exact) {
                    failures.push(failure(
                        Some(&path(n)),
                        format!("{route} n={n} x={x}"),
                        value(approx),
                        value(exact),
                    ));
                }
            }
        }
        for n in 3..=n_max {
            let exact = cycle_tdp(n)?.eval_complex(z);
            for (route, approx) in [
                ("cycle", cycle_closed_eval(n, z)?),
                ("cycle weights", cq.evaluate(n)),
            ] {
                instances += 1;
                if !close(approx, exact) {
                    failures.push(failure(
                        Some(&cycle(n)),
                        format!("{route} n={n} x={x}"),
                        value(approx),
                        value(exact),
                    ));
                }
            }
        }
    }
    let minus_one_max = (2 * n_max).max(PATH_MINUS_ONE_MAX);
    for n in 1..=minus_one_max {
        instances += 1;
        let exact = path_tdp(n)?.eval_int(&BigInt::from(-1));
        let table = path_at_minus_one(n)?;
        if exact != BigInt::from(table) {
            failures.push(failure(
                Some(&path(n)),
                format!("path at -1 n={n}"),
                value(table),
                value(exact),
            ));
        }
    }
    Ok(VerificationReport::new(
        VerifySuite::ClosedForm.name(),
        params(&[
            ("n_max", n_max.to_string()),
            ("minus_one_n_max", minus_one_max.to_string()),
        ]),
        instances,
        failures,
    ))
}

/// `D_t(S_n, -1) = 1` for `2 <= n <= 20`, the `x = -1` path table for
/// `n <= 60`, and `D_t(F, -1) ∈ {0, 1}` for each corpus forest, with the
/// forest value also checked against the oracle polynomial.
pub fn verify_minus_one(forests: &[CorpusEntry], header: Params) -> Result<VerificationReport> {
    let mut failures = Vec::new();
    let mut instances = 0;
    let minus_one = BigInt::from(-1);
    for n in 2..=STAR_MINUS_ONE_MAX {
        instances += 1;
        let v = star_tdp(n)?.eval_int(&minus_one);
        if v != BigInt::from(1) {
            failures.push(failure(
                Some(&crate::generate::star(n)),
                format!("star n={n}"),
                value(v),
                value(1),
            ));
        }
    }
    for n in 1..=PATH_MINUS_ONE_MAX {
        instances += 1;
        let exact = path_tdp(n)?.eval_int(&minus_one);
        let table = path_at_minus_one(n)?;
        if exact != BigInt::from(table) {
            failures.push(failure(
                Some(&path(n)),
                format!("path n={n}"),
                value(table),
                value(exact),
            ));
        }
    }
    let oracle = Oracle::default();
    let (n, f) = fan_out(forests, |e| {
        let exact = oracle.tdp(&e.graph)?.eval_int(&minus_one);
        let out = match forest_at_minus_one(&e.graph) {
            Ok(v) if BigInt::from(v) == exact => vec![],
            Ok(v) => vec![failure(
                Some(&e.graph),
                format!("forest {}", e.id),
                value(v),
                value(exact),
            )],
            Err(TdpError::TheoremViolation(_)) => {
                vec![failure(
                    Some(&e.graph),
                    format!("forest {}", e.id),
                    value(&exact),
                    value("0 or 1"),
                )]
            }
            Err(err) => return Err(err),
        };
        Ok((1, out))
    })?;
    instances += n;
    failures.extend(f);
    Ok(VerificationReport::new(
        VerifySuite::MinusOne.name(),
        header,
        instances,
        failures,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::fixed_corpus;
    use crate::generate::cycle;

    fn small_corpus() -> Vec<CorpusEntry> {
        vec![
            CorpusEntry::new("P2", path(2)),
            CorpusEntry::new("P3", path(3)),
            CorpusEntry::new("P4", path(4)),
            CorpusEntry::new("C3", cycle(3)),
            CorpusEntry::new("C4", cycle(4)),
        ]
    }

    #[test]
    fn vertex_reduction_small_corpus() {
        let rep = verify_vertex_reduction(&small_corpus(), Params::new()).unwrap();
        assert_eq!(rep.instances, 16);
        assert!(rep.passed);
    }

    #[test]
    fn edge_reduction_on_triangle() {
        let rep =
            verify_edge_reduction(&[CorpusEntry::new("C3", cycle(3))], Params::new()).unwrap();
        assert_eq!(rep.instances, 3);
        assert!(rep.passed);
    }

    #[test]
    fn edge_reduction_failures_are_reported_in_order() {
        let rep = verify_edge_reduction(&fixed_corpus(), Params::new()).unwrap();
        assert!(!rep.passed);
        let first = &rep.failures[0];
        assert!(first.param.starts_with("P4 "), "{}", first.param);
        let again = verify_edge_reduction(&fixed_corpus(), Params::new()).unwrap();
        assert_eq!(rep, again);
    }

    #[test]
    fn path_endpoint_identity() {
        let (l, r) = path_endpoint_sides(5).unwrap();
        assert_eq!(l, r);
        assert!(path_endpoint_sides(4).is_err());
        let rep = verify_path_endpoint(12).unwrap();
        assert_eq!(rep.instances, 8);
        assert!(rep.passed);
    }

    #[test]
    fn base_facts_pass() {
        let rep = verify_base_facts(&standard_corpus(8, 20, 1).unwrap(), Params::new()).unwrap();
        assert!(rep.passed, "{}", rep.to_text());
    }

    #[test]
    fn recurrence_and_closed_form_suites_pass() {
        assert!(verify_recurrences(14).unwrap().passed);
        let rep = verify_closed_forms(20).unwrap();
        assert!(rep.passed, "{}", rep.to_text());
    }

    #[test]
    fn minus_one_suite_passes() {
        let rep = verify_minus_one(&forest_corpus(40, 12, 2).unwrap(), Params::new()).unwrap();
        assert!(rep.passed);
        assert_eq!(rep.instances, 19 + 60 + 40);
    }

    #[test]
    fn dispatch_is_deterministic() {
        let p = VerifyParams {
            n_max: Some(7),
            trials: Some(10),
            seed: 3,
        };
        let a = verify_identity(VerifySuite::VertexReduction, &p).unwrap();
        assert_eq!(
            a,
            verify_identity(VerifySuite::VertexReduction, &p).unwrap()
        );
        assert_eq!(a.params["seed"], "3");
        for s in VerifySuite::ALL {
            assert_eq!(s.name().parse::<VerifySuite>().unwrap(), s);
        }
    }
}
