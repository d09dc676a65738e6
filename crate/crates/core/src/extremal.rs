//! Coefficient bounds for trees, the degree-2 lower bound with its exact
//! pair-counting identity, bounds on `γ_t`, and the scans that collect them.
//!
//! Every row's `holds`, `equality` and `identity` flags can be recomputed from
//! its numeric fields with [`ScanSuite::recheck`].

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::corpus::{params, standard_corpus, two_corona_corpus, CorpusEntry};
use crate::error::{Result, TdpError};
use crate::generate::{all_labeled_trees, random_tree};
use crate::graph::Graph;
use crate::oracle::Oracle;
use crate::poly::IntPoly;
use crate::report::{Params, ScanReport, ScanRow};

pub const MINIMAL_TREE_MIN: usize = 4;
pub const MINIMAL_TREE_MAX: usize = 8;

const TREE_CHUNK: usize = 8192;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScanSuite {
    TreeBound,
    MinimalTree,
    Degree2,
    GammaBounds,
}

impl ScanSuite {
    pub const ALL: [ScanSuite; 4] = [
        ScanSuite::TreeBound,
        ScanSuite::MinimalTree,
        ScanSuite::Degree2,
        ScanSuite::GammaBounds,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ScanSuite::TreeBound => "tree-bound",
            ScanSuite::MinimalTree => "minimal-tree",
            ScanSuite::Degree2 => "degree2",
            ScanSuite::GammaBounds => "gamma-bounds",
        }
    }

    /// Recomputes `(holds, equality, identity)` from a row's own fields.
    pub fn recheck(self, row: &ScanRow) -> (bool, bool, Option<bool>) {
        let from2 = |v: &[BigInt]| v.iter().skip(2).cloned().collect::<Vec<_>>();
        match self {
            ScanSuite::TreeBound => {
                let c = padded(&row.coeffs, row.n + 1);
                let b = padded(&row.bound, row.n + 1);
                let below = from2(&c).iter().zip(from2(&b).iter()).all(|(x, y)| x <= y);
                let equality = from2(&c) == from2(&b);
                let count_ok = row.observed.len() == 2 && row.observed[0] <= row.observed[1];
                let star = row.class == "star";
                (below && count_ok && equality == star, equality, None)
            }
            ScanSuite::MinimalTree => {
                let c = padded(&row.coeffs, row.n + 1);
                let b = padded(&row.bound, row.n + 1);
                let above = from2(&c).iter().zip(from2(&b).iter()).all(|(x, y)| x >= y);
                (above, from2(&c) == from2(&b), None)
            }
            ScanSuite::Degree2 => {
                let (d2, l, d) = (&row.observed[0], &row.observed[1], &row.observed[2]);
                let bound = &row.bound[0];
                let base = pair_budget(row.n, row.r);
                let identity = *d == &base - l && padded(&row.coeffs, row.n + 1)[row.n - 2] == *d;
                (d2 >= bound, d2 == bound, Some(identity))
            }
            ScanSuite::GammaBounds => {
                let Some(g) = row.gamma_t else {
                    return (false, false, None);
                };
                let equality = 3 * g == 2 * row.n;
                let classified = ["C3", "C6", "2-corona"].contains(&row.class.as_str());
                (
                    g >= 2 && 3 * g <= 2 * row.n && (!equality || classified),
                    equality,
                    None,
                )
            }
        }
    }
}

impl fmt::Display for ScanSuite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScanSuite {
    type Err = TdpError;
    fn from_str(s: &str) -> Result<Self> {
        ScanSuite::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| TdpError::domain(format!("unknown scan suite '{s}'")))
    }
}

fn padded(v: &[BigInt], len: usize) -> Vec<BigInt> {
    let mut out = v.to_vec();
    out.resize(len.max(v.len()), BigInt::zero());
    out
}

fn big_binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        BigInt::zero()
    } else {
        binomial(BigInt::from(n), BigInt::from(k))
    }
}

/// `C(n,2) - C(r,2) - r(n-r)`
fn pair_budget(n: usize, r: usize) -> BigInt {
    big_binomial(n, 2) - big_binomial(r, 2) - BigInt::from(r * (n - r))
}

fn require_connected(g: &Graph, what: &str) -> Result<()> {
    if g.is_empty() || !g.is_connected() {
        return Err(TdpError::domain(format!(
            "{what} needs a nonempty connected graph"
        )));
    }
    Ok(())
}

fn tree_class(t: &Graph) -> &'static str {
    if t.is_star() {
        "star"
    } else if t.is_path() {
        "path"
    } else {
        "tree"
    }
}

/// Number of supporting vertices equals `n - d_t(G, n-1)`.
pub fn supporting_identity(g: &Graph) -> Result<bool> {
    supporting_identity_with(&Oracle::default(), g)
}

pub fn supporting_identity_with(oracle: &Oracle, g: &Graph) -> Result<bool> {
    let classes = g.classify_vertices();
    if g.is_empty() || !classes.isolated.is_empty() {
        return Err(TdpError::domain(
            "supporting identity needs a graph without isolated vertices",
        ));
    }
    let n = g.order();
    let d = oracle.tdp(g)?.coeff(n - 1);
    Ok(BigInt::from(classes.supporting.len()) == BigInt::from(n) - d)
}

/// Unordered pairs `{v1, v2}` that form the whole neighbourhood of some
/// degree-2 vertex, with neither `v1` nor `v2` supporting.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PairSetL {
    pub pairs: BTreeSet<(usize, usize)>,
}

impl PairSetL {
    pub fn of(g: &Graph) -> Self {
        let supporting = g.classify_vertices().supporting;
        let pairs = g
            .vertices()
            .filter(|&v| g.degree(v) == 2)
            .filter_map(|v| {
                let mut it = g.neighbors(v).iter().copied();
                let (a, b) = (it.next()?, it.next()?);
                (!supporting.contains(&a) && !supporting.contains(&b)).then_some((a, b))
            })
            .collect();
        PairSetL { pairs }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

fn tree_bound_row(id: String, t: &Graph, poly: &IntPoly, count: u64) -> ScanRow {
    let n = t.order();
    let bound = (0..=n)
        .map(|i| {
            if i < 2 {
                BigInt::zero()
            } else {
                big_binomial(n - 1, i - 1)
            }
        })
        .collect::<Vec<_>>();
    let at_one: BigInt = poly.coeffs().iter().sum();
    let star_at_one: BigInt = bound.iter().sum();
    let mut row = ScanRow {
        id,
        n,
        edges: edges_of(t),
        count,
        r: t.classify_vertices().supporting.len(),
        gamma_t: poly.min_degree(),
        coeffs: padded(poly.coeffs(), n + 1),
        bound,
        observed: vec![at_one, star_at_one],
        class: tree_class(t).to_string(),
        holds: false,
        equality: false,
        identity: None,
    };
    (row.holds, row.equality, row.identity) = ScanSuite::TreeBound.recheck(&row);
    row
}

fn edges_of(g: &Graph) -> String {
    g.summary()
        .split_once(": ")
        .map_or(String::new(), |(_, e)| e.to_string())
}

/// Coefficient bound `d_t(T, i) <= C(n-1, i-1)` for `i >= 2`, with equality at
/// every `i` expected exactly for stars. `observed` holds `D_t(T, 1)` and the
/// star's value `2^(n-1) - 1`.
pub fn tree_bound_report(t: &Graph) -> Result<ScanRow> {
    if !t.is_tree() || t.order() < 2 {
        return Err(TdpError::domain(
            "tree bound needs a tree with at least 2 vertices",
        ));
    }
    let poly = Oracle::default().tdp(t)?;
    Ok(tree_bound_row("T".into(), t, &poly, 1))
}

/// Polynomials of all labeled trees of order `n`, grouped by `(polynomial,
/// class)` in order of first appearance. Each group keeps its first tree,
/// its Prüfer index and its size.
fn grouped_trees(n: usize) -> Result<Vec<(usize, Graph, IntPoly, u64)>> {
    let oracle = Oracle::default();
    let mut groups: Vec<(usize, Graph, IntPoly, u64)> = Vec::new();
    let mut index: HashMap<(IntPoly, &'static str), usize> = HashMap::new();
    let mut trees = all_labeled_trees(n)?.enumerate().peekable();
    while trees.peek().is_some() {
        let chunk: Vec<_> = trees.by_ref().take(TREE_CHUNK).collect();
        let polys = chunk
            .par_iter()
            .map(|(_, t)| oracle.tdp(t))
            .collect::<Result<Vec<_>>>()?;
        for ((i, t), p) in chunk.into_iter().zip(polys) {
            let key = (p, tree_class(&t));
            match index.get(&key) {
                Some(&g) => groups[g].3 += 1,
                None => {
                    index.insert(key.clone(), groups.len());
                    groups.push((i, t, key.0, 1));
                }
            }
        }
    }
    Ok(groups)
}

/// Tree bound over all labeled trees of order `n` (one row per polynomial and
/// shape class, weighted by multiplicity), or over `trials` random trees.
pub fn tree_bound_scan(n: usize, sample: Option<(usize, u64)>) -> Result<ScanReport> {
    if n < 2 {
        return Err(TdpError::domain("tree bound scan needs n >= 2"));
    }
    let (rows, p) = match sample {
        None => {
            let rows = grouped_trees(n)?
                .into_iter()
                .map(|(i, t, poly, count)| tree_bound_row(format!("prufer{i}"), &t, &poly, count))
                .collect();
            (
                rows,
                params(&[("n", n.to_string()), ("mode", "exhaustive".into())]),
            )
        }
        Some((trials, seed)) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let seeds: Vec<u64> = (0..trials).map(|_| rng.gen()).collect();
            let oracle = Oracle::default();
            let rows = seeds
                .par_iter()
                .enumerate()
                .map(|(i, &s)| {
                    let t = random_tree(n, s)?;
                    Ok(tree_bound_row(format!("tree{i}"), &t, &oracle.tdp(&t)?, 1))
                })
                .collect::<Result<Vec<_>>>()?;
            let p = params(&[
                ("n", n.to_string()),
                ("mode", "random".into()),
                ("trials", trials.to_string()),
                ("seed", seed.to_string()),
            ]);
            (rows, p)
        }
    };
    Ok(ScanReport::new(
        ScanSuite::TreeBound.name(),
        p,
        rows,
        vec![],
    ))
}

/// All labeled trees of order `n`, deduplicated by polynomial. `bound` is the
/// coefficient-wise minimum over the distinct polynomials, so a row with
/// `equality` is a coefficient-wise minimal tree. Whether one exists is
/// recorded as a finding.
pub fn minimal_tree_scan(n: usize) -> Result<ScanReport> {
    if n < MINIMAL_TREE_MIN {
        return Err(TdpError::domain(format!(
            "minimal tree scan needs n >= {MINIMAL_TREE_MIN}, got {n}"
        )));
    }
    if n > MINIMAL_TREE_MAX {
        return Err(TdpError::Budget {
            what: "minimal tree scan order",
            actual: n,
            limit: MINIMAL_TREE_MAX,
        });
    }
    let mut distinct: Vec<(usize, Graph, IntPoly, u64)> = Vec::new();
    for (i, t, p, count) in grouped_trees(n)? {
        match distinct.iter_mut().find(|d| d.2 == p) {
            Some(d) => d.3 += count,
            None => distinct.push((i, t, p, count)),
        }
    }
    let minimum: Vec<BigInt> = (0..=n)
        .map(|i| {
            distinct
                .iter()
                .map(|d| d.2.coeff(i))
                .min()
                .unwrap_or_default()
        })
        .collect();
    let rows: Vec<ScanRow> = distinct
        .iter()
        .map(|(i, t, p, count)| {
            let mut row = ScanRow {
                id: format!("prufer{i}"),
                n,
                edges: edges_of(t),
                count: *count,
                r: t.classify_vertices().supporting.len(),
                gamma_t: p.min_degree(),
                coeffs: padded(p.coeffs(), n + 1),
                bound: minimum.clone(),
                observed: vec![],
                class: tree_class(t).to_string(),
                holds: false,
                equality: false,
                identity: None,
            };
            (row.holds, row.equality, row.identity) = ScanSuite::MinimalTree.recheck(&row);
            row
        })
        .collect();
    let total: u64 = rows.iter().map(|r| r.count).sum();
    let minimal: Vec<_> = rows.iter().filter(|r| r.equality).collect();
    let finding = match minimal.first() {
        Some(row) => format!(
            "n={n}: {} distinct polynomials over {total} labeled trees; a coefficient-wise minimal tree exists: {} ({} labeled trees, e.g. {})",
            rows.len(),
            IntPoly::from_coeffs(row.coeffs.clone()),
            row.count,
            row.class
        ),
        None => format!(
            "n={n}: {} distinct polynomials over {total} labeled trees; no coefficient-wise minimal tree",
            rows.len()
        ),
    };
    Ok(ScanReport::new(
        ScanSuite::MinimalTree.name(),
        params(&[("n", n.to_string())]),
        rows,
        vec![finding],
    ))
}

/// Degree-2 lower bound `D2 >= C(n,2) - C(r,2) - r(n-r) - d_t(G, n-2)` and the
/// exact identity `d_t(G, n-2) = C(n,2) - C(r,2) - r(n-r) - |L|`.
/// `bound` is `[B]`, `observed` is `[D2, |L|, d_t(G, n-2)]`.
pub fn degree2_report(g: &Graph) -> Result<ScanRow> {
    degree2_row(&Oracle::default(), "G".into(), g)
}

fn degree2_row(oracle: &Oracle, id: String, g: &Graph) -> Result<ScanRow> {
    require_connected(g, "degree-2 bound")?;
    let n = g.order();
    if n < 2 {
        return Err(TdpError::domain("degree-2 bound needs n >= 2"));
    }
    let poly = oracle.tdp(g)?;
    let classes = g.classify_vertices();
    let r = classes.supporting.len();
    let d = poly.coeff(n - 2);
    let mut row = ScanRow {
        id,
        n,
        edges: edges_of(g),
        count: 1,
        r,
        gamma_t: poly.min_degree(),
        coeffs: padded(poly.coeffs(), n + 1),
        bound: vec![pair_budget(n, r) - &d],
        observed: vec![
            BigInt::from(classes.degree2.len()),
            BigInt::from(PairSetL::of(g).len()),
            d,
        ],
        class: "connected".into(),
        holds: false,
        equality: false,
        identity: None,
    };
    (row.holds, row.equality, row.identity) = ScanSuite::Degree2.recheck(&row);
    Ok(row)
}

/// `2 <= γ_t <= 2n/3` (compared as `3γ_t <= 2n`), with the extremal graphs
/// required to be `C_3`, `C_6` or a 2-corona. `bound` is `[2n]`, `observed`
/// is `[3γ_t]`.
pub fn gamma_bounds_report(g: &Graph) -> Result<ScanRow> {
    gamma_bounds_row(&Oracle::default(), "G".into(), g)
}

fn gamma_bounds_row(oracle: &Oracle, id: String, g: &Graph) -> Result<ScanRow> {
    require_connected(g, "gamma bounds")?;
    let n = g.order();
    if n < 3 {
        return Err(TdpError::domain(format!(
            "gamma bounds need n >= 3, got {n}"
        )));
    }
    let poly = oracle.tdp(g)?;
    let gamma = oracle.gamma_t(g)?;
    if gamma != poly.min_degree() {
        return Err(TdpError::Inconsistency(format!(
            "gamma_t {gamma:?} disagrees with minimum degree {:?} of D_t for {}",
            poly.min_degree(),
            g.summary()
        )));
    }
    let class = if g.is_cycle() && (n == 3 || n == 6) {
        format!("C{n}")
    } else if is_two_corona(g) {
        "2-corona".into()
    } else {
        "other".into()
    };
    let mut row = ScanRow {
        id,
        n,
        edges: edges_of(g),
        count: 1,
        r: g.classify_vertices().supporting.len(),
        gamma_t: gamma,
        coeffs: padded(poly.coeffs(), n + 1),
        bound: vec![BigInt::from(2 * n)],
        observed: vec![BigInt::from(3 * gamma.unwrap_or(0))],
        class,
        holds: false,
        equality: false,
        identity: None,
    };
    (row.holds, row.equality, row.identity) = ScanSuite::GammaBounds.recheck(&row);
    Ok(row)
}

/// Whether `g` splits into vertex-disjoint paths `b - m - p` with `p`
/// pendant and `m` of degree 2, one per base vertex `b`, covering every
/// vertex once. φ is not a 2-corona.
pub fn is_two_corona(g: &Graph) -> bool {
    let n = g.order();
    if n == 0 || !n.is_multiple_of(3) {
        return false;
    }
    // each pendant anchors at most one candidate triple (tip, middle, base)
    let triples: Vec<[usize; 3]> = g
        .vertices()
        .filter(|&p| g.degree(p) == 1)
        .filter_map(|p| {
            let m = *g.neighbors(p).first()?;
            if g.degree(m) != 2 {
                return None;
            }
            let b = *g.neighbors(m).iter().find(|&&b| b != p)?;
            Some([p, m, b])
        })
        .collect();
    if triples.len() < n / 3 {
        return false;
    }
    let mut by_vertex: HashMap<usize, Vec<usize>> = HashMap::new();
    for (i, t) in triples.iter().enumerate() {
        for &v in t {
            by_vertex.entry(v).or_default().push(i);
        }
    }
    let vertices: Vec<usize> = g.vertices().collect();
    let mut covered: BTreeSet<usize> = BTreeSet::new();
    cover(&vertices, &triples, &by_vertex, &mut covered)
}

fn cover(
    vertices: &[usize],
    triples: &[[usize; 3]],
    by_vertex: &HashMap<usize, Vec<usize>>,
    covered: &mut BTreeSet<usize>,
) -> bool {
    let Some(&v) = vertices.iter().find(|v| !covered.contains(v)) else {
        return true;
    };
    let Some(candidates) = by_vertex.get(&v) else {
        return false;
    };
    for &i in candidates {
        let t = triples[i];
        if t.iter().any(|x| covered.contains(x)) {
            continue;
        }
        covered.extend(t);
        if cover(vertices, triples, by_vertex, covered) {
            return true;
        }
        for x in t {
            covered.remove(&x);
        }
    }
    false
}

/// Degree-2 bound and identity over a corpus; rows in corpus order.
pub fn degree2_scan(corpus: &[CorpusEntry], p: Params) -> Result<ScanReport> {
    let oracle = Oracle::default();
    let rows = corpus
        .par_iter()
        .map(|e| degree2_row(&oracle, e.id.clone(), &e.graph))
        .collect::<Result<Vec<_>>>()?;
    Ok(ScanReport::new(ScanSuite::Degree2.name(), p, rows, vec![]))
}

/// `γ_t` bounds over the corpus graphs with at least 3 vertices.
pub fn gamma_bounds_scan(corpus: &[CorpusEntry], p: Params) -> Result<ScanReport> {
    let oracle = Oracle::default();
    let rows = corpus
        .par_iter()
        .filter(|e| e.graph.order() >= 3)
        .map(|e| gamma_bounds_row(&oracle, e.id.clone(), &e.graph))
        .collect::<Result<Vec<_>>>()?;
    let extremal = rows.iter().filter(|r| r.equality).count();
    let findings = vec![format!(
        "{extremal} of {} graphs reach 3 gamma_t = 2n",
        rows.len()
    )];
    Ok(ScanReport::new(
        ScanSuite::GammaBounds.name(),
        p,
        rows,
        findings,
    ))
}

/// Sample sizes used by [`run_scan`] when `trials` is not given.
pub const DEGREE2_TRIALS: usize = 200;
pub const GAMMA_TRIALS: usize = 100;
/// Largest base order of the 2-coronas added to the `γ_t` scan.
pub const CORONA_MAX_BASE: usize = 8;

/// Runs a scan by suite.
///
/// * `tree-bound`: every labeled tree of order `n`, or `trials` random trees.
/// * `minimal-tree`: every labeled tree of order `n`.
/// * `degree2`: the standard corpus with orders up to `n`.
/// * `gamma-bounds`: the standard corpus plus `trials / 2` 2-coronas of random
///   connected bases with at most [`CORONA_MAX_BASE`] vertices.
pub fn run_scan(
    suite: ScanSuite,
    n: usize,
    trials: Option<usize>,
    seed: u64,
) -> Result<ScanReport> {
    match suite {
        ScanSuite::TreeBound => tree_bound_scan(n, trials.map(|t| (t, seed))),
        ScanSuite::MinimalTree => minimal_tree_scan(n),
        ScanSuite::Degree2 => {
            let trials = trials.unwrap_or(DEGREE2_TRIALS);
            let header = params(&[
                ("n_max", n.to_string()),
                ("trials", trials.to_string()),
                ("seed", seed.to_string()),
            ]);
            degree2_scan(&standard_corpus(n, trials, seed)?, header)
        }
        ScanSuite::GammaBounds => {
            let trials = trials.unwrap_or(GAMMA_TRIALS);
            let coronas = trials / 2;
            let corona_seed = seed.wrapping_add(1);
            let mut corpus = standard_corpus(n, trials, seed)?;
            corpus.extend(two_corona_corpus(coronas, CORONA_MAX_BASE, corona_seed)?);
            let header = params(&[
                ("n_max", n.to_string()),
                ("trials", trials.to_string()),
                ("seed", seed.to_string()),
                ("coronas", coronas.to_string()),
                ("corona_max_base", CORONA_MAX_BASE.to_string()),
                ("corona_seed", corona_seed.to_string()),
            ]);
            gamma_bounds_scan(&corpus, header)
        }
    }
}
