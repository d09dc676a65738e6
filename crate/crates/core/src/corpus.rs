//! Seeded graph corpora shared by the verification suites and scans.
//!
//! A master ChaCha8 stream seeded with the corpus seed draws, per instance,
//! the order, the edge probability and a sub-seed for the generator. The
//! same `(parameters, seed)` always yields the same corpus.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Result, TdpError};
use crate::generate::{cycle, path, random_connected_graph, random_forest, star, two_corona};
use crate::graph::Graph;
use crate::report::Params;

pub const DEFAULT_SEED: u64 = 42;

/// Extra edges are added with probability drawn from `[0, MAX_EDGE_PROBABILITY)`.
pub const MAX_EDGE_PROBABILITY: f64 = 0.6;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusEntry {
    pub id: String,
    pub graph: Graph,
}

impl CorpusEntry {
    pub fn new(id: impl Into<String>, graph: Graph) -> Self {
        CorpusEntry {
            id: id.into(),
            graph,
        }
    }
}

/// `P_2..P_6`, `C_3..C_6`, `S_4..S_6`.
pub fn fixed_corpus() -> Vec<CorpusEntry> {
    let mut out = Vec::new();
    out.extend((2..=6).map(|n| CorpusEntry::new(format!("P{n}"), path(n))));
    out.extend((3..=6).map(|n| CorpusEntry::new(format!("C{n}"), cycle(n))));
    out.extend((4..=6).map(|n| CorpusEntry::new(format!("S{n}"), star(n))));
    out
}

/// `trials` random connected graphs with order in `2..=n_max`.
pub fn random_connected_corpus(n_max: usize, trials: usize, seed: u64) -> Result<Vec<CorpusEntry>> {
    if n_max < 2 {
        return Err(TdpError::domain(format!(
            "corpus needs n_max >= 2, got {n_max}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..trials)
        .map(|i| {
            let n = rng.gen_range(2..=n_max);
            let p = rng.gen_range(0.0..MAX_EDGE_PROBABILITY);
            let sub = rng.gen::<u64>();
            Ok(CorpusEntry::new(
                format!("rand{i}"),
                random_connected_graph(n, p, sub)?,
            ))
        })
        .collect()
}

/// The fixed graphs of order at most `n_max`, followed by the random ones.
pub fn standard_corpus(n_max: usize, trials: usize, seed: u64) -> Result<Vec<CorpusEntry>> {
    let mut out: Vec<_> = fixed_corpus()
        .into_iter()
        .filter(|e| e.graph.order() <= n_max)
        .collect();
    out.extend(random_connected_corpus(n_max, trials, seed)?);
    Ok(out)
}

/// 2-coronas of random connected bases with order in `1..=max_base`.
pub fn two_corona_corpus(count: usize, max_base: usize, seed: u64) -> Result<Vec<CorpusEntry>> {
    if max_base == 0 {
        return Err(TdpError::domain("2-corona corpus needs max_base >= 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let k = rng.gen_range(1..=max_base);
            let p = rng.gen_range(0.0..MAX_EDGE_PROBABILITY);
            let sub = rng.gen::<u64>();
            let base = random_connected_graph(k, p, sub)?;
            Ok(CorpusEntry::new(format!("corona{i}"), two_corona(&base)))
        })
        .collect()
}

/// `count` random forests with total order in `1..=max_order`.
pub fn forest_corpus(count: usize, max_order: usize, seed: u64) -> Result<Vec<CorpusEntry>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            Ok(CorpusEntry::new(
                format!("forest{i}"),
                random_forest(max_order, rng.gen())?,
            ))
        })
        .collect()
}

pub(crate) fn params(pairs: &[(&str, String)]) -> Params {
    pairs
        .iter()
        .map(|(k, v)| (k.to_string(), v.clone()))
        .collect()
}
