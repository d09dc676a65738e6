//! Graph families, seeded random graphs and exhaustive labeled-tree enumeration.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Result, TdpError};
use crate::graph::Graph;

/// Largest order accepted by [`all_labeled_trees`] (`9^7` Prüfer decodes).
pub const LABELED_TREE_BUDGET: usize = 9;

/// Named families accepted by [`generate`].
#[derive(Debug, Clone, Copy)]
pub enum Family<'a> {
    Path(usize),
    Cycle(usize),
    Star(usize),
    Complete(usize),
    TwoCorona(&'a Graph),
    Union(&'a Graph, &'a Graph),
    Join(&'a Graph, &'a Graph),
}

pub fn generate(family: Family<'_>) -> Result<Graph> {
    match family {
        Family::Path(n) => Ok(path(n)),
        Family::Cycle(n) if n < 3 => Err(TdpError::domain(format!("cycle needs n >= 3, got {n}"))),
        Family::Cycle(n) => Ok(cycle(n)),
        Family::Star(n) if n < 2 => Err(TdpError::domain(format!("star needs n >= 2, got {n}"))),
        Family::Star(n) => Ok(star(n)),
        Family::Complete(n) => Ok(complete(n)),
        Family::TwoCorona(base) => Ok(two_corona(base)),
        Family::Union(a, b) => Ok(union(a, b)),
        Family::Join(a, b) => Ok(join(a, b)),
    }
}

/// `P_n` on `0-1-...-(n-1)`; `path(0)` is φ.
pub fn path(n: usize) -> Graph {
    let mut g = Graph::edgeless(n);
    for v in 1..n {
        g.add_edge_unchecked(v - 1, v);
    }
    g
}

/// `C_n` for `n >= 3`.
pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3, "cycle needs n >= 3");
    let mut g = path(n);
    g.add_edge_unchecked(0, n - 1);
    g
}

/// `S_n = K_{1,n-1}` with centre 0.
pub fn star(n: usize) -> Graph {
    assert!(n >= 2, "star needs n >= 2");
    let mut g = Graph::edgeless(n);
    for v in 1..n {
        g.add_edge_unchecked(0, v);
    }
    g
}

pub fn complete(n: usize) -> Graph {
    let mut g = Graph::edgeless(n);
    for u in 0..n {
        for v in u + 1..n {
            g.add_edge_unchecked(u, v);
        }
    }
    g
}

/// Attaches a fresh path `b - m - p` to every base vertex `b`.
///
/// The base is compacted to `0..k`; base vertex `i` gets middle `k + i` and
/// tip `2k + i`, so the result has order `3k`.
pub fn two_corona(base: &Graph) -> Graph {
    let base = base.compacted();
    let k = base.capacity();
    let mut g = Graph::edgeless(3 * k);
    for (u, v) in base.edges() {
        g.add_edge_unchecked(u, v);
    }
    for i in 0..k {
        g.add_edge_unchecked(i, k + i);
        g.add_edge_unchecked(k + i, 2 * k + i);
    }
    g
}

fn disjoint_pair(a: &Graph, b: &Graph) -> (Graph, usize, usize) {
    let (a, b) = (a.compacted(), b.compacted());
    let (na, nb) = (a.capacity(), b.capacity());
    let mut g = Graph::edgeless(na + nb);
    for (u, v) in a.edges() {
        g.add_edge_unchecked(u, v);
    }
    for (u, v) in b.edges() {
        g.add_edge_unchecked(na + u, na + v);
    }
    (g, na, nb)
}

/// Disjoint union; the second graph's vertices follow the first's.
pub fn union(a: &Graph, b: &Graph) -> Graph {
    disjoint_pair(a, b).0
}

/// Disjoint union plus every edge between the two sides.
pub fn join(a: &Graph, b: &Graph) -> Graph {
    let (mut g, na, nb) = disjoint_pair(a, b);
    for u in 0..na {
        for v in na..na + nb {
            g.add_edge_unchecked(u, v);
        }
    }
    g
}

/// Decodes a Prüfer sequence over `0..n` (length `n - 2`) into a labeled tree.
pub fn prufer_decode(seq: &[usize], n: usize) -> Graph {
    assert!(
        n >= 2 && seq.len() == n - 2,
        "sequence length must be n - 2"
    );
    let mut degree = vec![1usize; n];
    for &v in seq {
        degree[v] += 1;
    }
    let mut g = Graph::edgeless(n);
    let mut ptr = degree.iter().position(|&d| d == 1).unwrap();
    let mut leaf = ptr;
    for &v in seq {
        g.add_edge_unchecked(leaf, v);
        degree[v] -= 1;
        if degree[v] == 1 && v < ptr {
            leaf = v;
        } else {
            ptr += 1;
            while degree[ptr] != 1 {
                ptr += 1;
            }
            leaf = ptr;
        }
    }
    g.add_edge_unchecked(leaf, n - 1);
    g
}

/// Uniform random labeled tree on `n` vertices; deterministic per `(n, seed)`.
pub fn random_tree(n: usize, seed: u64) -> Result<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_tree_with(n, &mut rng)
}

fn random_tree_with(n: usize, rng: &mut impl Rng) -> Result<Graph> {
    match n {
        0 => Err(TdpError::domain("random tree needs n >= 1")),
        1 => Ok(Graph::edgeless(1)),
        _ => {
            let seq: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
            Ok(prufer_decode(&seq, n))
        }
    }
}

/// Random tree skeleton plus every other pair independently with probability `p`.
pub fn random_connected_graph(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(TdpError::domain(format!(
            "edge probability {p} outside [0, 1]"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = random_tree_with(n, &mut rng)?;
    for u in 0..n {
        for v in u + 1..n {
            if !g.has_edge(u, v) && rng.gen::<f64>() < p {
                g.add_edge_unchecked(u, v);
            }
        }
    }
    Ok(g)
}

/// Random forest: total order drawn from `1..=max_order`, split into random
/// tree components listed consecutively.
pub fn random_forest(max_order: usize, seed: u64) -> Result<Graph> {
    if max_order == 0 {
        return Err(TdpError::domain("random forest needs max_order >= 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut remaining = rng.gen_range(1..=max_order);
    let mut forest = Graph::empty();
    while remaining > 0 {
        let size = rng.gen_range(1..=remaining);
        let tree = random_tree_with(size, &mut rng)?;
        forest = union(&forest, &tree);
        remaining -= size;
    }
    Ok(forest)
}

/// Every labeled tree on `n` vertices, one per Prüfer sequence in lexicographic order.
pub fn all_labeled_trees(n: usize) -> Result<AllLabeledTrees> {
    if n == 0 {
        return Err(TdpError::domain("labeled trees need n >= 1"));
    }
    if n > LABELED_TREE_BUDGET {
        return Err(TdpError::Budget {
            what: "labeled tree order",
            actual: n,
            limit: LABELED_TREE_BUDGET,
        });
    }
    Ok(AllLabeledTrees {
        n,
        seq: vec![0; n.saturating_sub(2)],
        done: false,
    })
}

/// Iterator returned by [`all_labeled_trees`].
#[derive(Debug, Clone)]
pub struct AllLabeledTrees {
    n: usize,
    seq: Vec<usize>,
    done: bool,
}

impl AllLabeledTrees {
    /// `n^(n-2)`, or 1 for `n <= 2`.
    pub fn total(&self) -> u64 {
        if self.n <= 2 {
            1
        } else {
            (self.n as u64).pow(self.n as u32 - 2)
        }
    }
}

impl Iterator for AllLabeledTrees {
    type Item = Graph;

    fn next(&mut self) -> Option<Graph> {
        if self.done {
            return None;
        }
        let tree = if self.n == 1 {
            Graph::edgeless(1)
        } else {
            prufer_decode(&self.seq, self.n)
        };
        // odometer increment, last position fastest
        self.done = true;
        for digit in self.seq.iter_mut().rev() {
            *digit += 1;
            if *digit < self.n {
                self.done = false;
                break;
            }
            *digit = 0;
        }
        Some(tree)
    }
}
