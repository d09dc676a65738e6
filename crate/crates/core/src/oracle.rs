//! Brute-force ground truth.
//!
//! Every subset of the live vertices is enumerated as a bitmask (live labels
//! in ascending order map to bits 0, 1, ...). A subset `W` totally dominates
//! iff the union of the open neighbourhoods of its members covers every live
//! vertex. The union is read from two lookup tables, one for the low half of
//! the mask and one for the high half, so each subset costs two loads and a
//! compare. Large enumerations split the high half across rayon workers;
//! per-size counts are merged by integer addition, so the result does not
//! depend on scheduling.

use std::sync::atomic::{AtomicUsize, Ordering};

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::error::{Result, TdpError};
use crate::graph::Graph;
use crate::poly::IntPoly;

/// Default enumeration budget in live vertices (`2^26` subsets).
pub const DEFAULT_BUDGET: usize = 26;
/// Hard ceiling for budget overrides.
pub const MAX_BUDGET: usize = 32;

const PARALLEL_FROM: usize = 16;

/// One membership constraint on the candidate set `W`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Atom {
    /// `v ∈ W`
    Member(usize),
    /// `W ∩ S = ∅`
    IntersectEmpty(Vec<usize>),
    /// `|W ∩ S| ≥ k`
    IntersectAtLeast(Vec<usize>, usize),
}

/// A conjunction of [`Atom`]s; the empty conjunction is always true.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Condition {
    pub atoms: Vec<Atom>,
}

impl Condition {
    pub fn always() -> Self {
        Condition::default()
    }

    pub fn member(v: usize) -> Self {
        Condition::always().and(Atom::Member(v))
    }

    pub fn avoids(set: impl IntoIterator<Item = usize>) -> Self {
        Condition::always().and(Atom::IntersectEmpty(set.into_iter().collect()))
    }

    pub fn and(mut self, atom: Atom) -> Self {
        self.atoms.push(atom);
        self
    }

    /// Labels mentioned by any atom.
    pub fn labels(&self) -> impl Iterator<Item = usize> + '_ {
        self.atoms.iter().flat_map(|a| match a {
            Atom::Member(v) => std::slice::from_ref(v).iter().copied(),
            Atom::IntersectEmpty(s) | Atom::IntersectAtLeast(s, _) => s.iter().copied(),
        })
    }

    /// Reference evaluation on an explicit vertex set.
    pub fn holds_for(&self, w: &std::collections::BTreeSet<usize>) -> bool {
        self.atoms.iter().all(|a| match a {
            Atom::Member(v) => w.contains(v),
            Atom::IntersectEmpty(s) => s.iter().all(|v| !w.contains(v)),
            Atom::IntersectAtLeast(s, k) => s.iter().filter(|v| w.contains(v)).count() >= *k,
        })
    }
}

/// Condition compiled to bitmask tests.
#[derive(Debug, Default)]
struct MaskCondition {
    include: u64,
    exclude: u64,
    at_least: Vec<(u64, u32)>,
}

impl MaskCondition {
    fn compile(cond: &Condition, index: &[usize]) -> Result<Self> {
        let bit = |v: usize| -> Result<u64> {
            match index.get(v) {
                Some(&i) if i != usize::MAX => Ok(1u64 << i),
                _ => Err(TdpError::domain(format!(
                    "condition references vertex {v}, which is not live"
                ))),
            }
        };
        let mut mc = MaskCondition::default();
        for atom in &cond.atoms {
            match atom {
                Atom::Member(v) => mc.include |= bit(*v)?,
                Atom::IntersectEmpty(s) => {
                    for &v in s {
                        mc.exclude |= bit(v)?;
                    }
                }
                Atom::IntersectAtLeast(s, k) => {
                    let mut m = 0;
                    for &v in s {
                        m |= bit(v)?;
                    }
                    mc.at_least.push((m, *k as u32));
                }
            }
        }
        Ok(mc)
    }

    #[inline]
    fn accepts(&self, w: u64) -> bool {
        w & self.include == self.include
            && w & self.exclude == 0
            && self
                .at_least
                .iter()
                .all(|&(m, k)| (w & m).count_ones() >= k)
    }
}

/// Bitmask view of a graph: open neighbourhoods indexed by position among live labels.
struct MaskGraph {
    n: usize,
    low_bits: usize,
    low: Vec<u64>,
    high: Vec<u64>,
    full: u64,
    index: Vec<usize>,
}

impl MaskGraph {
    fn new(g: &Graph, budget: usize) -> Result<Self> {
        let budget = budget.min(MAX_BUDGET);
        let n = g.order();
        if n > budget {
            return Err(TdpError::Budget {
                what: "live vertices for brute-force enumeration",
                actual: n,
                limit: budget,
            });
        }
        let index = g.label_index();
        let nbr: Vec<u64> = g
            .vertices()
            .map(|v| {
                g.neighbors(v)
                    .iter()
                    .fold(0u64, |m, &w| m | (1 << index[w]))
            })
            .collect();
        let low_bits = n / 2;
        let table = |offset: usize, bits: usize| {
            let mut t = vec![0u64; 1 << bits];
            for m in 1..t.len() {
                let lowest = m.trailing_zeros() as usize;
                t[m] = t[m & (m - 1)] | nbr[offset + lowest];
            }
            t
        };
        Ok(MaskGraph {
            n,
            low_bits,
            low: table(0, low_bits),
            high: table(low_bits, n - low_bits),
            full: if n == 64 { u64::MAX } else { (1u64 << n) - 1 },
            index,
        })
    }

    #[inline]
    fn dominates(&self, w: u64) -> bool {
        let lo = (w & ((1u64 << self.low_bits) - 1)) as usize;
        let hi = (w >> self.low_bits) as usize;
        self.low[lo] | self.high[hi] == self.full
    }

    fn count_by_size(&self, cond: &MaskCondition) -> Vec<u64> {
        let n = self.n;
        let per_high = |h: usize| {
            let mut counts = vec![0u64; n + 1];
            let cover_hi = self.high[h];
            let base = (h as u64) << self.low_bits;
            let pc_hi = h.count_ones() as usize;
            for (l, &cover_lo) in self.low.iter().enumerate() {
                if cover_hi | cover_lo == self.full {
                    let w = base | l as u64;
                    if cond.accepts(w) {
                        counts[pc_hi + l.count_ones() as usize] += 1;
                    }
                }
            }
            counts
        };
        let merge = |mut a: Vec<u64>, b: Vec<u64>| {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
            a
        };
        let highs = 0..self.high.len();
        if n >= PARALLEL_FROM {
            highs
                .into_par_iter()
                .map(per_high)
                .reduce(|| vec![0u64; n + 1], merge)
        } else {
            highs.map(per_high).fold(vec![0u64; n + 1], merge)
        }
    }
}

/// Brute-force oracle with a configurable enumeration budget.
#[derive(Debug, Clone, Copy)]
pub struct Oracle {
    budget: usize,
}

static PROCESS_BUDGET: AtomicUsize = AtomicUsize::new(DEFAULT_BUDGET);

/// Sets the budget used by [`Oracle::default`] for the rest of the process,
/// clamped to [`MAX_BUDGET`].
pub fn set_default_budget(budget: usize) {
    PROCESS_BUDGET.store(budget.min(MAX_BUDGET), Ordering::Relaxed);
}

impl Default for Oracle {
    fn default() -> Self {
        Oracle {
            budget: PROCESS_BUDGET.load(Ordering::Relaxed),
        }
    }
}

impl Oracle {
    /// Budget in live vertices, clamped to [`MAX_BUDGET`].
    pub fn with_budget(budget: usize) -> Self {
        Oracle {
            budget: budget.min(MAX_BUDGET),
        }
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    /// `D_t(G, x)`; the zero polynomial for φ or a graph with an isolated vertex.
    pub fn tdp(&self, g: &Graph) -> Result<IntPoly> {
        self.tdp_conditioned(g, &Condition::always())
    }

    /// `D_t(G, x){C_W}`: only total dominating sets satisfying `cond` are counted.
    pub fn tdp_conditioned(&self, g: &Graph, cond: &Condition) -> Result<IntPoly> {
        let mg = MaskGraph::new(g, self.budget)?;
        let mc = MaskCondition::compile(cond, &mg.index)?;
        if g.is_empty() || g.vertices().any(|v| g.degree(v) == 0) {
            return Ok(IntPoly::zero());
        }
        let counts = mg.count_by_size(&mc);
        Ok(IntPoly::from_coeffs(
            counts.into_iter().map(BigInt::from).collect(),
        ))
    }

    /// `γ_t(G)`, searching sizes in ascending order and stopping at the first hit.
    pub fn gamma_t(&self, g: &Graph) -> Result<Option<usize>> {
        let mg = MaskGraph::new(g, self.budget)?;
        let n = mg.n;
        if n == 0 || g.vertices().any(|v| g.degree(v) == 0) {
            return Ok(None);
        }
        for size in 2..=n {
            // Gosper's hack over all masks with `size` bits set
            let mut w: u64 = (1u64 << size) - 1;
            let limit: u64 = 1u64 << n;
            while w < limit {
                if mg.dominates(w) {
                    return Ok(Some(size));
                }
                let c = w & w.wrapping_neg();
                let r = w + c;
                w = (((r ^ w) >> 2) / c) | r;
            }
        }
        Ok(None)
    }
}

pub fn brute_force_tdp(g: &Graph) -> Result<IntPoly> {
    Oracle::default().tdp(g)
}

pub fn brute_force_tdp_conditioned(g: &Graph, cond: &Condition) -> Result<IntPoly> {
    Oracle::default().tdp_conditioned(g, cond)
}

pub fn gamma_t(g: &Graph) -> Result<Option<usize>> {
    Oracle::default().gamma_t(g)
}

/// True iff every live vertex has a neighbour in `w`.
pub fn is_total_dominating(g: &Graph, w: &std::collections::BTreeSet<usize>) -> Result<bool> {
    if let Some(&v) = w.iter().find(|&&v| !g.is_live(v)) {
        return Err(TdpError::domain(format!("vertex {v} of W is not live")));
    }
    Ok(g.vertices()
        .all(|v| g.neighbors(v).iter().any(|u| w.contains(u))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{complete, cycle, path, random_connected_graph, star, union};
    use num_integer::binomial;
    use std::collections::BTreeSet;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    fn set(xs: &[usize]) -> BTreeSet<usize> {
        xs.iter().copied().collect()
    }

    /// Independent per-size counter working directly on adjacency sets.
    fn naive_counts(g: &Graph, cond: &Condition) -> IntPoly {
        let vs: Vec<usize> = g.vertices().collect();
        if vs.is_empty() {
            return IntPoly::zero();
        }
        let mut counts = vec![0i64; vs.len() + 1];
        for mask in 0u32..(1 << vs.len()) {
            let w: BTreeSet<usize> = vs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &v)| v)
                .collect();
            if is_total_dominating(g, &w).unwrap() && cond.holds_for(&w) {
                counts[w.len()] += 1;
            }
        }
        IntPoly::from_i64s(&counts)
    }

    #[test]
    fn is_total_dominating_examples() {
        assert!(is_total_dominating(&path(4), &set(&[1, 2])).unwrap());
        assert!(!is_total_dominating(&path(4), &set(&[0, 1])).unwrap());
        let g = union(&path(3), &Graph::edgeless(1));
        assert!(!is_total_dominating(&g, &set(&[0, 1, 2, 3])).unwrap());
        assert!(is_total_dominating(&path(2), &set(&[5])).is_err());
    }

    #[test]
    fn brute_force_examples() {
        assert_eq!(brute_force_tdp(&path(3)).unwrap(), p(&[0, 0, 2, 1]));
        assert_eq!(
            brute_force_tdp(&cycle(6)).unwrap(),
            p(&[0, 0, 0, 0, 9, 6, 1])
        );
        assert_eq!(brute_force_tdp(&path(5)).unwrap(), p(&[0, 0, 0, 1, 3, 1]));
        assert!(brute_force_tdp(&Graph::empty()).unwrap().is_zero());
        assert!(brute_force_tdp(&path(1)).unwrap().is_zero());
    }

    #[test]
    fn conditioned_examples() {
        let o = brute_force_tdp_conditioned;
        assert_eq!(o(&path(2), &Condition::member(0)).unwrap(), p(&[0, 0, 1]));
        assert!(o(&path(3), &Condition::avoids([0, 2])).unwrap().is_zero());
        assert_eq!(
            o(&path(4), &Condition::member(3)).unwrap(),
            p(&[0, 0, 0, 1, 1])
        );
        let c = Condition::always().and(Atom::IntersectAtLeast(vec![0, 1, 2], 3));
        assert_eq!(o(&path(3), &c).unwrap(), p(&[0, 0, 0, 1]));
        let dead = path(3).delete_vertex(0).unwrap();
        assert!(matches!(
            o(&dead, &Condition::member(0)),
            Err(TdpError::Domain(_))
        ));
    }

    #[test]
    fn gamma_examples() {
        assert_eq!(gamma_t(&cycle(6)).unwrap(), Some(4));
        assert_eq!(gamma_t(&path(2)).unwrap(), Some(2));
        assert_eq!(gamma_t(&path(1)).unwrap(), None);
        assert_eq!(gamma_t(&Graph::empty()).unwrap(), None);
        assert_eq!(gamma_t(&complete(5)).unwrap(), Some(2));
    }

    #[test]
    fn budget_is_enforced() {
        let e = brute_force_tdp(&path(27)).unwrap_err();
        assert!(matches!(
            e,
            TdpError::Budget {
                actual: 27,
                limit: 26,
                ..
            }
        ));
        assert!(Oracle::with_budget(4).tdp(&path(5)).is_err());
        assert_eq!(Oracle::with_budget(99).budget(), MAX_BUDGET);
        assert!(gamma_t(&path(30)).is_err());
    }

    #[test]
    fn matches_independent_counter() {
        for seed in 0..40 {
            let n = 1 + (seed as usize % 12);
            let g = random_connected_graph(n, 0.3, seed).unwrap();
            assert_eq!(
                brute_force_tdp(&g).unwrap(),
                naive_counts(&g, &Condition::always())
            );
            let v = seed as usize % n;
            let conds = [
                Condition::member(v),
                Condition::avoids(g.neighbors(v).iter().copied()),
                Condition::always().and(Atom::IntersectAtLeast(g.vertices().take(3).collect(), 2)),
            ];
            for c in conds {
                assert_eq!(
                    brute_force_tdp_conditioned(&g, &c).unwrap(),
                    naive_counts(&g, &c)
                );
            }
        }
    }

    #[test]
    fn parallel_path_matches_sequential_counts() {
        // 18 vertices crosses the parallel threshold; compare with the recurrence-free
        // binomial identity for the complete graph: every set of size >= 2 totally dominates.
        let g = complete(18);
        let poly = brute_force_tdp(&g).unwrap();
        for i in 2..=18u64 {
            assert_eq!(poly.coeff(i as usize), BigInt::from(binomial(18u64, i)));
        }
        assert_eq!(poly.coeff(1), BigInt::from(0));
    }

    #[test]
    fn structural_identities() {
        for seed in 0..30u64 {
            let n = 2 + (seed as usize % 10);
            let g = random_connected_graph(n, 0.25, seed).unwrap();
            let d = brute_force_tdp(&g).unwrap();
            // coefficient bounds
            for i in 0..=n {
                assert!(d.coeff(i) <= BigInt::from(binomial(n as u64, i as u64)));
            }
            assert_eq!(d.coeff(0), BigInt::from(0));
            assert_eq!(d.coeff(1), BigInt::from(0));
            // supporting vertices count
            let r = g.classify_vertices().supporting.len();
            assert_eq!(BigInt::from(n) - d.coeff(n - 1), BigInt::from(r));
            // split on membership of v
            let v = seed as usize % n;
            let a = brute_force_tdp_conditioned(&g, &Condition::member(v)).unwrap();
            let b = brute_force_tdp_conditioned(&g, &Condition::avoids([v])).unwrap();
            assert_eq!(&a + &b, d);
            // union multiplicativity
            let h = star(2 + seed as usize % 4);
            let u = union(&g, &h);
            assert_eq!(
                brute_force_tdp(&u).unwrap(),
                &d * &brute_force_tdp(&h).unwrap()
            );
            // isolated vertex kills everything
            let iso = union(&g, &Graph::edgeless(1));
            assert!(brute_force_tdp(&iso).unwrap().is_zero());
            assert_eq!(gamma_t(&g).unwrap(), d.min_degree());
        }
    }
}
