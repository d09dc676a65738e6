//! Vertex and edge reduction formulas, path/cycle recurrences and a
//! reduction-based algorithm for forests.
//!
//! The reduction right-hand sides take their ingredient polynomials from the
//! brute-force oracle on the derived graphs. Plain terms of disconnected
//! derived graphs are multiplied componentwise; conditioned terms are always
//! enumerated directly, since one condition may couple several components.

use std::collections::HashMap;

use crate::error::{Result, TdpError};
use crate::graph::Graph;
use crate::oracle::{Condition, Oracle};
use crate::poly::IntPoly;

/// `1 + x`
fn one_plus_x() -> IntPoly {
    IntPoly::from_i64s(&[1, 1])
}

/// `D_t` as a product over components. φ gives the zero polynomial, as does
/// any isolated vertex.
pub fn tdp_componentwise(g: &Graph) -> Result<IntPoly> {
    tdp_componentwise_with(&Oracle::default(), g)
}

pub fn tdp_componentwise_with(oracle: &Oracle, g: &Graph) -> Result<IntPoly> {
    if g.is_empty() {
        return Ok(IntPoly::zero());
    }
    let mut acc = IntPoly::one();
    for comp in g.components() {
        if comp.order() == 1 {
            return Ok(IntPoly::zero());
        }
        acc = &acc * &oracle.tdp(&comp)?;
    }
    Ok(acc)
}

/// The indicator `1_H`: the constant 1 when `H` is φ, otherwise `D_t(H, x)`.
pub fn indicator(h: &Graph) -> Result<IntPoly> {
    if h.is_empty() {
        Ok(IntPoly::one())
    } else {
        tdp_componentwise(h)
    }
}

fn require_connected(g: &Graph) -> Result<()> {
    if g.is_empty() || !g.is_connected() {
        return Err(TdpError::domain(
            "reduction formula needs a nonempty connected graph",
        ));
    }
    Ok(())
}

fn require_live(g: &Graph, u: usize) -> Result<()> {
    if g.is_live(u) {
        Ok(())
    } else {
        Err(TdpError::domain(format!("vertex {u} is not live")))
    }
}

/// `Σ_{v ∈ N(u)} x² · 1_{G ⊖ u ⊖ v}`
fn indicator_sum(g: &Graph, u: usize) -> Result<IntPoly> {
    g.neighbors(u)
        .iter()
        .map(|&v| Ok(indicator(&g.delete_closed_neighborhoods(&[u, v])?)?.shift(2)))
        .sum()
}

/// Vertex reduction:
/// `D_t(G-u) + x D_t(G/u) - (1+x) D_t(G/u){N(u) ∩ W = ∅} + Σ_{v ∈ N(u)} x² 1_{G⊖u⊖v}`.
pub fn vertex_reduction_rhs(g: &Graph, u: usize) -> Result<IntPoly> {
    require_connected(g)?;
    require_live(g, u)?;
    let oracle = Oracle::default();
    let deleted = g.delete_vertex(u)?;
    let contracted = g.contract_vertex(u)?;
    let avoid = Condition::avoids(g.neighbors(u).iter().copied());
    let conditioned = oracle.tdp_conditioned(&contracted, &avoid)?;

    let mut rhs = tdp_componentwise(&deleted)?;
    rhs = &rhs + &tdp_componentwise(&contracted)?.shift(1);
    rhs = &rhs - &(&one_plus_x() * &conditioned);
    rhs = &rhs + &indicator_sum(g, u)?;
    Ok(rhs)
}

/// `D_t(H){v ∈ W}`, or zero when `v` is not a live vertex of `H`.
fn member_term(h: &Graph, v: usize) -> Result<IntPoly> {
    if !h.is_live(v) {
        return Ok(IntPoly::zero());
    }
    Oracle::default().tdp_conditioned(h, &Condition::member(v))
}

/// Edge reduction:
/// `D_t(G-e) + x² 1_{G⊖u⊖v} + (1+x)[D_t(G-e⊖u){v ∈ W} + D_t(G-e⊖v){u ∈ W}]`,
/// with `G-e⊖u = (G-e)⊖u`.
pub fn edge_reduction_rhs(g: &Graph, u: usize, v: usize) -> Result<IntPoly> {
    require_connected(g)?;
    let without = g.delete_edge(u, v)?;
    let mut rhs = tdp_componentwise(&without)?;
    rhs = &rhs + &indicator(&g.delete_closed_neighborhoods(&[u, v])?)?.shift(2);
    let a = member_term(&without.delete_closed_neighborhoods(&[u])?, v)?;
    let b = member_term(&without.delete_closed_neighborhoods(&[v])?, u)?;
    rhs = &rhs + &(&one_plus_x() * &(&a + &b));
    Ok(rhs)
}

/// True when the conditioned term of the vertex reduction at `u` is forced to
/// vanish, so the three-term form applies:
///
/// * some `v ∈ N(u)` has `N[v] ⊆ N[u]`, or
/// * some `w ∈ N(u)` supports a pendant vertex other than `u`.
///
/// A support vertex whose only pendant neighbour is `u` itself does not
/// qualify: on `P_4 = 0-1-2-3` with `u = 0` the set `{2, 3}` totally
/// dominates `G/u` while avoiding `N(u)`.
pub fn three_term_applies(g: &Graph, u: usize) -> Result<bool> {
    require_live(g, u)?;
    let closed_u = |w: usize| w == u || g.has_edge(u, w);
    let nested = g
        .neighbors(u)
        .iter()
        .any(|&v| g.neighbors(v).iter().all(|&w| closed_u(w)));
    let supported = g
        .neighbors(u)
        .iter()
        .any(|&w| g.neighbors(w).iter().any(|&p| p != u && g.degree(p) == 1));
    Ok(nested || supported)
}

/// `D_t(G-u) + x D_t(G/u) + Σ_{v ∈ N(u)} x² 1_{G⊖u⊖v}`, guarded by [`three_term_applies`].
pub fn three_term_vertex_rhs(g: &Graph, u: usize) -> Result<IntPoly> {
    require_connected(g)?;
    if !three_term_applies(g, u)? {
        return Err(TdpError::domain(format!(
            "three-term vertex reduction does not apply at vertex {u}"
        )));
    }
    three_term_vertex_unchecked(g, u)
}

/// The three-term sum without the applicability guard.
pub fn three_term_vertex_unchecked(g: &Graph, u: usize) -> Result<IntPoly> {
    require_live(g, u)?;
    let mut rhs = tdp_componentwise(&g.delete_vertex(u)?)?;
    rhs = &rhs + &tdp_componentwise(&g.contract_vertex(u)?)?.shift(1);
    rhs = &rhs + &indicator_sum(g, u)?;
    Ok(rhs)
}

/// Runs `D_n = x D_{n-1} + x² D_{n-3} + x² D_{n-4}` from four consecutive base
/// values `D_{first}..D_{first+3}` up to index `n`.
fn run_recurrence(bases: [IntPoly; 4], first: usize, n: usize) -> IntPoly {
    if n < first + 4 {
        return bases[n - first].clone();
    }
    let mut window = bases;
    for _ in first + 4..=n {
        let next = &(&window[3].shift(1) + &window[1].shift(2)) + &window[0].shift(2);
        window.rotate_left(1);
        window[3] = next;
    }
    window[3].clone()
}

/// `D_t(P_n, x)` for `n >= 1`.
pub fn path_tdp(n: usize) -> Result<IntPoly> {
    if n == 0 {
        return Err(TdpError::domain("path needs n >= 1"));
    }
    let bases = [
        IntPoly::zero(),
        IntPoly::from_i64s(&[0, 0, 1]),
        IntPoly::from_i64s(&[0, 0, 2, 1]),
        IntPoly::from_i64s(&[0, 0, 1, 2, 1]),
    ];
    Ok(run_recurrence(bases, 1, n))
}

/// `D_t(C_n, x)` for `n >= 3`.
pub fn cycle_tdp(n: usize) -> Result<IntPoly> {
    if n < 3 {
        return Err(TdpError::domain(format!("cycle needs n >= 3, got {n}")));
    }
    let bases = [
        IntPoly::from_i64s(&[0, 0, 3, 1]),
        IntPoly::from_i64s(&[0, 0, 4, 4, 1]),
        IntPoly::from_i64s(&[0, 0, 0, 5, 5, 1]),
        IntPoly::from_i64s(&[0, 0, 0, 0, 9, 6, 1]),
    ];
    Ok(run_recurrence(bases, 3, n))
}

/// `D_t` of a forest by repeated three-term vertex reductions.
pub fn tree_tdp(forest: &Graph) -> Result<IntPoly> {
    TreeSolver::new().forest(forest)
}

/// Reduction step chosen for a tree with at least three vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TreeStep {
    /// Reduce at pendant `pendant`, whose support also has another pendant
    /// neighbour: `D(T) = (1+x) D(T-p) + x² 1_{T⊖p⊖w}`.
    TwinPendant { pendant: usize, support: usize },
    /// Reduce at the degree-2 support `support` of `pendant`, with other
    /// neighbour `next`: `D(T) = x D(T/w) + x² 1_{T⊖w⊖p} + x² 1_{T⊖w⊖y}`.
    ChainSupport {
        pendant: usize,
        support: usize,
        next: usize,
    },
}

/// Picks the reduction step for a tree: the smallest pendant whose support
/// has a second pendant neighbour, otherwise the smallest pendant whose
/// support has degree 2. Consider a longest path `v1 v2 ... vk`: every
/// neighbour of `v2` other than `v3` is a leaf, so one of the two always exists
/// once the tree has three or more vertices.
pub fn tree_step(t: &Graph) -> Option<TreeStep> {
    let pendants: Vec<usize> = t.vertices().filter(|&v| t.degree(v) == 1).collect();
    let support_of = |p: usize| *t.neighbors(p).first().unwrap();
    for &p in &pendants {
        let w = support_of(p);
        if t.neighbors(w).iter().any(|&q| q != p && t.degree(q) == 1) {
            return Some(TreeStep::TwinPendant {
                pendant: p,
                support: w,
            });
        }
    }
    for &p in &pendants {
        let w = support_of(p);
        if t.degree(w) == 2 {
            let next = *t.neighbors(w).iter().find(|&&y| y != p).unwrap();
            return Some(TreeStep::ChainSupport {
                pendant: p,
                support: w,
                next,
            });
        }
    }
    None
}

/// Forest solver with a cache keyed by the exact labeled edge list of each
/// tree component. Results never depend on whether the cache hits.
#[derive(Debug, Default)]
pub struct TreeSolver {
    cache: HashMap<Vec<(usize, usize)>, IntPoly>,
    hits: usize,
    use_cache: bool,
}

impl TreeSolver {
    pub fn new() -> Self {
        TreeSolver {
            use_cache: true,
            ..Default::default()
        }
    }

    pub fn without_cache() -> Self {
        TreeSolver::default()
    }

    pub fn cache_hits(&self) -> usize {
        self.hits
    }

    /// `D_t(F, x)` for a forest `F` (zero for φ).
    pub fn forest(&mut self, f: &Graph) -> Result<IntPoly> {
        if !f.is_forest() {
            return Err(TdpError::domain("tree algorithm needs an acyclic graph"));
        }
        self.forest_unchecked(f)
    }

    fn forest_unchecked(&mut self, f: &Graph) -> Result<IntPoly> {
        if f.is_empty() {
            return Ok(IntPoly::zero());
        }
        let comps = f.components();
        if comps.iter().any(|c| c.order() == 1) {
            return Ok(IntPoly::zero());
        }
        let mut acc = IntPoly::one();
        for c in &comps {
            acc = &acc * &self.tree(c)?;
        }
        Ok(acc)
    }

    fn indicator(&mut self, h: &Graph) -> Result<IntPoly> {
        if h.is_empty() {
            Ok(IntPoly::one())
        } else {
            self.forest_unchecked(h)
        }
    }

    fn tree(&mut self, t: &Graph) -> Result<IntPoly> {
        match t.order() {
            1 => return Ok(IntPoly::zero()),
            2 => return Ok(IntPoly::monomial(1, 2)),
            _ => {}
        }
        let key: Vec<(usize, usize)> = t.edges().collect();
        if self.use_cache {
            if let Some(p) = self.cache.get(&key) {
                self.hits += 1;
                return Ok(p.clone());
            }
        }
        let result = match tree_step(t) {
            Some(TreeStep::TwinPendant { pendant, support }) => {
                let rest = self.tree(&t.delete_vertex(pendant)?)?;
                let ind = self.indicator(&t.delete_closed_neighborhoods(&[pendant, support])?)?;
                &(&one_plus_x() * &rest) + &ind.shift(2)
            }
            Some(TreeStep::ChainSupport {
                pendant,
                support,
                next,
            }) => {
                let contracted = self.tree(&t.contract_vertex(support)?)?;
                let near = self.indicator(&t.delete_closed_neighborhoods(&[support, pendant])?)?;
                let far = self.indicator(&t.delete_closed_neighborhoods(&[support, next])?)?;
                &(&contracted.shift(1) + &near.shift(2)) + &far.shift(2)
            }
            None => {
                return Err(TdpError::Inconsistency(format!(
                    "no reduction step found for tree {}",
                    t.summary()
                )))
            }
        };
        if self.use_cache {
            self.cache.insert(key, result.clone());
        }
        Ok(result)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{
        all_labeled_trees, cycle, path, random_connected_graph, random_tree, star,
    };
    use crate::oracle::brute_force_tdp;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    #[test]
    fn vertex_reduction_examples() {
        assert_eq!(vertex_reduction_rhs(&path(3), 1).unwrap(), p(&[0, 0, 2, 1]));
        assert_eq!(vertex_reduction_rhs(&path(2), 0).unwrap(), p(&[0, 0, 1]));
        assert_eq!(vertex_reduction_rhs(&path(3), 0).unwrap(), p(&[0, 0, 2, 1]));
        assert!(vertex_reduction_rhs(&Graph::edgeless(2), 0).is_err());
        assert!(vertex_reduction_rhs(&path(3), 7).is_err());
        assert!(vertex_reduction_rhs(&Graph::edgeless(1), 0)
            .unwrap()
            .is_zero());
    }

    #[test]
    fn vertex_reduction_matches_oracle_on_random_graphs() {
        for seed in 0..25 {
            let g = random_connected_graph(2 + seed as usize % 8, 0.35, seed).unwrap();
            let truth = brute_force_tdp(&g).unwrap();
            for u in g.vertices() {
                assert_eq!(
                    vertex_reduction_rhs(&g, u).unwrap(),
                    truth,
                    "{} u={u}",
                    g.summary()
                );
            }
        }
    }

    #[test]
    fn edge_reduction_examples() {
        assert_eq!(
            edge_reduction_rhs(&cycle(3), 0, 1).unwrap(),
            p(&[0, 0, 3, 1])
        );
        assert_eq!(edge_reduction_rhs(&path(2), 0, 1).unwrap(), p(&[0, 0, 1]));
        assert_eq!(
            edge_reduction_rhs(&cycle(4), 0, 1).unwrap(),
            p(&[0, 0, 4, 4, 1])
        );
        assert!(edge_reduction_rhs(&path(3), 0, 2).is_err());
    }

    #[test]
    fn edge_reduction_overcounts_on_the_middle_edge_of_p4() {
        // The pendant neighbours 0 and 3 drop out of G-e⊖u and G-e⊖v and are
        // never required to be dominated.
        let rhs = edge_reduction_rhs(&path(4), 1, 2).unwrap();
        assert_eq!(rhs, p(&[0, 0, 3, 2, 1]));
        assert_ne!(rhs, brute_force_tdp(&path(4)).unwrap());
    }

    #[test]
    fn three_term_examples() {
        assert!(three_term_applies(&path(3), 0).unwrap());
        assert!(!three_term_applies(&cycle(6), 2).unwrap());
        assert!(three_term_applies(&star(5), 3).unwrap());
        assert_eq!(
            three_term_vertex_rhs(&path(3), 0).unwrap(),
            p(&[0, 0, 2, 1])
        );
        assert_eq!(
            three_term_vertex_rhs(&star(4), 1).unwrap(),
            p(&[0, 0, 3, 3, 1])
        );
        assert!(three_term_vertex_rhs(&cycle(6), 0).is_err());
    }

    #[test]
    fn support_of_u_alone_does_not_license_the_three_term_form() {
        // Vertex 1 of P_4 is a support vertex only because of u = 0.
        let g = path(4);
        assert!(!three_term_applies(&g, 0).unwrap());
        assert!(matches!(
            three_term_vertex_rhs(&g, 0),
            Err(TdpError::Domain(_))
        ));
        assert_eq!(
            three_term_vertex_unchecked(&g, 0).unwrap(),
            p(&[0, 0, 2, 3, 1])
        );
        assert_eq!(vertex_reduction_rhs(&g, 0).unwrap(), p(&[0, 0, 1, 2, 1]));
        // the nested-neighbourhood condition covers u = 1 (N[0] ⊆ N[1])
        assert_eq!(three_term_vertex_rhs(&g, 1).unwrap(), p(&[0, 0, 1, 2, 1]));
    }

    #[test]
    fn three_term_agrees_with_full_reduction_when_applicable() {
        for seed in 0..40 {
            let g = random_connected_graph(2 + seed as usize % 9, 0.15, 100 + seed).unwrap();
            for u in g.vertices() {
                if three_term_applies(&g, u).unwrap() {
                    assert_eq!(
                        three_term_vertex_rhs(&g, u).unwrap(),
                        vertex_reduction_rhs(&g, u).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn recurrence_examples() {
        assert_eq!(path_tdp(4).unwrap(), p(&[0, 0, 1, 2, 1]));
        assert_eq!(path_tdp(5).unwrap(), p(&[0, 0, 0, 1, 3, 1]));
        assert!(path_tdp(1).unwrap().is_zero());
        assert!(path_tdp(0).is_err());
        assert_eq!(cycle_tdp(5).unwrap(), p(&[0, 0, 0, 5, 5, 1]));
        assert_eq!(cycle_tdp(7).unwrap(), p(&[0, 0, 0, 0, 7, 14, 7, 1]));
        assert_eq!(cycle_tdp(3).unwrap(), p(&[0, 0, 3, 1]));
        assert!(cycle_tdp(2).is_err());
    }

    #[test]
    fn recurrences_match_oracle() {
        for n in 1..=14 {
            assert_eq!(
                path_tdp(n).unwrap(),
                brute_force_tdp(&path(n)).unwrap(),
                "P_{n}"
            );
        }
        for n in 3..=14 {
            assert_eq!(
                cycle_tdp(n).unwrap(),
                brute_force_tdp(&cycle(n)).unwrap(),
                "C_{n}"
            );
        }
    }

    #[test]
    fn tree_examples() {
        assert_eq!(tree_tdp(&star(5)).unwrap(), p(&[0, 0, 4, 6, 4, 1]));
        assert_eq!(tree_tdp(&path(2)).unwrap(), p(&[0, 0, 1]));
        assert_eq!(tree_tdp(&path(4)).unwrap(), p(&[0, 0, 1, 2, 1]));
        assert!(tree_tdp(&Graph::edgeless(1)).unwrap().is_zero());
        assert!(tree_tdp(&Graph::empty()).unwrap().is_zero());
        assert!(matches!(tree_tdp(&cycle(4)), Err(TdpError::Domain(_))));
    }

    #[test]
    fn tree_step_choice_is_deterministic() {
        assert_eq!(
            tree_step(&path(4)),
            Some(TreeStep::ChainSupport {
                pendant: 0,
                support: 1,
                next: 2
            })
        );
        assert_eq!(
            tree_step(&star(4)),
            Some(TreeStep::TwinPendant {
                pendant: 1,
                support: 0
            })
        );
    }

    #[test]
    fn tree_matches_oracle_exhaustively_for_small_orders() {
        for n in 1..=7 {
            for t in all_labeled_trees(n).unwrap() {
                assert_eq!(
                    tree_tdp(&t).unwrap(),
                    brute_force_tdp(&t).unwrap(),
                    "{}",
                    t.summary()
                );
            }
        }
    }

    #[test]
    fn cache_does_not_change_results() {
        let mut cached = TreeSolver::new();
        let mut plain = TreeSolver::without_cache();
        for seed in 0..30 {
            let t = random_tree(3 + seed as usize % 14, seed).unwrap();
            assert_eq!(cached.forest(&t).unwrap(), plain.forest(&t).unwrap());
            assert_eq!(cached.forest(&t).unwrap(), plain.forest(&t).unwrap());
        }
        assert!(cached.cache_hits() > 0);
        assert_eq!(plain.cache_hits(), 0);
    }
}
