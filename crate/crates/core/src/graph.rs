//! Immutable simple graphs with stable vertex labels.
//!
//! A [`Graph`] owns a fixed label space `0..capacity`. Derived graphs
//! (vertex deletion, contraction, closed-neighbourhood deletion) keep the
//! original labels and mark removed vertices as dead, so a condition such as
//! "v belongs to W" refers to the same vertex across `G`, `G - e`, `G/u` and
//! `G ⊖ u ⊖ v`.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use crate::error::{Result, TdpError};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    live: Vec<bool>,
    adj: Vec<BTreeSet<usize>>,
}

/// Pendant, supporting, degree-2 and isolated vertices of a graph.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VertexClassification {
    pub pendant: BTreeSet<usize>,
    pub supporting: BTreeSet<usize>,
    pub degree2: BTreeSet<usize>,
    pub isolated: BTreeSet<usize>,
}

impl Graph {
    /// The empty graph φ.
    pub fn empty() -> Self {
        Graph {
            live: Vec::new(),
            adj: Vec::new(),
        }
    }

    /// `n` live vertices and no edges.
    pub fn edgeless(n: usize) -> Self {
        Graph {
            live: vec![true; n],
            adj: vec![BTreeSet::new(); n],
        }
    }

    /// Builds a graph on labels `0..n` from an edge list, rejecting loops,
    /// out-of-range endpoints and repeated edges.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::edgeless(n);
        for &(u, v) in edges {
            g.try_add_edge(u, v)?;
        }
        Ok(g)
    }

    fn try_add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        let n = self.capacity();
        if u >= n || v >= n {
            return Err(TdpError::domain(format!(
                "edge {u}-{v} references a vertex outside 0..{n}"
            )));
        }
        if u == v {
            return Err(TdpError::domain(format!("self-loop at vertex {u}")));
        }
        if !self.live[u] || !self.live[v] {
            return Err(TdpError::domain(format!(
                "edge {u}-{v} touches a dead vertex"
            )));
        }
        if !self.adj[u].insert(v) {
            return Err(TdpError::domain(format!("duplicate edge {u}-{v}")));
        }
        self.adj[v].insert(u);
        Ok(())
    }

    pub(crate) fn add_edge_unchecked(&mut self, u: usize, v: usize) {
        debug_assert!(u != v && self.live[u] && self.live[v]);
        self.adj[u].insert(v);
        self.adj[v].insert(u);
    }

    /// Size of the label space, including dead labels.
    pub fn capacity(&self) -> usize {
        self.live.len()
    }

    /// Number of live vertices.
    pub fn order(&self) -> usize {
        self.live.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.live.iter().any(|&b| b)
    }

    pub fn is_live(&self, v: usize) -> bool {
        self.live.get(v).copied().unwrap_or(false)
    }

    /// Live labels in ascending order.
    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.live
            .iter()
            .enumerate()
            .filter_map(|(v, &alive)| alive.then_some(v))
    }

    pub fn neighbors(&self, v: usize) -> &BTreeSet<usize> {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj.get(u).is_some_and(|n| n.contains(&v))
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.vertices()
            .flat_map(move |u| self.adj[u].range(u + 1..).map(move |&v| (u, v)))
    }

    pub fn edge_count(&self) -> usize {
        self.vertices().map(|v| self.degree(v)).sum::<usize>() / 2
    }

    fn require_live(&self, v: usize) -> Result<()> {
        if self.is_live(v) {
            Ok(())
        } else {
            Err(TdpError::domain(format!("vertex {v} is not live")))
        }
    }

    /// Induced subgraph on the live vertices accepted by `keep`.
    pub fn induced(&self, keep: impl Fn(usize) -> bool) -> Graph {
        let live: Vec<bool> = (0..self.capacity())
            .map(|v| self.live[v] && keep(v))
            .collect();
        let adj = (0..self.capacity())
            .map(|v| {
                if live[v] {
                    self.adj[v].iter().copied().filter(|&w| live[w]).collect()
                } else {
                    BTreeSet::new()
                }
            })
            .collect();
        Graph { live, adj }
    }

    /// `G - u`.
    pub fn delete_vertex(&self, u: usize) -> Result<Graph> {
        self.require_live(u)?;
        Ok(self.induced(|v| v != u))
    }

    /// `G/u`: delete `u` and join every pair of its non-adjacent neighbours.
    pub fn contract_vertex(&self, u: usize) -> Result<Graph> {
        let mut g = self.delete_vertex(u)?;
        let nbrs: Vec<usize> = self.adj[u].iter().copied().collect();
        for (i, &a) in nbrs.iter().enumerate() {
            for &b in &nbrs[i + 1..] {
                g.add_edge_unchecked(a, b);
            }
        }
        Ok(g)
    }

    /// Induced subgraph on `V(G) - N[s1] - N[s2] - ...`, neighbourhoods taken in `self`.
    pub fn delete_closed_neighborhoods(&self, centers: &[usize]) -> Result<Graph> {
        let mut removed = vec![false; self.capacity()];
        for &s in centers {
            self.require_live(s)?;
            removed[s] = true;
            for &w in &self.adj[s] {
                removed[w] = true;
            }
        }
        Ok(self.induced(|v| !removed[v]))
    }

    /// `G - e`; both endpoints stay.
    pub fn delete_edge(&self, u: usize, v: usize) -> Result<Graph> {
        if !self.has_edge(u, v) {
            return Err(TdpError::domain(format!("{u}-{v} is not an edge")));
        }
        let mut g = self.clone();
        g.adj[u].remove(&v);
        g.adj[v].remove(&u);
        Ok(g)
    }

    /// Connected components in ascending order of their smallest label.
    pub fn components(&self) -> Vec<Graph> {
        self.component_sets()
            .into_iter()
            .map(|set| self.induced(|v| set.contains(&v)))
            .collect()
    }

    pub(crate) fn component_sets(&self) -> Vec<BTreeSet<usize>> {
        let mut seen = vec![false; self.capacity()];
        let mut out = Vec::new();
        for start in self.vertices() {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = BTreeSet::new();
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                comp.insert(v);
                for &w in &self.adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    /// True for φ and for any graph with exactly one component.
    pub fn is_connected(&self) -> bool {
        self.component_sets().len() <= 1
    }

    pub fn is_forest(&self) -> bool {
        self.edge_count() + self.component_sets().len() == self.order()
    }

    pub fn is_tree(&self) -> bool {
        !self.is_empty() && self.is_connected() && self.is_forest()
    }

    /// Connected, 2-regular, at least three vertices.
    pub fn is_cycle(&self) -> bool {
        self.order() >= 3 && self.is_connected() && self.vertices().all(|v| self.degree(v) == 2)
    }

    /// Connected forest with maximum degree at most 2 (includes `P_1`).
    pub fn is_path(&self) -> bool {
        self.is_tree() && self.vertices().all(|v| self.degree(v) <= 2)
    }

    /// A tree with a vertex adjacent to every other vertex (`S_2 = P_2`, `S_3 = P_3`).
    pub fn is_star(&self) -> bool {
        let n = self.order();
        n >= 2 && self.is_tree() && self.vertices().any(|v| self.degree(v) == n - 1)
    }

    pub fn classify_vertices(&self) -> VertexClassification {
        let mut c = VertexClassification::default();
        for v in self.vertices() {
            match self.degree(v) {
                0 => {
                    c.isolated.insert(v);
                }
                1 => {
                    c.pendant.insert(v);
                    c.supporting.extend(self.adj[v].iter().copied());
                }
                2 => {
                    c.degree2.insert(v);
                }
                _ => {}
            }
        }
        c
    }

    /// Relabels live vertices to `0..order` preserving their relative order.
    pub fn compacted(&self) -> Graph {
        let index = self.label_index();
        let mut g = Graph::edgeless(self.order());
        for (u, v) in self.edges() {
            g.add_edge_unchecked(index[u], index[v]);
        }
        g
    }

    /// Map from label to position among live labels (`usize::MAX` for dead labels).
    pub(crate) fn label_index(&self) -> Vec<usize> {
        let mut index = vec![usize::MAX; self.capacity()];
        for (i, v) in self.vertices().enumerate() {
            index[v] = i;
        }
        index
    }

    /// Edge-list text of the compacted graph; parses back with [`parse_edge_list`].
    pub fn to_edge_list(&self) -> String {
        let g = self.compacted();
        let mut s = format!("n {}\n", g.capacity());
        for (u, v) in g.edges() {
            s.push_str(&format!("{u} {v}\n"));
        }
        s
    }

    /// One-line form `n=4: 0-1 1-2 2-3` used in reports.
    pub fn summary(&self) -> String {
        let g = self.compacted();
        let edges: Vec<String> = g.edges().map(|(u, v)| format!("{u}-{v}")).collect();
        if edges.is_empty() {
            format!("n={}", g.capacity())
        } else {
            format!("n={}: {}", g.capacity(), edges.join(" "))
        }
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vs: Vec<usize> = self.vertices().collect();
        let es: Vec<(usize, usize)> = self.edges().collect();
        f.debug_struct("Graph")
            .field("vertices", &vs)
            .field("edges", &es)
            .finish()
    }
}

/// Parses the edge-list text format:
///
/// ```text
/// # optional comments
/// n 4
/// 0 1
/// 1 2
/// ```
///
/// Blank lines are ignored. Line numbers in errors are 1-based.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut graph: Option<Graph> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| TdpError::Parse {
            line: line_no,
            message,
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        match graph.as_mut() {
            None => {
                if fields.len() != 2 || fields[0] != "n" {
                    return Err(err(format!("expected header `n <count>`, found `{line}`")));
                }
                let n: usize = fields[1]
                    .parse()
                    .map_err(|_| err(format!("invalid vertex count `{}`", fields[1])))?;
                graph = Some(Graph::edgeless(n));
            }
            Some(g) => {
                if fields.len() != 2 {
                    return Err(err(format!("expected `<u> <v>`, found `{line}`")));
                }
                let parse = |s: &str| {
                    s.parse::<usize>()
                        .map_err(|_| err(format!("invalid vertex index `{s}`")))
                };
                let (u, v) = (parse(fields[0])?, parse(fields[1])?);
                let n = g.capacity();
                if u >= n || v >= n {
                    return Err(err(format!(
                        "vertex index out of range in `{line}` (n = {n})"
                    )));
                }
                if u == v {
                    return Err(err(format!("self-loop at vertex {u}")));
                }
                if g.has_edge(u, v) {
                    return Err(err(format!("duplicate edge {u}-{v}")));
                }
                g.add_edge_unchecked(u, v);
            }
        }
    }
    graph.ok_or(TdpError::Parse {
        line: 0,
        message: "missing `n <count>` header".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{cycle, path, star};

    fn set(xs: &[usize]) -> BTreeSet<usize> {
        xs.iter().copied().collect()
    }

    #[test]
    fn parse_examples() {
        assert_eq!(parse_edge_list("n 2\n0 1").unwrap(), path(2));
        assert_eq!(parse_edge_list("n 3\n0 1\n1 2").unwrap(), path(3));
        let e = parse_edge_list("n 3\n0 0").unwrap_err();
        assert!(matches!(e, TdpError::Parse { line: 2, .. }), "{e}");
        assert!(e.to_string().contains("self-loop"));
    }

    #[test]
    fn parse_errors_name_the_line() {
        let cases = [
            ("n 3\n0 1\n0 1", 3, "duplicate"),
            ("n 3\n1 0\n0 1", 3, "duplicate"),
            ("# c\nn 3\n0 5", 3, "out of range"),
            ("n 3\n0 1 2", 2, "expected"),
            ("n x", 1, "invalid vertex count"),
            ("0 1", 1, "header"),
            ("n 3\n0 a", 2, "invalid vertex index"),
        ];
        for (text, line, needle) in cases {
            match parse_edge_list(text) {
                Err(TdpError::Parse { line: l, message }) => {
                    assert_eq!(l, line, "{text:?}");
                    assert!(message.contains(needle), "{message}");
                }
                other => panic!("{text:?}: {other:?}"),
            }
        }
        assert!(parse_edge_list("# only a comment\n").is_err());
    }

    #[test]
    fn parse_keeps_isolated_vertices() {
        let g = parse_edge_list("# demo\n\nn 5\n0 1\n").unwrap();
        assert_eq!(g.order(), 5);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.classify_vertices().isolated, set(&[2, 3, 4]));
    }

    #[test]
    fn delete_vertex_examples() {
        let g = path(3).delete_vertex(1).unwrap();
        assert_eq!(g.vertices().collect::<Vec<_>>(), vec![0, 2]);
        assert_eq!(g.edge_count(), 0);

        let g = cycle(4).delete_vertex(0).unwrap();
        assert_eq!(g.vertices().collect::<Vec<_>>(), vec![1, 2, 3]);
        assert!(g.is_path() && g.has_edge(1, 2) && g.has_edge(2, 3));

        let g = path(2).delete_vertex(0).unwrap();
        assert_eq!(g.vertices().collect::<Vec<_>>(), vec![1]);
        assert!(matches!(g.delete_vertex(0), Err(TdpError::Domain(_))));
    }

    #[test]
    fn contract_vertex_examples() {
        let g = path(3).contract_vertex(1).unwrap();
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 2)]);

        let g = path(3).contract_vertex(0).unwrap();
        assert_eq!(g, path(3).delete_vertex(0).unwrap());
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(1, 2)]);

        let g = cycle(4).contract_vertex(0).unwrap();
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(1, 2), (1, 3), (2, 3)]);
        assert!(cycle(4)
            .delete_vertex(0)
            .unwrap()
            .contract_vertex(0)
            .is_err());
    }

    #[test]
    fn delete_closed_neighborhood_examples() {
        assert!(path(2)
            .delete_closed_neighborhoods(&[0, 1])
            .unwrap()
            .is_empty());
        let g = cycle(4).delete_closed_neighborhoods(&[0]).unwrap();
        assert_eq!(g.vertices().collect::<Vec<_>>(), vec![2]);
        let g = path(6).delete_closed_neighborhoods(&[0, 1]).unwrap();
        assert_eq!(g.vertices().collect::<Vec<_>>(), vec![3, 4, 5]);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(3, 4), (4, 5)]);
        assert!(path(3)
            .delete_vertex(2)
            .unwrap()
            .delete_closed_neighborhoods(&[2])
            .is_err());
    }

    #[test]
    fn delete_edge_examples() {
        let g = cycle(4).delete_edge(0, 1).unwrap();
        assert!(g.is_path());
        assert_eq!(g.degree(1), 1);
        assert_eq!(g.degree(0), 1);
        let g = path(2).delete_edge(1, 0).unwrap();
        assert_eq!((g.order(), g.edge_count()), (2, 0));
        assert!(cycle(3).delete_edge(0, 2).unwrap().is_path());
        assert!(path(3).delete_edge(0, 2).is_err());
    }

    #[test]
    fn components_examples() {
        let g = Graph::from_edges(5, &[(0, 1), (2, 3), (3, 4)]).unwrap();
        let comps = g.components();
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[0].vertices().collect::<Vec<_>>(), vec![0, 1]);
        assert_eq!(comps[1].vertices().collect::<Vec<_>>(), vec![2, 3, 4]);
        assert!(comps[1].is_path());
        assert_eq!(cycle(5).components(), vec![cycle(5)]);
        assert!(Graph::empty().components().is_empty());
    }

    #[test]
    fn classification_examples() {
        let c = path(4).classify_vertices();
        assert_eq!(c.pendant, set(&[0, 3]));
        assert_eq!(c.supporting, set(&[1, 2]));
        assert_eq!(c.degree2, set(&[1, 2]));
        assert!(c.isolated.is_empty());

        let c = star(5).classify_vertices();
        assert_eq!(c.pendant, set(&[1, 2, 3, 4]));
        assert_eq!(c.supporting, set(&[0]));
        assert!(c.degree2.is_empty());

        let c = cycle(4).classify_vertices();
        assert!(c.pendant.is_empty() && c.supporting.is_empty());
        assert_eq!(c.degree2, set(&[0, 1, 2, 3]));

        let c = path(2).classify_vertices();
        assert_eq!(c.pendant, c.supporting);
    }

    #[test]
    fn shape_predicates() {
        assert!(path(1).is_path() && path(1).is_tree());
        assert!(!Graph::empty().is_tree());
        assert!(Graph::empty().is_forest());
        assert!(cycle(3).is_cycle() && !cycle(3).is_forest());
        assert!(star(2).is_star() && star(3).is_star() && !path(4).is_star());
    }

    #[test]
    fn edge_list_text_round_trips_through_compaction() {
        let g = cycle(5).delete_vertex(2).unwrap();
        let text = g.to_edge_list();
        assert_eq!(text, "n 4\n0 1\n0 3\n2 3\n");
        assert_eq!(parse_edge_list(&text).unwrap(), g.compacted());
    }
}
