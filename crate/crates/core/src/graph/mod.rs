//! Directed multigraphs, vertex sets and edge multisets.

mod algo;
mod contract;
mod laminar;

pub use algo::{
    bfs_path, components, euler_walk, is_eulerian_connected, scc_topological, scc_topological_adj,
    shortest_path, EulerianCheck,
};
pub use contract::{contract, ContractionMap};
pub use laminar::{check_laminar, LaminarFamily};

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub tail: VertexId,
    pub head: VertexId,
    pub cost: Rational,
}

/// Directed multigraph with dense vertex and edge ids and nonnegative costs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    n: usize,
    edges: Vec<Edge>,
    out_adj: Vec<Vec<EdgeId>>,
    in_adj: Vec<Vec<EdgeId>>,
}

impl Digraph {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            edges: Vec::new(),
            out_adj: vec![Vec::new(); n],
            in_adj: vec![Vec::new(); n],
        }
    }

    pub fn from_edges(
        n: usize,
        edges: impl IntoIterator<Item = (VertexId, VertexId, Rational)>,
    ) -> Result<Self> {
        let mut g = Self::new(n);
        for (t, h, c) in edges {
            g.add_edge(t, h, c)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, tail: VertexId, head: VertexId, cost: Rational) -> Result<EdgeId> {
        if tail >= self.n || head >= self.n {
            return Err(Error::Input(format!(
                "edge ({tail},{head}) out of range for n={}",
                self.n
            )));
        }
        if tail == head {
            return Err(Error::Input(format!("self-loop at vertex {tail}")));
        }
        if cost.is_negative() {
            return Err(Error::Input(format!(
                "negative cost on edge ({tail},{head})"
            )));
        }
        let id = self.edges.len();
        self.edges.push(Edge { tail, head, cost });
        self.out_adj[tail].push(id);
        self.in_adj[head].push(id);
        Ok(id)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn cost(&self, e: EdgeId) -> &Rational {
        &self.edges[e].cost
    }

    pub fn out_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.out_adj[v]
    }

    pub fn in_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.in_adj[v]
    }

    /// Same topology with replaced costs.
    pub fn with_costs(&self, costs: Vec<Rational>) -> Result<Self> {
        if costs.len() != self.m() {
            return Err(Error::Input("cost vector length mismatch".into()));
        }
        let mut g = self.clone();
        for (e, c) in g.edges.iter_mut().zip(costs) {
            if c.is_negative() {
                return Err(Error::Input("negative cost".into()));
            }
            e.cost = c;
        }
        Ok(g)
    }

    /// Subgraph on the same vertices keeping the selected edges; returns the
    /// parent id of every kept edge.
    pub fn edge_subgraph(&self, keep: impl Fn(EdgeId) -> bool) -> (Digraph, Vec<EdgeId>) {
        let mut g = Digraph::new(self.n);
        let mut origin = Vec::new();
        for (id, e) in self.edges.iter().enumerate() {
            if keep(id) {
                g.add_edge(e.tail, e.head, e.cost.clone())
                    .expect("edge valid in parent");
                origin.push(id);
            }
        }
        (g, origin)
    }

    pub fn is_strongly_connected(&self) -> bool {
        self.is_strongly_connected_on(&VertexSet::full(self.n))
    }

    /// Whether `g[set]` is strongly connected (the empty set is not).
    pub fn is_strongly_connected_on(&self, set: &VertexSet) -> bool {
        if set.is_empty() {
            return false;
        }
        let mask = set.mask(self.n);
        let root = set.as_slice()[0];
        let reach = |forward: bool| {
            let mut seen = vec![false; self.n];
            let mut stack = vec![root];
            seen[root] = true;
            let mut count = 1;
            while let Some(v) = stack.pop() {
                let adj = if forward {
                    &self.out_adj[v]
                } else {
                    &self.in_adj[v]
                };
                for &e in adj {
                    let w = if forward {
                        self.edges[e].head
                    } else {
                        self.edges[e].tail
                    };
                    if mask[w] && !seen[w] {
                        seen[w] = true;
                        count += 1;
                        stack.push(w);
                    }
                }
            }
            count
        };
        reach(true) == set.len() && reach(false) == set.len()
    }

    /// Whether edge `e` has exactly one endpoint in `mask`.
    pub fn crosses(&self, e: EdgeId, mask: &[bool]) -> bool {
        let ed = &self.edges[e];
        mask[ed.tail] != mask[ed.head]
    }
}

/// Sorted, duplicate-free set of vertex ids. Orders lexicographically by
/// contents, which gives the deterministic tie-breaking used throughout.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct VertexSet(Vec<VertexId>);

impl VertexSet {
    pub fn new(mut v: Vec<VertexId>) -> Self {
        v.sort_unstable();
        v.dedup();
        Self(v)
    }

    pub fn singleton(v: VertexId) -> Self {
        Self(vec![v])
    }

    pub fn full(n: usize) -> Self {
        Self((0..n).collect())
    }

    pub fn from_mask(mask: &[bool]) -> Self {
        Self(
            mask.iter()
                .enumerate()
                .filter(|(_, &b)| b)
                .map(|(i, _)| i)
                .collect(),
        )
    }

    pub fn as_slice(&self) -> &[VertexId] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.0.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn smallest(&self) -> Option<VertexId> {
        self.0.first().copied()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn mask(&self, n: usize) -> Vec<bool> {
        let mut m = vec![false; n];
        for &v in &self.0 {
            m[v] = true;
        }
        m
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.len() <= other.len() && self.0.iter().all(|&v| other.contains(v))
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return false,
            }
        }
        true
    }

    /// Neither nested nor disjoint.
    pub fn crosses(&self, other: &VertexSet) -> bool {
        !self.is_disjoint(other) && !self.is_subset(other) && !other.is_subset(self)
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        VertexSet::new(v)
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        VertexSet(
            self.0
                .iter()
                .copied()
                .filter(|&v| other.contains(v))
                .collect(),
        )
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        VertexSet(
            self.0
                .iter()
                .copied()
                .filter(|&v| !other.contains(v))
                .collect(),
        )
    }

    pub fn complement(&self, n: usize) -> VertexSet {
        VertexSet((0..n).filter(|&v| !self.contains(v)).collect())
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.0.iter()).finish()
    }
}

impl FromIterator<VertexId> for VertexSet {
    fn from_iter<I: IntoIterator<Item = VertexId>>(iter: I) -> Self {
        VertexSet::new(iter.into_iter().collect())
    }
}

/// Multiset of edges of some host graph.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct EdgeMultiset(BTreeMap<EdgeId, u64>);

impl EdgeMultiset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_edges(edges: impl IntoIterator<Item = EdgeId>) -> Self {
        let mut f = Self::new();
        for e in edges {
            f.add(e, 1);
        }
        f
    }

    pub fn add(&mut self, e: EdgeId, k: u64) {
        if k > 0 {
            *self.0.entry(e).or_insert(0) += k;
        }
    }

    pub fn remove_one(&mut self, e: EdgeId) -> bool {
        match self.0.get_mut(&e) {
            Some(k) if *k > 1 => {
                *k -= 1;
                true
            }
            Some(_) => {
                self.0.remove(&e);
                true
            }
            None => false,
        }
    }

    pub fn extend(&mut self, other: &EdgeMultiset) {
        for (e, k) in other.iter() {
            self.add(e, k);
        }
    }

    pub fn get(&self, e: EdgeId) -> u64 {
        self.0.get(&e).copied().unwrap_or(0)
    }

    /// `(edge, multiplicity)` pairs with positive multiplicity, by edge id.
    pub fn iter(&self) -> impl Iterator<Item = (EdgeId, u64)> + '_ {
        self.0.iter().map(|(&e, &k)| (e, k))
    }

    /// Every edge repeated by its multiplicity.
    pub fn expanded(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.iter()
            .flat_map(|(e, k)| std::iter::repeat(e).take(k as usize))
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Total multiplicity.
    pub fn len(&self) -> u64 {
        self.0.values().sum()
    }

    pub fn support_len(&self) -> usize {
        self.0.len()
    }

    pub fn validate(&self, g: &Digraph) -> Result<()> {
        match self.0.keys().next_back() {
            Some(&e) if e >= g.m() => Err(Error::Input(format!("unknown edge id {e}"))),
            _ => Ok(()),
        }
    }

    pub fn cost(&self, g: &Digraph) -> Rational {
        self.cost_by(|e| g.cost(e).clone())
    }

    pub fn cost_by(&self, c: impl Fn(EdgeId) -> Rational) -> Rational {
        let mut total = Rational::zero();
        for (e, k) in self.iter() {
            total += c(e) * Rational::from_integer(k.into());
        }
        total
    }

    /// Vertices incident to some edge.
    pub fn vertices(&self, g: &Digraph) -> VertexSet {
        self.iter()
            .flat_map(|(e, _)| [g.edge(e).tail, g.edge(e).head])
            .collect()
    }

    /// Edges with both endpoints in `mask`.
    pub fn restricted_to(&self, g: &Digraph, mask: &[bool]) -> EdgeMultiset {
        EdgeMultiset(
            self.0
                .iter()
                .filter(|(&e, _)| mask[g.edge(e).tail] && mask[g.edge(e).head])
                .map(|(&e, &k)| (e, k))
                .collect(),
        )
    }
}

impl fmt::Debug for EdgeMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.0.iter()).finish()
    }
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::rational::int;

    #[test]
    fn rejects_bad_edges() {
        let mut g = Digraph::new(2);
        assert!(g.add_edge(0, 0, int(1)).is_err());
        assert!(g.add_edge(0, 2, int(1)).is_err());
        assert!(g.add_edge(0, 1, int(-1)).is_err());
        assert!(g.add_edge(0, 1, int(0)).is_ok());
    }

    #[test]
    fn strong_connectivity() {
        assert!(c3().is_strongly_connected());
        assert!(two_tri().is_strongly_connected());
        let (g, _) = two_tri().edge_subgraph(|e| e != 7);
        assert!(!g.is_strongly_connected());
        assert!(g.is_strongly_connected_on(&VertexSet::new(vec![3, 4, 5])));
    }

    #[test]
    fn vertex_set_relations() {
        let a = VertexSet::new(vec![2, 0, 1, 1]);
        let b = VertexSet::new(vec![1, 2, 3]);
        assert_eq!(a.as_slice(), &[0, 1, 2]);
        assert!(a.crosses(&b));
        assert_eq!(a.intersection(&b), VertexSet::new(vec![1, 2]));
        assert_eq!(a.union(&b), VertexSet::full(4));
        assert_eq!(a.complement(4), VertexSet::singleton(3));
        assert!(VertexSet::singleton(3).is_disjoint(&a));
        assert!(!VertexSet::singleton(1).crosses(&a));
    }

    #[test]
    fn multiset_cost_and_removal() {
        let g = two_tri();
        let mut f = EdgeMultiset::from_edges([6, 7, 6]);
        assert_eq!(f.get(6), 2);
        assert_eq!(f.cost(&g), int(15));
        assert!(f.remove_one(6));
        assert!(f.remove_one(6));
        assert!(!f.remove_one(6));
        assert_eq!(f.len(), 1);
        assert!(EdgeMultiset::from_edges([8]).validate(&g).is_err());
    }
}
