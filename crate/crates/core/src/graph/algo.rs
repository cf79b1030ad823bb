use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use super::{Digraph, EdgeId, EdgeMultiset, VertexId, VertexSet};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Connected components (undirected sense) of the graph on `0..n` with the
/// given edge list, isolated vertices included, ordered by smallest vertex.
pub fn components(
    n: usize,
    edges: impl IntoIterator<Item = (VertexId, VertexId)>,
) -> Vec<VertexSet> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut v: usize) -> usize {
        while p[v] != v {
            p[v] = p[p[v]];
            v = p[v];
        }
        v
    }
    for (a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    let mut slot: Vec<Option<usize>> = vec![None; n];
    let mut out: Vec<Vec<VertexId>> = Vec::new();
    for v in 0..n {
        let r = find(&mut parent, v);
        let idx = *slot[r].get_or_insert_with(|| {
            out.push(Vec::new());
            out.len() - 1
        });
        out[idx].push(v);
    }
    out.into_iter().map(VertexSet::new).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EulerianCheck {
    pub eulerian: bool,
    pub components: Vec<VertexSet>,
}

impl EulerianCheck {
    /// Eulerian and a single component.
    pub fn is_tour(&self) -> bool {
        self.eulerian && self.components.len() == 1
    }
}

pub fn is_eulerian_connected(g: &Digraph, f: &EdgeMultiset) -> Result<EulerianCheck> {
    f.validate(g)?;
    let mut balance = vec![0i64; g.n()];
    for (e, k) in f.iter() {
        let ed = g.edge(e);
        balance[ed.tail] += k as i64;
        balance[ed.head] -= k as i64;
    }
    let comps = components(
        g.n(),
        f.iter().map(|(e, _)| (g.edge(e).tail, g.edge(e).head)),
    );
    Ok(EulerianCheck {
        eulerian: balance.iter().all(|&b| b == 0),
        components: comps,
    })
}

/// Closed walk (Hierholzer) using every edge of `f` exactly its multiplicity.
pub fn euler_walk(g: &Digraph, f: &EdgeMultiset, start: VertexId) -> Result<Vec<EdgeId>> {
    let check = is_eulerian_connected(g, f)?;
    let stage = "euler_walk";
    if !check.eulerian {
        return Err(Error::contract(stage, "multiset is not Eulerian"));
    }
    if f.is_empty() {
        return Ok(Vec::new());
    }
    let support = f.vertices(g);
    if !support.contains(start) {
        return Err(Error::contract(
            stage,
            format!("start vertex {start} has no incident edge"),
        ));
    }
    if check
        .components
        .iter()
        .filter(|c| c.len() > 1 || support.contains(c.as_slice()[0]))
        .count()
        != 1
    {
        return Err(Error::contract(stage, "support is disconnected"));
    }
    // Remaining multiplicity per out-edge, consumed in edge-id order.
    let mut remaining: Vec<(EdgeId, u64)> = f.iter().collect();
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); g.n()];
    for (i, &(e, _)) in remaining.iter().enumerate() {
        out[g.edge(e).tail].push(i);
    }
    let mut cursor = vec![0usize; g.n()];
    let mut stack: Vec<(VertexId, Option<EdgeId>)> = vec![(start, None)];
    let mut walk = Vec::with_capacity(f.len() as usize);
    while let Some(&(v, _)) = stack.last() {
        let mut advanced = false;
        while cursor[v] < out[v].len() {
            let i = out[v][cursor[v]];
            if remaining[i].1 == 0 {
                cursor[v] += 1;
                continue;
            }
            remaining[i].1 -= 1;
            let e = remaining[i].0;
            stack.push((g.edge(e).head, Some(e)));
            advanced = true;
            break;
        }
        if !advanced {
            let (_, e) = stack.pop().unwrap();
            if let Some(e) = e {
                walk.push(e);
            }
        }
    }
    walk.reverse();
    debug_assert_eq!(walk.len() as u64, f.len());
    Ok(walk)
}

/// Strongly connected components of `g[restrict]` in topological order.
pub fn scc_topological(g: &Digraph, restrict: &VertexSet) -> Vec<VertexSet> {
    let mut adj = vec![Vec::new(); g.n()];
    for e in g.edges() {
        adj[e.tail].push(e.head);
    }
    scc_topological_adj(&adj, &restrict.mask(g.n()))
}

/// Tarjan on an adjacency list restricted to `mask`; components come out in
/// topological order of the condensation (sources first).
pub fn scc_topological_adj(adj: &[Vec<VertexId>], mask: &[bool]) -> Vec<VertexSet> {
    let n = adj.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut next = 0usize;
    let mut out = Vec::new();
    for root in 0..n {
        if !mask[root] || index[root] != usize::MAX {
            continue;
        }
        // Iterative DFS: (vertex, next neighbour position).
        let mut call: Vec<(VertexId, usize)> = vec![(root, 0)];
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            if *pos < adj[v].len() {
                let w = adj[v][*pos];
                *pos += 1;
                if !mask[w] {
                    continue;
                }
                if index[w] == usize::MAX {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    out.push(VertexSet::new(comp));
                }
            }
        }
    }
    // Tarjan emits sinks first.
    out.reverse();
    out
}

/// Fewest-edges path from `s` to `t` using only vertices in `mask` and edges
/// accepted by `allow`. Neighbours are scanned in edge-id order.
pub fn bfs_path(
    g: &Digraph,
    s: VertexId,
    t: VertexId,
    mask: &[bool],
    allow: impl Fn(EdgeId) -> bool,
) -> Option<Vec<EdgeId>> {
    if !mask[s] || !mask[t] {
        return None;
    }
    if s == t {
        return Some(Vec::new());
    }
    let mut pred: Vec<Option<EdgeId>> = vec![None; g.n()];
    let mut seen = vec![false; g.n()];
    seen[s] = true;
    let mut queue = VecDeque::from([s]);
    while let Some(v) = queue.pop_front() {
        for &e in g.out_edges(v) {
            let w = g.edge(e).head;
            if seen[w] || !mask[w] || !allow(e) {
                continue;
            }
            seen[w] = true;
            pred[w] = Some(e);
            if w == t {
                return Some(unwind(g, &pred, s, t));
            }
            queue.push_back(w);
        }
    }
    None
}

/// Cheapest path by edge cost (exact Dijkstra) under the same filters.
/// Ties between equal-cost labels resolve towards smaller vertex ids.
pub fn shortest_path(
    g: &Digraph,
    s: VertexId,
    t: VertexId,
    mask: &[bool],
    allow: impl Fn(EdgeId) -> bool,
) -> Option<(Rational, Vec<EdgeId>)> {
    if !mask[s] || !mask[t] {
        return None;
    }
    let mut dist: Vec<Option<Rational>> = vec![None; g.n()];
    let mut pred: Vec<Option<EdgeId>> = vec![None; g.n()];
    let mut done = vec![false; g.n()];
    dist[s] = Some(Rational::from_integer(0.into()));
    let mut heap = BinaryHeap::new();
    heap.push(Reverse((dist[s].clone().unwrap(), s)));
    while let Some(Reverse((d, v))) = heap.pop() {
        if done[v] {
            continue;
        }
        done[v] = true;
        if v == t {
            return Some((d, unwind(g, &pred, s, t)));
        }
        for &e in g.out_edges(v) {
            let w = g.edge(e).head;
            if done[w] || !mask[w] || !allow(e) {
                continue;
            }
            let nd = &d + g.cost(e);
            if dist[w].as_ref().map_or(true, |old| nd < *old) {
                dist[w] = Some(nd.clone());
                pred[w] = Some(e);
                heap.push(Reverse((nd, w)));
            }
        }
    }
    None
}

fn unwind(g: &Digraph, pred: &[Option<EdgeId>], s: VertexId, t: VertexId) -> Vec<EdgeId> {
    let mut path = Vec::new();
    let mut v = t;
    while v != s {
        let e = pred[v].expect("predecessor chain");
        path.push(e);
        v = g.edge(e).tail;
    }
    path.reverse();
    path
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;
    use crate::rational::int;

    #[test]
    fn eulerian_checks_on_fixtures() {
        let g = c3();
        let all = EdgeMultiset::from_edges([0, 1, 2]);
        let r = is_eulerian_connected(&g, &all).unwrap();
        assert!(r.eulerian && r.components == vec![VertexSet::full(3)]);
        let r = is_eulerian_connected(&g, &EdgeMultiset::from_edges([0])).unwrap();
        assert!(!r.eulerian);
        assert_eq!(
            r.components,
            vec![VertexSet::new(vec![0, 1]), VertexSet::singleton(2)]
        );
        let tt = two_tri();
        let r = is_eulerian_connected(&tt, &EdgeMultiset::from_edges(0..6)).unwrap();
        assert!(r.eulerian && r.components.len() == 2);
        assert!(is_eulerian_connected(&g, &EdgeMultiset::from_edges([9])).is_err());
    }

    #[test]
    fn euler_walks_replay_multiplicities() {
        let g = c3();
        assert_eq!(
            euler_walk(&g, &EdgeMultiset::from_edges([0, 1, 2]), 0).unwrap(),
            vec![0, 1, 2]
        );
        let k = k2();
        let mut f = EdgeMultiset::new();
        f.add(0, 2);
        f.add(1, 2);
        assert_eq!(euler_walk(&k, &f, 0).unwrap().len(), 4);
        let tt = two_tri();
        let f = EdgeMultiset::from_edges(0..8);
        let w = euler_walk(&tt, &f, 0).unwrap();
        assert_eq!(w.len(), 8);
        assert_eq!(EdgeMultiset::from_edges(w.iter().copied()), f);
        for pair in w.windows(2) {
            assert_eq!(tt.edge(pair[0]).head, tt.edge(pair[1]).tail);
        }
        assert!(euler_walk(&tt, &EdgeMultiset::from_edges(0..6), 0).is_err());
        assert!(euler_walk(&g, &EdgeMultiset::from_edges([0]), 0).is_err());
    }

    #[test]
    fn scc_order_on_fixtures() {
        assert_eq!(
            scc_topological(&c3(), &VertexSet::full(3)),
            vec![VertexSet::full(3)]
        );
        let path = Digraph::from_edges(3, [(0, 1, int(1)), (1, 2, int(1))]).unwrap();
        assert_eq!(
            scc_topological(&path, &VertexSet::full(3)),
            vec![
                VertexSet::singleton(0),
                VertexSet::singleton(1),
                VertexSet::singleton(2)
            ]
        );
        let (g, _) = two_tri().edge_subgraph(|e| e != 7);
        assert_eq!(
            scc_topological(&g, &VertexSet::full(6)),
            vec![VertexSet::new(vec![0, 1, 2]), VertexSet::new(vec![3, 4, 5])]
        );
    }

    #[test]
    fn bfs_and_dijkstra_respect_filters() {
        let g = two_tri();
        let all = vec![true; 6];
        assert_eq!(
            bfs_path(&g, 1, 4, &all, |_| true).unwrap(),
            vec![1, 2, 6, 3]
        );
        assert!(bfs_path(&g, 1, 4, &all, |e| e != 6).is_none());
        let (d, p) = shortest_path(&g, 4, 1, &all, |_| true).unwrap();
        assert_eq!(d, int(8));
        assert_eq!(p, vec![4, 5, 7, 0]);
        let mask = VertexSet::new(vec![0, 1, 2]).mask(6);
        assert!(shortest_path(&g, 0, 3, &mask, |_| true).is_none());
    }
}
