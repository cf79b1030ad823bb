//! Strongly laminar instances: a support graph, a laminar family with
//! positive weights inducing all edge costs, and a feasible LP point that is
//! tight on every family set.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::graph::{bfs_path, Digraph, EdgeId, LaminarFamily, VertexId, VertexSet};
use crate::lp::{cut_value, violated_cuts};
use crate::rational::{int, Rational};

#[derive(Debug, Clone)]
pub struct StronglyLaminarInstance {
    g: Digraph,
    family: LaminarFamily,
    x: Vec<Rational>,
    masks: Vec<Vec<bool>>,
    /// Family indices containing each vertex, outermost first.
    containing: Vec<Vec<usize>>,
    singleton: Vec<Option<usize>>,
}

impl StronglyLaminarInstance {
    /// Builds the instance on the topology of `g`; edge costs are replaced by
    /// the costs induced by the family. Validates every defining property.
    pub fn new(g: &Digraph, family: LaminarFamily, x: Vec<Rational>) -> Result<Self> {
        let inst = Self::assemble(g, family, x)?;
        inst.validate()?;
        Ok(inst)
    }

    fn assemble(g: &Digraph, family: LaminarFamily, x: Vec<Rational>) -> Result<Self> {
        let n = g.n();
        if family.n() != n {
            return Err(Error::Input("family ground set differs from graph".into()));
        }
        if x.len() != g.m() {
            return Err(Error::Input("x has wrong length".into()));
        }
        let masks: Vec<Vec<bool>> = family.sets().iter().map(|s| s.mask(n)).collect();
        let mut containing = vec![Vec::new(); n];
        let mut singleton = vec![None; n];
        for (i, s) in family.sets().iter().enumerate() {
            for v in s.iter() {
                containing[v].push(i);
            }
            if s.len() == 1 {
                singleton[s.as_slice()[0]] = Some(i);
            }
        }
        let costs = (0..g.m())
            .map(|e| {
                masks
                    .iter()
                    .zip(family.weights())
                    .filter(|(m, _)| g.crosses(e, m))
                    .map(|(_, y)| y.clone())
                    .sum::<Rational>()
            })
            .collect();
        let g = g.with_costs(costs)?;
        Ok(Self {
            g,
            family,
            x,
            masks,
            containing,
            singleton,
        })
    }

    fn validate(&self) -> Result<()> {
        let stage = "strongly_laminar_instance";
        let g = &self.g;
        if g.n() >= 2 && !g.is_strongly_connected() {
            return Err(Error::assertion(stage, "graph is not strongly connected"));
        }
        for (i, s) in self.family.sets().iter().enumerate() {
            if s.len() == g.n() {
                return Err(Error::assertion(
                    stage,
                    "family contains the full vertex set",
                ));
            }
            if !g.is_strongly_connected_on(s) {
                return Err(Error::assertion(
                    stage,
                    format!("family set {s:?} does not induce a strongly connected graph"),
                ));
            }
            if cut_value(g, &self.x, s) != int(2) {
                return Err(Error::assertion(
                    stage,
                    format!("x is not tight on family set {s:?} (index {i})"),
                ));
            }
        }
        if let Some(e) = self.x.iter().position(|v| !v.is_positive()) {
            return Err(Error::assertion(
                stage,
                format!("x_e not positive on edge {e}"),
            ));
        }
        for v in 0..g.n() {
            let inflow: Rational = g.in_edges(v).iter().map(|&e| &self.x[e]).sum();
            let outflow: Rational = g.out_edges(v).iter().map(|&e| &self.x[e]).sum();
            if inflow != outflow {
                return Err(Error::assertion(
                    stage,
                    format!("x violates conservation at {v}"),
                ));
            }
        }
        if g.n() >= 2 {
            if let Some((u, val)) = violated_cuts(g, &self.x).into_iter().next() {
                return Err(Error::assertion(
                    stage,
                    format!("x violates cut {u:?} (value {val})"),
                ));
            }
        }
        if self.lp_value()
            != self
                .family
                .weights()
                .iter()
                .map(|y| y * int(2))
                .sum::<Rational>()
        {
            return Err(Error::assertion(
                stage,
                "c(x) differs from the dual objective",
            ));
        }
        Ok(())
    }

    pub fn g(&self) -> &Digraph {
        &self.g
    }

    pub fn n(&self) -> usize {
        self.g.n()
    }

    pub fn family(&self) -> &LaminarFamily {
        &self.family
    }

    pub fn x(&self) -> &[Rational] {
        &self.x
    }

    pub fn mask(&self, i: usize) -> &[bool] {
        &self.masks[i]
    }

    /// Family indices containing `v`, outermost first.
    pub fn containing(&self, v: VertexId) -> &[usize] {
        &self.containing[v]
    }

    pub fn cost(&self, e: EdgeId) -> &Rational {
        self.g.cost(e)
    }

    /// `y_v`: weight of the singleton `{v}`, zero if absent.
    pub fn y_vertex(&self, v: VertexId) -> Rational {
        self.singleton[v]
            .map(|i| self.family.weight(i).clone())
            .unwrap_or_else(Rational::zero)
    }

    pub fn has_singleton(&self, v: VertexId) -> bool {
        self.singleton[v].is_some()
    }

    /// `LP(I) = c(x)`.
    pub fn lp_value(&self) -> Rational {
        (0..self.g.m()).map(|e| self.g.cost(e) * &self.x[e]).sum()
    }

    /// Indices of family members with at least two vertices.
    pub fn non_singletons(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.family.len()).filter(|&i| self.family.set(i).len() >= 2)
    }

    /// Whether `e` crosses the boundary of some family set with ≥ 2 vertices.
    pub fn crosses_non_singleton(&self, e: EdgeId) -> bool {
        self.non_singletons()
            .any(|i| self.g.crosses(e, &self.masks[i]))
    }

    /// Smallest family member containing both vertices, `None` meaning V.
    pub fn minimal_common(&self, u: VertexId, v: VertexId) -> Option<usize> {
        self.containing[u]
            .iter()
            .rev()
            .copied()
            .find(|&i| self.masks[i][v])
    }

    /// `value(W) = Σ_{L ⊊ W} 2 y_L`.
    pub fn value(&self, w: &VertexSet) -> Rational {
        self.family
            .iter()
            .filter(|(l, _)| l.len() < w.len() && l.is_subset(w))
            .map(|(_, y)| y * int(2))
            .sum()
    }

    /// `Σ_{v ∈ L ⊊ W} y_L`.
    pub fn depth_weight(&self, v: VertexId, w: &VertexSet) -> Rational {
        self.containing[v]
            .iter()
            .map(|&i| (self.family.set(i), self.family.weight(i)))
            .filter(|(l, _)| l.len() < w.len() && l.is_subset(w))
            .map(|(_, y)| y.clone())
            .sum()
    }

    pub fn path_cost(&self, path: &[EdgeId]) -> Rational {
        path.iter().map(|&e| self.g.cost(e)).sum()
    }
}

/// Vertex sequence of a path given as edges starting at `start`.
pub fn path_vertices(g: &Digraph, start: VertexId, path: &[EdgeId]) -> Vec<VertexId> {
    let mut out = vec![start];
    out.extend(path.iter().map(|&e| g.edge(e).head));
    out
}

/// Number of entering and leaving edges of `mask` along a path.
pub fn crossing_counts(g: &Digraph, path: &[EdgeId], mask: &[bool]) -> (usize, usize) {
    let mut enter = 0;
    let mut leave = 0;
    for &e in path {
        let ed = g.edge(e);
        match (mask[ed.tail], mask[ed.head]) {
            (false, true) => enter += 1,
            (true, false) => leave += 1,
            _ => {}
        }
    }
    (enter, leave)
}

/// A nice `u`-`w` path: inside the minimal family set (or V) containing
/// both endpoints, entering and leaving every family set at most once.
pub fn nice_path(inst: &StronglyLaminarInstance, u: VertexId, w: VertexId) -> Result<Vec<EdgeId>> {
    let stage = "nice_path";
    let g = inst.g();
    let full = vec![true; g.n()];
    let region: &[bool] = match inst.minimal_common(u, w) {
        Some(i) => inst.mask(i),
        None => &full,
    };
    let mut path = bfs_path(g, u, w, region, |_| true).ok_or_else(|| {
        Error::assertion(
            stage,
            format!("no path {u}->{w} inside the minimal common set"),
        )
    })?;
    for _ in 0..=inst.family().len() {
        // Family order is by size descending, so the first violated member
        // is maximal among violated members.
        let bad = (0..inst.family().len()).find(|&i| {
            let (a, b) = crossing_counts(g, &path, inst.mask(i));
            a > 1 || b > 1
        });
        let Some(i) = bad else { return Ok(path) };
        let verts = path_vertices(g, u, &path);
        let mask = inst.mask(i);
        let first = verts.iter().position(|&v| mask[v]).unwrap();
        let last = verts.iter().rposition(|&v| mask[v]).unwrap();
        let inner = bfs_path(g, verts[first], verts[last], mask, |_| true).ok_or_else(|| {
            Error::assertion(stage, format!("family set {i} not strongly connected"))
        })?;
        let mut repaired = path[..first].to_vec();
        repaired.extend(inner);
        repaired.extend_from_slice(&path[last..]);
        path = repaired;
    }
    Err(Error::IterationCap {
        stage,
        detail: format!("repair loop for pair ({u},{w})"),
    })
}

/// One fixed nice path per ordered vertex pair.
#[derive(Debug, Clone)]
pub struct NicePathTable {
    n: usize,
    paths: Vec<Vec<EdgeId>>,
}

impl NicePathTable {
    pub fn build(inst: &StronglyLaminarInstance) -> Result<Self> {
        let n = inst.n();
        let mut paths = Vec::with_capacity(n * n);
        for u in 0..n {
            for w in 0..n {
                paths.push(if u == w {
                    Vec::new()
                } else {
                    nice_path(inst, u, w)?
                });
            }
        }
        Ok(Self { n, paths })
    }

    pub fn path(&self, u: VertexId, w: VertexId) -> &[EdgeId] {
        &self.paths[u * self.n + w]
    }
}

/// Cost of the fixed `u`-`v` path, checked against the crossing identity
/// `Σ_{L⊊W, L∩V(P)≠∅} 2y_L − Σ_{u∈L⊊W} y_L − Σ_{v∈L⊊W} y_L`.
pub fn nice_path_cost_identity(
    inst: &StronglyLaminarInstance,
    table: &NicePathTable,
    w: &VertexSet,
    u: VertexId,
    v: VertexId,
) -> Result<Rational> {
    let path = table.path(u, v);
    let cost = inst.path_cost(path);
    let verts = path_vertices(inst.g(), u, path);
    let mut touched = Rational::zero();
    for (i, (l, y)) in inst.family().iter().enumerate() {
        if l.len() < w.len() && l.is_subset(w) && verts.iter().any(|&x| inst.mask(i)[x]) {
            touched += y * int(2);
        }
    }
    let rhs = touched - inst.depth_weight(u, w) - inst.depth_weight(v, w);
    if cost != rhs {
        return Err(Error::assertion(
            "nice_path_cost_identity",
            format!("path {u}->{v} in {w:?}: cost {cost} but identity gives {rhs}"),
        ));
    }
    Ok(cost)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValueAndDw {
    pub value: Rational,
    pub dw: Rational,
    pub u: VertexId,
    pub v: VertexId,
}

/// `value(W)` and `D_W = max_{u,v∈W} D_W(u,v)` with its argmax. Pairs with
/// `u ≠ v` are preferred whenever `|W| ≥ 2` (such a pair always attains the
/// maximum); ties go to the lexicographically smallest pair.
pub fn value_and_dw(
    inst: &StronglyLaminarInstance,
    table: &NicePathTable,
    w: &VertexSet,
) -> Result<ValueAndDw> {
    let value = inst.value(w);
    let depth: Vec<(VertexId, Rational)> = w.iter().map(|v| (v, inst.depth_weight(v, w))).collect();
    let mut best: Option<(Rational, VertexId, VertexId)> = None;
    for (u, du) in &depth {
        for (v, dv) in &depth {
            if u == v && w.len() >= 2 {
                continue;
            }
            let d = du + dv + inst.path_cost(table.path(*u, *v));
            if d > value {
                return Err(Error::assertion(
                    "value_and_dw",
                    format!("D_W({u},{v}) = {d} exceeds value(W) = {value}"),
                ));
            }
            if best.as_ref().map_or(true, |(b, _, _)| d > *b) {
                best = Some((d, *u, *v));
            }
        }
    }
    let (dw, u, v) = best.ok_or_else(|| Error::contract("value_and_dw", "W is empty"))?;
    if w.len() >= 2 {
        // Diagonal pairs never exceed the chosen maximum.
        for (u, du) in &depth {
            if du * int(2) > dw {
                return Err(Error::assertion(
                    "value_and_dw",
                    format!("D_W({u},{u}) exceeds the off-diagonal maximum"),
                ));
            }
        }
    }
    Ok(ValueAndDw { value, dw, u, v })
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;
    use crate::rational::frac;

    /// C3 with weight ½ on each singleton and x ≡ 1.
    pub fn c3_half() -> StronglyLaminarInstance {
        let g = crate::graph::fixtures::c3();
        let fam = LaminarFamily::new(
            3,
            (0..3)
                .map(|v| (VertexSet::singleton(v), frac(1, 2)))
                .collect(),
        )
        .unwrap();
        StronglyLaminarInstance::new(&g, fam, vec![int(1); 3]).unwrap()
    }

    /// Triangle {0,1,2} inside six vertices; x is the average of the
    /// Hamiltonian cycles 0→1→2→3→4→5→0 and 2→0→1→3→5→4→2. Edge ids:
    /// 0:(0,1) 1:(1,2) 2:(2,0) 3:(2,3) 4:(3,4) 5:(4,5) 6:(5,0) 7:(1,3) 8:(3,5) 9:(5,4) 10:(4,2)
    pub fn six_with_triangle() -> (Digraph, Vec<Rational>, LaminarFamily) {
        let arcs = [
            (0, 1),
            (1, 2),
            (2, 0),
            (2, 3),
            (3, 4),
            (4, 5),
            (5, 0),
            (1, 3),
            (3, 5),
            (5, 4),
            (4, 2),
        ];
        let g = Digraph::from_edges(6, arcs.into_iter().map(|(a, b)| (a, b, int(0)))).unwrap();
        let mut x = vec![frac(1, 2); 11];
        x[0] = int(1);
        let mut members = vec![(VertexSet::new(vec![0, 1, 2]), int(1))];
        for v in 0..6 {
            members.push((VertexSet::singleton(v), frac(1, 4)));
        }
        (g, x, LaminarFamily::new(6, members).unwrap())
    }

    /// The set {1,2,3} (cycle 1→3→2→1) where the breadth-first 1→5 path
    /// 1→4→2→5 leaves it twice. Edge ids:
    /// 0:(0,1) 1:(1,4) 2:(4,2) 3:(2,5) 4:(5,0) 5:(1,3) 6:(3,2) 7:(2,1) 8:(0,4) 9:(4,0) 10:(0,5)
    pub fn double_exit() -> StronglyLaminarInstance {
        let arcs = [
            (0, 1),
            (1, 4),
            (4, 2),
            (2, 5),
            (5, 0),
            (1, 3),
            (3, 2),
            (2, 1),
            (0, 4),
            (4, 0),
            (0, 5),
        ];
        let g = Digraph::from_edges(6, arcs.into_iter().map(|(a, b)| (a, b, int(0)))).unwrap();
        let h = frac(1, 2);
        let x = vec![
            h.clone(),
            h.clone(),
            h.clone(),
            h.clone(),
            int(1),
            int(1),
            int(1),
            int(1),
            h.clone(),
            h.clone(),
            h,
        ];
        let members = vec![
            (VertexSet::new(vec![1, 2, 3]), int(1)),
            (VertexSet::singleton(4), frac(1, 3)),
        ];
        StronglyLaminarInstance::new(&g, LaminarFamily::new(6, members).unwrap(), x).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::rational::frac;

    #[test]
    fn induced_costs_and_lp_value() {
        let inst = c3_half();
        assert!((0..3).all(|e| *inst.cost(e) == int(1)));
        assert_eq!(inst.lp_value(), int(3));
        assert_eq!(inst.y_vertex(1), frac(1, 2));
    }

    #[test]
    fn rejects_non_tight_family() {
        let g = crate::graph::fixtures::c3();
        let fam = LaminarFamily::new(3, vec![(VertexSet::singleton(0), int(1))]).unwrap();
        assert!(StronglyLaminarInstance::new(&g, fam.clone(), vec![int(2); 3]).is_err());
        assert!(StronglyLaminarInstance::new(&g, fam, vec![int(1); 3]).is_ok());
    }

    #[test]
    fn six_vertex_fixture_is_valid() {
        let (g, x, fam) = six_with_triangle();
        let inst = StronglyLaminarInstance::new(&g, fam, x).unwrap();
        // Leaving the triangle costs 1 + ¼ + ¼; inside it only ¼ + ¼.
        assert_eq!(*inst.cost(7), frac(3, 2));
        assert_eq!(*inst.cost(1), frac(1, 2));
        assert_eq!(inst.minimal_common(0, 2), Some(0));
        assert_eq!(inst.minimal_common(0, 4), None);
    }

    #[test]
    fn nice_paths_cross_each_set_at_most_once() {
        let (g, x, fam) = six_with_triangle();
        let inst = StronglyLaminarInstance::new(&g, fam, x).unwrap();
        let table = NicePathTable::build(&inst).unwrap();
        for u in 0..6 {
            for v in 0..6 {
                let p = table.path(u, v);
                let verts = path_vertices(inst.g(), u, p);
                assert_eq!(*verts.last().unwrap(), v);
                for i in 0..inst.family().len() {
                    let (a, b) = crossing_counts(inst.g(), p, inst.mask(i));
                    assert!(a <= 1 && b <= 1);
                }
                if let Some(i) = inst.minimal_common(u, v) {
                    assert!(verts.iter().all(|&z| inst.mask(i)[z]));
                }
                nice_path_cost_identity(&inst, &table, &VertexSet::full(6), u, v).unwrap();
            }
        }
    }

    #[test]
    fn repair_fixes_double_entry() {
        let inst = double_exit();
        let set = inst.mask(0).to_vec();
        let naive = bfs_path(inst.g(), 1, 5, &[true; 6], |_| true).unwrap();
        assert_eq!(naive, vec![1, 2, 3]);
        assert_eq!(crossing_counts(inst.g(), &naive, &set), (1, 2));
        let p = nice_path(&inst, 1, 5).unwrap();
        assert_eq!(p, vec![5, 6, 3]);
        let table = NicePathTable::build(&inst).unwrap();
        for u in 0..6 {
            for v in 0..6 {
                nice_path_cost_identity(&inst, &table, &VertexSet::full(6), u, v).unwrap();
            }
        }
    }

    #[test]
    fn c3_value_and_dw() {
        let inst = c3_half();
        let table = NicePathTable::build(&inst).unwrap();
        let r = value_and_dw(&inst, &table, &VertexSet::full(3)).unwrap();
        assert_eq!(r.value, int(3));
        // 0→1→2 costs 2, plus ½ at each end.
        assert_eq!(r.dw, int(3));
        assert_eq!((r.u, r.v), (0, 2));
        let single = value_and_dw(&inst, &table, &VertexSet::singleton(2)).unwrap();
        assert_eq!(
            (single.value, single.dw, single.u, single.v),
            (int(0), int(0), 2, 2)
        );
        let c = nice_path_cost_identity(&inst, &table, &VertexSet::full(3), 0, 1).unwrap();
        assert_eq!(c, int(1));
    }
}
