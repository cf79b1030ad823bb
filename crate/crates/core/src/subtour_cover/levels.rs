//! Level numbering of the non-singleton family sets and the two-level split
//! graph built on it.

use num_traits::Zero;

use crate::graph::{Digraph, EdgeId, VertexId, VertexSet};
use crate::instance::StronglyLaminarInstance;
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeClass {
    /// `r(tail) < r(head)`
    Forward,
    /// `r(tail) > r(head)`
    Backward,
    Neutral,
}

impl EdgeClass {
    pub fn of(r_tail: usize, r_head: usize) -> Self {
        match r_tail.cmp(&r_head) {
            std::cmp::Ordering::Less => EdgeClass::Forward,
            std::cmp::Ordering::Greater => EdgeClass::Backward,
            std::cmp::Ordering::Equal => EdgeClass::Neutral,
        }
    }

    /// Whether copies exist on level 0 and on level 1.
    pub fn levels(self) -> [bool; 2] {
        match self {
            EdgeClass::Forward => [true, false],
            EdgeClass::Backward => [false, true],
            EdgeClass::Neutral => [true, true],
        }
    }
}

#[derive(Debug, Clone)]
pub struct LevelStructure {
    /// `L_1 = V, L_2, …` by non-increasing size, ties by contents.
    pub levels: Vec<VertexSet>,
    /// 1-based index of the last level containing each vertex.
    pub r: Vec<usize>,
    pub class: Vec<EdgeClass>,
}

pub fn build_level_structure(inst: &StronglyLaminarInstance) -> LevelStructure {
    let n = inst.n();
    let mut levels = vec![VertexSet::full(n)];
    // The family is already sorted by size descending, then contents.
    levels.extend(inst.non_singletons().map(|i| inst.family().set(i).clone()));
    let mut r = vec![1; n];
    for (i, l) in levels.iter().enumerate() {
        for v in l.iter() {
            r[v] = r[v].max(i + 1);
        }
    }
    let class = classify(inst.g(), &r);
    LevelStructure { levels, r, class }
}

pub fn classify(g: &Digraph, r: &[usize]) -> Vec<EdgeClass> {
    g.edges()
        .iter()
        .map(|e| EdgeClass::of(r[e.tail], r[e.head]))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitKind {
    Copy {
        edge: EdgeId,
        level: usize,
    },
    /// `v¹ → v⁰`
    Down(VertexId),
    /// `v⁰ → v¹`, backbone vertices only.
    Up(VertexId),
}

#[derive(Debug, Clone)]
pub struct SplitArc {
    pub from: usize,
    pub to: usize,
    pub cost: Rational,
    pub kind: SplitKind,
}

/// Split graph: node `2v + q` is `v^q`.
#[derive(Debug, Clone)]
pub struct SplitGraph {
    pub nodes: usize,
    pub arcs: Vec<SplitArc>,
    pub copy: Vec<[Option<usize>; 2]>,
    pub down: Vec<usize>,
    pub up: Vec<Option<usize>>,
}

pub fn node(v: VertexId, level: usize) -> usize {
    2 * v + level
}

impl SplitGraph {
    pub fn build(g: &Digraph, class: &[EdgeClass], on_backbone: &[bool]) -> Self {
        let mut arcs = Vec::new();
        let mut copy = Vec::with_capacity(g.m());
        for (e, ed) in g.edges().iter().enumerate() {
            let mut ids = [None, None];
            for (level, exists) in class[e].levels().into_iter().enumerate() {
                if exists {
                    ids[level] = Some(arcs.len());
                    arcs.push(SplitArc {
                        from: node(ed.tail, level),
                        to: node(ed.head, level),
                        cost: ed.cost.clone(),
                        kind: SplitKind::Copy { edge: e, level },
                    });
                }
            }
            copy.push(ids);
        }
        let mut down = Vec::with_capacity(g.n());
        let mut up = Vec::with_capacity(g.n());
        for v in 0..g.n() {
            down.push(arcs.len());
            arcs.push(SplitArc {
                from: node(v, 1),
                to: node(v, 0),
                cost: Rational::zero(),
                kind: SplitKind::Down(v),
            });
            if on_backbone[v] {
                up.push(Some(arcs.len()));
                arcs.push(SplitArc {
                    from: node(v, 0),
                    to: node(v, 1),
                    cost: Rational::zero(),
                    kind: SplitKind::Up(v),
                });
            } else {
                up.push(None);
            }
        }
        Self {
            nodes: 2 * g.n(),
            arcs,
            copy,
            down,
            up,
        }
    }

    /// Circulation on the split graph from `(x, f)`: `f` below, `x − f`
    /// above, with the vertical arcs absorbing the imbalance.
    pub fn lift(&self, g: &Digraph, x: &[Rational], f: &[Rational]) -> Vec<Rational> {
        let mut z = vec![Rational::zero(); self.arcs.len()];
        let mut imbalance = vec![Rational::zero(); g.n()];
        for e in 0..g.m() {
            let ed = g.edge(e);
            if let Some(a) = self.copy[e][0] {
                z[a] = f[e].clone();
            }
            if let Some(a) = self.copy[e][1] {
                z[a] = &x[e] - &f[e];
            }
            imbalance[ed.tail] += &f[e];
            imbalance[ed.head] -= &f[e];
        }
        for v in 0..g.n() {
            // imbalance = f_out − f_in
            if imbalance[v] > Rational::zero() {
                z[self.down[v]] = imbalance[v].clone();
            } else if imbalance[v] < Rational::zero() {
                if let Some(a) = self.up[v] {
                    z[a] = -imbalance[v].clone();
                }
            }
        }
        z
    }

    /// `π(z) = (x, f)` with `x(e) = z(e⁰) + z(e¹)` and `f(e) = z(e⁰)`.
    pub fn project(&self, m: usize, z: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
        let mut x = vec![Rational::zero(); m];
        let mut f = vec![Rational::zero(); m];
        for e in 0..m {
            if let Some(a) = self.copy[e][0] {
                x[e] += &z[a];
                f[e] += &z[a];
            }
            if let Some(a) = self.copy[e][1] {
                x[e] += &z[a];
            }
        }
        (x, f)
    }

    pub fn is_circulation(&self, z: &[Rational]) -> bool {
        let mut bal = vec![Rational::zero(); self.nodes];
        for (a, arc) in self.arcs.iter().enumerate() {
            if z[a] < Rational::zero() {
                return false;
            }
            bal[arc.from] += &z[a];
            bal[arc.to] -= &z[a];
        }
        bal.iter().all(|b| b.is_zero())
    }

    pub fn cost(&self, z: &[Rational]) -> Rational {
        self.arcs.iter().zip(z).map(|(a, v)| &a.cost * v).sum()
    }

    /// `z(δ⁻(node))`.
    pub fn inflow(&self, z: &[Rational], node: usize) -> Rational {
        self.arcs
            .iter()
            .zip(z)
            .filter(|(a, _)| a.to == node)
            .map(|(_, v)| v.clone())
            .sum()
    }
}
