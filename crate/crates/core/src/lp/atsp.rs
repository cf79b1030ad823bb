use std::collections::{BTreeMap, BTreeSet};

use num_traits::{Signed, Zero};

use super::simplex::{Constraint, Relation, Simplex, SimplexError};
use crate::error::{Error, Result};
use crate::flow::max_flow;
use crate::graph::{Digraph, VertexSet};
use crate::rational::{int, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimalLp {
    pub x: Vec<Rational>,
    pub objective: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualLp {
    pub a: Vec<Rational>,
    /// Positive cut weights, keyed by the explicit vertex set.
    pub y: BTreeMap<VertexSet, Rational>,
    pub objective: Rational,
}

impl DualLp {
    pub fn recompute_objective(&mut self) {
        self.objective = self.y.values().map(|v| v * int(2)).sum();
    }
}

/// `x(δ(U))`, both directions.
pub fn cut_value(g: &Digraph, x: &[Rational], set: &VertexSet) -> Rational {
    let mask = set.mask(g.n());
    (0..g.m())
        .filter(|&e| g.crosses(e, &mask))
        .map(|e| &x[e])
        .sum()
}

/// Slack `c(e) − (a_w − a_v + Σ_{U: e∈δ(U)} y_U)` of every edge.
pub fn dual_slacks(g: &Digraph, dual: &DualLp) -> Vec<Rational> {
    let masks: Vec<(Vec<bool>, &Rational)> =
        dual.y.iter().map(|(s, y)| (s.mask(g.n()), y)).collect();
    (0..g.m())
        .map(|e| {
            let ed = g.edge(e);
            let mut lhs = &dual.a[ed.head] - &dual.a[ed.tail];
            for (mask, y) in &masks {
                if g.crosses(e, mask) {
                    lhs += *y;
                }
            }
            &ed.cost - lhs
        })
        .collect()
}

pub fn is_dual_feasible(g: &Digraph, dual: &DualLp) -> bool {
    dual.y.values().all(|y| y.is_positive())
        && dual_slacks(g, dual).iter().all(|s| !s.is_negative())
}

/// All cuts found by the 2(n−1) rooted minimum-cut computations whose value
/// is below 2, as (side without vertex 0, x(δ(U))) sorted by value.
pub fn violated_cuts(g: &Digraph, x: &[Rational]) -> Vec<(VertexSet, Rational)> {
    let n = g.n();
    let arcs: Vec<(usize, usize, Rational)> = (0..g.m())
        .filter(|&e| x[e].is_positive())
        .map(|e| (g.edge(e).tail, g.edge(e).head, x[e].clone()))
        .collect();
    let one = int(1);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for t in 1..n {
        for (s, sink) in [(0, t), (t, 0)] {
            let mf = max_flow(n, &arcs, s, sink);
            if mf.value >= one {
                continue;
            }
            let side = VertexSet::from_mask(&mf.source_side);
            let u = if side.contains(0) {
                side.complement(n)
            } else {
                side
            };
            if seen.insert(u.clone()) {
                out.push((u, mf.value * int(2)));
            }
        }
    }
    out.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
    out
}

/// A most violated cut, reported as the side without vertex 0.
pub fn separate_subtour(g: &Digraph, x: &[Rational]) -> Option<VertexSet> {
    violated_cuts(g, x).into_iter().next().map(|(u, _)| u)
}

fn cut_row(g: &Digraph, set: &VertexSet) -> Constraint {
    let mask = set.mask(g.n());
    let coeffs = (0..g.m())
        .filter(|&e| g.crosses(e, &mask))
        .map(|e| (e, int(1)))
        .collect();
    Constraint::new(coeffs, Relation::Ge, int(2))
}

fn lp_error(e: SimplexError) -> Error {
    match e {
        SimplexError::Infeasible => Error::NotStronglyConnected,
        other => Error::assertion("solve_atsp_lp", other.to_string()),
    }
}

/// Optimal primal and dual solutions of the subtour-elimination LP by a
/// cutting-plane loop over rooted minimum cuts.
pub fn solve_atsp_lp(g: &Digraph) -> Result<(PrimalLp, DualLp)> {
    let n = g.n();
    if n < 2 {
        return Err(Error::contract(
            "solve_atsp_lp",
            "needs at least two vertices",
        ));
    }
    if !g.is_strongly_connected() {
        return Err(Error::NotStronglyConnected);
    }
    let cost: Vec<Rational> = g.edges().iter().map(|e| e.cost.clone()).collect();
    // Conservation rows for all vertices but the last (it is implied), then
    // the singleton cuts.
    let mut rows = Vec::new();
    for v in 0..n - 1 {
        let mut coeffs: Vec<(usize, Rational)> =
            g.in_edges(v).iter().map(|&e| (e, int(1))).collect();
        coeffs.extend(g.out_edges(v).iter().map(|&e| (e, int(-1))));
        rows.push(Constraint::new(coeffs, Relation::Eq, Rational::zero()));
    }
    let mut cuts: Vec<VertexSet> = (0..n).map(VertexSet::singleton).collect();
    let mut keys: BTreeSet<VertexSet> = BTreeSet::new();
    for c in &cuts {
        keys.insert(canonical(c, n));
        rows.push(cut_row(g, c));
    }
    let mut lp = Simplex::solve(cost, &rows).map_err(lp_error)?;
    let max_rounds = 4 * n * n + 16;
    for _ in 0..max_rounds {
        let sol = lp.solution();
        let found = violated_cuts(g, &sol.x);
        if found.is_empty() {
            return Ok(assemble(g, &sol, &cuts));
        }
        for (u, _) in found {
            if !keys.insert(canonical(&u, n)) {
                return Err(Error::assertion(
                    "solve_atsp_lp",
                    format!("cut {u:?} generated twice"),
                ));
            }
            lp.add_constraint(&cut_row(g, &u)).map_err(lp_error)?;
            cuts.push(u);
        }
    }
    Err(Error::IterationCap {
        stage: "solve_atsp_lp",
        detail: format!("{max_rounds} separation rounds"),
    })
}

fn canonical(u: &VertexSet, n: usize) -> VertexSet {
    if u.contains(0) {
        u.complement(n)
    } else {
        u.clone()
    }
}

fn assemble(g: &Digraph, sol: &super::simplex::Solution, cuts: &[VertexSet]) -> (PrimalLp, DualLp) {
    let n = g.n();
    let mut a = vec![Rational::zero(); n];
    a[..n - 1].clone_from_slice(&sol.duals[..n - 1]);
    let mut y = BTreeMap::new();
    for (u, d) in cuts.iter().zip(&sol.duals[n - 1..]) {
        if d.is_positive() {
            y.insert(u.clone(), d.clone());
        }
    }
    let mut dual = DualLp {
        a,
        y,
        objective: Rational::zero(),
    };
    dual.recompute_objective();
    (
        PrimalLp {
            x: sol.x.clone(),
            objective: sol.objective.clone(),
        },
        dual,
    )
}
