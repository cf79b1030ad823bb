//! Witness flows: sub-flows of `x` that may only gain mass off the backbone,
//! chosen with minimum boundary mass and then minimum total mass.

use num_traits::{Signed, Zero};

use super::levels::{EdgeClass, LevelStructure};
use super::SubtourCoverInstance;
use crate::audit::Audit;
use crate::error::{Error, Result};
use crate::flow::{min_cost_circulation, CirculationArc};
use crate::graph::{Digraph, EdgeId};
use crate::rational::{int, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessFlow {
    pub f: Vec<Rational>,
    /// Optimum of the first stage, `min Σ_i f(δ(W_i))`.
    pub boundary: Rational,
}

/// `Σ_i f(δ(W_i))`.
pub fn boundary_mass(sc: &SubtourCoverInstance<'_>, f: &[Rational]) -> Rational {
    let g = sc.g();
    (0..g.m())
        .map(|e| &f[e] * int(sc.boundary_count(e) as i64))
        .sum()
}

/// First violated witness-flow constraint, if any.
pub fn witness_violation(
    sc: &SubtourCoverInstance<'_>,
    levels: &LevelStructure,
    f: &[Rational],
) -> Option<String> {
    let g = sc.g();
    let x = sc.pair().instance().x();
    for e in 0..g.m() {
        match levels.class[e] {
            EdgeClass::Backward if !f[e].is_zero() => {
                return Some(format!("backward edge {e} carries flow"))
            }
            EdgeClass::Forward if f[e] != x[e] => {
                return Some(format!("forward edge {e} has f ≠ x"))
            }
            _ if f[e].is_negative() || f[e] > x[e] => {
                return Some(format!("edge {e} has f outside [0, x]"))
            }
            _ => {}
        }
    }
    for v in 0..g.n() {
        if sc.pair().on_backbone(v) {
            continue;
        }
        let out: Rational = g.out_edges(v).iter().map(|&e| &f[e]).sum();
        let inn: Rational = g.in_edges(v).iter().map(|&e| &f[e]).sum();
        if out < inn {
            return Some(format!("vertex {v} absorbs flow"));
        }
    }
    None
}

/// Whether the edges with positive flow form an acyclic graph.
pub fn support_is_acyclic(g: &Digraph, f: &[Rational]) -> bool {
    let mut indeg = vec![0usize; g.n()];
    let support: Vec<EdgeId> = (0..g.m()).filter(|&e| f[e].is_positive()).collect();
    for &e in &support {
        indeg[g.edge(e).head] += 1;
    }
    let mut stack: Vec<usize> = (0..g.n()).filter(|&v| indeg[v] == 0).collect();
    let mut seen = 0;
    while let Some(v) = stack.pop() {
        seen += 1;
        for &e in g.out_edges(v) {
            if f[e].is_positive() {
                let h = g.edge(e).head;
                indeg[h] -= 1;
                if indeg[h] == 0 {
                    stack.push(h);
                }
            }
        }
    }
    seen == g.n()
}

/// Minimizes `Σ cost(e) f(e)` over witness flows with `f ≤ upper`, as a
/// circulation with an extra vertex that may feed every vertex and drain
/// backbone vertices. Costs must be nonnegative.
pub fn witness_lp(
    sc: &SubtourCoverInstance<'_>,
    levels: &LevelStructure,
    cost: &[Rational],
    upper: &[Rational],
) -> Result<Vec<Rational>> {
    let stage = "compute_witness_flow";
    let g = sc.g();
    let x = sc.pair().instance().x();
    let n = g.n();
    let total: Rational = x.iter().sum::<Rational>() + int(1);
    let mut arcs = Vec::new();
    let mut which = Vec::new();
    for e in 0..g.m() {
        let ed = g.edge(e);
        let (lower, up) = match levels.class[e] {
            EdgeClass::Backward => continue,
            EdgeClass::Forward => (x[e].clone(), x[e].clone()),
            EdgeClass::Neutral => (Rational::zero(), upper[e].clone().min(x[e].clone())),
        };
        which.push(e);
        arcs.push(CirculationArc {
            from: ed.tail,
            to: ed.head,
            lower,
            upper: up,
            cost: cost[e].clone(),
        });
    }
    for v in 0..n {
        let free = CirculationArc {
            from: n,
            to: v,
            lower: Rational::zero(),
            upper: total.clone(),
            cost: Rational::zero(),
        };
        arcs.push(free);
        if sc.pair().on_backbone(v) {
            arcs.push(CirculationArc {
                from: v,
                to: n,
                lower: Rational::zero(),
                upper: total.clone(),
                cost: Rational::zero(),
            });
        }
    }
    let flow = min_cost_circulation(n + 1, &arcs)
        .map_err(|e| Error::assertion(stage, format!("witness LP: {e}")))?;
    let mut f = vec![Rational::zero(); g.m()];
    for (k, &e) in which.iter().enumerate() {
        f[e] = flow[k].clone();
    }
    Ok(f)
}

/// Two-stage optimal witness flow with its certificate checks.
pub fn compute_witness_flow(
    sc: &SubtourCoverInstance<'_>,
    levels: &LevelStructure,
    audit: &mut Audit,
) -> Result<WitnessFlow> {
    let stage = "compute_witness_flow";
    let g = sc.g();
    let x = sc.pair().instance().x().to_vec();
    let cost1: Vec<Rational> = (0..g.m())
        .map(|e| int(sc.boundary_count(e) as i64))
        .collect();
    let f1 = witness_lp(sc, levels, &cost1, &x)?;
    let boundary = boundary_mass(sc, &f1);
    let ones = vec![int(1); g.m()];
    let f = witness_lp(sc, levels, &ones, &f1)?;
    audit.check(stage, witness_violation(sc, levels, &f).is_none(), || {
        witness_violation(sc, levels, &f).unwrap_or_default()
    })?;
    let b2 = boundary_mass(sc, &f);
    audit.check(stage, b2 == boundary, || {
        format!("second stage changed the boundary mass from {boundary} to {b2}")
    })?;
    audit.check(stage, support_is_acyclic(g, &f), || {
        "witness flow support has a cycle".into()
    })?;
    Ok(WitnessFlow { f, boundary })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{EdgeMultiset, LaminarFamily, VertexSet};
    use crate::instance::StronglyLaminarInstance;
    use crate::rational::frac;
    use crate::subtour_cover::build_level_structure;
    use crate::vertebrate::VertebratePair;

    // Nine vertices; L2 = {0..6} holds L3 = {3,4,5,6} and L4 = {0,1,2}.
    // The backbone is 2→5→6→8→2 and x = ½ everywhere.
    const ARCS: [(usize, usize); 18] = [
        (0, 1),
        (1, 0),
        (2, 0),
        (2, 5),
        (4, 3),
        (3, 5),
        (5, 3),
        (5, 6),
        (6, 4),
        (0, 7),
        (6, 8),
        (7, 8),
        (8, 7),
        (3, 1),
        (1, 2),
        (4, 6),
        (7, 4),
        (8, 2),
    ];
    const RED: std::ops::Range<usize> = 13..18;
    const BACKBONE: [usize; 4] = [3, 7, 10, 17];

    fn nested_pair() -> VertebratePair {
        let g = Digraph::from_edges(9, ARCS.iter().map(|&(a, b)| (a, b, int(0)))).unwrap();
        let members = vec![
            (VertexSet::new((0..7).collect()), int(1)),
            (VertexSet::new(vec![3, 4, 5, 6]), int(1)),
            (VertexSet::new(vec![0, 1, 2]), int(1)),
            (VertexSet::singleton(7), frac(1, 2)),
        ];
        let fam = LaminarFamily::new(9, members).unwrap();
        let inst = StronglyLaminarInstance::new(&g, fam, vec![frac(1, 2); 18]).unwrap();
        let mut b = EdgeMultiset::new();
        for e in BACKBONE {
            b.add(e, 1);
        }
        VertebratePair::new(inst, b, 2).unwrap()
    }

    #[test]
    fn hand_drawn_flow_is_a_witness() {
        let pair = nested_pair();
        let sc = SubtourCoverInstance::new(&pair, EdgeMultiset::new()).unwrap();
        let levels = build_level_structure(pair.instance());
        assert_eq!(levels.levels.len(), 4);
        let forward: Vec<usize> = (0..18)
            .filter(|&e| levels.class[e] == EdgeClass::Forward)
            .collect();
        assert_eq!(forward, vec![13, 16, 17]);
        let red: Vec<Rational> = (0..18)
            .map(|e| if RED.contains(&e) { frac(1, 2) } else { int(0) })
            .collect();
        assert_eq!(witness_violation(&sc, &levels, &red), None);
        assert!(support_is_acyclic(sc.g(), &red));

        let mut audit = Audit::new(true);
        let w = compute_witness_flow(&sc, &levels, &mut audit).unwrap();
        assert_eq!(witness_violation(&sc, &levels, &w.f), None);
        let total = |f: &[Rational]| f.iter().sum::<Rational>();
        assert!(total(&w.f) <= total(&red));
        for &e in &forward {
            assert_eq!(w.f[e], frac(1, 2));
        }
    }

    #[test]
    fn violations_are_reported() {
        let pair = nested_pair();
        let sc = SubtourCoverInstance::new(&pair, EdgeMultiset::new()).unwrap();
        let levels = build_level_structure(pair.instance());
        let mut f: Vec<Rational> = (0..18)
            .map(|e| if RED.contains(&e) { frac(1, 2) } else { int(0) })
            .collect();
        f[13] = int(0);
        assert!(witness_violation(&sc, &levels, &f)
            .unwrap()
            .contains("forward"));
        f[13] = frac(1, 2);
        f[3] = frac(1, 4);
        assert!(witness_violation(&sc, &levels, &f)
            .unwrap()
            .contains("backward"));
        f[3] = int(0);
        f[14] = int(0);
        assert!(witness_violation(&sc, &levels, &f)
            .unwrap()
            .contains("absorbs"));
    }
}
