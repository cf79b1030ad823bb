//! Turning an optimal dual into one with laminar, then strongly laminar,
//! support.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use super::atsp::{dual_slacks, DualLp, PrimalLp};
use crate::audit::Audit;
use crate::error::{Error, Result};
use crate::graph::{check_laminar, scc_topological, Digraph, VertexSet};
use crate::rational::{int, Rational};

fn check_step(
    g: &Digraph,
    dual: &DualLp,
    objective: &Rational,
    stage: &'static str,
    audit: &mut Audit,
) -> Result<()> {
    audit.check_with(
        stage,
        || {
            dual.y.values().all(|y| y.is_positive())
                && dual_slacks(g, dual).iter().all(|s| !s.is_negative())
                && dual.y.values().map(|y| y * int(2)).sum::<Rational>() == *objective
        },
        || format!("dual became infeasible or changed objective: {dual:?}"),
    )
}

/// Rewrites every support set to the side avoiding the root `n − 1`,
/// merging sets that coincide afterwards.
pub fn canonicalize(n: usize, dual: &DualLp) -> DualLp {
    let root = n - 1;
    let mut y: BTreeMap<VertexSet, Rational> = BTreeMap::new();
    for (u, w) in &dual.y {
        let key = if u.contains(root) {
            u.complement(n)
        } else {
            u.clone()
        };
        *y.entry(key).or_insert_with(Rational::zero) += w;
    }
    y.retain(|_, w| w.is_positive());
    DualLp {
        a: dual.a.clone(),
        y,
        objective: dual.objective.clone(),
    }
}

fn first_crossing(y: &BTreeMap<VertexSet, Rational>) -> Option<(VertexSet, VertexSet)> {
    let sets: Vec<&VertexSet> = y.keys().collect();
    for (i, a) in sets.iter().enumerate() {
        for b in &sets[i + 1..] {
            if a.crosses(b) {
                return Some(((*a).clone(), (*b).clone()));
            }
        }
    }
    None
}

/// Uncrossing: while two support sets cross, shift `min(y_A, y_B)` from both
/// onto `A ∩ B` and `A ∪ B`.
pub fn uncross_dual(g: &Digraph, dual: &DualLp, audit: &mut Audit) -> Result<DualLp> {
    let stage = "uncross_dual";
    let n = g.n();
    let objective = dual.objective.clone();
    let mut out = canonicalize(n, dual);
    check_step(g, &out, &objective, stage, audit)?;
    let cap = 8 * n * n * dual.y.len().max(1);
    let mut steps = 0;
    while let Some((a, b)) = first_crossing(&out.y) {
        if steps == cap {
            return Err(Error::IterationCap {
                stage,
                detail: format!(
                    "{cap} uncrossing steps; support {:?}",
                    out.y.keys().collect::<Vec<_>>()
                ),
            });
        }
        steps += 1;
        let eps = out.y[&a].clone().min(out.y[&b].clone());
        for s in [&a, &b] {
            let w = out.y.get_mut(s).unwrap();
            *w -= &eps;
            if w.is_zero() {
                out.y.remove(s);
            }
        }
        for s in [a.intersection(&b), a.union(&b)] {
            *out.y.entry(s).or_insert_with(Rational::zero) += &eps;
        }
        check_step(g, &out, &objective, stage, audit)?;
    }
    let sets: Vec<VertexSet> = out.y.keys().cloned().collect();
    audit.check(stage, check_laminar(&sets), || {
        "support not laminar after uncrossing".into()
    })?;
    Ok(out)
}

/// Repeatedly takes an inclusion-minimal support set `U` with `g[U]` not
/// strongly connected, moves its weight onto the source component `S` of
/// `g[U]` and compensates with `a_v −= y_U` on `U ∖ S`. `g` must be the
/// support graph of `x`.
pub fn make_strongly_laminar(
    g: &Digraph,
    x: &PrimalLp,
    dual: &DualLp,
    audit: &mut Audit,
) -> Result<DualLp> {
    let stage = "make_strongly_laminar";
    let objective = dual.objective.clone();
    if x.x.iter().any(|v| !v.is_positive()) {
        return Err(Error::contract(stage, "graph must be the support of x"));
    }
    let mut out = dual.clone();
    let cap = 2 * g.n() + 1;
    for _ in 0..cap {
        let bad = out
            .y
            .keys()
            .filter(|u| !g.is_strongly_connected_on(u))
            .min_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)))
            .cloned();
        let Some(u) = bad else {
            audit.check(
                stage,
                check_laminar(&out.y.keys().cloned().collect::<Vec<_>>()),
                || "support lost laminarity".into(),
            )?;
            return Ok(out);
        };
        let s = scc_topological(g, &u).into_iter().next().unwrap();
        let yu = out.y.remove(&u).unwrap();
        *out.y.entry(s.clone()).or_insert_with(Rational::zero) += &yu;
        for v in u.difference(&s).iter() {
            out.a[v] -= &yu;
        }
        check_step(g, &out, &objective, stage, audit)?;
    }
    Err(Error::IterationCap {
        stage,
        detail: format!("more than {} moves", cap),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::atsp::is_dual_feasible;
    use crate::rational::frac;

    fn vs(v: &[usize]) -> VertexSet {
        VertexSet::new(v.to_vec())
    }

    fn complete(n: usize, cost: i64) -> Digraph {
        let mut g = Digraph::new(n);
        for u in 0..n {
            for v in 0..n {
                if u != v {
                    g.add_edge(u, v, int(cost)).unwrap();
                }
            }
        }
        g
    }

    fn dual_of(n: usize, sets: &[(&[usize], Rational)]) -> DualLp {
        let mut d = DualLp {
            a: vec![Rational::zero(); n],
            y: sets.iter().map(|(s, y)| (vs(s), y.clone())).collect(),
            objective: Rational::zero(),
        };
        d.recompute_objective();
        d
    }

    #[test]
    fn one_uncrossing_step() {
        let g = complete(4, 1);
        let d = dual_of(4, &[(&[0, 1], frac(1, 4)), (&[1, 2], frac(1, 4))]);
        let out = uncross_dual(&g, &d, &mut Audit::default()).unwrap();
        let expect: BTreeMap<_, _> = [(vs(&[1]), frac(1, 4)), (vs(&[0, 1, 2]), frac(1, 4))].into();
        assert_eq!(out.y, expect);
        assert_eq!(out.objective, d.objective);
    }

    #[test]
    fn laminar_dual_unchanged_and_complements_resolved() {
        let g = complete(4, 1);
        let d = dual_of(4, &[(&[0], frac(1, 4)), (&[0, 1], frac(1, 4))]);
        assert_eq!(uncross_dual(&g, &d, &mut Audit::default()).unwrap().y, d.y);
        // {0,1} and {1,2,3} cross, but {1,2,3} is the complement of {0}.
        let d = dual_of(4, &[(&[0, 1], frac(1, 4)), (&[1, 2, 3], frac(1, 4))]);
        let mut audit = Audit::default();
        let out = uncross_dual(&g, &d, &mut audit).unwrap();
        let expect: BTreeMap<_, _> = [(vs(&[0]), frac(1, 4)), (vs(&[0, 1]), frac(1, 4))].into();
        assert_eq!(out.y, expect);
        assert!(is_dual_feasible(&g, &out));
    }

    #[test]
    fn weight_moves_to_source_component() {
        // g[{0,1,2}] has components {0} then {1,2}.
        let arcs = [(0, 1), (1, 2), (2, 1), (2, 3), (3, 0)];
        let g = Digraph::from_edges(4, arcs.into_iter().map(|(a, b)| (a, b, int(4)))).unwrap();
        let x = PrimalLp {
            x: vec![int(1); 5],
            objective: int(20),
        };
        let d = dual_of(4, &[(&[0, 1, 2], int(1))]);
        let out = make_strongly_laminar(&g, &x, &d, &mut Audit::default()).unwrap();
        let expect: BTreeMap<_, _> = [(vs(&[0]), int(1))].into();
        assert_eq!(out.y, expect);
        assert_eq!(out.a, vec![int(0), int(-1), int(-1), int(0)]);
        assert_eq!(out.objective, d.objective);
    }

    #[test]
    fn singleton_support_is_already_strong() {
        let g = crate::graph::fixtures::c3();
        let x = PrimalLp {
            x: vec![int(1); 3],
            objective: int(3),
        };
        let d = dual_of(3, &[(&[0], frac(1, 2))]);
        assert_eq!(
            make_strongly_laminar(&g, &x, &d, &mut Audit::default()).unwrap(),
            d
        );
    }
}
