//! Integral rounding of `2z̄` and the checks on its projection.

use num_traits::{Signed, Zero};

use super::augment::Augmented;
use super::levels::{node, EdgeClass, SplitGraph, SplitKind};
use super::reroute::aux_inflow;
use crate::audit::Audit;
use crate::error::{Error, Result};
use crate::flow::{min_cost_circulation, CirculationArc};
use crate::graph::{components, EdgeMultiset};
use crate::instance::StronglyLaminarInstance;
use crate::rational::{int, Rational};
use crate::subtour_cover::witness::support_is_acyclic;

#[derive(Debug, Clone)]
pub struct Rounded {
    pub z: Vec<Rational>,
    /// Image of `π(z̄*)` on `Ḡ`.
    pub f_bar: EdgeMultiset,
    /// Lower-level part of `π(z̄*)`.
    pub lower: Vec<Rational>,
}

fn to_u64(r: &Rational) -> u64 {
    r.to_integer().try_into().unwrap_or(u64::MAX)
}

/// Min-cost integral circulation below `⌈2z̄⌉`, with every original `v¹`
/// throttled to `⌈2z̄(δ⁻(v¹))⌉` and exactly one unit into `a_i^{q_i}`.
pub fn round_circulation(
    inst: &StronglyLaminarInstance,
    aug: &Augmented,
    split: &SplitGraph,
    z: &[Rational],
    q: &[usize],
    audit: &mut Audit,
) -> Result<Rounded> {
    let stage = "round_circulation";
    let n = inst.n();
    let two = int(2);
    // Every node with a throttle gets a separate exit node.
    let mut exit: Vec<usize> = (0..split.nodes).collect();
    let mut next = split.nodes;
    let mut arcs = Vec::new();
    let mut throttles = Vec::new();
    for v in 0..n {
        let cap = (split.inflow(z, node(v, 1)) * &two).ceil();
        exit[node(v, 1)] = next;
        throttles.push((node(v, 1), next, Rational::zero(), cap));
        next += 1;
    }
    for (i, &a) in aug.aux.iter().enumerate() {
        let s = node(a, q[i]);
        exit[s] = next;
        throttles.push((s, next, int(1), int(1)));
        next += 1;
    }
    for (from, to, lower, upper) in &throttles {
        arcs.push(CirculationArc {
            from: *from,
            to: *to,
            lower: lower.clone(),
            upper: upper.clone(),
            cost: Rational::zero(),
        });
    }
    let mut which = Vec::new();
    for (a, arc) in split.arcs.iter().enumerate() {
        let cap = (&z[a] * &two).ceil();
        if cap.is_positive() {
            which.push(a);
            arcs.push(CirculationArc {
                from: exit[arc.from],
                to: arc.to,
                lower: Rational::zero(),
                upper: cap,
                cost: arc.cost.clone(),
            });
        }
    }
    let flow = min_cost_circulation(next, &arcs)
        .map_err(|e| Error::assertion(stage, format!("rounding: {e}")))?;
    let mut zs = vec![Rational::zero(); split.arcs.len()];
    for (k, &a) in which.iter().enumerate() {
        zs[a] = flow[throttles.len() + k].clone();
    }

    // (A)–(D)
    audit.check(stage, split.is_circulation(&zs), || {
        "rounded flow is not a circulation".into()
    })?;
    let bounded = zs
        .iter()
        .zip(z)
        .all(|(s, f)| s.is_integer() && !s.is_negative() && *s <= (f * &two).ceil());
    audit.check(stage, bounded, || {
        "rounded flow exceeds ⌈2z̄⌉ or is fractional".into()
    })?;
    let (c_star, c_double) = (split.cost(&zs), split.cost(z) * &two);
    audit.check(stage, c_star <= c_double, || {
        format!("c(z̄*) = {c_star} > c(2z̄) = {c_double}")
    })?;
    for v in 0..n {
        let (got, cap) = (
            split.inflow(&zs, node(v, 1)),
            (split.inflow(z, node(v, 1)) * &two).ceil(),
        );
        audit.check(stage, got <= cap, || {
            format!("{got} units enter {v}¹, cap {cap}")
        })?;
    }
    for (i, &a) in aug.aux.iter().enumerate() {
        let hit = (0..2)
            .filter(|&l| split.inflow(&zs, node(a, l)) == int(1))
            .count();
        audit.check(
            stage,
            split.inflow(&zs, node(a, q[i])) == int(1) && hit >= 1,
            || format!("a_{i} does not receive exactly one unit on level {}", q[i]),
        )?;
    }

    let m = aug.g.m();
    let (xs, lower) = split.project(m, &zs);
    let mut f_bar = EdgeMultiset::new();
    for (e, v) in xs.iter().enumerate() {
        f_bar.add(e, to_u64(v));
    }
    let g = &aug.g;
    for (i, &a) in aug.aux.iter().enumerate() {
        let deg: u64 = g.in_edges(a).iter().map(|&e| f_bar.get(e)).sum();
        audit.check(stage, deg == 1, || {
            format!("a_{i} has {deg} incoming edges")
        })?;
        let other = aux_inflow(split, &zs, a, 1 - q[i]);
        audit.check(stage, other.is_zero(), || {
            format!("a_{i} gets {other} units on the wrong level")
        })?;
    }
    audit.check(stage, support_is_acyclic(g, &lower), || {
        "lower part of the rounded flow has a cycle".into()
    })?;
    let comps = components(
        g.n(),
        f_bar.iter().map(|(e, _)| (g.edge(e).tail, g.edge(e).head)),
    );
    for comp in comps {
        if comp.iter().any(|v| aug.on_backbone[v]) {
            continue;
        }
        let mask = comp.mask(g.n());
        for (e, _) in f_bar.restricted_to(g, &mask).iter() {
            let ed = g.edge(e);
            audit.check(stage, lower[e].is_zero(), || {
                format!("edge {e} of a backbone-free component is on level 0")
            })?;
            let class = EdgeClass::of(aug.r[ed.tail], aug.r[ed.head]);
            audit.check(stage, class != EdgeClass::Forward, || {
                format!("backbone-free component uses forward edge {e}")
            })?;
        }
        for v in comp
            .iter()
            .filter(|&v| v < n && inst.y_vertex(v).is_positive())
        {
            let deg: u64 = g.in_edges(v).iter().map(|&e| f_bar.get(e)).sum();
            audit.check(stage, deg <= 2, || {
                format!("vertex {v} with y_v > 0 has in-degree {deg}")
            })?;
        }
    }
    // Vertical arcs are consistent with the chosen levels.
    debug_assert!(split
        .arcs
        .iter()
        .all(|a| !matches!(a.kind, SplitKind::Up(v) if !aug.on_backbone[v])));
    Ok(Rounded {
        z: zs,
        f_bar,
        lower,
    })
}
