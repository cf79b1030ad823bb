//! Rerouting half a unit of the flow through each `Ŵ_i` via `a_i`.

use num_traits::{Signed, Zero};

use super::augment::Augmented;
use super::levels::{node, SplitGraph, SplitKind};
use crate::audit::Audit;
use crate::error::{Error, Result};
use crate::rational::{frac, int, Rational};

/// A path through `U` from the contracted outside vertex back to it.
#[derive(Debug, Clone)]
struct Through {
    enter: usize,
    inner: Vec<usize>,
    leave: usize,
    weight: Rational,
}

/// Decomposes the flow through `U` into outside-to-outside paths of total
/// weight exactly 1. Internal cycles met on the way are discarded.
fn decompose(split: &SplitGraph, z: &[Rational], inside: &[bool]) -> Result<Vec<Through>> {
    let stage = "lift_and_reroute";
    let mut rem = z.to_vec();
    let mut out_arcs = vec![Vec::new(); split.nodes];
    for (a, arc) in split.arcs.iter().enumerate() {
        out_arcs[arc.from].push(a);
    }
    let one = int(1);
    let mut collected = Rational::zero();
    let mut paths = Vec::new();
    let cap = split.arcs.len() * split.arcs.len() + 1;
    for _ in 0..cap {
        if collected == one {
            return Ok(paths);
        }
        let enter = (0..split.arcs.len())
            .find(|&a| {
                !inside[split.arcs[a].from] && inside[split.arcs[a].to] && rem[a].is_positive()
            })
            .ok_or_else(|| {
                Error::assertion(stage, format!("only {collected} units enter the component"))
            })?;
        let mut inner: Vec<usize> = Vec::new();
        let mut at = vec![None; split.nodes];
        let mut cur = split.arcs[enter].to;
        at[cur] = Some(0);
        let leave = loop {
            let a = *out_arcs[cur]
                .iter()
                .find(|&&a| rem[a].is_positive())
                .ok_or_else(|| {
                    Error::assertion(stage, format!("flow is not conserved at split node {cur}"))
                })?;
            let next = split.arcs[a].to;
            if !inside[next] {
                break a;
            }
            inner.push(a);
            if let Some(pos) = at[next] {
                // Cancel the internal cycle just closed.
                let cycle: Vec<usize> = inner.drain(pos..).collect();
                let w = cycle.iter().map(|&c| rem[c].clone()).min().unwrap();
                for &c in &cycle {
                    rem[c] -= &w;
                    at[split.arcs[c].to] = None;
                }
                at[next] = Some(pos);
            } else {
                at[next] = Some(inner.len());
            }
            cur = next;
        };
        let mut weight = rem[enter]
            .clone()
            .min(rem[leave].clone())
            .min(&one - &collected);
        for &a in &inner {
            weight = weight.min(rem[a].clone());
        }
        for &a in inner.iter().chain([&enter, &leave]) {
            rem[a] -= &weight;
        }
        collected += &weight;
        paths.push(Through {
            enter,
            inner,
            leave,
            weight,
        });
    }
    Err(Error::IterationCap {
        stage,
        detail: "path decomposition".into(),
    })
}

fn copy_of(split: &SplitGraph, arc: usize) -> (usize, usize) {
    match split.arcs[arc].kind {
        SplitKind::Copy { edge, level } => (edge, level),
        other => unreachable!("boundary arc of a component is a vertical arc {other:?}"),
    }
}

/// In-flow of `a^level` not counting the vertical arc `a¹ → a⁰`.
pub fn aux_inflow(split: &SplitGraph, z: &[Rational], a: usize, level: usize) -> Rational {
    split
        .arcs
        .iter()
        .zip(z)
        .filter(|(arc, _)| arc.to == node(a, level) && !matches!(arc.kind, SplitKind::Down(_)))
        .map(|(_, v)| v.clone())
        .sum()
}

/// Returns the rerouted circulation and the level `q_i` chosen for every
/// auxiliary vertex.
pub fn lift_and_reroute(
    aug: &Augmented,
    split: &SplitGraph,
    z: Vec<Rational>,
    audit: &mut Audit,
) -> Result<(Vec<Rational>, Vec<usize>)> {
    let stage = "lift_and_reroute";
    let half = frac(1, 2);
    let base_cost = split.cost(&z);
    let mut z = z;
    let mut levels = Vec::with_capacity(aug.aux.len());
    for (i, &a) in aug.aux.iter().enumerate() {
        let mut inside = vec![false; split.nodes];
        for v in aug.hat[i].iter() {
            inside[node(v, 0)] = true;
            inside[node(v, 1)] = true;
        }
        let paths = decompose(split, &z, &inside)?;
        let lower: Rational = paths
            .iter()
            .filter(|p| split.arcs[p.enter].to % 2 == 0)
            .map(|p| p.weight.clone())
            .sum();
        let q = if lower >= half { 0 } else { 1 };
        let mut taken = Rational::zero();
        for p in paths.iter().filter(|p| split.arcs[p.enter].to % 2 == q) {
            if taken == half {
                break;
            }
            let w = p.weight.clone().min(&half - &taken);
            taken += &w;
            let (ein, qin) = copy_of(split, p.enter);
            let (eout, pout) = copy_of(split, p.leave);
            audit.check(stage, pout <= q, || {
                format!("path through Ŵ_{i} climbs from level {q} to {pout}")
            })?;
            let new_in = split.copy[aug.into_aux[i][&ein]][qin].ok_or_else(|| {
                Error::assertion(stage, format!("missing level-{qin} copy into a_{i}"))
            })?;
            let new_out = split.copy[aug.out_of_aux[i][&eout]][pout].ok_or_else(|| {
                Error::assertion(stage, format!("missing level-{pout} copy out of a_{i}"))
            })?;
            z[p.enter] -= &w;
            z[new_in] += &w;
            for &c in &p.inner {
                z[c] -= &w;
            }
            z[p.leave] -= &w;
            z[new_out] += &w;
            if pout < q {
                z[split.down[a]] += &w;
            }
        }
        audit.check(stage, taken == half, || {
            format!("level {q} carries only {taken} through Ŵ_{i}")
        })?;
        levels.push(q);
    }
    audit.check(stage, split.is_circulation(&z), || {
        "rerouted flow is not a circulation".into()
    })?;
    let cost = split.cost(&z);
    audit.check(stage, cost <= base_cost, || {
        format!("rerouting raised the cost from {base_cost} to {cost}")
    })?;
    for (i, &a) in aug.aux.iter().enumerate() {
        let q = levels[i];
        let (main, other) = (aux_inflow(split, &z, a, q), aux_inflow(split, &z, a, 1 - q));
        audit.check(stage, main == half && other.is_zero(), || {
            format!(
                "a_{i}: in-flow {main} on level {q} and {other} on level {}",
                1 - q
            )
        })?;
    }
    Ok((z, levels))
}
