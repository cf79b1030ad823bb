//! Subtour Cover: given a vertebrate pair and an Eulerian `H` away from the
//! backbone, find an Eulerian `F` leaving every component of `H`, whose
//! components that cross a non-singleton family set touch the backbone.

mod augment;
mod levels;
mod reroute;
mod round;
mod witness;

pub use augment::{build_augmented_graph, source_component, Augmented};
pub use levels::{
    build_level_structure, classify, node, EdgeClass, LevelStructure, SplitArc, SplitGraph,
    SplitKind,
};
pub use reroute::{aux_inflow, lift_and_reroute};
pub use round::{round_circulation, Rounded};
pub use witness::{
    boundary_mass, compute_witness_flow, support_is_acyclic, witness_lp, witness_violation,
    WitnessFlow,
};

use num_traits::Zero;

use crate::audit::Audit;
use crate::error::{Error, Result};
use crate::graph::{bfs_path, is_eulerian_connected, Digraph, EdgeId, EdgeMultiset, VertexSet};
use crate::rational::{int, Rational};
use crate::vertebrate::VertebratePair;

#[derive(Debug, Clone)]
pub struct SubtourCoverInstance<'a> {
    pair: &'a VertebratePair,
    h: EdgeMultiset,
    comps: Vec<VertexSet>,
    comp_masks: Vec<Vec<bool>>,
}

impl<'a> SubtourCoverInstance<'a> {
    pub fn new(pair: &'a VertebratePair, h: EdgeMultiset) -> Result<Self> {
        let inst = pair.instance();
        let g = inst.g();
        let check = is_eulerian_connected(g, &h)?;
        if !check.eulerian {
            return Err(Error::contract("subtour_cover", "H is not Eulerian"));
        }
        for (e, _) in h.iter() {
            let ed = g.edge(e);
            if pair.on_backbone(ed.tail) || pair.on_backbone(ed.head) {
                return Err(Error::contract(
                    "subtour_cover",
                    format!("H edge {e} touches the backbone"),
                ));
            }
            if inst.crosses_non_singleton(e) {
                return Err(Error::contract(
                    "subtour_cover",
                    format!("H edge {e} crosses a family set"),
                ));
            }
        }
        let comps: Vec<VertexSet> = check
            .components
            .into_iter()
            .filter(|c| !c.iter().any(|v| pair.on_backbone(v)))
            .collect();
        let comp_masks = comps.iter().map(|c| c.mask(g.n())).collect();
        Ok(Self {
            pair,
            h,
            comps,
            comp_masks,
        })
    }

    pub fn pair(&self) -> &'a VertebratePair {
        self.pair
    }

    pub fn g(&self) -> &'a Digraph {
        self.pair.instance().g()
    }

    pub fn h(&self) -> &EdgeMultiset {
        &self.h
    }

    /// `W_1, …, W_k`: the components of `(V ∖ V(B), H)`.
    pub fn components(&self) -> &[VertexSet] {
        &self.comps
    }

    /// Number of sets `W_i` whose boundary contains `e`.
    pub fn boundary_count(&self, e: EdgeId) -> usize {
        let g = self.g();
        self.comp_masks.iter().filter(|m| g.crosses(e, m)).count()
    }
}

/// Intermediate results of one run, for inspection.
#[derive(Debug, Clone)]
pub struct SubtourCoverTrace {
    pub levels: LevelStructure,
    pub witness: WitnessFlow,
    pub hat: Vec<VertexSet>,
    pub aux_levels: Vec<usize>,
    pub rounded_cost: Rational,
    pub augmented: Augmented,
    pub split: SplitGraph,
    /// Rerouted fractional circulation on `split`.
    pub zbar: Vec<Rational>,
    pub rounded: Rounded,
}

/// Replaces `a_i`-edges by their origins and closes each gap with a
/// breadth-first path inside `W_i`.
pub fn map_back(
    sc: &SubtourCoverInstance<'_>,
    aug: &Augmented,
    f_bar: &EdgeMultiset,
    audit: &mut Audit,
) -> Result<EdgeMultiset> {
    let stage = "map_back";
    let inst = sc.pair().instance();
    let g = inst.g();
    let mut f = EdgeMultiset::new();
    for (e, k) in f_bar.iter() {
        f.add(aug.origin[e], k);
    }
    for (i, &a) in aug.aux.iter().enumerate() {
        let ein = aug
            .g
            .in_edges(a)
            .iter()
            .copied()
            .find(|&e| f_bar.get(e) > 0);
        let eout = aug
            .g
            .out_edges(a)
            .iter()
            .copied()
            .find(|&e| f_bar.get(e) > 0);
        let (Some(ein), Some(eout)) = (ein, eout) else {
            return Err(Error::assertion(
                stage,
                format!("a_{i} is not used by the rounded solution"),
            ));
        };
        let s = g.edge(aug.origin[ein]).head;
        let t = g.edge(aug.origin[eout]).tail;
        let w = &sc.components()[i];
        let path = bfs_path(g, s, t, &w.mask(g.n()), |_| true)
            .ok_or_else(|| Error::assertion(stage, format!("no {s}-{t} path inside {w:?}")))?;
        audit.check(
            stage,
            path.iter().all(|&e| !inst.crosses_non_singleton(e)),
            || format!("gap path {s}->{t} crosses a family set"),
        )?;
        let cost = inst.path_cost(&path);
        let budget: Rational = w.iter().map(|v| inst.y_vertex(v) * int(2)).sum();
        audit.check(stage, cost <= budget, || {
            format!("gap path in {w:?} costs {cost} > {budget}")
        })?;
        for e in path {
            f.add(e, 1);
        }
    }
    Ok(f)
}

/// Checks that a proposed cover is feasible and within its cost bounds.
pub fn check_cover(
    sc: &SubtourCoverInstance<'_>,
    f: &EdgeMultiset,
    audit: &mut Audit,
) -> Result<()> {
    let stage = "subtour_cover";
    let pair = sc.pair();
    let inst = pair.instance();
    let g = inst.g();
    let check = is_eulerian_connected(g, f)?;
    audit.check(stage, check.eulerian, || "cover is not Eulerian".into())?;
    for w in sc.components() {
        let mask = w.mask(g.n());
        let leaves = f.iter().any(|(e, _)| g.crosses(e, &mask));
        audit.check(stage, leaves, || format!("cover does not leave {w:?}"))?;
    }
    let two = int(2);
    for comp in &check.components {
        let mask = comp.mask(g.n());
        let part = f.restricted_to(g, &mask);
        if part.is_empty() {
            continue;
        }
        let touches = comp.iter().any(|v| pair.on_backbone(v));
        let crosses = part.iter().any(|(e, _)| inst.crosses_non_singleton(e));
        audit.check(stage, touches || !crosses, || {
            format!("component {comp:?} crosses a family set off the backbone")
        })?;
        if !touches {
            let cost = part.cost(g);
            let budget: Rational = comp
                .iter()
                .map(|v| inst.y_vertex(v) * &two)
                .sum::<Rational>()
                * int(3);
            audit.check(stage, cost <= budget, || {
                format!("component {comp:?} costs {cost} > {budget}")
            })?;
        }
    }
    let cost = f.cost(g);
    let bound = inst.lp_value() * &two + pair.off_backbone_weight();
    audit.check(stage, cost <= bound, || {
        format!("cover costs {cost} > 2·LP + Σ2y = {bound}")
    })?;
    Ok(())
}

/// Solves Subtour Cover; also returns the intermediate results.
pub fn subtour_cover_traced(
    sc: &SubtourCoverInstance<'_>,
    audit: &mut Audit,
) -> Result<(EdgeMultiset, SubtourCoverTrace)> {
    let inst = sc.pair().instance();
    let levels = build_level_structure(inst);
    let witness = compute_witness_flow(sc, &levels, audit)?;
    let aug = build_augmented_graph(sc, &levels.r, &witness.f, audit)?;
    let class = classify(&aug.g, &aug.r);
    let split = SplitGraph::build(&aug.g, &class, &aug.on_backbone);
    let mut x = inst.x().to_vec();
    let mut f = witness.f.clone();
    x.resize(aug.g.m(), Rational::zero());
    f.resize(aug.g.m(), Rational::zero());
    let z = split.lift(&aug.g, &x, &f);
    audit.check(
        "lift_and_reroute",
        split.is_circulation(&z) && split.project(aug.g.m(), &z) == (x, f),
        || "lifting (x, f) is not a circulation or does not project back".into(),
    )?;
    let (zbar, aux_levels) = lift_and_reroute(&aug, &split, z, audit)?;
    let rounded = round_circulation(inst, &aug, &split, &zbar, &aux_levels, audit)?;
    let cover = map_back(sc, &aug, &rounded.f_bar, audit)?;
    check_cover(sc, &cover, audit)?;
    let trace = SubtourCoverTrace {
        levels,
        witness,
        hat: aug.hat.clone(),
        aux_levels,
        rounded_cost: split.cost(&rounded.z),
        augmented: aug,
        split,
        zbar,
        rounded,
    };
    Ok((cover, trace))
}

pub fn subtour_cover(sc: &SubtourCoverInstance<'_>, audit: &mut Audit) -> Result<EdgeMultiset> {
    subtour_cover_traced(sc, audit).map(|(f, _)| f)
}
