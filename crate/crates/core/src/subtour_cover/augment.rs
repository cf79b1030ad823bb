//! The graph `Ḡ` with one auxiliary vertex per component `W_i`, standing in
//! for the source component `Ŵ_i` of the residual graph of `f` on `W_i`.

use std::collections::BTreeMap;

use num_traits::Signed;

use super::SubtourCoverInstance;
use crate::audit::Audit;
use crate::error::Result;
use crate::graph::{scc_topological_adj, Digraph, EdgeId, VertexId, VertexSet};
use crate::rational::Rational;

#[derive(Debug, Clone)]
pub struct Augmented {
    pub g: Digraph,
    /// Edge of `G` every edge of `Ḡ` stands for; identity on `G`'s edges.
    pub origin: Vec<EdgeId>,
    pub aux: Vec<VertexId>,
    pub hat: Vec<VertexSet>,
    /// Per `i`: edge entering `Ŵ_i` ↦ its copy entering `a_i`.
    pub into_aux: Vec<BTreeMap<EdgeId, EdgeId>>,
    /// Per `i`: edge leaving `Ŵ_i` ↦ its copy leaving `a_i`.
    pub out_of_aux: Vec<BTreeMap<EdgeId, EdgeId>>,
    pub r: Vec<usize>,
    pub on_backbone: Vec<bool>,
}

/// First strongly connected component of the residual graph of `f` inside
/// `W` (arc `v→w` where `f < x`, arc `w→v` where `f > 0`).
pub fn source_component(g: &Digraph, x: &[Rational], f: &[Rational], w: &VertexSet) -> VertexSet {
    let mask = w.mask(g.n());
    let mut adj = vec![Vec::new(); g.n()];
    for (e, ed) in g.edges().iter().enumerate() {
        if !(mask[ed.tail] && mask[ed.head]) {
            continue;
        }
        if f[e] < x[e] {
            adj[ed.tail].push(ed.head);
        }
        if f[e].is_positive() {
            adj[ed.head].push(ed.tail);
        }
    }
    scc_topological_adj(&adj, &mask)
        .into_iter()
        .next()
        .unwrap_or_default()
}

pub fn build_augmented_graph(
    sc: &SubtourCoverInstance<'_>,
    r: &[usize],
    f: &[Rational],
    audit: &mut Audit,
) -> Result<Augmented> {
    let stage = "build_augmented_graph";
    let g = sc.g();
    let x = sc.pair().instance().x();
    let n = g.n();
    let k = sc.components().len();
    let mut gbar = Digraph::new(n + k);
    for e in g.edges() {
        gbar.add_edge(e.tail, e.head, e.cost.clone())?;
    }
    let mut origin: Vec<EdgeId> = (0..g.m()).collect();
    let mut rbar = r.to_vec();
    let mut on_backbone: Vec<bool> = (0..n).map(|v| sc.pair().on_backbone(v)).collect();
    let mut hat = Vec::with_capacity(k);
    let mut into_aux = Vec::with_capacity(k);
    let mut out_of_aux = Vec::with_capacity(k);
    for (i, w) in sc.components().iter().enumerate() {
        let a = n + i;
        let h = source_component(g, x, f, w);
        let wr = r[w.smallest().unwrap()];
        audit.check(stage, w.iter().all(|v| r[v] == wr), || {
            format!("component {w:?} spans several levels")
        })?;
        // Nothing in the residual graph of W enters Ŵ.
        let hmask = h.mask(n);
        let wmask = w.mask(n);
        let closed = g.edges().iter().enumerate().all(|(e, ed)| {
            let inside = wmask[ed.tail] && wmask[ed.head];
            !inside
                || hmask[ed.tail] == hmask[ed.head]
                || (hmask[ed.head] && f[e] >= x[e])
                || (hmask[ed.tail] && !f[e].is_positive())
        });
        audit.check(stage, !h.is_empty() && closed, || {
            format!("{h:?} is not a source component of {w:?}")
        })?;
        rbar.push(wr);
        on_backbone.push(false);
        let mut into = BTreeMap::new();
        let mut out = BTreeMap::new();
        let mask = h.mask(n + k);
        for e in 0..gbar.m() {
            let ed = gbar.edge(e).clone();
            if !mask[ed.tail] && mask[ed.head] {
                into.insert(e, gbar.add_edge(ed.tail, a, ed.cost.clone())?);
                origin.push(origin[e]);
            } else if mask[ed.tail] && !mask[ed.head] {
                out.insert(e, gbar.add_edge(a, ed.head, ed.cost.clone())?);
                origin.push(origin[e]);
            }
        }
        hat.push(h);
        into_aux.push(into);
        out_of_aux.push(out);
    }
    Ok(Augmented {
        g: gbar,
        origin,
        aux: (n..n + k).collect(),
        hat,
        into_aux,
        out_of_aux,
        r: rbar,
        on_backbone,
    })
}
