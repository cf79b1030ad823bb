//! Svensson's algorithm: turns the Subtour Cover solver into a solver for
//! vertebrate pairs, restarting from better initializations `H̃` until the
//! main loop finishes.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};

use crate::audit::Audit;
use crate::error::{Error, Result};
use crate::graph::{
    components, is_eulerian_connected, shortest_path, Digraph, EdgeMultiset, VertexId, VertexSet,
};
use crate::rational::{self, frac, int, Rational};
use crate::subtour_cover::{subtour_cover, SubtourCoverInstance};
use crate::vertebrate::{pair_bound, VertebratePair, VertebrateSolver};

/// Subtour Cover constants.
pub const ALPHA: i64 = 3;
pub const KAPPA: i64 = 2;
pub const BETA: i64 = 1;

/// `ε′ = ε / (3 + 4α + 1/(2α))`.
pub fn eps_prime(epsilon: &Rational) -> Rational {
    let a = int(ALPHA);
    epsilon / (int(3) + &a * int(4) + int(1) / (&a * int(2)))
}

/// Per-vertex budgets.
#[derive(Debug, Clone)]
pub struct EllFunction {
    values: Vec<Rational>,
    pub eps_prime: Rational,
    /// `Σ_{u ∉ V(B)} 2 y_u`
    pub off_weight: Rational,
}

impl EllFunction {
    pub fn new(pair: &VertebratePair, epsilon: &Rational) -> Self {
        let inst = pair.instance();
        let n = inst.n();
        let ep = eps_prime(epsilon);
        let off_weight = pair.off_backbone_weight();
        let nb = (0..n).filter(|&v| pair.on_backbone(v)).count();
        let on_value = (int(KAPPA) * inst.lp_value() + int(BETA) * &off_weight) / int(nb as i64);
        let spread = &ep / int(n as i64) * &off_weight;
        let factor = (int(1) + &ep) * int(2 * ALPHA);
        let values = (0..n)
            .map(|v| {
                if pair.on_backbone(v) {
                    on_value.clone()
                } else {
                    &factor * inst.y_vertex(v) * int(2) + &spread
                }
            })
            .collect();
        Self {
            values,
            eps_prime: ep,
            off_weight,
        }
    }

    pub fn of(&self, v: VertexId) -> &Rational {
        &self.values[v]
    }

    pub fn set(&self, s: &VertexSet) -> Rational {
        s.iter().map(|v| &self.values[v]).sum()
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    /// `p = log_{1+ε′}((2+ε′)/ε′)`.
    pub fn p(&self) -> f64 {
        let ep = &self.eps_prime;
        rational::ln(&((int(2) + ep) / ep)) / rational::ln(&(int(1) + ep))
    }

    /// `C` with `ℓ(v) ≥ ℓ(V∖V(B)) / (C n)` for every vertex.
    pub fn regularity_constant(&self) -> Rational {
        let ep = &self.eps_prime;
        ((int(1) + ep) * int(2 * ALPHA) + ep) / ep
    }
}

/// `ln(ℓ^{1+p})`, `-∞` for zero.
fn log_pow(l: &Rational, p: f64) -> f64 {
    if l.is_positive() {
        (1.0 + p) * rational::ln(l)
    } else {
        f64::NEG_INFINITY
    }
}

fn log_sum(terms: impl IntoIterator<Item = f64>) -> f64 {
    let terms: Vec<f64> = terms.into_iter().collect();
    let top = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if top == f64::NEG_INFINITY {
        return top;
    }
    top + terms.iter().map(|t| (t - top).exp()).sum::<f64>().ln()
}

/// Greedy knapsack: items by profit/weight non-increasing (ties by index),
/// each taken if it still fits. Weights must be positive.
pub fn knapsack_greedy(items: &[(Rational, Rational)], limit: &Rational) -> Vec<usize> {
    let mut order: Vec<usize> = (0..items.len()).collect();
    order.sort_by(|&a, &b| {
        let (wa, pa) = &items[a];
        let (wb, pb) = &items[b];
        (pb * wa).cmp(&(pa * wb)).then(a.cmp(&b))
    });
    let mut used = Rational::zero();
    let mut chosen = Vec::new();
    for i in order {
        if &used + &items[i].0 <= *limit {
            used += &items[i].0;
            chosen.push(i);
        }
    }
    chosen.sort_unstable();
    chosen
}

/// The partition `W̃_0 = V(B), W̃_1, …` for the current initialization.
#[derive(Debug, Clone)]
pub struct ComponentState {
    pub parts: Vec<VertexSet>,
    pub ell: Vec<Rational>,
    index: Vec<usize>,
}

impl ComponentState {
    pub fn new(pair: &VertebratePair, ell: &EllFunction, htilde: &EdgeMultiset) -> Self {
        let g = pair.instance().g();
        let n = g.n();
        let mut rest: Vec<VertexSet> = components(
            n,
            htilde.iter().map(|(e, _)| (g.edge(e).tail, g.edge(e).head)),
        )
        .into_iter()
        .filter(|c| !c.iter().any(|v| pair.on_backbone(v)))
        .collect();
        rest.sort_by(|a, b| {
            ell.set(b)
                .cmp(&ell.set(a))
                .then_with(|| a.smallest().cmp(&b.smallest()))
        });
        let mut parts = vec![pair.backbone_vertices()];
        parts.extend(rest);
        let mut index = vec![0; n];
        for (j, p) in parts.iter().enumerate() {
            for v in p.iter() {
                index[v] = j;
            }
        }
        let ell = parts.iter().map(|p| ell.set(p)).collect();
        Self { parts, ell, index }
    }

    pub fn ind(&self, verts: &VertexSet) -> usize {
        verts.iter().map(|v| self.index[v]).min().unwrap_or(0)
    }

    pub fn part_of(&self, v: VertexId) -> usize {
        self.index[v]
    }

    /// `ln Φ = ln Σ_{i ≥ 1} ℓ(W̃_i)^{1+p}`.
    pub fn log_phi(&self, p: f64) -> f64 {
        log_sum(self.ell[1..].iter().map(|l| log_pow(l, p)))
    }
}

/// Checks that `h` may serve as an initialization, or as `H` in the loop.
fn check_initialization(
    pair: &VertebratePair,
    ell: &EllFunction,
    h: &EdgeMultiset,
    audit: &mut Audit,
) -> Result<()> {
    let stage = "svensson_initialization";
    let inst = pair.instance();
    let g = inst.g();
    let check = is_eulerian_connected(g, h)?;
    audit.check(stage, check.eulerian, || {
        "initialization is not Eulerian".into()
    })?;
    let clean = h.iter().all(|(e, _)| {
        let ed = g.edge(e);
        !pair.on_backbone(ed.tail) && !pair.on_backbone(ed.head) && !inst.crosses_non_singleton(e)
    });
    audit.check(stage, clean, || {
        "initialization touches the backbone or crosses a family set".into()
    })?;
    for comp in &check.components {
        let cost = h.restricted_to(g, &comp.mask(g.n())).cost(g);
        let budget = ell.set(comp);
        audit.check(stage, cost <= budget, || {
            format!("component {comp:?} costs {cost} > ℓ = {budget}")
        })?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Solution(EdgeMultiset),
    BetterInit(EdgeMultiset),
}

/// Bookkeeping of one call of the main loop.
#[derive(Debug, Clone, Default)]
pub struct IterationRecord {
    pub loop_iterations: usize,
    pub subtour_cover_calls: usize,
    pub x_cost: Rational,
    pub x_bound: Rational,
    pub f_cost: Rational,
    pub f_bound: Rational,
    /// `c(H)` and the bound `ℓ(V(B)) + (2 + 1/(2α)) ℓ(V∖V(B))` on a solution.
    pub solution: Option<(Rational, Rational)>,
    /// `ln` of the new and removed parts of Φ, and the required gap, on a
    /// better initialization.
    pub progress: Option<(f64, f64, f64)>,
    /// `(c(E(C)), ℓ(V(C)))` per component `C` of a returned better
    /// initialization.
    pub init_components: Vec<(Rational, Rational)>,
}

#[derive(Debug, Clone, Default)]
pub struct SvenssonTrace {
    pub p: f64,
    /// `ℓ(V(B))` and `ℓ(V ∖ V(B))` of the pair.
    pub ell_backbone: Rational,
    pub ell_off: Rational,
    pub log_phi: Vec<f64>,
    pub calls: Vec<IterationRecord>,
}

/// Replaces the components of `H̃` met by `D` with `D` plus a knapsack
/// selection of them.
pub fn improved_initialization(
    pair: &VertebratePair,
    ell: &EllFunction,
    state: &ComponentState,
    htilde: &EdgeMultiset,
    d_vertices: &VertexSet,
    d_edges: &EdgeMultiset,
    audit: &mut Audit,
) -> Result<(EdgeMultiset, (f64, f64, f64))> {
    let stage = "improved_initialization";
    let inst = pair.instance();
    let g = inst.g();
    let ep = &ell.eps_prime;
    let ld = ell.set(d_vertices);
    let i = state.ind(d_vertices);
    if d_vertices.iter().any(|v| pair.on_backbone(v)) || i == 0 {
        return Err(Error::contract(stage, "D touches the backbone"));
    }
    if d_edges.iter().any(|(e, _)| inst.crosses_non_singleton(e)) {
        return Err(Error::contract(stage, "D crosses a family set"));
    }
    let check = is_eulerian_connected(g, d_edges)?;
    let dmask = d_vertices.mask(g.n());
    let spans = check.components.iter().any(|c| d_vertices.is_subset(c)) || d_vertices.len() == 1;
    let inside = d_edges
        .iter()
        .all(|(e, _)| dmask[g.edge(e).tail] && dmask[g.edge(e).head]);
    if !check.eulerian || !spans || !inside {
        return Err(Error::contract(
            stage,
            "D is not a connected Eulerian graph on its vertex set",
        ));
    }
    let cd = d_edges.cost(g);
    if cd > &ld * int(2) / (int(2) + ep) {
        return Err(Error::contract(
            stage,
            format!("c(E(D)) = {cd} is too large for ℓ(V(D)) = {ld}"),
        ));
    }
    if ld <= (int(1) + ep) * &state.ell[i] {
        return Err(Error::contract(
            stage,
            format!("ℓ(V(D)) = {ld} is not above (1+ε′)·ℓ(W̃_{i})"),
        ));
    }

    let touched: Vec<usize> = (1..state.parts.len())
        .filter(|&j| !state.parts[j].is_disjoint(d_vertices))
        .collect();
    let items: Vec<(Rational, Rational)> = touched
        .iter()
        .map(|&j| {
            let part = &state.parts[j];
            (
                ell.set(&part.intersection(d_vertices)),
                ell.set(&part.difference(d_vertices)),
            )
        })
        .collect();
    let limit = ep / (int(2) + ep) * &ld;
    let chosen: Vec<usize> = knapsack_greedy(&items, &limit)
        .into_iter()
        .filter(|&k| items[k].1.is_positive())
        .collect();
    let merged: BTreeSet<usize> = chosen.iter().map(|&k| touched[k]).collect();
    let dropped: BTreeSet<usize> = touched.iter().copied().collect();

    let mut out = EdgeMultiset::new();
    for (e, k) in htilde.iter() {
        let j = state.part_of(g.edge(e).tail);
        if !dropped.contains(&j) || merged.contains(&j) {
            out.add(e, k);
        }
    }
    out.extend(d_edges);
    check_initialization(pair, ell, &out, audit)?;

    let mut dstar = d_vertices.clone();
    for &j in &merged {
        dstar = dstar.union(&state.parts[j]);
    }
    let p = ell.p();
    let grown = log_pow(&ell.set(&dstar), p);
    let before = log_sum(
        std::iter::once(log_pow(&state.ell[i], p))
            .chain(touched.iter().map(|&j| log_pow(&state.ell[j], p))),
    );
    audit.check(stage, grown > before, || {
        format!("merged component does not grow the potential: {grown} ≤ {before}")
    })?;

    // Φ(H̃′) − Φ(H̃) > (ℓ(V∖V(B)) / (C n))^{1+p}: only the touched parts change.
    let leftovers = touched
        .iter()
        .filter(|j| !merged.contains(j))
        .flat_map(|&j| {
            state.parts[j]
                .difference(d_vertices)
                .iter()
                .collect::<Vec<_>>()
        });
    let new_terms = log_sum(std::iter::once(grown).chain(leftovers.map(|v| log_pow(ell.of(v), p))));
    let off = ell.set(&pair.backbone_vertices().complement(g.n()));
    let gap = log_pow(
        &(off / (ell.regularity_constant() * int(ell.n() as i64))),
        p,
    );
    let old_terms = log_sum(touched.iter().map(|&j| log_pow(&state.ell[j], p)));
    let needed = log_sum([old_terms, gap]);
    audit.check(stage, new_terms > needed, || {
        format!("potential gain too small: {new_terms} ≤ {needed}")
    })?;
    Ok((out, (new_terms, old_terms, gap)))
}

/// One run of the main loop from the initialization `H̃`.
pub fn svensson_iterate(
    pair: &VertebratePair,
    ell: &EllFunction,
    htilde: &EdgeMultiset,
    audit: &mut Audit,
) -> Result<(Outcome, IterationRecord)> {
    let stage = "svensson_iterate";
    let inst = pair.instance();
    let g = inst.g();
    let n = g.n();
    let ep = &ell.eps_prime;
    let alpha2 = int(2 * ALPHA);
    check_initialization(pair, ell, htilde, audit)?;
    let state = ComponentState::new(pair, ell, htilde);
    let backbone = pair.backbone_vertices();
    let off = ell.set(&backbone.complement(n));
    let mut rec = IterationRecord {
        x_bound: &off / &alpha2,
        f_bound: ell.set(&VertexSet::full(n)),
        ..Default::default()
    };
    let allowed = |e: usize| {
        let ed = g.edge(e);
        !pair.on_backbone(ed.tail) && !pair.on_backbone(ed.head) && !inst.crosses_non_singleton(e)
    };
    let off_mask: Vec<bool> = (0..n).map(|v| !pair.on_backbone(v)).collect();
    let edge_pairs = |f: &EdgeMultiset| {
        f.iter()
            .map(|(e, _)| (g.edge(e).tail, g.edge(e).head))
            .collect::<Vec<_>>()
    };
    let mut h = htilde.clone();
    let mut x_marks: BTreeSet<usize> = BTreeSet::new();
    let mut f_marks: BTreeSet<usize> = BTreeSet::new();
    let cap = n * g.m().max(1) + n;

    loop {
        let mut base = edge_pairs(pair.backbone());
        base.extend(edge_pairs(&h));
        let base_comps = components(n, base.iter().copied());
        if base_comps.len() == 1 {
            break;
        }
        rec.loop_iterations += 1;
        if rec.loop_iterations > cap {
            return Err(Error::IterationCap {
                stage,
                detail: format!("{cap} loop iterations"),
            });
        }

        // Subtour Cover, keeping only components that connect something.
        let sc = SubtourCoverInstance::new(pair, h.clone())?;
        let fprime = subtour_cover(&sc, audit)?;
        rec.subtour_cover_calls += 1;
        let fcheck = is_eulerian_connected(g, &fprime)?;
        let mut f = EdgeMultiset::new();
        let mut fcomps: Vec<(VertexSet, EdgeMultiset)> = Vec::new();
        let mut backbone_part = Rational::zero();
        for comp in fcheck.components {
            let part = fprime.restricted_to(g, &comp.mask(n));
            if part.is_empty() {
                continue;
            }
            let verts = part.vertices(g);
            let cost = part.cost(g);
            if verts.is_disjoint(&backbone) {
                let budget = ell.set(&verts) / (int(2) * (int(1) + ep));
                audit.check(stage, cost <= budget, || {
                    format!("cover component {verts:?} costs {cost} > {budget}")
                })?;
            } else {
                backbone_part += &cost;
            }
            if base_comps.iter().any(|c| verts.is_subset(c)) {
                continue;
            }
            f.extend(&part);
            fcomps.push((verts, part));
        }
        audit.check(stage, backbone_part <= state.ell[0], || {
            format!(
                "backbone components of the cover cost {backbone_part} > ℓ(V(B)) = {}",
                state.ell[0]
            )
        })?;

        // (2a)
        let k = state.parts.len();
        let mut by_index: Vec<(VertexSet, EdgeMultiset)> =
            vec![(VertexSet::default(), EdgeMultiset::new()); k];
        for (verts, part) in &fcomps {
            let j = state.ind(verts);
            by_index[j].0 = by_index[j].0.union(verts);
            by_index[j].1.extend(part);
        }
        for (i, (verts, part)) in by_index.iter().enumerate() {
            if part.cost(g) <= state.ell[i] {
                continue;
            }
            audit.check(stage, i > 0, || {
                "backbone part of the cover exceeds ℓ(V(B))".into()
            })?;
            let dv = state.parts[i].union(verts);
            let mut de = htilde.restricted_to(g, &state.parts[i].mask(n));
            de.extend(part);
            let (out, progress) =
                improved_initialization(pair, ell, &state, htilde, &dv, &de, audit)?;
            rec.progress = Some(progress);
            return Ok((Outcome::BetterInit(out), rec));
        }
        // (2b)
        for (verts, part) in &fcomps {
            let i = state.ind(verts);
            if i > 0 && ell.set(verts) > (int(1) + ep) * &state.ell[i] {
                let (out, progress) =
                    improved_initialization(pair, ell, &state, htilde, verts, part, audit)?;
                rec.progress = Some(progress);
                return Ok((Outcome::BetterInit(out), rec));
            }
        }

        // Extend H.
        let mut x = EdgeMultiset::new();
        let mut cycles: Vec<(usize, EdgeMultiset)> = Vec::new();
        let z = loop {
            let mut all = base.clone();
            all.extend(edge_pairs(&f));
            all.extend(edge_pairs(&x));
            let comps = components(n, all);
            let mut best = 0;
            for (c, comp) in comps.iter().enumerate() {
                if state.ind(comp) > state.ind(&comps[best]) {
                    best = c;
                }
            }
            let z = comps[best].clone();
            if cycles.len() > n {
                return Err(Error::IterationCap {
                    stage,
                    detail: "cycle search".into(),
                });
            }
            let j = state.ind(&z);
            let budget = &state.ell[j] / &alpha2;
            let zmask = z.mask(n);
            let mut found = None;
            for e in 0..g.m() {
                let ed = g.edge(e);
                if !(zmask[ed.tail] && !zmask[ed.head] && allowed(e)) || g.cost(e) > &budget {
                    continue;
                }
                if let Some((c, path)) = shortest_path(g, ed.head, ed.tail, &off_mask, allowed) {
                    if g.cost(e) + &c <= budget {
                        let mut cyc = EdgeMultiset::from_edges(path);
                        cyc.add(e, 1);
                        found = Some(cyc);
                        break;
                    }
                }
            }
            let Some(cyc) = found else { break z };
            let cc = cyc.cost(g);
            let lim = ell.set(&cyc.vertices(g)) / (&alpha2 * (int(1) + ep));
            audit.check(stage, cc <= lim, || {
                format!("cycle costs {cc} > ℓ(V(C))/(2α(1+ε′)) = {lim}")
            })?;
            x.extend(&cyc);
            cycles.push((j, cyc));
        };
        let zmask = z.mask(n);
        for (j, cyc) in &cycles {
            if cyc.iter().all(|(e, _)| zmask[g.edge(e).tail]) {
                audit.check(stage, x_marks.insert(*j), || {
                    format!("index {j} marked twice")
                })?;
                rec.x_cost += cyc.cost(g);
                h.extend(cyc);
            }
        }
        for (i, (_, part)) in by_index.iter().enumerate() {
            let added = part.restricted_to(g, &zmask);
            if added.is_empty() {
                continue;
            }
            audit.check(stage, f_marks.insert(i), || {
                format!("F_{i} added to H twice")
            })?;
            rec.f_cost += added.cost(g);
            h.extend(&added);
        }
        audit.check(stage, rec.x_cost <= rec.x_bound, || {
            format!("X-edges cost {} > {}", rec.x_cost, rec.x_bound)
        })?;
        audit.check(stage, rec.f_cost <= rec.f_bound, || {
            format!("F-edges cost {} > {}", rec.f_cost, rec.f_bound)
        })?;
    }

    let cost = h.cost(g);
    let bound = &state.ell[0] + (int(2) + int(1) / &alpha2) * &off;
    audit.check(stage, cost <= bound, || format!("c(H) = {cost} > {bound}"))?;
    rec.solution = Some((cost, bound));
    Ok((Outcome::Solution(h), rec))
}

fn component_budgets(
    g: &Digraph,
    ell: &EllFunction,
    h: &EdgeMultiset,
) -> Vec<(Rational, Rational)> {
    let support = h.vertices(g);
    components(
        g.n(),
        h.iter().map(|(e, _)| (g.edge(e).tail, g.edge(e).head)),
    )
    .into_iter()
    .filter(|c| c.iter().any(|v| support.contains(v)))
    .map(|c| (h.restricted_to(g, &c.mask(g.n())).cost(g), ell.set(&c)))
    .collect()
}

/// Runs the main loop from `H̃ = ∅` until it returns a solution.
pub fn vertebrate_solve(
    pair: &VertebratePair,
    epsilon: &Rational,
    restart_cap: usize,
    audit: &mut Audit,
) -> Result<(EdgeMultiset, SvenssonTrace)> {
    let stage = "vertebrate_solve";
    let ell = EllFunction::new(pair, epsilon);
    let g = pair.instance().g();
    let n = g.n();
    let off = ell.set(&pair.backbone_vertices().complement(n));
    let floor = &off / (ell.regularity_constant() * int(n as i64));
    for v in 0..n {
        audit.check(stage, *ell.of(v) >= floor, || {
            format!("ℓ({v}) = {} below {floor}", ell.of(v))
        })?;
    }
    let mut trace = SvenssonTrace {
        p: ell.p(),
        ell_backbone: ell.set(&pair.backbone_vertices()),
        ell_off: off.clone(),
        ..Default::default()
    };
    let mut htilde = EdgeMultiset::new();
    for _ in 0..=restart_cap {
        let state = ComponentState::new(pair, &ell, &htilde);
        trace.log_phi.push(state.log_phi(trace.p));
        let (outcome, rec) = svensson_iterate(pair, &ell, &htilde, audit)?;
        trace.calls.push(rec);
        match outcome {
            Outcome::BetterInit(next) => {
                if let Some(rec) = trace.calls.last_mut() {
                    rec.init_components = component_budgets(g, &ell, &next);
                }
                htilde = next;
            }
            Outcome::Solution(f) => {
                let mut tour = f.clone();
                tour.extend(pair.backbone());
                let check = is_eulerian_connected(g, &tour)?;
                audit.check(stage, check.is_tour() || (n == 1 && check.eulerian), || {
                    "backbone plus solution is not a tour".into()
                })?;
                let cost = f.cost(g);
                let bound = pair_bound(
                    pair,
                    &int(KAPPA),
                    &(frac(4 * ALPHA + BETA + 1, 1) + epsilon),
                );
                audit.check(stage, cost <= bound, || {
                    format!("solution costs {cost} > {bound}")
                })?;
                return Ok((f, trace));
            }
        }
    }
    Err(Error::IterationCap {
        stage,
        detail: format!("{restart_cap} restarts; ln Φ trace {:?}", trace.log_phi),
    })
}

/// The `(2, 14 + ε)` vertebrate-pair solver.
#[derive(Debug, Clone)]
pub struct SvenssonSolver {
    pub epsilon: Rational,
    pub restart_cap: usize,
    pub traces: Vec<SvenssonTrace>,
}

impl SvenssonSolver {
    pub fn new(epsilon: Rational) -> Self {
        Self {
            epsilon,
            restart_cap: 1_000_000,
            traces: Vec::new(),
        }
    }
}

impl VertebrateSolver for SvenssonSolver {
    fn kappa(&self) -> Rational {
        int(KAPPA)
    }

    fn eta(&self) -> Rational {
        int(4 * ALPHA + BETA + 1) + &self.epsilon
    }

    fn solve(&mut self, pair: &VertebratePair, audit: &mut Audit) -> Result<EdgeMultiset> {
        let (f, trace) = vertebrate_solve(pair, &self.epsilon, self.restart_cap, audit)?;
        self.traces.push(trace);
        Ok(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn items(v: &[(i64, i64)]) -> Vec<(Rational, Rational)> {
        v.iter().map(|&(w, p)| (int(w), int(p))).collect()
    }

    #[test]
    fn knapsack_examples() {
        assert_eq!(knapsack_greedy(&items(&[(1, 1), (1, 1)]), &int(1)).len(), 1);
        assert_eq!(
            knapsack_greedy(&items(&[(2, 10), (1, 1)]), &int(1)),
            vec![1]
        );
        let eq = items(&[(1, 3); 6]);
        assert_eq!(knapsack_greedy(&eq, &int(3)).len(), 3);
    }

    #[test]
    fn constants_give_twenty_two_plus_epsilon() {
        assert_eq!((ALPHA, KAPPA, BETA), (3, 2, 1));
        let eps = frac(1, 3);
        let solver = SvenssonSolver::new(eps.clone());
        assert_eq!(solver.kappa(), int(2));
        assert_eq!(solver.eta(), int(14) + &eps);
        assert_eq!(
            solver.kappa() * int(3) + solver.eta() + int(2),
            int(22) + &eps
        );
    }

    // Parts 2, 3, 4, 6 meet D; only 2 and 3 have enough of themselves
    // outside D per unit of overlap to be merged within the budget.
    #[test]
    fn knapsack_merges_the_profitable_parts() {
        let parts = [2, 3, 4, 6];
        let it = vec![
            (frac(1, 2), int(4)),
            (frac(1, 2), int(3)),
            (int(2), int(1)),
            (int(1), int(0)),
        ];
        let limit = frac(3, 2);
        let chosen: Vec<usize> = knapsack_greedy(&it, &limit)
            .into_iter()
            .filter(|&k| it[k].1.is_positive())
            .map(|k| parts[k])
            .collect();
        assert_eq!(chosen, vec![2, 3]);
    }

    #[test]
    fn eps_prime_for_unit_epsilon() {
        assert_eq!(eps_prime(&int(1)), frac(6, 91));
    }

    #[test]
    fn log_sum_matches_direct_sum() {
        let s = log_sum([2f64.ln(), 3f64.ln()]);
        assert!((s - 5f64.ln()).abs() < 1e-12);
        assert_eq!(log_sum([f64::NEG_INFINITY]), f64::NEG_INFINITY);
    }
}
