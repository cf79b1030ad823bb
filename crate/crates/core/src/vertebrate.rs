//! Recursive reduction from strongly laminar instances to vertebrate pairs,
//! and the top-level solver built on it.

use num_traits::{One, Signed, Zero};

use crate::audit::Audit;
use crate::error::{Error, Result};
use crate::graph::{
    contract, euler_walk, is_eulerian_connected, Digraph, EdgeId, EdgeMultiset, LaminarFamily,
    VertexId, VertexSet,
};
use crate::instance::{value_and_dw, NicePathTable, StronglyLaminarInstance, ValueAndDw};
use crate::lp::build_strongly_laminar_instance;
use crate::rational::{frac, int, Rational};

/// A strongly laminar instance together with a backbone: a connected
/// Eulerian multiset touching every family set with at least two vertices.
#[derive(Debug, Clone)]
pub struct VertebratePair {
    instance: StronglyLaminarInstance,
    backbone: EdgeMultiset,
    on_backbone: Vec<bool>,
}

impl VertebratePair {
    /// `anchor` names V(B) when the backbone has no edges.
    pub fn new(
        instance: StronglyLaminarInstance,
        backbone: EdgeMultiset,
        anchor: VertexId,
    ) -> Result<Self> {
        let stage = "vertebrate_pair";
        let g = instance.g();
        backbone.validate(g)?;
        let mut on_backbone = vec![false; g.n()];
        if backbone.is_empty() {
            if anchor >= g.n() {
                return Err(Error::Input(format!("anchor {anchor} out of range")));
            }
            on_backbone[anchor] = true;
        } else {
            for v in backbone.vertices(g).iter() {
                on_backbone[v] = true;
            }
            let check = is_eulerian_connected(g, &backbone)?;
            let touched = check
                .components
                .iter()
                .filter(|c| c.iter().any(|v| on_backbone[v]))
                .count();
            if !check.eulerian || touched != 1 {
                return Err(Error::assertion(
                    stage,
                    "backbone is not connected and Eulerian",
                ));
            }
        }
        for i in instance.non_singletons() {
            if !instance.family().set(i).iter().any(|v| on_backbone[v]) {
                return Err(Error::assertion(
                    stage,
                    format!(
                        "family set {:?} is not touched by the backbone",
                        instance.family().set(i)
                    ),
                ));
            }
        }
        Ok(Self {
            instance,
            backbone,
            on_backbone,
        })
    }

    pub fn instance(&self) -> &StronglyLaminarInstance {
        &self.instance
    }

    pub fn backbone(&self) -> &EdgeMultiset {
        &self.backbone
    }

    pub fn on_backbone(&self, v: VertexId) -> bool {
        self.on_backbone[v]
    }

    pub fn backbone_vertices(&self) -> VertexSet {
        VertexSet::from_mask(&self.on_backbone)
    }

    /// `Σ_{v ∉ V(B)} 2 y_v` over singleton family members.
    pub fn off_backbone_weight(&self) -> Rational {
        (0..self.instance.n())
            .filter(|&v| !self.on_backbone[v])
            .map(|v| self.instance.y_vertex(v) * int(2))
            .sum()
    }
}

/// A `(κ, η)`-algorithm for vertebrate pairs: returns `F` such that
/// `E(B) ∪ F` is a tour and `c(F) ≤ κ·LP(I) + η·Σ_{v∉V(B)} 2y_v`.
pub trait VertebrateSolver {
    fn kappa(&self) -> Rational;
    fn eta(&self) -> Rational;
    fn solve(&mut self, pair: &VertebratePair, audit: &mut Audit) -> Result<EdgeMultiset>;
}

/// `κ·LP(I) + η·Σ_{v∉V(B)} 2y_v`: the cost budget for a vertebrate-pair solution.
pub fn pair_bound(pair: &VertebratePair, kappa: &Rational, eta: &Rational) -> Rational {
    kappa * pair.instance().lp_value() + eta * pair.off_backbone_weight()
}

/// Backbone `P_{u*,v*} + P_{v*,u*}` for `W` and the maximal family sets
/// strictly inside `W` that it misses.
pub fn construct_backbone(
    inst: &StronglyLaminarInstance,
    table: &NicePathTable,
    w: &VertexSet,
    vd: &ValueAndDw,
    audit: &mut Audit,
) -> Result<(EdgeMultiset, Vec<VertexSet>)> {
    let stage = "construct_backbone";
    let mut backbone = EdgeMultiset::from_edges(table.path(vd.u, vd.v).iter().copied());
    backbone.extend(&EdgeMultiset::from_edges(
        table.path(vd.v, vd.u).iter().copied(),
    ));
    let cost = backbone.cost(inst.g());
    audit.check(stage, cost <= &vd.dw * int(2), || {
        format!("c(E(B)) = {cost} exceeds 2·D_W = {}", &vd.dw * int(2))
    })?;

    let mut touched = backbone.vertices(inst.g());
    if touched.is_empty() {
        touched = VertexSet::singleton(vd.u);
    }
    let mut untouched: Vec<VertexSet> = Vec::new();
    for l in inst.family().sets() {
        if l.len() < w.len()
            && l.is_subset(w)
            && l.is_disjoint(&touched)
            && !untouched.iter().any(|m| l.is_subset(m))
        {
            untouched.push(l.clone());
        }
    }
    let lost: Rational = untouched
        .iter()
        .map(|l| {
            let y = inst.family().weight(inst.family().position(l).unwrap());
            y * int(2) + inst.value(l)
        })
        .sum();
    audit.check(stage, lost <= &vd.value - &vd.dw, || {
        format!(
            "untouched sets carry {lost} > value(W) − D_W = {}",
            &vd.value - &vd.dw
        )
    })?;
    Ok((backbone, untouched))
}

struct Reducer<'a, S: VertebrateSolver> {
    inst: &'a StronglyLaminarInstance,
    table: NicePathTable,
    solver: &'a mut S,
    audit: &'a mut Audit,
    calls: usize,
}

impl<S: VertebrateSolver> Reducer<'_, S> {
    fn reduce(&mut self, w: &VertexSet) -> Result<EdgeMultiset> {
        let stage = "reduce_and_solve";
        self.calls += 1;
        let cap = 2 * self.inst.n();
        self.audit.check(stage, self.calls <= cap.max(1), || {
            format!("more than {cap} recursive calls")
        })?;
        if w.len() <= 1 {
            return Ok(EdgeMultiset::new());
        }
        let inst = self.inst;
        let g = inst.g();
        let n = g.n();
        let vd = value_and_dw(inst, &self.table, w)?;
        let (backbone, untouched) = construct_backbone(inst, &self.table, w, &vd, self.audit)?;

        // Contract V∖W and every untouched set.
        let whole = w.len() == n;
        let mut classes = Vec::new();
        if !whole {
            classes.push(w.complement(n));
        }
        classes.extend(untouched.iter().cloned());
        let (g2, map) = contract(g, &classes)?;
        let outside = (!whole).then(|| map.class_vertex[0]);
        let offset = usize::from(!whole);

        let mut members: Vec<(VertexSet, Rational)> = Vec::new();
        if !whole && vd.dw.is_positive() {
            members.push((map.image(w), &vd.dw / int(2)));
        }
        for (k, l) in untouched.iter().enumerate() {
            let y = inst.family().weight(inst.family().position(l).unwrap());
            let dl = value_and_dw(inst, &self.table, l)?.dw;
            members.push((
                VertexSet::singleton(map.class_vertex[offset + k]),
                y + dl / int(2),
            ));
        }
        let touched = backbone.vertices(g);
        for (l, y) in inst.family().iter() {
            if l.len() < w.len() && l.is_subset(w) && !l.is_disjoint(&touched) {
                members.push((map.image(l), y.clone()));
            }
        }
        let family = LaminarFamily::new(g2.n(), members)?;
        let x2: Vec<Rational> = map
            .edge_origin
            .iter()
            .map(|&e| inst.x()[e].clone())
            .collect();
        let inst2 = StronglyLaminarInstance::new(&g2, family, x2)?;

        let mut image_of = vec![None; g.m()];
        for (e2, &e) in map.edge_origin.iter().enumerate() {
            image_of[e] = Some(e2);
        }
        let mut backbone2 = EdgeMultiset::new();
        for (e, k) in backbone.iter() {
            let e2 = image_of[e].ok_or_else(|| {
                Error::assertion(stage, format!("backbone edge {e} was contracted"))
            })?;
            backbone2.add(e2, k);
        }
        let pair = VertebratePair::new(inst2, backbone2, map.vertex[vd.u])?;

        let f2 = self.solver.solve(&pair, self.audit)?;
        let (kappa, eta) = (self.solver.kappa(), self.solver.eta());
        let c2 = f2.cost(pair.instance().g());
        let bound = pair_bound(&pair, &kappa, &eta);
        self.audit.check(stage, c2 <= bound, || {
            format!("vertebrate solver returned cost {c2} above bound {bound}")
        })?;

        // Lift F′ back into G[W].
        let special: Vec<Option<bool>> = (0..g2.n())
            .map(|v| {
                if Some(v) == outside {
                    Some(true)
                } else if map.class_vertex[offset..].contains(&v) {
                    Some(false)
                } else {
                    None
                }
            })
            .collect();
        let mut lifted = EdgeMultiset::new();
        for (e2, k) in f2.iter() {
            lifted.add(map.edge_origin[e2], k);
        }
        let check = is_eulerian_connected(&g2, &f2)?;
        for comp in check.components {
            let mask = comp.mask(g2.n());
            let part = f2.restricted_to(&g2, &mask);
            if part.is_empty() {
                continue;
            }
            let walk = euler_walk(&g2, &part, comp.smallest().unwrap())?;
            for (i, &ein) in walk.iter().enumerate() {
                let eout = walk[(i + 1) % walk.len()];
                let Some(is_outside) = special[g2.edge(ein).head] else {
                    continue;
                };
                let (oin, oout) = (map.edge_origin[ein], map.edge_origin[eout]);
                let path = if is_outside {
                    lifted.remove_one(oin);
                    lifted.remove_one(oout);
                    self.table.path(g.edge(oin).tail, g.edge(oout).head)
                } else {
                    self.table.path(g.edge(oin).head, g.edge(oout).tail)
                };
                for &e in path {
                    lifted.add(e, 1);
                }
            }
        }
        let lifted_cost = lifted.cost(g);
        self.audit.check(stage, lifted_cost <= c2, || {
            format!("lifting raised the cost from {c2} to {lifted_cost}")
        })?;
        let wmask = w.mask(n);
        self.audit.check(
            stage,
            lifted
                .iter()
                .all(|(e, _)| wmask[g.edge(e).tail] && wmask[g.edge(e).head]),
            || "lifted solution leaves W".into(),
        )?;

        let mut f = lifted;
        for l in &untouched {
            let fl = self.reduce(l)?;
            f.extend(&fl);
        }
        f.extend(&backbone);

        let check = is_eulerian_connected(g, &f)?;
        let spans = check.components.iter().any(|c| w.is_subset(c));
        self.audit.check(stage, check.eulerian && spans, || {
            format!("result is not a tour of G[{w:?}]")
        })?;
        let cost = f.cost(g);
        let limit = (&kappa * int(2) + int(2)) * &vd.value + (&kappa + &eta) * (&vd.value - &vd.dw);
        self.audit.check(stage, cost <= limit, || {
            format!("tour of {w:?} costs {cost} > {limit}")
        })?;
        Ok(f)
    }
}

/// Recursive reduction on `W` (a family set or the full vertex set).
pub fn reduce_and_solve<S: VertebrateSolver>(
    inst: &StronglyLaminarInstance,
    w: &VertexSet,
    solver: &mut S,
    audit: &mut Audit,
) -> Result<EdgeMultiset> {
    if w.len() != inst.n() && inst.family().position(w).is_none() {
        return Err(Error::contract(
            "reduce_and_solve",
            format!("{w:?} is neither V nor a family set"),
        ));
    }
    let table = NicePathTable::build(inst)?;
    let mut r = Reducer {
        inst,
        table,
        solver,
        audit,
        calls: 0,
    };
    r.reduce(w)
}

#[derive(Debug, Clone)]
pub struct TourCertificate {
    /// Multiset over the input graph's edges.
    pub tour: EdgeMultiset,
    pub cost: Rational,
    pub lp_value: Rational,
    /// `cost / lp_value`, or 1 when both vanish.
    pub ratio: Rational,
    /// Closed walk realizing the tour, starting at vertex 0.
    pub walk: Vec<EdgeId>,
}

/// Solves ATSP on a strongly connected digraph with the given vertebrate-pair
/// solver and checks the guarantee `3κ + η + 2`.
pub fn solve_with<S: VertebrateSolver>(
    g: &Digraph,
    solver: &mut S,
    audit: &mut Audit,
) -> Result<TourCertificate> {
    let stage = "solve_atsp";
    let build = build_strongly_laminar_instance(g, audit)?;
    if g.n() == 1 {
        return Ok(TourCertificate {
            tour: EdgeMultiset::new(),
            cost: Rational::zero(),
            lp_value: Rational::zero(),
            ratio: Rational::one(),
            walk: Vec::new(),
        });
    }
    let inst = &build.instance;
    let f = reduce_and_solve(inst, &VertexSet::full(g.n()), solver, audit)?;
    let induced = f.cost(inst.g());
    let mut tour = EdgeMultiset::new();
    for (e, k) in f.iter() {
        tour.add(build.edge_origin[e], k);
    }
    let cost = tour.cost(g);
    audit.check(stage, cost == induced, || {
        format!("input cost {cost} differs from induced cost {induced}")
    })?;
    let check = is_eulerian_connected(g, &tour)?;
    audit.check(stage, check.is_tour(), || "result is not a tour".into())?;
    let factor = solver.kappa() * int(3) + solver.eta() + int(2);
    let lp = build.lp_value.clone();
    audit.check(stage, cost <= &factor * &lp, || {
        format!("tour cost {cost} exceeds {factor} · {lp}")
    })?;
    let ratio = if lp.is_zero() {
        Rational::one()
    } else {
        &cost / &lp
    };
    let walk = euler_walk(g, &tour, 0)?;
    Ok(TourCertificate {
        tour,
        cost,
        lp_value: lp,
        ratio,
        walk,
    })
}

/// `κ = 2`, `η = 14 + ε`: the guarantee is `22 + ε`.
pub fn solve_atsp(g: &Digraph, epsilon: &Rational, audit: &mut Audit) -> Result<TourCertificate> {
    if !epsilon.is_positive() {
        return Err(Error::Input(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    let mut solver = crate::svensson::SvenssonSolver::new(epsilon.clone());
    solve_with(g, &mut solver, audit)
}

/// The default ε.
pub fn default_epsilon() -> Rational {
    frac(1, 1)
}
