use num_traits::{Signed, Zero};

use super::atsp::{solve_atsp_lp, DualLp, PrimalLp};
use super::dual::{make_strongly_laminar, uncross_dual};
use crate::audit::Audit;
use crate::error::{Error, Result};
use crate::graph::{Digraph, EdgeId, LaminarFamily};
use crate::instance::StronglyLaminarInstance;
use crate::rational::Rational;

/// A strongly laminar instance derived from an input graph.
#[derive(Debug, Clone)]
pub struct LaminarBuild {
    pub instance: StronglyLaminarInstance,
    /// Optimum of the subtour LP on the input graph.
    pub lp_value: Rational,
    /// Input edge id of every instance edge.
    pub edge_origin: Vec<EdgeId>,
    /// Final dual on the support graph.
    pub dual: DualLp,
}

/// Solves the LP, restricts to the support of `x`, and reshapes the dual
/// until its support is strongly laminar.
pub fn build_strongly_laminar_instance(g: &Digraph, audit: &mut Audit) -> Result<LaminarBuild> {
    let stage = "build_strongly_laminar_instance";
    if g.n() == 0 {
        return Err(Error::Input("graph has no vertices".into()));
    }
    if g.n() == 1 {
        let (support, edge_origin) = g.edge_subgraph(|_| false);
        let instance =
            StronglyLaminarInstance::new(&support, LaminarFamily::new(1, Vec::new())?, Vec::new())?;
        let dual = DualLp {
            a: vec![Rational::zero()],
            y: Default::default(),
            objective: Rational::zero(),
        };
        return Ok(LaminarBuild {
            instance,
            lp_value: Rational::zero(),
            edge_origin,
            dual,
        });
    }
    let (primal, dual) = solve_atsp_lp(g)?;
    audit.check(stage, primal.objective == dual.objective, || {
        format!(
            "primal {} and dual {} objectives differ",
            primal.objective, dual.objective
        )
    })?;
    let (support, edge_origin) = g.edge_subgraph(|e| primal.x[e].is_positive());
    let x: Vec<Rational> = edge_origin.iter().map(|&e| primal.x[e].clone()).collect();
    let px = PrimalLp {
        x: x.clone(),
        objective: primal.objective.clone(),
    };
    let laminar = uncross_dual(&support, &dual, audit)?;
    let strong = make_strongly_laminar(&support, &px, &laminar, audit)?;

    // Complementary slackness on every support edge and every support set.
    for e in 0..support.m() {
        let ed = support.edge(e);
        let crossing: Rational = strong
            .y
            .iter()
            .filter(|(u, _)| u.contains(ed.tail) != u.contains(ed.head))
            .map(|(_, y)| y.clone())
            .sum();
        let reduced = &ed.cost + &strong.a[ed.tail] - &strong.a[ed.head];
        audit.check(stage, crossing == reduced, || {
            format!("edge {e}: induced cost {crossing} but c(e) + a_v - a_w = {reduced}")
        })?;
    }
    let family = LaminarFamily::new(
        support.n(),
        strong
            .y
            .iter()
            .map(|(u, y)| (u.clone(), y.clone()))
            .collect(),
    )?;
    let instance = StronglyLaminarInstance::new(&support, family, x)?;
    audit.check(stage, instance.lp_value() == primal.objective, || {
        format!(
            "LP(I) = {} but the LP optimum is {}",
            instance.lp_value(),
            primal.objective
        )
    })?;
    Ok(LaminarBuild {
        instance,
        lp_value: primal.objective,
        edge_origin,
        dual: strong,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::rational::int;

    #[test]
    fn small_instances() {
        let b = build_strongly_laminar_instance(&c3(), &mut Audit::default()).unwrap();
        assert_eq!(b.lp_value, int(3));
        assert!(b.instance.family().sets().iter().all(|s| s.len() == 1));

        let b = build_strongly_laminar_instance(&k2(), &mut Audit::default()).unwrap();
        assert_eq!(b.lp_value, int(2));
        assert_eq!(b.instance.lp_value(), int(2));
    }

    #[test]
    fn two_tri_has_a_triangle_set() {
        let mut audit = Audit::default();
        let b = build_strongly_laminar_instance(&two_tri(), &mut audit).unwrap();
        assert_eq!(b.lp_value, int(16));
        assert!(b.instance.family().sets().iter().any(|s| s.len() == 3));
        assert!(audit.total() > 0);
    }

    #[test]
    fn single_vertex() {
        let b = build_strongly_laminar_instance(&Digraph::new(1), &mut Audit::default()).unwrap();
        assert_eq!(b.lp_value, int(0));
        assert!(b.instance.family().is_empty());
    }
}
