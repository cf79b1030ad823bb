//! Exact network-flow primitives over rationals: maximum flow with minimum
//! cut, and minimum-cost circulation with lower and upper bounds.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use num_traits::{Signed, Zero};

use crate::rational::Rational;

#[derive(Debug, Clone)]
struct ResArc {
    to: usize,
    cap: Rational,
    cost: Rational,
}

/// Residual network with paired arcs (`i ^ 1` is the reverse of `i`).
#[derive(Debug, Clone)]
struct Residual {
    arcs: Vec<ResArc>,
    adj: Vec<Vec<usize>>,
}

impl Residual {
    fn new(n: usize) -> Self {
        Self {
            arcs: Vec::new(),
            adj: vec![Vec::new(); n],
        }
    }

    fn add(&mut self, from: usize, to: usize, cap: Rational, cost: Rational) -> usize {
        let id = self.arcs.len();
        self.arcs.push(ResArc {
            to,
            cap,
            cost: cost.clone(),
        });
        self.arcs.push(ResArc {
            to: from,
            cap: Rational::zero(),
            cost: -cost,
        });
        self.adj[from].push(id);
        self.adj[to].push(id + 1);
        id
    }

    fn push(&mut self, arc: usize, amount: &Rational) {
        self.arcs[arc].cap -= amount;
        self.arcs[arc ^ 1].cap += amount;
    }
}

#[derive(Debug, Clone)]
pub struct MaxFlow {
    pub value: Rational,
    /// Vertices reachable from the source in the final residual network.
    pub source_side: Vec<bool>,
    /// Flow per input arc.
    pub flow: Vec<Rational>,
}

/// Edmonds–Karp maximum `s`-`t` flow with exact capacities.
pub fn max_flow(n: usize, arcs: &[(usize, usize, Rational)], s: usize, t: usize) -> MaxFlow {
    let mut r = Residual::new(n);
    let ids: Vec<usize> = arcs
        .iter()
        .map(|(u, v, c)| r.add(*u, *v, c.clone(), Rational::zero()))
        .collect();
    let mut value = Rational::zero();
    loop {
        let mut pred: Vec<Option<usize>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            if v == t {
                break;
            }
            for &a in &r.adj[v] {
                let w = r.arcs[a].to;
                if !seen[w] && r.arcs[a].cap.is_positive() {
                    seen[w] = true;
                    pred[w] = Some(a);
                    queue.push_back(w);
                }
            }
        }
        if !seen[t] || s == t {
            let flow = ids.iter().map(|&a| r.arcs[a ^ 1].cap.clone()).collect();
            return MaxFlow {
                value,
                source_side: seen,
                flow,
            };
        }
        let mut path = Vec::new();
        let mut v = t;
        while v != s {
            let a = pred[v].unwrap();
            path.push(a);
            v = r.arcs[a ^ 1].to;
        }
        let bottleneck = path.iter().map(|&a| r.arcs[a].cap.clone()).min().unwrap();
        for &a in &path {
            r.push(a, &bottleneck);
        }
        value += bottleneck;
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CirculationArc {
    pub from: usize,
    pub to: usize,
    pub lower: Rational,
    pub upper: Rational,
    pub cost: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CirculationError {
    #[error("arc {0} has lower bound above upper bound or a negative bound")]
    BadBounds(usize),
    #[error("arc {0} has negative cost")]
    NegativeCost(usize),
    #[error("no circulation satisfies the bounds")]
    Infeasible,
}

/// Minimum-cost circulation for nonnegative costs, by successive shortest
/// paths after moving lower bounds into node imbalances. With integral
/// bounds the result is integral.
pub fn min_cost_circulation(
    n: usize,
    arcs: &[CirculationArc],
) -> Result<Vec<Rational>, CirculationError> {
    let mut excess = vec![Rational::zero(); n];
    for (i, a) in arcs.iter().enumerate() {
        if a.lower.is_negative() || a.lower > a.upper {
            return Err(CirculationError::BadBounds(i));
        }
        if a.cost.is_negative() {
            return Err(CirculationError::NegativeCost(i));
        }
        excess[a.to] += &a.lower;
        excess[a.from] -= &a.lower;
    }
    let (src, sink) = (n, n + 1);
    let mut r = Residual::new(n + 2);
    let ids: Vec<usize> = arcs
        .iter()
        .map(|a| r.add(a.from, a.to, &a.upper - &a.lower, a.cost.clone()))
        .collect();
    let mut required = Rational::zero();
    for (v, ex) in excess.iter().enumerate() {
        if ex.is_positive() {
            r.add(src, v, ex.clone(), Rational::zero());
            required += ex;
        } else if ex.is_negative() {
            r.add(v, sink, -ex.clone(), Rational::zero());
        }
    }
    let total = n + 2;
    let mut potential = vec![Rational::zero(); total];
    let mut sent = Rational::zero();
    while sent < required {
        let mut dist: Vec<Option<Rational>> = vec![None; total];
        let mut pred: Vec<Option<usize>> = vec![None; total];
        let mut done = vec![false; total];
        dist[src] = Some(Rational::zero());
        let mut heap = BinaryHeap::new();
        heap.push(Reverse((Rational::zero(), src)));
        while let Some(Reverse((d, v))) = heap.pop() {
            if done[v] {
                continue;
            }
            done[v] = true;
            for &a in &r.adj[v] {
                let arc = &r.arcs[a];
                if !arc.cap.is_positive() || done[arc.to] {
                    continue;
                }
                let nd = &d + &arc.cost + &potential[v] - &potential[arc.to];
                debug_assert!(!nd.lt(&d), "negative reduced cost");
                if dist[arc.to].as_ref().map_or(true, |old| nd < *old) {
                    dist[arc.to] = Some(nd.clone());
                    pred[arc.to] = Some(a);
                    heap.push(Reverse((nd, arc.to)));
                }
            }
        }
        let Some(dt) = dist[sink].clone() else {
            return Err(CirculationError::Infeasible);
        };
        for v in 0..total {
            let d = match &dist[v] {
                Some(d) if *d < dt => d.clone(),
                _ => dt.clone(),
            };
            potential[v] += d;
        }
        let mut path = Vec::new();
        let mut v = sink;
        while v != src {
            let a = pred[v].unwrap();
            path.push(a);
            v = r.arcs[a ^ 1].to;
        }
        let mut amount = &required - &sent;
        for &a in &path {
            if r.arcs[a].cap < amount {
                amount = r.arcs[a].cap.clone();
            }
        }
        for &a in &path {
            r.push(a, &amount);
        }
        sent += amount;
    }
    Ok(arcs
        .iter()
        .zip(&ids)
        .map(|(a, &id)| &a.lower + &r.arcs[id ^ 1].cap)
        .collect())
}
