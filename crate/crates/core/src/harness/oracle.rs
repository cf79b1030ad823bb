//! Exact optimum by dynamic programming over subsets of the metric closure.

use std::ops::Add;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::graph::Digraph;
use crate::rational::{self, Rational};

pub const HELD_KARP_MAX_N: usize = 18;

/// All-pairs shortest path costs, `None` when unreachable.
pub fn metric_closure(g: &Digraph) -> Vec<Vec<Option<Rational>>> {
    let n = g.n();
    let mut d: Vec<Vec<Option<Rational>>> = vec![vec![None; n]; n];
    for (v, row) in d.iter_mut().enumerate() {
        row[v] = Some(rational::zero());
    }
    for e in g.edges() {
        let cur = &mut d[e.tail][e.head];
        if cur.as_ref().map_or(true, |c| e.cost < *c) {
            *cur = Some(e.cost.clone());
        }
    }
    for k in 0..n {
        for i in 0..n {
            let Some(ik) = d[i][k].clone() else { continue };
            for j in 0..n {
                if let Some(kj) = &d[k][j] {
                    let via = &ik + kj;
                    if d[i][j].as_ref().map_or(true, |c| via < *c) {
                        d[i][j] = Some(via);
                    }
                }
            }
        }
    }
    d
}

/// Minimum cost of a closed walk visiting every vertex.
pub fn held_karp_opt(g: &Digraph) -> Result<Rational> {
    let n = g.n();
    if n > HELD_KARP_MAX_N {
        return Err(Error::Budget(format!(
            "held_karp_opt supports n <= {HELD_KARP_MAX_N}, got {n}"
        )));
    }
    if n == 0 {
        return Err(Error::Input("graph has no vertices".into()));
    }
    if n == 1 {
        return Ok(rational::zero());
    }
    let closure = metric_closure(g);
    let mut dist = Vec::with_capacity(n);
    for row in &closure {
        let row: Option<Vec<Rational>> = row.iter().cloned().collect();
        dist.push(row.ok_or(Error::NotStronglyConnected)?);
    }
    // Scale to integers; use machine words when the largest possible tour fits.
    let den = rational::common_denominator(dist.iter().flatten());
    let scaled: Vec<Vec<BigInt>> = dist
        .iter()
        .map(|r| {
            r.iter()
                .map(|c| (c * Rational::from_integer(den.clone())).to_integer())
                .collect()
        })
        .collect();
    let max = scaled.iter().flatten().max().cloned().unwrap_or_default();
    let best = match (max * BigInt::from(n as u64 + 1)).to_i64() {
        Some(_) => {
            let small: Vec<Vec<i64>> = scaled
                .iter()
                .map(|r| r.iter().map(|c| c.to_i64().unwrap()).collect())
                .collect();
            BigInt::from(subset_dp(&small))
        }
        None => subset_dp(&scaled),
    };
    Ok(Rational::new(best, den))
}

/// Hamiltonian cycle optimum through vertex 0 on a complete cost matrix.
fn subset_dp<T: Clone + Ord + Add<Output = T>>(d: &[Vec<T>]) -> T {
    let n = d.len();
    let k = n - 1;
    let full = 1usize << k;
    // dp[mask][j]: cheapest path 0 -> ... -> j+1 visiting exactly mask.
    let mut dp: Vec<Vec<Option<T>>> = vec![vec![None; k]; full];
    for j in 0..k {
        dp[1 << j][j] = Some(d[0][j + 1].clone());
    }
    for mask in 1..full {
        for j in 0..k {
            let Some(base) = dp[mask][j].clone() else {
                continue;
            };
            for t in 0..k {
                if mask & (1 << t) != 0 {
                    continue;
                }
                let next = mask | (1 << t);
                let cand = base.clone() + d[j + 1][t + 1].clone();
                if dp[next][t].as_ref().map_or(true, |c| cand < *c) {
                    dp[next][t] = Some(cand);
                }
            }
        }
    }
    (0..k)
        .filter_map(|j| dp[full - 1][j].clone().map(|c| c + d[j + 1][0].clone()))
        .min()
        .expect("complete matrix has a Hamiltonian cycle")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::rational::{frac, int};

    #[test]
    fn fixtures() {
        assert_eq!(held_karp_opt(&c3()).unwrap(), int(3));
        assert_eq!(held_karp_opt(&k2()).unwrap(), int(2));
        assert_eq!(held_karp_opt(&two_tri()).unwrap(), int(16));
    }

    #[test]
    fn fractional_costs_stay_exact() {
        let g = Digraph::from_edges(2, [(0, 1, frac(1, 3)), (1, 0, frac(1, 7))]).unwrap();
        assert_eq!(held_karp_opt(&g).unwrap(), frac(10, 21));
    }

    #[test]
    fn budget_is_enforced() {
        let g = crate::harness::gen_instance(crate::harness::Model::Cycle, 19, 0);
        assert!(matches!(held_karp_opt(&g), Err(Error::Budget(_))));
    }
}
