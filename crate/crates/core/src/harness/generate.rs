//! Deterministic instance generators.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::Digraph;
use crate::rational::int;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Model {
    /// Unit-cost directed Hamiltonian cycle.
    Cycle,
    /// A random Hamiltonian cycle plus random extra arcs, integer costs in `1..=20`.
    RandomStrong,
    /// Two unit-cost cycles joined by a pair of expensive arcs, with random chords for nonzero seeds.
    TwoCluster,
    /// Same arc structure as `RandomStrong`, every cost 1.
    UnitDigraph,
}

impl Model {
    pub const ALL: [Model; 4] = [
        Model::Cycle,
        Model::RandomStrong,
        Model::TwoCluster,
        Model::UnitDigraph,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Model::Cycle => "cycle",
            Model::RandomStrong => "random-strong",
            Model::TwoCluster => "two-cluster",
            Model::UnitDigraph => "unit-digraph",
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Model {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Model::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown model {s:?}; expected one of cycle, random-strong, two-cluster, unit-digraph"))
    }
}

/// Builds a strongly connected instance; identical arguments give identical graphs.
pub fn gen_instance(model: Model, n: usize, seed: u64) -> Digraph {
    assert!(n >= 1, "generators need at least one vertex");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Digraph::new(n);
    let add = |g: &mut Digraph, t: usize, h: usize, c: i64| {
        g.add_edge(t, h, int(c)).expect("generated edge is valid");
    };
    match model {
        Model::Cycle => {
            if n >= 2 {
                for v in 0..n {
                    add(&mut g, v, (v + 1) % n, 1);
                }
            }
        }
        Model::RandomStrong | Model::UnitDigraph => {
            let unit = model == Model::UnitDigraph;
            let cost = |rng: &mut ChaCha8Rng| if unit { 1 } else { rng.gen_range(1..=20) };
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut rng);
            let mut present = vec![vec![false; n]; n];
            if n >= 2 {
                for i in 0..n {
                    let (t, h) = (order[i], order[(i + 1) % n]);
                    present[t][h] = true;
                    let c = cost(&mut rng);
                    add(&mut g, t, h, c);
                }
            }
            let p = (3.0 / n as f64).min(0.5);
            for t in 0..n {
                for h in 0..n {
                    if t != h && !present[t][h] && rng.gen_bool(p) {
                        let c = cost(&mut rng);
                        add(&mut g, t, h, c);
                    }
                }
            }
        }
        Model::TwoCluster => {
            let a = n.div_ceil(2);
            let clusters = [(0, a), (a, n)];
            for &(lo, hi) in &clusters {
                if hi - lo >= 2 {
                    for v in lo..hi {
                        add(&mut g, v, if v + 1 == hi { lo } else { v + 1 }, 1);
                    }
                }
            }
            if a < n {
                let join = if seed == 0 { 5 } else { rng.gen_range(4..=10) };
                add(&mut g, 0, a, join);
                add(&mut g, a, 0, join);
            }
            if seed != 0 {
                for &(lo, hi) in &clusters {
                    for t in lo..hi {
                        for h in lo..hi {
                            let on_cycle = h == if t + 1 == hi { lo } else { t + 1 };
                            if t != h && !on_cycle && rng.gen_bool(0.3) {
                                let c = rng.gen_range(1..=3);
                                add(&mut g, t, h, c);
                            }
                        }
                    }
                }
                if a < n && rng.gen_bool(0.5) {
                    let (t, h) = (rng.gen_range(0..a), rng.gen_range(a..n));
                    let c = rng.gen_range(4..=10);
                    add(&mut g, t, h, c);
                }
            }
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::{c3, two_tri};

    #[test]
    fn named_fixtures() {
        assert_eq!(gen_instance(Model::Cycle, 3, 42), c3());
        assert_eq!(gen_instance(Model::TwoCluster, 6, 0), two_tri());
    }

    #[test]
    fn deterministic_and_strongly_connected() {
        for model in Model::ALL {
            for n in 1..=12 {
                for seed in 0..4 {
                    let g = gen_instance(model, n, seed);
                    assert_eq!(g, gen_instance(model, n, seed));
                    assert!(g.is_strongly_connected(), "{model} n={n} seed={seed}");
                }
            }
        }
        assert_eq!(gen_instance(Model::RandomStrong, 10, 7).n(), 10);
    }

    #[test]
    fn model_names_round_trip() {
        for m in Model::ALL {
            assert_eq!(m.name().parse::<Model>().unwrap(), m);
        }
        assert!("grid".parse::<Model>().is_err());
    }
}
