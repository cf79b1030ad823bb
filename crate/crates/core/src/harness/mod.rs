//! Instance I/O, generators, the exact oracle, tour verification and
//! end-to-end runs with machine-readable reports.

mod generate;
mod io;
mod oracle;

pub use generate::{gen_instance, Model};
pub use io::{
    parse_instance, parse_instance_file, parse_tour, to_json, to_tsplib, InstanceFile, MAX_VERTICES,
};
pub use oracle::{held_karp_opt, metric_closure, HELD_KARP_MAX_N};

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::audit::Audit;
use crate::error::{Error, Result};
use crate::graph::{euler_walk, is_eulerian_connected, Digraph, EdgeMultiset, VertexId};
use crate::rational::{self, int, Rational};
use crate::vertebrate::{default_epsilon, solve_atsp};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TourVerdict {
    pub valid: bool,
    pub eulerian: bool,
    pub connected: bool,
    pub spanning: bool,
    pub cost: String,
    pub diagnostics: Vec<String>,
    /// Closed vertex walk from vertex 0 when the multiset is a tour.
    pub walk: Option<Vec<VertexId>>,
}

/// Checks that `f` is a connected Eulerian multiset touching every vertex.
pub fn verify_tour(g: &Digraph, f: &EdgeMultiset) -> TourVerdict {
    let mut diagnostics = Vec::new();
    let check = match is_eulerian_connected(g, f) {
        Ok(c) => c,
        Err(e) => {
            return TourVerdict {
                valid: false,
                eulerian: false,
                connected: false,
                spanning: false,
                cost: String::new(),
                diagnostics: vec![e.to_string()],
                walk: None,
            }
        }
    };
    let support = f.vertices(g);
    let spanning = g.n() == 1 || support.len() == g.n();
    let touched = check
        .components
        .iter()
        .filter(|c| c.iter().any(|v| support.contains(v)))
        .count();
    let connected = touched <= 1;
    if !check.eulerian {
        diagnostics
            .push("not Eulerian: some vertex has in-degree different from out-degree".into());
    }
    if !connected {
        diagnostics.push(format!("not connected: {touched} components"));
    }
    if !spanning {
        let missed: Vec<String> = (0..g.n())
            .filter(|&v| !support.contains(v))
            .map(|v| v.to_string())
            .collect();
        diagnostics.push(format!(
            "not spanning: vertices {} are not visited",
            missed.join(", ")
        ));
    }
    let valid = check.eulerian && connected && spanning;
    let walk = valid.then(|| vertex_walk(g, f)).transpose().ok().flatten();
    TourVerdict {
        valid,
        eulerian: check.eulerian,
        connected,
        spanning,
        cost: rational::format(&f.cost(g)),
        diagnostics,
        walk,
    }
}

fn vertex_walk(g: &Digraph, f: &EdgeMultiset) -> Result<Vec<VertexId>> {
    let mut walk = vec![0];
    walk.extend(euler_walk(g, f, 0)?.into_iter().map(|e| g.edge(e).head));
    Ok(walk)
}

#[derive(Debug, Clone)]
pub struct PipelineOptions {
    pub epsilon: Rational,
    /// Evaluate the optional (expensive) internal checks.
    pub check_all: bool,
    /// Also compute the exact optimum (n <= 18).
    pub oracle: bool,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        Self {
            epsilon: default_epsilon(),
            check_all: true,
            oracle: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub name: String,
    pub n: usize,
    pub m: usize,
    pub epsilon: String,
    pub lp_value: String,
    pub tour_cost: String,
    pub ratio: String,
    pub ratio_f64: f64,
    /// `(22 + ε) · lp_value`.
    pub guarantee: String,
    pub held_karp_opt: Option<String>,
    pub walk: Vec<VertexId>,
    pub timings_ms: BTreeMap<String, f64>,
    pub assertions: BTreeMap<String, u64>,
    pub assertions_total: u64,
}

impl RunReport {
    /// The report with timings cleared, for determinism comparisons.
    pub fn without_timings(&self) -> RunReport {
        RunReport {
            timings_ms: BTreeMap::new(),
            ..self.clone()
        }
    }
}

fn elapsed_ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

/// Solves, verifies and optionally compares against the exact optimum.
pub fn run_pipeline(name: &str, g: &Digraph, opts: &PipelineOptions) -> Result<RunReport> {
    let stage = "run_pipeline";
    if !g.is_strongly_connected() {
        return Err(Error::NotStronglyConnected);
    }
    let mut audit = Audit::new(opts.check_all);
    let mut timings = BTreeMap::new();

    let t = Instant::now();
    let cert = solve_atsp(g, &opts.epsilon, &mut audit)?;
    timings.insert("solve".to_string(), elapsed_ms(t));

    let t = Instant::now();
    let verdict = verify_tour(g, &cert.tour);
    timings.insert("verify".to_string(), elapsed_ms(t));
    audit.check(stage, verdict.valid, || {
        format!("returned multiset is not a tour: {:?}", verdict.diagnostics)
    })?;
    let guarantee = (int(22) + &opts.epsilon) * &cert.lp_value;
    audit.check(stage, cert.cost <= guarantee, || {
        format!("tour cost {} exceeds {guarantee}", cert.cost)
    })?;

    let held_karp = if opts.oracle {
        let t = Instant::now();
        let opt = held_karp_opt(g)?;
        timings.insert("held_karp".to_string(), elapsed_ms(t));
        audit.check(stage, cert.lp_value <= opt, || {
            format!("LP value {} exceeds optimum {opt}", cert.lp_value)
        })?;
        audit.check(stage, opt <= cert.cost, || {
            format!("optimum {opt} exceeds tour cost {}", cert.cost)
        })?;
        Some(rational::format(&opt))
    } else {
        None
    };

    Ok(RunReport {
        name: name.to_string(),
        n: g.n(),
        m: g.m(),
        epsilon: rational::format(&opts.epsilon),
        lp_value: rational::format(&cert.lp_value),
        tour_cost: rational::format(&cert.cost),
        ratio: rational::format(&cert.ratio),
        ratio_f64: rational::to_f64(&cert.ratio),
        guarantee: rational::format(&guarantee),
        held_karp_opt: held_karp,
        walk: verdict.walk.unwrap_or_default(),
        timings_ms: timings,
        assertions: audit
            .counts()
            .iter()
            .map(|(k, v)| (k.to_string(), *v))
            .collect(),
        assertions_total: audit.total(),
    })
}
