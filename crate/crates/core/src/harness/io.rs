//! Instance and tour formats.
//!
//! JSON edge list: `{"name": "...", "n": 3, "edges": [[0, 1, "1"], [1, 2, "1/2"]]}`
//! where costs are decimal or `p/q` strings (plain JSON numbers are accepted too).
//! TSPLIB: `TYPE: ATSP` with `EDGE_WEIGHT_FORMAT: FULL_MATRIX`; the diagonal is ignored.

use serde::Deserialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::graph::{Digraph, EdgeMultiset, VertexId};
use crate::rational::{self, Rational};

/// Largest vertex count accepted by the parsers.
pub const MAX_VERTICES: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceFile {
    pub name: String,
    pub graph: Digraph,
}

#[derive(Deserialize)]
struct JsonInstance {
    #[serde(default)]
    name: Option<String>,
    n: usize,
    edges: Vec<(usize, usize, Value)>,
}

fn input(msg: impl Into<String>) -> Error {
    Error::Input(msg.into())
}

fn parse_cost(v: &Value) -> Result<Rational> {
    let s = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        other => {
            return Err(input(format!(
                "cost must be a string or number, got {other}"
            )))
        }
    };
    let c = rational::parse(&s).map_err(|e| input(e.to_string()))?;
    if c < rational::zero() {
        return Err(input(format!("negative cost {s}")));
    }
    Ok(c)
}

/// Parses either format, detected by the first non-blank byte.
pub fn parse_instance_file(bytes: &[u8]) -> Result<InstanceFile> {
    let text = std::str::from_utf8(bytes).map_err(|_| input("instance is not valid UTF-8"))?;
    let file = if text.trim_start().starts_with('{') {
        parse_json(text)?
    } else {
        parse_tsplib(text)?
    };
    if file.graph.n() == 0 {
        return Err(input("instance has no vertices"));
    }
    if !file.graph.is_strongly_connected() {
        return Err(Error::NotStronglyConnected);
    }
    Ok(file)
}

pub fn parse_instance(bytes: &[u8]) -> Result<Digraph> {
    parse_instance_file(bytes).map(|f| f.graph)
}

fn parse_json(text: &str) -> Result<InstanceFile> {
    let raw: JsonInstance =
        serde_json::from_str(text).map_err(|e| input(format!("bad JSON instance: {e}")))?;
    if raw.n > MAX_VERTICES {
        return Err(input(format!(
            "n = {} exceeds the limit {MAX_VERTICES}",
            raw.n
        )));
    }
    let mut g = Digraph::new(raw.n);
    for (t, h, c) in &raw.edges {
        g.add_edge(*t, *h, parse_cost(c)?)?;
    }
    Ok(InstanceFile {
        name: raw.name.unwrap_or_else(|| "unnamed".into()),
        graph: g,
    })
}

fn parse_tsplib(text: &str) -> Result<InstanceFile> {
    let mut name = String::from("unnamed");
    let mut dim: Option<usize> = None;
    let mut kind = None;
    let mut format = None;
    let mut lines = text.lines();
    let mut weights: Vec<&str> = Vec::new();
    while let Some(line) = lines.next() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if line == "EDGE_WEIGHT_SECTION" || line.starts_with("EDGE_WEIGHT_SECTION") {
            let rest = line["EDGE_WEIGHT_SECTION".len()..].trim_start_matches(':');
            weights.extend(rest.split_whitespace());
            for l in lines.by_ref() {
                let l = l.trim();
                if l == "EOF" {
                    break;
                }
                weights.extend(l.split_whitespace());
            }
            break;
        }
        if line == "EOF" {
            break;
        }
        let (key, value) = line
            .split_once(':')
            .ok_or_else(|| input(format!("unexpected TSPLIB line {line:?}")))?;
        let value = value.trim();
        match key.trim() {
            "NAME" => name = value.to_string(),
            "TYPE" => kind = Some(value.to_string()),
            "DIMENSION" => {
                dim = Some(
                    value
                        .parse()
                        .map_err(|_| input(format!("bad DIMENSION {value:?}")))?,
                );
            }
            "EDGE_WEIGHT_TYPE" => {
                if value != "EXPLICIT" {
                    return Err(input(format!("unsupported EDGE_WEIGHT_TYPE {value}")));
                }
            }
            "EDGE_WEIGHT_FORMAT" => format = Some(value.to_string()),
            "COMMENT" => {}
            other => return Err(input(format!("unsupported TSPLIB keyword {other}"))),
        }
    }
    if kind.as_deref() != Some("ATSP") {
        return Err(input("TSPLIB instance must have TYPE: ATSP"));
    }
    if format.as_deref() != Some("FULL_MATRIX") {
        return Err(input(
            "TSPLIB instance must have EDGE_WEIGHT_FORMAT: FULL_MATRIX",
        ));
    }
    let n = dim.ok_or_else(|| input("missing DIMENSION"))?;
    if n > MAX_VERTICES {
        return Err(input(format!(
            "DIMENSION {n} exceeds the limit {MAX_VERTICES}"
        )));
    }
    if weights.len() != n * n {
        return Err(input(format!(
            "expected {} matrix entries, found {}",
            n * n,
            weights.len()
        )));
    }
    let mut g = Digraph::new(n);
    for (i, w) in weights.iter().enumerate() {
        let (t, h) = (i / n, i % n);
        if t == h {
            continue;
        }
        g.add_edge(t, h, parse_cost(&Value::String((*w).to_string()))?)?;
    }
    Ok(InstanceFile { name, graph: g })
}

/// One edge per line, so generated files diff well.
pub fn to_json(name: &str, g: &Digraph) -> String {
    let edges: Vec<String> = g
        .edges()
        .iter()
        .map(|e| {
            format!(
                "    [{}, {}, {}]",
                e.tail,
                e.head,
                Value::String(rational::format(&e.cost))
            )
        })
        .collect();
    format!(
        "{{\n  \"name\": {},\n  \"n\": {},\n  \"edges\": [\n{}\n  ]\n}}\n",
        Value::String(name.to_string()),
        g.n(),
        edges.join(",\n")
    )
}

/// Fails for graphs that are not complete, have parallel edges, or have
/// costs that are not integers.
pub fn to_tsplib(name: &str, g: &Digraph) -> Result<String> {
    let n = g.n();
    let mut m: Vec<Vec<Option<&Rational>>> = vec![vec![None; n]; n];
    for e in g.edges() {
        if m[e.tail][e.head].replace(&e.cost).is_some() {
            return Err(input("FULL_MATRIX cannot hold parallel edges"));
        }
        if !e.cost.is_integer() {
            return Err(input("FULL_MATRIX output requires integer costs"));
        }
    }
    let mut out = format!(
        "NAME: {name}\nTYPE: ATSP\nDIMENSION: {n}\nEDGE_WEIGHT_TYPE: EXPLICIT\nEDGE_WEIGHT_FORMAT: FULL_MATRIX\nEDGE_WEIGHT_SECTION\n"
    );
    for (t, row) in m.iter().enumerate() {
        let cells: Result<Vec<String>> = row
            .iter()
            .enumerate()
            .map(|(h, c)| match (c, t == h) {
                (_, true) => Ok("0".to_string()),
                (Some(c), false) => Ok(rational::format(c)),
                (None, false) => Err(input("FULL_MATRIX output requires a complete digraph")),
            })
            .collect();
        out.push_str(&cells?.join(" "));
        out.push('\n');
    }
    out.push_str("EOF\n");
    Ok(out)
}

#[derive(Deserialize)]
struct JsonTour {
    #[serde(default)]
    walk: Option<Vec<VertexId>>,
    #[serde(default)]
    edges: Option<Vec<(VertexId, VertexId)>>,
}

/// Parses a tour as `{"walk": [v0, v1, ..., v0]}` (the run report shape) or
/// `{"edges": [[tail, head], ...]}`. Each step uses the cheapest matching edge.
pub fn parse_tour(g: &Digraph, bytes: &[u8]) -> Result<EdgeMultiset> {
    let raw: JsonTour =
        serde_json::from_slice(bytes).map_err(|e| input(format!("bad JSON tour: {e}")))?;
    let steps: Vec<(VertexId, VertexId)> = match (raw.walk, raw.edges) {
        (Some(w), None) => w.windows(2).map(|p| (p[0], p[1])).collect(),
        (None, Some(e)) => e,
        _ => return Err(input("tour needs exactly one of \"walk\" or \"edges\"")),
    };
    let mut f = EdgeMultiset::new();
    for (t, h) in steps {
        if t >= g.n() {
            return Err(input(format!("vertex {t} out of range")));
        }
        let e = g
            .out_edges(t)
            .iter()
            .copied()
            .filter(|&e| g.edge(e).head == h)
            .min_by(|&a, &b| g.cost(a).cmp(g.cost(b)).then(a.cmp(&b)))
            .ok_or_else(|| input(format!("no edge ({t},{h}) in the instance")))?;
        f.add(e, 1);
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    const C3: &str = r#"{"n": 3, "edges": [[0,1,"1"],[1,2,"1"],[2,0,"1"]]}"#;

    #[test]
    fn json_c3() {
        let g = parse_instance(C3.as_bytes()).unwrap();
        assert_eq!((g.n(), g.m()), (3, 3));
        assert!(g.edges().iter().all(|e| e.cost == int(1)));
    }

    #[test]
    fn matrix_k2() {
        let text = "NAME: k2\nTYPE: ATSP\nDIMENSION: 2\nEDGE_WEIGHT_TYPE: EXPLICIT\nEDGE_WEIGHT_FORMAT: FULL_MATRIX\nEDGE_WEIGHT_SECTION\n0 1\n1 0\nEOF\n";
        let f = parse_instance_file(text.as_bytes()).unwrap();
        assert_eq!(f.name, "k2");
        assert_eq!((f.graph.n(), f.graph.m()), (2, 2));
    }

    #[test]
    fn one_way_graph_is_rejected() {
        let text = r#"{"n": 3, "edges": [[0,1,"1"],[1,2,"1"]]}"#;
        assert!(matches!(
            parse_instance(text.as_bytes()),
            Err(Error::NotStronglyConnected)
        ));
    }

    #[test]
    fn negative_and_malformed_costs_are_rejected() {
        for bad in [
            r#"{"n":2,"edges":[[0,1,"-1"],[1,0,"1"]]}"#,
            r#"{"n":2,"edges":[[0,1,"x"],[1,0,"1"]]}"#,
        ] {
            assert!(parse_instance(bad.as_bytes()).unwrap_err().is_input_error());
        }
    }

    #[test]
    fn json_round_trip_keeps_rationals() {
        let text = r#"{"name":"q","n":2,"edges":[[0,1,"1/3"],[1,0,"2.5"]]}"#;
        let f = parse_instance_file(text.as_bytes()).unwrap();
        let back = parse_instance_file(to_json(&f.name, &f.graph).as_bytes()).unwrap();
        assert_eq!(f, back);
    }

    #[test]
    fn tsplib_round_trip() {
        let text = r#"{"name":"t","n":3,"edges":[[0,1,"1"],[0,2,"4"],[1,0,"2"],[1,2,"3"],[2,0,"5"],[2,1,"6"]]}"#;
        let f = parse_instance_file(text.as_bytes()).unwrap();
        let back = parse_instance_file(to_tsplib(&f.name, &f.graph).unwrap().as_bytes()).unwrap();
        assert_eq!(f, back);
    }

    #[test]
    fn tours_from_walks_and_edge_lists() {
        let g = parse_instance(C3.as_bytes()).unwrap();
        let a = parse_tour(&g, br#"{"walk":[0,1,2,0]}"#).unwrap();
        let b = parse_tour(&g, br#"{"edges":[[2,0],[0,1],[1,2]]}"#).unwrap();
        assert_eq!(a, b);
        assert!(parse_tour(&g, br#"{"walk":[0,2]}"#).is_err());
    }
}
