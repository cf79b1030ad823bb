use super::{Digraph, EdgeId, VertexId, VertexSet};
use crate::error::{Error, Result};

/// Bookkeeping for [`contract`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContractionMap {
    /// Image of every parent vertex.
    pub vertex: Vec<VertexId>,
    /// Parent edge of every contracted edge.
    pub edge_origin: Vec<EdgeId>,
    /// New vertex of every class, in the order the classes were given.
    pub class_vertex: Vec<VertexId>,
}

impl ContractionMap {
    /// Parent vertices mapping onto `v`.
    pub fn preimage(&self, v: VertexId) -> VertexSet {
        self.vertex
            .iter()
            .enumerate()
            .filter(|(_, &w)| w == v)
            .map(|(u, _)| u)
            .collect()
    }

    pub fn image(&self, set: &VertexSet) -> VertexSet {
        set.iter().map(|v| self.vertex[v]).collect()
    }
}

/// Contracts every class to a single vertex. New ids follow the smallest
/// parent vertex of each image; self-loops are dropped, parallel edges kept.
pub fn contract(g: &Digraph, classes: &[VertexSet]) -> Result<(Digraph, ContractionMap)> {
    let n = g.n();
    let mut class_of: Vec<Option<usize>> = vec![None; n];
    for (i, c) in classes.iter().enumerate() {
        if c.is_empty() {
            return Err(Error::Input(format!("contraction class {i} is empty")));
        }
        for v in c.iter() {
            if v >= n {
                return Err(Error::Input(format!(
                    "contraction class {i} has vertex {v} out of range"
                )));
            }
            if class_of[v].replace(i).is_some() {
                return Err(Error::Input(format!(
                    "contraction classes overlap at vertex {v}"
                )));
            }
        }
    }
    let mut vertex = vec![usize::MAX; n];
    let mut class_vertex = vec![usize::MAX; classes.len()];
    let mut next = 0;
    for v in 0..n {
        if vertex[v] != usize::MAX {
            continue;
        }
        match class_of[v] {
            Some(i) => {
                for u in classes[i].iter() {
                    vertex[u] = next;
                }
                class_vertex[i] = next;
            }
            None => vertex[v] = next,
        }
        next += 1;
    }
    let mut h = Digraph::new(next);
    let mut edge_origin = Vec::new();
    for (id, e) in g.edges().iter().enumerate() {
        let (t, w) = (vertex[e.tail], vertex[e.head]);
        if t != w {
            h.add_edge(t, w, e.cost.clone())?;
            edge_origin.push(id);
        }
    }
    Ok((
        h,
        ContractionMap {
            vertex,
            edge_origin,
            class_vertex,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;

    #[test]
    fn triangle_contraction() {
        let g = c3();
        let (h, map) = contract(&g, &[VertexSet::new(vec![1, 2])]).unwrap();
        assert_eq!(h.n(), 2);
        assert_eq!(map.class_vertex, vec![1]);
        let arcs: Vec<_> = h.edges().iter().map(|e| (e.tail, e.head)).collect();
        assert_eq!(arcs, vec![(0, 1), (1, 0)]);
        assert_eq!(map.edge_origin, vec![0, 2]);
        assert_eq!(map.preimage(1), VertexSet::new(vec![1, 2]));
    }

    #[test]
    fn empty_contraction_is_identity() {
        let g = two_tri();
        let (h, map) = contract(&g, &[]).unwrap();
        assert_eq!(h, g);
        assert_eq!(map.vertex, (0..6).collect::<Vec<_>>());
        assert_eq!(map.edge_origin, (0..8).collect::<Vec<_>>());
    }

    #[test]
    fn contracting_a_triangle_of_two_tri() {
        let g = two_tri();
        let (h, map) = contract(&g, &[VertexSet::new(vec![3, 4, 5])]).unwrap();
        assert_eq!(h.n(), 4);
        let c = map.class_vertex[0];
        assert_eq!(h.m(), 5);
        assert_eq!(h.in_edges(c).len(), 1);
        assert_eq!(h.out_edges(c).len(), 1);
        assert_eq!(h.edge(h.in_edges(c)[0]).tail, 0);
        for (i, &o) in map.edge_origin.iter().enumerate() {
            assert_eq!(h.cost(i), g.cost(o));
        }
    }

    #[test]
    fn overlapping_classes_rejected() {
        let g = two_tri();
        let r = contract(
            &g,
            &[VertexSet::new(vec![0, 1]), VertexSet::new(vec![1, 2])],
        );
        assert!(matches!(r, Err(Error::Input(_))));
    }
}
