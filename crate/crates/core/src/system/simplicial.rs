//! Two-layer systems from 2-dimensional simplicial complexes: V is the vertex
//! set, E the edge set, and each triangle contributes its three edges as a
//! unit-weight top element. The parameters are always (s, k, K) = (2, 2, 3).

use super::{SystemData, TwoLayerSystem};
use crate::ratio::rat_int;
use crate::{Error, Result};
use std::collections::BTreeMap;

pub fn from_simplicial_complex(
    vertex_labels: Vec<String>,
    triangles: &[[usize; 3]],
) -> Result<TwoLayerSystem> {
    if triangles.is_empty() {
        return Err(Error::domain("empty triangle list".to_string()));
    }
    let nv = vertex_labels.len();
    let mut edge_ids: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut tops = Vec::with_capacity(triangles.len());
    for tri in triangles {
        let mut t = *tri;
        t.sort_unstable();
        if t[0] == t[1] || t[1] == t[2] {
            return Err(Error::domain(format!("degenerate triangle {tri:?}")));
        }
        if t[2] >= nv {
            return Err(Error::domain(format!(
                "triangle {tri:?} references an unknown vertex"
            )));
        }
        let mut sigma = Vec::with_capacity(3);
        for (a, b) in [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])] {
            let next = edge_ids.len();
            sigma.push(*edge_ids.entry((a, b)).or_insert(next));
        }
        tops.push((rat_int(1), sigma));
    }
    let mut edges = vec![Vec::new(); edge_ids.len()];
    let mut edge_labels = vec![String::new(); edge_ids.len()];
    for ((a, b), id) in &edge_ids {
        edges[*id] = vec![*a, *b];
        edge_labels[*id] = format!("{}-{}", vertex_labels[*a], vertex_labels[*b]);
    }
    // Vertices not touched by any triangle would fail validation; callers
    // pass exactly the complex's vertex set.
    TwoLayerSystem::build(SystemData {
        vertex_labels,
        edge_labels,
        edges,
        tops,
        declared: Some((2, 2, 3)),
    })
}

/// Every triangle of the complete complex on `n` vertices.
pub fn complete_complex_triangles(n: usize) -> Vec<[usize; 3]> {
    let mut tris = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                tris.push([a, b, c]);
            }
        }
    }
    tris
}
