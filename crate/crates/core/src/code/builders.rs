//! Ready-made code models used by the CLI, experiments and tests.

use super::{ConstraintRow, LinearCodeModel};
use crate::system::{from_simplicial_complex, TwoLayerSystem};
use crate::Result;

/// The 3-vertex triangle code with the circulant check matrix
/// [[1, p-1, 0], [0, 1, p-1], [p-1, 0, 1]] and the all-ones dependency.
pub fn triangle_code(p: u64) -> Result<LinearCodeModel> {
    let system =
        from_simplicial_complex(vec!["v1".into(), "v2".into(), "v3".into()], &[[0, 1, 2]])?;
    let rows = vec![
        ConstraintRow::new(vec![(0, 1), (1, p - 1)], p)?,
        ConstraintRow::new(vec![(1, 1), (2, p - 1)], p)?,
        ConstraintRow::new(vec![(2, 1), (0, p - 1)], p)?,
    ];
    let deps = vec![vec![(0, 1), (1, 1), (2, 1)]];
    LinearCodeModel::build(p, system, rows, deps)
}

/// A code over any triangle-complex system: one oriented difference
/// constraint c(u) - c(v) per edge (u < v), one telescoping dependency per
/// triangle. Over F_2 the rows coincide with plain parity checks.
pub fn triangle_complex_code(p: u64, system: TwoLayerSystem) -> Result<LinearCodeModel> {
    let mut rows = Vec::with_capacity(system.edge_count());
    for e in 0..system.edge_count() {
        let members = system.edge(e);
        debug_assert_eq!(members.len(), 2);
        rows.push(ConstraintRow::new(
            vec![(members[0], 1), (members[1], p - 1)],
            p,
        )?);
    }
    // For a triangle a < b < c: (a-b) + (b-c) - (a-c) = 0.
    let mut deps = Vec::with_capacity(system.top_count());
    for t in 0..system.top_count() {
        let sigma = system.top(t);
        debug_assert_eq!(sigma.len(), 3);
        let mut vertices: Vec<usize> = sigma
            .iter()
            .flat_map(|&e| system.edge(e).iter().copied())
            .collect();
        vertices.sort_unstable();
        vertices.dedup();
        let (a, b, c) = (vertices[0], vertices[1], vertices[2]);
        let mut ld = Vec::with_capacity(3);
        for &e in sigma {
            let m = system.edge(e);
            let coeff = if m == [a, b] || m == [b, c] {
                1
            } else {
                debug_assert_eq!(m, [a, c]);
                p - 1
            };
            ld.push((e, coeff));
        }
        // Edge indices equal row indices by construction.
        deps.push(ld);
    }
    LinearCodeModel::build(p, system, rows, deps)
}
