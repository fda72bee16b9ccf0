//! Dense symmetric eigensolves for weighted random walks.
//!
//! The walk operator M = D^{-1} A is similar to S = D^{-1/2} A D^{-1/2};
//! S is symmetric, so a symmetric eigensolver recovers M's (real) spectrum.

use super::WeightedGraph;
use crate::ratio::rat_to_f64;
use nalgebra::{DMatrix, SymmetricEigen};

pub(super) fn walk_spectrum(g: &WeightedGraph) -> Vec<f64> {
    let n = g.vertex_count();
    let d: Vec<f64> = g.vertex_weights().iter().map(rat_to_f64).collect();
    let mut s = DMatrix::<f64>::zeros(n, n);
    for (a, b, w) in g.edges() {
        let v = rat_to_f64(w) / (d[*a] * d[*b]).sqrt();
        s[(*a, *b)] = v;
        s[(*b, *a)] = v;
    }
    let eigen = SymmetricEigen::new(s);
    let mut vals: Vec<f64> = eigen.eigenvalues.iter().copied().collect();
    vals.sort_by(|x, y| y.partial_cmp(x).expect("finite eigenvalues"));
    vals
}

#[cfg(test)]
mod tests {
    use crate::graph::WeightedGraph;
    use crate::ratio::rat;

    #[test]
    fn spectrum_respects_edge_weights() {
        // Two vertices, one edge: walk spectrum {1, -1} regardless of weight.
        let g = WeightedGraph::new(vec!["a".into(), "b".into()], vec![(0, 1, rat(7, 3))]).unwrap();
        let s = g.walk_spectrum(10).unwrap();
        assert!((s[0] - 1.0).abs() < 1e-12 && (s[1] + 1.0).abs() < 1e-12);
    }

    #[test]
    fn weighted_path_spectrum_sums_to_trace() {
        let g = WeightedGraph::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![(0, 1, rat(1, 2)), (1, 2, rat(3, 1))],
        )
        .unwrap();
        let s = g.walk_spectrum(10).unwrap();
        // Trace of M is zero (no self-loops); the top eigenvalue is 1.
        assert!((s.iter().sum::<f64>()).abs() < 1e-9);
        assert!((s[0] - 1.0).abs() < 1e-9);
    }
}
