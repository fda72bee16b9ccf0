//! Weak covers: surjective, weight-summing graph projections. The Cheeger
//! constant of the base dominates the cover's.

use super::WeightedGraph;
use crate::ratio::Rat;
use num_traits::Zero;
use std::collections::HashMap;

#[derive(Debug, Clone)]
pub struct CoverVerdict {
    pub ok: bool,
    pub reason: Option<String>,
}

impl CoverVerdict {
    fn fail(reason: String) -> Self {
        CoverVerdict {
            ok: false,
            reason: Some(reason),
        }
    }
}

/// Checks that `proj` exhibits `cover` as a weak cover of `base`:
/// vertex-surjective, edges map onto edges surjectively, and every base edge
/// weight equals the sum of its preimage weights.
pub fn check_weak_cover(
    cover: &WeightedGraph,
    base: &WeightedGraph,
    proj: &[usize],
) -> CoverVerdict {
    if proj.len() != cover.vertex_count() {
        return CoverVerdict::fail(format!(
            "projection has {} entries for {} cover vertices",
            proj.len(),
            cover.vertex_count()
        ));
    }
    let nb = base.vertex_count();
    let mut hit = vec![false; nb];
    for (v, &img) in proj.iter().enumerate() {
        if img >= nb {
            return CoverVerdict::fail(format!("vertex {v} maps outside the base"));
        }
        hit[img] = true;
    }
    if let Some(missing) = hit.iter().position(|h| !h) {
        return CoverVerdict::fail(format!(
            "projection misses base vertex {}",
            base.labels()[missing]
        ));
    }

    let mut base_edges: HashMap<(usize, usize), &Rat> = HashMap::new();
    for (a, b, w) in base.edges() {
        base_edges.insert((*a, *b), w);
    }
    let mut summed: HashMap<(usize, usize), Rat> = HashMap::new();
    for (a, b, w) in cover.edges() {
        let (mut pa, mut pb) = (proj[*a], proj[*b]);
        if pa == pb {
            return CoverVerdict::fail(format!(
                "cover edge {}-{} collapses to a self-loop at {}",
                cover.labels()[*a],
                cover.labels()[*b],
                base.labels()[pa]
            ));
        }
        if pa > pb {
            std::mem::swap(&mut pa, &mut pb);
        }
        if !base_edges.contains_key(&(pa, pb)) {
            return CoverVerdict::fail(format!(
                "cover edge {}-{} maps to a non-edge {}-{}",
                cover.labels()[*a],
                cover.labels()[*b],
                base.labels()[pa],
                base.labels()[pb]
            ));
        }
        *summed.entry((pa, pb)).or_insert_with(Rat::zero) += w;
    }
    for ((a, b), w) in &base_edges {
        match summed.get(&(*a, *b)) {
            None => {
                return CoverVerdict::fail(format!(
                    "base edge {}-{} has no preimage",
                    base.labels()[*a],
                    base.labels()[*b]
                ));
            }
            Some(s) if s != *w => {
                return CoverVerdict::fail(format!(
                    "base edge {}-{} has weight {} but preimages sum to {}",
                    base.labels()[*a],
                    base.labels()[*b],
                    w,
                    s
                ));
            }
            _ => {}
        }
    }
    CoverVerdict {
        ok: true,
        reason: None,
    }
}
