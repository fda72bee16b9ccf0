//! Sphere codes, extendibility, and the experimental sphere-based corrector
//! for systems with s ≥ 3.

use super::{LinearCodeModel, Word};
use crate::ratio::{rat_to_f64, Rat};
use crate::system::SphereOfVertex;
use crate::{Error, Result};
use num_traits::Zero;
use std::collections::BTreeMap;

/// The restriction code on the sphere of a vertex: rows whose support lies in
/// E_sph(v), carrying the sphere weight function.
#[derive(Debug, Clone)]
pub struct SphereCode {
    pub center: usize,
    /// Row indices (into the parent code) whose support is a sphere edge.
    pub rows: Vec<usize>,
    pub sphere: SphereOfVertex,
}

impl LinearCodeModel {
    pub fn sphere_code(&self, v: usize) -> Result<SphereCode> {
        let sphere = self.system().sphere_of_vertex(v)?;
        let rows = sphere.edges.iter().map(|&e| self.row_of_edge(e)).collect();
        Ok(SphereCode {
            center: v,
            rows,
            sphere,
        })
    }

    /// Whether the partial word (on V_sph(v)) satisfies every sphere row.
    pub fn sphere_word_in_code(
        &self,
        sc: &SphereCode,
        values: &BTreeMap<usize, u64>,
    ) -> Result<bool> {
        let f = self.field();
        for &r in &sc.rows {
            let row = &self.rows()[r];
            let mut acc = 0u64;
            for (i, &u) in row.support.iter().enumerate() {
                let Some(&val) = values.get(&u) else {
                    return Err(Error::domain(format!(
                        "sphere word misses coordinate {}",
                        self.system().vertex_labels()[u]
                    )));
                };
                acc = f.add(acc, f.mul(row.coeffs[i], val));
            }
            if acc != 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Extendibility: the smallest a ∈ F_p whose extension of the sphere word
    /// satisfies every row through v, or None. The sphere word must lie in
    /// the sphere code (precondition) and cover the support of every row
    /// through v apart from v itself (domain).
    pub fn check_extendibility(
        &self,
        v: usize,
        values: &BTreeMap<usize, u64>,
    ) -> Result<Option<u64>> {
        let sc = self.sphere_code(v)?;
        if !self.sphere_word_in_code(&sc, values)? {
            return Err(Error::precondition(
                "sphere word is not a sphere codeword".to_string(),
            ));
        }
        let f = self.field();
        'symbol: for a in 0..f.p {
            for &e in self.system().edges_at(v) {
                let row = &self.rows()[self.row_of_edge(e)];
                let mut acc = 0u64;
                for (i, &u) in row.support.iter().enumerate() {
                    let val = if u == v {
                        a
                    } else {
                        match values.get(&u) {
                            Some(&x) => x,
                            None => {
                                return Err(Error::domain(format!(
                                    "row through {} leaves the sphere domain at {}",
                                    self.system().vertex_labels()[v],
                                    self.system().vertex_labels()[u]
                                )));
                            }
                        }
                    };
                    acc = f.add(acc, f.mul(row.coeffs[i], val));
                }
                if acc != 0 {
                    continue 'symbol;
                }
            }
            return Ok(Some(a));
        }
        Ok(None)
    }

    /// Experimental sphere-based correction for locally spherical systems.
    /// Iteratively revisits the smallest-index vertex whose sphere is
    /// δ-spherically small but whose link is δ-large, replacing its symbol by
    /// a sphere-consistent extension when one exists. No theorem-level
    /// guarantee is claimed; the report records what happened.
    pub fn sphere_correct_experimental(
        &self,
        w: &Word,
        delta: &Rat,
    ) -> Result<(Word, SphereCorrectionReport)> {
        let x = self.system();
        if !x.is_locally_spherical().locally_spherical {
            return Err(Error::domain(
                "sphere correction requires a locally spherical system".to_string(),
            ));
        }
        let mut current = w.clone();
        let mut corrections = Vec::new();
        let max_iters = x.vertex_count() * self.p() as usize;
        'outer: for _ in 0..max_iters {
            let mut in_a = vec![false; x.edge_count()];
            for e in self.violated_edges(&current)? {
                in_a[e] = true;
            }
            for v in 0..x.vertex_count() {
                let sphere = x.sphere_of_vertex(v)?;
                let mut on_a = Rat::zero();
                let mut m_opp = Rat::zero();
                for (i, &e) in sphere.edges.iter().enumerate() {
                    m_opp += &sphere.edge_weights[i];
                    if in_a[e] {
                        on_a += &sphere.edge_weights[i];
                    }
                }
                let sphere_small = m_opp.is_zero() || &on_a / &m_opp < *delta;
                if !sphere_small {
                    continue;
                }
                let link_fraction = self.violated_link_fraction(&current, v)?;
                if link_fraction < *delta {
                    continue;
                }
                // Candidate vertex: try a sphere-consistent replacement.
                let values: BTreeMap<usize, u64> =
                    sphere.vertices.iter().map(|&u| (u, current.0[u])).collect();
                let sc = self.sphere_code(v)?;
                if !self.sphere_word_in_code(&sc, &values)? {
                    continue;
                }
                match self.check_extendibility(v, &values)? {
                    Some(a) if a != current.0[v] => {
                        current.0[v] = a;
                        corrections.push(v);
                        continue 'outer;
                    }
                    _ => continue,
                }
            }
            break;
        }
        let violated = self.violated_edges(&current)?;
        let locally_small = if violated.is_empty() {
            true
        } else {
            crate::expansion::classify_locally_small(x, &violated, delta, &Rat::zero())?
                .is_locally_small
        };
        let is_codeword = violated.is_empty();
        let rej = self.rej(&current)?;
        let report = SphereCorrectionReport {
            corrections,
            final_rej: rat_to_f64(&rej),
            final_locally_small: locally_small,
            final_in_code: is_codeword,
        };
        Ok((current, report))
    }
}

#[derive(Debug, Clone)]
pub struct SphereCorrectionReport {
    /// Vertices corrected, in order.
    pub corrections: Vec<usize>,
    pub final_rej: f64,
    pub final_locally_small: bool,
    pub final_in_code: bool,
}
