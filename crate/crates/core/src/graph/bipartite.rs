//! Bipartite weighted graphs and the two sampling bounds used by the
//! sphere machinery: the deviation bound m(N(U)_{≥α}) ≤ (λ²/α²)·m(U) and the
//! covered-mass bound m(U)/m(W) ≤ (4/3δ)·(2λ/√δ + m(U)/m(V₁)).

use super::{WeightedGraph, SPECTRAL_GUARD};
use crate::ratio::{rat_to_f64, Rat};
use crate::{Error, Result};
use num_traits::{Signed, Zero};

/// A weighted bipartite graph. Left vertices are indexed 0..left_count and
/// right vertices 0..right_count; internally they live in one graph with the
/// right side offset by left_count.
#[derive(Debug, Clone)]
pub struct BipartiteGraph {
    graph: WeightedGraph,
    left_count: usize,
    right_count: usize,
}

impl BipartiteGraph {
    /// Edges are (left index, right index, weight).
    pub fn new(
        left_labels: Vec<String>,
        right_labels: Vec<String>,
        edges: Vec<(usize, usize, Rat)>,
    ) -> Result<Self> {
        let left_count = left_labels.len();
        let right_count = right_labels.len();
        for &(l, r, _) in &edges {
            if l >= left_count {
                return Err(Error::domain(format!("unknown left vertex {l}")));
            }
            if r >= right_count {
                return Err(Error::domain(format!("unknown right vertex {r}")));
            }
        }
        let labels: Vec<String> = left_labels.into_iter().chain(right_labels).collect();
        let shifted = edges
            .into_iter()
            .map(|(l, r, w)| (l, left_count + r, w))
            .collect();
        Ok(BipartiteGraph {
            graph: WeightedGraph::new(labels, shifted)?,
            left_count,
            right_count,
        })
    }

    pub fn graph(&self) -> &WeightedGraph {
        &self.graph
    }

    pub fn left_count(&self) -> usize {
        self.left_count
    }

    pub fn right_count(&self) -> usize {
        self.right_count
    }

    pub fn right_global(&self, r: usize) -> usize {
        self.left_count + r
    }

    pub fn is_connected(&self) -> bool {
        self.graph.is_connected()
    }

    pub fn left_weight(&self) -> Rat {
        (0..self.left_count)
            .map(|v| self.graph.vertex_weights()[v].clone())
            .sum()
    }

    /// Spectral expansion: the largest |eigenvalue| of the walk outside the
    /// two-dimensional span of the side indicators (eigenvalues ±1).
    pub fn spectral_expansion(&self, cap: usize) -> Result<f64> {
        let spectrum = self.graph.walk_spectrum(cap)?;
        let n = spectrum.len();
        if n <= 2 {
            return Ok(0.0);
        }
        // Connected bipartite: spectrum is symmetric with simple ±1 at the ends.
        Ok(spectrum[1].abs().max(spectrum[n - 2].abs()))
    }

    // Canonical edge order puts the left endpoint first, so scanning b == v
    // finds every U-edge at a right vertex.
    fn u_edge_weight_at(&self, in_u: &[bool], v_global: usize) -> Rat {
        let mut total = Rat::zero();
        for (a, b, w) in self.graph.edges() {
            if *b == v_global && in_u[*a] {
                total += w;
            }
        }
        total
    }

    /// Sampling lemma: returns the right vertices of N(U) whose local
    /// U-fraction deviates from m(U)/m(V₁) by at least α, and checks
    /// m(N(U)_{≥α}) ≤ (λ²/α²)·m(U).
    pub fn sampling_deviation(
        &self,
        u: &[usize],
        alpha: &Rat,
        cap: usize,
    ) -> Result<SamplingReport> {
        if u.is_empty() {
            return Err(Error::domain("sampling deviation of empty U".to_string()));
        }
        if *alpha <= Rat::zero() || *alpha >= crate::ratio::rat_int(1) {
            return Err(Error::domain(
                "alpha must lie strictly between 0 and 1".to_string(),
            ));
        }
        for &v in u {
            if v >= self.left_count {
                return Err(Error::domain(format!("U member {v} is not a left vertex")));
            }
        }
        let lambda = self.spectral_expansion(cap)?;
        let mut in_u = vec![false; self.left_count];
        for &v in u {
            in_u[v] = true;
        }
        let m_u: Rat = (0..self.left_count)
            .filter(|&v| in_u[v])
            .map(|v| self.graph.vertex_weights()[v].clone())
            .sum();
        let baseline = &m_u / self.left_weight();

        let mut deviating = Vec::new();
        let mut deviating_mass = Rat::zero();
        for r in 0..self.right_count {
            let g = self.right_global(r);
            let local = self.u_edge_weight_at(&in_u, g);
            if local.is_zero() {
                continue; // not in N(U)
            }
            let m_v = &self.graph.vertex_weights()[g];
            let ratio = local / m_v;
            if (ratio - &baseline).abs() >= *alpha {
                deviating.push(r);
                deviating_mass += m_v;
            }
        }
        let alpha_f = rat_to_f64(alpha);
        let bound = lambda * lambda / (alpha_f * alpha_f) * rat_to_f64(&m_u);
        let holds = rat_to_f64(&deviating_mass) <= bound + SPECTRAL_GUARD;
        Ok(SamplingReport {
            deviating,
            deviating_mass,
            bound,
            lambda,
            holds,
        })
    }

    /// Covered-mass bound: requires every u ∈ U to place at least a δ-fraction
    /// of its weight on W, then checks m(U)/m(W) ≤ (4/3δ)(2λ/√δ + m(U)/m(V₁)).
    pub fn covered_mass_bound(
        &self,
        u: &[usize],
        w_set: &[usize],
        delta: &Rat,
        cap: usize,
    ) -> Result<CoveredMassReport> {
        if u.is_empty() || w_set.is_empty() {
            return Err(Error::domain(
                "covered mass bound needs non-empty U and W".to_string(),
            ));
        }
        if *delta <= Rat::zero() || *delta > crate::ratio::rat_int(1) {
            return Err(Error::domain("delta must lie in (0, 1]".to_string()));
        }
        let mut in_w = vec![false; self.right_count];
        for &r in w_set {
            if r >= self.right_count {
                return Err(Error::domain(format!("W member {r} is not a right vertex")));
            }
            in_w[r] = true;
        }
        // Precondition: the W-fraction at every u is at least delta.
        for &lu in u {
            if lu >= self.left_count {
                return Err(Error::domain(format!("U member {lu} is not a left vertex")));
            }
            let mut on_w = Rat::zero();
            for (a, b, wt) in self.graph.edges() {
                if *a == lu && in_w[*b - self.left_count] {
                    on_w += wt;
                }
            }
            let m_u = &self.graph.vertex_weights()[lu];
            if m_u.is_zero() || &on_w / m_u < *delta {
                return Err(Error::precondition(format!(
                    "vertex {} has W-fraction below delta",
                    self.graph.labels()[lu]
                )));
            }
        }
        let lambda = self.spectral_expansion(cap)?;
        let m_u: Rat = u
            .iter()
            .map(|&v| self.graph.vertex_weights()[v].clone())
            .sum();
        let m_w: Rat = w_set
            .iter()
            .map(|&r| self.graph.vertex_weights()[self.right_global(r)].clone())
            .sum();
        let lhs = &m_u / &m_w;
        let delta_f = rat_to_f64(delta);
        let rhs = 4.0 / (3.0 * delta_f)
            * (2.0 * lambda / delta_f.sqrt() + rat_to_f64(&(&m_u / self.left_weight())));
        let holds = rat_to_f64(&lhs) <= rhs + SPECTRAL_GUARD;
        Ok(CoveredMassReport {
            lhs,
            rhs,
            lambda,
            holds,
        })
    }
}

#[derive(Debug, Clone)]
pub struct SamplingReport {
    /// Right-side indices whose U-fraction deviates by at least alpha.
    pub deviating: Vec<usize>,
    pub deviating_mass: Rat,
    pub bound: f64,
    pub lambda: f64,
    pub holds: bool,
}

#[derive(Debug, Clone)]
pub struct CoveredMassReport {
    pub lhs: Rat,
    pub rhs: f64,
    pub lambda: f64,
    pub holds: bool,
}
