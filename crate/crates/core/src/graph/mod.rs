//! Weighted graphs with exact-rational weights: Cheeger constants, random-walk
//! spectra, expander certificates, sampling bounds, and weak covers.

mod bipartite;
mod cover;
mod spectral;

pub use bipartite::{BipartiteGraph, CoveredMassReport, SamplingReport};
pub use cover::{check_weak_cover, CoverVerdict};

use crate::ratio::{rat_int, rat_to_f64, Rat};
use crate::{Error, Result};
use num_traits::Zero;

/// Exhaustive Cheeger scans are capped at this vertex count (2^20 subsets).
pub const DEFAULT_CHEEGER_CAP: usize = 20;
/// Dense eigensolves are capped at this vertex count.
pub const DEFAULT_SPECTRAL_CAP: usize = 4000;
/// Guard band subtracted from the allowance in float certificate comparisons.
pub const SPECTRAL_GUARD: f64 = 1e-9;

/// An undirected weighted graph. Weights are positive rationals; vertices are
/// indexed and carry display labels. Isolated vertices are allowed (derived
/// graphs need them) but rejected by the Cheeger and spectral operations.
#[derive(Debug, Clone)]
pub struct WeightedGraph {
    labels: Vec<String>,
    edges: Vec<(usize, usize, Rat)>,
    adj: Vec<Vec<(usize, usize)>>, // vertex -> (neighbor, edge index)
    vertex_weights: Vec<Rat>,
    total_weight: Rat,
}

impl WeightedGraph {
    /// Builds a graph from labels and weighted edges. Rejects self-loops,
    /// duplicate edges, and non-positive weights.
    pub fn new(labels: Vec<String>, edges: Vec<(usize, usize, Rat)>) -> Result<Self> {
        let n = labels.len();
        let mut seen = std::collections::HashSet::new();
        let mut canon = Vec::with_capacity(edges.len());
        for (a, b, w) in edges {
            if a >= n || b >= n {
                return Err(Error::domain(format!(
                    "edge ({a},{b}) references unknown vertex"
                )));
            }
            if a == b {
                return Err(Error::domain(format!("self-loop at vertex {}", labels[a])));
            }
            if w <= Rat::zero() {
                return Err(Error::domain(format!(
                    "non-positive weight on edge {}-{}",
                    labels[a], labels[b]
                )));
            }
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            if !seen.insert((lo, hi)) {
                return Err(Error::domain(format!(
                    "duplicate edge {}-{}",
                    labels[lo], labels[hi]
                )));
            }
            canon.push((lo, hi, w));
        }
        canon.sort_by_key(|x| (x.0, x.1));
        let mut adj = vec![Vec::new(); n];
        let mut vertex_weights = vec![Rat::zero(); n];
        for (idx, (a, b, w)) in canon.iter().enumerate() {
            adj[*a].push((*b, idx));
            adj[*b].push((*a, idx));
            vertex_weights[*a] += w;
            vertex_weights[*b] += w;
        }
        let total_weight = vertex_weights.iter().sum();
        Ok(WeightedGraph {
            labels,
            edges: canon,
            adj,
            vertex_weights,
            total_weight,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn edges(&self) -> &[(usize, usize, Rat)] {
        &self.edges
    }

    /// m(v): sum of incident edge weights; zero only for isolated vertices.
    pub fn vertex_weight(&self, v: usize) -> Result<&Rat> {
        self.vertex_weights
            .get(v)
            .ok_or_else(|| Error::domain(format!("unknown vertex index {v}")))
    }

    pub fn vertex_weights(&self) -> &[Rat] {
        &self.vertex_weights
    }

    /// m(V) = sum of all vertex weights (each edge counted at both ends).
    pub fn total_weight(&self) -> &Rat {
        &self.total_weight
    }

    pub fn set_weight(&self, set: &[usize]) -> Rat {
        set.iter().map(|&v| self.vertex_weights[v].clone()).sum()
    }

    /// m(U1, U2): sum over ordered pairs (u1, u2) with {u1, u2} an edge.
    /// Internal edges of U1 ∩ U2 are counted in both orders.
    pub fn boundary_weight(&self, u1: &[usize], u2: &[usize]) -> Result<Rat> {
        if u1.is_empty() || u2.is_empty() {
            return Err(Error::domain("boundary weight of an empty set".to_string()));
        }
        let n = self.vertex_count();
        for &v in u1.iter().chain(u2) {
            if v >= n {
                return Err(Error::domain(format!("unknown vertex index {v}")));
            }
        }
        let mut in1 = vec![false; n];
        let mut in2 = vec![false; n];
        for &v in u1 {
            in1[v] = true;
        }
        for &v in u2 {
            in2[v] = true;
        }
        let mut total = Rat::zero();
        for (a, b, w) in &self.edges {
            if in1[*a] && in2[*b] {
                total += w;
            }
            if in1[*b] && in2[*a] {
                total += w;
            }
        }
        Ok(total)
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        if n == 0 {
            return false;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &(u, _) in &self.adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    count += 1;
                    stack.push(u);
                }
            }
        }
        count == n
    }

    fn require_positive_vertex_weights(&self) -> Result<()> {
        for (v, w) in self.vertex_weights.iter().enumerate() {
            if w.is_zero() {
                return Err(Error::domain(format!(
                    "vertex {} is isolated (zero weight)",
                    self.labels[v]
                )));
            }
        }
        Ok(())
    }

    /// Generalized Cheeger constant, exhaustive over all 2^n - 2 cuts:
    /// min over U of m(U, V∖U)·m(V) / (m(U)·m(V∖U)). Always ≤ 2; zero iff
    /// disconnected. Ties break to the lexicographically smallest witness U.
    pub fn cheeger_constant(&self, cap: usize) -> Result<(Rat, Vec<usize>)> {
        let n = self.vertex_count();
        if n < 2 {
            return Err(Error::domain(
                "Cheeger constant needs at least 2 vertices".to_string(),
            ));
        }
        if n > cap || n > 62 {
            return Err(Error::capacity(format!(
                "exhaustive Cheeger cap {} exceeded by {n} vertices",
                cap.min(62)
            )));
        }
        self.require_positive_vertex_weights()?;
        let mut best: Option<(Rat, Vec<usize>)> = None;
        let full: u64 = (1u64 << n) - 1;
        for mask in 1..full {
            let mut m_u = Rat::zero();
            for v in 0..n {
                if mask >> v & 1 == 1 {
                    m_u += &self.vertex_weights[v];
                }
            }
            let m_rest = &self.total_weight - &m_u;
            let mut cut = Rat::zero();
            for (a, b, w) in &self.edges {
                if (mask >> a & 1) != (mask >> b & 1) {
                    cut += w;
                }
            }
            let ratio = cut * &self.total_weight / (m_u * m_rest);
            let witness = || (0..n).filter(|v| mask >> v & 1 == 1).collect::<Vec<_>>();
            match &mut best {
                None => best = Some((ratio, witness())),
                Some((b, bw)) => {
                    if ratio < *b {
                        *b = ratio;
                        *bw = witness();
                    } else if ratio == *b {
                        let w = witness();
                        if w < *bw {
                            *bw = w;
                        }
                    }
                }
            }
        }
        Ok(best.expect("n >= 2 yields at least one cut"))
    }

    /// Second-largest eigenvalue of the weighted random walk, via the
    /// symmetrized operator D^{-1/2} A D^{-1/2}. Requires connectivity.
    pub fn second_eigenvalue(&self, cap: usize) -> Result<f64> {
        let spectrum = self.walk_spectrum(cap)?;
        if spectrum.len() < 2 {
            return Err(Error::domain(
                "second eigenvalue needs at least 2 vertices".to_string(),
            ));
        }
        Ok(spectrum[1])
    }

    /// Full random-walk spectrum, descending. Requires connectivity.
    pub fn walk_spectrum(&self, cap: usize) -> Result<Vec<f64>> {
        let n = self.vertex_count();
        if n > cap {
            return Err(Error::capacity(format!(
                "spectral cap {cap} exceeded by {n} vertices"
            )));
        }
        if !self.is_connected() {
            return Err(Error::domain(
                "graph is disconnected (eigenvalue 1 has multiplicity > 1)".to_string(),
            ));
        }
        self.require_positive_vertex_weights()?;
        Ok(spectral::walk_spectrum(self))
    }

    /// λ-expander test per the disjunctive definition: connected and either
    /// 1 - h_G ≤ λ (exact, within the Cheeger cap) or λ₂ ≤ λ (spectral
    /// fallback, sound by the Cheeger inequality).
    pub fn is_lambda_expander(&self, lambda: &Rat, limits: &GraphLimits) -> ExpanderVerdict {
        let n = self.vertex_count();
        if n == 0 {
            return ExpanderVerdict {
                passed: false,
                certificate: ExpanderCertificate::Disconnected,
            };
        }
        if n == 1 {
            // No cuts exist; a single vertex expands vacuously.
            return ExpanderVerdict {
                passed: true,
                certificate: ExpanderCertificate::Trivial,
            };
        }
        if !self.is_connected() {
            return ExpanderVerdict {
                passed: false,
                certificate: ExpanderCertificate::Disconnected,
            };
        }
        if n <= limits.cheeger_cap {
            let (h, witness) = self
                .cheeger_constant(limits.cheeger_cap)
                .expect("connected graph within cap");
            let passed = rat_int(1) - &h <= *lambda;
            return ExpanderVerdict {
                passed,
                certificate: ExpanderCertificate::Cheeger { h, witness },
            };
        }
        match self.second_eigenvalue(limits.spectral_cap) {
            Ok(lambda2) => ExpanderVerdict {
                passed: lambda2 + SPECTRAL_GUARD <= rat_to_f64(lambda),
                certificate: ExpanderCertificate::Spectral { lambda2 },
            },
            Err(_) => ExpanderVerdict {
                passed: false,
                certificate: ExpanderCertificate::TooLarge,
            },
        }
    }

    /// Alon–Chung inequality m(U)·(λ + (1-λ)·m(U)/m(V)) ≥ m(U, U) with λ the
    /// second walk eigenvalue. Returns both sides; the left side is float.
    pub fn alon_chung_check(&self, u: &[usize], cap: usize) -> Result<AlonChungReport> {
        let n = self.vertex_count();
        if u.is_empty() || u.len() >= n {
            return Err(Error::domain(
                "Alon-Chung needs a non-empty proper vertex subset".to_string(),
            ));
        }
        let lambda = self.second_eigenvalue(cap)?;
        let m_u = self.set_weight(u);
        let m_uu = self.boundary_weight(u, u)?;
        let frac = rat_to_f64(&(&m_u / &self.total_weight));
        let lhs = rat_to_f64(&m_u) * (lambda + (1.0 - lambda) * frac);
        let rhs = rat_to_f64(&m_uu);
        Ok(AlonChungReport {
            lambda,
            lhs,
            rhs: m_uu,
            holds: lhs + SPECTRAL_GUARD >= rhs,
        })
    }

    /// Least β ∈ [0, 1) with m(v) ≥ (max_e m(e))·(1-β)·|V| for every vertex,
    /// and the implied guarantee h_G ≥ 1 - 2β. `None` when no β < 1 works.
    pub fn almost_complete_bound(&self) -> Option<(Rat, Rat)> {
        let max_edge = self.edges.iter().map(|(_, _, w)| w).max()?;
        let n = rat_int(self.vertex_count() as i64);
        let mut beta = Rat::zero();
        for w in &self.vertex_weights {
            // m(v) ≥ max·(1-β)·n  ⇔  β ≥ 1 - m(v)/(max·n)
            let needed = rat_int(1) - w / (max_edge * &n);
            if needed > beta {
                beta = needed;
            }
        }
        if beta >= rat_int(1) {
            return None;
        }
        let guarantee = rat_int(1) - rat_int(2) * &beta;
        Some((beta, guarantee))
    }
}

/// Capacity limits for certificate computations.
#[derive(Debug, Clone, Copy)]
pub struct GraphLimits {
    pub cheeger_cap: usize,
    pub spectral_cap: usize,
}

impl Default for GraphLimits {
    fn default() -> Self {
        GraphLimits {
            cheeger_cap: DEFAULT_CHEEGER_CAP,
            spectral_cap: DEFAULT_SPECTRAL_CAP,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExpanderVerdict {
    pub passed: bool,
    pub certificate: ExpanderCertificate,
}

#[derive(Debug, Clone)]
pub enum ExpanderCertificate {
    /// Exact Cheeger certificate with the minimizing cut.
    Cheeger {
        h: Rat,
        witness: Vec<usize>,
    },
    /// Spectral certificate (guard band applied).
    Spectral {
        lambda2: f64,
    },
    /// Single-vertex graph; no cuts exist.
    Trivial,
    Disconnected,
    TooLarge,
}

impl ExpanderVerdict {
    pub fn reason(&self) -> String {
        match &self.certificate {
            ExpanderCertificate::Cheeger { h, .. } => format!("cheeger h={h}"),
            ExpanderCertificate::Spectral { lambda2 } => format!("spectral lambda2={lambda2}"),
            ExpanderCertificate::Trivial => "single vertex".to_string(),
            ExpanderCertificate::Disconnected => "disconnected".to_string(),
            ExpanderCertificate::TooLarge => "beyond certificate caps".to_string(),
        }
    }

    /// Measured expansion h: exact Cheeger when available, else 1 - λ₂.
    pub fn measured_h(&self) -> Option<f64> {
        match &self.certificate {
            ExpanderCertificate::Cheeger { h, .. } => Some(rat_to_f64(h)),
            ExpanderCertificate::Spectral { lambda2 } => Some(1.0 - lambda2),
            ExpanderCertificate::Trivial => Some(2.0),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct AlonChungReport {
    pub lambda: f64,
    pub lhs: f64,
    pub rhs: Rat,
    pub holds: bool,
}
