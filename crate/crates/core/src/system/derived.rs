//! Graphs derived from a two-layer system: the ground graph on V, the link of
//! each vertex, the non-intersecting graph on E, spheres and the opposite
//! bipartite graph.

use super::TwoLayerSystem;
use crate::graph::{BipartiteGraph, WeightedGraph};
use crate::ratio::{rat_u, Rat};
use crate::{Error, Result};
use num_traits::Zero;
use std::collections::BTreeMap;

#[derive(Debug, Clone)]
pub struct NonIntersectingGraph {
    pub graph: WeightedGraph,
    pub q_min: u64,
    pub q_max: u64,
    /// Q_min / Q_max, zero when Q_max = 0 (no non-intersecting pairs at all).
    pub r_nint: Rat,
}

#[derive(Debug, Clone)]
pub struct SphereOfVertex {
    pub center: usize,
    /// Sphere edges E_sph(v), sorted.
    pub edges: Vec<usize>,
    /// Sphere vertices: the union of the sphere edges, sorted.
    pub vertices: Vec<usize>,
    /// m_sph(v)(τ) = Σ_{σ ∋ τ, v ∈ σ} w(σ), aligned with `edges`.
    pub edge_weights: Vec<Rat>,
    /// m_sph(v)(u) = Σ_{τ ∈ E_sph(v), u ∈ τ} m_sph(v)(τ), aligned with `vertices`.
    pub vertex_weights: Vec<Rat>,
}

impl SphereOfVertex {
    pub fn contains_edge(&self, e: usize) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    pub fn edge_weight(&self, e: usize) -> Option<&Rat> {
        self.edges
            .binary_search(&e)
            .ok()
            .map(|i| &self.edge_weights[i])
    }
}

#[derive(Debug, Clone)]
pub struct SphericalVerdict {
    pub locally_spherical: bool,
    /// A violating (v, u, σ) triple when not locally spherical.
    pub counterexample: Option<(usize, usize, usize)>,
}

#[derive(Debug, Clone)]
pub struct OppositeGraph {
    pub graph: BipartiteGraph,
    /// Spectral expansion when connected; 1 otherwise (worst case).
    pub lambda: f64,
    pub connected: bool,
}

impl TwoLayerSystem {
    /// Ground graph: vertices V, an edge {u, v} whenever some τ contains both,
    /// weighted by m_gr({u, v}) = Σ_{τ ∋ u,v} w(τ).
    pub fn ground_graph(&self) -> WeightedGraph {
        let mut weights: BTreeMap<(usize, usize), Rat> = BTreeMap::new();
        for (e, members) in (0..self.edge_count()).map(|e| (e, self.edge(e))) {
            let w = self.edge_weight(e);
            for i in 0..members.len() {
                for j in i + 1..members.len() {
                    *weights
                        .entry((members[i], members[j]))
                        .or_insert_with(Rat::zero) += w;
                }
            }
        }
        let edges = weights.into_iter().map(|((a, b), w)| (a, b, w)).collect();
        let g = WeightedGraph::new(self.vertex_labels().to_vec(), edges)
            .expect("ground graph construction from a valid system");
        debug_assert!(self.ground_degree_bounds_hold(&g));
        g
    }

    fn ground_degree_bounds_hold(&self, g: &WeightedGraph) -> bool {
        // 2(k-1)·w(v) ≤ m_gr(v) ≤ s(k-1)·w(v)
        let k1 = rat_u((self.k() - 1) as u64);
        let two = rat_u(2);
        let s = rat_u(self.s() as u64);
        (0..self.vertex_count()).all(|v| {
            let m = &g.vertex_weights()[v];
            let w = self.vertex_weight(v);
            &two * &k1 * w <= *m && *m <= &s * &k1 * w
        })
    }

    /// Link of v: vertices E_v = {τ : v ∈ τ}, an edge {τ, τ'} whenever some σ
    /// contains both, weighted by m_v({τ, τ'}) = Σ_{σ ∋ τ,τ'} w(σ).
    pub fn link_graph(&self, v: usize) -> Result<WeightedGraph> {
        self.require_vertex(v)?;
        let members = self.edges_at(v);
        if members.is_empty() {
            return Err(Error::domain(format!(
                "vertex {} lies in no edge",
                self.vertex_labels()[v]
            )));
        }
        let local: BTreeMap<usize, usize> =
            members.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let labels = members
            .iter()
            .map(|&e| self.edge_labels()[e].clone())
            .collect();
        let mut weights: BTreeMap<(usize, usize), Rat> = BTreeMap::new();
        for t in self.tops_at_vertex(v) {
            let sigma = self.top(*t);
            let w = self.top_weight(*t);
            let in_link: Vec<usize> = sigma.iter().filter_map(|e| local.get(e).copied()).collect();
            for i in 0..in_link.len() {
                for j in i + 1..in_link.len() {
                    let (a, b) = (in_link[i].min(in_link[j]), in_link[i].max(in_link[j]));
                    *weights.entry((a, b)).or_insert_with(Rat::zero) += w;
                }
            }
        }
        let edges = weights.into_iter().map(|((a, b), w)| (a, b, w)).collect();
        WeightedGraph::new(labels, edges)
    }

    /// Non-intersecting graph: vertices E, an edge {τ, τ'} whenever τ ∩ τ' = ∅
    /// and some σ contains both. Also reports the per-incidence counts
    /// Q_min, Q_max and the regularity ratio R_nint.
    pub fn nonintersecting_graph(&self) -> NonIntersectingGraph {
        let mut weights: BTreeMap<(usize, usize), Rat> = BTreeMap::new();
        let mut q_min = u64::MAX;
        let mut q_max = 0u64;
        for t in 0..self.top_count() {
            let sigma = self.top(t);
            let w = self.top_weight(t);
            for (i, &e1) in sigma.iter().enumerate() {
                let mut partners = 0u64;
                for (j, &e2) in sigma.iter().enumerate() {
                    if i == j {
                        continue;
                    }
                    if self.edges_disjoint(e1, e2) {
                        partners += 1;
                        if i < j {
                            *weights
                                .entry((e1.min(e2), e1.max(e2)))
                                .or_insert_with(Rat::zero) += w;
                        }
                    }
                }
                q_min = q_min.min(partners);
                q_max = q_max.max(partners);
            }
        }
        if self.top_count() == 0 {
            q_min = 0;
        }
        if q_min == u64::MAX {
            q_min = 0;
        }
        let r_nint = if q_max == 0 {
            Rat::zero()
        } else {
            rat_u(q_min) / rat_u(q_max)
        };
        let edges = weights.into_iter().map(|((a, b), w)| (a, b, w)).collect();
        let graph = WeightedGraph::new(self.edge_labels().to_vec(), edges)
            .expect("non-intersecting graph construction from a valid system");
        NonIntersectingGraph {
            graph,
            q_min,
            q_max,
            r_nint,
        }
    }

    fn edges_disjoint(&self, e1: usize, e2: usize) -> bool {
        // Both member lists are sorted.
        let (a, b) = (self.edge(e1), self.edge(e2));
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return false,
            }
        }
        true
    }

    /// Sphere of v: the τ with v ∉ τ, every u ∈ τ co-occurring with v in some
    /// τ', and some σ containing both v and τ.
    pub fn sphere_of_vertex(&self, v: usize) -> Result<SphereOfVertex> {
        self.require_vertex(v)?;
        let mut neighbor = vec![false; self.vertex_count()];
        for &e in self.edges_at(v) {
            for &u in self.edge(e) {
                neighbor[u] = true;
            }
        }
        let mut edges = Vec::new();
        let mut edge_weights = Vec::new();
        // Candidates: edges of the σ's covering v.
        let mut seen = vec![false; self.edge_count()];
        for &t in self.tops_at_vertex(v) {
            for &e in self.top(t) {
                if seen[e] {
                    continue;
                }
                seen[e] = true;
                if self.edge_contains(e, v) {
                    continue;
                }
                if !self.edge(e).iter().all(|&u| neighbor[u]) {
                    continue;
                }
                // Weight: Σ over σ containing τ with v ∈ σ.
                let mut w = Rat::zero();
                for &t2 in self.tops_of_edge(e) {
                    if self.tops_at_vertex(v).binary_search(&t2).is_ok() {
                        w += self.top_weight(t2);
                    }
                }
                edges.push(e);
                edge_weights.push(w);
            }
        }
        let order: Vec<usize> = {
            let mut idx: Vec<usize> = (0..edges.len()).collect();
            idx.sort_by_key(|&i| edges[i]);
            idx
        };
        let edges: Vec<usize> = order.iter().map(|&i| edges[i]).collect();
        let edge_weights: Vec<Rat> = order.iter().map(|&i| edge_weights[i].clone()).collect();

        let mut vertex_set: Vec<usize> = edges
            .iter()
            .flat_map(|&e| self.edge(e).iter().copied())
            .collect();
        vertex_set.sort_unstable();
        vertex_set.dedup();
        let mut vertex_weights = vec![Rat::zero(); vertex_set.len()];
        for (i, &e) in edges.iter().enumerate() {
            for &u in self.edge(e) {
                let pos = vertex_set.binary_search(&u).expect("member of the union");
                vertex_weights[pos] += &edge_weights[i];
            }
        }
        Ok(SphereOfVertex {
            center: v,
            edges,
            vertices: vertex_set,
            edge_weights,
            vertex_weights,
        })
    }

    /// Locally spherical: for every σ and every pair of distinct covered
    /// vertices v, u there is τ ∈ E_sph(v) ∩ σ with u ∈ τ.
    pub fn is_locally_spherical(&self) -> SphericalVerdict {
        let spheres: Vec<SphereOfVertex> = (0..self.vertex_count())
            .map(|v| self.sphere_of_vertex(v).expect("valid vertex"))
            .collect();
        for t in 0..self.top_count() {
            let sigma = self.top(t);
            let mut covered: Vec<usize> = sigma
                .iter()
                .flat_map(|&e| self.edge(e).iter().copied())
                .collect();
            covered.sort_unstable();
            covered.dedup();
            for &v in &covered {
                for &u in &covered {
                    if u == v {
                        continue;
                    }
                    let ok = sigma
                        .iter()
                        .any(|&e| spheres[v].contains_edge(e) && self.edge_contains(e, u));
                    if !ok {
                        return SphericalVerdict {
                            locally_spherical: false,
                            counterexample: Some((v, u, t)),
                        };
                    }
                }
            }
        }
        SphericalVerdict {
            locally_spherical: true,
            counterexample: None,
        }
    }

    /// Opposite graph: bipartite on V ∪ E with {v, τ} an edge iff τ ∈ E_sph(v),
    /// weighted by m_opp({v, τ}) = Σ_{σ ∋ v, τ ∈ σ} w(σ). λ_opp is the spectral
    /// expansion when connected and 1 otherwise.
    pub fn opposite_graph(&self) -> OppositeGraph {
        let mut edges = Vec::new();
        for v in 0..self.vertex_count() {
            let sphere = self.sphere_of_vertex(v).expect("valid vertex");
            for (i, &e) in sphere.edges.iter().enumerate() {
                edges.push((v, e, sphere.edge_weights[i].clone()));
            }
        }
        let graph = BipartiteGraph::new(
            self.vertex_labels().to_vec(),
            self.edge_labels().to_vec(),
            edges,
        )
        .expect("opposite graph construction from a valid system");
        let connected = graph.is_connected();
        let lambda = if connected {
            graph
                .spectral_expansion(crate::graph::DEFAULT_SPECTRAL_CAP)
                .unwrap_or(1.0)
        } else {
            1.0
        };
        OppositeGraph {
            graph,
            lambda,
            connected,
        }
    }
}
