//! (s,k,K)-two-layer systems: a vertex set V, a family E of k-subsets of V,
//! and a family T of K-subsets of E carrying positive rational weights, with
//! every vertex covered by a σ ∈ T appearing in between 2 and s of its members.

mod derived;
mod simplicial;

pub use derived::{NonIntersectingGraph, OppositeGraph, SphereOfVertex, SphericalVerdict};
pub use simplicial::{complete_complex_triangles, from_simplicial_complex};

use crate::ratio::Rat;
use crate::{Error, Result};
use num_traits::Zero;
use std::collections::{HashMap, HashSet};

/// Raw, unvalidated system data as read from a file or assembled by a builder.
#[derive(Debug, Clone)]
pub struct SystemData {
    pub vertex_labels: Vec<String>,
    pub edge_labels: Vec<String>,
    /// Each edge is a list of vertex indices (deduplicated, any order).
    pub edges: Vec<Vec<usize>>,
    /// Each top element is (weight, list of edge indices).
    pub tops: Vec<(Rat, Vec<usize>)>,
    /// Parameters to cross-check against the inferred ones, when declared.
    pub declared: Option<(usize, usize, usize)>,
}

#[derive(Debug, Clone)]
pub struct SystemValidation {
    pub valid: bool,
    /// At most the first 10 violations, in discovery order.
    pub violations: Vec<String>,
}

/// A validated two-layer system with precomputed incidences and induced
/// weights. Immutable after construction.
#[derive(Debug, Clone)]
pub struct TwoLayerSystem {
    vertex_labels: Vec<String>,
    edge_labels: Vec<String>,
    edges: Vec<Vec<usize>>, // sorted vertex ids
    tops: Vec<Vec<usize>>,  // sorted edge ids
    top_weights: Vec<Rat>,
    s: usize,
    k: usize,
    big_k: usize,
    vertex_edges: Vec<Vec<usize>>, // v -> incident τ ids, sorted
    edge_tops: Vec<Vec<usize>>,    // τ -> σ ids containing it, sorted
    vertex_tops: Vec<Vec<usize>>,  // v -> σ ids covering it, sorted
    edge_weights: Vec<Rat>,        // w(τ) = Σ_{σ ∋ τ} w(σ)
    vertex_weights: Vec<Rat>,      // w(v) = Σ_{σ ∋ v} w(σ)
}

pub fn validate_system(data: &SystemData) -> SystemValidation {
    let mut violations = Vec::new();
    let push = |violations: &mut Vec<String>, msg: String| {
        if violations.len() < 10 {
            violations.push(msg);
        }
    };

    let nv = data.vertex_labels.len();
    let ne = data.edges.len();

    if ne == 0 {
        push(&mut violations, "E is empty".to_string());
    }
    if data.tops.is_empty() {
        push(&mut violations, "T is empty".to_string());
    }

    // Clause: every τ is a k-subset of V; E is a set.
    let k = data.edges.first().map_or(0, |e| e.len());
    let mut edge_sets: HashSet<Vec<usize>> = HashSet::new();
    let mut covered_v = vec![false; nv];
    for (i, e) in data.edges.iter().enumerate() {
        let name = data
            .edge_labels
            .get(i)
            .cloned()
            .unwrap_or_else(|| format!("edge#{i}"));
        let mut sorted = e.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != e.len() {
            push(&mut violations, format!("edge {name} repeats a vertex"));
        }
        if e.iter().any(|&v| v >= nv) {
            push(
                &mut violations,
                format!("edge {name} references an unknown vertex"),
            );
            continue;
        }
        if e.len() != k {
            push(
                &mut violations,
                format!("edge {name} has {} vertices, expected k={k}", e.len()),
            );
        }
        for &v in &sorted {
            covered_v[v] = true;
        }
        if !edge_sets.insert(sorted) {
            push(
                &mut violations,
                format!("edge {name} duplicates another edge"),
            );
        }
    }
    for (v, c) in covered_v.iter().enumerate() {
        if !c {
            push(
                &mut violations,
                format!("vertex {} is not covered by E", data.vertex_labels[v]),
            );
        }
    }

    // Clause: every σ is a K-subset of E; T is a set; weights positive.
    let big_k = data.tops.first().map_or(0, |(_, t)| t.len());
    let mut top_sets: HashSet<Vec<usize>> = HashSet::new();
    let mut covered_e = vec![false; ne];
    for (i, (w, t)) in data.tops.iter().enumerate() {
        if *w <= Rat::zero() {
            push(&mut violations, format!("top#{i} has non-positive weight"));
        }
        let mut sorted = t.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != t.len() {
            push(&mut violations, format!("top#{i} repeats an edge"));
        }
        if t.iter().any(|&e| e >= ne) {
            push(
                &mut violations,
                format!("top#{i} references an unknown edge"),
            );
            continue;
        }
        if t.len() != big_k {
            push(
                &mut violations,
                format!("top#{i} has {} edges, expected K={big_k}", t.len()),
            );
        }
        for &e in &sorted {
            covered_e[e] = true;
        }
        if !top_sets.insert(sorted) {
            push(
                &mut violations,
                format!("top#{i} duplicates another top element"),
            );
        }
        // Clause: within σ, every covered vertex lies in at least 2 members.
        let mut mult: HashMap<usize, usize> = HashMap::new();
        for &e in t {
            if let Some(edge) = data.edges.get(e) {
                for &v in edge {
                    *mult.entry(v).or_insert(0) += 1;
                }
            }
        }
        for (&v, &m) in mult.iter() {
            if m < 2 {
                push(
                    &mut violations,
                    format!(
                        "top#{i} covers vertex {} only {m} time(s), minimum is 2",
                        data.vertex_labels.get(v).cloned().unwrap_or_default()
                    ),
                );
            }
        }
    }
    for (e, c) in covered_e.iter().enumerate() {
        if !c {
            push(
                &mut violations,
                format!(
                    "edge {} is not covered by T",
                    data.edge_labels
                        .get(e)
                        .cloned()
                        .unwrap_or_else(|| format!("edge#{e}"))
                ),
            );
        }
    }

    // The inferred s is the maximal per-(σ, v) multiplicity.
    if let Some((ds, dk, dkk)) = data.declared {
        let s = inferred_s(data);
        if s != 0 && ds != s {
            push(
                &mut violations,
                format!("declared s={ds} but inferred s={s}"),
            );
        }
        if dk != k {
            push(
                &mut violations,
                format!("declared k={dk} but inferred k={k}"),
            );
        }
        if dkk != big_k {
            push(
                &mut violations,
                format!("declared K={dkk} but inferred K={big_k}"),
            );
        }
    }

    SystemValidation {
        valid: violations.is_empty(),
        violations,
    }
}

fn inferred_s(data: &SystemData) -> usize {
    let mut s = 0;
    for (_, t) in &data.tops {
        let mut mult: HashMap<usize, usize> = HashMap::new();
        for &e in t {
            if let Some(edge) = data.edges.get(e) {
                for &v in edge {
                    *mult.entry(v).or_insert(0) += 1;
                }
            }
        }
        s = s.max(mult.values().copied().max().unwrap_or(0));
    }
    s
}

impl TwoLayerSystem {
    pub fn build(data: SystemData) -> Result<Self> {
        let validation = validate_system(&data);
        if !validation.valid {
            return Err(Error::domain(format!(
                "invalid system: {}",
                validation.violations.join("; ")
            )));
        }
        let nv = data.vertex_labels.len();
        let ne = data.edges.len();
        let k = data.edges[0].len();
        let big_k = data.tops[0].1.len();
        let s = inferred_s(&data);

        let mut edges: Vec<Vec<usize>> = data.edges;
        for e in &mut edges {
            e.sort_unstable();
        }
        let mut tops: Vec<Vec<usize>> = Vec::with_capacity(data.tops.len());
        let mut top_weights = Vec::with_capacity(data.tops.len());
        for (w, mut t) in data.tops {
            t.sort_unstable();
            tops.push(t);
            top_weights.push(w);
        }

        let mut vertex_edges = vec![Vec::new(); nv];
        for (i, e) in edges.iter().enumerate() {
            for &v in e {
                vertex_edges[v].push(i);
            }
        }
        let mut edge_tops = vec![Vec::new(); ne];
        let mut vertex_tops: Vec<Vec<usize>> = vec![Vec::new(); nv];
        for (j, t) in tops.iter().enumerate() {
            let mut covered: HashSet<usize> = HashSet::new();
            for &e in t {
                edge_tops[e].push(j);
                covered.extend(edges[e].iter().copied());
            }
            let mut covered: Vec<usize> = covered.into_iter().collect();
            covered.sort_unstable();
            for v in covered {
                vertex_tops[v].push(j);
            }
        }

        let mut edge_weights = vec![Rat::zero(); ne];
        for (e, sigmas) in edge_tops.iter().enumerate() {
            for &j in sigmas {
                edge_weights[e] += &top_weights[j];
            }
        }
        let mut vertex_weights = vec![Rat::zero(); nv];
        for (v, sigmas) in vertex_tops.iter().enumerate() {
            for &j in sigmas {
                vertex_weights[v] += &top_weights[j];
            }
        }

        Ok(TwoLayerSystem {
            vertex_labels: data.vertex_labels,
            edge_labels: data.edge_labels,
            edges,
            tops,
            top_weights,
            s,
            k,
            big_k,
            vertex_edges,
            edge_tops,
            vertex_tops,
            edge_weights,
            vertex_weights,
        })
    }

    pub fn params(&self) -> (usize, usize, usize) {
        (self.s, self.k, self.big_k)
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn big_k(&self) -> usize {
        self.big_k
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn top_count(&self) -> usize {
        self.tops.len()
    }

    pub fn vertex_labels(&self) -> &[String] {
        &self.vertex_labels
    }

    pub fn edge_labels(&self) -> &[String] {
        &self.edge_labels
    }

    pub fn edge(&self, e: usize) -> &[usize] {
        &self.edges[e]
    }

    pub fn top(&self, t: usize) -> &[usize] {
        &self.tops[t]
    }

    pub fn top_weight(&self, t: usize) -> &Rat {
        &self.top_weights[t]
    }

    pub fn vertex_index(&self, label: &str) -> Option<usize> {
        self.vertex_labels.iter().position(|l| l == label)
    }

    pub fn edge_index(&self, label: &str) -> Option<usize> {
        self.edge_labels.iter().position(|l| l == label)
    }

    /// Induced weights (w on E, w on V).
    pub fn induced_weights(&self) -> (&[Rat], &[Rat]) {
        (&self.edge_weights, &self.vertex_weights)
    }

    pub fn edge_weight(&self, e: usize) -> &Rat {
        &self.edge_weights[e]
    }

    pub fn vertex_weight(&self, v: usize) -> &Rat {
        &self.vertex_weights[v]
    }

    pub fn total_edge_weight(&self) -> Rat {
        self.edge_weights.iter().sum()
    }

    pub fn total_vertex_weight(&self) -> Rat {
        self.vertex_weights.iter().sum()
    }

    pub fn set_edge_weight(&self, set: &[usize]) -> Rat {
        set.iter().map(|&e| self.edge_weights[e].clone()).sum()
    }

    pub fn edges_at(&self, v: usize) -> &[usize] {
        &self.vertex_edges[v]
    }

    pub fn tops_of_edge(&self, e: usize) -> &[usize] {
        &self.edge_tops[e]
    }

    pub fn tops_at_vertex(&self, v: usize) -> &[usize] {
        &self.vertex_tops[v]
    }

    pub fn edge_contains(&self, e: usize, v: usize) -> bool {
        self.edges[e].binary_search(&v).is_ok()
    }

    pub fn top_contains_edge(&self, t: usize, e: usize) -> bool {
        self.tops[t].binary_search(&e).is_ok()
    }

    pub fn require_vertex(&self, v: usize) -> Result<()> {
        if v >= self.vertex_count() {
            return Err(Error::domain(format!("unknown vertex index {v}")));
        }
        Ok(())
    }

    /// Checks the induced-weight inequalities 2w(v) ≤ w({τ ∋ v}) ≤ s·w(v)
    /// and (2/k)·w(V) ≤ w(E) ≤ (s/k)·w(V). These hold for every valid system;
    /// the method exists so suites can assert them wholesale.
    pub fn verify_weight_inequalities(&self) -> std::result::Result<(), String> {
        let two = crate::ratio::rat_int(2);
        let s = crate::ratio::rat_int(self.s as i64);
        for v in 0..self.vertex_count() {
            let wv = &self.vertex_weights[v];
            let incident: Rat = self.vertex_edges[v]
                .iter()
                .map(|&e| self.edge_weights[e].clone())
                .sum();
            if &two * wv > incident || incident > &s * wv {
                return Err(format!(
                    "vertex {} violates 2w(v) <= w(tau's) <= s*w(v)",
                    self.vertex_labels[v]
                ));
            }
        }
        let wv_total = self.total_vertex_weight();
        let we_total = self.total_edge_weight();
        let k = crate::ratio::rat_int(self.k as i64);
        if &two * &wv_total / &k > we_total || we_total > &s * &wv_total / &k {
            return Err("totals violate (2/k)w(V) <= w(E) <= (s/k)w(V)".to_string());
        }
        Ok(())
    }
}
