//! Linear codes over prime fields modelled over two-layer systems: the
//! rejection function, the bit-flip corrector, and the amplified-testability
//! and distance verifiers.

use crate::expansion::{link_mass_of_set, link_total_mass};
use crate::field::{Fp, FpMatrix};
use crate::graph::GraphLimits;
use crate::ratio::{rat_int, rat_u, Rat};
use crate::system::TwoLayerSystem;
use crate::{Error, Result};
use num_traits::Zero;
use std::collections::BTreeMap;

/// Default cap on the codeword-space size p^dim for brute-force enumeration.
pub const DEFAULT_CODEWORD_CAP: u64 = 1 << 20;

/// A word in F_p^V, indexed by vertex id.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Word(pub Vec<u64>);

impl Word {
    pub fn zero(n: usize) -> Self {
        Word(vec![0; n])
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&v| self.0[v] != 0).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }
}

/// One parity constraint: coefficients over a k-subset of V.
#[derive(Debug, Clone)]
pub struct ConstraintRow {
    /// Sorted vertex indices.
    pub support: Vec<usize>,
    /// Nonzero coefficients aligned with `support`.
    pub coeffs: Vec<u64>,
}

impl ConstraintRow {
    pub fn new(mut entries: Vec<(usize, u64)>, p: u64) -> Result<Self> {
        entries.sort_by_key(|&(v, _)| v);
        let mut support = Vec::with_capacity(entries.len());
        let mut coeffs = Vec::with_capacity(entries.len());
        for (v, c) in entries {
            let c = c % p;
            if c == 0 {
                return Err(Error::domain(format!(
                    "zero coefficient at vertex {v} is not part of a support"
                )));
            }
            if support.last() == Some(&v) {
                return Err(Error::domain(format!("repeated vertex {v} in constraint")));
            }
            support.push(v);
            coeffs.push(c);
        }
        if support.is_empty() {
            return Err(Error::domain("empty constraint".to_string()));
        }
        Ok(ConstraintRow { support, coeffs })
    }

    pub fn eval(&self, f: Fp, word: &Word) -> u64 {
        let mut acc = 0;
        for (i, &v) in self.support.iter().enumerate() {
            acc = f.add(acc, f.mul(self.coeffs[i], word.0[v]));
        }
        acc
    }
}

/// Checks Σ_e ld(e)·e = 0 as a functional on F_p^V, i.e. ld·H = 0.
pub fn verify_linear_dependency(p: u64, rows: &[ConstraintRow], ld: &[u64]) -> bool {
    let Ok(f) = Fp::new(p) else { return false };
    if ld.len() != rows.len() {
        return false;
    }
    let mut column_sums: BTreeMap<usize, u64> = BTreeMap::new();
    for (row, &coef) in rows.iter().zip(ld) {
        if coef % p == 0 {
            continue;
        }
        for (i, &v) in row.support.iter().enumerate() {
            let entry = column_sums.entry(v).or_insert(0);
            *entry = f.add(*entry, f.mul(coef, row.coeffs[i]));
        }
    }
    column_sums.values().all(|&s| s == 0)
}

#[derive(Debug, Clone)]
pub struct ModellingValidation {
    pub valid: bool,
    pub violations: Vec<String>,
}

/// A linear code modelled over a two-layer system: rows biject with E via
/// their supports and the dependency supports realize exactly T.
#[derive(Debug, Clone)]
pub struct LinearCodeModel {
    field: Fp,
    system: TwoLayerSystem,
    rows: Vec<ConstraintRow>,
    /// Dependencies as sparse (row index, coefficient) lists.
    deps: Vec<Vec<(usize, u64)>>,
    /// Φ: row index -> edge index (by support).
    edge_of_row: Vec<usize>,
    /// Φ⁻¹: edge index -> row index.
    row_of_edge: Vec<usize>,
}

pub fn validate_modelling(
    p: u64,
    system: &TwoLayerSystem,
    rows: &[ConstraintRow],
    deps: &[Vec<(usize, u64)>],
) -> ModellingValidation {
    let mut violations = Vec::new();
    if !crate::field::is_prime(p) {
        violations.push(format!("{p} is not prime"));
        return ModellingValidation {
            valid: false,
            violations,
        };
    }
    let mut support_to_edge: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for e in 0..system.edge_count() {
        support_to_edge.insert(system.edge(e).to_vec(), e);
    }
    let mut edge_hit = vec![false; system.edge_count()];
    for (i, row) in rows.iter().enumerate() {
        match support_to_edge.get(&row.support) {
            None => violations.push(format!("row#{i} support is not a member of E")),
            Some(&e) => {
                if edge_hit[e] {
                    violations.push(format!(
                        "row#{i} duplicates the support of another row ({})",
                        system.edge_labels()[e]
                    ));
                } else {
                    edge_hit[e] = true;
                }
            }
        }
    }
    for (e, hit) in edge_hit.iter().enumerate() {
        if !hit {
            violations.push(format!(
                "no row has support {} in E",
                system.edge_labels()[e]
            ));
        }
    }
    // Dependency supports must realize T exactly and each must verify.
    let mut top_sets: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for t in 0..system.top_count() {
        top_sets.insert(system.top(t).to_vec(), t);
    }
    let mut top_hit = vec![false; system.top_count()];
    for (j, ld) in deps.iter().enumerate() {
        let mut dense = vec![0u64; rows.len()];
        for &(r, c) in ld {
            if r >= rows.len() {
                violations.push(format!("dep#{j} references an unknown row"));
                continue;
            }
            dense[r] = c % p;
        }
        if !verify_linear_dependency(p, rows, &dense) {
            violations.push(format!("dep#{j} does not satisfy ld·H = 0"));
        }
        let mut sigma: Vec<usize> = (0..rows.len())
            .filter(|&r| dense[r] != 0)
            .filter_map(|r| support_to_edge.get(&rows[r].support).copied())
            .collect();
        sigma.sort_unstable();
        sigma.dedup();
        match top_sets.get(&sigma) {
            None => violations.push(format!("dep#{j} support-image is not a member of T")),
            Some(&t) => top_hit[t] = true,
        }
    }
    for (t, hit) in top_hit.iter().enumerate() {
        if !hit {
            violations.push(format!("no dependency realizes top#{t}"));
        }
    }
    ModellingValidation {
        valid: violations.is_empty(),
        violations,
    }
}

impl LinearCodeModel {
    pub fn build(
        p: u64,
        system: TwoLayerSystem,
        rows: Vec<ConstraintRow>,
        deps: Vec<Vec<(usize, u64)>>,
    ) -> Result<Self> {
        let validation = validate_modelling(p, &system, &rows, &deps);
        if !validation.valid {
            return Err(Error::domain(format!(
                "invalid code model: {}",
                validation.violations.join("; ")
            )));
        }
        let field = Fp::new(p)?;
        let mut support_to_edge: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for e in 0..system.edge_count() {
            support_to_edge.insert(system.edge(e).to_vec(), e);
        }
        let edge_of_row: Vec<usize> = rows.iter().map(|r| support_to_edge[&r.support]).collect();
        let mut row_of_edge = vec![0usize; system.edge_count()];
        for (r, &e) in edge_of_row.iter().enumerate() {
            row_of_edge[e] = r;
        }
        Ok(LinearCodeModel {
            field,
            system,
            rows,
            deps,
            edge_of_row,
            row_of_edge,
        })
    }

    pub fn p(&self) -> u64 {
        self.field.p
    }

    pub fn field(&self) -> Fp {
        self.field
    }

    pub fn system(&self) -> &TwoLayerSystem {
        &self.system
    }

    pub fn rows(&self) -> &[ConstraintRow] {
        &self.rows
    }

    pub fn deps(&self) -> &[Vec<(usize, u64)>] {
        &self.deps
    }

    pub fn edge_of_row(&self, r: usize) -> usize {
        self.edge_of_row[r]
    }

    pub fn row_of_edge(&self, e: usize) -> usize {
        self.row_of_edge[e]
    }

    pub fn vertex_count(&self) -> usize {
        self.system.vertex_count()
    }

    fn require_word(&self, w: &Word) -> Result<()> {
        if w.0.len() != self.vertex_count() {
            return Err(Error::domain(format!(
                "word has {} coordinates, the code has {}",
                w.0.len(),
                self.vertex_count()
            )));
        }
        if let Some(v) = w.0.iter().position(|&x| x >= self.field.p) {
            return Err(Error::domain(format!(
                "coordinate {v} = {} is not a residue mod {}",
                w.0[v], self.field.p
            )));
        }
        Ok(())
    }

    /// Row indices violated by the word.
    pub fn violated_rows(&self, w: &Word) -> Result<Vec<usize>> {
        self.require_word(w)?;
        Ok((0..self.rows.len())
            .filter(|&r| self.rows[r].eval(self.field, w) != 0)
            .collect())
    }

    /// A(c): supports of violated rows, as edge indices.
    pub fn violated_edges(&self, w: &Word) -> Result<Vec<usize>> {
        let mut edges: Vec<usize> = self
            .violated_rows(w)?
            .into_iter()
            .map(|r| self.edge_of_row[r])
            .collect();
        edges.sort_unstable();
        Ok(edges)
    }

    pub fn is_codeword(&self, w: &Word) -> Result<bool> {
        Ok(self.violated_rows(w)?.is_empty())
    }

    /// rej(c) = w(A(c)) / w(E), using w(e) = w(supp(e)).
    pub fn rej(&self, w: &Word) -> Result<Rat> {
        let violated = self.violated_edges(w)?;
        Ok(self.system.set_edge_weight(&violated) / self.system.total_edge_weight())
    }

    /// ||c|| = (1/w(V)) Σ_{v : c(v) ≠ 0} w(v).
    pub fn weighted_norm(&self, w: &Word) -> Result<Rat> {
        self.require_word(w)?;
        let mut mass = Rat::zero();
        for v in 0..self.vertex_count() {
            if w.0[v] != 0 {
                mass += self.system.vertex_weight(v);
            }
        }
        Ok(mass / self.system.total_vertex_weight())
    }

    pub fn distance_between(&self, a: &Word, b: &Word) -> Result<Rat> {
        self.require_word(a)?;
        self.require_word(b)?;
        let diff = Word(
            (0..self.vertex_count())
                .map(|v| self.field.sub(a.0[v], b.0[v]))
                .collect(),
        );
        self.weighted_norm(&diff)
    }

    /// Null-space basis of the check matrix: a basis of the code.
    pub fn code_basis(&self) -> Vec<Word> {
        let n = self.vertex_count();
        let mut dense_rows = Vec::with_capacity(self.rows.len());
        for row in &self.rows {
            let mut dense = vec![0u64; n];
            for (i, &v) in row.support.iter().enumerate() {
                dense[v] = row.coeffs[i];
            }
            dense_rows.push(dense);
        }
        let h = FpMatrix::from_rows(self.field, &dense_rows);
        h.null_space().into_iter().map(Word).collect()
    }

    /// Iterates every codeword by enumerating coefficient vectors over the
    /// null-space basis. Errors when p^dim exceeds the cap.
    pub fn codewords(&self, cap: u64) -> Result<CodewordIter<'_>> {
        let basis = self.code_basis();
        let p = self.field.p;
        let mut count: u64 = 1;
        for _ in 0..basis.len() {
            count = count.checked_mul(p).filter(|&c| c <= cap).ok_or_else(|| {
                Error::capacity(format!(
                    "codeword space p^{} exceeds the cap {cap}",
                    basis.len()
                ))
            })?;
        }
        Ok(CodewordIter {
            code: self,
            basis,
            next: 0,
            total: count,
        })
    }

    /// Brute-force nearest codeword with exact rational distance. Ties break
    /// to the lexicographically smallest codeword.
    pub fn nearest_codeword(&self, w: &Word, cap: u64) -> Result<(Word, Rat)> {
        self.require_word(w)?;
        let mut best: Option<(Word, Rat)> = None;
        for c in self.codewords(cap)? {
            let d = self.distance_between(w, &c)?;
            match &mut best {
                None => best = Some((c, d)),
                Some((bc, bd)) => {
                    if d < *bd || (d == *bd && c < *bc) {
                        *bc = c;
                        *bd = d;
                    }
                }
            }
        }
        Ok(best.expect("the zero word is always a codeword"))
    }

    /// Violated link-mass fraction at v: m_v(A(c) ∩ E_v) / m_v(E_v).
    pub fn violated_link_fraction(&self, w: &Word, v: usize) -> Result<Rat> {
        self.system.require_vertex(v)?;
        let mut in_a = vec![false; self.system.edge_count()];
        for e in self.violated_edges(w)? {
            in_a[e] = true;
        }
        let mass = link_mass_of_set(&self.system, v, &in_a);
        let total = link_total_mass(&self.system, v);
        Ok(mass / total)
    }

    /// Flip step: re-chooses the symbol at v0 so the violated link-mass
    /// fraction drops to at most (p-1)/p. Among the shifts t achieving the
    /// minimum the smallest field element is chosen; t = 0 keeps the word.
    pub fn flip_vertex(&self, w: &Word, v0: usize) -> Result<(Word, Rat)> {
        self.require_word(w)?;
        self.system.require_vertex(v0)?;
        let total = link_total_mass(&self.system, v0);
        let mut best: Option<(u64, Rat)> = None;
        for t in 0..self.field.p {
            let mut cand = w.clone();
            cand.0[v0] = self.field.add(cand.0[v0], t);
            let mut in_a = vec![false; self.system.edge_count()];
            for &e in self.system.edges_at(v0) {
                let row = self.row_of_edge[e];
                if self.rows[row].eval(self.field, &cand) != 0 {
                    in_a[e] = true;
                }
            }
            let mass = link_mass_of_set(&self.system, v0, &in_a);
            match &mut best {
                None => best = Some((t, mass)),
                Some((bt, bm)) => {
                    if mass < *bm {
                        *bt = t;
                        *bm = mass;
                    }
                }
            }
        }
        let (t, mass) = best.expect("p >= 2 shifts evaluated");
        let mut out = w.clone();
        out.0[v0] = self.field.add(out.0[v0], t);
        let fraction = mass / total;
        debug_assert!(
            &fraction * rat_u(self.field.p) <= rat_u(self.field.p - 1),
            "flip guarantee (p-1)/p violated"
        );
        Ok((out, fraction))
    }

    /// Iterative bit-flip correction: while some vertex is δ-large with
    /// respect to the violated set, flip the smallest-index such vertex.
    /// Requires δ > (p-1)/p. Each step shrinks w(A) by at least
    /// 2(δ - (p-1)/p)·w(v), which forces termination; the total flipped mass
    /// obeys ||c - c'|| ≤ (s/k)·rej(c) / (2(δ - (p-1)/p)).
    pub fn bitflip_correct(&self, w: &Word, delta: &Rat) -> Result<(Word, Vec<usize>)> {
        self.require_word(w)?;
        let p = self.field.p;
        let flip_bound = rat_u(p - 1) / rat_u(p);
        if *delta <= flip_bound {
            return Err(Error::domain(format!(
                "delta must exceed (p-1)/p = {flip_bound} for the flip guarantee"
            )));
        }
        let margin = rat_int(2) * (delta - &flip_bound);
        let mut current = w.clone();
        let mut flips = Vec::new();
        let mut current_mass = self.system.set_edge_weight(&self.violated_edges(&current)?);
        loop {
            let mut in_a = vec![false; self.system.edge_count()];
            for e in self.violated_edges(&current)? {
                in_a[e] = true;
            }
            let large = (0..self.vertex_count()).find(|&v| {
                let mass = link_mass_of_set(&self.system, v, &in_a);
                let total = link_total_mass(&self.system, v);
                mass >= delta * total
            });
            let Some(v) = large else { break };
            let (next, _) = self.flip_vertex(&current, v)?;
            let next_mass = self.system.set_edge_weight(&self.violated_edges(&next)?);
            // Termination invariant from the flip guarantee.
            let decrease = &current_mass - &next_mass;
            if decrease < &margin * self.system.vertex_weight(v) {
                return Err(Error::domain(format!(
                    "flip at vertex {} decreased w(A) by {} < required {}",
                    self.system.vertex_labels()[v],
                    decrease,
                    &margin * self.system.vertex_weight(v)
                )));
            }
            current_mass = next_mass;
            flips.push(v);
            current = next;
        }
        Ok((current, flips))
    }

    /// Amplified testability check: rej(c) ≥ k·r·min{dist(c, C), 1/k^t},
    /// evaluated exactly.
    pub fn check_amplified_bound(
        &self,
        w: &Word,
        r: &Rat,
        t: u32,
        cap: u64,
    ) -> Result<AmplifiedBoundReport> {
        let rej = self.rej(w)?;
        let (_, dist) = self.nearest_codeword(w, cap)?;
        let k = rat_u(self.system.k() as u64);
        let mut k_pow = rat_int(1);
        for _ in 0..t {
            k_pow *= &k;
        }
        let inv_kt = rat_int(1) / k_pow;
        let min = if dist < inv_kt { dist.clone() } else { inv_kt };
        let rhs = k * r * min;
        Ok(AmplifiedBoundReport {
            holds: rej >= rhs,
            lhs: rej,
            rhs,
            distance: dist,
        })
    }

    /// Distance theorem check: every nonzero codeword has
    /// ||c|| ≥ (16/(s⁴(s-1)²k))·(1 - s(s-1)(k-1)·λ_gr) with λ_gr = max(0, 1-h).
    pub fn distance_bound_check(&self, limits: &GraphLimits, cap: u64) -> Result<DistanceReport> {
        let (s, k, _) = self.system.params();
        let ground = self.system.ground_graph();
        let lambda_gr = if ground.vertex_count() <= limits.cheeger_cap {
            let (h, _) = ground.cheeger_constant(limits.cheeger_cap)?;
            let lam = rat_int(1) - h;
            if lam < Rat::zero() {
                Rat::zero()
            } else {
                lam
            }
        } else {
            // Spectral fallback: λ₂ ≥ 1 - h, so using it keeps the bound valid.
            let lam2 = ground.second_eigenvalue(limits.spectral_cap)?;
            let guarded = (lam2 + 1e-9).max(0.0);
            Rat::from_float(guarded)
                .ok_or_else(|| Error::domain("non-finite eigenvalue".to_string()))?
        };
        let sr = rat_u(s as u64);
        let s1 = rat_u((s - 1) as u64);
        let kr = rat_u(k as u64);
        let front = rat_int(16) / (&sr * &sr * &sr * &sr * &s1 * &s1 * &kr);
        let factor = rat_int(1) - &sr * &s1 * (&kr - rat_int(1)) * &lambda_gr;
        let bound = front * factor;
        let mut true_distance: Option<Rat> = None;
        for c in self.codewords(cap)? {
            if c.is_zero() {
                continue;
            }
            let norm = self.weighted_norm(&c)?;
            if true_distance.as_ref().is_none_or(|d| norm < *d) {
                true_distance = Some(norm);
            }
        }
        let holds = match &true_distance {
            Some(d) => *d >= bound,
            None => true, // no nonzero codeword: vacuous
        };
        Ok(DistanceReport {
            bound,
            true_distance,
            lambda_ground: lambda_gr,
            holds,
        })
    }
}

#[derive(Debug, Clone)]
pub struct AmplifiedBoundReport {
    pub holds: bool,
    pub lhs: Rat,
    pub rhs: Rat,
    pub distance: Rat,
}

#[derive(Debug, Clone)]
pub struct DistanceReport {
    pub bound: Rat,
    /// None when the code contains only the zero word.
    pub true_distance: Option<Rat>,
    pub lambda_ground: Rat,
    pub holds: bool,
}

pub struct CodewordIter<'a> {
    code: &'a LinearCodeModel,
    basis: Vec<Word>,
    next: u64,
    total: u64,
}

impl Iterator for CodewordIter<'_> {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        if self.next >= self.total {
            return None;
        }
        let f = self.code.field;
        let mut idx = self.next;
        self.next += 1;
        let mut word = Word::zero(self.code.vertex_count());
        for b in &self.basis {
            let coeff = idx % f.p;
            idx /= f.p;
            if coeff != 0 {
                for v in 0..word.0.len() {
                    word.0[v] = f.add(word.0[v], f.mul(coeff, b.0[v]));
                }
            }
        }
        Some(word)
    }
}

mod sphere;
pub use sphere::{SphereCode, SphereCorrectionReport};

pub mod builders;
