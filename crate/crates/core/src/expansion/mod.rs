//! HDE certification, locally-small classification, the closed-form
//! thresholds of the main expansion theorem, and unique-neighbor-expansion
//! search and falsification.

use crate::graph::{ExpanderVerdict, GraphLimits};
use crate::ratio::{rat_int, rat_to_f64, rat_u, Rat};
use crate::system::TwoLayerSystem;
use crate::{Error, Result};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Default cap on |E| for the exhaustive falsification search (2^22 subsets).
pub const DEFAULT_SEARCH_CAP: usize = 22;

/// Per-graph expansion requirements. `certify_hde` uses one λ for all three
/// families; the main-theorem form assigns each family its own threshold.
#[derive(Debug, Clone)]
pub struct Thresholds {
    pub lambda_ground: Rat,
    pub lambda_links: Rat,
    pub lambda_nonint: Rat,
    pub eps0: Rat,
}

/// Exact threshold formulas of the main expansion theorem.
///
/// Preconditions: s ≥ 2, k ≥ 2, K ≥ 1, 0 < δ < 1/(s-1), 0 ≤ α < 1, 0 < R ≤ 1.
pub fn main_theorem_thresholds(
    s: usize,
    k: usize,
    big_k: usize,
    r_nint: &Rat,
    delta: &Rat,
    alpha: &Rat,
) -> Result<Thresholds> {
    if s < 2 || k < 2 || big_k < 1 {
        return Err(Error::domain(format!(
            "threshold formulas need s >= 2, k >= 2, K >= 1 (got s={s}, k={k}, K={big_k})"
        )));
    }
    let s1 = rat_u((s - 1) as u64);
    let one = rat_int(1);
    if *delta <= Rat::zero() || delta * &s1 >= one {
        return Err(Error::domain(format!(
            "delta must lie in (0, 1/(s-1)) (got {delta} with s={s})"
        )));
    }
    if *alpha < Rat::zero() || *alpha >= rat_int(1) {
        return Err(Error::domain(format!(
            "alpha must lie in [0, 1) (got {alpha})"
        )));
    }
    if *r_nint <= Rat::zero() || *r_nint > rat_int(1) {
        return Err(Error::domain(format!(
            "R must lie in (0, 1] (got {r_nint})"
        )));
    }

    let sr = rat_u(s as u64);
    let kr = rat_u(k as u64);
    let kkr = rat_u(big_k as u64);
    let gap = rat_int(1) - delta * &s1; // 1 - (s-1)δ
    let amp = rat_int(1) + rat_int(15) * delta * &s1; // 1 + 15(s-1)δ
    let a1 = rat_int(1) - alpha; // 1 - α

    // λ_gr = ((1-α)(1-(s-1)δ) / (4 s (s-1)² k (k-1))) · min{7(1-(s-1)δ)/(4(1+15(s-1)δ)), 1/2}
    let front = &a1 * &gap / (rat_int(4) * &sr * &s1 * &s1 * &kr * (&kr - rat_int(1)));
    let m1 = rat_int(7) * &gap / (rat_int(4) * &amp);
    let half = Rat::new(1.into(), 2.into());
    let lambda_ground = front * if m1 < half { m1 } else { half };

    // λ_loc = (1-α)(1-(s-1)δ) / (8 k (s-1))
    let lambda_links = &a1 * &gap / (rat_int(8) * &kr * &s1);

    // λ_nint = R (1-α)(1-(s-1)δ) / (4 K)
    let lambda_nonint = r_nint * &a1 * &gap / (rat_int(4) * &kkr);

    // ε₀ = min{ R²(1-α)(1-(s-1)δ)/(4K), 7(1-α)²(1-(s-1)δ)³/(64(1+15(s-1)δ)s³(s-1)⁴k²) }
    let e1 = r_nint * r_nint * &a1 * &gap / (rat_int(4) * &kkr);
    let e2 = rat_int(7) * &a1 * &a1 * &gap * &gap * &gap
        / (rat_int(64) * &amp * &sr * &sr * &sr * &s1 * &s1 * &s1 * &s1 * &kr * &kr);
    let eps0 = if e1 < e2 { e1 } else { e2 };

    Ok(Thresholds {
        lambda_ground,
        lambda_links,
        lambda_nonint,
        eps0,
    })
}

#[derive(Debug, Clone)]
pub struct HdeCertificate {
    pub lambda_ground: Rat,
    pub lambda_links: Rat,
    pub lambda_nonint: Rat,
    pub ground: ExpanderVerdict,
    /// One verdict per vertex, in vertex order.
    pub links: Vec<ExpanderVerdict>,
    pub nonint_edgeless: bool,
    /// Absent when the non-intersecting graph is edgeless.
    pub nonint: Option<ExpanderVerdict>,
    pub r_nint: Rat,
    pub passed: bool,
}

impl HdeCertificate {
    pub fn first_failing_link(&self) -> Option<usize> {
        self.links.iter().position(|v| !v.passed)
    }
}

/// Certifies the HDE condition with a single λ for all graph families.
pub fn certify_hde(x: &TwoLayerSystem, lambda: &Rat, limits: &GraphLimits) -> HdeCertificate {
    certify_hde_with(x, lambda, lambda, lambda, limits)
}

/// Certifies with the per-family thresholds of the main expansion theorem.
pub fn certify_hde_at_thresholds(
    x: &TwoLayerSystem,
    t: &Thresholds,
    limits: &GraphLimits,
) -> HdeCertificate {
    certify_hde_with(
        x,
        &t.lambda_ground,
        &t.lambda_links,
        &t.lambda_nonint,
        limits,
    )
}

fn certify_hde_with(
    x: &TwoLayerSystem,
    lambda_ground: &Rat,
    lambda_links: &Rat,
    lambda_nonint: &Rat,
    limits: &GraphLimits,
) -> HdeCertificate {
    let ground = x.ground_graph().is_lambda_expander(lambda_ground, limits);
    let mut passed = ground.passed;
    let mut links = Vec::with_capacity(x.vertex_count());
    for v in 0..x.vertex_count() {
        let verdict = x
            .link_graph(v)
            .expect("valid vertex")
            .is_lambda_expander(lambda_links, limits);
        passed &= verdict.passed;
        links.push(verdict);
    }
    let nint = x.nonintersecting_graph();
    let nonint_edgeless = nint.graph.edge_count() == 0;
    let nonint = if nonint_edgeless {
        None
    } else {
        let verdict = nint.graph.is_lambda_expander(lambda_nonint, limits);
        passed &= verdict.passed;
        Some(verdict)
    };
    HdeCertificate {
        lambda_ground: lambda_ground.clone(),
        lambda_links: lambda_links.clone(),
        lambda_nonint: lambda_nonint.clone(),
        ground,
        links,
        nonint_edgeless,
        nonint,
        r_nint: nint.r_nint,
        passed,
    }
}

/// Per-vertex δ-small/δ-large classification of a set A ⊆ E.
#[derive(Debug, Clone)]
pub struct LocalClassification {
    pub delta: Rat,
    pub alpha: Rat,
    /// true = δ-small, per vertex.
    pub small: Vec<bool>,
    /// Σ over δ-large v of m_v(A_v).
    pub large_mass: Rat,
    pub set_weight: Rat,
    pub is_locally_small: bool,
}

/// m_v(A_v): the link-mass of the localization A_v = A ∩ E_v at v.
pub fn link_mass_of_set(x: &TwoLayerSystem, v: usize, in_a: &[bool]) -> Rat {
    // m_v(τ) summed over τ ∈ A_v, computed directly from the σ's at v:
    // each σ containing τ and another τ' ∋ v contributes w(σ) per such τ'.
    let mut total = Rat::zero();
    for &t in x.tops_at_vertex(v) {
        let sigma = x.top(t);
        let members: Vec<usize> = sigma
            .iter()
            .copied()
            .filter(|&e| x.edge_contains(e, v))
            .collect();
        let in_count = members.iter().filter(|&&e| in_a[e]).count();
        if in_count == 0 {
            continue;
        }
        // Each τ ∈ A_v ∩ σ pairs with the other (members - 1) link vertices.
        let pairs = in_count * (members.len() - 1);
        total += rat_u(pairs as u64) * x.top_weight(t);
    }
    total
}

/// m_v(E_v): total link mass at v.
pub fn link_total_mass(x: &TwoLayerSystem, v: usize) -> Rat {
    let all = vec![true; x.edge_count()];
    link_mass_of_set(x, v, &all)
}

/// m_v(A_v, A_v): ordered pairs of distinct A-members of E_v sharing a σ.
pub fn link_internal_boundary(x: &TwoLayerSystem, v: usize, in_a: &[bool]) -> Rat {
    let mut total = Rat::zero();
    for &t in x.tops_at_vertex(v) {
        let sigma = x.top(t);
        let in_count = sigma
            .iter()
            .filter(|&&e| x.edge_contains(e, v) && in_a[e])
            .count();
        if in_count >= 2 {
            total += rat_u((in_count * (in_count - 1)) as u64) * x.top_weight(t);
        }
    }
    total
}

pub fn classify_locally_small(
    x: &TwoLayerSystem,
    a: &[usize],
    delta: &Rat,
    alpha: &Rat,
) -> Result<LocalClassification> {
    if a.is_empty() {
        return Err(Error::domain(
            "locally-small classification of empty A".to_string(),
        ));
    }
    let mut in_a = vec![false; x.edge_count()];
    for &e in a {
        if e >= x.edge_count() {
            return Err(Error::domain(format!("unknown edge index {e}")));
        }
        in_a[e] = true;
    }
    let set_weight = x.set_edge_weight(a);
    let mut small = vec![true; x.vertex_count()];
    let mut large_mass = Rat::zero();
    for v in 0..x.vertex_count() {
        let mass = link_mass_of_set(x, v, &in_a);
        let total = link_total_mass(x, v);
        // Valid systems have positive link mass at every vertex.
        let is_small = &mass / &total < *delta;
        small[v] = is_small;
        if !is_small {
            large_mass += mass;
        }
    }
    let is_locally_small = large_mass <= alpha * &set_weight;
    Ok(LocalClassification {
        delta: delta.clone(),
        alpha: alpha.clone(),
        small,
        large_mass,
        set_weight,
        is_locally_small,
    })
}

/// Some σ ∈ T meeting A in exactly one element, if one exists.
pub fn unique_neighbor_witness(x: &TwoLayerSystem, a: &[usize]) -> Result<Option<usize>> {
    if a.is_empty() {
        return Err(Error::domain(
            "unique-neighbor witness of empty A".to_string(),
        ));
    }
    let mut in_a = vec![false; x.edge_count()];
    for &e in a {
        if e >= x.edge_count() {
            return Err(Error::domain(format!("unknown edge index {e}")));
        }
        in_a[e] = true;
    }
    Ok(unique_neighbor_witness_mask(x, &in_a))
}

fn unique_neighbor_witness_mask(x: &TwoLayerSystem, in_a: &[bool]) -> Option<usize> {
    (0..x.top_count()).find(|&t| x.top(t).iter().filter(|&&e| in_a[e]).count() == 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    Exhaustive,
    Randomized,
}

/// Searches for a counterexample to unique neighbor expansion: a non-empty
/// A ⊆ E with w(A)/w(E) < ε₀ (strict), (δ, α)-locally small, and no σ meeting
/// A exactly once. Exhaustive mode enumerates subsets in index order;
/// randomized mode samples weight-bounded subsets reproducibly from `seed`.
#[allow(clippy::too_many_arguments)]
pub fn unique_neighbor_falsification_search(
    x: &TwoLayerSystem,
    delta: &Rat,
    alpha: &Rat,
    eps0: &Rat,
    mode: SearchMode,
    budget: u64,
    seed: u64,
    cap: usize,
) -> Result<Option<Vec<usize>>> {
    let ne = x.edge_count();
    let we = x.total_edge_weight();
    let limit = eps0 * &we;
    let qualifies = |a: &[usize], in_a: &[bool]| -> bool {
        if a.is_empty() {
            return false;
        }
        if x.set_edge_weight(a) >= limit {
            return false;
        }
        if unique_neighbor_witness_mask(x, in_a).is_some() {
            return false;
        }
        classify_locally_small(x, a, delta, alpha)
            .map(|c| c.is_locally_small)
            .unwrap_or(false)
    };
    match mode {
        SearchMode::Exhaustive => {
            if ne > cap || ne > 62 {
                return Err(Error::capacity(format!(
                    "exhaustive search cap {} exceeded by |E| = {ne}",
                    cap.min(62)
                )));
            }
            for mask in 1u64..(1u64 << ne) {
                let a: Vec<usize> = (0..ne).filter(|e| mask >> e & 1 == 1).collect();
                let mut in_a = vec![false; ne];
                for &e in &a {
                    in_a[e] = true;
                }
                if qualifies(&a, &in_a) {
                    return Ok(Some(a));
                }
            }
            Ok(None)
        }
        SearchMode::Randomized => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..budget {
                // Grow a random subset until the weight budget is exceeded,
                // then drop the overshooting element.
                let mut order: Vec<usize> = (0..ne).collect();
                for i in (1..ne).rev() {
                    let j = (rng.next_u64() % (i as u64 + 1)) as usize;
                    order.swap(i, j);
                }
                let mut a = Vec::new();
                let mut in_a = vec![false; ne];
                let mut mass = Rat::zero();
                for &e in &order {
                    let next = &mass + x.edge_weight(e);
                    if next >= limit {
                        break;
                    }
                    mass = next;
                    a.push(e);
                    in_a[e] = true;
                }
                a.sort_unstable();
                if qualifies(&a, &in_a) {
                    return Ok(Some(a));
                }
            }
            Ok(None)
        }
    }
}

/// Verdict of the spherically-large-mass bound
/// w(V_{δ-sph.large})/w(A) ≤ (4kK/3δ)·(2λ_opp/√δ + (sK/δ)·w(A)/w(E)).
#[derive(Debug, Clone)]
pub struct SphericalMassReport {
    /// False when the opposite graph is disconnected.
    pub applicable: bool,
    pub large: Vec<usize>,
    pub lhs: Rat,
    pub rhs: f64,
    pub lambda_opp: f64,
    pub holds: bool,
}

pub fn spherically_large_mass_check(
    x: &TwoLayerSystem,
    a: &[usize],
    delta: &Rat,
) -> Result<SphericalMassReport> {
    if a.is_empty() {
        return Err(Error::domain("spherical mass check of empty A".to_string()));
    }
    if *delta <= Rat::zero() || *delta >= rat_int(1) {
        return Err(Error::domain(
            "delta must lie strictly between 0 and 1".to_string(),
        ));
    }
    let opp = x.opposite_graph();
    if !opp.connected {
        return Ok(SphericalMassReport {
            applicable: false,
            large: Vec::new(),
            lhs: Rat::zero(),
            rhs: 0.0,
            lambda_opp: opp.lambda,
            holds: true,
        });
    }
    let mut in_a = vec![false; x.edge_count()];
    for &e in a {
        if e >= x.edge_count() {
            return Err(Error::domain(format!("unknown edge index {e}")));
        }
        in_a[e] = true;
    }
    let mut large = Vec::new();
    let mut large_weight = Rat::zero();
    for v in 0..x.vertex_count() {
        let sphere = x.sphere_of_vertex(v)?;
        let mut on_a = Rat::zero();
        let mut total = Rat::zero();
        for (i, &e) in sphere.edges.iter().enumerate() {
            total += &sphere.edge_weights[i];
            if in_a[e] {
                on_a += &sphere.edge_weights[i];
            }
        }
        // m_opp(v) = 0 means an isolated opposite vertex: spherically small.
        let is_large = !total.is_zero() && &on_a / &total >= *delta;
        if is_large {
            large.push(v);
            large_weight += x.vertex_weight(v);
        }
    }
    let w_a = x.set_edge_weight(a);
    let lhs = &large_weight / &w_a;
    let (s, k, big_k) = x.params();
    let delta_f = rat_to_f64(delta);
    let rhs = 4.0 * (k as f64) * (big_k as f64) / (3.0 * delta_f)
        * (2.0 * opp.lambda / delta_f.sqrt()
            + (s as f64) * (big_k as f64) / delta_f * rat_to_f64(&(&w_a / x.total_edge_weight())));
    let holds = rat_to_f64(&lhs) <= rhs + crate::graph::SPECTRAL_GUARD;
    Ok(SphericalMassReport {
        applicable: true,
        large,
        lhs,
        rhs,
        lambda_opp: opp.lambda,
        holds,
    })
}
