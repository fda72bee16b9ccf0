//! Expansion verification for affine instances: the 4k²/q^n target for the
//! ground graph, every link and the non-intersecting graph, the ordered weak
//! covers used to prove it, and the closed-form testability thresholds.

use super::{for_each_gp_matrix, AffineCaps, AffineInstance, Point};
use crate::graph::{check_weak_cover, GraphLimits, WeightedGraph};
use crate::ratio::{rat_int, rat_u, Rat};
use crate::{Error, Result};
use std::collections::BTreeMap;

/// Expansion of one derived graph against the λ target: h is measured by the
/// exact Cheeger scan when the graph is small enough, else spectrally via
/// h = 1 - λ₂ (a lower bound by the Cheeger inequality).
#[derive(Debug, Clone)]
pub struct GraphMeasurement {
    pub name: String,
    pub vertex_count: usize,
    /// 1 - h, measured as above; `None` for an edgeless graph.
    pub one_minus_h: Option<f64>,
    pub passed: bool,
}

#[derive(Debug, Clone)]
pub struct AffineExpansionReport {
    /// False when q^n ≤ 4k²: the theorem's hypothesis fails.
    pub applicable: bool,
    pub lambda_target: Rat,
    pub ground_complete: bool,
    pub ground_constant_weight: bool,
    pub measurements: Vec<GraphMeasurement>,
    pub passed: bool,
}

const EXPANSION_GUARD: f64 = 1e-6;

fn measure(
    name: String,
    graph: &WeightedGraph,
    lambda_target: f64,
    limits: &GraphLimits,
) -> Result<GraphMeasurement> {
    if graph.edge_count() == 0 {
        return Ok(GraphMeasurement {
            name,
            vertex_count: graph.vertex_count(),
            one_minus_h: None,
            passed: true,
        });
    }
    let one_minus_h = if graph.vertex_count() <= limits.cheeger_cap {
        let (h, _) = graph.cheeger_constant(limits.cheeger_cap)?;
        1.0 - crate::ratio::rat_to_f64(&h)
    } else {
        graph.second_eigenvalue(limits.spectral_cap)?
    };
    Ok(GraphMeasurement {
        name,
        vertex_count: graph.vertex_count(),
        one_minus_h: Some(one_minus_h),
        passed: one_minus_h <= lambda_target + EXPANSION_GUARD,
    })
}

/// Verifies that the instance is 4k²/q^n-expanding: the ground graph is the
/// complete graph with a constant weight, and the non-intersecting graph and
/// every link satisfy 1 - h ≤ 4k²/q^n. Requires q^n > 4k².
pub fn affine_expansion_check(
    instance: &AffineInstance,
    limits: &GraphLimits,
) -> Result<AffineExpansionReport> {
    let spec = &instance.spec;
    let size = spec.space.size();
    let k = spec.k() as u64;
    let lambda_target = rat_u(4 * k * k) / rat_u(size);
    if rat_u(size) <= rat_u(4 * k * k) {
        return Ok(AffineExpansionReport {
            applicable: false,
            lambda_target,
            ground_complete: false,
            ground_constant_weight: false,
            measurements: Vec::new(),
            passed: false,
        });
    }
    let target_f = crate::ratio::rat_to_f64(&lambda_target);
    let mut measurements = Vec::new();

    let ground = instance.system.ground_graph();
    let n = ground.vertex_count();
    let ground_complete = ground.edge_count() == n * (n - 1) / 2;
    let ground_constant_weight = {
        let edges = ground.edges();
        edges.windows(2).all(|w| w[0].2 == w[1].2)
    };
    measurements.push(measure("ground".to_string(), &ground, target_f, limits)?);

    let nint = instance.system.nonintersecting_graph();
    measurements.push(measure(
        "nonint".to_string(),
        &nint.graph,
        target_f,
        limits,
    )?);

    for v in 0..instance.system.vertex_count() {
        let link = instance.system.link_graph(v)?;
        measurements.push(measure(
            format!("link:{}", instance.system.vertex_labels()[v]),
            &link,
            target_f,
            limits,
        )?);
    }
    let passed = ground_complete && ground_constant_weight && measurements.iter().all(|m| m.passed);
    Ok(AffineExpansionReport {
        applicable: true,
        lambda_target,
        ground_complete,
        ground_constant_weight,
        measurements,
        passed,
    })
}

/// The ordered (indexed) covers of the non-intersecting graph and of every
/// link, with their projections onto the unordered base graphs.
#[derive(Debug, Clone)]
pub struct OrderedCovers {
    pub nonint_cover: WeightedGraph,
    pub nonint_proj: Vec<usize>,
    /// Per vertex of the system: (ordered link cover, projection onto the link).
    pub link_covers: Vec<(WeightedGraph, Vec<usize>)>,
}

/// Builds the ordered non-intersecting graph and ordered links in one pass
/// over the general-position matrices. Edge weights count matrices.
pub fn ordered_covers(instance: &AffineInstance, caps: &AffineCaps) -> Result<OrderedCovers> {
    let spec = &instance.spec;
    let k = spec.k();
    let tuples = super::orbit_ordered_tuples(spec, caps.orbit)?;
    let tuple_index: BTreeMap<Vec<Point>, usize> = tuples
        .iter()
        .enumerate()
        .map(|(i, t)| (t.clone(), i))
        .collect();
    let mut support_index: BTreeMap<Vec<Point>, usize> = BTreeMap::new();
    for e in 0..instance.system.edge_count() {
        let pts: Vec<Point> = instance
            .system
            .edge(e)
            .iter()
            .map(|&v| v as Point)
            .collect();
        support_index.insert(pts, e);
    }

    let s1 = instance.admissible[0].clone();
    let mut nonint_edges: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    // Per system vertex: accumulated ordered-link edges.
    let mut link_edges: Vec<BTreeMap<(usize, usize), u64>> =
        vec![BTreeMap::new(); instance.system.vertex_count()];

    for_each_gp_matrix(spec, &s1, &s1, caps.gp, |_, product| {
        let rows: Vec<usize> = (0..k)
            .map(|i| {
                let t: Vec<Point> = (0..k).map(|j| product[i * k + j]).collect();
                tuple_index[&t]
            })
            .collect();
        let cols: Vec<usize> = (0..k)
            .map(|j| {
                let t: Vec<Point> = (0..k).map(|i| product[i * k + j]).collect();
                tuple_index[&t]
            })
            .collect();
        // Ordered non-intersecting edges: every pair of rows, every pair of
        // columns (distinct rows/columns never share an entry).
        for a in 0..k {
            for b in a + 1..k {
                let key = (rows[a].min(rows[b]), rows[a].max(rows[b]));
                *nonint_edges.entry(key).or_insert(0) += 1;
                let key = (cols[a].min(cols[b]), cols[a].max(cols[b]));
                *nonint_edges.entry(key).or_insert(0) += 1;
            }
        }
        // Ordered link edges: the row through each entry meets the column
        // through it exactly at that entry.
        for i in 0..k {
            for j in 0..k {
                let v = product[i * k + j] as usize;
                let key = (rows[i].min(cols[j]), rows[i].max(cols[j]));
                *link_edges[v].entry(key).or_insert(0) += 1;
            }
        }
    })?;

    let labels: Vec<String> = tuples
        .iter()
        .map(|t| {
            t.iter()
                .map(|&p| spec.space.label(p))
                .collect::<Vec<_>>()
                .join(";")
        })
        .collect();
    let nonint_cover = WeightedGraph::new(
        labels.clone(),
        nonint_edges
            .into_iter()
            .map(|((a, b), w)| (a, b, rat_u(w)))
            .collect(),
    )?;
    let nonint_proj: Vec<usize> = tuples
        .iter()
        .map(|t| {
            let mut sorted = t.clone();
            sorted.sort_unstable();
            support_index[&sorted]
        })
        .collect();

    let mut link_covers = Vec::with_capacity(instance.system.vertex_count());
    for v in 0..instance.system.vertex_count() {
        // Vertices of the ordered link: tuples containing v.
        let members: Vec<usize> = (0..tuples.len())
            .filter(|&t| tuples[t].contains(&(v as Point)))
            .collect();
        let local: BTreeMap<usize, usize> =
            members.iter().enumerate().map(|(i, &t)| (t, i)).collect();
        let member_labels: Vec<String> = members.iter().map(|&t| labels[t].clone()).collect();
        let edges = link_edges[v]
            .iter()
            .map(|(&(a, b), &w)| (local[&a], local[&b], rat_u(w)))
            .collect();
        let cover = WeightedGraph::new(member_labels, edges)?;
        // Projection onto the link of v, whose vertices are edges_at(v).
        let base_positions: BTreeMap<usize, usize> = instance
            .system
            .edges_at(v)
            .iter()
            .enumerate()
            .map(|(i, &e)| (e, i))
            .collect();
        let proj: Vec<usize> = members
            .iter()
            .map(|&t| {
                let mut sorted = tuples[t].clone();
                sorted.sort_unstable();
                base_positions[&support_index[&sorted]]
            })
            .collect();
        link_covers.push((cover, proj));
    }
    Ok(OrderedCovers {
        nonint_cover,
        nonint_proj,
        link_covers,
    })
}

/// Verifies every ordered cover against its base (structure and weights) and
/// the Cheeger domination h(base) ≥ h(cover) on the measured values.
pub fn verify_ordered_covers(
    instance: &AffineInstance,
    covers: &OrderedCovers,
    limits: &GraphLimits,
) -> Result<()> {
    let measured = |g: &WeightedGraph| -> Result<f64> {
        // Disconnected graphs (weak covers may be) have h = 0 exactly.
        if g.edge_count() == 0 || !g.is_connected() {
            return Ok(0.0);
        }
        if g.vertex_count() <= limits.cheeger_cap {
            Ok(crate::ratio::rat_to_f64(
                &g.cheeger_constant(limits.cheeger_cap)?.0,
            ))
        } else {
            Ok(1.0 - g.second_eigenvalue(limits.spectral_cap)?)
        }
    };
    let nint = instance.system.nonintersecting_graph();
    let verdict = check_weak_cover(&covers.nonint_cover, &nint.graph, &covers.nonint_proj);
    if !verdict.ok {
        return Err(Error::domain(format!(
            "ordered non-intersecting graph is not a weak cover: {}",
            verdict.reason.unwrap_or_default()
        )));
    }
    if measured(&nint.graph)? < measured(&covers.nonint_cover)? - EXPANSION_GUARD {
        return Err(Error::domain(
            "non-intersecting base expands less than its ordered cover".to_string(),
        ));
    }
    for v in 0..instance.system.vertex_count() {
        let link = instance.system.link_graph(v)?;
        let (cover, proj) = &covers.link_covers[v];
        let verdict = check_weak_cover(cover, &link, proj);
        if !verdict.ok {
            return Err(Error::domain(format!(
                "ordered link of {} is not a weak cover: {}",
                instance.system.vertex_labels()[v],
                verdict.reason.unwrap_or_default()
            )));
        }
        if measured(&link)? < measured(cover)? - EXPANSION_GUARD {
            return Err(Error::domain(format!(
                "link of {} expands less than its ordered cover",
                instance.system.vertex_labels()[v]
            )));
        }
    }
    Ok(())
}

/// Size requirement and testability constants for a single-orbit affine
/// instance at a given δ: q^n ≥ k⁴·128(1+15δ)/(7(1-δ)²) yields
/// (δ, ε₀)-unique neighbor expansion with ε₀ = 7(1-δ)³/(512(1+15δ)k²),
/// amplified testability constant r = 7(1-δ)³(δ-(p-1)/p)/(512(1+15δ)) and
/// exponent t = 3.
#[derive(Debug, Clone)]
pub struct AffineThresholds {
    pub size_requirement: Rat,
    pub eps0: Rat,
    pub r: Rat,
    pub t: u32,
}

pub fn affine_testability_thresholds(p: u64, k: usize, delta: &Rat) -> Result<AffineThresholds> {
    let flip = rat_u(p - 1) / rat_u(p);
    if *delta <= flip || *delta >= rat_int(1) {
        return Err(Error::domain(format!(
            "delta must lie strictly between (p-1)/p = {flip} and 1"
        )));
    }
    let one_minus = rat_int(1) - delta;
    let amp = rat_int(1) + rat_int(15) * delta;
    let k4 = rat_u(k as u64).pow(4);
    let size_requirement = k4 * rat_int(128) * &amp / (rat_int(7) * &one_minus * &one_minus);
    let eps0 = rat_int(7) * &one_minus * &one_minus * &one_minus
        / (rat_int(512) * &amp * rat_u((k * k) as u64));
    let r =
        rat_int(7) * &one_minus * &one_minus * &one_minus * (delta - &flip) / (rat_int(512) * &amp);
    Ok(AffineThresholds {
        size_requirement,
        eps0,
        r,
        t: 3,
    })
}

impl AffineThresholds {
    /// Whether a given space size meets the requirement.
    pub fn size_ok(&self, size: u64) -> bool {
        rat_u(size) >= self.size_requirement
    }
}
