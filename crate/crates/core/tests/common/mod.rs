//! Shared generators and independent oracles for the integration suites.
//! Everything is seeded and deterministic.

#![allow(dead_code)]

use hde::graph::{BipartiteGraph, WeightedGraph};
use hde::ratio::{rat, Rat};
use hde::system::{SystemData, TwoLayerSystem};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn pick(rng: &mut ChaCha8Rng, n: usize) -> usize {
    (rng.next_u64() % n as u64) as usize
}

pub fn small_weight(rng: &mut ChaCha8Rng) -> Rat {
    rat(1 + pick(rng, 9) as i64, 1 + pick(rng, 4) as i64)
}

/// Connected weighted graph with n in [min_n, max_n]: a random spanning tree
/// plus extra edges, small rational weights.
pub fn random_connected_graph(rng: &mut ChaCha8Rng, min_n: usize, max_n: usize) -> WeightedGraph {
    let n = min_n + pick(rng, max_n - min_n + 1);
    let labels = (0..n).map(|i| format!("v{i}")).collect();
    let mut edges = Vec::new();
    let mut present = std::collections::HashSet::new();
    for v in 1..n {
        let parent = pick(rng, v);
        present.insert((parent, v));
        edges.push((parent, v, small_weight(rng)));
    }
    let extra = pick(rng, n + 1);
    for _ in 0..extra {
        let a = pick(rng, n);
        let b = pick(rng, n);
        if a == b {
            continue;
        }
        let key = (a.min(b), a.max(b));
        if present.insert(key) {
            edges.push((key.0, key.1, small_weight(rng)));
        }
    }
    WeightedGraph::new(labels, edges).expect("generator produces valid graphs")
}

/// Connected weighted bipartite graph with both sides of size in [2, max].
pub fn random_connected_bipartite(rng: &mut ChaCha8Rng, max_side: usize) -> BipartiteGraph {
    loop {
        let nl = 2 + pick(rng, max_side - 1);
        let nr = 2 + pick(rng, max_side - 1);
        let left = (0..nl).map(|i| format!("l{i}")).collect();
        let right = (0..nr).map(|i| format!("r{i}")).collect();
        let mut present = std::collections::HashSet::new();
        let mut edges = Vec::new();
        // Cover both sides, then sprinkle extras.
        for l in 0..nl {
            let r = pick(rng, nr);
            if present.insert((l, r)) {
                edges.push((l, r, small_weight(rng)));
            }
        }
        for r in 0..nr {
            let l = pick(rng, nl);
            if present.insert((l, r)) {
                edges.push((l, r, small_weight(rng)));
            }
        }
        for _ in 0..pick(rng, nl * nr) {
            let l = pick(rng, nl);
            let r = pick(rng, nr);
            if present.insert((l, r)) {
                edges.push((l, r, small_weight(rng)));
            }
        }
        let g = BipartiteGraph::new(left, right, edges).expect("valid bipartite");
        if g.is_connected() {
            return g;
        }
    }
}

/// A weak cover of `base`: vertices are split into 1-2 copies and every base
/// edge's weight is distributed over a nonempty set of copy pairs.
pub fn random_weak_cover(
    rng: &mut ChaCha8Rng,
    base: &WeightedGraph,
) -> (WeightedGraph, Vec<usize>) {
    let n = base.vertex_count();
    let mut copies: Vec<usize> = (0..n).map(|_| 1 + pick(rng, 2)).collect();
    // At least one split keeps the exercise honest.
    if copies.iter().all(|&c| c == 1) {
        copies[pick(rng, n)] = 2;
    }
    let mut first_copy = vec![0usize; n];
    let mut proj = Vec::new();
    let mut labels = Vec::new();
    for v in 0..n {
        first_copy[v] = proj.len();
        for c in 0..copies[v] {
            proj.push(v);
            labels.push(format!("{}#{c}", base.labels()[v]));
        }
    }
    let mut edges = Vec::new();
    for (a, b, w) in base.edges() {
        let mut pairs = Vec::new();
        for i in 0..copies[*a] {
            for j in 0..copies[*b] {
                pairs.push((first_copy[*a] + i, first_copy[*b] + j));
            }
        }
        let take = 1 + pick(rng, pairs.len());
        // Partition the weight across `take` pairs proportionally to random
        // positive integers.
        let shares: Vec<i64> = (0..take).map(|_| 1 + pick(rng, 5) as i64).collect();
        let total: i64 = shares.iter().sum();
        for (idx, share) in shares.iter().enumerate() {
            let part = w * rat(*share, total);
            let (x, y) = pairs[idx];
            edges.push((x, y, part));
        }
    }
    let cover = WeightedGraph::new(labels, edges).expect("valid cover");
    (cover, proj)
}

/// One random valid two-layer system drawn from four structural families:
/// triangle complexes (2,2,3), 4-cycle complexes (2,2,4), triple-of-triples
/// systems (3,3,3) and theta systems (3,2,5).
pub fn random_system(rng: &mut ChaCha8Rng, max_v: usize) -> TwoLayerSystem {
    loop {
        let mode = pick(rng, 4);
        if let Some(x) = try_random_system(rng, max_v, mode) {
            return x;
        }
    }
}

/// Only s = 2 families (triangle and 4-cycle complexes).
pub fn random_s2_system(rng: &mut ChaCha8Rng, max_v: usize) -> TwoLayerSystem {
    loop {
        let mode = pick(rng, 2);
        if let Some(x) = try_random_system(rng, max_v, mode) {
            return x;
        }
    }
}

fn try_random_system(rng: &mut ChaCha8Rng, max_v: usize, mode: usize) -> Option<TwoLayerSystem> {
    let nv = 4 + pick(rng, max_v.saturating_sub(3));
    let count = 1 + pick(rng, 4);
    let mut sigmas: Vec<Vec<Vec<usize>>> = Vec::new(); // each σ: list of edges (vertex lists)
    for _ in 0..count {
        let sigma = match mode {
            0 => {
                // Triangle: 3 pairwise edges on 3 distinct vertices.
                let t = distinct(rng, nv, 3);
                vec![vec![t[0], t[1]], vec![t[0], t[2]], vec![t[1], t[2]]]
            }
            1 => {
                // 4-cycle: a,b,c,d with edges ab, bc, cd, da.
                let t = distinct(rng, nv, 4);
                vec![
                    vec![t[0], t[1]],
                    vec![t[1], t[2]],
                    vec![t[2], t[3]],
                    vec![t[3], t[0]],
                ]
            }
            2 => {
                // Three of the four 3-subsets of a 4-set: every covered
                // vertex appears in at least 2 of them, s = 3.
                let t = distinct(rng, nv, 4);
                let subsets = [
                    vec![t[0], t[1], t[2]],
                    vec![t[0], t[1], t[3]],
                    vec![t[0], t[2], t[3]],
                    vec![t[1], t[2], t[3]],
                ];
                let skip = pick(rng, 4);
                (0..4)
                    .filter(|&i| i != skip)
                    .map(|i| subsets[i].clone())
                    .collect()
            }
            _ => {
                // Theta: edges ab, bc, ca, ad, db with a, b covered 3 times.
                let t = distinct(rng, nv, 4);
                vec![
                    vec![t[0], t[1]],
                    vec![t[1], t[2]],
                    vec![t[2], t[0]],
                    vec![t[0], t[3]],
                    vec![t[3], t[1]],
                ]
            }
        };
        sigmas.push(sigma);
    }
    assemble_system(rng, sigmas)
}

fn distinct(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Vec<usize> {
    let mut all: Vec<usize> = (0..n).collect();
    for i in 0..k {
        let j = i + pick(rng, n - i);
        all.swap(i, j);
    }
    all.truncate(k);
    all
}

/// Reindexes the union of the σ's into a compact system and builds it.
fn assemble_system(rng: &mut ChaCha8Rng, sigmas: Vec<Vec<Vec<usize>>>) -> Option<TwoLayerSystem> {
    use std::collections::BTreeMap;
    let mut edge_ids: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    let mut tops: Vec<(Rat, Vec<usize>)> = Vec::new();
    let mut top_sets = std::collections::HashSet::new();
    for sigma in &sigmas {
        let mut ids = Vec::new();
        for e in sigma {
            let mut key = e.clone();
            key.sort_unstable();
            let next = edge_ids.len();
            ids.push(*edge_ids.entry(key).or_insert(next));
        }
        ids.sort_unstable();
        if !top_sets.insert(ids.clone()) {
            return None; // duplicate σ: resample
        }
        tops.push((small_weight(rng), ids));
    }
    // Compact vertices.
    let mut vertex_map: BTreeMap<usize, usize> = BTreeMap::new();
    for key in edge_ids.keys() {
        for &v in key {
            let next = vertex_map.len();
            vertex_map.entry(v).or_insert(next);
        }
    }
    let mut edges = vec![Vec::new(); edge_ids.len()];
    let mut edge_labels = vec![String::new(); edge_ids.len()];
    for (key, &id) in &edge_ids {
        edges[id] = key.iter().map(|v| vertex_map[v]).collect();
        edge_labels[id] = format!("e{id}");
    }
    let vertex_labels = (0..vertex_map.len()).map(|i| format!("v{i}")).collect();
    TwoLayerSystem::build(SystemData {
        vertex_labels,
        edge_labels,
        edges,
        tops,
        declared: None,
    })
    .ok()
}

/// The complete bipartite 4-cycle complex on sides (a, b): every 4-cycle of
/// K_{a,b} is a σ. Unit weights. Parameters (2, 2, 4).
pub fn bipartite_cycle_complex(a: usize, b: usize) -> TwoLayerSystem {
    use std::collections::BTreeMap;
    let mut edge_ids: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let id_of = |l: usize, r: usize, map: &mut BTreeMap<(usize, usize), usize>| {
        let next = map.len();
        *map.entry((l, r)).or_insert(next)
    };
    let mut tops = Vec::new();
    for l1 in 0..a {
        for l2 in l1 + 1..a {
            for r1 in 0..b {
                for r2 in r1 + 1..b {
                    let sigma = vec![
                        id_of(l1, r1, &mut edge_ids),
                        id_of(l1, r2, &mut edge_ids),
                        id_of(l2, r1, &mut edge_ids),
                        id_of(l2, r2, &mut edge_ids),
                    ];
                    tops.push((rat(1, 1), sigma));
                }
            }
        }
    }
    let mut edges = vec![Vec::new(); edge_ids.len()];
    let mut edge_labels = vec![String::new(); edge_ids.len()];
    for (&(l, r), &id) in &edge_ids {
        edges[id] = vec![l, a + r];
        edge_labels[id] = format!("l{l}r{r}");
    }
    let vertex_labels = (0..a)
        .map(|i| format!("l{i}"))
        .chain((0..b).map(|i| format!("r{i}")))
        .collect();
    TwoLayerSystem::build(SystemData {
        vertex_labels,
        edge_labels,
        edges,
        tops,
        declared: Some((2, 2, 4)),
    })
    .expect("bipartite cycle complex is valid")
}

// ---------------------------------------------------------------------------
// Independent oracles
// ---------------------------------------------------------------------------

/// Small exact fraction on i128, written independently of the library's
/// rational type so threshold formulas can be cross-checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Frac {
    pub n: i128,
    pub d: i128,
}

impl Frac {
    pub fn new(n: i128, d: i128) -> Frac {
        assert!(d != 0);
        let g = gcd(n.abs(), d.abs()).max(1);
        let sign = if d < 0 { -1 } else { 1 };
        Frac {
            n: sign * n / g,
            d: sign * d / g,
        }
    }

    pub fn int(n: i128) -> Frac {
        Frac { n, d: 1 }
    }

    pub fn add(self, o: Frac) -> Frac {
        Frac::new(self.n * o.d + o.n * self.d, self.d * o.d)
    }

    pub fn sub(self, o: Frac) -> Frac {
        Frac::new(self.n * o.d - o.n * self.d, self.d * o.d)
    }

    pub fn mul(self, o: Frac) -> Frac {
        Frac::new(self.n * o.n, self.d * o.d)
    }

    pub fn div(self, o: Frac) -> Frac {
        assert!(o.n != 0);
        Frac::new(self.n * o.d, self.d * o.n)
    }

    pub fn min(self, o: Frac) -> Frac {
        if self.n * o.d <= o.n * self.d {
            self
        } else {
            o
        }
    }

    pub fn to_rat(self) -> Rat {
        Rat::new(BigInt::from(self.n), BigInt::from(self.d))
    }
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Characteristic polynomial coefficients of the rational random-walk matrix
/// via Faddeev-LeVerrier: returns [c_0 = 1, c_1, ..., c_n] with
/// char(x) = Σ c_i x^(n-i).
pub fn walk_char_poly(g: &WeightedGraph) -> Vec<Rat> {
    let n = g.vertex_count();
    let zero = rat(0, 1);
    // M[i][j] = m({i,j}) / m(i)
    let mut m = vec![vec![zero.clone(); n]; n];
    for (a, b, w) in g.edges() {
        m[*a][*b] = w / g.vertex_weights()[*a].clone();
        m[*b][*a] = w / g.vertex_weights()[*b].clone();
    }
    let mul = |x: &Vec<Vec<Rat>>, y: &Vec<Vec<Rat>>| -> Vec<Vec<Rat>> {
        let mut out = vec![vec![rat(0, 1); n]; n];
        for i in 0..n {
            for k in 0..n {
                for j in 0..n {
                    let prod = &x[i][j] * &y[j][k];
                    out[i][k] += prod;
                }
            }
        }
        out
    };
    let trace = |x: &Vec<Vec<Rat>>| -> Rat { (0..n).map(|i| x[i][i].clone()).sum() };
    let mut coeffs = vec![rat(1, 1)];
    let mut mk = m.clone();
    for k in 1..=n {
        let ck = -trace(&mk) / rat(k as i64, 1);
        coeffs.push(ck.clone());
        if k < n {
            // M_{k+1} = M (M_k + c_k I)
            let mut shifted = mk.clone();
            for i in 0..n {
                shifted[i][i] += &ck;
            }
            mk = mul(&m, &shifted);
        }
    }
    coeffs
}

/// Elementary-symmetric expansion of Π (x - λ_i): coefficients [1, e_1*(-1),
/// ...] matching `walk_char_poly`'s layout.
pub fn poly_from_roots(roots: &[f64]) -> Vec<f64> {
    let mut coeffs = vec![1.0];
    for &r in roots {
        let mut next = vec![0.0; coeffs.len() + 1];
        for (i, &c) in coeffs.iter().enumerate() {
            next[i] += c;
            next[i + 1] -= c * r;
        }
        coeffs = next;
    }
    coeffs
}
