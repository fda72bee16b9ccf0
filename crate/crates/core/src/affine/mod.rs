//! Single-orbit affine-invariant codes and their backing two-layer systems:
//! orbits of a base support under Aff(K^n), admissible index sets, the linear
//! reconstruction maps M_S, general-position matrices B, the row/column
//! dependencies they induce, and the expansion estimates for the resulting
//! (2, k, 2k)-system.

use crate::code::{ConstraintRow, LinearCodeModel};
use crate::field::{Fp, FpMatrix};
use crate::ratio::{rat_int, rat_u, Rat};
use crate::system::{SystemData, TwoLayerSystem};
use crate::{Error, Result};
use std::collections::BTreeMap;

pub const DEFAULT_ORBIT_CAP: u64 = 4096;
pub const DEFAULT_GP_CAP: u64 = 1 << 24;

/// A point of K^n encoded as an integer in [0, q^n) with base-q digits.
pub type Point = u64;

/// The ambient space K^n for a prime q.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Space {
    pub q: u64,
    pub n: usize,
}

impl Space {
    pub fn new(q: u64, n: usize) -> Result<Self> {
        if !crate::field::is_prime(q) {
            return Err(Error::domain(format!("field size {q} is not prime")));
        }
        if n == 0 {
            return Err(Error::domain("dimension must be positive".to_string()));
        }
        Ok(Space { q, n })
    }

    pub fn size(&self) -> u64 {
        self.q.pow(self.n as u32)
    }

    pub fn field(&self) -> Fp {
        Fp { p: self.q }
    }

    pub fn coords(&self, p: Point) -> Vec<u64> {
        let mut digits = Vec::with_capacity(self.n);
        let mut rest = p;
        for _ in 0..self.n {
            digits.push(rest % self.q);
            rest /= self.q;
        }
        digits
    }

    pub fn point(&self, coords: &[u64]) -> Point {
        let mut id = 0u64;
        for &c in coords.iter().rev() {
            id = id * self.q + c % self.q;
        }
        id
    }

    pub fn add(&self, a: Point, b: Point) -> Point {
        if self.q == 2 {
            // Base-2 digits are bits: coordinate-wise addition is xor.
            return a ^ b;
        }
        let (ca, cb) = (self.coords(a), self.coords(b));
        let f = self.field();
        self.point(&(0..self.n).map(|i| f.add(ca[i], cb[i])).collect::<Vec<_>>())
    }

    pub fn sub(&self, a: Point, b: Point) -> Point {
        if self.q == 2 {
            return a ^ b;
        }
        let (ca, cb) = (self.coords(a), self.coords(b));
        let f = self.field();
        self.point(&(0..self.n).map(|i| f.sub(ca[i], cb[i])).collect::<Vec<_>>())
    }

    pub fn scale(&self, s: u64, a: Point) -> Point {
        if self.q == 2 {
            return if s & 1 == 1 { a } else { 0 };
        }
        let ca = self.coords(a);
        let f = self.field();
        self.point(&(0..self.n).map(|i| f.mul(s, ca[i])).collect::<Vec<_>>())
    }

    pub fn label(&self, p: Point) -> String {
        self.coords(p)
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// Specification of a single-orbit affine-invariant code: the field prime q,
/// the dimension n, the code alphabet prime p, and the base support with its
/// fixed indexation.
#[derive(Debug, Clone)]
pub struct AffineCodeSpec {
    pub space: Space,
    pub p: u64,
    pub tau0: Vec<Point>,
}

impl AffineCodeSpec {
    pub fn new(q: u64, n: usize, p: u64, tau0: Vec<Point>) -> Result<Self> {
        let space = Space::new(q, n)?;
        if !crate::field::is_prime(p) {
            return Err(Error::domain(format!("alphabet {p} is not prime")));
        }
        if tau0.len() < 2 {
            return Err(Error::domain(
                "base support needs at least 2 vectors".to_string(),
            ));
        }
        let mut sorted = tau0.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != tau0.len() {
            return Err(Error::domain(
                "base support vectors must be distinct".to_string(),
            ));
        }
        if tau0.iter().any(|&x| x >= space.size()) {
            return Err(Error::domain(
                "base support vector outside the space".to_string(),
            ));
        }
        Ok(AffineCodeSpec { space, p, tau0 })
    }

    pub fn k(&self) -> usize {
        self.tau0.len()
    }
}

/// True iff x₂-x₁, ..., x_m-x₁ are linearly independent over K.
pub fn general_position(space: &Space, vs: &[Point]) -> Result<bool> {
    if vs.is_empty() {
        return Err(Error::domain(
            "general position of an empty sequence".to_string(),
        ));
    }
    if vs.len() == 1 {
        return Ok(true);
    }
    if vs.len() > space.n + 1 {
        return Ok(false);
    }
    if vs.len() == 2 {
        return Ok(vs[0] != vs[1]);
    }
    let f = space.field();
    let cols: Vec<Vec<u64>> = vs[1..]
        .iter()
        .map(|&v| space.coords(space.sub(v, vs[0])))
        .collect();
    let rows: Vec<Vec<u64>> = (0..space.n)
        .map(|i| cols.iter().map(|c| c[i]).collect())
        .collect();
    let m = FpMatrix::from_rows(f, &rows);
    Ok(m.rank() == vs.len() - 1)
}

/// One generator of Aff(K^n) acting on points.
#[derive(Debug, Clone, Copy)]
enum Generator {
    Translate(usize),
    Transvect(usize, usize),
    Dilate(u64),
}

impl Generator {
    fn apply(&self, space: &Space, p: Point) -> Point {
        let f = space.field();
        let mut c = space.coords(p);
        match *self {
            Generator::Translate(i) => c[i] = f.add(c[i], 1),
            Generator::Transvect(i, j) => c[i] = f.add(c[i], c[j]),
            Generator::Dilate(g) => c[0] = f.mul(g, c[0]),
        }
        space.point(&c)
    }
}

fn affine_generators(space: &Space) -> Vec<Generator> {
    let mut gens = Vec::new();
    for i in 0..space.n {
        gens.push(Generator::Translate(i));
        for j in 0..space.n {
            if i != j {
                gens.push(Generator::Transvect(i, j));
            }
        }
    }
    if space.q > 2 {
        gens.push(Generator::Dilate(space.field().generator()));
    }
    gens
}

/// Orbit of the base support under Aff(K^n), as sorted point sets, via
/// closure under group generators rather than full group enumeration.
pub fn orbit_supports(spec: &AffineCodeSpec, cap: u64) -> Result<Vec<Vec<Point>>> {
    if spec.space.size() > cap {
        return Err(Error::capacity(format!(
            "orbit cap {cap} exceeded by |K^n| = {}",
            spec.space.size()
        )));
    }
    let gens = affine_generators(&spec.space);
    let mut start: Vec<Point> = spec.tau0.clone();
    start.sort_unstable();
    let mut seen = std::collections::BTreeSet::new();
    seen.insert(start.clone());
    let mut frontier = vec![start];
    while let Some(current) = frontier.pop() {
        for g in &gens {
            let mut image: Vec<Point> = current.iter().map(|&p| g.apply(&spec.space, p)).collect();
            image.sort_unstable();
            if seen.insert(image.clone()) {
                frontier.push(image);
            }
        }
    }
    Ok(seen.into_iter().collect())
}

/// Orbit of the ordered base tuple under Aff(K^n).
pub fn orbit_ordered_tuples(spec: &AffineCodeSpec, cap: u64) -> Result<Vec<Vec<Point>>> {
    if spec.space.size() > cap {
        return Err(Error::capacity(format!(
            "orbit cap {cap} exceeded by |K^n| = {}",
            spec.space.size()
        )));
    }
    let gens = affine_generators(&spec.space);
    let start: Vec<Point> = spec.tau0.clone();
    let mut seen = std::collections::BTreeSet::new();
    seen.insert(start.clone());
    let mut frontier = vec![start];
    while let Some(current) = frontier.pop() {
        for g in &gens {
            let image: Vec<Point> = current.iter().map(|&p| g.apply(&spec.space, p)).collect();
            if seen.insert(image.clone()) {
                frontier.push(image);
            }
        }
    }
    Ok(seen.into_iter().collect())
}

/// All maximal general-position index subsets of τ₀ and their common size k'.
pub fn admissible_sets(spec: &AffineCodeSpec) -> Result<(Vec<Vec<usize>>, usize)> {
    let k = spec.k();
    let mut in_gp: Vec<Vec<usize>> = Vec::new();
    // Affine independence is a matroid, so maximal = no single-index extension.
    for mask in 1u64..(1 << k) {
        let subset: Vec<usize> = (0..k).filter(|i| mask >> i & 1 == 1).collect();
        let points: Vec<Point> = subset.iter().map(|&i| spec.tau0[i]).collect();
        if general_position(&spec.space, &points)? {
            in_gp.push(subset);
        }
    }
    let mut maximal = Vec::new();
    'outer: for s in &in_gp {
        for i in 0..k {
            if s.contains(&i) {
                continue;
            }
            let mut extended_pts: Vec<Point> = s.iter().map(|&j| spec.tau0[j]).collect();
            extended_pts.push(spec.tau0[i]);
            if general_position(&spec.space, &extended_pts)? {
                continue 'outer;
            }
        }
        maximal.push(s.clone());
    }
    maximal.sort();
    let k_prime = maximal.first().map_or(0, |s| s.len());
    if maximal.iter().any(|s| s.len() != k_prime) {
        return Err(Error::domain(
            "admissible sets of unequal size; base support is inconsistent".to_string(),
        ));
    }
    if k_prime < 2 || k_prime > spec.space.n + 1 {
        return Err(Error::domain(format!(
            "admissible size k' = {k_prime} outside [2, n+1]"
        )));
    }
    // Every index pair lies in some admissible set.
    for i1 in 0..k {
        for i2 in i1 + 1..k {
            if !maximal.iter().any(|s| s.contains(&i1) && s.contains(&i2)) {
                return Err(Error::domain(format!(
                    "no admissible set contains the index pair ({i1}, {i2})"
                )));
            }
        }
    }
    Ok((maximal, k_prime))
}

/// The k × k' matrix M_S of reconstruction coefficients: row i expresses x_i
/// as an affine combination of (x_j)_{j ∈ S}, so every row sums to 1 and the
/// rows indexed by S are indicator rows.
pub fn ell_maps(spec: &AffineCodeSpec, s: &[usize]) -> Result<Vec<Vec<u64>>> {
    let space = &spec.space;
    let f = space.field();
    let points: Vec<Point> = s.iter().map(|&i| spec.tau0[i]).collect();
    if !general_position(space, &points)? {
        return Err(Error::domain(
            "index set is not in general position".to_string(),
        ));
    }
    let j0 = s[0]; // smallest index of S (sets are kept sorted)
    let x0 = spec.tau0[j0];
    let others: Vec<usize> = s[1..].to_vec();
    // Columns of the solve: x_j - x_{j0} for j in S \ {j0}.
    let cols: Vec<Vec<u64>> = others
        .iter()
        .map(|&j| space.coords(space.sub(spec.tau0[j], x0)))
        .collect();
    let rows: Vec<Vec<u64>> = (0..space.n)
        .map(|i| cols.iter().map(|c| c[i]).collect())
        .collect();
    let solve_matrix = FpMatrix::from_rows(f, &rows);

    let mut m = vec![vec![0u64; s.len()]; spec.k()];
    for i in 0..spec.k() {
        let rhs = space.coords(space.sub(spec.tau0[i], x0));
        let alphas = solve_matrix.solve(&rhs).ok_or_else(|| {
            Error::domain(format!(
                "index {i} is not in the affine span of the admissible set"
            ))
        })?;
        let mut sum = 0u64;
        for (pos, &alpha) in alphas.iter().enumerate() {
            m[i][pos + 1] = alpha;
            sum = f.add(sum, alpha);
        }
        m[i][0] = f.sub(1, sum);
    }
    // Reconstruction must return τ₀ itself, and indicator rows on S.
    for i in 0..spec.k() {
        if apply_row(space, &m[i], &points) != spec.tau0[i] {
            return Err(Error::domain(format!("M_S fails to reconstruct x_{i}")));
        }
    }
    for (pos, &j) in s.iter().enumerate() {
        if m[j]
            .iter()
            .enumerate()
            .any(|(l, &c)| (l == pos) != (c == 1))
        {
            return Err(Error::domain(format!(
                "M_S row {j} is not the indicator of S[{pos}]"
            )));
        }
    }
    Ok(m)
}

fn apply_row(space: &Space, row: &[u64], ys: &[Point]) -> Point {
    let mut acc = 0u64; // zero vector encodes as 0
    for (j, &coef) in row.iter().enumerate() {
        acc = space.add(acc, space.scale(coef, ys[j]));
    }
    acc
}

/// A k' × k' candidate matrix of points, flattened row-major.
pub type GpMatrix = Vec<Point>;

/// The k × k product M_{S1} B M_{S2}^t, flattened row-major.
fn product_matrix(
    space: &Space,
    m1: &[Vec<u64>],
    m2: &[Vec<u64>],
    b: &[Point],
    k_prime: usize,
) -> Vec<Point> {
    let k = m1.len();
    // Left multiply: (M1 B)_{i,l} = Σ_j m1[i][j] · B[j][l]  (k × k')
    let mut left = vec![0u64; k * k_prime];
    for i in 0..k {
        for l in 0..k_prime {
            let mut acc = 0u64;
            for j in 0..k_prime {
                if m1[i][j] != 0 {
                    acc = space.add(acc, space.scale(m1[i][j], b[j * k_prime + l]));
                }
            }
            left[i * k_prime + l] = acc;
        }
    }
    // Right multiply by M2^t: (L M2^t)_{i,i'} = Σ_l L[i][l] · m2[i'][l]
    let mut out = vec![0u64; k * k];
    for i in 0..k {
        for i2 in 0..k {
            let mut acc = 0u64;
            for l in 0..k_prime {
                if m2[i2][l] != 0 {
                    acc = space.add(acc, space.scale(m2[i2][l], left[i * k_prime + l]));
                }
            }
            out[i * k + i2] = acc;
        }
    }
    out
}

fn is_general_position_matrix(
    space: &Space,
    m1: &[Vec<u64>],
    m2: &[Vec<u64>],
    b: &[Point],
    k_prime: usize,
    product: &[Point],
) -> Result<bool> {
    let k = m1.len();
    // Entries of the product pairwise distinct.
    let mut entries = product.to_vec();
    entries.sort_unstable();
    for w in entries.windows(2) {
        if w[0] == w[1] {
            return Ok(false);
        }
    }
    // Rows of M1 B in general position.
    for i in 0..k {
        let row: Vec<Point> = (0..k_prime)
            .map(|l| {
                let mut acc = 0u64;
                for j in 0..k_prime {
                    if m1[i][j] != 0 {
                        acc = space.add(acc, space.scale(m1[i][j], b[j * k_prime + l]));
                    }
                }
                acc
            })
            .collect();
        if !general_position(space, &row)? {
            return Ok(false);
        }
    }
    // Columns of B M2^t in general position: column i' has entries
    // Σ_l B[j][l]·m2[i'][l] over j.
    for i2 in 0..k {
        let col: Vec<Point> = (0..k_prime)
            .map(|j| {
                let mut acc = 0u64;
                for l in 0..k_prime {
                    if m2[i2][l] != 0 {
                        acc = space.add(acc, space.scale(m2[i2][l], b[j * k_prime + l]));
                    }
                }
                acc
            })
            .collect();
        if !general_position(space, &col)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Exhaustively enumerates general-position matrices B for the admissible
/// pair (S1, S2), feeding each (B, M_{S1} B M_{S2}^t) to the callback.
/// Returns the count. Errors when the candidate space exceeds `cap`.
pub fn for_each_gp_matrix<F>(
    spec: &AffineCodeSpec,
    s1: &[usize],
    s2: &[usize],
    cap: u64,
    mut f: F,
) -> Result<u64>
where
    F: FnMut(&GpMatrix, &[Point]),
{
    let (m1, m2) = (ell_maps(spec, s1)?, ell_maps(spec, s2)?);
    let k_prime = s1.len();
    let cells = k_prime * k_prime;
    let size = spec.space.size();
    let mut candidates: u64 = 1;
    for _ in 0..cells {
        candidates = candidates
            .checked_mul(size)
            .filter(|&c| c <= cap)
            .ok_or_else(|| {
                Error::capacity(format!(
                    "general-position enumeration needs (q^n)^(k'^2) = {size}^{cells} > cap {cap}"
                ))
            })?;
    }
    let mut b: GpMatrix = vec![0; cells];
    let mut count = 0u64;
    for idx in 0..candidates {
        let mut rest = idx;
        for cell in b.iter_mut() {
            *cell = rest % size;
            rest /= size;
        }
        let product = product_matrix(&spec.space, &m1, &m2, &b, k_prime);
        if is_general_position_matrix(&spec.space, &m1, &m2, &b, k_prime, &product)? {
            f(&b, &product);
            count += 1;
        }
    }
    Ok(count)
}

/// Exhaustive count of general-position matrices, checked against the
/// union-bound guarantee count ≥ (q^n)^(k'²) · (1 - (2k' + C(k², 2))/q^n):
/// 2k' row/column conditions plus one condition per unordered entry pair,
/// each failing on a codimension-1 subspace.
pub fn count_gp_matrices(
    spec: &AffineCodeSpec,
    s1: &[usize],
    s2: &[usize],
    cap: u64,
) -> Result<u64> {
    let count = for_each_gp_matrix(spec, s1, s2, cap, |_, _| {})?;
    let size = spec.space.size();
    let k = spec.k() as u64;
    let k_prime = s1.len() as u64;
    let cells = (s1.len() * s1.len()) as u32;
    let conditions = 2 * k_prime + (k * k) * (k * k - 1) / 2;
    let total = rat_u(size).pow(cells as i32);
    let bound = &total * (rat_int(1) - rat_u(conditions) / rat_u(size));
    if rat_u(count) < bound {
        return Err(Error::domain(format!(
            "general-position count {count} falls below the counting bound {bound}"
        )));
    }
    Ok(count)
}

/// Density estimate of general-position matrices by seeded uniform sampling,
/// for candidate spaces beyond the exhaustive cap.
pub fn sample_gp_density(
    spec: &AffineCodeSpec,
    s1: &[usize],
    s2: &[usize],
    samples: u64,
    seed: u64,
) -> Result<f64> {
    use rand::{Rng, SeedableRng};
    let (m1, m2) = (ell_maps(spec, s1)?, ell_maps(spec, s2)?);
    let k_prime = s1.len();
    let cells = k_prime * k_prime;
    let size = spec.space.size();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut hits = 0u64;
    for _ in 0..samples.max(1) {
        let b: GpMatrix = (0..cells).map(|_| rng.next_u64() % size).collect();
        let product = product_matrix(&spec.space, &m1, &m2, &b, k_prime);
        if is_general_position_matrix(&spec.space, &m1, &m2, &b, k_prime, &product)? {
            hits += 1;
        }
    }
    Ok(hits as f64 / samples.max(1) as f64)
}

/// Signed supports of a dependency: each support paired with +1 or p-1.
pub type SignedSupports = Vec<(Vec<Point>, u64)>;

/// The dependency induced by a general-position matrix: +1 on the supports of
/// the product's rows, -1 (that is, p-1) on the supports of its columns.
/// Returns the signed supports and σ, the set of all 2k supports.
pub fn dependency_of(
    spec: &AffineCodeSpec,
    s1: &[usize],
    s2: &[usize],
    b: &GpMatrix,
) -> Result<(SignedSupports, Vec<Vec<Point>>)> {
    let (m1, m2) = (ell_maps(spec, s1)?, ell_maps(spec, s2)?);
    let k_prime = s1.len();
    let product = product_matrix(&spec.space, &m1, &m2, b, k_prime);
    if !is_general_position_matrix(&spec.space, &m1, &m2, b, k_prime, &product)? {
        return Err(Error::domain(
            "matrix is not in general position".to_string(),
        ));
    }
    Ok(dependency_of_product(spec, &product))
}

fn dependency_of_product(
    spec: &AffineCodeSpec,
    product: &[Point],
) -> (SignedSupports, Vec<Vec<Point>>) {
    let k = spec.k();
    let mut signed = Vec::with_capacity(2 * k);
    let mut sigma = Vec::with_capacity(2 * k);
    for i in 0..k {
        let mut row: Vec<Point> = (0..k).map(|j| product[i * k + j]).collect();
        row.sort_unstable();
        sigma.push(row.clone());
        signed.push((row, 1u64));
    }
    for j in 0..k {
        let mut col: Vec<Point> = (0..k).map(|i| product[i * k + j]).collect();
        col.sort_unstable();
        sigma.push(col.clone());
        signed.push((col, spec.p - 1));
    }
    sigma.sort();
    sigma.dedup();
    (signed, sigma)
}

/// A fully built affine instance: system, modelled code, and bookkeeping.
#[derive(Debug, Clone)]
pub struct AffineInstance {
    pub spec: AffineCodeSpec,
    pub system: TwoLayerSystem,
    pub code: LinearCodeModel,
    pub k_prime: usize,
    pub admissible: Vec<Vec<usize>>,
    pub gp_count: u64,
}

#[derive(Debug, Clone, Copy)]
pub struct AffineCaps {
    pub orbit: u64,
    pub gp: u64,
}

impl Default for AffineCaps {
    fn default() -> Self {
        AffineCaps {
            orbit: DEFAULT_ORBIT_CAP,
            gp: DEFAULT_GP_CAP,
        }
    }
}

pub fn build_affine_instance(spec: &AffineCodeSpec, caps: &AffineCaps) -> Result<AffineInstance> {
    let space = spec.space;
    let supports = orbit_supports(spec, caps.orbit)?;
    let mut edge_of_support: BTreeMap<Vec<Point>, usize> = BTreeMap::new();
    for (i, s) in supports.iter().enumerate() {
        edge_of_support.insert(s.clone(), i);
    }
    let (admissible, k_prime) = admissible_sets(spec)?;
    let s_first = admissible[0].clone();
    let pair = (s_first.clone(), s_first.clone());

    let (tops, weights, reps, gp_count) =
        tally_dependencies(spec, &pair.0, &pair.1, &edge_of_support, caps.gp)?;
    if tops.is_empty() {
        return Err(Error::domain(format!(
            "no general-position matrices exist; T is empty (guaranteed non-empty when q^n > k^2 = {})",
            spec.k() * spec.k()
        )));
    }

    // The construction must not depend on the admissible pair chosen.
    let second_pair = if admissible.len() > 1 {
        (s_first.clone(), admissible[1].clone())
    } else {
        pair.clone()
    };
    let (tops2, weights2, _, _) = tally_dependencies(
        spec,
        &second_pair.0,
        &second_pair.1,
        &edge_of_support,
        caps.gp,
    )?;
    if tops != tops2 || weights != weights2 {
        return Err(Error::domain(
            "dependency supports differ between admissible pairs".to_string(),
        ));
    }

    let vertex_labels: Vec<String> = (0..space.size()).map(|p| space.label(p)).collect();
    let edge_labels: Vec<String> = (0..supports.len()).map(|i| format!("e{i}")).collect();
    let edges: Vec<Vec<usize>> = supports
        .iter()
        .map(|s| s.iter().map(|&p| p as usize).collect())
        .collect();
    let top_list: Vec<(Rat, Vec<usize>)> = tops
        .iter()
        .zip(&weights)
        .map(|(sigma, &w)| (rat_u(w), sigma.clone()))
        .collect();
    let system = TwoLayerSystem::build(SystemData {
        vertex_labels,
        edge_labels,
        edges,
        tops: top_list,
        declared: Some((2, spec.k(), 2 * spec.k())),
    })?;

    // The non-intersecting regularity ratio of this construction is exactly 1.
    let nint = system.nonintersecting_graph();
    if nint.r_nint != rat_int(1) {
        return Err(Error::domain(format!(
            "affine instance has R_nint = {} instead of 1",
            nint.r_nint
        )));
    }
    // Transitivity makes the induced weights constant on E and on V.
    let (we, wv) = system.induced_weights();
    if we.windows(2).any(|w| w[0] != w[1]) || wv.windows(2).any(|w| w[0] != w[1]) {
        return Err(Error::domain(
            "induced weights are not constant on E and V".to_string(),
        ));
    }

    // Indicator constraint per support, dependency per top element from a
    // representative matrix.
    let rows: Vec<ConstraintRow> = (0..system.edge_count())
        .map(|e| ConstraintRow::new(system.edge(e).iter().map(|&v| (v, 1)).collect(), spec.p))
        .collect::<Result<_>>()?;
    let mut deps: Vec<Vec<(usize, u64)>> = Vec::with_capacity(tops.len());
    for sigma in &tops {
        deps.push(reps[sigma].clone());
    }
    let code = LinearCodeModel::build(spec.p, system.clone(), rows, deps)?;
    Ok(AffineInstance {
        spec: spec.clone(),
        system,
        code,
        k_prime,
        admissible,
        gp_count,
    })
}

/// (sorted top supports, weights, representative dependency per support, count)
type Tally = (
    Vec<Vec<usize>>,
    Vec<u64>,
    BTreeMap<Vec<usize>, Vec<(usize, u64)>>,
    u64,
);

fn tally_dependencies(
    spec: &AffineCodeSpec,
    s1: &[usize],
    s2: &[usize],
    edge_of_support: &BTreeMap<Vec<Point>, usize>,
    cap: u64,
) -> Result<Tally> {
    let mut tally: BTreeMap<Vec<usize>, u64> = BTreeMap::new();
    let mut reps: BTreeMap<Vec<usize>, Vec<(usize, u64)>> = BTreeMap::new();
    let count = for_each_gp_matrix(spec, s1, s2, cap, |_, product| {
        let (signed, _) = dependency_of_product(spec, product);
        let mut ids: Vec<usize> = signed
            .iter()
            .map(|(support, _)| edge_of_support[support])
            .collect();
        ids.sort_unstable();
        ids.dedup();
        *tally.entry(ids.clone()).or_insert(0) += 1;
        reps.entry(ids).or_insert_with(|| {
            signed
                .iter()
                .map(|(support, coeff)| (edge_of_support[support], *coeff))
                .collect()
        });
    })?;
    let mut tops = Vec::with_capacity(tally.len());
    let mut weights = Vec::with_capacity(tally.len());
    for (sigma, w) in tally {
        tops.push(sigma);
        weights.push(w);
    }
    Ok((tops, weights, reps, count))
}

mod checks;
pub use checks::{
    affine_expansion_check, affine_testability_thresholds, ordered_covers, verify_ordered_covers,
    AffineExpansionReport, AffineThresholds, GraphMeasurement, OrderedCovers,
};
