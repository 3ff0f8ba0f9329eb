//! Lattice geometry in the row-vector convention: the lattice generated by a
//! basis `g` is `ℤⁿ·g`, i.e. the integer span of the rows of `g`.
//!
//! Short vectors are found exactly: the generators are LLL-reduced and then
//! enumerated by Fincke–Pohst branch-and-bound, with a small radius slack so
//! that rounding in the pruning step never drops a boundary vector.

use nalgebra::DMatrix;
use rand::Rng;

use crate::special::unit_ball_volume;
use crate::{Error, Result};

/// Default cap on the number of vectors a single enumeration may return.
pub const DEFAULT_ENUMERATION_BUDGET: usize = 10_000_000;

/// Largest rank accepted by [`successive_minima`].
pub const MAX_MINIMA_RANK: usize = 4;

/// A basis of a full-rank lattice in `ℝⁿ`, rows are the generators.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeBasis {
    matrix: DMatrix<f64>,
}

impl LatticeBasis {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::DegenerateBasis("empty basis".into()));
        }
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::DegenerateBasis(format!(
                "basis must be square ({n} rows)"
            )));
        }
        if rows.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::DegenerateBasis("non-finite entry".into()));
        }
        let matrix = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
        Self::from_matrix(matrix)
    }

    pub fn from_matrix(matrix: DMatrix<f64>) -> Result<Self> {
        if !matrix.is_square() || matrix.nrows() == 0 {
            return Err(Error::DegenerateBasis("basis must be square".into()));
        }
        let det = matrix.clone().lu().determinant();
        let scale: f64 = matrix
            .row_iter()
            .map(|r| r.norm())
            .product::<f64>()
            .max(f64::MIN_POSITIVE);
        if det == 0.0 || !det.is_finite() || (det.abs() / scale) < 1e-14 {
            return Err(Error::DegenerateBasis(format!(
                "determinant {det:e} is numerically zero"
            )));
        }
        Ok(Self { matrix })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            matrix: DMatrix::identity(n, n),
        }
    }

    pub fn diagonal(entries: &[f64]) -> Result<Self> {
        let n = entries.len();
        Self::from_matrix(DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                entries[i]
            } else {
                0.0
            }
        }))
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.matrix
            .row_iter()
            .map(|r| r.iter().copied().collect())
            .collect()
    }

    /// `c·g`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::from_matrix(&self.matrix * c)
    }

    /// `U·g` for an integer matrix `U` (same lattice when `U` is unimodular).
    pub fn left_multiply(&self, u: &[Vec<i64>]) -> Result<Self> {
        let n = self.dim();
        let um = DMatrix::from_fn(n, n, |i, j| u[i][j] as f64);
        Self::from_matrix(um * &self.matrix)
    }

    /// `g·m`, the right action by a linear map of `ℝⁿ`.
    pub fn right_multiply(&self, m: &DMatrix<f64>) -> Result<Self> {
        Self::from_matrix(&self.matrix * m)
    }

    /// `g / |det g|^{1/n}`, the homothetic basis of covolume one.
    pub fn normalized(&self) -> Self {
        let n = self.dim() as f64;
        let d = determinant(self).abs();
        Self {
            matrix: &self.matrix / d.powf(1.0 / n),
        }
    }
}

/// `det g`; its absolute value is the covolume.
pub fn determinant(basis: &LatticeBasis) -> f64 {
    basis.matrix.clone().lu().determinant()
}

/// The dual basis `ᵗg⁻¹`: its rows pair with the rows of `g` to the identity.
pub fn dual_basis(basis: &LatticeBasis) -> Result<LatticeBasis> {
    let inv = basis
        .matrix
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::DegenerateBasis("matrix is not invertible".into()))?;
    LatticeBasis::from_matrix(inv.transpose())
}

/// A lattice vector: integer coordinates in the caller's generators, the
/// vector itself and its Euclidean length.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeVector {
    pub coeffs: Vec<i64>,
    pub vector: Vec<f64>,
    pub norm: f64,
}

/// LLL-reduce a set of linearly independent row generators (`δ = 0.99`).
/// Returns the reduced rows and the integer transform `U` with
/// `reduced = U · generators`.
pub fn lll_reduce(generators: &[Vec<f64>]) -> (Vec<Vec<f64>>, Vec<Vec<i64>>) {
    let k = generators.len();
    let mut b: Vec<Vec<f64>> = generators.to_vec();
    let mut u: Vec<Vec<i64>> = (0..k)
        .map(|i| (0..k).map(|j| i64::from(i == j)).collect())
        .collect();
    if k <= 1 {
        return (b, u);
    }
    let delta = 0.99;
    let mut i = 1;
    let mut guard = 0usize;
    while i < k {
        guard += 1;
        if guard > 1_000_000 {
            break;
        }
        // size-reduce row i
        for j in (0..i).rev() {
            let (mu_now, _) = gram_schmidt_row(&b, i, j);
            let q = mu_now.round();
            if q != 0.0 {
                let qi = q as i64;
                let (bj, uj) = (b[j].clone(), u[j].clone());
                for (x, y) in b[i].iter_mut().zip(&bj) {
                    *x -= q * y;
                }
                for (x, y) in u[i].iter_mut().zip(&uj) {
                    *x -= qi * y;
                }
            }
        }
        let (mu2, bstar2) = gram_schmidt(&b);
        let lhs = bstar2[i];
        let rhs = (delta - mu2[i][i - 1] * mu2[i][i - 1]) * bstar2[i - 1];
        if lhs >= rhs {
            i += 1;
        } else {
            b.swap(i, i - 1);
            u.swap(i, i - 1);
            i = (i - 1).max(1);
        }
    }
    (b, u)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Gram–Schmidt coefficients `μ[i][j]` and squared lengths `‖b*_i‖²`.
fn gram_schmidt(b: &[Vec<f64>]) -> (Vec<Vec<f64>>, Vec<f64>) {
    let k = b.len();
    let mut star: Vec<Vec<f64>> = Vec::with_capacity(k);
    let mut mu = vec![vec![0.0; k]; k];
    let mut norms = vec![0.0; k];
    for i in 0..k {
        let mut v = b[i].clone();
        for j in 0..i {
            mu[i][j] = dot(&b[i], &star[j]) / norms[j];
            for (x, y) in v.iter_mut().zip(&star[j]) {
                *x -= mu[i][j] * y;
            }
        }
        mu[i][i] = 1.0;
        norms[i] = dot(&v, &v);
        star.push(v);
    }
    (mu, norms)
}

fn gram_schmidt_row(b: &[Vec<f64>], i: usize, j: usize) -> (f64, f64) {
    let (mu, norms) = gram_schmidt(&b[..=i]);
    (mu[i][j], norms[j])
}

/// All nonzero vectors of the lattice spanned by `generators` (linearly
/// independent rows in `ℝ^m`) with Euclidean norm at most `radius`, sorted
/// lexicographically by coefficient vector. Both `v` and `-v` appear.
pub fn enumerate_generators(
    generators: &[Vec<f64>],
    radius: f64,
    budget: usize,
) -> Result<Vec<LatticeVector>> {
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::domain(
            "enumerate_vectors",
            format!("radius {radius} must be positive and finite"),
        ));
    }
    let k = generators.len();
    if k == 0 {
        return Ok(Vec::new());
    }
    let (reduced, u) = lll_reduce(generators);
    let (mu, bnorm) = gram_schmidt(&reduced);
    if bnorm.iter().any(|&x| !(x > 0.0)) {
        return Err(Error::DegenerateBasis(
            "generators are linearly dependent".into(),
        ));
    }
    let slack_sq = radius * radius * (1.0 + 1e-9) + 1e-300;
    let mut coeffs_reduced: Vec<Vec<i64>> = Vec::new();
    let mut x = vec![0i64; k];
    fincke_pohst(
        k - 1,
        &mut x,
        0.0,
        &mu,
        &bnorm,
        slack_sq,
        budget,
        &mut coeffs_reduced,
    )?;

    let m = generators[0].len();
    let mut out = Vec::with_capacity(coeffs_reduced.len());
    for xr in coeffs_reduced {
        // v = xr · reduced = (xr · U) · generators
        let mut coeffs = vec![0i64; k];
        for (i, &xi) in xr.iter().enumerate() {
            if xi != 0 {
                for (c, uij) in coeffs.iter_mut().zip(&u[i]) {
                    *c += xi * uij;
                }
            }
        }
        let mut vector = vec![0.0; m];
        for (i, &c) in coeffs.iter().enumerate() {
            if c != 0 {
                for (v, g) in vector.iter_mut().zip(&generators[i]) {
                    *v += c as f64 * g;
                }
            }
        }
        let norm = dot(&vector, &vector).sqrt();
        if norm <= radius {
            out.push(LatticeVector {
                coeffs,
                vector,
                norm,
            });
        }
    }
    out.sort_by(|a, b| a.coeffs.cmp(&b.coeffs));
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn fincke_pohst(
    level: usize,
    x: &mut [i64],
    partial: f64,
    mu: &[Vec<f64>],
    bnorm: &[f64],
    radius_sq: f64,
    budget: usize,
    out: &mut Vec<Vec<i64>>,
) -> Result<()> {
    let k = x.len();
    let mut center = 0.0;
    for j in (level + 1)..k {
        center -= mu[j][level] * x[j] as f64;
    }
    let remaining = radius_sq - partial;
    if remaining < 0.0 {
        return Ok(());
    }
    let half_width = (remaining / bnorm[level]).sqrt();
    let lo = (center - half_width).ceil() as i64;
    let hi = (center + half_width).floor() as i64;
    for xi in lo..=hi {
        x[level] = xi;
        let d = xi as f64 - center;
        let p = partial + bnorm[level] * d * d;
        if p > radius_sq {
            continue;
        }
        if level == 0 {
            if x.iter().any(|&c| c != 0) {
                if out.len() >= budget {
                    return Err(Error::EnumerationBudget { budget });
                }
                out.push(x.to_vec());
            }
        } else {
            fincke_pohst(level - 1, x, p, mu, bnorm, radius_sq, budget, out)?;
        }
    }
    x[level] = 0;
    Ok(())
}

/// Nonzero vectors of `ℤⁿ·g` with `‖v·g‖₂ ≤ radius`, default budget.
pub fn enumerate_vectors(basis: &LatticeBasis, radius: f64) -> Result<Vec<LatticeVector>> {
    enumerate_vectors_with_budget(basis, radius, DEFAULT_ENUMERATION_BUDGET)
}

pub fn enumerate_vectors_with_budget(
    basis: &LatticeBasis,
    radius: f64,
    budget: usize,
) -> Result<Vec<LatticeVector>> {
    enumerate_generators(&basis.rows(), radius, budget)
}

/// A shortest nonzero vector of the lattice spanned by `generators`.
pub fn shortest_vector_of_generators(generators: &[Vec<f64>]) -> Result<LatticeVector> {
    let (reduced, _) = lll_reduce(generators);
    let first = reduced
        .iter()
        .map(|r| dot(r, r).sqrt())
        .fold(f64::INFINITY, f64::min);
    let mut found =
        enumerate_generators(generators, first * (1.0 + 1e-9), DEFAULT_ENUMERATION_BUDGET)?;
    found.sort_by(|a, b| a.norm.total_cmp(&b.norm).then_with(|| a.coeffs.cmp(&b.coeffs)));
    found
        .into_iter()
        .next()
        .ok_or_else(|| Error::DegenerateBasis("no nonzero vector found".into()))
}

pub fn shortest_vector(basis: &LatticeBasis) -> Result<LatticeVector> {
    shortest_vector_of_generators(&basis.rows())
}

/// `λ₁(g) = |det g|^{-1/n} min_{v≠0} ‖v·g‖₂`.
pub fn lambda1(basis: &LatticeBasis) -> Result<f64> {
    let n = basis.dim() as f64;
    let sv = shortest_vector(basis)?;
    Ok(sv.norm / determinant(basis).abs().powf(1.0 / n))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormKind {
    Euclidean,
    /// `max_i |x_i| · w_i`.
    WeightedSup,
}

/// A norm on `ℝ^m`.
#[derive(Debug, Clone, PartialEq)]
pub struct NormSpec {
    pub kind: NormKind,
    pub weights: Vec<f64>,
}

impl NormSpec {
    pub fn euclidean(dim: usize) -> Self {
        Self {
            kind: NormKind::Euclidean,
            weights: vec![1.0; dim],
        }
    }

    pub fn weighted_sup(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() || weights.iter().any(|w| !(*w > 0.0) || !w.is_finite()) {
            return Err(Error::domain("NormSpec", "weights must be positive"));
        }
        Ok(Self {
            kind: NormKind::WeightedSup,
            weights,
        })
    }

    /// `‖x‖_∞ = max(|x₁|, …, |x_{r₁}|, |x_{r₁+1}|/2, …)` on the logarithmic
    /// space of a field with signature `(r₁, r₂)`.
    pub fn unit_log(r1: usize, r2: usize) -> Self {
        let mut weights = vec![1.0; r1];
        weights.extend(std::iter::repeat(0.5).take(r2));
        Self {
            kind: NormKind::WeightedSup,
            weights,
        }
    }

    pub fn norm(&self, x: &[f64]) -> f64 {
        match self.kind {
            NormKind::Euclidean => dot(x, x).sqrt(),
            NormKind::WeightedSup => x
                .iter()
                .zip(&self.weights)
                .map(|(v, w)| v.abs() * w)
                .fold(0.0, f64::max),
        }
    }

    /// A constant `c` with `‖x‖₂ ≤ c·‖x‖` for all `x`.
    fn euclidean_domination(&self) -> f64 {
        match self.kind {
            NormKind::Euclidean => 1.0,
            NormKind::WeightedSup => {
                let min_w = self.weights.iter().copied().fold(f64::INFINITY, f64::min);
                (self.weights.len() as f64).sqrt() / min_w
            }
        }
    }
}

/// Vectors realizing the successive minima, in ascending order.
#[derive(Debug, Clone, PartialEq)]
pub struct MinimaReport {
    pub vectors: Vec<Vec<f64>>,
    pub coeffs: Vec<Vec<i64>>,
    pub lengths: Vec<f64>,
}

impl MinimaReport {
    pub fn product(&self) -> f64 {
        self.lengths.iter().product()
    }
}

/// Successive minima of the lattice spanned by `generators` (rank ≤ 4)
/// under an arbitrary norm from [`NormSpec`].
pub fn successive_minima_of_generators(
    generators: &[Vec<f64>],
    norm: &NormSpec,
) -> Result<MinimaReport> {
    let rank = generators.len();
    if rank > MAX_MINIMA_RANK {
        return Err(Error::UnsupportedRank {
            rank,
            max: MAX_MINIMA_RANK,
        });
    }
    if rank == 0 {
        return Ok(MinimaReport {
            vectors: vec![],
            coeffs: vec![],
            lengths: vec![],
        });
    }
    if let Some(g) = generators.first() {
        if norm.weights.len() != g.len() {
            return Err(Error::domain(
                "successive_minima",
                format!(
                    "norm has {} weights but vectors have {} coordinates",
                    norm.weights.len(),
                    g.len()
                ),
            ));
        }
    }
    let (reduced, _) = lll_reduce(generators);
    // the reduced rows are independent, so λ_rank is at most their largest norm
    let bound = reduced.iter().map(|r| norm.norm(r)).fold(0.0, f64::max);
    let radius = bound * norm.euclidean_domination() * (1.0 + 1e-12);
    let mut candidates: Vec<(f64, LatticeVector)> =
        enumerate_generators(generators, radius, DEFAULT_ENUMERATION_BUDGET)?
            .into_iter()
            .map(|v| (norm.norm(&v.vector), v))
            .filter(|(len, _)| *len <= bound * (1.0 + 1e-12))
            .collect();
    candidates.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.coeffs.cmp(&b.1.coeffs)));

    let mut report = MinimaReport {
        vectors: vec![],
        coeffs: vec![],
        lengths: vec![],
    };
    let mut ortho: Vec<Vec<f64>> = Vec::new();
    for (len, v) in candidates {
        let mut r = v.vector.clone();
        for q in &ortho {
            let c = dot(&r, q);
            for (x, y) in r.iter_mut().zip(q) {
                *x -= c * y;
            }
        }
        let rn = dot(&r, &r).sqrt();
        if rn > 1e-9 * v.norm {
            ortho.push(r.iter().map(|x| x / rn).collect());
            report.vectors.push(v.vector);
            report.coeffs.push(v.coeffs);
            report.lengths.push(len);
            if report.lengths.len() == rank {
                break;
            }
        }
    }
    Ok(report)
}

pub fn successive_minima(basis: &LatticeBasis, norm: &NormSpec) -> Result<MinimaReport> {
    successive_minima_of_generators(&basis.rows(), norm)
}

/// Covolume of the lattice spanned by `generators` inside its own span,
/// `sqrt(det Gram)`.
pub fn covolume_of_generators(generators: &[Vec<f64>]) -> f64 {
    let k = generators.len();
    let gram = DMatrix::from_fn(k, k, |i, j| dot(&generators[i], &generators[j]));
    gram.lu().determinant().abs().sqrt()
}

/// Minkowski's second theorem for a norm whose unit ball (inside the span of
/// the lattice) has volume `ball_volume`: `∏ λ_j · vol ≤ 2^rank · covol`.
/// Returns `(lhs, rhs)`.
pub fn minkowski_second_sides(report: &MinimaReport, ball_volume: f64, covolume: f64) -> (f64, f64) {
    let rank = report.lengths.len() as i32;
    (report.product() * ball_volume, 2f64.powi(rank) * covolume)
}

/// Checks `λ₁(ᵗg⁻¹)^{n-1} ≤ (2^{n-1} / V_{n-1}) λ₁(g)`, where `V_{n-1}` is
/// the volume of the `(n-1)`-dimensional unit ball. Always true; exposed as a
/// test hook.
pub fn dual_lambda1_inequality_check(basis: &LatticeBasis) -> bool {
    dual_lambda1_inequality_sides(basis)
        .map(|(lhs, rhs)| lhs <= rhs * (1.0 + 1e-12))
        .unwrap_or(false)
}

/// `(λ₁(ᵗg⁻¹)^{n-1}, 2^{n-1} λ₁(g) / V_{n-1})`.
pub fn dual_lambda1_inequality_sides(basis: &LatticeBasis) -> Result<(f64, f64)> {
    let n = basis.dim();
    let l = lambda1(basis)?;
    let ld = lambda1(&dual_basis(basis)?)?;
    let lhs = ld.powi(n as i32 - 1);
    let rhs = 2f64.powi(n as i32 - 1) / unit_ball_volume(n - 1) * l;
    Ok((lhs, rhs))
}

/// Random unimodular integer matrix: a product of elementary row operations.
pub fn random_unimodular_integer<R: Rng>(n: usize, rng: &mut R) -> Vec<Vec<i64>> {
    let mut u: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect();
    if n < 2 {
        return u;
    }
    for _ in 0..(3 * n) {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let c: i64 = rng.gen_range(-2..=2);
        let rj = u[j].clone();
        for (x, y) in u[i].iter_mut().zip(&rj) {
            *x += c * y;
        }
    }
    u
}

/// A random basis of determinant one: a perturbed identity, sheared by a
/// random unimodular integer matrix so the basis is not reduced.
pub fn random_unimodular_basis<R: Rng>(n: usize, rng: &mut R) -> LatticeBasis {
    loop {
        let m = DMatrix::from_fn(n, n, |i, j| {
            f64::from(u8::from(i == j)) + rng.gen_range(-0.35..0.35)
        });
        let u = random_unimodular_integer(n, rng);
        let um = DMatrix::from_fn(n, n, |i, j| u[i][j] as f64);
        let mut g = um * m;
        let det = g.clone().lu().determinant();
        if det.abs() < 0.2 {
            continue;
        }
        if det < 0.0 {
            g.row_mut(0).neg_mut();
        }
        let d = g.clone().lu().determinant();
        g /= d.powf(1.0 / n as f64);
        if let Ok(b) = LatticeBasis::from_matrix(g) {
            return b;
        }
    }
}

/// A random determinant-one basis pushed toward the cusp by a trace-zero
/// diagonal stretch of size up to `depth` (in log scale).
pub fn random_cusp_basis<R: Rng>(n: usize, depth: f64, rng: &mut R) -> LatticeBasis {
    let base = random_unimodular_basis(n, rng);
    let mut t: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let mean = t.iter().sum::<f64>() / n as f64;
    t.iter_mut().for_each(|x| *x -= mean);
    let scale = if depth > 0.0 { rng.gen_range(0.0..depth) } else { 0.0 };
    let maxabs = t.iter().fold(0.0f64, |a, x| a.max(x.abs())).max(1e-12);
    let stretch = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            (t[i] / maxabs * scale).exp()
        } else {
            0.0
        }
    });
    base.right_multiply(&stretch).unwrap_or(base)
}
