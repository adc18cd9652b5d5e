//! Measurement simplexes and the hidden-measurement membrane sampler.
//!
//! A non-degenerate observable on `ℂᴺ` fixes `N` unit Bloch vectors `nᵢ`
//! (its eigenprojectors) spanning a regular simplex. A state `r` projects
//! orthogonally onto that simplex at a point whose barycentric weights are the
//! outcome probabilities. The sampler draws a uniform point `λ` inside the
//! simplex and reports the sub-region it falls in.

use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::Exp1;
use serde::Serialize;

use crate::basis::GeneratorBasis;
use crate::bloch::{encode, BlochVector, OperatorState};
use crate::error::{BlochError, Result};
use crate::matrix::{dot, ComplexMatrix};
use crate::rng::parallel_counts;

const GAP_TOL: f64 = 1e-8;
const OUTSIDE_TOL: f64 = 1e-9;
const CLAMP_TOL: f64 = 1e-12;
const BARY_SUM_TOL: f64 = 1e-10;

/// Eigen-structure of a non-degenerate observable, in Bloch form.
#[derive(Debug, Clone)]
pub struct MeasurementSimplex {
    vertices: Vec<BlochVector>,
    projectors: Vec<ComplexMatrix>,
    eigenvectors: Vec<Vec<Complex64>>,
    eigenvalues: Vec<f64>,
    basis: Arc<GeneratorBasis>,
}

impl MeasurementSimplex {
    /// Builds the simplex of an orthonormal eigenbasis with the given labels.
    pub fn from_eigenbasis(
        eigenvectors: Vec<Vec<Complex64>>,
        eigenvalues: Vec<f64>,
        basis: &Arc<GeneratorBasis>,
    ) -> Result<Self> {
        let n = basis.n_dim();
        if eigenvectors.len() != n || eigenvalues.len() != n {
            return Err(BlochError::DimensionMismatch { expected: n, got: eigenvectors.len() });
        }
        for (i, a) in eigenvectors.iter().enumerate() {
            if a.len() != n {
                return Err(BlochError::DimensionMismatch { expected: n, got: a.len() });
            }
            for (j, b) in eigenvectors.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                let dev = (crate::matrix::inner(a, b) - target).norm();
                if dev > 1e-10 {
                    return Err(BlochError::NotOrthonormal(dev));
                }
            }
        }
        let projectors: Vec<ComplexMatrix> = eigenvectors.iter().map(|v| ComplexMatrix::projector(v)).collect();
        let vertices =
            projectors.iter().map(|p| encode(&OperatorState::new(p.clone())?, basis)).collect::<Result<Vec<_>>>()?;
        Ok(Self { vertices, projectors, eigenvectors, eigenvalues, basis: Arc::clone(basis) })
    }

    pub fn n_dim(&self) -> usize {
        self.basis.n_dim()
    }

    pub fn vertices(&self) -> &[BlochVector] {
        &self.vertices
    }

    pub fn projectors(&self) -> &[ComplexMatrix] {
        &self.projectors
    }

    pub fn eigenvectors(&self) -> &[Vec<Complex64>] {
        &self.eigenvectors
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn basis(&self) -> &Arc<GeneratorBasis> {
        &self.basis
    }

    /// The point with barycentric weights `w`.
    pub fn point(&self, w: &BarycentricCoords) -> BlochVector {
        let mut acc = vec![0.0; self.basis.len()];
        for (wi, v) in w.weights().iter().zip(&self.vertices) {
            for (a, x) in acc.iter_mut().zip(v.components()) {
                *a += wi * x;
            }
        }
        BlochVector::new(acc, Arc::clone(&self.basis)).expect("basis length")
    }
}

/// Convex weights relative to the vertices of a simplex.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BarycentricCoords {
    weights: Vec<f64>,
}

impl BarycentricCoords {
    /// Validates `weights`; entries in `[-1e-12, 0)` are clamped to zero.
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(BlochError::InvalidWeights("empty".into()));
        }
        let mut clamped = Vec::with_capacity(weights.len());
        for w in weights {
            if w.is_nan() || w < -CLAMP_TOL {
                return Err(BlochError::InvalidWeights(format!("weight {w} below zero")));
            }
            clamped.push(w.max(0.0));
        }
        let sum: f64 = clamped.iter().sum();
        if (sum - 1.0).abs() > BARY_SUM_TOL {
            return Err(BlochError::InvalidWeights(format!("weights sum to {sum}")));
        }
        Ok(Self { weights: clamped })
    }

    pub fn uniform(n: usize) -> Self {
        Self { weights: vec![1.0 / n as f64; n] }
    }

    pub fn vertex(n: usize, i: usize) -> Self {
        let mut weights = vec![0.0; n];
        weights[i] = 1.0;
        Self { weights }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

/// One run of the membrane mechanism.
#[derive(Debug, Clone, PartialEq)]
pub struct MembraneOutcome {
    pub outcome_index: usize,
    pub lambda_bary: Vec<f64>,
}

/// Tallies of a repeated measurement.
#[derive(Debug, Clone)]
pub struct MeasurementRun {
    pub counts: Vec<u64>,
    pub shots: u64,
    /// Post-measurement state for each outcome.
    pub collapsed: Vec<OperatorState>,
}

impl MeasurementRun {
    pub fn frequencies(&self) -> Vec<f64> {
        self.counts.iter().map(|&c| c as f64 / self.shots as f64).collect()
    }
}

/// Simplex of a Hermitian observable; vertices follow ascending eigenvalue.
pub fn simplex_from_observable(a: &ComplexMatrix, basis: &Arc<GeneratorBasis>) -> Result<MeasurementSimplex> {
    if a.dim() != basis.n_dim() {
        return Err(BlochError::DimensionMismatch { expected: basis.n_dim(), got: a.dim() });
    }
    let spec = a.eig_hermitian(true)?;
    let gap = spec.eigenvalues.windows(2).map(|p| p[1] - p[0]).fold(f64::INFINITY, f64::min);
    if gap <= GAP_TOL {
        return Err(BlochError::DegenerateSpectrum(gap));
    }
    let vectors = spec.eigenvectors.expect("requested");
    MeasurementSimplex::from_eigenbasis(vectors, spec.eigenvalues, basis)
}

/// Orthogonal projection of `r` onto the affine hull of the simplex.
///
/// Returns the barycentric weights of the foot point and the perpendicular
/// component `r − r∥`. Fails if the foot point lies outside the simplex.
pub fn project_onto_simplex(r: &BlochVector, s: &MeasurementSimplex) -> Result<(BarycentricCoords, BlochVector)> {
    let n0 = &s.vertices[0];
    r.check_basis(n0)?;
    let m = s.vertices.len() - 1;
    let edges: Vec<Vec<f64>> = s.vertices[1..]
        .iter()
        .map(|v| v.components().iter().zip(n0.components()).map(|(a, b)| a - b).collect())
        .collect();
    let rel: Vec<f64> = r.components().iter().zip(n0.components()).map(|(a, b)| a - b).collect();
    let gram: Vec<Vec<f64>> = edges.iter().map(|e| edges.iter().map(|f| dot(e, f)).collect()).collect();
    let rhs: Vec<f64> = edges.iter().map(|e| dot(e, &rel)).collect();
    let mu = solve_dense(gram, rhs);

    let mut weights = Vec::with_capacity(m + 1);
    weights.push(1.0 - mu.iter().sum::<f64>());
    weights.extend(mu);
    if let Some(&worst) = weights.iter().min_by(|a, b| a.total_cmp(b)) {
        if worst < -OUTSIDE_TOL {
            return Err(BlochError::OutsideSimplex(worst));
        }
    }
    let weights: Vec<f64> = weights.into_iter().map(|w| w.max(0.0)).collect();
    let bary = BarycentricCoords { weights };
    let foot = s.point(&bary);
    let perp = r.lin_comb(1.0, &foot, -1.0)?;
    Ok((bary, perp))
}

/// Gaussian elimination with partial pivoting on a small dense system.
fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).expect("nonempty");
        a.swap(col, piv);
        b.swap(col, piv);
        for row in (col + 1)..n {
            let f = a[row][col] / a[col][col];
            let (top, bottom) = a.split_at_mut(row);
            for (x, p) in bottom[0][col..].iter_mut().zip(&top[col][col..]) {
                *x -= f * p;
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = ((row + 1)..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    x
}

/// `pᵢ = (1 + (N−1) r·nᵢ)/N`.
pub fn born_probabilities(d: &OperatorState, s: &MeasurementSimplex) -> Result<BarycentricCoords> {
    let r = encode(d, &s.basis)?;
    born_from_vector(&r, s)
}

/// Born weights of a Bloch vector against the simplex.
pub fn born_from_vector(r: &BlochVector, s: &MeasurementSimplex) -> Result<BarycentricCoords> {
    let n = s.n_dim() as f64;
    let weights = s.vertices.iter().map(|v| Ok((1.0 + (n - 1.0) * r.dot(v)?) / n)).collect::<Result<Vec<_>>>()?;
    BarycentricCoords::new(weights)
}

/// `r_τ = (1−τ) r + τ r∥`.
pub fn immersion_path(r: &BlochVector, s: &MeasurementSimplex, tau: f64) -> Result<BlochVector> {
    if !(0.0..=1.0).contains(&tau) {
        return Err(BlochError::OutOfRange(format!("tau {tau} not in [0, 1]")));
    }
    let (w, _) = project_onto_simplex(r, s)?;
    r.lin_comb(1.0 - tau, &s.point(&w), tau)
}

/// Index `i` minimizing `λᵢ/wᵢ` over `wᵢ > 0`; ties go to the smaller index.
pub fn classify_subregion(lambda: &[f64], w: &[f64]) -> usize {
    let mut best = usize::MAX;
    let mut best_ratio = f64::INFINITY;
    for (i, (&l, &wi)) in lambda.iter().zip(w).enumerate() {
        if wi > 0.0 {
            let ratio = l / wi;
            if best == usize::MAX || ratio < best_ratio {
                best = i;
                best_ratio = ratio;
            }
        }
    }
    best
}

/// Uniform point of the standard simplex, in barycentric form.
pub fn uniform_simplex_point<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    let mut lambda: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = lambda.iter().sum();
    for l in &mut lambda {
        *l /= total;
    }
    lambda
}

/// Draws a disintegration point and returns the sub-region it lands in.
pub fn sample_membrane<R: Rng + ?Sized>(w: &BarycentricCoords, rng: &mut R) -> MembraneOutcome {
    let lambda = uniform_simplex_point(w.len(), rng);
    MembraneOutcome { outcome_index: classify_subregion(&lambda, w.weights()), lambda_bary: lambda }
}

/// Repeats the membrane measurement `shots` times over `workers` streams.
pub fn run_measurement(
    d: &OperatorState,
    s: &MeasurementSimplex,
    shots: u64,
    seed: u64,
    workers: usize,
) -> Result<MeasurementRun> {
    if shots == 0 {
        return Err(BlochError::OutOfRange("shots must be at least 1".into()));
    }
    let w = born_probabilities(d, s)?;
    let counts = parallel_counts(w.len(), shots, seed, workers, |rng| sample_membrane(&w, rng).outcome_index)?;
    let collapsed = s.projectors.iter().map(|p| OperatorState::new(p.clone())).collect::<Result<Vec<_>>>()?;
    Ok(MeasurementRun { counts, shots, collapsed })
}

/// Share of the simplex covered by sub-region `i`; equals `wᵢ`.
pub fn subregion_fraction(w: &BarycentricCoords, i: usize) -> Result<f64> {
    w.weights().get(i).copied().ok_or_else(|| BlochError::OutOfRange(format!("index {i} for {} outcomes", w.len())))
}

/// Absolute measure of sub-region `i` inside the Bloch-space simplex.
pub fn subregion_measure(w: &BarycentricCoords, i: usize) -> Result<f64> {
    Ok(subregion_fraction(w, i)? * simplex_volume(w.len()))
}

/// Edge length `√(2N/(N−1))` of the measurement simplex.
pub fn simplex_edge(n: usize) -> f64 {
    let n = n as f64;
    (2.0 * n / (n - 1.0)).sqrt()
}

/// Volume of the regular `(N−1)`-simplex with edge [`simplex_edge`].
pub fn simplex_volume(n: usize) -> f64 {
    let k = (n - 1) as f64;
    let factorial: f64 = (1..n).map(|i| i as f64).product();
    simplex_edge(n).powf(k) / factorial * ((k + 1.0) / 2f64.powf(k)).sqrt()
}
