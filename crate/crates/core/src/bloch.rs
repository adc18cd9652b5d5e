use std::sync::Arc;

use num_complex::Complex64;

use crate::basis::GeneratorBasis;
use crate::error::{BlochError, Result};
use crate::matrix::{norm, ComplexMatrix, HERMITIAN_TOL};

/// Largest imaginary part tolerated in an expansion coefficient before
/// the input is rejected as non-Hermitian.
const IMAG_TOL: f64 = 1e-10;
const WEIGHT_TOL: f64 = 1e-12;

/// A validated density operator.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorState {
    matrix: ComplexMatrix,
}

impl OperatorState {
    /// Checks Hermiticity, unit trace and positivity (all at `1e-10`).
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let dev = matrix.hermiticity_deviation();
        if dev > HERMITIAN_TOL {
            return Err(BlochError::NotHermitian(dev));
        }
        let tr = matrix.trace();
        if (tr - 1.0).norm() > HERMITIAN_TOL {
            return Err(BlochError::NotAState(format!("trace is {tr}")));
        }
        let min = matrix.min_eigenvalue()?;
        if min < -HERMITIAN_TOL {
            return Err(BlochError::NotAState(format!("negative eigenvalue {min}")));
        }
        Ok(Self { matrix })
    }

    /// The rank-1 state `|ψ⟩⟨ψ|`; `psi` is normalized first.
    pub fn pure(psi: &[Complex64]) -> Result<Self> {
        let n: f64 = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n == 0.0 {
            return Err(BlochError::NotAState("zero vector".into()));
        }
        let unit: Vec<Complex64> = psi.iter().map(|z| z / n).collect();
        Self::new(ComplexMatrix::projector(&unit))
    }

    pub fn maximally_mixed(n: usize) -> Self {
        Self { matrix: ComplexMatrix::identity(n).scale_real(1.0 / n as f64) }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn n_dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }
}

/// Real coordinates of an operator in a given generator basis.
#[derive(Debug, Clone)]
pub struct BlochVector {
    components: Vec<f64>,
    basis: Arc<GeneratorBasis>,
}

impl PartialEq for BlochVector {
    fn eq(&self, other: &Self) -> bool {
        self.components == other.components && same_basis(&self.basis, &other.basis)
    }
}

fn same_basis(a: &Arc<GeneratorBasis>, b: &Arc<GeneratorBasis>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl BlochVector {
    pub fn new(components: Vec<f64>, basis: Arc<GeneratorBasis>) -> Result<Self> {
        if components.len() != basis.len() {
            return Err(BlochError::DimensionMismatch { expected: basis.len(), got: components.len() });
        }
        Ok(Self { components, basis })
    }

    pub fn zero(basis: Arc<GeneratorBasis>) -> Self {
        Self { components: vec![0.0; basis.len()], basis }
    }

    pub fn components(&self) -> &[f64] {
        &self.components
    }

    pub fn basis(&self) -> &Arc<GeneratorBasis> {
        &self.basis
    }

    pub fn norm(&self) -> f64 {
        norm(&self.components)
    }

    pub fn dot(&self, other: &Self) -> Result<f64> {
        self.check_basis(other)?;
        Ok(crate::matrix::dot(&self.components, &other.components))
    }

    pub fn check_basis(&self, other: &Self) -> Result<()> {
        if same_basis(&self.basis, &other.basis) {
            Ok(())
        } else {
            Err(BlochError::BasisMismatch)
        }
    }

    /// Same vector with components given by `f`.
    pub fn with_components(&self, components: Vec<f64>) -> Result<Self> {
        Self::new(components, Arc::clone(&self.basis))
    }

    /// `a·self + b·other`.
    pub fn lin_comb(&self, a: f64, other: &Self, b: f64) -> Result<Self> {
        self.check_basis(other)?;
        let c = self.components.iter().zip(&other.components).map(|(x, y)| a * x + b * y).collect();
        self.with_components(c)
    }
}

/// `D(r) = (I + c_N Σ rᵢΛᵢ)/N`. Hermitian with unit trace, but not
/// necessarily positive; see [`is_state`].
pub fn decode(r: &BlochVector) -> ComplexMatrix {
    let basis = r.basis();
    let n = basis.n_dim();
    let cn = basis.c_n();
    let mut m = ComplexMatrix::identity(n);
    for (ri, li) in r.components().iter().zip(basis.matrices()) {
        if *ri != 0.0 {
            m.add_scaled_assign(cn * ri, li).expect("basis dimension");
        }
    }
    m.scale_real(1.0 / n as f64)
}

/// `rᵢ = e_N Tr(DΛᵢ)`.
pub fn encode(d: &OperatorState, basis: &Arc<GeneratorBasis>) -> Result<BlochVector> {
    encode_matrix(d.matrix(), basis)
}

/// Expansion coefficients `e_N Tr(XΛᵢ)` of an arbitrary Hermitian `X`.
/// The identity component is dropped.
pub fn encode_matrix(x: &ComplexMatrix, basis: &Arc<GeneratorBasis>) -> Result<BlochVector> {
    if x.dim() != basis.n_dim() {
        return Err(BlochError::DimensionMismatch { expected: basis.n_dim(), got: x.dim() });
    }
    let en = basis.e_n();
    let mut comps = Vec::with_capacity(basis.len());
    for li in basis.matrices() {
        let t = x.trace_product(li)?;
        if t.im.abs() > IMAG_TOL {
            return Err(BlochError::ComplexCoefficient(t.im.abs()));
        }
        comps.push(en * t.re);
    }
    BlochVector::new(comps, Arc::clone(basis))
}

/// `Tr D² = 1/N + (1 − 1/N)‖r‖²`.
pub fn purity(r: &BlochVector) -> f64 {
    let n = r.basis().n_dim() as f64;
    1.0 / n + (1.0 - 1.0 / n) * r.norm().powi(2)
}

/// True iff the smallest eigenvalue of `decode(r)` is at least `-tol`.
pub fn is_state(r: &BlochVector, tol: f64) -> bool {
    decode(r).min_eigenvalue().map(|m| m >= -tol).unwrap_or(false)
}

/// `Σ wᵢ rᵢ`. Weights must be nonnegative and sum to one; they are not
/// renormalized.
pub fn convex_combine(terms: &[(f64, &BlochVector)]) -> Result<BlochVector> {
    let first = terms.first().ok_or_else(|| BlochError::InvalidWeights("no terms".into()))?.1;
    validate_weights(terms.iter().map(|t| t.0))?;
    let mut acc = vec![0.0; first.components().len()];
    for (w, r) in terms {
        first.check_basis(r)?;
        for (a, x) in acc.iter_mut().zip(r.components()) {
            *a += w * x;
        }
    }
    first.with_components(acc)
}

pub(crate) fn validate_weights(weights: impl Iterator<Item = f64>) -> Result<()> {
    let mut sum = 0.0;
    for w in weights {
        if w.is_nan() || w < 0.0 {
            return Err(BlochError::InvalidWeights(format!("negative or NaN weight {w}")));
        }
        sum += w;
    }
    if (sum - 1.0).abs() > WEIGHT_TOL {
        return Err(BlochError::InvalidWeights(format!("weights sum to {sum}")));
    }
    Ok(())
}

/// Qubit state with Bloch radius `rad` at polar angle `theta`, azimuth `phi`.
pub fn qubit_from_spherical(rad: f64, theta: f64, phi: f64) -> Result<OperatorState> {
    if !(0.0..=1.0).contains(&rad) {
        return Err(BlochError::OutOfRange(format!("radius {rad} not in [0, 1]")));
    }
    let (st, ct) = theta.sin_cos();
    let off = Complex64::from_polar(rad * st, -phi);
    let m = ComplexMatrix::from_rows(&[
        vec![Complex64::new(1.0 + rad * ct, 0.0), off],
        vec![off.conj(), Complex64::new(1.0 - rad * ct, 0.0)],
    ])?
    .scale_real(0.5);
    OperatorState::new(m)
}
