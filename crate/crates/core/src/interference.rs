//! Interference of two- and three-state superpositions.
//!
//! States are expanded on the canonical basis `φ₁, …, φ_N`. The two-state
//! case is measured against `φ± = (φ₁ ± φ₂)/√2`; the three-state case
//! against the Fourier basis `χⱼ` built with `ω = e^{2πi/3}`.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::basis::{e_n, offdiagonal_first_order, reorder, standard_basis, GeneratorBasis, GeneratorLabel};
use crate::bloch::{BlochVector, OperatorState};
use crate::error::{BlochError, Result};
use crate::measurement::MeasurementSimplex;

const NORM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Superposition2 {
    a1: f64,
    a2: f64,
    alpha: f64,
    n_dim: usize,
}

impl Superposition2 {
    pub fn new(a1: f64, a2: f64, alpha: f64, n_dim: usize) -> Result<Self> {
        if n_dim < 2 {
            return Err(BlochError::OutOfRange(format!("dimension {n_dim} below 2")));
        }
        check_amplitudes(&[a1, a2])?;
        Ok(Self { a1, a2, alpha, n_dim })
    }

    /// Amplitudes `cos(β/2)`, `sin(β/2)`.
    pub fn from_beta(beta: f64, alpha: f64, n_dim: usize) -> Result<Self> {
        if !(0.0..=PI).contains(&beta) {
            return Err(BlochError::OutOfRange(format!("beta {beta} not in [0, π]")));
        }
        Self::new((beta / 2.0).cos(), (beta / 2.0).sin(), alpha, n_dim)
    }

    pub fn a1(&self) -> f64 {
        self.a1
    }

    pub fn a2(&self) -> f64 {
        self.a2
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn n_dim(&self) -> usize {
        self.n_dim
    }

    /// `β = 2 arccos a₁`.
    pub fn beta(&self) -> f64 {
        2.0 * self.a1.clamp(-1.0, 1.0).acos()
    }

    /// `a₁φ₁ + a₂e^{iα}φ₂`.
    pub fn ket(&self) -> Vec<Complex64> {
        let mut v = vec![Complex64::new(0.0, 0.0); self.n_dim];
        v[0] = Complex64::new(self.a1, 0.0);
        v[1] = Complex64::from_polar(self.a2, self.alpha);
        v
    }

    pub fn state(&self) -> OperatorState {
        OperatorState::pure(&self.ket()).expect("normalized ket")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Superposition3 {
    a: [f64; 3],
    alpha: f64,
    delta: f64,
}

impl Superposition3 {
    pub fn new(a1: f64, a2: f64, a3: f64, alpha: f64, delta: f64) -> Result<Self> {
        check_amplitudes(&[a1, a2, a3])?;
        Ok(Self { a: [a1, a2, a3], alpha, delta })
    }

    pub fn amplitudes(&self) -> [f64; 3] {
        self.a
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// `γ = δ − α`.
    pub fn gamma(&self) -> f64 {
        self.delta - self.alpha
    }

    pub fn ket(&self) -> Vec<Complex64> {
        vec![
            Complex64::new(self.a[0], 0.0),
            Complex64::from_polar(self.a[1], self.alpha),
            Complex64::from_polar(self.a[2], self.delta),
        ]
    }

    pub fn state(&self) -> OperatorState {
        OperatorState::pure(&self.ket()).expect("normalized ket")
    }
}

fn check_amplitudes(a: &[f64]) -> Result<()> {
    if let Some(x) = a.iter().find(|x| !(0.0..=1.0).contains(*x)) {
        return Err(BlochError::OutOfRange(format!("amplitude {x} not in [0, 1]")));
    }
    let s: f64 = a.iter().map(|x| x * x).sum();
    if (s - 1.0).abs() > NORM_TOL {
        return Err(BlochError::OutOfRange(format!("squared amplitudes sum to {s}")));
    }
    Ok(())
}

/// Outcome probabilities split into classical part and interference terms.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InterferenceReport {
    pub probabilities: Vec<f64>,
    pub interference_terms: Vec<f64>,
    pub classical_part: Vec<f64>,
}

/// `I± = ±a₁a₂ cos α`, `P± = (1 + 2I±)/2`.
pub fn interference2(s: &Superposition2) -> InterferenceReport {
    let i = s.a1 * s.a2 * s.alpha.cos();
    let terms = vec![i, -i];
    InterferenceReport {
        probabilities: terms.iter().map(|t| 0.5 * (1.0 + 2.0 * t)).collect(),
        interference_terms: terms,
        classical_part: vec![0.5, 0.5],
    }
}

/// Generator ordering with `U(1,2), V(1,2)` first, then `W(1), …, W(N−1)`.
pub fn superposition_basis(n: usize) -> Result<GeneratorBasis> {
    reorder(&standard_basis(n, None)?, &crate::basis::superposition_order(n))
}

fn check_superposition_layout(basis: &GeneratorBasis, n: usize) -> Result<()> {
    let labels = basis.labels();
    let ok = basis.n_dim() == n
        && labels.len() > n
        && labels[0] == GeneratorLabel::U(1, 2)
        && labels[1] == GeneratorLabel::V(1, 2)
        && (1..n).all(|l| labels[l + 1] == GeneratorLabel::W(l));
    if ok {
        Ok(())
    } else {
        Err(BlochError::WrongBasisArrangement(format!(
            "expected U(1,2), V(1,2), W(1..{}) leading a dimension-{n} basis",
            n - 1
        )))
    }
}

/// Bloch vector of the two-state superposition in the superposition layout.
pub fn superposition2_vector(s: &Superposition2, basis: &Arc<GeneratorBasis>) -> Result<BlochVector> {
    let n = s.n_dim;
    check_superposition_layout(basis, n)?;
    let en = e_n(n);
    let cross = 2.0 * s.a1 * s.a2;
    let mut c = vec![0.0; basis.len()];
    c[0] = en * cross * s.alpha.cos();
    c[1] = en * cross * s.alpha.sin();
    c[2] = en * (s.a1 * s.a1 - s.a2 * s.a2);
    for l in 2..n {
        let lf = l as f64;
        c[l + 1] = en * (2.0 / (lf * (lf + 1.0))).sqrt();
    }
    BlochVector::new(c, Arc::clone(basis))
}

/// Three-dimensional shadows of the superposition geometry.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EffectiveProjection {
    pub n: [f64; 3],
    pub n_plus: [f64; 3],
    pub n_minus: [f64; 3],
    pub n1: [f64; 3],
    pub n2: [f64; 3],
}

/// First three coordinates of `n`, `n±`, `n₁`, `n₂` with the `W`-chain dropped.
pub fn effective_projection(s: &Superposition2, basis: &GeneratorBasis) -> Result<EffectiveProjection> {
    check_superposition_layout(basis, s.n_dim)?;
    let en = e_n(s.n_dim);
    let cross = 2.0 * s.a1 * s.a2;
    Ok(EffectiveProjection {
        n: [en * cross * s.alpha.cos(), en * cross * s.alpha.sin(), 0.0],
        n_plus: [en, 0.0, 0.0],
        n_minus: [-en, 0.0, 0.0],
        n1: [0.0, 0.0, en],
        n2: [0.0, 0.0, -en],
    })
}

/// Simplex of the observable with eigenvectors `φ+, φ−, φ₃, …, φ_N`.
pub fn plus_minus_simplex(basis: &Arc<GeneratorBasis>) -> Result<MeasurementSimplex> {
    let n = basis.n_dim();
    let zero = Complex64::new(0.0, 0.0);
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let mut vecs = vec![vec![zero; n]; n];
    vecs[0][0] = h;
    vecs[0][1] = h;
    vecs[1][0] = h;
    vecs[1][1] = -h;
    for (k, v) in vecs.iter_mut().enumerate().skip(2) {
        v[k] = Complex64::new(1.0, 0.0);
    }
    MeasurementSimplex::from_eigenbasis(vecs, (0..n).map(|i| i as f64).collect(), basis)
}

/// `I₁, I₂, I₃` and `P(ψ → χⱼ) = (1 + 3Iⱼ)/3`.
pub fn interference3(s: &Superposition3) -> InterferenceReport {
    let [a1, a2, a3] = s.a;
    let (al, de, ga) = (s.alpha, s.delta, s.gamma());
    let t = 2.0 * PI / 3.0;
    let term = |sa: f64, sd: f64, sg: f64| {
        2.0 / 3.0 * (a1 * a2 * (al - sa).cos() + a1 * a3 * (de - sd).cos() + a2 * a3 * (ga - sg).cos())
    };
    let terms = vec![term(0.0, 0.0, 0.0), term(t, 2.0 * t, t), term(2.0 * t, t, 2.0 * t)];
    InterferenceReport {
        probabilities: terms.iter().map(|i| (1.0 + 3.0 * i) / 3.0).collect(),
        interference_terms: terms,
        classical_part: vec![1.0 / 3.0; 3],
    }
}

/// Qutrit generators with the off-diagonal pairs first and `W(1), W(2)` last.
pub fn offdiagonal_first_basis3() -> Arc<GeneratorBasis> {
    let b = reorder(&standard_basis(3, None).expect("n = 3"), &offdiagonal_first_order(3)).expect("valid permutation");
    Arc::new(b)
}

fn check_offdiagonal_first(basis: &GeneratorBasis) -> Result<()> {
    let want = reorder(&standard_basis(3, None)?, &offdiagonal_first_order(3))?;
    if basis.labels() == want.labels() {
        Ok(())
    } else {
        Err(BlochError::WrongBasisArrangement("expected qutrit basis with off-diagonal pairs first".into()))
    }
}

/// Bloch vector of the three-state superposition.
pub fn superposition3_vector(s: &Superposition3, basis: &Arc<GeneratorBasis>) -> Result<BlochVector> {
    check_offdiagonal_first(basis)?;
    let [a1, a2, a3] = s.a;
    let r3 = 3f64.sqrt();
    let (al, de, ga) = (s.alpha, s.delta, s.gamma());
    let c = vec![
        a1 * a2 * al.cos(),
        a1 * a2 * al.sin(),
        a1 * a3 * de.cos(),
        a1 * a3 * de.sin(),
        a2 * a3 * ga.cos(),
        a2 * a3 * ga.sin(),
        (a1 * a1 - a2 * a2) / 2.0,
        (a1 * a1 + a2 * a2 - 2.0 * a3 * a3) / (2.0 * r3),
    ];
    BlochVector::new(c.into_iter().map(|x| r3 * x).collect(), Arc::clone(basis))
}

/// Fourier basis `χⱼ = (φ₁ + ω^{j−1}φ₂ + ω^{2(j−1)}φ₃)/√3`.
pub fn chi_basis3() -> Vec<Vec<Complex64>> {
    let omega = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
    let s = 1.0 / 3f64.sqrt();
    (0..3).map(|j| (0..3).map(|k| omega.powu((j * k) as u32) * s).collect()).collect()
}

/// Simplex of the observable with eigenvectors `χ₁, χ₂, χ₃`.
pub fn chi_simplex3(basis: &Arc<GeneratorBasis>) -> Result<MeasurementSimplex> {
    MeasurementSimplex::from_eigenbasis(chi_basis3(), vec![0.0, 1.0, 2.0], basis)
}

/// The two qutrit measurement triangles `nᵢ` (canonical) and `mᵢ` (Fourier).
#[derive(Debug, Clone)]
pub struct MubVertices {
    pub n: [BlochVector; 3],
    pub m: [BlochVector; 3],
}

/// Vertex vectors of both triangles in the off-diagonal-first qutrit basis.
pub fn mub_vertices3() -> MubVertices {
    let b = offdiagonal_first_basis3();
    let r3 = 3f64.sqrt();
    let v = |c: [f64; 8]| BlochVector::new(c.to_vec(), Arc::clone(&b)).expect("length 8");
    let k = -1.0 / (2.0 * r3);
    MubVertices {
        n: [
            v([0.0, 0.0, 0.0, 0.0, 0.0, 0.0, r3 / 2.0, 0.5]),
            v([0.0, 0.0, 0.0, 0.0, 0.0, 0.0, -r3 / 2.0, 0.5]),
            v([0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, -1.0]),
        ],
        m: [
            v([1.0 / r3, 0.0, 1.0 / r3, 0.0, 1.0 / r3, 0.0, 0.0, 0.0]),
            v([k, -r3 * k, k, r3 * k, k, -r3 * k, 0.0, 0.0]),
            v([k, r3 * k, k, -r3 * k, k, r3 * k, 0.0, 0.0]),
        ],
    }
}

/// Points `r_τ(α)` of the latitude disk: the two circle coordinates scaled
/// by `1−τ`, the rest held fixed. One vector per `(α, τ)` pair, `α` outer.
pub fn latitude_disk(
    s: &Superposition2,
    basis: &Arc<GeneratorBasis>,
    alphas: &[f64],
    taus: &[f64],
) -> Result<Vec<BlochVector>> {
    if let Some(t) = taus.iter().find(|t| !(0.0..=1.0).contains(*t)) {
        return Err(BlochError::OutOfRange(format!("tau {t} not in [0, 1]")));
    }
    let mut out = Vec::with_capacity(alphas.len() * taus.len());
    for &alpha in alphas {
        let base = superposition2_vector(&Superposition2 { alpha, ..*s }, basis)?;
        for &tau in taus {
            let mut c = base.components().to_vec();
            c[0] *= 1.0 - tau;
            c[1] *= 1.0 - tau;
            out.push(base.with_components(c)?);
        }
    }
    Ok(out)
}
