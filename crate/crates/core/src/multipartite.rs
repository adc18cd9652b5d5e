//! Bipartite states in the tensorial generator basis.
//!
//! With factor dimensions `N_A`, `N_B` the coefficient vector splits into
//! an `A` sector, a `B` sector and an `AB` correlation sector, laid out
//! contiguously in that order. The `AB` slot of generator pair `(k, ℓ)`
//! (0-based) is `k·(N_B²−1) + ℓ`.

use std::f64::consts::FRAC_1_SQRT_2;
use std::ops::Range;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::basis::{
    complete_orthonormal, e_n, reorder, standard_basis, superposition_order, tensorial_basis, GeneratorBasis,
};
use crate::bloch::{decode, encode, validate_weights, BlochVector, OperatorState};
use crate::error::{BlochError, Result};
use crate::matrix::{dot, inner, ComplexMatrix, Subsystem};
use crate::measurement::{
    project_onto_simplex, sample_membrane, simplex_from_observable, BarycentricCoords, MeasurementSimplex,
};
use crate::rng::parallel_counts;

const UNIT_TOL: f64 = 1e-12;

/// Index ranges and scale constants of a bipartite tensorial basis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SectorLayout {
    pub factor_dims: (usize, usize),
    pub a: Range<usize>,
    pub b: Range<usize>,
    pub ab: Range<usize>,
    pub d_a: f64,
    pub d_b: f64,
    pub d_ab: f64,
}

impl SectorLayout {
    pub fn new(na: usize, nb: usize) -> Result<Self> {
        if na < 2 || nb < 2 {
            return Err(BlochError::OutOfRange(format!("factor dimensions ({na}, {nb}) below 2")));
        }
        let (ga, gb) = (na * na - 1, nb * nb - 1);
        let n1 = (na * nb - 1) as f64;
        Ok(Self {
            factor_dims: (na, nb),
            a: 0..ga,
            b: ga..ga + gb,
            ab: ga + gb..ga + gb + ga * gb,
            d_a: ((na - 1) as f64 / n1).sqrt(),
            d_b: ((nb - 1) as f64 / n1).sqrt(),
            d_ab: (((na - 1) * (nb - 1)) as f64 / n1).sqrt(),
        })
    }

    pub fn n_dim(&self) -> usize {
        self.factor_dims.0 * self.factor_dims.1
    }

    /// Length of the full coefficient vector, `N²−1`.
    pub fn len(&self) -> usize {
        self.ab.end
    }

    pub fn is_empty(&self) -> bool {
        self.ab.end == 0
    }

    /// Position of `AB` pair `(k, ℓ)` inside the full vector.
    pub fn ab_index(&self, k: usize, l: usize) -> usize {
        self.ab.start + k * self.b.len() + l
    }

    /// `r₀ = 1/√(N−1)`.
    pub fn r0(&self) -> f64 {
        1.0 / ((self.n_dim() - 1) as f64).sqrt()
    }

    /// `(1/√(N_A−1), 1/√(N_B−1))`.
    pub fn r0_factors(&self) -> (f64, f64) {
        let (na, nb) = self.factor_dims;
        (1.0 / ((na - 1) as f64).sqrt(), 1.0 / ((nb - 1) as f64).sqrt())
    }
}

/// Two factor bases together with their tensorial combination.
#[derive(Debug, Clone)]
pub struct BipartiteBasis {
    factor_a: Arc<GeneratorBasis>,
    factor_b: Arc<GeneratorBasis>,
    joint: Arc<GeneratorBasis>,
    layout: SectorLayout,
}

impl BipartiteBasis {
    pub fn new(factor_a: Arc<GeneratorBasis>, factor_b: Arc<GeneratorBasis>) -> Result<Self> {
        let joint = Arc::new(tensorial_basis(&[&factor_a, &factor_b])?);
        let layout = SectorLayout::new(factor_a.n_dim(), factor_b.n_dim())?;
        Ok(Self { factor_a, factor_b, joint, layout })
    }

    /// Tensorial basis over two standard factor bases.
    pub fn standard(na: usize, nb: usize) -> Result<Self> {
        Self::new(Arc::new(standard_basis(na, None)?), Arc::new(standard_basis(nb, None)?))
    }

    pub fn factor_a(&self) -> &Arc<GeneratorBasis> {
        &self.factor_a
    }

    pub fn factor_b(&self) -> &Arc<GeneratorBasis> {
        &self.factor_b
    }

    pub fn joint(&self) -> &Arc<GeneratorBasis> {
        &self.joint
    }

    pub fn layout(&self) -> &SectorLayout {
        &self.layout
    }
}

/// Sectors of a bipartite Bloch vector. `r_a`, `r_b` and `r_ab` are
/// descaled; `r_int` has full length and vanishes outside the `AB` range.
#[derive(Debug, Clone)]
pub struct SectorDecomposition {
    pub r_a: BlochVector,
    pub r_b: BlochVector,
    pub r_ab: Vec<f64>,
    pub r_int: Vec<f64>,
}

impl SectorDecomposition {
    /// `d_A r_A ⊕ d_B r_B ⊕ d_AB r_AB + r_int`.
    pub fn reassemble(&self, bip: &BipartiteBasis) -> Result<BlochVector> {
        let l = bip.layout();
        let mut c = self.r_int.clone();
        for (i, x) in self.r_a.components().iter().enumerate() {
            c[l.a.start + i] += l.d_a * x;
        }
        for (i, x) in self.r_b.components().iter().enumerate() {
            c[l.b.start + i] += l.d_b * x;
        }
        for (i, x) in self.r_ab.iter().enumerate() {
            c[l.ab.start + i] += l.d_ab * x;
        }
        BlochVector::new(c, Arc::clone(bip.joint()))
    }
}

/// Bloch vector of `D(r_A) ⊗ D(r_B)`.
pub fn product_compose(r_a: &BlochVector, r_b: &BlochVector, bip: &BipartiteBasis) -> Result<BlochVector> {
    check_factor(r_a, bip.factor_a())?;
    check_factor(r_b, bip.factor_b())?;
    let l = bip.layout();
    let mut c = Vec::with_capacity(l.len());
    c.extend(r_a.components().iter().map(|x| l.d_a * x));
    c.extend(r_b.components().iter().map(|x| l.d_b * x));
    for x in r_a.components() {
        c.extend(r_b.components().iter().map(|y| l.d_ab * x * y));
    }
    BlochVector::new(c, Arc::clone(bip.joint()))
}

fn check_factor(r: &BlochVector, basis: &Arc<GeneratorBasis>) -> Result<()> {
    if Arc::ptr_eq(r.basis(), basis) || **r.basis() == **basis {
        Ok(())
    } else {
        Err(BlochError::BasisMismatch)
    }
}

/// Reads the sectors of `r`. With `reference` (a descaled `AB` vector of a
/// separable part) the remainder of the `AB` sector goes to `r_int`;
/// without it `r_int` is zero.
pub fn sector_split(r: &BlochVector, bip: &BipartiteBasis, reference: Option<&[f64]>) -> Result<SectorDecomposition> {
    let l = bip.layout();
    if r.components().len() != l.len() {
        return Err(BlochError::DimensionMismatch { expected: l.len(), got: r.components().len() });
    }
    let c = r.components();
    let r_a = BlochVector::new(c[l.a.clone()].iter().map(|x| x / l.d_a).collect(), Arc::clone(bip.factor_a()))?;
    let r_b = BlochVector::new(c[l.b.clone()].iter().map(|x| x / l.d_b).collect(), Arc::clone(bip.factor_b()))?;
    let mut r_int = vec![0.0; l.len()];
    let r_ab = match reference {
        None => c[l.ab.clone()].iter().map(|x| x / l.d_ab).collect(),
        Some(re) => {
            if re.len() != l.ab.len() {
                return Err(BlochError::DimensionMismatch { expected: l.ab.len(), got: re.len() });
            }
            for (i, (x, y)) in c[l.ab.clone()].iter().zip(re).enumerate() {
                r_int[l.ab.start + i] = x - l.d_ab * y;
            }
            re.to_vec()
        }
    };
    Ok(SectorDecomposition { r_a, r_b, r_ab, r_int })
}

/// Bloch vectors of the two reduced states of `decode(r)`.
pub fn reduced_vectors(r: &BlochVector, bip: &BipartiteBasis) -> Result<(BlochVector, BlochVector)> {
    let d = decode(r);
    let dims = bip.layout().factor_dims;
    let da = d.partial_trace(dims, Subsystem::A)?;
    let db = d.partial_trace(dims, Subsystem::B)?;
    Ok((crate::bloch::encode_matrix(&da, bip.factor_a())?, crate::bloch::encode_matrix(&db, bip.factor_b())?))
}

/// `Σ p_μ · product_compose(r_A^μ, r_B^μ)`.
pub fn separable_compose(terms: &[(f64, &BlochVector, &BlochVector)], bip: &BipartiteBasis) -> Result<BlochVector> {
    if terms.is_empty() {
        return Err(BlochError::InvalidWeights("no terms".into()));
    }
    validate_weights(terms.iter().map(|t| t.0))?;
    let mut acc = vec![0.0; bip.layout().len()];
    for (p, ra, rb) in terms {
        let v = product_compose(ra, rb, bip)?;
        for (a, x) in acc.iter_mut().zip(v.components()) {
            *a += p * x;
        }
    }
    BlochVector::new(acc, Arc::clone(bip.joint()))
}

/// `a₁ ψ_A⊗φ_B + a₂ e^{iα} φ_A⊗ψ_B`.
#[derive(Debug, Clone, PartialEq)]
pub struct EntangledPairSpec {
    a1: f64,
    a2: f64,
    alpha: f64,
    psi_a: Vec<Complex64>,
    phi_a: Vec<Complex64>,
    psi_b: Vec<Complex64>,
    phi_b: Vec<Complex64>,
}

impl EntangledPairSpec {
    pub fn new(
        a1: f64,
        a2: f64,
        alpha: f64,
        (psi_a, phi_a): (Vec<Complex64>, Vec<Complex64>),
        (psi_b, phi_b): (Vec<Complex64>, Vec<Complex64>),
    ) -> Result<Self> {
        if !(0.0..=1.0).contains(&a1) || !(0.0..=1.0).contains(&a2) || (a1 * a1 + a2 * a2 - 1.0).abs() > UNIT_TOL {
            return Err(BlochError::OutOfRange(format!("amplitudes ({a1}, {a2}) not normalized")));
        }
        check_pair(&psi_a, &phi_a)?;
        check_pair(&psi_b, &phi_b)?;
        Ok(Self { a1, a2, alpha, psi_a, phi_a, psi_b, phi_b })
    }

    /// Pair built on the first two canonical vectors of each factor.
    pub fn canonical(a1: f64, alpha: f64, na: usize, nb: usize) -> Result<Self> {
        let e = |n: usize, i: usize| {
            let mut v = vec![Complex64::new(0.0, 0.0); n];
            v[i] = Complex64::new(1.0, 0.0);
            v
        };
        if na < 2 || nb < 2 {
            return Err(BlochError::OutOfRange(format!("factor dimensions ({na}, {nb}) below 2")));
        }
        let a2 = (1.0 - a1 * a1).max(0.0).sqrt();
        Self::new(a1, a2, alpha, (e(na, 0), e(na, 1)), (e(nb, 0), e(nb, 1)))
    }

    /// `(|01⟩ − |10⟩)/√2`.
    pub fn singlet() -> Self {
        Self::canonical(FRAC_1_SQRT_2, std::f64::consts::PI, 2, 2).expect("valid")
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

    pub fn factor_dims(&self) -> (usize, usize) {
        (self.psi_a.len(), self.psi_b.len())
    }

    pub fn ket(&self) -> Vec<Complex64> {
        let first = kron_vec(&self.psi_a, &self.phi_b);
        let second = kron_vec(&self.phi_a, &self.psi_b);
        let phase = Complex64::from_polar(self.a2, self.alpha);
        first.iter().zip(&second).map(|(x, y)| x * self.a1 + y * phase).collect()
    }

    pub fn state(&self) -> OperatorState {
        OperatorState::pure(&self.ket()).expect("normalized ket")
    }

    /// Factor bases whose first generators are `U, V, W₁` on `(ψ, φ)`,
    /// followed by the rest of the `W` chain and the remaining generators.
    pub fn adapted_basis(&self) -> Result<BipartiteBasis> {
        let build = |psi: &[Complex64], phi: &[Complex64]| -> Result<Arc<GeneratorBasis>> {
            let n = psi.len();
            let onb = complete_orthonormal(&[psi.to_vec(), phi.to_vec()], n)?;
            Ok(Arc::new(reorder(&standard_basis(n, Some(&onb))?, &superposition_order(n))?))
        };
        BipartiteBasis::new(build(&self.psi_a, &self.phi_a)?, build(&self.psi_b, &self.phi_b)?)
    }
}

fn check_pair(psi: &[Complex64], phi: &[Complex64]) -> Result<()> {
    if psi.len() != phi.len() {
        return Err(BlochError::DimensionMismatch { expected: psi.len(), got: phi.len() });
    }
    let dev = (inner(psi, psi).re - 1.0).abs().max((inner(phi, phi).re - 1.0).abs()).max(inner(psi, phi).norm());
    if dev > UNIT_TOL {
        return Err(BlochError::NotOrthonormal(dev));
    }
    Ok(())
}

fn kron_vec(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect()
}

/// Closed-form decomposition of an entangled pair in its adapted basis.
#[derive(Debug, Clone)]
pub struct EntangledDecomposition {
    pub basis: BipartiteBasis,
    pub sectors: SectorDecomposition,
}

/// `r = d_A r̄_A ⊕ d_B r̄_B ⊕ d_AB r̄_AB + r_int` with `r̄_AB(i,j) =
/// a₁² rᴬᵢ sᴮⱼ + a₂² sᴬᵢ rᴮⱼ` and `r_int` supported on the four `AB` slots
/// spanned by the first two generators of each factor.
pub fn entangled_decompose(spec: &EntangledPairSpec) -> Result<EntangledDecomposition> {
    let bip = spec.adapted_basis()?;
    let (na, nb) = spec.factor_dims();
    let (p1, p2) = (spec.a1 * spec.a1, spec.a2 * spec.a2);
    let (r_a, s_a) = (pole_vector(na, 1.0), pole_vector(na, -1.0));
    let (r_b, s_b) = (pole_vector(nb, 1.0), pole_vector(nb, -1.0));

    let bar_a: Vec<f64> = r_a.iter().zip(&s_a).map(|(r, s)| p1 * r + p2 * s).collect();
    let bar_b: Vec<f64> = s_b.iter().zip(&r_b).map(|(s, r)| p1 * s + p2 * r).collect();
    let mut bar_ab = Vec::with_capacity(r_a.len() * r_b.len());
    for i in 0..r_a.len() {
        for j in 0..r_b.len() {
            bar_ab.push(p1 * r_a[i] * s_b[j] + p2 * s_a[i] * r_b[j]);
        }
    }

    let l = bip.layout().clone();
    let amp = e_n(na * nb) * 2f64.sqrt() * spec.a1 * spec.a2;
    let (sa, ca) = spec.alpha.sin_cos();
    let mut r_int = vec![0.0; l.len()];
    r_int[l.ab_index(0, 0)] = amp * ca;
    r_int[l.ab_index(1, 1)] = amp * ca;
    r_int[l.ab_index(0, 1)] = -amp * sa;
    r_int[l.ab_index(1, 0)] = amp * sa;

    let sectors = SectorDecomposition {
        r_a: BlochVector::new(bar_a, Arc::clone(bip.factor_a()))?,
        r_b: BlochVector::new(bar_b, Arc::clone(bip.factor_b()))?,
        r_ab: bar_ab,
        r_int,
    };
    Ok(EntangledDecomposition { basis: bip, sectors })
}

/// Bloch vector of `|ψ⟩⟨ψ|` or `|φ⟩⟨φ|` in an adapted factor basis:
/// `e_N(0, 0, ±1, 1/√3, 1/√6, …, 1/c_N, 0, …)`.
fn pole_vector(n: usize, sign: f64) -> Vec<f64> {
    let en = e_n(n);
    let mut v = vec![0.0; n * n - 1];
    v[2] = en * sign;
    for l in 2..n {
        let lf = l as f64;
        v[l + 1] = en * (2.0 / (lf * (lf + 1.0))).sqrt();
    }
    v
}

/// Permutation of the `AB` sector into the shell order
/// `(1,1), (2,2), (1,2), (2,1), (3,3), (1,3), (2,3), (3,2), (3,1), …`.
/// Entry `i` is the 0-based sector slot shown at position `i`.
pub fn ab_shell_order(ga: usize, gb: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(ga * gb);
    for m in 1..=ga.max(gb) {
        if m <= ga && m <= gb {
            out.push((m - 1) * gb + (m - 1));
        }
        if m <= gb {
            for i in 1..m.min(ga + 1) {
                out.push((i - 1) * gb + (m - 1));
            }
        }
        if m <= ga {
            for j in (1..m.min(gb + 1)).rev() {
                out.push((m - 1) * gb + (j - 1));
            }
        }
    }
    out
}

/// Joint outcome probabilities `Tr(D · P_i^A ⊗ P_j^B)`, rows and columns in
/// ascending eigenvalue order of the factor observables.
pub fn product_measurement_probs(
    r: &BlochVector,
    obs_a: &ComplexMatrix,
    obs_b: &ComplexMatrix,
    bip: &BipartiteBasis,
) -> Result<Vec<Vec<f64>>> {
    let sa = simplex_from_observable(obs_a, bip.factor_a())?;
    let sb = simplex_from_observable(obs_b, bip.factor_b())?;
    let d = decode(r);
    let mut table = Vec::with_capacity(sa.n_dim());
    for pa in sa.projectors() {
        let mut row = Vec::with_capacity(sb.n_dim());
        for pb in sb.projectors() {
            row.push(d.trace_product(&pa.kron(pb))?.re);
        }
        table.push(row);
    }
    Ok(table)
}

/// Simplex of the product observable, vertex `i·N_B + j` for the pair `(i, j)`.
pub fn product_simplex(
    obs_a: &ComplexMatrix,
    obs_b: &ComplexMatrix,
    bip: &BipartiteBasis,
) -> Result<MeasurementSimplex> {
    let sa = simplex_from_observable(obs_a, bip.factor_a())?;
    let sb = simplex_from_observable(obs_b, bip.factor_b())?;
    let mut vecs = Vec::new();
    let mut labels = Vec::new();
    for (i, va) in sa.eigenvectors().iter().enumerate() {
        for (j, vb) in sb.eigenvectors().iter().enumerate() {
            vecs.push(kron_vec(va, vb));
            labels.push((i * sb.n_dim() + j) as f64);
        }
    }
    MeasurementSimplex::from_eigenbasis(vecs, labels, bip.joint())
}

/// `n·σ` for a unit 3-vector.
pub fn spin_observable(n: [f64; 3]) -> Result<ComplexMatrix> {
    check_unit(&n)?;
    ComplexMatrix::from_rows(&[
        vec![Complex64::new(n[2], 0.0), Complex64::new(n[0], -n[1])],
        vec![Complex64::new(n[0], n[1]), Complex64::new(-n[2], 0.0)],
    ])
}

fn check_unit(n: &[f64; 3]) -> Result<()> {
    let len = dot(n, n).sqrt();
    if (len - 1.0).abs() > UNIT_TOL {
        return Err(BlochError::NotUnit(len));
    }
    Ok(())
}

/// `E(a, b) = −a·b`.
pub fn singlet_expectation(n_a: [f64; 3], n_b: [f64; 3]) -> Result<f64> {
    check_unit(&n_a)?;
    check_unit(&n_b)?;
    Ok(-dot(&n_a, &n_b))
}

/// Configuration of the rod-coupled sequential measurement.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RodExperimentConfig {
    pub n_a: [f64; 3],
    pub n_b: [f64; 3],
    pub shots: u64,
    pub seed: u64,
    pub workers: usize,
    /// Measure `B` first instead of `A`.
    pub b_first: bool,
}

/// Four-cell table indexed `[a][b]` with `0` for the `+` outcome, `1` for `−`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RodResult {
    pub counts: [[u64; 2]; 2],
    pub shots: u64,
    pub e_hat: f64,
}

/// Weights `(½(1 + x), ½(1 − x))` of a point at coordinate `x` on a unit
/// segment between the `+` and `−` poles.
fn segment_weights(x: f64) -> BarycentricCoords {
    let p = (0.5 * (1.0 + x)).clamp(0.0, 1.0);
    BarycentricCoords::new(vec![p, 1.0 - p]).expect("valid segment weights")
}

/// Exact four-cell distribution of the rod protocol.
pub fn rod_analytic_table(n_a: [f64; 3], n_b: [f64; 3], b_first: bool) -> Result<[[f64; 2]; 2]> {
    check_unit(&n_a)?;
    check_unit(&n_b)?;
    let (first, second) = if b_first { (n_b, n_a) } else { (n_a, n_b) };
    let c = dot(&first, &second);
    let mut t = [[0.0; 2]; 2];
    let signs = [1.0, -1.0];
    for (i, s1) in signs.iter().enumerate() {
        for (j, s2) in signs.iter().enumerate() {
            // first side 50/50, second forced to −s1·first then measured along its axis
            let p = 0.25 * (1.0 - s1 * s2 * c);
            if b_first {
                t[j][i] = p;
            } else {
                t[i][j] = p;
            }
        }
    }
    Ok(t)
}

/// Monte Carlo rod protocol: the first side is sampled from the centre of
/// its segment, the other side is pushed to the antipode along the first
/// axis, the rod is released, and the second side is sampled along its own
/// axis.
pub fn rod_experiment(cfg: &RodExperimentConfig) -> Result<RodResult> {
    check_unit(&cfg.n_a)?;
    check_unit(&cfg.n_b)?;
    if cfg.shots == 0 {
        return Err(BlochError::OutOfRange("shots must be at least 1".into()));
    }
    let (first, second) = if cfg.b_first { (cfg.n_b, cfg.n_a) } else { (cfg.n_a, cfg.n_b) };
    let c = dot(&first, &second);
    let centre = BarycentricCoords::uniform(2);
    // index 0: first side landed on +, so the other sits at −first
    let forced = [segment_weights(-c), segment_weights(c)];
    let flat = parallel_counts(4, cfg.shots, cfg.seed, cfg.workers, |rng| {
        let i = sample_membrane(&centre, rng).outcome_index;
        let j = sample_membrane(&forced[i], rng).outcome_index;
        if cfg.b_first {
            2 * j + i
        } else {
            2 * i + j
        }
    })?;
    let counts = [[flat[0], flat[1]], [flat[2], flat[3]]];
    let same = (counts[0][0] + counts[1][1]) as f64;
    let diff = (counts[0][1] + counts[1][0]) as f64;
    Ok(RodResult { counts, shots: cfg.shots, e_hat: (same - diff) / cfg.shots as f64 })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChshMode {
    Analytic,
    /// `shots` split evenly over the four axis pairs.
    MonteCarlo {
        shots: u64,
        seed: u64,
        workers: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChshResult {
    pub s: f64,
    /// `E(a,b), E(a,b′), E(a′,b), E(a′,b′)`.
    pub correlations: [f64; 4],
}

/// Axis in the `xz` plane at `deg` degrees from `z`.
pub fn planar_axis(deg: f64) -> [f64; 3] {
    let t = deg.to_radians();
    [t.sin(), 0.0, t.cos()]
}

/// Axes `(a, a′, b, b′)` at 90°, 0°, 225°, 135° that reach `2√2`.
pub fn optimal_chsh_axes() -> [[f64; 3]; 4] {
    [planar_axis(90.0), planar_axis(0.0), planar_axis(225.0), planar_axis(135.0)]
}

/// Seed of the `pair`-th correlation run in a Monte Carlo CHSH estimate.
pub fn chsh_pair_seed(seed: u64, pair: u64) -> u64 {
    seed ^ pair.wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// `S = |E(a,b) − E(a,b′) + E(a′,b) + E(a′,b′)|`.
pub fn chsh(a: [f64; 3], a_prime: [f64; 3], b: [f64; 3], b_prime: [f64; 3], mode: ChshMode) -> Result<ChshResult> {
    let pairs = [(a, b), (a, b_prime), (a_prime, b), (a_prime, b_prime)];
    let mut e = [0.0; 4];
    for (k, (x, y)) in pairs.iter().enumerate() {
        e[k] = match mode {
            ChshMode::Analytic => singlet_expectation(*x, *y)?,
            ChshMode::MonteCarlo { shots, seed, workers } => {
                let per = shots / 4 + u64::from((k as u64) < shots % 4);
                let cfg = RodExperimentConfig {
                    n_a: *x,
                    n_b: *y,
                    shots: per,
                    seed: chsh_pair_seed(seed, k as u64),
                    workers,
                    b_first: false,
                };
                rod_experiment(&cfg)?.e_hat
            }
        };
    }
    Ok(ChshResult { s: (e[0] - e[1] + e[2] + e[3]).abs(), correlations: e })
}

/// Largest gaps between the one-entity sectors of the projected state and
/// the projections of the reduced vectors onto their own segments.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParallelProjectionReport {
    pub deviation_a: f64,
    pub deviation_b: f64,
    pub weights_a: Vec<f64>,
    pub weights_b: Vec<f64>,
}

/// Projects the pair state onto the product-measurement simplex and
/// compares its one-entity sectors with the factor-level projections.
pub fn parallel_sector_projection_check(
    spec: &EntangledPairSpec,
    obs_a: &ComplexMatrix,
    obs_b: &ComplexMatrix,
) -> Result<ParallelProjectionReport> {
    if spec.factor_dims() != (2, 2) {
        return Err(BlochError::OutOfRange("parallel sector check needs two qubits".into()));
    }
    let bip = BipartiteBasis::standard(2, 2)?;
    let r = encode(&spec.state(), bip.joint())?;
    let (w, _) = project_onto_simplex(&r, &product_simplex(obs_a, obs_b, &bip)?)?;
    let parallel = product_simplex(obs_a, obs_b, &bip)?.point(&w);
    let split = sector_split(&parallel, &bip, None)?;

    let sa = simplex_from_observable(obs_a, bip.factor_a())?;
    let sb = simplex_from_observable(obs_b, bip.factor_b())?;
    let reduced = sector_split(&r, &bip, None)?;
    let (wa, _) = project_onto_simplex(&reduced.r_a, &sa)?;
    let (wb, _) = project_onto_simplex(&reduced.r_b, &sb)?;
    let pa = sa.point(&wa);
    let pb = sb.point(&wb);
    let gap = |x: &BlochVector, y: &BlochVector| {
        x.components().iter().zip(y.components()).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max)
    };
    Ok(ParallelProjectionReport {
        deviation_a: gap(&split.r_a, &pa),
        deviation_b: gap(&split.r_b, &pb),
        weights_a: wa.weights().to_vec(),
        weights_b: wb.weights().to_vec(),
    })
}
