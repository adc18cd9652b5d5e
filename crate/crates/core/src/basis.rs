//! Determinations of the `SU(N)` generators: the standard off-diagonal /
//! diagonal family built on an orthonormal basis, and the tensorial family
//! built from generators of the factors of a composite space.
//!
//! All bases share the normalization `Tr ΛᵢΛⱼ = 2δᵢⱼ`.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{BlochError, Result};
use crate::matrix::{inner, ComplexMatrix};

const ORTHONORMAL_TOL: f64 = 1e-12;

/// Index descriptor of a single generator.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GeneratorLabel {
    /// Symmetric off-diagonal `|b_j⟩⟨b_k| + |b_k⟩⟨b_j|` (1-based, `j < k`).
    U(usize, usize),
    /// Antisymmetric off-diagonal `−i(|b_j⟩⟨b_k| − |b_k⟩⟨b_j|)` (1-based, `j < k`).
    V(usize, usize),
    /// Diagonal `W_l`, `1 ≤ l ≤ N−1`.
    W(usize),
    /// Tensor index tuple; `0` selects the scaled identity of that factor.
    Tensor(Vec<usize>),
}

impl fmt::Display for GeneratorLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorLabel::U(j, k) => write!(f, "U({j},{k})"),
            GeneratorLabel::V(j, k) => write!(f, "V({j},{k})"),
            GeneratorLabel::W(l) => write!(f, "W({l})"),
            GeneratorLabel::Tensor(idx) => {
                let parts: Vec<String> = idx.iter().map(|i| i.to_string()).collect();
                write!(f, "({})", parts.join(","))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BasisKind {
    Standard,
    /// Factor dimensions `N₁, …, N_n`.
    Tensorial(Vec<usize>),
}

/// An ordered set of `N²−1` traceless Hermitian generators.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorBasis {
    n_dim: usize,
    matrices: Vec<ComplexMatrix>,
    labels: Vec<GeneratorLabel>,
    kind: BasisKind,
}

/// Outcome of [`verify_basis`].
#[derive(Debug, Clone, PartialEq)]
pub struct BasisReport {
    pub hermitian_ok: bool,
    pub traceless_ok: bool,
    pub orthonormal_ok: bool,
    pub worst_deviation: f64,
}

impl BasisReport {
    pub fn all_ok(&self) -> bool {
        self.hermitian_ok && self.traceless_ok && self.orthonormal_ok
    }
}

/// `c_N = √(N(N−1)/2)`.
pub fn c_n(n: usize) -> f64 {
    let n = n as f64;
    (n * (n - 1.0) / 2.0).sqrt()
}

/// `e_N = N / (2 c_N)`.
pub fn e_n(n: usize) -> f64 {
    n as f64 / (2.0 * c_n(n))
}

impl GeneratorBasis {
    /// Assembles a basis from parts without checking the generator algebra;
    /// use [`verify_basis`] on the result when the matrices are untrusted.
    pub fn from_parts(
        n_dim: usize,
        matrices: Vec<ComplexMatrix>,
        labels: Vec<GeneratorLabel>,
        kind: BasisKind,
    ) -> Result<Self> {
        let expected = n_dim * n_dim - 1;
        if matrices.len() != expected {
            return Err(BlochError::DimensionMismatch { expected, got: matrices.len() });
        }
        if labels.len() != expected {
            return Err(BlochError::DimensionMismatch { expected, got: labels.len() });
        }
        if let Some(m) = matrices.iter().find(|m| m.dim() != n_dim) {
            return Err(BlochError::DimensionMismatch { expected: n_dim, got: m.dim() });
        }
        Ok(Self { n_dim, matrices, labels, kind })
    }

    pub fn n_dim(&self) -> usize {
        self.n_dim
    }

    /// Number of generators, `N²−1`.
    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    pub fn matrices(&self) -> &[ComplexMatrix] {
        &self.matrices
    }

    pub fn matrix(&self, i: usize) -> &ComplexMatrix {
        &self.matrices[i]
    }

    pub fn labels(&self) -> &[GeneratorLabel] {
        &self.labels
    }

    pub fn kind(&self) -> &BasisKind {
        &self.kind
    }

    pub fn c_n(&self) -> f64 {
        c_n(self.n_dim)
    }

    pub fn e_n(&self) -> f64 {
        e_n(self.n_dim)
    }

    /// Position of a label in this basis.
    pub fn index_of(&self, label: &GeneratorLabel) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

/// Canonical basis vectors of `ℂᴺ`.
pub fn canonical_onb(n: usize) -> Vec<Vec<Complex64>> {
    (0..n).map(|i| (0..n).map(|j| Complex64::new(if i == j { 1.0 } else { 0.0 }, 0.0)).collect()).collect()
}

fn check_orthonormal(onb: &[Vec<Complex64>], n: usize) -> Result<()> {
    if onb.len() != n {
        return Err(BlochError::DimensionMismatch { expected: n, got: onb.len() });
    }
    check_orthonormal_set(onb, n)
}

/// Extends orthonormal `partial` to a full basis of `ℂⁿ` by Gram-Schmidt
/// over the canonical vectors.
pub fn complete_orthonormal(partial: &[Vec<Complex64>], n: usize) -> Result<Vec<Vec<Complex64>>> {
    if partial.len() > n {
        return Err(BlochError::DimensionMismatch { expected: n, got: partial.len() });
    }
    let mut out: Vec<Vec<Complex64>> = partial.to_vec();
    check_orthonormal_set(&out, n)?;
    for e in canonical_onb(n) {
        if out.len() == n {
            break;
        }
        let mut v = e;
        for _ in 0..2 {
            for b in &out {
                let c = inner(b, &v);
                for (x, y) in v.iter_mut().zip(b) {
                    *x -= c * y;
                }
            }
        }
        let len = inner(&v, &v).re.sqrt();
        if len > 1e-6 {
            out.push(v.into_iter().map(|x| x / len).collect());
        }
    }
    Ok(out)
}

fn check_orthonormal_set(vs: &[Vec<Complex64>], n: usize) -> Result<()> {
    if let Some(v) = vs.iter().find(|v| v.len() != n) {
        return Err(BlochError::DimensionMismatch { expected: n, got: v.len() });
    }
    let mut worst = 0.0f64;
    for (i, a) in vs.iter().enumerate() {
        for (j, b) in vs.iter().enumerate() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((inner(a, b) - target).norm());
        }
    }
    if worst > ORTHONORMAL_TOL {
        return Err(BlochError::NotOrthonormal(worst));
    }
    Ok(())
}

/// Standard generators on `onb` (canonical basis when `None`).
///
/// Ordering: for `k = 2..=N`, the pairs `(U_jk, V_jk)` for `j = 1..k`, then
/// `W_{k−1}`. For `N = 3` this is the usual Gell-Mann order.
pub fn standard_basis(n: usize, onb: Option<&[Vec<Complex64>]>) -> Result<GeneratorBasis> {
    if n < 2 {
        return Err(BlochError::OutOfRange(format!("dimension must be at least 2, got {n}")));
    }
    let owned;
    let onb = match onb {
        Some(b) => {
            check_orthonormal(b, n)?;
            b
        }
        None => {
            owned = canonical_onb(n);
            &owned
        }
    };
    let ket_bra = |j: usize, k: usize| ComplexMatrix::outer(&onb[j], &onb[k]).expect("same length");

    let mut matrices = Vec::with_capacity(n * n - 1);
    let mut labels = Vec::with_capacity(n * n - 1);
    for k in 1..n {
        for j in 0..k {
            let jk = ket_bra(j, k);
            let kj = ket_bra(k, j);
            matrices.push(jk.add(&kj).expect("same dim"));
            labels.push(GeneratorLabel::U(j + 1, k + 1));
            matrices.push(jk.sub(&kj).expect("same dim").scale(Complex64::new(0.0, -1.0)));
            labels.push(GeneratorLabel::V(j + 1, k + 1));
        }
        matrices.push(w_generator(k, onb));
        labels.push(GeneratorLabel::W(k));
    }
    GeneratorBasis::from_parts(n, matrices, labels, BasisKind::Standard)
}

/// `W_l = √(2/(l(l+1))) (Σ_{j≤l} |b_j⟩⟨b_j| − l |b_{l+1}⟩⟨b_{l+1}|)`.
fn w_generator(l: usize, onb: &[Vec<Complex64>]) -> ComplexMatrix {
    let n = onb.len();
    let mut m = ComplexMatrix::zeros(n);
    for b in &onb[..l] {
        m.add_scaled_assign(1.0, &ComplexMatrix::projector(b)).expect("same dim");
    }
    m.add_scaled_assign(-(l as f64), &ComplexMatrix::projector(&onb[l])).expect("same dim");
    let lf = l as f64;
    m.scale_real((2.0 / (lf * (lf + 1.0))).sqrt())
}

/// Tensorial generators `2^{(1−n)/2} Λ^{A₁}_{j₁} ⊗ … ⊗ Λ^{A_n}_{j_n}`, with
/// index `0` standing for `√(2/Nᵢ)·I`. The all-zero tuple is excluded.
///
/// Ordering is by sector: tuples with one nonzero index (factor order, inner
/// index ascending), then two nonzero indices (factor pairs lexicographic,
/// inner indices lexicographic), and so on.
pub fn tensorial_basis(factors: &[&GeneratorBasis]) -> Result<GeneratorBasis> {
    if factors.len() < 2 {
        return Err(BlochError::TooFewFactors { min: 2, got: factors.len() });
    }
    let nf = factors.len();
    let dims: Vec<usize> = factors.iter().map(|f| f.n_dim()).collect();
    let n: usize = dims.iter().product();
    let prefactor = 2f64.powf((1.0 - nf as f64) / 2.0);

    let factor_matrix = |f: usize, j: usize| -> ComplexMatrix {
        if j == 0 {
            ComplexMatrix::identity(dims[f]).scale_real((2.0 / dims[f] as f64).sqrt())
        } else {
            factors[f].matrix(j - 1).clone()
        }
    };

    let mut matrices = Vec::with_capacity(n * n - 1);
    let mut labels = Vec::with_capacity(n * n - 1);
    for tuple in sector_ordered_tuples(&dims) {
        let mut m = factor_matrix(0, tuple[0]);
        for (f, &j) in tuple.iter().enumerate().skip(1) {
            m = m.kron(&factor_matrix(f, j));
        }
        matrices.push(m.scale_real(prefactor));
        labels.push(GeneratorLabel::Tensor(tuple));
    }
    GeneratorBasis::from_parts(n, matrices, labels, BasisKind::Tensorial(dims))
}

/// All nonzero index tuples for factor dimensions `dims`, in sector order.
pub fn sector_ordered_tuples(dims: &[usize]) -> Vec<Vec<usize>> {
    let nf = dims.len();
    let mut out = Vec::new();
    for size in 1..=nf {
        for subset in combinations(nf, size) {
            let ranges: Vec<usize> = subset.iter().map(|&f| dims[f] * dims[f] - 1).collect();
            let mut inner = vec![1usize; size];
            loop {
                let mut tuple = vec![0usize; nf];
                for (slot, &f) in subset.iter().enumerate() {
                    tuple[f] = inner[slot];
                }
                out.push(tuple);
                // odometer increment, last slot fastest
                let mut pos = size;
                loop {
                    if pos == 0 {
                        break;
                    }
                    pos -= 1;
                    if inner[pos] < ranges[pos] {
                        inner[pos] += 1;
                        for later in inner.iter_mut().skip(pos + 1) {
                            *later = 1;
                        }
                        break;
                    }
                    if pos == 0 {
                        pos = usize::MAX;
                        break;
                    }
                }
                if pos == usize::MAX {
                    break;
                }
            }
        }
    }
    out
}

/// Lexicographic `size`-subsets of `0..n`.
fn combinations(n: usize, size: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, size, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, size, &mut Vec::new(), &mut out);
    out
}

/// Checks Hermiticity, tracelessness and `Tr ΛᵢΛⱼ = 2δᵢⱼ`.
pub fn verify_basis(b: &GeneratorBasis) -> BasisReport {
    const TOL: f64 = 1e-12;
    let herm = b.matrices.iter().map(|m| m.hermiticity_deviation()).fold(0.0, f64::max);
    let trace = b.matrices.iter().map(|m| m.trace().norm()).fold(0.0, f64::max);
    let mut ortho = 0.0f64;
    for (i, a) in b.matrices.iter().enumerate() {
        for (j, c) in b.matrices.iter().enumerate().skip(i) {
            let target = if i == j { 2.0 } else { 0.0 };
            let ip = a.hs_inner(c).map(|z| (z - target).norm()).unwrap_or(f64::INFINITY);
            ortho = ortho.max(ip);
        }
    }
    BasisReport {
        hermitian_ok: herm < TOL,
        traceless_ok: trace < TOL,
        orthonormal_ok: ortho < TOL,
        worst_deviation: herm.max(trace).max(ortho),
    }
}

/// Reorders generators: position `i` of the result holds generator `perm[i]`.
pub fn reorder(b: &GeneratorBasis, perm: &[usize]) -> Result<GeneratorBasis> {
    let len = b.len();
    if perm.len() != len {
        return Err(BlochError::InvalidPermutation(format!("length {} for {} generators", perm.len(), len)));
    }
    let mut seen = vec![false; len];
    for &p in perm {
        if p >= len || seen[p] {
            return Err(BlochError::InvalidPermutation(format!("index {p} repeated or out of range")));
        }
        seen[p] = true;
    }
    Ok(GeneratorBasis {
        n_dim: b.n_dim,
        matrices: perm.iter().map(|&p| b.matrices[p].clone()).collect(),
        labels: perm.iter().map(|&p| b.labels[p].clone()).collect(),
        kind: b.kind.clone(),
    })
}

/// Inverse of a permutation.
pub fn invert_permutation(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        inv[p] = i;
    }
    inv
}

fn permutation_for_labels(b: &GeneratorBasis, wanted: &[GeneratorLabel]) -> Vec<usize> {
    wanted.iter().map(|l| b.index_of(l).expect("label present in basis")).collect()
}

/// Permutation of `standard_basis(n)` into the two-state superposition layout:
/// `U(1,2), V(1,2), W(1), …, W(N−1)`, then the remaining generators in standard order.
pub fn superposition_order(n: usize) -> Vec<usize> {
    let std = standard_basis(n, None).expect("n >= 2");
    let mut wanted = vec![GeneratorLabel::U(1, 2), GeneratorLabel::V(1, 2)];
    wanted.extend((1..n).map(GeneratorLabel::W));
    for l in std.labels() {
        if !wanted.contains(l) {
            wanted.push(l.clone());
        }
    }
    permutation_for_labels(&std, &wanted)
}

/// Permutation of `standard_basis(n)` with all off-diagonal pairs first
/// (`(U_jk, V_jk)` for `j < k` lexicographic) and the diagonal generators last.
pub fn offdiagonal_first_order(n: usize) -> Vec<usize> {
    let std = standard_basis(n, None).expect("n >= 2");
    let mut wanted = Vec::new();
    for j in 1..=n {
        for k in (j + 1)..=n {
            wanted.push(GeneratorLabel::U(j, k));
            wanted.push(GeneratorLabel::V(j, k));
        }
    }
    wanted.extend((1..n).map(GeneratorLabel::W));
    permutation_for_labels(&std, &wanted)
}

/// Permutation of a two-factor tensorial basis into the "second factor first"
/// display order: `(0,j)`, then `(j,0)`, then `(i,j)` lexicographic.
pub fn factor_b_first_order(b: &GeneratorBasis) -> Result<Vec<usize>> {
    let dims = match b.kind() {
        BasisKind::Tensorial(d) if d.len() == 2 => d.clone(),
        _ => return Err(BlochError::WrongBasisArrangement("expected a two-factor tensorial basis".into())),
    };
    let (ga, gb) = (dims[0] * dims[0] - 1, dims[1] * dims[1] - 1);
    let mut wanted = Vec::new();
    wanted.extend((1..=gb).map(|j| GeneratorLabel::Tensor(vec![0, j])));
    wanted.extend((1..=ga).map(|i| GeneratorLabel::Tensor(vec![i, 0])));
    for i in 1..=ga {
        for j in 1..=gb {
            wanted.push(GeneratorLabel::Tensor(vec![i, j]));
        }
    }
    Ok(permutation_for_labels(b, &wanted))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::ComplexMatrix;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn dimensional_constants() {
        assert_eq!(c_n(2), 1.0);
        assert!((c_n(3) - 3f64.sqrt()).abs() < 1e-15);
        assert!((c_n(4) - 6f64.sqrt()).abs() < 1e-15);
        assert!((e_n(3) - 3f64.sqrt() / 2.0).abs() < 1e-15);
    }

    #[test]
    fn standard_two_is_pauli() {
        let b = standard_basis(2, None).unwrap();
        let s1 = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let s2 = ComplexMatrix::from_rows(&[vec![c(0.0, 0.0), c(0.0, -1.0)], vec![c(0.0, 1.0), c(0.0, 0.0)]]).unwrap();
        let s3 = ComplexMatrix::diag(&[1.0, -1.0]);
        assert_eq!(b.matrices(), &[s1, s2, s3]);
        assert_eq!(b.labels(), &[GeneratorLabel::U(1, 2), GeneratorLabel::V(1, 2), GeneratorLabel::W(1)]);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(standard_basis(1, None).is_err());
        let bad = vec![vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(1.0, 0.0), c(1.0, 0.0)]];
        assert!(matches!(standard_basis(2, Some(&bad)), Err(BlochError::NotOrthonormal(_))));
        let su2 = standard_basis(2, None).unwrap();
        assert!(matches!(tensorial_basis(&[&su2]), Err(BlochError::TooFewFactors { .. })));
    }

    #[test]
    fn custom_onb_still_valid() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let onb = vec![
            vec![c(h, 0.0), c(0.0, h), c(0.0, 0.0)],
            vec![c(h, 0.0), c(0.0, -h), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0), c(0.0, 1.0)],
        ];
        let b = standard_basis(3, Some(&onb)).unwrap();
        assert!(verify_basis(&b).all_ok());
    }

    #[test]
    fn verify_detects_scaled_generator() {
        let b = standard_basis(3, None).unwrap();
        assert!(verify_basis(&b).all_ok());
        assert!(verify_basis(&b).worst_deviation < 1e-12);
        let mut mats = b.matrices().to_vec();
        mats[4] = mats[4].scale_real(1.1);
        let bad = GeneratorBasis::from_parts(3, mats, b.labels().to_vec(), BasisKind::Standard).unwrap();
        let report = verify_basis(&bad);
        assert!(!report.orthonormal_ok);
        assert!(report.hermitian_ok && report.traceless_ok);
    }

    #[test]
    fn completion_of_a_pair() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let pair = vec![vec![c(h, 0.0), c(0.0, 0.0), c(0.0, h)], vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]];
        let full = complete_orthonormal(&pair, 3).unwrap();
        assert_eq!(full.len(), 3);
        assert!(standard_basis(3, Some(&full)).is_ok());
        assert!(complete_orthonormal(&[vec![c(2.0, 0.0), c(0.0, 0.0)]], 2).is_err());
    }

    #[test]
    fn tensorial_su2_su3_is_valid() {
        let su2 = standard_basis(2, None).unwrap();
        let su3 = standard_basis(3, None).unwrap();
        let b = tensorial_basis(&[&su2, &su3]).unwrap();
        assert_eq!(b.n_dim(), 6);
        assert_eq!(b.len(), 35);
        assert!(verify_basis(&b).all_ok());
    }

    #[test]
    fn tensorial_sector_order() {
        let tuples = sector_ordered_tuples(&[2, 2]);
        assert_eq!(tuples.len(), 15);
        assert_eq!(&tuples[..4], &[vec![1, 0], vec![2, 0], vec![3, 0], vec![0, 1]]);
        assert_eq!(tuples[6], vec![1, 1]);
        assert_eq!(tuples[7], vec![1, 2]);
        assert_eq!(tuples[14], vec![3, 3]);
        let three = sector_ordered_tuples(&[2, 2, 2]);
        assert_eq!(three.len(), 63);
        assert_eq!(three[9], vec![1, 1, 0]);
        assert_eq!(three[62], vec![3, 3, 3]);
    }

    #[test]
    fn reorder_identity_and_inverse() {
        let b = standard_basis(3, None).unwrap();
        let id: Vec<usize> = (0..8).collect();
        assert_eq!(reorder(&b, &id).unwrap(), b);
        let perm = offdiagonal_first_order(3);
        let back = reorder(&reorder(&b, &perm).unwrap(), &invert_permutation(&perm)).unwrap();
        assert_eq!(back, b);
        assert!(reorder(&b, &[0, 0, 1, 2, 3, 4, 5, 6]).is_err());
        assert!(reorder(&b, &[0, 1]).is_err());
    }

    #[test]
    fn offdiagonal_first_matches_gell_mann_relabeling() {
        let b = reorder(&standard_basis(3, None).unwrap(), &offdiagonal_first_order(3)).unwrap();
        let expected = [
            GeneratorLabel::U(1, 2),
            GeneratorLabel::V(1, 2),
            GeneratorLabel::U(1, 3),
            GeneratorLabel::V(1, 3),
            GeneratorLabel::U(2, 3),
            GeneratorLabel::V(2, 3),
            GeneratorLabel::W(1),
            GeneratorLabel::W(2),
        ];
        assert_eq!(b.labels(), &expected);
    }

    #[test]
    fn superposition_order_layout() {
        let b = reorder(&standard_basis(4, None).unwrap(), &superposition_order(4)).unwrap();
        assert_eq!(
            &b.labels()[..5],
            &[
                GeneratorLabel::U(1, 2),
                GeneratorLabel::V(1, 2),
                GeneratorLabel::W(1),
                GeneratorLabel::W(2),
                GeneratorLabel::W(3)
            ]
        );
        assert!(verify_basis(&b).all_ok());
    }
}
