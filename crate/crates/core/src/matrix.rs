//! Dense complex square matrices sized for small dimensions, with the
//! spectral and tensor utilities the rest of the crate needs.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{BlochError, Result};

/// Maximum entrywise deviation from Hermiticity accepted by [`ComplexMatrix::eig_hermitian`].
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Jacobi sweeps stop once the off-diagonal Frobenius norm drops below this
/// (scaled by `max(1, ‖A‖_F)`).
const JACOBI_TOL: f64 = 1e-12;
const JACOBI_MAX_SWEEPS: usize = 100;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// An `N×N` complex matrix stored row-major.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

/// Which factor of a bipartite space to keep in [`ComplexMatrix::partial_trace`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Eigen-decomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct SpectralResult {
    /// Real eigenvalues in ascending order.
    pub eigenvalues: Vec<f64>,
    /// Normalized eigenvectors matching `eigenvalues`, when requested.
    pub eigenvectors: Option<Vec<Vec<Complex64>>>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![ZERO; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    /// Builds a matrix from row-major entries; `entries.len()` must be a perfect square.
    pub fn from_vec(entries: Vec<Complex64>) -> Result<Self> {
        let dim = (entries.len() as f64).sqrt().round() as usize;
        if dim * dim != entries.len() || dim == 0 {
            return Err(BlochError::DimensionMismatch { expected: dim * dim, got: entries.len() });
        }
        Ok(Self { dim, data: entries })
    }

    /// Builds a matrix from rows; every row must have as many entries as there are rows.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(BlochError::DimensionMismatch { expected: dim, got: row.len() });
            }
            data.extend_from_slice(row);
        }
        Ok(Self { dim, data })
    }

    /// Real matrix convenience constructor (row-major).
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> =
            rows.iter().map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect()).collect();
        Self::from_rows(&rows)
    }

    pub fn diag(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = Complex64::new(v, 0.0);
        }
        m
    }

    /// The rank-one operator `|v⟩⟨w|`.
    pub fn outer(v: &[Complex64], w: &[Complex64]) -> Result<Self> {
        if v.len() != w.len() {
            return Err(BlochError::DimensionMismatch { expected: v.len(), got: w.len() });
        }
        let dim = v.len();
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = v[i] * w[j].conj();
            }
        }
        Ok(m)
    }

    /// The projector `|v⟩⟨v|`.
    pub fn projector(v: &[Complex64]) -> Self {
        Self::outer(v, v).expect("same vector")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn rows(&self) -> Vec<Vec<Complex64>> {
        self.data.chunks(self.dim).map(|c| c.to_vec()).collect()
    }

    fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(BlochError::DimensionMismatch { expected: self.dim, got: other.dim });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(Self { dim: self.dim, data })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(Self { dim: self.dim, data })
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|a| a * factor).collect() }
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(Complex64::new(factor, 0.0))
    }

    /// `self += factor * other`.
    pub fn add_scaled_assign(&mut self, factor: f64, other: &Self) -> Result<()> {
        self.check_same_dim(other)?;
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b * factor;
        }
        Ok(())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.dim {
            return Err(BlochError::DimensionMismatch { expected: self.dim, got: v.len() });
        }
        Ok(self.data.chunks(self.dim).map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect())
    }

    pub fn conj_transpose(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[i * n + j] = self.data[j * n + i].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.data[i * self.dim + i]).sum()
    }

    /// Hilbert-Schmidt inner product `Tr(a† b)`.
    pub fn hs_inner(&self, other: &Self) -> Result<Complex64> {
        self.check_same_dim(other)?;
        Ok(self.data.iter().zip(&other.data).map(|(a, b)| a.conj() * b).sum())
    }

    /// `Tr(a b)` without forming the product.
    pub fn trace_product(&self, other: &Self) -> Result<Complex64> {
        self.check_same_dim(other)?;
        let n = self.dim;
        let mut acc = ZERO;
        for i in 0..n {
            for k in 0..n {
                acc += self.data[i * n + k] * other.data[k * n + i];
            }
        }
        Ok(acc)
    }

    /// Kronecker product; the result has dimension `self.dim * other.dim`.
    pub fn kron(&self, other: &Self) -> Self {
        let (n, m) = (self.dim, other.dim);
        let dim = n * m;
        let mut out = Self::zeros(dim);
        for i in 0..n {
            for j in 0..n {
                let a = self.data[i * n + j];
                if a == ZERO {
                    continue;
                }
                for k in 0..m {
                    for l in 0..m {
                        out.data[(i * m + k) * dim + j * m + l] = a * other.data[k * m + l];
                    }
                }
            }
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.dim != other.dim {
            return f64::INFINITY;
        }
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self - self†`.
    pub fn hermiticity_deviation(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.data[i * n + j] - self.data[j * n + i].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_deviation() <= tol
    }

    /// Spectrum of a Hermitian matrix by cyclic complex Jacobi rotations.
    ///
    /// The input is symmetrized as `(A + A†)/2` before iterating.
    pub fn eig_hermitian(&self, want_vectors: bool) -> Result<SpectralResult> {
        let dev = self.hermiticity_deviation();
        if dev > HERMITIAN_TOL {
            return Err(BlochError::NotHermitian(dev));
        }
        let n = self.dim;
        let mut a = self.add(&self.conj_transpose()).expect("same dim").scale_real(0.5);
        let mut v = Self::identity(n);
        let tol = JACOBI_TOL * self.frobenius_norm().max(1.0);

        for _ in 0..JACOBI_MAX_SWEEPS {
            if a.off_diagonal_norm() < tol {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    a.jacobi_rotate(&mut v, p, q);
                }
            }
        }

        let mut order: Vec<usize> = (0..n).collect();
        let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
        order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));
        let eigenvalues = order.iter().map(|&i| diag[i]).collect();
        let eigenvectors = want_vectors.then(|| order.iter().map(|&c| (0..n).map(|r| v[(r, c)]).collect()).collect());
        Ok(SpectralResult { eigenvalues, eigenvectors })
    }

    fn off_diagonal_norm(&self) -> f64 {
        let n = self.dim;
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += self.data[i * n + j].norm_sqr();
                }
            }
        }
        s.sqrt()
    }

    /// One two-sided rotation zeroing the `(p, q)` entry. The plane unitary is
    /// a phase on `q` (making the entry real) followed by a real Jacobi rotation.
    fn jacobi_rotate(&mut self, v: &mut Self, p: usize, q: usize) {
        let n = self.dim;
        let apq = self[(p, q)];
        let g = apq.norm();
        if g < 1e-300 {
            return;
        }
        let phase = apq / g;
        let app = self[(p, p)].re;
        let aqq = self[(q, q)].re;
        let theta = (aqq - app) / (2.0 * g);
        let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
        let t = if theta == 0.0 { 1.0 } else { t };
        let c = 1.0 / (t * t + 1.0).sqrt();
        let s = t * c;

        let u_pp = Complex64::new(c, 0.0);
        let u_pq = Complex64::new(s, 0.0);
        let u_qp = -phase.conj() * s;
        let u_qq = phase.conj() * c;

        // A <- A U, V <- V U
        for k in 0..n {
            let (akp, akq) = (self[(k, p)], self[(k, q)]);
            self[(k, p)] = akp * u_pp + akq * u_qp;
            self[(k, q)] = akp * u_pq + akq * u_qq;
            let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
            v[(k, p)] = vkp * u_pp + vkq * u_qp;
            v[(k, q)] = vkp * u_pq + vkq * u_qq;
        }
        // A <- U† A
        for k in 0..n {
            let (apk, aqk) = (self[(p, k)], self[(q, k)]);
            self[(p, k)] = u_pp.conj() * apk + u_qp.conj() * aqk;
            self[(q, k)] = u_pq.conj() * apk + u_qq.conj() * aqk;
        }
        self[(p, q)] = ZERO;
        self[(q, p)] = ZERO;
        self[(p, p)] = Complex64::new(self[(p, p)].re, 0.0);
        self[(q, q)] = Complex64::new(self[(q, q)].re, 0.0);
    }

    /// Smallest eigenvalue; Hermitian input required.
    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(self.eig_hermitian(false)?.eigenvalues[0])
    }

    /// Reduced matrix on one factor of a `dims.0 × dims.1` bipartite space.
    pub fn partial_trace(&self, dims: (usize, usize), keep: Subsystem) -> Result<Self> {
        let (na, nb) = dims;
        if na * nb != self.dim {
            return Err(BlochError::DimensionMismatch { expected: na * nb, got: self.dim });
        }
        let n = self.dim;
        let out = match keep {
            Subsystem::A => {
                let mut out = Self::zeros(na);
                for i in 0..na {
                    for j in 0..na {
                        out[(i, j)] = (0..nb).map(|k| self.data[(i * nb + k) * n + j * nb + k]).sum();
                    }
                }
                out
            }
            Subsystem::B => {
                let mut out = Self::zeros(nb);
                for k in 0..nb {
                    for l in 0..nb {
                        out[(k, l)] = (0..na).map(|i| self.data[(i * nb + k) * n + i * nb + l]).sum();
                    }
                }
                out
            }
        };
        Ok(out)
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{}) [", self.dim, self.dim)?;
        for row in self.data.chunks(self.dim) {
            let cells: Vec<String> = row.iter().map(|c| format!("{:+.6}{:+.6}i", c.re, c.im)).collect();
            writeln!(f, "  {}", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Euclidean inner product `⟨v|w⟩`.
pub fn inner(v: &[Complex64], w: &[Complex64]) -> Complex64 {
    v.iter().zip(w).map(|(a, b)| a.conj() * b).sum()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sigma(k: usize) -> ComplexMatrix {
        match k {
            1 => ComplexMatrix::from_rows(&[vec![ZERO, ONE], vec![ONE, ZERO]]).unwrap(),
            2 => ComplexMatrix::from_rows(&[vec![ZERO, c(0.0, -1.0)], vec![c(0.0, 1.0), ZERO]]).unwrap(),
            3 => ComplexMatrix::diag(&[1.0, -1.0]),
            _ => unreachable!(),
        }
    }

    #[test]
    fn add_identity_and_inverse() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(i2.add(&i2).unwrap(), ComplexMatrix::diag(&[2.0, 2.0]));
        let s = sigma(1);
        assert_eq!(s.add(&s.scale_real(-1.0)).unwrap(), ComplexMatrix::zeros(2));
    }

    #[test]
    fn add_rejects_mismatched_dims() {
        let err = ComplexMatrix::identity(2).add(&ComplexMatrix::identity(3)).unwrap_err();
        assert_eq!(err, BlochError::DimensionMismatch { expected: 2, got: 3 });
        assert!(ComplexMatrix::identity(2).mul(&ComplexMatrix::identity(4)).is_err());
        assert!(ComplexMatrix::identity(2).hs_inner(&ComplexMatrix::identity(4)).is_err());
    }

    #[test]
    fn pauli_products() {
        assert_eq!(sigma(1).mul(&sigma(1)).unwrap(), ComplexMatrix::identity(2));
        let i_sigma3 = sigma(3).scale(c(0.0, 1.0));
        assert!(sigma(1).mul(&sigma(2)).unwrap().max_abs_diff(&i_sigma3) < 1e-15);
        let a = sigma(2).add(&sigma(3)).unwrap();
        assert_eq!(ComplexMatrix::identity(2).mul(&a).unwrap(), a);
    }

    #[test]
    fn conj_transpose_cases() {
        assert_eq!(sigma(2).conj_transpose(), sigma(2));
        let ii = ComplexMatrix::identity(3).scale(c(0.0, 1.0));
        assert_eq!(ii.conj_transpose(), ComplexMatrix::identity(3).scale(c(0.0, -1.0)));
        let sym = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[2.0, 5.0]]).unwrap();
        assert_eq!(sym.conj_transpose(), sym);
    }

    #[test]
    fn trace_and_hs_inner() {
        assert_eq!(ComplexMatrix::identity(5).trace(), c(5.0, 0.0));
        assert_eq!(sigma(1).hs_inner(&sigma(2)).unwrap(), ZERO);
        assert_eq!(sigma(3).hs_inner(&sigma(3)).unwrap(), c(2.0, 0.0));
    }

    #[test]
    fn kron_cases() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(i2.kron(&i2), ComplexMatrix::identity(4));
        assert_eq!(sigma(3).kron(&sigma(3)), ComplexMatrix::diag(&[1.0, -1.0, -1.0, 1.0]));
        let xx = sigma(1).kron(&sigma(1));
        for i in 0..4 {
            for j in 0..4 {
                let expect = if i + j == 3 { ONE } else { ZERO };
                assert_eq!(xx[(i, j)], expect);
            }
        }
    }

    #[test]
    fn eig_pauli() {
        let spec = sigma(3).eig_hermitian(true).unwrap();
        assert_eq!(spec.eigenvalues, vec![-1.0, 1.0]);
        let spec = sigma(2).eig_hermitian(true).unwrap();
        assert!((spec.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((spec.eigenvalues[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let m = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        assert!(matches!(m.eig_hermitian(false), Err(BlochError::NotHermitian(_))));
    }

    #[test]
    fn eig_reconstructs_complex_matrix() {
        let m = ComplexMatrix::from_rows(&[
            vec![c(2.0, 0.0), c(1.0, -1.0), c(0.0, 0.5)],
            vec![c(1.0, 1.0), c(-1.0, 0.0), c(0.3, 0.0)],
            vec![c(0.0, -0.5), c(0.3, 0.0), c(0.5, 0.0)],
        ])
        .unwrap();
        let spec = m.eig_hermitian(true).unwrap();
        let vecs = spec.eigenvectors.unwrap();
        let mut rebuilt = ComplexMatrix::zeros(3);
        for (lam, v) in spec.eigenvalues.iter().zip(&vecs) {
            rebuilt.add_scaled_assign(*lam, &ComplexMatrix::projector(v)).unwrap();
        }
        assert!(rebuilt.max_abs_diff(&m) < 1e-10);
        let sum: f64 = spec.eigenvalues.iter().sum();
        assert!((sum - m.trace().re).abs() < 1e-10);
    }

    #[test]
    fn partial_trace_of_product() {
        let da = ComplexMatrix::from_rows(&[vec![c(0.7, 0.0), c(0.1, 0.2)], vec![c(0.1, -0.2), c(0.3, 0.0)]]).unwrap();
        let db = ComplexMatrix::diag(&[0.2, 0.5, 0.3]);
        let joint = da.kron(&db);
        assert!(joint.partial_trace((2, 3), Subsystem::A).unwrap().max_abs_diff(&da) < 1e-15);
        assert!(joint.partial_trace((2, 3), Subsystem::B).unwrap().max_abs_diff(&db) < 1e-15);
        assert!(joint.partial_trace((3, 3), Subsystem::A).is_err());
    }

    #[test]
    fn partial_trace_of_singlet_is_maximally_mixed() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let psi = vec![ZERO, c(h, 0.0), c(-h, 0.0), ZERO];
        let p = ComplexMatrix::projector(&psi);
        let half = ComplexMatrix::identity(2).scale_real(0.5);
        assert!(p.partial_trace((2, 2), Subsystem::A).unwrap().max_abs_diff(&half) < 1e-15);
        assert!(p.partial_trace((2, 2), Subsystem::B).unwrap().max_abs_diff(&half) < 1e-15);
    }
}
