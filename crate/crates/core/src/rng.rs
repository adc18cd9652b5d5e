//! Seeded random streams and random test objects.
//!
//! Every Monte Carlo worker owns a ChaCha8 stream keyed by the master seed
//! and selected by `set_stream(worker_index)`. Streams never overlap, so
//! merged counts depend only on `(seed, workers, shots)`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::bloch::OperatorState;
use crate::error::{BlochError, Result};
use crate::matrix::ComplexMatrix;

pub type StreamRng = ChaCha8Rng;

/// Stream `worker` of the generator keyed by `master_seed`.
pub fn worker_rng(master_seed: u64, worker: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(worker);
    rng
}

/// Shots per worker: `shots / workers` each, remainder to the first workers.
pub fn split_shots(shots: u64, workers: usize) -> Vec<u64> {
    let w = workers.max(1) as u64;
    (0..w).map(|i| shots / w + u64::from(i < shots % w)).collect()
}

/// Runs `shots` draws of `draw` over `workers` parallel streams and
/// tallies outcomes in `0..n_outcomes`.
pub fn parallel_counts<F>(n_outcomes: usize, shots: u64, seed: u64, workers: usize, draw: F) -> Result<Vec<u64>>
where
    F: Fn(&mut StreamRng) -> usize + Sync,
{
    if workers == 0 {
        return Err(BlochError::OutOfRange("workers must be at least 1".into()));
    }
    let alloc = split_shots(shots, workers);
    let partial: Vec<Vec<u64>> = alloc
        .par_iter()
        .enumerate()
        .map(|(w, &n)| {
            let mut rng = worker_rng(seed, w as u64);
            let mut counts = vec![0u64; n_outcomes];
            for _ in 0..n {
                counts[draw(&mut rng)] += 1;
            }
            counts
        })
        .collect();
    let mut total = vec![0u64; n_outcomes];
    for c in partial {
        for (t, x) in total.iter_mut().zip(c) {
            *t += x;
        }
    }
    Ok(total)
}

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random unit vector in `ℂⁿ`.
pub fn random_ket<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..n).map(|_| complex_gaussian(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

/// Uniformly random unit vector in `ℝⁿ`.
pub fn random_unit_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    let v: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.into_iter().map(|x| x / norm).collect()
}

/// Random Hermitian matrix with Gaussian entries.
pub fn random_hermitian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(n);
    for i in 0..n {
        m[(i, i)] = Complex64::new(rng.sample(StandardNormal), 0.0);
        for j in (i + 1)..n {
            let z = complex_gaussian(rng);
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    m
}

/// Random full-rank density matrix `A†A / Tr(A†A)`.
pub fn random_density<R: Rng + ?Sized>(n: usize, rng: &mut R) -> OperatorState {
    let a = ComplexMatrix::from_vec((0..n * n).map(|_| complex_gaussian(rng)).collect()).expect("square");
    let p = a.conj_transpose().mul(&a).expect("same dim");
    let tr = p.trace().re;
    let mut d = p.scale_real(1.0 / tr);
    // exact Hermiticity
    d = d.add(&d.conj_transpose()).expect("same dim").scale_real(0.5);
    OperatorState::new(d).expect("A†A is a state")
}
