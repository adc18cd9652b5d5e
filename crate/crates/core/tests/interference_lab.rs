use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::sync::Arc;

use bloch_core::basis::{e_n, standard_basis};
use bloch_core::bloch::{decode, encode, is_state, OperatorState};
use bloch_core::interference::{
    chi_simplex3, effective_projection, interference2, interference3, latitude_disk, mub_vertices3,
    offdiagonal_first_basis3, plus_minus_simplex, superposition2_vector, superposition3_vector, superposition_basis,
    Superposition2, Superposition3,
};
use bloch_core::matrix::{dot, ComplexMatrix};
use bloch_core::measurement::{born_probabilities, immersion_path, project_onto_simplex, simplex_from_observable};
use bloch_core::BlochError;
use num_complex::Complex64;
use proptest::prelude::*;

fn canonical_state(n: usize, i: usize) -> OperatorState {
    let mut v = vec![Complex64::new(0.0, 0.0); n];
    v[i] = Complex64::new(1.0, 0.0);
    OperatorState::pure(&v).unwrap()
}

#[test]
fn two_state_classical_part_is_total_probability() {
    let n = 3;
    let b = Arc::new(superposition_basis(n).unwrap());
    let pm = plus_minus_simplex(&b).unwrap();
    let sigma = simplex_from_observable(&ComplexMatrix::diag(&[1.0, 2.0, 3.0]), &b).unwrap();
    // α = π/2 switches the interference off
    let s = Superposition2::new(0.6, 0.8, PI / 2.0, n).unwrap();
    let path = born_probabilities(&s.state(), &sigma).unwrap();
    let rep = interference2(&s);
    for j in 0..2 {
        let total: f64 = (0..2)
            .map(|i| path.weights()[i] * born_probabilities(&canonical_state(n, i), &pm).unwrap().weights()[j])
            .sum();
        assert!((total - rep.classical_part[j]).abs() < 1e-12);
        assert!((rep.probabilities[j] - total).abs() < 1e-12);
        assert!(rep.interference_terms[j].abs() < 1e-12);
    }
}

#[test]
fn three_state_classical_part_is_total_probability() {
    let b = offdiagonal_first_basis3();
    let chi = chi_simplex3(&b).unwrap();
    let e = 1.0 / 3f64.sqrt();
    let s = Superposition3::new(e, e, e, 0.0, 2.0 * PI / 3.0).unwrap();
    let rep = interference3(&s);
    let amps = s.amplitudes();
    for j in 0..3 {
        let total: f64 = (0..3)
            .map(|i| amps[i] * amps[i] * born_probabilities(&canonical_state(3, i), &chi).unwrap().weights()[j])
            .sum();
        assert!((total - rep.classical_part[j]).abs() < 1e-12);
        assert!(rep.interference_terms[j].abs() < 1e-12);
        assert!((rep.probabilities[j] - total).abs() < 1e-12);
    }
}

#[test]
fn three_state_path_scales_only_coherences() {
    let b = offdiagonal_first_basis3();
    let canon = simplex_from_observable(&ComplexMatrix::diag(&[1.0, 2.0, 3.0]), &b).unwrap();
    let s = Superposition3::new(0.5, 0.5, FRAC_1_SQRT_2, 0.7, -1.9).unwrap();
    let r = superposition3_vector(&s, &b).unwrap();
    for tau in [0.0, 0.25, 0.5, 0.9, 1.0] {
        let rt = immersion_path(&r, &canon, tau).unwrap();
        for k in 0..8 {
            let want = if k < 6 { (1.0 - tau) * r.components()[k] } else { r.components()[k] };
            assert!((rt.components()[k] - want).abs() < 1e-12, "tau {tau} slot {k}");
        }
    }
}

#[test]
fn equal_amplitudes_in_phase_hit_first_fourier_vertex() {
    let b = offdiagonal_first_basis3();
    let s = Superposition3::new(1.0 / 3f64.sqrt(), 1.0 / 3f64.sqrt(), 1.0 / 3f64.sqrt(), 0.0, 0.0).unwrap();
    let (w, _) = project_onto_simplex(&superposition3_vector(&s, &b).unwrap(), &chi_simplex3(&b).unwrap()).unwrap();
    assert!((w.weights()[0] - 1.0).abs() < 1e-12);
    let rep = interference3(&s);
    assert!((rep.interference_terms[0] - 2.0 / 3.0).abs() < 1e-12);
    assert!((rep.probabilities[0] - 1.0).abs() < 1e-12);
}

#[test]
fn fourier_and_canonical_triangles_are_unbiased() {
    let v = mub_vertices3();
    for tri in [&v.n, &v.m] {
        for i in 0..3 {
            assert!((tri[i].norm() - 1.0).abs() < 1e-12);
            for j in 0..i {
                assert!((tri[i].dot(&tri[j]).unwrap() + 0.5).abs() < 1e-12);
            }
        }
    }
    for a in &v.n {
        for m in &v.m {
            assert!(a.dot(m).unwrap().abs() < 1e-12);
        }
    }
}

#[test]
fn latitude_disk_keeps_probabilities() {
    let beta = 1.1;
    for n in [2, 3, 5] {
        let b = Arc::new(superposition_basis(n).unwrap());
        let sigma =
            simplex_from_observable(&ComplexMatrix::diag(&(0..n).map(|i| i as f64).collect::<Vec<_>>()), &b).unwrap();
        let s = Superposition2::from_beta(beta, 0.0, n).unwrap();
        let alphas: Vec<f64> = (0..12).map(|k| k as f64 * PI / 6.0).collect();
        let taus = [0.0, 0.3, 0.6, 1.0];
        let disk = latitude_disk(&s, &b, &alphas, &taus).unwrap();
        assert_eq!(disk.len(), alphas.len() * taus.len());
        for r in &disk {
            assert!(is_state(r, 1e-10));
            let (w, _) = project_onto_simplex(r, &sigma).unwrap();
            assert!((w.weights()[0] - (beta / 2.0).cos().powi(2)).abs() < 1e-12);
            assert!((w.weights()[1] - (beta / 2.0).sin().powi(2)).abs() < 1e-12);
        }
        // τ = 1 collapses every circle onto one point
        let centre: Vec<&[f64]> = disk.chunks(taus.len()).map(|c| c[3].components()).collect();
        assert!(centre.windows(2).all(|p| p[0] == p[1]));
    }
    assert!(latitude_disk(
        &Superposition2::new(1.0, 0.0, 0.0, 2).unwrap(),
        &Arc::new(superposition_basis(2).unwrap()),
        &[0.0],
        &[1.5]
    )
    .is_err());
}

#[test]
fn equatorial_disk_for_qubits() {
    let b = Arc::new(superposition_basis(2).unwrap());
    let s = Superposition2::from_beta(PI / 2.0, 0.0, 2).unwrap();
    let alphas: Vec<f64> = (0..8).map(|k| k as f64 * PI / 4.0).collect();
    for r in latitude_disk(&s, &b, &alphas, &[0.0, 0.5]).unwrap() {
        assert!(r.components()[2].abs() < 1e-15);
        assert!(r.norm() <= 1.0 + 1e-12);
    }
}

#[test]
fn layout_is_checked() {
    let s = Superposition2::new(0.6, 0.8, 0.1, 3).unwrap();
    let plain = Arc::new(standard_basis(3, None).unwrap());
    assert!(matches!(superposition2_vector(&s, &plain), Err(BlochError::WrongBasisArrangement(_))));
    let s3 = Superposition3::new(1.0, 0.0, 0.0, 0.0, 0.0).unwrap();
    assert!(superposition3_vector(&s3, &plain).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn two_state_vector_unit_and_padded(beta in 0.0..PI, alpha in -10.0..10.0f64, n in 2usize..=7) {
        let b = Arc::new(superposition_basis(n).unwrap());
        let s = Superposition2::from_beta(beta, alpha, n).unwrap();
        let r = superposition2_vector(&s, &b).unwrap();
        prop_assert!((r.norm() - 1.0).abs() < 1e-12);
        prop_assert!(r.components()[n + 1..].iter().all(|&x| x == 0.0));
        let direct = encode(&s.state(), &b).unwrap();
        for (x, y) in r.components().iter().zip(direct.components()) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn two_state_pipeline_and_effective_segment(beta in 0.0..PI, alpha in -10.0..10.0f64, n in 2usize..=5) {
        let b = Arc::new(superposition_basis(n).unwrap());
        let s = Superposition2::from_beta(beta, alpha, n).unwrap();
        let rep = interference2(&s);
        let p = born_probabilities(&s.state(), &plus_minus_simplex(&b).unwrap()).unwrap();
        prop_assert!((p.weights()[0] - rep.probabilities[0]).abs() < 1e-12);
        prop_assert!((p.weights()[1] - rep.probabilities[1]).abs() < 1e-12);
        prop_assert!((rep.probabilities.iter().sum::<f64>() - 1.0).abs() < 1e-10);
        // ñ's shadow on [ñ−, ñ+] is the convex combination with weights P±
        let e = effective_projection(&s, &b).unwrap();
        let seg: Vec<f64> = e.n_plus.iter().zip(&e.n_minus).map(|(a, c)| a - c).collect();
        let t = dot(&e.n.iter().zip(&e.n_minus).map(|(a, c)| a - c).collect::<Vec<_>>(), &seg) / dot(&seg, &seg);
        prop_assert!((t - rep.probabilities[0]).abs() < 1e-12);
        prop_assert!((e.n_plus[0] - e_n(n)).abs() < 1e-15);
    }

    #[test]
    fn three_state_pipeline(raw in prop::array::uniform3(0.01..1.0f64), alpha in -7.0..7.0f64, delta in -7.0..7.0f64) {
        let l = raw.iter().map(|x| x * x).sum::<f64>().sqrt();
        let s = Superposition3::new(raw[0] / l, raw[1] / l, raw[2] / l, alpha, delta).unwrap();
        let b = offdiagonal_first_basis3();
        let rep = interference3(&s);
        let p = born_probabilities(&s.state(), &chi_simplex3(&b).unwrap()).unwrap();
        for j in 0..3 {
            prop_assert!((p.weights()[j] - rep.probabilities[j]).abs() < 1e-12);
        }
        prop_assert!(rep.interference_terms.iter().sum::<f64>().abs() < 1e-12);
        let r = superposition3_vector(&s, &b).unwrap();
        prop_assert!((r.norm() - 1.0).abs() < 1e-12);
        prop_assert!(decode(&r).max_abs_diff(s.state().matrix()) < 1e-12);
    }
}
