#![allow(dead_code)]

use std::f64::consts::FRAC_1_SQRT_2;

use bloch_core::matrix::ComplexMatrix;
use num_complex::Complex64;

const O: Complex64 = Complex64::new(0.0, 0.0);
const I1: Complex64 = Complex64::new(1.0, 0.0);
const PI_: Complex64 = Complex64::new(0.0, 1.0);
const NI: Complex64 = Complex64::new(0.0, -1.0);

fn m(rows: &[&[Complex64]], scale: f64) -> ComplexMatrix {
    let rows: Vec<Vec<Complex64>> = rows.iter().map(|r| r.iter().map(|z| z * scale).collect()).collect();
    ComplexMatrix::from_rows(&rows).unwrap()
}

fn re(rows: &[&[f64]], scale: f64) -> ComplexMatrix {
    ComplexMatrix::from_real_rows(rows).unwrap().scale_real(scale)
}

pub fn pauli() -> Vec<ComplexMatrix> {
    vec![re(&[&[0.0, 1.0], &[1.0, 0.0]], 1.0), m(&[&[O, NI], &[PI_, O]], 1.0), re(&[&[1.0, 0.0], &[0.0, -1.0]], 1.0)]
}

pub fn gell_mann() -> Vec<ComplexMatrix> {
    let s3 = 1.0 / 3f64.sqrt();
    vec![
        re(&[&[0.0, 1.0, 0.0], &[1.0, 0.0, 0.0], &[0.0, 0.0, 0.0]], 1.0),
        m(&[&[O, NI, O], &[PI_, O, O], &[O, O, O]], 1.0),
        re(&[&[1.0, 0.0, 0.0], &[0.0, -1.0, 0.0], &[0.0, 0.0, 0.0]], 1.0),
        re(&[&[0.0, 0.0, 1.0], &[0.0, 0.0, 0.0], &[1.0, 0.0, 0.0]], 1.0),
        m(&[&[O, O, NI], &[O, O, O], &[PI_, O, O]], 1.0),
        re(&[&[0.0, 0.0, 0.0], &[0.0, 0.0, 1.0], &[0.0, 1.0, 0.0]], 1.0),
        m(&[&[O, O, O], &[O, O, NI], &[O, PI_, O]], 1.0),
        re(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, -2.0]], s3),
    ]
}

/// The fifteen `N = 4` standard generators as printed entry by entry.
pub fn su4_listing() -> Vec<ComplexMatrix> {
    let s3 = 1.0 / 3f64.sqrt();
    let s6 = 1.0 / 6f64.sqrt();
    let sym = |a: usize, b: usize| {
        let mut x = ComplexMatrix::zeros(4);
        x[(a, b)] = I1;
        x[(b, a)] = I1;
        x
    };
    let asym = |a: usize, b: usize| {
        let mut x = ComplexMatrix::zeros(4);
        x[(a, b)] = NI;
        x[(b, a)] = PI_;
        x
    };
    vec![
        sym(0, 1),
        asym(0, 1),
        ComplexMatrix::diag(&[1.0, -1.0, 0.0, 0.0]),
        sym(0, 2),
        asym(0, 2),
        sym(1, 2),
        asym(1, 2),
        ComplexMatrix::diag(&[1.0, 1.0, -2.0, 0.0]).scale_real(s3),
        sym(0, 3),
        asym(0, 3),
        sym(1, 3),
        asym(1, 3),
        sym(2, 3),
        asym(2, 3),
        ComplexMatrix::diag(&[1.0, 1.0, 1.0, -3.0]).scale_real(s6),
    ]
}

/// The fifteen two-qubit tensorial generators in their printed order,
/// with index tuples.
pub fn tensor15_listing() -> Vec<((usize, usize), ComplexMatrix)> {
    let h = FRAC_1_SQRT_2;
    vec![
        ((0, 1), re(&[&[0., 1., 0., 0.], &[1., 0., 0., 0.], &[0., 0., 0., 1.], &[0., 0., 1., 0.]], h)),
        ((0, 2), m(&[&[O, NI, O, O], &[PI_, O, O, O], &[O, O, O, NI], &[O, O, PI_, O]], h)),
        ((0, 3), re(&[&[1., 0., 0., 0.], &[0., -1., 0., 0.], &[0., 0., 1., 0.], &[0., 0., 0., -1.]], h)),
        ((1, 0), re(&[&[0., 0., 1., 0.], &[0., 0., 0., 1.], &[1., 0., 0., 0.], &[0., 1., 0., 0.]], h)),
        ((2, 0), m(&[&[O, O, NI, O], &[O, O, O, NI], &[PI_, O, O, O], &[O, PI_, O, O]], h)),
        ((3, 0), re(&[&[1., 0., 0., 0.], &[0., 1., 0., 0.], &[0., 0., -1., 0.], &[0., 0., 0., -1.]], h)),
        ((1, 1), re(&[&[0., 0., 0., 1.], &[0., 0., 1., 0.], &[0., 1., 0., 0.], &[1., 0., 0., 0.]], h)),
        ((1, 2), m(&[&[O, O, O, NI], &[O, O, PI_, O], &[O, NI, O, O], &[PI_, O, O, O]], h)),
        ((1, 3), re(&[&[0., 0., 1., 0.], &[0., 0., 0., -1.], &[1., 0., 0., 0.], &[0., -1., 0., 0.]], h)),
        ((2, 1), m(&[&[O, O, O, NI], &[O, O, NI, O], &[O, PI_, O, O], &[PI_, O, O, O]], h)),
        ((2, 2), re(&[&[0., 0., 0., -1.], &[0., 0., 1., 0.], &[0., 1., 0., 0.], &[-1., 0., 0., 0.]], h)),
        ((2, 3), m(&[&[O, O, NI, O], &[O, O, O, PI_], &[PI_, O, O, O], &[O, NI, O, O]], h)),
        ((3, 1), re(&[&[0., 1., 0., 0.], &[1., 0., 0., 0.], &[0., 0., 0., -1.], &[0., 0., -1., 0.]], h)),
        ((3, 2), m(&[&[O, NI, O, O], &[PI_, O, O, O], &[O, O, O, PI_], &[O, O, NI, O]], h)),
        ((3, 3), re(&[&[1., 0., 0., 0.], &[0., -1., 0., 0.], &[0., 0., -1., 0.], &[0., 0., 0., 1.]], h)),
    ]
}

pub fn max_entry_diff(a: &[ComplexMatrix], b: &[ComplexMatrix]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x.max_abs_diff(y)).fold(0.0, f64::max)
}

pub fn max_gap(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Orthonormal 2D coordinates of points lying in a common plane of `ℝᵈ`,
/// relative to `pts[0]`.
pub fn planar_coords(pts: &[Vec<f64>]) -> Vec<[f64; 2]> {
    let sub = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x - y).collect::<Vec<_>>();
    let dotp = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let e1 = sub(&pts[1], &pts[0]);
    let l1 = dotp(&e1, &e1).sqrt();
    let u: Vec<f64> = e1.iter().map(|x| x / l1).collect();
    let e2 = sub(&pts[2], &pts[0]);
    let proj = dotp(&e2, &u);
    let w: Vec<f64> = e2.iter().zip(&u).map(|(x, y)| x - proj * y).collect();
    let l2 = dotp(&w, &w).sqrt();
    let v: Vec<f64> = w.iter().map(|x| x / l2).collect();
    pts.iter()
        .map(|p| {
            let d = sub(p, &pts[0]);
            [dotp(&d, &u), dotp(&d, &v)]
        })
        .collect()
}

/// Shoelace area of a polygon.
pub fn shoelace(poly: &[[f64; 2]]) -> f64 {
    let n = poly.len();
    let twice: f64 = (0..n)
        .map(|i| {
            let (a, b) = (poly[i], poly[(i + 1) % n]);
            a[0] * b[1] - b[0] * a[1]
        })
        .sum();
    twice.abs() / 2.0
}

fn cross(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Half-plane containment in a triangle; `None` when `p` lies within `eps`
/// of an edge line.
pub fn in_triangle(p: [f64; 2], t: [[f64; 2]; 3], eps: f64) -> Option<bool> {
    let d = [cross(t[0], t[1], p), cross(t[1], t[2], p), cross(t[2], t[0], p)];
    if d.iter().any(|x| x.abs() < eps) {
        return None;
    }
    let neg = d.iter().any(|x| *x < 0.0);
    let pos = d.iter().any(|x| *x > 0.0);
    Some(!(neg && pos))
}
