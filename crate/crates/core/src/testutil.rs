//! Oracles and generators shared by the unit tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::Matrix;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Laplace expansion along the first row.
pub fn cofactor_det(a: &Matrix<f64>) -> f64 {
    let n = a.rows();
    if n == 0 {
        return 1.0;
    }
    if n == 1 {
        return a[(0, 0)];
    }
    let mut total = 0.0;
    for j in 0..n {
        let rows: Vec<usize> = (1..n).collect();
        let cols: Vec<usize> = (0..n).filter(|&c| c != j).collect();
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        total += sign * a[(0, j)] * cofactor_det(&a.select(&rows, &cols));
    }
    total
}

pub fn random_matrix(r: &mut impl Rng, n: usize) -> Matrix<f64> {
    Matrix::from_fn(n, n, |_, _| r.gen_range(-1.0..1.0))
}

/// Symmetric matrix with off-diagonal magnitudes in [lo, hi] and random signs.
pub fn random_symmetric(r: &mut impl Rng, n: usize, diag: (f64, f64), off: (f64, f64)) -> Matrix<f64> {
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = r.gen_range(diag.0..diag.1);
        for j in 0..i {
            let mag = r.gen_range(off.0..off.1);
            let v = if r.gen_bool(0.5) { mag } else { -mag };
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    m
}

/// Random positive-definite matrix B Bᵀ + 0.1 I.
pub fn random_spd(r: &mut impl Rng, n: usize) -> Matrix<f64> {
    let b = random_matrix(r, n);
    b.mul(&b.transpose()).add(&Matrix::identity(n).scale(0.1))
}
