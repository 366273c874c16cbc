//! Independent oracles: nothing here calls into the library's numerics.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Dense = Vec<Vec<f64>>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Laplace expansion along the first row.
pub fn cofactor_det(a: &Dense) -> f64 {
    let n = a.len();
    match n {
        0 => 1.0,
        1 => a[0][0],
        2 => a[0][0] * a[1][1] - a[0][1] * a[1][0],
        _ => (0..n)
            .map(|j| {
                let minor: Dense = a[1..].iter().map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &v)| v).collect()).collect();
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                sign * a[0][j] * cofactor_det(&minor)
            })
            .sum(),
    }
}

/// Gaussian elimination with partial pivoting, for sizes where Laplace is hopeless.
pub fn lu_det(a: &Dense) -> f64 {
    let n = a.len();
    let mut m = a.clone();
    let mut det = 1.0;
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| m[i][c].abs().total_cmp(&m[j][c].abs())).unwrap();
        if m[p][c] == 0.0 {
            return 0.0;
        }
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det *= m[c][c];
        for r in c + 1..n {
            let f = m[r][c] / m[c][c];
            for k in c..n {
                m[r][k] -= f * m[c][k];
            }
        }
    }
    det
}

pub fn select(a: &Dense, rows: &[usize], cols: &[usize]) -> Dense {
    rows.iter().map(|&r| cols.iter().map(|&c| a[r][c]).collect()).collect()
}

/// 0-based members of a bitmask.
pub fn members(bits: u32) -> Vec<usize> {
    (0..32).filter(|&i| bits & (1 << i) != 0).collect()
}

/// Principal minors indexed by bitmask (index 0 holds 1).
pub fn principal_minors(a: &Dense) -> Vec<f64> {
    let n = a.len();
    (0..1u32 << n)
        .map(|b| {
            let idx = members(b);
            if idx.len() <= 7 {
                cofactor_det(&select(a, &idx, &idx))
            } else {
                lu_det(&select(a, &idx, &idx))
            }
        })
        .collect()
}

/// Principal block minors for T×T blocks.
pub fn block_minors(a: &Dense, n: usize, t: usize) -> Vec<f64> {
    (0..1u32 << n)
        .map(|b| {
            let idx: Vec<usize> = members(b).into_iter().flat_map(|i| i * t..(i + 1) * t).collect();
            lu_det(&select(a, &idx, &idx))
        })
        .collect()
}

pub fn hadamard(a: &Dense) -> f64 {
    a.iter().map(|r| r.iter().map(|v| v * v).sum::<f64>().sqrt()).product()
}

pub fn random_symmetric(r: &mut impl Rng, n: usize, diag: (f64, f64), off: (f64, f64)) -> Dense {
    let mut m = vec![vec![0.0; n]; n];
    for i in 0..n {
        m[i][i] = r.gen_range(diag.0..diag.1);
        for j in 0..i {
            let mag = r.gen_range(off.0..off.1);
            let v = if r.gen_bool(0.5) { mag } else { -mag };
            m[i][j] = v;
            m[j][i] = v;
        }
    }
    m
}

/// B Bᵀ + 0.1 I with B uniform in [−1, 1].
pub fn random_spd(r: &mut impl Rng, n: usize) -> Dense {
    let b: Dense = (0..n).map(|_| (0..n).map(|_| r.gen_range(-1.0..1.0)).collect()).collect();
    (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| b[i][k] * b[j][k]).sum::<f64>() + if i == j { 0.1 } else { 0.0 }).collect()).collect()
}

/// Textbook Cayley hyperdeterminant of a 2×2×2 array a[i][j][k], with the
/// sum of its monomial magnitudes.
pub fn cayley_textbook(a: &[[[f64; 2]; 2]; 2]) -> (f64, f64) {
    let t = |i: usize, j: usize, k: usize| a[i][j][k];
    let terms = [
        t(0, 0, 0).powi(2) * t(1, 1, 1).powi(2),
        t(0, 0, 1).powi(2) * t(1, 1, 0).powi(2),
        t(0, 1, 0).powi(2) * t(1, 0, 1).powi(2),
        t(1, 0, 0).powi(2) * t(0, 1, 1).powi(2),
        -2.0 * t(0, 0, 0) * t(0, 0, 1) * t(1, 1, 0) * t(1, 1, 1),
        -2.0 * t(0, 0, 0) * t(0, 1, 0) * t(1, 0, 1) * t(1, 1, 1),
        -2.0 * t(0, 0, 0) * t(1, 0, 0) * t(0, 1, 1) * t(1, 1, 1),
        -2.0 * t(0, 0, 1) * t(0, 1, 0) * t(1, 0, 1) * t(1, 1, 0),
        -2.0 * t(0, 0, 1) * t(1, 0, 0) * t(0, 1, 1) * t(1, 1, 0),
        -2.0 * t(0, 1, 0) * t(1, 0, 0) * t(0, 1, 1) * t(1, 0, 1),
        4.0 * t(0, 0, 0) * t(0, 1, 1) * t(1, 0, 1) * t(1, 1, 0),
        4.0 * t(0, 0, 1) * t(0, 1, 0) * t(1, 0, 0) * t(1, 1, 1),
    ];
    (terms.iter().sum(), terms.iter().map(|v| v.abs()).sum())
}

/// f(δ) = (max[0, −2 + Σx^δ + 2√Π(1 − x^δ)])^{1/δ}, evaluated literally.
pub fn f_literal(x: [f64; 3], d: f64) -> f64 {
    let p = x.map(|v| v.powf(d));
    let e = -2.0 + p.iter().sum::<f64>() + 2.0 * p.iter().map(|v| 1.0 - v).product::<f64>().sqrt();
    e.max(0.0).powf(1.0 / d)
}

/// ỹ = y(1) = x₁x₂ + x₃ − x₁ − x₂ on the sorted triple.
pub fn y_tilde(x: [f64; 3]) -> f64 {
    let mut s = x;
    s.sort_by(f64::total_cmp);
    s[0] * s[1] + s[2] - s[0] - s[1]
}

pub fn min_pair_product(x: [f64; 3]) -> f64 {
    (x[0] * x[1]).min(x[0] * x[2]).min(x[1] * x[2])
}
