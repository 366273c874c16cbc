//! Stationarity of Σ_s γ_s log det R_[s] over 3-block covariances, and a
//! numerical maximizer used to probe the boundary structure.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gaussian_core::BlockCovariance;
use crate::info_inequalities::{first_unbalanced, LinearFunctional};
use crate::linalg::Matrix;
use crate::scalar::Scalar;
use crate::subsets::{enumerate_subsets, SubsetMask, SubsetVector};

const BALANCE_TOL: f64 = 1e-9;
/// Blocks with α_ij² below this (relative) carry no usable Φ.
const PHI_LEVEL: f64 = 1e-8;
/// Smallest Cholesky pivot of R before the ascent is declared unbounded.
const PIVOT_FLOOR: f64 = 1e-7;

fn check_three(r: &BlockCovariance<f64>, gamma: &LinearFunctional<f64>) -> Result<()> {
    if r.n() != 3 || gamma.n() != 3 {
        return Err(Error::WrongArity { expected: 3, got: if r.n() != 3 { r.n() } else { gamma.n() } });
    }
    Ok(())
}

/// pad(R_[s]⁻¹) for every nonempty s, in subset order.
fn padded_inverses<T: Scalar>(r: &BlockCovariance<T>) -> Result<Vec<(SubsetMask, Matrix<T>)>> {
    let dim = r.matrix().rows();
    enumerate_subsets(r.n())?
        .map(|s| {
            let idx = r.block_indices(s);
            let sub = r.matrix().principal(&idx);
            if sub.cholesky().is_none() {
                return Err(Error::SingularMinor(s));
            }
            let inv = sub.inverse().ok_or(Error::SingularMinor(s))?;
            let mut pad = Matrix::zeros(dim, dim);
            for (a, &ia) in idx.iter().enumerate() {
                for (b, &ib) in idx.iter().enumerate() {
                    pad[(ia, ib)] = inv[(a, b)];
                }
            }
            Ok((s, pad))
        })
        .collect()
}

/// G = Σ_s γ_s pad(R_[s]⁻¹) together with max_s |γ_s|·max|pad(R_[s]⁻¹)|.
pub fn kkt_matrix(r: &BlockCovariance<f64>, gamma: &LinearFunctional<f64>) -> Result<(Matrix<f64>, f64)> {
    check_three(r, gamma)?;
    let dim = r.matrix().rows();
    let mut g = Matrix::zeros(dim, dim);
    let mut scale = 0.0f64;
    for (s, pad) in padded_inverses(r)? {
        let c = gamma.coeffs[s];
        g = g.add(&pad.scale(c));
        scale = scale.max(c.abs() * pad.max_abs());
    }
    Ok((g, scale))
}

/// max|G| relative to the largest single term; 0 for γ ≡ 0.
pub fn kkt_residual(r: &BlockCovariance<f64>, gamma: &LinearFunctional<f64>) -> Result<f64> {
    let (g, scale) = kkt_matrix(r, gamma)?;
    Ok(if scale == 0.0 { 0.0 } else { g.max_abs() / scale })
}

/// The γ (normalized to γ₁₂₃ = 1) making R stationary in the least-squares
/// sense: the map γ ↦ G is linear, so this is a null-vector solve.
pub fn stationary_gamma(r: &BlockCovariance<f64>) -> Result<LinearFunctional<f64>> {
    if r.n() != 3 {
        return Err(Error::WrongArity { expected: 3, got: r.n() });
    }
    let pads = padded_inverses(r)?;
    let top = pads.len() - 1;
    let dot = |a: &Matrix<f64>, b: &Matrix<f64>| a.as_slice().iter().zip(b.as_slice()).map(|(x, y)| x * y).sum::<f64>();
    let gram = Matrix::from_fn(top, top, |i, j| dot(&pads[i].1, &pads[j].1));
    let rhs: Vec<f64> = (0..top).map(|i| -dot(&pads[i].1, &pads[top].1)).collect();
    let inv = gram.inverse().ok_or_else(|| Error::DegenerateInput("stationarity system is singular (γ₁₂₃ = 0 on every solution)".into()))?;
    let mut coeffs = SubsetVector::filled(3, 0.0)?;
    for (i, (s, _)) in pads.iter().enumerate().take(top) {
        coeffs[*s] = (0..top).map(|j| inv[(i, j)] * rhs[j]).sum();
    }
    coeffs[SubsetMask::full(3)] = 1.0;
    Ok(LinearFunctional::new(coeffs))
}

/// Σ_s γ_s log det R_[s], or None when some principal block is not PD.
pub fn objective(r: &Matrix<f64>, t: usize, gamma: &LinearFunctional<f64>) -> Option<f64> {
    let mut total = 0.0;
    for (s, &c) in gamma.coeffs.iter() {
        let idx: Vec<usize> = s.indices().into_iter().flat_map(|v| v * t..(v + 1) * t).collect();
        let l = r.principal(&idx).cholesky()?;
        if c != 0.0 {
            total += c * 2.0 * (0..idx.len()).map(|k| l[(k, k)].ln()).sum::<f64>();
        }
    }
    Some(total)
}

#[derive(Clone, Debug, PartialEq)]
pub struct OptimizeOptions {
    pub restarts: usize,
    pub max_iter: usize,
    /// stop once kkt_residual falls below this
    pub tol: f64,
    /// scale of the symmetric perturbation added to the identity at start
    pub init_noise: f64,
}

impl Default for OptimizeOptions {
    fn default() -> Self {
        OptimizeOptions { restarts: 8, max_iter: 20000, tol: 1e-9, init_noise: 1e-2 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryDiagnostics {
    pub kkt_residual: f64,
    /// ‖R_ijᵀR_ij − (tr/T)·I‖_F for (1,2), (1,3), (2,3); with R_ii = I this
    /// is relative to the diagonal scale
    pub off_block_deviation: [f64; 3],
    /// min(‖P − I‖_F, ‖P + I‖_F)/√T with P = Φ₁₃ᵀΦ₁₂Φ₂₃; 0 when some
    /// off-diagonal block vanishes and Φ is undefined
    pub phi_deviation: f64,
    pub objective: f64,
    pub iterations: usize,
    pub restart: usize,
    pub converged: bool,
    /// the ascent ran into a singular principal block (objective unbounded)
    pub unbounded: bool,
}

impl BoundaryDiagnostics {
    pub fn max_off_block_deviation(&self) -> f64 {
        self.off_block_deviation.iter().copied().fold(0.0, f64::max)
    }
}

/// Orthogonality diagnostics for a 3-block covariance with R_ii = I.
pub fn structure_diagnostics(r: &BlockCovariance<f64>) -> ([f64; 3], f64) {
    let t = r.t();
    let pairs = [(0, 1), (0, 2), (1, 2)];
    let mut dev = [0.0; 3];
    let mut phis = Vec::new();
    for (k, &(i, j)) in pairs.iter().enumerate() {
        let b = r.block(i, j);
        let btb = b.transpose().mul(&b);
        let level = btb.trace() / t as f64;
        let scale = (r.block(i, i).trace() * r.block(j, j).trace()) / (t * t) as f64;
        dev[k] = btb.sub(&Matrix::identity(t).scale(level)).frobenius() / scale;
        phis.push((level > PHI_LEVEL * scale).then(|| b.scale(1.0 / level.sqrt())));
    }
    let phi_dev = match (&phis[0], &phis[1], &phis[2]) {
        (Some(p12), Some(p13), Some(p23)) => {
            let p = p13.transpose().mul(p12).mul(p23);
            let id = Matrix::identity(t);
            p.sub(&id).frobenius().min(p.add(&id).frobenius()) / (t as f64).sqrt()
        }
        _ => 0.0,
    };
    (dev, phi_dev)
}

/// Maximizes Σ_s γ_s log det R_[s] for balanced γ. Balance makes the
/// objective invariant under block-diagonal congruence, so R_ii = I is
/// fixed and only the off-diagonal blocks move. The best of the restarts
/// (by objective) is returned.
pub fn boundary_optimize(gamma: &LinearFunctional<f64>, t: usize, seed: u64) -> Result<(BlockCovariance<f64>, BoundaryDiagnostics)> {
    boundary_optimize_with(gamma, t, seed, &OptimizeOptions::default())
}

pub fn boundary_optimize_with(
    gamma: &LinearFunctional<f64>,
    t: usize,
    seed: u64,
    opts: &OptimizeOptions,
) -> Result<(BlockCovariance<f64>, BoundaryDiagnostics)> {
    if gamma.n() != 3 {
        return Err(Error::WrongArity { expected: 3, got: gamma.n() });
    }
    if t == 0 {
        return Err(Error::DimensionMismatch("block size T must be positive".into()));
    }
    if let Some((element, sum)) = first_unbalanced(gamma, BALANCE_TOL) {
        return Err(Error::NotBalanced { element, sum });
    }
    let mut best: Option<(BlockCovariance<f64>, BoundaryDiagnostics)> = None;
    for restart in 0..opts.restarts.max(1) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (restart as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let init = initial_point(&mut rng, t, opts.init_noise);
        let run = ascend(gamma, t, init, opts, restart)?;
        let better = match &best {
            None => true,
            Some((_, d)) => (run.1.converged && !d.converged) || (run.1.converged == d.converged && run.1.objective > d.objective + 1e-12),
        };
        if better {
            best = Some(run);
        }
        if gamma.coeffs.iter().all(|(_, &c)| c == 0.0) {
            break;
        }
    }
    Ok(best.expect("at least one restart"))
}

/// Identity plus symmetric noise, clipped to PD and renormalized to R_ii = I.
fn initial_point(rng: &mut ChaCha8Rng, t: usize, noise: f64) -> Matrix<f64> {
    let dim = 3 * t;
    let mut m = Matrix::identity(dim);
    for i in 0..dim {
        for j in 0..=i {
            let v = noise * rng.gen_range(-1.0..1.0);
            m[(i, j)] += v;
            if i != j {
                m[(j, i)] += v;
            }
        }
    }
    normalize_diagonal_blocks(&m.clip_eigenvalues(1e-10), t)
}

/// D R D with D = blockdiag(R_ii^{-1/2}).
fn normalize_diagonal_blocks(r: &Matrix<f64>, t: usize) -> Matrix<f64> {
    let dim = 3 * t;
    let mut d = Matrix::zeros(dim, dim);
    for i in 0..3 {
        let (vals, vecs) = r.block(i * t, i * t, t, t).sym_eigen();
        let inv_sqrt = Matrix::from_fn(t, t, |a, b| (0..t).map(|k| vecs[(a, k)] * vecs[(b, k)] / vals[k].sqrt()).sum());
        d.set_block(i * t, i * t, &inv_sqrt);
    }
    d.mul(r).mul(&d).symmetrized()
}

fn off_blocks(g: &Matrix<f64>, t: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(3 * t * t);
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        out.extend_from_slice(g.block(i * t, j * t, t, t).as_slice());
    }
    out
}

fn with_off_blocks(r: &Matrix<f64>, t: usize, v: &[f64]) -> Matrix<f64> {
    let mut m = r.clone();
    for (k, (i, j)) in [(0, 1), (0, 2), (1, 2)].into_iter().enumerate() {
        let b = Matrix::from_fn(t, t, |a, c| v[k * t * t + a * t + c]);
        m.set_block(i * t, j * t, &b);
        m.set_block(j * t, i * t, &b.transpose());
    }
    m
}

fn min_pivot(r: &Matrix<f64>) -> f64 {
    r.cholesky().map_or(0.0, |l| (0..r.rows()).map(|k| l[(k, k)]).fold(f64::INFINITY, f64::min))
}

/// Gradient ascent over the off-diagonal blocks with Barzilai–Borwein steps
/// and Armijo backtracking; positive definiteness is kept by rejecting
/// steps whose Cholesky factorization fails.
fn ascend(
    gamma: &LinearFunctional<f64>,
    t: usize,
    start: Matrix<f64>,
    opts: &OptimizeOptions,
    restart: usize,
) -> Result<(BlockCovariance<f64>, BoundaryDiagnostics)> {
    let mut r = start;
    let mut f = objective(&r, t, gamma).ok_or(Error::NotPsd(0.0))?;
    let mut x = off_blocks(&r, t);
    let mut step = 1e-2;
    let mut iterations = 0;
    let mut converged = false;
    let mut prev: Option<(Vec<f64>, Vec<f64>)> = None;
    let mut unbounded = false;
    loop {
        if min_pivot(&r) < PIVOT_FLOOR {
            unbounded = true;
            break;
        }
        let cov = BlockCovariance::new(3, t, r.clone())?;
        let (g, scale) = kkt_matrix(&cov, gamma)?;
        let kkt = if scale == 0.0 { 0.0 } else { g.max_abs() / scale };
        if kkt <= opts.tol {
            converged = true;
            break;
        }
        if iterations >= opts.max_iter {
            break;
        }
        // d/dB_ij of Σγ log det R_[s] is 2·G_ij
        let grad: Vec<f64> = off_blocks(&g, t).into_iter().map(|v| 2.0 * v).collect();
        if let Some((px, pg)) = &prev {
            let s: Vec<f64> = x.iter().zip(px).map(|(a, b)| a - b).collect();
            let y: Vec<f64> = grad.iter().zip(pg).map(|(a, b)| a - b).collect();
            let ss: f64 = s.iter().map(|v| v * v).sum();
            let sy: f64 = s.iter().zip(&y).map(|(a, b)| a * b).sum();
            if sy.abs() > 1e-300 {
                step = (ss / sy.abs()).clamp(1e-10, 1e3);
            }
        }
        let gg: f64 = grad.iter().map(|v| v * v).sum();
        let step0 = step;
        let mut accepted = None;
        for _ in 0..60 {
            let trial: Vec<f64> = x.iter().zip(&grad).map(|(a, b)| a + step * b).collect();
            let rt = with_off_blocks(&r, t, &trial);
            if let Some(ft) = objective(&rt, t, gamma) {
                if ft >= f + 1e-4 * step * gg {
                    accepted = Some((trial, rt, ft));
                    break;
                }
            }
            step *= 0.5;
        }
        if accepted.is_none() {
            // near the optimum the objective gain drops below rounding; fall back to the residual
            accepted = residual_step(&r, t, gamma, &x, &grad, step0, kkt);
            step = step0;
        }
        iterations += 1;
        let Some((trial, rt, ft)) = accepted else { break };
        prev = Some((x, grad));
        x = trial;
        r = rt;
        f = ft;
    }
    let cov = BlockCovariance::new(3, t, r)?;
    let kkt = kkt_residual(&cov, gamma)?;
    let (off_block_deviation, phi_deviation) = structure_diagnostics(&cov);
    let diag = BoundaryDiagnostics { kkt_residual: kkt, off_block_deviation, phi_deviation, objective: f, iterations, restart, converged, unbounded };
    Ok((cov, diag))
}

fn residual_step(
    r: &Matrix<f64>,
    t: usize,
    gamma: &LinearFunctional<f64>,
    x: &[f64],
    grad: &[f64],
    step: f64,
    kkt: f64,
) -> Option<(Vec<f64>, Matrix<f64>, f64)> {
    let trial: Vec<f64> = x.iter().zip(grad).map(|(a, b)| a + step * b).collect();
    let rt = with_off_blocks(r, t, &trial);
    let ft = objective(&rt, t, gamma)?;
    let cov = BlockCovariance::new(3, t, rt.clone()).ok()?;
    let (g, scale) = kkt_matrix(&cov, gamma).ok()?;
    let next = if scale == 0.0 { 0.0 } else { g.max_abs() / scale };
    (next < kkt).then_some((trial, rt, ft))
}
