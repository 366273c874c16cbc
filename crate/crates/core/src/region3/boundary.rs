//! Block-orthogonal covariances of three T-dimensional Gaussians: a T̂-sized
//! part with off-diagonal blocks α_ij·Φ_ij (Φ orthogonal) next to a
//! (T − T̂)-sized independent part α_ii·I.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::gaussian_core::{principal_minor, BlockCovariance, PSD_TOL};
use crate::linalg::Matrix;
use crate::scalar::Scalar;
use crate::subsets::SubsetMask;

const ORTHO_TOL: f64 = 1e-10;
const MINOR_TOL: f64 = 1e-10;

/// How Φ₁₃ is formed from Φ₁₂ and Φ₂₃.
#[derive(Clone, Debug, PartialEq)]
pub enum Phi13<T> {
    /// sign(α₁₂α₁₃α₂₃)·Φ₁₂Φ₂₃ (the determinant upper bound)
    Extremal,
    /// R(ψ)·Φ₁₂Φ₂₃ with R(ψ) block-diagonal 2×2 rotations; T̂ must be even
    Rotation(T),
    Explicit(Matrix<T>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryCovarianceSpec<T> {
    /// α₁₁, α₂₂, α₃₃
    pub alpha_diag: [T; 3],
    /// α₁₂, α₁₃, α₂₃
    pub alpha_off: [T; 3],
    pub t: usize,
    pub t_hat: usize,
    pub phi12: Matrix<T>,
    pub phi23: Matrix<T>,
    pub phi13: Phi13<T>,
}

/// Pair (i, j), 0-based, for slot k of `alpha_off`.
pub const OFF_PAIRS: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

impl<T: Scalar> BoundaryCovarianceSpec<T> {
    /// Identity Φ₁₂, Φ₂₃ and extremal Φ₁₃.
    pub fn new(alpha_diag: [T; 3], alpha_off: [T; 3], t: usize, t_hat: usize) -> Self {
        BoundaryCovarianceSpec {
            alpha_diag,
            alpha_off,
            t,
            t_hat,
            phi12: Matrix::identity(t_hat),
            phi23: Matrix::identity(t_hat),
            phi13: Phi13::Extremal,
        }
    }

    /// α₁₂α₁₃α₂₃
    pub fn product(&self) -> T {
        self.alpha_off.iter().copied().product()
    }

    /// α₁₁α₂₂α₃₃ − α₁₁α₂₃² − α₂₂α₁₃² − α₃₃α₁₂²
    pub fn c0(&self) -> T {
        let [a1, a2, a3] = self.alpha_diag;
        let [a12, a13, a23] = self.alpha_off;
        a1 * a2 * a3 - a1 * a23 * a23 - a2 * a13 * a13 - a3 * a12 * a12
    }

    pub fn validate(&self) -> Result<()> {
        if self.t == 0 || self.t_hat > self.t {
            return Err(Error::DimensionMismatch(format!("need 0 ≤ T̂ ≤ T and T ≥ 1, got T̂={} T={}", self.t_hat, self.t)));
        }
        if let Some(k) = self.alpha_diag.iter().position(|&a| !(a > T::zero())) {
            return Err(Error::DegenerateInput(format!("alpha_{}{} must be positive", k + 1, k + 1)));
        }
        for (k, &(i, j)) in OFF_PAIRS.iter().enumerate() {
            let prod = self.alpha_diag[i] * self.alpha_diag[j];
            let a = self.alpha_off[k];
            if !a.is_finite() || prod - a * a < -T::lit(1e-12) * prod {
                return Err(Error::DegenerateInput(format!("alpha_{}{}² exceeds alpha_{}{}·alpha_{}{}", i + 1, j + 1, i + 1, i + 1, j + 1, j + 1)));
            }
        }
        for (name, phi) in [("phi12", &self.phi12), ("phi23", &self.phi23)] {
            check_orthogonal(name, phi, self.t_hat)?;
        }
        if let Phi13::Explicit(m) = &self.phi13 {
            check_orthogonal("phi13", m, self.t_hat)?;
        }
        if matches!(self.phi13, Phi13::Rotation(_)) && self.t_hat % 2 != 0 {
            return Err(Error::DimensionMismatch(format!("rotation mode needs even T̂, got {}", self.t_hat)));
        }
        Ok(())
    }

    pub fn phi13_matrix(&self) -> Result<Matrix<T>> {
        let base = self.phi12.mul(&self.phi23);
        Ok(match &self.phi13 {
            Phi13::Extremal => {
                if self.product() < T::zero() {
                    base.scale(-T::one())
                } else {
                    base
                }
            }
            Phi13::Rotation(psi) => block_rotation(self.t_hat, *psi)?.mul(&base),
            Phi13::Explicit(m) => m.clone(),
        })
    }

    /// Closed-form m_i = α_ii^T and m_ij = (α_iiα_jj − α_ij²)^T̂(α_iiα_jj)^{T−T̂}.
    pub fn closed_form_minors(&self) -> ([T; 3], [T; 3]) {
        let (t, th) = (self.t as i32, self.t_hat as i32);
        let m_i = self.alpha_diag.map(|a| a.powi(t));
        let m_ij = [0, 1, 2].map(|k| {
            let (i, j) = OFF_PAIRS[k];
            let prod = self.alpha_diag[i] * self.alpha_diag[j];
            let a = self.alpha_off[k];
            (prod - a * a).max(T::zero()).powi(th) * prod.powi(t - th)
        });
        (m_i, m_ij)
    }
}

fn check_orthogonal<T: Scalar>(name: &str, phi: &Matrix<T>, n: usize) -> Result<()> {
    if phi.rows() != n || phi.cols() != n {
        return Err(Error::DimensionMismatch(format!("{name} is {}x{}, expected {n}x{n}", phi.rows(), phi.cols())));
    }
    let dev = phi.transpose().mul(phi).sub(&Matrix::identity(n)).max_abs();
    if dev > T::lit(ORTHO_TOL) {
        return Err(Error::DegenerateInput(format!("{name} is not orthogonal (|ΦᵀΦ − I| = {:e})", dev.as_f64())));
    }
    Ok(())
}

/// Block-diagonal matrix of 2×2 rotations by ψ.
pub fn block_rotation<T: Scalar>(n: usize, psi: T) -> Result<Matrix<T>> {
    if n % 2 != 0 {
        return Err(Error::DimensionMismatch(format!("rotation blocks need even size, got {n}")));
    }
    let (s, c) = psi.sin_cos();
    let mut m = Matrix::zeros(n, n);
    for b in (0..n).step_by(2) {
        m[(b, b)] = c;
        m[(b, b + 1)] = -s;
        m[(b + 1, b)] = s;
        m[(b + 1, b + 1)] = c;
    }
    Ok(m)
}

/// Haar-distributed orthogonal matrix (Gram–Schmidt on a Gaussian matrix).
pub fn random_orthogonal<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Matrix<f64> {
    loop {
        let mut cols: Vec<Vec<f64>> = (0..n).map(|_| (0..n).map(|_| rng.sample(StandardNormal)).collect()).collect();
        let mut ok = true;
        for j in 0..n {
            for k in 0..j {
                let d: f64 = (0..n).map(|i| cols[j][i] * cols[k][i]).sum();
                for i in 0..n {
                    cols[j][i] -= d * cols[k][i];
                }
            }
            let norm = cols[j].iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm < 1e-8 {
                ok = false;
                break;
            }
            cols[j].iter_mut().for_each(|v| *v /= norm);
        }
        if ok {
            return Matrix::from_fn(n, n, |i, j| cols[j][i]);
        }
    }
}

/// Assembles the 3T×3T covariance. Variable i occupies rows iT..(i+1)T;
/// the first T̂ of them carry the orthogonal coupling.
pub fn build_boundary_covariance<T: Scalar>(spec: &BoundaryCovarianceSpec<T>) -> Result<BlockCovariance<T>> {
    spec.validate()?;
    let t = spec.t;
    let mut m = Matrix::zeros(3 * t, 3 * t);
    for i in 0..3 {
        for d in 0..t {
            m[(i * t + d, i * t + d)] = spec.alpha_diag[i];
        }
    }
    let phis = [spec.phi12.clone(), spec.phi13_matrix()?, spec.phi23.clone()];
    for (k, &(i, j)) in OFF_PAIRS.iter().enumerate() {
        let b = phis[k].scale(spec.alpha_off[k]);
        m.set_block(i * t, j * t, &b);
        m.set_block(j * t, i * t, &b.transpose());
    }
    let cov = BlockCovariance::new(3, t, m)?;
    if !cov.is_psd(T::lit(PSD_TOL)) {
        let min = cov.matrix().sym_eigenvalues().into_iter().fold(T::infinity(), T::min);
        return Err(Error::NotPsd(min.as_f64()));
    }
    let (m_i, m_ij) = spec.closed_form_minors();
    let close = |got: T, want: T| (got - want).abs() <= T::lit(MINOR_TOL) * want.abs().max(T::min_positive_value());
    for i in 0..3 {
        let got = principal_minor(&cov, SubsetMask::singleton(i + 1));
        if !close(got, m_i[i]) {
            return Err(Error::ConditionsFailed(format!("m_{} = {} differs from alpha^T = {}", i + 1, got.as_f64(), m_i[i].as_f64())));
        }
    }
    for (k, &(i, j)) in OFF_PAIRS.iter().enumerate() {
        let got = principal_minor(&cov, SubsetMask::of(&[i + 1, j + 1]));
        if !close(got, m_ij[k]) && (got - m_ij[k]).abs() > T::lit(MINOR_TOL) * m_i[i] * m_i[j] {
            return Err(Error::ConditionsFailed(format!("m_{}{} = {} differs from closed form {}", i + 1, j + 1, got.as_f64(), m_ij[k].as_f64())));
        }
    }
    Ok(cov)
}

/// (α₁₁α₂₂α₃₃)^{T−T̂}·(c₀ ∓ 2|α₁₂α₁₃α₂₃|)^T̂, negative bases clipped to 0.
pub fn m123_bounds<T: Scalar>(spec: &BoundaryCovarianceSpec<T>) -> (T, T) {
    let diag: T = spec.alpha_diag.iter().copied().product();
    let c0 = spec.c0();
    let p = spec.product().abs() * T::lit(2.0);
    let free = diag.powi((spec.t - spec.t_hat) as i32);
    let th = spec.t_hat as i32;
    ((c0 - p).max(T::zero()).powi(th) * free, (c0 + p).max(T::zero()).powi(th) * free)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian_core::{entropy_g, SymmetricMatrix};
    use crate::testutil::rng;
    use approx::assert_relative_eq;
    use rand::Rng;

    fn random_spec(r: &mut impl Rng, t: usize, t_hat: usize) -> BoundaryCovarianceSpec<f64> {
        loop {
            let d = [0; 3].map(|_| r.gen_range(0.5..2.0));
            let off = [0, 1, 2].map(|k| {
                let (i, j) = OFF_PAIRS[k];
                let s = if r.gen_bool(0.5) { 1.0 } else { -1.0 };
                s * r.gen_range(0.05..0.6) * f64::sqrt(d[i] * d[j])
            });
            let spec = BoundaryCovarianceSpec::new(d, off, t, t_hat);
            let (lo, _) = m123_bounds(&spec);
            if lo > 0.0 {
                return spec;
            }
        }
    }

    #[test]
    fn diagonal_spec_is_additive() {
        let spec = BoundaryCovarianceSpec::<f64>::new([2.0, 3.0, 0.5], [0.0; 3], 3, 3);
        let cov = build_boundary_covariance(&spec).unwrap();
        let g = entropy_g(&cov).unwrap().data;
        for (s, v) in g.iter() {
            let want: f64 = s.elements().iter().map(|&i| spec.alpha_diag[i - 1].ln()).sum();
            assert_relative_eq!(*v, want, max_relative = 1e-12);
        }
        let (lo, hi) = m123_bounds(&spec);
        assert_relative_eq!(lo, 3.0f64.powi(3), max_relative = 1e-14);
        assert_eq!(lo, hi);
    }

    #[test]
    fn scalar_reduction() {
        let mut spec = BoundaryCovarianceSpec::new([1.0, 2.0, 3.0], [0.3, -0.4, 0.5], 1, 1);
        spec.phi13 = Phi13::Explicit(Matrix::identity(1));
        let cov = build_boundary_covariance(&spec).unwrap();
        let want = SymmetricMatrix::from_lower(3, |i, j| {
            if i == j {
                spec.alpha_diag[i]
            } else {
                let k = OFF_PAIRS.iter().position(|&p| p == (j, i)).unwrap();
                spec.alpha_off[k]
            }
        });
        assert!(cov.matrix().sub(&want.to_dense()).max_abs() < 1e-15);
    }

    #[test]
    fn extremal_attains_upper_bound() {
        let mut r = rng(5);
        for _ in 0..50 {
            // the cofactor oracle is factorial in 3T
            let t = r.gen_range(1..=2);
            let th = r.gen_range(0..=t);
            let mut spec = random_spec(&mut r, t, th);
            spec.phi12 = random_orthogonal(&mut r, th);
            spec.phi23 = random_orthogonal(&mut r, th);
            let cov = build_boundary_covariance(&spec).unwrap();
            let det = crate::testutil::cofactor_det(cov.matrix());
            let (_, hi) = m123_bounds(&spec);
            assert_relative_eq!(det, hi, max_relative = 1e-10);
        }
    }

    #[test]
    fn rotation_stays_within_bounds() {
        let mut r = rng(9);
        let mut spec = random_spec(&mut r, 3, 2);
        spec.phi12 = random_orthogonal(&mut r, 2);
        spec.phi23 = random_orthogonal(&mut r, 2);
        let (lo, hi) = m123_bounds(&spec);
        for _ in 0..100 {
            let psi = r.gen_range(0.0..std::f64::consts::TAU);
            spec.phi13 = Phi13::Rotation(psi);
            let cov = build_boundary_covariance(&spec).unwrap();
            let det = cov.matrix().sym_det();
            assert!(det >= lo * (1.0 - 1e-10) && det <= hi * (1.0 + 1e-10));
            // det^{1/T̂} of the coupled part is linear in cos ψ
            let free: f64 = spec.alpha_diag.iter().product();
            let want = free * (spec.c0() + 2.0 * spec.product() * psi.cos()).powi(2);
            assert_relative_eq!(det, want, max_relative = 1e-10);
        }
    }

    #[test]
    fn zero_product_closes_the_gap() {
        let spec = BoundaryCovarianceSpec::new([1.0, 1.0, 1.0], [0.5, 0.0, 0.3], 2, 2);
        let (lo, hi) = m123_bounds(&spec);
        assert_eq!(lo, hi);
    }

    #[test]
    fn rejects_bad_specs() {
        let bad = BoundaryCovarianceSpec::new([1.0, 1.0, 1.0], [1.5, 0.0, 0.0], 1, 1);
        assert!(matches!(build_boundary_covariance(&bad), Err(Error::DegenerateInput(_))));
        let mut odd = BoundaryCovarianceSpec::new([1.0, 1.0, 1.0], [0.5, 0.5, 0.5], 3, 3);
        odd.phi13 = Phi13::Rotation(0.3);
        assert!(matches!(build_boundary_covariance(&odd), Err(Error::DimensionMismatch(_))));
        let mut not_psd = BoundaryCovarianceSpec::new([1.0, 1.0, 1.0], [0.9, -0.9, 0.9], 1, 1);
        not_psd.phi13 = Phi13::Explicit(Matrix::identity(1));
        assert!(matches!(build_boundary_covariance(&not_psd), Err(Error::NotPsd(_))));
    }

    #[test]
    fn orthogonal_generator() {
        let mut r = rng(1);
        for n in 1..6 {
            let q = random_orthogonal(&mut r, n);
            assert!(q.transpose().mul(&q).sub(&Matrix::identity(n)).max_abs() < 1e-12);
        }
    }
}
