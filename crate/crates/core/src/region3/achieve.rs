//! Realizing exponentiated entropy vectors p = e^g, possibly after the cone
//! scaling p′ = p^{1/θ′}, with the block-orthogonal boundary structure.

use super::boundary::{BoundaryCovarianceSpec, Phi13, OFF_PAIRS};
use super::fdelta::{f_profile, ln_f, ln_f_lower, log_grid, scaled_interval, Delta0, FDeltaProfile, XTriple};
use crate::error::{Error, Result};
use crate::gaussian_core::SymmetricMatrix;
use crate::linalg::Matrix;
use crate::scalar::Scalar;
use crate::subsets::{SubsetMask, SubsetVector};

/// Relative slack on cond-on-p and on f(δ) ≥ t comparisons.
const SLACK: f64 = 1e-12;
/// θ′ bisection tolerance.
pub const THETA_PRIME_TOL: f64 = 1e-6;
const THETA_PRIME_CAP: f64 = 1048576.0;
const GRID_POINTS: usize = 64;
const GRID_SPAN: f64 = 1e6;
/// Largest denominator tried when approximating θ by T̂/T.
pub const MAX_DENOMINATOR: usize = 64;
/// |cos ψ| this close to 1 is treated as an extremal coupling.
const COS_SNAP: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AchieveStatus {
    /// the target is met up to rounding
    Exact,
    /// the supremum is only approached (δ₀ at ∞ or 0⁺); see `max_gap`
    Asymptotic,
}

impl AchieveStatus {
    pub fn label(self) -> &'static str {
        match self {
            AchieveStatus::Exact => "exact",
            AchieveStatus::Asymptotic => "asymptotic",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConeAchievement<T> {
    pub theta_prime: T,
    /// δ at which the construction is evaluated, in terms of the unscaled x
    pub delta: T,
    /// θ = T̂/T of the construction for p′
    pub theta: T,
    pub alpha_diag: [T; 3],
    /// α₁₂, α₁₃, α₂₃ (all ≥ 0)
    pub alpha_off: [T; 3],
    pub cos_psi: T,
    /// p′ = p^{1/θ′}
    pub target: SubsetVector<T>,
    /// normalized minors m^{1/T} of the construction, in closed form
    pub q: SubsetVector<T>,
    /// max_s |q_s − p′_s| / p′_s
    pub max_gap: T,
    pub status: AchieveStatus,
    pub profile: FDeltaProfile<T>,
}

impl<T: Scalar> ConeAchievement<T> {
    /// T̂/T with the smallest denominator ≤ 64 within 1e−3 of θ (else the
    /// closest), doubled when a rotation needs an even T̂.
    pub fn rational_theta(&self) -> (usize, usize) {
        let (mut th, mut t) = rational_approx(self.theta.as_f64(), MAX_DENOMINATOR);
        if self.needs_rotation() && th % 2 == 1 {
            th *= 2;
            t *= 2;
        }
        (th, t)
    }

    /// Strictly between the two extremal couplings (cos ψ = ±1, which
    /// need no rotation blocks).
    fn needs_rotation(&self) -> bool {
        self.cos_psi.abs() < T::one() - T::lit(COS_SNAP)
    }

    /// A concrete spec with identity Φ₁₂, Φ₂₃ at the rational θ.
    pub fn spec(&self) -> BoundaryCovarianceSpec<T> {
        let (th, t) = self.rational_theta();
        let mut spec = BoundaryCovarianceSpec::new(self.alpha_diag, self.alpha_off, t, th);
        if self.needs_rotation() {
            spec.phi13 = Phi13::Rotation(self.cos_psi.max(-T::one()).min(T::one()).acos());
        } else if self.cos_psi < T::zero() {
            spec.phi13 = Phi13::Explicit(Matrix::identity(th).scale(-T::one()));
        }
        spec
    }
}

fn rational_approx(theta: f64, max_den: usize) -> (usize, usize) {
    let mut best = (1usize, 1usize, f64::INFINITY);
    for den in 1..=max_den {
        let num = ((theta * den as f64).round() as usize).clamp(1, den);
        let err = (num as f64 / den as f64 - theta).abs();
        if err <= 1e-3 {
            return (num, den);
        }
        if err < best.2 {
            best = (num, den, err);
        }
    }
    (best.0, best.1)
}

struct Target<T> {
    x: XTriple<T>,
    /// x in original order: x_k belongs to the pair without k
    x_orig: [T; 3],
    ln_t: T,
}

fn cond_on_p<T: Scalar>(p: &SubsetVector<T>) -> Result<Target<T>> {
    if p.n() != 3 {
        return Err(Error::WrongArity { expected: 3, got: p.n() });
    }
    let s = |e: &[usize]| p[SubsetMask::of(e)];
    for (m, &v) in p.iter() {
        if !(v > T::zero()) || !v.is_finite() {
            return Err(Error::NotInContinuousRegion(format!("p{} = {} must be positive and finite", m, v.as_f64())));
        }
    }
    let slack = T::one() + T::lit(SLACK);
    for (i, j) in [(1, 2), (1, 3), (2, 3)] {
        if s(&[i, j]) > s(&[i]) * s(&[j]) * slack {
            return Err(Error::NotInContinuousRegion(format!("p{i}{j} exceeds p{i}·p{j}")));
        }
    }
    for (i, j, k) in [(1, 2, 3), (1, 3, 2), (2, 3, 1)] {
        if s(&[1, 2, 3]) * s(&[k]) > s(&[i, k]) * s(&[j, k]) * slack {
            return Err(Error::NotInContinuousRegion(format!("p123 exceeds p{}{}·p{}{}/p{k}", i.min(k), i.max(k), j.min(k), j.max(k))));
        }
    }
    let x_orig = [(2, 3, 1), (1, 3, 2), (1, 2, 3)].map(|(i, j, _)| (s(&[i, j]) / (s(&[i]) * s(&[j]))).min(T::one()));
    let x = XTriple::new(x_orig)?;
    let ln_t = s(&[1, 2, 3]).ln() - s(&[1]).ln() - s(&[2]).ln() - s(&[3]).ln();
    Ok(Target { x, x_orig, ln_t })
}

/// A δ ≥ δ_min with f(δ) ≥ t, preferring δ_min, then δ₀, then the grid maximum.
fn upper_witness<T: Scalar>(tg: &Target<T>, prof: &FDeltaProfile<T>, d_min: T) -> Option<T> {
    let ok = |d: T| ln_f(&tg.x, d) >= tg.ln_t - T::lit(SLACK);
    if ok(d_min) {
        return Some(d_min);
    }
    if let Delta0::Finite(d0) = prof.delta0 {
        if d0 >= d_min && ok(d0) {
            return Some(d0);
        }
    }
    let (best, _) = best_on_grid(tg, d_min);
    ok(best).then_some(best)
}

fn best_on_grid<T: Scalar>(tg: &Target<T>, d_min: T) -> (T, T) {
    log_grid(d_min, d_min * T::lit(GRID_SPAN), GRID_POINTS).into_iter().map(|d| (d, ln_f(&tg.x, d))).fold((d_min, T::neg_infinity()), |acc, c| {
        if c.1 > acc.1 {
            c
        } else {
            acc
        }
    })
}

/// Moves δ up until the lower bound l(δ) drops to t; the smallest such δ
/// keeps f(δ) ≥ l(δ) = t.
fn lower_into_range<T: Scalar>(tg: &Target<T>, d: T) -> T {
    let below = |d: T| ln_f_lower(&tg.x, d) <= tg.ln_t;
    if below(d) {
        return d;
    }
    let mut lo = d;
    let mut hi = d * T::lit(2.0);
    while !below(hi) {
        lo = hi;
        hi *= T::lit(2.0);
        if hi > T::lit(1e12) {
            return hi;
        }
    }
    for _ in 0..200 {
        if hi - lo <= T::lit(1e-14) * hi {
            break;
        }
        let mid = (lo + hi) / T::lit(2.0);
        if below(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Finds the smallest θ′ ≥ 1 (to 1e−6) for which p^{1/θ′} is reachable by
/// the boundary structure, and the construction reaching it.
pub fn achieve_in_cone<T: Scalar>(p: &SubsetVector<T>) -> Result<ConeAchievement<T>> {
    let tg = cond_on_p(p)?;
    let prof = f_profile(&tg.x);
    if prof.case_id == 7 {
        let x1 = tg.x.sorted()[0];
        if (tg.ln_t - x1.ln()).abs() > T::lit(1e-9) {
            return Err(Error::Unreachable(format!(
                "variable pairwise independent of the other two forces p123/(p1p2p3) = {}, got {}",
                x1.as_f64(),
                tg.ln_t.exp().as_f64()
            )));
        }
    }
    let feasible = |tp: T| upper_witness(&tg, &prof, T::one() / tp);
    let (theta_prime, witness, status) = if let Some(d) = feasible(T::one()) {
        (T::one(), d, AchieveStatus::Exact)
    } else {
        let mut hi = T::lit(2.0);
        while feasible(hi).is_none() && hi < T::lit(THETA_PRIME_CAP) {
            hi *= T::lit(2.0);
        }
        if let Some(mut d) = feasible(hi) {
            let mut lo = hi / T::lit(2.0);
            while hi - lo > T::lit(THETA_PRIME_TOL) {
                let mid = (lo + hi) / T::lit(2.0);
                match feasible(mid) {
                    Some(dm) => {
                        hi = mid;
                        d = dm;
                    }
                    None => lo = mid,
                }
            }
            (hi, d, AchieveStatus::Exact)
        } else {
            let (d, _) = best_on_grid(&tg, T::one() / hi);
            (hi, d, AchieveStatus::Asymptotic)
        }
    };
    let delta = if status == AchieveStatus::Exact { lower_into_range(&tg, witness) } else { witness };
    build(p, &tg, prof, theta_prime, delta, status)
}

fn build<T: Scalar>(
    p: &SubsetVector<T>,
    tg: &Target<T>,
    profile: FDeltaProfile<T>,
    theta_prime: T,
    delta: T,
    status: AchieveStatus,
) -> Result<ConeAchievement<T>> {
    let inv = T::one() / theta_prime;
    let target = p.map(|_, &v| v.powf(inv));
    let theta = T::one() / (delta * theta_prime);
    let pi = |i: usize| target[SubsetMask::singleton(i + 1)];
    let alpha_diag = [0, 1, 2].map(pi);
    // x_k pairs with the variables other than k; α_ij² = p′_ip′_j(1 − x_k^δ)
    let alpha_off = [0, 1, 2].map(|slot| {
        let (i, j) = OFF_PAIRS[slot];
        let k = 3 - i - j;
        let w = -(delta * tg.x_orig[k].ln()).exp_m1();
        (pi(i) * pi(j) * w).max(T::zero()).sqrt()
    });
    let (lower, upper) = scaled_interval(&tg.x, delta);
    let [a, b, _] = tg.x.sorted();
    let ln_u12 = delta * (a.ln() + b.ln());
    let tau = (delta * tg.ln_t - ln_u12).exp();
    let lambda = if upper - lower > T::zero() { ((tau - lower) / (upper - lower)).max(T::zero()).min(T::one()) } else { T::one() };
    let cos_psi = T::lit(2.0) * lambda - T::one();
    let mix = lambda * upper + (T::one() - lambda) * lower;
    let mut q = target.clone();
    for (slot, &(i, j)) in OFF_PAIRS.iter().enumerate() {
        let prod = pi(i) * pi(j);
        let rho2 = alpha_off[slot] * alpha_off[slot] / prod;
        q[SubsetMask::of(&[i + 1, j + 1])] = prod * (T::one() - rho2).powf(theta);
    }
    let ln_p3: T = alpha_diag.iter().map(|v| v.ln()).sum();
    q[SubsetMask::full(3)] = if mix > T::zero() { (ln_p3 + (a.ln() + b.ln() + mix.ln() / delta) * inv).exp() } else { T::zero() };
    let max_gap = q.iter().fold(T::zero(), |m, (s, &v)| m.max((v - target[s]).abs() / target[s]));
    Ok(ConeAchievement { theta_prime, delta, theta, alpha_diag, alpha_off, cos_psi, target, q, max_gap, status, profile })
}

/// Two variables: any g₁₂ ≤ g₁ + g₂ is met exactly by a 2×2 covariance with
/// variances e^{g_i} and ρ² = 1 − e^{g₁₂ − g₁ − g₂}.
pub fn achieve_pair<T: Scalar>(g1: T, g2: T, g12: T) -> Result<SymmetricMatrix<T>> {
    if ![g1, g2, g12].iter().all(|v| v.is_finite()) {
        return Err(Error::NotInContinuousRegion("entries must be finite".into()));
    }
    let excess = g12 - g1 - g2;
    if excess > T::lit(SLACK) * (T::one() + g12.abs()) {
        return Err(Error::NotInContinuousRegion(format!("g12 exceeds g1 + g2 by {:e}", excess.as_f64())));
    }
    let rho2 = -excess.min(T::zero()).exp_m1();
    let (a1, a2) = (g1.exp(), g2.exp());
    let mut m = SymmetricMatrix::zeros(2);
    m.set(0, 0, a1);
    m.set(1, 1, a2);
    m.set(0, 1, (rho2 * a1 * a2).sqrt());
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::super::boundary::build_boundary_covariance;
    use super::*;
    use crate::gaussian_core::{all_principal_minors, entropy_g, BlockCovariance};
    use crate::testutil::{random_spd, rng};
    use approx::assert_relative_eq;
    use rand::Rng;

    fn p_of(m: &SymmetricMatrix<f64>) -> SubsetVector<f64> {
        all_principal_minors(m).unwrap()
    }

    fn corner(x: [f64; 3], p1: [f64; 3]) -> SubsetVector<f64> {
        let mut p = SubsetVector::filled(3, 0.0).unwrap();
        for i in 0..3 {
            p[SubsetMask::singleton(i + 1)] = p1[i];
        }
        for &(i, j) in OFF_PAIRS.iter() {
            p[SubsetMask::of(&[i + 1, j + 1])] = p1[i] * p1[j] * x[3 - i - j];
        }
        let s = |e: &[usize]| p[SubsetMask::of(e)];
        let top = [(1, 2, 3), (1, 3, 2), (2, 3, 1)]
            .iter()
            .map(|&(i, j, k)| s(&[i.min(k), i.max(k)]) * s(&[j.min(k), j.max(k)]) / s(&[k]))
            .fold(f64::INFINITY, f64::min);
        p[SubsetMask::full(3)] = top;
        p
    }

    #[test]
    fn scalar_round_trip() {
        let mut r = rng(21);
        for _ in 0..200 {
            let m = SymmetricMatrix::from_dense(&random_spd(&mut r, 3), 1e-12).unwrap();
            let p = p_of(&m);
            let a = achieve_in_cone(&p).unwrap();
            assert_eq!(a.theta_prime, 1.0);
            assert_eq!(a.status, AchieveStatus::Exact);
            assert!(a.max_gap <= 1e-8, "gap {}", a.max_gap);
            assert_relative_eq!(a.theta, 1.0, max_relative = 1e-12);
            let spec = a.spec();
            assert_eq!((spec.t_hat, spec.t), (1, 1));
            let cov = build_boundary_covariance(&spec).unwrap();
            let built = all_principal_minors(&cov).unwrap();
            for (s, v) in p.iter() {
                assert_relative_eq!(built[s], *v, max_relative = 1e-8);
            }
        }
    }

    #[test]
    fn independent_is_diagonal() {
        let p = SubsetVector::from_fn(3, |s| s.elements().iter().map(|&i| [2.0, 0.5, 3.0][i - 1]).product::<f64>()).unwrap();
        let a = achieve_in_cone(&p).unwrap();
        assert_eq!(a.theta_prime, 1.0);
        assert_eq!(a.alpha_off, [0.0; 3]);
        assert!(a.max_gap < 1e-14);
    }

    #[test]
    fn corner_with_positive_ytilde_needs_scaling() {
        let p = corner([0.5, 0.5, 0.8], [1.3, 0.7, 2.0]);
        let a = achieve_in_cone(&p).unwrap();
        assert!(a.theta_prime > 1.0);
        let Delta0::Finite(d0) = a.profile.delta0 else { panic!() };
        assert!(d0 < 1.0);
        // f is flat at its maximum, so a 1e-12 slack in ln f moves θ′ by ~1e-6
        assert!((a.theta_prime * d0 - 1.0).abs() <= 1e-5, "theta' {} vs 1/d0 {}", a.theta_prime, 1.0 / d0);
        assert!(a.max_gap <= 1e-6, "gap {}", a.max_gap);
        assert!(a.theta <= 1.0 + 1e-12);
    }

    #[test]
    fn interior_point_uses_rotation() {
        let mut r = rng(8);
        for _ in 0..50 {
            let m = SymmetricMatrix::from_dense(&random_spd(&mut r, 3), 1e-12).unwrap();
            let mut p = p_of(&m);
            p[SubsetMask::full(3)] *= r.gen_range(0.3..0.95);
            let a = achieve_in_cone(&p).unwrap();
            assert!(a.max_gap <= 1e-8, "gap {}", a.max_gap);
            let spec = a.spec();
            if matches!(spec.phi13, Phi13::Rotation(_)) {
                assert_eq!(spec.t_hat % 2, 0);
            }
            assert!(build_boundary_covariance(&spec).is_ok());
        }
    }

    #[test]
    fn rejects_outside_and_unreachable() {
        let mut p = SubsetVector::filled(3, 1.0).unwrap();
        p[SubsetMask::of(&[1, 2])] = 1.5;
        assert!(matches!(achieve_in_cone(&p), Err(Error::NotInContinuousRegion(_))));
        // variable 1 pairwise independent of 2 and 3, yet p123 ≠ p1·p23
        let mut q = SubsetVector::filled(3, 1.0).unwrap();
        q[SubsetMask::of(&[2, 3])] = 0.5;
        q[SubsetMask::full(3)] = 0.4;
        assert!(matches!(achieve_in_cone(&q), Err(Error::Unreachable(_))));
        q[SubsetMask::full(3)] = 0.5;
        assert!(achieve_in_cone(&q).unwrap().max_gap < 1e-12);
    }

    #[test]
    fn pair_closed_form() {
        let mut r = rng(2);
        for _ in 0..100 {
            let g1 = r.gen_range(-2.0..2.0);
            let g2 = r.gen_range(-2.0..2.0);
            let g12 = g1 + g2 - r.gen_range(0.0..3.0);
            let m = achieve_pair(g1, g2, g12).unwrap();
            let g = entropy_g(&BlockCovariance::from_scalar(&m)).unwrap().data;
            assert_relative_eq!(g[SubsetMask::full(2)], g12, epsilon = 1e-12);
            assert_relative_eq!(g[SubsetMask::singleton(1)], g1, epsilon = 1e-12);
        }
        assert!(achieve_pair(0.0, 0.0, 0.5).is_err());
    }
}
