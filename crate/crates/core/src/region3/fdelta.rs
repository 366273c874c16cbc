//! The special functions f(δ) and y(δ) of three x-values and the seven-case
//! analysis of where f attains its supremum.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::subsets::{SubsetMask, SubsetVector};

/// Tolerance for ties between x-values and for x = 1.
pub const TIE_TOL: f64 = 1e-12;
/// Bisection tolerance on the root of y, relative to max(1, δ).
pub const ROOT_TOL: f64 = 1e-12;
const ROOT_MAX_ITER: usize = 200;
const DELTA_CAP: f64 = 1e12;

/// Three values in (0, 1], kept sorted ascending; `perm[k]` is the original
/// position of `sorted[k]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct XTriple<T> {
    sorted: [T; 3],
    perm: [usize; 3],
}

impl<T: Scalar> XTriple<T> {
    pub fn new(x: [T; 3]) -> Result<Self> {
        for (k, &v) in x.iter().enumerate() {
            if !(v > T::zero() && v <= T::one()) {
                return Err(Error::NotInContinuousRegion(format!("x{} = {} is outside (0, 1]", k + 1, v.as_f64())));
            }
        }
        let mut perm = [0usize, 1, 2];
        perm.sort_by(|&a, &b| x[a].partial_cmp(&x[b]).expect("finite"));
        Ok(XTriple { sorted: perm.map(|k| x[k]), perm })
    }

    /// x_k = e^{g_ij − g_i − g_j}, {i,j,k} = {1,2,3}, in original order.
    /// Values above 1 by at most [`TIE_TOL`] are clamped.
    pub fn from_g(g: &SubsetVector<T>) -> Result<Self> {
        Self::new(x_from_g(g)?.map(|v| if v > T::one() && v <= T::one() + T::lit(TIE_TOL) { T::one() } else { v }))
    }

    pub fn sorted(&self) -> [T; 3] {
        self.sorted
    }

    pub fn perm(&self) -> [usize; 3] {
        self.perm
    }

    /// Values in their original positions.
    pub fn original(&self) -> [T; 3] {
        let mut out = [T::zero(); 3];
        for k in 0..3 {
            out[self.perm[k]] = self.sorted[k];
        }
        out
    }

    /// y(1) = x₁x₂ + x₃ − x₁ − x₂ (sorted), i.e. Πx/max x + 2 max x − Σx.
    pub fn y_tilde(&self) -> T {
        y_eval(self, T::one())
    }
}

/// x_k = e^{g_ij − g_i − g_j} for k = 1, 2, 3, without range checks.
pub fn x_from_g<T: Scalar>(g: &SubsetVector<T>) -> Result<[T; 3]> {
    if g.n() != 3 {
        return Err(Error::WrongArity { expected: 3, got: g.n() });
    }
    let s = |e: &[usize]| g[SubsetMask::of(e)];
    Ok([(2, 3), (1, 3), (1, 2)].map(|(i, j)| (s(&[i, j]) - s(&[i]) - s(&[j])).exp()))
}

/// f(δ) = max(0, −2 + Σx^δ + 2√Π(1 − x^δ))^{1/δ}, evaluated term by term
/// with −2 + Σx^δ written as x₁^δ − (1 − x₂^δ) − (1 − x₃^δ).
pub fn f_eval<T: Scalar>(x: &XTriple<T>, delta: T) -> T {
    let w = x.sorted.map(|v| -(delta * v.ln()).exp_m1());
    let u1 = x.sorted[0].powf(delta);
    let e = u1 - w[1] - w[2] + T::lit(2.0) * w.iter().copied().product::<T>().sqrt();
    e.max(T::zero()).powf(T::one() / delta)
}

/// y(δ) = (x₁x₂)^δ + x₃^δ − x₁^δ − x₂^δ on the sorted triple, evaluated literally.
pub fn y_eval<T: Scalar>(x: &XTriple<T>, delta: T) -> T {
    let [a, b, c] = x.sorted;
    (a * b).powf(delta) + c.powf(delta) - a.powf(delta) - b.powf(delta)
}

/// y(δ)/x₃^δ = (1 − (x₂/x₃)^δ) − (x₁/x₃)^δ(1 − x₂^δ); same sign as y, no underflow.
pub fn y_scaled<T: Scalar>(x: &XTriple<T>, delta: T) -> T {
    let [a, b, c] = x.sorted.map(|v| v.ln());
    -(delta * (b - c)).exp_m1() - (delta * (a - c)).exp() * -(delta * b).exp_m1()
}

/// Shared pieces of the stable forms, with u = x^δ and w = 1 − u:
/// e(δ) = u₁u₂ − y²/s² and e₋(δ) = u₁u₂ − s², where s = √(w₁w₂) + √w₃.
struct Stable<T> {
    ln_u12: T,
    ln_s: T,
    /// ln|y|, −∞ when y = 0
    ln_abs_y: T,
}

fn stable<T: Scalar>(x: &XTriple<T>, delta: T) -> Stable<T> {
    let [l1, l2, l3] = x.sorted.map(|v| v.ln());
    let w = |l: T| -(delta * l).exp_m1();
    let s = (w(l1) * w(l2)).sqrt() + w(l3).sqrt();
    // y = u₃(1 − (x₂/x₃)^δ) − u₁w₂, as a difference of logs
    let a = -(delta * (l2 - l3)).exp_m1();
    let big = delta * l3 + a.ln();
    let small = delta * l1 + w(l2).ln();
    let ln_abs_y = if big == small || (big == T::neg_infinity() && small == T::neg_infinity()) {
        T::neg_infinity()
    } else {
        let (hi, lo) = if big > small { (big, small) } else { (small, big) };
        hi + (-(lo - hi).exp_m1()).ln()
    };
    Stable { ln_u12: delta * (l1 + l2), ln_s: s.ln(), ln_abs_y }
}

/// ln f(δ), accurate where the literal form cancels (large δ, x near 1).
/// Returns −∞ when e(δ) ≤ 0.
pub fn ln_f<T: Scalar>(x: &XTriple<T>, delta: T) -> T {
    let st = stable(x, delta);
    let [a, b, _] = x.sorted;
    let base = a.ln() + b.ln();
    if st.ln_abs_y == T::neg_infinity() {
        return base;
    }
    let ln_r = T::lit(2.0) * (st.ln_abs_y - st.ln_s) - st.ln_u12;
    if ln_r >= T::zero() {
        return T::neg_infinity();
    }
    base + (-ln_r.exp()).ln_1p() / delta
}

pub fn f_stable<T: Scalar>(x: &XTriple<T>, delta: T) -> T {
    ln_f(x, delta).exp()
}

/// ln of the lower bound l(δ) = max(0, −2 + Σx^δ − 2√Π(1 − x^δ))^{1/δ}.
pub fn ln_f_lower<T: Scalar>(x: &XTriple<T>, delta: T) -> T {
    let st = stable(x, delta);
    let [a, b, _] = x.sorted;
    let ln_r = T::lit(2.0) * st.ln_s - st.ln_u12;
    if ln_r >= T::zero() {
        return T::neg_infinity();
    }
    a.ln() + b.ln() + (-ln_r.exp()).ln_1p() / delta
}

/// Normalized achievable interval at δ, scaled by u₁u₂:
/// (e₋/(u₁u₂), e/(u₁u₂)) = (1 − s²/(u₁u₂), 1 − y²/(u₁u₂s²)).
pub(crate) fn scaled_interval<T: Scalar>(x: &XTriple<T>, delta: T) -> (T, T) {
    let st = stable(x, delta);
    let lower = T::one() - (T::lit(2.0) * st.ln_s - st.ln_u12).exp();
    let upper = if st.ln_abs_y == T::neg_infinity() { T::one() } else { T::one() - (T::lit(2.0) * (st.ln_abs_y - st.ln_s) - st.ln_u12).exp() };
    (lower, upper)
}

/// Location of the supremum of f.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Delta0<T> {
    Finite(T),
    /// approached as δ → ∞
    Infinity,
    /// approached as δ → 0⁺
    ZeroPlus,
    /// f is constant
    Constant,
}

impl<T: Scalar> Delta0<T> {
    pub fn label(&self) -> String {
        match self {
            Delta0::Finite(d) => format!("{}", d.as_f64()),
            Delta0::Infinity => "inf".into(),
            Delta0::ZeroPlus => "0+".into(),
            Delta0::Constant => "constant".into(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FDeltaProfile<T> {
    /// 1..=7, by the tie pattern of (x₁, x₂, x₃, 1)
    pub case_id: u8,
    pub delta0: Delta0<T>,
    pub sup_f: T,
    /// supremum reached at a finite δ (cases 1, 2 and the constant case 7)
    pub attained: bool,
}

/// Classifies x into the seven cases and locates the supremum of f.
///
/// | case | pattern           | δ₀        | sup f  |
/// |------|-------------------|-----------|--------|
/// | 1    | x₁ < x₂ < x₃ < 1  | root of y | x₁x₂   |
/// | 2    | x₁ = x₂ < x₃ < 1  | root of y | x₁²    |
/// | 3    | x₁ < x₂ = x₃ < 1  | ∞         | x₁x₂   |
/// | 4    | x₁ = x₂ = x₃ < 1  | ∞         | x₃²    |
/// | 5    | x₁ < x₂ < x₃ = 1  | 0⁺        | x₁x₂   |
/// | 6    | x₁ = x₂ < x₃ = 1  | 0⁺        | x₁²    |
/// | 7    | x₂ = x₃ = 1       | constant  | x₁     |
pub fn f_profile<T: Scalar>(x: &XTriple<T>) -> FDeltaProfile<T> {
    let tol = T::lit(TIE_TOL);
    let [a, b, c] = x.sorted;
    let sup = a * b;
    let tie12 = b - a <= tol;
    let tie23 = c - b <= tol;
    let one3 = T::one() - c <= tol;
    let one2 = T::one() - b <= tol;
    let (case_id, delta0) = if one2 {
        (7, Delta0::Constant)
    } else if one3 {
        (if tie12 { 6 } else { 5 }, Delta0::ZeroPlus)
    } else if tie23 {
        (if tie12 { 4 } else { 3 }, Delta0::Infinity)
    } else {
        (if tie12 { 2 } else { 1 }, find_root(x))
    };
    match delta0 {
        Delta0::Constant => FDeltaProfile { case_id, delta0, sup_f: a, attained: true },
        Delta0::Finite(_) => FDeltaProfile { case_id, delta0, sup_f: sup, attained: true },
        _ => FDeltaProfile { case_id, delta0, sup_f: sup, attained: false },
    }
}

/// Unique positive root of y by bracketing and bisection. Near-ties that
/// push the root beyond the search caps fall back to the asymptotic markers.
fn find_root<T: Scalar>(x: &XTriple<T>) -> Delta0<T> {
    let a = |d: T| y_scaled(x, d);
    let mut hi = T::one();
    while a(hi) <= T::zero() {
        hi *= T::lit(2.0);
        if hi > T::lit(DELTA_CAP) {
            return Delta0::Infinity;
        }
    }
    let mut lo = hi / T::lit(2.0);
    while a(lo) > T::zero() {
        lo /= T::lit(2.0);
        if lo < T::lit(1.0 / DELTA_CAP) {
            return Delta0::ZeroPlus;
        }
    }
    if hi > lo * T::lit(2.0) {
        hi = lo * T::lit(2.0);
    }
    for _ in 0..ROOT_MAX_ITER {
        if hi - lo <= T::lit(ROOT_TOL) * hi.max(T::one()) {
            break;
        }
        let mid = (lo + hi) / T::lit(2.0);
        if a(mid) > T::zero() {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Delta0::Finite((lo + hi) / T::lit(2.0))
}

/// `points` logarithmically spaced values in [lo, hi].
pub fn log_grid<T: Scalar>(lo: T, hi: T, points: usize) -> Vec<T> {
    if points == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    let step = (b - a) / T::of_usize(points - 1);
    (0..points).map(|k| (a + step * T::of_usize(k)).exp()).collect()
}

/// (δ, f(δ), y(δ)) on the plotting grid δ ∈ [1e−3, 1e3], 200 points.
pub fn f_profile_table<T: Scalar>(x: &XTriple<T>) -> Vec<(T, T, T)> {
    log_grid(T::lit(1e-3), T::lit(1e3), 200).into_iter().map(|d| (d, f_stable(x, d), y_eval(x, d))).collect()
}
