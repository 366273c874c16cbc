//! Membership tests for three-variable g-vectors: the continuous entropy
//! region and the conjectured Gaussian region.

use super::fdelta::{x_from_g, XTriple};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::subsets::{SubsetMask, SubsetVector};

pub const CONTINUOUS_TOL: f64 = 1e-12;
/// Relative tolerance separating inside/boundary/outside in the classifier.
pub const CLASSIFY_TOL: f64 = 1e-9;

fn entries<T: Scalar>(g: &SubsetVector<T>) -> Result<impl Fn(&[usize]) -> T + '_> {
    if g.n() != 3 {
        return Err(Error::WrongArity { expected: 3, got: g.n() });
    }
    Ok(move |e: &[usize]| g[SubsetMask::of(e)])
}

/// g_ij ≤ g_i + g_j and g_123 + g_k ≤ g_ik + g_jk, within 1e−12.
pub fn check_continuous3<T: Scalar>(g: &SubsetVector<T>) -> Result<bool> {
    let s = entries(g)?;
    let tol = T::lit(CONTINUOUS_TOL);
    let ok = |lhs: T, rhs: T| lhs <= rhs + tol * (T::one() + lhs.abs().max(rhs.abs()));
    let pairs = [(1, 2), (1, 3), (2, 3)].iter().all(|&(i, j)| ok(s(&[i, j]), s(&[i]) + s(&[j])));
    let triples = [(1, 2, 3), (1, 3, 2), (2, 3, 1)].iter().all(|&(i, j, k)| ok(s(&[1, 2, 3]) + s(&[k]), s(&[i, k]) + s(&[j, k])));
    Ok(pairs && triples)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Inside,
    Boundary,
    Outside,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::Inside => "inside",
            Verdict::Boundary => "boundary",
            Verdict::Outside => "outside",
        }
    }
}

/// Which upper bound on g_123 was applied.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundBranch {
    /// a pairwise constraint g_ij ≤ g_i + g_j already fails
    Pairwise,
    /// ỹ ≤ 0: g_123 ≤ min_k(g_ik + g_jk − g_k)
    Continuous,
    /// ỹ > 0: g_123 ≤ Σg_k + ln max(0, −2 + Σx_k + 2√Π(1 − x_k))
    Tighter,
}

impl BoundBranch {
    pub fn label(self) -> &'static str {
        match self {
            BoundBranch::Pairwise => "pairwise",
            BoundBranch::Continuous => "continuous",
            BoundBranch::Tighter => "tighter",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Classification<T> {
    pub verdict: Verdict,
    pub branch: BoundBranch,
    /// Upper bound on g_123; may be −∞ on the tighter branch. None when
    /// the pairwise constraints fail.
    pub bound: Option<T>,
    pub g123: T,
    pub y_tilde: Option<T>,
    /// x_k in original order
    pub x: [T; 3],
}

impl<T> Classification<T> {
    /// The verdict rests on an unproven functional inequality.
    pub const LABEL: &'static str = "CONJECTURAL";
}

/// Classifies a g-vector against the conjectured three-variable Gaussian
/// region. The verdict is only as good as the conjecture behind it.
pub fn conjectured_region_classify<T: Scalar>(g: &SubsetVector<T>) -> Result<Classification<T>> {
    let s = entries(g)?;
    if let Some((m, _)) = g.iter().find(|(_, v)| !v.is_finite()) {
        return Err(Error::NonFinite(m));
    }
    let x = x_from_g(g)?;
    let g123 = s(&[1, 2, 3]);
    let tol = T::lit(CLASSIFY_TOL);
    let pairwise_ok = [(1, 2), (1, 3), (2, 3)].iter().all(|&(i, j)| {
        let (lhs, rhs) = (s(&[i, j]), s(&[i]) + s(&[j]));
        lhs <= rhs + tol * (T::one() + rhs.abs())
    });
    if !pairwise_ok {
        return Ok(Classification { verdict: Verdict::Outside, branch: BoundBranch::Pairwise, bound: None, g123, y_tilde: None, x });
    }
    let triple = XTriple::new(x.map(|v| v.min(T::one())))?;
    let y_tilde = triple.y_tilde();
    let (branch, bound) = if y_tilde <= T::zero() {
        let b = [(1, 2, 3), (1, 3, 2), (2, 3, 1)].iter().map(|&(i, j, k)| s(&[i, k]) + s(&[j, k]) - s(&[k])).fold(T::infinity(), T::min);
        (BoundBranch::Continuous, b)
    } else {
        let xs = triple.sorted();
        let e = -T::lit(2.0) + xs.iter().copied().sum::<T>() + T::lit(2.0) * xs.iter().map(|&v| T::one() - v).product::<T>().sqrt();
        (BoundBranch::Tighter, s(&[1]) + s(&[2]) + s(&[3]) + e.max(T::zero()).ln())
    };
    let band = tol * (T::one() + bound.abs());
    let verdict = if bound == T::neg_infinity() || g123 > bound + band {
        Verdict::Outside
    } else if g123 >= bound - band {
        Verdict::Boundary
    } else {
        Verdict::Inside
    };
    Ok(Classification { verdict, branch, bound: Some(bound), g123, y_tilde: Some(y_tilde), x })
}
