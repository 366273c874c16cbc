//! Shannon-type checks, balancedness, and the Ingleton functional together
//! with the ε/a covariance family that violates it.

use crate::error::{Error, Result};
use crate::gaussian_core::{all_principal_minors, entropy_g, BlockCovariance, SymmetricMatrix};
use crate::scalar::Scalar;
use crate::subsets::{enumerate_subsets, subsets_of, SubsetMask, SubsetVector};

/// Coefficients γ_s of Σ_s γ_s H_s.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearFunctional<T> {
    pub coeffs: SubsetVector<T>,
}

impl<T: Scalar> LinearFunctional<T> {
    pub fn new(coeffs: SubsetVector<T>) -> Self {
        LinearFunctional { coeffs }
    }

    pub fn zero(n: usize) -> Result<Self> {
        Ok(LinearFunctional { coeffs: SubsetVector::filled(n, T::zero())? })
    }

    pub fn n(&self) -> usize {
        self.coeffs.n()
    }

    pub fn evaluate(&self, h: &SubsetVector<T>) -> T {
        self.coeffs.iter().map(|(s, &c)| if c == T::zero() { T::zero() } else { c * h[s] }).sum()
    }

    /// Σ_{s ∋ i} γ_s for each element i = 1..n.
    pub fn element_sums(&self) -> Vec<T> {
        (1..=self.n()).map(|i| self.coeffs.iter().filter(|(s, _)| s.contains(i)).map(|(_, &c)| c).sum()).collect()
    }

    /// Σ_s |s| γ_s, which vanishes for balanced functionals.
    pub fn cardinality_weighted_sum(&self) -> T {
        self.coeffs.iter().map(|(s, &c)| T::of_usize(s.cardinality()) * c).sum()
    }

    /// The Ingleton functional on four subsets; `evaluate` then equals
    /// [`ingleton_value`].
    pub fn ingleton(n: usize, masks: [SubsetMask; 4]) -> Result<Self> {
        let mut f = Self::zero(n)?;
        let (plus, minus) = ingleton_terms(masks);
        for s in plus {
            f.coeffs[s] += T::one();
        }
        for s in minus {
            f.coeffs[s] -= T::one();
        }
        Ok(f)
    }
}

/// Each element-marginal sum is zero within 1e-12.
pub fn is_balanced<T: Scalar>(f: &LinearFunctional<T>) -> bool {
    first_unbalanced(f, T::lit(1e-12)).is_none()
}

/// First element whose marginal sum exceeds `tol` in magnitude.
pub fn first_unbalanced<T: Scalar>(f: &LinearFunctional<T>, tol: T) -> Option<(usize, T)> {
    f.element_sums().into_iter().enumerate().find(|(_, s)| s.abs() > tol).map(|(i, s)| (i + 1, s))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShannonMode {
    /// Monotonicity (including H_s ≥ H_∅ = 0) and submodularity.
    Discrete,
    /// Submodularity only; the only basic family valid for differential entropies.
    Continuous,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShannonKind {
    Monotonicity,
    Submodularity,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ShannonViolation<T> {
    pub kind: ShannonKind,
    /// Monotonicity: (s, s′) with s ⊂ s′. Submodularity: the pair (s, s′).
    pub s: SubsetMask,
    pub s_prime: SubsetMask,
    /// Amount by which the inequality fails (positive).
    pub slack: T,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ShannonReport<T> {
    pub mode: ShannonMode,
    pub tol: T,
    pub checked: usize,
    pub violations: Vec<ShannonViolation<T>>,
}

impl<T> ShannonReport<T> {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Evaluates the basic inequalities on every pair of subsets. An instance
/// fails when lhs − rhs > tol·(1 + max|term|).
pub fn check_shannon<T: Scalar>(h: &SubsetVector<T>, mode: ShannonMode, tol: T) -> Result<ShannonReport<T>> {
    let n = h.n();
    if n > 8 {
        return Err(Error::SizeOutOfRange(n));
    }
    let at = |s: SubsetMask| if s.is_empty() { T::zero() } else { h[s] };
    let mut violations = Vec::new();
    let mut checked = 0;
    if mode == ShannonMode::Discrete {
        for big in enumerate_subsets(n)? {
            for small in subsets_of(big).filter(|&s| s != big) {
                checked += 1;
                let (l, r) = (at(small), at(big));
                let slack = l - r;
                if slack > tol * (T::one() + l.abs().max(r.abs())) {
                    violations.push(ShannonViolation { kind: ShannonKind::Monotonicity, s: small, s_prime: big, slack });
                }
            }
        }
    }
    for s in enumerate_subsets(n)? {
        for t in enumerate_subsets(n)?.filter(|t| t.bits() > s.bits()) {
            if s.is_subset_of(t) || t.is_subset_of(s) {
                continue;
            }
            checked += 1;
            let terms = [at(s.union(t)), at(s.intersect(t)), at(s), at(t)];
            let slack = terms[0] + terms[1] - terms[2] - terms[3];
            let scale = terms.iter().fold(T::zero(), |m, v| m.max(v.abs()));
            if slack > tol * (T::one() + scale) {
                violations.push(ShannonViolation { kind: ShannonKind::Submodularity, s, s_prime: t, slack });
            }
        }
    }
    Ok(ShannonReport { mode, tol, checked, violations })
}

/// (positive terms, negative terms) of the Ingleton expression.
pub fn ingleton_terms(m: [SubsetMask; 4]) -> ([SubsetMask; 5], [SubsetMask; 5]) {
    let [s1, s2, s3, s4] = m;
    let s12 = s1.union(s2);
    ([s1, s2, s12.union(s3), s12.union(s4), s3.union(s4)], [s12, s1.union(s3), s1.union(s4), s2.union(s3), s2.union(s4)])
}

/// The four singletons {1},{2},{3},{4}.
pub fn singleton_masks() -> [SubsetMask; 4] {
    [1, 2, 3, 4].map(SubsetMask::singleton)
}

/// Ingleton expression on an entropy/rank vector; > 0 means violation.
pub fn ingleton_value<T: Scalar>(g: &SubsetVector<T>, masks: [SubsetMask; 4]) -> T {
    let (plus, minus) = ingleton_terms(masks);
    plus.iter().map(|&s| g[s]).sum::<T>() - minus.iter().map(|&s| g[s]).sum::<T>()
}

/// The same expression on minors, as a ratio: exp(T·ingleton_value).
pub fn ingleton_minor_ratio<T: Scalar>(m: &SubsetVector<T>, masks: [SubsetMask; 4]) -> T {
    let (plus, minus) = ingleton_terms(masks);
    plus.iter().map(|&s| m[s]).fold(T::one(), |a, b| a * b) / minus.iter().map(|&s| m[s]).fold(T::one(), |a, b| a * b)
}

/// Point of the ε/a covariance family.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IngletonFamilyPoint<T> {
    pub epsilon: T,
    pub a: T,
}

impl<T: Scalar> IngletonFamilyPoint<T> {
    pub fn new(epsilon: T, a: T) -> Self {
        IngletonFamilyPoint { epsilon, a }
    }

    /// 0 ≤ a² ≤ 1/2 and 4a² − 1 ≤ ε ≤ 1.
    pub fn is_feasible(&self) -> bool {
        let a2 = self.a * self.a;
        a2 <= T::lit(0.5) && T::lit(4.0) * a2 - T::one() <= self.epsilon && self.epsilon <= T::one()
    }

    /// Unit diagonal, (1,2)=ε, (1,3)=(1,4)=(2,3)=(2,4)=a, (3,4)=0.
    pub fn matrix(&self) -> SymmetricMatrix<T> {
        let (e, a) = (self.epsilon, self.a);
        SymmetricMatrix::from_lower(4, |i, j| match (i, j) {
            _ if i == j => T::one(),
            (1, 0) => e,
            (3, 2) => T::zero(),
            _ => a,
        })
    }
}

/// (1−ε)/(1+ε) vs ((1−2a²+a⁴)/(1−2a²+ε))². Evaluated strictly so that the
/// equality locus, where the Ingleton value is exactly 0, is not counted as
/// a violation. Where the right-hand denominator vanishes the g-domain sign
/// decides.
pub fn ingleton_violation_predicate<T: Scalar>(p: &IngletonFamilyPoint<T>) -> Result<bool> {
    if !p.is_feasible() {
        return Err(Error::InfeasiblePoint { epsilon: p.epsilon.as_f64(), a: p.a.as_f64() });
    }
    let (e, a2) = (p.epsilon, p.a * p.a);
    let den = T::one() - T::lit(2.0) * a2 + e;
    if den.abs() <= T::lit(1e-12) {
        let v = entropy_g(&BlockCovariance::from_scalar(&p.matrix())).map(|g| ingleton_value(&g.data, singleton_masks()));
        return Ok(matches!(v, Ok(x) if x > T::zero()));
    }
    let lhs = (T::one() - e) / (T::one() + e);
    let rhs = ((T::one() - T::lit(2.0) * a2 + a2 * a2) / den).powi(2);
    Ok(lhs > rhs)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Feasibility {
    Feasible,
    Infeasible,
    /// Within the PSD tolerance band of the feasibility boundary.
    Boundary,
}

impl Feasibility {
    pub fn label(self) -> &'static str {
        match self {
            Feasibility::Feasible => "feasible",
            Feasibility::Infeasible => "infeasible",
            Feasibility::Boundary => "boundary",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepCell<T> {
    pub epsilon: T,
    pub a2: T,
    pub feasibility: Feasibility,
    /// Predicate verdict; false off the feasible set.
    pub violates: bool,
    /// g-domain Ingleton value, for feasible cells.
    pub ingleton_value: Option<T>,
    /// Predicate and g-sign agree, or the value lies in the ±1e-9 band.
    pub agrees: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepTable<T> {
    pub resolution: usize,
    pub psd_tol: T,
    pub band: T,
    pub cells: Vec<SweepCell<T>>,
}

/// Half-width of the value band in which predicate/sign disagreement is tolerated.
pub const SWEEP_VALUE_BAND: f64 = 1e-9;

/// Rasterizes [−1,1)×[0,0.5) with `res` cells per axis; cell (i,j) is
/// labelled by its lower corner ε = −1 + 2i/res, a² = j/(2·res). Rows are
/// ordered by ε, then a².
pub fn ingleton_sweep<T: Scalar>(res: usize, psd_tol: T) -> Result<SweepTable<T>> {
    if res < 2 {
        return Err(Error::DimensionMismatch("sweep resolution must be at least 2".into()));
    }
    let band = T::lit(SWEEP_VALUE_BAND);
    let r = T::of_usize(res);
    let mut cells = Vec::with_capacity(res * res);
    for i in 0..res {
        let epsilon = -T::one() + T::lit(2.0) * T::of_usize(i) / r;
        for j in 0..res {
            let a2 = T::of_usize(j) / (T::lit(2.0) * r);
            cells.push(sweep_cell(epsilon, a2, psd_tol, band));
        }
    }
    Ok(SweepTable { resolution: res, psd_tol, band, cells })
}

fn sweep_cell<T: Scalar>(epsilon: T, a2: T, psd_tol: T, band: T) -> SweepCell<T> {
    let p = IngletonFamilyPoint::new(epsilon, a2.sqrt());
    let m = p.matrix();
    let vals = m.to_dense().sym_eigenvalues();
    let big = vals.iter().fold(T::zero(), |x, v| x.max(v.abs()));
    let margin = psd_tol * (T::one() + big);
    let feasibility = if vals[0] > margin {
        Feasibility::Feasible
    } else if vals[0] < -margin {
        Feasibility::Infeasible
    } else {
        Feasibility::Boundary
    };
    let mut cell = SweepCell { epsilon, a2, feasibility, violates: false, ingleton_value: None, agrees: true };
    if feasibility == Feasibility::Feasible {
        let minors = all_principal_minors(&m).expect("n=4");
        let g = minors.map(|_, &v| v.ln());
        let value = ingleton_value(&g, singleton_masks());
        let violates = ingleton_violation_predicate(&p).unwrap_or(false);
        cell.violates = violates;
        cell.ingleton_value = Some(value);
        cell.agrees = value.abs() <= band || violates == (value > T::zero());
    }
    cell
}
