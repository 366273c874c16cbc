//! Principal minor assignment for symmetric matrices: the minimal
//! condition sets, reconstruction in the first-row-positive gauge, and the
//! Gaussian-entropic check obtained by substituting A = e^g.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gaussian_core::{all_principal_minors, is_psd, SymmetricMatrix, PSD_TOL};
use crate::hyperdet::Residual;
use crate::scalar::Scalar;
use crate::subsets::{enumerate_subsets, subsets_of, SubsetMask, SubsetVector};

/// Default relative residual tolerance: 1e-9 for n ≤ 4, 1e-8 above.
pub fn default_tol(n: usize) -> f64 {
    if n <= 4 {
        1e-9
    } else {
        1e-8
    }
}

/// Candidate principal-minor vector (A_∅ = 1 implicit).
#[derive(Clone, Debug, PartialEq)]
pub struct MinorCandidate<T> {
    pub a: SubsetVector<T>,
}

impl<T: Scalar> MinorCandidate<T> {
    pub fn new(a: SubsetVector<T>) -> Result<Self> {
        if let Some((s, _)) = a.iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite(s));
        }
        Ok(MinorCandidate { a })
    }

    pub fn from_matrix(m: &SymmetricMatrix<T>) -> Result<Self> {
        Self::new(all_principal_minors(m)?)
    }

    pub fn n(&self) -> usize {
        self.a.n()
    }

    #[inline]
    pub fn get(&self, s: SubsetMask) -> T {
        if s.is_empty() {
            T::one()
        } else {
            self.a[s]
        }
    }

    /// View with every A_S replaced by A_{S∪α}/A_α.
    fn conditioned(&self, alpha: SubsetMask) -> Result<View<'_, T>> {
        let d = self.get(alpha);
        if d == T::zero() {
            return Err(Error::ZeroDenominator(alpha));
        }
        Ok(View { a: self, alpha, denom: d })
    }
}

struct View<'a, T> {
    a: &'a MinorCandidate<T>,
    alpha: SubsetMask,
    denom: T,
}

impl<T: Scalar> View<'_, T> {
    fn v(&self, e: &[usize]) -> T {
        self.a.get(SubsetMask::of(e).union(self.alpha)) / self.denom
    }

    fn inputs(&self, e: &[usize]) -> Vec<SubsetMask> {
        let base = SubsetMask::of(e);
        let mut out: Vec<SubsetMask> = subsets_of(base).map(|s| s.union(self.alpha)).filter(|s| !s.is_empty()).collect();
        out.sort();
        out.dedup();
        out
    }

    /// (value, largest term magnitude) of c_{ijk}.
    fn c(&self, i: usize, j: usize, k: usize) -> (T, T) {
        let terms = [
            self.v(&[i, j, k]),
            -self.v(&[i]) * self.v(&[j, k]),
            -self.v(&[j]) * self.v(&[i, k]),
            -self.v(&[k]) * self.v(&[i, j]),
            T::lit(2.0) * self.v(&[i]) * self.v(&[j]) * self.v(&[k]),
        ];
        sum_scale(&terms)
    }

    /// (A_iA_j − A_ij, scale).
    fn gap(&self, i: usize, j: usize) -> (T, T) {
        let p = self.v(&[i]) * self.v(&[j]);
        let q = self.v(&[i, j]);
        (p - q, p.abs().max(q.abs()))
    }
}

fn sum_scale<T: Scalar>(terms: &[T]) -> (T, T) {
    let mut v = T::zero();
    let mut s = T::zero();
    for &t in terms {
        v += t;
        s = s.max(t.abs());
    }
    (v, s)
}

/// c_{ijk} = A_ijk − A_iA_jk − A_jA_ik − A_kA_ij + 2A_iA_jA_k.
pub fn c_value<T: Scalar>(a: &MinorCandidate<T>, ijk: [usize; 3]) -> Result<T> {
    let [i, j, k] = ijk;
    if i == j || j == k || i == k || [i, j, k].iter().any(|&x| x == 0 || x > a.n()) {
        return Err(Error::DimensionMismatch(format!("indices {ijk:?} must be distinct elements of 1..={}", a.n())));
    }
    Ok(a.conditioned(SubsetMask::EMPTY)?.c(i, j, k).0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EquationKind {
    /// c_{1jk}² = 4(A₁A_j−A_{1j})(A₁A_k−A_{1k})(A_jA_k−A_{jk})
    Hyper,
    /// c_{1ij}c_{1ik}c_{1jk} = 4(A₁A_i−A_{1i})(A₁A_j−A_{1j})(A₁A_k−A_{1k})c_{ijk}
    SignConsistency,
    /// D^α_{ijkl} = 0 on the four smallest elements of β, α the rest
    Det,
}

impl EquationKind {
    pub fn label(self) -> &'static str {
        match self {
            EquationKind::Hyper => "hyper",
            EquationKind::SignConsistency => "sign-consistency",
            EquationKind::Det => "det",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EquationResidual<T> {
    pub kind: EquationKind,
    /// {1,j,k} for Hyper, {i,j,k} for SignConsistency, β for Det.
    pub indices: SubsetMask,
    pub residual: Residual<T>,
    /// |value| / scale
    pub relative: T,
    pub pass: bool,
    /// Entries of A the equation reads.
    pub inputs: Vec<SubsetMask>,
}

impl<T: Scalar> EquationResidual<T> {
    pub fn depends_on(&self, s: SubsetMask) -> bool {
        self.inputs.binary_search(&s).is_ok()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MinorReport<T> {
    pub n: usize,
    pub tol: T,
    pub equations: Vec<EquationResidual<T>>,
    pub expected_count: u64,
    pub passed: bool,
}

impl<T: Scalar> MinorReport<T> {
    pub fn failing(&self) -> impl Iterator<Item = &EquationResidual<T>> {
        self.equations.iter().filter(|e| !e.pass)
    }

    pub fn max_relative(&self) -> T {
        self.equations.iter().fold(T::zero(), |m, e| m.max(e.relative))
    }
}

/// C(n−1,2) + C(n−1,3) + Σ_{m≥4} C(n,m).
pub fn equation_count(n: usize) -> u64 {
    let choose = |a: u64, b: u64| -> u64 {
        if b > a {
            return 0;
        }
        (0..b).fold(1u64, |acc, i| acc * (a - i) / (i + 1))
    };
    let n = n as u64;
    if n == 0 {
        return 0;
    }
    choose(n - 1, 2) + choose(n - 1, 3) + (4..=n).map(|m| choose(n, m)).sum::<u64>()
}

/// Which four elements of β enter its Det equation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DetChoice {
    /// The four smallest elements (canonical, deterministic).
    Smallest,
    /// A seeded random choice, for consistency diagnostics.
    Random(u64),
}

/// Verifies A_αA_{ijα} < A_{iα}A_{jα} for all i < j and α ⊆ 𝒩∖{i,j}.
/// Violations, and margins within `tol` of zero ("degenerate-boundary"),
/// are reported as DegenerateInput naming the pair.
pub fn check_nondegenerate<T: Scalar>(a: &MinorCandidate<T>, tol: T) -> Result<()> {
    let n = a.n();
    for i in 1..=n {
        for j in i + 1..=n {
            let ij = SubsetMask::of(&[i, j]);
            for alpha in subsets_of(ij.complement(n)) {
                let lhs = a.get(alpha) * a.get(alpha.union(ij));
                let rhs = a.get(alpha.union(SubsetMask::singleton(i))) * a.get(alpha.union(SubsetMask::singleton(j)));
                let margin = rhs - lhs;
                let scale = lhs.abs().max(rhs.abs());
                if margin <= tol * scale {
                    let what = if margin < -tol * scale { "violated" } else { "degenerate-boundary" };
                    return Err(Error::DegenerateInput(format!(
                        "{what}: pair ({i},{j}) given {alpha}: A_a*A_ija = {} vs A_ia*A_ja = {}",
                        lhs.as_f64(),
                        rhs.as_f64()
                    )));
                }
            }
        }
    }
    Ok(())
}

fn make<T: Scalar>(kind: EquationKind, indices: SubsetMask, value: T, scale: T, tol: T, inputs: Vec<SubsetMask>) -> EquationResidual<T> {
    let residual = Residual::new(value, scale);
    let relative = residual.relative();
    EquationResidual { kind, indices, residual, relative, pass: relative <= tol, inputs }
}

fn hyper_eq<T: Scalar>(a: &MinorCandidate<T>, j: usize, k: usize, tol: T) -> Result<EquationResidual<T>> {
    let v = a.conditioned(SubsetMask::EMPTY)?;
    let (c, sc) = v.c(1, j, k);
    let (g1, s1) = v.gap(1, j);
    let (g2, s2) = v.gap(1, k);
    let (g3, s3) = v.gap(j, k);
    let four = T::lit(4.0);
    let value = c * c - four * g1 * g2 * g3;
    let scale = (sc * sc).max(four * s1 * s2 * s3);
    Ok(make(EquationKind::Hyper, SubsetMask::of(&[1, j, k]), value, scale, tol, v.inputs(&[1, j, k])))
}

fn sign_eq<T: Scalar>(a: &MinorCandidate<T>, i: usize, j: usize, k: usize, tol: T) -> Result<EquationResidual<T>> {
    let v = a.conditioned(SubsetMask::EMPTY)?;
    let (c1, s1) = v.c(1, i, j);
    let (c2, s2) = v.c(1, i, k);
    let (c3, s3) = v.c(1, j, k);
    let (c0, s0) = v.c(i, j, k);
    let (gi, ti) = v.gap(1, i);
    let (gj, tj) = v.gap(1, j);
    let (gk, tk) = v.gap(1, k);
    let four = T::lit(4.0);
    let value = c1 * c2 * c3 - four * gi * gj * gk * c0;
    let scale = (s1 * s2 * s3).max(four * ti * tj * tk * s0);
    Ok(make(EquationKind::SignConsistency, SubsetMask::of(&[i, j, k]), value, scale, tol, v.inputs(&[1, i, j, k])))
}

/// D^α_{ijkl}: A_ijkl + ½Σ c_{i′j′k′}c_{i′j′l′}/(A_i′A_j′ − A_i′j′) − A_i c_jkl − A_j c_ikl
/// − A_k c_ijl − A_l c_ijk + 2A_iA_jA_kA_l − A_ijA_kl − A_ikA_jl − A_ilA_jk,
/// the sum running over the three unordered pairs {i′,j′} ⊂ {i,j,k} with
/// {k′,l′} their complement in {i,j,k,l}, and every A_S read as A_{S∪α}/A_α.
fn det_eq<T: Scalar>(a: &MinorCandidate<T>, beta: SubsetMask, quad: [usize; 4], tol: T) -> Result<EquationResidual<T>> {
    let alpha = beta.difference(SubsetMask::of(&quad));
    let v = a.conditioned(alpha)?;
    let [i, j, k, l] = quad;
    let half = T::lit(0.5);
    let two = T::lit(2.0);
    let mut terms = vec![v.v(&[i, j, k, l])];
    for (p, q, r, s) in [(i, j, k, l), (i, k, j, l), (j, k, i, l)] {
        let (gap, _) = v.gap(p, q);
        if gap == T::zero() {
            return Err(Error::DegenerateInput(format!("pair ({p},{q}) given {alpha} has zero gap")));
        }
        terms.push(half * v.c(p, q, r).0 * v.c(p, q, s).0 / gap);
    }
    terms.push(-v.v(&[i]) * v.c(j, k, l).0);
    terms.push(-v.v(&[j]) * v.c(i, k, l).0);
    terms.push(-v.v(&[k]) * v.c(i, j, l).0);
    terms.push(-v.v(&[l]) * v.c(i, j, k).0);
    terms.push(two * v.v(&[i]) * v.v(&[j]) * v.v(&[k]) * v.v(&[l]));
    terms.push(-v.v(&[i, j]) * v.v(&[k, l]));
    terms.push(-v.v(&[i, k]) * v.v(&[j, l]));
    terms.push(-v.v(&[i, l]) * v.v(&[j, k]));
    let (value, scale) = sum_scale(&terms);
    let mut inputs = v.inputs(&quad);
    if !alpha.is_empty() && !inputs.contains(&alpha) {
        inputs.push(alpha);
        inputs.sort();
    }
    Ok(make(EquationKind::Det, beta, value, scale, tol, inputs))
}

pub fn check_general<T: Scalar>(a: &MinorCandidate<T>, tol: T) -> Result<MinorReport<T>> {
    check_general_with(a, tol, DetChoice::Smallest)
}

/// The full minimal condition set: Hyper for j<k in {2..n}, SignConsistency
/// for i<j<k in {2..n}, and one Det equation per β with |β| ≥ 4. Valid for
/// every n ≥ 1; n = 3 yields the single compact hyperdeterminant equation.
pub fn check_general_with<T: Scalar>(a: &MinorCandidate<T>, tol: T, choice: DetChoice) -> Result<MinorReport<T>> {
    let n = a.n();
    check_nondegenerate(a, tol)?;
    let mut equations = Vec::new();
    for j in 2..=n {
        for k in j + 1..=n {
            equations.push(hyper_eq(a, j, k, tol)?);
        }
    }
    for i in 2..=n {
        for j in i + 1..=n {
            for k in j + 1..=n {
                equations.push(sign_eq(a, i, j, k, tol)?);
            }
        }
    }
    let mut rng = match choice {
        DetChoice::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        DetChoice::Smallest => None,
    };
    for beta in enumerate_subsets(n)?.filter(|b| b.cardinality() >= 4) {
        let elems = beta.elements();
        let mut quad = [elems[0], elems[1], elems[2], elems[3]];
        if let Some(r) = rng.as_mut() {
            let mut pick: Vec<usize> = elems.choose_multiple(r, 4).copied().collect();
            pick.sort_unstable();
            quad.copy_from_slice(&pick);
        }
        equations.push(det_eq(a, beta, quad, tol)?);
    }
    let expected_count = equation_count(n);
    assert_eq!(equations.len() as u64, expected_count, "equation count identity");
    let passed = equations.iter().all(|e| e.pass);
    Ok(MinorReport { n, tol, equations, expected_count, passed })
}

/// The n = 4 system: three Hyper equations, one SignConsistency, one Det.
pub fn check_n4<T: Scalar>(a: &MinorCandidate<T>, tol: T) -> Result<MinorReport<T>> {
    if a.n() != 4 {
        return Err(Error::WrongArity { expected: 4, got: a.n() });
    }
    check_general(a, tol)
}

/// Builds Ã with ã_ii = A_i, ã_1j = √(A₁A_j − A_1j) and, for j,k ≥ 2,
/// ã_jk = sign(c_1jk)·√(A_jA_k − A_jk). Fails unless every condition holds.
pub fn reconstruct<T: Scalar>(a: &MinorCandidate<T>, tol: T) -> Result<SymmetricMatrix<T>> {
    let report = check_general(a, tol)?;
    if let Some(e) = report.failing().next() {
        return Err(Error::ConditionsFailed(format!("{} equation on {} has relative residual {:e}", e.kind.label(), e.indices, e.relative.as_f64())));
    }
    let n = a.n();
    let v = a.conditioned(SubsetMask::EMPTY)?;
    let mut m = SymmetricMatrix::zeros(n);
    for i in 1..=n {
        m.set(i - 1, i - 1, v.v(&[i]));
    }
    for j in 2..=n {
        m.set(0, j - 1, v.gap(1, j).0.max(T::zero()).sqrt());
        for k in j + 1..=n {
            let mag = v.gap(j, k).0.max(T::zero()).sqrt();
            let c = v.c(1, j, k).0;
            m.set(j - 1, k - 1, if c < T::zero() { -mag } else { mag });
        }
    }
    Ok(m)
}

#[derive(Clone, Debug, PartialEq)]
pub struct EntropicReport<T> {
    pub conditions: MinorReport<T>,
    pub matrix: Option<SymmetricMatrix<T>>,
    pub psd: bool,
    pub passed: bool,
}

/// A = e^g, the minor conditions, and PSD-ness of the reconstruction.
pub fn gauss_entropic_check<T: Scalar>(g: &SubsetVector<T>, tol: T) -> Result<EntropicReport<T>> {
    if let Some((s, _)) = g.iter().find(|(_, v)| !v.is_finite()) {
        return Err(Error::NonFinite(s));
    }
    let a = MinorCandidate::new(g.map(|_, &v| v.exp()))?;
    let conditions = check_general(&a, tol)?;
    if !conditions.passed {
        return Ok(EntropicReport { conditions, matrix: None, psd: false, passed: false });
    }
    let m = reconstruct(&a, tol)?;
    let psd = is_psd(&m.to_dense(), T::lit(PSD_TOL));
    Ok(EntropicReport { conditions, matrix: Some(m), psd, passed: psd })
}
