//! Covariance matrices, principal minors, entropy vectors and stacking.

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Scalar;
use crate::subsets::{SubsetMask, SubsetVector};

/// Default relative tolerance for [`is_psd`].
pub const PSD_TOL: f64 = 1e-10;

/// Real symmetric n×n matrix stored as its lower triangle.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricMatrix<T> {
    n: usize,
    packed: Vec<T>,
}

#[inline]
fn tri(i: usize, j: usize) -> usize {
    let (i, j) = if i >= j { (i, j) } else { (j, i) };
    i * (i + 1) / 2 + j
}

impl<T: Scalar> SymmetricMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        SymmetricMatrix { n, packed: vec![T::zero(); n * (n + 1) / 2] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, T::one());
        }
        m
    }

    /// Builds from a function evaluated on the lower triangle (i ≥ j).
    pub fn from_lower(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..=i {
                m.packed[tri(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Accepts a square dense matrix whose asymmetry is within
    /// `tol · max|a_ij|`; the lower triangle is kept.
    pub fn from_dense(m: &Matrix<T>, tol: T) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch(format!("{}x{} matrix is not square", m.rows(), m.cols())));
        }
        let bound = tol * m.max_abs().max(T::one());
        for i in 0..m.rows() {
            for j in 0..i {
                if (m[(i, j)] - m[(j, i)]).abs() > bound {
                    return Err(Error::NotSymmetric(i + 1, j + 1));
                }
            }
        }
        Ok(Self::from_lower(m.rows(), |i, j| m[(i, j)]))
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.packed[tri(i, j)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.packed[tri(i, j)] = v;
    }

    pub fn to_dense(&self) -> Matrix<T> {
        Matrix::from_fn(self.n, self.n, |i, j| self.get(i, j))
    }

    pub fn principal_submatrix(&self, s: SubsetMask) -> Matrix<T> {
        let idx = s.indices();
        Matrix::from_fn(idx.len(), idx.len(), |i, j| self.get(idx[i], idx[j]))
    }

    /// D Ã D⁻¹ for a ±1 diagonal D (the sign gauge).
    pub fn sign_conjugate(&self, signs: &[bool]) -> Self {
        Self::from_lower(self.n, |i, j| if signs[i] == signs[j] { self.get(i, j) } else { -self.get(i, j) })
    }

    pub fn is_psd(&self, tol: T) -> bool {
        is_psd(&self.to_dense(), tol)
    }
}

/// Symmetric nT×nT covariance viewed as an n×n grid of T×T blocks.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockCovariance<T> {
    n: usize,
    t: usize,
    m: Matrix<T>,
}

impl<T: Scalar> BlockCovariance<T> {
    /// Wraps a dense matrix; it must be (numerically) symmetric and of size nT.
    pub fn new(n: usize, t: usize, m: Matrix<T>) -> Result<Self> {
        if t == 0 || n == 0 || m.rows() != n * t || m.cols() != n * t {
            return Err(Error::DimensionMismatch(format!("{}x{} matrix does not split into {n}x{n} blocks of size {t}", m.rows(), m.cols())));
        }
        let sym = SymmetricMatrix::from_dense(&m, T::lit(1e-12))?;
        Ok(BlockCovariance { n, t, m: sym.to_dense() })
    }

    pub fn from_scalar(a: &SymmetricMatrix<T>) -> Self {
        BlockCovariance { n: a.n(), t: 1, m: a.to_dense() }
    }

    pub fn identity(n: usize, t: usize) -> Self {
        BlockCovariance { n, t, m: Matrix::identity(n * t) }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn t(&self) -> usize {
        self.t
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.m
    }

    /// Block R_ij (0-based variable indices).
    pub fn block(&self, i: usize, j: usize) -> Matrix<T> {
        self.m.block(i * self.t, j * self.t, self.t, self.t)
    }

    /// Row/column indices of the blocks selected by `s`.
    pub fn block_indices(&self, s: SubsetMask) -> Vec<usize> {
        s.indices().into_iter().flat_map(|v| (v * self.t)..((v + 1) * self.t)).collect()
    }

    pub fn principal_submatrix(&self, s: SubsetMask) -> Matrix<T> {
        self.m.principal(&self.block_indices(s))
    }

    pub fn is_psd(&self, tol: T) -> bool {
        is_psd(&self.m, tol)
    }
}

/// Anything whose principal (block) minors can be taken.
pub trait MinorSource<T: Scalar> {
    fn ground_size(&self) -> usize;
    fn principal_matrix(&self, s: SubsetMask) -> Matrix<T>;
}

impl<T: Scalar> MinorSource<T> for SymmetricMatrix<T> {
    fn ground_size(&self) -> usize {
        self.n
    }
    fn principal_matrix(&self, s: SubsetMask) -> Matrix<T> {
        self.principal_submatrix(s)
    }
}

impl<T: Scalar> MinorSource<T> for BlockCovariance<T> {
    fn ground_size(&self) -> usize {
        self.n
    }
    fn principal_matrix(&self, s: SubsetMask) -> Matrix<T> {
        self.principal_submatrix(s)
    }
}

/// Determinant of the principal (block) submatrix selected by `s`; 1 for ∅.
pub fn principal_minor<T: Scalar, M: MinorSource<T> + ?Sized>(m: &M, s: SubsetMask) -> T {
    if s.is_empty() {
        return T::one();
    }
    m.principal_matrix(s).sym_det()
}

pub fn all_principal_minors<T: Scalar, M: MinorSource<T> + ?Sized>(m: &M) -> Result<SubsetVector<T>> {
    SubsetVector::from_fn(m.ground_size(), |s| principal_minor(m, s))
}

/// Principal minors of a general (possibly non-symmetric) square matrix.
pub fn all_principal_minors_general<T: Scalar>(a: &Matrix<T>) -> Result<SubsetVector<T>> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch("principal minors need a square matrix".into()));
    }
    SubsetVector::from_fn(a.rows(), |s| a.principal(&s.indices()).det())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EntropyKind {
    /// g_s = (1/T) ln det R_s
    G,
    /// h̲_s = g_s/2 + (|s|/2) ln 2πe
    HNormalized,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EntropyVector<T> {
    pub kind: EntropyKind,
    pub data: SubsetVector<T>,
}

impl<T: Scalar> EntropyVector<T> {
    pub fn g(data: SubsetVector<T>) -> Self {
        EntropyVector { kind: EntropyKind::G, data }
    }

    pub fn n(&self) -> usize {
        self.data.n()
    }

    /// Errors on the first non-finite entry (−∞ marks a singular minor).
    pub fn require_finite(&self) -> Result<()> {
        match self.data.iter().find(|(_, v)| !v.is_finite()) {
            Some((s, _)) => Err(Error::NonFinite(s)),
            None => Ok(()),
        }
    }

    /// Entries divided by ln(base), for reporting in another log base.
    pub fn in_log_base(&self, base: T) -> SubsetVector<T> {
        let l = base.ln();
        self.data.map(|_, &v| v / l)
    }
}

/// g_s = (1/T)·ln det R_s for every nonempty s.
pub fn entropy_g<T: Scalar>(r: &BlockCovariance<T>) -> Result<EntropyVector<T>> {
    let t = T::of_usize(r.t());
    let mut out = SubsetVector::filled(r.n(), T::zero())?;
    for (s, m) in all_principal_minors(r)?.iter() {
        if !(*m > T::zero()) || !m.is_finite() {
            return Err(Error::NonPositiveMinor(s));
        }
        out.set(s, m.ln() / t);
    }
    Ok(EntropyVector::g(out))
}

/// g from a minor table, mapping zero minors to −∞ and rejecting negative ones.
pub fn g_from_minors<T: Scalar>(m: &SubsetVector<T>, t: usize) -> Result<EntropyVector<T>> {
    let tt = T::of_usize(t);
    let mut out = SubsetVector::filled(m.n(), T::zero())?;
    for (s, &v) in m.iter() {
        if v < T::zero() || v.is_nan() {
            return Err(Error::NonPositiveMinor(s));
        }
        out.set(s, if v == T::zero() { T::neg_infinity() } else { v.ln() / tt });
    }
    Ok(EntropyVector::g(out))
}

fn half_log_2pie<T: Scalar>() -> T {
    T::lit(0.5) * (T::lit(2.0) * T::PI() * T::E()).ln()
}

pub fn g_to_h<T: Scalar>(g: &EntropyVector<T>) -> Result<EntropyVector<T>> {
    if g.kind != EntropyKind::G {
        return Err(Error::Parse("g_to_h expects a g-vector".into()));
    }
    let c = half_log_2pie::<T>();
    Ok(EntropyVector { kind: EntropyKind::HNormalized, data: g.data.map(|s, &v| v * T::lit(0.5) + T::of_usize(s.cardinality()) * c) })
}

pub fn h_to_g<T: Scalar>(h: &EntropyVector<T>) -> Result<EntropyVector<T>> {
    if h.kind != EntropyKind::HNormalized {
        return Err(Error::Parse("h_to_g expects a normalized h-vector".into()));
    }
    let c = half_log_2pie::<T>();
    Ok(EntropyVector::g(h.data.map(|s, &v| (v - T::of_usize(s.cardinality()) * c) * T::lit(2.0))))
}

/// Smallest eigenvalue ≥ −tol·(1 + largest |eigenvalue|).
pub fn is_psd<T: Scalar>(m: &Matrix<T>, tol: T) -> bool {
    let vals = m.sym_eigenvalues();
    if vals.is_empty() {
        return true;
    }
    let big = vals.iter().fold(T::zero(), |a, v| a.max(v.abs()));
    vals[0] >= -tol * (T::one() + big)
}

/// Block-diagonal direct sum: variable i of the result concatenates the
/// i-th variables of every copy, in order.
pub fn stack<T: Scalar>(parts: &[(&BlockCovariance<T>, usize)]) -> Result<BlockCovariance<T>> {
    let first = parts.first().ok_or_else(|| Error::DimensionMismatch("nothing to stack".into()))?;
    let n = first.0.n();
    if let Some((p, _)) = parts.iter().find(|(p, _)| p.n() != n) {
        return Err(Error::DimensionMismatch(format!("cannot stack n={} with n={n}", p.n())));
    }
    if parts.iter().any(|&(_, k)| k == 0) {
        return Err(Error::DimensionMismatch("multiplicities must be at least 1".into()));
    }
    let total: usize = parts.iter().map(|(p, k)| p.t() * k).sum();
    let mut m = Matrix::zeros(n * total, n * total);
    let mut offset = 0;
    for &(p, copies) in parts {
        for _ in 0..copies {
            for i in 0..n {
                for j in 0..n {
                    m.set_block(i * total + offset, j * total + offset, &p.block(i, j));
                }
            }
            offset += p.t();
        }
    }
    Ok(BlockCovariance { n, t: total, m })
}
