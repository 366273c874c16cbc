//! The 2×2×2 hyperdeterminant and the det-F representation of the
//! multilinear form whose coefficients are principal minors.

use crate::error::{Error, Result};
use crate::gaussian_core::{all_principal_minors, all_principal_minors_general, SymmetricMatrix};
use crate::linalg::Matrix;
use crate::scalar::Scalar;
use crate::subsets::{SubsetMask, SubsetVector};

/// Value of a polynomial identity together with its largest monomial
/// magnitude, so that `value / scale` is a relative residual.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Residual<T> {
    pub value: T,
    pub scale: T,
}

impl<T: Scalar> Residual<T> {
    pub fn new(value: T, scale: T) -> Self {
        Residual { value, scale }
    }

    /// |value| / scale; scale 0 means the identity holds trivially.
    pub fn relative(&self) -> T {
        if self.scale == T::zero() {
            self.value.abs()
        } else {
            self.value.abs() / self.scale
        }
    }

    pub fn within(&self, tol: T) -> bool {
        self.value.abs() <= tol * self.scale
    }
}

/// Coefficients a_{i1…in}; the bit of axis j (0-based) in the index is i_{j+1}.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor2n<T> {
    n: usize,
    coeffs: Vec<T>,
}

impl<T: Scalar> Tensor2n<T> {
    pub fn from_coeffs(n: usize, coeffs: Vec<T>) -> Result<Self> {
        if n > 16 || coeffs.len() != 1usize << n {
            return Err(Error::DimensionMismatch(format!("{} coefficients for {n} axes", coeffs.len())));
        }
        Ok(Tensor2n { n, coeffs })
    }

    pub fn from_fn(n: usize, f: impl FnMut(u32) -> T) -> Result<Self> {
        Self::from_coeffs(n, (0u32..(1u32 << n)).map(f).collect())
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    #[inline]
    pub fn get(&self, index: u32) -> T {
        self.coeffs[index as usize]
    }

    /// a at the multi-index (i1,…,in).
    pub fn at(&self, idx: &[u8]) -> T {
        let bits = idx.iter().enumerate().fold(0u32, |b, (j, &v)| b | ((v as u32 & 1) << j));
        self.get(bits)
    }

    fn arity(&self, n: usize) -> Result<()> {
        if self.n == n {
            Ok(())
        } else {
            Err(Error::WrongArity { expected: n, got: self.n })
        }
    }

    /// Restriction to three axes with every other axis fixed at the bit it
    /// has in `fixed`.
    pub fn sub_tensor3(&self, axes: [usize; 3], fixed: u32) -> Result<Tensor2n<T>> {
        if axes.iter().any(|&a| a >= self.n) {
            return Err(Error::DimensionMismatch("axis out of range".into()));
        }
        let axis_bits = axes.iter().fold(0u32, |b, &a| b | (1 << a));
        let base = fixed & !axis_bits;
        Tensor2n::from_fn(3, |k| {
            let mut idx = base;
            for (p, &a) in axes.iter().enumerate() {
                if k & (1 << p) != 0 {
                    idx |= 1 << a;
                }
            }
            self.get(idx)
        })
    }
}

/// Tensor of principal minors of a symmetric matrix, m at the zero index = 1.
pub fn minor_tensor<T: Scalar>(a: &SymmetricMatrix<T>) -> Result<Tensor2n<T>> {
    minor_tensor_from_vector(&all_principal_minors(a)?)
}

/// Principal-minor tensor of a general square matrix.
pub fn minor_tensor_general<T: Scalar>(a: &Matrix<T>) -> Result<Tensor2n<T>> {
    minor_tensor_from_vector(&all_principal_minors_general(a)?)
}

pub fn minor_tensor_from_vector<T: Scalar>(m: &SubsetVector<T>) -> Result<Tensor2n<T>> {
    Tensor2n::from_fn(m.n(), |b| if b == 0 { T::one() } else { m[SubsetMask(b)] })
}

fn abc<T: Scalar>(t: &Tensor2n<T>) -> impl Fn(u8, u8, u8) -> T + '_ {
    move |i, j, k| t.get(i as u32 | (j as u32) << 1 | (k as u32) << 2)
}

fn cayley_monomials<T: Scalar>(t: &Tensor2n<T>) -> [T; 12] {
    let a = abc(t);
    let two = T::lit(2.0);
    let four = T::lit(4.0);
    [
        -(a(0, 0, 0) * a(0, 0, 0) * a(1, 1, 1) * a(1, 1, 1)),
        -(a(1, 0, 0) * a(1, 0, 0) * a(0, 1, 1) * a(0, 1, 1)),
        -(a(0, 1, 0) * a(0, 1, 0) * a(1, 0, 1) * a(1, 0, 1)),
        -(a(0, 0, 1) * a(0, 0, 1) * a(1, 1, 0) * a(1, 1, 0)),
        -(four * a(0, 0, 0) * a(1, 1, 0) * a(1, 0, 1) * a(0, 1, 1)),
        -(four * a(1, 0, 0) * a(0, 1, 0) * a(0, 0, 1) * a(1, 1, 1)),
        two * a(0, 0, 0) * a(1, 0, 0) * a(0, 1, 1) * a(1, 1, 1),
        two * a(0, 0, 0) * a(0, 1, 0) * a(1, 0, 1) * a(1, 1, 1),
        two * a(0, 0, 0) * a(0, 0, 1) * a(1, 1, 0) * a(1, 1, 1),
        two * a(1, 0, 0) * a(0, 1, 0) * a(1, 0, 1) * a(0, 1, 1),
        two * a(1, 0, 0) * a(0, 0, 1) * a(1, 1, 0) * a(0, 1, 1),
        two * a(0, 1, 0) * a(0, 0, 1) * a(1, 1, 0) * a(1, 0, 1),
    ]
}

/// The twelve-monomial Cayley expansion, with the overall sign opposite to the textbook form.
pub fn cayley222<T: Scalar>(t: &Tensor2n<T>) -> Result<T> {
    t.arity(3)?;
    Ok(cayley_monomials(t).iter().copied().sum())
}

/// Cayley value with the largest monomial magnitude as its scale.
pub fn cayley222_residual<T: Scalar>(t: &Tensor2n<T>) -> Result<Residual<T>> {
    t.arity(3)?;
    let m = cayley_monomials(t);
    let scale = m.iter().fold(T::zero(), |s, v| s.max(v.abs()));
    Ok(Residual::new(m.iter().copied().sum(), scale))
}

/// det(B₀JB₁ᵗ − B₁JB₀ᵗ) with B₀ = [[a000,a100],[a001,a101]],
/// B₁ = [[a010,a110],[a011,a111]], J = [[0,−1],[1,0]].
pub fn det_formula_222<T: Scalar>(t: &Tensor2n<T>) -> Result<T> {
    t.arity(3)?;
    let a = abc(t);
    let b0 = Matrix::from_rows(&[vec![a(0, 0, 0), a(1, 0, 0)], vec![a(0, 0, 1), a(1, 0, 1)]]).unwrap();
    let b1 = Matrix::from_rows(&[vec![a(0, 1, 0), a(1, 1, 0)], vec![a(0, 1, 1), a(1, 1, 1)]]).unwrap();
    let j = Matrix::from_rows(&[vec![T::zero(), -T::one()], vec![T::one(), T::zero()]]).unwrap();
    let m = b0.mul(&j).mul(&b1.transpose()).sub(&b1.mul(&j).mul(&b0.transpose()));
    Ok(m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)])
}

/// The expanded 2×2 form from the proof:
/// det [[2(a100a010 − a000a110), a100a011 + a101a010 − a000a111 − a001a110], [·, 2(a101a011 − a001a111)]].
pub fn det_formula_222_expanded<T: Scalar>(t: &Tensor2n<T>) -> Result<T> {
    t.arity(3)?;
    let a = abc(t);
    let two = T::lit(2.0);
    let p = two * (a(1, 0, 0) * a(0, 1, 0) - a(0, 0, 0) * a(1, 1, 0));
    let q = a(1, 0, 0) * a(0, 1, 1) + a(1, 0, 1) * a(0, 1, 0) - a(0, 0, 0) * a(1, 1, 1) - a(0, 0, 1) * a(1, 1, 0);
    let r = two * (a(1, 0, 1) * a(0, 1, 1) - a(0, 0, 1) * a(1, 1, 1));
    Ok(p * r - q * q)
}

/// F = diag(x_{·,0}) + diag(x_{·,1})·Ã.
#[allow(non_snake_case)]
pub fn build_F<T: Scalar>(a: &Matrix<T>, x: &[(T, T)]) -> Result<Matrix<T>> {
    let n = a.rows();
    if !a.is_square() || x.len() != n {
        return Err(Error::DimensionMismatch(format!("{} pairs for a {}x{} matrix", x.len(), n, a.cols())));
    }
    Ok(Matrix::from_fn(n, n, |i, j| {
        let d = if i == j { x[i].0 } else { T::zero() };
        d + x[i].1 * a[(i, j)]
    }))
}

fn multilinear_terms<'a, T: Scalar>(t: &'a Tensor2n<T>, x: &[(T, T)]) -> Result<impl Iterator<Item = T> + 'a> {
    if x.len() != t.n() {
        return Err(Error::DimensionMismatch(format!("{} pairs for {} axes", x.len(), t.n())));
    }
    let x = x.to_vec();
    Ok(t.coeffs.iter().enumerate().map(move |(b, &c)| x.iter().enumerate().fold(c, |acc, (j, p)| acc * if b & (1 << j) != 0 { p.1 } else { p.0 })))
}

/// Σ a_{i1…in} x_{1,i1}⋯x_{n,in} by direct summation.
pub fn multilinear_eval<T: Scalar>(t: &Tensor2n<T>, x: &[(T, T)]) -> Result<T> {
    Ok(multilinear_terms(t, x)?.sum())
}

/// Multilinear value with the largest term magnitude as scale.
pub fn multilinear_eval_scaled<T: Scalar>(t: &Tensor2n<T>, x: &[(T, T)]) -> Result<Residual<T>> {
    let mut value = T::zero();
    let mut scale = T::zero();
    for term in multilinear_terms(t, x)? {
        value += term;
        scale = scale.max(term.abs());
    }
    Ok(Residual::new(value, scale))
}

#[derive(Clone, Debug, PartialEq)]
pub struct RankCertificate<T> {
    pub x: Vec<(T, T)>,
    pub rank: usize,
    pub f: Matrix<T>,
}

/// Singular-value threshold for numeric rank.
pub const RANK_TOL: f64 = 1e-9;

/// Assignment that drops rank(F) to at most n − 2:
/// x̄₁ = ((ã₁₂ã₁₃ − ã₁₁ã₂₃)/ã₂₃, 1), x̄₂ = ((ã₂₃ã₁₂ − ã₁₃ã₂₂)/ã₁₃, 1),
/// x̄₃ = ((ã₁₃ã₂₃ − ã₁₂ã₃₃)/ã₁₂, 1), x̄_j = (1, 0) for j > 3.
pub fn rank_certificate<T: Scalar>(a: &SymmetricMatrix<T>) -> Result<RankCertificate<T>> {
    let n = a.n();
    if n < 3 {
        return Err(Error::DimensionMismatch("rank certificate needs n >= 3".into()));
    }
    let g = |i: usize, j: usize| a.get(i - 1, j - 1);
    for (i, j) in [(2, 3), (1, 3), (1, 2)] {
        if g(i, j) == T::zero() {
            return Err(Error::ZeroPivot(i, j));
        }
    }
    let mut x = vec![(T::one(), T::zero()); n];
    x[0] = ((g(1, 2) * g(1, 3) - g(1, 1) * g(2, 3)) / g(2, 3), T::one());
    x[1] = ((g(2, 3) * g(1, 2) - g(1, 3) * g(2, 2)) / g(1, 3), T::one());
    x[2] = ((g(1, 3) * g(2, 3) - g(1, 2) * g(3, 3)) / g(1, 2), T::one());
    let f = build_F(&a.to_dense(), &x)?;
    let rank = f.numeric_rank(T::lit(RANK_TOL));
    Ok(RankCertificate { x, rank, f })
}

fn without(n: usize, skip: usize) -> Vec<usize> {
    (0..n).filter(|&i| i != skip).collect()
}

fn hadamard_bound<T: Scalar>(m: &Matrix<T>) -> T {
    (0..m.rows()).map(|i| m.row(i).iter().map(|&v| v * v).sum::<T>().sqrt()).fold(T::one(), |a, b| a * b)
}

/// (∂det F/∂x_{j,0}, ∂det F/∂x_{j,1}) for each j, from
/// ∂/∂x_{j,0} = det F_{αj,αj} and ∂/∂x_{j,1} = Σ_k ã_{jk}(−1)^{j+k} det F_{αj,αk},
/// where α_j drops index j. Each entry carries a Hadamard-bound scale.
#[allow(non_snake_case)]
pub fn partials_detF<T: Scalar>(a: &Matrix<T>, x: &[(T, T)]) -> Result<Vec<(Residual<T>, Residual<T>)>> {
    let f = build_F(a, x)?;
    let n = f.rows();
    let mut out = Vec::with_capacity(n);
    for j in 0..n {
        let rows = without(n, j);
        let own = f.select(&rows, &rows);
        let d0 = Residual::new(own.det(), hadamard_bound(&own));
        let mut v1 = T::zero();
        let mut s1 = T::zero();
        for k in 0..n {
            let ajk = a[(j, k)];
            if ajk == T::zero() {
                continue;
            }
            let sub = f.select(&rows, &without(n, k));
            let sign = if (j + k) % 2 == 0 { T::one() } else { -T::one() };
            v1 += ajk * sign * sub.det();
            s1 += ajk.abs() * hadamard_bound(&sub);
        }
        out.push((d0, Residual::new(v1, s1)));
    }
    Ok(out)
}

/// (m₁₂₃ − m₃m₁₂ − m₂m₁₃ − m₁m₂₃ + 2m₁m₂m₃)² − 4(m₁m₂−m₁₂)(m₁m₃−m₁₃)(m₂m₃−m₂₃),
/// with the largest expanded monomial as scale. Equals −cayley222 of the
/// minor tensor.
pub fn principal_minor_hyperdet_residual<T: Scalar>(m: &SubsetVector<T>) -> Result<Residual<T>> {
    if m.n() != 3 {
        return Err(Error::WrongArity { expected: 3, got: m.n() });
    }
    let t = minor_tensor_from_vector(m)?;
    let g = |e: &[usize]| m[SubsetMask::of(e)];
    let (m1, m2, m3) = (g(&[1]), g(&[2]), g(&[3]));
    let (m12, m13, m23, m123) = (g(&[1, 2]), g(&[1, 3]), g(&[2, 3]), g(&[1, 2, 3]));
    let two = T::lit(2.0);
    let c = m123 - m3 * m12 - m2 * m13 - m1 * m23 + two * m1 * m2 * m3;
    let value = c * c - T::lit(4.0) * (m1 * m2 - m12) * (m1 * m3 - m13) * (m2 * m3 - m23);
    Ok(Residual::new(value, cayley222_residual(&t)?.scale))
}
