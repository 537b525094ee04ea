//! Small dense complex linear algebra: row-major vectorization, Kronecker
//! products and an LU solve with a condition estimate.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Condition numbers above this are rejected by [`solve`].
pub const MAX_CONDITION: f64 = 1e12;

/// Row-major vectorization: `σ(i, j) ↦ y[i·n + j]`.
pub fn vectorize(m: &CMatrix) -> CVector {
    let (rows, cols) = m.shape();
    CVector::from_fn(rows * cols, |k, _| m[(k / cols, k % cols)])
}

/// Inverse of [`vectorize`] for a square `n × n` matrix.
pub fn devectorize(v: &CVector, n: usize) -> CMatrix {
    assert_eq!(v.len(), n * n, "vector length does not match {n}x{n}");
    CMatrix::from_fn(n, n, |i, j| v[i * n + j])
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    CMatrix::from_fn(ar * br, ac * bc, |i, j| a[(i / br, j / bc)] * b[(i % br, j % bc)])
}

/// Superoperator of `σ ↦ X σ` under row-major vectorization.
pub fn left_mul(x: &CMatrix) -> CMatrix {
    kron(x, &CMatrix::identity(x.ncols(), x.ncols()))
}

/// Superoperator of `σ ↦ σ X` under row-major vectorization.
pub fn right_mul(x: &CMatrix) -> CMatrix {
    kron(&CMatrix::identity(x.nrows(), x.nrows()), &x.transpose())
}

/// Induced 1-norm (maximum column sum).
pub fn norm1(m: &CMatrix) -> f64 {
    m.column_iter()
        .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub fn max_abs(v: &CVector) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest absolute element of the anti-Hermitian part `(m - m†)/2`.
pub fn anti_hermitian_defect(m: &CMatrix) -> f64 {
    ((m - m.adjoint()) * Complex64::new(0.5, 0.0))
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

/// An LU factorization together with its 1-norm condition number.
pub struct Factorized {
    lu: nalgebra::LU<Complex64, nalgebra::Dyn, nalgebra::Dyn>,
    pub condition: f64,
}

impl Factorized {
    pub fn solve(&self, rhs: &CVector) -> CVector {
        self.lu
            .solve(rhs)
            .expect("factorization was checked to be invertible")
    }
}

/// LU-factorizes `m` with partial pivoting and estimates `κ₁(m)` from the
/// explicit inverse. `context` is attached to the error message.
pub fn factorize(m: &CMatrix, context: &str) -> Result<Factorized> {
    let lu = m.clone().lu();
    let inverse = lu.try_inverse().ok_or_else(|| Error::Solver {
        reason: "matrix is singular".into(),
        condition: f64::INFINITY,
        context: context.to_string(),
    })?;
    let condition = norm1(m) * norm1(&inverse);
    if !condition.is_finite() || condition > MAX_CONDITION {
        return Err(Error::Solver {
            reason: "matrix is too ill-conditioned".into(),
            condition,
            context: context.to_string(),
        });
    }
    Ok(Factorized { lu, condition })
}

/// Solves `m x = rhs`; see [`factorize`].
pub fn solve(m: &CMatrix, rhs: &CVector, context: &str) -> Result<CVector> {
    Ok(factorize(m, context)?.solve(rhs))
}
