use crate::error::{FracError, Result};
use crate::scalar::Real;
use nalgebra::{DMatrix, DVector};

/// Symmetric tridiagonal matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiag<T> {
    pub diag: Vec<T>,
    /// off[i] couples rows i and i + 1.
    pub off: Vec<T>,
}

impl<T: Real> SymTridiag<T> {
    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn mul_vec(&self, x: &DVector<T>) -> DVector<T> {
        let n = self.dim();
        DVector::from_fn(n, |i, _| {
            let mut v = self.diag[i] * x[i];
            if i > 0 {
                v += self.off[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                v += self.off[i] * x[i + 1];
            }
            v
        })
    }

    /// x^T A y.
    pub fn inner(&self, x: &DVector<T>, y: &DVector<T>) -> T {
        x.dot(&self.mul_vec(y))
    }

    pub fn to_dense(&self) -> DMatrix<T> {
        let n = self.dim();
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = self.diag[i];
            if i + 1 < n {
                m[(i, i + 1)] = self.off[i];
                m[(i + 1, i)] = self.off[i];
            }
        }
        m
    }

    /// Thomas algorithm.
    pub fn solve(&self, rhs: &DVector<T>) -> Result<DVector<T>> {
        let n = self.dim();
        if rhs.len() != n {
            return Err(FracError::DimensionMismatch { expected: n, found: rhs.len() });
        }
        let mut c = vec![T::zero(); n];
        let mut d = vec![T::zero(); n];
        let mut pivot = self.diag[0];
        for i in 0..n {
            if i > 0 {
                pivot = self.diag[i] - self.off[i - 1] * c[i - 1];
            }
            if pivot.abs() <= T::EPS * self.diag[i].abs() || pivot == T::zero() {
                return Err(FracError::SingularMatrix(format!("zero pivot in tridiagonal solve at row {i}")));
            }
            c[i] = if i + 1 < n { self.off[i] / pivot } else { T::zero() };
            d[i] = if i == 0 { rhs[0] / pivot } else { (rhs[i] - self.off[i - 1] * d[i - 1]) / pivot };
        }
        let mut x = DVector::zeros(n);
        x[n - 1] = d[n - 1];
        for i in (0..n - 1).rev() {
            x[i] = d[i] - c[i] * x[i + 1];
        }
        Ok(x)
    }

    /// Lower bidiagonal Cholesky factor: (diagonal, subdiagonal).
    pub fn cholesky(&self) -> Result<(Vec<T>, Vec<T>)> {
        let n = self.dim();
        let mut l = vec![T::zero(); n];
        let mut sub = vec![T::zero(); n.saturating_sub(1)];
        for i in 0..n {
            let mut p = self.diag[i];
            if i > 0 {
                sub[i - 1] = self.off[i - 1] / l[i - 1];
                p -= sub[i - 1] * sub[i - 1];
            }
            if !(p > T::zero()) {
                return Err(FracError::SingularMatrix(format!("matrix not positive definite at row {i}")));
            }
            l[i] = p.sqrt();
        }
        Ok((l, sub))
    }
}
