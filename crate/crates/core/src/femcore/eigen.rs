use super::tridiag::SymTridiag;
use crate::error::{FracError, Result};
use crate::scalar::Real;
use nalgebra::{DMatrix, DVector, SymmetricEigen};

/// Generalized eigenpairs K φ = λ M φ, ascending, with M-orthonormal modes.
#[derive(Debug, Clone)]
pub struct EigenDecomposition<T: Real> {
    pub lambdas: DVector<T>,
    /// Column k is φ_k.
    pub modes: DMatrix<T>,
}

/// Forward substitution with the bidiagonal factor, in place on each column.
fn lower_solve<T: Real>(l: &[T], sub: &[T], m: &mut DMatrix<T>) {
    for mut col in m.column_iter_mut() {
        col[0] /= l[0];
        for i in 1..l.len() {
            let v = col[i] - sub[i - 1] * col[i - 1];
            col[i] = v / l[i];
        }
    }
}

fn upper_solve<T: Real>(l: &[T], sub: &[T], m: &mut DMatrix<T>) {
    let n = l.len();
    for mut col in m.column_iter_mut() {
        col[n - 1] /= l[n - 1];
        for i in (0..n - 1).rev() {
            let v = col[i] - sub[i] * col[i + 1];
            col[i] = v / l[i];
        }
    }
}

/// The QR iteration occasionally returns a small group of pairs that are
/// mixed within their common invariant subspace (residuals ~1e-7 while the
/// basis stays orthonormal). A Rayleigh-Ritz step on the span of the
/// inaccurate vectors separates them.
fn polish<T: Real>(c: &DMatrix<T>, mut eig: SymmetricEigen<T, nalgebra::Dyn>) -> Result<SymmetricEigen<T, nalgebra::Dyn>> {
    let n = c.nrows();
    let scale = eig.eigenvalues.amax().max(T::EPS);
    let tol = T::EPS * T::of(1e3) * scale;
    for _ in 0..4 {
        let cv = c * &eig.eigenvectors;
        let bad: Vec<usize> = (0..n)
            .filter(|&k| (cv.column(k) - eig.eigenvectors.column(k) * eig.eigenvalues[k]).norm() > tol)
            .collect();
        if bad.is_empty() {
            break;
        }
        let v = eig.eigenvectors.select_columns(&bad);
        let proj = v.tr_mul(&cv.select_columns(&bad));
        let proj = (&proj + proj.transpose()) * T::of(0.5);
        let small = SymmetricEigen::try_new(proj, T::EPS, 0)
            .ok_or_else(|| FracError::Eigen("Rayleigh-Ritz refinement did not converge".into()))?;
        let rotated = &v * &small.eigenvectors;
        for (j, &k) in bad.iter().enumerate() {
            eig.eigenvectors.set_column(k, &rotated.column(j));
            eig.eigenvalues[k] = small.eigenvalues[j];
        }
    }
    Ok(eig)
}

pub fn eigendecompose<T: Real>(mass: &SymTridiag<T>, stiffness: &DMatrix<T>) -> Result<EigenDecomposition<T>> {
    let n = mass.dim();
    if stiffness.nrows() != n || stiffness.ncols() != n {
        return Err(FracError::DimensionMismatch { expected: n, found: stiffness.nrows() });
    }
    let (l, sub) = mass.cholesky()?;
    // C = L^{-1} K L^{-T}
    let mut y = stiffness.clone();
    lower_solve(&l, &sub, &mut y);
    let mut c = y.transpose();
    lower_solve(&l, &sub, &mut c);
    let c = (&c + c.transpose()) * T::of(0.5);
    let eig = SymmetricEigen::try_new(c.clone(), T::EPS, 0)
        .ok_or_else(|| FracError::Eigen("symmetric eigensolver did not converge".into()))?;
    let eig = polish(&c, eig)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].partial_cmp(&eig.eigenvalues[j]).expect("finite eigenvalues"));
    let lambdas = DVector::from_fn(n, |k, _| eig.eigenvalues[order[k]]);
    let mut modes = DMatrix::from_fn(n, n, |i, k| eig.eigenvectors[(i, order[k])]);
    upper_solve(&l, &sub, &mut modes);
    // deterministic sign: first nonzero... use the largest-magnitude entry positive
    for mut col in modes.column_iter_mut() {
        let imax = col.iamax();
        if col[imax] < T::zero() {
            col.neg_mut();
        }
    }

    let out = EigenDecomposition { lambdas, modes };
    out.check_residual(mass, stiffness, T::of(1e-8).max(T::EPS * T::of(1e3)))?;
    Ok(out)
}

impl<T: Real> EigenDecomposition<T> {
    pub fn dim(&self) -> usize {
        self.lambdas.len()
    }

    /// max_k ‖K φ_k - λ_k M φ_k‖ / ‖K φ_k‖.
    pub fn max_residual(&self, mass: &SymTridiag<T>, stiffness: &DMatrix<T>) -> T {
        let kphi = stiffness * &self.modes;
        let mut worst = T::zero();
        for k in 0..self.dim() {
            let phi = self.modes.column(k).into_owned();
            let r = kphi.column(k) - mass.mul_vec(&phi) * self.lambdas[k];
            worst = worst.max(r.norm() / kphi.column(k).norm());
        }
        worst
    }

    fn check_residual(&self, mass: &SymTridiag<T>, stiffness: &DMatrix<T>, tol: T) -> Result<()> {
        let r = self.max_residual(mass, stiffness);
        if r > tol {
            return Err(FracError::Eigen(format!("eigenpair residual {:.2e} exceeds {:.2e}", r.as_f64(), tol.as_f64())));
        }
        Ok(())
    }

    /// (w, φ_k)_M for all k.
    pub fn modal_coefficients(&self, mass: &SymTridiag<T>, w: &DVector<T>) -> Result<DVector<T>> {
        if w.len() != self.dim() {
            return Err(FracError::DimensionMismatch { expected: self.dim(), found: w.len() });
        }
        Ok(self.modes.tr_mul(&mass.mul_vec(w)))
    }

    /// Σ_k c_k φ_k.
    pub fn synthesize(&self, coeffs: &DVector<T>) -> DVector<T> {
        &self.modes * coeffs
    }

    /// (Σ_k λ_k^θ (w, φ_k)_M²)^{1/2}.
    pub fn interpolated_norm(&self, mass: &SymTridiag<T>, w: &DVector<T>, theta: T) -> Result<T> {
        if !(theta >= -T::one() && theta <= T::of(2.0)) {
            return Err(FracError::domain(format!("theta must lie in [-1, 2], got {theta}")));
        }
        let c = self.modal_coefficients(mass, w)?;
        let mut s = T::zero();
        for k in 0..self.dim() {
            s += self.lambdas[k].powf(theta) * c[k] * c[k];
        }
        Ok(s.sqrt())
    }
}
