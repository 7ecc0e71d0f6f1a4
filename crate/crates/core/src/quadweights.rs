//! Convolution quadrature weights for the Caputo derivative of order alpha.
//!
//! With generating function (1 - xi)^alpha / tau^alpha the weights satisfy
//! omega_0 = tau^(-alpha) and omega_j = (1 - (alpha + 1) / j) omega_{j-1}.
//! The scaled weights omega_tilde_j = tau^alpha omega_j do not depend on tau.

use crate::error::{FracError, Result};
use crate::scalar::Real;
use crate::special::{ln_gamma, rgamma};
use nalgebra::DVector;

/// CQ weights for a fixed order and step size.
#[derive(Debug, Clone)]
pub struct CqWeights<T> {
    alpha: T,
    tau: T,
    /// omega_tilde_j, j = 0..=n_max
    scaled: Vec<T>,
    /// a_n = sum_{j<=n} omega_tilde_j
    partial: Vec<T>,
}

impl<T: Real> CqWeights<T> {
    /// Weights omega_0..=omega_{n_max}.
    pub fn new(alpha: T, tau: T, n_max: usize) -> Result<Self> {
        if !(alpha > T::zero() && alpha <= T::one()) {
            return Err(FracError::domain(format!("alpha must lie in (0, 1], got {alpha}")));
        }
        if !(tau > T::zero()) || !tau.is_finite() {
            return Err(FracError::domain(format!("tau must be positive, got {tau}")));
        }
        let mut scaled = Vec::with_capacity(n_max + 1);
        let mut partial = Vec::with_capacity(n_max + 1);
        let mut w = T::one();
        let mut a = T::one();
        scaled.push(w);
        partial.push(a);
        for j in 1..=n_max {
            w *= T::one() - (alpha + T::one()) / T::of_usize(j);
            a += w;
            scaled.push(w);
            partial.push(a);
        }
        Ok(CqWeights { alpha, tau, scaled, partial })
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn tau(&self) -> T {
        self.tau
    }

    /// Largest index stored.
    pub fn n_max(&self) -> usize {
        self.scaled.len() - 1
    }

    /// tau^(-alpha).
    pub fn leading(&self) -> T {
        self.tau.powf(-self.alpha)
    }

    /// omega_j.
    pub fn omega(&self, j: usize) -> T {
        self.scaled[j] * self.leading()
    }

    /// omega_tilde_j.
    pub fn scaled(&self, j: usize) -> T {
        self.scaled[j]
    }

    pub fn scaled_all(&self) -> &[T] {
        &self.scaled
    }

    /// a_n = sum_{j=0}^n omega_tilde_j.
    pub fn partial_sum(&self, n: usize) -> T {
        self.partial[n]
    }

    /// omega_0 + ... + omega_n (unscaled).
    pub fn partial_sum_unscaled(&self, n: usize) -> T {
        self.partial[n] * self.leading()
    }

    /// sum_{j=0}^n omega_j U^{n-j} for a history U^0..U^n.
    pub fn apply_cq(&self, history: &[DVector<T>]) -> Result<DVector<T>> {
        let Some(first) = history.first() else {
            return Err(FracError::domain("history must contain at least one state"));
        };
        let n = history.len() - 1;
        if n > self.n_max() {
            return Err(FracError::DimensionMismatch { expected: self.n_max() + 1, found: history.len() });
        }
        let dim = first.len();
        let mut out = DVector::zeros(dim);
        for (j, u) in history.iter().rev().enumerate() {
            if u.len() != dim {
                return Err(FracError::DimensionMismatch { expected: dim, found: u.len() });
            }
            out.axpy(self.scaled[j], u, T::one());
        }
        Ok(out * self.leading())
    }
}

/// Coefficients of (1 - xi)^(-alpha), the convolution inverse of omega_tilde.
#[derive(Debug, Clone)]
pub struct CnSequence<T> {
    pub alpha: T,
    pub c: Vec<T>,
}

/// c_0..=c_{n_max} from c_n = sum_{j<n} (-omega_tilde_{n-j}) c_j.
pub fn c_sequence<T: Real>(alpha: T, n_max: usize) -> Result<CnSequence<T>> {
    if !(alpha > T::zero() && alpha < T::one()) {
        return Err(FracError::domain(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    let w = CqWeights::new(alpha, T::one(), n_max)?;
    let mut c = Vec::with_capacity(n_max + 1);
    c.push(T::one());
    for m in 1..=n_max {
        let mut s = T::zero();
        for (j, &cj) in c.iter().enumerate() {
            s -= w.scaled[m - j] * cj;
        }
        c.push(s);
    }
    Ok(CnSequence { alpha, c })
}

/// omega_tilde_j = (-1)^j binom(alpha, j) = Gamma(j - alpha) / (Gamma(-alpha) j!),
/// from log-gamma. Independent of the recursion in [`CqWeights::new`].
pub fn scaled_weight_closed_form<T: Real>(alpha: T, j: usize) -> T {
    if j == 0 {
        return T::one();
    }
    if alpha == T::one() {
        return if j == 1 { -T::one() } else { T::zero() };
    }
    let jt = T::of_usize(j);
    let (lg_num, s_num) = ln_gamma(jt - alpha);
    let (lg_den, s_den) = ln_gamma(-alpha);
    let (lg_fact, _) = ln_gamma(jt + T::one());
    s_num * s_den * (lg_num - lg_den - lg_fact).exp()
}

/// c_n = Gamma(n + alpha) / (Gamma(alpha) n!), the coefficients of (1 - xi)^(-alpha).
pub fn inverse_coefficient<T: Real>(alpha: T, n: usize) -> T {
    if n == 0 {
        return T::one();
    }
    let nt = T::of_usize(n);
    let (a, _) = ln_gamma(nt + alpha);
    let (b, _) = ln_gamma(alpha);
    let (c, _) = ln_gamma(nt + T::one());
    (a - b - c).exp()
}

/// Leading behaviour c_n ~ n^(alpha-1) / Gamma(alpha).
pub fn inverse_coefficient_asymptotic<T: Real>(alpha: T, n: usize) -> T {
    T::of_usize(n).powf(alpha - T::one()) * rgamma(alpha)
}
