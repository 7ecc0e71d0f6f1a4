//! Spectral solution operators of the semi-discrete linear problem and
//! fine-grid references for nonlinear runs.
//!
//! With discrete eigenpairs (λ_k, φ_k) and ε² folded into the eigenvalues:
//! E(t)v = Σ E_{α,1}(-ε²λ_k t^α) (v, φ_k)_M φ_k,
//! F(t)v = Σ t^(α-1) E_{α,α}(-ε²λ_k t^α) (v, φ_k)_M φ_k.

use crate::error::{FracError, Result};
use crate::femcore::{EigenDecomposition, FemSystem, Mesh1d, SymTridiag};
use crate::quadweights::CqWeights;
use crate::scalar::Real;
use crate::special::{mittag_leffler, ml_integral_primitive, MlParams};
use crate::stepper::{FracParams, ReactionTerm, Stepper, Trajectory};
use nalgebra::DVector;
use rayon::prelude::*;

#[derive(Debug, Clone, Copy)]
pub struct SpectralOperator<'a, T: Real> {
    pub eig: &'a EigenDecomposition<T>,
    pub mass: &'a SymTridiag<T>,
    pub eps2: T,
    pub alpha: T,
}

impl<'a, T: Real> SpectralOperator<'a, T> {
    pub fn new(eig: &'a EigenDecomposition<T>, mass: &'a SymTridiag<T>, eps2: T, alpha: T) -> Result<Self> {
        if !(alpha > T::zero() && alpha <= T::one()) {
            return Err(FracError::domain(format!("alpha must lie in (0, 1], got {alpha}")));
        }
        if !(eps2 > T::zero()) {
            return Err(FracError::domain(format!("eps2 must be positive, got {eps2}")));
        }
        if mass.dim() != eig.dim() {
            return Err(FracError::DimensionMismatch { expected: eig.dim(), found: mass.dim() });
        }
        Ok(SpectralOperator { eig, mass, eps2, alpha })
    }

    /// Σ_k m(ε²λ_k) (v, φ_k)_M φ_k.
    fn modal<F>(&self, v: &DVector<T>, multiplier: F) -> Result<DVector<T>>
    where
        F: Fn(T) -> Result<T> + Sync,
    {
        let c = self.eig.modal_coefficients(self.mass, v)?;
        let lam: Vec<T> = self.eig.lambdas.iter().map(|&l| l * self.eps2).collect();
        let m: Vec<T> = lam.par_iter().map(|&l| multiplier(l)).collect::<Result<_>>()?;
        let scaled = DVector::from_fn(c.len(), |k, _| m[k] * c[k]);
        Ok(self.eig.synthesize(&scaled))
    }

    fn check_time(t: T) -> Result<()> {
        if !(t > T::zero()) || !t.is_finite() {
            return Err(FracError::domain(format!("time must be positive, got {t}")));
        }
        Ok(())
    }

    /// E(t) v.
    pub fn apply_e(&self, t: T, v: &DVector<T>) -> Result<DVector<T>> {
        Self::check_time(t)?;
        let p = MlParams::new(self.alpha, T::one())?;
        let ta = t.powf(self.alpha);
        self.modal(v, |l| mittag_leffler(p, -l * ta))
    }

    /// F(t) v.
    pub fn apply_f(&self, t: T, v: &DVector<T>) -> Result<DVector<T>> {
        Self::check_time(t)?;
        let p = MlParams::new(self.alpha, self.alpha)?;
        let ta = t.powf(self.alpha);
        let pre = t.powf(self.alpha - T::one());
        self.modal(v, |l| Ok(pre * mittag_leffler(p, -l * ta)?))
    }

    /// Solution of the homogeneous linear problem at t, u(0) = v.
    pub fn exact_linear(&self, t: T, v: &DVector<T>) -> Result<DVector<T>> {
        self.apply_e(t, v)
    }

    /// Solution at t of ∂^α u + ε²A u = f with u(0) = 0 and f constant in time:
    /// Σ t^α E_{α,α+1}(-ε²λ_k t^α) (f, φ_k)_M φ_k.
    pub fn exact_constant_source(&self, t: T, f: &DVector<T>) -> Result<DVector<T>> {
        Self::check_time(t)?;
        let p = MlParams::new(self.alpha, self.alpha)?;
        self.modal(f, |l| ml_integral_primitive(p, l, t))
    }
}

/// Values on the coarse nodes of a nested fine-mesh function.
pub fn inject<T: Real>(coarse: &Mesh1d<T>, fine: &Mesh1d<T>, u_fine: &DVector<T>) -> Result<DVector<T>> {
    let f = coarse.nesting_factor(fine)?;
    if u_fine.len() != fine.n_nodes() {
        return Err(FracError::DimensionMismatch { expected: fine.n_nodes(), found: u_fine.len() });
    }
    Ok(DVector::from_fn(coarse.n_nodes(), |i, _| u_fine[(i + 1) * f - 1]))
}

/// Nodal interpolation of a coarse P1 function onto a nested fine mesh (exact).
pub fn prolongate<T: Real>(coarse: &Mesh1d<T>, fine: &Mesh1d<T>, u_coarse: &DVector<T>) -> Result<DVector<T>> {
    coarse.nesting_factor(fine)?;
    if u_coarse.len() != coarse.n_nodes() {
        return Err(FracError::DimensionMismatch { expected: coarse.n_nodes(), found: u_coarse.len() });
    }
    let u = u_coarse.as_slice();
    Ok(DVector::from_fn(fine.n_nodes(), |i, _| coarse.evaluate(u, fine.node(i))))
}

/// A fine-resolution run used as the reference for nonlinear error measurements.
#[derive(Debug, Clone)]
pub struct RichardsonReference<T: Real> {
    pub mesh: Mesh1d<T>,
    pub trajectory: Trajectory<T>,
}

/// Runs the scheme on the fine system with step `tau_fine` up to `t_final`.
pub fn richardson_reference<T: Real>(
    system: &FemSystem<T>,
    params: FracParams<T>,
    reaction: &ReactionTerm<T>,
    v: DVector<T>,
    tau_fine: T,
) -> Result<RichardsonReference<T>> {
    let n_steps = steps_for(params.t_final, tau_fine)?;
    let w = CqWeights::new(params.alpha, tau_fine, n_steps)?;
    let trajectory = Stepper::new(system, params, &w, reaction)?.run(v, n_steps)?;
    Ok(RichardsonReference { mesh: system.mesh, trajectory })
}

/// Number of steps of size tau that land exactly on t.
pub fn steps_for<T: Real>(t: T, tau: T) -> Result<usize> {
    let n = (t / tau).round();
    if !(n >= T::one()) || (n * tau - t).abs() > T::of(1e-9) * t {
        return Err(FracError::NonNested(format!("t = {t} is not a multiple of tau = {tau}")));
    }
    n.to_usize().ok_or_else(|| FracError::domain("step count overflow"))
}

impl<T: Real> RichardsonReference<T> {
    /// The reference state at time t restricted to `coarse` (a mesh the
    /// reference mesh refines, possibly itself).
    pub fn sample(&self, coarse: &Mesh1d<T>, t: T) -> Result<DVector<T>> {
        let n = self
            .trajectory
            .index_of(t)
            .ok_or_else(|| FracError::NonNested(format!("t = {t} is not on the reference time grid")))?;
        inject(coarse, &self.mesh, &self.trajectory.states[n])
    }

    /// Checks the refinement ratios a comparison needs: τ_f ≤ τ_c / time_ratio
    /// and h_f ≤ h_c / space_ratio, with both grids nested.
    pub fn check_anchor(&self, coarse: &Mesh1d<T>, tau_coarse: T, time_ratio: usize, space_ratio: usize) -> Result<()> {
        let fs = coarse.nesting_factor(&self.mesh)?;
        let ft = (tau_coarse / self.trajectory.tau).round();
        let aligned = (ft * self.trajectory.tau - tau_coarse).abs() <= T::of(1e-9) * tau_coarse;
        let ft = ft.to_usize().unwrap_or(0);
        if !aligned || ft == 0 {
            return Err(FracError::NonNested(format!(
                "tau = {tau_coarse} is not a multiple of the reference step {}",
                self.trajectory.tau
            )));
        }
        if ft < time_ratio || fs < space_ratio {
            return Err(FracError::NonNested(format!(
                "reference too coarse: time ratio {ft} (need {time_ratio}), space ratio {fs} (need {space_ratio})"
            )));
        }
        Ok(())
    }
}
