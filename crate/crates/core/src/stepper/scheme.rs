//! Fully discrete scheme: CQ in time, P1 in space, nodal reaction.
//!
//! Each step solves (ω_0 M + ε²K) Uⁿ = M [a_n U⁰ - Σ_{j≥1} ω_j U^{n-j} + G(Uⁿ)],
//! a_n = Σ_{j≤n} ω_j, by fixed-point iteration on G with one Cholesky factor
//! of the step-independent matrix.

use super::reaction::ReactionTerm;
use crate::error::{FracError, Result};
use crate::femcore::FemSystem;
use crate::quadweights::CqWeights;
use crate::scalar::Real;
use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

/// Problem parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FracParams<T> {
    pub alpha: T,
    pub s: T,
    pub eps2: T,
    pub t_final: T,
    pub r: T,
}

impl<T: Real> FracParams<T> {
    pub fn new(alpha: T, s: T, eps2: T, t_final: T, r: T) -> Result<Self> {
        let p = FracParams { alpha, s, eps2, t_final, r };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let zero = T::zero();
        if !(self.alpha > zero && self.alpha <= T::one()) {
            return Err(FracError::domain(format!("alpha must lie in (0, 1], got {}", self.alpha)));
        }
        if !(self.s > zero && self.s < T::one()) {
            return Err(FracError::domain(format!("s must lie in (0, 1), got {}", self.s)));
        }
        if !(self.eps2 > zero) {
            return Err(FracError::domain(format!("eps2 must be positive, got {}", self.eps2)));
        }
        if !(self.t_final > zero) {
            return Err(FracError::domain(format!("t_final must be positive, got {}", self.t_final)));
        }
        if !(self.r > zero) {
            return Err(FracError::domain(format!("truncation radius must be positive, got {}", self.r)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy)]
pub struct FixedPointOptions<T> {
    /// Stop when ‖U^(k+1) - U^(k)‖_M ≤ rel_tol ‖U^(k)‖_M.
    pub rel_tol: T,
    pub max_iters: usize,
}

impl<T: Real> Default for FixedPointOptions<T> {
    fn default() -> Self {
        FixedPointOptions { rel_tol: T::of(1e-12).max(T::EPS * T::of(16.0)), max_iters: 100 }
    }
}

/// One accepted step.
#[derive(Debug, Clone)]
pub struct StepOutcome<T: Real> {
    pub state: DVector<T>,
    pub iters: usize,
    /// Largest observed ratio of successive fixed-point increments (0 if fewer than two).
    pub contraction: T,
    /// ‖S Uⁿ - M rhs(Uⁿ)‖ / ‖M rhs(Uⁿ)‖.
    pub residual: T,
}

/// States U⁰..U^N on the uniform time grid t_n = n τ.
#[derive(Debug, Clone)]
pub struct Trajectory<T: Real> {
    pub tau: T,
    pub states: Vec<DVector<T>>,
    /// Fixed-point iterations of step n at index n - 1.
    pub fixed_point_iters: Vec<usize>,
    /// max_i |Uⁿ_i| for n = 0..=N.
    pub linf_history: Vec<T>,
    pub residuals: Vec<T>,
    pub contraction: Vec<T>,
}

impl<T: Real> Trajectory<T> {
    pub fn n_steps(&self) -> usize {
        self.states.len() - 1
    }

    pub fn time(&self, n: usize) -> T {
        self.tau * T::of_usize(n)
    }

    pub fn final_state(&self) -> &DVector<T> {
        self.states.last().expect("trajectory holds U⁰")
    }

    pub fn max_linf(&self) -> T {
        self.linf_history.iter().fold(T::zero(), |m, v| m.max(*v))
    }

    /// Index n with t_n = t, if t lies on the grid.
    pub fn index_of(&self, t: T) -> Option<usize> {
        let n = (t / self.tau).round();
        let idx = n.to_usize()?;
        let on_grid = (self.time(idx) - t).abs() <= T::of(1e-9) * t.abs().max(T::one());
        (on_grid && idx < self.states.len()).then_some(idx)
    }
}

pub(crate) fn linf<T: Real>(v: &DVector<T>) -> T {
    v.iter().fold(T::zero(), |m, x| m.max(x.abs()))
}

/// Contraction constant τ^α B of the fixed-point map.
pub fn contraction_factor<T: Real>(alpha: T, tau: T, bound: T) -> T {
    tau.powf(alpha) * bound
}

/// Largest step with τ^α B < 1.
pub fn max_stable_tau<T: Real>(alpha: T, bound: T) -> T {
    if bound == T::zero() {
        T::INFINITY
    } else {
        bound.powf(-T::one() / alpha)
    }
}

pub struct Stepper<'a, T: Real> {
    system: &'a FemSystem<T>,
    params: FracParams<T>,
    weights: &'a CqWeights<T>,
    reaction: &'a ReactionTerm<T>,
    chol: Cholesky<T, Dyn>,
    lhs: DMatrix<T>,
    opts: FixedPointOptions<T>,
}

impl<'a, T: Real> Stepper<'a, T> {
    pub fn new(
        system: &'a FemSystem<T>,
        params: FracParams<T>,
        weights: &'a CqWeights<T>,
        reaction: &'a ReactionTerm<T>,
    ) -> Result<Self> {
        Self::with_options(system, params, weights, reaction, FixedPointOptions::default())
    }

    pub fn with_options(
        system: &'a FemSystem<T>,
        params: FracParams<T>,
        weights: &'a CqWeights<T>,
        reaction: &'a ReactionTerm<T>,
        opts: FixedPointOptions<T>,
    ) -> Result<Self> {
        params.validate()?;
        if (weights.alpha() - params.alpha).abs() > T::EPS * T::of(4.0) {
            return Err(FracError::domain(format!(
                "weights were generated for alpha = {}, parameters have alpha = {}",
                weights.alpha(),
                params.alpha
            )));
        }
        if (system.s - params.s).abs() > T::EPS * T::of(4.0) {
            return Err(FracError::domain(format!(
                "system was assembled for s = {}, parameters have s = {}",
                system.s, params.s
            )));
        }
        let factor = contraction_factor(params.alpha, weights.tau(), reaction.bound());
        if !reaction.is_zero() && factor >= T::one() {
            return Err(FracError::NonContraction {
                factor: factor.as_f64(),
                tau_max: max_stable_tau(params.alpha, reaction.bound()).as_f64(),
            });
        }
        let lhs = system.mass.to_dense() * weights.leading() + &system.stiffness * params.eps2;
        let chol = Cholesky::new(lhs.clone())
            .ok_or_else(|| FracError::SingularMatrix("step matrix is not positive definite".into()))?;
        Ok(Stepper { system, params, weights, reaction, chol, lhs, opts })
    }

    pub fn params(&self) -> &FracParams<T> {
        &self.params
    }

    pub fn tau(&self) -> T {
        self.weights.tau()
    }

    /// a_n U⁰ - Σ_{j=1}^n ω_j U^{n-j} for n = history.len().
    fn history_term(&self, history: &[DVector<T>]) -> DVector<T> {
        let n = history.len();
        let mut h = &history[0] * self.weights.partial_sum_unscaled(n);
        for j in 1..=n {
            let w = self.weights.omega(j);
            if w != T::zero() {
                h.axpy(-w, &history[n - j], T::one());
            }
        }
        h
    }

    fn nodal_reaction(&self, u: &DVector<T>) -> DVector<T> {
        u.map(|x| self.reaction.eval(x))
    }

    /// Computes U^n from U^0..U^{n-1}.
    pub fn step(&self, history: &[DVector<T>]) -> Result<StepOutcome<T>> {
        let n = history.len();
        if n == 0 {
            return Err(FracError::domain("history must contain U⁰"));
        }
        if n > self.weights.n_max() {
            return Err(FracError::domain(format!(
                "step {n} exceeds the {} weights that were generated",
                self.weights.n_max()
            )));
        }
        for u in history {
            self.system.check_dim(u)?;
        }
        let mass = &self.system.mass;
        let h = self.history_term(history);

        let solve = |g: &DVector<T>| self.chol.solve(&mass.mul_vec(&(&h + g)));
        let (state, iters, contraction) = if self.reaction.is_zero() {
            (solve(&DVector::zeros(h.len())), 1, T::zero())
        } else {
            let mut u = history[n - 1].clone();
            let mut prev_incr = T::zero();
            let mut ratio = T::zero();
            let mut done = None;
            for k in 1..=self.opts.max_iters {
                let next = solve(&self.nodal_reaction(&u));
                let d = &next - &u;
                let incr = mass.inner(&d, &d).sqrt();
                let norm = mass.inner(&u, &u).sqrt();
                // ratios are only meaningful above rounding noise
                if k > 1 && prev_incr > T::of(1e3) * T::EPS * norm.max(T::EPS) {
                    ratio = ratio.max(incr / prev_incr);
                }
                prev_incr = incr;
                u = next;
                if incr <= self.opts.rel_tol * norm || incr == T::zero() {
                    done = Some(k);
                    break;
                }
            }
            match done {
                Some(k) => (u, k, ratio),
                None => {
                    return Err(FracError::FixedPoint {
                        step: n,
                        iters: self.opts.max_iters,
                        increment: prev_incr.as_f64(),
                    })
                }
            }
        };

        let rhs = mass.mul_vec(&(&h + self.nodal_reaction(&state)));
        let r = &self.lhs * &state - &rhs;
        let residual = r.norm() / rhs.norm().max(T::of(1e-300));
        Ok(StepOutcome { state, iters, contraction, residual })
    }

    /// Runs N steps from U⁰ = v.
    pub fn run(&self, v: DVector<T>, n_steps: usize) -> Result<Trajectory<T>> {
        self.system.check_dim(&v)?;
        let mut traj = Trajectory {
            tau: self.tau(),
            linf_history: vec![linf(&v)],
            states: Vec::with_capacity(n_steps + 1),
            fixed_point_iters: Vec::with_capacity(n_steps),
            residuals: Vec::with_capacity(n_steps),
            contraction: Vec::with_capacity(n_steps),
        };
        traj.states.push(v);
        for n in 1..=n_steps {
            let out = self.step(&traj.states).map_err(|e| FracError::AtStep { step: n, source: Box::new(e) })?;
            traj.linf_history.push(linf(&out.state));
            traj.fixed_point_iters.push(out.iters);
            traj.residuals.push(out.residual);
            traj.contraction.push(out.contraction);
            traj.states.push(out.state);
        }
        Ok(traj)
    }
}

/// Runs the scheme; see [`Stepper`].
pub fn run<T: Real>(
    system: &FemSystem<T>,
    params: FracParams<T>,
    weights: &CqWeights<T>,
    reaction: &ReactionTerm<T>,
    v: DVector<T>,
    n_steps: usize,
) -> Result<Trajectory<T>> {
    Stepper::new(system, params, weights, reaction)?.run(v, n_steps)
}

/// Backward Euler for M U' + ε²K U = M G(U), coded directly: LU factor of
/// M/τ + ε²K and Picard iteration on G with the same stopping rule.
pub fn backward_euler<T: Real>(
    system: &FemSystem<T>,
    eps2: T,
    tau: T,
    reaction: &ReactionTerm<T>,
    v: DVector<T>,
    n_steps: usize,
) -> Result<Vec<DVector<T>>> {
    let m = system.mass.to_dense();
    let a = &m / tau + &system.stiffness * eps2;
    let lu = a.lu();
    let opts = FixedPointOptions::<T>::default();
    let mut states = vec![v];
    for step in 1..=n_steps {
        let prev = states.last().expect("nonempty").clone();
        let base = &prev / tau;
        let mut u = prev.clone();
        let mut converged = false;
        for _ in 0..opts.max_iters {
            let g = u.map(|x| reaction.eval(x));
            let next = lu
                .solve(&(&m * (&base + g)))
                .ok_or_else(|| FracError::SingularMatrix("backward Euler matrix".into()))?;
            let d = &next - &u;
            let incr = (d.transpose() * &m * &d)[(0, 0)].sqrt();
            let norm = (u.transpose() * &m * &u)[(0, 0)].sqrt();
            u = next;
            if reaction.is_zero() || incr <= opts.rel_tol * norm || incr == T::zero() {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(FracError::FixedPoint { step, iters: opts.max_iters, increment: f64::NAN });
        }
        states.push(u);
    }
    Ok(states)
}
