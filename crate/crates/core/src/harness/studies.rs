//! Convergence studies, the maximum-principle sweep and the equilibrium-plateau run.

use super::config::ExperimentConfig;
use super::rates::{Axis, RateReport};
use crate::energy::{equilibrium_value, evaluate_energy, plateau_detect, EnergyReport};
use crate::error::{FracError, Result};
use crate::femcore::{EigenDecomposition, FemSystem, Mesh1d};
use crate::quadweights::CqWeights;
use crate::reference::{prolongate, richardson_reference, steps_for, SpectralOperator};
use crate::stepper::{make_reaction, max_stable_tau, FracParams, InitialDatum, ReactionKind, ReactionTerm, Stepper, Trajectory};
use nalgebra::DVector;
use rayon::prelude::*;

/// Bound on the scheme residual of every accepted step.
pub const RESIDUAL_TOL: f64 = 1e-10;
/// Slack allowed on ‖U^n‖_∞ ≤ 1.
pub const MAX_PRINCIPLE_SLACK: f64 = 1e-10;

pub fn build_system(cfg: &ExperimentConfig, nodes: usize) -> Result<FemSystem<f64>> {
    FemSystem::new(Mesh1d::new(cfg.domain.0, cfg.domain.1, nodes)?, cfg.params.s)
}

pub fn reaction(cfg: &ExperimentConfig) -> Result<ReactionTerm<f64>> {
    make_reaction(cfg.reaction, cfg.params.r)
}

fn initial_state(cfg: &ExperimentConfig, sys: &FemSystem<f64>, eig: Option<&EigenDecomposition<f64>>) -> Result<DVector<f64>> {
    cfg.initial.build(sys, eig)
}

fn run_to(
    sys: &FemSystem<f64>,
    params: FracParams<f64>,
    g: &ReactionTerm<f64>,
    v: DVector<f64>,
    tau: f64,
    t: f64,
) -> Result<Trajectory<f64>> {
    let n = steps_for(t, tau)?;
    let w = CqWeights::new(params.alpha, tau, n)?;
    Stepper::new(sys, params, &w, g)?.run(v, n)
}

/// A full run with per-state energies.
#[derive(Debug, Clone)]
pub struct SolveRun {
    pub system: FemSystem<f64>,
    pub trajectory: Trajectory<f64>,
    pub energies: Vec<EnergyReport<f64>>,
    pub max_residual: f64,
}

impl SolveRun {
    pub fn residual_ok(&self) -> bool {
        self.max_residual <= RESIDUAL_TOL
    }

    /// Whether F_s is non-increasing along the run (logged, not asserted).
    pub fn energy_monotone(&self) -> bool {
        self.energies.windows(2).all(|w| w[1].fs <= w[0].fs * (1.0 + 1e-12))
    }
}

pub fn solve(cfg: &ExperimentConfig) -> Result<SolveRun> {
    let system = build_system(cfg, cfg.nodes)?;
    let eig = if cfg.initial.needs_eigen() { Some(system.eigen()?) } else { None };
    let v = initial_state(cfg, &system, eig.as_ref())?;
    let g = reaction(cfg)?;
    let trajectory = run_to(&system, cfg.params, &g, v, cfg.tau, cfg.params.t_final)?;
    let energies =
        trajectory.states.par_iter().map(|u| evaluate_energy(&system, cfg.params.eps2, u)).collect::<Result<Vec<_>>>()?;
    let max_residual = trajectory.residuals.iter().fold(0.0f64, |m, &r| m.max(r));
    Ok(SolveRun { system, trajectory, energies, max_residual })
}

/// The discrete solution at t_eval on `nodes` interior nodes: spectral for a
/// zero reaction, the scheme with step `tau` otherwise.
fn state_at(cfg: &ExperimentConfig, nodes: usize) -> Result<(FemSystem<f64>, DVector<f64>)> {
    let sys = build_system(cfg, nodes)?;
    let u = if cfg.reaction == ReactionKind::Zero {
        let eig = sys.eigen()?;
        let v = initial_state(cfg, &sys, Some(&eig))?;
        SpectralOperator::new(&eig, &sys.mass, cfg.params.eps2, cfg.params.alpha)?.exact_linear(cfg.t_eval, &v)?
    } else {
        let eig = if cfg.initial.needs_eigen() { Some(sys.eigen()?) } else { None };
        let v = initial_state(cfg, &sys, eig.as_ref())?;
        let g = reaction(cfg)?;
        let t = run_to(&sys, cfg.params, &g, v, cfg.tau, cfg.t_eval)?;
        t.final_state().clone()
    };
    Ok((sys, u))
}

/// L² errors at t_eval between consecutive nested meshes: level l holds
/// (h_l, ‖u_{l+1} - u_l‖), so n mesh levels give n - 1 rate levels.
pub fn spatial_rate_study(cfg: &ExperimentConfig) -> Result<RateReport> {
    let levels = &cfg.mesh_levels;
    if levels.len() < 4 {
        return Err(FracError::InsufficientLevels(levels.len().saturating_sub(1)));
    }
    if matches!(cfg.initial, InitialDatum::Random { .. } | InitialDatum::File(_)) {
        return Err(FracError::InvalidStudy("spatial studies need an initial datum defined independently of the mesh".into()));
    }
    let meshes = levels.iter().map(|&n| Mesh1d::new(cfg.domain.0, cfg.domain.1, n)).collect::<Result<Vec<_>>>()?;
    for w in meshes.windows(2) {
        w[0].nesting_factor(&w[1])?;
    }
    let sols = levels.par_iter().map(|&n| state_at(cfg, n)).collect::<Result<Vec<_>>>()?;
    let mut table = vec![];
    for l in 0..sols.len() - 1 {
        let (coarse, fine) = (&sols[l], &sols[l + 1]);
        let d = &fine.1 - prolongate(&coarse.0.mesh, &fine.0.mesh, &coarse.1)?;
        table.push((coarse.0.mesh.h(), fine.0.l2_norm(&d)));
    }
    let theory = cfg.theory_order.unwrap_or((2.0 * cfg.params.s).min(1.0));
    RateReport::new(Axis::Space, table, theory, cfg.tolerance)
}

/// L² errors at t_eval over the τ ladder on a fixed mesh, against the
/// spectral solution (zero reaction) or a run at τ_min / reference.factor.
pub fn temporal_rate_study(cfg: &ExperimentConfig) -> Result<RateReport> {
    if cfg.tau_levels.len() < 3 {
        return Err(FracError::InsufficientLevels(cfg.tau_levels.len()));
    }
    let sys = build_system(cfg, cfg.nodes)?;
    let linear = cfg.reaction == ReactionKind::Zero;
    let eig = if linear || cfg.initial.needs_eigen() { Some(sys.eigen()?) } else { None };
    let v = initial_state(cfg, &sys, eig.as_ref())?;
    let g = reaction(cfg)?;
    let params = FracParams { t_final: cfg.t_eval, ..cfg.params };
    let reference = if let Some(eig) = eig.as_ref().filter(|_| linear) {
        SpectralOperator::new(eig, &sys.mass, params.eps2, params.alpha)?.exact_linear(cfg.t_eval, &v)?
    } else {
        let tau_min = *cfg.tau_levels.last().expect("nonempty ladder");
        let r = richardson_reference(&sys, params, &g, v.clone(), tau_min / cfg.reference_factor as f64)?;
        r.check_anchor(&sys.mesh, tau_min, cfg.reference_factor, 1)?;
        r.sample(&sys.mesh, cfg.t_eval)?
    };
    let table = cfg
        .tau_levels
        .par_iter()
        .map(|&tau| {
            let t = run_to(&sys, params, &g, v.clone(), tau, cfg.t_eval)?;
            Ok((tau, sys.l2_norm(&(t.final_state() - &reference))))
        })
        .collect::<Result<Vec<_>>>()?;
    RateReport::new(Axis::Time, table, cfg.theory_order.unwrap_or(1.0), cfg.tolerance)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub alpha: f64,
    pub s: f64,
    pub tau: f64,
    pub steps: usize,
    /// max_n ‖U^n‖_∞ for the configured initial datum.
    pub max_linf: f64,
    /// Same for v ≡ 1 (recorded only: the zero exterior data pulls the
    /// constant down near the boundary and the consistent mass matrix can
    /// overshoot in response).
    pub const_one_max: f64,
    /// max_n max_i |U^n_i - 1| for v ≡ 1.
    pub const_one_dev: f64,
    /// Whether v ≡ 0 stayed identically zero.
    pub zero_stays_zero: bool,
    pub pass: bool,
}

/// Runs every (α, s) of the sweep grid to t_final. The step is the largest
/// τ ≤ min(tau, sweep.tau_fraction · B^(-1/α)) that divides t_final.
pub fn max_principle_sweep(cfg: &ExperimentConfig) -> Result<Vec<SweepRow>> {
    if cfg.sweep_alpha.is_empty() || cfg.sweep_s.is_empty() {
        return Err(FracError::InvalidStudy("sweep grid is empty".into()));
    }
    let g = reaction(cfg)?;
    let t_final = cfg.params.t_final;
    let mut rows = vec![];
    for &s in &cfg.sweep_s {
        let params_s = FracParams { s, ..cfg.params };
        params_s.validate().map_err(|e| FracError::Config(e.to_string()))?;
        let sys = FemSystem::new(Mesh1d::new(cfg.domain.0, cfg.domain.1, cfg.nodes)?, s)?;
        let eig = if cfg.initial.needs_eigen() { Some(sys.eigen()?) } else { None };
        let v = initial_state(cfg, &sys, eig.as_ref())?;
        if v.amax() > 1.0 {
            return Err(FracError::InvalidStudy(format!("initial datum has sup norm {} > 1", v.amax())));
        }
        let out = cfg
            .sweep_alpha
            .par_iter()
            .map(|&alpha| {
                let params = FracParams { alpha, ..params_s };
                params.validate().map_err(|e| FracError::Config(e.to_string()))?;
                let cap = if g.is_zero() { cfg.tau } else { cfg.tau.min(cfg.sweep_tau_fraction * max_stable_tau(alpha, g.bound())) };
                let steps = (t_final / cap).ceil() as usize;
                let tau = t_final / steps as f64;
                let w = CqWeights::new(alpha, tau, steps)?;
                let stepper = Stepper::new(&sys, params, &w, &g)?;
                let max_linf = stepper.run(v.clone(), steps)?.max_linf();
                let short = steps.min(50);
                let one = stepper.run(DVector::from_element(sys.dim(), 1.0), short)?;
                let const_one_dev = one.states.iter().map(|u| u.add_scalar(-1.0).amax()).fold(0.0, f64::max);
                let zero = stepper.run(DVector::zeros(sys.dim()), steps.min(10))?;
                let zero_stays_zero = zero.states.iter().all(|u| u.iter().all(|&x| x == 0.0));
                let bound = 1.0 + MAX_PRINCIPLE_SLACK;
                let const_one_max = one.max_linf();
                let pass = max_linf <= bound && zero_stays_zero;
                Ok(SweepRow { alpha, s, tau, steps, max_linf, const_one_max, const_one_dev, zero_stays_zero, pass })
            })
            .collect::<Result<Vec<_>>>()?;
        rows.extend(out);
    }
    Ok(rows)
}

#[derive(Debug, Clone)]
pub struct Example1Report {
    pub run: SolveRun,
    pub final_energy: EnergyReport<f64>,
    /// √(1 - ε²).
    pub target: f64,
    pub plateau_pos: f64,
    pub plateau_neg: f64,
    pub rel_dev_pos: f64,
    pub rel_dev_neg: f64,
    /// Final state negative left of the step and positive right of it,
    /// away from the interface.
    pub signs_preserved: bool,
    pub pass: bool,
}

pub fn example1(cfg: &ExperimentConfig) -> Result<Example1Report> {
    let InitialDatum::Step { at, left, right } = cfg.initial else {
        return Err(FracError::Config("example1 needs initial.kind = step".into()));
    };
    if !(left < 0.0 && right > 0.0) {
        return Err(FracError::Config("example1 needs a step from a negative to a positive value".into()));
    }
    let target = equilibrium_value(cfg.params.eps2).map_err(|e| FracError::Config(e.to_string()))?;
    let run = solve(cfg)?;
    let mesh = run.system.mesh;
    let u = run.trajectory.final_state();
    let (pos, neg) = plateau_detect(&mesh, u.as_slice())?;
    let mut final_energy = *run.energies.last().expect("nonempty trajectory");
    final_energy.plateau_pos = Some(pos);
    final_energy.plateau_neg = Some(neg);
    let gap = 2.0 * mesh.h();
    let signs_preserved = mesh.nodes().iter().zip(u.iter()).all(|(&x, &v)| {
        if x < at - gap {
            v < 0.0
        } else if x > at + gap {
            v > 0.0
        } else {
            true
        }
    });
    let rel_dev_pos = (pos - target).abs() / target;
    let rel_dev_neg = (neg + target).abs() / target;
    let pass = rel_dev_pos <= cfg.plateau_tolerance && rel_dev_neg <= cfg.plateau_tolerance && signs_preserved && run.residual_ok();
    Ok(Example1Report { run, final_energy, target, plateau_pos: pos, plateau_neg: neg, rel_dev_pos, rel_dev_neg, signs_preserved, pass })
}
