//! Writers for the documented CSV schemas.

use super::csvio::{fmt_f64, write_csv};
use super::studies::{Example1Report, SolveRun, SweepRow};
use crate::error::Result;
use crate::femcore::{EigenDecomposition, FemSystem};
use crate::quadweights::{c_sequence, CqWeights};
use nalgebra::DVector;
use std::path::Path;

pub const WEIGHTS_HEADER: [&str; 5] = ["j", "omega", "omega_tilde", "a_n", "c_n"];
pub const TRAJECTORY_HEADER: [&str; 3] = ["t", "node", "value"];
pub const DIAGNOSTICS_HEADER: [&str; 8] = ["n", "t", "linf", "energy", "fp_iters", "fs", "dirichlet", "potential"];
pub const SPECTRUM_HEADER: [&str; 2] = ["k", "lambda"];
pub const EXACT_HEADER: [&str; 3] = ["node", "x", "value"];
pub const MAXPRINCIPLE_HEADER: [&str; 4] = ["alpha", "s", "max_linf", "pass"];
pub const SWEEP_DETAIL_HEADER: [&str; 9] =
    ["alpha", "s", "tau", "steps", "max_linf", "const_one_max", "const_one_dev", "zero_stays_zero", "pass"];
pub const MATRIX_HEADER: [&str; 3] = ["row", "col", "value"];
pub const SUMMARY_HEADER: [&str; 2] = ["quantity", "value"];

/// ω_j, ω̃_j, a_j = Σ_{i≤j} ω̃_i and c_j for j = 0..=n (c_j ≡ 1 at α = 1).
pub fn write_weights(path: &Path, alpha: f64, tau: f64, n: usize, comments: &[(String, String)]) -> Result<()> {
    let w = CqWeights::new(alpha, tau, n)?;
    let c = if alpha < 1.0 { c_sequence(alpha, n)?.c } else { vec![1.0; n + 1] };
    let mut a = 0.0;
    let rows: Vec<Vec<String>> = (0..=n)
        .map(|j| {
            a += w.scaled(j);
            vec![j.to_string(), fmt_f64(w.omega(j)), fmt_f64(w.scaled(j)), fmt_f64(a), fmt_f64(c[j])]
        })
        .collect();
    let mut cm = vec![("alpha".into(), fmt_f64(alpha)), ("tau".into(), fmt_f64(tau)), ("n".into(), n.to_string())];
    cm.extend_from_slice(comments);
    write_csv(path, &cm, &WEIGHTS_HEADER, rows)
}

/// Every `stride`-th state (the final state is always included).
pub fn write_trajectory(path: &Path, run: &SolveRun, stride: usize, comments: &[(String, String)]) -> Result<()> {
    let tr = &run.trajectory;
    let last = tr.n_steps();
    let rows = (0..=last).filter(|n| n % stride.max(1) == 0 || *n == last).flat_map(|n| {
        let t = fmt_f64(tr.time(n));
        tr.states[n].iter().enumerate().map(move |(i, v)| vec![t.clone(), i.to_string(), fmt_f64(*v)])
    });
    write_csv(path, comments, &TRAJECTORY_HEADER, rows)
}

pub fn write_diagnostics(path: &Path, run: &SolveRun, comments: &[(String, String)]) -> Result<()> {
    let tr = &run.trajectory;
    let rows = (0..=tr.n_steps()).map(|n| {
        let e = &run.energies[n];
        let fp = if n == 0 { 0 } else { tr.fixed_point_iters[n - 1] };
        vec![
            n.to_string(),
            fmt_f64(tr.time(n)),
            fmt_f64(tr.linf_history[n]),
            fmt_f64(e.fs),
            fp.to_string(),
            fmt_f64(e.fs),
            fmt_f64(e.dirichlet),
            fmt_f64(e.potential),
        ]
    });
    let mut cm = vec![
        ("max_residual".into(), fmt_f64(run.max_residual)),
        ("energy_monotone".into(), run.energy_monotone().to_string()),
    ];
    if let Some(k) = run.energies[0].k_eps {
        cm.push(("k_eps".into(), fmt_f64(k)));
    }
    cm.extend_from_slice(comments);
    write_csv(path, &cm, &DIAGNOSTICS_HEADER, rows)
}

/// Eigenvalues, 1-based k.
pub fn write_spectrum(path: &Path, eig: &EigenDecomposition<f64>, comments: &[(String, String)]) -> Result<()> {
    let rows = eig.lambdas.iter().enumerate().map(|(k, l)| vec![(k + 1).to_string(), fmt_f64(*l)]);
    write_csv(path, comments, &SPECTRUM_HEADER, rows)
}

pub fn write_nodal(path: &Path, sys: &FemSystem<f64>, u: &DVector<f64>, comments: &[(String, String)]) -> Result<()> {
    let rows = u.iter().enumerate().map(|(i, v)| vec![i.to_string(), fmt_f64(sys.mesh.node(i)), fmt_f64(*v)]);
    write_csv(path, comments, &EXACT_HEADER, rows)
}

pub fn write_sweep(dir: &Path, rows: &[SweepRow], comments: &[(String, String)]) -> Result<()> {
    let main = rows.iter().map(|r| vec![fmt_f64(r.alpha), fmt_f64(r.s), fmt_f64(r.max_linf), r.pass.to_string()]);
    write_csv(&dir.join("maxprinciple.csv"), comments, &MAXPRINCIPLE_HEADER, main)?;
    let detail = rows.iter().map(|r| {
        vec![
            fmt_f64(r.alpha),
            fmt_f64(r.s),
            fmt_f64(r.tau),
            r.steps.to_string(),
            fmt_f64(r.max_linf),
            fmt_f64(r.const_one_max),
            fmt_f64(r.const_one_dev),
            r.zero_stays_zero.to_string(),
            r.pass.to_string(),
        ]
    });
    write_csv(&dir.join("maxprinciple_detail.csv"), comments, &SWEEP_DETAIL_HEADER, detail)
}

/// M (nonzeros) and K (all entries) as `row,col,value`.
pub fn write_matrices(dir: &Path, sys: &FemSystem<f64>) -> Result<()> {
    let n = sys.dim();
    let m = &sys.mass;
    let mass_rows = (0..n).flat_map(|i| {
        let lo = i.saturating_sub(1);
        let hi = (i + 1).min(n - 1);
        (lo..=hi).map(move |j| {
            let v = if i == j { m.diag[i] } else { m.off[i.min(j)] };
            vec![i.to_string(), j.to_string(), fmt_f64(v)]
        })
    });
    write_csv(&dir.join("mass.csv"), &[], &MATRIX_HEADER, mass_rows)?;
    let k = &sys.stiffness;
    let stiff_rows = (0..n).flat_map(|i| (0..n).map(move |j| vec![i.to_string(), j.to_string(), fmt_f64(k[(i, j)])]));
    write_csv(&dir.join("stiffness.csv"), &[], &MATRIX_HEADER, stiff_rows)
}

pub fn write_example1_summary(path: &Path, r: &Example1Report, comments: &[(String, String)]) -> Result<()> {
    let e = &r.final_energy;
    let mut q: Vec<(&str, String)> = vec![
        ("target", fmt_f64(r.target)),
        ("plateau_pos", fmt_f64(r.plateau_pos)),
        ("plateau_neg", fmt_f64(r.plateau_neg)),
        ("rel_dev_pos", fmt_f64(r.rel_dev_pos)),
        ("rel_dev_neg", fmt_f64(r.rel_dev_neg)),
        ("signs_preserved", r.signs_preserved.to_string()),
        ("fs", fmt_f64(e.fs)),
        ("dirichlet", fmt_f64(e.dirichlet)),
        ("potential", fmt_f64(e.potential)),
        ("max_residual", fmt_f64(r.run.max_residual)),
        ("energy_monotone", r.run.energy_monotone().to_string()),
    ];
    if let Some(k) = e.k_eps {
        q.push(("k_eps", fmt_f64(k)));
    }
    q.push(("pass", r.pass.to_string()));
    write_csv(path, comments, &SUMMARY_HEADER, q.into_iter().map(|(k, v)| vec![k.to_string(), v]))
}
