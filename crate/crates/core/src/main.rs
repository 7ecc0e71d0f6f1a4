use clap::{Args, Parser, Subcommand};
use fracflow::femcore::FemSystem;
use fracflow::harness::output::*;
use fracflow::harness::{self, csvio::fmt_f64, ExperimentConfig, RateReport};
use fracflow::reference::{steps_for, SpectralOperator};
use fracflow::FracError;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

/// Space-time fractional Allen-Cahn experiments.
#[derive(Parser)]
#[command(name = "fracflow", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Configuration file (`key = value` lines).
    #[arg(long)]
    config: PathBuf,
    /// Output directory, or a file path ending in `.csv` for single-table commands.
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Convolution-quadrature weights table.
    Weights {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        tau: Option<f64>,
        /// Largest weight index.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value = "weights.csv")]
        out: PathBuf,
    },
    /// Run the scheme and write trajectory.csv and diagnostics.csv.
    Solve {
        #[command(flatten)]
        common: Common,
        /// Also write M and K as row,col,value tables into this directory.
        #[arg(long)]
        dump_matrices: Option<PathBuf>,
    },
    /// Generalized eigenvalues of (K, M).
    Spectrum {
        #[command(flatten)]
        common: Common,
    },
    /// Spectral solution of the linear problem at time t.
    Exact {
        #[command(flatten)]
        common: Common,
        /// Evaluation time (default t_eval).
        #[arg(long)]
        t: Option<f64>,
    },
    /// Mesh-refinement study.
    ConvergeSpace {
        #[command(flatten)]
        common: Common,
    },
    /// Time-step refinement study.
    ConvergeTime {
        #[command(flatten)]
        common: Common,
    },
    /// Maximum-principle sweep over (alpha, s).
    Maxprinciple {
        #[command(flatten)]
        common: Common,
    },
    /// Equilibrium plateaus of a step datum.
    Example1 {
        #[command(flatten)]
        common: Common,
    },
}

/// A single-table output: `out` itself if it names a `.csv`, else `out/default`.
fn table_path(out: &Path, default: &str) -> PathBuf {
    if out.extension().is_some_and(|e| e == "csv") {
        out.to_path_buf()
    } else {
        out.join(default)
    }
}

enum Outcome {
    Pass,
    Fail,
}

fn report_rates(r: &RateReport, cfg: &ExperimentConfig, path: &Path) -> fracflow::Result<Outcome> {
    r.emit_csv(path, &cfg.header())?;
    for (l, (h, e)) in r.levels.iter().enumerate() {
        println!("level {l}: step {h:.6e} error {e:.6e}");
    }
    println!(
        "{} order {:.4} (theory {:.4} +- {}) local {:?} -> {}",
        r.axis.name(),
        r.fitted_order,
        r.theory_order,
        r.tolerance,
        r.local_orders().iter().map(|o| (o * 1e3).round() / 1e3).collect::<Vec<_>>(),
        if r.pass { "pass" } else { "FAIL" }
    );
    if let Some(o) = r.order_without_coarsest() {
        println!("order without coarsest level {o:.4}");
    }
    Ok(if r.pass { Outcome::Pass } else { Outcome::Fail })
}

fn run(cmd: Command) -> fracflow::Result<Outcome> {
    match cmd {
        Command::Weights { config, alpha, tau, n, out } => {
            let cfg = config.as_deref().map(ExperimentConfig::from_file).transpose()?;
            let alpha = alpha.or(cfg.as_ref().map(|c| c.params.alpha));
            let tau = tau.or(cfg.as_ref().map(|c| c.tau));
            let n = match (n, &cfg) {
                (Some(n), _) => Some(n),
                (None, Some(c)) => Some(steps_for(c.params.t_final, c.tau)?),
                _ => None,
            };
            let (Some(alpha), Some(tau), Some(n)) = (alpha, tau, n) else {
                return Err(FracError::Config("weights needs --alpha, --tau and --n (or --config)".into()));
            };
            let header = cfg.map(|c| c.header()).unwrap_or_default();
            let path = table_path(&out, "weights.csv");
            write_weights(&path, alpha, tau, n, &header)?;
            println!("wrote {}", path.display());
            Ok(Outcome::Pass)
        }
        Command::Solve { common, dump_matrices } => {
            let cfg = ExperimentConfig::from_file(&common.config)?;
            let r = harness::solve(&cfg)?;
            let h = cfg.header();
            write_trajectory(&common.out.join("trajectory.csv"), &r, cfg.output_stride, &h)?;
            write_diagnostics(&common.out.join("diagnostics.csv"), &r, &h)?;
            if let Some(dir) = dump_matrices {
                write_matrices(&dir, &r.system)?;
            }
            let tr = &r.trajectory;
            println!(
                "{} steps, max linf {:.6}, max residual {:.2e}, max fixed-point iterations {}",
                tr.n_steps(),
                tr.max_linf(),
                r.max_residual,
                tr.fixed_point_iters.iter().max().copied().unwrap_or(0)
            );
            Ok(if r.residual_ok() { Outcome::Pass } else { Outcome::Fail })
        }
        Command::Spectrum { common } => {
            let cfg = ExperimentConfig::from_file(&common.config)?;
            let sys = harness::studies::build_system(&cfg, cfg.nodes)?;
            let eig = sys.eigen()?;
            let path = table_path(&common.out, "spectrum.csv");
            let mut h = vec![("max_residual".to_string(), fmt_f64(eig.max_residual(&sys.mass, &sys.stiffness)))];
            h.extend(cfg.header());
            write_spectrum(&path, &eig, &h)?;
            println!("lambda_1 = {:.10e}, lambda_N = {:.10e}", eig.lambdas[0], eig.lambdas[eig.dim() - 1]);
            Ok(Outcome::Pass)
        }
        Command::Exact { common, t } => {
            let cfg = ExperimentConfig::from_file(&common.config)?;
            let t = t.unwrap_or(cfg.t_eval);
            let sys: FemSystem<f64> = harness::studies::build_system(&cfg, cfg.nodes)?;
            let eig = sys.eigen()?;
            let v = cfg.initial.build(&sys, Some(&eig))?;
            let u = SpectralOperator::new(&eig, &sys.mass, cfg.params.eps2, cfg.params.alpha)?.exact_linear(t, &v)?;
            let path = table_path(&common.out, "exact.csv");
            let mut h = vec![("t".to_string(), fmt_f64(t))];
            h.extend(cfg.header());
            write_nodal(&path, &sys, &u, &h)?;
            println!("wrote {}", path.display());
            Ok(Outcome::Pass)
        }
        Command::ConvergeSpace { common } => {
            let cfg = ExperimentConfig::from_file(&common.config)?;
            let r = harness::spatial_rate_study(&cfg)?;
            report_rates(&r, &cfg, &table_path(&common.out, "rates_space.csv"))
        }
        Command::ConvergeTime { common } => {
            let cfg = ExperimentConfig::from_file(&common.config)?;
            let r = harness::temporal_rate_study(&cfg)?;
            report_rates(&r, &cfg, &table_path(&common.out, "rates_time.csv"))
        }
        Command::Maxprinciple { common } => {
            let cfg = ExperimentConfig::from_file(&common.config)?;
            let rows = harness::max_principle_sweep(&cfg)?;
            write_sweep(&common.out, &rows, &cfg.header())?;
            for r in &rows {
                println!(
                    "alpha {:.3} s {:.3} tau {:.3e}: max linf {:.15} (v=1: {:.3e} off) {}",
                    r.alpha,
                    r.s,
                    r.tau,
                    r.max_linf,
                    r.const_one_dev,
                    if r.pass { "pass" } else { "FAIL" }
                );
            }
            Ok(if rows.iter().all(|r| r.pass) { Outcome::Pass } else { Outcome::Fail })
        }
        Command::Example1 { common } => {
            let cfg = ExperimentConfig::from_file(&common.config)?;
            let r = harness::example1(&cfg)?;
            let h = cfg.header();
            write_trajectory(&common.out.join("trajectory.csv"), &r.run, cfg.output_stride, &h)?;
            write_diagnostics(&common.out.join("diagnostics.csv"), &r.run, &h)?;
            write_example1_summary(&common.out.join("summary.csv"), &r, &h)?;
            println!(
                "plateaus {:.6} / {:.6}, target +-{:.6}, deviation {:.3}% / {:.3}% -> {}",
                r.plateau_pos,
                r.plateau_neg,
                r.target,
                1e2 * r.rel_dev_pos,
                1e2 * r.rel_dev_neg,
                if r.pass { "pass" } else { "FAIL" }
            );
            Ok(if r.pass { Outcome::Pass } else { Outcome::Fail })
        }
    }
}

fn is_config_error(e: &FracError) -> bool {
    match e {
        FracError::AtStep { source, .. } => is_config_error(source),
        FracError::Config(_)
        | FracError::Parse { .. }
        | FracError::Domain(_)
        | FracError::NonContraction { .. }
        | FracError::NonNested(_)
        | FracError::InsufficientLevels(_)
        | FracError::InvalidStudy(_) => true,
        _ => false,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if is_config_error(&e) { 2 } else { 1 })
        }
    }
}
