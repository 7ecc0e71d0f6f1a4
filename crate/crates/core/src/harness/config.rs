//! Flat `key = value` experiment configuration.
//!
//! One entry per line, `#` starts a comment, blank lines are ignored. Lists
//! are comma separated and numbers may be written as fractions (`1/20`).
//! Unknown keys are rejected so that typos do not silently fall back to
//! defaults.

use crate::error::{FracError, Result};
use crate::stepper::{FracParams, InitialDatum, ReactionKind};
use std::path::{Path, PathBuf};

/// (key, default, description); `None` marks a required key.
pub const KEYS: &[(&str, Option<&str>, &str)] = &[
    ("alpha", None, "Caputo order in (0, 1]"),
    ("s", None, "fractional Laplacian order in (0, 1)"),
    ("eps2", None, "diffusion coefficient epsilon^2 > 0"),
    ("domain.a", Some("0"), "left end of the interval"),
    ("domain.b", Some("1"), "right end of the interval"),
    ("nodes", Some("127"), "interior mesh nodes"),
    ("tau", Some("0.01"), "time step"),
    ("t_final", Some("1"), "final time T"),
    ("t_eval", Some(""), "evaluation time for errors (default T)"),
    ("reaction.kind", Some("truncated-cubic"), "zero | cubic | truncated-cubic"),
    ("reaction.R", Some("0.5"), "truncation radius"),
    ("initial.kind", Some("random"), "step | mode | random | sine | constant | file"),
    ("initial.params", Some(""), "datum parameters, see README"),
    ("seed", Some("42"), "seed for random initial data"),
    ("levels.nodes", Some(""), "mesh ladder for spatial studies (nested)"),
    ("levels.tau", Some(""), "time-step ladder for temporal studies"),
    ("reference.factor", Some("16"), "Richardson reference step ratio"),
    ("sweep.alpha", Some("0.4, 0.7, 1"), "alpha values of the maximum-principle sweep"),
    ("sweep.s", Some("0.25, 0.5, 0.75"), "s values of the maximum-principle sweep"),
    ("sweep.tau_fraction", Some("0.5"), "sweep step as a fraction of the contraction limit"),
    ("theory_order", Some(""), "override the expected convergence order"),
    ("tolerance", Some("0.2"), "allowed |fitted - theory| order deviation"),
    ("plateau.tolerance", Some("0.05"), "relative plateau tolerance for example1"),
    ("output.stride", Some("1"), "write every k-th state to trajectory.csv"),
];

/// Parsed configuration with the raw entries kept for provenance headers.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub params: FracParams<f64>,
    pub domain: (f64, f64),
    pub nodes: usize,
    pub tau: f64,
    pub t_eval: f64,
    pub reaction: ReactionKind,
    pub initial: InitialDatum<f64>,
    pub seed: u64,
    pub mesh_levels: Vec<usize>,
    pub tau_levels: Vec<f64>,
    pub reference_factor: usize,
    pub sweep_alpha: Vec<f64>,
    pub sweep_s: Vec<f64>,
    pub sweep_tau_fraction: f64,
    pub theory_order: Option<f64>,
    pub tolerance: f64,
    pub plateau_tolerance: f64,
    pub output_stride: usize,
    /// Every key with its effective value, in [`KEYS`] order.
    pub entries: Vec<(String, String)>,
}

fn cfg_err(msg: impl Into<String>) -> FracError {
    FracError::Config(msg.into())
}

/// Parses `1.5`, `-2e-3` or `1/20`.
pub fn parse_number(s: &str) -> Option<f64> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let (n, d): (f64, f64) = (n.trim().parse().ok()?, d.trim().parse().ok()?);
        return (d != 0.0).then_some(n / d);
    }
    s.parse().ok()
}

fn parse_list(key: &str, s: &str) -> Result<Vec<f64>> {
    if s.trim().is_empty() {
        return Ok(vec![]);
    }
    s.split(',').map(|p| parse_number(p).ok_or_else(|| cfg_err(format!("{key}: cannot parse '{}'", p.trim())))).collect()
}

/// Raw `key = value` pairs in file order; duplicate keys are an error.
pub fn parse_entries(text: &str, path: &Path) -> Result<Vec<(String, String)>> {
    let mut out: Vec<(String, String)> = vec![];
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| FracError::Parse {
            path: path.to_path_buf(),
            line: i + 1,
            msg: "expected 'key = value'".into(),
        })?;
        let (k, v) = (k.trim().to_string(), v.trim().to_string());
        if k.is_empty() {
            return Err(FracError::Parse { path: path.to_path_buf(), line: i + 1, msg: "empty key".into() });
        }
        if out.iter().any(|(o, _)| *o == k) {
            return Err(FracError::Parse { path: path.to_path_buf(), line: i + 1, msg: format!("duplicate key '{k}'") });
        }
        out.push((k, v));
    }
    Ok(out)
}

struct Lookup {
    entries: Vec<(String, String)>,
}

impl Lookup {
    fn raw(&self, key: &str) -> &str {
        &self.entries.iter().find(|(k, _)| k == key).expect("key table covers every lookup").1
    }

    fn num(&self, key: &str) -> Result<f64> {
        parse_number(self.raw(key)).ok_or_else(|| cfg_err(format!("{key}: expected a number, got '{}'", self.raw(key))))
    }

    fn opt_num(&self, key: &str) -> Result<Option<f64>> {
        if self.raw(key).is_empty() {
            Ok(None)
        } else {
            self.num(key).map(Some)
        }
    }

    fn count(&self, key: &str) -> Result<usize> {
        self.raw(key).parse().map_err(|_| cfg_err(format!("{key}: expected a non-negative integer, got '{}'", self.raw(key))))
    }

    fn list(&self, key: &str) -> Result<Vec<f64>> {
        parse_list(key, self.raw(key))
    }
}

impl ExperimentConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| cfg_err(format!("cannot read {}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::from_entries(parse_entries(&text, path)?, base)
    }

    pub fn parse_str(text: &str) -> Result<Self> {
        Self::from_entries(parse_entries(text, Path::new("<string>"))?, Path::new("."))
    }

    /// Relative `file` initial data paths resolve against `base`.
    pub fn from_entries(given: Vec<(String, String)>, base: &Path) -> Result<Self> {
        for (k, _) in &given {
            if !KEYS.iter().any(|(name, _, _)| name == k) {
                return Err(cfg_err(format!("unknown key '{k}'")));
            }
        }
        let mut entries = vec![];
        for (name, default, _) in KEYS {
            let v = match given.iter().find(|(k, _)| k == name) {
                Some((_, v)) => v.clone(),
                None => default.ok_or_else(|| cfg_err(format!("missing required key '{name}'")))?.to_string(),
            };
            entries.push((name.to_string(), v));
        }
        let l = Lookup { entries };

        let t_final = l.num("t_final")?;
        let params = FracParams::new(l.num("alpha")?, l.num("s")?, l.num("eps2")?, t_final, l.num("reaction.R")?)
            .map_err(|e| cfg_err(e.to_string()))?;
        let domain = (l.num("domain.a")?, l.num("domain.b")?);
        if !(domain.0 < domain.1) {
            return Err(cfg_err(format!("domain.a must be below domain.b, got ({}, {})", domain.0, domain.1)));
        }
        let nodes = l.count("nodes")?;
        if nodes < 2 {
            return Err(cfg_err("nodes must be at least 2"));
        }
        let tau = l.num("tau")?;
        if !(tau > 0.0 && tau <= t_final) {
            return Err(cfg_err(format!("tau must lie in (0, t_final], got {tau}")));
        }
        let t_eval = l.opt_num("t_eval")?.unwrap_or(t_final);
        if !(t_eval > 0.0 && t_eval <= t_final) {
            return Err(cfg_err(format!("t_eval must lie in (0, t_final], got {t_eval}")));
        }
        let reaction = ReactionKind::parse(l.raw("reaction.kind"))
            .filter(|k| *k != ReactionKind::Custom)
            .ok_or_else(|| cfg_err(format!("reaction.kind: unknown kind '{}'", l.raw("reaction.kind"))))?;
        let seed = l.raw("seed").parse().map_err(|_| cfg_err(format!("seed: expected an integer, got '{}'", l.raw("seed"))))?;
        let initial = parse_initial(l.raw("initial.kind"), l.raw("initial.params"), seed, base)?;

        let mesh_levels = l
            .list("levels.nodes")?
            .into_iter()
            .map(|x| if x >= 2.0 && x.fract() == 0.0 { Ok(x as usize) } else { Err(cfg_err(format!("levels.nodes: bad node count {x}"))) })
            .collect::<Result<Vec<_>>>()?;
        if mesh_levels.windows(2).any(|w| w[1] <= w[0]) {
            return Err(cfg_err("levels.nodes must be strictly increasing"));
        }
        let tau_levels = l.list("levels.tau")?;
        if tau_levels.iter().any(|&t| !(t > 0.0)) || tau_levels.windows(2).any(|w| w[1] >= w[0]) {
            return Err(cfg_err("levels.tau must be positive and strictly decreasing"));
        }
        let reference_factor = l.count("reference.factor")?;
        if reference_factor < 2 {
            return Err(cfg_err("reference.factor must be at least 2"));
        }
        let sweep_alpha = l.list("sweep.alpha")?;
        let sweep_s = l.list("sweep.s")?;
        let sweep_tau_fraction = l.num("sweep.tau_fraction")?;
        if !(sweep_tau_fraction > 0.0 && sweep_tau_fraction < 1.0) {
            return Err(cfg_err("sweep.tau_fraction must lie in (0, 1)"));
        }
        let tolerance = l.num("tolerance")?;
        let plateau_tolerance = l.num("plateau.tolerance")?;
        if !(tolerance > 0.0) || !(plateau_tolerance > 0.0) {
            return Err(cfg_err("tolerances must be positive"));
        }
        let output_stride = l.count("output.stride")?.max(1);

        Ok(ExperimentConfig {
            params,
            domain,
            nodes,
            tau,
            t_eval,
            reaction,
            initial,
            seed,
            mesh_levels,
            tau_levels,
            reference_factor,
            sweep_alpha,
            sweep_s,
            sweep_tau_fraction,
            theory_order: l.opt_num("theory_order")?,
            tolerance,
            plateau_tolerance,
            output_stride,
            entries: l.entries,
        })
    }

    /// `# key = value` provenance lines.
    pub fn header(&self) -> Vec<(String, String)> {
        self.entries.iter().map(|(k, v)| (format!("config.{k}"), v.clone())).collect()
    }
}

fn parse_initial(kind: &str, params: &str, seed: u64, base: &Path) -> Result<InitialDatum<f64>> {
    let nums = || parse_list("initial.params", params);
    let arity = |v: &[f64], lo: usize, hi: usize| {
        if v.len() < lo || v.len() > hi {
            Err(cfg_err(format!("initial.params for '{kind}' takes {lo}..={hi} values, got {}", v.len())))
        } else {
            Ok(())
        }
    };
    match kind {
        "step" => {
            let v = nums()?;
            arity(&v, 3, 3)?;
            Ok(InitialDatum::Step { at: v[0], left: v[1], right: v[2] })
        }
        "mode" | "sine" => {
            let v = nums()?;
            arity(&v, 0, 2)?;
            let k = v.first().copied().unwrap_or(1.0);
            if !(k >= 1.0 && k.fract() == 0.0) {
                return Err(cfg_err(format!("initial.params: mode index must be a positive integer, got {k}")));
            }
            let amplitude = v.get(1).copied().unwrap_or(1.0);
            Ok(if kind == "mode" {
                InitialDatum::Mode { k: k as usize, amplitude }
            } else {
                InitialDatum::Sine { k: k as usize, amplitude }
            })
        }
        "random" => {
            let v = nums()?;
            arity(&v, 0, 1)?;
            Ok(InitialDatum::Random { seed, amplitude: v.first().copied().unwrap_or(1.0) })
        }
        "constant" => {
            let v = nums()?;
            arity(&v, 1, 1)?;
            Ok(InitialDatum::Constant(v[0]))
        }
        "file" => {
            if params.is_empty() {
                return Err(cfg_err("initial.params must name the data file"));
            }
            let p = PathBuf::from(params);
            Ok(InitialDatum::File(if p.is_absolute() { p } else { base.join(p) }))
        }
        other => Err(cfg_err(format!("initial.kind: unknown kind '{other}'"))),
    }
}
