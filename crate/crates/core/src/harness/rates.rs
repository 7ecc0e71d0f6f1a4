//! Convergence tables and least-squares order fits.

use super::csvio::{fmt_f64, read_csv, write_csv};
use crate::error::{FracError, Result};
use std::path::Path;

pub const RATE_HEADER: [&str; 3] = ["level", "step", "error"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Space,
    Time,
}

impl Axis {
    pub fn name(self) -> &'static str {
        match self {
            Axis::Space => "space",
            Axis::Time => "time",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "space" => Some(Axis::Space),
            "time" => Some(Axis::Time),
            _ => None,
        }
    }
}

/// Slope of the least-squares line through (log step, log error).
pub fn fit_order(levels: &[(f64, f64)]) -> f64 {
    let n = levels.len() as f64;
    let pts: Vec<(f64, f64)> = levels.iter().map(|&(h, e)| (h.ln(), e.ln())).collect();
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateReport {
    pub axis: Axis,
    /// (h or τ, error), coarsest first.
    pub levels: Vec<(f64, f64)>,
    pub fitted_order: f64,
    pub theory_order: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl RateReport {
    pub fn new(axis: Axis, levels: Vec<(f64, f64)>, theory_order: f64, tolerance: f64) -> Result<Self> {
        if levels.len() < 3 {
            return Err(FracError::InsufficientLevels(levels.len()));
        }
        if levels.iter().any(|&(h, e)| !(h > 0.0) || !(e > 0.0) || !e.is_finite()) {
            return Err(FracError::InvalidStudy("steps and errors must be positive and finite".into()));
        }
        if levels.windows(2).any(|w| w[1].0 >= w[0].0) {
            return Err(FracError::InvalidStudy("step sizes must decrease strictly from level to level".into()));
        }
        let fitted_order = fit_order(&levels);
        let pass = (fitted_order - theory_order).abs() <= tolerance;
        Ok(RateReport { axis, levels, fitted_order, theory_order, tolerance, pass })
    }

    /// Order fitted without the coarsest level (needs at least 4 levels).
    pub fn order_without_coarsest(&self) -> Option<f64> {
        (self.levels.len() >= 4).then(|| fit_order(&self.levels[1..]))
    }

    /// Successive-level orders log(e_l / e_{l+1}) / log(h_l / h_{l+1}).
    pub fn local_orders(&self) -> Vec<f64> {
        self.levels.windows(2).map(|w| (w[0].1 / w[1].1).ln() / (w[0].0 / w[1].0).ln()).collect()
    }

    fn summary(&self) -> Vec<(String, String)> {
        let mut c = vec![
            ("axis".to_string(), self.axis.name().to_string()),
            ("fitted_order".to_string(), fmt_f64(self.fitted_order)),
            ("theory_order".to_string(), fmt_f64(self.theory_order)),
            ("tolerance".to_string(), fmt_f64(self.tolerance)),
            ("pass".to_string(), self.pass.to_string()),
        ];
        if let Some(o) = self.order_without_coarsest() {
            c.push(("order_without_coarsest".to_string(), fmt_f64(o)));
        }
        c
    }

    /// Writes the `level,step,error` table; `extra` comments (e.g. the
    /// configuration) follow the report summary.
    pub fn emit_csv(&self, path: &Path, extra: &[(String, String)]) -> Result<()> {
        let mut comments = self.summary();
        comments.extend_from_slice(extra);
        let rows = self.levels.iter().enumerate().map(|(i, &(h, e))| vec![i.to_string(), fmt_f64(h), fmt_f64(e)]);
        write_csv(path, &comments, &RATE_HEADER, rows)
    }

    pub fn parse_csv(path: &Path) -> Result<Self> {
        let t = read_csv(path)?;
        let bad = |msg: String| FracError::Parse { path: path.to_path_buf(), line: 0, msg };
        if t.header != RATE_HEADER {
            return Err(bad(format!("expected header {}, found {}", RATE_HEADER.join(","), t.header.join(","))));
        }
        let num = |key: &str| -> Result<f64> {
            t.comment(key)
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| bad(format!("missing or malformed '{key}' comment")))
        };
        let axis = t.comment("axis").and_then(Axis::parse).ok_or_else(|| bad("missing or malformed 'axis' comment".into()))?;
        let mut levels = vec![];
        for (i, r) in t.rows.iter().enumerate() {
            if r[0] != i.to_string() {
                return Err(bad(format!("row {i} has level '{}'", r[0])));
            }
            let h = r[1].parse().map_err(|_| bad(format!("row {i}: bad step '{}'", r[1])))?;
            let e = r[2].parse().map_err(|_| bad(format!("row {i}: bad error '{}'", r[2])))?;
            levels.push((h, e));
        }
        RateReport::new(axis, levels, num("theory_order")?, num("tolerance")?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law() {
        let levels: Vec<(f64, f64)> = (0..5).map(|i| (0.1 / 2f64.powi(i), 3.0 * (0.1 / 2f64.powi(i)).powf(1.5))).collect();
        let r = RateReport::new(Axis::Time, levels, 1.5, 0.01).unwrap();
        assert!((r.fitted_order - 1.5).abs() < 1e-12);
        assert!(r.pass);
        assert!(r.local_orders().iter().all(|o| (o - 1.5).abs() < 1e-12));
    }

    #[test]
    fn guards() {
        assert!(matches!(RateReport::new(Axis::Space, vec![], 1.0, 0.1), Err(FracError::InsufficientLevels(0))));
        let same = vec![(0.1, 1e-3), (0.1, 1e-3), (0.1, 1e-3)];
        assert!(matches!(RateReport::new(Axis::Space, same, 1.0, 0.1), Err(FracError::InvalidStudy(_))));
    }
}
