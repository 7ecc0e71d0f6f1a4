#![allow(dead_code)]

use std::path::PathBuf;

pub fn fixture(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name);
    std::fs::read_to_string(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

/// Whitespace-separated numeric rows, `#` comments skipped.
pub fn fixture_rows(name: &str) -> Vec<Vec<f64>> {
    fixture(name)
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| l.split_whitespace().map(|t| t.parse().expect("numeric fixture")).collect())
        .collect()
}

pub fn config_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name)
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

/// Fourth central difference of |x|^p at d. For d ≥ 5 the binomial series
/// d^p Σ_{k≥4, even} C(p,k) (2^(k+1) - 8) d^(-k) avoids the cancellation of
/// the direct stencil.
fn fourth_difference(d: usize, p: f64) -> f64 {
    if d < 5 {
        let stencil = [1.0, -4.0, 6.0, -4.0, 1.0];
        return stencil.iter().zip(-2i64..=2).map(|(w, q)| w * ((d as i64 + q).abs() as f64).powf(p)).sum();
    }
    let x = 1.0 / d as f64;
    let (mut binom, mut xk, mut sum) = (1.0, 1.0, 0.0);
    for k in 1..400 {
        binom *= (p - (k - 1) as f64) / k as f64;
        xk *= x;
        if k >= 4 && k % 2 == 0 {
            let t = binom * (2f64.powi(k + 1) - 8.0) * xk;
            sum += t;
            if t.abs() < 1e-18 * sum.abs() {
                break;
            }
        }
    }
    (d as f64).powf(p) * sum
}

/// K_{i,i+d} of the unsymmetrized form on a uniform mesh, from the
/// full-line double integral of two hat functions; `c` is C(1,s), s ≠ 1/2.
pub fn stiffness_closed_form(d: usize, h: f64, s: f64, c: f64) -> f64 {
    let p = 3.0 - 2.0 * s;
    c * h.powf(1.0 - 2.0 * s) * fourth_difference(d, p) / (s * (1.0 - 2.0 * s) * (2.0 - 2.0 * s) * (3.0 - 2.0 * s))
}
