//! Gauss–Legendre rules and an adaptive Gauss–Kronrod integrator.

use crate::error::{FracError, Result};
use crate::scalar::Real;

/// Gauss–Legendre rule on the reference interval [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre<T> {
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
}

impl<T: Real> GaussLegendre<T> {
    /// Builds the `n`-point rule. Nodes are found by Newton iteration on the
    /// Legendre recurrence in `f64` and then converted.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0f64; n];
        let mut weights = vec![0.0f64; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        GaussLegendre {
            nodes: nodes.into_iter().map(T::of).collect(),
            weights: weights.into_iter().map(T::of).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights mapped onto [a, b].
    pub fn mapped(&self, a: T, b: T) -> impl Iterator<Item = (T, T)> + '_ {
        let half = (b - a) * T::of(0.5);
        let mid = (a + b) * T::of(0.5);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }

    pub fn integrate<F: FnMut(T) -> T>(&self, a: T, b: T, mut f: F) -> T {
        self.mapped(a, b).map(|(x, w)| w * f(x)).fold(T::zero(), |acc, v| acc + v)
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Tolerances and subdivision budget for [`integrate_adaptive`].
#[derive(Debug, Clone, Copy)]
pub struct AdaptiveOptions<T> {
    pub abs_tol: T,
    pub rel_tol: T,
    pub max_intervals: usize,
}

impl<T: Real> Default for AdaptiveOptions<T> {
    fn default() -> Self {
        AdaptiveOptions { abs_tol: T::zero(), rel_tol: T::TARGET_TOL, max_intervals: 2000 }
    }
}

fn gk15<T: Real, F: FnMut(T) -> T>(f: &mut F, a: T, b: T) -> (T, T) {
    let half = (b - a) * T::of(0.5);
    let mid = (a + b) * T::of(0.5);
    let fc = f(mid);
    let mut kronrod = fc * T::of(WGK[7]);
    let mut gauss = fc * T::of(WG[3]);
    for j in 0..7 {
        let dx = half * T::of(XGK[j]);
        let f1 = f(mid - dx);
        let f2 = f(mid + dx);
        kronrod += (f1 + f2) * T::of(WGK[j]);
        if j % 2 == 1 {
            gauss += (f1 + f2) * T::of(WG[j / 2]);
        }
    }
    let value = kronrod * half;
    let err = ((kronrod - gauss) * half).abs();
    (value, err)
}

/// Globally adaptive 15-point Gauss–Kronrod quadrature of `f` over [a, b].
///
/// Returns the integral and the accumulated error estimate.
pub fn integrate_adaptive<T: Real, F: FnMut(T) -> T>(
    mut f: F,
    a: T,
    b: T,
    opts: AdaptiveOptions<T>,
) -> Result<(T, T)> {
    let (v, e) = gk15(&mut f, a, b);
    let mut intervals = vec![(a, b, v, e)];
    let mut total = v;
    let mut total_err = e;
    loop {
        let goal = opts.abs_tol.max(opts.rel_tol * total.abs());
        if total_err <= goal {
            return Ok((total, total_err));
        }
        if intervals.len() >= opts.max_intervals {
            return Err(FracError::Quadrature(format!(
                "adaptive Gauss-Kronrod: error estimate {:.3e} above goal {:.3e} after {} intervals",
                total_err.as_f64(),
                goal.as_f64(),
                intervals.len()
            )));
        }
        let (idx, _) = intervals
            .iter()
            .enumerate()
            .fold((0, T::zero() - T::one()), |best, (i, iv)| if iv.3 > best.1 { (i, iv.3) } else { best });
        let (lo, hi, pv, pe) = intervals.swap_remove(idx);
        let m = (lo + hi) * T::of(0.5);
        if m <= lo || m >= hi {
            return Err(FracError::Quadrature("interval can no longer be bisected".into()));
        }
        let (v1, e1) = gk15(&mut f, lo, m);
        let (v2, e2) = gk15(&mut f, m, hi);
        total += v1 + v2 - pv;
        total_err += e1 + e2 - pe;
        intervals.push((lo, m, v1, e1));
        intervals.push((m, hi, v2, e2));
        // Re-sum to stop drift from the running updates.
        if intervals.len() % 64 == 0 {
            total = intervals.iter().fold(T::zero(), |acc, iv| acc + iv.2);
            total_err = intervals.iter().fold(T::zero(), |acc, iv| acc + iv.3);
        }
    }
}
