//! Two-parameter Mittag-Leffler function on the real line.
//!
//! The evaluator picks one of three representations per argument:
//!
//! * the power series, summed with Neumaier compensation, whenever its
//!   rounding error estimate meets the tolerance (small |z|, or any z > 0);
//! * the algebraic asymptotic expansion for large negative z, plus the
//!   exponential branch terms when alpha >= 1;
//! * for 0 < alpha < 1 and mu in {1, alpha, alpha + 1}, a real integral
//!   representation over phi in (0, alpha*pi) with integrands
//!   exp(-(x u)^(1/alpha)), u = sin(phi) / sin(alpha*pi - phi),
//!   integrated by adaptive Gauss–Kronrod. This covers the band where the
//!   series has lost too many digits to cancellation and the asymptotic
//!   expansion has not yet become accurate.

use super::gamma::{ln_gamma, rgamma};
use crate::error::{FracError, Result};
use crate::quadrature::{integrate_adaptive, AdaptiveOptions};
use crate::scalar::Real;

/// Order and second parameter of E_{alpha,mu}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MlParams<T> {
    alpha: T,
    mu: T,
}

impl<T: Real> MlParams<T> {
    pub fn new(alpha: T, mu: T) -> Result<Self> {
        if !(alpha > T::zero()) {
            return Err(FracError::domain(format!("Mittag-Leffler order must be positive, got {alpha}")));
        }
        if alpha > T::of(2.0) {
            return Err(FracError::domain(format!("Mittag-Leffler order above 2 is not supported, got {alpha}")));
        }
        if !mu.is_finite() {
            return Err(FracError::domain("Mittag-Leffler second parameter must be finite"));
        }
        Ok(MlParams { alpha, mu })
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn mu(&self) -> T {
        self.mu
    }
}

/// Which representation produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MlRegime {
    Origin,
    Series,
    Asymptotic,
    Integral,
}

#[derive(Debug, Clone, Copy)]
pub struct MlEvaluation<T> {
    pub value: T,
    /// Estimated relative error.
    pub rel_error: T,
    pub regime: MlRegime,
}

/// Largest x^(1/alpha) for which the negative-axis series is attempted; the
/// largest series term grows like exp(x^(1/alpha)).
const SERIES_GROWTH_LIMIT: f64 = 36.0;
const SERIES_MAX_TERMS: usize = 20_000;
const ASYMPTOTIC_MAX_TERMS: usize = 60;

fn default_tol<T: Real>() -> T {
    (T::EPS * T::of(500.0)).max(T::of(1e-13))
}

fn close<T: Real>(a: T, b: T) -> bool {
    (a - b).abs() <= T::of(4.0) * T::EPS * (T::one() + a.abs().max(b.abs()))
}

/// E_{alpha,mu}(z).
pub fn mittag_leffler<T: Real>(p: MlParams<T>, z: T) -> Result<T> {
    mittag_leffler_detailed(p, z).map(|e| e.value)
}

/// E_{alpha,mu}(z) with the regime used and its error estimate.
pub fn mittag_leffler_detailed<T: Real>(p: MlParams<T>, z: T) -> Result<MlEvaluation<T>> {
    if !z.is_finite() {
        return Err(FracError::domain("Mittag-Leffler argument must be finite"));
    }
    let tol = default_tol::<T>();
    if z == T::zero() {
        return Ok(MlEvaluation { value: rgamma(p.mu), rel_error: T::EPS, regime: MlRegime::Origin });
    }
    let x = z.abs();
    if z > T::zero() {
        let s = ml_series(p, z)?;
        if s.rel_error <= tol {
            return Ok(s);
        }
        return Err(FracError::Convergence(format!(
            "E_{{{},{}}}({}) : series error estimate {:.2e} exceeds {:.2e}; large positive arguments are not supported",
            p.alpha, p.mu, z, s.rel_error.as_f64(), tol.as_f64()
        )));
    }

    let growth = x.powf(T::one() / p.alpha);
    let mut best: Option<MlEvaluation<T>> = None;
    let keep = |e: MlEvaluation<T>, best: &mut Option<MlEvaluation<T>>| {
        if best.is_none_or(|b| e.rel_error < b.rel_error) {
            *best = Some(e);
        }
    };

    if growth <= T::of(SERIES_GROWTH_LIMIT) {
        if let Ok(s) = ml_series(p, z) {
            if s.rel_error <= tol {
                return Ok(s);
            }
            keep(s, &mut best);
        }
    }
    if x >= T::one() {
        if let Ok(a) = ml_asymptotic(p, z) {
            if a.rel_error <= tol {
                return Ok(a);
            }
            keep(a, &mut best);
        }
    }
    if p.alpha < T::one() {
        if let Some(r) = ml_integral(p, z) {
            let e = r?;
            if e.rel_error <= tol * T::of(10.0) {
                return Ok(e);
            }
            keep(e, &mut best);
        }
    }
    let detail = best.map_or("no representation applies".to_string(), |b| {
        format!("best estimate {:.2e} from {:?}", b.rel_error.as_f64(), b.regime)
    });
    Err(FracError::Convergence(format!(
        "E_{{{},{}}}({}) could not be evaluated to relative tolerance {:.1e}: {}",
        p.alpha,
        p.mu,
        z,
        tol.as_f64(),
        detail
    )))
}

/// Power series sum_k z^k / Gamma(alpha k + mu), compensated.
pub fn ml_series<T: Real>(p: MlParams<T>, z: T) -> Result<MlEvaluation<T>> {
    let (alpha, mu) = (p.alpha, p.mu);
    let mut sum = T::zero();
    let mut comp = T::zero();
    let mut abs_sum = T::zero();
    let mut zpow = T::one();
    let ln_x = z.abs().ln();
    let negative = z < T::zero();
    let mut prev = T::INFINITY;
    let mut last = T::zero();
    for k in 0..SERIES_MAX_TERMS {
        let arg = alpha * T::of_usize(k) + mu;
        let term = if arg < T::of(160.0) && zpow.is_finite() {
            zpow * rgamma(arg)
        } else {
            let (lg, sign) = ln_gamma(arg);
            let odd = negative && k % 2 == 1;
            let mag = (T::of_usize(k) * ln_x - lg).exp();
            if odd {
                -sign * mag
            } else {
                sign * mag
            }
        };
        // Neumaier summation
        let t = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
        abs_sum += term.abs();
        last = term.abs();
        if !abs_sum.is_finite() {
            break;
        }
        let total = (sum + comp).abs();
        if k > 2 && last <= T::EPS * total.max(T::of(1e-300)) && last <= prev {
            let value = sum + comp;
            let rel_error = (T::of(32.0) * T::EPS * abs_sum + last) / value.abs().max(T::of(1e-300));
            return Ok(MlEvaluation { value, rel_error, regime: MlRegime::Series });
        }
        prev = last;
        zpow *= z;
    }
    let value = sum + comp;
    Err(FracError::Convergence(format!(
        "Mittag-Leffler series did not converge for z = {z} (last term {:.3e}, partial sum {:.3e})",
        last.as_f64(),
        value.as_f64()
    )))
}

/// Large-|z| expansion for z < 0:
/// E(z) ~ exp-branch terms - sum_{k>=1} z^(-k) / Gamma(mu - alpha k).
pub fn ml_asymptotic<T: Real>(p: MlParams<T>, z: T) -> Result<MlEvaluation<T>> {
    if z >= T::zero() {
        return Err(FracError::domain("asymptotic expansion is implemented for negative arguments"));
    }
    let (alpha, mu) = (p.alpha, p.mu);
    let x = -z;
    let inv_z = T::one() / z;
    let mut zpow = T::one();
    let mut sum = T::zero();
    let mut prev_env = T::INFINITY;
    let mut omitted = T::zero();
    let ln_x = x.ln();
    // integer alpha and mu: 1/Gamma(mu - alpha k) vanishes for all large k and
    // the algebraic part is a finite sum
    let terminating = alpha == alpha.round() && mu == mu.round();
    for k in 1..=ASYMPTOTIC_MAX_TERMS + 1 {
        zpow *= inv_z;
        let kt = T::of_usize(k);
        let r = rgamma(mu - alpha * kt);
        let term = -zpow * r;
        // |1/Gamma(mu - alpha k)| <= Gamma(alpha k + 1 - mu) / pi; the envelope
        // decides truncation so that terms near a pole do not stop the sum early
        let shifted = alpha * kt + T::one() - mu;
        if terminating && shifted > T::zero() && mu - alpha * kt <= T::zero() {
            break;
        }
        let env = if shifted > T::zero() {
            (ln_gamma(shifted).0 - kt * ln_x).exp() / T::pi()
        } else {
            term.abs()
        };
        if k > ASYMPTOTIC_MAX_TERMS || env > prev_env {
            omitted = env;
            break;
        }
        sum += term;
        prev_env = env;
    }

    let growth = x.powf(T::one() / alpha);
    let theta = T::pi() / alpha;
    let one = T::one();
    let mut exp_part = T::zero();
    let mut exp_err = T::zero();
    if alpha == one {
        // single branch zeta = z; real only for integer mu
        let m = one - mu;
        if m != m.round() {
            return Err(FracError::Convergence(format!(
                "asymptotic expansion of E_{{1,{mu}}} needs an integer second parameter"
            )));
        }
        let sign = if m.to_i64().unwrap_or(0) % 2 == 0 { one } else { -one };
        exp_part = sign * x.powf(m) * z.exp();
    } else if alpha > one {
        // conjugate pair zeta = x^(1/alpha) exp(+-i pi / alpha)
        let mag = growth.powf(one - mu) * (growth * theta.cos()).exp();
        let phase = (one - mu) * theta + growth * theta.sin();
        exp_part = T::of(2.0) / alpha * mag * phase.cos();
    } else {
        let decay = theta.cos().abs();
        exp_err = growth.powf(one - mu) * (-growth * decay).exp() / alpha;
    }
    let value = sum + exp_part;
    let scale = value.abs().max(T::of(1e-300));
    let rel_error = (omitted + exp_err + T::of(8.0) * T::EPS * (sum.abs() + exp_part.abs())) / scale;
    Ok(MlEvaluation { value, rel_error, regime: MlRegime::Asymptotic })
}

/// Integral representation for 0 < alpha < 1 and z < 0; `None` when mu is
/// not one of alpha, 1 or alpha + 1.
pub fn ml_integral<T: Real>(p: MlParams<T>, z: T) -> Option<Result<MlEvaluation<T>>> {
    let (alpha, mu) = (p.alpha, p.mu);
    if !(alpha < T::one()) || z >= T::zero() {
        return None;
    }
    enum Kind {
        One,
        Alpha,
        AlphaPlusOne,
    }
    let kind = if close(mu, T::one()) {
        Kind::One
    } else if close(mu, alpha) {
        Kind::Alpha
    } else if close(mu, alpha + T::one()) {
        Kind::AlphaPlusOne
    } else {
        return None;
    };
    let x = -z;
    let inv_alpha = T::one() / alpha;
    let api = alpha * T::pi();
    let integrand = move |phi: T| -> T {
        let u = phi.sin() / (api - phi).sin();
        let w = (x * u).powf(inv_alpha);
        match kind {
            Kind::One => (-w).exp(),
            Kind::Alpha => w / x * (-w).exp(),
            Kind::AlphaPlusOne => -(-w).exp_m1() / x,
        }
    };
    let tol = default_tol::<T>();
    let opts = AdaptiveOptions { abs_tol: T::zero(), rel_tol: tol, max_intervals: 4000 };
    Some(integrate_adaptive(integrand, T::zero(), api, opts).map(|(v, err)| {
        let value = v / api;
        let rel_error = err / v.abs().max(T::of(1e-300)) + T::of(16.0) * T::EPS;
        MlEvaluation { value, rel_error, regime: MlRegime::Integral }
    }))
}

/// t^alpha E_{alpha,alpha+1}(-lambda t^alpha), the closed form of
/// int_0^t s^(alpha-1) E_{alpha,alpha}(-lambda s^alpha) ds.
pub fn ml_integral_primitive<T: Real>(p: MlParams<T>, lambda: T, t: T) -> Result<T> {
    if !close(p.mu, p.alpha) {
        return Err(FracError::domain(format!(
            "primitive is defined for mu = alpha, got alpha = {}, mu = {}",
            p.alpha, p.mu
        )));
    }
    if lambda < T::zero() {
        return Err(FracError::domain(format!("lambda must be non-negative, got {lambda}")));
    }
    if !(t > T::zero()) {
        return Err(FracError::domain(format!("t must be positive, got {t}")));
    }
    let ta = t.powf(p.alpha);
    let q = MlParams::new(p.alpha, p.alpha + T::one())?;
    Ok(ta * mittag_leffler(q, -lambda * ta)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ml(alpha: f64, mu: f64, z: f64) -> f64 {
        mittag_leffler(MlParams::new(alpha, mu).unwrap(), z).unwrap()
    }

    #[test]
    fn exponential_reduction() {
        assert!((ml(1.0, 1.0, -1.0) - (-1.0f64).exp()).abs() < 1e-15);
        assert!((ml(1.0, 2.0, -3.0) - (1.0 - (-3.0f64).exp()) / 3.0).abs() < 1e-15);
    }

    #[test]
    fn origin_value() {
        assert_eq!(ml(0.5, 1.0, 0.0), 1.0);
        assert!((ml(0.5, 0.5, 0.0) - 1.0 / std::f64::consts::PI.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn half_order_matches_erfc_identity() {
        // E_{1/2,1}(-1) = e * erfc(1)
        let v = ml(0.5, 1.0, -1.0);
        assert!((v - 0.427_583_576_155_807).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_order() {
        assert!(MlParams::new(0.0, 1.0).is_err());
        assert!(MlParams::new(-0.3, 1.0).is_err());
        assert!(MlParams::new(2.5, 1.0).is_err());
    }

    #[test]
    fn primitive_reductions() {
        let p = MlParams::new(1.0f64, 1.0).unwrap();
        for &t in &[0.1f64, 1.0, 4.0] {
            let v = ml_integral_primitive(p, 1.0, t).unwrap();
            assert!((v - (1.0 - (-t).exp())).abs() < 1e-14);
        }
        assert!((ml_integral_primitive(p, 0.0, 2.0).unwrap() - 2.0).abs() < 1e-15);
        let half = MlParams::new(0.5, 0.5).unwrap();
        let v = ml_integral_primitive(half, 1.0, 1.0).unwrap();
        assert!((v - ml(0.5, 1.5, -1.0)).abs() < 1e-15);
        assert!(ml_integral_primitive(MlParams::new(0.5, 1.0).unwrap(), 1.0, 1.0).is_err());
    }

    #[test]
    fn alpha_two_is_cosine() {
        for &x in &[0.5f64, 4.0, 30.0, 200.0] {
            let v = ml(2.0, 1.0, -x);
            assert!((v - x.sqrt().cos()).abs() < 1e-10, "x={x}: {v}");
        }
    }

    #[test]
    fn large_positive_argument_is_reported() {
        let r = mittag_leffler(MlParams::new(0.2, 1.0).unwrap(), 40.0);
        assert!(matches!(r, Err(FracError::Convergence(_))));
    }
}
