//! Reaction terms g(u). The truncated cubic equals u - u³ on [-1-R, 1+R],
//! is blended by a quintic on [1+R, 1+2R] (mirrored oddly) into the constant
//! g(1+R), and is constant beyond; it is C² with |g|, |g'|, |g''| bounded.

use crate::error::{FracError, Result};
use crate::scalar::Real;
use std::fmt;
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReactionKind {
    Zero,
    /// u - u³ everywhere; the bound is taken on [-1-R, 1+R].
    Cubic,
    TruncatedCubic,
    Custom,
}

impl ReactionKind {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "zero" | "none" => Some(ReactionKind::Zero),
            "cubic" => Some(ReactionKind::Cubic),
            "truncated-cubic" | "truncated" => Some(ReactionKind::TruncatedCubic),
            "custom" => Some(ReactionKind::Custom),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ReactionKind::Zero => "zero",
            ReactionKind::Cubic => "cubic",
            ReactionKind::TruncatedCubic => "truncated-cubic",
            ReactionKind::Custom => "custom",
        }
    }
}

type CustomFn<T> = Arc<dyn Fn(T) -> T + Send + Sync>;

#[derive(Clone)]
pub struct ReactionTerm<T> {
    kind: ReactionKind,
    r: T,
    bound: T,
    custom: Option<CustomFn<T>>,
}

impl<T: Real> fmt::Debug for ReactionTerm<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ReactionTerm").field("kind", &self.kind).field("r", &self.r).field("bound", &self.bound).finish()
    }
}

/// Builds a reaction of the given kind. `Custom` needs [`ReactionTerm::custom`].
pub fn make_reaction<T: Real>(kind: ReactionKind, r: T) -> Result<ReactionTerm<T>> {
    if !(r > T::zero()) || !r.is_finite() {
        return Err(FracError::domain(format!("truncation radius must be positive, got {r}")));
    }
    let mut g = ReactionTerm { kind, r, bound: T::zero(), custom: None };
    g.bound = match kind {
        ReactionKind::Zero => T::zero(),
        ReactionKind::Cubic => cubic_bound(T::one() + r),
        ReactionKind::TruncatedCubic => g.sampled_bound(),
        ReactionKind::Custom => {
            return Err(FracError::domain("custom reactions are built with ReactionTerm::custom"));
        }
    };
    Ok(g)
}

/// max of |x - x³|, |1 - 3x²|, |6x| on [-k, k].
fn cubic_bound<T: Real>(k: T) -> T {
    let one = T::one();
    let three = T::of(3.0);
    let mut g_max = (k - k * k * k).abs();
    // interior extremum of x - x³ at 1/√3
    if k * k * three >= one {
        g_max = g_max.max(T::of(2.0) / (three * three.sqrt()));
    }
    let d_max = one.max((one - three * k * k).abs());
    g_max.max(d_max).max(T::of(6.0) * k)
}

impl<T: Real> ReactionTerm<T> {
    /// User-supplied g with its declared bound B.
    pub fn custom(f: impl Fn(T) -> T + Send + Sync + 'static, bound: T) -> Result<Self> {
        if !(bound >= T::zero()) {
            return Err(FracError::domain(format!("declared bound must be non-negative, got {bound}")));
        }
        Ok(ReactionTerm { kind: ReactionKind::Custom, r: T::one(), bound, custom: Some(Arc::new(f)) })
    }

    pub fn kind(&self) -> ReactionKind {
        self.kind
    }

    pub fn radius(&self) -> T {
        self.r
    }

    /// B with |g|, |g'|, |g''| ≤ B.
    pub fn bound(&self) -> T {
        self.bound
    }

    pub fn is_zero(&self) -> bool {
        self.kind == ReactionKind::Zero
    }

    /// (g, g', g'').
    pub fn eval_all(&self, x: T) -> (T, T, T) {
        let one = T::one();
        match self.kind {
            ReactionKind::Zero => (T::zero(), T::zero(), T::zero()),
            ReactionKind::Cubic => (x - x * x * x, one - T::of(3.0) * x * x, -T::of(6.0) * x),
            ReactionKind::Custom => (self.custom.as_ref().expect("custom reaction")(x), T::zero(), T::zero()),
            ReactionKind::TruncatedCubic => {
                let ax = x.abs();
                let sign = if x < T::zero() { -one } else { one };
                let k1 = one + self.r;
                if ax <= k1 {
                    return (x - x * x * x, one - T::of(3.0) * x * x, -T::of(6.0) * x);
                }
                let f0 = k1 - k1 * k1 * k1;
                if ax >= k1 + self.r {
                    return (sign * f0, T::zero(), T::zero());
                }
                let l = self.r;
                let d0 = (one - T::of(3.0) * k1 * k1) * l;
                let dd0 = -T::of(6.0) * k1 * l * l;
                let t = (ax - k1) / l;
                let (t2, t3, t4, t5) = (t * t, t * t * t, t * t * t * t, t * t * t * t * t);
                let h1 = t - T::of(6.0) * t3 + T::of(8.0) * t4 - T::of(3.0) * t5;
                let h1d = one - T::of(18.0) * t2 + T::of(32.0) * t3 - T::of(15.0) * t4;
                let h1dd = -T::of(36.0) * t + T::of(96.0) * t2 - T::of(60.0) * t3;
                let half = T::of(0.5);
                let h2 = half * (t2 - T::of(3.0) * t3 + T::of(3.0) * t4 - t5);
                let h2d = half * (T::of(2.0) * t - T::of(9.0) * t2 + T::of(12.0) * t3 - T::of(5.0) * t4);
                let h2dd = half * (T::of(2.0) - T::of(18.0) * t + T::of(36.0) * t2 - T::of(20.0) * t3);
                let p = f0 + d0 * h1 + dd0 * h2;
                let pd = (d0 * h1d + dd0 * h2d) / l;
                let pdd = (d0 * h1dd + dd0 * h2dd) / (l * l);
                // odd extension: g(-x) = -g(x), g' even, g'' odd
                (sign * p, pd, sign * pdd)
            }
        }
    }

    pub fn eval(&self, x: T) -> T {
        self.eval_all(x).0
    }

    fn sampled_bound(&self) -> T {
        let k2 = T::one() + T::of(2.0) * self.r;
        let n = 20_000;
        let mut b = cubic_bound(T::one() + self.r);
        for i in 0..=n {
            let x = k2 * T::of_usize(i) / T::of_usize(n);
            let (g, d, dd) = self.eval_all(x);
            b = b.max(g.abs()).max(d.abs()).max(dd.abs());
        }
        b
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_values() {
        let g = make_reaction(ReactionKind::TruncatedCubic, 0.5f64).unwrap();
        assert_eq!(g.eval(0.0), 0.0);
        assert_eq!(g.eval(1.0), 0.0);
        assert_eq!(g.eval(-1.0), 0.0);
        assert_eq!(g.eval_all(0.0).1, 1.0);
        let far = g.eval(1.0 + 2.0 * 0.5 + 5.0);
        assert!((far - (1.5 - 1.5f64.powi(3))).abs() < 1e-15);
        assert!((g.eval(-7.0) + far).abs() < 1e-15);
    }

    #[test]
    fn blend_is_c2() {
        for &r in &[0.1f64, 0.5, 1.0] {
            let g = make_reaction(ReactionKind::TruncatedCubic, r).unwrap();
            for &knot in &[1.0 + r, 1.0 + 2.0 * r, -1.0 - r, -1.0 - 2.0 * r] {
                let e = 1e-12;
                let (a, ad, add) = g.eval_all(knot - e);
                let (b, bd, bdd) = g.eval_all(knot + e);
                assert!((a - b).abs() < 1e-7, "value jump at {knot}");
                assert!((ad - bd).abs() < 1e-6, "slope jump at {knot}");
                assert!((add - bdd).abs() < 1e-6, "curvature jump at {knot}");
            }
            // finite-difference consistency inside the blend
            let x = 1.0 + 1.3 * r;
            let e = 1e-5;
            let fd = (g.eval(x + e) - g.eval(x - e)) / (2.0 * e);
            assert!((fd - g.eval_all(x).1).abs() < 1e-6);
            let fdd = (g.eval_all(x + e).1 - g.eval_all(x - e).1) / (2.0 * e);
            assert!((fdd - g.eval_all(x).2).abs() < 1e-5);
        }
    }

    #[test]
    fn bound_and_guards() {
        let g = make_reaction(ReactionKind::TruncatedCubic, 0.5f64).unwrap();
        assert!(g.bound() >= 9.0);
        for i in -4000..=4000 {
            let (a, b, c) = g.eval_all(i as f64 * 1e-3);
            assert!(a.abs() <= g.bound() && b.abs() <= g.bound() && c.abs() <= g.bound());
        }
        assert!(make_reaction(ReactionKind::Cubic, 0.0f64).is_err());
        assert!(make_reaction(ReactionKind::Custom, 0.5f64).is_err());
        assert_eq!(make_reaction(ReactionKind::Zero, 0.5f64).unwrap().bound(), 0.0);
        let c = make_reaction(ReactionKind::Cubic, 0.5f64).unwrap();
        assert_eq!(c.bound(), 9.0);
        let k = ReactionTerm::custom(|x: f64| x.sin(), 1.0).unwrap();
        assert_eq!(k.eval(0.0), 0.0);
    }
}
