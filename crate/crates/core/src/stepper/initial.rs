//! Initial data and the seeded generator for random nodal data.

use crate::error::{FracError, Result};
use crate::femcore::{l2_project, l2_project_piecewise, EigenDecomposition, FemSystem};
use crate::scalar::Real;
use nalgebra::DVector;
use std::path::PathBuf;

/// 64-bit linear congruential generator (Knuth's MMIX constants):
/// x ← 6364136223846793005 x + 1442695040888963407 (mod 2⁶⁴),
/// u = (x >> 11) / 2⁵³ ∈ [0, 1). The first output uses the state after one update.
#[derive(Debug, Clone)]
pub struct Lcg64 {
    state: u64,
}

impl Lcg64 {
    pub const MULTIPLIER: u64 = 6364136223846793005;
    pub const INCREMENT: u64 = 1442695040888963407;

    pub fn new(seed: u64) -> Self {
        Lcg64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_mul(Self::MULTIPLIER).wrapping_add(Self::INCREMENT);
        self.state
    }

    /// Uniform in [0, 1).
    pub fn next_unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Uniform in [-1, 1).
    pub fn next_symmetric(&mut self) -> f64 {
        2.0 * self.next_unit() - 1.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitialDatum<T> {
    /// L² projection of `left` on (a, at) and `right` on [at, b).
    Step { at: T, left: T, right: T },
    /// The k-th discrete eigenmode (1-based), M-normalized and scaled by `amplitude`.
    Mode { k: usize, amplitude: T },
    /// L² projection of amplitude · sin(kπ(x - a)/(b - a)).
    Sine { k: usize, amplitude: T },
    /// Nodal values amplitude · U(-1, 1) from [`Lcg64`].
    Random { seed: u64, amplitude: T },
    /// Nodal constant.
    Constant(T),
    /// Whitespace or comma separated nodal values, one node per line.
    File(PathBuf),
}

impl<T: Real> InitialDatum<T> {
    pub fn needs_eigen(&self) -> bool {
        matches!(self, InitialDatum::Mode { .. })
    }

    pub fn build(&self, system: &FemSystem<T>, eig: Option<&EigenDecomposition<T>>) -> Result<DVector<T>> {
        let n = system.dim();
        match self {
            InitialDatum::Step { at, left, right } => {
                let (at, left, right) = (*at, *left, *right);
                l2_project_piecewise(&system.mesh, &system.mass, |x| if x < at { left } else { right }, &[at])
            }
            InitialDatum::Mode { k, amplitude } => {
                let eig = eig.ok_or_else(|| FracError::domain("mode initial data needs the eigendecomposition"))?;
                if *k == 0 || *k > eig.dim() {
                    return Err(FracError::domain(format!("mode index {k} outside 1..={}", eig.dim())));
                }
                Ok(eig.modes.column(k - 1).into_owned() * *amplitude)
            }
            InitialDatum::Sine { k, amplitude } => {
                let (a, len) = (system.mesh.a(), system.mesh.length());
                let (kf, amp) = (T::of_usize(*k), *amplitude);
                l2_project(&system.mesh, &system.mass, |x| amp * (kf * T::pi() * (x - a) / len).sin())
            }
            InitialDatum::Random { seed, amplitude } => {
                let mut rng = Lcg64::new(*seed);
                Ok(DVector::from_fn(n, |_, _| T::of(rng.next_symmetric()) * *amplitude))
            }
            InitialDatum::Constant(c) => Ok(DVector::from_element(n, *c)),
            InitialDatum::File(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| FracError::io(path, e))?;
                let mut vals = Vec::with_capacity(n);
                for (lineno, line) in text.lines().enumerate() {
                    let line = line.trim();
                    if line.is_empty() || line.starts_with('#') {
                        continue;
                    }
                    // last field of the line, so `node,x,value` rows also work
                    let field = line.split(|c: char| c == ',' || c.is_whitespace()).rfind(|t| !t.is_empty());
                    let v: f64 = match field.map(str::parse) {
                        Some(Ok(v)) => v,
                        _ if vals.is_empty() => continue, // header row
                        _ => {
                            return Err(FracError::Parse {
                                path: path.clone(),
                                line: lineno + 1,
                                msg: format!("not a number: {line:?}"),
                            })
                        }
                    };
                    vals.push(T::of(v));
                }
                if vals.len() != n {
                    return Err(FracError::DimensionMismatch { expected: n, found: vals.len() });
                }
                Ok(DVector::from_vec(vals))
            }
        }
    }
}
