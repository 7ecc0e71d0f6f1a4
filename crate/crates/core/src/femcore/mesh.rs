use crate::error::{FracError, Result};
use crate::scalar::Real;

/// Uniform mesh of (a, b) with `n` interior nodes x_i = a + i h, i = 1..=n.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mesh1d<T> {
    a: T,
    b: T,
    n: usize,
    h: T,
}

impl<T: Real> Mesh1d<T> {
    pub fn new(a: T, b: T, n: usize) -> Result<Self> {
        if !(a < b) || !a.is_finite() || !b.is_finite() {
            return Err(FracError::domain(format!("mesh needs a < b, got ({a}, {b})")));
        }
        if n < 2 {
            return Err(FracError::domain(format!("mesh needs at least 2 interior nodes, got {n}")));
        }
        let h = (b - a) / T::of_usize(n + 1);
        Ok(Mesh1d { a, b, n, h })
    }

    pub fn a(&self) -> T {
        self.a
    }

    pub fn b(&self) -> T {
        self.b
    }

    /// Interior node count.
    pub fn n_nodes(&self) -> usize {
        self.n
    }

    pub fn n_elements(&self) -> usize {
        self.n + 1
    }

    pub fn h(&self) -> T {
        self.h
    }

    pub fn length(&self) -> T {
        self.b - self.a
    }

    /// Coordinate of interior node `i` (0-based, so `node(0)` is a + h).
    pub fn node(&self, i: usize) -> T {
        self.vertex(i + 1)
    }

    /// Coordinate of vertex `k` in 0..=n+1, including both endpoints.
    pub fn vertex(&self, k: usize) -> T {
        if k == self.n + 1 {
            self.b
        } else {
            self.a + T::of_usize(k) * self.h
        }
    }

    pub fn nodes(&self) -> Vec<T> {
        (0..self.n).map(|i| self.node(i)).collect()
    }

    /// Mesh with every element split into `factor` pieces.
    pub fn refine(&self, factor: usize) -> Result<Self> {
        if factor == 0 {
            return Err(FracError::domain("refinement factor must be positive"));
        }
        Mesh1d::new(self.a, self.b, (self.n + 1) * factor - 1)
    }

    /// Ratio of element counts when `fine` refines `self`.
    pub fn nesting_factor(&self, fine: &Mesh1d<T>) -> Result<usize> {
        let same_domain = self.a == fine.a && self.b == fine.b;
        let (c, f) = (self.n + 1, fine.n + 1);
        if !same_domain || f % c != 0 {
            return Err(FracError::NonNested(format!(
                "{} elements on ({}, {}) do not refine {} elements on ({}, {})",
                f, fine.a, fine.b, c, self.a, self.b
            )));
        }
        Ok(f / c)
    }

    /// Element index containing x and the local coordinate in [0, 1].
    pub fn locate(&self, x: T) -> Option<(usize, T)> {
        if x < self.a || x > self.b {
            return None;
        }
        let t = (x - self.a) / self.h;
        let e = t.floor().to_usize().unwrap_or(0).min(self.n);
        Some((e, t - T::of_usize(e)))
    }

    /// Value at x of the P1 function with interior nodal values `u`.
    pub fn evaluate(&self, u: &[T], x: T) -> T {
        match self.locate(x) {
            None => T::zero(),
            Some((e, xi)) => {
                let left = if e == 0 { T::zero() } else { u[e - 1] };
                let right = if e == self.n { T::zero() } else { u[e] };
                left * (T::one() - xi) + right * xi
            }
        }
    }
}
