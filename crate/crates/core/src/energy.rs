//! Free energy F_s(u) = ε²/2 |u|²_{H^s} + ∫ W(u), W(u) = (u² - 1)² / 4, the
//! shifted double well and plateau detection for equilibrium states.

use crate::error::{FracError, Result};
use crate::femcore::{FemSystem, Mesh1d};
use crate::quadrature::GaussLegendre;
use crate::scalar::Real;
use nalgebra::DVector;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyReport<T> {
    pub fs: T,
    pub dirichlet: T,
    pub potential: T,
    /// Offset k_ε of the shifted well; `None` when ε² ≥ 1.
    pub k_eps: Option<T>,
    pub plateau_pos: Option<T>,
    pub plateau_neg: Option<T>,
}

/// W(u) = (u² - 1)² / 4.
pub fn double_well<T: Real>(u: T) -> T {
    let q = u * u - T::one();
    q * q / T::of(4.0)
}

pub fn evaluate_energy<T: Real>(system: &FemSystem<T>, eps2: T, u: &DVector<T>) -> Result<EnergyReport<T>> {
    system.check_dim(u)?;
    let dirichlet = eps2 / T::of(2.0) * u.dot(&(&system.stiffness * u));
    let mesh = &system.mesh;
    let g = GaussLegendre::<T>::new(4);
    let n = mesh.n_nodes();
    let h = mesh.h();
    let mut potential = T::zero();
    for e in 0..mesh.n_elements() {
        let left = if e == 0 { T::zero() } else { u[e - 1] };
        let right = if e == n { T::zero() } else { u[e] };
        for (xi, w) in g.mapped(T::zero(), T::one()) {
            potential += w * h * double_well(left * (T::one() - xi) + right * xi);
        }
    }
    let k_eps = (eps2 < T::one()).then(|| shift_offset(eps2));
    Ok(EnergyReport { fs: dirichlet + potential, dirichlet, potential, k_eps, plateau_pos: None, plateau_neg: None })
}

/// k_ε = ε²/2 - ε⁴/4, the minimum of W(x) + ε² x² / 2.
fn shift_offset<T: Real>(eps2: T) -> T {
    eps2 / T::of(2.0) - eps2 * eps2 / T::of(4.0)
}

/// W̃(x) = W(x) + ε² x² / 2 - k_ε, minimal (zero) at ±√(1 - ε²).
pub fn shifted_potential<T: Real>(eps2: T, x: T) -> Result<T> {
    if !(eps2 >= T::zero() && eps2 < T::one()) {
        return Err(FracError::domain(format!("shifted potential needs 0 <= eps2 < 1, got {eps2}")));
    }
    Ok(double_well(x) + eps2 * x * x / T::of(2.0) - shift_offset(eps2))
}

/// ±√(1 - ε²).
pub fn equilibrium_value<T: Real>(eps2: T) -> Result<T> {
    if !(eps2 >= T::zero() && eps2 < T::one()) {
        return Err(FracError::domain(format!("equilibrium needs 0 <= eps2 < 1, got {eps2}")));
    }
    Ok((T::one() - eps2).sqrt())
}

/// Detection thresholds.
#[derive(Debug, Clone, Copy)]
pub struct PlateauOptions<T> {
    /// Fraction of the largest discrete slope below which a node is flat.
    pub slope_fraction: T,
    pub min_nodes: usize,
}

impl<T: Real> Default for PlateauOptions<T> {
    fn default() -> Self {
        PlateauOptions { slope_fraction: T::of(0.01), min_nodes: 10 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Positive,
    Negative,
}

impl Side {
    fn name(self) -> &'static str {
        match self {
            Side::Positive => "positive",
            Side::Negative => "negative",
        }
    }
}

/// Median nodal value over the longest run of flat nodes of the given sign.
pub fn plateau_side<T: Real>(mesh: &Mesh1d<T>, u: &[T], side: Side, opts: PlateauOptions<T>) -> Result<T> {
    let n = u.len();
    if n != mesh.n_nodes() {
        return Err(FracError::DimensionMismatch { expected: mesh.n_nodes(), found: n });
    }
    let h = mesh.h();
    // slope at node i: the larger of the one-sided differences to interior neighbours
    let slope: Vec<T> = (0..n)
        .map(|i| {
            let mut s = T::zero();
            if i > 0 {
                s = s.max((u[i] - u[i - 1]).abs() / h);
            }
            if i + 1 < n {
                s = s.max((u[i + 1] - u[i]).abs() / h);
            }
            s
        })
        .collect();
    let max_slope = slope.iter().fold(T::zero(), |m, v| m.max(*v));
    let threshold = max_slope * opts.slope_fraction;
    let wanted = |v: T| match side {
        Side::Positive => v > T::zero(),
        Side::Negative => v < T::zero(),
    };
    let (mut best, mut start) = ((0, 0), None);
    for i in 0..=n {
        let ok = i < n && slope[i] <= threshold && wanted(u[i]);
        match (ok, start) {
            (true, None) => start = Some(i),
            (false, Some(s0)) => {
                if i - s0 > best.1 - best.0 {
                    best = (s0, i);
                }
                start = None;
            }
            _ => {}
        }
    }
    let len = best.1 - best.0;
    if len < opts.min_nodes {
        return Err(FracError::NoPlateau { side: side.name(), found: len });
    }
    let mut vals = u[best.0..best.1].to_vec();
    vals.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));
    let mid = len / 2;
    Ok(if len % 2 == 1 { vals[mid] } else { (vals[mid - 1] + vals[mid]) / T::of(2.0) })
}

/// (positive plateau, negative plateau) with default thresholds.
pub fn plateau_detect<T: Real>(mesh: &Mesh1d<T>, u: &[T]) -> Result<(T, T)> {
    let o = PlateauOptions::default();
    Ok((plateau_side(mesh, u, Side::Positive, o)?, plateau_side(mesh, u, Side::Negative, o)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shifted_well_minima() {
        let e2 = 0.5f64;
        let m = equilibrium_value(e2).unwrap();
        assert!((m - 0.5f64.sqrt()).abs() < 1e-15);
        assert!(shifted_potential(e2, m).unwrap().abs() < 1e-15);
        assert!(shifted_potential(e2, -m).unwrap().abs() < 1e-15);
        for i in -300..=300 {
            let x = i as f64 * 0.01;
            let w = shifted_potential(e2, x).unwrap();
            assert_eq!(w, shifted_potential(e2, -x).unwrap());
            if (x.abs() - m).abs() > 1e-3 {
                assert!(w > 0.0, "x {x}");
            }
        }
        assert!(shifted_potential(1.0f64, 0.0).is_err());
    }

    #[test]
    fn plateaus() {
        let mesh = Mesh1d::new(-1.0f64, 1.0, 101).unwrap();
        let u: Vec<f64> = mesh.nodes().iter().map(|&x| if x < 0.0 { -0.6 } else { 0.6 }).collect();
        assert_eq!(plateau_detect(&mesh, &u).unwrap(), (0.6, -0.6));
        let c = vec![0.3; 101];
        assert_eq!(plateau_side(&mesh, &c, Side::Positive, PlateauOptions::default()).unwrap(), 0.3);
        assert!(matches!(plateau_detect(&mesh, &c), Err(FracError::NoPlateau { side: "negative", .. })));
    }
}
