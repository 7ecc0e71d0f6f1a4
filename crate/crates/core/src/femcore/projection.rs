use super::mesh::Mesh1d;
use super::tridiag::SymTridiag;
use crate::error::Result;
use crate::quadrature::GaussLegendre;
use crate::scalar::Real;
use nalgebra::DVector;

/// Load vector b_i = (f, φ_i) by per-element Gauss quadrature of the given order.
pub fn load_vector<T: Real, F: Fn(T) -> T>(mesh: &Mesh1d<T>, f: F, order: usize) -> DVector<T> {
    let g = GaussLegendre::<T>::new(order);
    let n = mesh.n_nodes();
    let h = mesh.h();
    let mut b = DVector::zeros(n);
    for e in 0..mesh.n_elements() {
        let x0 = mesh.vertex(e);
        let (mut left, mut right) = (T::zero(), T::zero());
        for (xi, w) in g.mapped(T::zero(), T::one()) {
            let fx = f(x0 + h * xi) * w * h;
            left += fx * (T::one() - xi);
            right += fx * xi;
        }
        if e > 0 {
            b[e - 1] += left;
        }
        if e < n {
            b[e] += right;
        }
    }
    b
}

/// L² projection M^{-1} b. Elements are subdivided at the given breakpoints so
/// that piecewise-smooth data is integrated exactly enough.
pub fn l2_project<T: Real, F: Fn(T) -> T>(mesh: &Mesh1d<T>, mass: &SymTridiag<T>, f: F) -> Result<DVector<T>> {
    mass.solve(&load_vector(mesh, f, 8))
}

/// L² projection of a function with jumps at `breaks`; each element is split
/// at any breakpoint it contains before integrating.
pub fn l2_project_piecewise<T: Real, F: Fn(T) -> T>(
    mesh: &Mesh1d<T>,
    mass: &SymTridiag<T>,
    f: F,
    breaks: &[T],
) -> Result<DVector<T>> {
    let g = GaussLegendre::<T>::new(8);
    let n = mesh.n_nodes();
    let h = mesh.h();
    let mut b = DVector::zeros(n);
    for e in 0..mesh.n_elements() {
        let x0 = mesh.vertex(e);
        let x1 = mesh.vertex(e + 1);
        let mut cuts = vec![x0];
        cuts.extend(breaks.iter().copied().filter(|&c| c > x0 && c < x1));
        cuts.push(x1);
        let (mut left, mut right) = (T::zero(), T::zero());
        for w in cuts.windows(2) {
            // evaluate strictly inside each piece so one-sided values are used
            for (x, wt) in g.mapped(w[0], w[1]) {
                let xi = (x - x0) / h;
                let fx = f(x) * wt;
                left += fx * (T::one() - xi);
                right += fx * xi;
            }
        }
        if e > 0 {
            b[e - 1] += left;
        }
        if e < n {
            b[e] += right;
        }
    }
    mass.solve(&b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::femcore::assemble_mass;

    #[test]
    fn reproduces_fe_functions() {
        let mesh = Mesh1d::new(0.0f64, 1.0, 9).unwrap();
        let m = assemble_mass(&mesh);
        let u: Vec<f64> = (0..9).map(|i| (i as f64 * 0.7).sin()).collect();
        let p = l2_project(&mesh, &m, |x| mesh.evaluate(&u, x)).unwrap();
        for i in 0..9 {
            assert!((p[i] - u[i]).abs() < 1e-13);
        }
        let z = l2_project(&mesh, &m, |_| 0.0).unwrap();
        assert_eq!(z.amax(), 0.0);
    }

    #[test]
    fn step_function_exact_integrals() {
        // h = 0.4, nodes -0.6, -0.2, 0.2, 0.6; exact loads of the step against the hats
        let mesh = Mesh1d::new(-1.0f64, 1.0, 4).unwrap();
        let m = assemble_mass(&mesh);
        let step = |x: f64| if x < 0.0 { -0.5 } else { 0.5 };
        let p = l2_project_piecewise(&mesh, &m, step, &[0.0]).unwrap();
        let b = DVector::from_vec(vec![-0.2, -0.15, 0.15, 0.2]);
        let expect = m.solve(&b).unwrap();
        for i in 0..4 {
            assert!((p[i] - expect[i]).abs() < 1e-14, "{i}: {} vs {}", p[i], expect[i]);
        }
    }
}
