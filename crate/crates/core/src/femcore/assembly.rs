//! Mass and fractional stiffness matrices for P1 elements with zero exterior data.
//!
//! The stiffness entry is
//!
//! K_ij = κ C(1,s) [ ∬_{Ω×Ω} (φ_i(x)-φ_i(y))(φ_j(x)-φ_j(y)) / |x-y|^(1+2s)
//!                   + 2 ∫_Ω φ_i φ_j ρ ],   ρ(x) = ((x-a)^(-2s) + (b-x)^(-2s)) / (2s),
//!
//! with κ = 1/2 by default, so that K is the Galerkin matrix of the operator
//! C(1,s) P.V.∫ (u(x)-u(y)) / |x-y|^(1+2s) dy (eigenvalues → 1 as s → 0 and
//! → the Dirichlet Laplacian's as s → 1). [`FormScaling::Unsymmetrized`]
//! drops the 1/2.
//!
//! The double integral is split over element pairs. On a uniform mesh a pair
//! integral depends only on the element offset d, so one local matrix is
//! computed per offset and scattered to every pair with that offset:
//!
//! * d = 0: the integrand is |ξ-η|^(1-2s) times ±1, integrated exactly;
//! * d = 1: the integrand is homogeneous in the distances to the shared vertex,
//!   and a Duffy split reduces it to 1D integrals of w^m (1+w)^(-1-2s);
//! * d ≥ 2: smooth, tensor Gauss–Legendre.
//!
//! Every quadrature is repeated at a higher order and the relative difference
//! is checked against the assembly tolerance.

use super::mesh::Mesh1d;
use super::tridiag::SymTridiag;
use crate::error::{FracError, Result};
use crate::quadrature::GaussLegendre;
use crate::scalar::Real;
use crate::special::gamma;
use nalgebra::DMatrix;
use rayon::prelude::*;

/// C(n,s) = 2^(2s) s Γ(s + n/2) / (π^(n/2) Γ(1-s)).
pub fn normalization_constant<T: Real>(n: usize, s: T) -> Result<T> {
    check_order(s)?;
    if n == 0 {
        return Err(FracError::domain("dimension must be at least 1"));
    }
    let half_n = T::of_usize(n) / T::of(2.0);
    Ok(T::of(2.0).powf(T::of(2.0) * s) * s * gamma(s + half_n) / (T::pi().powf(half_n) * gamma(T::one() - s)))
}

fn check_order<T: Real>(s: T) -> Result<()> {
    if !(s > T::zero() && s < T::one()) {
        return Err(FracError::domain(format!("fractional order s must lie in (0, 1), got {s}")));
    }
    Ok(())
}

/// Tridiagonal P1 mass matrix: 2h/3 on the diagonal, h/6 off it.
pub fn assemble_mass<T: Real>(mesh: &Mesh1d<T>) -> SymTridiag<T> {
    let h = mesh.h();
    let n = mesh.n_nodes();
    SymTridiag { diag: vec![T::of(2.0) * h / T::of(3.0); n], off: vec![h / T::of(6.0); n - 1] }
}

/// Prefactor of the double integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FormScaling {
    /// C(1,s)/2: the weak form of the fractional Laplacian.
    #[default]
    Operator,
    /// C(1,s) over (ℝ×ℝ) \ (Ωᶜ×Ωᶜ) with no 1/2; twice `Operator`.
    Unsymmetrized,
}

/// Quadrature settings for stiffness assembly.
#[derive(Debug, Clone, Copy)]
pub struct StiffnessOptions<T> {
    /// Relative tolerance each local integral must meet.
    pub rel_tol: T,
    pub scaling: FormScaling,
}

impl<T: Real> Default for StiffnessOptions<T> {
    fn default() -> Self {
        StiffnessOptions { rel_tol: (T::EPS * T::of(1e4)).max(T::of(1e-12)), scaling: FormScaling::Operator }
    }
}

/// Local matrix for element offset d in reference coordinates, without the
/// factor h^(1-2s). Rows and columns are the vertex offsets {0, 1, d, d+1}
/// relative to the left vertex of the first element, with duplicates merged.
#[derive(Debug, Clone)]
struct OffsetBlock<T> {
    verts: Vec<usize>,
    vals: Vec<T>,
}

impl<T: Real> OffsetBlock<T> {
    fn get(&self, p: usize, q: usize) -> T {
        self.vals[p * self.verts.len() + q]
    }
}

/// D_r = φ_r(x) - φ_r(y) for vertex offsets 0, 1, d, d+1 with x in the first
/// element and y in the second, d ≥ 2.
fn differences<T: Real>(xi: T, eta: T) -> [T; 4] {
    let one = T::one();
    [one - xi, xi, -(one - eta), -eta]
}

fn pair_disjoint<T: Real>(d: usize, s: T, order: usize) -> OffsetBlock<T> {
    let g = GaussLegendre::<T>::new(order);
    let mut vals = vec![T::zero(); 16];
    let dd = T::of_usize(d);
    let p = -(T::one() + T::of(2.0) * s);
    for (xi, wx) in g.mapped(T::zero(), T::one()) {
        for (eta, wy) in g.mapped(T::zero(), T::one()) {
            let k = wx * wy * (dd + eta - xi).powf(p);
            let dv = differences(xi, eta);
            for a in 0..4 {
                for b in a..4 {
                    vals[a * 4 + b] += k * dv[a] * dv[b];
                }
            }
        }
    }
    for a in 0..4 {
        for b in 0..a {
            vals[a * 4 + b] = vals[b * 4 + a];
        }
    }
    OffsetBlock { verts: vec![0, 1, d, d + 1], vals }
}

/// Shared-vertex pair. With u1 = 1-ξ and u2 = η, the differences are
/// D_0 = u1, D_1 = u2 - u1, D_2 = -u2 and |x-y| = h (u1 + u2).
fn pair_touching<T: Real>(s: T, order: usize) -> OffsetBlock<T> {
    let g = GaussLegendre::<T>::new(order);
    let p = -(T::one() + T::of(2.0) * s);
    // J_m = ∫_0^1 w^m (1+w)^(-1-2s) dw, m = 0, 1, 2
    let mut j = [T::zero(); 3];
    for (w, wt) in g.mapped(T::zero(), T::one()) {
        let k = wt * (T::one() + w).powf(p);
        j[0] += k;
        j[1] += k * w;
        j[2] += k * w * w;
    }
    // D as linear forms in (u1, u2)
    let forms: [(T, T); 3] = [(T::one(), T::zero()), (-T::one(), T::one()), (T::zero(), -T::one())];
    let scale = T::one() / (T::of(3.0) - T::of(2.0) * s);
    let mut vals = vec![T::zero(); 9];
    for a in 0..3 {
        for b in 0..3 {
            // q(u1,u2) = (α1 u1 + α2 u2)(β1 u1 + β2 u2) = c11 u1² + c12 u1 u2 + c22 u2²
            let (a1, a2) = forms[a];
            let (b1, b2) = forms[b];
            let c11 = a1 * b1;
            let c12 = a1 * b2 + a2 * b1;
            let c22 = a2 * b2;
            // triangle u2 = w u1: q(1, w); triangle u1 = w u2: q(w, 1)
            let t1 = c11 * j[0] + c12 * j[1] + c22 * j[2];
            let t2 = c22 * j[0] + c12 * j[1] + c11 * j[2];
            vals[a * 3 + b] = scale * (t1 + t2);
        }
    }
    OffsetBlock { verts: vec![0, 1, 2], vals }
}

/// Same element: D_0 = η - ξ, D_1 = ξ - η, ∬ |ξ-η|^(1-2s) = 2 / ((2-2s)(3-2s)).
fn pair_identical<T: Real>(s: T) -> OffsetBlock<T> {
    let two = T::of(2.0);
    let i = two / ((two - two * s) * (T::of(3.0) - two * s));
    OffsetBlock { verts: vec![0, 1], vals: vec![i, -i, -i, i] }
}

fn max_rel_diff<T: Real>(a: &OffsetBlock<T>, b: &OffsetBlock<T>) -> T {
    let scale = a.vals.iter().fold(T::zero(), |m, v| m.max(v.abs()));
    a.vals.iter().zip(&b.vals).fold(T::zero(), |m, (x, y)| m.max((*x - *y).abs())) / scale
}

fn offset_block<T: Real>(d: usize, s: T, tol: T) -> Result<OffsetBlock<T>> {
    let (blk, check) = match d {
        0 => return Ok(pair_identical(s)),
        1 => (pair_touching(s, 16), pair_touching(s, 24)),
        2 => (pair_disjoint(d, s, 16), pair_disjoint(d, s, 24)),
        _ => (pair_disjoint(d, s, 8), pair_disjoint(d, s, 12)),
    };
    let err = max_rel_diff(&blk, &check);
    if err > tol {
        return Err(FracError::Quadrature(format!(
            "element pair at offset {d}: estimated relative error {:.2e} exceeds {:.2e}",
            err.as_f64(),
            tol.as_f64()
        )));
    }
    Ok(check)
}

/// Exterior-interaction part 2 ∫ φ_i φ_j ρ, per element e: local 2×2 block
/// (left vertex, right vertex) including the factor 2 and h.
fn exterior_block<T: Real>(mesh: &Mesh1d<T>, s: T, e: usize, g: &GaussLegendre<T>) -> [T; 4] {
    let h = mesh.h();
    let ne = mesh.n_elements();
    let two_s = T::of(2.0) * s;
    let one = T::one();
    let mut blk = [T::zero(); 4];
    // ρ_a = (x-a)^(-2s)/(2s), with x - a = h (e + ξ); ρ_b = (b-x)^(-2s)/(2s), b - x = h (ne - e - ξ)
    let singular_a = e == 0;
    let singular_b = e + 1 == ne;
    for (xi, w) in g.mapped(T::zero(), T::one()) {
        let phi = [one - xi, xi];
        let mut r = T::zero();
        if !singular_a {
            r += (h * (T::of_usize(e) + xi)).powf(-two_s);
        }
        if !singular_b {
            r += (h * (T::of_usize(ne - e) - xi)).powf(-two_s);
        }
        for p in 0..2 {
            for q in 0..2 {
                blk[p * 2 + q] += w * phi[p] * phi[q] * r;
            }
        }
    }
    // ∫_0^1 ξ^2 (hξ)^(-2s) dξ = h^(-2s) / (3-2s); only the right vertex is interior on element 0
    let edge = h.powf(-two_s) / (T::of(3.0) - two_s);
    if singular_a {
        blk[3] += edge;
    }
    if singular_b {
        blk[0] += edge;
    }
    blk.map(|v| T::of(2.0) * h * v / two_s)
}

/// Dense fractional stiffness matrix.
pub fn assemble_stiffness<T: Real>(mesh: &Mesh1d<T>, s: T) -> Result<DMatrix<T>> {
    assemble_stiffness_with(mesh, s, StiffnessOptions::default())
}

pub fn assemble_stiffness_with<T: Real>(mesh: &Mesh1d<T>, s: T, opts: StiffnessOptions<T>) -> Result<DMatrix<T>> {
    let mut c = normalization_constant(1, s)?;
    if opts.scaling == FormScaling::Operator {
        c *= T::of(0.5);
    }
    let n = mesh.n_nodes();
    let ne = mesh.n_elements();
    let h = mesh.h();
    let blocks: Vec<OffsetBlock<T>> =
        (0..ne).into_par_iter().map(|d| offset_block(d, s, opts.rel_tol)).collect::<Result<_>>()?;
    let hs = h.powf(T::one() - T::of(2.0) * s);

    let mut k = DMatrix::<T>::zeros(n, n);
    for e in 0..ne {
        for f in e..ne {
            let blk = &blocks[f - e];
            let mult = if f == e { hs } else { T::of(2.0) * hs };
            let m = blk.verts.len();
            for p in 0..m {
                // vertex e + verts[p]; interior index is vertex - 1
                let vp = e + blk.verts[p];
                if vp == 0 || vp > n {
                    continue;
                }
                for q in 0..m {
                    let vq = e + blk.verts[q];
                    if vq == 0 || vq > n {
                        continue;
                    }
                    k[(vp - 1, vq - 1)] += mult * blk.get(p, q);
                }
            }
        }
    }

    let g = GaussLegendre::<T>::new(16);
    for e in 0..ne {
        let blk = exterior_block(mesh, s, e, &g);
        let verts = [e, e + 1];
        for p in 0..2 {
            if verts[p] == 0 || verts[p] > n {
                continue;
            }
            for q in 0..2 {
                if verts[q] == 0 || verts[q] > n {
                    continue;
                }
                k[(verts[p] - 1, verts[q] - 1)] += blk[p * 2 + q];
            }
        }
    }
    // shared computation makes K symmetric up to summation order; enforce it exactly
    for i in 0..n {
        for j in i + 1..n {
            let v = (k[(i, j)] + k[(j, i)]) * T::of(0.5);
            k[(i, j)] = v * c;
            k[(j, i)] = v * c;
        }
        k[(i, i)] *= c;
    }
    Ok(k)
}
