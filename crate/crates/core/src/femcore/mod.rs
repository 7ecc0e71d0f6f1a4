//! Uniform 1D mesh, P1 mass and fractional stiffness matrices, projections
//! and the generalized eigenproblem.

mod assembly;
mod eigen;
mod mesh;
mod projection;
mod tridiag;

pub use assembly::{
    assemble_mass, assemble_stiffness, assemble_stiffness_with, normalization_constant, FormScaling, StiffnessOptions,
};
pub use eigen::{eigendecompose, EigenDecomposition};
pub use mesh::Mesh1d;
pub use projection::{l2_project, l2_project_piecewise, load_vector};
pub use tridiag::SymTridiag;

use crate::error::{FracError, Result};
use crate::scalar::Real;
use nalgebra::{DMatrix, DVector};

/// Mesh plus assembled mass and stiffness matrices for one fractional order.
#[derive(Debug, Clone)]
pub struct FemSystem<T: Real> {
    pub mesh: Mesh1d<T>,
    pub s: T,
    pub mass: SymTridiag<T>,
    pub stiffness: DMatrix<T>,
}

impl<T: Real> FemSystem<T> {
    pub fn new(mesh: Mesh1d<T>, s: T) -> Result<Self> {
        let stiffness = assemble_stiffness(&mesh, s)?;
        Ok(FemSystem { mesh, s, mass: assemble_mass(&mesh), stiffness })
    }

    pub fn dim(&self) -> usize {
        self.mesh.n_nodes()
    }

    pub fn eigen(&self) -> Result<EigenDecomposition<T>> {
        eigendecompose(&self.mass, &self.stiffness)
    }

    /// ‖w‖_M = (wᵀ M w)^{1/2}.
    pub fn l2_norm(&self, w: &DVector<T>) -> T {
        self.mass.inner(w, w).sqrt()
    }

    pub fn check_dim(&self, w: &DVector<T>) -> Result<()> {
        if w.len() != self.dim() {
            return Err(FracError::DimensionMismatch { expected: self.dim(), found: w.len() });
        }
        Ok(())
    }
}
