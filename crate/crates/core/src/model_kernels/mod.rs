//! Closed-form model-problem kernels consumed by the asymptotic formulas.
//!
//! Every kernel follows the sign convention `-Δ g = δ`.

mod ball;
mod disk;
mod exterior_disk;
mod sector;
mod strip;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

pub use ball::{ExteriorBall, UnitBall};
pub use disk::{UnitDisk, UnitDiskNeumann};
pub use exterior_disk::ExteriorDisk;
pub use sector::{PsiNormalization, SectorEigen, SectorKernels};
pub use strip::StripKernels;

use crate::error::{Error, Result};
use crate::geometry::{DomainSpec, Vec2, Vec3};

pub(crate) const COINCIDENCE_TOL: f64 = 1e-14;
pub(crate) const BOUNDARY_TOL: f64 = 1e-12;

/// (2π)⁻¹ log(1/|x − y|).
pub fn fundamental_2d(x: Vec2, y: Vec2) -> Result<f64> {
    let r = (x - y).norm();
    if r < COINCIDENCE_TOL {
        return Err(Error::Singular);
    }
    Ok(-r.ln() / (2.0 * PI))
}

/// (4π|x − y|)⁻¹.
pub fn fundamental_3d(x: Vec3, y: Vec3) -> Result<f64> {
    let r = (x - y).norm();
    if r < COINCIDENCE_TOL {
        return Err(Error::Singular);
    }
    Ok(1.0 / (4.0 * PI * r))
}

/// Dirichlet Green's function of a bounded planar domain together with the
/// derivatives of its regular part `H = fundamental − G`.
pub trait InteriorGreen2: Send + Sync {
    fn green(&self, x: Vec2, y: Vec2) -> Result<f64>;
    fn regular(&self, x: Vec2, y: Vec2) -> Result<f64>;
    /// ∇ₓ H(x, y).
    fn grad_x_regular(&self, x: Vec2, y: Vec2) -> Vec2;
    /// ∇_y H(x, y).
    fn grad_y_regular(&self, x: Vec2, y: Vec2) -> Vec2 {
        self.grad_x_regular(y, x)
    }
    /// Matrix with entries ∂²H / ∂x_i ∂y_j.
    fn mixed_hessian(&self, x: Vec2, y: Vec2) -> nalgebra::Matrix2<f64>;
}

/// Dirichlet Green's function of the exterior of a planar hole ω with its
/// limit fields.
pub trait ExteriorHole2: Send + Sync {
    fn green(&self, xi: Vec2, eta: Vec2) -> Result<f64>;
    /// ζ(η) = lim_{|ξ|→∞} 𝒢(ξ, η).
    fn zeta(&self, eta: Vec2) -> Result<f64>;
    /// ζ∞ = lim_{|η|→∞} (ζ(η) − (2π)⁻¹ log|η|).
    fn zeta_inf(&self) -> f64;
    /// Neumann function 𝒩 of the exterior domain.
    fn neumann(&self, xi: Vec2, eta: Vec2) -> Result<f64>;
    /// Vector field 𝒟: harmonic, vanishing at infinity, ∂𝒟/∂ν = ν on ∂ω.
    fn dipole_neumann(&self, xi: Vec2) -> Result<Vec2>;
    /// Vector field D: harmonic, bounded, D(ξ) = ξ on ∂ω.
    fn dipole_dirichlet(&self, xi: Vec2) -> Result<Vec2>;
}

/// Dirichlet Green's function of a bounded domain in R³ with its regular part.
pub trait InteriorGreen3: Send + Sync {
    fn green(&self, x: Vec3, y: Vec3) -> Result<f64>;
    fn regular(&self, x: Vec3, y: Vec3) -> Result<f64>;
}

/// Exterior Dirichlet Green's function of a hole in R³ with its capacitary
/// potential and capacity.
pub trait ExteriorHole3: Send + Sync {
    fn green(&self, xi: Vec3, eta: Vec3) -> Result<f64>;
    fn capacitary_potential(&self, xi: Vec3) -> Result<f64>;
    fn capacity(&self) -> f64;
}

/// The model kernels a configuration's asymptotic formula consumes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "geometry", rename_all = "kebab-case")]
pub enum ModelKernelSet {
    /// Unit disk with its Dirichlet and Neumann kernels and a unit-disk hole.
    Disk {
        outer: UnitDisk,
        neumann: UnitDiskNeumann,
        hole: ExteriorDisk,
    },
    /// Unit ball and the exterior of the unit ball.
    Ball {
        outer: UnitBall,
        hole: ExteriorBall,
    },
    Strip(StripKernels),
    Sector(SectorKernels),
}

impl ModelKernelSet {
    pub fn for_spec(spec: &DomainSpec, psi: PsiNormalization) -> Self {
        match spec {
            DomainSpec::PerturbedDisk { .. } | DomainSpec::DiskWithHole { .. } => {
                ModelKernelSet::Disk {
                    outer: UnitDisk,
                    neumann: UnitDiskNeumann,
                    hole: ExteriorDisk,
                }
            }
            DomainSpec::BallWithHole { .. } | DomainSpec::BallWithHoles { .. } => {
                ModelKernelSet::Ball {
                    outer: UnitBall,
                    hole: ExteriorBall,
                }
            }
            DomainSpec::ThinRodStrip { width, .. } => {
                ModelKernelSet::Strip(StripKernels::new(*width))
            }
            DomainSpec::TruncatedSector { alpha, .. } => {
                ModelKernelSet::Sector(SectorKernels::new(*alpha, psi))
            }
        }
    }
}
