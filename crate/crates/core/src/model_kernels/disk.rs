use std::f64::consts::PI;

use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};

use super::{fundamental_2d, InteriorGreen2, BOUNDARY_TOL, COINCIDENCE_TOL};
use crate::error::{Error, Result};
use crate::geometry::Vec2;

/// |x|²|y|² − 2x·y + 1, which equals |x − y|² whenever |x| = 1 or |y| = 1.
pub(crate) fn image_quadratic(x: Vec2, y: Vec2) -> f64 {
    x.norm_squared() * y.norm_squared() - 2.0 * x.dot(&y) + 1.0
}

fn check_inside(x: Vec2) -> Result<()> {
    if x.norm() > 1.0 + BOUNDARY_TOL {
        return Err(Error::NotInDomain(vec![x.x, x.y]));
    }
    Ok(())
}

/// Dirichlet Green's function of the unit disk by the method of images.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct UnitDisk;

impl UnitDisk {
    /// ∂G/∂ν_z(x, z) for z on the unit circle, i.e. minus the Poisson kernel.
    pub fn normal_derivative_on_boundary(&self, x: Vec2, z: Vec2) -> f64 {
        -(1.0 - x.norm_squared()) / (2.0 * PI * (x - z).norm_squared())
    }
}

impl InteriorGreen2 for UnitDisk {
    fn green(&self, x: Vec2, y: Vec2) -> Result<f64> {
        check_inside(x)?;
        check_inside(y)?;
        let d2 = (x - y).norm_squared();
        if d2.sqrt() < COINCIDENCE_TOL {
            return Err(Error::Singular);
        }
        Ok((image_quadratic(x, y) / d2).ln() / (4.0 * PI))
    }

    fn regular(&self, x: Vec2, y: Vec2) -> Result<f64> {
        check_inside(x)?;
        check_inside(y)?;
        Ok(-image_quadratic(x, y).ln() / (4.0 * PI))
    }

    fn grad_x_regular(&self, x: Vec2, y: Vec2) -> Vec2 {
        let q = image_quadratic(x, y);
        -(2.0 * y.norm_squared() * x - 2.0 * y) / (4.0 * PI * q)
    }

    fn mixed_hessian(&self, x: Vec2, y: Vec2) -> Matrix2<f64> {
        let q = image_quadratic(x, y);
        let gx = 2.0 * y.norm_squared() * x - 2.0 * y;
        let gy = 2.0 * x.norm_squared() * y - 2.0 * x;
        let m = Matrix2::from_fn(|i, j| {
            let kron = if i == j { 1.0 } else { 0.0 };
            (4.0 * x[i] * y[j] - 2.0 * kron) / q - gx[i] * gy[j] / (q * q)
        });
        -m / (4.0 * PI)
    }
}

/// Neumann function of the unit disk normalized by
/// ∂ν(N + (2π)⁻¹ log|x|) = 0 on the circle and ∫ N ∂ν log|x| ds = 0.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct UnitDiskNeumann;

impl UnitDiskNeumann {
    pub fn neumann(&self, x: Vec2, y: Vec2) -> Result<f64> {
        check_inside(x)?;
        check_inside(y)?;
        let d = (x - y).norm();
        if d < COINCIDENCE_TOL {
            return Err(Error::Singular);
        }
        Ok(-(d.ln() + 0.5 * image_quadratic(x, y).ln()) / (2.0 * PI))
    }

    /// R = (2π)⁻¹ log(1/|x − y|) − N.
    pub fn regular(&self, x: Vec2, y: Vec2) -> Result<f64> {
        check_inside(x)?;
        check_inside(y)?;
        Ok(image_quadratic(x, y).ln() / (4.0 * PI))
    }

    pub fn grad_x_regular(&self, x: Vec2, y: Vec2) -> Vec2 {
        -UnitDisk.grad_x_regular(x, y)
    }

    pub fn grad_y_regular(&self, x: Vec2, y: Vec2) -> Vec2 {
        -UnitDisk.grad_x_regular(y, x)
    }

    pub fn mixed_hessian(&self, x: Vec2, y: Vec2) -> Matrix2<f64> {
        -UnitDisk.mixed_hessian(x, y)
    }

    /// Consistency with the fundamental solution: R = Φ − N.
    pub fn regular_from_definition(&self, x: Vec2, y: Vec2) -> Result<f64> {
        Ok(fundamental_2d(x, y)? - self.neumann(x, y)?)
    }
}
