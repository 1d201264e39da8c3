use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{ExteriorHole3, InteriorGreen3, BOUNDARY_TOL, COINCIDENCE_TOL};
use crate::error::{Error, Result};
use crate::geometry::Vec3;

fn image_quadratic(x: Vec3, y: Vec3) -> f64 {
    x.norm_squared() * y.norm_squared() - 2.0 * x.dot(&y) + 1.0
}

fn image_term(x: Vec3, y: Vec3) -> f64 {
    1.0 / (4.0 * PI * image_quadratic(x, y).sqrt())
}

/// Dirichlet Green's function of the unit ball by the Kelvin image.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct UnitBall;

impl InteriorGreen3 for UnitBall {
    fn green(&self, x: Vec3, y: Vec3) -> Result<f64> {
        for p in [x, y] {
            if p.norm() > 1.0 + BOUNDARY_TOL {
                return Err(Error::NotInDomain(p.iter().copied().collect()));
            }
        }
        Ok(super::fundamental_3d(x, y)? - image_term(x, y))
    }

    fn regular(&self, x: Vec3, y: Vec3) -> Result<f64> {
        for p in [x, y] {
            if p.norm() > 1.0 + BOUNDARY_TOL {
                return Err(Error::NotInDomain(p.iter().copied().collect()));
            }
        }
        Ok(image_term(x, y))
    }
}

/// Kernels of the exterior of the unit ball.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ExteriorBall;

fn check_outside(xi: Vec3) -> Result<()> {
    if xi.norm() < 1.0 - BOUNDARY_TOL {
        return Err(Error::OutsideExterior(xi.iter().copied().collect()));
    }
    Ok(())
}

impl ExteriorHole3 for ExteriorBall {
    fn green(&self, xi: Vec3, eta: Vec3) -> Result<f64> {
        check_outside(xi)?;
        check_outside(eta)?;
        let d = (xi - eta).norm();
        if d < COINCIDENCE_TOL {
            return Err(Error::Singular);
        }
        Ok(1.0 / (4.0 * PI * d) - image_term(xi, eta))
    }

    fn capacitary_potential(&self, xi: Vec3) -> Result<f64> {
        check_outside(xi)?;
        Ok(1.0 / xi.norm())
    }

    fn capacity(&self) -> f64 {
        4.0 * PI
    }
}
