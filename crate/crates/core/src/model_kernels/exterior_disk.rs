use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::disk::image_quadratic;
use super::{ExteriorHole2, BOUNDARY_TOL, COINCIDENCE_TOL};
use crate::error::{Error, Result};
use crate::geometry::Vec2;

/// Kernels of the exterior of the unit disk, R² \ D̄.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ExteriorDisk;

fn check_outside(xi: Vec2) -> Result<()> {
    if xi.norm() < 1.0 - BOUNDARY_TOL {
        return Err(Error::OutsideExterior(vec![xi.x, xi.y]));
    }
    Ok(())
}

fn pair(xi: Vec2, eta: Vec2) -> Result<f64> {
    check_outside(xi)?;
    check_outside(eta)?;
    let d = (xi - eta).norm();
    if d < COINCIDENCE_TOL {
        return Err(Error::Singular);
    }
    Ok(d)
}

impl ExteriorHole2 for ExteriorDisk {
    fn green(&self, xi: Vec2, eta: Vec2) -> Result<f64> {
        let d = pair(xi, eta)?;
        Ok((image_quadratic(xi, eta) / (d * d)).ln() / (4.0 * PI))
    }

    fn zeta(&self, eta: Vec2) -> Result<f64> {
        check_outside(eta)?;
        Ok(eta.norm().ln() / (2.0 * PI))
    }

    fn zeta_inf(&self) -> f64 {
        0.0
    }

    fn neumann(&self, xi: Vec2, eta: Vec2) -> Result<f64> {
        let d = pair(xi, eta)?;
        Ok(
            (-d.ln() - 0.5 * image_quadratic(xi, eta).ln() + xi.norm().ln() + eta.norm().ln())
                / (2.0 * PI),
        )
    }

    fn dipole_neumann(&self, xi: Vec2) -> Result<Vec2> {
        check_outside(xi)?;
        Ok(-xi / xi.norm_squared())
    }

    fn dipole_dirichlet(&self, xi: Vec2) -> Result<Vec2> {
        check_outside(xi)?;
        Ok(xi / xi.norm_squared())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const K: ExteriorDisk = ExteriorDisk;

    fn on_circle(t: f64) -> Vec2 {
        Vec2::new(t.cos(), t.sin())
    }

    #[test]
    fn zeta_and_limits() {
        let eta = Vec2::new(2.0, 0.0);
        let z = K.zeta(eta).unwrap();
        assert!((z - 2f64.ln() / (2.0 * PI)).abs() < 1e-15);
        let far = K.green(Vec2::new(1e6, 0.0), eta).unwrap();
        assert!((far - z).abs() < 1e-6);
        // ζ(η) − (2π)⁻¹ log|η| at |η| = 10⁸
        let big = Vec2::new(0.0, 1e8);
        assert!((K.zeta(big).unwrap() - big.norm().ln() / (2.0 * PI) - K.zeta_inf()).abs() < 1e-12);
        assert!(matches!(
            K.zeta(Vec2::new(0.5, 0.0)),
            Err(Error::OutsideExterior(_))
        ));
    }

    #[test]
    fn dirichlet_condition_and_symmetry() {
        for eta in [
            Vec2::new(1.5, 0.3),
            Vec2::new(-2.0, 4.0),
            Vec2::new(0.2, -1.3),
        ] {
            for k in 0..8 {
                assert!(K.green(on_circle(0.7 * k as f64), eta).unwrap().abs() < 1e-15);
            }
            let xi = Vec2::new(3.0, -1.0);
            assert!((K.green(xi, eta).unwrap() - K.green(eta, xi).unwrap()).abs() < 1e-14);
            assert!((K.neumann(xi, eta).unwrap() - K.neumann(eta, xi).unwrap()).abs() < 1e-14);
        }
    }

    #[test]
    fn neumann_condition_on_hole() {
        let h = 1e-4;
        let eta = Vec2::new(2.0, 0.5);
        for k in 0..16 {
            let u = on_circle(0.4 * k as f64);
            let f = |r: f64| K.neumann(r * u, eta).unwrap();
            let d = (-3.0 * f(1.0) + 4.0 * f(1.0 + h) - f(1.0 + 2.0 * h)) / (2.0 * h);
            assert!(d.abs() < 1e-7, "{d}");
        }
    }

    #[test]
    fn dipole_fields() {
        let h = 1e-5;
        for k in 0..32 {
            let u = on_circle(2.0 * PI * k as f64 / 32.0);
            // derivative along the normal pointing away from the hole
            let d = (K.dipole_neumann((1.0 + h) * u).unwrap() - K.dipole_neumann(u).unwrap()) / h;
            let d2 = (K.dipole_neumann((1.0 + 2.0 * h) * u).unwrap()
                - K.dipole_neumann(u).unwrap())
                / (2.0 * h);
            let deriv = 2.0 * d - d2;
            assert!((deriv - u).norm() < 1e-8, "{}", (deriv - u).norm());
        }
        assert!(K.dipole_neumann(Vec2::new(1e3, 0.0)).unwrap().norm() <= 2e-3);
        for t in [0.0, 1.0, 2.0] {
            assert!((K.dipole_dirichlet(on_circle(t)).unwrap() - on_circle(t)).norm() < 1e-15);
        }
        assert!(K.dipole_dirichlet(Vec2::new(1e3, 0.0)).unwrap().norm() <= 1.0 + 1e-3);
        assert!(
            (K.dipole_dirichlet(Vec2::new(2.0, 0.0)).unwrap() - Vec2::new(0.5, 0.0)).norm() < 1e-15
        );
    }

    #[test]
    fn far_field_expansions() {
        let eta = Vec2::new(1.7, -0.9);
        let xi = Vec2::new(600.0, 800.0);
        let grad_log = -xi / (2.0 * PI * xi.norm_squared());
        let lead = -xi.norm().ln() / (2.0 * PI);
        let n = K.neumann(xi, eta).unwrap();
        let approx_n = lead + (K.dipole_neumann(eta).unwrap() - eta).dot(&grad_log);
        assert!((n - approx_n).abs() / n.abs() < 1e-4);
        assert!((n - approx_n).abs() < 1e-5);
        let g = K.green(xi, eta).unwrap();
        let approx_g =
            K.zeta(eta).unwrap() + (K.dipole_dirichlet(eta).unwrap() - eta).dot(&grad_log);
        assert!((g - approx_g).abs() / g.abs() < 1e-4);
        assert!((g - approx_g).abs() < 1e-5);
    }
}
