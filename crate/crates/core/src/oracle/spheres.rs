use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{series_cap, Oracle, OracleInfo, OracleMethod};
use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::numerics::solve2;

/// Dirichlet Green's function of the spherical shell ε < |x| < 1 by Legendre
/// expansion in the angle between the arguments.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConcentricSpheresGreen {
    pub inner_radius: f64,
    pub tol: f64,
}

impl ConcentricSpheresGreen {
    pub fn new(inner_radius: f64) -> Result<Self> {
        if !(inner_radius > 0.0 && inner_radius < 1.0) {
            return Err(Error::BadRadii(format!(
                "inner radius {inner_radius} not in (0, 1)"
            )));
        }
        Ok(Self {
            inner_radius,
            tol: 1e-14,
        })
    }

    pub fn value(&self, x: [f64; 3], y: [f64; 3]) -> Result<f64> {
        let eps = self.inner_radius;
        let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
        let s = (y[0] * y[0] + y[1] * y[1] + y[2] * y[2]).sqrt();
        let slack = 1e-12;
        for rad in [r, s] {
            if rad < eps - slack || rad > 1.0 + slack {
                return Err(Error::BadRadii(format!("radius {rad} outside [{eps}, 1]")));
            }
        }
        let d = ((x[0] - y[0]).powi(2) + (x[1] - y[1]).powi(2) + (x[2] - y[2]).powi(2)).sqrt();
        if d < 1e-14 {
            return Err(Error::Singular);
        }
        let c = ((x[0] * y[0] + x[1] * y[1] + x[2] * y[2]) / (r * s)).clamp(-1.0, 1.0);
        let free = 1.0 / (4.0 * PI * d);
        let (mut p_prev, mut p) = (1.0, c);
        let mut sum = 0.0;
        let cap = series_cap();
        for l in 0..=cap {
            let pl = if l == 0 { 1.0 } else { p };
            let li = l as i32;
            let outer = ([1.0, eps.powi(li + 1)], -s.powi(li) / (4.0 * PI));
            let inner = (
                [eps.powi(li), 1.0],
                -eps.powi(li) / (4.0 * PI * s.powi(li + 1)),
            );
            let [a, b] = solve2([outer.0, inner.0], [outer.1, inner.1]);
            let radial_a = a * r.powi(li);
            let radial_b = b * (eps / r).powi(li + 1);
            sum += (radial_a + radial_b) * pl;
            if l > 0 && radial_a.abs() + radial_b.abs() < self.tol * (sum.abs() + 1.0) {
                return Ok(free + sum);
            }
            if l >= 1 {
                let lf = l as f64;
                let next = ((2.0 * lf + 1.0) * c * p - lf * p_prev) / (lf + 1.0);
                p_prev = p;
                p = next;
            }
        }
        Err(Error::TruncationFailure(cap))
    }
}

impl Oracle for ConcentricSpheresGreen {
    fn green(&self, x: &Point, y: &Point) -> Result<f64> {
        let (x, y) = (x.v3()?, y.v3()?);
        self.value([x.x, x.y, x.z], [y.x, y.y, y.z])
    }

    fn info(&self) -> OracleInfo {
        OracleInfo {
            method: OracleMethod::SphericalHarmonics,
            accuracy: 1e-12,
            resolution: vec![
                ("tail_tol".into(), self.tol),
                ("inner_radius".into(), self.inner_radius),
            ],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundary_values_vanish_and_kernel_is_symmetric() {
        let eps = 0.2;
        let g = ConcentricSpheresGreen::new(eps).unwrap();
        let y = [0.3, -0.2, 0.4];
        let x = [-0.1, 0.5, 0.3];
        assert!((g.value(x, y).unwrap() - g.value(y, x).unwrap()).abs() < 1e-12);
        for k in 0..10 {
            let z = 1.0 - 2.0 * (k as f64 + 0.5) / 10.0;
            let t = 2.4 * k as f64;
            let rho = (1.0 - z * z).sqrt();
            let u = [rho * t.cos(), rho * t.sin(), z];
            assert!(g.value(u, y).unwrap().abs() < 1e-12);
            assert!(
                g.value([eps * u[0], eps * u[1], eps * u[2]], y)
                    .unwrap()
                    .abs()
                    < 1e-12
            );
        }
    }

    #[test]
    fn shrinking_hole_recovers_ball_image_formula() {
        let g = ConcentricSpheresGreen::new(1e-9).unwrap();
        let x = [0.5, 0.0, 0.0];
        let y = [0.0, 0.3, 0.1];
        let d = (0.25f64 + 0.09 + 0.01).sqrt();
        let q: f64 = 0.25 * 0.1 + 1.0;
        let ball = (1.0 / d - 1.0 / q.sqrt()) / (4.0 * PI);
        assert!((g.value(x, y).unwrap() - ball).abs() < 1e-8);
    }

    #[test]
    fn harmonic_in_first_argument() {
        let g = ConcentricSpheresGreen::new(0.25).unwrap();
        let x = [0.2, 0.3, -0.35];
        let y = [-0.4, 0.1, 0.5];
        let lap = |h: f64| {
            let mut acc = -6.0 * g.value(x, y).unwrap();
            for k in 0..3 {
                for sgn in [-1.0, 1.0] {
                    let mut p = x;
                    p[k] += sgn * h;
                    acc += g.value(p, y).unwrap();
                }
            }
            acc / (h * h)
        };
        let extrapolated = (4.0 * lap(1e-3) - lap(2e-3)) / 3.0;
        assert!(extrapolated.abs() < 1e-5, "{extrapolated}");
    }
}
