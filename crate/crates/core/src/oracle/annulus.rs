use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{series_cap, Oracle, OracleInfo, OracleMethod};
use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::numerics::solve2;

/// Boundary conditions of the annulus ε < r < 1: outer letter first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum AnnulusBc {
    /// Dirichlet on both circles.
    DD,
    /// Dirichlet outer, homogeneous Neumann inner.
    DN,
    /// Homogeneous Neumann outer, Dirichlet inner.
    ND,
}

/// Green's function of the concentric annulus by Fourier decomposition in
/// the angle, with a 2×2 radial solve per mode.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnnulusGreen {
    pub inner_radius: f64,
    pub bc: AnnulusBc,
    pub tol: f64,
}

impl AnnulusGreen {
    pub fn new(inner_radius: f64, bc: AnnulusBc) -> Result<Self> {
        if !(inner_radius > 0.0 && inner_radius < 1.0) {
            return Err(Error::BadRadii(format!(
                "inner radius {inner_radius} not in (0, 1)"
            )));
        }
        Ok(Self {
            inner_radius,
            bc,
            tol: 1e-14,
        })
    }

    pub fn value(&self, x: [f64; 2], y: [f64; 2]) -> Result<f64> {
        let eps = self.inner_radius;
        let r = x[0].hypot(x[1]);
        let s = y[0].hypot(y[1]);
        let slack = 1e-12;
        for rad in [r, s] {
            if rad < eps - slack || rad > 1.0 + slack {
                return Err(Error::BadRadii(format!("radius {rad} outside [{eps}, 1]")));
            }
        }
        let d = (x[0] - y[0]).hypot(x[1] - y[1]);
        if d < 1e-14 {
            return Err(Error::Singular);
        }
        let delta = x[1].atan2(x[0]) - y[1].atan2(y[0]);
        let free = -d.ln() / (2.0 * PI);
        let (ls, le, lr) = (s.ln(), eps.ln(), r.ln());
        let radial = match self.bc {
            AnnulusBc::DD => ls / (2.0 * PI * le) * lr,
            AnnulusBc::ND => (ls - le) / (2.0 * PI) + lr / (2.0 * PI),
            AnnulusBc::DN => 0.0,
        };
        let mut sum = radial;
        let cap = series_cap();
        for k in 1..=cap {
            let kf = k as f64;
            let sk = s.powi(k as i32);
            let ek = eps.powi(k as i32);
            let es = (eps / s).powi(k as i32);
            let outer = match self.bc {
                AnnulusBc::DD | AnnulusBc::DN => ([1.0, ek], -sk / (2.0 * PI * kf)),
                AnnulusBc::ND => ([kf, -kf * ek], sk / (2.0 * PI)),
            };
            let inner = match self.bc {
                AnnulusBc::DD | AnnulusBc::ND => ([ek, 1.0], -es / (2.0 * PI * kf)),
                AnnulusBc::DN => ([kf * ek, -kf], -es / (2.0 * PI)),
            };
            let [a, b] = solve2([outer.0, inner.0], [outer.1, inner.1]);
            let bound = (a * r.powi(k as i32)).abs() + (b * (eps / r).powi(k as i32)).abs();
            sum += (a * r.powi(k as i32) + b * (eps / r).powi(k as i32)) * (kf * delta).cos();
            if bound < self.tol * (sum.abs() + 1.0) {
                return Ok(free + sum);
            }
        }
        Err(Error::TruncationFailure(cap))
    }
}

impl Oracle for AnnulusGreen {
    fn green(&self, x: &Point, y: &Point) -> Result<f64> {
        let (x, y) = (x.v2()?, y.v2()?);
        self.value([x.x, x.y], [y.x, y.y])
    }

    fn info(&self) -> OracleInfo {
        OracleInfo {
            method: OracleMethod::FourierAnnulus,
            accuracy: 1e-12,
            resolution: vec![
                ("tail_tol".into(), self.tol),
                ("inner_radius".into(), self.inner_radius),
            ],
        }
    }
}
