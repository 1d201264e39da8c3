use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{series_cap, Oracle, OracleInfo, OracleMethod};
use crate::error::{Error, Result};
use crate::geometry::Point;

/// Dirichlet Green's function of the annular sector ε < r < 1, 0 < θ < α:
/// the infinite-wedge kernel in closed form plus an angular eigenfunction
/// series for the two arcs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TruncatedSectorGreen {
    pub alpha: f64,
    pub inner_radius: f64,
    pub tol: f64,
}

impl TruncatedSectorGreen {
    pub fn new(alpha: f64, inner_radius: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 2.0 * PI) {
            return Err(Error::InvalidSpec(format!(
                "opening angle {alpha} not in (0, 2π)"
            )));
        }
        if !(inner_radius > 0.0 && inner_radius < 1.0) {
            return Err(Error::BadRadii(format!(
                "inner radius {inner_radius} not in (0, 1)"
            )));
        }
        Ok(Self {
            alpha,
            inner_radius,
            tol: 1e-15,
        })
    }

    fn polar(&self, p: [f64; 2]) -> Result<(f64, f64)> {
        let r = p[0].hypot(p[1]);
        let mut th = p[1].atan2(p[0]);
        if th < -1e-12 {
            th += 2.0 * PI;
        }
        let slack = 1e-12;
        if r < self.inner_radius - slack
            || r > 1.0 + slack
            || th < -slack
            || th > self.alpha + slack
        {
            return Err(Error::NotInTruncatedSector(p.to_vec()));
        }
        Ok((r, th.clamp(0.0, self.alpha)))
    }

    pub fn value(&self, x: [f64; 2], y: [f64; 2]) -> Result<f64> {
        let (r, a) = self.polar(x)?;
        let (s, b) = self.polar(y)?;
        if (x[0] - y[0]).hypot(x[1] - y[1]) < 1e-14 {
            return Err(Error::Singular);
        }
        let lambda = PI / self.alpha;
        let w = Complex64::from_polar(r.powf(lambda), lambda * a);
        let v = Complex64::from_polar(s.powf(lambda), lambda * b);
        let wedge = ((w - v.conj()).norm() / (w - v).norm()).ln() / (2.0 * PI);

        let eps = self.inner_radius;
        let (lo, hi) = (r.min(s), r.max(s));
        let norm = 2.0 / self.alpha;
        let mut sum = 0.0;
        let cap = series_cap();
        for k in 1..=cap {
            let mu = k as f64 * lambda;
            let e2 = eps.powf(2.0 * mu);
            let bracket = e2 * (lo / hi).powf(mu) - (r * s).powf(mu) - e2 * (r * s).powf(-mu)
                + e2 * (hi / lo).powf(mu);
            let radial = bracket / (2.0 * mu * (1.0 - e2));
            sum += norm * (mu * a).sin() * (mu * b).sin() * radial;
            if norm * radial.abs() < self.tol * (sum.abs() + wedge.abs() + 1.0) {
                return Ok(wedge + sum);
            }
        }
        Err(Error::TruncationFailure(cap))
    }
}

impl Oracle for TruncatedSectorGreen {
    fn green(&self, x: &Point, y: &Point) -> Result<f64> {
        let (x, y) = (x.v2()?, y.v2()?);
        self.value([x.x, x.y], [y.x, y.y])
    }

    fn info(&self) -> OracleInfo {
        OracleInfo {
            method: OracleMethod::SectorSeries,
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

    fn at(r: f64, t: f64) -> [f64; 2] {
        [r * t.cos(), r * t.sin()]
    }

    #[test]
    fn vanishes_on_all_four_sides() {
        let alpha = 2.0;
        let eps = 0.1;
        let g = TruncatedSectorGreen::new(alpha, eps).unwrap();
        let y = at(0.4, 0.7);
        for k in 0..6 {
            let t = alpha * (k as f64 + 0.5) / 6.0;
            let r = eps + (1.0 - eps) * (k as f64 + 0.5) / 6.0;
            for p in [at(1.0, t), at(eps, t), at(r, 0.0), at(r, alpha)] {
                assert!(g.value(p, y).unwrap().abs() < 1e-12, "{p:?}");
            }
        }
    }

    #[test]
    fn half_plane_sector_matches_half_disk_images() {
        // alpha = π with a vanishing hole is the upper half-disk.
        let g = TruncatedSectorGreen::new(PI, 1e-9).unwrap();
        let x = [0.3, 0.4];
        let y = [-0.2, 0.5];
        let disk = |p: [f64; 2], q: [f64; 2]| {
            let pq = (p[0] - q[0]).hypot(p[1] - q[1]);
            let qq = (p[0] * p[0] + p[1] * p[1]) * (q[0] * q[0] + q[1] * q[1])
                - 2.0 * (p[0] * q[0] + p[1] * q[1])
                + 1.0;
            (qq.sqrt() / pq).ln() / (2.0 * PI)
        };
        let expected = disk(x, y) - disk(x, [y[0], -y[1]]);
        assert!((g.value(x, y).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn symmetric_near_the_tip() {
        let g = TruncatedSectorGreen::new(1.3, 0.05).unwrap();
        let (x, y) = (at(0.06, 0.3), at(0.08, 1.1));
        assert!((g.value(x, y).unwrap() - g.value(y, x).unwrap()).abs() < 1e-12);
    }
}
