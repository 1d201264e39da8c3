use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{series_cap, Oracle, OracleInfo, OracleMethod};
use crate::error::{Error, Result};
use crate::geometry::Point;

/// Green's function of the rectangle (0, W) × (−a, a) with Neumann long sides
/// and Dirichlet ends, by cosine expansion across the width.
///
/// The free-strip part is summed in closed form; the series only carries the
/// end corrections, which decay like e^{−kπ·dist/W} away from the ends.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RectangleMixedGreen {
    pub width: f64,
    pub half_length: f64,
    pub tol: f64,
}

impl RectangleMixedGreen {
    pub fn new(width: f64, half_length: f64) -> Result<Self> {
        if !(width > 0.0 && half_length > 0.0 && width.is_finite() && half_length.is_finite()) {
            return Err(Error::InvalidSpec(format!(
                "rectangle {width} x {half_length}"
            )));
        }
        Ok(Self {
            width,
            half_length,
            tol: 1e-15,
        })
    }

    fn free_strip(&self, x: [f64; 2], y: [f64; 2]) -> f64 {
        let w = self.width;
        let q = PI * (x[1] - y[1]).abs() / w;
        let e = (-q).exp();
        let one_minus = -(-q).exp_m1();
        let mut acc = 0.0;
        for th in [PI * (x[0] - y[0]) / w, PI * (x[0] + y[0]) / w] {
            let s = (0.5 * th).sin();
            acc += q + (one_minus * one_minus + 4.0 * e * s * s).ln();
        }
        -acc / (4.0 * PI)
    }

    pub fn value(&self, x: [f64; 2], y: [f64; 2]) -> Result<f64> {
        let (w, a) = (self.width, self.half_length);
        let slack = 1e-12;
        for p in [x, y] {
            if p[0] < -slack || p[0] > w + slack || p[1].abs() > a + slack {
                return Err(Error::NotInRod(p.to_vec()));
            }
        }
        if (x[0] - y[0]).hypot(x[1] - y[1]) < 1e-14 {
            return Err(Error::Singular);
        }
        let (t, s) = (x[1], y[1]);
        let (lo, hi) = (t.min(s), t.max(s));
        let mut value = self.free_strip(x, y);
        value += ((a - hi) * (a + lo) / (2.0 * a) + 0.5 * (t - s).abs()) / w;

        let len = 2.0 * a;
        let (tau, sig) = (t + a, s + a);
        let dd = (tau - sig).abs();
        let ss = tau + sig;
        let cap = series_cap();
        for k in 1..=cap {
            let kappa = k as f64 * PI / w;
            let ex = |z: f64| (-kappa * z).exp();
            let num = ex(dd + 2.0 * len) - ex(2.0 * len - ss) - ex(ss) + ex(2.0 * len - dd);
            let r_k = num / (2.0 * kappa * (-(-2.0 * kappa * len).exp_m1()));
            let weight = 2.0 / w;
            let modes = (kappa * x[0]).cos() * (kappa * y[0]).cos();
            value += weight * modes * r_k;
            let bound = weight
                * (ex(dd + 2.0 * len) + ex(2.0 * len - ss) + ex(ss) + ex(2.0 * len - dd))
                / kappa;
            if bound < self.tol * (value.abs() + 1.0) {
                return Ok(value);
            }
        }
        Err(Error::TruncationFailure(cap))
    }
}

impl Oracle for RectangleMixedGreen {
    fn green(&self, x: &Point, y: &Point) -> Result<f64> {
        let (x, y) = (x.v2()?, y.v2()?);
        self.value([x.x, x.y], [y.x, y.y])
    }

    fn info(&self) -> OracleInfo {
        OracleInfo {
            method: OracleMethod::CosineRectangle,
            accuracy: 1e-12,
            resolution: vec![("tail_tol".into(), self.tol), ("width".into(), self.width)],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Cosine sum with the textbook sinh form of each one-dimensional factor.
    fn sinh_sum(w: f64, a: f64, x: [f64; 2], y: [f64; 2], kmax: usize) -> f64 {
        let len = 2.0 * a;
        let (lo, hi) = ((x[1] + a).min(y[1] + a), (x[1] + a).max(y[1] + a));
        let mut acc = lo * (len - hi) / len / w;
        for k in 1..kmax {
            let c = k as f64 * PI / w;
            let g = (c * lo).sinh() * (c * (len - hi)).sinh() / (c * (c * len).sinh());
            acc += 2.0 / w * (c * x[0]).cos() * (c * y[0]).cos() * g;
        }
        acc
    }

    #[test]
    fn agrees_with_sinh_mode_sum() {
        let g = RectangleMixedGreen::new(1.0, 1.5).unwrap();
        for (x, y) in [([0.2, -0.4], [0.7, 0.6]), ([0.9, 1.2], [0.1, -1.3])] {
            let reference = sinh_sum(1.0, 1.5, x, y, 30);
            assert!((g.value(x, y).unwrap() - reference).abs() < 1e-13);
        }
    }

    #[test]
    fn dirichlet_ends_and_neumann_sides() {
        let g = RectangleMixedGreen::new(0.12, 1.0).unwrap();
        let y = [0.05, 0.97];
        for k in 0..7 {
            let x1 = 0.12 * k as f64 / 6.0;
            assert!(g.value([x1, 1.0], y).unwrap().abs() < 1e-12);
            assert!(g.value([x1, -1.0], y).unwrap().abs() < 1e-12);
        }
        let h = 1e-5;
        for x2 in [-0.5, 0.0, 0.9] {
            let d0 = (g.value([h, x2], y).unwrap() - g.value([0.0, x2], y).unwrap()) / h;
            let dw = (g.value([0.12, x2], y).unwrap() - g.value([0.12 - h, x2], y).unwrap()) / h;
            assert!(d0.abs() < 1e-3 && dw.abs() < 1e-3, "{d0} {dw}");
        }
    }

    #[test]
    fn symmetric() {
        let g = RectangleMixedGreen::new(0.3, 1.0).unwrap();
        let (x, y) = ([0.1, 0.95], [0.25, 0.8]);
        assert!((g.value(x, y).unwrap() - g.value(y, x).unwrap()).abs() < 1e-13);
    }
}
