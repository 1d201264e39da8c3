use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::COINCIDENCE_TOL;
use crate::error::{Error, Result};
use crate::geometry::Vec2;

/// Model kernels of the infinite strip (0, w) × R with Neumann sides, and of
/// its two half-strips cut by flat Dirichlet ends at ξ₂ = 0.
///
/// Coordinates are ξ = (ξ₁ across the strip, ξ₂ along it). The half-strip
/// "plus" is {ξ₂ < 0} (the end at +∞ is cut off); "minus" is {ξ₂ > 0}.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StripKernels {
    pub width: f64,
}

/// ln(2 cosh q − 2 cos θ), stable for large q.
fn log_cosh_minus_cos(q: f64, theta: f64) -> f64 {
    let e = (-q).exp();
    let one_minus = -(-q).exp_m1();
    let s = (0.5 * theta).sin();
    q + (one_minus * one_minus + 4.0 * e * s * s).ln()
}

impl StripKernels {
    pub fn new(width: f64) -> Self {
        Self { width }
    }

    fn check(&self, p: Vec2) -> Result<()> {
        let tol = 1e-12 * self.width.max(1.0);
        if p.x < -tol || p.x > self.width + tol || !p.y.is_finite() {
            return Err(Error::NotInRod(vec![p.x, p.y]));
        }
        Ok(())
    }

    /// Neumann kernel G∞ of the infinite strip, normalized so that
    /// G∞ + |ξ₂ − η₂| / (2w) → 0 as |ξ₂ − η₂| → ∞.
    pub fn g_inf(&self, xi: Vec2, eta: Vec2) -> Result<f64> {
        self.check(xi)?;
        self.check(eta)?;
        if (xi - eta).norm() < COINCIDENCE_TOL {
            return Err(Error::Singular);
        }
        let w = self.width;
        let q = PI * (xi.y - eta.y).abs() / w;
        let tm = PI * (xi.x - eta.x) / w;
        let tp = PI * (xi.x + eta.x) / w;
        Ok(-(log_cosh_minus_cos(q, tm) + log_cosh_minus_cos(q, tp)) / (4.0 * PI))
    }

    /// Cosine-mode expansion of G∞, summed until the term falls below `tol`.
    pub fn g_inf_series(&self, xi: Vec2, eta: Vec2, tol: f64) -> Result<f64> {
        self.check(xi)?;
        self.check(eta)?;
        let w = self.width;
        let dt = (xi.y - eta.y).abs();
        if dt < COINCIDENCE_TOL {
            return Err(Error::Unsupported(
                "series form needs distinct axial coordinates".into(),
            ));
        }
        let mut sum = -dt / (2.0 * w);
        for k in 1..=10_000usize {
            let kf = k as f64;
            let term = (kf * PI * xi.x / w).cos()
                * (kf * PI * eta.x / w).cos()
                * (-kf * PI * dt / w).exp()
                / (kf * PI);
            sum += term;
            if (-kf * PI * dt / w).exp() / (kf * PI) < tol * (sum.abs() + 1.0) {
                return Ok(sum);
            }
        }
        Err(Error::TruncationFailure(10_000))
    }

    fn reflect(eta: Vec2) -> Vec2 {
        Vec2::new(eta.x, -eta.y)
    }

    /// Green's function of the half-strip {ξ₂ < 0}, Dirichlet at ξ₂ = 0.
    pub fn g_plus(&self, xi: Vec2, eta: Vec2) -> Result<f64> {
        for p in [xi, eta] {
            if p.y > 1e-12 {
                return Err(Error::NotInRod(vec![p.x, p.y]));
            }
        }
        Ok(self.g_inf(xi, eta)? - self.g_inf(xi, Self::reflect(eta))?)
    }

    /// Green's function of the half-strip {ξ₂ > 0}, Dirichlet at ξ₂ = 0.
    pub fn g_minus(&self, xi: Vec2, eta: Vec2) -> Result<f64> {
        for p in [xi, eta] {
            if p.y < -1e-12 {
                return Err(Error::NotInRod(vec![p.x, p.y]));
            }
        }
        Ok(self.g_inf(xi, eta)? - self.g_inf(xi, Self::reflect(eta))?)
    }

    /// ζ⁺(ξ) = lim G⁺(·, ξ) at −∞; equals −ξ₂ / w for a flat end.
    pub fn zeta_plus(&self, xi: Vec2) -> f64 {
        -xi.y / self.width
    }

    pub fn zeta_minus(&self, xi: Vec2) -> f64 {
        xi.y / self.width
    }

    pub fn zeta_inf_plus(&self) -> f64 {
        0.0
    }

    pub fn zeta_inf_minus(&self) -> f64 {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::gauss_legendre;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn closed_form_matches_mode_series() {
        let k = StripKernels::new(1.3);
        for (xi, eta) in [
            (Vec2::new(0.2, 0.3), Vec2::new(1.1, -0.4)),
            (Vec2::new(0.0, 2.0), Vec2::new(1.3, 1.9)),
            (Vec2::new(0.65, -5.0), Vec2::new(0.6, 3.0)),
        ] {
            let a = k.g_inf(xi, eta).unwrap();
            let b = k.g_inf_series(xi, eta, 1e-16).unwrap();
            assert!((a - b).abs() < 1e-12, "{a} {b}");
        }
    }

    #[test]
    fn symmetry() {
        let k = StripKernels::new(1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let x = Vec2::new(rng.random_range(0.0..1.0), rng.random_range(-3.0..3.0));
            let y = Vec2::new(rng.random_range(0.0..1.0), rng.random_range(-3.0..3.0));
            assert!((k.g_inf(x, y).unwrap() - k.g_inf(y, x).unwrap()).abs() < 1e-10);
        }
    }

    #[test]
    fn cross_section_average_is_linear() {
        let w = 1.0;
        let k = StripKernels::new(w);
        let (nodes, weights) = gauss_legendre(64);
        let eta = Vec2::new(0.3, 0.0);
        for t in [0.5, 1.0, 2.5] {
            let avg: f64 = nodes
                .iter()
                .zip(&weights)
                .map(|(s, wt)| 0.5 * wt * k.g_inf(Vec2::new(0.5 * w * (1.0 + s), t), eta).unwrap())
                .sum();
            assert!((avg + t / (2.0 * w)).abs() < 1e-10, "{avg}");
        }
    }

    #[test]
    fn far_field_and_zeta_limits() {
        let w = 1.0;
        let k = StripKernels::new(w);
        let eta = Vec2::new(0.4, -0.7);
        let xi = Vec2::new(0.8, -0.7 - 20.0 * w);
        assert!((k.g_inf(xi, eta).unwrap() + 20.0 / 2.0).abs() < 1e-10);
        // ζ⁺ is the limit of G⁺ at −∞
        assert!((k.g_plus(xi, eta).unwrap() - k.zeta_plus(eta)).abs() < 1e-10);
        let xi_m = Vec2::new(0.1, 20.0 * w);
        let eta_m = Vec2::new(0.4, 0.7);
        assert!((k.g_minus(xi_m, eta_m).unwrap() - k.zeta_minus(eta_m)).abs() < 1e-10);
        assert_eq!(k.zeta_plus(Vec2::new(0.3, -2.0)), 2.0);
    }

    #[test]
    fn boundary_conditions() {
        let k = StripKernels::new(1.0);
        let eta = Vec2::new(0.35, -0.8);
        for j in 0..9 {
            let x1 = j as f64 / 8.0;
            assert!(k.g_plus(Vec2::new(x1, 0.0), eta).unwrap().abs() < 1e-14);
        }
        let h = 1e-4;
        for t in [-0.3, -1.2] {
            for side in [0.0, 1.0] {
                let f = |x1: f64| k.g_plus(Vec2::new(x1, t), eta).unwrap();
                let s = if side == 0.0 { 1.0 } else { -1.0 };
                let d =
                    (-3.0 * f(side) + 4.0 * f(side + s * h) - f(side + 2.0 * s * h)) / (2.0 * h);
                assert!(d.abs() < 1e-6, "{d}");
            }
        }
    }

    #[test]
    fn harmonic_away_from_pole() {
        let k = StripKernels::new(1.0);
        let eta = Vec2::new(0.3, 0.2);
        let x = Vec2::new(0.6, -0.4);
        let h = 1e-3;
        let f = |p: Vec2| k.g_inf(p, eta).unwrap();
        let lap = (f(x + Vec2::new(h, 0.0))
            + f(x - Vec2::new(h, 0.0))
            + f(x + Vec2::new(0.0, h))
            + f(x - Vec2::new(0.0, h))
            - 4.0 * f(x))
            / (h * h);
        assert!(lap.abs() < 1e-5);
    }
}
