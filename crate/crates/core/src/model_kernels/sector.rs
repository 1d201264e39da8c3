use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::COINCIDENCE_TOL;
use crate::error::{Error, Result};
use crate::geometry::{sector_angle, Vec2};

/// Scale of the angular eigenfunction Ψ(θ) = c sin(λθ).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PsiNormalization {
    /// ∫₀^α Ψ² dθ = 1.
    #[default]
    L2,
    /// max Ψ = 1.
    Sup,
}

/// First two Dirichlet eigen-exponents of the wedge of opening α.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SectorEigen {
    pub lambda: f64,
    pub lambda2: f64,
    pub normalization: PsiNormalization,
    scale: f64,
}

impl SectorEigen {
    pub fn new(alpha: f64, normalization: PsiNormalization) -> Self {
        let scale = match normalization {
            PsiNormalization::L2 => (2.0 / alpha).sqrt(),
            PsiNormalization::Sup => 1.0,
        };
        Self {
            lambda: PI / alpha,
            lambda2: 2.0 * PI / alpha,
            normalization,
            scale,
        }
    }

    pub fn psi(&self, theta: f64) -> f64 {
        self.scale * (self.lambda * theta).sin()
    }
}

/// Model kernels of the planar wedge K = {0 < θ < α} and its two truncations
/// K₀ = K ∩ {r < 1} and K∞ = K ∩ {r > 1}.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SectorKernels {
    pub alpha: f64,
    pub eigen: SectorEigen,
}

impl SectorKernels {
    pub fn new(alpha: f64, normalization: PsiNormalization) -> Self {
        Self {
            alpha,
            eigen: SectorEigen::new(alpha, normalization),
        }
    }

    fn polar(&self, p: Vec2) -> Result<(f64, f64)> {
        let r = p.norm();
        let mut t = sector_angle(p.x, p.y);
        // points on the ray θ = 0 approached from below wrap to 2π
        if t > self.alpha + 1e-12 && (2.0 * PI - t) < 1e-12 {
            t = 0.0;
        }
        if r == 0.0 || t > self.alpha + 1e-12 {
            return Err(Error::NotInTruncatedSector(vec![p.x, p.y]));
        }
        Ok((r, t.min(self.alpha)))
    }

    /// z ↦ z^λ, sending the wedge to the upper half-plane.
    fn power_map(&self, p: Vec2) -> Result<Complex64> {
        let (r, t) = self.polar(p)?;
        Ok(Complex64::from_polar(
            r.powf(self.eigen.lambda),
            self.eigen.lambda * t,
        ))
    }

    fn pair(&self, x: Vec2, y: Vec2) -> Result<(Complex64, Complex64)> {
        if (x - y).norm() < COINCIDENCE_TOL {
            return Err(Error::Singular);
        }
        Ok((self.power_map(x)?, self.power_map(y)?))
    }

    /// Dirichlet Green's function of the infinite wedge.
    pub fn g_cone(&self, x: Vec2, y: Vec2) -> Result<f64> {
        let (w, v) = self.pair(x, y)?;
        Ok(((w - v.conj()).norm() / (w - v).norm()).ln() / (2.0 * PI))
    }

    fn four_image(w: Complex64, v: Complex64) -> f64 {
        let one = Complex64::new(1.0, 0.0);
        let num = (w - v.conj()).norm() * (one - w * v.conj()).norm();
        let den = (w - v).norm() * (one - w * v).norm();
        (num / den).ln() / (2.0 * PI)
    }

    /// Dirichlet Green's function of K₀ (the wedge cut at r = 1).
    pub fn g_zero(&self, x: Vec2, y: Vec2) -> Result<f64> {
        for p in [x, y] {
            if p.norm() > 1.0 + 1e-12 {
                return Err(Error::NotInTruncatedSector(vec![p.x, p.y]));
            }
        }
        let (w, v) = self.pair(x, y)?;
        Ok(Self::four_image(w, v))
    }

    /// Dirichlet Green's function of K∞ (the wedge outside r = 1).
    pub fn g_inf(&self, xi: Vec2, eta: Vec2) -> Result<f64> {
        for p in [xi, eta] {
            if p.norm() < 1.0 - 1e-12 {
                return Err(Error::NotInTruncatedSector(vec![p.x, p.y]));
            }
        }
        let (w, v) = self.pair(xi, eta)?;
        Ok(Self::four_image(w, v))
    }

    /// Z₀ = (r^{−λ} − r^{λ}) Ψ(θ), harmonic in K₀, zero on ∂K₀ \ {O}.
    pub fn z_zero(&self, x: Vec2) -> Result<f64> {
        let (r, t) = self.polar(x)?;
        let l = self.eigen.lambda;
        Ok((r.powf(-l) - r.powf(l)) * self.eigen.psi(t))
    }

    /// Z∞ = (r^{λ} − r^{−λ}) Ψ(θ), harmonic in K∞, zero on ∂K∞.
    pub fn z_inf(&self, xi: Vec2) -> Result<f64> {
        let (r, t) = self.polar(xi)?;
        let l = self.eigen.lambda;
        Ok((r.powf(l) - r.powf(-l)) * self.eigen.psi(t))
    }

    /// Ψ at the polar angle of `p`.
    pub fn psi_at(&self, p: Vec2) -> Result<f64> {
        let (_, t) = self.polar(p)?;
        Ok(self.eigen.psi(t))
    }
}
