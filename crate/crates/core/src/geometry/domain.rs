use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::point::{Point, Vec2, Vec3};
use crate::error::{Error, Result};

/// Real trigonometric polynomial `sum_k cos[k] cos(k t) + sum_k sin[k] sin((k+1) t)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrigPolynomial {
    /// Cosine coefficients starting at the constant term.
    pub cos: Vec<f64>,
    /// Sine coefficients starting at sin(t).
    #[serde(default)]
    pub sin: Vec<f64>,
}

impl TrigPolynomial {
    pub fn new(cos: Vec<f64>, sin: Vec<f64>) -> Self {
        Self { cos, sin }
    }

    /// Value and first two derivatives at `t`.
    pub fn eval3(&self, t: f64) -> (f64, f64, f64) {
        let (mut v, mut d1, mut d2) = (0.0, 0.0, 0.0);
        for (k, c) in self.cos.iter().enumerate() {
            let kf = k as f64;
            let (s, co) = (kf * t).sin_cos();
            v += c * co;
            d1 -= c * kf * s;
            d2 -= c * kf * kf * co;
        }
        for (k, c) in self.sin.iter().enumerate() {
            let kf = (k + 1) as f64;
            let (s, co) = (kf * t).sin_cos();
            v += c * s;
            d1 += c * kf * co;
            d2 -= c * kf * kf * s;
        }
        (v, d1, d2)
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.eval3(t).0
    }

    /// Minimum and maximum over a fine scan.
    pub fn range(&self) -> (f64, f64) {
        let n = 4096;
        (0..n)
            .map(|i| self.eval(2.0 * PI * i as f64 / n as f64))
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                (lo.min(v), hi.max(v))
            })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EndShape {
    #[default]
    Flat,
}

/// A perturbed-domain configuration. All lengths are normalized so that the
/// unperturbed outer boundary is the unit circle/sphere (or the unit arc of the
/// sector), and holes have unit radius before scaling by `epsilon`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", deny_unknown_fields)]
pub enum DomainSpec {
    /// Unit disk with boundary pulled inward radially: r(t) = 1 - epsilon * delta(t).
    PerturbedDisk { delta: TrigPolynomial, epsilon: f64 },
    /// Unit disk minus the disk of radius epsilon at `hole_center`.
    DiskWithHole {
        #[serde(default)]
        hole_center: [f64; 2],
        epsilon: f64,
    },
    /// Unit ball minus the ball of radius epsilon at `hole_center`.
    BallWithHole {
        #[serde(default)]
        hole_center: [f64; 3],
        epsilon: f64,
    },
    /// Unit ball minus balls of radius epsilon at each center.
    BallWithHoles {
        centers: Vec<[f64; 3]>,
        epsilon: f64,
    },
    /// Rectangle (0, epsilon*width) x (-half_length, half_length): Neumann long sides,
    /// Dirichlet ends.
    ThinRodStrip {
        half_length: f64,
        width: f64,
        #[serde(default)]
        ends: EndShape,
        epsilon: f64,
    },
    /// Annular sector epsilon < r < 1, 0 < theta < alpha, Dirichlet everywhere.
    TruncatedSector { alpha: f64, epsilon: f64 },
}

impl DomainSpec {
    pub fn perturbed_disk(delta: TrigPolynomial, epsilon: f64) -> Result<Self> {
        Self::PerturbedDisk { delta, epsilon }.validated()
    }

    pub fn disk_with_hole(epsilon: f64) -> Result<Self> {
        Self::DiskWithHole {
            hole_center: [0.0; 2],
            epsilon,
        }
        .validated()
    }

    pub fn ball_with_hole(epsilon: f64) -> Result<Self> {
        Self::BallWithHole {
            hole_center: [0.0; 3],
            epsilon,
        }
        .validated()
    }

    pub fn ball_with_holes(centers: Vec<[f64; 3]>, epsilon: f64) -> Result<Self> {
        Self::BallWithHoles { centers, epsilon }.validated()
    }

    pub fn thin_rod(half_length: f64, width: f64, epsilon: f64) -> Result<Self> {
        Self::ThinRodStrip {
            half_length,
            width,
            ends: EndShape::Flat,
            epsilon,
        }
        .validated()
    }

    pub fn truncated_sector(alpha: f64, epsilon: f64) -> Result<Self> {
        Self::TruncatedSector { alpha, epsilon }.validated()
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let spec: DomainSpec =
            serde_json::from_str(s).map_err(|e| Error::InvalidSpec(e.to_string()))?;
        spec.validated()
    }

    pub fn validated(self) -> Result<Self> {
        self.validate()?;
        Ok(self)
    }

    pub fn epsilon(&self) -> f64 {
        match self {
            DomainSpec::PerturbedDisk { epsilon, .. }
            | DomainSpec::DiskWithHole { epsilon, .. }
            | DomainSpec::BallWithHole { epsilon, .. }
            | DomainSpec::BallWithHoles { epsilon, .. }
            | DomainSpec::ThinRodStrip { epsilon, .. }
            | DomainSpec::TruncatedSector { epsilon, .. } => *epsilon,
        }
    }

    /// Same configuration at a different perturbation size.
    pub fn with_epsilon(&self, eps: f64) -> Result<Self> {
        let mut s = self.clone();
        match &mut s {
            DomainSpec::PerturbedDisk { epsilon, .. }
            | DomainSpec::DiskWithHole { epsilon, .. }
            | DomainSpec::BallWithHole { epsilon, .. }
            | DomainSpec::BallWithHoles { epsilon, .. }
            | DomainSpec::ThinRodStrip { epsilon, .. }
            | DomainSpec::TruncatedSector { epsilon, .. } => *epsilon = eps,
        }
        s.validated()
    }

    pub fn dim(&self) -> usize {
        match self {
            DomainSpec::BallWithHole { .. } | DomainSpec::BallWithHoles { .. } => 3,
            _ => 2,
        }
    }

    pub fn variant_name(&self) -> &'static str {
        match self {
            DomainSpec::PerturbedDisk { .. } => "PerturbedDisk",
            DomainSpec::DiskWithHole { .. } => "DiskWithHole",
            DomainSpec::BallWithHole { .. } => "BallWithHole",
            DomainSpec::BallWithHoles { .. } => "BallWithHoles",
            DomainSpec::ThinRodStrip { .. } => "ThinRodStrip",
            DomainSpec::TruncatedSector { .. } => "TruncatedSector",
        }
    }

    /// Hole centers for the perforated variants, as 3-vectors (z = 0 in 2D).
    pub fn hole_centers(&self) -> Vec<Vec3> {
        match self {
            DomainSpec::DiskWithHole { hole_center: c, .. } => vec![Vec3::new(c[0], c[1], 0.0)],
            DomainSpec::BallWithHole { hole_center: c, .. } => vec![Vec3::from(*c)],
            DomainSpec::BallWithHoles { centers, .. } => {
                centers.iter().map(|c| Vec3::from(*c)).collect()
            }
            _ => Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let eps = self.epsilon();
        if !eps.is_finite() || eps < 0.0 {
            return Err(Error::InvalidSpec(format!(
                "epsilon must be >= 0, got {eps}"
            )));
        }
        match self {
            DomainSpec::PerturbedDisk { delta, epsilon } => {
                if delta.cos.is_empty() && delta.sin.is_empty() {
                    return Err(Error::InvalidSpec("delta has no coefficients".into()));
                }
                let (lo, hi) = delta.range();
                if lo <= 0.0 {
                    return Err(Error::InvalidSpec(format!(
                        "delta must be positive, min {lo}"
                    )));
                }
                if epsilon * hi >= 0.5 {
                    return Err(Error::InvalidSpec(
                        "epsilon * max(delta) must be < 1/2".into(),
                    ));
                }
            }
            DomainSpec::DiskWithHole {
                hole_center,
                epsilon,
            } => {
                if !(*epsilon > 0.0 && *epsilon < 0.5) {
                    return Err(Error::InvalidSpec("epsilon must lie in (0, 1/2)".into()));
                }
                if Vec2::from(*hole_center).norm() + epsilon >= 1.0 {
                    return Err(Error::HolesOverlap);
                }
            }
            DomainSpec::BallWithHole {
                hole_center,
                epsilon,
            } => {
                if !(*epsilon > 0.0 && *epsilon < 0.5) {
                    return Err(Error::InvalidSpec("epsilon must lie in (0, 1/2)".into()));
                }
                if Vec3::from(*hole_center).norm() + epsilon >= 1.0 {
                    return Err(Error::HolesOverlap);
                }
            }
            DomainSpec::BallWithHoles { centers, epsilon } => {
                if centers.is_empty() {
                    return Err(Error::InvalidSpec(
                        "at least one hole center required".into(),
                    ));
                }
                if !(*epsilon > 0.0 && *epsilon < 0.5) {
                    return Err(Error::InvalidSpec("epsilon must lie in (0, 1/2)".into()));
                }
                for (i, a) in centers.iter().enumerate() {
                    let a = Vec3::from(*a);
                    if a.norm() + epsilon >= 1.0 {
                        return Err(Error::HolesOverlap);
                    }
                    for b in &centers[i + 1..] {
                        let d = (a - Vec3::from(*b)).norm();
                        if d == 0.0 {
                            return Err(Error::InvalidSpec("hole centers must be distinct".into()));
                        }
                        if d <= 2.0 * epsilon {
                            return Err(Error::HolesOverlap);
                        }
                    }
                }
            }
            DomainSpec::ThinRodStrip {
                half_length,
                width,
                epsilon,
                ..
            } => {
                if !(*half_length > 0.0 && *width > 0.0 && *epsilon > 0.0) {
                    return Err(Error::InvalidSpec(
                        "rod needs half_length, width, epsilon > 0".into(),
                    ));
                }
            }
            DomainSpec::TruncatedSector { alpha, epsilon } => {
                if !(*alpha > 0.0 && *alpha < 2.0 * PI) {
                    return Err(Error::InvalidSpec("alpha must lie in (0, 2 pi)".into()));
                }
                if !(*epsilon > 0.0 && *epsilon < 1.0) {
                    return Err(Error::InvalidSpec("epsilon must lie in (0, 1)".into()));
                }
            }
        }
        Ok(())
    }

    /// Open-domain membership test.
    pub fn contains(&self, p: &Point) -> bool {
        if p.dim() != self.dim() {
            return false;
        }
        let c = p.coords();
        match self {
            DomainSpec::PerturbedDisk { delta, epsilon } => {
                let r = (c[0] * c[0] + c[1] * c[1]).sqrt();
                let t = c[1].atan2(c[0]);
                r < 1.0 - epsilon * delta.eval(t)
            }
            DomainSpec::DiskWithHole {
                hole_center: h,
                epsilon,
            } => {
                let r = (c[0] * c[0] + c[1] * c[1]).sqrt();
                let rh = ((c[0] - h[0]).powi(2) + (c[1] - h[1]).powi(2)).sqrt();
                r < 1.0 && rh > *epsilon
            }
            DomainSpec::BallWithHole { .. } | DomainSpec::BallWithHoles { .. } => {
                let v = Vec3::new(c[0], c[1], c[2]);
                let eps = self.epsilon();
                v.norm() < 1.0 && self.hole_centers().iter().all(|o| (v - o).norm() > eps)
            }
            DomainSpec::ThinRodStrip {
                half_length,
                width,
                epsilon,
                ..
            } => c[0] > 0.0 && c[0] < epsilon * width && c[1].abs() < *half_length,
            DomainSpec::TruncatedSector { alpha, epsilon } => {
                let r = (c[0] * c[0] + c[1] * c[1]).sqrt();
                let t = sector_angle(c[0], c[1]);
                r > *epsilon && r < 1.0 && t > 0.0 && t < *alpha
            }
        }
    }
}

impl DomainSpec {
    /// Closed-domain membership with absolute tolerance `tol`.
    pub fn contains_closed(&self, p: &Point, tol: f64) -> bool {
        if p.dim() != self.dim() {
            return false;
        }
        let c = p.coords();
        match self {
            DomainSpec::PerturbedDisk { delta, epsilon } => {
                let r = (c[0] * c[0] + c[1] * c[1]).sqrt();
                r <= 1.0 - epsilon * delta.eval(c[1].atan2(c[0])) + tol
            }
            DomainSpec::DiskWithHole { .. }
            | DomainSpec::BallWithHole { .. }
            | DomainSpec::BallWithHoles { .. } => {
                let v = if c.len() == 2 {
                    Vec3::new(c[0], c[1], 0.0)
                } else {
                    Vec3::new(c[0], c[1], c[2])
                };
                let eps = self.epsilon();
                v.norm() <= 1.0 + tol
                    && self
                        .hole_centers()
                        .iter()
                        .all(|o| (v - o).norm() >= eps - tol)
            }
            DomainSpec::ThinRodStrip {
                half_length,
                width,
                epsilon,
                ..
            } => c[0] >= -tol && c[0] <= epsilon * width + tol && c[1].abs() <= half_length + tol,
            DomainSpec::TruncatedSector { alpha, epsilon } => {
                let r = (c[0] * c[0] + c[1] * c[1]).sqrt();
                let mut t = sector_angle(c[0], c[1]);
                if 2.0 * PI - t <= tol {
                    t = 0.0;
                }
                r >= epsilon - tol && r <= 1.0 + tol && t <= alpha + tol
            }
        }
    }
}

/// Polar angle in [0, 2 pi).
pub fn sector_angle(x: f64, y: f64) -> f64 {
    let t = y.atan2(x);
    if t < 0.0 {
        t + 2.0 * PI
    } else {
        t
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip_and_field_names() {
        let spec =
            DomainSpec::perturbed_disk(TrigPolynomial::new(vec![1.0, 0.3], vec![]), 0.1).unwrap();
        let s = serde_json::to_string(&spec).unwrap();
        assert!(s.contains("\"variant\":\"PerturbedDisk\""));
        assert_eq!(DomainSpec::from_json(&s).unwrap(), spec);
        let hole = DomainSpec::from_json(r#"{"variant":"DiskWithHole","epsilon":0.1}"#).unwrap();
        assert_eq!(hole, DomainSpec::disk_with_hole(0.1).unwrap());
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let r = DomainSpec::from_json(r#"{"variant":"DiskWithHole","epsilon":0.1,"radius":2}"#);
        assert!(matches!(r, Err(Error::InvalidSpec(_))));
    }

    #[test]
    fn construction_checks_normalizations() {
        assert!(DomainSpec::disk_with_hole(0.6).is_err());
        assert!(DomainSpec::ball_with_holes(vec![[0.3, 0.0, 0.0], [-0.3, 0.0, 0.0]], 0.3).is_err());
        assert!(DomainSpec::ball_with_holes(vec![[0.3, 0.0, 0.0], [0.3, 0.0, 0.0]], 0.1).is_err());
        assert!(
            DomainSpec::perturbed_disk(TrigPolynomial::new(vec![0.2, 0.3], vec![]), 0.1).is_err()
        );
        assert!(DomainSpec::truncated_sector(7.0, 0.1).is_err());
    }

    #[test]
    fn membership() {
        let s = DomainSpec::truncated_sector(PI / 2.0, 0.1).unwrap();
        assert!(s.contains(&Point::new2(0.3, 0.3)));
        assert!(!s.contains(&Point::new2(-0.3, 0.3)));
        assert!(!s.contains(&Point::new2(0.05, 0.05)));
        let r = DomainSpec::thin_rod(1.0, 1.0, 0.1).unwrap();
        assert!(r.contains(&Point::new2(0.05, 0.9)));
        assert!(!r.contains(&Point::new2(0.15, 0.0)));
    }
}
