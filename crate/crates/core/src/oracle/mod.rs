//! Independent reference solutions for the exact perturbed Green's functions:
//! separable series where the geometry allows it, a boundary-integral solver
//! for general smooth planar domains, and a multipole solver for balls with
//! several holes.

mod annulus;
mod multisphere;
mod nystrom;
mod rectangle;
mod sector_series;
mod spheres;

use serde::{Deserialize, Serialize};

pub use annulus::{AnnulusBc, AnnulusGreen};
pub use multisphere::MultiSphereGreen;
pub use nystrom::{BoundaryIntegralGreen, NystromDensity, NystromResolution};
pub use rectangle::RectangleMixedGreen;
pub use sector_series::TruncatedSectorGreen;
pub use spheres::ConcentricSpheresGreen;

use crate::asymptotics::FormulaId;
use crate::error::{Error, Result};
use crate::geometry::{closed_components, DomainSpec, Point};

pub(crate) fn series_cap() -> usize {
    100_000
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleMethod {
    FourierAnnulus,
    SphericalHarmonics,
    CosineRectangle,
    SectorSeries,
    BoundaryIntegral,
    MultiSphereGalerkin,
}

impl OracleMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            OracleMethod::FourierAnnulus => "fourier-annulus",
            OracleMethod::SphericalHarmonics => "spherical-harmonics",
            OracleMethod::CosineRectangle => "cosine-rectangle",
            OracleMethod::SectorSeries => "sector-series",
            OracleMethod::BoundaryIntegral => "boundary-integral",
            OracleMethod::MultiSphereGalerkin => "multi-sphere-galerkin",
        }
    }
}

impl std::fmt::Display for OracleMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Method tag, estimated absolute accuracy and discretization parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleInfo {
    pub method: OracleMethod,
    pub accuracy: f64,
    pub resolution: Vec<(String, f64)>,
}

/// A reference evaluator of the exact Green's function of one configuration.
pub trait Oracle: Send + Sync {
    fn green(&self, x: &Point, y: &Point) -> Result<f64>;

    /// Evaluates many pairs; solvers that factor per source override this to
    /// share work between pairs with the same `y`.
    fn green_batch(&self, pairs: &[(Point, Point)]) -> Vec<Result<f64>> {
        pairs.iter().map(|(x, y)| self.green(x, y)).collect()
    }

    fn info(&self) -> OracleInfo;

    /// Re-estimates the accuracy by comparing with a refined discretization at
    /// `probes`. Series oracles report their tail tolerance unchanged.
    fn estimate_accuracy(&mut self, _probes: &[(Point, Point)]) -> Result<f64> {
        Ok(self.info().accuracy)
    }
}

/// The reference solution matching the boundary-value problem that `formula`
/// approximates on `spec`. `d_min` is the smallest distance from an evaluation
/// point to the boundary, used to size discretizations.
pub fn reference_for(formula: FormulaId, spec: &DomainSpec, d_min: f64) -> Result<Box<dyn Oracle>> {
    use FormulaId as F;
    spec.validate()?;
    if !formula.accepts(spec) {
        return Err(Error::InvalidSpec(format!(
            "{formula} does not apply to {}",
            spec.variant_name()
        )));
    }
    let eps = spec.epsilon();
    let oracle: Box<dyn Oracle> = match spec {
        DomainSpec::PerturbedDisk { .. } => Box::new(BoundaryIntegralGreen::adaptive(spec, d_min)?),
        DomainSpec::DiskWithHole { hole_center, .. } => {
            let centered = hole_center[0] == 0.0 && hole_center[1] == 0.0;
            let bc = match formula {
                F::MixedOuterDHoleN => AnnulusBc::DN,
                F::MixedOuterNHoleD => AnnulusBc::ND,
                _ => AnnulusBc::DD,
            };
            match (centered, bc) {
                (true, _) => Box::new(AnnulusGreen::new(eps, bc)?),
                (false, AnnulusBc::DD) => Box::new(BoundaryIntegralGreen::adaptive(spec, d_min)?),
                (false, _) => {
                    return Err(Error::Unsupported(
                        "mixed boundary conditions need a concentric hole".into(),
                    ))
                }
            }
        }
        DomainSpec::BallWithHole { hole_center, .. } if *hole_center == [0.0; 3] => {
            Box::new(ConcentricSpheresGreen::new(eps)?)
        }
        DomainSpec::BallWithHole { .. } | DomainSpec::BallWithHoles { .. } => {
            Box::new(MultiSphereGreen::new(spec)?)
        }
        DomainSpec::ThinRodStrip {
            half_length, width, ..
        } => Box::new(RectangleMixedGreen::new(eps * width, *half_length)?),
        DomainSpec::TruncatedSector { alpha, .. } => {
            Box::new(TruncatedSectorGreen::new(*alpha, eps)?)
        }
    };
    Ok(oracle)
}

/// [`reference_for`] sized for evaluation at `points`. Configurations without
/// a discretized oracle ignore the distances.
pub fn reference_at(
    formula: FormulaId,
    spec: &DomainSpec,
    points: &[Point],
) -> Result<Box<dyn Oracle>> {
    let d_min = match closed_components(spec) {
        Ok(curves) => {
            let mut d = f64::INFINITY;
            for p in points {
                let v = p.v2()?;
                for (_, c) in &curves {
                    d = d.min(c.distance_to(v).0);
                }
            }
            d
        }
        Err(_) => 1.0,
    };
    if !(d_min > 0.0) {
        return Err(Error::NotInDomain(
            points
                .first()
                .map(|p| p.coords().to_vec())
                .unwrap_or_default(),
        ));
    }
    reference_for(formula, spec, d_min)
}
