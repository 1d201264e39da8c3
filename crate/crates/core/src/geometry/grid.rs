//! Seeded evaluation grids of point pairs, stratified by distance to the
//! outer boundary and to the holes.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::boundary::{boundary_curve, BoundaryId};
use super::domain::DomainSpec;
use super::point::{Point, Vec2, Vec3};
use crate::error::{Error, Result};

/// Layout parameters for [`make_pair_grid`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridPolicy {
    /// Number of seeded interior points.
    pub interior_points: usize,
    /// Minimum distance of interior points from every boundary component.
    pub interior_margin: f64,
    /// Near-boundary offsets as multiples of epsilon.
    pub offsets: Vec<f64>,
    /// Angular (or directional) samples per offset and boundary component.
    pub angles: usize,
    /// Minimum pair separation; `None` means max(1e-3, epsilon / 10).
    pub r_min: Option<f64>,
    /// Width of the boundary neighbourhood used by the perturbed-disk formula.
    pub d0: f64,
    pub seed: u64,
}

impl Default for GridPolicy {
    fn default() -> Self {
        Self {
            interior_points: 48,
            interior_margin: 0.25,
            offsets: vec![0.5, 1.0, 2.0],
            angles: 32,
            r_min: None,
            d0: 0.3,
            seed: 0,
        }
    }
}

impl GridPolicy {
    pub fn r_min_for(&self, epsilon: f64) -> f64 {
        self.r_min.unwrap_or_else(|| (epsilon / 10.0).max(1e-3))
    }
}

/// Where a grid point sits.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "kebab-case")]
pub enum PointClass {
    Interior,
    /// At `offset * epsilon` from the outer boundary.
    NearOuter {
        offset: f64,
    },
    /// At `offset * epsilon` from the boundary of hole `hole`.
    NearHole {
        hole: usize,
        offset: f64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stratum {
    Interior,
    NearOuter,
    NearHole,
}

impl Stratum {
    pub fn as_str(&self) -> &'static str {
        match self {
            Stratum::Interior => "interior",
            Stratum::NearOuter => "near-outer",
            Stratum::NearHole => "near-hole",
        }
    }
}

impl std::fmt::Display for Stratum {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Stratum {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "interior" => Ok(Stratum::Interior),
            "near-outer" => Ok(Stratum::NearOuter),
            "near-hole" => Ok(Stratum::NearHole),
            _ => Err(Error::InvalidSpec(format!("unknown stratum {s}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub point: Point,
    pub class: PointClass,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridPair {
    pub x: GridPoint,
    pub y: GridPoint,
    pub stratum: Stratum,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairGrid {
    pub pairs: Vec<GridPair>,
    pub r_min: f64,
    /// Pairs dropped because |x - y| < r_min.
    pub coincidence_excluded: usize,
}

impl PairGrid {
    pub fn stratum(&self, s: Stratum) -> impl Iterator<Item = &GridPair> {
        self.pairs.iter().filter(move |p| p.stratum == s)
    }
}

fn stratum_of(a: &PointClass, b: &PointClass) -> Stratum {
    let hole = |c: &PointClass| matches!(c, PointClass::NearHole { .. });
    let outer = |c: &PointClass| matches!(c, PointClass::NearOuter { .. });
    if hole(a) || hole(b) {
        Stratum::NearHole
    } else if outer(a) || outer(b) {
        Stratum::NearOuter
    } else {
        Stratum::Interior
    }
}

/// Quasi-uniform directions on the unit sphere (Fibonacci lattice).
pub fn sphere_directions(n: usize) -> Vec<Vec3> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|k| {
            let z = 1.0 - (2.0 * k as f64 + 1.0) / n as f64;
            let r = (1.0 - z * z).sqrt();
            let phi = golden * k as f64 + 0.3;
            Vec3::new(r * phi.cos(), r * phi.sin(), z)
        })
        .collect()
}

fn angle(k: usize, n: usize) -> f64 {
    // shifted off the symmetry axes of the shipped configurations
    2.0 * PI * (k as f64 + 0.137) / n as f64
}

/// Seeded interior points; acceptance depends only on epsilon-independent
/// criteria so the same points recur across an epsilon sweep.
fn interior_points(spec: &DomainSpec, policy: &GridPolicy) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(policy.seed);
    let m = policy.interior_margin;
    let centers = spec.hole_centers();
    let mut out = Vec::with_capacity(policy.interior_points);
    let mut tries = 0usize;
    while out.len() < policy.interior_points && tries < 1_000_000 {
        tries += 1;
        let p = match spec {
            DomainSpec::PerturbedDisk { .. } | DomainSpec::DiskWithHole { .. } => {
                let v = Vec2::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                let clear = centers.iter().all(|c| (v - c.xy()).norm() >= m);
                if v.norm() > 1.0 - m || !clear {
                    continue;
                }
                Point::from(v)
            }
            DomainSpec::BallWithHole { .. } | DomainSpec::BallWithHoles { .. } => {
                let v = Vec3::new(
                    rng.random_range(-1.0..1.0),
                    rng.random_range(-1.0..1.0),
                    rng.random_range(-1.0..1.0),
                );
                let clear = centers.iter().all(|c| (v - c).norm() >= m);
                if v.norm() > 1.0 - m || !clear {
                    continue;
                }
                Point::from(v)
            }
            DomainSpec::ThinRodStrip {
                half_length,
                width,
                epsilon,
                ..
            } => {
                let u: f64 = rng.random_range(0.05..0.95);
                let t: f64 = rng.random_range(-1.0..1.0) * (half_length * (1.0 - m)).max(0.0);
                Point::new2(epsilon * width * u, t)
            }
            DomainSpec::TruncatedSector { alpha, .. } => {
                let r: f64 = rng.random_range(m..(1.0 - m).max(m + 1e-9));
                let th: f64 = alpha * rng.random_range(0.1..0.9);
                Point::new2(r * th.cos(), r * th.sin())
            }
        };
        out.push(p);
    }
    out.into_iter().filter(|p| spec.contains(p)).collect()
}

fn near_points(spec: &DomainSpec, policy: &GridPolicy) -> Result<Vec<GridPoint>> {
    let eps = spec.epsilon();
    let n = policy.angles;
    let mut out = Vec::new();
    for &o in &policy.offsets {
        let d = o * eps;
        match spec {
            DomainSpec::PerturbedDisk { .. } => {
                let curve = boundary_curve(spec, BoundaryId::Perturbed)?;
                for k in 0..n {
                    let t = angle(k, n);
                    let p = curve.point(t) - d * curve.normal(t);
                    out.push(GridPoint {
                        point: p.into(),
                        class: PointClass::NearOuter { offset: o },
                    });
                }
            }
            DomainSpec::DiskWithHole { hole_center, .. } => {
                let c = Vec2::from(*hole_center);
                for k in 0..n {
                    let (s, co) = angle(k, n).sin_cos();
                    let u = Vec2::new(co, s);
                    out.push(GridPoint {
                        point: ((1.0 - d) * u).into(),
                        class: PointClass::NearOuter { offset: o },
                    });
                    out.push(GridPoint {
                        point: (c + (eps + d) * u).into(),
                        class: PointClass::NearHole { hole: 0, offset: o },
                    });
                }
            }
            DomainSpec::BallWithHole { .. } | DomainSpec::BallWithHoles { .. } => {
                let dirs = sphere_directions(n);
                for u in &dirs {
                    out.push(GridPoint {
                        point: ((1.0 - d) * u).into(),
                        class: PointClass::NearOuter { offset: o },
                    });
                }
                for (j, c) in spec.hole_centers().iter().enumerate() {
                    for u in &dirs {
                        out.push(GridPoint {
                            point: (c + (eps + d) * u).into(),
                            class: PointClass::NearHole { hole: j, offset: o },
                        });
                    }
                }
            }
            DomainSpec::ThinRodStrip {
                half_length, width, ..
            } => {
                // near the Dirichlet ends, spread across the cross-section
                for k in 0..n {
                    let u = (k as f64 + 0.5) / n as f64;
                    let x1 = eps * width * u;
                    for sign in [-1.0, 1.0] {
                        out.push(GridPoint {
                            point: Point::new2(x1, sign * (half_length - d * width)),
                            class: PointClass::NearOuter { offset: o },
                        });
                    }
                }
            }
            DomainSpec::TruncatedSector { alpha, .. } => {
                for k in 0..n {
                    let th = alpha * (k as f64 + 0.5) / n as f64;
                    let (s, c) = th.sin_cos();
                    out.push(GridPoint {
                        point: Point::new2((1.0 - d) * c, (1.0 - d) * s),
                        class: PointClass::NearOuter { offset: o },
                    });
                    out.push(GridPoint {
                        point: Point::new2((eps + d) * c, (eps + d) * s),
                        class: PointClass::NearHole { hole: 0, offset: o },
                    });
                }
            }
        }
    }
    Ok(out
        .into_iter()
        .filter(|g| spec.contains(&g.point))
        .collect())
}

/// All grid points (interior first, then near-boundary points by offset).
pub fn grid_points(spec: &DomainSpec, policy: &GridPolicy) -> Result<Vec<GridPoint>> {
    let mut pts: Vec<GridPoint> = interior_points(spec, policy)
        .into_iter()
        .map(|p| GridPoint {
            point: p,
            class: PointClass::Interior,
        })
        .collect();
    pts.extend(near_points(spec, policy)?);
    Ok(pts)
}

/// Every unordered pair of grid points at separation >= r_min, tagged by stratum.
pub fn make_pair_grid(spec: &DomainSpec, policy: &GridPolicy) -> Result<PairGrid> {
    let r_min = policy.r_min_for(spec.epsilon());
    if !(r_min.is_finite() && r_min >= 0.0) {
        return Err(Error::InvalidSpec(format!(
            "r_min must be finite and >= 0, got {r_min}"
        )));
    }
    let pts = grid_points(spec, policy)?;
    let mut pairs = Vec::new();
    let mut excluded = 0;
    for (i, a) in pts.iter().enumerate() {
        for b in &pts[i + 1..] {
            if a.point.distance(&b.point) < r_min {
                excluded += 1;
                continue;
            }
            pairs.push(GridPair {
                x: *a,
                y: *b,
                stratum: stratum_of(&a.class, &b.class),
            });
        }
    }
    if pairs.is_empty() {
        return Err(Error::EmptyGrid);
    }
    Ok(PairGrid {
        pairs,
        r_min,
        coincidence_excluded: excluded,
    })
}
