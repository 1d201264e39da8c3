use std::f64::consts::PI;

use faer::Mat;

use super::{Oracle, OracleInfo, OracleMethod};
use crate::error::{Error, Result};
use crate::geometry::{DomainSpec, Point, Vec3};
use crate::numerics::{gauss_legendre, harmonic_count, real_harmonics, DenseLu};

const RESIDUAL_TOL: f64 = 1e-9;
const TARGET_DECAY: f64 = 1e-13;

fn phi3(x: Vec3, y: Vec3) -> f64 {
    1.0 / (4.0 * PI * (x - y).norm())
}

fn ball_green(x: Vec3, y: Vec3) -> f64 {
    let q = x.norm_squared() * y.norm_squared() - 2.0 * x.dot(&y) + 1.0;
    (1.0 / (x - y).norm() - 1.0 / q.sqrt()) / (4.0 * PI)
}

/// Dirichlet Green's function of the unit ball with several spherical holes of
/// equal radius.
///
/// The point source is first reflected in every hole sphere (and each
/// reflection in the unit sphere), which removes the singular part of the
/// boundary data. The smooth remainder is matched by a Galerkin projection
/// onto exterior multipoles about each hole, each corrected by its Kelvin
/// image so the outer boundary condition holds exactly.
pub struct MultiSphereGreen {
    spec: DomainSpec,
    centers: Vec<Vec3>,
    radius: f64,
    degree: usize,
    quad_dirs: Vec<Vec3>,
    quad_weights: Vec<f64>,
    /// Harmonics at the quadrature directions, one row per node.
    quad_harmonics: Vec<Vec<f64>>,
    lu: DenseLu,
    accuracy: f64,
}

struct Images {
    strengths: Vec<f64>,
    points: Vec<Vec3>,
}

impl MultiSphereGreen {
    pub fn new(spec: &DomainSpec) -> Result<Self> {
        let degree = Self::default_degree(spec)?;
        Self::with_degree(spec, degree)
    }

    fn centers_of(spec: &DomainSpec) -> Result<(Vec<Vec3>, f64)> {
        match spec {
            DomainSpec::BallWithHole { .. } | DomainSpec::BallWithHoles { .. } => {
                spec.validate()?;
                Ok((spec.hole_centers(), spec.epsilon()))
            }
            _ => Err(Error::Unsupported(format!(
                "multi-sphere solver on {}",
                spec.variant_name()
            ))),
        }
    }

    /// Truncation degree at which the slowest multipole interaction has decayed
    /// below 1e-13.
    pub fn default_degree(spec: &DomainSpec) -> Result<usize> {
        let (centers, eps) = Self::centers_of(spec)?;
        let mut clearance = f64::INFINITY;
        for (i, ci) in centers.iter().enumerate() {
            clearance = clearance.min(1.0 - ci.norm());
            for cj in centers.iter().skip(i + 1) {
                clearance = clearance.min((ci - cj).norm() - eps);
            }
        }
        let ratio = (eps / clearance).min(0.9);
        Ok(((TARGET_DECAY.ln() / ratio.ln()).ceil() as usize).clamp(6, 40))
    }

    pub fn with_degree(spec: &DomainSpec, degree: usize) -> Result<Self> {
        let (centers, eps) = Self::centers_of(spec)?;
        let nh = harmonic_count(degree);
        let n_theta = degree + 4;
        let n_phi = 2 * degree + 8;
        let (ct, wt) = gauss_legendre(n_theta);
        let mut quad_dirs = Vec::with_capacity(n_theta * n_phi);
        let mut quad_weights = Vec::with_capacity(n_theta * n_phi);
        for (c, w) in ct.iter().zip(&wt) {
            let st = (1.0 - c * c).sqrt();
            for b in 0..n_phi {
                let p = 2.0 * PI * b as f64 / n_phi as f64;
                quad_dirs.push(Vec3::new(st * p.cos(), st * p.sin(), *c));
                quad_weights.push(w * 2.0 * PI / n_phi as f64);
            }
        }
        let ones = vec![1.0; degree + 1];
        let mut scratch = Vec::new();
        let quad_harmonics: Vec<Vec<f64>> = quad_dirs
            .iter()
            .map(|d| {
                let mut out = vec![0.0; nh];
                real_harmonics(degree, [d.x, d.y, d.z], &ones, &mut scratch, &mut out);
                out
            })
            .collect();

        let nq = quad_dirs.len();
        let n = centers.len() * nh;
        let mut proto = Self {
            spec: spec.clone(),
            centers,
            radius: eps,
            degree,
            quad_dirs,
            quad_weights,
            quad_harmonics,
            lu: DenseLu::new(Mat::<f64>::identity(1, 1)),
            accuracy: 1e-10,
        };
        let mut matrix = Mat::<f64>::zeros(n, n);
        let mut basis = vec![0.0; n];
        for (i, ci) in proto.centers.iter().enumerate() {
            let weighted = Mat::<f64>::from_fn(nh, nq, |a, q| {
                proto.quad_harmonics[q][a] * proto.quad_weights[q]
            });
            let mut values = Mat::<f64>::zeros(nq, n);
            for q in 0..nq {
                let x = ci + eps * proto.quad_dirs[q];
                proto.basis_values(x, &mut basis, &mut scratch);
                for (col, v) in basis.iter().enumerate() {
                    values[(q, col)] = *v;
                }
            }
            let block = &weighted * &values;
            for a in 0..nh {
                for col in 0..n {
                    matrix[(i * nh + a, col)] = block[(a, col)];
                }
            }
        }
        proto.lu = DenseLu::new(matrix);
        Ok(proto)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Every Kelvin-corrected multipole evaluated at `x`.
    fn basis_values(&self, x: Vec3, out: &mut [f64], scratch: &mut Vec<f64>) {
        let nh = harmonic_count(self.degree);
        let r2 = x.norm_squared();
        let xs = x / r2;
        let inv_r = 1.0 / r2.sqrt();
        let mut radial = vec![0.0; self.degree + 1];
        let mut tmp = vec![0.0; nh];
        for (j, c) in self.centers.iter().enumerate() {
            let block = &mut out[j * nh..(j + 1) * nh];
            let d = x - c;
            let rho = d.norm();
            let ratio = self.radius / rho;
            let mut p = ratio;
            for r in radial.iter_mut() {
                *r = p;
                p *= ratio;
            }
            real_harmonics(
                self.degree,
                [d.x / rho, d.y / rho, d.z / rho],
                &radial,
                scratch,
                block,
            );

            let ds = xs - c;
            let rho_s = ds.norm();
            let ratio = self.radius / rho_s;
            let mut p = ratio * inv_r;
            for r in radial.iter_mut() {
                *r = p;
                p *= ratio;
            }
            real_harmonics(
                self.degree,
                [ds.x / rho_s, ds.y / rho_s, ds.z / rho_s],
                &radial,
                scratch,
                &mut tmp,
            );
            for (b, t) in block.iter_mut().zip(&tmp) {
                *b -= t;
            }
        }
    }

    fn images(&self, y: Vec3) -> Images {
        let eps2 = self.radius * self.radius;
        let mut strengths = Vec::new();
        let mut points = Vec::new();
        for c in &self.centers {
            let d = y - c;
            let dn2 = d.norm_squared();
            strengths.push(self.radius / dn2.sqrt());
            points.push(c + eps2 * d / dn2);
        }
        Images { strengths, points }
    }

    /// Reflected sources vanishing on the unit sphere; `skip_direct` drops the
    /// direct reflection in hole `k`.
    fn image_potential(&self, img: &Images, x: Vec3, skip_direct: Option<usize>) -> f64 {
        let mut acc = 0.0;
        for (k, (s, p)) in img.strengths.iter().zip(&img.points).enumerate() {
            let pn2 = p.norm_squared();
            let outer = if pn2 > 0.0 {
                let pk = p / pn2;
                phi3(x, pk) / pn2.sqrt()
            } else {
                1.0 / (4.0 * PI)
            };
            let direct = if skip_direct == Some(k) {
                0.0
            } else {
                phi3(x, *p)
            };
            acc += s * (direct - outer);
        }
        acc
    }

    fn check(&self, p: Vec3) -> Result<()> {
        let inside = p.norm() < 1.0 + 1e-12
            && self
                .centers
                .iter()
                .all(|c| (p - c).norm() > self.radius - 1e-12);
        if inside {
            Ok(())
        } else {
            Err(Error::NotInPerforatedDomain(vec![p.x, p.y, p.z]))
        }
    }

    /// Multipole coefficients of the smooth correction for source `y`.
    fn coefficients(&self, y: Vec3, img: &Images) -> Result<Vec<f64>> {
        let nh = harmonic_count(self.degree);
        let mut rhs = vec![0.0; self.centers.len() * nh];
        for (i, ci) in self.centers.iter().enumerate() {
            for (q, dir) in self.quad_dirs.iter().enumerate() {
                let x = ci + self.radius * dir;
                // The direct reflection reproduces Φ(x - y) on this sphere exactly.
                let ball_image = ball_green(x, y) - phi3(x, y);
                let data = ball_image - self.image_potential(img, x, Some(i));
                let w = self.quad_weights[q] * data;
                for a in 0..nh {
                    rhs[i * nh + a] += w * self.quad_harmonics[q][a];
                }
            }
        }
        self.lu.solve_checked(&rhs, RESIDUAL_TOL)
    }

    pub fn value(&self, x: Vec3, y: Vec3) -> Result<f64> {
        self.check(x)?;
        self.check(y)?;
        if (x - y).norm() < 1e-14 {
            return Err(Error::Singular);
        }
        let img = self.images(y);
        let coef = self.coefficients(y, &img)?;
        Ok(self.evaluate(x, y, &img, &coef))
    }

    fn evaluate(&self, x: Vec3, y: Vec3, img: &Images, coef: &[f64]) -> f64 {
        let mut basis = vec![0.0; coef.len()];
        let mut scratch = Vec::new();
        self.basis_values(x, &mut basis, &mut scratch);
        let smooth: f64 = basis.iter().zip(coef).map(|(b, c)| b * c).sum();
        ball_green(x, y) - self.image_potential(img, x, None) - smooth
    }
}

impl Oracle for MultiSphereGreen {
    fn green(&self, x: &Point, y: &Point) -> Result<f64> {
        self.value(x.v3()?, y.v3()?)
    }

    fn green_batch(&self, pairs: &[(Point, Point)]) -> Vec<Result<f64>> {
        let mut cache: Vec<(Vec<u64>, Result<(Images, Vec<f64>)>)> = Vec::new();
        pairs
            .iter()
            .map(|(x, y)| {
                let (xv, yv) = (x.v3()?, y.v3()?);
                self.check(xv)?;
                self.check(yv)?;
                if (xv - yv).norm() < 1e-14 {
                    return Err(Error::Singular);
                }
                let key: Vec<u64> = y.coords().iter().map(|c| c.to_bits()).collect();
                let idx = match cache.iter().position(|(k, _)| *k == key) {
                    Some(i) => i,
                    None => {
                        let img = self.images(yv);
                        let entry = self.coefficients(yv, &img).map(|c| (img, c));
                        cache.push((key, entry));
                        cache.len() - 1
                    }
                };
                match &cache[idx].1 {
                    Ok((img, coef)) => Ok(self.evaluate(xv, yv, img, coef)),
                    Err(e) => Err(e.clone()),
                }
            })
            .collect()
    }

    /// Compares against a solve with six more multipole degrees and records
    /// the largest difference.
    fn estimate_accuracy(&mut self, probes: &[(Point, Point)]) -> Result<f64> {
        let fine = Self::with_degree(&self.spec, self.degree + 6)?;
        let coarse = self.green_batch(probes);
        let refined = fine.green_batch(probes);
        let mut worst: f64 = 0.0;
        for (a, b) in coarse.into_iter().zip(refined) {
            worst = worst.max((a? - b?).abs());
        }
        self.accuracy = worst.max(1e-15);
        Ok(worst)
    }

    fn info(&self) -> OracleInfo {
        OracleInfo {
            method: OracleMethod::MultiSphereGalerkin,
            accuracy: self.accuracy,
            resolution: vec![
                ("degree".into(), self.degree as f64),
                ("quadrature_nodes".into(), self.quad_dirs.len() as f64),
            ],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::ConcentricSpheresGreen;

    #[test]
    fn single_centered_hole_matches_legendre_series() {
        let spec = DomainSpec::ball_with_hole(0.2).unwrap();
        let g = MultiSphereGreen::new(&spec).unwrap();
        let shell = ConcentricSpheresGreen::new(0.2).unwrap();
        for (x, y) in [
            ([0.3, 0.1, -0.2], [-0.4, 0.2, 0.5]),
            ([0.0, 0.0, 0.22], [0.05, 0.21, 0.0]),
            ([0.9, 0.0, 0.0], [0.0, 0.6, 0.1]),
        ] {
            let a = g.value(Vec3::from(x), Vec3::from(y)).unwrap();
            let b = shell.value(x, y).unwrap();
            assert!((a - b).abs() < 1e-11, "{x:?} {y:?}: {}", a - b);
        }
    }

    #[test]
    fn vanishes_on_every_sphere_and_is_symmetric() {
        let spec =
            DomainSpec::ball_with_holes(vec![[0.3, 0.0, 0.0], [-0.3, 0.0, 0.0]], 0.1).unwrap();
        let g = MultiSphereGreen::new(&spec).unwrap();
        let y = Vec3::new(0.0, 0.2, 0.1);
        let x = Vec3::new(0.42, 0.05, 0.0);
        assert!((g.value(x, y).unwrap() - g.value(y, x).unwrap()).abs() < 1e-11);
        for d in [
            Vec3::new(0.0, 0.6, 0.8),
            Vec3::new(-1.0, 0.0, 0.0),
            Vec3::new(0.48, -0.6, 0.64),
        ] {
            assert!(g.value(d, y).unwrap().abs() < 1e-12);
            for c in &g.centers {
                assert!(g.value(c + 0.1 * d, y).unwrap().abs() < 1e-10);
            }
        }
    }
}
