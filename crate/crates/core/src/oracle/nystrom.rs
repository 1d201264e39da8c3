use std::f64::consts::PI;

use faer::Mat;

use super::{Oracle, OracleInfo, OracleMethod};
use crate::error::{Error, Result};
use crate::geometry::{closed_components, Curve, DomainSpec, Point, Vec2};
use crate::numerics::{periodic_interpolate, DenseLu};

const RESIDUAL_TOL: f64 = 1e-9;

/// Node counts for the trapezoid discretization of each boundary component.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NystromResolution {
    pub outer_nodes: usize,
    pub hole_nodes: usize,
}

impl NystromResolution {
    /// Resolution adequate for evaluation points at distance `d_min` from the
    /// boundary (about 20 nodes per unit of 1/d on the outer curve).
    pub fn for_min_distance(spec: &DomainSpec, d_min: f64) -> Self {
        let pow2 = |v: f64, lo: usize, hi: usize| {
            (v.max(1.0).ceil() as usize)
                .next_power_of_two()
                .clamp(lo, hi)
        };
        let eps = spec.epsilon();
        let d = d_min.max(1e-6);
        Self {
            outer_nodes: pow2(20.0 / d, 256, 4096),
            hole_nodes: pow2(20.0 * eps / d, 128, 2048),
        }
    }

    pub fn doubled(self) -> Self {
        Self {
            outer_nodes: 2 * self.outer_nodes,
            hole_nodes: 2 * self.hole_nodes,
        }
    }
}

struct Component {
    curve: Curve,
    nodes: Vec<Vec2>,
    normals: Vec<Vec2>,
    weights: Vec<f64>,
    hole_center: Option<Vec2>,
    offset: usize,
}

impl Component {
    fn len(&self) -> usize {
        self.nodes.len()
    }
}

/// Dirichlet Green's function of a smooth (possibly multiply connected) planar
/// domain from a second-kind double-layer integral equation.
///
/// Each hole carries a logarithmic source of unknown strength and its density
/// is constrained to zero mean, which removes the nullspace of the
/// double-layer operator. Evaluation near the boundary subtracts the density
/// at the closest boundary point.
pub struct BoundaryIntegralGreen {
    spec: DomainSpec,
    resolution: NystromResolution,
    components: Vec<Component>,
    lu: DenseLu,
    accuracy: f64,
}

/// The double-layer density and hole source strengths for one source point.
pub struct NystromDensity<'a> {
    owner: &'a BoundaryIntegralGreen,
    source: Vec2,
    mu: Vec<f64>,
    strengths: Vec<f64>,
}

fn dlp_kernel(x: Vec2, z: Vec2, nu: Vec2) -> f64 {
    let d = x - z;
    d.dot(&nu) / (2.0 * PI * d.norm_squared())
}

fn log_fundamental(x: Vec2, y: Vec2) -> f64 {
    -(x - y).norm().ln() / (2.0 * PI)
}

impl BoundaryIntegralGreen {
    pub fn new(spec: &DomainSpec, resolution: NystromResolution) -> Result<Self> {
        let mut components = Vec::new();
        let mut offset = 0;
        for (k, (_, curve)) in closed_components(spec)
            .map_err(|e| Error::Unsupported(e.to_string()))?
            .into_iter()
            .enumerate()
        {
            let (m, hole_center) = match &curve {
                Curve::Circle {
                    center,
                    clockwise: true,
                    ..
                } => (resolution.hole_nodes, Some(*center)),
                _ => (resolution.outer_nodes, None),
            };
            debug_assert!(k > 0 || hole_center.is_none());
            let quad = curve.quadrature(m);
            let nodes = quad
                .iter()
                .map(|q| q.location.v2())
                .collect::<Result<Vec<_>>>()?;
            let normals = quad.iter().map(|q| Vec2::from(q.normal)).collect();
            let weights = quad.iter().map(|q| q.weight).collect();
            components.push(Component {
                curve,
                nodes,
                normals,
                weights,
                hole_center,
                offset,
            });
            offset += m;
        }
        let n_nodes = offset;
        let holes: Vec<(usize, Vec2)> = components
            .iter()
            .enumerate()
            .filter_map(|(i, c)| c.hole_center.map(|h| (i, h)))
            .collect();
        let n = n_nodes + holes.len();

        let mut a = Mat::<f64>::zeros(n, n);
        let h = |c: &Component| 2.0 * PI / c.len() as f64;
        for ci in &components {
            for (i, &zi) in ci.nodes.iter().enumerate() {
                let row = ci.offset + i;
                for cj in &components {
                    for (j, (&zj, &nj)) in cj.nodes.iter().zip(&cj.normals).enumerate() {
                        let col = cj.offset + j;
                        a[(row, col)] = if row == col {
                            let t = i as f64 * h(ci);
                            let speed = ci.curve.eval(t).1.norm();
                            -ci.curve.curvature(t) / (4.0 * PI) * speed * h(ci) - 0.5
                        } else {
                            dlp_kernel(zi, zj, nj) * cj.weights[j]
                        };
                    }
                }
                for (k, (_, c)) in holes.iter().enumerate() {
                    a[(row, n_nodes + k)] = (zi - c).norm().ln();
                }
            }
        }
        for (k, (ci, _)) in holes.iter().enumerate() {
            let c = &components[*ci];
            for j in 0..c.len() {
                a[(n_nodes + k, c.offset + j)] = c.weights[j];
            }
        }
        Ok(Self {
            spec: spec.clone(),
            resolution,
            components,
            lu: DenseLu::new(a),
            accuracy: 1e-9,
        })
    }

    pub fn adaptive(spec: &DomainSpec, d_min: f64) -> Result<Self> {
        Self::new(spec, NystromResolution::for_min_distance(spec, d_min))
    }

    pub fn resolution(&self) -> NystromResolution {
        self.resolution
    }

    /// Solves for the correction that cancels Φ(·, y) on the boundary.
    pub fn density(&self, y: &Point) -> Result<NystromDensity<'_>> {
        let yv = y.v2()?;
        if !self.spec.contains(y) {
            return Err(Error::NotInDomain(y.coords().to_vec()));
        }
        let n = self.lu.dim();
        let mut rhs = vec![0.0; n];
        for c in &self.components {
            for (i, &z) in c.nodes.iter().enumerate() {
                rhs[c.offset + i] = log_fundamental(z, yv);
            }
        }
        let sol = self.lu.solve_checked(&rhs, RESIDUAL_TOL)?;
        let n_nodes: usize = self.components.iter().map(Component::len).sum();
        Ok(NystromDensity {
            owner: self,
            source: yv,
            mu: sol[..n_nodes].to_vec(),
            strengths: sol[n_nodes..].to_vec(),
        })
    }
}

impl NystromDensity<'_> {
    pub fn green(&self, x: &Point) -> Result<f64> {
        let xv = x.v2()?;
        if !self.owner.spec.contains(x) {
            return Err(Error::NotInDomain(x.coords().to_vec()));
        }
        if (xv - self.source).norm() < 1e-14 {
            return Err(Error::Singular);
        }
        let mut v = 0.0;
        let mut hole = 0;
        for c in &self.owner.components {
            let mu = &self.mu[c.offset..c.offset + c.len()];
            let m = c.len();
            let h = 2.0 * PI / m as f64;
            let (j_near, _) = c
                .nodes
                .iter()
                .enumerate()
                .map(|(j, z)| (j, (xv - z).norm_squared()))
                .fold(
                    (0, f64::INFINITY),
                    |acc, p| if p.1 < acc.1 { p } else { acc },
                );
            let (_, t_near) = c.curve.distance_near(xv, j_near as f64 * h, 2.0 * h);
            let mu_near = periodic_interpolate(mu, t_near);
            let mut acc = 0.0;
            for j in 0..m {
                acc += dlp_kernel(xv, c.nodes[j], c.normals[j]) * c.weights[j] * (mu[j] - mu_near);
            }
            v += acc;
            match c.hole_center {
                None => v -= mu_near,
                Some(center) => {
                    v += self.strengths[hole] * (xv - center).norm().ln();
                    hole += 1;
                }
            }
        }
        Ok(log_fundamental(xv, self.source) - v)
    }
}

impl Oracle for BoundaryIntegralGreen {
    fn green(&self, x: &Point, y: &Point) -> Result<f64> {
        self.density(y)?.green(x)
    }

    fn green_batch(&self, pairs: &[(Point, Point)]) -> Vec<Result<f64>> {
        let mut out: Vec<Option<Result<f64>>> = vec![None; pairs.len()];
        let mut order: Vec<usize> = (0..pairs.len()).collect();
        let key = |p: &Point| p.coords().iter().map(|c| c.to_bits()).collect::<Vec<_>>();
        order.sort_by_key(|&i| key(&pairs[i].1));
        let mut start = 0;
        while start < order.len() {
            let k = key(&pairs[order[start]].1);
            let mut end = start;
            while end < order.len() && key(&pairs[order[end]].1) == k {
                end += 1;
            }
            match self.density(&pairs[order[start]].1) {
                Ok(dens) => {
                    for &i in &order[start..end] {
                        out[i] = Some(dens.green(&pairs[i].0));
                    }
                }
                Err(e) => {
                    for &i in &order[start..end] {
                        out[i] = Some(Err(e.clone()));
                    }
                }
            }
            start = end;
        }
        out.into_iter()
            .map(|r| r.expect("every pair visited"))
            .collect()
    }

    /// Compares against a doubled discretization and records the largest
    /// difference.
    fn estimate_accuracy(&mut self, probes: &[(Point, Point)]) -> Result<f64> {
        let fine = Self::new(&self.spec, self.resolution.doubled())?;
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
            method: OracleMethod::BoundaryIntegral,
            accuracy: self.accuracy,
            resolution: vec![
                ("outer_nodes".into(), self.resolution.outer_nodes as f64),
                ("hole_nodes".into(), self.resolution.hole_nodes as f64),
            ],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::TrigPolynomial;

    fn disk_green(x: [f64; 2], y: [f64; 2]) -> f64 {
        let q = (x[0] * x[0] + x[1] * x[1]) * (y[0] * y[0] + y[1] * y[1])
            - 2.0 * (x[0] * y[0] + x[1] * y[1])
            + 1.0;
        let d2 = (x[0] - y[0]).powi(2) + (x[1] - y[1]).powi(2);
        (q / d2).ln() / (4.0 * PI)
    }

    #[test]
    fn reproduces_unit_disk_including_near_boundary() {
        let spec = DomainSpec::perturbed_disk(TrigPolynomial::new(vec![1.0], vec![]), 0.0).unwrap();
        let g = BoundaryIntegralGreen::new(
            &spec,
            NystromResolution {
                outer_nodes: 2048,
                hole_nodes: 128,
            },
        )
        .unwrap();
        let pairs = [
            ([0.3, -0.2], [0.0, 0.5]),
            ([0.0, 0.98], [0.1, 0.97]),
            ([0.99, 0.0], [-0.5, 0.1]),
            ([0.0, 0.995], [0.5, 0.0]),
        ];
        for (x, y) in pairs {
            let v = g.green(&Point::D2(x), &Point::D2(y)).unwrap();
            assert!(
                (v - disk_green(x, y)).abs() < 1e-10,
                "{x:?} {y:?}: {}",
                v - disk_green(x, y)
            );
        }
    }

    #[test]
    fn batch_matches_single_evaluations() {
        let spec = DomainSpec::disk_with_hole(0.1).unwrap();
        let g = BoundaryIntegralGreen::new(
            &spec,
            NystromResolution {
                outer_nodes: 256,
                hole_nodes: 128,
            },
        )
        .unwrap();
        let y = Point::new2(0.4, 0.1);
        let pairs = vec![
            (Point::new2(-0.3, 0.2), y),
            (Point::new2(0.2, 0.0), y),
            (Point::new2(0.0, -0.6), Point::new2(0.5, 0.5)),
        ];
        let batch = g.green_batch(&pairs);
        for (p, b) in pairs.iter().zip(batch) {
            assert_eq!(g.green(&p.0, &p.1).unwrap(), b.unwrap());
        }
    }

    #[test]
    fn rejects_points_outside() {
        let spec = DomainSpec::disk_with_hole(0.1).unwrap();
        let g = BoundaryIntegralGreen::new(
            &spec,
            NystromResolution {
                outer_nodes: 256,
                hole_nodes: 128,
            },
        )
        .unwrap();
        let r = g.green(&Point::new2(0.05, 0.0), &Point::new2(0.5, 0.0));
        assert!(matches!(r, Err(Error::NotInDomain(_))));
    }
}
