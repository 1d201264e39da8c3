//! Boundary curves of the planar configurations: parametrization, normals,
//! nearest-point projection and quadrature.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::domain::{DomainSpec, TrigPolynomial};
use super::point::{Point, Vec2};
use crate::error::{Error, Result};
use crate::numerics::gauss_legendre;

/// Which boundary component of a configuration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundaryId {
    /// The perturbed outer curve of a `PerturbedDisk`.
    Perturbed,
    /// The unperturbed unit circle of a `PerturbedDisk`.
    Unperturbed,
    /// Outer circle of a disk with holes.
    Outer,
    /// Hole boundary.
    Hole(usize),
    /// Arc r = epsilon of a truncated sector.
    InnerArc,
    /// Arc r = 1 of a truncated sector.
    OuterArc,
}

impl std::fmt::Display for BoundaryId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self:?}")
    }
}

/// A parametrized planar boundary curve. Closed curves use t in [0, 2 pi).
#[derive(Clone, Debug, PartialEq)]
pub enum Curve {
    /// r(t) = 1 - epsilon * delta(t), counter-clockwise.
    Polar { delta: TrigPolynomial, epsilon: f64 },
    /// Circle of given center/radius; `clockwise` flips the traversal.
    Circle {
        center: Vec2,
        radius: f64,
        clockwise: bool,
    },
    /// Arc of radius `radius` about the origin for t in [0, alpha].
    Arc { radius: f64, alpha: f64 },
}

/// Point on a boundary with its unit normal (pointing out of the domain),
/// parameter and quadrature weight.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryPoint {
    pub location: Point,
    pub normal: [f64; 2],
    pub parameter: f64,
    pub weight: f64,
}

/// Nearest point on a boundary and the distance to it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjectionResult {
    pub z_of_x: BoundaryPoint,
    pub rho: f64,
}

const SCAN_POINTS: usize = 2048;
const BISECTION_STEPS: usize = 40;
const TIE_TOL: f64 = 1e-10;

impl Curve {
    pub fn is_closed(&self) -> bool {
        !matches!(self, Curve::Arc { .. })
    }

    pub fn parameter_range(&self) -> (f64, f64) {
        match self {
            Curve::Arc { alpha, .. } => (0.0, *alpha),
            _ => (0.0, 2.0 * PI),
        }
    }

    /// Position, first and second derivative.
    pub fn eval(&self, t: f64) -> (Vec2, Vec2, Vec2) {
        match self {
            Curve::Polar { delta, epsilon } => {
                let (d, d1, d2) = delta.eval3(t);
                let r = 1.0 - epsilon * d;
                let r1 = -epsilon * d1;
                let r2 = -epsilon * d2;
                let (s, c) = t.sin_cos();
                let z = Vec2::new(r * c, r * s);
                let zp = Vec2::new(r1 * c - r * s, r1 * s + r * c);
                let zpp = Vec2::new(r2 * c - 2.0 * r1 * s - r * c, r2 * s + 2.0 * r1 * c - r * s);
                (z, zp, zpp)
            }
            Curve::Circle {
                center,
                radius,
                clockwise,
            } => {
                let sign = if *clockwise { -1.0 } else { 1.0 };
                let (s, c) = (sign * t).sin_cos();
                let z = center + *radius * Vec2::new(c, s);
                let zp = sign * *radius * Vec2::new(-s, c);
                let zpp = -*radius * Vec2::new(c, s);
                (z, zp, zpp)
            }
            Curve::Arc { radius, .. } => {
                let (s, c) = t.sin_cos();
                let r = *radius;
                (
                    r * Vec2::new(c, s),
                    r * Vec2::new(-s, c),
                    -r * Vec2::new(c, s),
                )
            }
        }
    }

    pub fn point(&self, t: f64) -> Vec2 {
        self.eval(t).0
    }

    /// Unit normal to the right of the direction of travel. For counter-clockwise
    /// outer curves and clockwise holes this points out of the domain.
    pub fn normal(&self, t: f64) -> Vec2 {
        let zp = self.eval(t).1;
        Vec2::new(zp.y, -zp.x) / zp.norm()
    }

    /// Signed curvature with respect to the direction of travel.
    pub fn curvature(&self, t: f64) -> f64 {
        let (_, zp, zpp) = self.eval(t);
        (zp.x * zpp.y - zp.y * zpp.x) / zp.norm().powi(3)
    }

    fn boundary_point(&self, t: f64, weight: f64) -> BoundaryPoint {
        let n = self.normal(t);
        BoundaryPoint {
            location: self.point(t).into(),
            normal: [n.x, n.y],
            parameter: t,
            weight,
        }
    }

    /// Global nearest point: dense parameter scan, then bisection on the
    /// first-order optimality condition around every discrete local minimum.
    /// Returns candidates sorted by (distance, parameter).
    fn nearest_candidates(&self, x: Vec2) -> Vec<(f64, f64)> {
        let (t0, t1) = self.parameter_range();
        let closed = self.is_closed();
        let n = SCAN_POINTS;
        let h = (t1 - t0) / if closed { n as f64 } else { (n - 1) as f64 };
        let ts: Vec<f64> = (0..n).map(|i| t0 + i as f64 * h).collect();
        let d: Vec<f64> = ts.iter().map(|&t| (self.point(t) - x).norm()).collect();
        let gmin = d.iter().cloned().fold(f64::INFINITY, f64::min);
        let mut out: Vec<(f64, f64)> = Vec::new();
        for i in 0..n {
            let (prev, next) = if closed {
                ((i + n - 1) % n, (i + 1) % n)
            } else {
                (i.saturating_sub(1), (i + 1).min(n - 1))
            };
            if d[i] > d[prev] || d[i] > d[next] {
                continue;
            }
            // plateau points far above the global minimum cannot win
            if d[i] > gmin + 4.0 * h * h + 1e-9 {
                continue;
            }
            let (t, dist) = self.refine(x, ts[i] - h, ts[i] + h);
            out.push((dist, t));
        }
        out.sort_by(|a, b| a.partial_cmp(b).unwrap());
        out
    }

    fn refine(&self, x: Vec2, a: f64, b: f64) -> (f64, f64) {
        let (lo_lim, hi_lim) = self.parameter_range();
        let (mut a, mut b) = if self.is_closed() {
            (a, b)
        } else {
            (a.max(lo_lim), b.min(hi_lim))
        };
        let g = |t: f64| {
            let (z, zp, _) = self.eval(t);
            (z - x).dot(&zp)
        };
        let (ga, gb) = (g(a), g(b));
        if ga < 0.0 && gb > 0.0 {
            for _ in 0..BISECTION_STEPS {
                let m = 0.5 * (a + b);
                if g(m) < 0.0 {
                    a = m;
                } else {
                    b = m;
                }
            }
            let t = 0.5 * (a + b);
            return (self.wrap(t), (self.point(t) - x).norm());
        }
        // endpoint minimum of an open arc, or a flat plateau
        let cands = [a, 0.5 * (a + b), b];
        let best = cands.iter().map(|&t| ((self.point(t) - x).norm(), t)).fold(
            (f64::INFINITY, 0.0),
            |acc, v| if v.0 < acc.0 { v } else { acc },
        );
        (self.wrap(best.1), best.0)
    }

    fn wrap(&self, t: f64) -> f64 {
        if self.is_closed() {
            t.rem_euclid(2.0 * PI)
        } else {
            t
        }
    }

    /// Nearest point when it is known to lie within `halfwidth` of parameter
    /// `t_guess`; falls back to the global search otherwise. Returns (distance, parameter).
    pub fn distance_near(&self, x: Vec2, t_guess: f64, halfwidth: f64) -> (f64, f64) {
        let (t, d) = self.refine(x, t_guess - halfwidth, t_guess + halfwidth);
        let mut dt = (t - t_guess).abs();
        if self.is_closed() {
            dt = dt.min(2.0 * PI - dt);
        }
        if dt < 0.99 * halfwidth {
            (d, t)
        } else {
            self.distance_to(x)
        }
    }

    /// Distance from an arbitrary point to the curve (no ambiguity check).
    pub fn distance_to(&self, x: Vec2) -> (f64, f64) {
        let c = self.nearest_candidates(x);
        (c[0].0, c[0].1)
    }

    /// Nearest point, failing with `AmbiguousProjection` when two distinct
    /// minima tie within 1e-10.
    pub fn project(&self, x: Vec2) -> Result<ProjectionResult> {
        let cands = self.nearest_candidates(x);
        let (dmin, tmin) = cands[0];
        let (t0, t1) = self.parameter_range();
        let span = t1 - t0;
        let sep = 4.0 * span / SCAN_POINTS as f64;
        let mut ties: Vec<f64> = cands
            .iter()
            .filter(|(d, t)| {
                let mut dt = (t - tmin).abs();
                if self.is_closed() {
                    dt = dt.min(span - dt);
                }
                (d - dmin).abs() < TIE_TOL && dt > sep
            })
            .map(|&(_, t)| t)
            .collect();
        if !ties.is_empty() {
            ties.push(tmin);
            ties.sort_by(|a, b| a.partial_cmp(b).unwrap());
            ties.truncate(2);
            return Err(Error::AmbiguousProjection { candidates: ties });
        }
        Ok(ProjectionResult {
            z_of_x: self.boundary_point(tmin, 0.0),
            rho: dmin,
        })
    }

    /// Quadrature nodes: trapezoid for closed curves, Gauss-Legendre for arcs.
    pub fn quadrature(&self, m: usize) -> Vec<BoundaryPoint> {
        if self.is_closed() {
            let h = 2.0 * PI / m as f64;
            (0..m)
                .map(|j| {
                    let t = j as f64 * h;
                    self.boundary_point(t, self.eval(t).1.norm() * h)
                })
                .collect()
        } else {
            let (a, b) = self.parameter_range();
            let (x, w) = gauss_legendre(m);
            x.iter()
                .zip(&w)
                .map(|(xi, wi)| {
                    let t = 0.5 * (a + b) + 0.5 * (b - a) * xi;
                    self.boundary_point(t, 0.5 * (b - a) * wi * self.eval(t).1.norm())
                })
                .collect()
        }
    }
}

/// The curve for a given boundary component of a planar configuration.
pub fn boundary_curve(spec: &DomainSpec, which: BoundaryId) -> Result<Curve> {
    let unsupported = || Error::UnsupportedBoundary(format!("{which} of {}", spec.variant_name()));
    match (spec, which) {
        (DomainSpec::PerturbedDisk { delta, epsilon }, BoundaryId::Perturbed) => Ok(Curve::Polar {
            delta: delta.clone(),
            epsilon: *epsilon,
        }),
        (DomainSpec::PerturbedDisk { .. }, BoundaryId::Unperturbed)
        | (DomainSpec::DiskWithHole { .. }, BoundaryId::Outer) => Ok(Curve::Circle {
            center: Vec2::zeros(),
            radius: 1.0,
            clockwise: false,
        }),
        (
            DomainSpec::DiskWithHole {
                hole_center,
                epsilon,
            },
            BoundaryId::Hole(0),
        ) => Ok(Curve::Circle {
            center: Vec2::from(*hole_center),
            radius: *epsilon,
            clockwise: true,
        }),
        (DomainSpec::TruncatedSector { alpha, epsilon }, BoundaryId::InnerArc) => Ok(Curve::Arc {
            radius: *epsilon,
            alpha: *alpha,
        }),
        (DomainSpec::TruncatedSector { alpha, .. }, BoundaryId::OuterArc) => Ok(Curve::Arc {
            radius: 1.0,
            alpha: *alpha,
        }),
        _ => Err(unsupported()),
    }
}

/// Closed boundary components of a planar configuration, outer first.
pub fn closed_components(spec: &DomainSpec) -> Result<Vec<(BoundaryId, Curve)>> {
    let ids: Vec<BoundaryId> = match spec {
        DomainSpec::PerturbedDisk { .. } => vec![BoundaryId::Perturbed],
        DomainSpec::DiskWithHole { .. } => vec![BoundaryId::Outer, BoundaryId::Hole(0)],
        _ => {
            return Err(Error::UnsupportedBoundary(format!(
                "{} has no smooth closed boundary set",
                spec.variant_name()
            )))
        }
    };
    ids.into_iter()
        .map(|id| Ok((id, boundary_curve(spec, id)?)))
        .collect()
}

/// Nearest point of the designated boundary to an interior point `x`.
pub fn nearest_boundary_point(
    spec: &DomainSpec,
    which: BoundaryId,
    x: &Point,
) -> Result<ProjectionResult> {
    if !spec.contains(x) {
        return Err(Error::NotInDomain(x.coords().to_vec()));
    }
    boundary_curve(spec, which)?.project(x.v2()?)
}

/// Quadrature nodes and weights on the designated boundary.
pub fn boundary_quadrature(
    spec: &DomainSpec,
    which: BoundaryId,
    m: usize,
) -> Result<Vec<BoundaryPoint>> {
    if m < 16 {
        return Err(Error::InvalidSpec(format!(
            "boundary quadrature needs m >= 16, got {m}"
        )));
    }
    Ok(boundary_curve(spec, which)?.quadrature(m))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pdisk(eps: f64) -> DomainSpec {
        DomainSpec::perturbed_disk(TrigPolynomial::new(vec![1.0, 0.3], vec![]), eps).unwrap()
    }

    #[test]
    fn unit_disk_radial_projection() {
        let p =
            nearest_boundary_point(&pdisk(0.0), BoundaryId::Unperturbed, &Point::new2(0.5, 0.0))
                .unwrap();
        assert!((p.rho - 0.5).abs() < 1e-12);
        let z = p.z_of_x.location.coords().to_vec();
        assert!((z[0] - 1.0).abs() < 1e-12 && z[1].abs() < 1e-12);
    }

    #[test]
    fn center_of_disk_is_ambiguous() {
        let r =
            nearest_boundary_point(&pdisk(0.0), BoundaryId::Unperturbed, &Point::new2(0.0, 0.0));
        match r {
            Err(Error::AmbiguousProjection { candidates }) => {
                assert_eq!(candidates.len(), 2);
                assert!(candidates[0] < candidates[1]);
            }
            other => panic!("expected ambiguity, got {other:?}"),
        }
    }

    #[test]
    fn perturbed_projection_matches_brute_force() {
        let spec = pdisk(0.1);
        let x = Point::new2(0.8, 0.0);
        let p = nearest_boundary_point(&spec, BoundaryId::Perturbed, &x).unwrap();
        // brute-force oracle: very fine scan then golden-section refinement
        let curve = boundary_curve(&spec, BoundaryId::Perturbed).unwrap();
        let xv = x.v2().unwrap();
        let n = 200_000;
        let (mut best, mut bt) = (f64::INFINITY, 0.0);
        for i in 0..n {
            let t = 2.0 * PI * i as f64 / n as f64;
            let d = (curve.point(t) - xv).norm();
            if d < best {
                best = d;
                bt = t;
            }
        }
        let (mut a, mut b) = (bt - 1e-4, bt + 1e-4);
        let gr = 0.5 * (5f64.sqrt() - 1.0);
        for _ in 0..100 {
            let c = b - gr * (b - a);
            let d = a + gr * (b - a);
            if (curve.point(c) - xv).norm() < (curve.point(d) - xv).norm() {
                b = d;
            } else {
                a = c;
            }
        }
        let oracle = (curve.point(0.5 * (a + b)) - xv).norm();
        assert!((p.rho - oracle).abs() < 1e-12);
        assert!((p.rho - 0.07).abs() < 1e-12);
    }

    #[test]
    fn projection_is_first_order_optimal() {
        let spec = pdisk(0.1);
        let curve = boundary_curve(&spec, BoundaryId::Perturbed).unwrap();
        for &(x, y) in &[(0.3, 0.5), (-0.6, 0.1), (0.05, -0.7), (0.7, 0.3)] {
            let p =
                nearest_boundary_point(&spec, BoundaryId::Perturbed, &Point::new2(x, y)).unwrap();
            let z = p.z_of_x.location.v2().unwrap();
            let n = Vec2::from(p.z_of_x.normal);
            let d = (z - Vec2::new(x, y)).normalize();
            let angle = (d.x * n.y - d.y * n.x).abs().asin();
            assert!(angle < 1e-6, "angle {angle}");
            assert!((curve.normal(p.z_of_x.parameter) - n).norm() < 1e-12);
        }
    }

    #[test]
    fn points_outside_are_rejected() {
        let r = nearest_boundary_point(&pdisk(0.1), BoundaryId::Perturbed, &Point::new2(0.95, 0.0));
        assert!(matches!(r, Err(Error::NotInDomain(_))));
    }

    #[test]
    fn quadrature_circumference() {
        let q = boundary_quadrature(&pdisk(0.1), BoundaryId::Unperturbed, 64).unwrap();
        let total: f64 = q.iter().map(|b| b.weight).sum();
        assert!((total - 2.0 * PI).abs() < 1e-12);
        for b in &q {
            let n = Vec2::from(b.normal);
            assert!((n.norm() - 1.0).abs() < 1e-12);
            assert!((b.location.norm() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn zero_perturbation_matches_unit_circle_nodes() {
        let a = boundary_quadrature(&pdisk(0.0), BoundaryId::Perturbed, 32).unwrap();
        let b = boundary_quadrature(&pdisk(0.0), BoundaryId::Unperturbed, 32).unwrap();
        for (p, q) in a.iter().zip(&b) {
            assert!(p.location.distance(&q.location) < 1e-15);
            assert!((p.weight - q.weight).abs() < 1e-15);
        }
    }

    #[test]
    fn perturbed_length_matches_adaptive_simpson() {
        let spec = pdisk(0.1);
        let curve = boundary_curve(&spec, BoundaryId::Perturbed).unwrap();
        let speed = |t: f64| curve.eval(t).1.norm();
        fn simpson(
            f: &dyn Fn(f64) -> f64,
            a: f64,
            b: f64,
            whole: f64,
            tol: f64,
            depth: u32,
        ) -> f64 {
            let m = 0.5 * (a + b);
            let left = (m - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + m)) + f(m));
            let right = (b - m) / 6.0 * (f(m) + 4.0 * f(0.5 * (m + b)) + f(b));
            if depth == 0 || (left + right - whole).abs() < 15.0 * tol {
                return left + right + (left + right - whole) / 15.0;
            }
            simpson(f, a, m, left, tol / 2.0, depth - 1)
                + simpson(f, m, b, right, tol / 2.0, depth - 1)
        }
        let whole = 2.0 * PI / 6.0 * (speed(0.0) + 4.0 * speed(PI) + speed(2.0 * PI));
        let oracle = simpson(&speed, 0.0, 2.0 * PI, whole, 1e-12, 40);
        let q = boundary_quadrature(&spec, BoundaryId::Perturbed, 64).unwrap();
        let total: f64 = q.iter().map(|b| b.weight).sum();
        assert!((total - oracle).abs() < 1e-8, "{total} vs {oracle}");
    }

    #[test]
    fn trapezoid_converges_spectrally_on_circle() {
        let spec = pdisk(0.0);
        // integrand exp(cos t) has rapidly decaying Fourier coefficients; exact 2 pi I0(1)
        let exact = 2.0 * PI * 1.266_065_877_752_008_4;
        let mut prev = f64::INFINITY;
        for m in [16, 32] {
            let q = boundary_quadrature(&spec, BoundaryId::Unperturbed, m).unwrap();
            let v: f64 = q
                .iter()
                .map(|b| b.weight * b.location.coords()[0].exp())
                .sum();
            let err = (v - exact).abs();
            assert!(err < prev / 4.0 || err < 1e-12, "{err} {prev}");
            prev = err;
        }
        assert!(prev < 1e-12);
    }

    #[test]
    fn sector_arc_uses_gauss_weights() {
        let spec = DomainSpec::truncated_sector(PI / 2.0, 0.1).unwrap();
        let q = boundary_quadrature(&spec, BoundaryId::InnerArc, 16).unwrap();
        let total: f64 = q.iter().map(|b| b.weight).sum();
        assert!((total - 0.1 * PI / 2.0).abs() < 1e-14);
        assert!(matches!(
            boundary_quadrature(&spec, BoundaryId::Hole(0), 16),
            Err(Error::UnsupportedBoundary(_))
        ));
    }
}
