use std::f64::consts::PI;
use std::sync::OnceLock;

use super::{check_pair, AsymptoticOptions, FormulaId, KernelEval, OutsideStripPolicy};
use crate::error::{Error, Result};
use crate::geometry::{
    boundary_curve, nearest_boundary_point, BoundaryId, Curve, DomainSpec, Point, Vec2,
};
use crate::model_kernels::{InteriorGreen2, UnitDisk};

const LEVELS: usize = 9;

struct Node {
    z: Vec2,
    weight: f64,
    /// Distance from z on the unit circle to the perturbed boundary.
    offset: f64,
}

/// Boundary-variation formulas for a perturbed unit disk. Quadrature nodes on
/// the unit circle, with the true offset to the perturbed curve at each node,
/// are built lazily per resolution level and shared across evaluations.
pub struct HadamardEvaluator {
    spec: DomainSpec,
    options: AsymptoticOptions,
    perturbed: Curve,
    levels: Vec<OnceLock<Vec<Node>>>,
}

impl HadamardEvaluator {
    pub fn new(spec: &DomainSpec, options: AsymptoticOptions) -> Result<Self> {
        let perturbed = boundary_curve(spec, BoundaryId::Perturbed)?;
        if options.quadrature_start < 16 {
            return Err(Error::InvalidSpec("quadrature_start must be >= 16".into()));
        }
        Ok(Self {
            spec: spec.clone(),
            options,
            perturbed,
            levels: (0..LEVELS).map(|_| OnceLock::new()).collect(),
        })
    }

    /// Distance from a point of the unit circle at angle `t` to the perturbed boundary.
    pub fn boundary_offset(&self, t: f64) -> f64 {
        if self.spec.epsilon() == 0.0 {
            return 0.0;
        }
        let z = Vec2::new(t.cos(), t.sin());
        self.perturbed.distance_near(z, t, 0.5).0
    }

    fn nodes(&self, level: usize) -> &[Node] {
        self.levels[level].get_or_init(|| {
            let m = self.options.quadrature_start << level;
            let h = 2.0 * PI / m as f64;
            (0..m)
                .map(|j| {
                    let t = j as f64 * h;
                    Node {
                        z: Vec2::new(t.cos(), t.sin()),
                        weight: h,
                        offset: self.boundary_offset(t),
                    }
                })
                .collect()
        })
    }

    fn integral_at(&self, level: usize, x: Vec2, y: Vec2) -> f64 {
        let px = 1.0 - x.norm_squared();
        let py = 1.0 - y.norm_squared();
        let c = px * py / (4.0 * PI * PI);
        self.nodes(level)
            .iter()
            .map(|n| {
                n.weight * n.offset * c / ((x - n.z).norm_squared() * (y - n.z).norm_squared())
            })
            .sum()
    }

    /// ∫ ∂G/∂ν(x,z) ∂G/∂ν(z,y) ε δ_z ds_z with resolution doubling until the
    /// change falls below the configured tolerance.
    pub fn boundary_integral(&self, x: Vec2, y: Vec2) -> Result<f64> {
        if self.spec.epsilon() == 0.0 {
            return Ok(0.0);
        }
        let mut prev = self.integral_at(0, x, y);
        let mut diff = f64::INFINITY;
        for level in 1..LEVELS {
            let cur = self.integral_at(level, x, y);
            diff = (cur - prev).abs();
            if diff <= self.options.quadrature_tol {
                return Ok(cur);
            }
            prev = cur;
        }
        Err(Error::QuadratureUnderResolved(diff))
    }

    fn classical_terms(&self, x: &Point, y: &Point) -> Result<Vec<(&'static str, f64)>> {
        check_pair(&self.spec, x, y, Error::NotInDomain)?;
        let (xv, yv) = (x.v2()?, y.v2()?);
        let g = UnitDisk.green(xv, yv)?;
        let i = self.boundary_integral(xv, yv)?;
        Ok(vec![("outer-green", g), ("boundary-integral", -i)])
    }

    pub fn classical(&self, x: &Point, y: &Point) -> Result<KernelEval> {
        let terms = self.classical_terms(x, y)?;
        Ok(KernelEval::from_terms(
            FormulaId::HadamardClassical,
            *x,
            *y,
            self.spec.epsilon(),
            terms,
        ))
    }

    pub fn uniform(&self, x: &Point, y: &Point) -> Result<KernelEval> {
        let mut terms = self.classical_terms(x, y)?;
        let eps = self.spec.epsilon();
        let px = nearest_boundary_point(&self.spec, BoundaryId::Unperturbed, x)?;
        let py = nearest_boundary_point(&self.spec, BoundaryId::Unperturbed, y)?;
        let d0 = self.options.d0;
        if px.rho > d0 || py.rho > d0 {
            return match self.options.outside_strip {
                OutsideStripPolicy::Error => Err(Error::OutsideStrip(d0)),
                OutsideStripPolicy::Classical => Ok(KernelEval::from_terms(
                    FormulaId::HadamardUniform,
                    *x,
                    *y,
                    eps,
                    terms,
                )),
            };
        }
        let dz = px.z_of_x.location.distance(&py.z_of_x.location);
        let (rx, ry) = (px.rho, py.rho);
        let ox = self.boundary_offset(px.z_of_x.parameter);
        let oy = self.boundary_offset(py.z_of_x.parameter);
        let den = dz * dz + (rx + ry) * (rx + ry);
        let shifted = rx - ox + ry - oy;
        let layer_log = ((dz * dz + shifted * shifted) / den).ln() / (4.0 * PI);
        let layer_rational = (ox + oy) * (rx + ry) / (2.0 * PI * den);
        terms.push(("boundary-layer-log", layer_log));
        terms.push(("boundary-layer-rational", layer_rational));
        Ok(KernelEval::from_terms(
            FormulaId::HadamardUniform,
            *x,
            *y,
            eps,
            terms,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::TrigPolynomial;

    fn spec(eps: f64) -> DomainSpec {
        DomainSpec::perturbed_disk(TrigPolynomial::new(vec![1.0, 0.3], vec![]), eps).unwrap()
    }

    #[test]
    fn unperturbed_limit_is_disk_green() {
        let h = HadamardEvaluator::new(&spec(0.0), AsymptoticOptions::default()).unwrap();
        let (x, y) = (Point::new2(0.3, 0.0), Point::new2(0.0, 0.4));
        let e = h.classical(&x, &y).unwrap();
        assert_eq!(
            e.value,
            UnitDisk.green(x.v2().unwrap(), y.v2().unwrap()).unwrap()
        );
        let u = h
            .uniform(&Point::new2(0.9, 0.0), &Point::new2(0.0, 0.85))
            .unwrap();
        assert_eq!(u.term("boundary-layer-rational"), Some(0.0));
        assert_eq!(u.term("boundary-layer-log"), Some(0.0));
    }

    #[test]
    fn offsets_are_normal_distances() {
        let eps = 0.1;
        let h = HadamardEvaluator::new(&spec(eps), AsymptoticOptions::default()).unwrap();
        // radial and normal distances agree to second order in epsilon
        for t in [0.0, 0.7, 2.0, PI] {
            let radial = eps * (1.0 + 0.3 * f64::cos(t));
            let o = h.boundary_offset(t);
            assert!((o - radial).abs() < 2.0 * eps * eps * 0.3, "{o} {radial}");
            assert!(o <= radial + 1e-15);
        }
        assert!((h.boundary_offset(0.0) - 0.13).abs() < 1e-12);
    }

    #[test]
    fn swap_symmetry() {
        let h = HadamardEvaluator::new(&spec(0.04), AsymptoticOptions::default()).unwrap();
        for (a, b) in [
            ((0.3, 0.0), (0.0, 0.4)),
            ((0.9, 0.1), (0.85, -0.2)),
            ((-0.93, 0.05), (-0.9, 0.1)),
        ] {
            let (x, y) = (Point::new2(a.0, a.1), Point::new2(b.0, b.1));
            let near = a.0.hypot(a.1) > 0.8;
            let fs: &[fn(&HadamardEvaluator, &Point, &Point) -> Result<KernelEval>] = if near {
                &[HadamardEvaluator::classical, HadamardEvaluator::uniform]
            } else {
                &[HadamardEvaluator::classical]
            };
            for f in fs {
                let u = f(&h, &x, &y).unwrap().value;
                let v = f(&h, &y, &x).unwrap().value;
                assert!((u - v).abs() < 1e-12, "{u} {v}");
            }
        }
    }

    #[test]
    fn boundary_layer_is_order_one_at_coalescing_points() {
        let eps = 0.02;
        let h = HadamardEvaluator::new(&spec(eps), AsymptoticOptions::default()).unwrap();
        let off = h.boundary_offset(0.3);
        let u = Vec2::new(0.3f64.cos(), 0.3f64.sin());
        let x = Point::from((1.0 - off - 0.5 * eps) * u);
        let y = Point::from((1.0 - off - 0.8 * eps) * u);
        let e = h.uniform(&x, &y).unwrap();
        let layer = e.term("boundary-layer-log").unwrap();
        assert!(layer.abs() > 0.05, "{layer}");
        assert!((e.value - e.terms.iter().map(|t| t.value).sum::<f64>()).abs() < 1e-13);
    }

    #[test]
    fn strip_check() {
        let h = HadamardEvaluator::new(&spec(0.04), AsymptoticOptions::default()).unwrap();
        let r = h.uniform(&Point::new2(0.3, 0.0), &Point::new2(0.9, 0.0));
        assert_eq!(r.unwrap_err(), Error::OutsideStrip(0.3));
        let opts = AsymptoticOptions {
            outside_strip: OutsideStripPolicy::Classical,
            ..Default::default()
        };
        let h = HadamardEvaluator::new(&spec(0.04), opts).unwrap();
        let (x, y) = (Point::new2(0.3, 0.0), Point::new2(0.9, 0.0));
        assert_eq!(
            h.uniform(&x, &y).unwrap().value,
            h.classical(&x, &y).unwrap().value
        );
    }
}
