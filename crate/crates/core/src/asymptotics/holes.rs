use std::f64::consts::PI;

use super::{check_pair, CrossTermConvention, FormulaId, KernelEval};
use crate::error::{Error, Result};
use crate::geometry::{DomainSpec, Point, Vec2, Vec3};
use crate::model_kernels::{
    fundamental_2d, fundamental_3d, ExteriorBall, ExteriorDisk, ExteriorHole2, ExteriorHole3,
    InteriorGreen2, InteriorGreen3, UnitBall, UnitDisk, UnitDiskNeumann,
};

/// Hole center and scaled coordinates (x − c)/ε, (y − c)/ε in the plane.
struct Planar {
    x: Vec2,
    y: Vec2,
    c: Vec2,
    eps: f64,
    xi: Vec2,
    eta: Vec2,
}

fn planar(spec: &DomainSpec, x: &Point, y: &Point) -> Result<Planar> {
    check_pair(spec, x, y, Error::NotInPerforatedDomain)?;
    let c = spec.hole_centers()[0].xy();
    let eps = spec.epsilon();
    let (x, y) = (x.v2()?, y.v2()?);
    Ok(Planar {
        x,
        y,
        c,
        eps,
        xi: (x - c) / eps,
        eta: (y - c) / eps,
    })
}

struct Spatial {
    x: Vec3,
    y: Vec3,
    c: Vec3,
    eps: f64,
    xi: Vec3,
    eta: Vec3,
}

fn spatial(spec: &DomainSpec, x: &Point, y: &Point) -> Result<Spatial> {
    check_pair(spec, x, y, Error::NotInPerforatedDomain)?;
    let c = spec.hole_centers()[0];
    let eps = spec.epsilon();
    let (x, y) = (x.v3()?, y.v3()?);
    Ok(Spatial {
        x,
        y,
        c,
        eps,
        xi: (x - c) / eps,
        eta: (y - c) / eps,
    })
}

/// (2π)⁻¹ log ε + H(c, c) − ζ∞, failing near its zero.
fn log_capacity_denominator(eps: f64, c: Vec2) -> Result<f64> {
    let den = eps.ln() / (2.0 * PI) + UnitDisk.regular(c, c)? - ExteriorDisk.zeta_inf();
    if den.abs() < 1e-8 {
        return Err(Error::DenominatorDegenerate(den));
    }
    Ok(den)
}

pub(super) fn unit_disk_green(spec: &DomainSpec, x: &Point, y: &Point) -> Result<KernelEval> {
    let g = UnitDisk.green(x.v2()?, y.v2()?)?;
    Ok(KernelEval::from_terms(
        FormulaId::UnitDiskGreen,
        *x,
        *y,
        spec.epsilon(),
        vec![("outer-green", g)],
    ))
}

pub(super) fn unit_ball_green(spec: &DomainSpec, x: &Point, y: &Point) -> Result<KernelEval> {
    let g = UnitBall.green(x.v3()?, y.v3()?)?;
    Ok(KernelEval::from_terms(
        FormulaId::UnitBallGreen,
        *x,
        *y,
        spec.epsilon(),
        vec![("outer-green", g)],
    ))
}

/// The single-hole block in R³, shared with the multi-hole formula.
fn ball_hole_block(x: Vec3, y: Vec3, c: Vec3, eps: f64) -> Result<[(&'static str, f64); 6]> {
    let (xi, eta) = ((x - c) / eps, (y - c) / eps);
    let px = ExteriorBall.capacitary_potential(xi)?;
    let py = ExteriorBall.capacitary_potential(eta)?;
    let hxc = UnitBall.regular(x, c)?;
    let hcy = UnitBall.regular(c, y)?;
    let hcc = UnitBall.regular(c, c)?;
    Ok([
        ("inner-green", ExteriorBall.green(xi, eta)? / eps),
        ("fundamental-compensator", -fundamental_3d(x, y)?),
        ("capacitary-x", hcy * px),
        ("capacitary-y", hxc * py),
        ("capacitary-product", -hcc * px * py),
        (
            "capacity-cross-term",
            -eps * ExteriorBall.capacity() * hxc * hcy,
        ),
    ])
}

pub(super) fn dirichlet_hole_3d(spec: &DomainSpec, x: &Point, y: &Point) -> Result<KernelEval> {
    let s = spatial(spec, x, y)?;
    let mut terms = vec![("outer-green", UnitBall.green(s.x, s.y)?)];
    terms.extend(ball_hole_block(s.x, s.y, s.c, s.eps)?);
    Ok(KernelEval::from_terms(
        FormulaId::DirichletHole3d,
        *x,
        *y,
        s.eps,
        terms,
    ))
}

pub(super) fn dirichlet_hole_2d(spec: &DomainSpec, x: &Point, y: &Point) -> Result<KernelEval> {
    let s = planar(spec, x, y)?;
    let hole = ExteriorDisk;
    let l = s.eps.ln() / (2.0 * PI);
    let zinf = hole.zeta_inf();
    let (zx, zy) = (hole.zeta(s.xi)?, hole.zeta(s.eta)?);
    let den = log_capacity_denominator(s.eps, s.c)?;
    let num_x = l + zx - zinf + UnitDisk.regular(s.x, s.c)?;
    let num_y = l + zy - zinf + UnitDisk.regular(s.c, s.y)?;
    let terms = vec![
        ("outer-green", UnitDisk.green(s.x, s.y)?),
        ("inner-green", hole.green(s.xi, s.eta)?),
        ("fundamental-compensator", -fundamental_2d(s.xi, s.eta)?),
        ("capacitary-cross-term", num_x * num_y / den),
        ("zeta-correction", -zx - zy + zinf),
    ];
    Ok(KernelEval::from_terms(
        FormulaId::DirichletHole2d,
        *x,
        *y,
        s.eps,
        terms,
    ))
}

fn constraint(ok: bool, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::ConstraintViolated(what.into()))
    }
}

pub(super) fn corollary_far_2d(spec: &DomainSpec, x: &Point, y: &Point) -> Result<KernelEval> {
    let s = planar(spec, x, y)?;
    constraint(
        (s.x - s.c).norm().min((s.y - s.c).norm()) > 2.0 * s.eps,
        "min distance to the hole center must exceed 2 epsilon",
    )?;
    let den = log_capacity_denominator(s.eps, s.c)?;
    let terms = vec![
        ("outer-green", UnitDisk.green(s.x, s.y)?),
        (
            "capacitary-cross-term",
            UnitDisk.green(s.x, s.c)? * UnitDisk.green(s.c, s.y)? / den,
        ),
    ];
    Ok(KernelEval::from_terms(
        FormulaId::CorollaryFar2d,
        *x,
        *y,
        s.eps,
        terms,
    ))
}

pub(super) fn corollary_far_3d(spec: &DomainSpec, x: &Point, y: &Point) -> Result<KernelEval> {
    let s = spatial(spec, x, y)?;
    constraint(
        (s.x - s.c).norm().min((s.y - s.c).norm()) > 2.0 * s.eps,
        "min distance to the hole center must exceed 2 epsilon",
    )?;
    let terms = vec![
        ("outer-green", UnitBall.green(s.x, s.y)?),
        (
            "capacity-cross-term",
            -s.eps
                * ExteriorBall.capacity()
                * UnitBall.green(s.x, s.c)?
                * UnitBall.green(s.c, s.y)?,
        ),
    ];
    Ok(KernelEval::from_terms(
        FormulaId::CorollaryFar3d,
        *x,
        *y,
        s.eps,
        terms,
    ))
}

pub(super) fn corollary_near_2d(spec: &DomainSpec, x: &Point, y: &Point) -> Result<KernelEval> {
    let s = planar(spec, x, y)?;
    constraint(
        (s.x - s.c).norm().max((s.y - s.c).norm()) < 0.5,
        "max distance to the hole center must be below 1/2",
    )?;
    let den = log_capacity_denominator(s.eps, s.c)?;
    let hole = ExteriorDisk;
    let terms = vec![
        ("inner-green", hole.green(s.xi, s.eta)?),
        (
            "capacitary-cross-term",
            hole.zeta(s.xi)? * hole.zeta(s.eta)? / den,
        ),
    ];
    Ok(KernelEval::from_terms(
        FormulaId::CorollaryNear2d,
        *x,
        *y,
        s.eps,
        terms,
    ))
}

pub(super) fn corollary_near_3d(spec: &DomainSpec, x: &Point, y: &Point) -> Result<KernelEval> {
    let s = spatial(spec, x, y)?;
    constraint(
        (s.x - s.c).norm().max((s.y - s.c).norm()) < 0.5,
        "max distance to the hole center must be below 1/2",
    )?;
    let px = ExteriorBall.capacitary_potential(s.xi)?;
    let py = ExteriorBall.capacitary_potential(s.eta)?;
    let terms = vec![
        ("inner-green", ExteriorBall.green(s.xi, s.eta)? / s.eps),
        (
            "capacitary-product",
            -UnitBall.regular(s.c, s.c)? * (px - 1.0) * (py - 1.0),
        ),
    ];
    Ok(KernelEval::from_terms(
        FormulaId::CorollaryNear3d,
        *x,
        *y,
        s.eps,
        terms,
    ))
}

pub(super) fn mixed_outer_d_hole_n(spec: &DomainSpec, x: &Point, y: &Point) -> Result<KernelEval> {
    let s = planar(spec, x, y)?;
    let hole = ExteriorDisk;
    let (dx, dy) = (hole.dipole_neumann(s.xi)?, hole.dipole_neumann(s.eta)?);
    let m = UnitDisk.mixed_hessian(s.c, s.c);
    let terms = vec![
        ("outer-green", UnitDisk.green(s.x, s.y)?),
        ("inner-neumann", hole.neumann(s.xi, s.eta)?),
        ("fundamental-compensator", -fundamental_2d(s.xi, s.eta)?),
        (
            "dipole-x",
            s.eps * dx.dot(&UnitDisk.grad_x_regular(s.c, s.y)),
        ),
        (
            "dipole-y",
            s.eps * dy.dot(&UnitDisk.grad_y_regular(s.x, s.c)),
        ),
        ("dipole-product", -s.eps * s.eps * dx.dot(&(m * dy))),
    ];
    Ok(KernelEval::from_terms(
        FormulaId::MixedOuterDHoleN,
        *x,
        *y,
        s.eps,
        terms,
    ))
}

pub(super) fn mixed_outer_n_hole_d(spec: &DomainSpec, x: &Point, y: &Point) -> Result<KernelEval> {
    let s = planar(spec, x, y)?;
    let hole = ExteriorDisk;
    let n = UnitDiskNeumann;
    let (dx, dy) = (hole.dipole_dirichlet(s.xi)?, hole.dipole_dirichlet(s.eta)?);
    let m = n.mixed_hessian(s.c, s.c);
    let terms = vec![
        ("inner-green", hole.green(s.xi, s.eta)?),
        ("outer-neumann", n.neumann(s.x, s.y)?),
        ("fundamental-compensator", -fundamental_2d(s.x, s.y)?),
        ("neumann-regular-constant", n.regular(s.c, s.c)?),
        ("dipole-y", s.eps * dy.dot(&n.grad_y_regular(s.x, s.c))),
        ("dipole-x", s.eps * dx.dot(&n.grad_x_regular(s.c, s.y))),
        ("dipole-product", -s.eps * s.eps * dx.dot(&(m * dy))),
    ];
    Ok(KernelEval::from_terms(
        FormulaId::MixedOuterNHoleD,
        *x,
        *y,
        s.eps,
        terms,
    ))
}

pub(super) fn multi_inclusion_3d(
    spec: &DomainSpec,
    convention: CrossTermConvention,
    x: &Point,
    y: &Point,
) -> Result<KernelEval> {
    check_pair(spec, x, y, Error::NotInPerforatedDomain)?;
    let eps = spec.epsilon();
    let centers = spec.hole_centers();
    let (xv, yv) = (x.v3()?, y.v3()?);
    let mut sums = [0.0f64; 6];
    let mut names = [""; 6];
    for c in &centers {
        for (k, (name, v)) in ball_hole_block(xv, yv, *c, eps)?.into_iter().enumerate() {
            names[k] = name;
            sums[k] += v;
        }
    }
    let p = |v: Vec3, c: &Vec3| ExteriorBall.capacitary_potential((v - c) / eps);
    let mut cross = 0.0;
    for (j, cj) in centers.iter().enumerate() {
        for (i, ci) in centers.iter().enumerate() {
            let include = match convention {
                CrossTermConvention::OrderedPairs => i != j,
                CrossTermConvention::UnorderedDoubled => i < j,
            };
            if !include {
                continue;
            }
            let weight = if convention == CrossTermConvention::UnorderedDoubled {
                2.0
            } else {
                1.0
            };
            cross += weight * UnitBall.green(*cj, *ci)? * p(xv, cj)? * p(yv, ci)?;
        }
    }
    let mut terms = vec![("outer-green", UnitBall.green(xv, yv)?)];
    terms.extend(names.iter().copied().zip(sums));
    terms.push(("inter-hole-cross-term", cross));
    Ok(KernelEval::from_terms(
        FormulaId::MultiInclusion3d,
        *x,
        *y,
        eps,
        terms,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asymptotics::evaluate;

    #[test]
    fn swap_symmetry_of_closed_form_evaluators() {
        let disk = DomainSpec::disk_with_hole(0.05).unwrap();
        let ball = DomainSpec::ball_with_hole(0.05).unwrap();
        let (x2, y2) = (Point::new2(0.5, 0.0), Point::new2(-0.4, 0.2));
        let (x3, y3) = (Point::new3(0.5, 0.0, 0.1), Point::new3(0.0, 0.5, -0.2));
        for f in [
            FormulaId::DirichletHole2d,
            FormulaId::MixedOuterDHoleN,
            FormulaId::MixedOuterNHoleD,
            FormulaId::CorollaryFar2d,
        ] {
            let a = evaluate(f, &disk, &x2, &y2).unwrap().value;
            let b = evaluate(f, &disk, &y2, &x2).unwrap().value;
            assert!((a - b).abs() < 1e-12, "{f}: {a} {b}");
        }
        for f in [
            FormulaId::DirichletHole3d,
            FormulaId::CorollaryFar3d,
            FormulaId::MultiInclusion3d,
        ] {
            let a = evaluate(f, &ball, &x3, &y3).unwrap().value;
            let b = evaluate(f, &ball, &y3, &x3).unwrap().value;
            assert!((a - b).abs() < 1e-12, "{f}: {a} {b}");
        }
    }

    #[test]
    fn denominator_is_log_epsilon_for_centered_unit_hole() {
        let d = log_capacity_denominator(0.05, Vec2::zeros()).unwrap();
        assert!((d - 0.05f64.ln() / (2.0 * PI)).abs() < 1e-15);
    }

    #[test]
    fn dirichlet_hole_values_vanish_on_outer_circle() {
        let spec = DomainSpec::disk_with_hole(0.05).unwrap();
        let y = Point::new2(-0.4, 0.2);
        for k in 0..8 {
            let t = 0.8 * k as f64;
            let x = Point::new2(t.cos(), t.sin());
            let v = evaluate(FormulaId::DirichletHole2d, &spec, &x, &y)
                .unwrap()
                .value;
            assert!(v.abs() < 0.05 * 2.0, "{v}");
        }
    }

    #[test]
    fn constraint_violations() {
        let spec = DomainSpec::disk_with_hole(0.05).unwrap();
        let r = evaluate(
            FormulaId::CorollaryFar2d,
            &spec,
            &Point::new2(0.05, 0.0),
            &Point::new2(0.5, 0.0),
        );
        assert!(matches!(r, Err(Error::ConstraintViolated(_))));
        let r = evaluate(
            FormulaId::CorollaryNear2d,
            &spec,
            &Point::new2(0.6, 0.0),
            &Point::new2(0.1, 0.0),
        );
        assert!(matches!(r, Err(Error::ConstraintViolated(_))));
        let ball = DomainSpec::ball_with_hole(0.05).unwrap();
        let r = evaluate(
            FormulaId::DirichletHole3d,
            &ball,
            &Point::new3(0.01, 0.0, 0.0),
            &Point::new3(0.5, 0.0, 0.0),
        );
        assert!(matches!(r, Err(Error::NotInPerforatedDomain(_))));
    }

    #[test]
    fn single_hole_multi_formula_reduces_exactly() {
        let spec1 = DomainSpec::ball_with_holes(vec![[0.0; 3]], 0.05).unwrap();
        let spec = DomainSpec::ball_with_hole(0.05).unwrap();
        for (x, y) in [
            (Point::new3(0.5, 0.0, 0.0), Point::new3(0.0, 0.5, 0.0)),
            (Point::new3(0.06, 0.02, 0.0), Point::new3(-0.3, 0.1, 0.7)),
        ] {
            let a = evaluate(FormulaId::MultiInclusion3d, &spec1, &x, &y)
                .unwrap()
                .value;
            let b = evaluate(FormulaId::DirichletHole3d, &spec, &x, &y)
                .unwrap()
                .value;
            assert!((a - b).abs() <= 1e-13, "{a} {b}");
        }
    }

    #[test]
    fn cross_term_conventions_and_symmetry() {
        let spec =
            DomainSpec::ball_with_holes(vec![[0.3, 0.0, 0.0], [-0.3, 0.0, 0.0]], 0.04).unwrap();
        let x = Point::new3(0.35, 0.0, 0.0);
        let y = Point::new3(-0.25, 0.02, 0.0);
        let ordered = |a: &Point, b: &Point| {
            multi_inclusion_3d(&spec, CrossTermConvention::OrderedPairs, a, b)
                .unwrap()
                .value
        };
        let doubled = |a: &Point, b: &Point| {
            multi_inclusion_3d(&spec, CrossTermConvention::UnorderedDoubled, a, b)
                .unwrap()
                .value
        };
        assert!((ordered(&x, &y) - ordered(&y, &x)).abs() < 1e-12);
        assert!((doubled(&x, &y) - doubled(&y, &x)).abs() > 1e-3);
    }
}
