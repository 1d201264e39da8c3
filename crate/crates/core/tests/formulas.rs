use perturbed_green::asymptotics::{evaluate, FormulaId};
use perturbed_green::oracle::{
    AnnulusBc, AnnulusGreen, ConcentricSpheresGreen, Oracle, TruncatedSectorGreen,
};
use perturbed_green::validation::{
    error_sweep, fit_rate, uniformity_ratio, ExpectedOrder, RowStratum, SweepSpec,
};
use perturbed_green::{DomainSpec, GridPolicy, Point, TrigPolynomial};
use proptest::prelude::*;

fn err(formula: FormulaId, spec: &DomainSpec, oracle: &dyn Oracle, x: Point, y: Point) -> f64 {
    (evaluate(formula, spec, &x, &y).unwrap().value - oracle.green(&x, &y).unwrap()).abs()
}

#[test]
fn ball_hole_formula_error_halves_with_eps() {
    let pairs = [
        (Point::new3(0.5, 0.0, 0.0), Point::new3(0.0, 0.5, 0.0)),
        (Point::new3(0.3, 0.2, -0.1), Point::new3(-0.6, 0.1, 0.4)),
    ];
    for (x, y) in pairs {
        let e: Vec<f64> = [0.1, 0.05, 0.025]
            .iter()
            .map(|&eps| {
                let spec = DomainSpec::ball_with_hole(eps).unwrap();
                err(
                    FormulaId::DirichletHole3d,
                    &spec,
                    &ConcentricSpheresGreen::new(eps).unwrap(),
                    x,
                    y,
                )
            })
            .collect();
        assert!(e[0] < 1e-2, "{e:?}");
        for w in e.windows(2) {
            let ratio = w[0] / w[1];
            assert!(ratio > 1.6, "{e:?}");
        }
    }
}

#[test]
fn disk_hole_formula_error_shrinks_with_eps() {
    let pairs = [
        (Point::new2(0.5, 0.0), Point::new2(-0.4, 0.2)),
        (Point::new2(0.3, 0.3), Point::new2(0.0, -0.7)),
    ];
    for (x, y) in pairs {
        let e: Vec<f64> = [0.1, 0.05, 0.025]
            .iter()
            .map(|&eps| {
                let spec = DomainSpec::disk_with_hole(eps).unwrap();
                let oracle = AnnulusGreen::new(eps, AnnulusBc::DD).unwrap();
                err(FormulaId::DirichletHole2d, &spec, &oracle, x, y)
            })
            .collect();
        assert!(e[0] < 1e-2 && e[1] < e[0] && e[2] < e[1], "{e:?}");
    }
}

#[test]
fn mixed_formulas_track_their_oracles() {
    let x = Point::new2(0.5, 0.1);
    let y = Point::new2(-0.3, 0.4);
    for (formula, bc) in [
        (FormulaId::MixedOuterDHoleN, AnnulusBc::DN),
        (FormulaId::MixedOuterNHoleD, AnnulusBc::ND),
    ] {
        let e: Vec<f64> = [0.1, 0.05]
            .iter()
            .map(|&eps| {
                let spec = DomainSpec::disk_with_hole(eps).unwrap();
                err(formula, &spec, &AnnulusGreen::new(eps, bc).unwrap(), x, y)
            })
            .collect();
        assert!(e[1] < e[0] && e[0] < 5e-2, "{formula}: {e:?}");
    }
}

fn hole_sweep() -> SweepSpec {
    SweepSpec {
        formula: FormulaId::DirichletHole2d,
        domain: DomainSpec::disk_with_hole(0.1).unwrap(),
        eps: vec![0.1, 0.05, 0.025],
        grid: GridPolicy {
            interior_points: 12,
            angles: 8,
            ..GridPolicy::default()
        },
        options: Default::default(),
        reference: Default::default(),
        filter: Default::default(),
        scale: Default::default(),
        estimate_accuracy: false,
    }
}

#[test]
fn disk_hole_sweep_decreases_and_fits_first_order() {
    let table = error_sweep(&hole_sweep()).unwrap();
    let all = table.select(RowStratum::All);
    assert_eq!(all.len(), 3);
    assert!(
        all.windows(2).all(|w| w[1].sup_err < w[0].sup_err),
        "{all:?}"
    );
    let order =
        ExpectedOrder::for_formula(FormulaId::DirichletHole2d, &hole_sweep().domain).unwrap();
    let fit = fit_rate(&table, RowStratum::All, order).unwrap();
    assert!(fit.pass, "{fit:?}");
}

#[test]
fn sweeps_are_reproducible() {
    assert_eq!(
        error_sweep(&hole_sweep()).unwrap(),
        error_sweep(&hole_sweep()).unwrap()
    );
}

#[test]
fn classical_boundary_variation_loses_uniformity() {
    let spec = SweepSpec {
        formula: FormulaId::HadamardClassical,
        domain: DomainSpec::perturbed_disk(TrigPolynomial::new(vec![1.0, 0.3], vec![]), 0.1)
            .unwrap(),
        eps: vec![0.1, 0.05, 0.025],
        grid: GridPolicy {
            interior_points: 8,
            angles: 8,
            ..GridPolicy::default()
        },
        options: Default::default(),
        reference: Default::default(),
        filter: Default::default(),
        scale: Default::default(),
        estimate_accuracy: false,
    };
    let ratios = uniformity_ratio(&error_sweep(&spec).unwrap()).unwrap();
    assert!(ratios.windows(2).all(|w| w[1].1 > w[0].1), "{ratios:?}");
}

fn annulus_point() -> impl Strategy<Value = Point> {
    (0.25f64..0.95, 0.0f64..std::f64::consts::TAU)
        .prop_map(|(r, t)| Point::new2(r * t.cos(), r * t.sin()))
}

fn sector_point() -> impl Strategy<Value = Point> {
    (0.15f64..0.95, 0.05f64..2.3).prop_map(|(r, t)| Point::new2(r * t.cos(), r * t.sin()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn annulus_kernels_are_symmetric_and_positive(x in annulus_point(), y in annulus_point()) {
        prop_assume!(x.distance(&y) > 1e-3);
        for bc in [AnnulusBc::DD, AnnulusBc::DN, AnnulusBc::ND] {
            let g = AnnulusGreen::new(0.2, bc).unwrap();
            let (a, b) = (g.green(&x, &y).unwrap(), g.green(&y, &x).unwrap());
            prop_assert!((a - b).abs() <= 1e-10 * a.abs().max(1.0));
            prop_assert!(a > 0.0);
        }
    }

    #[test]
    fn sector_kernel_is_symmetric_and_positive(x in sector_point(), y in sector_point()) {
        prop_assume!(x.distance(&y) > 1e-3);
        let g = TruncatedSectorGreen::new(0.75 * std::f64::consts::PI, 0.1).unwrap();
        let (a, b) = (g.green(&x, &y).unwrap(), g.green(&y, &x).unwrap());
        prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
        prop_assert!(a > 0.0);
    }
}
