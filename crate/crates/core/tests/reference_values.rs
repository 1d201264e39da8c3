//! Frozen values from `tools/reference_values.py`, which solves each
//! configuration by a method unrelated to the Rust oracle serving it
//! (fundamental-solution collocation, mpmath Legendre and sine series).

use perturbed_green::oracle::{
    AnnulusBc, AnnulusGreen, BoundaryIntegralGreen, ConcentricSpheresGreen, MultiSphereGreen,
    Oracle, RectangleMixedGreen, TruncatedSectorGreen,
};
use perturbed_green::{DomainSpec, Point, TrigPolynomial};

type Pair2 = ([f64; 2], [f64; 2], f64);
type Pair3 = ([f64; 3], [f64; 3], f64);

fn check2(oracle: &dyn Oracle, rows: &[Pair2], tol: f64) {
    for &(x, y, want) in rows {
        let got = oracle
            .green(&Point::new2(x[0], x[1]), &Point::new2(y[0], y[1]))
            .unwrap();
        assert!((got - want).abs() < tol, "{x:?} {y:?}: {got} vs {want}");
    }
}

fn check3(oracle: &dyn Oracle, rows: &[Pair3], tol: f64) {
    for &(x, y, want) in rows {
        let got = oracle
            .green(
                &Point::new3(x[0], x[1], x[2]),
                &Point::new3(y[0], y[1], y[2]),
            )
            .unwrap();
        assert!((got - want).abs() < tol, "{x:?} {y:?}: {got} vs {want}");
    }
}

const ANNULUS_DD: [Pair2; 3] = [
    ([0.5, 0.1], [-0.3, 0.4], 0.005950766554927926),
    ([0.25, 0.0], [0.9, 0.2], 0.005338374729986939),
    ([0.3, -0.2], [0.35, -0.1], 0.18253908544520975),
];

const ANNULUS_DN: [Pair2; 3] = [
    ([0.5, 0.1], [-0.3, 0.4], 0.03836190898830429),
    ([0.25, 0.0], [0.9, 0.2], 0.025468249935726453),
    ([0.3, -0.2], [0.35, -0.1], 0.36795229317173483),
];

const ANNULUS_ND: [Pair2; 3] = [
    ([0.5, 0.1], [-0.3, 0.4], 0.061234002145731756),
    ([0.25, 0.0], [0.9, 0.2], 0.0690791616731245),
    ([0.3, -0.2], [0.35, -0.1], 0.23867960411088873),
];

#[test]
fn annulus_matches_collocation() {
    for (bc, rows) in [
        (AnnulusBc::DD, &ANNULUS_DD),
        (AnnulusBc::DN, &ANNULUS_DN),
        (AnnulusBc::ND, &ANNULUS_ND),
    ] {
        check2(&AnnulusGreen::new(0.2, bc).unwrap(), rows, 1e-8);
    }
}

#[test]
fn concentric_spheres_match_legendre_series() {
    let rows: [Pair3; 3] = [
        ([0.5, 0.0, 0.0], [0.0, 0.5, 0.0], 0.026519978986509207),
        ([0.3, 0.2, -0.1], [-0.6, 0.1, 0.4], 0.006313320230834081),
        ([0.9, 0.0, 0.1], [0.12, 0.05, 0.0], 0.00421553558427419),
    ];
    check3(&ConcentricSpheresGreen::new(0.1).unwrap(), &rows, 1e-12);
}

#[test]
fn rectangle_matches_sine_series() {
    let rows: [Pair2; 3] = [
        ([0.1, 0.2], [0.5, -0.3], 0.449478986794321),
        ([0.05, 0.9], [0.55, 0.95], 0.017748779688429913),
        ([0.3, -0.7], [0.0, 0.4], 0.14999842132991487),
    ];
    check2(&RectangleMixedGreen::new(0.6, 1.0).unwrap(), &rows, 1e-12);
}

#[test]
fn sectors_match_angular_series() {
    use std::f64::consts::PI;
    let right: [Pair2; 3] = [
        ([0.5, 0.2], [0.2, 0.3], 0.05822659609299371),
        ([0.15, 0.1], [0.7, 0.5], 0.005094692812304259),
        ([0.9, 0.05], [0.3, 0.02], 0.0002549571571250899),
    ];
    let obtuse: [Pair2; 3] = [
        ([0.5, 0.2], [0.2, 0.3], 0.06972682404811667),
        ([0.15, 0.1], [0.7, 0.5], 0.006766786775366366),
        ([0.9, 0.05], [0.3, 0.02], 0.00027004609815869913),
    ];
    check2(
        &TruncatedSectorGreen::new(PI / 2.0, 0.1).unwrap(),
        &right,
        1e-12,
    );
    check2(
        &TruncatedSectorGreen::new(0.75 * PI, 0.1).unwrap(),
        &obtuse,
        1e-12,
    );
}

#[test]
fn perturbed_disk_matches_collocation() {
    let spec =
        DomainSpec::perturbed_disk(TrigPolynomial::new(vec![1.0, 0.3], vec![]), 0.08).unwrap();
    let rows: [Pair2; 3] = [
        ([0.3, 0.0], [0.0, 0.4], 0.09748450291754095),
        ([0.8, 0.05], [0.75, -0.1], 0.08334217271073469),
        ([-0.5, 0.5], [0.2, -0.6], 0.008466731096552965),
    ];
    check2(
        &BoundaryIntegralGreen::adaptive(&spec, 0.05).unwrap(),
        &rows,
        1e-9,
    );
}

#[test]
fn two_holes_match_collocation() {
    let spec = DomainSpec::ball_with_holes(vec![[0.3, 0.0, 0.0], [-0.3, 0.0, 0.0]], 0.1).unwrap();
    let rows: [Pair3; 3] = [
        ([0.0, 0.3, 0.0], [0.0, -0.2, 0.4], 0.030051862423963016),
        ([0.45, 0.0, 0.0], [-0.3, 0.2, 0.0], 0.0034869605988620267),
        ([0.7, 0.3, -0.2], [0.1, 0.0, 0.05], 0.008374953688022851),
    ];
    check3(&MultiSphereGreen::new(&spec).unwrap(), &rows, 1e-9);
}
