//! Composite uniform approximations of perturbed Green's kernels, one
//! evaluator per configuration, with term-by-term introspection.

mod cone;
mod hadamard;
mod holes;
mod rod;

use serde::{Deserialize, Serialize};

pub use hadamard::HadamardEvaluator;

use crate::error::{Error, Result};
use crate::geometry::{DomainSpec, Point};
use crate::model_kernels::PsiNormalization;

/// Identifier of an approximate kernel.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormulaId {
    /// Unperturbed unit-disk Green's function.
    UnitDiskGreen,
    /// Unperturbed unit-ball Green's function.
    UnitBallGreen,
    /// Hadamard's first-order boundary-variation formula.
    HadamardClassical,
    /// Hadamard's formula plus the boundary-layer correction.
    HadamardUniform,
    /// Small Dirichlet hole in the unit ball.
    #[serde(rename = "dirichlet-hole-3d")]
    DirichletHole3d,
    /// Small Dirichlet hole in the unit disk.
    #[serde(rename = "dirichlet-hole-2d")]
    DirichletHole2d,
    /// Simplified hole formula for points far from the hole (planar).
    #[serde(rename = "corollary-far-2d")]
    CorollaryFar2d,
    /// Simplified hole formula for points far from the hole (spatial).
    #[serde(rename = "corollary-far-3d")]
    CorollaryFar3d,
    /// Simplified hole formula for points near the hole (planar).
    #[serde(rename = "corollary-near-2d")]
    CorollaryNear2d,
    /// Simplified hole formula for points near the hole (spatial).
    #[serde(rename = "corollary-near-3d")]
    CorollaryNear3d,
    /// Dirichlet outer boundary, Neumann hole.
    MixedOuterDHoleN,
    /// Neumann outer boundary, Dirichlet hole.
    MixedOuterNHoleD,
    /// Thin rod with Dirichlet ends and Neumann sides.
    ThinRod,
    /// Truncated planar wedge.
    TruncatedCone,
    /// Several small Dirichlet holes in the unit ball.
    #[serde(rename = "multi-inclusion-3d")]
    MultiInclusion3d,
}

impl FormulaId {
    pub const ALL: [FormulaId; 15] = [
        FormulaId::UnitDiskGreen,
        FormulaId::UnitBallGreen,
        FormulaId::HadamardClassical,
        FormulaId::HadamardUniform,
        FormulaId::DirichletHole3d,
        FormulaId::DirichletHole2d,
        FormulaId::CorollaryFar2d,
        FormulaId::CorollaryFar3d,
        FormulaId::CorollaryNear2d,
        FormulaId::CorollaryNear3d,
        FormulaId::MixedOuterDHoleN,
        FormulaId::MixedOuterNHoleD,
        FormulaId::ThinRod,
        FormulaId::TruncatedCone,
        FormulaId::MultiInclusion3d,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            FormulaId::UnitDiskGreen => "unit-disk-green",
            FormulaId::UnitBallGreen => "unit-ball-green",
            FormulaId::HadamardClassical => "hadamard-classical",
            FormulaId::HadamardUniform => "hadamard-uniform",
            FormulaId::DirichletHole3d => "dirichlet-hole-3d",
            FormulaId::DirichletHole2d => "dirichlet-hole-2d",
            FormulaId::CorollaryFar2d => "corollary-far-2d",
            FormulaId::CorollaryFar3d => "corollary-far-3d",
            FormulaId::CorollaryNear2d => "corollary-near-2d",
            FormulaId::CorollaryNear3d => "corollary-near-3d",
            FormulaId::MixedOuterDHoleN => "mixed-outer-d-hole-n",
            FormulaId::MixedOuterNHoleD => "mixed-outer-n-hole-d",
            FormulaId::ThinRod => "thin-rod",
            FormulaId::TruncatedCone => "truncated-cone",
            FormulaId::MultiInclusion3d => "multi-inclusion-3d",
        }
    }

    /// Configuration variant the formula applies to.
    pub fn accepts(&self, spec: &DomainSpec) -> bool {
        use DomainSpec as D;
        use FormulaId as F;
        matches!(
            (self, spec),
            (
                F::UnitDiskGreen,
                D::PerturbedDisk { .. } | D::DiskWithHole { .. }
            ) | (
                F::UnitBallGreen,
                D::BallWithHole { .. } | D::BallWithHoles { .. }
            ) | (
                F::HadamardClassical | F::HadamardUniform,
                D::PerturbedDisk { .. }
            ) | (
                F::DirichletHole3d | F::CorollaryFar3d | F::CorollaryNear3d,
                D::BallWithHole { .. }
            ) | (
                F::DirichletHole2d
                    | F::CorollaryFar2d
                    | F::CorollaryNear2d
                    | F::MixedOuterDHoleN
                    | F::MixedOuterNHoleD,
                D::DiskWithHole { .. }
            ) | (F::ThinRod, D::ThinRodStrip { .. })
                | (F::TruncatedCone, D::TruncatedSector { .. })
                | (
                    F::MultiInclusion3d,
                    D::BallWithHoles { .. } | D::BallWithHole { .. }
                )
        )
    }
}

impl std::fmt::Display for FormulaId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for FormulaId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        FormulaId::ALL
            .iter()
            .find(|f| f.as_str() == s)
            .copied()
            .ok_or_else(|| Error::InvalidSpec(format!("unknown formula id {s}")))
    }
}

/// One named additive contribution to a kernel value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub name: String,
    pub value: f64,
}

/// Value of an approximate kernel at a point pair with its additive terms.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelEval {
    pub value: f64,
    pub terms: Vec<Term>,
    pub formula: FormulaId,
    pub x: Point,
    pub y: Point,
    pub epsilon: f64,
}

impl KernelEval {
    pub(crate) fn from_terms(
        formula: FormulaId,
        x: Point,
        y: Point,
        epsilon: f64,
        terms: Vec<(&str, f64)>,
    ) -> Self {
        let value = terms.iter().map(|t| t.1).sum();
        Self {
            value,
            terms: terms
                .into_iter()
                .map(|(n, v)| Term {
                    name: n.to_string(),
                    value: v,
                })
                .collect(),
            formula,
            x,
            y,
            epsilon,
        }
    }

    pub fn term(&self, name: &str) -> Option<f64> {
        self.terms.iter().find(|t| t.name == name).map(|t| t.value)
    }
}

/// How the double sum over distinct holes is read in the multi-hole formula.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CrossTermConvention {
    /// Σ_j Σ_{i ≠ j} over ordered pairs.
    #[default]
    OrderedPairs,
    /// 2 Σ_{i < j}, with j attached to x and i to y.
    UnorderedDoubled,
}

/// What the boundary-layer evaluator does with points outside its strip.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OutsideStripPolicy {
    #[default]
    Error,
    /// Drop the boundary-layer terms and return the classical value.
    Classical,
}

/// Tunable choices shared by the evaluators.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AsymptoticOptions {
    pub psi: PsiNormalization,
    pub cross_term: CrossTermConvention,
    /// Width of the boundary neighbourhood for the boundary-layer formula.
    pub d0: f64,
    pub outside_strip: OutsideStripPolicy,
    /// Absolute tolerance for the boundary-integral doubling test.
    pub quadrature_tol: f64,
    pub quadrature_start: usize,
}

impl Default for AsymptoticOptions {
    fn default() -> Self {
        Self {
            psi: PsiNormalization::L2,
            cross_term: CrossTermConvention::OrderedPairs,
            d0: 0.3,
            outside_strip: OutsideStripPolicy::Error,
            quadrature_tol: 1e-8,
            quadrature_start: 256,
        }
    }
}

/// A prepared approximate kernel for one configuration.
pub struct Evaluator {
    formula: FormulaId,
    spec: DomainSpec,
    options: AsymptoticOptions,
    hadamard: Option<HadamardEvaluator>,
}

impl Evaluator {
    pub fn new(formula: FormulaId, spec: &DomainSpec, options: AsymptoticOptions) -> Result<Self> {
        if !formula.accepts(spec) {
            return Err(Error::Unsupported(format!(
                "{formula} does not apply to {}",
                spec.variant_name()
            )));
        }
        let hadamard = match formula {
            FormulaId::HadamardClassical | FormulaId::HadamardUniform => {
                Some(HadamardEvaluator::new(spec, options)?)
            }
            _ => None,
        };
        Ok(Self {
            formula,
            spec: spec.clone(),
            options,
            hadamard,
        })
    }

    pub fn formula(&self) -> FormulaId {
        self.formula
    }

    pub fn spec(&self) -> &DomainSpec {
        &self.spec
    }

    pub fn eval(&self, x: &Point, y: &Point) -> Result<KernelEval> {
        let (s, o) = (&self.spec, &self.options);
        match self.formula {
            FormulaId::UnitDiskGreen => holes::unit_disk_green(s, x, y),
            FormulaId::UnitBallGreen => holes::unit_ball_green(s, x, y),
            FormulaId::HadamardClassical => self.hadamard.as_ref().unwrap().classical(x, y),
            FormulaId::HadamardUniform => self.hadamard.as_ref().unwrap().uniform(x, y),
            FormulaId::DirichletHole3d => holes::dirichlet_hole_3d(s, x, y),
            FormulaId::DirichletHole2d => holes::dirichlet_hole_2d(s, x, y),
            FormulaId::CorollaryFar2d => holes::corollary_far_2d(s, x, y),
            FormulaId::CorollaryFar3d => holes::corollary_far_3d(s, x, y),
            FormulaId::CorollaryNear2d => holes::corollary_near_2d(s, x, y),
            FormulaId::CorollaryNear3d => holes::corollary_near_3d(s, x, y),
            FormulaId::MixedOuterDHoleN => holes::mixed_outer_d_hole_n(s, x, y),
            FormulaId::MixedOuterNHoleD => holes::mixed_outer_n_hole_d(s, x, y),
            FormulaId::ThinRod => rod::thin_rod(s, x, y),
            FormulaId::TruncatedCone => cone::truncated_cone(s, o.psi, x, y),
            FormulaId::MultiInclusion3d => holes::multi_inclusion_3d(s, o.cross_term, x, y),
        }
    }
}

/// One-shot evaluation with default options.
pub fn evaluate(formula: FormulaId, spec: &DomainSpec, x: &Point, y: &Point) -> Result<KernelEval> {
    Evaluator::new(formula, spec, AsymptoticOptions::default())?.eval(x, y)
}

pub(crate) const MEMBERSHIP_TOL: f64 = 1e-12;

pub(crate) fn check_pair(
    spec: &DomainSpec,
    x: &Point,
    y: &Point,
    outside: fn(Vec<f64>) -> Error,
) -> Result<()> {
    for p in [x, y] {
        if p.dim() != spec.dim() {
            return Err(Error::WrongDimension {
                expected: spec.dim(),
                got: p.dim(),
            });
        }
        if !spec.contains_closed(p, MEMBERSHIP_TOL) {
            return Err(outside(p.coords().to_vec()));
        }
    }
    if x.distance(y) < crate::model_kernels::COINCIDENCE_TOL {
        return Err(Error::Singular);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn serialized_ids_match_display_and_parse_back() {
        for f in FormulaId::ALL {
            let s = serde_json::to_string(&f).unwrap();
            assert_eq!(s, format!("\"{}\"", f.as_str()));
            assert_eq!(serde_json::from_str::<FormulaId>(&s).unwrap(), f);
            assert_eq!(f.as_str().parse::<FormulaId>().unwrap(), f);
        }
    }
}
