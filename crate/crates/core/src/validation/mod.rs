//! ε-sweeps of approximate kernels against reference solutions, log-log rate
//! fits, uniformity ratios, and the acceptance and invariant suites.

pub mod acceptance;
pub mod invariants;
mod output;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use output::{write_csv, write_json, CSV_HEADER};

use crate::asymptotics::{AsymptoticOptions, Evaluator, FormulaId};
use crate::error::{Error, Result};
use crate::geometry::{
    make_pair_grid, DomainSpec, GridPair, GridPolicy, Point, PointClass, Stratum,
};
use crate::numerics::linear_fit;
use crate::oracle::{reference_for, Oracle};

/// What the approximate kernel is compared against.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "formula", rename_all = "kebab-case")]
pub enum Reference {
    /// The matching reference solver for the configuration.
    #[default]
    Oracle,
    /// Another approximate kernel (for simplified-vs-full comparisons).
    Formula(FormulaId),
}

/// Restricts the pairs entering a sweep. Distances are to the nearest hole
/// center (the origin for configurations without holes).
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PairFilter {
    #[default]
    All,
    /// Both points at distance ≥ `min`.
    AwayFromHoles { min: f64 },
    /// Both points at distance > `factor`·ε.
    AwayFromHolesScaled { factor: f64 },
    /// At least one point at distance ≤ `factor`·ε.
    NearHole { factor: f64 },
    /// Both points at distance < `max`.
    CloseToHoles { max: f64 },
}

/// How the pointwise discrepancy is normalized before taking sup and mean.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ErrorScale {
    #[default]
    Absolute,
    /// Divided by ε / min(|x|, |y|).
    FarPlanar,
    /// Divided by ε² / ((|x||y|)² min(|x|, |y|)).
    FarSpatial,
    /// Divided by max(|x|, |y|).
    Near,
}

/// Row selector for fits: a single stratum or the union of all pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RowStratum {
    All,
    Interior,
    NearOuter,
    NearHole,
}

impl RowStratum {
    pub fn as_str(&self) -> &'static str {
        match self {
            RowStratum::All => "all",
            RowStratum::Interior => "interior",
            RowStratum::NearOuter => "near-outer",
            RowStratum::NearHole => "near-hole",
        }
    }
}

impl From<Stratum> for RowStratum {
    fn from(s: Stratum) -> Self {
        match s {
            Stratum::Interior => RowStratum::Interior,
            Stratum::NearOuter => RowStratum::NearOuter,
            Stratum::NearHole => RowStratum::NearHole,
        }
    }
}

impl std::fmt::Display for RowStratum {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for RowStratum {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        [
            RowStratum::All,
            RowStratum::Interior,
            RowStratum::NearOuter,
            RowStratum::NearHole,
        ]
        .into_iter()
        .find(|r| r.as_str() == s)
        .ok_or_else(|| Error::InvalidSpec(format!("unknown stratum {s}")))
    }
}

/// A full ε-sweep description.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub formula: FormulaId,
    /// Configuration family; its `epsilon` is replaced by each sweep value.
    pub domain: DomainSpec,
    pub eps: Vec<f64>,
    #[serde(default)]
    pub grid: GridPolicy,
    #[serde(default)]
    pub options: AsymptoticOptions,
    #[serde(default)]
    pub reference: Reference,
    #[serde(default)]
    pub filter: PairFilter,
    #[serde(default)]
    pub scale: ErrorScale,
    /// Re-estimate discretized oracle accuracy by refinement at a few pairs.
    #[serde(default)]
    pub estimate_accuracy: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorRow {
    pub eps: f64,
    pub stratum: RowStratum,
    pub n_pairs: usize,
    pub sup_err: f64,
    pub mean_err: f64,
    pub argmax_x: Vec<f64>,
    pub argmax_y: Vec<f64>,
}

/// Reference accuracy for one ε of a sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReferenceRecord {
    pub eps: f64,
    pub method: String,
    pub accuracy: f64,
    pub resolution: Vec<(String, f64)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorTable {
    pub formula: FormulaId,
    pub reference: Vec<ReferenceRecord>,
    pub scale: ErrorScale,
    /// Rows sorted by descending ε, then stratum (all first).
    pub rows: Vec<ErrorRow>,
}

impl ErrorTable {
    pub fn select(&self, stratum: RowStratum) -> Vec<&ErrorRow> {
        self.rows.iter().filter(|r| r.stratum == stratum).collect()
    }

    pub fn row(&self, eps: f64, stratum: RowStratum) -> Option<&ErrorRow> {
        self.rows
            .iter()
            .find(|r| r.stratum == stratum && r.eps == eps)
    }
}

/// The order a remainder is expected to follow.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ExpectedOrder {
    /// Slope within [lo, hi].
    Power { order: f64, lo: f64, hi: f64 },
    /// Faster than any power of ε.
    SuperPolynomial,
}

impl ExpectedOrder {
    pub fn power(order: f64, lo: f64, hi: f64) -> Self {
        ExpectedOrder::Power { order, lo, hi }
    }

    /// The remainder order of `formula` on the `all` stratum of a default
    /// grid, with the band used by the acceptance suite. `None` for the
    /// unperturbed kernels and the simplified hole formulas, whose error is
    /// only bounded on their constraint sets.
    pub fn for_formula(formula: FormulaId, spec: &DomainSpec) -> Option<Self> {
        use FormulaId as F;
        Some(match formula {
            F::HadamardClassical
            | F::MixedOuterDHoleN
            | F::MixedOuterNHoleD
            | F::MultiInclusion3d => Self::power(2.0, 1.7, 2.3),
            F::HadamardUniform | F::DirichletHole3d => Self::power(1.0, 0.8, 1.3),
            F::DirichletHole2d => Self::power(1.0, 0.8, 1.2),
            F::ThinRod => ExpectedOrder::SuperPolynomial,
            F::TruncatedCone => {
                let DomainSpec::TruncatedSector { alpha, .. } = spec else {
                    return None;
                };
                let order = 2.0 * std::f64::consts::PI / alpha;
                if (alpha - std::f64::consts::FRAC_PI_2).abs() < 1e-12 {
                    Self::power(order, 3.5, 4.5)
                } else if (alpha - 0.75 * std::f64::consts::PI).abs() < 1e-12 {
                    Self::power(order, 2.2, 3.1)
                } else {
                    Self::power(order, order - 0.5, order + 0.5)
                }
            }
            F::UnitDiskGreen
            | F::UnitBallGreen
            | F::CorollaryFar2d
            | F::CorollaryFar3d
            | F::CorollaryNear2d
            | F::CorollaryNear3d => return None,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateFit {
    pub stratum: RowStratum,
    pub slope: f64,
    pub intercept: f64,
    pub correlation: f64,
    pub expected: ExpectedOrder,
    /// Slopes between consecutive ε (coarse to fine).
    pub local_slopes: Vec<f64>,
    /// Correlation of log error against 1/ε.
    pub inverse_eps_correlation: f64,
    pub pass: bool,
}

pub fn validate_eps(eps: &[f64]) -> Result<Vec<f64>> {
    if eps.len() < 3 {
        return Err(Error::InvalidEps("eps list must have length ≥ 3".into()));
    }
    if eps.iter().any(|e| !(e.is_finite() && *e > 0.0)) {
        return Err(Error::InvalidEps(format!(
            "eps values must be positive, got {eps:?}"
        )));
    }
    let mut sorted = eps.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
    for w in sorted.windows(2) {
        if ((w[0] / w[1]) - 2.0).abs() > 1e-9 {
            return Err(Error::InvalidEps(format!(
                "eps list must be dyadic, got {eps:?}"
            )));
        }
    }
    Ok(sorted)
}

fn hole_distance(spec: &DomainSpec, p: &Point) -> f64 {
    let centers = spec.hole_centers();
    let c = p.coords();
    if centers.is_empty() {
        return p.norm();
    }
    centers
        .iter()
        .map(|h| {
            c.iter()
                .zip(h.iter())
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt()
        })
        .fold(f64::INFINITY, f64::min)
}

fn keep(filter: &PairFilter, spec: &DomainSpec, pair: &GridPair) -> bool {
    let eps = spec.epsilon();
    let dx = hole_distance(spec, &pair.x.point);
    let dy = hole_distance(spec, &pair.y.point);
    match *filter {
        PairFilter::All => true,
        PairFilter::AwayFromHoles { min } => dx.min(dy) >= min,
        PairFilter::AwayFromHolesScaled { factor } => dx.min(dy) > factor * eps,
        PairFilter::NearHole { factor } => dx.min(dy) <= factor * eps * (1.0 + 1e-9),
        PairFilter::CloseToHoles { max } => dx.max(dy) < max,
    }
}

fn bound(scale: ErrorScale, spec: &DomainSpec, x: &Point, y: &Point) -> f64 {
    let eps = spec.epsilon();
    let (a, b) = (hole_distance(spec, x), hole_distance(spec, y));
    match scale {
        ErrorScale::Absolute => 1.0,
        ErrorScale::FarPlanar => eps / a.min(b),
        ErrorScale::FarSpatial => eps * eps / ((a * b).powi(2) * a.min(b)),
        ErrorScale::Near => a.max(b),
    }
}

/// Smallest distance from a grid point to the boundary, for sizing solvers.
fn min_distance(spec: &DomainSpec, policy: &GridPolicy, pairs: &[GridPair]) -> f64 {
    let eps = spec.epsilon();
    let rod = match spec {
        DomainSpec::ThinRodStrip { width, .. } => *width,
        _ => 1.0,
    };
    pairs
        .iter()
        .flat_map(|p| [p.x.class, p.y.class])
        .map(|c| match c {
            PointClass::Interior => policy.interior_margin,
            PointClass::NearOuter { offset } | PointClass::NearHole { offset, .. } => {
                offset * eps * rod
            }
        })
        .fold(f64::INFINITY, f64::min)
}

fn probe_pairs(pairs: &[(Point, Point)]) -> Vec<(Point, Point)> {
    let n = pairs.len();
    [0, n / 3, 2 * n / 3, n.saturating_sub(1)]
        .iter()
        .map(|&i| pairs[i])
        .collect()
}

struct PairResult {
    stratum: RowStratum,
    err: f64,
    x: Point,
    y: Point,
}

fn aggregate(eps: f64, stratum: RowStratum, results: &[&PairResult]) -> ErrorRow {
    let mut sup = -1.0;
    let mut arg = (Vec::new(), Vec::new());
    let mut sum = 0.0;
    for r in results {
        sum += r.err;
        if r.err > sup {
            sup = r.err;
            arg = (r.x.coords().to_vec(), r.y.coords().to_vec());
        }
    }
    ErrorRow {
        eps,
        stratum,
        n_pairs: results.len(),
        sup_err: sup.max(0.0),
        mean_err: if results.is_empty() {
            0.0
        } else {
            sum / results.len() as f64
        },
        argmax_x: arg.0,
        argmax_y: arg.1,
    }
}

/// Sup and mean errors of `spec.formula` per (ε, stratum), plus an `all` row
/// per ε. Pairs are evaluated in parallel; the result is independent of
/// scheduling.
pub fn error_sweep(spec: &SweepSpec) -> Result<ErrorTable> {
    let eps_list = validate_eps(&spec.eps)?;
    let mut rows = Vec::new();
    let mut records = Vec::new();
    for &eps in &eps_list {
        let domain = spec.domain.with_epsilon(eps)?;
        let grid = make_pair_grid(&domain, &spec.grid)?;
        let kept: Vec<GridPair> = grid
            .pairs
            .iter()
            .filter(|p| keep(&spec.filter, &domain, p))
            .copied()
            .collect();
        if kept.is_empty() {
            return Err(Error::EmptyGrid);
        }
        let approx = Evaluator::new(spec.formula, &domain, spec.options)?;
        let pairs: Vec<(Point, Point)> = kept.iter().map(|p| (p.x.point, p.y.point)).collect();

        let reference_values: Vec<Result<f64>> = match spec.reference {
            Reference::Oracle => {
                let mut oracle = reference_for(
                    spec.formula,
                    &domain,
                    min_distance(&domain, &spec.grid, &kept),
                )?;
                if spec.estimate_accuracy {
                    oracle.estimate_accuracy(&probe_pairs(&pairs))?;
                }
                let info = oracle.info();
                records.push(ReferenceRecord {
                    eps,
                    method: info.method.as_str().to_string(),
                    accuracy: info.accuracy,
                    resolution: info.resolution,
                });
                batch_by_source(oracle.as_ref(), &pairs)
            }
            Reference::Formula(other) => {
                let full = Evaluator::new(other, &domain, spec.options)?;
                records.push(ReferenceRecord {
                    eps,
                    method: other.as_str().to_string(),
                    accuracy: 0.0,
                    resolution: Vec::new(),
                });
                pairs
                    .par_iter()
                    .map(|(x, y)| full.eval(x, y).map(|k| k.value))
                    .collect()
            }
        };

        let results: Vec<PairResult> = kept
            .par_iter()
            .zip(reference_values.into_par_iter())
            .map(|(p, reference)| {
                let (x, y) = (p.x.point, p.y.point);
                let locate = |e: Error| e.at_pair(x.coords(), y.coords());
                let exact = reference.map_err(locate)?;
                let value = approx.eval(&x, &y).map_err(locate)?.value;
                let err = (value - exact).abs() / bound(spec.scale, &domain, &x, &y);
                Ok(PairResult {
                    stratum: p.stratum.into(),
                    err,
                    x,
                    y,
                })
            })
            .collect::<Result<Vec<_>>>()?;

        let mut by: BTreeMap<RowStratum, Vec<&PairResult>> = BTreeMap::new();
        for r in &results {
            by.entry(RowStratum::All).or_default().push(r);
            by.entry(r.stratum).or_default().push(r);
        }
        for (stratum, list) in by {
            rows.push(aggregate(eps, stratum, &list));
        }
    }
    Ok(ErrorTable {
        formula: spec.formula,
        reference: records,
        scale: spec.scale,
        rows,
    })
}

/// Evaluates the oracle with pairs grouped by source point, in parallel over
/// sources, and returns values in the original order.
pub fn batch_by_source(oracle: &dyn Oracle, pairs: &[(Point, Point)]) -> Vec<Result<f64>> {
    let key = |p: &Point| p.coords().iter().map(|c| c.to_bits()).collect::<Vec<_>>();
    let mut groups: BTreeMap<Vec<u64>, Vec<usize>> = BTreeMap::new();
    for (i, (_, y)) in pairs.iter().enumerate() {
        groups.entry(key(y)).or_default().push(i);
    }
    let groups: Vec<Vec<usize>> = groups.into_values().collect();
    let evaluated: Vec<(Vec<usize>, Vec<Result<f64>>)> = groups
        .into_par_iter()
        .map(|idx| {
            let batch: Vec<(Point, Point)> = idx.iter().map(|&i| pairs[i]).collect();
            let values = oracle.green_batch(&batch);
            (idx, values)
        })
        .collect();
    let mut out: Vec<Option<Result<f64>>> = vec![None; pairs.len()];
    for (idx, values) in evaluated {
        for (i, v) in idx.into_iter().zip(values) {
            out[i] = Some(v);
        }
    }
    out.into_iter()
        .map(|v| v.expect("every pair is in one group"))
        .collect()
}

/// Least-squares slope of log sup-error on log ε for the selected rows.
pub fn fit_rate(
    table: &ErrorTable,
    stratum: RowStratum,
    expected: ExpectedOrder,
) -> Result<RateFit> {
    let rows = table.select(stratum);
    if rows.is_empty() {
        return Err(Error::MissingStratum(stratum.to_string()));
    }
    if rows.iter().all(|r| r.sup_err == 0.0) {
        return Err(Error::ZeroError);
    }
    let positive: Vec<&&ErrorRow> = rows.iter().filter(|r| r.sup_err > 0.0).collect();
    if positive.len() < 3 {
        return Err(Error::InsufficientData {
            needed: 3,
            found: positive.len(),
        });
    }
    let log_eps: Vec<f64> = positive.iter().map(|r| r.eps.ln()).collect();
    let log_err: Vec<f64> = positive.iter().map(|r| r.sup_err.ln()).collect();
    let inv_eps: Vec<f64> = positive.iter().map(|r| 1.0 / r.eps).collect();
    let (slope, intercept, correlation) = linear_fit(&log_eps, &log_err);
    let (_, _, inverse_eps_correlation) = linear_fit(&inv_eps, &log_err);
    let local_slopes: Vec<f64> = (1..positive.len())
        .map(|i| (log_err[i] - log_err[i - 1]) / (log_eps[i] - log_eps[i - 1]))
        .collect();
    let pass = match expected {
        ExpectedOrder::Power { lo, hi, .. } => slope >= lo && slope <= hi,
        ExpectedOrder::SuperPolynomial => {
            local_slopes.windows(2).all(|w| w[1] > w[0]) && inverse_eps_correlation <= -0.99
        }
    };
    Ok(RateFit {
        stratum,
        slope,
        intercept,
        correlation,
        expected,
        local_slopes,
        inverse_eps_correlation,
        pass,
    })
}

/// Per ε: sup error over the near-boundary strata divided by the interior sup.
pub fn uniformity_ratio(table: &ErrorTable) -> Result<Vec<(f64, f64)>> {
    let interior = table.select(RowStratum::Interior);
    if interior.is_empty() {
        return Err(Error::MissingStratum(RowStratum::Interior.to_string()));
    }
    let mut out = Vec::new();
    let mut any_near = false;
    for row in interior {
        let near = [RowStratum::NearOuter, RowStratum::NearHole]
            .iter()
            .filter_map(|s| table.row(row.eps, *s))
            .map(|r| r.sup_err)
            .fold(None, |acc: Option<f64>, v| {
                Some(acc.map_or(v, |a| a.max(v)))
            });
        if let Some(near) = near {
            any_near = true;
            out.push((row.eps, near / row.sup_err));
        }
    }
    if !any_near {
        return Err(Error::MissingStratum("near-outer or near-hole".into()));
    }
    Ok(out)
}

/// Sup errors on the sweep grid and on a grid with twice the angular and
/// interior samples, for one (ε, stratum) row.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridStability {
    pub eps: f64,
    pub stratum: RowStratum,
    pub sup_err: f64,
    pub sup_err_doubled: f64,
    pub relative_change: f64,
    /// Relative change below [`GRID_STABILITY_LIMIT`].
    pub stable: bool,
}

pub const GRID_STABILITY_LIMIT: f64 = 0.2;

/// Reruns the sweep on a doubled grid and compares the sup errors row by row.
pub fn grid_doubling(spec: &SweepSpec, table: &ErrorTable) -> Result<Vec<GridStability>> {
    let mut dense = spec.clone();
    dense.grid.angles *= 2;
    dense.grid.interior_points *= 2;
    let doubled = error_sweep(&dense)?;
    Ok(table
        .rows
        .iter()
        .filter_map(|r| {
            let d = doubled.row(r.eps, r.stratum)?;
            let relative_change = if r.sup_err > 0.0 {
                (d.sup_err - r.sup_err).abs() / r.sup_err
            } else {
                0.0
            };
            Some(GridStability {
                eps: r.eps,
                stratum: r.stratum,
                sup_err: r.sup_err,
                sup_err_doubled: d.sup_err,
                relative_change,
                stable: relative_change < GRID_STABILITY_LIMIT,
            })
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synthetic(f: impl Fn(f64) -> f64) -> ErrorTable {
        let rows = [0.16, 0.08, 0.04, 0.02]
            .iter()
            .map(|&e| ErrorRow {
                eps: e,
                stratum: RowStratum::All,
                n_pairs: 1,
                sup_err: f(e),
                mean_err: f(e),
                argmax_x: vec![],
                argmax_y: vec![],
            })
            .collect();
        ErrorTable {
            formula: FormulaId::UnitDiskGreen,
            reference: vec![],
            scale: ErrorScale::Absolute,
            rows,
        }
    }

    const ORDER_TWO: ExpectedOrder = ExpectedOrder::Power {
        order: 2.0,
        lo: 1.7,
        hi: 2.3,
    };

    #[test]
    fn power_law_exponents_are_recovered() {
        let fit = fit_rate(&synthetic(|e| e * e), RowStratum::All, ORDER_TWO).unwrap();
        assert!((fit.slope - 2.0).abs() < 1e-12 && fit.pass);
        let fit = fit_rate(&synthetic(|e| 3.0 * e), RowStratum::All, ORDER_TWO).unwrap();
        assert!((fit.slope - 1.0).abs() < 1e-12 && !fit.pass);
        assert!((fit.intercept - 3f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn exponential_decay_is_super_polynomial() {
        let fit = fit_rate(
            &synthetic(|e| (-1.0 / e).exp()),
            RowStratum::All,
            ExpectedOrder::SuperPolynomial,
        )
        .unwrap();
        assert!(fit.pass, "{fit:?}");
        let fit = fit_rate(
            &synthetic(|e| e.powi(3)),
            RowStratum::All,
            ExpectedOrder::SuperPolynomial,
        )
        .unwrap();
        assert!(!fit.pass);
    }

    #[test]
    fn degenerate_tables_are_reported() {
        assert_eq!(
            fit_rate(&synthetic(|_| 0.0), RowStratum::All, ORDER_TWO).unwrap_err(),
            Error::ZeroError
        );
        let mut t = synthetic(|e| e);
        t.rows.truncate(2);
        assert!(matches!(
            fit_rate(&t, RowStratum::All, ORDER_TWO),
            Err(Error::InsufficientData { .. })
        ));
        assert!(matches!(
            fit_rate(&t, RowStratum::Interior, ORDER_TWO),
            Err(Error::MissingStratum(_))
        ));
        assert!(matches!(
            uniformity_ratio(&t),
            Err(Error::MissingStratum(_))
        ));
    }

    #[test]
    fn eps_lists_are_checked() {
        assert_eq!(
            validate_eps(&[0.1, 0.05]).unwrap_err(),
            Error::InvalidEps("eps list must have length ≥ 3".into())
        );
        assert!(validate_eps(&[0.1, 0.06, 0.03]).is_err());
        assert_eq!(
            validate_eps(&[0.05, 0.2, 0.1]).unwrap(),
            vec![0.2, 0.1, 0.05]
        );
    }
}
