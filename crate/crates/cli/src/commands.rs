use std::io::Write;
use std::path::Path;

use perturbed_green::asymptotics::{Evaluator, FormulaId, KernelEval};
use perturbed_green::oracle::{reference_at, OracleMethod};
use perturbed_green::validation::acceptance::{run_criterion, AcceptanceConfig, CRITERIA};
use perturbed_green::validation::{
    error_sweep, fit_rate, grid_doubling, uniformity_ratio, write_csv, write_json, ErrorTable,
    ExpectedOrder, GridStability, RateFit, ReferenceRecord, RowStratum, SweepSpec,
};
use perturbed_green::{DomainSpec, Point};
use serde::{Deserialize, Serialize};

use crate::config::{Command, RunConfig};
use crate::Failure;

/// Reference value printed by `oracle`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub value: f64,
    pub method: OracleMethod,
    pub accuracy: f64,
    pub resolution: Vec<(String, f64)>,
    pub formula: FormulaId,
    pub x: Point,
    pub y: Point,
}

/// One pass/fail line of a report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub check: String,
    pub value: f64,
    pub limit: String,
    pub pass: bool,
}

/// `report` output for a single configured sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub formula: FormulaId,
    pub domain: DomainSpec,
    pub eps: Vec<f64>,
    pub summary: Vec<SummaryRow>,
    pub fit: RateFit,
    pub uniformity_ratio: Option<Vec<(f64, f64)>>,
    pub grid_stability: Vec<GridStability>,
    pub reference: Vec<ReferenceRecord>,
    pub pass: bool,
}

/// One criterion in a suite report. Run times are left out so that reports
/// are reproducible byte for byte.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriterionRecord {
    pub id: u8,
    pub title: String,
    pub pass: bool,
    pub summary: String,
    pub fits: Vec<RateFit>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub criteria: Vec<CriterionRecord>,
    pub pass: bool,
}

pub fn run(cfg: &RunConfig) -> Result<(), Failure> {
    match cfg.command.unwrap_or(Command::Eval) {
        Command::Eval => eval(cfg),
        Command::Oracle => oracle(cfg),
        Command::Sweep => sweep(cfg),
        Command::Rates => rates(cfg),
        Command::Report => report(cfg),
    }
}

/// Writes to `path` through a temporary file in the same directory, or to
/// stdout.
fn emit(path: Option<&Path>, bytes: &[u8]) -> Result<(), Failure> {
    let io = |e: std::io::Error| Failure::Config(format!("cannot write output: {e}"));
    match path {
        None => std::io::stdout().write_all(bytes).map_err(io),
        Some(p) => {
            let dir = match p.parent() {
                Some(d) if !d.as_os_str().is_empty() => d,
                _ => Path::new("."),
            };
            let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
            tmp.write_all(bytes).map_err(io)?;
            tmp.persist(p).map_err(|e| io(e.error))?;
            Ok(())
        }
    }
}

fn json<T: Serialize>(value: &T) -> Result<Vec<u8>, Failure> {
    let mut buf = Vec::new();
    write_json(value, &mut buf)?;
    Ok(buf)
}

fn eval(cfg: &RunConfig) -> Result<(), Failure> {
    let spec = cfg.domain()?;
    let formula = cfg.formula()?;
    let (x, y) = (cfg.point("x")?, cfg.point("y")?);
    let evaluator = Evaluator::new(formula, &spec, cfg.options.unwrap_or_default())?;
    let k: KernelEval = evaluator.eval(&x, &y)?;
    emit(cfg.output.as_deref(), &json(&k)?)
}

fn oracle(cfg: &RunConfig) -> Result<(), Failure> {
    let spec = cfg.domain()?;
    // the formula only selects the boundary-value problem
    let formula = match cfg.formula {
        Some(f) => f,
        None => *FormulaId::ALL
            .iter()
            .find(|f| f.accepts(&spec))
            .ok_or_else(|| Failure::Config("no formula applies to this domain".into()))?,
    };
    let (x, y) = (cfg.point("x")?, cfg.point("y")?);
    let mut oracle = reference_at(formula, &spec, &[x, y])?;
    let value = oracle.green(&x, &y)?;
    if cfg.estimate_accuracy.unwrap_or(true) {
        oracle.estimate_accuracy(&[(x, y)])?;
    }
    let info = oracle.info();
    let report = OracleReport {
        value,
        method: info.method,
        accuracy: info.accuracy,
        resolution: info.resolution,
        formula,
        x,
        y,
    };
    emit(cfg.output.as_deref(), &json(&report)?)
}

fn sweep_spec(cfg: &RunConfig) -> Result<SweepSpec, Failure> {
    let eps = cfg.eps()?;
    perturbed_green::validation::validate_eps(&eps)?;
    Ok(SweepSpec {
        formula: cfg.formula()?,
        domain: cfg.domain()?,
        eps,
        grid: cfg.grid(),
        options: cfg.options.unwrap_or_default(),
        reference: cfg.reference.unwrap_or_default(),
        filter: cfg.filter.unwrap_or_default(),
        scale: cfg.scale.unwrap_or_default(),
        estimate_accuracy: cfg.estimate_accuracy.unwrap_or(false),
    })
}

fn expected(cfg: &RunConfig, spec: &SweepSpec) -> Result<ExpectedOrder, Failure> {
    cfg.expected
        .or_else(|| ExpectedOrder::for_formula(spec.formula, &spec.domain))
        .ok_or_else(|| {
            Failure::Config(format!(
                "{} has no default expected order; set `expected`",
                spec.formula
            ))
        })
}

fn sweep(cfg: &RunConfig) -> Result<(), Failure> {
    let spec = sweep_spec(cfg)?;
    let table = error_sweep(&spec)?;
    let mut buf = Vec::new();
    write_csv(&table, &mut buf)?;
    emit(cfg.output.as_deref(), &buf)
}

fn fitted(cfg: &RunConfig) -> Result<(SweepSpec, ErrorTable, RateFit), Failure> {
    let spec = sweep_spec(cfg)?;
    let order = expected(cfg, &spec)?;
    let table = error_sweep(&spec)?;
    let fit = fit_rate(&table, cfg.stratum.unwrap_or(RowStratum::All), order)?;
    Ok((spec, table, fit))
}

fn rates(cfg: &RunConfig) -> Result<(), Failure> {
    let (_, _, fit) = fitted(cfg)?;
    emit(cfg.output.as_deref(), &json(&fit)?)?;
    if fit.pass {
        Ok(())
    } else {
        Err(Failure::Acceptance(format!(
            "{} slope {:.3} is outside the expected band",
            fit.stratum, fit.slope
        )))
    }
}

/// Human-readable lines go to stdout when the JSON goes to a file, and to
/// stderr otherwise.
fn say(cfg: &RunConfig, line: &str) {
    if cfg.output.is_some() {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
}

fn band(e: &ExpectedOrder) -> String {
    match e {
        ExpectedOrder::Power { lo, hi, .. } => format!("[{lo}, {hi}]"),
        ExpectedOrder::SuperPolynomial => {
            "increasing local slopes, corr(log err, 1/eps) <= -0.99".into()
        }
    }
}

fn report(cfg: &RunConfig) -> Result<(), Failure> {
    if cfg.formula.is_some() {
        sweep_report(cfg)
    } else {
        suite_report(cfg)
    }
}

fn sweep_report(cfg: &RunConfig) -> Result<(), Failure> {
    let (spec, table, fit) = fitted(cfg)?;
    let row = SummaryRow {
        check: format!("{} {} slope", spec.formula, fit.stratum),
        value: fit.slope,
        limit: band(&fit.expected),
        pass: fit.pass,
    };
    let out = SweepReport {
        formula: spec.formula,
        domain: spec.domain.clone(),
        eps: table
            .rows
            .iter()
            .filter(|r| r.stratum == RowStratum::All)
            .map(|r| r.eps)
            .collect(),
        summary: vec![row],
        fit: fit.clone(),
        uniformity_ratio: uniformity_ratio(&table).ok(),
        grid_stability: grid_doubling(&spec, &table)?,
        reference: table.reference.clone(),
        pass: fit.pass,
    };
    emit(cfg.output.as_deref(), &json(&out)?)?;
    for r in &out.summary {
        say(
            cfg,
            &format!(
                "{} {}: {:.3} (limit {})",
                if r.pass { "PASS" } else { "FAIL" },
                r.check,
                r.value,
                r.limit
            ),
        );
    }
    if out.pass {
        Ok(())
    } else {
        Err(Failure::Acceptance("a pass flag is false".into()))
    }
}

fn suite_report(cfg: &RunConfig) -> Result<(), Failure> {
    let ids = cfg.criteria.clone().unwrap_or_else(|| CRITERIA.to_vec());
    if let Some(bad) = ids.iter().find(|i| !CRITERIA.contains(i)) {
        return Err(Failure::Config(format!("unknown criterion {bad}")));
    }
    let acfg = AcceptanceConfig {
        seed: cfg.seed.unwrap_or(0),
    };
    let mut criteria = Vec::new();
    for id in ids {
        let o = run_criterion(id, &acfg);
        say(
            cfg,
            &format!(
                "criterion {:>2} {} {}: {}",
                o.id,
                if o.pass { "PASS" } else { "FAIL" },
                o.title,
                o.summary
            ),
        );
        criteria.push(CriterionRecord {
            id: o.id,
            title: o.title,
            pass: o.pass,
            summary: o.summary,
            fits: o.fits,
            notes: o.notes,
        });
    }
    let pass = criteria.iter().all(|c| c.pass);
    emit(
        cfg.output.as_deref(),
        &json(&SuiteReport { criteria, pass })?,
    )?;
    if pass {
        Ok(())
    } else {
        Err(Failure::Acceptance("at least one criterion failed".into()))
    }
}
