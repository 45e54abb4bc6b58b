//! Convergence studies, scheme comparisons and discontinuity location.

use std::time::{Duration, Instant};

use rayon::prelude::*;

use super::norms::{error_norms, fill_orders, ErrorReport};
use super::problems::{initialize, ProblemSpec, ReferenceKind};
use super::reference::reference_solution;
use crate::error::{Result, SolverError};
use crate::euler::ConservedState;
use crate::timestepper::{integrate, Grid1D, Minima, RunResult, SchemeConfig, StepControl};

/// Initializes `problem` on `n` cells and integrates to its final time.
pub fn run_problem(
    problem: &ProblemSpec,
    n: usize,
    cfg: &SchemeConfig,
    ctrl: &StepControl,
) -> Result<RunResult> {
    let field = initialize(problem, n)?;
    integrate(&field, problem.t_final, cfg, ctrl, &problem.gas, |_, _| {})
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub n: usize,
    pub report: ErrorReport,
    pub steps: usize,
    pub wall_time: Duration,
}

/// Runs each `n` with `dt = w_hat_1 h^(5/3) / max(|u| + a)` and measures the
/// error against the analytic solution. Resolutions run in parallel.
pub fn convergence_study(
    problem: &ProblemSpec,
    cfg: &SchemeConfig,
    ns: &[usize],
) -> Result<Vec<ConvergenceRow>> {
    let ctrl = StepControl::new(cfg.limiter_params.w_hat_1)?.with_accuracy_scaling(true);
    convergence_study_with(problem, cfg, &ctrl, ns)
}

/// [`convergence_study`] with an explicit step control.
pub fn convergence_study_with(
    problem: &ProblemSpec,
    cfg: &SchemeConfig,
    ctrl: &StepControl,
    ns: &[usize],
) -> Result<Vec<ConvergenceRow>> {
    if problem.reference != ReferenceKind::Analytic {
        return Err(SolverError::InvalidArgument(format!(
            "problem '{}' has no analytic solution",
            problem.name
        )));
    }
    let mut rows = ns
        .par_iter()
        .map(|&n| {
            let start = Instant::now();
            let run = run_problem(problem, n, cfg, ctrl)?;
            let wall_time = start.elapsed();
            let exact = reference_solution(problem, n)?;
            Ok(ConvergenceRow {
                n,
                report: error_norms(&run.field, &exact)?,
                steps: run.steps,
                wall_time,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut reports: Vec<_> = rows.iter().map(|r| r.report).collect();
    fill_orders(&mut reports);
    for (row, rep) in rows.iter_mut().zip(reports) {
        row.report = rep;
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SchemeRun {
    pub config: SchemeConfig,
    pub report: ErrorReport,
    pub cell_minima: Minima,
    pub stage_minima: Minima,
    pub steps: usize,
    pub wall_time: Duration,
    pub cells: Vec<ConservedState>,
}

/// One run per configuration at its default CFL, all measured against the
/// same reference.
pub fn compare_schemes(
    problem: &ProblemSpec,
    n: usize,
    configs: &[SchemeConfig],
) -> Result<Vec<SchemeRun>> {
    let ctrls: Vec<_> = configs.iter().map(StepControl::for_config).collect();
    compare_schemes_with(problem, n, configs, &ctrls)
}

/// [`compare_schemes`] with one step control per configuration.
pub fn compare_schemes_with(
    problem: &ProblemSpec,
    n: usize,
    configs: &[SchemeConfig],
    ctrls: &[StepControl],
) -> Result<Vec<SchemeRun>> {
    if ctrls.len() != configs.len() {
        return Err(SolverError::SizeMismatch {
            expected: configs.len(),
            found: ctrls.len(),
        });
    }
    let exact = reference_solution(problem, n)?;
    configs
        .iter()
        .zip(ctrls)
        .map(|(cfg, ctrl)| {
            let start = Instant::now();
            let run = run_problem(problem, n, cfg, ctrl)?;
            let wall_time = start.elapsed();
            Ok(SchemeRun {
                config: *cfg,
                report: error_norms(&run.field, &exact)?,
                cell_minima: run.cell_minima(),
                stage_minima: run.stage_minima(),
                steps: run.steps,
                wall_time,
                cells: run.field.cells,
            })
        })
        .collect()
}

/// Position where the density profile first crosses `level` inside
/// `[x_lo, x_hi]`, interpolated linearly between cell centers.
pub fn locate_crossing(
    grid: &Grid1D,
    cells: &[ConservedState],
    level: f64,
    x_lo: f64,
    x_hi: f64,
) -> Option<f64> {
    let xs = grid.centers();
    (0..cells.len().saturating_sub(1))
        .filter(|&j| xs[j] >= x_lo && xs[j + 1] <= x_hi)
        .find_map(|j| {
            let (a, b) = (cells[j].rho - level, cells[j + 1].rho - level);
            if a == 0.0 {
                Some(xs[j])
            } else if a * b < 0.0 {
                Some(xs[j] + grid.h * a / (a - b))
            } else {
                None
            }
        })
}
