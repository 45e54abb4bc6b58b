//! Exact and fine-grid reference solutions, with an on-disk cache for the
//! fine-grid runs.
//!
//! Cache files are plain text. The first line is a header
//!
//! ```text
//! # fvcw-reference v1 problem=<name> n=<N> scheme=<s> flux=<f> basis=<b> cfl=<c> t_final=<t>
//! ```
//!
//! followed by `N` lines `rho mom ene` in `{:.17e}` format.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use super::problems::{cell_average, initialize, ProblemSpec, ReferenceKind};
use crate::error::{Result, SolverError};
use crate::euler::ConservedState;
use crate::reconstruction::{SchemeKind, VariableBasis};
use crate::riemann::exact::ExactRiemann;
use crate::riemann::FluxKind;
use crate::timestepper::{integrate, Grid1D, SchemeConfig, StepControl};

pub const CACHE_ENV: &str = "FVCW_CACHE_DIR";
const CACHE_VERSION: &str = "fvcw-reference v1";

/// Configuration of the fine-grid reference runs.
pub fn fine_grid_config() -> SchemeConfig {
    SchemeConfig::new(SchemeKind::WenoJs)
        .with_basis(VariableBasis::Characteristic)
        .with_flux(FluxKind::Hllc)
}

pub const FINE_GRID_CFL: f64 = 0.4;

pub fn cache_dir() -> PathBuf {
    std::env::var_os(CACHE_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("fvcw-reference-cache"))
}

/// Exact cell averages of the advected sine wave at time `t`.
pub fn density_wave_averages(grid: &Grid1D, t: f64, gamma: f64) -> Vec<ConservedState> {
    let pi = std::f64::consts::PI;
    (0..grid.n)
        .map(|j| {
            let (xl, xr) = (grid.edge(j) - t, grid.edge(j + 1) - t);
            let rho = 1.0 + 0.2 * ((pi * xl).cos() - (pi * xr).cos()) / (pi * grid.h);
            ConservedState::new(rho, rho, 1.0 / (gamma - 1.0) + 0.5 * rho)
        })
        .collect()
}

/// Per-cell averages of the reference solution at the problem's final time.
pub fn reference_solution(problem: &ProblemSpec, n: usize) -> Result<Vec<ConservedState>> {
    let (a, b) = problem.domain;
    let grid = Grid1D::new(a, b, n)?;
    let t = problem.t_final;
    match problem.reference {
        ReferenceKind::Analytic => Ok(density_wave_averages(&grid, t, problem.gas.gamma())),
        ReferenceKind::ExactRiemann { x0, left, right } => {
            let rs = ExactRiemann::new(left, right, &problem.gas)?;
            Ok((0..n)
                .map(|j| {
                    cell_average(
                        |x| rs.sample((x - x0) / t),
                        grid.edge(j),
                        grid.h,
                        8,
                        &problem.gas,
                    )
                })
                .collect())
        }
        ReferenceKind::FineGrid { n: n_ref } => {
            if n_ref % n != 0 {
                return Err(SolverError::InvalidArgument(format!(
                    "reference grid of {n_ref} cells does not nest {n} cells"
                )));
            }
            let fine = fine_grid_solution(problem, n_ref)?;
            Ok(aggregate(&fine, n))
        }
        ReferenceKind::None => Err(SolverError::InvalidArgument(format!(
            "problem '{}' has no reference solution",
            problem.name
        ))),
    }
}

/// Averages of consecutive blocks of `fine.len() / n` cells.
pub fn aggregate(fine: &[ConservedState], n: usize) -> Vec<ConservedState> {
    let r = fine.len() / n;
    fine.chunks_exact(r)
        .map(|c| {
            let mut s = ConservedState::ZERO;
            for u in c {
                s += *u;
            }
            s * (1.0 / r as f64)
        })
        .collect()
}

fn header(problem: &ProblemSpec, n: usize) -> String {
    let cfg = fine_grid_config();
    format!(
        "# {CACHE_VERSION} problem={} n={n} scheme={} flux={} basis={} cfl={FINE_GRID_CFL} t_final={}",
        problem.name,
        cfg.scheme.name(),
        cfg.flux.name(),
        cfg.basis.name(),
        problem.t_final
    )
}

fn cache_path(dir: &Path, problem: &ProblemSpec, n: usize) -> PathBuf {
    let cfg = fine_grid_config();
    dir.join(format!(
        "{}-{n}-{}-{}.txt",
        problem.name,
        cfg.scheme.name(),
        cfg.flux.name()
    ))
}

fn read_cache(path: &Path, header: &str, n: usize) -> Option<Vec<ConservedState>> {
    let text = fs::read_to_string(path).ok()?;
    let mut lines = text.lines();
    if lines.next()? != header {
        return None;
    }
    let cells: Vec<ConservedState> = lines
        .map(|l| {
            let v: Vec<f64> = l
                .split_whitespace()
                .map(|s| s.parse().ok())
                .collect::<Option<_>>()?;
            (v.len() == 3).then(|| ConservedState::new(v[0], v[1], v[2]))
        })
        .collect::<Option<_>>()?;
    (cells.len() == n).then_some(cells)
}

fn write_cache(path: &Path, header: &str, cells: &[ConservedState]) -> Result<()> {
    let io = |e: std::io::Error| SolverError::Cache(format!("{}: {e}", path.display()));
    let dir = path.parent().unwrap_or(Path::new("."));
    fs::create_dir_all(dir).map_err(io)?;
    let tmp = dir.join(format!(
        ".{}.{}.tmp",
        path.file_name()
            .and_then(|s| s.to_str())
            .unwrap_or("reference"),
        std::process::id()
    ));
    let mut out = String::with_capacity(cells.len() * 72 + header.len() + 1);
    out.push_str(header);
    out.push('\n');
    for c in cells {
        out.push_str(&format!("{:.17e} {:.17e} {:.17e}\n", c.rho, c.mom, c.ene));
    }
    let mut f = fs::File::create(&tmp).map_err(io)?;
    f.write_all(out.as_bytes()).map_err(io)?;
    f.sync_all().map_err(io)?;
    fs::rename(&tmp, path).map_err(io)
}

static FINE_GRID_LOCK: Mutex<()> = Mutex::new(());

/// Fine-grid solution on `n_ref` cells, read from the cache when present.
pub fn fine_grid_solution(problem: &ProblemSpec, n_ref: usize) -> Result<Vec<ConservedState>> {
    fine_grid_solution_in(&cache_dir(), problem, n_ref)
}

pub fn fine_grid_solution_in(
    dir: &Path,
    problem: &ProblemSpec,
    n_ref: usize,
) -> Result<Vec<ConservedState>> {
    let head = header(problem, n_ref);
    let path = cache_path(dir, problem, n_ref);
    if let Some(c) = read_cache(&path, &head, n_ref) {
        return Ok(c);
    }
    let _guard = FINE_GRID_LOCK.lock().unwrap_or_else(|e| e.into_inner());
    if let Some(c) = read_cache(&path, &head, n_ref) {
        return Ok(c);
    }
    let field = initialize(problem, n_ref)?;
    let cfg = fine_grid_config();
    let ctrl = StepControl::new(FINE_GRID_CFL)?;
    let run = integrate(
        &field,
        problem.t_final,
        &cfg,
        &ctrl,
        &problem.gas,
        |_, _| {},
    )?;
    write_cache(&path, &head, &run.field.cells)?;
    Ok(run.field.cells)
}
