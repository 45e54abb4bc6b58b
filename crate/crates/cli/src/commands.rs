use std::io::Write;
use std::path::{Path, PathBuf};

use fvcw::benchmarks::{
    catalog, compare_schemes_with, convergence_study_with, initialize, ReferenceKind,
};
use fvcw::{integrate, Minima, RunResult, StepControl};

use crate::config::{Invocation, RunConfig};
use crate::error::{CliError, Result};
use crate::output::{comparison_table, convergence_table, sci, write_field_csv, write_trace_csv};

fn emit(out: &mut dyn Write, text: &str) -> Result<()> {
    out.write_all(text.as_bytes())
        .map_err(|e| CliError::io("<stdout>", e))
}

pub fn execute(inv: &Invocation, out: &mut dyn Write) -> Result<()> {
    match inv {
        Invocation::ListProblems => emit(out, &list_problems()),
        Invocation::Run(cfg) => emit(out, &with_jobs(cfg, || run(cfg))?),
        Invocation::Converge(cfg) => emit(out, &with_jobs(cfg, || converge(cfg))?),
        Invocation::Compare(cfg) => emit(out, &with_jobs(cfg, || compare(cfg))?),
    }
}

fn with_jobs<T: Send>(cfg: &RunConfig, f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    match cfg.jobs {
        None => f(),
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build()
            .map_err(|e| CliError::Usage(format!("cannot start {j} worker threads: {e}")))?
            .install(f),
    }
}

pub fn list_problems() -> String {
    let mut s = format!(
        "{:>2}  {:<21} {:<13} {:>10} {:>5}  {}\n",
        "id", "name", "domain", "t_final", "n", "title"
    );
    for p in catalog() {
        s.push_str(&format!(
            "{:>2}  {:<21} {:<13} {:>10} {:>5}  {}\n",
            p.id,
            p.name,
            format!("[{}, {}]", p.domain.0, p.domain.1),
            p.t_final,
            p.default_n,
            p.title
        ));
    }
    s
}

/// `dir/stem-t<time>.ext` next to `output`.
pub fn snapshot_path(output: &Path, t: f64) -> PathBuf {
    let stem = output
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let name = match output.extension() {
        Some(ext) => format!("{stem}-t{t}.{}", ext.to_string_lossy()),
        None => format!("{stem}-t{t}"),
    };
    output.with_file_name(name)
}

/// Integrates segment by segment so that every snapshot time is hit exactly.
pub fn run_with_snapshots(
    cfg: &RunConfig,
    mut on_snapshot: impl FnMut(f64, &RunResult) -> Result<()>,
) -> Result<RunResult> {
    let spec = cfg.problem_spec();
    let scheme = cfg.scheme_config();
    let ctrl: StepControl = cfg.step_control();
    let mut field = initialize(&spec, cfg.n)?;
    let mut t = 0.0;
    let mut steps = 0;
    let mut trace = Vec::new();
    let mut stops = cfg.snapshots.clone();
    stops.push(spec.t_final);
    let mut last = None;
    for (k, &stop) in stops.iter().enumerate() {
        let seg = integrate(&field, stop - t, &scheme, &ctrl, &spec.gas, |_, _| {})?;
        trace.extend(seg.trace.iter().map(|r| {
            let mut r = *r;
            r.step += steps;
            r.t += t;
            r
        }));
        steps += seg.steps;
        t = stop;
        field = seg.field.clone();
        let result = RunResult {
            field: seg.field,
            t,
            steps,
            trace: trace.clone(),
        };
        if k + 1 < stops.len() {
            on_snapshot(t, &result)?;
        }
        last = Some(result);
    }
    Ok(last.expect("at least the final time"))
}

fn minima_line(label: &str, m: &Minima) -> String {
    format!("{label}: rho={} e={}", sci(m.rho), sci(m.e))
}

pub fn run(cfg: &RunConfig) -> Result<String> {
    if !cfg.snapshots.is_empty() && cfg.output.is_none() {
        return Err(CliError::Usage("snapshots require an output path".into()));
    }
    let gas = cfg.problem_spec().gas;
    let result = run_with_snapshots(cfg, |t, r| match &cfg.output {
        Some(path) => write_field_csv(&r.field, &gas, &snapshot_path(path, t)),
        None => Ok(()),
    })?;
    if let Some(path) = &cfg.output {
        write_field_csv(&result.field, &gas, path)?;
    }
    if let Some(path) = &cfg.trace {
        write_trace_csv(&result.trace, path)?;
    }
    let rejections: usize = result.trace.iter().map(|r| r.rejections).sum();
    let s = format!(
        "problem={} n={} scheme={} flux={} basis={} limiter={} cfl={}\nt={} steps={} rejected={}\n{}\n{}\n{}\n",
        cfg.problem,
        cfg.n,
        cfg.scheme.name(),
        cfg.flux.name(),
        cfg.basis.name(),
        if cfg.limiter { "on" } else { "off" },
        cfg.cfl,
        result.t,
        result.steps,
        rejections,
        minima_line("final cell minima", &result.field.minima()),
        minima_line("run cell minima", &result.cell_minima()),
        minima_line("run stage minima", &result.stage_minima()),
    );
    Ok(s)
}

pub fn converge(cfg: &RunConfig) -> Result<String> {
    let spec = cfg.problem_spec();
    if spec.reference != ReferenceKind::Analytic {
        return Err(CliError::Usage(format!(
            "converge needs a problem with an analytic solution; '{}' has none",
            spec.name
        )));
    }
    let ctrl = cfg.step_control().with_accuracy_scaling(true);
    let rows = convergence_study_with(&spec, &cfg.scheme_config(), &ctrl, &cfg.ns)?;
    let secs: f64 = rows.iter().map(|r| r.wall_time.as_secs_f64()).sum();
    Ok(format!(
            "problem={} scheme={} limiter={} dt=cfl*h^(5/3)/max(|u|+a) cfl={}\n{}total run time {secs:.2} s\n",
            spec.name,
            cfg.scheme.name(),
            if cfg.limiter { "on" } else { "off" },
            cfg.cfl,
            convergence_table(&rows)
    ))
}

pub fn compare(cfg: &RunConfig) -> Result<String> {
    let spec = cfg.problem_spec();
    let configs: Vec<_> = cfg
        .schemes
        .iter()
        .map(|&s| cfg.scheme_config_for(s))
        .collect();
    let ctrls = vec![cfg.step_control(); configs.len()];
    let runs = compare_schemes_with(&spec, cfg.n, &configs, &ctrls)?;
    if let Some(path) = &cfg.output {
        for r in &runs {
            let field = fvcw::Field::new(
                fvcw::Grid1D::new(spec.domain.0, spec.domain.1, cfg.n)?,
                r.cells.clone(),
                spec.bc,
            )?;
            write_field_csv(
                &field,
                &spec.gas,
                &scheme_path(path, r.config.scheme.name()),
            )?;
        }
    }
    Ok(format!(
        "problem={} n={} flux={} basis={} cfl={}\n{}",
        spec.name,
        cfg.n,
        cfg.flux.name(),
        cfg.basis.name(),
        cfg.cfl,
        comparison_table(&runs)
    ))
}

/// `dir/stem-<scheme>.ext` next to `output`.
pub fn scheme_path(output: &Path, scheme: &str) -> PathBuf {
    let stem = output
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let name = match output.extension() {
        Some(ext) => format!("{stem}-{scheme}.{}", ext.to_string_lossy()),
        None => format!("{stem}-{scheme}"),
    };
    output.with_file_name(name)
}
