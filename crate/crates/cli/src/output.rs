//! CSV files and text tables.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use fvcw::benchmarks::{ConvergenceRow, SchemeRun};
use fvcw::{primitive_from_conserved, Field, GasConstants, PrimitiveState, StepRecord};

use crate::error::{CliError, Result};

pub const FIELD_HEADER: &str = "x,rho,u,p,e";
pub const TRACE_HEADER: &str = "step,t,min_rho,min_e";

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::io(path, e))
}

/// One row per cell centre, 17 significant digits.
pub fn write_field_csv(field: &Field, gas: &GasConstants, path: &Path) -> Result<()> {
    if field.is_empty() {
        return Err(CliError::Usage("cannot write an empty field".into()));
    }
    let mut w = create(path)?;
    let io = |e| CliError::io(path, e);
    writeln!(w, "{FIELD_HEADER}").map_err(io)?;
    for (x, c) in field.grid.centers().into_iter().zip(&field.cells) {
        let p = primitive_from_conserved(c, gas)?;
        writeln!(
            w,
            "{x:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            p.rho,
            p.u,
            p.p,
            c.internal_energy()
        )
        .map_err(io)?;
    }
    w.flush().map_err(io)
}

pub fn write_trace_csv(trace: &[StepRecord], path: &Path) -> Result<()> {
    let mut w = create(path)?;
    let io = |e| CliError::io(path, e);
    writeln!(w, "{TRACE_HEADER}").map_err(io)?;
    for r in trace {
        writeln!(
            w,
            "{},{:.16e},{:.16e},{:.16e}",
            r.step, r.t, r.cells.rho, r.cells.e
        )
        .map_err(io)?;
    }
    w.flush().map_err(io)
}

/// Cell centres and primitive states from a file written by
/// [`write_field_csv`].
pub fn read_field_csv(path: &Path) -> Result<Vec<(f64, PrimitiveState)>> {
    let f = File::open(path).map_err(|e| CliError::io(path, e))?;
    let bad = |line: usize, what: &str| CliError::ConfigFile {
        path: path.to_path_buf(),
        line,
        message: what.to_string(),
    };
    let mut out = Vec::new();
    for (i, line) in BufReader::new(f).lines().enumerate() {
        let line = line.map_err(|e| CliError::io(path, e))?;
        if i == 0 {
            if line != FIELD_HEADER {
                return Err(bad(1, "unexpected header"));
            }
            continue;
        }
        let v: Vec<f64> = line
            .split(',')
            .map(|s| s.parse().map_err(|_| bad(i + 1, "malformed number")))
            .collect::<Result<_>>()?;
        if v.len() != 5 {
            return Err(bad(i + 1, "expected 5 columns"));
        }
        out.push((v[0], PrimitiveState::new(v[1], v[2], v[3])));
    }
    Ok(out)
}

/// Scientific notation with a signed two-digit exponent, `7.802E-04`.
pub fn sci(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    let s = format!("{x:.3E}");
    let (mant, exp) = s.split_once('E').expect("E format");
    let e: i32 = exp.parse().expect("integer exponent");
    format!("{mant}E{}{:02}", if e < 0 { '-' } else { '+' }, e.abs())
}

fn order(o: Option<f64>) -> String {
    o.map_or("-".to_string(), |v| format!("{v:.2}"))
}

pub fn convergence_table(rows: &[ConvergenceRow]) -> String {
    let mut s = format!(
        "{:>6} {:>11} {:>6} {:>11} {:>6} {:>11} {:>6}\n",
        "N", "L1 error", "order", "Linf error", "order", "L2 error", "order"
    );
    for r in rows {
        let e = &r.report;
        s.push_str(&format!(
            "{:>6} {:>11} {:>6} {:>11} {:>6} {:>11} {:>6}\n",
            r.n,
            sci(e.l1),
            order(e.order_l1),
            sci(e.linf),
            order(e.order_linf),
            sci(e.l2),
            order(e.order_l2)
        ));
    }
    s
}

pub fn comparison_table(runs: &[SchemeRun]) -> String {
    let mut s = format!(
        "{:<15} {:>11} {:>11} {:>11} {:>11} {:>11} {:>7} {:>9}\n",
        "scheme", "L1", "L2", "Linf", "min rho", "min e", "steps", "seconds"
    );
    for r in runs {
        s.push_str(&format!(
            "{:<15} {:>11} {:>11} {:>11} {:>11} {:>11} {:>7} {:>9.3}\n",
            r.config.scheme.name(),
            sci(r.report.l1),
            sci(r.report.l2),
            sci(r.report.linf),
            sci(r.stage_minima.rho),
            sci(r.stage_minima.e),
            r.steps,
            r.wall_time.as_secs_f64()
        ));
    }
    s
}
