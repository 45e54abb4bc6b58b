//! Command-line grammar and run configuration.
//!
//! Values come from three layers: built-in defaults, an optional flat
//! `key = value` file given with `--config`, and flags. Later layers win.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use fvcw::benchmarks::{problem, ProblemSpec};
use fvcw::{FluxKind, SchemeConfig, SchemeKind, StepControl, VariableBasis};

use crate::error::{CliError, Result};

/// Keys accepted in a config file. Each one has a flag of the same name.
pub const VALID_KEYS: [&str; 13] = [
    "problem",
    "n",
    "scheme",
    "flux",
    "basis",
    "cfl",
    "limiter",
    "output",
    "trace",
    "snapshots",
    "ns",
    "schemes",
    "jobs",
];

pub const DEFAULT_NS: [usize; 6] = [10, 20, 40, 80, 160, 320];
pub const DEFAULT_SCHEMES: [SchemeKind; 3] =
    [SchemeKind::WenoJs, SchemeKind::WenoZ, SchemeKind::Fvcw];

#[derive(Debug, Parser)]
#[command(
    name = "fvcw",
    version,
    about = "Positivity-preserving compact-WENO solver for the 1D Euler equations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one problem to its final time.
    Run(Flags),
    /// Grid refinement study against the analytic solution.
    Converge(Flags),
    /// Run several schemes on one problem and compare errors and minima.
    Compare(Flags),
    /// Print the problem catalog.
    ListProblems,
}

#[derive(Debug, Default, Args)]
struct Flags {
    /// Flat key=value file; flags override its entries.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    #[arg(long)]
    problem: Option<String>,
    /// Number of cells.
    #[arg(long)]
    n: Option<String>,
    /// fvcw, weno-js, weno-z or linear-compact.
    #[arg(long)]
    scheme: Option<String>,
    /// hllc or llf.
    #[arg(long)]
    flux: Option<String>,
    /// characteristic or conservative.
    #[arg(long)]
    basis: Option<String>,
    #[arg(long)]
    cfl: Option<String>,
    /// on or off.
    #[arg(long)]
    limiter: Option<String>,
    /// CSV path for the final field.
    #[arg(long, value_name = "PATH")]
    output: Option<String>,
    /// CSV path for the per-step minima.
    #[arg(long, value_name = "PATH")]
    trace: Option<String>,
    /// Comma-separated output times before the final one.
    #[arg(long)]
    snapshots: Option<String>,
    /// Comma-separated resolutions for `converge`.
    #[arg(long)]
    ns: Option<String>,
    /// Comma-separated schemes for `compare`.
    #[arg(long)]
    schemes: Option<String>,
    /// Worker threads for studies.
    #[arg(long)]
    jobs: Option<String>,
}

impl Flags {
    fn entries(self) -> (Option<PathBuf>, Vec<(&'static str, String)>) {
        let pairs = [
            ("problem", self.problem),
            ("n", self.n),
            ("scheme", self.scheme),
            ("flux", self.flux),
            ("basis", self.basis),
            ("cfl", self.cfl),
            ("limiter", self.limiter),
            ("output", self.output),
            ("trace", self.trace),
            ("snapshots", self.snapshots),
            ("ns", self.ns),
            ("schemes", self.schemes),
            ("jobs", self.jobs),
        ];
        let set = pairs
            .into_iter()
            .filter_map(|(k, v)| v.map(|v| (k, v)))
            .collect();
        (self.config, set)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub problem: String,
    pub n: usize,
    pub scheme: SchemeKind,
    pub flux: FluxKind,
    pub basis: VariableBasis,
    pub cfl: f64,
    pub limiter: bool,
    pub output: Option<PathBuf>,
    pub trace: Option<PathBuf>,
    /// Intermediate output times, ascending, below the final time.
    pub snapshots: Vec<f64>,
    pub ns: Vec<usize>,
    pub schemes: Vec<SchemeKind>,
    pub jobs: Option<usize>,
}

impl RunConfig {
    pub fn problem_spec(&self) -> ProblemSpec {
        problem(&self.problem).expect("validated at parse time")
    }

    pub fn scheme_config(&self) -> SchemeConfig {
        self.scheme_config_for(self.scheme)
    }

    pub fn scheme_config_for(&self, scheme: SchemeKind) -> SchemeConfig {
        SchemeConfig::new(scheme)
            .with_flux(self.flux)
            .with_basis(self.basis)
            .with_limiter(self.limiter)
    }

    pub fn step_control(&self) -> StepControl {
        StepControl::new(self.cfl).expect("validated at parse time")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Invocation {
    Run(RunConfig),
    Converge(RunConfig),
    Compare(RunConfig),
    ListProblems,
}

/// Parses the full argument vector, program name included.
pub fn parse_config<I, T>(args: I) -> Result<Invocation>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| match e.kind() {
        clap::error::ErrorKind::DisplayHelp
        | clap::error::ErrorKind::DisplayVersion
        | clap::error::ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
            CliError::Info(e.to_string())
        }
        _ => CliError::Usage(clap_message(&e)),
    })?;
    let build = |flags: Flags| -> Result<RunConfig> {
        let (file, set) = flags.entries();
        let mut values = match file {
            Some(path) => read_config_file(&path)?,
            None => BTreeMap::new(),
        };
        for (k, v) in set {
            values.insert(k.to_string(), v);
        }
        resolve(&values)
    };
    Ok(match cli.command {
        Command::Run(f) => Invocation::Run(build(f)?),
        Command::Converge(f) => Invocation::Converge(build(f)?),
        Command::Compare(f) => Invocation::Compare(build(f)?),
        Command::ListProblems => Invocation::ListProblems,
    })
}

fn clap_message(e: &clap::Error) -> String {
    let text = e.to_string();
    text.lines()
        .find(|l| !l.trim().is_empty())
        .unwrap_or("invalid arguments")
        .trim_start_matches("error: ")
        .to_string()
}

/// Reads `key = value` lines. Blank lines and lines starting with `#` are
/// skipped.
pub fn read_config_file(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_config_text(&text).map_err(|(line, message)| CliError::ConfigFile {
        path: path.to_path_buf(),
        line,
        message,
    })
}

fn parse_config_text(text: &str) -> std::result::Result<BTreeMap<String, String>, (usize, String)> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err((i + 1, format!("expected key=value, got '{line}'")));
        };
        let key = k.trim();
        if !VALID_KEYS.contains(&key) {
            return Err((
                i + 1,
                format!(
                    "unknown key '{key}' (valid keys: {})",
                    VALID_KEYS.join(", ")
                ),
            ));
        }
        out.insert(key.to_string(), v.trim().to_string());
    }
    Ok(out)
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse()
        .map_err(|_| usage(format!("invalid value '{v}' for {key}")))
}

fn parse_list<T>(key: &str, v: &str, item: impl Fn(&str) -> Result<T>) -> Result<Vec<T>> {
    let items: Vec<_> = v
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(item)
        .collect::<Result<_>>()?;
    if items.is_empty() {
        return Err(usage(format!("{key} must not be empty")));
    }
    Ok(items)
}

fn parse_enum<T>(v: &str) -> Result<T>
where
    T: std::str::FromStr<Err = fvcw::SolverError>,
{
    v.parse()
        .map_err(|e: fvcw::SolverError| usage(e.to_string().replace("invalid argument: ", "")))
}

fn parse_switch(key: &str, v: &str) -> Result<bool> {
    match v {
        "on" | "true" | "yes" | "1" => Ok(true),
        "off" | "false" | "no" | "0" => Ok(false),
        _ => Err(usage(format!(
            "invalid value '{v}' for {key} (expected on or off)"
        ))),
    }
}

fn resolve(values: &BTreeMap<String, String>) -> Result<RunConfig> {
    let get = |k: &str| values.get(k).map(String::as_str);
    let name = get("problem").ok_or_else(|| usage("missing required key: problem"))?;
    let spec = problem(name).map_err(|e| usage(e.to_string().replace("invalid argument: ", "")))?;

    let n = match get("n") {
        Some(v) => parse_num::<usize>("n", v)?,
        None => spec.default_n,
    };
    if n < 10 {
        return Err(usage(format!("n must be at least 10, got {n}")));
    }
    let scheme = get("scheme").map_or(Ok(SchemeKind::Fvcw), parse_enum)?;
    let flux = get("flux").map_or(Ok(FluxKind::Hllc), parse_enum)?;
    let basis = get("basis").map_or(Ok(VariableBasis::Characteristic), parse_enum)?;
    let limiter = get("limiter").map_or(Ok(true), |v| parse_switch("limiter", v))?;
    let cfl = match get("cfl") {
        Some(v) => parse_num::<f64>("cfl", v)?,
        None => SchemeConfig::new(scheme)
            .with_limiter(limiter)
            .default_cfl(),
    };
    if !(cfl > 0.0 && cfl <= 1.0) {
        return Err(usage(format!("cfl must lie in (0, 1], got {cfl}")));
    }
    let snapshots = match get("snapshots") {
        Some(v) => parse_list("snapshots", v, |s| parse_num::<f64>("snapshots", s))?,
        None => Vec::new(),
    };
    if snapshots.windows(2).any(|w| !(w[0] < w[1]))
        || snapshots.iter().any(|&t| !(t > 0.0 && t < spec.t_final))
    {
        return Err(usage(format!(
            "snapshots must be increasing times in (0, {})",
            spec.t_final
        )));
    }
    let ns = match get("ns") {
        Some(v) => parse_list("ns", v, |s| parse_num::<usize>("ns", s))?,
        None => DEFAULT_NS.to_vec(),
    };
    if let Some(&bad) = ns.iter().find(|&&k| k < 10) {
        return Err(usage(format!(
            "every entry of ns must be at least 10, got {bad}"
        )));
    }
    let schemes = match get("schemes") {
        Some(v) => parse_list("schemes", v, parse_enum)?,
        None => DEFAULT_SCHEMES.to_vec(),
    };
    let jobs = match get("jobs") {
        Some(v) => {
            let j = parse_num::<usize>("jobs", v)?;
            if j == 0 {
                return Err(usage("jobs must be at least 1"));
            }
            Some(j)
        }
        None => None,
    };
    Ok(RunConfig {
        problem: spec.name.to_string(),
        n,
        scheme,
        flux,
        basis,
        cfl,
        limiter,
        output: get("output").map(PathBuf::from),
        trace: get("trace").map(PathBuf::from),
        snapshots,
        ns,
        schemes,
        jobs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comments_and_blank_lines_are_skipped() {
        let m = parse_config_text("# sod\n\nn = 200\nscheme=weno-z\n").unwrap();
        assert_eq!(m["n"], "200");
        assert_eq!(m["scheme"], "weno-z");
    }

    #[test]
    fn unknown_key_lists_valid_keys() {
        let (line, msg) = parse_config_text("n=1\nsize=3\n").unwrap_err();
        assert_eq!(line, 2);
        assert!(msg.contains("size") && msg.contains("valid keys: problem, n,"));
    }

    #[test]
    fn missing_equals_is_rejected() {
        assert_eq!(parse_config_text("n 200").unwrap_err().0, 1);
    }
}
