//! Command-line definitions and the three commands.

use crate::config::{parse_complex, parse_list, ConfigError, ReportFormat, RunConfig};
use crate::output::{decode_report, encode_report, render_eigen, render_table, TableFormat};
use crate::suites::{Sabotage, SuiteContext, SuiteError, SuiteRegistry, Tolerances};
use clap::{Args, Parser, Subcommand, ValueEnum};
use kxxz_bethe::{read_set, solve_all, write_set, BetheError, BetheSystem, Convention, SolutionCache, StepControl};
use kxxz_core::wire::format_c64;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

/// Environment variable naming the default solution-cache directory.
pub const CACHE_DIR_ENV: &str = "KXXZ_CACHE_DIR";

/// Every check passed.
pub const EXIT_OK: i32 = 0;
/// At least one check failed.
pub const EXIT_CHECK_FAILED: i32 = 1;
/// Bethe solutions are missing: an incomplete set or an empty cache.
pub const EXIT_INCOMPLETE: i32 = 2;
/// The configuration or the command line is invalid.
pub const EXIT_CONFIG: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "kxxz", version, about = "XXZ chain, Bethe ansatz and quantum K-theory verification")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve the Bethe equations in one sector and store the solutions.
    SolveBethe(SolveArgs),
    /// Run verification suites and write a report.
    Verify(VerifyArgs),
    /// Render a stored report or a stored solution set.
    Report(ReportArgs),
}

/// Model parameters given on the command line.
#[derive(Debug, Clone, Default, Args)]
pub struct ModelArgs {
    /// Number of sites.
    #[arg(long)]
    pub n: Option<usize>,
    /// Equivariant parameters, comma separated (`1.0,1.3+0.2i,...`).
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    /// Anisotropy hbar, for example `0.8+0.15i`.
    #[arg(long, allow_hyphen_values = true)]
    pub hbar: Option<String>,
    /// Loop parameter q of the vertex functions.
    #[arg(long, allow_hyphen_values = true)]
    pub q: Option<String>,
    /// Working precision in bits.
    #[arg(long)]
    pub precision: Option<u32>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ConventionArg {
    /// Quantum K-theory form with deformation z.
    Geometric,
    /// Saddle-point form of the vertex function asymptotics.
    Saddle,
    /// Algebraic Bethe ansatz form; z is the squared twist.
    Aba,
}

impl From<ConventionArg> for Convention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Geometric => Convention::Geometric,
            ConventionArg::Saddle => Convention::Saddle,
            ConventionArg::Aba => Convention::Aba,
        }
    }
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Number of Bethe roots.
    #[arg(long)]
    pub k: usize,
    /// Deformation parameter.
    #[arg(long, allow_hyphen_values = true)]
    pub z: String,
    /// Form of the Bethe equations.
    #[arg(long, value_enum, default_value = "geometric")]
    pub convention: ConventionArg,
    /// Output file; defaults to a keyed file in the cache directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Cache directory; defaults to the KXXZ_CACHE_DIR environment variable.
    #[arg(long)]
    pub cache_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Suite name (algebra, transfer, qop, wronskian, tq, vertex) or `all`.
    pub suite: Option<String>,
    /// TOML run configuration; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub model: ModelArgs,
    /// Deformation values, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    pub z: Option<String>,
    /// Order in x of the Q-operator series.
    #[arg(long)]
    pub m: Option<usize>,
    /// Degree cutoff of the vertex series.
    #[arg(long)]
    pub d_max: Option<usize>,
    /// Tolerance override `NAME=VALUE`, where NAME is a check-id prefix.
    #[arg(long = "tol", value_name = "NAME=VALUE")]
    pub tol: Vec<String>,
    /// Report encoding (default json).
    #[arg(long, value_enum)]
    pub format: Option<ReportFormat>,
    /// Report file.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Bethe solution cache; defaults to the KXXZ_CACHE_DIR environment variable.
    #[arg(long)]
    pub cache_dir: Option<PathBuf>,
    /// Seed of the random probe points.
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Record the wall time in the report (the report is then not
    /// byte-reproducible).
    #[arg(long)]
    pub record_time: bool,
    /// Negative control: wrong sign of K and of the resonance factors.
    #[arg(long)]
    pub sabotage_sign: bool,
    /// Negative control: wrong branch of the twist in the Wronskian.
    #[arg(long)]
    pub sabotage_branch: bool,
    /// Negative control: perturb the coefficient a_1.
    #[arg(long)]
    pub sabotage_am: bool,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// A report written by `verify`.
    #[arg(long, conflicts_with = "solutions", required_unless_present = "solutions")]
    pub input: Option<PathBuf>,
    /// A solution file written by `solve-bethe`.
    #[arg(long)]
    pub solutions: Option<PathBuf>,
    /// Output format.
    #[arg(long, value_enum, default_value = "table")]
    pub format: TableFormat,
}

/// An error together with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn config(e: impl std::fmt::Display) -> Self {
        Failure {
            code: EXIT_CONFIG,
            message: e.to_string(),
        }
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::config(e)
    }
}

impl From<BetheError> for Failure {
    fn from(e: BetheError) -> Self {
        let code = match e {
            BetheError::IncompleteSet { .. } => EXIT_INCOMPLETE,
            BetheError::InvalidSystem(_) => EXIT_CONFIG,
            _ => EXIT_CHECK_FAILED,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<SuiteError> for Failure {
    fn from(e: SuiteError) -> Self {
        match e {
            SuiteError::Bethe(b) => b.into(),
            SuiteError::UnknownSuite(_) | SuiteError::UnknownTolerance(_) => Failure::config(e),
            SuiteError::Failed(m) => Failure {
                code: EXIT_CHECK_FAILED,
                message: m,
            },
        }
    }
}

/// Applies command-line model flags on top of a configuration.
fn apply_model(cfg: &mut RunConfig, m: &ModelArgs) -> Result<(), ConfigError> {
    if let Some(n) = m.n {
        if n != cfg.params.n && m.a.is_none() {
            cfg.params.a.clear();
        }
        cfg.params.n = n;
    }
    if let Some(a) = &m.a {
        cfg.params.a = parse_list("--a", a)?.into_iter().map(format_c64).collect();
        if m.n.is_none() {
            cfg.params.n = cfg.params.a.len();
        }
    }
    if let Some(h) = &m.hbar {
        cfg.params.hbar = format_c64(parse_complex("--hbar", h)?);
    }
    if let Some(q) = &m.q {
        cfg.params.q = format_c64(parse_complex("--q", q)?);
    }
    if let Some(p) = m.precision {
        cfg.params.precision = p;
    }
    Ok(())
}

fn cache_dir(flag: &Option<PathBuf>, cfg: Option<&PathBuf>) -> Option<PathBuf> {
    flag.clone()
        .or_else(|| cfg.cloned())
        .or_else(|| std::env::var_os(CACHE_DIR_ENV).map(PathBuf::from))
}

/// `solve-bethe`.
pub fn cmd_solve_bethe(args: &SolveArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let mut cfg = RunConfig::default();
    apply_model(&mut cfg, &args.model)?;
    let params = cfg.model_params()?;
    let z = parse_complex("--z", &args.z)?;
    if args.k > params.n() {
        return Err(Failure::config(format!("k = {} exceeds n = {}", args.k, params.n())));
    }
    let system = BetheSystem::new(&params, args.k, args.convention.into(), z)?;
    let set = solve_all(&system, &StepControl::default())?;
    let path = match (&args.out, cache_dir(&args.cache_dir, None)) {
        (Some(p), _) => {
            write_set(p, &set)?;
            Some(p.clone())
        }
        (None, Some(dir)) => Some(SolutionCache::new(dir).store(&system, &set)?),
        (None, None) => None,
    };
    let _ = write!(out, "{}", render_eigen(&set, TableFormat::Table));
    if let Some(p) = path {
        let _ = writeln!(out, "written to {}", p.display());
    }
    Ok(EXIT_OK)
}

/// Builds the run configuration of `verify` from the config file and flags.
pub fn verify_config(args: &VerifyArgs) -> Result<(RunConfig, Tolerances), Failure> {
    let mut cfg = match &args.config {
        Some(p) => RunConfig::from_path(p)?,
        None => RunConfig::default(),
    };
    apply_model(&mut cfg, &args.model)?;
    if let Some(s) = &args.suite {
        cfg.task.checks = vec![s.clone()];
    }
    if let Some(z) = &args.z {
        cfg.task.z = parse_list("--z", z)?.into_iter().map(format_c64).collect();
    }
    if let Some(m) = args.m {
        cfg.task.m = m;
    }
    if let Some(d) = args.d_max {
        cfg.task.d_max = d;
    }
    for t in &args.tol {
        let (name, value) = Tolerances::parse_assignment(t).ok_or_else(|| Failure::config(format!("--tol expects NAME=VALUE, got `{t}`")))?;
        cfg.task.tolerances.insert(name, value);
    }
    if let Some(f) = args.format {
        cfg.io.format = f;
    }
    if let Some(r) = &args.report {
        cfg.io.report = Some(r.clone());
    }
    if let Some(c) = &args.cache_dir {
        cfg.io.cache = Some(c.clone());
    }
    let mut tol = Tolerances::default();
    for (name, &value) in &cfg.task.tolerances {
        tol.set(name.clone(), value);
    }
    // Re-validate after the flags were applied.
    cfg.model_params()?;
    cfg.z_values()?;
    Ok((cfg, tol))
}

/// `verify`.
pub fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let (cfg, tol) = verify_config(args)?;
    let registry = SuiteRegistry::standard();
    registry.validate_tolerances(&tol)?;
    for name in &cfg.task.checks {
        if name != "all" && registry.get(name).is_none() {
            return Err(SuiteError::UnknownSuite(name.clone()).into());
        }
    }
    let ctx = SuiteContext {
        params: cfg.model_params()?,
        z: cfg.z_values()?,
        m: cfg.task.m,
        d_max: cfg.task.d_max,
        sabotage: Sabotage {
            sign: args.sabotage_sign,
            branch: args.sabotage_branch,
            am: args.sabotage_am,
        },
        cache: cache_dir(&None, cfg.io.cache.as_ref()).map(SolutionCache::new),
        seed: args.seed,
    };
    let start = Instant::now();
    let mut report = registry.run(&cfg.task.checks, &ctx, &tol)?;
    let elapsed = start.elapsed().as_secs_f64();
    if !args.record_time {
        report.metadata.wall_time_s = None;
    }
    if let Some(path) = &cfg.io.report {
        write_file(path, &encode_report(&cfg.task.checks, &report, cfg.io.format))?;
    }
    for e in report.failures() {
        let _ = writeln!(out, "FAIL {}  residual {:.3e}  tolerance {:.1e}  ({})", e.check_id, e.residual, e.tolerance, e.anchor);
    }
    let failed = report.failures().count();
    let _ = writeln!(
        out,
        "{}: {} checks, {} failed, {:.2} s, checksum {}",
        cfg.task.checks.join(","),
        report.entries.len(),
        failed,
        elapsed,
        &report.checksum()[..16]
    );
    Ok(if failed == 0 { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(Failure::config)?;
    }
    std::fs::write(path, text).map_err(Failure::config)
}

/// `report`.
pub fn cmd_report(args: &ReportArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    if let Some(path) = &args.solutions {
        let set = match read_set(path) {
            Ok(set) if !set.solutions.is_empty() => set,
            Ok(_) | Err(BetheError::Cache(_)) | Err(BetheError::Io(_)) => {
                return Err(Failure {
                    code: EXIT_INCOMPLETE,
                    message: format!("no cached solutions in {}", path.display()),
                })
            }
            Err(e) => return Err(Failure::config(e)),
        };
        let _ = write!(out, "{}", render_eigen(&set, args.format));
        return Ok(EXIT_OK);
    }
    let path = args.input.as_ref().expect("clap requires one input");
    let text = std::fs::read_to_string(path).map_err(|e| Failure {
        code: EXIT_INCOMPLETE,
        message: format!("{}: {e}", path.display()),
    })?;
    let report = decode_report(&text).map_err(Failure::config)?;
    if report.entries.is_empty() {
        return Err(Failure {
            code: EXIT_INCOMPLETE,
            message: format!("{} holds no checks", path.display()),
        });
    }
    let rendered = match args.format {
        TableFormat::Table => render_table(&report),
        TableFormat::Json => encode_report(&[], &report, ReportFormat::Json),
        TableFormat::Csv => encode_report(&[], &report, ReportFormat::Csv),
    };
    let _ = write!(out, "{rendered}");
    Ok(if report.passed() { EXIT_OK } else { EXIT_CHECK_FAILED })
}

/// Parses arguments and runs a command, returning the exit code. Output goes
/// to `out` and errors to `err`.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            if e.use_stderr() {
                let _ = write!(err, "{e}");
            } else {
                let _ = write!(out, "{e}");
            }
            return code;
        }
    };
    let result = match &cli.command {
        Command::SolveBethe(a) => cmd_solve_bethe(a, out),
        Command::Verify(a) => cmd_verify(a, out),
        Command::Report(a) => cmd_report(a, out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}
