//! Command-line front end: `generate`, `reduce`, `certify` and `repro`.
//!
//! Exit codes: 0 pass, 1 certification failure, 2 argument or format error,
//! 3 singular seed or degenerate reduction, 4 IO failure.

pub mod csv;
pub mod repro;

use std::ffi::OsString;
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use wronskia::geometry::{certify_with_surfaces, Surface};
use wronskia::reduction::{fit_basis, gamma_from_seed, recombine, run as run_reduction, SeedKind};
use wronskia::{
    build_family, Error, FamilySpec, Grid, SampledCurve, SeedSolution, TzitzeicaReport,
};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_SINGULAR: i32 = 3;
pub const EXIT_IO: i32 = 4;

pub const DEFAULT_TOL: f64 = 1e-5;
pub const DEFAULT_POINTS: usize = 2001;

#[derive(Debug, Parser)]
#[command(name = "wronskia", version)]
#[command(about = "Third-order linear side conditions, reduction of order and Tzitzeica curves")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample a closed-form fundamental set as a curve CSV
    Generate(GenerateArgs),
    /// Build a fundamental set from one known solution and certify it
    Reduce(ReduceArgs),
    /// Certify a curve CSV as a Tzitzeica curve
    Certify(CertifyArgs),
    /// Regenerate every published example with a summary table
    Repro(ReproArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyName {
    ExpTrig,
    CubicDistinct,
    CubicRepeated,
    CubicComplex,
    Airy,
    Example4,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub t0: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub t1: Option<f64>,
    /// Number of grid points
    #[arg(long = "n", default_value_t = DEFAULT_POINTS)]
    pub points: usize,
}

impl GridArgs {
    fn grid(&self, default: (f64, f64)) -> Result<Grid, CliError> {
        let t0 = self.t0.unwrap_or(default.0);
        let t1 = self.t1.unwrap_or(default.1);
        Ok(Grid::uniform(t0, t1, self.points)?)
    }
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, value_enum)]
    pub family: FamilyName,
    #[arg(long, allow_negative_numbers = true)]
    pub delta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub v1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub v2: Option<f64>,
    /// Real part of the complex root pair
    #[arg(long, allow_negative_numbers = true)]
    pub m: Option<f64>,
    /// Imaginary part of the complex root pair
    #[arg(long, allow_negative_numbers = true)]
    pub imag: Option<f64>,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Emit derivative columns through order 3
    #[arg(long)]
    pub derivs: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReduceArgs {
    /// `power:<p>` for t^p or `exp:<v>` for e^{vt}
    #[arg(long)]
    pub seed: String,
    #[arg(long, allow_negative_numbers = true)]
    pub delta: f64,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Closed-form family to align the composed basis with
    #[arg(long, value_enum, default_value = "auto")]
    pub reference: Reference,
    #[arg(long = "surface")]
    pub surfaces: Vec<String>,
    #[arg(long, env = "WRONSKIA_TOL")]
    pub tol: Option<f64>,
    #[arg(long)]
    pub derivs: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Reference {
    Auto,
    None,
    Example4,
    ExpTrig,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    pub input: PathBuf,
    #[arg(long, allow_negative_numbers = true)]
    pub delta: Option<f64>,
    #[arg(long = "surface")]
    pub surfaces: Vec<String>,
    #[arg(long, env = "WRONSKIA_TOL")]
    pub tol: Option<f64>,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReproArgs {
    #[arg(long)]
    pub outdir: PathBuf,
    #[arg(long = "n", default_value_t = DEFAULT_POINTS)]
    pub points: usize,
    #[arg(long, env = "WRONSKIA_TOL")]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    pub fn io(path: &Path, e: std::io::Error) -> Self {
        CliError {
            code: EXIT_IO,
            message: format!("{}: {e}", path.display()),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::SingularSeed { .. } | Error::Degenerate(_) => EXIT_SINGULAR,
            _ => EXIT_USAGE,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

impl From<csv::CsvError> for CliError {
    fn from(e: csv::CsvError) -> Self {
        CliError::usage(e.to_string())
    }
}

fn resolve_tol(tol: Option<f64>) -> Result<f64, CliError> {
    let tol = tol.unwrap_or(DEFAULT_TOL);
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(CliError::usage(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    Ok(tol)
}

fn parse_surfaces(names: &[String]) -> Result<Vec<Surface>, CliError> {
    names.iter().map(|s| Ok(s.parse::<Surface>()?)).collect()
}

fn require(v: Option<f64>, flag: &str, family: &str) -> Result<f64, CliError> {
    v.ok_or_else(|| CliError::usage(format!("--{flag} is required for --family {family}")))
}

pub fn family_spec(args: &GenerateArgs) -> Result<FamilySpec, CliError> {
    let name = args
        .family
        .to_possible_value()
        .unwrap()
        .get_name()
        .to_string();
    Ok(match args.family {
        FamilyName::ExpTrig => FamilySpec::ExpTrig {
            delta: require(args.delta, "delta", &name)?,
        },
        FamilyName::Airy => FamilySpec::Airy {
            delta: require(args.delta, "delta", &name)?,
        },
        FamilyName::CubicDistinct => FamilySpec::CubicDistinct {
            v1: require(args.v1, "v1", &name)?,
            v2: require(args.v2, "v2", &name)?,
        },
        FamilyName::CubicRepeated => FamilySpec::CubicRepeated {
            v1: require(args.v1, "v1", &name)?,
        },
        FamilyName::CubicComplex => FamilySpec::CubicComplex {
            m: require(args.m, "m", &name)?,
            n: require(args.imag, "imag", &name)?,
        },
        FamilyName::Example4 => FamilySpec::Quadric,
    })
}

/// Samples a family with exact derivatives.
pub fn family_curve(spec: &FamilySpec, grid: &Grid) -> Result<SampledCurve, CliError> {
    let fam = build_family(spec, grid)?;
    Ok(SampledCurve::from_set(&fam.set, grid, spec.name())?)
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::io(p, e)),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| CliError::io(Path::new("<stdout>"), e)),
    }
}

pub fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

pub fn cmd_generate(args: &GenerateArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let spec = family_spec(args)?;
    spec.validate()?;
    let grid = args.grid.grid(spec.default_interval())?;
    let curve = family_curve(&spec, &grid)?;
    emit(
        out,
        args.out.as_deref(),
        &csv::write_curve(&curve, args.derivs),
    )?;
    Ok(EXIT_PASS)
}

#[derive(Debug, Clone, Serialize)]
pub struct BasisFitReport {
    pub reference: String,
    pub residual: f64,
    pub condition: f64,
    pub determinant: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReduceReport {
    #[serde(flatten)]
    pub certificate: TzitzeicaReport,
    pub seed: String,
    pub gamma0_t0: f64,
    pub basis_fit: Option<BasisFitReport>,
}

/// The reduction pipeline plus certification, without any IO.
pub fn reduce_curve(
    kind: SeedKind,
    delta: f64,
    grid: &Grid,
    reference: Reference,
    surfaces: &[Surface],
    tol: f64,
) -> Result<(SampledCurve, ReduceReport), CliError> {
    let seed = SeedSolution::from_kind(kind, delta)?;
    let outcome = run_reduction(&seed, grid)?;
    let reference = match reference {
        Reference::Auto => kind.reference_family(delta),
        Reference::None => None,
        Reference::Example4 => Some(FamilySpec::Quadric),
        Reference::ExpTrig => Some(FamilySpec::ExpTrig { delta }),
    };
    let (set, basis_fit) = match reference {
        Some(spec) => {
            let fam = build_family(&spec, grid)?;
            let fit = fit_basis(&outcome.set, &fam.set, grid)?;
            let info = BasisFitReport {
                reference: spec.name().to_string(),
                residual: fit.residual,
                condition: fit.condition,
                determinant: fit.matrix.determinant(),
            };
            (recombine(&outcome.set, &fit.matrix), Some(info))
        }
        None => (outcome.set.clone(), None),
    };
    let curve = SampledCurve::from_set(&set, grid, format!("reduce {kind}"))?;
    let mut certificate = certify_with_surfaces(&curve, Some(delta), tol, surfaces);
    if let Some(fit) = &basis_fit {
        certificate
            .verdict
            .insert("basis_fit".to_string(), fit.residual < tol);
        let pass = certificate
            .verdict
            .iter()
            .filter(|(k, _)| k.as_str() != "pass")
            .all(|(_, &v)| v);
        certificate.verdict.insert("pass".to_string(), pass);
    }
    let report = ReduceReport {
        certificate,
        seed: kind.to_string(),
        gamma0_t0: gamma_from_seed(&seed, grid.t0())?,
        basis_fit,
    };
    Ok((curve, report))
}

pub fn cmd_reduce(
    args: &ReduceArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, CliError> {
    let kind: SeedKind = args.seed.parse()?;
    let tol = resolve_tol(args.tol)?;
    let surfaces = parse_surfaces(&args.surfaces)?;
    let default = match kind {
        SeedKind::Power(p) if p.fract() != 0.0 => (1.1, 5.0),
        _ => (-1.0, 1.0),
    };
    let grid = args.grid.grid(default)?;
    let (curve, report) = reduce_curve(kind, args.delta, &grid, args.reference, &surfaces, tol)?;
    emit(
        out,
        args.out.as_deref(),
        &csv::write_curve(&curve, args.derivs),
    )?;
    let json = to_json(&report);
    match &args.report {
        Some(p) => fs::write(p, &json).map_err(|e| CliError::io(p, e))?,
        None => err
            .write_all(json.as_bytes())
            .map_err(|e| CliError::io(Path::new("<stderr>"), e))?,
    }
    Ok(if report.certificate.passed() {
        EXIT_PASS
    } else {
        EXIT_FAIL
    })
}

pub fn cmd_certify(args: &CertifyArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let tol = resolve_tol(args.tol)?;
    let surfaces = parse_surfaces(&args.surfaces)?;
    let text = fs::read_to_string(&args.input).map_err(|e| CliError::io(&args.input, e))?;
    let curve = csv::parse_curve(&text, "external")
        .map_err(|e| CliError::usage(format!("{}: {e}", args.input.display())))?;
    let report = certify_with_surfaces(&curve, args.delta, tol, &surfaces);
    emit(out, args.report.as_deref(), &to_json(&report))?;
    Ok(if report.passed() {
        EXIT_PASS
    } else {
        EXIT_FAIL
    })
}

pub fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match &cli.command {
        Command::Generate(a) => cmd_generate(a, out),
        Command::Reduce(a) => cmd_reduce(a, out, err),
        Command::Certify(a) => cmd_certify(a, out),
        Command::Repro(a) => repro::cmd_repro(a, out, err),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.code
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => dispatch(&cli, out, err),
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
                EXIT_USAGE
            } else {
                let _ = out.write_all(text.as_bytes());
                EXIT_PASS
            }
        }
    }
}
