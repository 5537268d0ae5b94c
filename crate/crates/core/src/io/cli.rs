//! The `cpd-surf` command line.
//!
//! Exit codes: 0 success, 1 invalid input or usage, 2 verification failure.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use super::{sample_grid, write_csv, write_obj, write_ply, MeshGrid, SurfaceSpecFile};
use crate::cpd::cmc_profile;
use crate::error::{Error, Result};
use crate::gallery::{gallery, GalleryName};
use crate::geometry::{ChartDomain, CoordKind, FixedDirection, ParamSurface};
use crate::numerics::Interval;
use crate::verify::{classify, verify_surface, GridSpec, Tolerances};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_VERIFY_FAILED: i32 = 2;

/// Environment variable capping the worker thread count.
pub const THREADS_ENV: &str = "CPD_SURF_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "cpd-surf",
    version,
    about = "Construct, verify and export surfaces with a canonical principal direction"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Obj,
    Ply,
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
struct Common {
    /// Grid points along x.
    #[arg(long, default_value_t = 41)]
    nx: usize,
    /// Grid points along y.
    #[arg(long, default_value_t = 41)]
    ny: usize,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// First-order tolerance (verify), classification threshold
    /// (classify) or ODE tolerance (cmc).
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Export a named minimal surface.
    Gallery {
        name: String,
        #[command(flatten)]
        common: Common,
    },
    /// Export a surface described by a JSON spec.
    Construct {
        spec: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Check every applicable identity; exits 2 if any check fails.
    Verify {
        spec: PathBuf,
        /// Fraction of each side trimmed from the grid.
        #[arg(long, default_value_t = 0.0)]
        margin: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Report minimal/flat/CPD/constant-angle/umbilic/CMC flags.
    Classify {
        spec: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Integrate the angle profile of a first-family CMC surface.
    Cmc {
        #[arg(long = "H", allow_negative_numbers = true)]
        h: f64,
        #[arg(long, allow_negative_numbers = true)]
        psi0: f64,
        #[arg(long, allow_negative_numbers = true)]
        theta0: f64,
        #[arg(long, allow_negative_numbers = true)]
        phi0: f64,
        /// Integration interval as `a,b`.
        #[arg(long, value_parser = parse_span, allow_hyphen_values = true)]
        span: Interval,
        #[command(flatten)]
        common: Common,
    },
    /// Write per-point geometric quantities.
    Sample {
        spec: PathBuf,
        #[command(flatten)]
        common: Common,
    },
}

fn parse_span(s: &str) -> std::result::Result<Interval, String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected `a,b`, got `{s}`"))?;
    let a: f64 = a.trim().parse().map_err(|_| format!("bad number `{a}`"))?;
    let b: f64 = b.trim().parse().map_err(|_| format!("bad number `{b}`"))?;
    Interval::new(a, b).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct SurfaceSummary<'a> {
    name: &'a str,
    kind: CoordKind,
    domain: ChartDomain,
    chained: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    known_theta: Option<String>,
    warnings: &'a [String],
}

fn summary(s: &ParamSurface) -> SurfaceSummary<'_> {
    SurfaceSummary {
        name: &s.name,
        kind: s.kind,
        domain: s.domain,
        chained: s.chained,
        known_theta: s.known_theta.as_ref().map(|e| e.to_string()),
        warnings: &s.warnings,
    }
}

fn to_json(v: &impl Serialize) -> Result<Vec<u8>> {
    let mut buf = serde_json::to_vec_pretty(v)?;
    buf.push(b'\n');
    Ok(buf)
}

fn unsupported(cmd: &str, f: Format) -> Error {
    Error::Invalid(format!("format `{f:?}` is not supported by `{cmd}`").to_lowercase())
}

fn no_tol(cmd: &str, c: &Common) -> Result<()> {
    match c.tol {
        Some(_) => Err(Error::Invalid(format!("--tol is not used by `{cmd}`"))),
        None => Ok(()),
    }
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Invalid(format!("{name} must be positive, got {v}")))
    }
}

fn export(cmd: &str, s: &ParamSurface, c: &Common) -> Result<Vec<u8>> {
    no_tol(cmd, c)?;
    let mut buf = Vec::new();
    match c.format.unwrap_or(Format::Obj) {
        Format::Obj => write_obj(&MeshGrid::sample(s, c.nx, c.ny)?, &mut buf)?,
        Format::Ply => write_ply(&MeshGrid::sample(s, c.nx, c.ny)?, &mut buf)?,
        Format::Csv => write_csv(&sample_grid(s, &GridSpec::new(c.nx, c.ny, 0.0)?)?, &mut buf)?,
        Format::Json => buf = to_json(&summary(s))?,
    }
    Ok(buf)
}

/// Output bytes and exit code of a successful run.
struct Outcome {
    bytes: Vec<u8>,
    code: i32,
}

impl From<Vec<u8>> for Outcome {
    fn from(bytes: Vec<u8>) -> Self {
        Outcome {
            bytes,
            code: EXIT_OK,
        }
    }
}

fn load(path: &PathBuf, err: &mut dyn Write) -> Result<ParamSurface> {
    let s = SurfaceSpecFile::load(path)?.build()?;
    warn_all(&s.warnings, err);
    Ok(s)
}

fn warn_all(warnings: &[String], err: &mut dyn Write) {
    for w in warnings {
        let _ = writeln!(err, "warning: {w}");
    }
}

fn execute(cmd: Command, err: &mut dyn Write) -> Result<(Outcome, Option<PathBuf>)> {
    let (outcome, out) = match cmd {
        Command::Gallery { name, common } => {
            let s = gallery(name.parse::<GalleryName>()?, None)?;
            (export("gallery", &s, &common)?.into(), common.out)
        }
        Command::Construct { spec, common } => {
            let s = load(&spec, err)?;
            (export("construct", &s, &common)?.into(), common.out)
        }
        Command::Sample { spec, common } => {
            no_tol("sample", &common)?;
            let s = load(&spec, err)?;
            let rows = sample_grid(&s, &GridSpec::new(common.nx, common.ny, 0.0)?)?;
            let bytes = match common.format.unwrap_or(Format::Csv) {
                Format::Csv => {
                    let mut buf = Vec::new();
                    write_csv(&rows, &mut buf)?;
                    buf
                }
                Format::Json => to_json(&rows)?,
                f => return Err(unsupported("sample", f)),
            };
            (bytes.into(), common.out)
        }
        Command::Verify {
            spec,
            margin,
            common,
        } => {
            match common.format.unwrap_or(Format::Json) {
                Format::Json => {}
                f => return Err(unsupported("verify", f)),
            }
            // The report repeats the surface warnings.
            let s = SurfaceSpecFile::load(&spec)?.build()?;
            let grid = GridSpec::new(common.nx, common.ny, margin)?;
            let mut tol = Tolerances::default();
            if let Some(t) = common.tol {
                tol.first_order = positive("--tol", t)?;
            }
            let report = verify_surface(&s, &FixedDirection::default(), &grid, &tol);
            warn_all(&report.warnings, err);
            for c in report.failures() {
                let _ = writeln!(
                    err,
                    "FAIL {}: max residual {:e} >= tolerance {:e}",
                    c.id, c.max_residual, c.tolerance
                );
            }
            let code = if report.passed {
                EXIT_OK
            } else {
                EXIT_VERIFY_FAILED
            };
            let bytes = to_json(&report)?;
            (Outcome { bytes, code }, common.out)
        }
        Command::Classify { spec, common } => {
            match common.format.unwrap_or(Format::Json) {
                Format::Json => {}
                f => return Err(unsupported("classify", f)),
            }
            let s = load(&spec, err)?;
            let grid = GridSpec::new(common.nx, common.ny, 0.0)?;
            let tol = positive("--tol", common.tol.unwrap_or(1e-6))?;
            (to_json(&classify(&s, &grid, tol)?)?.into(), common.out)
        }
        Command::Cmc {
            h,
            psi0,
            theta0,
            phi0,
            span,
            common,
        } => {
            let tol = positive("--tol", common.tol.unwrap_or(1e-10))?;
            let p = cmc_profile(h, psi0, theta0, phi0, span, tol)?;
            let bytes = match common.format.unwrap_or(Format::Csv) {
                Format::Csv => {
                    let mut buf = Vec::new();
                    writeln!(buf, "x,theta,phi")?;
                    for [x, t, f] in &p.table {
                        writeln!(buf, "{x:.16e},{t:.16e},{f:.16e}")?;
                    }
                    buf
                }
                Format::Json => to_json(&p)?,
                f => return Err(unsupported("cmc", f)),
            };
            (bytes.into(), common.out)
        }
    };
    Ok((outcome, out))
}

/// Runs the CLI on `args` (including the program name) and returns the
/// exit code. Output without `--out` goes to `out`; diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_OK
            };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let result = execute(cli.command, err).and_then(|(o, path)| {
        match path {
            Some(p) => std::fs::write(&p, &o.bytes)
                .map_err(|e| Error::Io(format!("{}: {e}", p.display())))?,
            None => out.write_all(&o.bytes)?,
        }
        Ok(o.code)
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INVALID
        }
    }
}

/// Sizes the global thread pool from [`THREADS_ENV`] when it is set.
pub fn init_threads() -> Result<()> {
    let Ok(v) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = v.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        Error::Invalid(format!(
            "{THREADS_ENV} must be a positive integer, got `{v}`"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::Invalid(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(args.iter().copied(), &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn gallery_obj_counts() {
        let (code, out, _) = run_str(&[
            "cpd-surf", "gallery", "catenoid", "--nx", "40", "--ny", "40",
        ]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().filter(|l| l.starts_with("v ")).count(), 1600);
        assert_eq!(
            out.lines().filter(|l| l.starts_with("f ")).count(),
            2 * 39 * 39
        );
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run_str(&["cpd-surf", "frobnicate"]).0, 1);
        assert_eq!(run_str(&["cpd-surf", "gallery", "torus"]).0, 1);
        assert_eq!(
            run_str(&["cpd-surf", "gallery", "enneper", "--tol", "1e-3"]).0,
            1
        );
        assert_eq!(run_str(&["cpd-surf", "--help"]).0, 0);
    }

    #[test]
    fn cmc_minimal_profile() {
        let (code, out, err) = run_str(&[
            "cpd-surf",
            "cmc",
            "--H",
            "0",
            "--psi0",
            "0",
            "--theta0",
            "0.7853981634",
            "--phi0",
            "1.4142135624",
            "--span",
            "1,3",
        ]);
        assert_eq!(code, 0, "{err}");
        let mut lines = out.lines();
        assert_eq!(lines.next(), Some("x,theta,phi"));
        for l in lines {
            let v: Vec<f64> = l.split(',').map(|c| c.parse().unwrap()).collect();
            assert!((v[1] - (1.0 / v[0]).atan()).abs() < 1e-6);
        }
    }

    #[test]
    fn span_parsing() {
        assert_eq!(
            parse_span("-1,2.5").unwrap(),
            Interval::new(-1.0, 2.5).unwrap()
        );
        assert!(parse_span("1").is_err());
        assert!(parse_span("2,1").is_err());
    }
}
