//! The `systolic` command-line front end.
//!
//! JSON reports carry a [`RunManifest`] header; CSV outputs contain no
//! timestamps, so identical flags give byte-identical files.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::geometry::{Point, Profile, SurfaceKind, SurfaceSpec};
use crate::io::{read_profile_file, read_profile_rows, write_curve_csv, write_sphere_csv};
use crate::measure::curve_length;
use crate::optimal::{alpha_curve, beta0, beta1, pu_curve, sphere_chart};
use crate::projections::{klein_systolic_constant, defect_report};
use crate::systole::{GridConfig, Stencil};
use crate::verify::{check_profile_rows, run_all, CheckResult, VerifyConfig};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "SYSTOLIC_OUT_DIR";

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "systolic", version, about = "Optimal systolic metrics on Möbius strips and Klein bottles")]
pub struct Cli {
    /// Default directory for relative output paths.
    #[arg(long, env = OUT_DIR_ENV, global = true)]
    pub out_dir: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the distinguished constants.
    Constants {
        #[arg(long)]
        json: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate the optimal systolic ratio against the conformal parameter.
    AlphaCurve {
        #[arg(long, default_value = "klein")]
        surface: SurfaceKind,
        #[arg(long, default_value_t = 0.2)]
        beta_min: f64,
        #[arg(long, default_value_t = 3.0)]
        beta_max: f64,
        #[arg(long, default_value_t = 0.01)]
        step: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Defect report of a tabulated profile.
    Defect {
        #[arg(long)]
        surface: SurfaceKind,
        /// Defaults to the last ordinate of the profile table.
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long)]
        profile: PathBuf,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the verification suites, or check a single profile table.
    Verify {
        #[command(flatten)]
        grid: GridArgs,
        /// Relative systole tolerance.
        #[arg(long, default_value_t = 0.02)]
        tol: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random profiles per (surface, beta) cell.
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Check this profile table instead of running the suites.
        #[arg(long, requires = "surface")]
        profile: Option<PathBuf>,
        #[arg(long)]
        surface: Option<SurfaceKind>,
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write Pu curves in strip and sphere coordinates.
    ExportCurves {
        #[arg(long, default_value_t = 1.0)]
        beta: f64,
        /// Comma-separated heights `0 <= tau < beta`.
        #[arg(long, value_delimiter = ',', default_values_t = [0.0, 0.25, 0.5, 0.75])]
        tau: Vec<f64>,
        /// Vertices per curve.
        #[arg(long, default_value_t = 257)]
        resolution: usize,
        /// Output directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    /// Grid resolution `NXxNY`.
    #[arg(long, value_parser = parse_grid)]
    pub grid: Option<(usize, usize)>,
    #[arg(long, default_value_t = 16)]
    pub stencil: usize,
    #[arg(long, default_value_t = 4)]
    pub kmax: i64,
    #[arg(long, default_value_t = 2)]
    pub mmax: i64,
}

impl GridArgs {
    pub fn config(&self) -> Result<GridConfig> {
        let (nx, ny) = self.grid.unwrap_or((256, 256));
        GridConfig::new(nx, ny, Stencil::from_directions(self.stencil)?, self.kmax, self.mmax)
    }
}

fn parse_grid(s: &str) -> std::result::Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected NXxNY, got '{s}'"))?;
    let nx = a.trim().parse().map_err(|_| format!("bad NX in '{s}'"))?;
    let ny = b.trim().parse().map_err(|_| format!("bad NY in '{s}'"))?;
    Ok((nx, ny))
}

/// Header of every JSON report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub params: Value,
    pub version: String,
    pub timestamp: String,
    pub seed: Option<u64>,
}

impl RunManifest {
    pub fn new(command: &str, params: Value, seed: Option<u64>) -> Self {
        RunManifest {
            command: command.to_string(),
            params,
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: chrono::Utc::now().to_rfc3339(),
            seed,
        }
    }
}

/// Parses `args` and runs the command; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

pub fn main() -> i32 {
    main_with_args(std::env::args_os())
}

fn resolve(out_dir: Option<&Path>, path: &Path) -> PathBuf {
    match out_dir {
        Some(dir) if path.is_relative() => dir.join(path),
        _ => path.to_path_buf(),
    }
}

/// Opens `--out` (relative to the output directory) or stdout.
fn sink(out_dir: Option<&Path>, out: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => {
            let p = resolve(out_dir, p);
            if let Some(parent) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent)?;
            }
            Box::new(BufWriter::new(File::create(p)?))
        }
        None => Box::new(BufWriter::new(std::io::stdout().lock())),
    })
}

fn write_json(mut w: Box<dyn Write>, value: &Value) -> Result<()> {
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

/// Formats with 15 significant digits.
fn sig15(x: f64) -> String {
    let digits = if x == 0.0 { 0 } else { x.abs().log10().floor() as i32 };
    format!("{:.*}", (14 - digits).max(0) as usize, x)
}

pub fn run(cli: &Cli) -> Result<i32> {
    let out_dir = cli.out_dir.as_deref();
    match &cli.command {
        Command::Constants { json, out } => cmd_constants(*json, sink(out_dir, out.as_deref())?),
        Command::AlphaCurve {
            surface,
            beta_min,
            beta_max,
            step,
            out,
        } => {
            let rows = alpha_curve(*surface, *beta_min, *beta_max, *step)?;
            let mut w = csv::Writer::from_writer(sink(out_dir, out.as_deref())?);
            w.write_record(["beta", "case", "s_beta", "sys", "area", "alpha_sys"])?;
            for r in rows {
                w.write_record([
                    r.beta.to_string(),
                    r.case_tag.to_string(),
                    r.s_beta.map_or(String::new(), |s| s.to_string()),
                    r.sys.to_string(),
                    r.area.to_string(),
                    r.alpha_sys.to_string(),
                ])?;
            }
            w.flush()?;
            Ok(EXIT_PASS)
        }
        Command::Defect {
            surface,
            beta,
            profile,
            grid,
            out,
        } => {
            let phi = read_profile_file(profile)?;
            let beta = beta.unwrap_or(phi.beta());
            let spec = SurfaceSpec::new(*surface, beta)?;
            let grid = grid.config()?;
            let report = defect_report(&spec, &phi, &grid)?;
            let manifest = RunManifest::new(
                "defect",
                json!({
                    "surface": surface, "beta": beta, "profile": profile, "grid": grid,
                }),
                None,
            );
            write_json(
                sink(out_dir, out.as_deref())?,
                &json!({ "manifest": manifest, "report": report }),
            )?;
            Ok(EXIT_PASS)
        }
        Command::Verify {
            grid,
            tol,
            seed,
            trials,
            profile,
            surface,
            beta,
            out,
        } => {
            let g = grid.config()?;
            if !(*tol > 0.0) {
                return Err(Error::Config(format!("--tol must be positive, got {tol}")));
            }
            let mut cfg = VerifyConfig {
                systole_grid: g,
                systole_tol: *tol,
                seed: *seed,
                trials: *trials,
                ..VerifyConfig::default()
            };
            cfg.suite_grid = GridConfig {
                stencil: g.stencil,
                k_max: g.k_max,
                m_max: g.m_max,
                ..cfg.suite_grid
            };
            if let Some((nx, ny)) = grid.grid {
                cfg.suite_grid = cfg.suite_grid.with_resolution(nx, ny);
            }
            let (checks, params) = match (profile, surface) {
                (Some(path), Some(kind)) => {
                    let rows = read_profile_rows(File::open(path)?)?;
                    let b = beta.unwrap_or(rows[rows.len() - 1].y);
                    let spec = SurfaceSpec::new(*kind, b)?;
                    let checks = check_profile_rows(&spec, &rows, &cfg)?;
                    (checks, json!({ "config": cfg, "profile": path, "surface": kind, "beta": b }))
                }
                _ => (run_all(&cfg)?, json!({ "config": cfg })),
            };
            cmd_verify_report(out_dir, out.as_deref(), checks, RunManifest::new("verify", params, Some(*seed)))
        }
        Command::ExportCurves {
            beta,
            tau,
            resolution,
            out,
        } => {
            let dir = match (out, out_dir) {
                (Some(p), d) => resolve(d, p),
                (None, Some(d)) => d.to_path_buf(),
                (None, None) => PathBuf::from("."),
            };
            cmd_export_curves(*beta, tau, *resolution, &dir)
        }
    }
}

fn cmd_constants(json: bool, mut w: Box<dyn Write>) -> Result<i32> {
    let rows = [
        ("beta0", beta0(), "ln(1+sqrt 2): round/flat-thin boundary, minimizer of alpha_sys(K)"),
        ("beta1", beta1(), "ln(2+sqrt 3): where phi0 = 1/2"),
        ("pi/4", std::f64::consts::FRAC_PI_4, "thin/round-flat boundary"),
        ("2sqrt2/pi", klein_systolic_constant(), "alpha_sys of the Klein bottle"),
        ("sqrt3/2", 3f64.sqrt() / 2.0, "alpha_sys of the torus"),
        ("2/pi", 2.0 / std::f64::consts::PI, "alpha_sys of the projective plane"),
    ];
    if json {
        let values: serde_json::Map<String, Value> =
            rows.iter().map(|(k, v, _)| (k.to_string(), json!(v))).collect();
        let manifest = RunManifest::new("constants", json!({}), None);
        write_json(w, &json!({ "manifest": manifest, "constants": values }))?;
    } else {
        for (name, v, note) in rows {
            writeln!(w, "{name:<10} = {}  # {note}", sig15(v))?;
        }
        w.flush()?;
    }
    Ok(EXIT_PASS)
}

fn cmd_verify_report(
    out_dir: Option<&Path>,
    out: Option<&Path>,
    checks: Vec<CheckResult>,
    manifest: RunManifest,
) -> Result<i32> {
    let passed = checks.iter().all(|c| c.passed);
    for (i, c) in checks.iter().enumerate() {
        eprintln!(
            "{:>2}. {} {:<24} margin {:+.3e}  {}",
            i + 1,
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.margin,
            c.detail
        );
    }
    let checks: Vec<Value> = checks
        .iter()
        .map(|c| {
            // Infinite margins are not representable in JSON.
            let mut v = serde_json::to_value(c).unwrap_or(Value::Null);
            if !c.margin.is_finite() {
                v["margin"] = Value::Null;
            }
            v
        })
        .collect();
    write_json(
        sink(out_dir, out)?,
        &json!({ "manifest": manifest, "passed": passed, "checks": checks }),
    )?;
    Ok(if passed { EXIT_PASS } else { EXIT_CHECK_FAILED })
}

fn cmd_export_curves(beta: f64, taus: &[f64], resolution: usize, dir: &Path) -> Result<i32> {
    let surface = SurfaceSpec::mobius(beta)?;
    let phi0 = Profile::phi0(beta)?;
    let curves = taus
        .iter()
        .map(|&t| pu_curve(beta, t, resolution))
        .collect::<Result<Vec<_>>>()?;
    std::fs::create_dir_all(dir)?;
    let mut index = csv::Writer::from_path(dir.join("pu_curves.csv"))?;
    index.write_record(["tau", "length", "antipodal_error", "strip_file", "sphere_file"])?;
    for (i, (&tau, curve)) in taus.iter().zip(&curves).enumerate() {
        let strip_name = format!("pu_{i:02}_strip.csv");
        let sphere_name = format!("pu_{i:02}_sphere.csv");
        let mut w = BufWriter::new(File::create(dir.join(&strip_name))?);
        write_curve_csv(&mut w, &surface, curve)?;
        w.flush()?;
        let points = curve
            .vertices()
            .iter()
            .map(|&p| sphere_chart(beta, Point::new(p.x - std::f64::consts::FRAC_PI_2, p.y)))
            .collect::<Result<Vec<_>>>()?;
        let mut w = BufWriter::new(File::create(dir.join(&sphere_name))?);
        write_sphere_csv(&mut w, &points)?;
        w.flush()?;
        let (a, b) = (points[0], points[points.len() - 1]);
        let antipodal = ((a[0] + b[0]).powi(2) + (a[1] + b[1]).powi(2) + (a[2] + b[2]).powi(2)).sqrt();
        let length = curve_length(&surface, &phi0, curve)?;
        index.write_record([
            tau.to_string(),
            length.to_string(),
            antipodal.to_string(),
            strip_name,
            sphere_name,
        ])?;
    }
    index.flush()?;
    Ok(EXIT_PASS)
}
