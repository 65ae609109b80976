use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use lightcone::catalog;
use lightcone::classify::{classify_grid, write_classification_csv};
use lightcone::curvature::{curvature_grid, write_curvature_csv};
use lightcone::expr::parse;
use lightcone::format::g12;
use lightcone::limits::{boundedness_report, limit_along, write_samples_csv, ApproachPath, Quantity};
use lightcone::surface::{validate_framed, Domain, ScalarField, SurfaceDef};
use lightcone::trace::{trace_zero_set, write_trace_csv};

mod demo;

#[derive(Parser)]
#[command(name = "lightcone", version, about = "Invariants of lightcone framed surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the framed-surface conditions on a grid
    Validate(Common),
    /// Classify grid points; writes classification.csv
    Classify(Common),
    /// Curvature packets over the grid; writes curvature.csv
    Curvature(Common),
    /// Trace lightlike or 1-st singular curves; writes trace.csv
    Trace {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Field::LambdaTil)]
        field: Field,
        #[arg(long, default_value_t = 1e-10)]
        refine_tol: f64,
        /// Override the u interval, e.g. `-1.6,1.6`
        #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
        u_range: Option<(f64, f64)>,
        /// Override the v interval
        #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
        v_range: Option<(f64, f64)>,
    },
    /// Limits of K and H at a lightlike or 1-st singular point
    Limits {
        #[command(flatten)]
        common: Common,
        /// Target point, e.g. `pi/2,1`
        #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
        at: (f64, f64),
        /// Report a single quantity
        #[arg(long)]
        quantity: Option<Quantity>,
        #[arg(long, default_value_t = 8)]
        directions: usize,
    },
    /// Run the bundled sphere pipeline against its reference values
    Demo {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Common {
    /// Surface file, or the name of a built-in surface
    surface: String,
    #[arg(long, value_parser = parse_grid, default_value = "64x64")]
    grid: (usize, usize),
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Output directory; standard output when absent
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Field {
    #[value(name = "lambda_til")]
    LambdaTil,
    #[value(name = "c2")]
    C2,
}

fn parse_grid(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(['x', 'X']).ok_or("expected NUxNV, e.g. 64x64")?;
    let n = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("`{t}`: {e}"));
    Ok((n(a)?, n(b)?))
}

fn parse_value(s: &str) -> Result<f64, String> {
    let e = parse(s.trim()).map_err(|e| format!("`{s}`: {e}"))?;
    e.eval_const().map_err(|_| format!("`{s}` is not a constant"))
}

fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or("expected two comma-separated values")?;
    Ok((parse_value(a)?, parse_value(b)?))
}

/// Failures that map to exit status 1.
#[derive(Debug)]
struct Failed(String);

impl std::fmt::Display for Failed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Failed {}

/// Input errors that map to exit status 2.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn load_surface(arg: &str) -> anyhow::Result<SurfaceDef> {
    let path = Path::new(arg);
    if path.exists() {
        return SurfaceDef::load(path).map_err(|e| Usage(e.to_string()).into());
    }
    catalog::by_name(arg).ok_or_else(|| {
        Usage(format!(
            "{arg}: no such file or built-in surface (built-ins: {})",
            catalog::NAMES.join(", ")
        ))
        .into()
    })
}

fn check_common(c: &Common) -> anyhow::Result<()> {
    if c.tol.is_nan() || c.tol <= 0.0 {
        return Err(Usage(format!("--tol must be positive, got {}", c.tol)).into());
    }
    Ok(())
}

/// Writes to `dir/name`, or to standard output without `--out`.
fn emit(out: &Option<PathBuf>, name: &str, write: impl FnOnce(&mut dyn Write) -> anyhow::Result<()>) -> anyhow::Result<()> {
    match out {
        Some(dir) => {
            fs::create_dir_all(dir).with_context(|| format!("{}", dir.display()))?;
            let path = dir.join(name);
            let mut f = io::BufWriter::new(
                fs::File::create(&path).with_context(|| format!("{}", path.display()))?,
            );
            write(&mut f)?;
            f.flush().with_context(|| format!("{}", path.display()))?;
            eprintln!("wrote {}", path.display());
            Ok(())
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            write(&mut lock)
        }
    }
}

/// The analysis commands run on validated surfaces only.
fn admitted(s: &SurfaceDef) -> anyhow::Result<()> {
    let r = validate_framed(s, 32, 32, 1e-8)?;
    if let Some(w) = r.witness {
        bail!(Failed(format!(
            "{}: not a lightcone framed surface with a2 = b2 = 0: {:?} fails at ({}, {}) by {}",
            s.name(),
            w.check,
            g12(w.u),
            g12(w.v),
            g12(w.value)
        )));
    }
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Validate(c) => {
            check_common(&c)?;
            let s = load_surface(&c.surface)?;
            let (nu, nv) = c.grid;
            let r = validate_framed(&s, nu, nv, c.tol)?;
            let text = validation_text(&s, &r);
            emit(&c.out, "validation.txt", |w| Ok(w.write_all(text.as_bytes())?))?;
            if let Some(w) = r.witness {
                bail!(Failed(format!(
                    "rejected: {:?} fails at ({}, {})",
                    w.check,
                    g12(w.u),
                    g12(w.v)
                )));
            }
        }
        Command::Classify(c) => {
            check_common(&c)?;
            let s = load_surface(&c.surface)?;
            admitted(&s)?;
            let rows = classify_grid(&s, c.grid.0, c.grid.1, c.tol)?;
            emit(&c.out, "classification.csv", |w| Ok(write_classification_csv(&rows, w)?))?;
        }
        Command::Curvature(c) => {
            check_common(&c)?;
            let s = load_surface(&c.surface)?;
            admitted(&s)?;
            let rows = curvature_grid(&s, c.grid.0, c.grid.1)?;
            emit(&c.out, "curvature.csv", |w| Ok(write_curvature_csv(&rows, w)?))?;
        }
        Command::Trace {
            common: c,
            field,
            refine_tol,
            u_range,
            v_range,
        } => {
            check_common(&c)?;
            if refine_tol.is_nan() || refine_tol <= 0.0 {
                return Err(Usage(format!("--refine-tol must be positive, got {refine_tol}")).into());
            }
            let mut s = load_surface(&c.surface)?;
            admitted(&s)?;
            if u_range.is_some() || v_range.is_some() {
                let d = s.domain();
                let d = Domain::new(u_range.unwrap_or(d.u), v_range.unwrap_or(d.v))
                    .map_err(|e| Usage(e.to_string()))?;
                s = s.with_domain(d);
            }
            let field = match field {
                Field::LambdaTil => ScalarField::LambdaTil,
                Field::C2 => ScalarField::C2,
            };
            let lines = trace_zero_set(&s, field, c.grid.0, c.grid.1, refine_tol)?;
            emit(&c.out, "trace.csv", |w| Ok(write_trace_csv(&lines, w)?))?;
        }
        Command::Limits {
            common: c,
            at,
            quantity,
            directions,
        } => {
            check_common(&c)?;
            if directions == 0 {
                return Err(Usage("--directions must be at least 1".into()).into());
            }
            let s = load_surface(&c.surface)?;
            admitted(&s)?;
            let report = boundedness_report(&s, at.0, at.1, directions, c.tol)?;
            let text = match quantity {
                None => report.to_text(),
                Some(q) => single_quantity_text(&s, &report, q),
            };
            emit(&c.out, "limits.txt", |w| Ok(w.write_all(text.as_bytes())?))?;
            if let Some(dir) = &c.out {
                emit(&Some(dir.clone()), "limits.csv", |w| Ok(write_samples_csv(&report, w)?))?;
            }
        }
        Command::Demo { out } => {
            let outcome = demo::run(out.as_deref())?;
            print!("{}", outcome.report);
            if !outcome.diffs.is_empty() {
                for d in &outcome.diffs {
                    eprintln!("{d}");
                }
                bail!(Failed(format!("{} reference value(s) differ", outcome.diffs.len())));
            }
        }
    }
    Ok(())
}

fn validation_text(s: &SurfaceDef, r: &lightcone::surface::FramedValidationReport) -> String {
    let mut t = String::new();
    t += &format!("surface: {}\n", s.name());
    t += &format!("grid: {}x{}\n", r.grid.0, r.grid.1);
    t += &format!("tol: {}\n", g12(r.tol));
    t += &format!("max_area_residual: {}\n", g12(r.max_area_residual));
    t += &format!("max_abs_a2: {}\n", g12(r.max_abs_a2));
    t += &format!("max_abs_b2: {}\n", g12(r.max_abs_b2));
    t += &format!("max_delta4_residual: {}\n", g12(r.max_delta4_residual));
    t += &format!("admitted: {}\n", r.admitted);
    if let Some(w) = &r.witness {
        t += &format!("witness: {:?} at {}, {} value {}\n", w.check, g12(w.u), g12(w.v), g12(w.value));
    }
    t
}

fn single_quantity_text(s: &SurfaceDef, report: &lightcone::limits::BoundednessReport, q: Quantity) -> String {
    let mut t = format!("point: {}, {}\nclass: {}\nquantity: {q}\n", g12(report.u), g12(report.v), report.class);
    for (k, d) in report.directions.iter().enumerate() {
        let path = ApproachPath::new((report.u, report.v), d.direction);
        let line = match limit_along(s, &path, q) {
            Ok(v) => format!(
                "{} slope={} l={} m={}",
                v.verdict, g12(v.slope), v.numerator_order.order, v.gamma_order.order
            ),
            Err(e) => format!("error: {e}"),
        };
        t += &format!(
            "direction.{k}: {}, {}{} {line}\n",
            g12(d.direction.0),
            g12(d.direction.1),
            if d.transversal { " (transversal)" } else { "" }
        );
    }
    t
}

fn is_usage(e: &anyhow::Error) -> bool {
    use lightcone::Error as E;
    e.downcast_ref::<Usage>().is_some()
        || matches!(
            e.downcast_ref::<E>(),
            Some(
                E::Parse { .. }
                    | E::SurfaceFile { .. }
                    | E::InvalidDomain(_)
                    | E::InvalidGrid { .. }
                    | E::WrongClass { .. }
                    | E::Precondition { .. }
            )
        )
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if is_usage(&e) {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
