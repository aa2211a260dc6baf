//! Batch command-line surface over the `ptspec` library: spectrum
//! classification, eigenvalue search in a region, whole-line eigenfunction
//! export, metric-operator reports, singular-sequence tables, and resolvent
//! verification.
//!
//! Reports are JSON objects on stdout; sampled artifacts are CSV, written to
//! stdout or to `--out`. Output is deterministic for fixed inputs except for
//! the `generated_at_unix_s` field of JSON reports, which `--no-timestamp`
//! removes; CSV never carries a timestamp.
//!
//! Exit codes: 0 success, 2 input error, 3 regime refusal (the requested
//! quantity is not defined in the model's spectral regime), 4 numerical
//! failure.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde_json::{json, Value};

use ptspec::boundary_conditions::bc_residual_connected;
use ptspec::complex_roots::{Rectangle, RootConfig};
use ptspec::interval_spectra::{
    classify, eigenvalues_in_region, interface_matrix, IntervalModel, SpectrumTag,
};
use ptspec::line_model::{
    metric_invertible, metric_spectrum, point_spectrum_member, weyl_residual, LineModel,
};
use ptspec::piecewise_grid::{
    apply_second_derivative, bump, bump_d1, GridConfig, PiecewiseFunction,
};
use ptspec::resolvent::{apply_resolvent, resolvent_residuals, ResolventContext};
use ptspec::Error;

type C = Complex64;

const EXIT_INPUT: u8 = 2;
const EXIT_REGIME: u8 = 3;
const EXIT_NUMERICAL: u8 = 4;

/// A command failure carrying the exit code its error class mandates.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }

    fn regime(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_REGIME,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::InvalidParameter(_) | Error::GridMismatch(_) | Error::WrongFamily { .. } => {
                EXIT_INPUT
            }
            Error::RegimeRefusal(_) | Error::NoEigenfunction(_) => EXIT_REGIME,
            Error::ZeroOnContour | Error::RootSearchFailed(_) | Error::NumericalFailure(_) => {
                EXIT_NUMERICAL
            }
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "ptspec-cli",
    version,
    about = "Spectra of one-dimensional second-derivative operators with point interactions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify an interval model's spectrum as discrete, empty, or the
    /// entire complex plane.
    Classify(ClassifyArgs),
    /// Find the eigenvalue wavenumbers of a discrete-spectrum interval model
    /// inside a rectangle.
    Spectrum(SpectrumArgs),
    /// Build a whole-line eigenfunction at a given spectral point and verify
    /// its residuals.
    LineDemo(LineDemoArgs),
    /// Report the metric operator's eigenvalues and invertibility at an
    /// interface angle.
    Metric(MetricArgs),
    /// Tabulate singular-sequence residuals against their closed-form bounds.
    Weyl(WeylArgs),
    /// Apply the resolvent of a separated-family interval model to a named
    /// profile and verify the residuals.
    Resolvent(ResolventArgs),
}

#[derive(Args)]
struct ClassifyArgs {
    /// Model description: a path to a JSON file, or an inline JSON object.
    #[arg(long)]
    model: String,
    /// Omit the generation timestamp so output is byte-identical across runs.
    #[arg(long)]
    no_timestamp: bool,
}

#[derive(Args)]
struct SpectrumArgs {
    /// Model description: a path to a JSON file, or an inline JSON object.
    #[arg(long)]
    model: String,
    /// Search rectangle in the wavenumber plane: re_min,re_max,im_min,im_max.
    #[arg(long, allow_hyphen_values = true)]
    region: String,
    /// Write the root CSV here instead of stdout (a JSON summary then goes
    /// to stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Omit the generation timestamp so output is byte-identical across runs.
    #[arg(long)]
    no_timestamp: bool,
}

#[derive(Args)]
struct LineDemoArgs {
    /// Interface angle φ in radians.
    #[arg(long, allow_negative_numbers = true)]
    phi: f64,
    /// Spectral point λ as `re,im` (a lone `re` means zero imaginary part).
    #[arg(long, allow_hyphen_values = true)]
    lambda: String,
    /// Subintervals per side of the sampling grid (even, at least 64).
    #[arg(long, default_value_t = 2048)]
    grid_n: usize,
    /// Finite-difference accuracy order (2, 4, or 6) for the residual report.
    #[arg(long, default_value_t = 6)]
    fd_order: usize,
    /// Write the eigenfunction samples as CSV to this path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Omit the generation timestamp so output is byte-identical across runs.
    #[arg(long)]
    no_timestamp: bool,
}

#[derive(Args)]
struct MetricArgs {
    /// Interface angle φ in radians.
    #[arg(long, allow_negative_numbers = true)]
    phi: f64,
    /// Omit the generation timestamp so output is byte-identical across runs.
    #[arg(long)]
    no_timestamp: bool,
}

#[derive(Args)]
struct WeylArgs {
    /// Wavenumber of the essential-spectrum point λ = k².
    #[arg(long, allow_negative_numbers = true)]
    k: f64,
    /// Comma-separated sequence indices, e.g. 4,8,16,32 (each at least 2).
    #[arg(long)]
    n_list: String,
    /// Write the table CSV here instead of stdout (a JSON summary then goes
    /// to stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Omit the generation timestamp so output is byte-identical across runs.
    #[arg(long)]
    no_timestamp: bool,
}

#[derive(Args)]
struct ResolventArgs {
    /// Model description: a path to a JSON file, or an inline JSON object.
    /// Must use the separated outer family.
    #[arg(long)]
    model: String,
    /// Spectral parameter λ as `re,im`.
    #[arg(long, allow_hyphen_values = true)]
    lambda: String,
    /// Right-hand-side profile: gaussian, bump, or constant.
    #[arg(long, default_value = "gaussian")]
    g: String,
    /// Subintervals per side of the sampling grid (even, at least 64).
    #[arg(long, default_value_t = 2048)]
    grid_n: usize,
    /// Finite-difference accuracy order (2, 4, or 6) for the residual report.
    #[arg(long, default_value_t = 6)]
    fd_order: usize,
    /// Write the sampled right-hand side and its resolvent image as CSV to
    /// this path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Omit the generation timestamp so output is byte-identical across runs.
    #[arg(long)]
    no_timestamp: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Classify(a) => cmd_classify(a),
        Command::Spectrum(a) => cmd_spectrum(a),
        Command::LineDemo(a) => cmd_line_demo(a),
        Command::Metric(a) => cmd_metric(a),
        Command::Weyl(a) => cmd_weyl(a),
        Command::Resolvent(a) => cmd_resolvent(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

/// Parses a model from an inline JSON object or a path to a JSON file.
fn load_model(source: &str) -> Result<IntervalModel, Failure> {
    let text = if source.trim_start().starts_with('{') {
        source.to_string()
    } else {
        fs::read_to_string(source)
            .map_err(|e| Failure::input(format!("cannot read model file {source}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| Failure::input(format!("invalid model JSON: {e}")))
}

fn parse_complex(s: &str) -> Result<C, Failure> {
    let parts: Vec<&str> = s.split(',').collect();
    let parse = |p: &str| {
        p.trim()
            .parse::<f64>()
            .map_err(|e| Failure::input(format!("invalid number {p:?}: {e}")))
    };
    match parts.as_slice() {
        [re] => Ok(C::new(parse(re)?, 0.0)),
        [re, im] => Ok(C::new(parse(re)?, parse(im)?)),
        _ => Err(Failure::input(format!(
            "expected a complex number as re,im, got {s:?}"
        ))),
    }
}

fn parse_region(s: &str) -> Result<Rectangle, Failure> {
    let parts: Result<Vec<f64>, Failure> = s
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|e| Failure::input(format!("invalid number {p:?} in region: {e}")))
        })
        .collect();
    let parts = parts?;
    let [re_min, re_max, im_min, im_max] = parts.as_slice() else {
        return Err(Failure::input(format!(
            "expected a region as re_min,re_max,im_min,im_max, got {s:?}"
        )));
    };
    Rectangle::new(*re_min, *re_max, *im_min, *im_max).map_err(Failure::from)
}

fn parse_n_list(s: &str) -> Result<Vec<usize>, Failure> {
    let ns: Result<Vec<usize>, Failure> = s
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<usize>()
                .map_err(|e| Failure::input(format!("invalid index {p:?} in n-list: {e}")))
        })
        .collect();
    let ns = ns?;
    if ns.is_empty() {
        return Err(Failure::input("n-list must not be empty"));
    }
    Ok(ns)
}

/// Prints a JSON report to stdout, stamping the generation time unless the
/// caller disabled it. Keys serialize in sorted order, so for fixed inputs
/// the output is byte-identical up to this one field.
fn emit_report(mut report: Value, no_timestamp: bool) {
    if !no_timestamp {
        let secs = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        report
            .as_object_mut()
            .expect("reports are JSON objects")
            .insert("generated_at_unix_s".into(), json!(secs));
    }
    println!(
        "{}",
        serde_json::to_string_pretty(&report).expect("report serializes")
    );
}

fn create_out(path: &Path) -> Result<fs::File, Failure> {
    fs::File::create(path)
        .map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display())))
}

fn write_failed(path: &Path, e: io::Error) -> Failure {
    Failure::input(format!("cannot write {}: {e}", path.display()))
}

/// Writes one sampled function in the library's CSV layout.
fn write_function_csv(path: &Path, f: &PiecewiseFunction) -> Result<(), Failure> {
    let mut w = io::BufWriter::new(create_out(path)?);
    f.write_csv(&mut w).map_err(|e| write_failed(path, e))?;
    w.flush().map_err(|e| write_failed(path, e))
}

/// Writes a right-hand side and its resolvent image on the shared grid as
/// `x,side,re_g,im_g,re_resolvent,im_resolvent` rows, left segment first.
fn write_pair_csv(path: &Path, g: &PiecewiseFunction, r: &PiecewiseFunction) -> Result<(), Failure> {
    let mut w = io::BufWriter::new(create_out(path)?);
    let go = |w: &mut dyn Write| -> io::Result<()> {
        writeln!(w, "x,side,re_g,im_g,re_resolvent,im_resolvent")?;
        for (i, (zg, zr)) in g.left.iter().zip(r.left.iter()).enumerate() {
            writeln!(
                w,
                "{:.16e},L,{:.16e},{:.16e},{:.16e},{:.16e}",
                g.x_left(i),
                zg.re,
                zg.im,
                zr.re,
                zr.im
            )?;
        }
        for (i, (zg, zr)) in g.right.iter().zip(r.right.iter()).enumerate() {
            writeln!(
                w,
                "{:.16e},R,{:.16e},{:.16e},{:.16e},{:.16e}",
                g.x_right(i),
                zg.re,
                zg.im,
                zr.re,
                zr.im
            )?;
        }
        w.flush()
    };
    go(&mut w).map_err(|e| write_failed(path, e))
}

fn cjson(z: C) -> Value {
    json!([z.re, z.im])
}

fn cmd_classify(a: ClassifyArgs) -> Result<(), Failure> {
    let model = load_model(&a.model)?;
    let class = classify(&model);
    let witness: Vec<Value> = class
        .witness
        .iter()
        .map(|w| json!({ "name": w.name, "value": cjson(w.value) }))
        .collect();
    emit_report(
        json!({
            "class": format!("{:?}", class.tag),
            "condition_evaluated": class.condition_evaluated,
            "witness_values": witness,
            "model": {
                "l": model.l(),
                "phi": model.phi(),
                "outer_family": model.outer().family_name(),
            },
        }),
        a.no_timestamp,
    );
    Ok(())
}

fn cmd_spectrum(a: SpectrumArgs) -> Result<(), Failure> {
    let model = load_model(&a.model)?;
    let region = parse_region(&a.region)?;
    let class = classify(&model);
    if class.tag != SpectrumTag::Discrete {
        return Err(Failure::regime(format!(
            "eigenvalue search requires a discrete spectrum, but this model classifies as \
             {:?}: {}",
            class.tag, class.condition_evaluated
        )));
    }
    let roots = eigenvalues_in_region(&model, &region, &RootConfig::default())?;
    match &a.out {
        Some(path) => {
            let mut w = io::BufWriter::new(create_out(path)?);
            roots.write_csv(&mut w).map_err(|e| write_failed(path, e))?;
            w.flush().map_err(|e| write_failed(path, e))?;
            emit_report(
                json!({
                    "roots_found": roots.roots.len(),
                    "total_winding": roots.total_winding,
                    "csv": path.display().to_string(),
                }),
                a.no_timestamp,
            );
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            roots
                .write_csv(&mut w)
                .map_err(|e| Failure::input(format!("cannot write to stdout: {e}")))?;
        }
    }
    Ok(())
}

fn cmd_line_demo(a: LineDemoArgs) -> Result<(), Failure> {
    let lambda = parse_complex(&a.lambda)?;
    let model = LineModel::new(a.phi)?;
    let cfg = GridConfig {
        grid_n: a.grid_n,
        truncation: 34.0,
        fd_order: a.fd_order,
    };
    cfg.validate()?;
    let Some((branch, f)) = point_spectrum_member(&model, lambda, &cfg)? else {
        return Err(Failure::regime(format!(
            "lambda = {},{} is not in the point spectrum at phi = {}: the whole-line model \
             has eigenvalues only at phi = ±π/2, and only away from the ray [0, ∞)",
            lambda.re,
            lambda.im,
            model.phi()
        )));
    };
    let interface_residual = bc_residual_connected(&f.traces, &interface_matrix(model.phi()));
    let lf = apply_second_derivative(&f, a.fd_order)?;
    let fd_eigen_residual = lf.sub(&f.scaled(lambda))?.norm();
    let mut report = json!({
        "phi": model.phi(),
        "lambda": cjson(lambda),
        "branch": serde_json::to_value(branch).expect("branch serializes"),
        "interface_residual": interface_residual,
        "fd_eigen_residual": fd_eigen_residual,
        "norm": f.norm(),
        "window": [f.a(), f.b()],
        "grid_n": a.grid_n,
    });
    if let Some(path) = &a.out {
        write_function_csv(path, &f)?;
        report
            .as_object_mut()
            .expect("report is an object")
            .insert("csv".into(), json!(path.display().to_string()));
    }
    emit_report(report, a.no_timestamp);
    Ok(())
}

fn cmd_metric(a: MetricArgs) -> Result<(), Failure> {
    let model = LineModel::new(a.phi)?;
    let [lo, hi] = metric_spectrum(&model);
    emit_report(
        json!({
            "phi": model.phi(),
            "metric_eigenvalues": [lo, hi],
            "invertible": metric_invertible(&model),
        }),
        a.no_timestamp,
    );
    Ok(())
}

fn cmd_weyl(a: WeylArgs) -> Result<(), Failure> {
    let ns = parse_n_list(&a.n_list)?;
    let mut rows = Vec::with_capacity(ns.len());
    for &n in &ns {
        let (residual, bound) = weyl_residual(a.k, n)?;
        rows.push((n, residual, bound));
    }
    let write_table = |w: &mut dyn Write| -> io::Result<()> {
        writeln!(w, "n,residual,bound")?;
        for (n, residual, bound) in &rows {
            writeln!(w, "{n},{residual:.16e},{bound:.16e}")?;
        }
        w.flush()
    };
    match &a.out {
        Some(path) => {
            let mut w = io::BufWriter::new(create_out(path)?);
            write_table(&mut w).map_err(|e| write_failed(path, e))?;
            emit_report(
                json!({
                    "k": a.k,
                    "rows": rows.len(),
                    "csv": path.display().to_string(),
                }),
                a.no_timestamp,
            );
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            write_table(&mut w)
                .map_err(|e| Failure::input(format!("cannot write to stdout: {e}")))?;
        }
    }
    Ok(())
}

/// Builds the named right-hand-side profile, sampled on `(-l, l)`.
fn rhs_profile(name: &str, l: f64, grid_n: usize) -> Result<PiecewiseFunction, Failure> {
    let build = |f: Box<dyn Fn(f64) -> C>, df: Box<dyn Fn(f64) -> C>| {
        PiecewiseFunction::from_closure(-l, l, grid_n, &f, &df, &f, &df).map_err(Failure::from)
    };
    match name {
        "gaussian" => {
            let s = l / 4.0;
            build(
                Box::new(move |x| C::new((-x * x / (2.0 * s * s)).exp(), 0.0)),
                Box::new(move |x| C::new(-x / (s * s) * (-x * x / (2.0 * s * s)).exp(), 0.0)),
            )
        }
        "bump" => build(
            Box::new(move |x| C::new(bump(x / l), 0.0)),
            Box::new(move |x| C::new(bump_d1(x / l) / l, 0.0)),
        ),
        "constant" => build(
            Box::new(|_| C::new(1.0, 0.0)),
            Box::new(|_| C::new(0.0, 0.0)),
        ),
        other => Err(Failure::input(format!(
            "unknown profile {other:?}: expected gaussian, bump, or constant"
        ))),
    }
}

fn cmd_resolvent(a: ResolventArgs) -> Result<(), Failure> {
    let model = load_model(&a.model)?;
    let lambda = parse_complex(&a.lambda)?;
    let cfg = GridConfig {
        grid_n: a.grid_n,
        truncation: 34.0,
        fd_order: a.fd_order,
    };
    cfg.validate()?;
    let ctx = ResolventContext::new(&model, lambda)?;
    let g = rhs_profile(&a.g, model.l(), a.grid_n)?;
    let (r, _) = apply_resolvent(&ctx, &g)?;
    let res = resolvent_residuals(&ctx, &g, &r, a.fd_order)?;
    let mut report = json!({
        "lambda": cjson(lambda),
        "k": cjson(ctx.k()),
        "rhs_profile": a.g,
        "grid_n": a.grid_n,
        "fd_order": a.fd_order,
        "residuals": {
            "pde": res.pde,
            "interface": res.interface,
            "outer": res.outer,
        },
    });
    if let Some(path) = &a.out {
        write_pair_csv(path, &g, &r)?;
        report
            .as_object_mut()
            .expect("report is an object")
            .insert("csv".into(), json!(path.display().to_string()));
    }
    emit_report(report, a.no_timestamp);
    Ok(())
}
