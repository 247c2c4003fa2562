//! `pcf`: evaluate parabolic cylinder functions, tabulate them, and run the
//! verification suites.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use pcf_core::grid::{self, Function};
use pcf_core::verify::{self, GridSpec, Suite};
use pcf_core::{EvalConfig, EvalResult};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "pcf", version, about = "Parabolic cylinder functions U, V, E±, E, E*, W for complex a and argument")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one function at one point.
    Eval(EvalArgs),
    /// Tabulate a function over a linear range of arguments.
    Table(TableArgs),
    /// Run a verification suite and print its report.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct Common {
    /// U, V, E+, E-, E, Estar or W.
    #[arg(long = "fn", value_parser = parse_function)]
    function: Function,
    /// Parameter as "re,im".
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
    a: Complex64,
    /// Relative tolerance of the quadratures.
    #[arg(long, default_value_t = 1e-12, value_parser = parse_tolerance)]
    rel_tol: f64,
    /// Write to this file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    format: Format,
}

#[derive(Args)]
#[group(multiple = false)]
struct Format {
    #[arg(long)]
    json: bool,
    #[arg(long)]
    csv: bool,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    common: Common,
    /// Argument as "re,im".
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
    arg: Complex64,
}

#[derive(Args)]
struct TableArgs {
    #[command(flatten)]
    common: Common,
    /// First argument, "re,im".
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
    start: Complex64,
    /// Last argument, "re,im".
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
    end: Complex64,
    /// Number of points, at least 1.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    steps: u64,
}

#[derive(Args)]
struct VerifyArgs {
    /// lemma, connection_uv, connection_e, eestar, link, asymptotic, ode, wronskian or all.
    #[arg(long, default_value = "all", value_parser = parse_suite)]
    suite: Suite,
    /// Seed of the random grids.
    #[arg(long, default_value_t = verify::DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value_t = 1e-12, value_parser = parse_tolerance)]
    rel_tol: f64,
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON is the only report format; accepted for symmetry.
    #[arg(long = "json")]
    _json: bool,
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let (re, im) = s.split_once(',').ok_or_else(|| format!("expected \"re,im\", got {s:?}"))?;
    let part = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("bad number {:?} in {s:?}: {e}", t.trim()));
    Ok(Complex64::new(part(re)?, part(im)?))
}

fn parse_function(s: &str) -> Result<Function, String> {
    Function::parse(s).map_err(|e| e.to_string())
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    Suite::parse(s).map_err(|e| e.to_string())
}

fn parse_tolerance(s: &str) -> Result<f64, String> {
    match s.trim().parse::<f64>() {
        Ok(t) if t > 0.0 && t.is_finite() => Ok(t),
        Ok(t) => Err(format!("tolerance must be positive, got {t}")),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Serialize)]
struct Cx {
    re: f64,
    im: f64,
}

impl From<Complex64> for Cx {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

#[derive(Serialize)]
struct Record {
    function: &'static str,
    a: Cx,
    arg: Cx,
    value: Cx,
    abs_err_estimate: f64,
    path: Vec<&'static str>,
}

impl Record {
    fn new(function: Function, a: Complex64, arg: Complex64, r: &EvalResult) -> Self {
        Self {
            function: function.name(),
            a: a.into(),
            arg: arg.into(),
            value: r.value.into(),
            abs_err_estimate: r.abs_err_estimate,
            path: r.path.names(),
        }
    }
}

const CSV_HEADER: &str = "re_arg,im_arg,re_value,im_value,abs_err";

fn csv_row(arg: Complex64, r: &EvalResult) -> String {
    format!("{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}", arg.re, arg.im, r.value.re, r.value.im, r.abs_err_estimate)
}

fn sink(out: &Option<PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn fail(message: impl std::fmt::Display) -> ExitCode {
    println!("{}", serde_json::json!({ "error": message.to_string() }));
    ExitCode::from(1)
}

fn config(rel_tol: f64) -> EvalConfig {
    EvalConfig::default().with_rel_tol(rel_tol)
}

fn points(function: Function, a: Complex64, args: &[Complex64], cfg: &EvalConfig) -> Result<Vec<EvalResult>, String> {
    grid::evaluate(function, a, args, cfg)
        .into_iter()
        .zip(args)
        .map(|(r, z)| r.map_err(|e| format!("{}(a={a}, arg={z}): {e}", function.name())))
        .collect()
}

fn write_points(common: &Common, args: &[Complex64], values: &[EvalResult], single: bool) -> io::Result<()> {
    let mut w = sink(&common.out)?;
    if common.format.csv || (!single && !common.format.json) {
        writeln!(w, "{CSV_HEADER}")?;
        for (z, r) in args.iter().zip(values) {
            writeln!(w, "{}", csv_row(*z, r))?;
        }
    } else {
        let records: Vec<Record> =
            args.iter().zip(values).map(|(z, r)| Record::new(common.function, common.a, *z, r)).collect();
        if single {
            serde_json::to_writer(&mut w, &records[0])?;
        } else {
            serde_json::to_writer(&mut w, &records)?;
        }
        writeln!(w)?;
    }
    w.flush()
}

fn tabulate(common: &Common, args: &[Complex64], single: bool) -> ExitCode {
    let cfg = config(common.rel_tol);
    match points(common.function, common.a, args, &cfg) {
        Ok(values) => match write_points(common, args, &values, single) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => fail(e),
        },
        Err(e) => fail(e),
    }
}

fn run_verify(v: &VerifyArgs) -> ExitCode {
    let spec = GridSpec { seed: v.seed, ..GridSpec::default() };
    let report = verify::run_suite(v.suite, &spec, &config(v.rel_tol));
    let written = sink(&v.out).and_then(|mut w| {
        serde_json::to_writer_pretty(&mut w, &report)?;
        writeln!(w)?;
        w.flush()
    });
    if let Err(e) = written {
        return fail(e);
    }
    if report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Eval(e) => tabulate(&e.common, &[e.arg], true),
        Command::Table(t) => tabulate(&t.common, &grid::linspace(t.start, t.end, t.steps as usize), false),
        Command::Verify(v) => run_verify(&v),
    }
}
