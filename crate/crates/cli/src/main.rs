//! `m2dq`: orbits, star products, verification suites, and evolution runs.

mod config;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{ArgGroup, Args, Parser, Subcommand};
use m2dq_core::{
    classify, classify_rep, evolve_observed, rep_one_param, run_suite, CircleFunction, DualElement,
    Error, ExactSymbol, FloatSymbol, LieAlgebraElement, Orbit, RepresentationLabel, Result, Suite,
    SuiteReport,
};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use config::{env_seed, parse_seed, resolve_suite_config, ConfigFile, SuiteOverrides};

const EXIT_SUITE_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INSTABILITY: u8 = 3;

#[derive(Parser)]
#[command(
    name = "m2dq",
    version,
    about = "Deformation quantization of M(2) from the command line"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the coadjoint orbit of F = (mu, alpha) and its representation.
    Orbit {
        #[arg(long, allow_hyphen_values = true)]
        mu: f64,
        /// Translation part as `a1,a2`.
        #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
        alpha: [f64; 2],
    },
    /// Exact star product of two symbols given as JSON term lists.
    ///
    /// A symbol is `[{"k":..,"n":..,"re":..,"im":..},..]` for Σ c x^k e^{inθ},
    /// a bare number for a constant, or `@path` to read either from a file.
    Star { lhs: String, rhs: String },
    /// Run verification suites and print a JSON report.
    Verify(VerifyArgs),
    /// Integrate dS/dt = l̂_U S on the circle with RK4.
    Evolve(EvolveArgs),
    /// Orbit to representation classification over a parameter sweep, as CSV.
    Table(TableArgs),
}

#[derive(Args)]
#[command(group(ArgGroup::new("which").required(true).args(["suite", "all"])))]
struct VerifyArgs {
    /// Suite to run; repeatable.
    #[arg(long, value_parser = parse_suite)]
    suite: Vec<Suite>,
    /// Run every suite in acceptance order.
    #[arg(long)]
    all: bool,
    #[command(flatten)]
    grid: SuiteFlags,
    /// `key = value` config file; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Leave out the timestamp and runtimes so reports compare byte-for-byte.
    #[arg(long)]
    no_timestamp: bool,
    /// Write the report here instead of stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SuiteFlags {
    #[arg(long, value_parser = parse_seed)]
    seed: Option<u64>,
    /// Half-width of the x box.
    #[arg(long = "L")]
    x_extent: Option<f64>,
    #[arg(long)]
    nx: Option<usize>,
    #[arg(long)]
    ntheta: Option<usize>,
    /// Relative stopping tolerance of the star series.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    r_max: Option<usize>,
    /// Circle mode cutoff.
    #[arg(long = "N")]
    modes: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    t: Option<f64>,
    #[arg(long)]
    dt: Option<f64>,
}

impl SuiteFlags {
    fn overrides(&self) -> SuiteOverrides {
        SuiteOverrides {
            seed: self.seed,
            x_extent: self.x_extent,
            nx: self.nx,
            ntheta: self.ntheta,
            series_tol: self.tol,
            r_max: self.r_max,
            modes: self.modes,
            t: self.t,
            dt: self.dt,
        }
    }
}

#[derive(Args)]
struct EvolveArgs {
    /// Generator as `c1,c2,c3`.
    #[arg(long, value_parser = parse_triple, allow_hyphen_values = true)]
    u: Option<[f64; 3]>,
    /// Cylinder radius.
    #[arg(long)]
    a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    t: Option<f64>,
    #[arg(long)]
    dt: Option<f64>,
    /// Mode cutoff for the default initial data.
    #[arg(long = "N")]
    modes: Option<usize>,
    /// Initial data as CircleFunction JSON; defaults to exp(2 cos θ).
    #[arg(long)]
    input: Option<PathBuf>,
    /// Final state as CircleFunction JSON.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Time series `t,norm,drift,closed_form_error`.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Write every k-th step to the CSV.
    #[arg(long, default_value_t = 1)]
    csv_every: usize,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct TableArgs {
    /// Point orbits mu = min:max:step (alpha = 0).
    #[arg(long, default_value = "-2:2:0.5", value_parser = parse_range, allow_hyphen_values = true)]
    mu_range: Sweep,
    /// Cylinder radii min:max:step (mu = 0, alpha along the first axis).
    #[arg(long, default_value = "0.5:3:0.5", value_parser = parse_range)]
    radius_range: Sweep,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

fn parse_numbers(s: &str, sep: char, count: usize) -> std::result::Result<Vec<f64>, String> {
    let parts: Vec<&str> = s.split(sep).collect();
    if parts.len() != count {
        return Err(format!(
            "expected {count} values separated by {sep:?}, got {s:?}"
        ));
    }
    parts
        .iter()
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("{p:?}: {e}")))
        .collect()
}

fn parse_pair(s: &str) -> std::result::Result<[f64; 2], String> {
    let v = parse_numbers(s, ',', 2)?;
    Ok([v[0], v[1]])
}

fn parse_triple(s: &str) -> std::result::Result<[f64; 3], String> {
    let v = parse_numbers(s, ',', 3)?;
    Ok([v[0], v[1], v[2]])
}

/// Evenly spaced sample points of a `min:max:step` range.
#[derive(Debug, Clone, PartialEq)]
struct Sweep(Vec<f64>);

fn parse_range(s: &str) -> std::result::Result<Sweep, String> {
    let v = parse_numbers(s, ':', 3)?;
    let (lo, hi, step) = (v[0], v[1], v[2]);
    if step.is_nan() || step <= 0.0 || hi < lo {
        return Err(format!("range {s:?} needs min ≤ max and step > 0"));
    }
    let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
    if count > 100_000 {
        return Err(format!("range {s:?} has too many points"));
    }
    Ok(Sweep((0..count).map(|k| lo + k as f64 * step).collect()))
}

fn parse_suite(s: &str) -> std::result::Result<Suite, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Failure that ends the process with a given exit code and JSON body.
struct Failure {
    code: u8,
    kind: &'static str,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (code, kind) = match &e {
            Error::Instability { .. } => (EXIT_INSTABILITY, "instability"),
            Error::SeriesTruncation { .. } => (EXIT_INSTABILITY, "series_truncation"),
            Error::ModeHeadroom { .. } => (EXIT_USAGE, "mode_headroom"),
            Error::Io(_) => (EXIT_USAGE, "io"),
            Error::Json(_) => (EXIT_USAGE, "json"),
            _ => (EXIT_USAGE, "invalid_argument"),
        };
        Failure {
            code,
            kind,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Error::Io(e).into()
    }
}

type CmdResult = std::result::Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Orbit { mu, alpha } => cmd_orbit(mu, alpha),
        Command::Star { lhs, rhs } => cmd_star(&lhs, &rhs),
        Command::Verify(args) => cmd_verify(&args),
        Command::Evolve(args) => cmd_evolve(&args),
        Command::Table(args) => cmd_table(&args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            let body = json!({ "error": { "kind": f.kind, "message": f.message } });
            eprintln!("{body}");
            ExitCode::from(f.code)
        }
    }
}

fn print_json<T: Serialize>(value: &T) -> io::Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer(&mut out, value)?;
    writeln!(out)
}

fn write_or_print(path: Option<&Path>, text: &str) -> io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn orbit_json(mu: f64, alpha: [f64; 2]) -> Result<Value> {
    let orbit = classify(DualElement::new(mu, alpha));
    let label = classify_rep(&orbit);
    let mut v = serde_json::to_value(orbit)?;
    let obj = v.as_object_mut().expect("orbit serializes as an object");
    obj.insert("rep".into(), serde_json::to_value(label)?);
    if !label.is_uir() {
        obj.insert(
            "warning".into(),
            Value::from("non-integral point orbit: the character is not a UIR of M(2)"),
        );
    }
    Ok(v)
}

fn cmd_orbit(mu: f64, alpha: [f64; 2]) -> CmdResult {
    if !(mu.is_finite() && alpha.iter().all(|a| a.is_finite())) {
        return Err(Error::InvalidArgument("orbit coordinates must be finite".into()).into());
    }
    print_json(&orbit_json(mu, alpha)?)?;
    Ok(0)
}

fn read_symbol(arg: &str) -> Result<ExactSymbol> {
    let text = match arg.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path)?,
        None => arg.to_string(),
    };
    let value: Value = serde_json::from_str(&text)?;
    if let Some(c) = value.as_f64() {
        return ExactSymbol::from_float(&FloatSymbol::constant(Complex64::new(c, 0.0)));
    }
    ExactSymbol::from_json(&text)
}

fn cmd_star(lhs: &str, rhs: &str) -> CmdResult {
    let f = read_symbol(lhs)?;
    let g = read_symbol(rhs)?;
    println!("{}", f.star(&g).to_json());
    Ok(0)
}

#[derive(Serialize)]
struct VerifyOutput {
    passed: bool,
    reports: Vec<SuiteReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    timestamp_unix: Option<u64>,
}

fn load_config(path: Option<&PathBuf>) -> Result<ConfigFile> {
    path.map_or_else(|| Ok(ConfigFile::default()), |p| ConfigFile::load(p))
}

fn cmd_verify(args: &VerifyArgs) -> CmdResult {
    let file = load_config(args.config.as_ref())?;
    let config = resolve_suite_config(&args.grid.overrides(), &file, env_seed()?)?;
    let suites: Vec<Suite> = if args.all {
        Suite::ALL.to_vec()
    } else {
        args.suite.clone()
    };
    let mut reports = Vec::new();
    for suite in suites {
        let report = run_suite(suite, &config)?;
        reports.push(if args.no_timestamp {
            report.without_runtime()
        } else {
            report
        });
    }
    let passed = reports.iter().all(|r| r.passed && r.within_runtime());
    let timestamp_unix = (!args.no_timestamp).then(|| {
        SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0)
    });
    let out = VerifyOutput {
        passed,
        reports,
        timestamp_unix,
    };
    let text = serde_json::to_string_pretty(&out).map_err(Error::from)? + "\n";
    write_or_print(args.output.as_deref(), &text)?;
    Ok(if passed { 0 } else { EXIT_SUITE_FAILURE })
}

#[derive(Serialize)]
struct EvolveReport {
    u: [f64; 3],
    a: f64,
    t: f64,
    dt: f64,
    steps: usize,
    modes: usize,
    initial_norm: f64,
    final_norm: f64,
    /// Relative distance to the closed-form one-parameter group at `t`.
    closed_form_error: f64,
}

fn cmd_evolve(args: &EvolveArgs) -> CmdResult {
    let file = load_config(args.config.as_ref())?;
    let coords = match args.u {
        Some(u) => u,
        None => [
            file.get("c1")?.unwrap_or(1.0),
            file.get("c2")?.unwrap_or(0.0),
            file.get("c3")?.unwrap_or(0.0),
        ],
    };
    let u = LieAlgebraElement::from_array(coords);
    let a = args.a.or(file.get("a")?).unwrap_or(1.0);
    let t = args.t.or(file.get("t")?).unwrap_or(1.0);
    let dt = args.dt.or(file.get("dt")?).unwrap_or(1e-3);
    let modes = args.modes.or(file.get("N")?).unwrap_or(64);
    if args.csv_every == 0 {
        return Err(Error::InvalidArgument("--csv-every must be positive".into()).into());
    }

    let f0: CircleFunction = match &args.input {
        Some(path) => serde_json::from_reader(File::open(path)?).map_err(Error::from)?,
        None => CircleFunction::from_fn(modes, 4 * modes, |th| {
            Complex64::new((2.0 * th.cos()).exp(), 0.0)
        }),
    };
    let norm0 = f0.norm();
    let rel = |x: f64| if norm0 > 0.0 { x / norm0 } else { x };

    let mut csv = match &args.csv {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p)?);
            writeln!(w, "t,norm,drift,closed_form_error")?;
            Some(w)
        }
        None => None,
    };
    let mut step = 0usize;
    let mut csv_error: Option<Failure> = None;
    let final_state = evolve_observed(u, a, &f0, t, dt, |time, state| {
        let due = step % args.csv_every == 0;
        step += 1;
        let Some(w) = csv.as_mut().filter(|_| due && csv_error.is_none()) else {
            return;
        };
        let row = rep_one_param(u, time, a, &f0)
            .and_then(|exact| state.distance(&exact))
            .map_err(Failure::from)
            .and_then(|err| {
                writeln!(
                    w,
                    "{time},{},{},{}",
                    state.norm(),
                    rel((state.norm() - norm0).abs()),
                    rel(err)
                )
                .map_err(Failure::from)
            });
        if let Err(e) = row {
            csv_error = Some(e);
        }
    })?;
    if let Some(e) = csv_error {
        return Err(e);
    }
    if let Some(mut w) = csv {
        w.flush()?;
    }

    let exact = rep_one_param(u, t, a, &f0)?;
    if let Some(p) = &args.output {
        let text = serde_json::to_string(&final_state).map_err(Error::from)? + "\n";
        std::fs::write(p, text)?;
    }
    let steps = if t == 0.0 {
        0
    } else {
        (t.abs() / dt).round().max(1.0) as usize
    };
    print_json(&EvolveReport {
        u: coords,
        a,
        t,
        dt,
        steps,
        modes: f0.cutoff(),
        initial_norm: norm0,
        final_norm: final_state.norm(),
        closed_form_error: rel(final_state.distance(&exact)?),
    })?;
    Ok(0)
}

fn table_row(mu: f64, alpha: [f64; 2]) -> String {
    let orbit = classify(DualElement::new(mu, alpha));
    let (kind, radius) = match orbit {
        Orbit::Point { .. } => ("point", String::new()),
        Orbit::Cylinder { radius } => ("cylinder", radius.to_string()),
    };
    let label = classify_rep(&orbit);
    let (rep, param) = match label {
        RepresentationLabel::Principal(a) => ("principal", a.to_string()),
        RepresentationLabel::Character(n) => ("character", n.to_string()),
        RepresentationLabel::CharacterNonIntegral(m) => ("character_non_integral", m.to_string()),
    };
    format!(
        "{mu},{},{},{kind},{radius},{rep},{param},{}\n",
        alpha[0],
        alpha[1],
        label.is_uir()
    )
}

fn cmd_table(args: &TableArgs) -> CmdResult {
    let mut text = String::from("mu,alpha1,alpha2,orbit,radius,representation,parameter,uir\n");
    for &mu in &args.mu_range.0 {
        text.push_str(&table_row(mu, [0.0, 0.0]));
    }
    for &r in &args.radius_range.0 {
        if r > 0.0 {
            text.push_str(&table_row(0.0, [r, 0.0]));
        }
    }
    write_or_print(args.output.as_deref(), &text)?;
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("0:1:0.5").unwrap().0, vec![0.0, 0.5, 1.0]);
        assert_eq!(parse_range("-2:2:2").unwrap().0, vec![-2.0, 0.0, 2.0]);
        assert!(parse_range("1:0:1").is_err());
        assert!(parse_range("0:1:0").is_err());
        assert!(parse_range("0:1").is_err());
    }

    #[test]
    fn orbit_json_shapes() {
        assert_eq!(
            orbit_json(0.0, [3.0, 4.0]).unwrap(),
            json!({"kind": "cylinder", "radius": 5.0, "rep": {"principal": 5.0}})
        );
        assert_eq!(
            orbit_json(2.0, [0.0, 0.0]).unwrap(),
            json!({"kind": "point", "mu": 2.0, "rep": {"character": 2}})
        );
        let v = orbit_json(0.5, [0.0, 0.0]).unwrap();
        assert_eq!(v["rep"], json!({"character_non_integral": 0.5}));
        assert!(v["warning"].is_string());
    }

    #[test]
    fn table_rows() {
        assert_eq!(
            table_row(1.5, [0.0, 0.0]),
            "1.5,0,0,point,,character_non_integral,1.5,false\n"
        );
        assert_eq!(
            table_row(0.0, [2.0, 0.0]),
            "0,2,0,cylinder,2,principal,2,true\n"
        );
    }
}
