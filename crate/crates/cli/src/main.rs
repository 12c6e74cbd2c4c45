//! `remez`: bounds, empirical degrees and verification suites from the
//! command line.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use remez_core::analysis::{bernstein_index, valency_global, ValencyConfig};
use remez_core::bounds::{
    ball_pair_bound, bg_bound, bg_simplified, convex_body_bound, quasipoly_zero_bound, remez_interval_bound, BoundValue,
};
use remez_core::estimation::{
    empirical_chebyshev_degree, format_reports, run_suite, OutputFormat, RunConfig, Suite, Table,
};
use remez_core::function::{parse_function_spec, AnalyticExpr};
use remez_core::Error;
use serde_json::Value;

const EXIT_FAIL: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_PARSE: u8 = 3;
const EXIT_DEGENERATE: u8 = 4;

#[derive(Parser, Debug)]
#[command(name = "remez", version, about = "Remez-type inequalities for analytic functions")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a closed-form bound.
    #[command(subcommand)]
    Bound(BoundCmd),
    /// Empirical Chebyshev degree of a function.
    Degree {
        spec: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Run a verification suite; exit 1 if any check fails.
    Verify {
        /// remez1d, convex, logbmo, bourgain, orlicz, holder, quasipoly, prop3, composition or all
        suite: String,
        /// Function spec; each suite has a built-in default.
        spec: Option<PathBuf>,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Valency on B_c(0, t) over sampled complex lines.
    Valency {
        spec: PathBuf,
        #[arg(long)]
        t: f64,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Bernstein index b_f(s, t, r).
    Bernstein {
        spec: PathBuf,
        #[arg(long)]
        s: f64,
        #[arg(long)]
        t: f64,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Subcommand, Debug)]
enum BoundCmd {
    /// T_k((1 + beta)/(1 - beta)), beta = (1 - lambda)^(1/n).
    Bg {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        lambda: f64,
    },
    /// (4n |V| / |omega|)^k.
    Simplified {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        n: u32,
        #[arg(long = "vol-v")]
        vol_v: f64,
        #[arg(long = "vol-omega")]
        vol_omega: f64,
    },
    /// (4 |I| / |omega|)^d.
    Remez {
        #[arg(long = "I")]
        len_i: f64,
        #[arg(long = "omega")]
        len_omega: f64,
        #[arg(long)]
        d: f64,
    },
    /// (4n |V| / |omega|)^d.
    Convex {
        #[arg(long)]
        n: u32,
        #[arg(long = "vol-v")]
        vol_v: f64,
        #[arg(long = "vol-omega")]
        vol_omega: f64,
        #[arg(long)]
        d: f64,
    },
    /// (4 R1 / R2)^d.
    Ballpair {
        #[arg(long)]
        r1: f64,
        #[arg(long)]
        r2: f64,
        #[arg(long)]
        d: f64,
    },
    /// Zero-count bounds for a quasipolynomial restricted to a line.
    Quasipoly {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        m: u32,
        #[arg(long = "M")]
        spectrum_norm: f64,
    },
}

#[derive(Args, Debug, Clone)]
struct RunArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 2.0)]
    r: f64,
    /// Random complex lines (the coordinate axes are always added).
    #[arg(long, default_value_t = 8)]
    lines: usize,
    #[arg(long, default_value_t = 20)]
    segments: usize,
    /// Subsets omega per segment.
    #[arg(long, default_value_t = 50)]
    subsets: usize,
    /// Monte Carlo samples per estimate.
    #[arg(long, default_value_t = 20_000)]
    mc: usize,
    /// Evaluation points per interval piece.
    #[arg(long, default_value_t = 128)]
    eval: usize,
    #[arg(long, default_value_t = 1e-6)]
    slack: f64,
    /// Exponent d to verify (default: degree, or 1.25 x held-out d_emp).
    #[arg(long)]
    d: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "text")]
    format: String,
    /// Add runtime_ms to reports (makes output time-dependent).
    #[arg(long)]
    timing: bool,
}

impl RunArgs {
    fn config(&self) -> Result<(RunConfig, OutputFormat), CliError> {
        let cfg = RunConfig {
            seed: self.seed,
            r: self.r,
            n_lines: self.lines,
            n_segments: self.segments,
            n_subsets: self.subsets,
            n_mc: self.mc,
            n_eval: self.eval,
            slack: self.slack,
            d: self.d,
            ..Default::default()
        };
        cfg.validate().map_err(CliError::from)?;
        let format = self.format.parse().map_err(CliError::from)?;
        Ok((cfg, format))
    }
}

#[derive(Debug)]
struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidArgument(_) | Error::DimensionMismatch { .. } | Error::InvalidLine(_) | Error::LineMissesBall { .. } => {
                EXIT_INVALID
            }
            Error::Spec(_) => EXIT_PARSE,
            _ => EXIT_DEGENERATE,
        };
        Self::new(code, e.to_string())
    }
}

fn load_spec(path: &Path) -> Result<AnalyticExpr, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::new(EXIT_PARSE, format!("cannot read {}: {e}", path.display())))?;
    parse_function_spec(&text).map_err(|e| CliError::new(EXIT_PARSE, format!("{}: {e}", path.display())))
}

/// Writes via a temporary file in the same directory and a rename.
fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path
        .file_name()
        .ok_or_else(|| CliError::new(EXIT_INVALID, format!("bad output path {}", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    let io = |e: std::io::Error| CliError::new(EXIT_INVALID, format!("writing {}: {e}", path.display()));
    let mut f = fs::File::create(&tmp).map_err(io)?;
    f.write_all(contents.as_bytes()).map_err(io)?;
    f.sync_all().map_err(io)?;
    drop(f);
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        io(e)
    })
}

fn emit(run: &RunArgs, text: &str) -> Result<(), CliError> {
    match &run.out {
        Some(path) => write_atomic(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn print_bound(b: &BoundValue) {
    println!("{} = {}", b.formula, b.value);
    println!("log = {}", b.log_value);
}

fn cmd_bound(cmd: BoundCmd) -> Result<u8, CliError> {
    match cmd {
        BoundCmd::Bg { k, n, lambda } => print_bound(&bg_bound(k, n, lambda)?),
        BoundCmd::Simplified { k, n, vol_v, vol_omega } => print_bound(&bg_simplified(k, n, vol_v, vol_omega)?),
        BoundCmd::Remez { len_i, len_omega, d } => print_bound(&remez_interval_bound(len_i, len_omega, d)?),
        BoundCmd::Convex { n, vol_v, vol_omega, d } => print_bound(&convex_body_bound(n, vol_v, vol_omega, d)?),
        BoundCmd::Ballpair { r1, r2, d } => print_bound(&ball_pair_bound(r1, r2, d)?),
        BoundCmd::Quasipoly { k, m, spectrum_norm } => {
            let b = quasipoly_zero_bound(k, m, spectrum_norm)?;
            println!("fine = {}", b.fine);
            println!("coarse = {}", b.coarse);
        }
    }
    Ok(0)
}

/// `(path, value)` pairs for every numeric leaf of a JSON value.
fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                flatten(&key(k), x, out);
            }
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&key(&i.to_string()), x, out);
            }
        }
        Value::Null => {}
        other => out.push((prefix.to_string(), other.to_string().trim_matches('"').to_string())),
    }
}

/// Renders a single measurement record.
fn render_record(command: &str, seed: u64, record: Value, format: OutputFormat) -> String {
    let mut obj = serde_json::Map::new();
    obj.insert("command".into(), command.into());
    obj.insert("seed".into(), seed.into());
    if let Value::Object(m) = record {
        obj.extend(m);
    }
    let value = Value::Object(obj);
    match format {
        OutputFormat::Jsonl => format!("{value}\n"),
        OutputFormat::Csv | OutputFormat::Text => {
            let mut rows = Vec::new();
            flatten("", &value, &mut rows);
            let mut s = if format == OutputFormat::Csv { "key,value\n".to_string() } else { String::new() };
            for (k, v) in rows {
                if format == OutputFormat::Csv {
                    s.push_str(&format!("{k},{v}\n"));
                } else {
                    s.push_str(&format!("{k} = {v}\n"));
                }
            }
            s
        }
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn cmd_degree(spec: &Path, run: &RunArgs) -> Result<u8, CliError> {
    let (cfg, format) = run.config()?;
    let f = load_spec(spec)?;
    let start = Instant::now();
    let e = empirical_chebyshev_degree(&f, cfg.r, &cfg.degree_config(), cfg.seed)?;
    let mut v = to_value(&e);
    if run.timing {
        v["runtime_ms"] = (start.elapsed().as_millis() as u64).into();
    }
    emit(run, &render_record("degree", cfg.seed, v, format))?;
    Ok(0)
}

fn cmd_valency(spec: &Path, t: f64, run: &RunArgs) -> Result<u8, CliError> {
    let (cfg, format) = run.config()?;
    let f = load_spec(spec)?;
    let rep = valency_global(&f, t, cfg.r, cfg.n_lines, &ValencyConfig::default(), cfg.seed)?;
    emit(run, &render_record("valency", cfg.seed, to_value(&rep), format))?;
    Ok(0)
}

fn cmd_bernstein(spec: &Path, s: f64, t: f64, run: &RunArgs) -> Result<u8, CliError> {
    let (cfg, format) = run.config()?;
    let f = load_spec(spec)?;
    let rep = bernstein_index(&f, s, t, cfg.r, cfg.n_lines, cfg.seed)?;
    emit(run, &render_record("bernstein", cfg.seed, to_value(&rep), format))?;
    Ok(0)
}

fn render_tables(tables: &[Table], format: OutputFormat) -> String {
    let mut s = String::new();
    for t in tables {
        match format {
            OutputFormat::Text => {
                s.push('\n');
                s.push_str(&t.to_text());
            }
            OutputFormat::Csv => {
                s.push_str(&format!("\n# {}\n", t.name));
                s.push_str(&t.to_csv());
            }
            OutputFormat::Jsonl => {
                s.push_str(&serde_json::json!({ "table": t }).to_string());
                s.push('\n');
            }
        }
    }
    s
}

fn cmd_verify(suite: &str, spec: Option<&Path>, run: &RunArgs) -> Result<u8, CliError> {
    let suite: Suite = suite.parse().map_err(|e: Error| CliError::new(EXIT_INVALID, e.to_string()))?;
    let (cfg, format) = run.config()?;
    let f = spec.map(load_spec).transpose()?;
    let start = Instant::now();
    let mut out = run_suite(suite, f.as_ref(), &cfg)?;
    if run.timing {
        let ms = start.elapsed().as_millis() as u64;
        for r in &mut out.reports {
            r.runtime_ms = Some(ms);
        }
    }
    let mut text = format_reports(&out.reports, format);
    text.push_str(&render_tables(&out.tables, format));
    emit(run, &text)?;
    if run.out.is_some() {
        let failed = out.reports.iter().filter(|r| !r.pass).count();
        println!("{} checks, {} failed", out.reports.len(), failed);
    }
    Ok(if out.all_pass() { 0 } else { EXIT_FAIL })
}

fn run(cli: Cli) -> Result<u8, CliError> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::new(EXIT_INVALID, "--threads must be >= 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::new(EXIT_INVALID, e.to_string()))?;
    }
    match cli.command {
        Command::Bound(b) => cmd_bound(b),
        Command::Degree { spec, run } => cmd_degree(&spec, &run),
        Command::Verify { suite, spec, run } => cmd_verify(&suite, spec.as_deref(), &run),
        Command::Valency { spec, t, run } => cmd_valency(&spec, t, &run),
        Command::Bernstein { spec, s, t, run } => cmd_bernstein(&spec, s, t, &run),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
