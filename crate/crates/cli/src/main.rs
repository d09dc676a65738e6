use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_complex::Complex64;
use serde::Serialize;

use tdpoly::closed_form::star_tdp;
use tdpoly::corpus::DEFAULT_SEED;
use tdpoly::extremal::{run_scan, ScanSuite};
use tdpoly::generate::{cycle, path, star, two_corona};
use tdpoly::oracle::{set_default_budget, Oracle};
use tdpoly::reduction::{cycle_tdp, path_tdp, tree_tdp};
use tdpoly::verify::{verify_identity, VerifyParams, VerifySuite};
use tdpoly::{parse_edge_list, Graph, IntPoly, TdpError};

const EXIT_FAILURES: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;
const EXIT_INCONSISTENT: u8 = 4;

/// Exact total domination polynomials, verification suites and extremal scans.
#[derive(Parser)]
#[command(name = "tdpoly", version, about)]
struct Cli {
    /// Brute-force budget in live vertices (at most 32).
    #[arg(long, global = true)]
    budget: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute D_t(G, x) for one graph.
    Poly {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Include wall-clock time in the output.
        #[arg(long)]
        timing: bool,
    },
    /// Tabulate path, cycle or star polynomials over a range of orders.
    Family {
        #[arg(long, value_enum)]
        family: TableFamily,
        #[arg(long)]
        n_min: usize,
        #[arg(long)]
        n_max: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Evaluate D_t(G, x) at integer, real or complex points ("a+bi").
    Eval {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, num_args = 1.., required = true, allow_negative_numbers = true)]
        at: Vec<String>,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Run a differential verification suite against the brute-force oracle.
    Verify {
        #[arg(long, value_parser = parse_verify_suite)]
        suite: VerifySuite,
        #[arg(long)]
        n_max: Option<usize>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Run an extremal scan.
    Scan {
        #[arg(long, value_parser = parse_scan_suite)]
        suite: ScanSuite,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

#[derive(Args)]
#[group(required = true, multiple = true)]
struct InputArgs {
    /// Edge-list file ("n N" header, then one "u v" pair per line).
    #[arg(long = "in", conflicts_with = "family")]
    input: Option<PathBuf>,
    #[arg(long, value_enum)]
    family: Option<InputFamily>,
    #[arg(long)]
    n: Option<usize>,
    /// Base graph for two-corona (edge-list file); defaults to P_n.
    #[arg(long)]
    base: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum InputFamily {
    Path,
    Cycle,
    Star,
    TwoCorona,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TableFamily {
    Path,
    Cycle,
    Star,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Auto,
    Brute,
    Tree,
    Recurrence,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

fn parse_verify_suite(s: &str) -> Result<VerifySuite, String> {
    s.parse().map_err(|e: TdpError| e.to_string())
}

fn parse_scan_suite(s: &str) -> Result<ScanSuite, String> {
    s.parse().map_err(|e: TdpError| e.to_string())
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Engine(TdpError),
}

impl From<TdpError> for CliError {
    fn from(e: TdpError) -> Self {
        CliError::Engine(e)
    }
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Engine(e) => match e {
                TdpError::Parse { .. } | TdpError::Domain(_) => EXIT_USAGE,
                TdpError::Budget { .. } => EXIT_BUDGET,
                TdpError::Inconsistency(_) => EXIT_INCONSISTENT,
                TdpError::TheoremViolation(_) => EXIT_FAILURES,
            },
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Engine(e) => write!(f, "{e}"),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// A graph together with how it was obtained, which drives `--method auto`.
struct Input {
    graph: Graph,
    family: Option<InputFamily>,
}

fn read_graph(p: &PathBuf) -> CliResult<Graph> {
    let text =
        fs::read_to_string(p).map_err(|e| usage(format!("cannot read {}: {e}", p.display())))?;
    Ok(parse_edge_list(&text)?)
}

fn load_input(a: &InputArgs) -> CliResult<Input> {
    if let Some(p) = &a.input {
        if a.n.is_some() || a.base.is_some() {
            return Err(usage("--n and --base only apply to --family"));
        }
        return Ok(Input {
            graph: read_graph(p)?,
            family: None,
        });
    }
    let family = a
        .family
        .ok_or_else(|| usage("one of --in or --family is required"))?;
    if a.base.is_some() && family != InputFamily::TwoCorona {
        return Err(usage("--base only applies to --family two-corona"));
    }
    let need_n = || a.n.ok_or_else(|| usage("--family needs --n"));
    let graph = match family {
        InputFamily::Path => path(need_n()?),
        InputFamily::Cycle => {
            let n = need_n()?;
            if n < 3 {
                return Err(TdpError::Domain(format!("cycle needs n >= 3, got {n}")).into());
            }
            cycle(n)
        }
        InputFamily::Star => {
            let n = need_n()?;
            if n < 2 {
                return Err(TdpError::Domain(format!("star needs n >= 2, got {n}")).into());
            }
            star(n)
        }
        InputFamily::TwoCorona => match &a.base {
            Some(b) => two_corona(&read_graph(b)?),
            None => two_corona(&path(need_n()?)),
        },
    };
    Ok(Input {
        graph,
        family: Some(family),
    })
}

fn compute(input: &Input, method: Method) -> CliResult<(&'static str, IntPoly)> {
    let g = &input.graph;
    let recurrence = |g: &Graph| -> CliResult<IntPoly> {
        if g.is_path() {
            Ok(path_tdp(g.order())?)
        } else if g.is_cycle() {
            Ok(cycle_tdp(g.order())?)
        } else {
            Err(TdpError::Domain("recurrence method needs a path or a cycle".into()).into())
        }
    };
    let (name, poly) = match method {
        Method::Brute => ("brute", Oracle::default().tdp(g)?),
        Method::Tree => ("tree", tree_tdp(g)?),
        Method::Recurrence => ("recurrence", recurrence(g)?),
        Method::Auto => match input.family {
            Some(InputFamily::Path | InputFamily::Cycle) if !g.is_empty() => {
                ("recurrence", recurrence(g)?)
            }
            Some(InputFamily::Star) => ("formula", star_tdp(g.order())?),
            _ if g.is_forest() => ("tree", tree_tdp(g)?),
            _ if g.is_cycle() => ("recurrence", recurrence(g)?),
            _ => ("brute", Oracle::default().tdp(g)?),
        },
    };
    poly.validate_tdp()?;
    Ok((name, poly))
}

#[derive(Serialize)]
struct Evaluation {
    point: String,
    value: String,
}

#[derive(Serialize)]
struct Envelope {
    n: usize,
    method: &'static str,
    gamma_t: Option<usize>,
    coeffs: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    evaluations: Vec<Evaluation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    timing_ms: Option<f64>,
}

impl Envelope {
    fn new(n: usize, method: &'static str, poly: &IntPoly) -> Self {
        Envelope {
            n,
            method,
            gamma_t: poly.min_degree(),
            coeffs: poly.to_decimal_strings(),
            evaluations: vec![],
            timing_ms: None,
        }
    }

    fn text(&self, poly: &IntPoly) -> String {
        let gamma = self.gamma_t.map_or("none".to_string(), |g| g.to_string());
        let mut out = format!(
            "n={} method={} gamma_t={gamma}\nD_t = {poly}\n",
            self.n, self.method
        );
        for e in &self.evaluations {
            out += &format!("D_t({}) = {}\n", e.point, e.value);
        }
        if let Some(ms) = self.timing_ms {
            out += &format!("time {ms:.3} ms\n");
        }
        out
    }
}

enum Point {
    Exact(BigInt),
    Complex(Complex64),
}

fn parse_point(s: &str) -> CliResult<Point> {
    if let Ok(v) = s.parse::<BigInt>() {
        return Ok(Point::Exact(v));
    }
    s.parse::<Complex64>().map(Point::Complex).map_err(|_| {
        usage(format!(
            "invalid evaluation point '{s}' (expected an integer, a real or a+bi)"
        ))
    })
}

fn format_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else {
        format!("{}{:+}i", z.re, z.im)
    }
}

fn json_line<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("envelope serializes") + "\n"
}

fn no_csv(format: Format) -> CliResult<()> {
    if format == Format::Csv {
        Err(usage("csv output is only available for scan reports"))
    } else {
        Ok(())
    }
}

fn run(cli: Cli) -> CliResult<(String, bool)> {
    if let Some(b) = cli.budget {
        set_default_budget(b);
    }
    match cli.command {
        Command::Poly {
            input,
            method,
            format,
            timing,
        } => {
            no_csv(format)?;
            let input = load_input(&input)?;
            let start = Instant::now();
            let (name, poly) = compute(&input, method)?;
            let mut env = Envelope::new(input.graph.order(), name, &poly);
            if timing {
                env.timing_ms = Some(start.elapsed().as_secs_f64() * 1e3);
            }
            let out = match format {
                Format::Text => env.text(&poly),
                _ => json_line(&env),
            };
            Ok((out, true))
        }
        Command::Family {
            family,
            n_min,
            n_max,
            format,
        } => {
            no_csv(format)?;
            if n_min > n_max {
                return Err(usage(format!("--n-min {n_min} exceeds --n-max {n_max}")));
            }
            let mut rows = Vec::new();
            for n in n_min..=n_max {
                let (name, poly) = match family {
                    TableFamily::Path => ("recurrence", path_tdp(n)?),
                    TableFamily::Cycle => ("recurrence", cycle_tdp(n)?),
                    TableFamily::Star => ("formula", star_tdp(n)?),
                };
                rows.push((Envelope::new(n, name, &poly), poly));
            }
            let out = match format {
                Format::Text => rows
                    .iter()
                    .map(|(e, p)| format!("{}: {p}\n", e.n))
                    .collect(),
                _ => rows.iter().map(|(e, _)| json_line(e)).collect(),
            };
            Ok((out, true))
        }
        Command::Eval {
            input,
            at,
            method,
            format,
        } => {
            no_csv(format)?;
            let input = load_input(&input)?;
            let (name, poly) = compute(&input, method)?;
            let mut env = Envelope::new(input.graph.order(), name, &poly);
            for s in &at {
                let value = match parse_point(s)? {
                    Point::Exact(v) => poly.eval_int(&v).to_string(),
                    Point::Complex(z) => format_complex(poly.eval_complex(z)),
                };
                env.evaluations.push(Evaluation {
                    point: s.clone(),
                    value,
                });
            }
            let out = match format {
                Format::Text => env.text(&poly),
                _ => json_line(&env),
            };
            Ok((out, true))
        }
        Command::Verify {
            suite,
            n_max,
            trials,
            seed,
            format,
        } => {
            no_csv(format)?;
            let report = verify_identity(
                suite,
                &VerifyParams {
                    n_max,
                    trials,
                    seed,
                },
            )?;
            let out = match format {
                Format::Text => report.to_text(),
                _ => report.to_json() + "\n",
            };
            Ok((out, report.passed))
        }
        Command::Scan {
            suite,
            n,
            trials,
            seed,
            format,
        } => {
            let report = run_scan(suite, n, trials, seed)?;
            let out = match format {
                Format::Json => report.to_json() + "\n",
                Format::Csv => report.to_csv()?,
                Format::Text => report.to_text(),
            };
            Ok((out, report.passed()))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok((out, passed)) => {
            print!("{out}");
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_FAILURES)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
