//! `hardcore`: command-line access to exact and sampled hard-core model
//! computations.
//!
//! Exit status is 0 on success, 1 on input or usage errors and 2 when a bound
//! verification finds a violation.

use std::fs;
use std::io::{self, BufRead, Cursor, Write};
use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use hardcore::bounds::report::CSV_HEADER as BOUNDS_CSV_HEADER;
use hardcore::graph6::{parse_edge_list, read_corpus, CorpusEntry};
use hardcore::indpoly::{evaluate, independence_polynomial_with, Evaluation, ExactConfig, Fugacity};
use hardcore::random_graphs::{random_regular_with_girth, tightness_experiment, TightnessConfig, DEFAULT_MAX_ATTEMPTS, TIGHTNESS_CSV_HEADER};
use hardcore::sampler::{regime_warning, sample_run, SampleReport, SamplerConfig};
use hardcore::scan::{circulant_search, scan_ratio, verify_bounds, CirculantSearch, Filters, RatioRecord, ScanConfig, RATIO_CSV_HEADER};
use hardcore::{from_graph6, to_graph6, Error};

#[derive(Parser, Debug)]
#[command(name = "hardcore", version, about = "Hard-core model toolkit: independence polynomials, bounds, sampling and ratio scans")]
struct Cli {
    /// Emit JSON lines.
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,
    /// Emit CSV with a header row.
    #[arg(long, global = true)]
    csv: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Independence polynomial coefficients.
    Poly(GraphArgs),
    /// Partition function, occupancy and variance at one fugacity.
    Eval {
        #[command(flatten)]
        input: GraphArgs,
        #[arg(long, default_value = "1")]
        lambda: String,
    },
    /// Exact ratio of independence number to mean independent-set size.
    Ratio {
        #[command(flatten)]
        input: GraphArgs,
        #[arg(long, default_value = "1")]
        lambda: String,
    },
    /// Compare every applicable bound with exact values.
    Bounds {
        #[command(flatten)]
        input: GraphArgs,
        /// Comma-separated fugacities.
        #[arg(long, default_value = "1")]
        lambda_grid: String,
        #[command(flatten)]
        filters: FilterArgs,
    },
    /// Estimate occupancy with Glauber dynamics.
    Sample {
        #[command(flatten)]
        input: GraphArgs,
        #[arg(long, default_value = "1")]
        lambda: String,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        /// Steps before the first sample [default: 100 n ln n].
        #[arg(long)]
        burn_in: Option<u64>,
        /// Steps between samples [default: n].
        #[arg(long)]
        thinning: Option<u64>,
    },
    /// Random d-regular graphs from the configuration model.
    GenRegular {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        triangle_free: bool,
        /// Require girth at least this (implies --triangle-free when ≥ 4).
        #[arg(long)]
        min_girth: Option<usize>,
        /// Graphs to generate, using seeds seed, seed+1, ...
        #[arg(long, default_value_t = 1)]
        count: u64,
        #[arg(long, default_value_t = DEFAULT_MAX_ATTEMPTS)]
        max_attempts: u64,
    },
    /// Smallest ratios over a graph6 corpus.
    Scan {
        #[command(flatten)]
        input: GraphArgs,
        #[arg(long, default_value = "1")]
        lambda: String,
        #[command(flatten)]
        filters: FilterArgs,
        #[arg(long, default_value_t = 10)]
        top_k: usize,
    },
    /// Ratios of circulant graphs, one per multiplier class of connection sets.
    CirculantSearch {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        min_size: usize,
        /// [default: n/2]
        #[arg(long)]
        max_size: Option<usize>,
        #[arg(long)]
        triangle_free: bool,
        #[arg(long)]
        alpha_target: Option<usize>,
        #[arg(long, default_value = "1")]
        lambda: String,
        #[arg(long, default_value_t = 40)]
        max_vertices: usize,
    },
    /// Sampled occupancy of random triangle-free regular graphs against the
    /// tree value and the triangle-free lower bound.
    Tightness {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value = "1")]
        lambda_grid: String,
        /// First seed; one graph per seed.
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 5)]
        repeats: u64,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_ATTEMPTS)]
        max_attempts: u64,
    },
}

#[derive(Args, Debug)]
struct GraphArgs {
    /// Inline graph6 code, a graph6 or edge-list file, or `-` for stdin.
    graph: String,
    /// Largest graph accepted by exact computations.
    #[arg(long, default_value_t = 40)]
    max_vertices: usize,
}

#[derive(Args, Debug)]
struct FilterArgs {
    #[arg(long)]
    triangle_free: bool,
    /// Keep only graphs with no clique of this order.
    #[arg(long)]
    kr_free: Option<usize>,
    #[arg(long)]
    min_degree: Option<usize>,
    #[arg(long)]
    regular: bool,
}

impl FilterArgs {
    fn filters(&self) -> Filters {
        Filters {
            triangle_free: self.triangle_free,
            kr_free: self.kr_free,
            min_degree: self.min_degree,
            regular_only: self.regular,
        }
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Format {
    Text,
    Json,
    Csv,
}

enum Failure {
    Input(String),
    Violation(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type CliResult = std::result::Result<(), Failure>;

fn exact_config(max_vertices: usize) -> ExactConfig {
    ExactConfig {
        max_vertices,
        ..ExactConfig::default()
    }
}

fn parse_lambda(s: &str) -> Result<Fugacity, Failure> {
    Ok(s.parse::<Fugacity>()?)
}

fn parse_exact(s: &str) -> Result<Fugacity, Failure> {
    let f = parse_lambda(s)?;
    if f.as_exact().is_none() {
        return Err(Failure::Input(format!("fugacity {s} must be exact here; write it as p/q or a plain decimal")));
    }
    Ok(f)
}

fn parse_grid(s: &str) -> Result<Vec<Fugacity>, Failure> {
    s.split(',').map(|t| parse_lambda(t.trim())).collect()
}

/// Resolves a graph argument to a graph6 line stream.  Files with a `.g6` or
/// `.graph6` extension or a graph6 header are corpora; other files are tried
/// as edge lists first.  Anything that is not a file is an inline code.
fn open_input(arg: &str) -> Result<Box<dyn BufRead>, Failure> {
    if arg == "-" {
        return Ok(Box::new(io::BufReader::new(io::stdin())));
    }
    let path = Path::new(arg);
    if path.is_file() {
        let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{arg}: {e}")))?;
        let is_g6 = matches!(path.extension().and_then(|e| e.to_str()), Some("g6" | "graph6")) || text.starts_with(">>graph6<<");
        if !is_g6 {
            if let Ok(g) = parse_edge_list(&text) {
                return Ok(Box::new(Cursor::new(format!("{}\n", to_graph6(&g)))));
            }
        }
        return Ok(Box::new(Cursor::new(text)));
    }
    from_graph6(arg)?;
    Ok(Box::new(Cursor::new(format!("{arg}\n"))))
}

/// All graphs of the input; any malformed line is an input error.
fn load_graphs(arg: &str) -> Result<Vec<CorpusEntry>, Failure> {
    let entries = read_corpus(open_input(arg)?)
        .map(|(line, e)| e.map_err(|e| Failure::Input(format!("line {line}: {e}"))))
        .collect::<Result<Vec<_>, _>>()?;
    if entries.is_empty() {
        return Err(Failure::Input(format!("no graphs in {arg}")));
    }
    Ok(entries)
}

fn print_json<T: Serialize>(out: &mut impl Write, value: &T) -> io::Result<()> {
    writeln!(out, "{}", serde_json::to_string(value).expect("serialisable"))
}

fn warn_skipped(skipped: &[hardcore::scan::SkippedLine]) {
    for s in skipped {
        eprintln!("warning: line {}: {}", s.line, s.reason);
    }
}

fn run(cli: Cli) -> CliResult {
    let format = if cli.json {
        Format::Json
    } else if cli.csv {
        Format::Csv
    } else {
        Format::Text
    };
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let result = dispatch(cli.command, format, &mut out);
    out.flush()?;
    result
}

fn dispatch(command: Command, format: Format, out: &mut impl Write) -> CliResult {
    match command {
        Command::Poly(input) => {
            let cfg = exact_config(input.max_vertices);
            if format == Format::Csv {
                writeln!(out, "graph6,n,alpha,coeffs")?;
            }
            for e in load_graphs(&input.graph)? {
                let p = independence_polynomial_with(&e.graph, &cfg)?;
                let coeffs: Vec<String> = p.coeffs().iter().map(ToString::to_string).collect();
                match format {
                    Format::Json => print_json(out, &p.to_json())?,
                    Format::Csv => writeln!(out, "{},{},{},{}", e.graph6, p.n(), p.alpha(), coeffs.join(" "))?,
                    Format::Text => writeln!(out, "{}", coeffs.join(" "))?,
                }
            }
        }
        Command::Eval { input, lambda } => {
            let lam = parse_lambda(&lambda)?;
            let cfg = exact_config(input.max_vertices);
            if format == Format::Csv {
                writeln!(out, "graph6,lambda,p,mean_size,occupancy,variance,log_p")?;
            }
            for e in load_graphs(&input.graph)? {
                let p = independence_polynomial_with(&e.graph, &cfg)?;
                let ev = evaluate(&p, &lam);
                let (pv, mean, occ, var) = match &ev {
                    Evaluation::Exact(r) => (r.p.to_string(), r.mean_size.to_string(), r.occupancy.to_string(), r.variance.to_string()),
                    Evaluation::Float(r) => (r.p.to_string(), r.mean_size.to_string(), r.occupancy.to_string(), r.variance.to_string()),
                };
                match format {
                    Format::Json => print_json(
                        out,
                        &json!({
                            "graph6": e.graph6,
                            "lambda": lam.to_string(),
                            "p": pv,
                            "mean_size": mean,
                            "occupancy": occ,
                            "variance": var,
                            "occupancy_f64": ev.occupancy_f64(),
                            "log_p": ev.log_p(),
                        }),
                    )?,
                    Format::Csv => writeln!(out, "{},{},{},{},{},{},{}", e.graph6, lam, pv, mean, occ, var, ev.log_p())?,
                    Format::Text => writeln!(
                        out,
                        "P={pv} mean_size={mean} occupancy={occ} ({:.12}) variance={var} logP={:.12}",
                        ev.occupancy_f64(),
                        ev.log_p()
                    )?,
                }
            }
        }
        Command::Ratio { input, lambda } => {
            let lam = parse_exact(&lambda)?;
            let cfg = exact_config(input.max_vertices);
            if format == Format::Csv {
                writeln!(out, "{RATIO_CSV_HEADER}")?;
            }
            for e in load_graphs(&input.graph)? {
                let mut r = RatioRecord::compute(&e.graph, lam.as_exact().expect("exact"), &cfg)?;
                r.graph6 = e.graph6;
                r.label = e.label;
                match format {
                    Format::Json => print_json(out, &r)?,
                    Format::Csv => writeln!(out, "{}", r.csv_row())?,
                    Format::Text => writeln!(out, "{}", r.ratio)?,
                }
            }
        }
        Command::Bounds { input, lambda_grid, filters } => {
            let lambdas = parse_grid(&lambda_grid)?;
            if format == Format::Csv {
                writeln!(out, "{BOUNDS_CSV_HEADER}")?;
            }
            let mut io_err = None;
            let summary = verify_bounds(open_input(&input.graph)?, &lambdas, &filters.filters(), &exact_config(input.max_vertices), |r| {
                let res = match format {
                    Format::Json => print_json(out, r),
                    Format::Csv => writeln!(out, "{}", r.csv_row()),
                    Format::Text => {
                        let status = if r.violations.is_empty() { "ok".to_string() } else { r.violations.join("; ") };
                        let na = |x: Option<f64>| x.map_or("n/a".to_string(), |v| format!("{v:.6}"));
                        writeln!(
                            out,
                            "{} lambda={} occupancy={:.6} thm13={} kdd={} logP/n={:.6} thm14/n={} clique_ok={} mm_ok={} {}",
                            r.graph6,
                            r.lambda,
                            r.occupancy,
                            na(r.thm13),
                            na(r.kdd_upper),
                            r.log_p_per_n,
                            na(r.thm14_per_n),
                            r.clique_ok,
                            r.mm_ok,
                            status
                        )
                    }
                };
                if let Err(e) = res {
                    io_err.get_or_insert(e);
                }
            })?;
            if let Some(e) = io_err {
                return Err(e.into());
            }
            warn_skipped(&summary.skipped);
            eprintln!("{}", serde_json::to_string(&summary).expect("serialisable"));
            if summary.violations > 0 {
                return Err(Failure::Violation(format!("{} reports with bound violations", summary.violations)));
            }
        }
        Command::Sample {
            input,
            lambda,
            seed,
            samples,
            burn_in,
            thinning,
        } => {
            let lam = parse_lambda(&lambda)?.to_f64();
            for e in load_graphs(&input.graph)? {
                let mut cfg = SamplerConfig::for_graph(&e.graph, seed, samples);
                cfg.burn_in = burn_in.unwrap_or(cfg.burn_in);
                cfg.thinning = thinning.unwrap_or(cfg.thinning);
                if let Some(w) = regime_warning(&e.graph, lam) {
                    eprintln!("warning: {}: {w}", e.graph6);
                }
                let run = sample_run(&e.graph, lam, &cfg)?;
                let report = SampleReport::new(&e.graph6, lam, seed, &run);
                match format {
                    Format::Csv => writeln!(out, "graph6,lambda,seed,samples,occupancy,stderr\n{},{},{},{},{},{}", report.graph6, lam, seed, samples, report.occupancy, report.stderr)?,
                    Format::Json => print_json(out, &report)?,
                    Format::Text => writeln!(out, "{} occupancy={:.6} stderr={:.6}", report.graph6, report.occupancy, report.stderr)?,
                }
            }
        }
        Command::GenRegular {
            n,
            d,
            seed,
            triangle_free,
            min_girth,
            count,
            max_attempts,
        } => {
            let girth = min_girth.unwrap_or(0).max(if triangle_free { 4 } else { 0 });
            if format == Format::Csv {
                writeln!(out, "graph6,n,d,seed,attempts,rejections_simple,rejections_triangle")?;
            }
            for s in seed..seed.saturating_add(count) {
                let r = random_regular_with_girth(n, d, s, girth, max_attempts)?;
                let code = to_graph6(&r.graph);
                match format {
                    Format::Json => {
                        let mut v = serde_json::to_value(&r).expect("serialisable");
                        v["graph6"] = code.into();
                        print_json(out, &v)?
                    }
                    Format::Csv => writeln!(out, "{code},{n},{d},{s},{},{},{}", r.attempts, r.rejections_simple, r.rejections_triangle)?,
                    Format::Text => writeln!(out, "{code}")?,
                }
            }
        }
        Command::Scan {
            input,
            lambda,
            filters,
            top_k,
        } => {
            let lam = parse_exact(&lambda)?;
            let cfg = ScanConfig {
                lambda: lam.as_exact().expect("exact").clone(),
                filters: filters.filters(),
                top_k,
                exact: exact_config(input.max_vertices),
            };
            let outcome = scan_ratio(open_input(&input.graph)?, &cfg)?;
            warn_skipped(&outcome.skipped);
            print_records(out, format, &outcome.records)?;
        }
        Command::CirculantSearch {
            n,
            min_size,
            max_size,
            triangle_free,
            alpha_target,
            lambda,
            max_vertices,
        } => {
            let lam = parse_exact(&lambda)?;
            let mut search = CirculantSearch::new(n);
            search.min_size = min_size;
            search.max_size = max_size.unwrap_or(n / 2);
            search.triangle_free = triangle_free;
            search.alpha_target = alpha_target;
            search.lambda = lam.as_exact().expect("exact").clone();
            search.exact = exact_config(max_vertices);
            print_records(out, format, &circulant_search(&search)?)?;
        }
        Command::Tightness {
            n,
            d,
            lambda_grid,
            seed,
            repeats,
            samples,
            max_attempts,
        } => {
            let lambdas: Vec<f64> = parse_grid(&lambda_grid)?.iter().map(Fugacity::to_f64).collect();
            let seeds: Vec<u64> = (seed..seed.saturating_add(repeats)).collect();
            let rows = tightness_experiment(n, d, &lambdas, &seeds, &TightnessConfig { samples, max_attempts })?;
            if format == Format::Json {
                for r in &rows {
                    print_json(out, r)?;
                }
            } else {
                writeln!(out, "{TIGHTNESS_CSV_HEADER}")?;
                for r in &rows {
                    writeln!(out, "{}", r.csv_row())?;
                }
            }
        }
    }
    Ok(())
}

fn print_records(out: &mut impl Write, format: Format, records: &[RatioRecord]) -> io::Result<()> {
    if format == Format::Csv {
        writeln!(out, "{RATIO_CSV_HEADER}")?;
    }
    for r in records {
        match format {
            Format::Json => print_json(out, r)?,
            Format::Csv => writeln!(out, "{}", r.csv_row())?,
            Format::Text => writeln!(
                out,
                "{:.9} {} {} {}",
                r.ratio_f64(),
                r.ratio,
                r.graph6,
                r.label.as_deref().unwrap_or("")
            )?,
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Violation(msg)) => {
            eprintln!("violation: {msg}");
            ExitCode::from(2)
        }
    }
}
