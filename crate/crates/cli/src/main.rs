use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use weighted_kcenter::gen::Distribution;
use weighted_kcenter::solver::{solve_with, AlphaEngine, Solution};
use weighted_kcenter::verify::{self, VerifyConfig};
use weighted_kcenter::{gen, io as kio, ProblemInstance};

const EXIT_INPUT: u8 = 1;
const EXIT_PARAMS: u8 = 2;
const EXIT_VERIFY: u8 = 3;

/// Exact weighted k-center on a line.
#[derive(Parser)]
#[command(name = "kcenter", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance file.
    Solve {
        /// Instance file with one "position weight" pair per line.
        #[arg(long)]
        input: PathBuf,
        /// Number of centers.
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Write here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Check the solver against brute-force oracles on random instances.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random instances per suite.
        #[arg(long, default_value_t = 20)]
        instances: usize,
        #[arg(long, hide = true)]
        corrupt: bool,
    },
    /// Time build and solve on uniform random instances.
    Bench {
        /// Comma-separated, strictly increasing instance sizes.
        #[arg(long)]
        sizes: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Write a random instance file.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "uniform")]
        dist: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }

    fn params(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_PARAMS,
            message: message.into(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve {
            input,
            k,
            format,
            output,
        } => cmd_solve(&input, k, format, output),
        Command::Verify {
            seed,
            instances,
            corrupt,
        } => cmd_verify(seed, instances, corrupt),
        Command::Bench {
            sizes,
            seed,
            output,
        } => cmd_bench(&sizes, seed, output),
        Command::Gen {
            n,
            dist,
            seed,
            output,
        } => cmd_gen(n, &dist, seed, output),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("kcenter: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn open_output(path: Option<PathBuf>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => {
            let f =
                File::create(&p).map_err(|e| Failure::input(format!("{}: {e}", p.display())))?;
            Box::new(BufWriter::new(f))
        }
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_err(e: io::Error) -> Failure {
    Failure::input(format!("write failed: {e}"))
}

#[derive(Serialize)]
struct SolveJson<'a> {
    n: usize,
    k: usize,
    radius: f64,
    centers: &'a [f64],
    breakpoints: &'a [usize],
}

fn cmd_solve(
    input: &PathBuf,
    k: usize,
    format: Format,
    output: Option<PathBuf>,
) -> Result<(), Failure> {
    if k < 1 {
        return Err(Failure::params("k must be at least 1"));
    }
    let file =
        File::open(input).map_err(|e| Failure::input(format!("{}: {e}", input.display())))?;
    let inst = kio::parse_points(BufReader::new(file))
        .map_err(|e| Failure::input(format!("{}: {e}", input.display())))?;
    let sol = solve_with(&AlphaEngine::build(&inst), k);
    let mut out = open_output(output)?;
    write_solution(&mut out, &inst, k, &sol, format).map_err(write_err)?;
    out.flush().map_err(write_err)
}

fn write_solution(
    out: &mut dyn Write,
    inst: &ProblemInstance,
    k: usize,
    sol: &Solution,
    format: Format,
) -> io::Result<()> {
    match format {
        Format::Json => {
            let doc = SolveJson {
                n: inst.len(),
                k,
                radius: sol.radius,
                centers: &sol.centers,
                breakpoints: &sol.breakpoints,
            };
            serde_json::to_writer(&mut *out, &doc)?;
            writeln!(out)
        }
        Format::Csv => {
            writeln!(out, "radius,center,breakpoint")?;
            for (c, b) in sol.centers.iter().zip(&sol.breakpoints) {
                writeln!(out, "{},{c},{b}", sol.radius)?;
            }
            Ok(())
        }
        Format::Text => {
            writeln!(out, "n = {}, k = {k}", inst.len())?;
            writeln!(out, "radius = {}", sol.radius)?;
            let mut first = 1;
            for (c, &b) in sol.centers.iter().zip(&sol.breakpoints) {
                writeln!(out, "center {c} serves points {first}..{b}")?;
                first = b + 1;
            }
            Ok(())
        }
    }
}

fn cmd_verify(seed: u64, instances: usize, corrupt: bool) -> Result<(), Failure> {
    let config = VerifyConfig {
        seed,
        instances,
        corrupt,
        ..VerifyConfig::default()
    };
    let suites = verify::run(&config);
    let mut max_dev: f64 = 0.0;
    for s in &suites {
        println!("{s}");
        max_dev = max_dev.max(s.report.max_deviation);
    }
    let passed = suites.iter().all(|s| s.report.passed());
    println!(
        "verify seed={seed} max_rel_deviation={max_dev:.3e} result={}",
        if passed { "PASS" } else { "FAIL" }
    );
    if passed {
        Ok(())
    } else {
        Err(Failure {
            code: EXIT_VERIFY,
            message: "oracle mismatch".into(),
        })
    }
}

fn parse_sizes(text: &str) -> Result<Vec<usize>, Failure> {
    let sizes = text
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<usize>()
                .ok()
                .filter(|&n| n > 0)
                .ok_or_else(|| Failure::input(format!("invalid size '{s}'")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if sizes.is_empty() {
        return Err(Failure::input("size list is empty"));
    }
    if sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Failure::input("sizes must be strictly increasing"));
    }
    Ok(sizes)
}

fn cmd_bench(sizes: &str, seed: u64, output: Option<PathBuf>) -> Result<(), Failure> {
    let sizes = parse_sizes(sizes)?;
    let mut out = open_output(output)?;
    writeln!(out, "n,k,build_ms,solve_ms,alpha_queries,hull_accesses").map_err(write_err)?;
    for &n in &sizes {
        let inst = gen::uniform(n, seed ^ n as u64);
        let start = Instant::now();
        let engine = AlphaEngine::build(&inst);
        let build_ms = start.elapsed().as_secs_f64() * 1e3;
        let root = (n as f64).sqrt().round() as usize;
        for k in [2, root.max(1), (n / 10).max(1)] {
            engine.reset_stats();
            let start = Instant::now();
            solve_with(&engine, k);
            let solve_ms = start.elapsed().as_secs_f64() * 1e3;
            let stats = engine.stats();
            writeln!(
                out,
                "{n},{k},{build_ms:.3},{solve_ms:.3},{},{}",
                stats.alpha_queries, stats.hull_accesses
            )
            .map_err(write_err)?;
        }
        out.flush().map_err(write_err)?;
    }
    Ok(())
}

fn cmd_gen(n: usize, dist: &str, seed: u64, output: Option<PathBuf>) -> Result<(), Failure> {
    let dist: Distribution = dist
        .parse()
        .map_err(|e: gen::UnknownDistribution| Failure::input(e.to_string()))?;
    let min = if dist == Distribution::AdversarialMinGap {
        2
    } else {
        1
    };
    if n < min {
        return Err(Failure::params(format!("{dist} needs n >= {min}")));
    }
    let inst = dist.generate(n, seed);
    let mut out = open_output(output)?;
    kio::write_instance(&inst, &mut out).map_err(write_err)?;
    out.flush().map_err(write_err)
}
