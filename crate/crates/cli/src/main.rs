//! `weaver`: maximum-likelihood estimates for generalized counting data.

mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use log::info;
use sha2::{Digest, Sha256};
use weaver_core::algebra::{check_uniform_regularity, Regularity};
use weaver_core::{
    alliance, deviation, from_matches, greedy_weaver, mm_solve, newton_solve, parse_expression,
    parse_grid, parse_matches, reconstruct, sse, thickness_profile, weaver, CountModel,
    SimplexPoint, SolverOptions, Status,
};

use report::Audit;

const EXIT_INPUT: u8 = 1;
const EXIT_DIVERGED: u8 = 2;
const EXIT_CAP: u8 = 3;
const EXIT_IRREGULAR: u8 = 4;
const EXIT_SIZE_CAP: u8 = 5;

/// Slack allowed when checking that `--at` lies on the simplex.
const AT_SUM_TOLERANCE: f64 = 1e-6;

#[derive(Parser)]
#[command(name = "weaver", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate the maximum-likelihood probability vector.
    Solve {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = InputFormat::Expr)]
        format: InputFormat,
        #[arg(long, value_enum, default_value_t = Engine::Alliance)]
        solver: Engine,
        #[arg(long, default_value_t = 1e-13)]
        tol: f64,
        #[arg(long, default_value_t = 10_000)]
        max_iter: usize,
        #[arg(long, value_enum, default_value_t = Output::Json)]
        out: Output,
    },
    /// Test the uniform regularity criterion.
    Check {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = InputFormat::Expr)]
        format: InputFormat,
    },
    /// Fill in the play board at a given point.
    Reconstruct {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = InputFormat::Expr)]
        format: InputFormat,
        /// Comma-separated probabilities, one per ion.
        #[arg(long, value_delimiter = ',', required = true)]
        at: Vec<f64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum InputFormat {
    Expr,
    Grid,
    Matches,
}

#[derive(Clone, Copy, ValueEnum)]
enum Engine {
    Alliance,
    Weaver,
    Greedy,
    Mm,
    Newton,
}

#[derive(Clone, Copy, ValueEnum)]
enum Output {
    Json,
    Csv,
    Table,
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn load(path: &Path, format: InputFormat) -> Result<CountModel, String> {
    let start = Instant::now();
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    eprintln!("input sha256 {}", hex(&Sha256::digest(text.as_bytes())));
    let model = match format {
        InputFormat::Expr => parse_expression(&text),
        InputFormat::Grid => parse_grid(&text),
        InputFormat::Matches => parse_matches(&text).and_then(|r| from_matches(&r)),
    }
    .map_err(|e| format!("{}: {e}", path.display()))?;
    info!(
        "model with {} ions and {} unionic terms",
        model.n(),
        model.q()
    );
    eprintln!("parse {:.3} ms", ms(start));
    Ok(model)
}

fn ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

fn solve(
    input: &Path,
    format: InputFormat,
    engine: Engine,
    opts: SolverOptions,
    out: Output,
) -> Result<u8, String> {
    let model = load(input, format)?;
    let start = Instant::now();
    let reg = check_uniform_regularity(&model);
    eprintln!("regularity {:.3} ms", ms(start));
    let start = Instant::now();
    let sol = match engine {
        Engine::Alliance => alliance(&model, &opts),
        Engine::Weaver => weaver(&model, &opts),
        Engine::Greedy => greedy_weaver(&model, &opts, None),
        Engine::Mm => mm_solve(&model, &opts),
        Engine::Newton => newton_solve(&model, &opts),
    }
    .map_err(|e| e.to_string())?;
    eprintln!("solve {:.3} ms", ms(start));
    let text = match out {
        Output::Json => report::solution_json(&sol, &reg),
        Output::Csv => report::solution_csv(&model, &sol, &reg),
        Output::Table => report::solution_table(&model, &sol, &reg),
    };
    print!("{text}");
    Ok(match sol.status {
        Status::Converged => 0,
        Status::DivergedWithBest => EXIT_DIVERGED,
        Status::IterationCap => EXIT_CAP,
    })
}

fn check(input: &Path, format: InputFormat) -> Result<u8, String> {
    let model = load(input, format)?;
    let start = Instant::now();
    let reg = check_uniform_regularity(&model);
    eprintln!("regularity {:.3} ms", ms(start));
    print!("{}", report::check_text(&reg));
    Ok(match reg.verdict {
        Regularity::Regular => 0,
        Regularity::Irregular(_) => EXIT_IRREGULAR,
        Regularity::SizeCap { .. } => EXIT_SIZE_CAP,
    })
}

fn audit(input: &Path, format: InputFormat, at: Vec<f64>) -> Result<u8, String> {
    let model = load(input, format)?;
    if at.len() != model.n() {
        return Err(format!(
            "--at has {} entries for {} ions",
            at.len(),
            model.n()
        ));
    }
    let total: f64 = at.iter().sum();
    if (total - 1.0).abs() > AT_SUM_TOLERANCE {
        return Err(format!("--at sums to {total}, not 1"));
    }
    let p = SimplexPoint::new(at).map_err(|e| format!("--at: {e}"))?;
    let run = || -> weaver_core::Result<Audit> {
        let profile = thickness_profile(&model, &p)?;
        let t = profile.tau0;
        Ok(Audit {
            reconstruction: reconstruct(&model, &p, t)?,
            deviation: deviation(&model, &p, t)?,
            sse: sse(&model, &p, t)?,
            tau0: t,
            tau: profile.tau,
            p: p.as_slice().to_vec(),
        })
    };
    let a = run().map_err(|e| e.to_string())?;
    print!("{}", report::audit_json(&a));
    Ok(0)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve {
            input,
            format,
            solver,
            tol,
            max_iter,
            out,
        } => {
            let opts = SolverOptions {
                sse_tolerance: tol,
                max_iterations: max_iter,
                ..SolverOptions::default()
            };
            solve(&input, format, solver, opts, out)
        }
        Command::Check { input, format } => check(&input, format),
        Command::Reconstruct { input, format, at } => audit(&input, format, at),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}
