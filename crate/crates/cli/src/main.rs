//! `safe-eq`: solve, verify, generate and benchmark epsilon-safe equilibria.
//!
//! Exit codes: 0 success, 1 solver failure, 2 bad arguments or input files,
//! 3 verification failed.

mod bench;
mod files;

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::anyhow;
use clap::{Args, Parser, Subcommand, ValueEnum};

use safe_equilibrium::{
    approximate, random_game, seeded_rng, solve_exact_2p, write_model, ApproxConfig, EpsilonVector, Game,
};

use bench::Suite;
use files::{read_json, write_json, GameFile, Metadata, SolutionFile};

#[derive(Debug, Parser)]
#[command(name = "safe-eq", version, about = "Epsilon-safe equilibria of strategic-form games")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute an epsilon-safe equilibrium.
    Solve(SolveArgs),
    /// Measure how far a solution file is from an epsilon-safe equilibrium.
    Verify(VerifyArgs),
    /// Write a random game with payoffs uniform in [0, 1).
    Gen(GenArgs),
    /// Run a benchmark suite on seeded random games.
    Bench(BenchArgs),
    /// Write the feasibility program in LP format.
    ExportModel(ExportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Exact,
    Approx,
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[arg(long)]
    game: PathBuf,
    /// Comma-separated epsilons: two values for two players, otherwise one
    /// per player with the first equal to 0.
    #[arg(long)]
    eps: String,
    #[arg(long, value_enum, default_value_t = Method::Exact)]
    method: Method,
    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    iters: u64,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    restarts: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long)]
    game: PathBuf,
    #[arg(long)]
    solution: PathBuf,
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
}

#[derive(Debug, Args)]
struct GenArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
    players: u64,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    m: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[arg(long, value_enum)]
    suite: Suite,
    /// Comma-separated strategy counts; a suite-specific grid when omitted.
    #[arg(long)]
    m: Option<String>,
    #[arg(long, default_value_t = 100)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// CSV output file; stdout when omitted (the summary then goes to stderr).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Iterations per approximate run.
    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    iters: u64,
}

#[derive(Debug, Args)]
struct ExportArgs {
    #[arg(long)]
    game: PathBuf,
    #[arg(long)]
    eps: String,
    #[arg(long)]
    out: PathBuf,
}

/// An error paired with the exit code it maps to.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

fn usage(error: impl Into<anyhow::Error>) -> Failure {
    Failure { code: 2, error: error.into() }
}

fn solver(error: impl Into<anyhow::Error>) -> Failure {
    Failure { code: 1, error: error.into() }
}

/// Argument-shaped library errors exit 2, everything else 1.
fn from_lib(error: safe_equilibrium::Error) -> Failure {
    use safe_equilibrium::Error as E;
    match error {
        E::InvalidArgument(_) | E::Unsupported(_) | E::Budget(_) => usage(error),
        _ => solver(error),
    }
}

type CmdResult = Result<u8, Failure>;

fn load_game(path: &Path) -> Result<Game, Failure> {
    let file: GameFile = read_json(path).map_err(|e| usage(e.context("--game")))?;
    file.to_game().map_err(|e| usage(e.context(format!("--game {}", path.display()))))
}

fn parse_eps(text: &str, game: &Game) -> Result<EpsilonVector, Failure> {
    let values = text
        .split(',')
        .map(|v| v.trim().parse::<f64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| usage(anyhow!("--eps: {e} in {text:?}")))?;
    let n = game.num_players();
    if values.len() != n {
        return Err(usage(anyhow!(
            "--eps: expected {n} comma-separated values for a {n}-player game, got {}",
            values.len()
        )));
    }
    if n > 2 && values[0] != 0.0 {
        return Err(usage(anyhow!(
            "--eps: player 1 is protected in games with more than two players; its value must be 0"
        )));
    }
    EpsilonVector::new(values).map_err(|e| usage(anyhow!("--eps: {e}")))
}

fn cmd_solve(args: SolveArgs) -> CmdResult {
    let game = load_game(&args.game)?;
    let eps = parse_eps(&args.eps, &game)?;
    let start = Instant::now();
    let (solution, metadata) = match args.method {
        Method::Exact => {
            if game.num_players() != 2 {
                return Err(usage(anyhow!(
                    "--method exact supports two-player games only; use `export-model` to write the \
                     {}-player program for an external solver, or --method approx",
                    game.num_players()
                )));
            }
            let sol = solve_exact_2p(&game, &eps).map_err(from_lib)?;
            let meta =
                Metadata { method: "exact".into(), iterations: None, restarts: None, seed: None, wall_time_ms: 0.0 };
            (sol, meta)
        }
        Method::Approx => {
            let cfg = ApproxConfig::new(args.iters as usize, args.restarts as usize, args.seed);
            let sol = approximate(&game, &eps, &cfg).map_err(from_lib)?.solution;
            let meta = Metadata {
                method: "approx".into(),
                iterations: Some(cfg.iterations),
                restarts: Some(cfg.restarts),
                seed: Some(cfg.seed),
                wall_time_ms: 0.0,
            };
            (sol, meta)
        }
    };
    let metadata = Metadata { wall_time_ms: start.elapsed().as_secs_f64() * 1e3, ..metadata };
    let file = SolutionFile::from_solution(&solution, metadata);
    write_json(&file, args.out.as_deref()).map_err(solver)?;
    if let Some(out) = &args.out {
        let d = &file.deltas;
        println!(
            "wrote {}: delta_rho {:.3e}, delta_tau {:.3e}{}",
            out.display(),
            d.delta_rho,
            d.delta_tau,
            d.delta_sigma.map_or(String::new(), |s| format!(", delta_sigma {s:.3e}"))
        );
    }
    Ok(0)
}

fn cmd_verify(args: VerifyArgs) -> CmdResult {
    let game = load_game(&args.game)?;
    let file: SolutionFile = read_json(&args.solution).map_err(|e| usage(e.context("--solution")))?;
    let sol = file.to_solution(&game).map_err(|e| usage(e.context("--solution does not fit --game")))?;
    let d = sol.deltas;
    let mixture = sol.mixture_residual();
    println!("delta_sigma {}", d.delta_sigma.map_or("-".to_string(), |v| format!("{v:.6e}")));
    println!("delta_rho {:.6e}", d.delta_rho);
    println!("delta_tau {:.6e}", d.delta_tau);
    println!("mixture_residual {mixture:.6e}");
    let ok = d.max_component() <= args.tol && mixture <= args.tol;
    println!("{} at tolerance {:e}", if ok { "verified" } else { "NOT verified" }, args.tol);
    Ok(if ok { 0 } else { 3 })
}

fn cmd_gen(args: GenArgs) -> CmdResult {
    let game = random_game(args.players as usize, args.m as usize, &mut seeded_rng(args.seed)).map_err(from_lib)?;
    write_json(&GameFile::from_game(&game), args.out.as_deref()).map_err(solver)?;
    Ok(0)
}

fn parse_sizes(text: &str) -> Result<Vec<usize>, Failure> {
    let sizes = text
        .split(',')
        .map(|v| v.trim().parse::<usize>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| usage(anyhow!("--m: {e} in {text:?}")))?;
    if sizes.contains(&0) {
        return Err(usage(anyhow!("--m: strategy counts must be positive")));
    }
    Ok(sizes)
}

fn cmd_bench(args: BenchArgs) -> CmdResult {
    let sizes = match &args.m {
        Some(text) => parse_sizes(text)?,
        None => args.suite.default_sizes(),
    };
    let run = bench::run(args.suite, &sizes, args.trials, args.seed, args.iters as usize);
    let summary = bench::summary(args.suite, &sizes, &run);
    match &args.out {
        Some(path) => {
            let file = File::create(path).map_err(|e| usage(anyhow!("--out {}: {e}", path.display())))?;
            bench::write_csv(&run.records, BufWriter::new(file)).map_err(solver)?;
            print!("{summary}");
        }
        None => {
            bench::write_csv(&run.records, std::io::stdout().lock()).map_err(solver)?;
            eprint!("{summary}");
        }
    }
    for (m, trial, msg) in &run.failures {
        eprintln!("trial {trial} at m = {m} failed: {msg}");
    }
    Ok(if run.failures.is_empty() { 0 } else { 1 })
}

fn cmd_export_model(args: ExportArgs) -> CmdResult {
    let game = load_game(&args.game)?;
    let eps = parse_eps(&args.eps, &game)?;
    let text = write_model(&game, &eps).map_err(from_lib)?;
    std::fs::write(&args.out, text).map_err(|e| usage(anyhow!("--out {}: {e}", args.out.display())))?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Gen(a) => cmd_gen(a),
        Command::Bench(a) => cmd_bench(a),
        Command::ExportModel(a) => cmd_export_model(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
