use std::io::Write;
use std::time::Instant;

use clap::ValueEnum;
use rayon::prelude::*;
use serde::Serialize;

use safe_equilibrium::{
    approximate, random_game, seeded_rng, solve_exact_2p, trial_seed, write_model, ApproxConfig, Deltas, EpsilonVector,
};

pub const CSV_HEADER: [&str; 9] =
    ["m", "players", "trial", "seed", "method", "time_ms", "delta_sigma", "delta_rho", "delta_tau"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    #[value(name = "2p-exact")]
    TwoPlayerExact,
    #[value(name = "3p-export")]
    ThreePlayerExport,
    #[value(name = "2p-approx")]
    TwoPlayerApprox,
    #[value(name = "2p-approx-maximin")]
    TwoPlayerApproxMaximin,
    #[value(name = "3p-approx")]
    ThreePlayerApprox,
    #[value(name = "3p-approx-maximin")]
    ThreePlayerApproxMaximin,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::TwoPlayerExact => "2p-exact",
            Suite::ThreePlayerExport => "3p-export",
            Suite::TwoPlayerApprox => "2p-approx",
            Suite::TwoPlayerApproxMaximin => "2p-approx-maximin",
            Suite::ThreePlayerApprox => "3p-approx",
            Suite::ThreePlayerApproxMaximin => "3p-approx-maximin",
        }
    }

    pub fn players(self) -> usize {
        match self {
            Suite::TwoPlayerExact | Suite::TwoPlayerApprox | Suite::TwoPlayerApproxMaximin => 2,
            _ => 3,
        }
    }

    pub fn default_sizes(self) -> Vec<usize> {
        match self {
            Suite::TwoPlayerExact => vec![2, 3, 4, 5],
            Suite::TwoPlayerApprox | Suite::TwoPlayerApproxMaximin => vec![2, 3, 5, 10],
            _ => vec![2, 3, 5],
        }
    }

    fn restarts(self) -> usize {
        match self {
            Suite::TwoPlayerApproxMaximin | Suite::ThreePlayerApproxMaximin => 10,
            _ => 1,
        }
    }

    fn epsilon(self) -> EpsilonVector {
        let values = if self.players() == 2 { vec![0.0, 0.05] } else { vec![0.0, 0.05, 0.05] };
        EpsilonVector::new(values).expect("benchmark epsilon is valid")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRecord {
    pub m: usize,
    pub players: usize,
    pub trial: u64,
    pub seed: u64,
    pub method: &'static str,
    pub time_ms: f64,
    pub delta_sigma: Option<f64>,
    pub delta_rho: Option<f64>,
    pub delta_tau: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct BenchRun {
    pub records: Vec<BenchRecord>,
    /// `(m, trial, message)` of every failed trial.
    pub failures: Vec<(usize, u64, String)>,
}

fn run_trial(suite: Suite, m: usize, trial: u64, seed: u64, iterations: usize) -> Result<BenchRecord, String> {
    let seed = trial_seed(seed, m, trial);
    let game = random_game(suite.players(), m, &mut seeded_rng(seed)).map_err(|e| e.to_string())?;
    let eps = suite.epsilon();
    let start = Instant::now();
    let deltas: Option<Deltas> = match suite {
        Suite::TwoPlayerExact => Some(solve_exact_2p(&game, &eps).map_err(|e| e.to_string())?.deltas),
        Suite::ThreePlayerExport => {
            write_model(&game, &eps).map_err(|e| e.to_string())?;
            None
        }
        _ => {
            let cfg = ApproxConfig::new(iterations, suite.restarts(), seed);
            Some(approximate(&game, &eps, &cfg).map_err(|e| e.to_string())?.solution.deltas)
        }
    };
    Ok(BenchRecord {
        m,
        players: suite.players(),
        trial,
        seed,
        method: suite.name(),
        time_ms: start.elapsed().as_secs_f64() * 1e3,
        delta_sigma: deltas.and_then(|d| d.delta_sigma),
        delta_rho: deltas.map(|d| d.delta_rho),
        delta_tau: deltas.map(|d| d.delta_tau),
    })
}

/// Runs every `(m, trial)` task in parallel; records come back ordered by
/// the position of `m` in `sizes`, then by trial.
pub fn run(suite: Suite, sizes: &[usize], trials: u64, seed: u64, iterations: usize) -> BenchRun {
    let tasks: Vec<(usize, u64)> = sizes.iter().flat_map(|&m| (0..trials).map(move |t| (m, t))).collect();
    let results: Vec<_> = tasks.par_iter().map(|&(m, t)| (m, t, run_trial(suite, m, t, seed, iterations))).collect();
    let mut run = BenchRun { records: Vec::new(), failures: Vec::new() };
    for (m, t, r) in results {
        match r {
            Ok(rec) => run.records.push(rec),
            Err(e) => run.failures.push((m, t, e)),
        }
    }
    run
}

pub fn write_csv<W: Write>(records: &[BenchRecord], out: W) -> anyhow::Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

fn mean(v: &[f64]) -> Option<f64> {
    (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64)
}

fn median(v: &[f64]) -> Option<f64> {
    if v.is_empty() {
        return None;
    }
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    let k = s.len() / 2;
    Some(if s.len() % 2 == 1 { s[k] } else { 0.5 * (s[k - 1] + s[k]) })
}

fn cell(x: Option<f64>) -> String {
    x.map_or_else(|| "-".to_string(), |v| format!("{v:.3e}"))
}

/// Per-size means and medians of time and deltas, one line per size.
pub fn summary(suite: Suite, sizes: &[usize], run: &BenchRun) -> String {
    let mut out = format!(
        "{} ({} players)\n{:>4} {:>6} {:>6} {:>10} {:>10} {:>10} {:>10} {:>10} {:>10} {:>10}\n",
        suite.name(),
        suite.players(),
        "m",
        "trials",
        "failed",
        "mean_ms",
        "median_ms",
        "mean_dsig",
        "mean_drho",
        "mean_dtau",
        "med_drho",
        "med_dtau",
    );
    for &m in sizes {
        let rows: Vec<&BenchRecord> = run.records.iter().filter(|r| r.m == m).collect();
        let failed = run.failures.iter().filter(|f| f.0 == m).count();
        let col = |f: fn(&BenchRecord) -> Option<f64>| rows.iter().filter_map(|r| f(r)).collect::<Vec<f64>>();
        let times = col(|r| Some(r.time_ms));
        let (sig, rho, tau) = (col(|r| r.delta_sigma), col(|r| r.delta_rho), col(|r| r.delta_tau));
        out.push_str(&format!(
            "{:>4} {:>6} {:>6} {:>10} {:>10} {:>10} {:>10} {:>10} {:>10} {:>10}\n",
            m,
            rows.len() + failed,
            failed,
            cell(mean(&times)),
            cell(median(&times)),
            cell(mean(&sig)),
            cell(mean(&rho)),
            cell(mean(&tau)),
            cell(median(&rho)),
            cell(median(&tau)),
        ));
    }
    out
}
