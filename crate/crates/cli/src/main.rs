//! Experiment CLI: config ingestion, deterministic dispatch, report emission.
//!
//! Exit codes: 0 when every report passes, 1 when any report fails, 2 on
//! config or usage errors.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use polytor::harness::{
    estimate_cotype_constant, estimate_type_constant, run_experiment, write_outputs, CheckStatus,
    ExperimentConfig,
};
use polytor::norms::EstimatorBudget;
use polytor::poly::stirling_ratio;
use polytor::projections::{hilbert_inverse, lemma3_envelope};
use polytor::spaces::NormedSpace;

/// Seed fallback read when no `--seed` flag is given.
const SEED_ENV: &str = "POLYTOR_SEED";

#[derive(Parser)]
#[command(name = "polytor", about = "Inequality experiments on the polytorus and the Boolean cube")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a JSON experiment config and write results.json + summary.csv.
    Run(RunArgs),
    /// Estimate a type or cotype constant for one space.
    Constants(ConstantsArgs),
    /// Emit plot-ready CSV tables (Hilbert growth, Stirling ratios, Kahane ratios).
    Tables(TablesArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Path of the experiment config.
    #[arg(long)]
    config: PathBuf,
    /// Seed override for every check (flag beats POLYTOR_SEED beats config).
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; 0 means all cores. Results are identical either way.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Glob on check names; only matching checks run.
    #[arg(long)]
    filter: Option<String>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct ConstantsArgs {
    /// Space descriptor, e.g. '{"family":"ellp","p":1,"dim":2}'.
    #[arg(long)]
    space: String,
    /// Cotype exponent (q >= 2).
    #[arg(long)]
    q: Option<f64>,
    /// Type exponent (1 <= p <= 2).
    #[arg(long)]
    p: Option<f64>,
    /// Number of vectors per instance.
    #[arg(long, default_value_t = 3)]
    n: usize,
    /// Search budget (random instances before refinement).
    #[arg(long, default_value_t = 64)]
    budget: usize,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct TablesArgs {
    /// Output directory for the CSV tables.
    #[arg(long, default_value = "tables")]
    out: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
}

fn env_seed() -> Option<u64> {
    std::env::var(SEED_ENV).ok().and_then(|v| v.parse().ok())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Constants(args) => cmd_constants(args),
        Command::Tables(args) => cmd_tables(args),
    }
}

fn cmd_run(args: RunArgs) -> ExitCode {
    let config = match ExperimentConfig::from_path(&args.config) {
        Ok(c) => c,
        Err(err) => {
            eprintln!("config error: {err}");
            return ExitCode::from(2);
        }
    };
    let seed = args.seed.or_else(env_seed);
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(args.jobs).build() {
        Ok(p) => p,
        Err(err) => {
            eprintln!("thread pool error: {err}");
            return ExitCode::from(2);
        }
    };
    let bundle = pool.install(|| run_experiment(&config, seed, args.filter.as_deref()));
    if let Err(err) = write_outputs(&bundle, &args.out) {
        eprintln!("output error: {err}");
        return ExitCode::from(2);
    }

    let mut by_name: BTreeMap<&str, (usize, usize, usize)> = BTreeMap::new();
    for report in &bundle.reports {
        let slot = by_name.entry(&report.name).or_default();
        match report.status {
            CheckStatus::Pass => slot.0 += 1,
            CheckStatus::Inconclusive => slot.1 += 1,
            CheckStatus::Fail => slot.2 += 1,
        }
    }
    for (name, (pass, inconclusive, fail)) in &by_name {
        println!("{name}: {pass} pass, {inconclusive} inconclusive, {fail} fail");
    }
    println!(
        "digest {}  reports {}  constants {}  -> {}",
        bundle.digest,
        bundle.reports.len(),
        bundle.constants.len(),
        if bundle.all_pass { "ok" } else { "FAIL" }
    );
    if bundle.all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn cmd_constants(args: ConstantsArgs) -> ExitCode {
    let space: NormedSpace = match serde_json::from_str(&args.space) {
        Ok(s) => s,
        Err(err) => {
            eprintln!("space descriptor error: {err}");
            return ExitCode::from(2);
        }
    };
    let seed = args.seed.or_else(env_seed).unwrap_or(0);
    let budget = EstimatorBudget::default();
    let estimate = match (args.q, args.p) {
        (Some(q), None) => estimate_cotype_constant(&space, q, args.n, args.budget, seed, &budget),
        (None, Some(p)) => estimate_type_constant(&space, p, args.n, args.budget, seed, &budget),
        _ => {
            eprintln!("pass exactly one of --q (cotype) or --p (type)");
            return ExitCode::from(2);
        }
    };
    match estimate {
        Ok(est) => {
            println!("{}", serde_json::to_string_pretty(&est).expect("serializable"));
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("{err}");
            ExitCode::from(2)
        }
    }
}

fn cmd_tables(args: TablesArgs) -> ExitCode {
    match write_tables(&args.out, args.seed.or_else(env_seed).unwrap_or(0)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("table error: {err}");
            ExitCode::from(2)
        }
    }
}

fn write_tables(out: &std::path::Path, seed: u64) -> polytor::Result<()> {
    use polytor::harness::gen::{random_vpoly, rng_for, DegreeSpec};
    use polytor::norms::lq_norm_auto;

    std::fs::create_dir_all(out)?;

    // growth of the Hilbert inverse entries
    let mut hilbert = String::from("m,max_abs_entry,log_max_abs,envelope\n");
    for m in 0..=12usize {
        let max = hilbert_inverse(m)?.max_abs_f64();
        hilbert.push_str(&format!(
            "{m},{max},{},{}\n",
            max.ln(),
            lemma3_envelope(m)?
        ));
    }
    std::fs::write(out.join("hilbert_growth.csv"), hilbert)?;

    // Stirling binomial ratios over the desk range
    let mut stirling = String::from("n,m,k,ratio\n");
    for m in 1..=40u64 {
        for k in 1..=40u64 {
            let n = m * k;
            if n > 40 {
                continue;
            }
            stirling.push_str(&format!("{n},{m},{k},{}\n", stirling_ratio(n, m, k)?));
        }
    }
    std::fs::write(out.join("stirling_ratios.csv"), stirling)?;

    // measured Kahane ratios; the homogeneous rows carry the theoretical
    // bound, the mixed-degree rows are recorded without asserting one
    let budget = EstimatorBudget::default();
    let mut kahane = String::from("space,kind,m,s,r,measured_ratio,bound\n");
    for (label, space) in [
        ("l1^2", NormedSpace::ellp_f(1.0, 2)),
        ("l2^2", NormedSpace::euclidean(2)),
        ("linf^2", NormedSpace::linf(2)),
    ] {
        for m in 1..=3u32 {
            for (s, r) in [(1.0f64, 2.0f64), (2.0, 4.0)] {
                for (kind, spec) in [
                    ("homogeneous", DegreeSpec::Homogeneous(m)),
                    ("mixed", DegreeSpec::AtMost(m)),
                ] {
                    let mut worst: f64 = 0.0;
                    for i in 0..10u64 {
                        let poly = random_vpoly(
                            &mut rng_for(seed ^ m as u64, i + 1),
                            &space,
                            3,
                            spec,
                            5,
                        );
                        let hi = lq_norm_auto(&poly, r, seed, &budget)?.value;
                        let lo = lq_norm_auto(&poly, s, seed, &budget)?.value;
                        if lo > 1e-12 {
                            worst = worst.max(hi / lo);
                        }
                    }
                    let bound = if kind == "homogeneous" {
                        format!("{}", (r / s).powf(m as f64 / 2.0))
                    } else {
                        String::new()
                    };
                    kahane.push_str(&format!("{label},{kind},{m},{s},{r},{worst},{bound}\n"));
                }
            }
        }
    }
    std::fs::write(out.join("kahane_ratios.csv"), kahane)?;
    Ok(())
}
