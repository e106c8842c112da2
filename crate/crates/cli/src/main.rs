use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand};
use mvbandit_cli::commands::{
    parse_policy_list, run_figures, run_lowerbound, run_oracle_check, run_simulate, run_theory,
    Common, Figure, Overrides, TheoryOptions,
};

#[derive(Parser)]
#[command(name = "mvbandit", version, about = "Mean-variance bandit experiments")]
struct Cli {
    /// Base seed; replication i uses seed + i.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Experiment scale in (0, 1] for `figures`.
    #[arg(long, global = true, default_value_t = 1.0)]
    scale: f64,
    /// Also write the per-round decision-variance series.
    #[arg(long, global = true)]
    dense: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every (environment, policy) pair of a JSON config.
    Simulate {
        config: PathBuf,
        #[arg(long)]
        runs: Option<usize>,
        #[arg(long)]
        horizon: Option<usize>,
    },
    /// Six-panel data for fig1 (bandit) or fig2 (full information).
    Figures {
        #[arg(value_parser = |s: &str| s.parse::<Figure>().map_err(|e| e.to_string()))]
        figure: Figure,
    },
    /// Exact enumeration battery; exits 1 if any identity fails.
    OracleCheck {
        /// Flip the sign of the decision-variance term (self-test).
        #[arg(long)]
        inject_fault: bool,
        /// Run with an empty battery.
        #[arg(long)]
        empty: bool,
    },
    /// Numerical checks of the analytical results.
    Theory {
        #[arg(long, default_value_t = 50_000)]
        mc_runs: usize,
        #[arg(long, default_value_t = 500)]
        bound_runs: usize,
    },
    /// Max-over-pair regret on the worst-case construction.
    Lowerbound {
        #[arg(long, value_delimiter = ',', default_value = "1000,4000")]
        horizons: Vec<usize>,
        #[arg(long, default_value = "mvfl,mvlcb")]
        policies: String,
        #[arg(long, default_value_t = 500)]
        runs: usize,
    },
}

fn run(cli: Cli) -> Result<ExitCode> {
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()?;
    }
    let common = Common {
        seed: cli.seed,
        dense: cli.dense,
    };
    let out = &cli.out;
    match cli.command {
        Command::Simulate {
            config,
            runs,
            horizon,
        } => {
            run_simulate(&config, out, &common, Overrides { runs, horizon })?;
        }
        Command::Figures { figure } => {
            run_figures(figure, cli.scale, out, &common)?;
        }
        Command::OracleCheck {
            inject_fault,
            empty,
        } => {
            if !run_oracle_check(out, inject_fault, empty)? {
                eprintln!(
                    "identity check failed; see {}",
                    out.join("exact.json").display()
                );
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::Theory {
            mc_runs,
            bound_runs,
        } => {
            let opts = TheoryOptions {
                mc_runs,
                bound_runs,
                seed: cli.seed.unwrap_or(0),
                ..TheoryOptions::default()
            };
            let report = run_theory(&opts, out)?;
            for r in report.records.iter().filter(|r| !r.holds) {
                let tag = if r.expected_violation {
                    "expected"
                } else {
                    "UNEXPECTED"
                };
                eprintln!(
                    "{tag} violation: {} computed={} reference={:?}",
                    r.check_name, r.computed_value, r.reference_value
                );
            }
            if !report.unexpected_violations().is_empty() {
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::Lowerbound {
            horizons,
            policies,
            runs,
        } => {
            let policies = parse_policy_list(&policies)?;
            for row in run_lowerbound(&horizons, &policies, runs, cli.seed.unwrap_or(0), out)? {
                println!(
                    "{:<16} T={:<6} max regret {:>10.3}  per round {:.5}",
                    row.policy,
                    row.horizon,
                    row.max_regret,
                    row.per_round()
                );
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
