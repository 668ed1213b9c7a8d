use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use myopic::bounds::{suboptimality_bound, BoundInputs};
use myopic::harness::{emit, load_scenario, summary, sweep, Mode, RunResult};
use myopic::RegularityConstants;

#[derive(Parser)]
#[command(name = "myopic", version, about = "Robust myopic control simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario.
    Run {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        mode: Option<Mode>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a scenario once per value of a parameter.
    Sweep {
        #[arg(long)]
        scenario: PathBuf,
        /// One of: e, delta_ratio, mode, tau, epsilon.
        #[arg(long)]
        param: String,
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        values: Vec<String>,
        #[arg(long)]
        mode: Option<Mode>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the suboptimality bound for the given constants.
    Bound {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        delta: f64,
        #[arg(long = "Delta")]
        obs_delta: f64,
        #[arg(long = "L")]
        lipschitz: f64,
        #[arg(long = "M0")]
        m0: f64,
        #[arg(long = "M1")]
        m1: f64,
    },
}

fn one_line(label: &str, r: &RunResult) -> String {
    let err = r
        .landing_or_target_error()
        .map(|e| format!(" error={e:.3}"))
        .unwrap_or_default();
    let dist = r
        .min_distance_to_unsafe
        .map(|d| format!(" min_dist={d:.3}"))
        .unwrap_or_default();
    format!(
        "{label} mode={} outcome={} t={:.2}{err}{dist} cycles={}",
        r.mode,
        r.outcome.label(),
        r.outcome.time(),
        r.completed_cycles
    )
}

fn main() -> ExitCode {
    match real_main(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn real_main(cli: Cli) -> myopic::Result<()> {
    match cli.command {
        Command::Run {
            scenario,
            mode,
            seed,
            out,
        } => {
            let mut s = load_scenario(&scenario)?;
            if let Some(mode) = mode {
                s.mode = mode;
            }
            if let Some(seed) = seed {
                s.seed = seed;
            }
            s.validate()?;
            let result = myopic::harness::run(&s)?;
            if let Some(dir) = out {
                emit(&result, &dir)?;
            }
            print!("{}", summary(&result));
        }
        Command::Sweep {
            scenario,
            param,
            values,
            mode,
            seed,
            out,
        } => {
            let mut s = load_scenario(&scenario)?;
            if let Some(mode) = mode {
                s.mode = mode;
            }
            if let Some(seed) = seed {
                s.seed = seed;
            }
            let results = sweep(&s, &param, &values)?;
            for (value, r) in values.iter().zip(&results) {
                let label = format!("{param}={value}");
                if let Some(dir) = &out {
                    emit(r, &dir.join(&label))?;
                }
                println!("{}", one_line(&label, r));
            }
        }
        Command::Bound {
            m,
            eps,
            delta,
            obs_delta,
            lipschitz,
            m0,
            m1,
        } => {
            let consts = RegularityConstants::new(m0, m1, lipschitz)?;
            if m == 0 || !(eps > 0.0) || !(delta > 0.0) || !(obs_delta >= 0.0) {
                return Err(myopic::Error::InvalidArgument(
                    "need m >= 1, eps > 0, delta > 0 and Delta >= 0".into(),
                ));
            }
            let b = BoundInputs {
                consts,
                m,
                epsilon: eps,
                delta_probe: delta,
                delta_obs: obs_delta,
            };
            println!("{}", suboptimality_bound(&b));
        }
    }
    Ok(())
}
