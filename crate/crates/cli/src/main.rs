use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use fusion_psro::experiment::plot::{render_svg, PlotKind};
use fusion_psro::experiment::{
    describe_solution, evaluate_dir, load_config, parse_mss, read_matrix, run_from_config, summary_csv, sweep,
    SweepParam,
};

/// Population training with Nash-weighted policy fusion. Set RUST_LOG for
/// log output.
#[derive(Parser)]
#[command(version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every seed of a config.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run one arm per value of a config field and summarize final exploitability.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// fusion_start_c, top_k, mss or init.
        #[arg(long)]
        param: String,
        /// Comma-separated values.
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<String>,
        /// Defaults to the config's output_dir, or runs/sweep.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve a zero-sum payoff matrix for the row player.
    SolveMatrix {
        #[arg(long)]
        matrix: PathBuf,
        /// nash, prd, fp or uniform.
        #[arg(long, default_value = "nash")]
        mss: String,
    },
    /// Render run outputs as SVG.
    Plot {
        /// exploitability, trajectories, reward_curves or kl_tiles.
        #[arg(long)]
        kind: String,
        #[arg(long = "in", num_args = 1.., required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Rebuild the meta-game of a finished run from its checkpoints.
    Eval {
        /// A seed directory holding config.json and checkpoints/.
        #[arg(long)]
        dir: PathBuf,
    },
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run { config } => {
            let histories = run_from_config(&config).with_context(|| format!("running {}", config.display()))?;
            for h in histories {
                let last = h.final_record();
                println!(
                    "seed {}: {} iterations, final exploitability {}",
                    h.seed,
                    h.records.len(),
                    last.and_then(|r| r.exploitability.or(r.approx_exploitability))
                        .map_or("n/a".to_string(), |v| format!("{v:.6}"))
                );
            }
        }
        Command::Sweep {
            config,
            param,
            values,
            out,
        } => {
            let cfg = load_config(&config)?;
            let param: SweepParam = param.parse()?;
            let base = out
                .or_else(|| cfg.output_dir.clone())
                .unwrap_or_else(|| PathBuf::from("runs/sweep"));
            let rows = sweep(&cfg, param, &values, &base)?;
            print!("{}", summary_csv(&rows));
        }
        Command::SolveMatrix { matrix, mss } => {
            let m = read_matrix(&matrix)?;
            print!("{}", describe_solution(&m, &parse_mss(&mss)?)?);
        }
        Command::Plot { kind, inputs, out } => {
            let kind: PlotKind = kind.parse()?;
            render_svg(kind, &inputs, &out)?;
            println!("wrote {}", out.display());
        }
        Command::Eval { dir } => {
            let r = evaluate_dir(&dir)?;
            println!("populations: {} x {}", r.pop_sizes[0], r.pop_sizes[1]);
            println!("meta exploitability: {:.3e}", r.meta_exploitability);
            if let Some(e) = r.exploitability {
                println!("exploitability: {e:.6}");
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
