//! Sweep the fusion start threshold with DQN best responses on Kuhn poker
//! and print the summary table.
//!
//! cargo run --release --example ablation_sweep

use fusion_psro::experiment::{summary_csv, sweep, SweepParam};
use fusion_psro::games::GameSpec;
use fusion_psro::oracles::{DqnConfig, OracleSpec};
use fusion_psro::psro::PsroConfig;

fn main() -> fusion_psro::Result<()> {
    let mut dqn = DqnConfig::desk();
    dqn.episodes = 300;
    let mut config = PsroConfig::new(GameSpec::new("kuhn_poker"), OracleSpec::Dqn(dqn), 6);
    config.seeds = vec![0, 1, 2];
    let values: Vec<String> = ["0", "2", "4"].map(String::from).to_vec();
    let out = std::env::temp_dir().join("fusion_psro_sweep");
    let rows = sweep(&config, SweepParam::FusionStartC, &values, &out)?;
    print!("{}", summary_csv(&rows));
    println!("runs under {}", out.display());
    Ok(())
}
