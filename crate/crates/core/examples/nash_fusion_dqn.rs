//! Fusion-initialized DQN best responses on Kuhn poker, with every run file
//! written to a temporary directory.
//!
//! cargo run --release --example nash_fusion_dqn

use fusion_psro::experiment::{read_results, run_config};
use fusion_psro::games::GameSpec;
use fusion_psro::oracles::{DqnConfig, OracleSpec};
use fusion_psro::psro::{InitMethod, PsroConfig};

fn main() -> fusion_psro::Result<()> {
    let mut dqn = DqnConfig::desk();
    dqn.episodes = 1_000;
    let mut config = PsroConfig::new(GameSpec::new("kuhn_poker"), OracleSpec::Dqn(dqn), 6);
    config.init = InitMethod::fusion().into();

    let out = std::env::temp_dir().join("fusion_psro_dqn");
    let histories = run_config(&config, &out)?;
    for h in &histories {
        let dir = fusion_psro::experiment::seed_dir(&out, h.seed);
        println!("seed {} -> {}", h.seed, dir.display());
        for row in read_results(&dir.join("results.csv"))? {
            println!(
                "  iter {}  exploitability {:.4}",
                row.iteration,
                row.exploitability.unwrap_or(f64::NAN)
            );
        }
        let fusion: f64 = h.records.iter().map(|r| r.timings.fusion).sum();
        let total: f64 = h.records.iter().map(|r| r.timings.total).sum();
        println!("  fusion took {:.4}% of wall time", 100.0 * fusion / total);
    }
    Ok(())
}
