//! Fusion with a diversity bonus: DQN best responses rewarded for leaving
//! the convex hull of the current population.
//!
//! cargo run --release --example psd_psro

use fusion_psro::games::GameSpec;
use fusion_psro::oracles::{DqnConfig, OracleSpec};
use fusion_psro::psro::{run_psro, PsroConfig};

fn main() -> fusion_psro::Result<()> {
    let mut dqn = DqnConfig::desk();
    dqn.episodes = 500;
    for enabled in [false, true] {
        let mut config = PsroConfig::new(GameSpec::new("kuhn_poker"), OracleSpec::Dqn(dqn.clone()), 5);
        config.psd.enabled = enabled;
        config.psd.lambda = 0.1;
        let h = run_psro(&config, 0)?;
        let trail: Vec<String> = h
            .records
            .iter()
            .map(|r| format!("{:.3}", r.exploitability.unwrap_or(f64::NAN)))
            .collect();
        println!("diversity bonus {enabled:<5}: exploitability {}", trail.join(" "));
    }
    Ok(())
}
