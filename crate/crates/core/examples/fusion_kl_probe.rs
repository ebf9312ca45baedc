//! How close each initialization starts to the Nash-weighted ensemble, on
//! two-face Liar's Dice.
//!
//! cargo run --release --example fusion_kl_probe

use std::collections::BTreeMap;

use fusion_psro::games::GameSpec;
use fusion_psro::oracles::{DqnConfig, OracleSpec};
use fusion_psro::psro::{run_psro, KlProbe, PsroConfig};

fn main() -> fusion_psro::Result<()> {
    let mut dqn = DqnConfig::desk();
    dqn.episodes = 500;
    let game = GameSpec::new("liars_dice").with_param("faces", 2);
    let mut config = PsroConfig::new(game, OracleSpec::Dqn(dqn), 6);
    config.eval.kl_probe = Some(KlProbe {
        num_states: 64,
        ..Default::default()
    });
    let history = run_psro(&config, 0)?;

    let mut by_arm: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
    for r in &history.records {
        for k in &r.kl {
            by_arm.entry(k.arm.as_str()).or_default().push(k.kl);
        }
    }
    for (arm, kls) in by_arm {
        let mean = kls.iter().sum::<f64>() / kls.len() as f64;
        println!("{arm:<15} mean KL to ensemble {mean:.5} over {} probes", kls.len());
    }
    Ok(())
}
