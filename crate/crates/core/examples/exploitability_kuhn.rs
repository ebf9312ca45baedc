//! Exact expected value, best response and exploitability on Kuhn poker.
//!
//! cargo run --example exploitability_kuhn

use std::sync::Arc;

use fusion_psro::games::{ExactEvaluator, GameSpec, DEFAULT_NODE_BUDGET};
use fusion_psro::policies::{Policy, PolicyMixture, TabularPolicy};

fn main() -> fusion_psro::Result<()> {
    let game = GameSpec::new("kuhn_poker").build()?;
    let ev = ExactEvaluator::new(game, DEFAULT_NODE_BUDGET)?;
    println!("tree: {} nodes", ev.tree().len());

    // An empty table plays uniformly at every infoset.
    let uniform = PolicyMixture::single(Arc::new(Policy::Tabular(TabularPolicy::new())));
    let [v0, v1] = ev.policy_value([&uniform, &uniform]);
    println!("uniform vs uniform: ({v0:.6}, {v1:.6})");

    for responder in 0..2 {
        let (br, value) = ev.policy_best_response(&uniform, responder)?;
        println!("player {responder} best response value {value:.6} over {} infosets", br.len());
    }
    println!(
        "exploitability of uniform play: {:.6}",
        ev.policy_exploitability([&uniform, &uniform])?
    );
    Ok(())
}
