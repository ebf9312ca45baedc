use std::collections::BTreeMap;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::{play_episode, sample_member};
use crate::error::{Error, Result};
use crate::games::Game;
use crate::policies::{argmax, PolicyMixture, TabularPolicy};
use crate::rng::rng_from_seed;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QLearningConfig {
    pub episodes: usize,
    pub lr: f64,
    pub epsilon: f64,
    #[serde(default = "one")]
    pub gamma_discount: f64,
}

fn one() -> f64 {
    1.0
}

impl QLearningConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.lr > 0.0) {
            return Err(Error::param("lr", "must be positive"));
        }
        if !(0.0..=1.0).contains(&self.epsilon) {
            return Err(Error::param("epsilon", "must lie in [0, 1]"));
        }
        if !(0.0..=1.0).contains(&self.gamma_discount) {
            return Err(Error::param("gamma_discount", "must lie in [0, 1]"));
        }
        Ok(())
    }
}

/// One-step tabular Q-learning against opponents drawn from `opponent`, one
/// per episode. With `init`, each infoset's values start at the init policy's
/// action probabilities.
pub fn q_learning_oracle(
    game: &dyn Game,
    init: Option<&TabularPolicy>,
    opponent: &PolicyMixture,
    player: usize,
    cfg: &QLearningConfig,
    seed: u64,
) -> Result<TabularPolicy> {
    cfg.validate()?;
    let mut rng = rng_from_seed(seed);
    let mut q: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    let start = |key: &str, n: usize| match init {
        Some(t) => t.probs(key, n),
        None => vec![0.0; n],
    };
    for _ in 0..cfg.episodes {
        let opp = sample_member(opponent, &mut rng);
        let traj = play_episode(game, player, opp, &mut rng, |state, legal, rng| {
            let key = game.infoset_key(state, player);
            let values = q.entry(key.clone()).or_insert_with(|| start(&key, legal.len()));
            if rng.random::<f64>() < cfg.epsilon {
                rng.random_range(0..legal.len())
            } else {
                argmax(values)
            }
        });
        for step in &traj.steps {
            let target = match &step.next_key {
                Some(next) if !step.terminal => {
                    let best = q
                        .get(next)
                        .map_or(0.0, |v| v.iter().copied().fold(f64::NEG_INFINITY, f64::max));
                    step.reward + cfg.gamma_discount * best
                }
                _ => step.reward,
            };
            let values = q.get_mut(&step.key).expect("visited key");
            values[step.action] += cfg.lr * (target - values[step.action]);
        }
    }
    let mut policy = TabularPolicy::new();
    for (key, values) in q {
        policy.set_pure(key, values.len(), argmax(&values));
    }
    Ok(policy)
}
