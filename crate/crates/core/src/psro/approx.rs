use std::sync::Arc;

use crate::error::{Error, Result};
use crate::games::{sample_playthrough_returns, ExactEvaluator, Game};
use crate::oracles::{dqn_oracle, q_learning_oracle, OracleSpec};
use crate::policies::{scratch_init, ArchSignature, Policy, PolicyMixture};
use crate::rng::derive_seed;

/// Episodes per value estimate when the game is too large to evaluate exactly.
pub const APPROX_EPISODES: usize = 10_000;

/// Sum over players of what a trained best response gains over the player's
/// own mixture. Values are exact when the tree fits in `budget` nodes and
/// estimated from [`APPROX_EPISODES`] playthroughs otherwise. Per-player gains
/// are clipped at zero.
pub fn approximate_exploitability(
    game: Arc<dyn Game>,
    profile: [&PolicyMixture; 2],
    oracle: &OracleSpec,
    seed: u64,
    budget: usize,
) -> Result<f64> {
    let exact = match ExactEvaluator::new(game.clone(), budget) {
        Ok(ev) => Some(ev),
        Err(Error::NodeBudgetExceeded { .. }) => None,
        Err(e) => return Err(e),
    };
    approximate_with(game.as_ref(), exact.as_ref(), profile, oracle, seed)
}

pub(crate) fn approximate_with(
    game: &dyn Game,
    exact: Option<&ExactEvaluator>,
    profile: [&PolicyMixture; 2],
    oracle: &OracleSpec,
    seed: u64,
) -> Result<f64> {
    oracle.validate()?;
    let mut total = 0.0;
    for player in 0..2 {
        let opponent = profile[1 - player];
        let unit = derive_seed(seed, &[player as u64]);
        let br = match oracle {
            OracleSpec::Exact => {
                let ev = exact.ok_or_else(|| {
                    Error::Unsupported("an exact best response needs the game tree within budget".into())
                })?;
                Policy::Tabular(ev.policy_best_response(opponent, player)?.0)
            }
            OracleSpec::QLearning(cfg) => Policy::Tabular(q_learning_oracle(game, None, opponent, player, cfg, unit)?),
            OracleSpec::Dqn(cfg) => {
                let sig = ArchSignature::for_game(game, &cfg.hidden_layers)?;
                let init = scratch_init(cfg.init, &sig, derive_seed(unit, &[0]))?;
                let out = dqn_oracle(game, &init, opponent, player, cfg, derive_seed(unit, &[1]), None)?;
                Policy::Parametric(out.policy)
            }
            OracleSpec::Gradient { .. } => {
                return Err(Error::Unsupported("gradient oracle on an extensive-form game".into()))
            }
        };
        let br = PolicyMixture::single(br);
        let mut swapped = profile;
        swapped[player] = &br;
        let (deviated, base) = match exact {
            Some(ev) => (ev.policy_value(swapped)[player], ev.policy_value(profile)[player]),
            None => {
                let s = derive_seed(unit, &[2]);
                (
                    sample_playthrough_returns(game, swapped, APPROX_EPISODES, s)[player],
                    sample_playthrough_returns(game, profile, APPROX_EPISODES, s)[player],
                )
            }
        };
        total += (deviated - base).max(0.0);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::{exploitability, KuhnPoker, DEFAULT_NODE_BUDGET};
    use crate::oracles::QLearningConfig;
    use crate::policies::TabularPolicy;

    fn uniform() -> PolicyMixture {
        PolicyMixture::single(Policy::Tabular(TabularPolicy::new()))
    }

    #[test]
    fn exact_spec_reduces_to_exploitability() {
        let g: Arc<dyn Game> = Arc::new(KuhnPoker);
        let u = uniform();
        let a = approximate_exploitability(g.clone(), [&u, &u], &OracleSpec::Exact, 0, DEFAULT_NODE_BUDGET).unwrap();
        let e = exploitability(g, [&u, &u], DEFAULT_NODE_BUDGET).unwrap();
        assert!((a - e).abs() < 1e-9, "{a} vs {e}");
    }

    #[test]
    fn zero_episode_oracle_is_near_zero() {
        let g: Arc<dyn Game> = Arc::new(KuhnPoker);
        let u = uniform();
        let spec = OracleSpec::QLearning(QLearningConfig {
            episodes: 0,
            lr: 0.1,
            epsilon: 0.1,
            gamma_discount: 1.0,
        });
        let a = approximate_exploitability(g, [&u, &u], &spec, 0, DEFAULT_NODE_BUDGET).unwrap();
        assert!(a.abs() < 1e-12, "{a}");
    }
}
