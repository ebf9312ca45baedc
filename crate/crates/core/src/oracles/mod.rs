//! Best-response oracles and the diversity intrinsic reward.

mod dqn;
mod ntmg;
mod psd;
mod q_learning;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::games::{Action, Actor, ExactEvaluator, Game, State, TableMixture, Turn};
use crate::policies::{Policy, PolicyMixture, TabularPolicy};
use crate::rng::{sample_index, Rng};

pub use dqn::{dqn_oracle, DqnConfig, DqnOutcome, LrSchedule, Optimizer, PsdShaping};
pub use ntmg::ntmg_oracle;
pub use psd::{hull_divergence, psd_intrinsic_reward};
pub use q_learning::{q_learning_oracle, QLearningConfig};

/// Which oracle trains new policies.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum OracleSpec {
    Exact,
    QLearning(QLearningConfig),
    Dqn(DqnConfig),
    /// Gradient ascent for the mixture game.
    Gradient { steps: usize, lr: f64 },
}

impl OracleSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            OracleSpec::Exact => Ok(()),
            OracleSpec::QLearning(c) => c.validate(),
            OracleSpec::Dqn(c) => c.validate(),
            OracleSpec::Gradient { steps, lr } => {
                if *steps == 0 {
                    return Err(Error::param("steps", "must be at least 1"));
                }
                if !(*lr > 0.0) {
                    return Err(Error::param("lr", "must be positive"));
                }
                Ok(())
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            OracleSpec::Exact => "exact",
            OracleSpec::QLearning(_) => "q_learning",
            OracleSpec::Dqn(_) => "dqn",
            OracleSpec::Gradient { .. } => "gradient",
        }
    }
}

/// Exact best response; ignores any initialization.
pub fn exact_oracle(evaluator: &ExactEvaluator, opponent: &TableMixture, player: usize) -> Result<TabularPolicy> {
    Ok(evaluator.best_response(opponent, player)?.0)
}

/// One decision of the learning player.
#[derive(Clone, Debug)]
pub struct Step {
    pub key: String,
    pub state: State,
    pub legal: Vec<Action>,
    /// Index into `legal`.
    pub action: usize,
    pub reward: f64,
    pub next_key: Option<String>,
    pub terminal: bool,
}

/// The learning player's view of one episode.
#[derive(Clone, Debug, Default)]
pub struct Trajectory {
    pub steps: Vec<Step>,
    /// The learner's terminal utility.
    pub ret: f64,
}

/// Plays one episode. `learner_act` picks an index into the legal actions
/// whenever `player` is to move; the opponent acts with its executed
/// distribution.
pub fn play_episode<F>(
    game: &dyn Game,
    player: usize,
    opponent: &Policy,
    rng: &mut Rng,
    mut learner_act: F,
) -> Trajectory
where
    F: FnMut(&State, &[Action], &mut Rng) -> usize,
{
    let mut traj = Trajectory::default();
    let mut state = game.initial_state();
    loop {
        match game.turn(&state) {
            Turn::Terminal => {
                let u = game.returns(&state)[player];
                if let Some(last) = traj.steps.last_mut() {
                    last.reward = u;
                    last.terminal = true;
                }
                traj.ret = u;
                return traj;
            }
            Turn::Chance => {
                let outcomes = game.chance_outcomes(&state);
                let probs: Vec<f64> = outcomes.iter().map(|o| o.1).collect();
                state = state.child(Actor::Chance, outcomes[sample_index(rng, &probs)].0);
            }
            Turn::Player(p) if p == player => {
                let legal = game.legal_actions(&state);
                let key = game.infoset_key(&state, p);
                if let Some(last) = traj.steps.last_mut() {
                    last.next_key = Some(key.clone());
                }
                let k = learner_act(&state, &legal, rng);
                debug_assert!(k < legal.len(), "learner chose an illegal action");
                let a = legal[k];
                traj.steps.push(Step {
                    key,
                    state: state.clone(),
                    legal,
                    action: k,
                    reward: 0.0,
                    next_key: None,
                    terminal: false,
                });
                state = state.child(Actor::Player(p), a);
            }
            Turn::Player(p) => {
                let legal = game.legal_actions(&state);
                let probs = opponent.action_probs(game, &state, p);
                state = state.child(Actor::Player(p), legal[sample_index(rng, &probs)]);
            }
        }
    }
}

pub(crate) fn sample_member<'a>(mixture: &'a PolicyMixture, rng: &mut Rng) -> &'a Policy {
    mixture.members()[sample_index(rng, mixture.weights())].as_ref()
}
