//! Two-player zero-sum games in extensive form, plus the continuous
//! non-transitive mixture game.
//!
//! Every extensive-form game is driven through a value-like [`State`] that
//! records the full history of `(actor, action)` pairs. Games derive all
//! per-state queries (turn, legal actions, chance outcomes, information-set
//! keys, feature encodings, terminal utilities) from that history.

mod eval;
mod goofspiel;
mod kuhn;
mod leduc;
mod liars_dice;
mod matrix;
pub mod ntmg;
mod tree;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};

pub use eval::{
    as_refs, best_response, expected_value, exploitability, sample_playthrough_returns,
    ExactEvaluator, InfosetTable, TableMixture, DEFAULT_NODE_BUDGET,
};
pub use goofspiel::Goofspiel;
pub use kuhn::KuhnPoker;
pub use leduc::LeducPoker;
pub use liars_dice::LiarsDice;
pub use matrix::MatrixGame;
pub use ntmg::{ntmg_payoff, ntmg_weights, NtmgConfig};
pub use tree::{GameTree, InfosetInfo, NodeKind};

/// Index of an action within a game's distinct action space.
pub type Action = usize;

pub const NUM_PLAYERS: usize = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Actor {
    Player(usize),
    Chance,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Turn {
    Player(usize),
    Chance,
    Terminal,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct State {
    history: Vec<(Actor, Action)>,
}

impl State {
    pub fn history(&self) -> &[(Actor, Action)] {
        &self.history
    }

    pub fn child(&self, actor: Actor, action: Action) -> State {
        let mut history = Vec::with_capacity(self.history.len() + 1);
        history.extend_from_slice(&self.history);
        history.push((actor, action));
        State { history }
    }

    /// Actions taken by the players, skipping chance outcomes.
    pub fn player_actions(&self) -> impl Iterator<Item = (usize, Action)> + '_ {
        self.history.iter().filter_map(|&(actor, a)| match actor {
            Actor::Player(p) => Some((p, a)),
            Actor::Chance => None,
        })
    }

    pub fn chance_outcomes(&self) -> impl Iterator<Item = Action> + '_ {
        self.history.iter().filter_map(|&(actor, a)| match actor {
            Actor::Chance => Some(a),
            Actor::Player(_) => None,
        })
    }

    pub fn len(&self) -> usize {
        self.history.len()
    }

    pub fn is_empty(&self) -> bool {
        self.history.is_empty()
    }
}

/// An extensive-form two-player zero-sum game.
pub trait Game: Send + Sync + fmt::Debug {
    fn name(&self) -> &str;

    /// Upper bound on the number of player decisions in any playthrough.
    fn max_game_length(&self) -> usize;

    /// Size of the action id space; feature-encoded policies output one score
    /// per distinct action.
    fn num_distinct_actions(&self) -> usize;

    fn perfect_recall(&self) -> bool {
        true
    }

    fn initial_state(&self) -> State {
        State::default()
    }

    fn turn(&self, state: &State) -> Turn;

    /// Legal actions for the player to move, in increasing id order.
    fn legal_actions(&self, state: &State) -> Vec<Action>;

    /// Outcome distribution at a chance state.
    fn chance_outcomes(&self, state: &State) -> Vec<(Action, f64)>;

    /// Terminal utilities; only meaningful when `turn` is `Terminal`.
    fn returns(&self, state: &State) -> [f64; 2];

    fn infoset_key(&self, state: &State, player: usize) -> String;

    /// Length of the vectors produced by [`Game::encode`].
    fn feature_dim(&self) -> usize;

    /// Fixed-length encoding of `player`'s information at `state`.
    fn encode(&self, state: &State, player: usize) -> Vec<f64>;

    fn apply(&self, state: &State, action: Action) -> State {
        match self.turn(state) {
            Turn::Player(p) => state.child(Actor::Player(p), action),
            Turn::Chance => state.child(Actor::Chance, action),
            Turn::Terminal => panic!("apply on terminal state"),
        }
    }
}

/// Declarative game reference as it appears in run configurations.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameSpec {
    pub name: String,
    #[serde(default)]
    pub params: Map<String, Value>,
}

impl GameSpec {
    pub fn new(name: &str) -> Self {
        GameSpec {
            name: name.to_string(),
            params: Map::new(),
        }
    }

    pub fn with_param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    pub fn is_ntmg(&self) -> bool {
        self.name == "ntmg"
    }

    pub fn build(&self) -> Result<Arc<dyn Game>> {
        make_game(&self.name, &self.params)
    }
}

pub(crate) fn param_usize(params: &Map<String, Value>, key: &str, default: usize) -> Result<usize> {
    match params.get(key) {
        None => Ok(default),
        Some(v) => v
            .as_u64()
            .map(|x| x as usize)
            .ok_or_else(|| Error::param(key, format!("expected a non-negative integer, got {v}"))),
    }
}

fn check_known(params: &Map<String, Value>, known: &[&str]) -> Result<()> {
    for key in params.keys() {
        if !known.contains(&key.as_str()) {
            return Err(Error::param(key, "unknown parameter for this game"));
        }
    }
    Ok(())
}

/// Builds a game by name.
///
/// Known names: `kuhn_poker`, `leduc_poker`, `liars_dice` (`faces`),
/// `liars_dice_ir` (`faces`, `recall`), `goofspiel` (`num_cards`) and
/// `matrix_game` (`rows`).
pub fn make_game(name: &str, params: &Map<String, Value>) -> Result<Arc<dyn Game>> {
    match name {
        "kuhn_poker" => {
            check_known(params, &[])?;
            Ok(Arc::new(KuhnPoker))
        }
        "leduc_poker" => {
            check_known(params, &[])?;
            Ok(Arc::new(LeducPoker))
        }
        "liars_dice" => {
            check_known(params, &["faces"])?;
            let faces = param_usize(params, "faces", 6)?;
            Ok(Arc::new(LiarsDice::new(faces, None)?))
        }
        "liars_dice_ir" => {
            check_known(params, &["faces", "recall"])?;
            let faces = param_usize(params, "faces", 6)?;
            let recall = param_usize(params, "recall", 2)?;
            Ok(Arc::new(LiarsDice::new(faces, Some(recall))?))
        }
        "goofspiel" => {
            check_known(params, &["num_cards"])?;
            let n = param_usize(params, "num_cards", 5)?;
            Ok(Arc::new(Goofspiel::new(n)?))
        }
        "matrix_game" => {
            check_known(params, &["rows"])?;
            let rows = params
                .get("rows")
                .ok_or_else(|| Error::param("rows", "matrix_game requires `rows`"))?;
            let rows: Vec<Vec<f64>> = serde_json::from_value(rows.clone())
                .map_err(|e| Error::param("rows", e.to_string()))?;
            Ok(Arc::new(MatrixGame::new(rows)?))
        }
        other => Err(Error::UnknownGame(other.to_string())),
    }
}

pub(crate) fn one_hot_into(out: &mut Vec<f64>, size: usize, index: Option<usize>) {
    let start = out.len();
    out.resize(start + size, 0.0);
    if let Some(i) = index {
        out[start + i] = 1.0;
    }
}
