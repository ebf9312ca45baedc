use super::{Action, Game, State, Turn};
use crate::error::{Error, Result};

/// A normal-form zero-sum game played as two sequential moves where the
/// column player does not observe the row choice. `rows[r][c]` is the row
/// player's utility.
#[derive(Debug, Clone)]
pub struct MatrixGame {
    rows: Vec<Vec<f64>>,
}

impl MatrixGame {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let width = rows.first().map_or(0, |r| r.len());
        if rows.is_empty() || width == 0 {
            return Err(Error::param("rows", "matrix must have at least one row and column"));
        }
        if rows.iter().any(|r| r.len() != width) {
            return Err(Error::param("rows", "rows have different lengths"));
        }
        if rows.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::param("rows", "entries must be finite"));
        }
        Ok(MatrixGame { rows })
    }

    pub fn payoffs(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        self.rows[0].len()
    }
}

impl Game for MatrixGame {
    fn name(&self) -> &str {
        "matrix_game"
    }

    fn max_game_length(&self) -> usize {
        2
    }

    fn num_distinct_actions(&self) -> usize {
        self.num_rows().max(self.num_cols())
    }

    fn turn(&self, state: &State) -> Turn {
        match state.len() {
            0 => Turn::Player(0),
            1 => Turn::Player(1),
            _ => Turn::Terminal,
        }
    }

    fn legal_actions(&self, state: &State) -> Vec<Action> {
        match state.len() {
            0 => (0..self.num_rows()).collect(),
            _ => (0..self.num_cols()).collect(),
        }
    }

    fn chance_outcomes(&self, _state: &State) -> Vec<(Action, f64)> {
        Vec::new()
    }

    fn returns(&self, state: &State) -> [f64; 2] {
        let h = state.history();
        if h.len() < 2 {
            return [0.0, 0.0];
        }
        let u = self.rows[h[0].1][h[1].1];
        [u, -u]
    }

    fn infoset_key(&self, state: &State, player: usize) -> String {
        match state.history().get(player) {
            Some(&(_, a)) => format!("p{player}:{a}"),
            None => format!("p{player}"),
        }
    }

    fn feature_dim(&self) -> usize {
        1
    }

    fn encode(&self, _state: &State, _player: usize) -> Vec<f64> {
        vec![1.0]
    }
}
