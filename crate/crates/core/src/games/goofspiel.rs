use super::{one_hot_into, Action, Game, State, Turn};
use crate::error::{Error, Result};

/// Goofspiel with `n` cards per hand and prizes revealed in descending order
/// (n, n-1, ..., 1).
///
/// Each round is sequentialized: player 0 bids, then player 1 bids without
/// seeing player 0's card. Both bids are revealed once the round completes.
/// The higher card takes the prize, ties split it, and the utility is the
/// sign of the final point difference. Action `k` plays the card of value
/// `k + 1`.
#[derive(Debug, Clone)]
pub struct Goofspiel {
    n: usize,
}

impl Goofspiel {
    pub fn new(num_cards: usize) -> Result<Self> {
        if num_cards < 2 {
            return Err(Error::param("num_cards", "need at least 2 cards"));
        }
        Ok(Goofspiel { n: num_cards })
    }

    pub fn num_cards(&self) -> usize {
        self.n
    }

    fn bids(state: &State) -> Vec<Action> {
        state.player_actions().map(|(_, a)| a).collect()
    }

    fn prize(&self, round: usize) -> f64 {
        (self.n - round) as f64
    }
}

impl Game for Goofspiel {
    fn name(&self) -> &str {
        "goofspiel"
    }

    fn max_game_length(&self) -> usize {
        2 * self.n
    }

    fn num_distinct_actions(&self) -> usize {
        self.n
    }

    fn turn(&self, state: &State) -> Turn {
        let len = state.len();
        if len >= 2 * self.n {
            Turn::Terminal
        } else {
            Turn::Player(len % 2)
        }
    }

    fn legal_actions(&self, state: &State) -> Vec<Action> {
        let bids = Self::bids(state);
        let player = bids.len() % 2;
        (0..self.n)
            .filter(|c| !bids.iter().skip(player).step_by(2).any(|b| b == c))
            .collect()
    }

    fn chance_outcomes(&self, _state: &State) -> Vec<(Action, f64)> {
        Vec::new()
    }

    fn returns(&self, state: &State) -> [f64; 2] {
        let bids = Self::bids(state);
        let mut points = [0.0f64; 2];
        for (round, pair) in bids.chunks_exact(2).enumerate() {
            let prize = self.prize(round);
            match pair[0].cmp(&pair[1]) {
                std::cmp::Ordering::Greater => points[0] += prize,
                std::cmp::Ordering::Less => points[1] += prize,
                std::cmp::Ordering::Equal => {
                    points[0] += prize / 2.0;
                    points[1] += prize / 2.0;
                }
            }
        }
        let diff = points[0] - points[1];
        let u0 = if diff > 0.0 {
            1.0
        } else if diff < 0.0 {
            -1.0
        } else {
            0.0
        };
        [u0, -u0]
    }

    fn infoset_key(&self, state: &State, player: usize) -> String {
        let bids = Self::bids(state);
        let mut key = String::new();
        for pair in bids.chunks_exact(2) {
            key.push_str(&format!("{}{},", pair[player] + 1, pair[1 - player] + 1));
        }
        if player == 0 && bids.len() % 2 == 1 {
            key.push_str(&format!("{}?", bids[bids.len() - 1] + 1));
        }
        key
    }

    fn feature_dim(&self) -> usize {
        2 * self.n * self.n
    }

    fn encode(&self, state: &State, player: usize) -> Vec<f64> {
        let bids = Self::bids(state);
        let mut out = Vec::with_capacity(self.feature_dim());
        let complete: Vec<&[Action]> = bids.chunks_exact(2).collect();
        for round in 0..self.n {
            let pair = complete.get(round);
            one_hot_into(&mut out, self.n, pair.map(|p| p[player]));
            one_hot_into(&mut out, self.n, pair.map(|p| p[1 - player]));
        }
        out
    }
}
