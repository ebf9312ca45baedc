use super::{one_hot_into, Action, Game, State, Turn};
use crate::error::{Error, Result};

/// Liar's Dice with one die per player.
///
/// Bid `(quantity, face)` for quantity in {1, 2} has action id
/// `(quantity - 1) * faces + (face - 1)`; bids must strictly increase in that
/// order. Action `2 * faces` calls "liar" on the previous bid and ends the
/// game with utility ±1.
///
/// With `recall = Some(m)` the game is the imperfect-recall variant: a
/// player's information set holds only their own die and the last `m` public
/// actions.
#[derive(Debug, Clone)]
pub struct LiarsDice {
    faces: usize,
    recall: Option<usize>,
    name: String,
}

impl LiarsDice {
    pub fn new(faces: usize, recall: Option<usize>) -> Result<Self> {
        if faces < 2 {
            return Err(Error::param("faces", "need at least 2 faces"));
        }
        if recall == Some(0) {
            return Err(Error::param("recall", "recall window must be at least 1"));
        }
        let name = match recall {
            None => "liars_dice".to_string(),
            Some(_) => "liars_dice_ir".to_string(),
        };
        Ok(LiarsDice {
            faces,
            recall,
            name,
        })
    }

    pub fn faces(&self) -> usize {
        self.faces
    }

    pub fn recall(&self) -> Option<usize> {
        self.recall
    }

    fn liar(&self) -> Action {
        2 * self.faces
    }

    fn num_bids(&self) -> usize {
        2 * self.faces
    }

    fn bid(&self, a: Action) -> (usize, usize) {
        (a / self.faces + 1, a % self.faces)
    }

    fn split(state: &State) -> (Vec<usize>, Vec<Action>) {
        (
            state.chance_outcomes().collect(),
            state.player_actions().map(|(_, a)| a).collect(),
        )
    }
}

impl Game for LiarsDice {
    fn name(&self) -> &str {
        &self.name
    }

    fn max_game_length(&self) -> usize {
        self.num_bids() + 1
    }

    fn num_distinct_actions(&self) -> usize {
        self.num_bids() + 1
    }

    fn perfect_recall(&self) -> bool {
        self.recall.is_none()
    }

    fn turn(&self, state: &State) -> Turn {
        let (dice, actions) = Self::split(state);
        if dice.len() < 2 {
            return Turn::Chance;
        }
        if actions.last() == Some(&self.liar()) {
            return Turn::Terminal;
        }
        Turn::Player(actions.len() % 2)
    }

    fn legal_actions(&self, state: &State) -> Vec<Action> {
        let (_, actions) = Self::split(state);
        match actions.last() {
            None => (0..self.num_bids()).collect(),
            Some(&last) => ((last + 1)..self.num_bids())
                .chain(std::iter::once(self.liar()))
                .collect(),
        }
    }

    fn chance_outcomes(&self, _state: &State) -> Vec<(Action, f64)> {
        let p = 1.0 / self.faces as f64;
        (0..self.faces).map(|f| (f, p)).collect()
    }

    fn returns(&self, state: &State) -> [f64; 2] {
        let (dice, actions) = Self::split(state);
        if actions.len() < 2 || actions.last() != Some(&self.liar()) {
            return [0.0, 0.0];
        }
        let challenger = (actions.len() - 1) % 2;
        let bidder = 1 - challenger;
        let (quantity, face) = self.bid(actions[actions.len() - 2]);
        let count = dice.iter().filter(|&&d| d == face).count();
        let mut r = [0.0; 2];
        if count >= quantity {
            r[bidder] = 1.0;
            r[challenger] = -1.0;
        } else {
            r[bidder] = -1.0;
            r[challenger] = 1.0;
        }
        r
    }

    fn infoset_key(&self, state: &State, player: usize) -> String {
        let (dice, actions) = Self::split(state);
        let visible = match self.recall {
            None => &actions[..],
            Some(m) => &actions[actions.len().saturating_sub(m)..],
        };
        let mut key = match dice.get(player) {
            Some(d) => format!("d{}|", d + 1),
            None => "d?|".to_string(),
        };
        let parts: Vec<String> = visible.iter().map(|a| a.to_string()).collect();
        key.push_str(&parts.join(","));
        key
    }

    fn feature_dim(&self) -> usize {
        match self.recall {
            None => self.faces + self.num_bids(),
            Some(m) => self.faces + m * (self.num_bids() + 1),
        }
    }

    fn encode(&self, state: &State, player: usize) -> Vec<f64> {
        let (dice, actions) = Self::split(state);
        let mut out = Vec::with_capacity(self.feature_dim());
        one_hot_into(&mut out, self.faces, dice.get(player).copied());
        match self.recall {
            None => {
                let start = out.len();
                out.resize(start + self.num_bids(), 0.0);
                for &a in &actions {
                    if a < self.num_bids() {
                        out[start + a] = 1.0;
                    }
                }
            }
            Some(m) => {
                // Slot 0 holds the most recent action.
                for slot in 0..m {
                    let a = actions.len().checked_sub(slot + 1).map(|i| actions[i]);
                    one_hot_into(&mut out, self.num_bids() + 1, a);
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::Actor;

    fn state(dice: [usize; 2], bids: &[Action]) -> State {
        let mut s = State::default()
            .child(Actor::Chance, dice[0])
            .child(Actor::Chance, dice[1]);
        for (i, &a) in bids.iter().enumerate() {
            s = s.child(Actor::Player(i % 2), a);
        }
        s
    }

    #[test]
    fn challenge_resolution() {
        let g = LiarsDice::new(6, None).unwrap();
        // p0 bids two 3s (id 6 + 2 = 8), p1 calls liar; dice (3, 5) -> one 3.
        let s = state([2, 4], &[8, 12]);
        assert_eq!(g.turn(&s), Turn::Terminal);
        assert_eq!(g.returns(&s), [-1.0, 1.0]);
        // Same with dice (3, 3): the bid holds.
        let s = state([2, 2], &[8, 12]);
        assert_eq!(g.returns(&s), [1.0, -1.0]);
    }

    #[test]
    fn bids_strictly_increase() {
        let g = LiarsDice::new(2, None).unwrap();
        assert_eq!(g.legal_actions(&state([0, 1], &[])), vec![0, 1, 2, 3]);
        assert_eq!(g.legal_actions(&state([0, 1], &[1])), vec![2, 3, 4]);
        assert_eq!(g.legal_actions(&state([0, 1], &[3])), vec![4]);
    }

    #[test]
    fn imperfect_recall_truncates_to_last_m_actions() {
        let g = LiarsDice::new(6, Some(2)).unwrap();
        assert!(!g.perfect_recall());
        let a = state([0, 1], &[0, 3, 5]);
        let b = state([0, 4], &[1, 3, 5]);
        assert_eq!(g.infoset_key(&a, 1), "d2|3,5");
        assert_eq!(g.infoset_key(&b, 0), "d1|3,5");
        assert_eq!(g.infoset_key(&a, 0), g.infoset_key(&b, 0));
        assert_eq!(g.encode(&a, 0), g.encode(&b, 0));
        let full = LiarsDice::new(6, None).unwrap();
        assert_ne!(full.infoset_key(&a, 0), full.infoset_key(&b, 0));
    }
}
