use super::{one_hot_into, Action, Game, State, Turn};

const CARD_NAMES: [char; 3] = ['J', 'Q', 'K'];
const PASS: Action = 0;
const BET: Action = 1;

/// Three-card Kuhn poker. Actions: 0 = pass/check, 1 = bet/call.
#[derive(Debug, Clone, Copy, Default)]
pub struct KuhnPoker;

impl KuhnPoker {
    fn cards(state: &State) -> (Option<usize>, Option<usize>) {
        let mut it = state.chance_outcomes();
        (it.next(), it.next())
    }

    fn betting(state: &State) -> Vec<Action> {
        state.player_actions().map(|(_, a)| a).collect()
    }

    fn is_terminal_sequence(seq: &[Action]) -> bool {
        matches!(
            seq,
            [PASS, PASS] | [PASS, BET, PASS] | [PASS, BET, BET] | [BET, PASS] | [BET, BET]
        )
    }
}

impl Game for KuhnPoker {
    fn name(&self) -> &str {
        "kuhn_poker"
    }

    fn max_game_length(&self) -> usize {
        3
    }

    fn num_distinct_actions(&self) -> usize {
        2
    }

    fn turn(&self, state: &State) -> Turn {
        if state.len() < 2 {
            return Turn::Chance;
        }
        let seq = Self::betting(state);
        if Self::is_terminal_sequence(&seq) {
            Turn::Terminal
        } else {
            Turn::Player(seq.len() % 2)
        }
    }

    fn legal_actions(&self, _state: &State) -> Vec<Action> {
        vec![PASS, BET]
    }

    fn chance_outcomes(&self, state: &State) -> Vec<(Action, f64)> {
        match Self::cards(state) {
            (None, _) => (0..3).map(|c| (c, 1.0 / 3.0)).collect(),
            (Some(first), None) => (0..3).filter(|&c| c != first).map(|c| (c, 0.5)).collect(),
            _ => Vec::new(),
        }
    }

    fn returns(&self, state: &State) -> [f64; 2] {
        let (Some(c0), Some(c1)) = Self::cards(state) else {
            return [0.0, 0.0];
        };
        let showdown = if c0 > c1 { 1.0 } else { -1.0 };
        let u0 = match Self::betting(state).as_slice() {
            [PASS, PASS] => showdown,
            [PASS, BET, PASS] => -1.0,
            [BET, PASS] => 1.0,
            [PASS, BET, BET] | [BET, BET] => 2.0 * showdown,
            _ => 0.0,
        };
        [u0, -u0]
    }

    fn infoset_key(&self, state: &State, player: usize) -> String {
        let (c0, c1) = Self::cards(state);
        let own = if player == 0 { c0 } else { c1 };
        let mut key = String::new();
        key.push(own.map_or('?', |c| CARD_NAMES[c]));
        key.push('|');
        for a in Self::betting(state) {
            key.push(if a == PASS { 'p' } else { 'b' });
        }
        key
    }

    fn feature_dim(&self) -> usize {
        3 + 3 * 2
    }

    fn encode(&self, state: &State, player: usize) -> Vec<f64> {
        let (c0, c1) = Self::cards(state);
        let own = if player == 0 { c0 } else { c1 };
        let mut out = Vec::with_capacity(self.feature_dim());
        one_hot_into(&mut out, 3, own);
        let seq = Self::betting(state);
        for slot in 0..3 {
            one_hot_into(&mut out, 2, seq.get(slot).copied());
        }
        out
    }
}
