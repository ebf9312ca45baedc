use super::{one_hot_into, Action, Game, State, Turn};

const FOLD: Action = 0;
const CALL: Action = 1;
const RAISE: Action = 2;
const NUM_CARDS: usize = 6;
const MAX_RAISES: usize = 2;
const MAX_ROUND_ACTIONS: usize = 4;
const RANK_NAMES: [char; 3] = ['J', 'Q', 'K'];

/// Leduc hold'em: six cards (two suits of J, Q, K), one private card each,
/// one public card, two betting rounds with raise sizes 2 then 4, at most two
/// raises per round and an ante of 1.
///
/// Actions: 0 = fold, 1 = check/call, 2 = bet/raise. Card ids are 0..6 with
/// rank `id / 2`.
#[derive(Debug, Clone, Copy, Default)]
pub struct LeducPoker;

#[derive(Debug, Clone, Default)]
struct Betting {
    round: usize,
    contrib: [f64; 2],
    raises: usize,
    rounds: [Vec<Action>; 2],
    folded: Option<usize>,
    to_act: usize,
    round_done: bool,
}

fn rank(card: usize) -> usize {
    card / 2
}

impl LeducPoker {
    fn replay(state: &State) -> (Vec<usize>, Betting) {
        let mut cards = Vec::new();
        let mut b = Betting {
            contrib: [1.0, 1.0],
            ..Default::default()
        };
        for &(actor, a) in state.history() {
            match actor {
                super::Actor::Chance => {
                    cards.push(a);
                    if cards.len() == 3 {
                        b.round = 1;
                        b.raises = 0;
                        b.to_act = 0;
                        b.round_done = false;
                    }
                }
                super::Actor::Player(p) => {
                    let bet = if b.round == 0 { 2.0 } else { 4.0 };
                    let high = b.contrib[0].max(b.contrib[1]);
                    match a {
                        FOLD => b.folded = Some(p),
                        CALL => b.contrib[p] = high,
                        _ => {
                            b.contrib[p] = high + bet;
                            b.raises += 1;
                        }
                    }
                    b.rounds[b.round].push(a);
                    b.to_act = 1 - p;
                    if a == CALL && b.rounds[b.round].len() >= 2 {
                        b.round_done = true;
                    }
                }
            }
        }
        (cards, b)
    }
}

impl Game for LeducPoker {
    fn name(&self) -> &str {
        "leduc_poker"
    }

    fn max_game_length(&self) -> usize {
        2 * MAX_ROUND_ACTIONS
    }

    fn num_distinct_actions(&self) -> usize {
        3
    }

    fn turn(&self, state: &State) -> Turn {
        let (cards, b) = Self::replay(state);
        if cards.len() < 2 {
            return Turn::Chance;
        }
        if b.folded.is_some() {
            return Turn::Terminal;
        }
        if b.round_done {
            return if b.round == 0 { Turn::Chance } else { Turn::Terminal };
        }
        Turn::Player(b.to_act)
    }

    fn legal_actions(&self, state: &State) -> Vec<Action> {
        let (_, b) = Self::replay(state);
        let facing = b.contrib[b.to_act] < b.contrib[1 - b.to_act];
        let mut legal = Vec::with_capacity(3);
        if facing {
            legal.push(FOLD);
        }
        legal.push(CALL);
        if b.raises < MAX_RAISES {
            legal.push(RAISE);
        }
        legal
    }

    fn chance_outcomes(&self, state: &State) -> Vec<(Action, f64)> {
        let dealt: Vec<usize> = state.chance_outcomes().collect();
        let remaining: Vec<usize> = (0..NUM_CARDS).filter(|c| !dealt.contains(c)).collect();
        let p = 1.0 / remaining.len() as f64;
        remaining.into_iter().map(|c| (c, p)).collect()
    }

    fn returns(&self, state: &State) -> [f64; 2] {
        let (cards, b) = Self::replay(state);
        if let Some(f) = b.folded {
            let mut r = [0.0; 2];
            r[f] = -b.contrib[f];
            r[1 - f] = b.contrib[f];
            return r;
        }
        if cards.len() < 3 {
            return [0.0, 0.0];
        }
        let public = rank(cards[2]);
        let strength = |c: usize| {
            let r = rank(c);
            if r == public {
                10 + r
            } else {
                r
            }
        };
        let (s0, s1) = (strength(cards[0]), strength(cards[1]));
        let pot = b.contrib[0];
        match s0.cmp(&s1) {
            std::cmp::Ordering::Greater => [pot, -pot],
            std::cmp::Ordering::Less => [-pot, pot],
            std::cmp::Ordering::Equal => [0.0, 0.0],
        }
    }

    fn infoset_key(&self, state: &State, player: usize) -> String {
        let (cards, b) = Self::replay(state);
        let mut key = String::new();
        key.push(cards.get(player).map_or('?', |&c| RANK_NAMES[rank(c)]));
        key.push(cards.get(2).map_or('-', |&c| RANK_NAMES[rank(c)]));
        for round in &b.rounds {
            key.push('|');
            for &a in round {
                key.push(['f', 'c', 'r'][a]);
            }
        }
        key
    }

    fn feature_dim(&self) -> usize {
        3 + 3 + 2 * MAX_ROUND_ACTIONS * 3
    }

    fn encode(&self, state: &State, player: usize) -> Vec<f64> {
        let (cards, b) = Self::replay(state);
        let mut out = Vec::with_capacity(self.feature_dim());
        one_hot_into(&mut out, 3, cards.get(player).map(|&c| rank(c)));
        one_hot_into(&mut out, 3, cards.get(2).map(|&c| rank(c)));
        for round in &b.rounds {
            for slot in 0..MAX_ROUND_ACTIONS {
                one_hot_into(&mut out, 3, round.get(slot).copied());
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::Actor;

    fn play(actions: &[(bool, usize)]) -> State {
        let mut s = State::default();
        for &(chance, a) in actions {
            let actor = if chance {
                Actor::Chance
            } else {
                match LeducPoker.turn(&s) {
                    Turn::Player(p) => Actor::Player(p),
                    t => panic!("unexpected turn {t:?}"),
                }
            };
            s = s.child(actor, a);
        }
        s
    }

    #[test]
    fn fold_loses_contribution() {
        // K vs J, p0 raises, p1 folds.
        let s = play(&[(true, 4), (true, 0), (false, RAISE), (false, FOLD)]);
        assert_eq!(LeducPoker.turn(&s), Turn::Terminal);
        assert_eq!(LeducPoker.returns(&s), [1.0, -1.0]);
    }

    #[test]
    fn pair_beats_high_card() {
        // p0 J, p1 K, public J; check-check, then bet 4 call.
        let s = play(&[
            (true, 0),
            (true, 4),
            (false, CALL),
            (false, CALL),
            (true, 1),
            (false, RAISE),
            (false, CALL),
        ]);
        assert_eq!(LeducPoker.turn(&s), Turn::Terminal);
        assert_eq!(LeducPoker.returns(&s), [5.0, -5.0]);
        assert_eq!(LeducPoker.infoset_key(&s, 1), "KJ|cc|rc");
    }

    #[test]
    fn raise_cap_and_round_transition() {
        let s = play(&[(true, 0), (true, 2), (false, RAISE), (false, RAISE)]);
        assert_eq!(LeducPoker.legal_actions(&s), vec![FOLD, CALL]);
        let s = play(&[(true, 0), (true, 2), (false, RAISE), (false, RAISE), (false, CALL)]);
        assert_eq!(LeducPoker.turn(&s), Turn::Chance);
        assert_eq!(LeducPoker.chance_outcomes(&s).len(), 4);
    }
}
