//! Independent reference implementations used as test oracles.
#![allow(dead_code)]

use std::sync::Arc;

use fusion_psro::policies::{Policy, PolicyMixture, TabularPolicy};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_int_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Vec<Vec<f64>> {
    (0..rows)
        .map(|_| (0..cols).map(|_| rng.random_range(-5..=5) as f64).collect())
        .collect()
}

pub fn rps() -> Vec<Vec<f64>> {
    vec![vec![0.0, -1.0, 1.0], vec![1.0, 0.0, -1.0], vec![-1.0, 1.0, 0.0]]
}

pub fn tabular(t: TabularPolicy) -> Arc<Policy> {
    Arc::new(Policy::Tabular(t))
}

pub fn uniform_mixture() -> PolicyMixture {
    PolicyMixture::single(tabular(TabularPolicy::new()))
}

/// Gaussian elimination with partial pivoting; `None` when singular.
fn solve_linear(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in 0..n {
            if r != col {
                let f = a[r][col] / a[col][col];
                for c in col..n {
                    a[r][c] -= f * a[col][c];
                }
                b[r] -= f * b[col];
            }
        }
    }
    Some((0..n).map(|i| b[i] / a[i][i]).collect())
}

fn subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (1u32..(1 << n)).map(move |mask| (0..n).filter(|i| mask & (1 << i) != 0).collect())
}

/// Game value by support enumeration: for every pair of equal-size supports,
/// solve the indifference system and keep profiles that are equilibria.
/// Entries are shifted to make the value positive, so that some square
/// nonsingular kernel carries an optimal pair even in degenerate games.
pub fn support_enumeration_value(m: &[Vec<f64>]) -> f64 {
    let low = m.iter().flatten().copied().fold(f64::INFINITY, f64::min);
    let shift = 1.0 - low;
    let shifted: Vec<Vec<f64>> = m.iter().map(|r| r.iter().map(|a| a + shift).collect()).collect();
    enumerate_supports(&shifted) - shift
}

fn enumerate_supports(m: &[Vec<f64>]) -> f64 {
    let rows = m.len();
    let cols = m[0].len();
    let tol = 1e-9;
    for rs in subsets(rows) {
        for cs in subsets(cols).filter(|c| c.len() == rs.len()) {
            let k = rs.len();
            // Unknowns: column weights on cs plus the value v.
            let mut a = Vec::new();
            let mut b = Vec::new();
            for &r in &rs {
                let mut row: Vec<f64> = cs.iter().map(|&c| m[r][c]).collect();
                row.push(-1.0);
                a.push(row);
                b.push(0.0);
            }
            let mut sum = vec![1.0; k];
            sum.push(0.0);
            a.push(sum);
            b.push(1.0);
            // Square up by also solving the row side.
            let mut ar = Vec::new();
            let mut br = Vec::new();
            for &c in &cs {
                let mut row: Vec<f64> = rs.iter().map(|&r| m[r][c]).collect();
                row.push(-1.0);
                ar.push(row);
                br.push(0.0);
            }
            let mut sum = vec![1.0; k];
            sum.push(0.0);
            ar.push(sum);
            br.push(1.0);
            let (Some(y), Some(x)) = (solve_linear(a, b), solve_linear(ar, br)) else {
                continue;
            };
            if y[..k].iter().chain(&x[..k]).any(|&p| p < -tol) {
                continue;
            }
            let mut full_x = vec![0.0; rows];
            let mut full_y = vec![0.0; cols];
            for (i, &r) in rs.iter().enumerate() {
                full_x[r] = x[i];
            }
            for (i, &c) in cs.iter().enumerate() {
                full_y[c] = y[i];
            }
            let v = y[k];
            let row_best = (0..rows)
                .map(|r| (0..cols).map(|c| m[r][c] * full_y[c]).sum::<f64>())
                .fold(f64::NEG_INFINITY, f64::max);
            let col_worst = (0..cols)
                .map(|c| (0..rows).map(|r| m[r][c] * full_x[r]).sum::<f64>())
                .fold(f64::INFINITY, f64::min);
            if row_best <= v + tol && col_worst >= v - tol {
                return v;
            }
        }
    }
    panic!("no equilibrium found by support enumeration");
}

pub mod kuhn {
    //! Kuhn poker written out from the rules: cards J<Q<K, ante 1, one
    //! bet of 1, player 0 acts first.
    use fusion_psro::policies::TabularPolicy;

    pub const CARDS: [char; 3] = ['J', 'Q', 'K'];
    /// Histories at which someone acts, with the actor.
    pub const DECISIONS: [(&str, usize); 4] = [("", 0), ("p", 1), ("b", 1), ("pb", 0)];

    fn payoff(c0: usize, c1: usize, h: &str) -> Option<f64> {
        let show = if c0 > c1 { 1.0 } else { -1.0 };
        match h {
            "pp" => Some(show),
            "bp" => Some(1.0),
            "pbp" => Some(-1.0),
            "bb" | "pbb" => Some(2.0 * show),
            _ => None,
        }
    }

    /// Probability of betting at an infoset key.
    fn bet(p: &TabularPolicy, key: &str) -> f64 {
        p.probs(key, 2)[1]
    }

    /// Player 0's expected utility; both policies are looked up by the
    /// game's infoset keys `"<card>|<history>"`.
    pub fn value(p0: &TabularPolicy, p1: &TabularPolicy) -> f64 {
        let mut total = 0.0;
        for c0 in 0..3 {
            for c1 in (0..3).filter(|&c| c != c0) {
                total += walk(p0, p1, c0, c1, String::new()) / 6.0;
            }
        }
        total
    }

    fn walk(p0: &TabularPolicy, p1: &TabularPolicy, c0: usize, c1: usize, h: String) -> f64 {
        if let Some(u) = payoff(c0, c1, &h) {
            return u;
        }
        let actor = h.len() % 2;
        let (pol, card) = if actor == 0 { (p0, c0) } else { (p1, c1) };
        let b = bet(pol, &format!("{}|{}", CARDS[card], h));
        let mut v = 0.0;
        if b < 1.0 {
            v += (1.0 - b) * walk(p0, p1, c0, c1, format!("{h}p"));
        }
        if b > 0.0 {
            v += b * walk(p0, p1, c0, c1, format!("{h}b"));
        }
        v
    }

    /// Infoset keys of one player.
    pub fn keys(player: usize) -> Vec<String> {
        let mut out = Vec::new();
        for c in CARDS {
            for (h, actor) in DECISIONS {
                if actor == player {
                    out.push(format!("{c}|{h}"));
                }
            }
        }
        out
    }

    /// Every pure strategy of `player` (2^6 of them).
    pub fn pure_strategies(player: usize) -> Vec<TabularPolicy> {
        let keys = keys(player);
        (0u32..(1 << keys.len()))
            .map(|mask| {
                let mut t = TabularPolicy::new();
                for (i, k) in keys.iter().enumerate() {
                    t.set_pure(k.clone(), 2, ((mask >> i) & 1) as usize);
                }
                t
            })
            .collect()
    }

    /// Best-response value of `responder` against a weighted set of
    /// opponent policies by enumerating pure strategies.
    pub fn best_response_value(responder: usize, opponent: &[(TabularPolicy, f64)]) -> f64 {
        pure_strategies(responder)
            .iter()
            .map(|s| {
                opponent
                    .iter()
                    .map(|(o, w)| {
                        let v0 = if responder == 0 { value(s, o) } else { value(o, s) };
                        w * if responder == 0 { v0 } else { -v0 }
                    })
                    .sum::<f64>()
            })
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn exploitability(p0: &TabularPolicy, p1: &TabularPolicy) -> f64 {
        let v = value(p0, p1);
        let g0 = best_response_value(0, &[(p1.clone(), 1.0)]) - v;
        let g1 = best_response_value(1, &[(p0.clone(), 1.0)]) + v;
        g0 + g1
    }

    /// A behavior policy from per-key bet probabilities.
    pub fn behavior(player: usize, bet_probs: &[f64]) -> TabularPolicy {
        let mut t = TabularPolicy::new();
        for (k, &b) in keys(player).iter().zip(bet_probs) {
            t.insert(k.clone(), vec![1.0 - b, b]).expect("valid probabilities");
        }
        t
    }
}

/// Pure-strategy value of a matrix profile by direct summation.
pub fn matrix_value(m: &[Vec<f64>], x: &[f64], y: &[f64]) -> f64 {
    let mut v = 0.0;
    for (i, row) in m.iter().enumerate() {
        for (j, a) in row.iter().enumerate() {
            v += x[i] * y[j] * a;
        }
    }
    v
}

/// Largest gain any player gets from a pure deviation.
pub fn max_pure_deviation(m: &[Vec<f64>], x: &[f64], y: &[f64]) -> f64 {
    let v = matrix_value(m, x, y);
    let row_best = (0..m.len())
        .map(|r| m[r].iter().zip(y).map(|(a, q)| a * q).sum::<f64>())
        .fold(f64::NEG_INFINITY, f64::max);
    let col_best = (0..m[0].len())
        .map(|c| -(0..m.len()).map(|r| m[r][c] * x[r]).sum::<f64>())
        .fold(f64::NEG_INFINITY, f64::max);
    (row_best - v).max(col_best + v)
}

/// Relative path and bytes of every file under `dir`, sorted, except
/// wall-clock timings.
pub fn tree_bytes(dir: &std::path::Path) -> Vec<(String, Vec<u8>)> {
    fn walk(root: &std::path::Path, dir: &std::path::Path, out: &mut Vec<(String, Vec<u8>)>) {
        for e in std::fs::read_dir(dir).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                walk(root, &p, out);
            } else if p.file_name().is_some_and(|n| n != "timings.csv") {
                let rel = p.strip_prefix(root).unwrap().display().to_string();
                out.push((rel, std::fs::read(&p).unwrap()));
            }
        }
    }
    let mut out = Vec::new();
    walk(dir, dir, &mut out);
    out.sort();
    out
}

pub fn random_simplex(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| rng.random_range(0.01..1.0)).collect();
    let s: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / s).collect()
}

/// Sum of both players' best pure-deviation gains.
pub fn matrix_nash_conv(m: &[Vec<f64>], x: &[f64], y: &[f64]) -> f64 {
    let v = matrix_value(m, x, y);
    let row_best = (0..m.len())
        .map(|r| m[r].iter().zip(y).map(|(a, q)| a * q).sum::<f64>())
        .fold(f64::NEG_INFINITY, f64::max);
    let col_best = (0..m[0].len())
        .map(|c| -(0..m.len()).map(|r| m[r][c] * x[r]).sum::<f64>())
        .fold(f64::NEG_INFINITY, f64::max);
    (row_best - v) + (col_best + v)
}

/// Every decision state of `player`.
pub fn decision_states(game: &dyn fusion_psro::games::Game, player: usize) -> Vec<fusion_psro::games::State> {
    use fusion_psro::games::{State, Turn};
    fn walk(game: &dyn fusion_psro::games::Game, s: State, player: usize, out: &mut Vec<State>) {
        match game.turn(&s) {
            Turn::Terminal => {}
            Turn::Chance => {
                for (a, _) in game.chance_outcomes(&s) {
                    walk(game, game.apply(&s, a), player, out);
                }
            }
            Turn::Player(p) => {
                if p == player {
                    out.push(s.clone());
                }
                for a in game.legal_actions(&s) {
                    walk(game, game.apply(&s, a), player, out);
                }
            }
        }
    }
    let mut out = Vec::new();
    walk(game, game.initial_state(), player, &mut out);
    out
}
