mod common;

use std::sync::Arc;

use common::{rps, tabular, uniform_mixture};
use fusion_psro::games::{best_response, exploitability, expected_value, Game, GameSpec, MatrixGame, DEFAULT_NODE_BUDGET};
use fusion_psro::oracles::{dqn_oracle, q_learning_oracle, DqnConfig, OracleSpec, QLearningConfig};
use fusion_psro::policies::{scratch_init, ArchSignature, Policy, PolicyMixture, TabularPolicy};
use fusion_psro::psro::approximate_exploitability;

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    v[v.len() / 2]
}

fn kuhn() -> Arc<dyn Game> {
    GameSpec::new("kuhn_poker").build().unwrap()
}

fn rock() -> PolicyMixture {
    let mut t = TabularPolicy::new();
    t.set_pure("p1", 3, 0);
    PolicyMixture::single(tabular(t))
}

fn desk_init(game: &dyn Game, cfg: &DqnConfig, seed: u64) -> fusion_psro::policies::ParametricPolicy {
    let sig = ArchSignature::for_game(game, &cfg.hidden_layers).unwrap();
    scratch_init(cfg.init, &sig, seed).unwrap()
}

#[test]
fn dqn_on_kuhn_approaches_the_best_response() {
    let g = kuhn();
    let opp = uniform_mixture();
    let cfg = DqnConfig::desk();
    for player in 0..2 {
        let (_, golden) = best_response(g.clone(), &opp, player, DEFAULT_NODE_BUDGET).unwrap();
        let values: Vec<f64> = (0..5)
            .map(|seed| {
                let init = desk_init(g.as_ref(), &cfg, 100 + seed);
                let out = dqn_oracle(g.as_ref(), &init, &opp, player, &cfg, seed, None).unwrap();
                let me = PolicyMixture::single(Arc::new(Policy::Parametric(out.policy)));
                let profile = if player == 0 { [&me, &opp] } else { [&opp, &me] };
                expected_value(g.clone(), profile, DEFAULT_NODE_BUDGET).unwrap()[player]
            })
            .collect();
        let m = median(values.clone());
        assert!(golden - m <= 0.15, "player {player}: median {m} vs {golden} from {values:?}");
    }
}

#[test]
fn dqn_exploits_a_frozen_opponent() {
    let g = MatrixGame::new(rps()).unwrap();
    let mut cfg = DqnConfig::desk();
    cfg.episodes = 2_000;
    let init = desk_init(&g, &cfg, 0);
    let out = dqn_oracle(&g, &init, &rock(), 0, &cfg, 1, None).unwrap();
    let (ep, last) = *out.curve.last().unwrap();
    assert_eq!(ep, 2_000);
    assert!(last >= 0.9, "{last}");
}

#[test]
fn dqn_with_no_episodes_returns_init() {
    let g = kuhn();
    let mut cfg = DqnConfig::desk();
    cfg.episodes = 0;
    let init = desk_init(g.as_ref(), &cfg, 4);
    let out = dqn_oracle(g.as_ref(), &init, &uniform_mixture(), 0, &cfg, 1, None).unwrap();
    assert_eq!(out.policy, init);
    assert!(out.curve.is_empty());
}

#[test]
fn dqn_rejects_a_foreign_architecture() {
    let g = kuhn();
    let cfg = DqnConfig::desk();
    let other = GameSpec::new("liars_dice").with_param("faces", 2).build().unwrap();
    let init = desk_init(other.as_ref(), &cfg, 0);
    assert!(dqn_oracle(g.as_ref(), &init, &uniform_mixture(), 0, &cfg, 1, None).is_err());
}

#[test]
fn approximate_exploitability_tracks_exact_on_kuhn() {
    let g = kuhn();
    let u = uniform_mixture();
    let golden = exploitability(g.clone(), [&u, &u], DEFAULT_NODE_BUDGET).unwrap();
    let spec = OracleSpec::Dqn(DqnConfig::desk());
    let values: Vec<f64> = (0..5)
        .map(|seed| approximate_exploitability(g.clone(), [&u, &u], &spec, seed, DEFAULT_NODE_BUDGET).unwrap())
        .collect();
    let m = median(values.clone());
    assert!((m - golden).abs() <= 0.2, "median {m} vs {golden} from {values:?}");
    assert!(values.iter().all(|&v| v >= 0.0 && v <= golden + 1e-9));
}

#[test]
fn approximate_exploitability_with_exact_oracle_is_exact() {
    let g = kuhn();
    let u = uniform_mixture();
    let golden = exploitability(g.clone(), [&u, &u], DEFAULT_NODE_BUDGET).unwrap();
    let v = approximate_exploitability(g, [&u, &u], &OracleSpec::Exact, 0, DEFAULT_NODE_BUDGET).unwrap();
    assert!((v - golden).abs() < 1e-9);
}

#[test]
fn q_learning_value_does_not_drop_with_more_episodes() {
    let g = MatrixGame::new(rps()).unwrap();
    let opp = rock();
    let medians: Vec<f64> = [1, 5, 50, 500, 5_000]
        .iter()
        .map(|&episodes| {
            let cfg = QLearningConfig { episodes, lr: 0.1, epsilon: 0.2, gamma_discount: 1.0 };
            median(
                (0..5)
                    .map(|seed| {
                        let p = q_learning_oracle(&g, None, &opp, 0, &cfg, seed).unwrap();
                        let me = PolicyMixture::single(tabular(p));
                        expected_value(Arc::new(g.clone()), [&me, &opp], DEFAULT_NODE_BUDGET).unwrap()[0]
                    })
                    .collect(),
            )
        })
        .collect();
    assert!(medians.windows(2).all(|w| w[1] >= w[0]), "{medians:?}");
    assert_eq!(*medians.last().unwrap(), 1.0);
}

#[test]
fn q_learning_on_kuhn_is_close_to_the_best_response() {
    let g = kuhn();
    let opp = uniform_mixture();
    let (_, golden) = best_response(g.clone(), &opp, 0, DEFAULT_NODE_BUDGET).unwrap();
    let cfg = QLearningConfig { episodes: 20_000, lr: 0.02, epsilon: 0.2, gamma_discount: 1.0 };
    let p = q_learning_oracle(g.as_ref(), None, &opp, 0, &cfg, 7).unwrap();
    let me = PolicyMixture::single(tabular(p));
    let v = expected_value(g, [&me, &opp], DEFAULT_NODE_BUDGET).unwrap()[0];
    assert!(golden - v <= 0.1, "{v} vs {golden}");
}
