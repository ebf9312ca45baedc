use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::{mlp, scratch_init, softmax, ArchSignature, InitKind, ParametricPolicy, Policy, PolicyMixture};
use crate::error::{Error, Result};
use crate::games::{Action, Actor, Game, State, Turn};
use crate::rng::{derive_seed, rng_from_seed, sample_index};

pub const KL_FLOOR: f64 = 1e-9;
pub const DEFAULT_KL_STATES: usize = 512;
const DISTILL_BATCH: usize = 32;

/// Which distribution sits in the first argument of the KL divergence.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KlDirection {
    /// KL(ensemble ‖ candidate).
    #[default]
    EnsembleToCandidate,
    /// KL(candidate ‖ ensemble).
    CandidateToEnsemble,
}

/// σ-weighted average of the members' smooth action distributions at `state`.
pub fn ensemble_distribution(mixture: &PolicyMixture, game: &dyn Game, state: &State, player: usize) -> Vec<f64> {
    let mut out: Option<Vec<f64>> = None;
    for (member, w) in mixture.support() {
        let probs = member.soft_probs(game, state, player);
        match out.as_mut() {
            None => out = Some(probs.iter().map(|p| w * p).collect()),
            Some(acc) => {
                for (a, p) in acc.iter_mut().zip(&probs) {
                    *a += w * p;
                }
            }
        }
    }
    out.unwrap_or_default()
}

/// KL(p ‖ q) with `q` floored at [`KL_FLOOR`] and renormalized. Identical
/// inputs give exactly zero.
pub fn kl_floored(p: &[f64], q: &[f64]) -> f64 {
    if p == q {
        return 0.0;
    }
    let floored: Vec<f64> = q.iter().map(|v| v.max(KL_FLOOR)).collect();
    let total: f64 = floored.iter().sum();
    p.iter()
        .zip(&floored)
        .filter(|(pi, _)| **pi > 0.0)
        .map(|(pi, qi)| pi * (pi / (qi / total)).ln())
        .sum()
}

#[derive(Clone, Debug)]
pub struct SampledInfoset {
    pub key: String,
    pub state: State,
    pub legal: Vec<Action>,
}

/// Distinct infosets of `player`, in first-visit order, reached by rolling
/// out the ensemble against a uniformly random opponent.
pub fn sample_infosets(
    mixture: &PolicyMixture,
    game: &dyn Game,
    player: usize,
    num_states: usize,
    seed: u64,
) -> Vec<SampledInfoset> {
    let mut rng = rng_from_seed(seed);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let max_episodes = 64 * num_states.max(1);
    for _ in 0..max_episodes {
        if out.len() >= num_states {
            break;
        }
        let mut state = game.initial_state();
        loop {
            match game.turn(&state) {
                Turn::Terminal => break,
                Turn::Chance => {
                    let outcomes = game.chance_outcomes(&state);
                    let probs: Vec<f64> = outcomes.iter().map(|o| o.1).collect();
                    let a = outcomes[sample_index(&mut rng, &probs)].0;
                    state = state.child(Actor::Chance, a);
                }
                Turn::Player(p) => {
                    let legal = game.legal_actions(&state);
                    let a = if p == player {
                        let key = game.infoset_key(&state, p);
                        if out.len() < num_states && seen.insert(key.clone()) {
                            out.push(SampledInfoset {
                                key,
                                state: state.clone(),
                                legal: legal.clone(),
                            });
                        }
                        let probs = ensemble_distribution(mixture, game, &state, p);
                        legal[sample_index(&mut rng, &probs)]
                    } else {
                        legal[rng.random_range(0..legal.len())]
                    };
                    state = state.child(Actor::Player(p), a);
                }
            }
        }
    }
    out
}

/// Mean KL divergence between the ensemble and `candidate` over sampled
/// infosets of `player`.
pub fn kl_to_ensemble(
    candidate: &Policy,
    mixture: &PolicyMixture,
    game: &dyn Game,
    player: usize,
    num_states: usize,
    seed: u64,
    direction: KlDirection,
) -> f64 {
    let states = sample_infosets(mixture, game, player, num_states, seed);
    if states.is_empty() {
        return 0.0;
    }
    let total: f64 = states
        .iter()
        .map(|s| {
            let ens = ensemble_distribution(mixture, game, &s.state, player);
            let cand = candidate.soft_probs(game, &s.state, player);
            match direction {
                KlDirection::EnsembleToCandidate => kl_floored(&ens, &cand),
                KlDirection::CandidateToEnsemble => kl_floored(&cand, &ens),
            }
        })
        .sum();
    total / states.len() as f64
}

#[derive(Clone, Debug)]
pub struct DistillReport {
    pub student: ParametricPolicy,
    /// Mean cross-entropy over each epoch's minibatches.
    pub epoch_losses: Vec<f64>,
    pub num_samples: usize,
}

/// Trains a scratch student to match the ensemble's action distributions by
/// minibatch SGD on cross-entropy over legal-action softmax.
#[allow(clippy::too_many_arguments)]
pub fn distill(
    mixture: &PolicyMixture,
    student_signature: &ArchSignature,
    game: &dyn Game,
    player: usize,
    epochs: usize,
    samples_per_epoch: usize,
    lr: f64,
    seed: u64,
) -> Result<DistillReport> {
    if !(lr > 0.0) {
        return Err(Error::param("lr", "must be positive"));
    }
    if samples_per_epoch == 0 {
        return Err(Error::param("samples_per_epoch", "must be positive"));
    }
    let student = scratch_init(InitKind::Normal, student_signature, derive_seed(seed, &[1]))?;
    if epochs == 0 {
        return Ok(DistillReport {
            student,
            epoch_losses: Vec::new(),
            num_samples: 0,
        });
    }
    let samples = sample_infosets(mixture, game, player, samples_per_epoch, derive_seed(seed, &[2]));
    let data: Vec<(Vec<f64>, Vec<Action>, Vec<f64>)> = samples
        .iter()
        .map(|s| {
            (
                game.encode(&s.state, player),
                s.legal.clone(),
                ensemble_distribution(mixture, game, &s.state, player),
            )
        })
        .collect();
    let sig = student_signature.clone();
    let mut theta = student.into_theta();
    let mut rng = rng_from_seed(derive_seed(seed, &[3]));
    let mut order: Vec<usize> = (0..data.len()).collect();
    let mut acts = Vec::new();
    let mut grad = vec![0.0; theta.len()];
    let mut dout = vec![0.0; sig.output_dim];
    let mut epoch_losses = Vec::with_capacity(epochs);
    for epoch in 0..epochs {
        order.shuffle(&mut rng);
        let mut loss_sum = 0.0;
        for batch in order.chunks(DISTILL_BATCH) {
            grad.iter_mut().for_each(|g| *g = 0.0);
            for &i in batch {
                let (x, legal, target) = &data[i];
                mlp::forward_cached(&sig, &theta, x, &mut acts);
                let out = acts.last().expect("output layer");
                let probs = softmax(&legal.iter().map(|&a| out[a]).collect::<Vec<_>>());
                let ce: f64 = target
                    .iter()
                    .zip(&probs)
                    .filter(|(t, _)| **t > 0.0)
                    .map(|(t, p)| -t * p.max(f64::MIN_POSITIVE).ln())
                    .sum();
                loss_sum += ce;
                dout.iter_mut().for_each(|d| *d = 0.0);
                let scale = 1.0 / batch.len() as f64;
                for (k, &a) in legal.iter().enumerate() {
                    dout[a] = (probs[k] - target[k]) * scale;
                }
                mlp::backward(&sig, &theta, &acts, &dout, &mut grad);
            }
            for (t, g) in theta.iter_mut().zip(&grad) {
                *t -= lr * g;
            }
        }
        let mean = loss_sum / data.len() as f64;
        if !mean.is_finite() || theta.iter().any(|t| !t.is_finite()) {
            return Err(Error::NonFinite(format!("distillation loss at epoch {epoch}")));
        }
        epoch_losses.push(mean);
    }
    Ok(DistillReport {
        student: ParametricPolicy::new(sig, theta)?,
        epoch_losses,
        num_samples: data.len(),
    })
}
