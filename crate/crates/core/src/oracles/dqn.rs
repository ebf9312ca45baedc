use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::{play_episode, psd_intrinsic_reward, sample_member};
use crate::error::{Error, Result};
use crate::games::{Action, Game};
use crate::policies::{argmax, mlp, InitKind, ParametricPolicy, Policy, PolicyMixture};
use crate::rng::rng_from_seed;

const ADAM_BETA1: f64 = 0.9;
const ADAM_BETA2: f64 = 0.999;
const ADAM_EPS: f64 = 1e-8;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Optimizer {
    Sgd,
    /// β₁ = 0.9, β₂ = 0.999, ε = 1e-8.
    #[default]
    Adam,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum LrSchedule {
    #[default]
    Constant,
    /// Linear decay from `lr` to `lr * final_fraction` over the episodes.
    Linear { final_fraction: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DqnConfig {
    pub episodes: usize,
    pub replay_capacity: usize,
    pub batch_size: usize,
    pub lr: f64,
    pub lr_schedule: LrSchedule,
    pub gamma_discount: f64,
    pub epsilon: f64,
    /// When set, ε decays linearly from `epsilon` to this value.
    pub epsilon_final: Option<f64>,
    /// Hard target copy period, in learner steps.
    pub target_update_every: usize,
    /// Polyak factor; replaces hard copies when set.
    pub soft_update_tau: Option<f64>,
    pub optimizer: Optimizer,
    /// Global gradient-norm clip.
    pub grad_clip: Option<f64>,
    pub hidden_layers: Vec<usize>,
    /// Initializer for the very first population member.
    pub init: InitKind,
    /// Environment steps between learner updates.
    pub learn_every: usize,
    /// Episodes per learning-curve point.
    pub curve_window: usize,
    /// Prioritized replay exponent. Recorded only; replay is uniform.
    pub per_alpha: Option<f64>,
    /// Importance-sampling exponent. Recorded only; replay is uniform.
    pub is_beta: Option<f64>,
}

impl Default for DqnConfig {
    fn default() -> Self {
        DqnConfig::desk()
    }
}

impl DqnConfig {
    /// Small budget suited to laptop-scale runs.
    pub fn desk() -> Self {
        DqnConfig {
            episodes: 2_000,
            replay_capacity: 10_000,
            batch_size: 32,
            lr: 1e-3,
            lr_schedule: LrSchedule::Constant,
            gamma_discount: 1.0,
            epsilon: 0.1,
            epsilon_final: None,
            target_update_every: 50,
            soft_update_tau: None,
            optimizer: Optimizer::Adam,
            grad_clip: Some(10.0),
            hidden_layers: vec![32, 32],
            init: InitKind::Kaiming,
            learn_every: 1,
            curve_window: 100,
            per_alpha: None,
            is_beta: None,
        }
    }

    pub fn leduc() -> Self {
        DqnConfig {
            episodes: 20_000,
            replay_capacity: 10_000,
            batch_size: 512,
            lr: 5e-3,
            gamma_discount: 1.0,
            epsilon: 0.05,
            target_update_every: 5,
            grad_clip: None,
            hidden_layers: vec![256, 256, 256],
            ..DqnConfig::desk()
        }
    }

    pub fn liars_dice() -> Self {
        DqnConfig {
            episodes: 200_000,
            replay_capacity: 100_000,
            batch_size: 512,
            lr: 5e-4,
            lr_schedule: LrSchedule::Linear { final_fraction: 0.0 },
            gamma_discount: 0.99,
            epsilon: 0.05,
            target_update_every: 5,
            soft_update_tau: Some(0.005),
            grad_clip: Some(10.0),
            hidden_layers: vec![256, 256, 128],
            per_alpha: Some(0.6),
            is_beta: Some(0.4),
            ..DqnConfig::desk()
        }
    }

    pub fn goofspiel() -> Self {
        DqnConfig {
            episodes: 30_000,
            hidden_layers: vec![512, 512, 512],
            ..DqnConfig::leduc()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.batch_size == 0 || self.replay_capacity < self.batch_size {
            return Err(Error::param("replay_capacity", "needs capacity >= batch_size >= 1"));
        }
        if !(self.lr > 0.0) {
            return Err(Error::param("lr", "must be positive"));
        }
        if !(0.0..=1.0).contains(&self.gamma_discount) {
            return Err(Error::param("gamma_discount", "must lie in [0, 1]"));
        }
        for (name, e) in [("epsilon", Some(self.epsilon)), ("epsilon_final", self.epsilon_final)] {
            if let Some(e) = e {
                if !(0.0..=1.0).contains(&e) {
                    return Err(Error::param(name, "must lie in [0, 1]"));
                }
            }
        }
        if self.target_update_every == 0 || self.learn_every == 0 || self.curve_window == 0 {
            return Err(Error::param("target_update_every", "periods must be at least 1"));
        }
        if let Some(t) = self.soft_update_tau {
            if !(t > 0.0 && t <= 1.0) {
                return Err(Error::param("soft_update_tau", "must lie in (0, 1]"));
            }
        }
        if let Some(c) = self.grad_clip {
            if !(c > 0.0) {
                return Err(Error::param("grad_clip", "must be positive"));
            }
        }
        if let LrSchedule::Linear { final_fraction } = self.lr_schedule {
            if !(0.0..=1.0).contains(&final_fraction) {
                return Err(Error::param("final_fraction", "must lie in [0, 1]"));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct DqnOutcome {
    pub policy: ParametricPolicy,
    /// `(episode, mean extrinsic return over the last window)`.
    pub curve: Vec<(usize, f64)>,
}

/// Diversity shaping: hull samples and weight for the intrinsic bonus.
#[derive(Clone, Copy, Debug)]
pub struct PsdShaping<'a> {
    pub hull: &'a [PolicyMixture],
    pub lambda: f64,
}

struct Transition {
    x: Vec<f64>,
    action: Action,
    reward: f64,
    next: Option<(Vec<f64>, Vec<Action>)>,
}

struct Learner {
    sig: crate::policies::ArchSignature,
    theta: Vec<f64>,
    target: Vec<f64>,
    m: Vec<f64>,
    v: Vec<f64>,
    steps: u64,
    grad: Vec<f64>,
    acts: Vec<Vec<f64>>,
    dout: Vec<f64>,
}

impl Learner {
    fn greedy(&self, x: &[f64], legal: &[Action]) -> usize {
        let q = mlp::forward(&self.sig, &self.theta, x);
        argmax(&legal.iter().map(|&a| q[a]).collect::<Vec<_>>())
    }

    fn update(&mut self, batch: &[&Transition], cfg: &DqnConfig, lr: f64) -> Result<f64> {
        self.grad.iter_mut().for_each(|g| *g = 0.0);
        let scale = 1.0 / batch.len() as f64;
        let mut loss = 0.0;
        for tr in batch {
            let y = match &tr.next {
                None => tr.reward,
                Some((x2, legal2)) => {
                    let q2 = mlp::forward(&self.sig, &self.target, x2);
                    let best = legal2.iter().map(|&a| q2[a]).fold(f64::NEG_INFINITY, f64::max);
                    tr.reward + cfg.gamma_discount * best
                }
            };
            mlp::forward_cached(&self.sig, &self.theta, &tr.x, &mut self.acts);
            let q = self.acts.last().expect("output layer")[tr.action];
            let d = q - y;
            loss += d * d * scale;
            self.dout.iter_mut().for_each(|v| *v = 0.0);
            self.dout[tr.action] = 2.0 * d * scale;
            mlp::backward(&self.sig, &self.theta, &self.acts, &self.dout, &mut self.grad);
        }
        if !loss.is_finite() {
            return Err(Error::NonFinite(format!("TD loss at learner step {}", self.steps)));
        }
        if let Some(clip) = cfg.grad_clip {
            let norm = self.grad.iter().map(|g| g * g).sum::<f64>().sqrt();
            if norm > clip {
                let f = clip / norm;
                self.grad.iter_mut().for_each(|g| *g *= f);
            }
        }
        self.steps += 1;
        match cfg.optimizer {
            Optimizer::Sgd => {
                for (t, g) in self.theta.iter_mut().zip(&self.grad) {
                    *t -= lr * g;
                }
            }
            Optimizer::Adam => {
                let k = self.steps as i32;
                let c1 = 1.0 - ADAM_BETA1.powi(k);
                let c2 = 1.0 - ADAM_BETA2.powi(k);
                for j in 0..self.theta.len() {
                    let g = self.grad[j];
                    self.m[j] = ADAM_BETA1 * self.m[j] + (1.0 - ADAM_BETA1) * g;
                    self.v[j] = ADAM_BETA2 * self.v[j] + (1.0 - ADAM_BETA2) * g * g;
                    let mh = self.m[j] / c1;
                    let vh = self.v[j] / c2;
                    self.theta[j] -= lr * mh / (vh.sqrt() + ADAM_EPS);
                }
            }
        }
        match cfg.soft_update_tau {
            Some(tau) => {
                for (t, o) in self.target.iter_mut().zip(&self.theta) {
                    *t = tau * o + (1.0 - tau) * *t;
                }
            }
            None => {
                if self.steps % cfg.target_update_every as u64 == 0 {
                    self.target.copy_from_slice(&self.theta);
                }
            }
        }
        Ok(loss)
    }
}

fn fraction(ep: usize, episodes: usize) -> f64 {
    if episodes <= 1 {
        0.0
    } else {
        ep as f64 / (episodes - 1) as f64
    }
}

/// DQN best response starting from `init`: ε-greedy over legal actions,
/// uniform replay, target network, squared TD loss.
pub fn dqn_oracle(
    game: &dyn Game,
    init: &ParametricPolicy,
    opponent: &PolicyMixture,
    player: usize,
    cfg: &DqnConfig,
    seed: u64,
    psd: Option<PsdShaping<'_>>,
) -> Result<DqnOutcome> {
    cfg.validate()?;
    let sig = init.signature().clone();
    if sig.input_dim != game.feature_dim() || sig.output_dim != game.num_distinct_actions() {
        return Err(Error::SignatureMismatch(format!(
            "network {}->{} but {} encodes {}->{}",
            sig.input_dim,
            sig.output_dim,
            game.name(),
            game.feature_dim(),
            game.num_distinct_actions()
        )));
    }
    let n = init.theta().len();
    let mut learner = Learner {
        theta: init.theta().to_vec(),
        target: init.theta().to_vec(),
        m: vec![0.0; n],
        v: vec![0.0; n],
        steps: 0,
        grad: vec![0.0; n],
        acts: Vec::new(),
        dout: vec![0.0; sig.output_dim],
        sig,
    };
    let mut rng = rng_from_seed(seed);
    let mut replay: Vec<Transition> = Vec::with_capacity(cfg.replay_capacity.min(1 << 16));
    let mut cursor = 0usize;
    let mut env_steps = 0usize;
    let mut curve = Vec::new();
    let mut window = 0.0;
    for ep in 0..cfg.episodes {
        let progress = fraction(ep, cfg.episodes);
        let eps = match cfg.epsilon_final {
            Some(end) => cfg.epsilon + (end - cfg.epsilon) * progress,
            None => cfg.epsilon,
        };
        let lr = match cfg.lr_schedule {
            LrSchedule::Constant => cfg.lr,
            LrSchedule::Linear { final_fraction } => {
                // Keep the last steps from stalling at exactly zero.
                let f = 1.0 - (1.0 - final_fraction) * ep as f64 / cfg.episodes as f64;
                cfg.lr * f
            }
        };
        let opp = sample_member(opponent, &mut rng);
        let traj = play_episode(game, player, opp, &mut rng, |state, legal, rng| {
            if rng.random::<f64>() < eps {
                rng.random_range(0..legal.len())
            } else {
                learner.greedy(&game.encode(state, player), legal)
            }
        });
        let rewards = match psd {
            Some(shaping) if shaping.lambda > 0.0 => {
                let current = Policy::Parametric(ParametricPolicy::new(learner.sig.clone(), learner.theta.clone())?);
                psd_intrinsic_reward(&traj, &current, shaping.hull, shaping.lambda, cfg.gamma_discount, game, player)
            }
            _ => traj.steps.iter().map(|s| s.reward).collect(),
        };
        let features: Vec<Vec<f64>> = traj.steps.iter().map(|s| game.encode(&s.state, player)).collect();
        for (t, step) in traj.steps.iter().enumerate() {
            let next = (!step.terminal && t + 1 < traj.steps.len())
                .then(|| (features[t + 1].clone(), traj.steps[t + 1].legal.clone()));
            let tr = Transition {
                x: features[t].clone(),
                action: step.legal[step.action],
                reward: rewards[t],
                next,
            };
            if replay.len() < cfg.replay_capacity {
                replay.push(tr);
            } else {
                replay[cursor] = tr;
            }
            cursor = (cursor + 1) % cfg.replay_capacity;
            env_steps += 1;
            if env_steps % cfg.learn_every == 0 && replay.len() >= cfg.batch_size {
                let batch: Vec<&Transition> = (0..cfg.batch_size)
                    .map(|_| &replay[rng.random_range(0..replay.len())])
                    .collect();
                learner.update(&batch, cfg, lr)?;
            }
        }
        window += traj.ret;
        if (ep + 1) % cfg.curve_window == 0 {
            curve.push((ep + 1, window / cfg.curve_window as f64));
            window = 0.0;
        }
    }
    Ok(DqnOutcome {
        policy: ParametricPolicy::new(learner.sig, learner.theta)?,
        curve,
    })
}
