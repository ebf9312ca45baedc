//! Policy representations, parameter fusion, scratch initializers, policy
//! ensembles and distillation.

mod checkpoint;
mod ensemble;
mod fusion;
mod init;
pub mod mlp;

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::games::{Game, State};

pub use checkpoint::{load_checkpoint, save_checkpoint, Checkpoint};
pub use ensemble::{
    distill, ensemble_distribution, kl_floored, kl_to_ensemble, sample_infosets, DistillReport,
    KlDirection, SampledInfoset, DEFAULT_KL_STATES, KL_FLOOR,
};
pub use fusion::{fuse_parameters, fuse_points, fuse_tabular, validate_simplex};
pub use init::{scratch_init, InitKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Activation {
    Relu,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArchSignature {
    pub input_dim: usize,
    pub hidden_layers: Vec<usize>,
    pub output_dim: usize,
    pub activation: Activation,
}

impl ArchSignature {
    pub fn new(input_dim: usize, hidden_layers: &[usize], output_dim: usize) -> Result<Self> {
        let sig = ArchSignature {
            input_dim,
            hidden_layers: hidden_layers.to_vec(),
            output_dim,
            activation: Activation::Relu,
        };
        sig.validate()?;
        Ok(sig)
    }

    /// Signature whose input and output match `game`'s encoder.
    pub fn for_game(game: &dyn Game, hidden_layers: &[usize]) -> Result<Self> {
        Self::new(game.feature_dim(), hidden_layers, game.num_distinct_actions())
    }

    pub fn validate(&self) -> Result<()> {
        if self.input_dim == 0 || self.output_dim == 0 || self.hidden_layers.contains(&0) {
            return Err(Error::param("signature", "all layer widths must be positive"));
        }
        Ok(())
    }

    pub fn num_params(&self) -> usize {
        mlp::num_params(self)
    }
}

/// Index of the largest entry, lowest index on ties.
pub fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[best] {
            best = i;
        }
    }
    best
}

pub fn softmax(scores: &[f64]) -> Vec<f64> {
    let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exp: Vec<f64> = scores.iter().map(|s| (s - max).exp()).collect();
    let total: f64 = exp.iter().sum();
    exp.into_iter().map(|e| e / total).collect()
}

fn uniform(n: usize) -> Vec<f64> {
    vec![1.0 / n as f64; n]
}

/// Lookup table from infoset key to a distribution over that infoset's legal
/// actions. Unseen infosets play uniformly.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TabularPolicy {
    pub table: BTreeMap<String, Vec<f64>>,
}

impl TabularPolicy {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, key: impl Into<String>, probs: Vec<f64>) -> Result<()> {
        let key = key.into();
        validate_simplex(&probs, 1e-9).map_err(|e| match e {
            Error::InvalidWeights(r) => Error::InvalidWeights(format!("{key}: {r}")),
            other => other,
        })?;
        self.table.insert(key, probs);
        Ok(())
    }

    /// Pure policy choosing `action_index` (into the legal list) at `key`.
    pub fn set_pure(&mut self, key: impl Into<String>, num_legal: usize, action_index: usize) {
        let mut probs = vec![0.0; num_legal];
        probs[action_index] = 1.0;
        self.table.insert(key.into(), probs);
    }

    pub fn probs(&self, key: &str, num_legal: usize) -> Vec<f64> {
        match self.table.get(key) {
            Some(p) if p.len() == num_legal => p.clone(),
            _ => uniform(num_legal),
        }
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }
}

/// Action-value network over a game's feature encoding.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParametricPolicy {
    signature: ArchSignature,
    theta: Vec<f64>,
}

impl ParametricPolicy {
    pub fn new(signature: ArchSignature, theta: Vec<f64>) -> Result<Self> {
        signature.validate()?;
        let expected = signature.num_params();
        if theta.len() != expected {
            return Err(Error::SignatureMismatch(format!(
                "theta has {} entries, signature needs {expected}",
                theta.len()
            )));
        }
        if let Some(j) = theta.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("theta[{j}]")));
        }
        Ok(ParametricPolicy { signature, theta })
    }

    pub fn signature(&self) -> &ArchSignature {
        &self.signature
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn into_theta(self) -> Vec<f64> {
        self.theta
    }

    /// Raw scores for every distinct action.
    pub fn scores(&self, features: &[f64]) -> Vec<f64> {
        mlp::forward(&self.signature, &self.theta, features)
    }

    /// Scores restricted to `legal`, in legal order.
    pub fn legal_scores(&self, features: &[f64], legal: &[usize]) -> Vec<f64> {
        let s = self.scores(features);
        legal.iter().map(|&a| s[a]).collect()
    }
}

/// A point in the plane of the non-transitive mixture game.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointPolicy {
    pub x: [f64; 2],
}

impl PointPolicy {
    pub fn new(x: [f64; 2]) -> Self {
        PointPolicy { x }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Policy {
    Tabular(TabularPolicy),
    Parametric(ParametricPolicy),
}

impl Policy {
    /// Distribution used when the policy is executed or evaluated:
    /// parametric policies act greedily on their scores.
    pub fn action_probs(&self, game: &dyn Game, state: &State, player: usize) -> Vec<f64> {
        let legal = game.legal_actions(state);
        match self {
            Policy::Tabular(t) => t.probs(&game.infoset_key(state, player), legal.len()),
            Policy::Parametric(p) => {
                let scores = p.legal_scores(&game.encode(state, player), &legal);
                let mut probs = vec![0.0; legal.len()];
                probs[argmax(&scores)] = 1.0;
                probs
            }
        }
    }

    /// Smooth reading of the policy: softmax over legal scores for parametric
    /// policies, the table itself for tabular ones.
    pub fn soft_probs(&self, game: &dyn Game, state: &State, player: usize) -> Vec<f64> {
        let legal = game.legal_actions(state);
        match self {
            Policy::Tabular(t) => t.probs(&game.infoset_key(state, player), legal.len()),
            Policy::Parametric(p) => softmax(&p.legal_scores(&game.encode(state, player), &legal)),
        }
    }

    pub fn as_parametric(&self) -> Option<&ParametricPolicy> {
        match self {
            Policy::Parametric(p) => Some(p),
            Policy::Tabular(_) => None,
        }
    }

    pub fn as_tabular(&self) -> Option<&TabularPolicy> {
        match self {
            Policy::Tabular(t) => Some(t),
            Policy::Parametric(_) => None,
        }
    }
}

impl From<TabularPolicy> for Policy {
    fn from(t: TabularPolicy) -> Self {
        Policy::Tabular(t)
    }
}

impl From<ParametricPolicy> for Policy {
    fn from(p: ParametricPolicy) -> Self {
        Policy::Parametric(p)
    }
}

/// A σ-weighted mixture over a population.
#[derive(Clone, Debug)]
pub struct PolicyMixture {
    members: Vec<Arc<Policy>>,
    weights: Vec<f64>,
}

impl PolicyMixture {
    pub fn new(members: Vec<Arc<Policy>>, weights: Vec<f64>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::EmptyPopulation);
        }
        if members.len() != weights.len() {
            return Err(Error::InvalidWeights(format!(
                "{} members but {} weights",
                members.len(),
                weights.len()
            )));
        }
        validate_simplex(&weights, 1e-9)?;
        Ok(PolicyMixture { members, weights })
    }

    pub fn single(policy: impl Into<Arc<Policy>>) -> Self {
        PolicyMixture {
            members: vec![policy.into()],
            weights: vec![1.0],
        }
    }

    pub fn uniform(members: Vec<Arc<Policy>>) -> Result<Self> {
        let n = members.len();
        Self::new(members, uniform(n.max(1)))
    }

    pub fn members(&self) -> &[Arc<Policy>] {
        &self.members
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Members with nonzero weight.
    pub fn support(&self) -> impl Iterator<Item = (&Arc<Policy>, f64)> {
        self.members
            .iter()
            .zip(self.weights.iter().copied())
            .filter(|(_, w)| *w > 0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn argmax_lowest_tie() {
        assert_eq!(argmax(&[1.0, 3.0, 3.0]), 1);
        assert_eq!(argmax(&[0.0, 0.0]), 0);
    }

    #[test]
    fn tabular_default_uniform() {
        let t = TabularPolicy::new();
        assert_eq!(t.probs("x", 4), vec![0.25; 4]);
    }

    #[test]
    fn tabular_rejects_bad_rows() {
        let mut t = TabularPolicy::new();
        assert!(t.insert("a", vec![0.5, 0.6]).is_err());
        assert!(t.insert("a", vec![-0.1, 1.1]).is_err());
        t.insert("a", vec![0.25, 0.75]).unwrap();
    }

    #[test]
    fn parametric_len_checked() {
        let sig = ArchSignature::new(2, &[3], 2).unwrap();
        assert!(ParametricPolicy::new(sig.clone(), vec![0.0; 5]).is_err());
        assert!(ParametricPolicy::new(sig.clone(), vec![f64::NAN; sig.num_params()]).is_err());
        assert!(ParametricPolicy::new(sig.clone(), vec![0.0; sig.num_params()]).is_ok());
    }

    #[test]
    fn mixture_validation() {
        let p = Arc::new(Policy::Tabular(TabularPolicy::new()));
        assert!(PolicyMixture::new(vec![], vec![]).is_err());
        assert!(PolicyMixture::new(vec![p.clone()], vec![0.5]).is_err());
        assert!(PolicyMixture::new(vec![p.clone(), p], vec![0.5, 0.5]).is_ok());
    }
}
