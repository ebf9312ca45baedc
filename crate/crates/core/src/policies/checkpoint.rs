use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Activation, ArchSignature, ParametricPolicy};
use crate::error::{Error, Result};

/// On-disk form of a parametric policy. Floats are written with shortest
/// round-trip formatting, so load(save(p)) == p bit for bit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Checkpoint {
    pub input_dim: usize,
    pub hidden_layers: Vec<usize>,
    pub output_dim: usize,
    pub activation: Activation,
    pub theta: Vec<f64>,
}

impl From<&ParametricPolicy> for Checkpoint {
    fn from(p: &ParametricPolicy) -> Self {
        let s = p.signature();
        Checkpoint {
            input_dim: s.input_dim,
            hidden_layers: s.hidden_layers.clone(),
            output_dim: s.output_dim,
            activation: s.activation,
            theta: p.theta().to_vec(),
        }
    }
}

impl TryFrom<Checkpoint> for ParametricPolicy {
    type Error = Error;

    fn try_from(c: Checkpoint) -> Result<Self> {
        let sig = ArchSignature {
            input_dim: c.input_dim,
            hidden_layers: c.hidden_layers,
            output_dim: c.output_dim,
            activation: c.activation,
        };
        ParametricPolicy::new(sig, c.theta)
    }
}

pub fn save_checkpoint(policy: &ParametricPolicy, path: &Path) -> Result<()> {
    let text = serde_json::to_string_pretty(&Checkpoint::from(policy))?;
    fs::write(path, text + "\n").map_err(|e| Error::io(path, e))
}

pub fn load_checkpoint(path: &Path) -> Result<ParametricPolicy> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let c: Checkpoint = serde_json::from_str(&text).map_err(|e| Error::MalformedInput {
        file: path.display().to_string(),
        reason: e.to_string(),
    })?;
    ParametricPolicy::try_from(c)
}
