use std::fmt;
use std::sync::Arc;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::games::ntmg::NtmgConfig;
use crate::games::Game;
use crate::policies::{
    argmax, distill, fuse_parameters, fuse_points, fuse_tabular, scratch_init, ArchSignature, InitKind,
    PointPolicy, Policy, PolicyMixture, TabularPolicy,
};
use crate::rng::{rng_from_seed, sample_index};

/// How many of the heaviest members enter the fusion.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "TopKRepr", into = "TopKRepr")]
pub enum TopK {
    #[default]
    All,
    K(usize),
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum TopKRepr {
    K(usize),
    Name(String),
}

impl TryFrom<TopKRepr> for TopK {
    type Error = String;

    fn try_from(r: TopKRepr) -> std::result::Result<Self, String> {
        match r {
            TopKRepr::K(0) => Err("top_k must be at least 1".into()),
            TopKRepr::K(k) => Ok(TopK::K(k)),
            TopKRepr::Name(s) if s == "all" => Ok(TopK::All),
            TopKRepr::Name(s) => Err(format!("expected a positive integer or \"all\", got {s:?}")),
        }
    }
}

impl From<TopK> for TopKRepr {
    fn from(k: TopK) -> Self {
        match k {
            TopK::All => TopKRepr::Name("all".into()),
            TopK::K(k) => TopKRepr::K(k),
        }
    }
}

impl fmt::Display for TopK {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TopK::All => f.write_str("all"),
            TopK::K(k) => write!(f, "{k}"),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FusionWeights {
    #[default]
    Nash,
    Uniform,
}

/// Initialization of each new policy before oracle training.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum InitMethod {
    Scratch {
        kind: InitKind,
    },
    InheritLatest,
    /// Copy of a member sampled from σ.
    SampleFromNe,
    /// Copy of the σ-argmax member, lowest index on ties.
    InheritBest,
    NashFusion {
        /// Fusion applies from iteration `c` on (1-based); earlier iterations
        /// copy a σ-sampled member.
        #[serde(default)]
        c: usize,
        #[serde(default)]
        top_k: TopK,
        #[serde(default)]
        weights: FusionWeights,
    },
    Distill {
        epochs: usize,
        samples: usize,
        lr: f64,
    },
}

impl InitMethod {
    pub fn fusion() -> Self {
        InitMethod::NashFusion {
            c: 0,
            top_k: TopK::All,
            weights: FusionWeights::Nash,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            InitMethod::NashFusion { top_k: TopK::K(0), .. } => Err(Error::param("top_k", "must be at least 1")),
            InitMethod::Distill { samples, lr, .. } => {
                if samples == 0 {
                    return Err(Error::param("samples", "must be at least 1"));
                }
                if !(lr > 0.0) {
                    return Err(Error::param("lr", "must be positive"));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Short label used in sweep summaries and file names.
    pub fn label(&self) -> String {
        match self {
            InitMethod::Scratch { kind } => format!("scratch_{}", format!("{kind:?}").to_lowercase()),
            InitMethod::InheritLatest => "inherit_latest".into(),
            InitMethod::SampleFromNe => "sample_from_ne".into(),
            InitMethod::InheritBest => "inherit_best".into(),
            InitMethod::NashFusion { c, top_k, weights } => {
                let w = match weights {
                    FusionWeights::Nash => "nash",
                    FusionWeights::Uniform => "uniform",
                };
                format!("fusion_c{c}_k{top_k}_{w}")
            }
            InitMethod::Distill { .. } => "distill".into(),
        }
    }
}

/// Keeps the `k` largest entries (lower index wins ties), zeroes the rest and
/// renormalizes. Falls back to uniform over the kept entries when their mass
/// is zero.
pub fn top_k_filter(sigma: &[f64], k: usize) -> Result<Vec<f64>> {
    if k == 0 || k > sigma.len() {
        return Err(Error::param("k", format!("must lie in 1..={}", sigma.len())));
    }
    let mut order: Vec<usize> = (0..sigma.len()).collect();
    order.sort_by(|&a, &b| sigma[b].total_cmp(&sigma[a]).then(a.cmp(&b)));
    let kept = &order[..k];
    let mass: f64 = kept.iter().map(|&i| sigma[i]).sum();
    let mut out = vec![0.0; sigma.len()];
    for &i in kept {
        out[i] = if mass > 0.0 { sigma[i] / mass } else { 1.0 / k as f64 };
    }
    Ok(out)
}

/// What to build, independent of the policy representation.
#[derive(Clone, Debug, PartialEq)]
pub(crate) enum InitPlan {
    Copy(usize),
    Fuse(Vec<f64>),
    Scratch(InitKind),
    Distill { epochs: usize, samples: usize, lr: f64 },
}

pub(crate) fn plan(pop_len: usize, sigma: &[f64], t: usize, method: &InitMethod, seed: u64) -> Result<InitPlan> {
    if pop_len == 0 {
        return Err(Error::EmptyPopulation);
    }
    if sigma.len() != pop_len {
        return Err(Error::InvalidWeights(format!(
            "{pop_len} members but {} weights",
            sigma.len()
        )));
    }
    method.validate()?;
    let sampled = || sample_index(&mut rng_from_seed(seed), sigma);
    Ok(match *method {
        InitMethod::Scratch { kind } => InitPlan::Scratch(kind),
        InitMethod::InheritLatest => InitPlan::Copy(pop_len - 1),
        InitMethod::SampleFromNe => InitPlan::Copy(sampled()),
        InitMethod::InheritBest => InitPlan::Copy(argmax(sigma)),
        InitMethod::NashFusion { c, .. } if t < c => InitPlan::Copy(sampled()),
        InitMethod::NashFusion { top_k, weights, .. } => {
            let k = match top_k {
                TopK::All => pop_len,
                TopK::K(k) => k.min(pop_len),
            };
            let w = top_k_filter(sigma, k)?;
            InitPlan::Fuse(match weights {
                FusionWeights::Nash => w,
                FusionWeights::Uniform => {
                    let selected = w.iter().filter(|&&x| x > 0.0).count().max(1);
                    w.iter().map(|&x| if x > 0.0 { 1.0 / selected as f64 } else { 0.0 }).collect()
                }
            })
        }
        InitMethod::Distill { epochs, samples, lr } => InitPlan::Distill { epochs, samples, lr },
    })
}

/// Where a new extensive-form policy lives: the game, the learning player,
/// and the network shape when policies are parametric.
#[derive(Clone, Copy, Debug)]
pub struct InitContext<'a> {
    pub game: &'a dyn Game,
    pub player: usize,
    pub signature: Option<&'a ArchSignature>,
}

/// σ-weighted fusion of a population of one representation.
pub fn fuse_policies(members: &[Arc<Policy>], weights: &[f64]) -> Result<Policy> {
    if let Some(params) = members.iter().map(|m| m.as_parametric()).collect::<Option<Vec<_>>>() {
        return Ok(Policy::Parametric(fuse_parameters(&params, weights)?));
    }
    if let Some(tables) = members.iter().map(|m| m.as_tabular()).collect::<Option<Vec<_>>>() {
        return Ok(Policy::Tabular(fuse_tabular(&tables, weights)?));
    }
    Err(Error::SignatureMismatch("population mixes tabular and parametric policies".into()))
}

/// The initial policy for iteration `t` (1-based) of the learning player.
pub fn init_new_policy(
    pop: &[Arc<Policy>],
    sigma: &[f64],
    t: usize,
    method: &InitMethod,
    ctx: &InitContext<'_>,
    seed: u64,
) -> Result<Policy> {
    match plan(pop.len(), sigma, t, method, seed)? {
        InitPlan::Copy(i) => Ok(pop[i].as_ref().clone()),
        InitPlan::Fuse(w) => fuse_policies(pop, &w),
        InitPlan::Scratch(kind) => match ctx.signature {
            Some(sig) => Ok(Policy::Parametric(scratch_init(kind, sig, seed)?)),
            None => Ok(Policy::Tabular(TabularPolicy::new())),
        },
        InitPlan::Distill { epochs, samples, lr } => {
            let sig = ctx
                .signature
                .ok_or_else(|| Error::Unsupported("distillation needs a parametric population".into()))?;
            let mixture = PolicyMixture::new(pop.to_vec(), sigma.to_vec())?;
            Ok(Policy::Parametric(
                distill(&mixture, sig, ctx.game, ctx.player, epochs, samples, lr, seed)?.student,
            ))
        }
    }
}

/// A scratch point: uniform over the square spanned by the hump ring.
pub fn scratch_point(cfg: &NtmgConfig, seed: u64) -> PointPolicy {
    let mut rng = rng_from_seed(seed);
    let r = cfg.center_radius;
    PointPolicy::new(cfg.clamp([rng.random_range(-r..=r), rng.random_range(-r..=r)]))
}

/// The mixture-game counterpart of [`init_new_policy`].
pub fn init_new_point(
    pop: &[PointPolicy],
    sigma: &[f64],
    t: usize,
    method: &InitMethod,
    cfg: &NtmgConfig,
    seed: u64,
) -> Result<PointPolicy> {
    match plan(pop.len(), sigma, t, method, seed)? {
        InitPlan::Copy(i) => Ok(pop[i]),
        InitPlan::Fuse(w) => fuse_points(pop, &w),
        InitPlan::Scratch(_) => Ok(scratch_point(cfg, seed)),
        InitPlan::Distill { .. } => Err(Error::Unsupported("distillation of points".into())),
    }
}
