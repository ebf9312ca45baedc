//! The population training loop and its initialization menu.

mod approx;
mod family;
mod init;

use std::path::PathBuf;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::games::{GameSpec, DEFAULT_NODE_BUDGET};
use crate::meta::{solve, MetaGame, MssKind, PayoffMode};
use crate::oracles::OracleSpec;
use crate::policies::{KlDirection, PointPolicy, Policy, DEFAULT_KL_STATES};
use crate::rng::{derive_seed, purpose};

use family::{Extensive, Family, Mixture, TrainExtra};

pub use approx::{approximate_exploitability, APPROX_EPISODES};
pub use init::{
    fuse_policies, init_new_point, init_new_policy, scratch_point, top_k_filter, FusionWeights, InitContext,
    InitMethod, TopK,
};

/// One initialization method for both players, or one each.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PlayerInit {
    Shared(InitMethod),
    PerPlayer([InitMethod; 2]),
}

impl PlayerInit {
    pub fn for_player(&self, player: usize) -> &InitMethod {
        match self {
            PlayerInit::Shared(m) => m,
            PlayerInit::PerPlayer(ms) => &ms[player],
        }
    }

    /// Replaces the method of both players.
    pub fn set(&mut self, method: InitMethod) {
        *self = PlayerInit::Shared(method);
    }

    /// Applies `f` to every method in place.
    pub fn for_each_mut(&mut self, mut f: impl FnMut(&mut InitMethod)) {
        match self {
            PlayerInit::Shared(m) => f(m),
            PlayerInit::PerPlayer(ms) => ms.iter_mut().for_each(f),
        }
    }
}

impl From<InitMethod> for PlayerInit {
    fn from(m: InitMethod) -> Self {
        PlayerInit::Shared(m)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PsdConfig {
    #[serde(default)]
    pub enabled: bool,
    #[serde(default = "one_f64")]
    pub lambda: f64,
    /// Mixtures sampled from the policy hull per oracle run.
    #[serde(default = "four")]
    pub hull_samples: usize,
}

impl Default for PsdConfig {
    fn default() -> Self {
        PsdConfig {
            enabled: false,
            lambda: 1.0,
            hull_samples: 4,
        }
    }
}

/// Records the divergence of freshly initialized policies from the ensemble.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KlProbe {
    #[serde(default = "default_kl_states")]
    pub num_states: usize,
    #[serde(default)]
    pub direction: KlDirection,
}

impl Default for KlProbe {
    fn default() -> Self {
        KlProbe {
            num_states: DEFAULT_KL_STATES,
            direction: KlDirection::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvalConfig {
    /// Cadence of exact exploitability; 0 disables it. The last iteration is
    /// always evaluated when enabled.
    #[serde(default = "one_usize")]
    pub exact_exploitability_every: usize,
    #[serde(default)]
    pub approx_exploitability: Option<OracleSpec>,
    #[serde(default = "one_usize")]
    pub approx_every: usize,
    #[serde(default)]
    pub payoff: PayoffMode,
    #[serde(default)]
    pub kl_probe: Option<KlProbe>,
    #[serde(default = "default_budget")]
    pub node_budget: usize,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            exact_exploitability_every: 1,
            approx_exploitability: None,
            approx_every: 1,
            payoff: PayoffMode::Exact,
            kl_probe: None,
            node_budget: DEFAULT_NODE_BUDGET,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PsroConfig {
    pub game: GameSpec,
    pub oracle: OracleSpec,
    #[serde(default = "default_mss")]
    pub mss: MssKind,
    #[serde(default = "default_init")]
    pub init: PlayerInit,
    pub iterations: usize,
    #[serde(default)]
    pub psd: PsdConfig,
    #[serde(default)]
    pub eval: EvalConfig,
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
}

fn one_f64() -> f64 {
    1.0
}
fn one_usize() -> usize {
    1
}
fn four() -> usize {
    4
}
fn default_kl_states() -> usize {
    DEFAULT_KL_STATES
}
fn default_budget() -> usize {
    DEFAULT_NODE_BUDGET
}
fn default_mss() -> MssKind {
    MssKind::Nash
}
fn default_init() -> PlayerInit {
    PlayerInit::Shared(InitMethod::fusion())
}
fn default_seeds() -> Vec<u64> {
    vec![0]
}

impl PsroConfig {
    /// A config with defaults for everything but the essentials.
    pub fn new(game: GameSpec, oracle: OracleSpec, iterations: usize) -> Self {
        PsroConfig {
            game,
            oracle,
            mss: default_mss(),
            init: default_init(),
            iterations,
            psd: PsdConfig::default(),
            eval: EvalConfig::default(),
            seeds: default_seeds(),
            output_dir: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.iterations == 0 {
            return Err(Error::param("iterations", "must be at least 1"));
        }
        self.oracle.validate()?;
        self.mss.validate()?;
        for p in 0..2 {
            self.init.for_player(p).validate()?;
        }
        if !(self.psd.lambda >= 0.0) || !self.psd.lambda.is_finite() {
            return Err(Error::param("psd.lambda", "must be non-negative"));
        }
        if self.psd.enabled && self.psd.hull_samples == 0 {
            return Err(Error::param("psd.hull_samples", "must be at least 1 when enabled"));
        }
        if self.seeds.is_empty() {
            return Err(Error::param("seeds", "must list at least one seed"));
        }
        if self.eval.approx_every == 0 {
            return Err(Error::param("eval.approx_every", "must be at least 1"));
        }
        if let Some(spec) = &self.eval.approx_exploitability {
            spec.validate()?;
        }
        if let Some(probe) = &self.eval.kl_probe {
            if probe.num_states == 0 {
                return Err(Error::param("eval.kl_probe.num_states", "must be at least 1"));
            }
        }
        Ok(())
    }
}

/// Wall time in seconds spent in each phase of one iteration.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub meta_solve: f64,
    pub br_training: f64,
    /// Building the initial policies, fusion included.
    pub fusion: f64,
    pub payoff_fill: f64,
    pub total: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KlRecord {
    pub player: usize,
    /// Which initialization: `init` is the configured method, the others are
    /// counterfactual arms built from the same population.
    pub arm: String,
    pub kl: f64,
}

/// Learning curve of one oracle run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveRecord {
    pub player: usize,
    pub points: Vec<(usize, f64)>,
}

/// Visited points of one gradient oracle run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathRecord {
    pub player: usize,
    pub points: Vec<[f64; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    /// 1-based.
    pub iteration: usize,
    pub sigma: [Vec<f64>; 2],
    pub exploitability: Option<f64>,
    pub approx_exploitability: Option<f64>,
    pub pop_sizes: [usize; 2],
    pub timings: Timings,
    pub kl: Vec<KlRecord>,
    pub curves: Vec<CurveRecord>,
    pub paths: Vec<PathRecord>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunHistory {
    pub seed: u64,
    /// Exploitability of the initial one-member populations, when computed.
    pub initial_exploitability: Option<f64>,
    pub records: Vec<IterationRecord>,
}

impl RunHistory {
    pub fn final_record(&self) -> Option<&IterationRecord> {
        self.records.last()
    }

    pub fn final_exploitability(&self) -> Option<f64> {
        self.final_record().and_then(|r| r.exploitability)
    }

    pub fn final_approx_exploitability(&self) -> Option<f64> {
        self.final_record().and_then(|r| r.approx_exploitability)
    }

    /// The exact value when present, the approximate one otherwise.
    pub fn final_metric(&self) -> Option<f64> {
        self.final_exploitability().or(self.final_approx_exploitability())
    }
}

/// A population member as handed to observers.
#[derive(Clone, Copy, Debug)]
pub enum Snapshot<'a> {
    Policy(&'a Policy),
    Point(&'a PointPolicy),
}

/// Receives results while a run progresses, so nothing is lost when a later
/// iteration fails.
pub trait RunObserver {
    fn on_member(&mut self, _player: usize, _index: usize, _member: Snapshot<'_>) -> Result<()> {
        Ok(())
    }

    /// `meta_dump` is the text form of the meta-game and σ after the
    /// iteration.
    fn on_iteration(&mut self, _record: &IterationRecord, _meta_dump: &str) -> Result<()> {
        Ok(())
    }
}

/// Observer that ignores everything.
#[derive(Clone, Copy, Debug, Default)]
pub struct Silent;

impl RunObserver for Silent {}

/// Runs the loop for one seed.
pub fn run_psro(config: &PsroConfig, seed: u64) -> Result<RunHistory> {
    run_psro_observed(config, seed, &mut Silent)
}

pub fn run_psro_observed(config: &PsroConfig, seed: u64, observer: &mut dyn RunObserver) -> Result<RunHistory> {
    config.validate()?;
    if config.game.is_ntmg() {
        let mut family = Mixture::new(config)?;
        drive(&mut family, config, seed, observer)
    } else {
        let mut family = Extensive::new(config, seed)?;
        drive(&mut family, config, seed, observer)
    }
}

fn due(t: usize, every: usize, last: usize) -> bool {
    every > 0 && (t % every == 0 || t == last)
}

fn normalized(mut v: Vec<f64>) -> Vec<f64> {
    for x in v.iter_mut() {
        *x = x.max(0.0);
    }
    let s: f64 = v.iter().sum();
    if s > 0.0 {
        v.iter_mut().for_each(|x| *x /= s);
    }
    v
}

fn drive<F: Family>(f: &mut F, config: &PsroConfig, seed: u64, observer: &mut dyn RunObserver) -> Result<RunHistory> {
    let mut pops: [Vec<F::Member>; 2] = [Vec::new(), Vec::new()];
    for (p, pop) in pops.iter_mut().enumerate() {
        let m = f.initial(p, config.init.for_player(p), derive_seed(seed, &[purpose::INITIAL, p as u64]))?;
        observer.on_member(p, 0, F::snapshot(&m))?;
        pop.push(m);
    }
    let mut meta = MetaGame::new();
    f.fill(&mut meta, &pops)?;
    let mut sigma = [vec![1.0], vec![1.0]];
    let initial_exploitability = if config.eval.exact_exploitability_every > 0 {
        f.exploitability(&pops, &sigma)?
    } else {
        None
    };
    let mut history = RunHistory {
        seed,
        initial_exploitability,
        records: Vec::with_capacity(config.iterations),
    };
    let last = config.iterations;
    for t in 1..=last {
        let started = Instant::now();
        let mut timings = Timings::default();
        let mut kl = Vec::new();
        let mut curves = Vec::new();
        let mut paths = Vec::new();
        let mut fresh = Vec::with_capacity(2);
        let tu = t as u64;
        for p in 0..2 {
            let method = config.init.for_player(p);
            let clock = Instant::now();
            let init = f.init(&pops, &sigma, p, t, method, derive_seed(seed, &[purpose::INIT, tu, p as u64]))?;
            timings.fusion += clock.elapsed().as_secs_f64();
            if let Some(probe) = &config.eval.kl_probe {
                let s = derive_seed(seed, &[purpose::KL_PROBE, tu, p as u64]);
                kl.extend(f.kl_probe(&pops, &sigma, p, &init, probe, s)?);
            }
            let clock = Instant::now();
            let (member, extra) = f.train(init, &pops, &sigma, p, derive_seed(seed, &[purpose::ORACLE, tu, p as u64]))?;
            timings.br_training += clock.elapsed().as_secs_f64();
            match extra {
                TrainExtra::None => {}
                TrainExtra::Curve(points) => curves.push(CurveRecord { player: p, points }),
                TrainExtra::Path(points) => paths.push(PathRecord { player: p, points }),
            }
            fresh.push(member);
        }
        for (p, m) in fresh.into_iter().enumerate() {
            observer.on_member(p, pops[p].len(), F::snapshot(&m))?;
            pops[p].push(m);
        }

        let clock = Instant::now();
        f.fill(&mut meta, &pops)?;
        timings.payoff_fill = clock.elapsed().as_secs_f64();

        let clock = Instant::now();
        let (row, col) = solve(&meta.matrix(), &config.mss)?;
        sigma = [normalized(row), normalized(col)];
        timings.meta_solve = clock.elapsed().as_secs_f64();

        let exploitability = if due(t, config.eval.exact_exploitability_every, last) {
            f.exploitability(&pops, &sigma)?
        } else {
            None
        };
        let approx_exploitability = match &config.eval.approx_exploitability {
            Some(spec) if due(t, config.eval.approx_every, last) => {
                f.approx(&pops, &sigma, spec, derive_seed(seed, &[purpose::APPROX, tu]))?
            }
            _ => None,
        };
        timings.total = started.elapsed().as_secs_f64();
        log::info!(
            "seed {seed} iteration {t}: exploitability {:?}, approx {:?}",
            exploitability,
            approx_exploitability
        );
        let record = IterationRecord {
            iteration: t,
            sigma: sigma.clone(),
            exploitability,
            approx_exploitability,
            pop_sizes: [pops[0].len(), pops[1].len()],
            timings,
            kl,
            curves,
            paths,
        };
        observer.on_iteration(&record, &meta.dump(Some((&sigma[0], &sigma[1]))))?;
        history.records.push(record);
    }
    Ok(history)
}
