use std::sync::Arc;

use rand_distr::{Distribution, Exp1};

use super::approx::approximate_with;
use super::init::{fuse_policies, init_new_point, init_new_policy, scratch_point, InitContext, InitMethod};
use super::{KlProbe, KlRecord, PsroConfig, Snapshot};
use crate::error::{Error, Result};
use crate::games::ntmg::{ntmg_best_response, ntmg_exploitability, ntmg_payoff, NtmgConfig, Point};
use crate::games::{ExactEvaluator, Game, InfosetTable};
use crate::meta::{MetaGame, PayoffEvaluator, PayoffMode};
use crate::oracles::{dqn_oracle, ntmg_oracle, q_learning_oracle, OracleSpec, PsdShaping};
use crate::policies::{kl_to_ensemble, scratch_init, ArchSignature, InitKind, PointPolicy, Policy, PolicyMixture, TabularPolicy};
use crate::rng::{derive_seed, purpose, rng_from_seed};

pub(crate) enum TrainExtra {
    None,
    Curve(Vec<(usize, f64)>),
    Path(Vec<Point>),
}

/// A policy representation together with the game-specific parts of the loop.
pub(crate) trait Family {
    type Member;

    fn initial(&mut self, player: usize, method: &InitMethod, seed: u64) -> Result<Self::Member>;

    fn init(
        &mut self,
        pops: &[Vec<Self::Member>; 2],
        sigma: &[Vec<f64>; 2],
        player: usize,
        t: usize,
        method: &InitMethod,
        seed: u64,
    ) -> Result<Self::Member>;

    fn kl_probe(
        &mut self,
        pops: &[Vec<Self::Member>; 2],
        sigma: &[Vec<f64>; 2],
        player: usize,
        candidate: &Self::Member,
        probe: &KlProbe,
        seed: u64,
    ) -> Result<Vec<KlRecord>>;

    fn train(
        &mut self,
        init: Self::Member,
        pops: &[Vec<Self::Member>; 2],
        sigma: &[Vec<f64>; 2],
        player: usize,
        seed: u64,
    ) -> Result<(Self::Member, TrainExtra)>;

    fn fill(&mut self, meta: &mut MetaGame, pops: &[Vec<Self::Member>; 2]) -> Result<()>;

    fn exploitability(&mut self, pops: &[Vec<Self::Member>; 2], sigma: &[Vec<f64>; 2]) -> Result<Option<f64>>;

    fn approx(
        &mut self,
        pops: &[Vec<Self::Member>; 2],
        sigma: &[Vec<f64>; 2],
        spec: &OracleSpec,
        seed: u64,
    ) -> Result<Option<f64>>;

    fn snapshot(member: &Self::Member) -> Snapshot<'_>;
}

fn weighted<'a, T>(members: &'a [T], weights: &[f64]) -> Vec<(&'a T, f64)> {
    members
        .iter()
        .zip(weights)
        .filter(|(_, &w)| w > 0.0)
        .map(|(m, &w)| (m, w))
        .collect()
}

/// Extensive-form games with tabular or parametric policies.
pub(crate) struct Extensive {
    game: Arc<dyn Game>,
    oracle: OracleSpec,
    signature: Option<ArchSignature>,
    exact: Option<ExactEvaluator>,
    tables: [Vec<InfosetTable>; 2],
    sampled: Option<PayoffEvaluator>,
    psd: Option<(f64, usize)>,
}

impl Extensive {
    pub(crate) fn new(cfg: &PsroConfig, seed: u64) -> Result<Self> {
        let game = cfg.game.build()?;
        let signature = match &cfg.oracle {
            OracleSpec::Dqn(d) => Some(ArchSignature::for_game(game.as_ref(), &d.hidden_layers)?),
            OracleSpec::Gradient { .. } => {
                return Err(Error::Unsupported(format!("gradient oracle on {}", game.name())))
            }
            _ => None,
        };
        let needs_exact = matches!(cfg.oracle, OracleSpec::Exact) || cfg.eval.payoff == PayoffMode::Exact;
        let wants_exact = needs_exact || cfg.eval.exact_exploitability_every > 0 || cfg.eval.approx_exploitability.is_some();
        let exact = if wants_exact {
            match ExactEvaluator::new(game.clone(), cfg.eval.node_budget) {
                Ok(ev) => Some(ev),
                Err(e @ Error::NodeBudgetExceeded { .. }) if !needs_exact => {
                    log::warn!("{e}; exact evaluation disabled");
                    None
                }
                Err(e) => return Err(e),
            }
        } else {
            None
        };
        let sampled = match cfg.eval.payoff {
            PayoffMode::Exact => None,
            PayoffMode::MonteCarlo { episodes, seed: s } => {
                let mode = PayoffMode::MonteCarlo {
                    episodes,
                    seed: derive_seed(seed, &[purpose::PAYOFF, s]),
                };
                Some(PayoffEvaluator::new(game.clone(), mode, cfg.eval.node_budget)?)
            }
        };
        if cfg.psd.enabled && !matches!(cfg.oracle, OracleSpec::Dqn(_)) {
            return Err(Error::Unsupported("diversity shaping needs the dqn oracle".into()));
        }
        Ok(Extensive {
            game,
            oracle: cfg.oracle.clone(),
            signature,
            exact,
            tables: [Vec::new(), Vec::new()],
            sampled,
            psd: cfg.psd.enabled.then_some((cfg.psd.lambda, cfg.psd.hull_samples)),
        })
    }

    fn ctx(&self, player: usize) -> InitContext<'_> {
        InitContext {
            game: self.game.as_ref(),
            player,
            signature: self.signature.as_ref(),
        }
    }

    fn scratch(&self, kind: InitKind, seed: u64) -> Result<Policy> {
        Ok(match &self.signature {
            Some(sig) => Policy::Parametric(scratch_init(kind, sig, seed)?),
            None => Policy::Tabular(TabularPolicy::new()),
        })
    }

    fn initial_kind(&self, method: &InitMethod) -> InitKind {
        match (method, &self.oracle) {
            (InitMethod::Scratch { kind }, _) => *kind,
            (_, OracleSpec::Dqn(d)) => d.init,
            _ => InitKind::Normal,
        }
    }

    fn sync_tables(&mut self, pops: &[Vec<Arc<Policy>>; 2]) {
        if let Some(ev) = &self.exact {
            for p in 0..2 {
                let start = self.tables[p].len();
                for pol in &pops[p][start..] {
                    self.tables[p].push(ev.table(pol, p));
                }
            }
        }
    }

    fn table_mixture<'a>(&'a self, player: usize, sigma: &[f64]) -> Vec<(&'a InfosetTable, f64)> {
        weighted(&self.tables[player], sigma)
    }

    /// Random convex combinations of the learner's own population.
    fn hull(&self, pop: &[Arc<Policy>], samples: usize, seed: u64) -> Result<Vec<PolicyMixture>> {
        let mut rng = rng_from_seed(seed);
        (0..samples)
            .map(|_| {
                let raw: Vec<f64> = (0..pop.len()).map(|_| Exp1.sample(&mut rng)).collect();
                let total: f64 = raw.iter().sum();
                PolicyMixture::new(pop.to_vec(), raw.iter().map(|x| x / total).collect())
            })
            .collect()
    }
}

fn mixture(pop: &[Arc<Policy>], sigma: &[f64]) -> Result<PolicyMixture> {
    PolicyMixture::new(pop.to_vec(), sigma.to_vec())
}

impl Family for Extensive {
    type Member = Arc<Policy>;

    fn initial(&mut self, _player: usize, method: &InitMethod, seed: u64) -> Result<Arc<Policy>> {
        Ok(Arc::new(self.scratch(self.initial_kind(method), seed)?))
    }

    fn init(
        &mut self,
        pops: &[Vec<Arc<Policy>>; 2],
        sigma: &[Vec<f64>; 2],
        player: usize,
        t: usize,
        method: &InitMethod,
        seed: u64,
    ) -> Result<Arc<Policy>> {
        init_new_policy(&pops[player], &sigma[player], t, method, &self.ctx(player), seed).map(Arc::new)
    }

    fn kl_probe(
        &mut self,
        pops: &[Vec<Arc<Policy>>; 2],
        sigma: &[Vec<f64>; 2],
        player: usize,
        candidate: &Arc<Policy>,
        probe: &KlProbe,
        seed: u64,
    ) -> Result<Vec<KlRecord>> {
        let pop = &pops[player];
        let ens = mixture(pop, &sigma[player])?;
        let kind = self.initial_kind(&InitMethod::InheritLatest);
        let arms: Vec<(&str, Arc<Policy>)> = vec![
            ("init", candidate.clone()),
            ("fusion", Arc::new(fuse_policies(pop, &sigma[player])?)),
            ("inherit_latest", pop[pop.len() - 1].clone()),
            ("scratch", Arc::new(self.scratch(kind, derive_seed(seed, &[1]))?)),
        ];
        Ok(arms
            .into_iter()
            .map(|(arm, pol)| KlRecord {
                player,
                arm: arm.to_string(),
                kl: kl_to_ensemble(&pol, &ens, self.game.as_ref(), player, probe.num_states, seed, probe.direction),
            })
            .collect())
    }

    fn train(
        &mut self,
        init: Arc<Policy>,
        pops: &[Vec<Arc<Policy>>; 2],
        sigma: &[Vec<f64>; 2],
        player: usize,
        seed: u64,
    ) -> Result<(Arc<Policy>, TrainExtra)> {
        let opp = 1 - player;
        let game = self.game.as_ref();
        match &self.oracle {
            OracleSpec::Exact => {
                let ev = self.exact.as_ref().expect("exact oracle implies an evaluator");
                let tables = self.table_mixture(opp, &sigma[opp]);
                let (br, _) = ev.best_response(&tables, player)?;
                Ok((Arc::new(Policy::Tabular(br)), TrainExtra::None))
            }
            OracleSpec::QLearning(cfg) => {
                let start = init
                    .as_tabular()
                    .ok_or_else(|| Error::SignatureMismatch("q-learning needs a tabular init".into()))?;
                let opponent = mixture(&pops[opp], &sigma[opp])?;
                let br = q_learning_oracle(game, Some(start), &opponent, player, cfg, seed)?;
                Ok((Arc::new(Policy::Tabular(br)), TrainExtra::None))
            }
            OracleSpec::Dqn(cfg) => {
                let start = init
                    .as_parametric()
                    .ok_or_else(|| Error::SignatureMismatch("dqn needs a parametric init".into()))?;
                let opponent = mixture(&pops[opp], &sigma[opp])?;
                let hull = match self.psd {
                    Some((_, j)) => self.hull(&pops[player], j, derive_seed(seed, &[purpose::HULL]))?,
                    None => Vec::new(),
                };
                let shaping = self.psd.map(|(lambda, _)| PsdShaping { hull: &hull, lambda });
                let out = dqn_oracle(game, start, &opponent, player, cfg, seed, shaping)?;
                Ok((Arc::new(Policy::Parametric(out.policy)), TrainExtra::Curve(out.curve)))
            }
            OracleSpec::Gradient { .. } => unreachable!("rejected at construction"),
        }
    }

    fn fill(&mut self, meta: &mut MetaGame, pops: &[Vec<Arc<Policy>>; 2]) -> Result<()> {
        self.sync_tables(pops);
        if let Some(sampled) = self.sampled.as_mut() {
            return sampled.extend(meta, [&pops[0], &pops[1]]);
        }
        let ev = self.exact.as_ref().expect("exact payoffs imply an evaluator");
        let t = &self.tables;
        meta.grow(pops[0].len(), pops[1].len());
        meta.fill_missing(|r, c| Ok(ev.pure_value(&t[0][r], &t[1][c])))?;
        Ok(())
    }

    fn exploitability(&mut self, _pops: &[Vec<Arc<Policy>>; 2], sigma: &[Vec<f64>; 2]) -> Result<Option<f64>> {
        let Some(ev) = &self.exact else { return Ok(None) };
        let a = self.table_mixture(0, &sigma[0]);
        let b = self.table_mixture(1, &sigma[1]);
        ev.exploitability([&a, &b]).map(Some)
    }

    fn approx(
        &mut self,
        pops: &[Vec<Arc<Policy>>; 2],
        sigma: &[Vec<f64>; 2],
        spec: &OracleSpec,
        seed: u64,
    ) -> Result<Option<f64>> {
        let a = mixture(&pops[0], &sigma[0])?;
        let b = mixture(&pops[1], &sigma[1])?;
        approximate_with(self.game.as_ref(), self.exact.as_ref(), [&a, &b], spec, seed).map(Some)
    }

    fn snapshot(member: &Arc<Policy>) -> Snapshot<'_> {
        Snapshot::Policy(member)
    }
}

/// The continuous mixture game over points in the plane.
pub(crate) struct Mixture {
    cfg: NtmgConfig,
    oracle: OracleSpec,
}

impl Mixture {
    pub(crate) fn new(cfg: &PsroConfig) -> Result<Self> {
        let ntmg = NtmgConfig::from_params(&cfg.game.params)?;
        match cfg.oracle {
            OracleSpec::Gradient { .. } | OracleSpec::Exact => {}
            ref other => return Err(Error::Unsupported(format!("{} oracle on the mixture game", other.name()))),
        }
        if cfg.psd.enabled {
            return Err(Error::Unsupported("diversity shaping on the mixture game".into()));
        }
        Ok(Mixture {
            cfg: ntmg,
            oracle: cfg.oracle.clone(),
        })
    }

    fn points(pop: &[PointPolicy], sigma: &[f64]) -> Vec<(Point, f64)> {
        weighted(pop, sigma).into_iter().map(|(p, w)| (p.x, w)).collect()
    }
}

impl Family for Mixture {
    type Member = PointPolicy;

    fn initial(&mut self, _player: usize, _method: &InitMethod, seed: u64) -> Result<PointPolicy> {
        Ok(scratch_point(&self.cfg, seed))
    }

    fn init(
        &mut self,
        pops: &[Vec<PointPolicy>; 2],
        sigma: &[Vec<f64>; 2],
        player: usize,
        t: usize,
        method: &InitMethod,
        seed: u64,
    ) -> Result<PointPolicy> {
        init_new_point(&pops[player], &sigma[player], t, method, &self.cfg, seed)
    }

    fn kl_probe(
        &mut self,
        _pops: &[Vec<PointPolicy>; 2],
        _sigma: &[Vec<f64>; 2],
        _player: usize,
        _candidate: &PointPolicy,
        _probe: &KlProbe,
        _seed: u64,
    ) -> Result<Vec<KlRecord>> {
        Ok(Vec::new())
    }

    fn train(
        &mut self,
        init: PointPolicy,
        pops: &[Vec<PointPolicy>; 2],
        sigma: &[Vec<f64>; 2],
        player: usize,
        _seed: u64,
    ) -> Result<(PointPolicy, TrainExtra)> {
        let opp = 1 - player;
        match self.oracle {
            OracleSpec::Gradient { steps, lr } => {
                let opponents: Vec<(PointPolicy, f64)> =
                    weighted(&pops[opp], &sigma[opp]).into_iter().map(|(p, w)| (*p, w)).collect();
                let (p, path) = ntmg_oracle(init, &opponents, steps, lr, &self.cfg);
                Ok((p, TrainExtra::Path(path)))
            }
            _ => {
                let (x, _) = ntmg_best_response(&Self::points(&pops[opp], &sigma[opp]), &self.cfg);
                Ok((PointPolicy::new(x), TrainExtra::Path(vec![init.x, x])))
            }
        }
    }

    fn fill(&mut self, meta: &mut MetaGame, pops: &[Vec<PointPolicy>; 2]) -> Result<()> {
        meta.grow(pops[0].len(), pops[1].len());
        let cfg = &self.cfg;
        meta.fill_missing(|r, c| Ok(ntmg_payoff(pops[0][r].x, pops[1][c].x, cfg)))?;
        Ok(())
    }

    fn exploitability(&mut self, pops: &[Vec<PointPolicy>; 2], sigma: &[Vec<f64>; 2]) -> Result<Option<f64>> {
        let a = Self::points(&pops[0], &sigma[0]);
        let b = Self::points(&pops[1], &sigma[1]);
        Ok(Some(ntmg_exploitability([&a, &b], &self.cfg)))
    }

    fn approx(
        &mut self,
        _pops: &[Vec<PointPolicy>; 2],
        _sigma: &[Vec<f64>; 2],
        _spec: &OracleSpec,
        _seed: u64,
    ) -> Result<Option<f64>> {
        Ok(None)
    }

    fn snapshot(member: &PointPolicy) -> Snapshot<'_> {
        Snapshot::Point(member)
    }
}
