//! Exact expected values, best responses and exploitability over a fully
//! expanded game tree, plus Monte Carlo playthroughs for large games.

use std::sync::Arc;

use super::tree::{GameTree, NodeKind, NO_PARENT};
use super::{Actor, Game, Turn};
use crate::error::{Error, Result};
use crate::policies::{Policy, PolicyMixture, TabularPolicy};
use crate::rng::{rng_from_seed, sample_index};

pub const DEFAULT_NODE_BUDGET: usize = 10_000_000;

/// A policy's action distribution at every infoset of one player, indexed by
/// the tree's infoset ids.
#[derive(Clone, Debug, PartialEq)]
pub struct InfosetTable {
    pub player: usize,
    pub probs: Vec<Vec<f64>>,
}

/// A weighted set of infoset tables standing for one player's mixture.
pub type TableMixture<'a> = [(&'a InfosetTable, f64)];

#[derive(Clone, Debug)]
pub struct ExactEvaluator {
    game: Arc<dyn Game>,
    tree: GameTree,
}

impl ExactEvaluator {
    pub fn new(game: Arc<dyn Game>, budget: usize) -> Result<Self> {
        let tree = GameTree::build(game.as_ref(), budget)?;
        Ok(ExactEvaluator { game, tree })
    }

    pub fn game(&self) -> &Arc<dyn Game> {
        &self.game
    }

    pub fn tree(&self) -> &GameTree {
        &self.tree
    }

    /// Tabulates `policy`'s executed distribution for `player`.
    pub fn table(&self, policy: &Policy, player: usize) -> InfosetTable {
        let probs = self
            .tree
            .infosets(player)
            .iter()
            .map(|info| policy.action_probs(self.game.as_ref(), &info.state, player))
            .collect();
        InfosetTable { player, probs }
    }

    pub fn mixture_tables(&self, mixture: &PolicyMixture, player: usize) -> Vec<(InfosetTable, f64)> {
        mixture
            .support()
            .map(|(p, w)| (self.table(p, player), w))
            .collect()
    }

    /// Probability that `player`'s mixture plays to each node.
    pub fn reach(&self, player: usize, mixture: &TableMixture) -> Vec<f64> {
        let nodes = self.tree.nodes();
        let mut total = vec![0.0; nodes.len()];
        let mut member = vec![0.0; nodes.len()];
        for (table, w) in mixture {
            for (i, node) in nodes.iter().enumerate() {
                member[i] = if node.parent == NO_PARENT {
                    1.0
                } else {
                    let parent = &nodes[node.parent];
                    match &parent.kind {
                        NodeKind::Decision { player: p, infoset, .. } if *p == player => {
                            member[node.parent] * table.probs[*infoset][node.slot]
                        }
                        _ => member[node.parent],
                    }
                };
            }
            for (t, m) in total.iter_mut().zip(&member) {
                *t += w * m;
            }
        }
        total
    }

    /// Expected utilities `(v₀, v₁)` of two table mixtures.
    pub fn value(&self, profile: [&TableMixture; 2]) -> [f64; 2] {
        let r0 = self.reach(0, profile[0]);
        let r1 = self.reach(1, profile[1]);
        let mut v = 0.0;
        for (i, node) in self.tree.nodes().iter().enumerate() {
            if let NodeKind::Terminal(u) = node.kind {
                v += node.chance_reach * r0[i] * r1[i] * u[0];
            }
        }
        [v, -v]
    }

    /// Value of a pure profile.
    pub fn pure_value(&self, row: &InfosetTable, col: &InfosetTable) -> f64 {
        self.value([&[(row, 1.0)], &[(col, 1.0)]])[0]
    }

    /// Deterministic best response of `responder` to the opponent mixture,
    /// with ties broken toward the lowest legal action.
    pub fn best_response(&self, opponent: &TableMixture, responder: usize) -> Result<(TabularPolicy, f64)> {
        let opp = 1 - responder;
        let opp_reach = self.reach(opp, opponent);
        let mut solver = BrSolver {
            tree: &self.tree,
            responder,
            opp_reach: &opp_reach,
            node_value: vec![None; self.tree.len()],
            choice: vec![Choice::Open; self.tree.infosets(responder).len()],
            members: members_by_infoset(&self.tree, responder),
        };
        let value = solver.value(0)?;
        let mut policy = TabularPolicy::new();
        for (i, info) in self.tree.infosets(responder).iter().enumerate() {
            // Infosets never reached by the opponent still get a choice so the
            // policy is deterministic everywhere.
            let a = match solver.choice[i] {
                Choice::Done(a) => a,
                _ => solver.decide(i)?,
            };
            policy.set_pure(info.key.clone(), info.legal.len(), a);
        }
        Ok((policy, value))
    }

    /// Σᵢ (BRᵢ value − vᵢ) for two table mixtures.
    pub fn exploitability(&self, profile: [&TableMixture; 2]) -> Result<f64> {
        let v = self.value(profile);
        let (_, br0) = self.best_response(profile[1], 0)?;
        let (_, br1) = self.best_response(profile[0], 1)?;
        Ok((br0 - v[0]) + (br1 - v[1]))
    }

    pub fn policy_value(&self, profile: [&PolicyMixture; 2]) -> [f64; 2] {
        let t0 = self.mixture_tables(profile[0], 0);
        let t1 = self.mixture_tables(profile[1], 1);
        self.value([&as_refs(&t0), &as_refs(&t1)])
    }

    pub fn policy_best_response(&self, opponent: &PolicyMixture, responder: usize) -> Result<(TabularPolicy, f64)> {
        let t = self.mixture_tables(opponent, 1 - responder);
        self.best_response(&as_refs(&t), responder)
    }

    pub fn policy_exploitability(&self, profile: [&PolicyMixture; 2]) -> Result<f64> {
        let t0 = self.mixture_tables(profile[0], 0);
        let t1 = self.mixture_tables(profile[1], 1);
        self.exploitability([&as_refs(&t0), &as_refs(&t1)])
    }
}

pub fn as_refs(tables: &[(InfosetTable, f64)]) -> Vec<(&InfosetTable, f64)> {
    tables.iter().map(|(t, w)| (t, *w)).collect()
}

fn members_by_infoset(tree: &GameTree, player: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); tree.infosets(player).len()];
    for (i, node) in tree.nodes().iter().enumerate() {
        if let NodeKind::Decision { player: p, infoset, .. } = node.kind {
            if p == player {
                out[infoset].push(i);
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Choice {
    Open,
    InProgress,
    Done(usize),
}

/// Bottom-up best response: node values are chance × opponent reach weighted
/// utilities, and each responder infoset picks the action maximizing the sum
/// over its nodes.
struct BrSolver<'a> {
    tree: &'a GameTree,
    responder: usize,
    opp_reach: &'a [f64],
    node_value: Vec<Option<f64>>,
    choice: Vec<Choice>,
    members: Vec<Vec<usize>>,
}

impl BrSolver<'_> {
    fn value(&mut self, node: usize) -> Result<f64> {
        if let Some(v) = self.node_value[node] {
            return Ok(v);
        }
        let n = &self.tree.nodes()[node];
        let v = match &n.kind {
            NodeKind::Terminal(u) => n.chance_reach * self.opp_reach[node] * u[self.responder],
            NodeKind::Chance(children) => {
                let mut s = 0.0;
                for &(c, _) in children {
                    s += self.value(c)?;
                }
                s
            }
            NodeKind::Decision { player, infoset, children } => {
                if *player == self.responder {
                    let a = match self.choice[*infoset] {
                        Choice::Done(a) => a,
                        _ => self.decide(*infoset)?,
                    };
                    self.value(children[a])?
                } else {
                    let mut s = 0.0;
                    for &c in children {
                        s += self.value(c)?;
                    }
                    s
                }
            }
        };
        self.node_value[node] = Some(v);
        Ok(v)
    }

    fn decide(&mut self, infoset: usize) -> Result<usize> {
        if self.choice[infoset] == Choice::InProgress {
            return Err(Error::Unsupported(
                "best response hit a cyclic infoset dependency".into(),
            ));
        }
        self.choice[infoset] = Choice::InProgress;
        let nodes = self.members[infoset].clone();
        let mut totals: Vec<f64> = Vec::new();
        for h in nodes {
            let children = match &self.tree.nodes()[h].kind {
                NodeKind::Decision { children, .. } => children.clone(),
                _ => unreachable!("infoset member is a decision node"),
            };
            totals.resize(children.len(), 0.0);
            for (k, c) in children.into_iter().enumerate() {
                totals[k] += self.value(c)?;
            }
        }
        let mut best = 0;
        for k in 1..totals.len() {
            if totals[k] > totals[best] {
                best = k;
            }
        }
        self.choice[infoset] = Choice::Done(best);
        Ok(best)
    }
}

/// `(v₀, v₁)` of two policy mixtures by exact traversal.
pub fn expected_value(game: Arc<dyn Game>, profile: [&PolicyMixture; 2], budget: usize) -> Result<[f64; 2]> {
    Ok(ExactEvaluator::new(game, budget)?.policy_value(profile))
}

pub fn best_response(
    game: Arc<dyn Game>,
    opponent: &PolicyMixture,
    responder: usize,
    budget: usize,
) -> Result<(TabularPolicy, f64)> {
    ExactEvaluator::new(game, budget)?.policy_best_response(opponent, responder)
}

pub fn exploitability(game: Arc<dyn Game>, profile: [&PolicyMixture; 2], budget: usize) -> Result<f64> {
    ExactEvaluator::new(game, budget)?.policy_exploitability(profile)
}

/// Mean returns over `episodes` sampled playthroughs; each episode draws one
/// member per player from the mixture weights.
pub fn sample_playthrough_returns(
    game: &dyn Game,
    profile: [&PolicyMixture; 2],
    episodes: usize,
    seed: u64,
) -> [f64; 2] {
    if episodes == 0 {
        return [0.0; 2];
    }
    let mut rng = rng_from_seed(seed);
    let mut total = 0.0;
    for _ in 0..episodes {
        let members: [&Policy; 2] = std::array::from_fn(|p| {
            let m = profile[p];
            m.members()[sample_index(&mut rng, m.weights())].as_ref()
        });
        let mut state = game.initial_state();
        loop {
            match game.turn(&state) {
                Turn::Terminal => {
                    total += game.returns(&state)[0];
                    break;
                }
                Turn::Chance => {
                    let outcomes = game.chance_outcomes(&state);
                    let probs: Vec<f64> = outcomes.iter().map(|o| o.1).collect();
                    state = state.child(Actor::Chance, outcomes[sample_index(&mut rng, &probs)].0);
                }
                Turn::Player(p) => {
                    let legal = game.legal_actions(&state);
                    let probs = members[p].action_probs(game, &state, p);
                    let k = sample_index(&mut rng, &probs);
                    state = state.child(Actor::Player(p), legal[k]);
                }
            }
        }
    }
    let v = total / episodes as f64;
    [v, -v]
}
