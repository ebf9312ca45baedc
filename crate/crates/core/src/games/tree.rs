use std::collections::HashMap;

use super::{Action, Actor, Game, State, Turn, NUM_PLAYERS};
use crate::error::{Error, Result};

pub const NO_PARENT: usize = usize::MAX;

#[derive(Clone, Debug)]
pub enum NodeKind {
    Terminal([f64; 2]),
    /// Children with their outcome probabilities.
    Chance(Vec<(usize, f64)>),
    Decision {
        player: usize,
        infoset: usize,
        /// One child per legal action, in legal-action order.
        children: Vec<usize>,
    },
}

#[derive(Clone, Debug)]
pub struct Node {
    pub kind: NodeKind,
    pub parent: usize,
    /// Position of this node among its parent's children.
    pub slot: usize,
    /// Product of chance probabilities on the path from the root.
    pub chance_reach: f64,
}

#[derive(Clone, Debug)]
pub struct InfosetInfo {
    pub key: String,
    pub legal: Vec<Action>,
    /// A representative state, used to query policies.
    pub state: State,
}

/// Fully expanded game tree stored in preorder, so every parent precedes its
/// children.
#[derive(Clone, Debug)]
pub struct GameTree {
    nodes: Vec<Node>,
    infosets: [Vec<InfosetInfo>; NUM_PLAYERS],
    index: [HashMap<String, usize>; NUM_PLAYERS],
}

impl GameTree {
    pub fn build(game: &dyn Game, budget: usize) -> Result<Self> {
        let mut tree = GameTree {
            nodes: Vec::new(),
            infosets: [Vec::new(), Vec::new()],
            index: [HashMap::new(), HashMap::new()],
        };
        tree.expand(game, game.initial_state(), NO_PARENT, 0, 1.0, budget)?;
        Ok(tree)
    }

    fn expand(
        &mut self,
        game: &dyn Game,
        state: State,
        parent: usize,
        slot: usize,
        chance_reach: f64,
        budget: usize,
    ) -> Result<usize> {
        if self.nodes.len() >= budget {
            return Err(Error::NodeBudgetExceeded { budget });
        }
        let id = self.nodes.len();
        self.nodes.push(Node {
            kind: NodeKind::Terminal([0.0; 2]),
            parent,
            slot,
            chance_reach,
        });
        let kind = match game.turn(&state) {
            Turn::Terminal => NodeKind::Terminal(game.returns(&state)),
            Turn::Chance => {
                let outcomes = game.chance_outcomes(&state);
                let mut children = Vec::with_capacity(outcomes.len());
                for (i, (a, p)) in outcomes.into_iter().enumerate() {
                    let child = state.child(Actor::Chance, a);
                    let c = self.expand(game, child, id, i, chance_reach * p, budget)?;
                    children.push((c, p));
                }
                NodeKind::Chance(children)
            }
            Turn::Player(player) => {
                let legal = game.legal_actions(&state);
                let key = game.infoset_key(&state, player);
                let infoset = match self.index[player].get(&key) {
                    Some(&i) => i,
                    None => {
                        let i = self.infosets[player].len();
                        self.index[player].insert(key.clone(), i);
                        self.infosets[player].push(InfosetInfo {
                            key,
                            legal: legal.clone(),
                            state: state.clone(),
                        });
                        i
                    }
                };
                if self.infosets[player][infoset].legal != legal {
                    return Err(Error::Unsupported(format!(
                        "infoset {} has inconsistent legal actions",
                        self.infosets[player][infoset].key
                    )));
                }
                let mut children = Vec::with_capacity(legal.len());
                for (i, &a) in legal.iter().enumerate() {
                    let child = state.child(Actor::Player(player), a);
                    children.push(self.expand(game, child, id, i, chance_reach, budget)?);
                }
                NodeKind::Decision {
                    player,
                    infoset,
                    children,
                }
            }
        };
        self.nodes[id].kind = kind;
        Ok(id)
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn infosets(&self, player: usize) -> &[InfosetInfo] {
        &self.infosets[player]
    }

    pub fn infoset_index(&self, player: usize, key: &str) -> Option<usize> {
        self.index[player].get(key).copied()
    }

    pub fn num_leaves(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| matches!(n.kind, NodeKind::Terminal(_)))
            .count()
    }
}
