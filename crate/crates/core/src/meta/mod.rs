//! The restricted game over the current populations and its meta-strategy
//! solvers.

mod dynamics;
pub mod lp;

use std::fmt::Write as _;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::games::{sample_playthrough_returns, ExactEvaluator, Game, InfosetTable};
use crate::policies::{Policy, PolicyMixture};
use crate::rng::derive_seed;

pub use dynamics::{project_floored_simplex, solve_fp, solve_prd};
pub use lp::{matrix_exploitability, solve_nash_lp, NashSolution};

/// Meta-strategy solver choice.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum MssKind {
    Nash,
    Uniform,
    Prd {
        #[serde(default = "default_gamma")]
        gamma: f64,
        #[serde(default = "default_dt")]
        dt: f64,
        #[serde(default = "default_steps")]
        steps: usize,
    },
    FictitiousPlay {
        iters: usize,
    },
}

fn default_gamma() -> f64 {
    1e-3
}
fn default_dt() -> f64 {
    1e-3
}
fn default_steps() -> usize {
    100_000
}

impl MssKind {
    pub fn prd_default() -> Self {
        MssKind::Prd {
            gamma: default_gamma(),
            dt: default_dt(),
            steps: default_steps(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            MssKind::Prd { gamma, dt, steps } => {
                if !(gamma >= 0.0) || !gamma.is_finite() {
                    return Err(Error::param("gamma", "must be non-negative"));
                }
                if !(dt > 0.0) {
                    return Err(Error::param("dt", "must be positive"));
                }
                if steps == 0 {
                    return Err(Error::param("steps", "must be at least 1"));
                }
                Ok(())
            }
            MssKind::FictitiousPlay { iters: 0 } => Err(Error::param("iters", "must be at least 1")),
            _ => Ok(()),
        }
    }
}

/// Meta-strategies for both players.
pub fn solve(m: &[Vec<f64>], kind: &MssKind) -> Result<(Vec<f64>, Vec<f64>)> {
    let (rows, cols) = lp::check_matrix(m)?;
    kind.validate()?;
    Ok(match *kind {
        MssKind::Nash => {
            let s = solve_nash_lp(m)?;
            (s.row, s.col)
        }
        MssKind::Uniform => (vec![1.0 / rows as f64; rows], vec![1.0 / cols as f64; cols]),
        MssKind::Prd { gamma, dt, steps } => {
            let n = rows.max(cols) as f64;
            if gamma >= 1.0 / n {
                return Err(Error::param(
                    "gamma",
                    format!("floor {gamma} must be below 1/{n} for this meta-game"),
                ));
            }
            solve_prd(m, gamma, dt, steps)
        }
        MssKind::FictitiousPlay { iters } => solve_fp(m, iters),
    })
}

/// Row-player payoffs between the two populations, filled lazily.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct MetaGame {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
    filled: Vec<bool>,
}

impl MetaGame {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Enlarges the matrix, keeping existing entries.
    pub fn grow(&mut self, rows: usize, cols: usize) {
        if rows <= self.rows && cols <= self.cols {
            return;
        }
        let (r2, c2) = (rows.max(self.rows), cols.max(self.cols));
        let mut data = vec![0.0; r2 * c2];
        let mut filled = vec![false; r2 * c2];
        for r in 0..self.rows {
            for c in 0..self.cols {
                data[r * c2 + c] = self.data[r * self.cols + c];
                filled[r * c2 + c] = self.filled[r * self.cols + c];
            }
        }
        *self = MetaGame {
            rows: r2,
            cols: c2,
            data,
            filled,
        };
    }

    pub fn get(&self, r: usize, c: usize) -> Option<f64> {
        let i = r * self.cols + c;
        self.filled[i].then(|| self.data[i])
    }

    pub fn set(&mut self, r: usize, c: usize, v: f64) -> Result<()> {
        if !v.is_finite() {
            return Err(Error::NonFinite(format!("payoff entry ({r}, {c})")));
        }
        let i = r * self.cols + c;
        self.data[i] = v;
        self.filled[i] = true;
        Ok(())
    }

    pub fn missing(&self) -> Vec<(usize, usize)> {
        (0..self.rows)
            .flat_map(|r| (0..self.cols).map(move |c| (r, c)))
            .filter(|&(r, c)| !self.filled[r * self.cols + c])
            .collect()
    }

    pub fn is_complete(&self) -> bool {
        self.filled.iter().all(|&f| f)
    }

    /// Computes every missing entry, in parallel. Entries are independent, so
    /// the result matches any sequential fill order.
    pub fn fill_missing<F>(&mut self, f: F) -> Result<usize>
    where
        F: Fn(usize, usize) -> Result<f64> + Sync,
    {
        let missing = self.missing();
        let values: Vec<f64> = missing
            .par_iter()
            .map(|&(r, c)| f(r, c))
            .collect::<Result<_>>()?;
        for (&(r, c), v) in missing.iter().zip(values) {
            self.set(r, c, v)?;
        }
        Ok(missing.len())
    }

    /// Dense matrix; only valid once complete.
    pub fn matrix(&self) -> Vec<Vec<f64>> {
        (0..self.rows)
            .map(|r| self.data[r * self.cols..(r + 1) * self.cols].to_vec())
            .collect()
    }

    /// Text dump with policy ids on both axes and, when given, the
    /// meta-strategies.
    pub fn dump(&self, sigma: Option<(&[f64], &[f64])>) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# meta-game {} x {}", self.rows, self.cols);
        let header: Vec<String> = (0..self.cols).map(|c| format!("p1_{c}")).collect();
        let _ = writeln!(s, "row\\col {}", header.join(" "));
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|c| match self.get(r, c) {
                    Some(v) => format!("{v}"),
                    None => "?".to_string(),
                })
                .collect();
            let _ = writeln!(s, "p0_{r} {}", row.join(" "));
        }
        if let Some((x, y)) = sigma {
            let fmt = |v: &[f64]| v.iter().map(|p| format!("{p}")).collect::<Vec<_>>().join(" ");
            let _ = writeln!(s, "sigma_p0 {}", fmt(x));
            let _ = writeln!(s, "sigma_p1 {}", fmt(y));
        }
        s
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum PayoffMode {
    #[default]
    Exact,
    MonteCarlo {
        episodes: usize,
        seed: u64,
    },
}

/// Fills meta-game entries for a game, caching per-policy infoset tables in
/// exact mode.
pub struct PayoffEvaluator {
    game: Arc<dyn Game>,
    mode: PayoffMode,
    exact: Option<ExactEvaluator>,
    tables: [Vec<InfosetTable>; 2],
}

impl PayoffEvaluator {
    pub fn new(game: Arc<dyn Game>, mode: PayoffMode, budget: usize) -> Result<Self> {
        let exact = match mode {
            PayoffMode::Exact => Some(ExactEvaluator::new(game.clone(), budget)?),
            PayoffMode::MonteCarlo { .. } => None,
        };
        Ok(PayoffEvaluator {
            game,
            mode,
            exact,
            tables: [Vec::new(), Vec::new()],
        })
    }

    pub fn with_evaluator(evaluator: ExactEvaluator) -> Self {
        PayoffEvaluator {
            game: evaluator.game().clone(),
            mode: PayoffMode::Exact,
            exact: Some(evaluator),
            tables: [Vec::new(), Vec::new()],
        }
    }

    pub fn exact(&self) -> Option<&ExactEvaluator> {
        self.exact.as_ref()
    }

    pub fn tables(&self, player: usize) -> &[InfosetTable] {
        &self.tables[player]
    }

    /// Grows `meta` to the population sizes and fills every missing entry.
    pub fn extend(&mut self, meta: &mut MetaGame, pops: [&[Arc<Policy>]; 2]) -> Result<()> {
        if pops[0].len() < meta.rows() || pops[1].len() < meta.cols() {
            return Err(Error::param("pops", "populations are smaller than the meta-game"));
        }
        if let Some(ev) = &self.exact {
            for p in 0..2 {
                let start = self.tables[p].len();
                let new: Vec<InfosetTable> = pops[p][start..].par_iter().map(|pol| ev.table(pol, p)).collect();
                self.tables[p].extend(new);
            }
        }
        meta.grow(pops[0].len(), pops[1].len());
        match (&self.exact, &self.mode) {
            (Some(ev), _) => {
                let t = &self.tables;
                meta.fill_missing(|r, c| Ok(ev.pure_value(&t[0][r], &t[1][c])))
            }
            (None, PayoffMode::MonteCarlo { episodes, seed }) => {
                let game = self.game.as_ref();
                meta.fill_missing(|r, c| {
                    let a = PolicyMixture::single(pops[0][r].clone());
                    let b = PolicyMixture::single(pops[1][c].clone());
                    let s = derive_seed(*seed, &[r as u64, c as u64]);
                    Ok(sample_playthrough_returns(game, [&a, &b], *episodes, s)[0])
                })
            }
            (None, PayoffMode::Exact) => unreachable!("exact mode always has an evaluator"),
        }?;
        Ok(())
    }
}

/// Builds a one-off evaluator and fills `meta` for the given populations.
pub fn extend_payoff(
    meta: &mut MetaGame,
    game: Arc<dyn Game>,
    pops: [&[Arc<Policy>]; 2],
    mode: PayoffMode,
    budget: usize,
) -> Result<()> {
    PayoffEvaluator::new(game, mode, budget)?.extend(meta, pops)
}
