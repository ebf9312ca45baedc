//! Declarative runs, sweeps, output files and plots.

mod output;
pub mod plot;

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::games::ntmg::{ntmg_exploitability, ntmg_payoff, NtmgConfig};
use crate::games::ExactEvaluator;
use crate::meta::{matrix_exploitability, solve, MssKind};
use crate::policies::InitKind;
use crate::psro::{run_psro_observed, InitMethod, PsroConfig, RunHistory, TopK};

pub use output::{load_member, read_results, Member, OutputSink, ResultsRow, RESULTS_COLUMNS, RESULTS_VERSION};

/// Parses a run config, naming the offending field on schema errors.
pub fn parse_config(text: &str, origin: &str) -> Result<PsroConfig> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let cfg: PsroConfig = serde_path_to_error::deserialize(de).map_err(|e| Error::Config {
        path: if e.path().to_string() == "." {
            origin.to_string()
        } else {
            e.path().to_string()
        },
        reason: e.inner().to_string(),
    })?;
    cfg.validate().map_err(|e| match e {
        Error::InvalidParam { name, reason } => Error::Config { path: name, reason },
        other => other,
    })?;
    Ok(cfg)
}

pub fn load_config(path: &Path) -> Result<PsroConfig> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config(&text, &path.display().to_string())
}

/// Output directory of one seed under `base`.
pub fn seed_dir(base: &Path, seed: u64) -> PathBuf {
    base.join(format!("seed_{seed}"))
}

/// Runs every seed of `config`, writing each under `base/seed_{s}`.
pub fn run_config(config: &PsroConfig, base: &Path) -> Result<Vec<RunHistory>> {
    config.validate()?;
    config
        .seeds
        .iter()
        .map(|&seed| {
            let dir = seed_dir(base, seed);
            let mut sink = OutputSink::create(&dir, config)?;
            run_psro_observed(config, seed, &mut sink)
        })
        .collect()
}

/// Loads a config and runs it. Outputs go to the config's `output_dir`, or
/// `runs/<config stem>` when unset.
pub fn run_from_config(path: &Path) -> Result<Vec<RunHistory>> {
    let config = load_config(path)?;
    let base = config.output_dir.clone().unwrap_or_else(|| {
        let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        PathBuf::from("runs").join(stem)
    });
    run_config(&config, &base)
}

/// Config fields a sweep can vary.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepParam {
    FusionStartC,
    TopK,
    Mss,
    Init,
}

impl FromStr for SweepParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fusion_start_c" | "c" => Ok(SweepParam::FusionStartC),
            "top_k" => Ok(SweepParam::TopK),
            "mss" => Ok(SweepParam::Mss),
            "init" => Ok(SweepParam::Init),
            other => Err(Error::param(
                "param",
                format!("unknown sweep parameter {other:?}; expected fusion_start_c, top_k, mss or init"),
            )),
        }
    }
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepParam::FusionStartC => "fusion_start_c",
            SweepParam::TopK => "top_k",
            SweepParam::Mss => "mss",
            SweepParam::Init => "init",
        })
    }
}

/// Meta-strategy solver by short name: `nash`, `prd`, `fp` or `uniform`.
/// Anything else is read as the JSON form.
pub fn parse_mss(s: &str) -> Result<MssKind> {
    match s {
        "nash" => Ok(MssKind::Nash),
        "prd" => Ok(MssKind::prd_default()),
        "fp" => Ok(MssKind::FictitiousPlay { iters: 10_000 }),
        "uniform" => Ok(MssKind::Uniform),
        other => serde_json::from_str(other).map_err(|e| Error::param("mss", format!("{other:?}: {e}"))),
    }
}

/// Initialization by short name (`fusion`, `inherit_latest`,
/// `sample_from_ne`, `inherit_best`, `scratch_normal`, `scratch_orthogonal`,
/// `scratch_kaiming`) or its JSON form.
pub fn parse_init(s: &str) -> Result<InitMethod> {
    Ok(match s {
        "fusion" => InitMethod::fusion(),
        "inherit_latest" => InitMethod::InheritLatest,
        "sample_from_ne" => InitMethod::SampleFromNe,
        "inherit_best" => InitMethod::InheritBest,
        "scratch_normal" => InitMethod::Scratch { kind: InitKind::Normal },
        "scratch_orthogonal" => InitMethod::Scratch { kind: InitKind::Orthogonal },
        "scratch_kaiming" => InitMethod::Scratch { kind: InitKind::Kaiming },
        other => serde_json::from_str(other).map_err(|e| Error::param("init", format!("{other:?}: {e}")))?,
    })
}

/// Copy of `config` with `param` set to `value`.
pub fn apply_override(config: &PsroConfig, param: SweepParam, value: &str) -> Result<PsroConfig> {
    let mut cfg = config.clone();
    let mut fusion_seen = false;
    match param {
        SweepParam::FusionStartC => {
            let v: usize = value
                .parse()
                .map_err(|_| Error::param("fusion_start_c", format!("{value:?} is not a non-negative integer")))?;
            cfg.init.for_each_mut(|m| {
                if let InitMethod::NashFusion { c, .. } = m {
                    *c = v;
                    fusion_seen = true;
                }
            });
        }
        SweepParam::TopK => {
            let v: TopK = serde_json::from_str(value)
                .or_else(|_| serde_json::from_value(serde_json::Value::String(value.to_string())))
                .map_err(|e| Error::param("top_k", format!("{value:?}: {e}")))?;
            cfg.init.for_each_mut(|m| {
                if let InitMethod::NashFusion { top_k, .. } = m {
                    *top_k = v;
                    fusion_seen = true;
                }
            });
        }
        SweepParam::Mss => {
            cfg.mss = parse_mss(value)?;
            fusion_seen = true;
        }
        SweepParam::Init => {
            cfg.init.set(parse_init(value)?);
            fusion_seen = true;
        }
    }
    if !fusion_seen {
        return Err(Error::param(param.to_string(), "the config does not use nash_fusion"));
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Final-iteration exploitability statistics of one sweep arm.
#[derive(Clone, Debug, PartialEq)]
pub struct SummaryRow {
    pub value: String,
    /// Per seed, in config order.
    pub finals: Vec<f64>,
    pub mean: f64,
    pub min: f64,
    pub max: f64,
}

impl SummaryRow {
    fn new(value: String, finals: Vec<f64>) -> Self {
        let mean = finals.iter().sum::<f64>() / finals.len() as f64;
        let min = finals.iter().copied().fold(f64::INFINITY, f64::min);
        let max = finals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        SummaryRow {
            value,
            finals,
            mean,
            min,
            max,
        }
    }
}

pub const SUMMARY_HEADER: &str = "value,mean,min,max";

pub fn summary_csv(rows: &[SummaryRow]) -> String {
    let mut s = format!("{SUMMARY_HEADER}\n");
    for r in rows {
        s.push_str(&format!("{},{},{},{}\n", r.value, r.mean, r.min, r.max));
    }
    s
}

fn final_metric(h: &RunHistory) -> Result<f64> {
    h.final_metric().ok_or_else(|| {
        Error::param(
            "eval",
            "sweeps need exact or approximate exploitability at the final iteration",
        )
    })
}

/// One run set per value, arms in parallel. Each arm writes under
/// `base/{param}_{value}`; the summary goes to `base/summary.csv`.
pub fn sweep(config: &PsroConfig, param: SweepParam, values: &[String], base: &Path) -> Result<Vec<SummaryRow>> {
    if values.is_empty() {
        return Err(Error::param("values", "must list at least one value"));
    }
    let arms: Vec<PsroConfig> = values
        .iter()
        .map(|v| apply_override(config, param, v))
        .collect::<Result<_>>()?;
    let rows: Vec<SummaryRow> = arms
        .par_iter()
        .zip(values)
        .map(|(cfg, v)| {
            let histories = run_config(cfg, &base.join(format!("{param}_{v}")))?;
            let finals = histories.iter().map(final_metric).collect::<Result<Vec<f64>>>()?;
            Ok(SummaryRow::new(v.clone(), finals))
        })
        .collect::<Result<_>>()?;
    fs::create_dir_all(base).map_err(|e| Error::io(base, e))?;
    let path = base.join("summary.csv");
    fs::write(&path, summary_csv(&rows)).map_err(|e| Error::io(&path, e))?;
    Ok(rows)
}

/// Meta-game, equilibrium and exploitability rebuilt from a run directory's
/// checkpoints.
#[derive(Clone, Debug, PartialEq)]
pub struct EvalReport {
    pub pop_sizes: [usize; 2],
    pub sigma: [Vec<f64>; 2],
    /// Exploitability of σ in the restricted game.
    pub meta_exploitability: f64,
    /// Exploitability of σ in the full game, when it can be computed.
    pub exploitability: Option<f64>,
}

fn checkpoint_index(name: &str, player: usize) -> Option<usize> {
    name.strip_prefix(&format!("p{player}_"))?.strip_suffix(".json")?.parse().ok()
}

/// Loads `dir/config.json` and `dir/checkpoints`, recomputes payoffs with
/// the config's solver, and reports exploitability.
pub fn evaluate_dir(dir: &Path) -> Result<EvalReport> {
    let config = load_config(&dir.join("config.json"))?;
    let ck = dir.join("checkpoints");
    let mut files: [Vec<(usize, PathBuf)>; 2] = [Vec::new(), Vec::new()];
    for entry in fs::read_dir(&ck).map_err(|e| Error::io(&ck, e))? {
        let path = entry.map_err(|e| Error::io(&ck, e))?.path();
        let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
        for (p, list) in files.iter_mut().enumerate() {
            if let Some(i) = checkpoint_index(&name, p) {
                list.push((i, path.clone()));
            }
        }
    }
    let mut members: [Vec<Member>; 2] = [Vec::new(), Vec::new()];
    for p in 0..2 {
        files[p].sort();
        for (k, (i, path)) in files[p].iter().enumerate() {
            if *i != k {
                return Err(Error::MalformedInput {
                    file: ck.display().to_string(),
                    reason: format!("player {p} checkpoints skip index {k}"),
                });
            }
            members[p].push(load_member(path)?);
        }
        if members[p].is_empty() {
            return Err(Error::EmptyPopulation);
        }
    }
    let pop_sizes = [members[0].len(), members[1].len()];
    if config.game.is_ntmg() {
        let cfg = NtmgConfig::from_params(&config.game.params)?;
        let pts: Vec<Vec<[f64; 2]>> = members
            .iter()
            .map(|ms| {
                ms.iter()
                    .map(|m| match m {
                        Member::Point(p) => Ok(p.x),
                        Member::Policy(_) => Err(Error::Unsupported("policy checkpoint in a point run".into())),
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        let m: Vec<Vec<f64>> = pts[0]
            .iter()
            .map(|x| pts[1].iter().map(|y| ntmg_payoff(*x, *y, &cfg)).collect())
            .collect();
        let (a, b) = solve(&m, &config.mss)?;
        let pa: Vec<_> = pts[0].iter().copied().zip(a.iter().copied()).collect();
        let pb: Vec<_> = pts[1].iter().copied().zip(b.iter().copied()).collect();
        return Ok(EvalReport {
            pop_sizes,
            meta_exploitability: matrix_exploitability(&m, &a, &b),
            exploitability: Some(ntmg_exploitability([&pa, &pb], &cfg)),
            sigma: [a, b],
        });
    }
    let game = config.game.build()?;
    let ev = ExactEvaluator::new(game, config.eval.node_budget)?;
    let tables: Vec<Vec<_>> = members
        .iter()
        .enumerate()
        .map(|(p, ms)| {
            ms.iter()
                .map(|m| match m {
                    Member::Policy(pol) => Ok(ev.table(pol, p)),
                    Member::Point(_) => Err(Error::Unsupported("point checkpoint in a game run".into())),
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let m: Vec<Vec<f64>> = tables[0]
        .iter()
        .map(|r| tables[1].iter().map(|c| ev.pure_value(r, c)).collect())
        .collect();
    let (a, b) = solve(&m, &config.mss)?;
    let ra: Vec<_> = tables[0].iter().zip(a.iter().copied()).filter(|x| x.1 > 0.0).collect();
    let rb: Vec<_> = tables[1].iter().zip(b.iter().copied()).filter(|x| x.1 > 0.0).collect();
    let exploitability = ev.exploitability([&ra, &rb])?;
    Ok(EvalReport {
        pop_sizes,
        meta_exploitability: matrix_exploitability(&m, &a, &b),
        exploitability: Some(exploitability),
        sigma: [a, b],
    })
}

/// Reads a payoff matrix: JSON rows, or one row per line with comma or
/// whitespace separated entries (`#` starts a comment).
pub fn read_matrix(path: &Path) -> Result<Vec<Vec<f64>>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let malformed = |reason: String| Error::MalformedInput {
        file: path.display().to_string(),
        reason,
    };
    let m: Vec<Vec<f64>> = if text.trim_start().starts_with('[') {
        serde_json::from_str(&text).map_err(|e| malformed(e.to_string()))?
    } else {
        text.lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
            .map(|(i, l)| {
                l.split(|c: char| c == ',' || c.is_whitespace())
                    .filter(|s| !s.is_empty())
                    .enumerate()
                    .map(|(j, s)| {
                        s.parse::<f64>()
                            .map_err(|e| malformed(format!("row {}, column {}: {s:?}: {e}", i + 1, j + 1)))
                    })
                    .collect()
            })
            .collect::<Result<_>>()?
    };
    crate::meta::lp::check_matrix(&m).map_err(|e| malformed(e.to_string()))?;
    Ok(m)
}

/// Human-readable report of a solved matrix game.
pub fn describe_solution(m: &[Vec<f64>], kind: &MssKind) -> Result<String> {
    let (row, col) = solve(m, kind)?;
    let value = crate::meta::lp::bilinear(m, &row, &col);
    let fmt = |v: &[f64]| v.iter().map(|x| format!("{x:.6}")).collect::<Vec<_>>().join(" ");
    Ok(format!(
        "row: {}\ncol: {}\nvalue: {value:.6}\nexploitability: {:.3e}\n",
        fmt(&row),
        fmt(&col),
        matrix_exploitability(m, &row, &col)
    ))
}
