use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::policies::{save_checkpoint, PointPolicy, Policy, TabularPolicy};
use crate::psro::{IterationRecord, PsroConfig, RunObserver, Snapshot};

/// First line of every results file.
pub const RESULTS_VERSION: &str = "# fusion-psro results v1";
pub const RESULTS_COLUMNS: [&str; 5] = [
    "iteration",
    "exploitability",
    "approx_exploitability",
    "pop_size_p1",
    "pop_size_p2",
];

/// Formats an optional metric; missing values are empty cells.
pub(crate) fn cell(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Writes one run's files as the run progresses:
///
/// - `config.json`: the parsed config
/// - `results.csv`: the versioned per-iteration metrics
/// - `timings.csv`: wall-time split, kept apart so results stay reproducible
/// - `payoff_matrix_{t}.txt`: meta-game and σ after iteration `t`
/// - `checkpoints/p{player}_{index}.json`: every population member
/// - `curves/p{player}_iter{t}.csv`: oracle learning curves
/// - `kl.csv`, `trajectories.csv`: when the run produces them
pub struct OutputSink {
    dir: PathBuf,
    results: BufWriter<File>,
    timings: BufWriter<File>,
    kl: Option<BufWriter<File>>,
    paths: Option<BufWriter<File>>,
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| Error::io(path, e))
}

fn write_line(w: &mut BufWriter<File>, path: &Path, line: &str) -> Result<()> {
    writeln!(w, "{line}").and_then(|_| w.flush()).map_err(|e| Error::io(path, e))
}

/// On-disk form of non-parametric members.
#[derive(Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub(crate) enum MemberFile {
    Tabular(TabularPolicy),
    Point(PointPolicy),
}

impl OutputSink {
    pub fn create(dir: &Path, config: &PsroConfig) -> Result<Self> {
        fs::create_dir_all(dir.join("checkpoints")).map_err(|e| Error::io(dir, e))?;
        let echo = serde_json::to_string_pretty(config)?;
        let cfg_path = dir.join("config.json");
        fs::write(&cfg_path, echo + "\n").map_err(|e| Error::io(&cfg_path, e))?;
        let results_path = dir.join("results.csv");
        let mut results = create(&results_path)?;
        write_line(&mut results, &results_path, RESULTS_VERSION)?;
        write_line(&mut results, &results_path, &RESULTS_COLUMNS.join(","))?;
        let timings_path = dir.join("timings.csv");
        let mut timings = create(&timings_path)?;
        write_line(
            &mut timings,
            &timings_path,
            "iteration,t_meta,t_br,t_fusion,t_payoff,t_total",
        )?;
        Ok(OutputSink {
            dir: dir.to_path_buf(),
            results,
            timings,
            kl: None,
            paths: None,
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn lazy(slot: &mut Option<BufWriter<File>>, path: &Path, header: &str) -> Result<()> {
        if slot.is_none() {
            let mut w = create(path)?;
            write_line(&mut w, path, header)?;
            *slot = Some(w);
        }
        Ok(())
    }
}

impl RunObserver for OutputSink {
    fn on_member(&mut self, player: usize, index: usize, member: Snapshot<'_>) -> Result<()> {
        let path = self.dir.join("checkpoints").join(format!("p{player}_{index}.json"));
        let file = match member {
            Snapshot::Policy(Policy::Parametric(p)) => return save_checkpoint(p, &path),
            Snapshot::Policy(Policy::Tabular(t)) => MemberFile::Tabular(t.clone()),
            Snapshot::Point(p) => MemberFile::Point(*p),
        };
        let text = serde_json::to_string_pretty(&file)?;
        fs::write(&path, text + "\n").map_err(|e| Error::io(&path, e))
    }

    fn on_iteration(&mut self, r: &IterationRecord, meta_dump: &str) -> Result<()> {
        let t = r.iteration;
        let results_path = self.dir.join("results.csv");
        let line = format!(
            "{t},{},{},{},{}",
            cell(r.exploitability),
            cell(r.approx_exploitability),
            r.pop_sizes[0],
            r.pop_sizes[1]
        );
        write_line(&mut self.results, &results_path, &line)?;
        let tm = &r.timings;
        let line = format!(
            "{t},{},{},{},{},{}",
            tm.meta_solve, tm.br_training, tm.fusion, tm.payoff_fill, tm.total
        );
        write_line(&mut self.timings, &self.dir.join("timings.csv"), &line)?;

        let matrix_path = self.dir.join(format!("payoff_matrix_{t}.txt"));
        fs::write(&matrix_path, meta_dump).map_err(|e| Error::io(&matrix_path, e))?;

        if !r.curves.is_empty() {
            let curves = self.dir.join("curves");
            fs::create_dir_all(&curves).map_err(|e| Error::io(&curves, e))?;
            for c in &r.curves {
                let path = curves.join(format!("p{}_iter{t}.csv", c.player));
                let mut text = String::from("episode,mean_reward_window\n");
                for (ep, v) in &c.points {
                    text.push_str(&format!("{ep},{v}\n"));
                }
                fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
            }
        }
        if !r.kl.is_empty() {
            let path = self.dir.join("kl.csv");
            Self::lazy(&mut self.kl, &path, "iteration,player,arm,kl")?;
            let w = self.kl.as_mut().expect("opened above");
            for k in &r.kl {
                write_line(w, &path, &format!("{t},{},{},{}", k.player, k.arm, k.kl))?;
            }
        }
        if !r.paths.is_empty() {
            let path = self.dir.join("trajectories.csv");
            Self::lazy(&mut self.paths, &path, "iteration,player,step,x,y")?;
            let w = self.paths.as_mut().expect("opened above");
            for p in &r.paths {
                for (step, x) in p.points.iter().enumerate() {
                    write_line(w, &path, &format!("{t},{},{step},{},{}", p.player, x[0], x[1]))?;
                }
            }
        }
        Ok(())
    }
}

/// A loaded population member.
#[derive(Clone, Debug, PartialEq)]
pub enum Member {
    Policy(Policy),
    Point(PointPolicy),
}

/// Reads a checkpoint written by [`OutputSink`].
pub fn load_member(path: &Path) -> Result<Member> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let malformed = |reason: String| Error::MalformedInput {
        file: path.display().to_string(),
        reason,
    };
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| malformed(e.to_string()))?;
    if value.get("theta").is_some() {
        return crate::policies::load_checkpoint(path).map(|p| Member::Policy(Policy::Parametric(p)));
    }
    match serde_json::from_value::<MemberFile>(value).map_err(|e| malformed(e.to_string()))? {
        MemberFile::Tabular(t) => Ok(Member::Policy(Policy::Tabular(t))),
        MemberFile::Point(p) => Ok(Member::Point(p)),
    }
}

/// Per-iteration rows of a results file.
#[derive(Clone, Debug, PartialEq)]
pub struct ResultsRow {
    pub iteration: usize,
    pub exploitability: Option<f64>,
    pub approx_exploitability: Option<f64>,
    pub pop_sizes: [usize; 2],
}

impl ResultsRow {
    pub fn metric(&self) -> Option<f64> {
        self.exploitability.or(self.approx_exploitability)
    }
}

pub(crate) fn malformed(path: &Path, row: usize, column: &str, reason: impl std::fmt::Display) -> Error {
    Error::MalformedInput {
        file: path.display().to_string(),
        reason: format!("row {row}, column `{column}`: {reason}"),
    }
}

/// Data lines of a CSV file with a fixed header, split into cells. Row
/// numbers in errors count file lines from 1.
pub(crate) fn read_table(path: &Path, skip: usize, columns: &[&str]) -> Result<Vec<(usize, Vec<String>)>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut lines = text.lines().enumerate().skip(skip);
    let header = lines
        .next()
        .ok_or_else(|| malformed(path, skip + 1, columns[0], "missing header"))?;
    let found: Vec<&str> = header.1.split(',').map(str::trim).collect();
    if found != columns {
        return Err(Error::MalformedInput {
            file: path.display().to_string(),
            reason: format!("row {}: expected columns {}, got {}", header.0 + 1, columns.join(","), header.1),
        });
    }
    let mut out = Vec::new();
    for (i, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let cells: Vec<String> = line.split(',').map(|c| c.trim().to_string()).collect();
        if cells.len() != columns.len() {
            return Err(malformed(
                path,
                i + 1,
                columns[cells.len().min(columns.len() - 1)],
                format!("expected {} cells, got {}", columns.len(), cells.len()),
            ));
        }
        out.push((i + 1, cells));
    }
    Ok(out)
}

pub(crate) fn parse_cell<T: std::str::FromStr>(path: &Path, row: usize, column: &str, s: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    s.parse::<T>().map_err(|e| malformed(path, row, column, format!("{s:?}: {e}")))
}

pub(crate) fn parse_opt(path: &Path, row: usize, column: &str, s: &str) -> Result<Option<f64>> {
    if s.is_empty() {
        Ok(None)
    } else {
        parse_cell(path, row, column, s).map(Some)
    }
}

/// Reads a results file, rejecting unknown versions.
pub fn read_results(path: &Path) -> Result<Vec<ResultsRow>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let first = text.lines().next().unwrap_or("");
    if first != RESULTS_VERSION {
        return Err(Error::MalformedInput {
            file: path.display().to_string(),
            reason: format!("row 1: unsupported results version {first:?}, expected {RESULTS_VERSION:?}"),
        });
    }
    read_table(path, 1, &RESULTS_COLUMNS)?
        .into_iter()
        .map(|(row, c)| {
            Ok(ResultsRow {
                iteration: parse_cell(path, row, "iteration", &c[0])?,
                exploitability: parse_opt(path, row, "exploitability", &c[1])?,
                approx_exploitability: parse_opt(path, row, "approx_exploitability", &c[2])?,
                pop_sizes: [
                    parse_cell(path, row, "pop_size_p1", &c[3])?,
                    parse_cell(path, row, "pop_size_p2", &c[4])?,
                ],
            })
        })
        .collect()
}
