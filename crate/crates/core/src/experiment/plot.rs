//! Static SVG rendering of run outputs. Output depends only on the inputs;
//! coordinates are written with three decimals.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use super::output::{parse_cell, read_results, read_table};
use crate::error::{Error, Result};
use crate::games::ntmg::NtmgConfig;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlotKind {
    /// Mean exploitability per iteration with a min/max band over the inputs.
    Exploitability,
    /// Hump layout of the mixture game plus one polyline per oracle run.
    Trajectories,
    /// One learning curve per input.
    RewardCurves,
    /// Mean KL per initialization arm and iteration.
    KlTiles,
}

impl FromStr for PlotKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exploitability" => Ok(PlotKind::Exploitability),
            "trajectories" => Ok(PlotKind::Trajectories),
            "reward_curves" => Ok(PlotKind::RewardCurves),
            "kl_tiles" => Ok(PlotKind::KlTiles),
            other => Err(Error::param(
                "kind",
                format!("unknown plot kind {other:?}; expected exploitability, trajectories, reward_curves or kl_tiles"),
            )),
        }
    }
}

pub const WIDTH: f64 = 640.0;
pub const HEIGHT: f64 = 480.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 30.0;
const MARGIN_BOTTOM: f64 = 50.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

/// Maps data coordinates into the plotting area.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Frame {
    pub x: (f64, f64),
    pub y: (f64, f64),
}

impl Frame {
    /// A frame covering the given ranges, widened when degenerate.
    pub fn new(x: (f64, f64), y: (f64, f64)) -> Self {
        let widen = |(a, b): (f64, f64)| {
            if !(a.is_finite() && b.is_finite()) {
                (0.0, 1.0)
            } else if b - a < 1e-12 {
                (a - 0.5, b + 0.5)
            } else {
                (a, b)
            }
        };
        Frame { x: widen(x), y: widen(y) }
    }

    pub fn px(&self, x: f64, y: f64) -> (f64, f64) {
        let w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
        let h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
        (
            MARGIN_LEFT + (x - self.x.0) / (self.x.1 - self.x.0) * w,
            MARGIN_TOP + (self.y.1 - y) / (self.y.1 - self.y.0) * h,
        )
    }

    /// Pixels per data unit along x.
    pub fn scale_x(&self) -> f64 {
        (WIDTH - MARGIN_LEFT - MARGIN_RIGHT) / (self.x.1 - self.x.0)
    }
}

fn range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
}

fn pt(f: &Frame, x: f64, y: f64) -> String {
    let (a, b) = f.px(x, y);
    format!("{a:.3},{b:.3}")
}

struct Svg {
    body: String,
}

impl Svg {
    fn new(title: &str) -> Self {
        let mut body = String::new();
        let _ = writeln!(
            body,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
        );
        let _ = writeln!(body, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
        let _ = writeln!(
            body,
            r#"<text x="{:.3}" y="20" text-anchor="middle" font-family="sans-serif" font-size="14">{}</text>"#,
            WIDTH / 2.0,
            escape(title)
        );
        Svg { body }
    }

    fn axes(&mut self, f: &Frame, xlabel: &str, ylabel: &str) {
        let (x0, y0) = f.px(f.x.0, f.y.0);
        let (x1, y1) = f.px(f.x.1, f.y.1);
        let _ = writeln!(
            self.body,
            r#"<g class="axes" stroke="black" fill="none"><rect x="{x0:.3}" y="{y1:.3}" width="{:.3}" height="{:.3}"/></g>"#,
            x1 - x0,
            y0 - y1
        );
        for i in 0..=4 {
            let t = i as f64 / 4.0;
            let xv = f.x.0 + t * (f.x.1 - f.x.0);
            let yv = f.y.0 + t * (f.y.1 - f.y.0);
            let (px, _) = f.px(xv, f.y.0);
            let (_, py) = f.px(f.x.0, yv);
            let _ = writeln!(
                self.body,
                r#"<text x="{px:.3}" y="{:.3}" text-anchor="middle" font-family="sans-serif" font-size="11">{xv:.3}</text>"#,
                y0 + 16.0
            );
            let _ = writeln!(
                self.body,
                r#"<text x="{:.3}" y="{:.3}" text-anchor="end" font-family="sans-serif" font-size="11">{yv:.3}</text>"#,
                x0 - 6.0,
                py + 4.0
            );
        }
        let _ = writeln!(
            self.body,
            r#"<text x="{:.3}" y="{:.3}" text-anchor="middle" font-family="sans-serif" font-size="12">{}</text>"#,
            (x0 + x1) / 2.0,
            HEIGHT - 12.0,
            escape(xlabel)
        );
        let _ = writeln!(
            self.body,
            r#"<text x="16" y="{:.3}" text-anchor="middle" font-family="sans-serif" font-size="12" transform="rotate(-90 16 {:.3})">{}</text>"#,
            (y0 + y1) / 2.0,
            (y0 + y1) / 2.0,
            escape(ylabel)
        );
    }

    fn polyline(&mut self, points: &[String], color: &str, class: &str) {
        if points.is_empty() {
            return;
        }
        let _ = writeln!(
            self.body,
            r#"<polyline class="{class}" fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            points.join(" ")
        );
    }

    fn finish(mut self) -> String {
        self.body.push_str("</svg>\n");
        self.body
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Renders the given inputs as an SVG document.
pub fn render_to_string(kind: PlotKind, inputs: &[PathBuf]) -> Result<String> {
    match kind {
        PlotKind::Exploitability => exploitability(inputs),
        PlotKind::Trajectories => trajectories(inputs),
        PlotKind::RewardCurves => reward_curves(inputs),
        PlotKind::KlTiles => kl_tiles(inputs),
    }
}

pub fn render_svg(kind: PlotKind, inputs: &[PathBuf], out: &Path) -> Result<()> {
    let svg = render_to_string(kind, inputs)?;
    if let Some(parent) = out.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    fs::write(out, svg).map_err(|e| Error::io(out, e))
}

/// Per-iteration (mean, min, max) of the exploitability metric across runs.
pub fn exploitability_band(inputs: &[PathBuf]) -> Result<Vec<(usize, f64, f64, f64)>> {
    let mut by_iter: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
    for path in inputs {
        for row in read_results(path)? {
            if let Some(v) = row.metric() {
                by_iter.entry(row.iteration).or_default().push(v);
            }
        }
    }
    Ok(by_iter
        .into_iter()
        .map(|(t, vs)| {
            let (lo, hi) = range(vs.iter().copied());
            (t, vs.iter().sum::<f64>() / vs.len() as f64, lo, hi)
        })
        .collect())
}

fn exploitability(inputs: &[PathBuf]) -> Result<String> {
    let band = exploitability_band(inputs)?;
    let xr = range(band.iter().map(|b| b.0 as f64));
    let yr = range(band.iter().flat_map(|b| [b.2, b.3]));
    let frame = Frame::new(xr, (0.0_f64.min(yr.0), yr.1));
    let mut svg = Svg::new("Exploitability");
    svg.axes(&frame, "iteration", "exploitability");
    if !band.is_empty() {
        let mut outline: Vec<String> = band.iter().map(|b| pt(&frame, b.0 as f64, b.3)).collect();
        outline.extend(band.iter().rev().map(|b| pt(&frame, b.0 as f64, b.2)));
        let _ = writeln!(
            svg.body,
            r#"<polygon class="band" fill="{}" fill-opacity="0.25" stroke="none" points="{}"/>"#,
            PALETTE[0],
            outline.join(" ")
        );
        let mean: Vec<String> = band.iter().map(|b| pt(&frame, b.0 as f64, b.1)).collect();
        svg.polyline(&mean, PALETTE[0], "mean");
    }
    Ok(svg.finish())
}

/// Visited points per `(input, iteration, player)`, in step order.
pub fn read_trajectories(path: &Path) -> Result<BTreeMap<(usize, usize), Vec<[f64; 2]>>> {
    let cols = ["iteration", "player", "step", "x", "y"];
    let mut runs: BTreeMap<(usize, usize), Vec<(usize, [f64; 2])>> = BTreeMap::new();
    for (row, c) in read_table(path, 0, &cols)? {
        let key = (
            parse_cell(path, row, "iteration", &c[0])?,
            parse_cell(path, row, "player", &c[1])?,
        );
        let step: usize = parse_cell(path, row, "step", &c[2])?;
        let x = [parse_cell(path, row, "x", &c[3])?, parse_cell(path, row, "y", &c[4])?];
        runs.entry(key).or_default().push((step, x));
    }
    Ok(runs
        .into_iter()
        .map(|(k, mut v)| {
            v.sort_by_key(|s| s.0);
            (k, v.into_iter().map(|s| s.1).collect())
        })
        .collect())
}

/// Geometry of the run that produced `path`, read from a sibling
/// `config.json` when there is one.
fn ntmg_geometry(path: &Path) -> Result<NtmgConfig> {
    let cfg_path = path.with_file_name("config.json");
    if !cfg_path.exists() {
        return Ok(NtmgConfig::default());
    }
    let cfg = super::load_config(&cfg_path)?;
    NtmgConfig::from_params(&cfg.game.params)
}

fn trajectories(inputs: &[PathBuf]) -> Result<String> {
    let geometry = match inputs.first() {
        Some(p) => ntmg_geometry(p)?,
        None => NtmgConfig::default(),
    };
    let b = geometry.plane_bound;
    // Equal pixel scale on both axes, so humps stay round.
    let aspect = (WIDTH - MARGIN_LEFT - MARGIN_RIGHT) / (HEIGHT - MARGIN_TOP - MARGIN_BOTTOM);
    let frame = Frame::new((-b * aspect, b * aspect), (-b, b));
    let mut svg = Svg::new("Oracle trajectories");
    svg.axes(&frame, "x", "y");
    let r = geometry.gaussian_sigma * frame.scale_x();
    for (k, c) in geometry.centers().iter().enumerate() {
        let (cx, cy) = frame.px(c[0], c[1]);
        let _ = writeln!(
            svg.body,
            r##"<circle class="hump" data-k="{k}" cx="{cx:.3}" cy="{cy:.3}" r="{r:.3}" fill="#cccccc" fill-opacity="0.5" stroke="#666666"/>"##
        );
    }
    for path in inputs {
        for ((_, player), points) in read_trajectories(path)? {
            let pts: Vec<String> = points.iter().map(|x| pt(&frame, x[0], x[1])).collect();
            svg.polyline(&pts, PALETTE[player % PALETTE.len()], "trajectory");
        }
    }
    Ok(svg.finish())
}

fn read_curve(path: &Path) -> Result<Vec<(f64, f64)>> {
    read_table(path, 0, &["episode", "mean_reward_window"])?
        .into_iter()
        .map(|(row, c)| {
            Ok((
                parse_cell(path, row, "episode", &c[0])?,
                parse_cell(path, row, "mean_reward_window", &c[1])?,
            ))
        })
        .collect()
}

fn reward_curves(inputs: &[PathBuf]) -> Result<String> {
    let curves: Vec<Vec<(f64, f64)>> = inputs.iter().map(|p| read_curve(p)).collect::<Result<_>>()?;
    let xr = range(curves.iter().flatten().map(|p| p.0));
    let yr = range(curves.iter().flatten().map(|p| p.1));
    let frame = Frame::new(xr, yr);
    let mut svg = Svg::new("Oracle learning curves");
    svg.axes(&frame, "episode", "mean reward");
    for (i, c) in curves.iter().enumerate() {
        let pts: Vec<String> = c.iter().map(|p| pt(&frame, p.0, p.1)).collect();
        svg.polyline(&pts, PALETTE[i % PALETTE.len()], "curve");
    }
    Ok(svg.finish())
}

fn kl_tiles(inputs: &[PathBuf]) -> Result<String> {
    let mut cells: BTreeMap<(String, usize), (f64, usize)> = BTreeMap::new();
    for path in inputs {
        for (row, c) in read_table(path, 0, &["iteration", "player", "arm", "kl"])? {
            let t: usize = parse_cell(path, row, "iteration", &c[0])?;
            let _: usize = parse_cell(path, row, "player", &c[1])?;
            let kl: f64 = parse_cell(path, row, "kl", &c[3])?;
            let e = cells.entry((c[2].clone(), t)).or_insert((0.0, 0));
            e.0 += kl;
            e.1 += 1;
        }
    }
    let arms: Vec<String> = {
        let mut a: Vec<String> = cells.keys().map(|k| k.0.clone()).collect();
        a.dedup();
        a
    };
    let iters: Vec<usize> = {
        let mut v: Vec<usize> = cells.keys().map(|k| k.1).collect();
        v.sort_unstable();
        v.dedup();
        v
    };
    let top = cells.values().map(|(s, n)| s / *n as f64).fold(0.0, f64::max);
    let mut svg = Svg::new("KL divergence to the ensemble");
    let frame = Frame::new((0.0, iters.len().max(1) as f64), (0.0, arms.len().max(1) as f64));
    svg.axes(&frame, "iteration index", "arm");
    for (ai, arm) in arms.iter().enumerate() {
        let (lx, ly) = frame.px(0.0, ai as f64 + 0.5);
        let _ = writeln!(
            svg.body,
            r#"<text x="{:.3}" y="{ly:.3}" text-anchor="end" font-family="sans-serif" font-size="10">{}</text>"#,
            lx - 40.0,
            escape(arm)
        );
        for (ti, t) in iters.iter().enumerate() {
            let Some((s, n)) = cells.get(&(arm.clone(), *t)) else { continue };
            let v = s / *n as f64;
            let shade = if top > 0.0 { v / top } else { 0.0 };
            let level = (255.0 * (1.0 - shade)).round() as u8;
            let (x0, y1) = frame.px(ti as f64, ai as f64 + 1.0);
            let (x1, y0) = frame.px(ti as f64 + 1.0, ai as f64);
            let _ = writeln!(
                svg.body,
                r#"<rect class="tile" data-arm="{}" data-iteration="{t}" data-kl="{v:.6}" x="{x0:.3}" y="{y1:.3}" width="{:.3}" height="{:.3}" fill="rgb({level},{level},255)" stroke="white"/>"#,
                escape(arm),
                x1 - x0,
                y0 - y1
            );
        }
    }
    Ok(svg.finish())
}
