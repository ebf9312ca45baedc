//! Non-transitive mixture game: policies are points in the plane, weighted
//! over seven Gaussian humps evenly spaced on a circle, and compete through a
//! cyclic skew-symmetric matrix over those weights.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const NUM_HUMPS: usize = 7;

/// Cyclic payoff matrix between humps.
pub const S: [[i8; NUM_HUMPS]; NUM_HUMPS] = [
    [0, 1, 1, 1, -1, -1, -1],
    [-1, 0, 1, 1, 1, -1, -1],
    [-1, -1, 0, 1, 1, 1, -1],
    [-1, -1, -1, 0, 1, 1, 1],
    [1, -1, -1, -1, 0, 1, 1],
    [1, 1, -1, -1, -1, 0, 1],
    [1, 1, 1, -1, -1, -1, 0],
];

pub type Point = [f64; 2];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NtmgConfig {
    pub num_humps: usize,
    pub center_radius: f64,
    pub gaussian_sigma: f64,
    pub plane_bound: f64,
}

impl Default for NtmgConfig {
    fn default() -> Self {
        NtmgConfig {
            num_humps: NUM_HUMPS,
            center_radius: 5.0,
            gaussian_sigma: 1.0,
            plane_bound: 10.0,
        }
    }
}

impl NtmgConfig {
    pub fn with_sigma(sigma: f64) -> Self {
        NtmgConfig {
            gaussian_sigma: sigma,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_humps != NUM_HUMPS {
            return Err(Error::param("num_humps", "must be 7 to match the payoff matrix"));
        }
        if !(self.gaussian_sigma > 0.0) {
            return Err(Error::param("gaussian_sigma", "must be positive"));
        }
        if !(self.plane_bound > 0.0) || !(self.center_radius >= 0.0) {
            return Err(Error::param("plane_bound", "geometry must be positive"));
        }
        Ok(())
    }

    pub fn from_params(params: &serde_json::Map<String, serde_json::Value>) -> Result<Self> {
        let cfg: NtmgConfig = serde_json::from_value(serde_json::Value::Object(params.clone()))
            .map_err(|e| Error::param("ntmg", e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Hump centers at angle `2πk/7` on the circle of `center_radius`.
    pub fn centers(&self) -> [Point; NUM_HUMPS] {
        std::array::from_fn(|k| {
            let angle = 2.0 * std::f64::consts::PI * k as f64 / NUM_HUMPS as f64;
            [self.center_radius * angle.cos(), self.center_radius * angle.sin()]
        })
    }

    pub fn clamp(&self, x: Point) -> Point {
        let b = self.plane_bound;
        [x[0].clamp(-b, b), x[1].clamp(-b, b)]
    }
}

fn log_densities(x: Point, cfg: &NtmgConfig) -> [f64; NUM_HUMPS] {
    let two_var = 2.0 * cfg.gaussian_sigma * cfg.gaussian_sigma;
    let centers = cfg.centers();
    std::array::from_fn(|k| {
        let dx = x[0] - centers[k][0];
        let dy = x[1] - centers[k][1];
        -(dx * dx + dy * dy) / two_var
    })
}

/// Gaussian hump densities at `x`, normalized across humps.
pub fn ntmg_weights(x: Point, cfg: &NtmgConfig) -> [f64; NUM_HUMPS] {
    let logits = log_densities(x, cfg);
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exp: [f64; NUM_HUMPS] = std::array::from_fn(|k| (logits[k] - max).exp());
    let total: f64 = exp.iter().sum();
    std::array::from_fn(|k| exp[k] / total)
}

fn payoff_from_weights(p: &[f64; NUM_HUMPS], q: &[f64; NUM_HUMPS]) -> f64 {
    let mut cyclic = 0.0;
    for i in 0..NUM_HUMPS {
        for j in 0..NUM_HUMPS {
            cyclic += p[i] * f64::from(S[i][j]) * q[j];
        }
    }
    let transitive: f64 = (0..NUM_HUMPS).map(|k| p[k] - q[k]).sum();
    cyclic + 0.5 * transitive
}

/// Payoff of the policy at `xi` against the policy at `xneg`.
pub fn ntmg_payoff(xi: Point, xneg: Point, cfg: &NtmgConfig) -> f64 {
    payoff_from_weights(&ntmg_weights(xi, cfg), &ntmg_weights(xneg, cfg))
}

/// Expected payoff of `x` against a weighted set of opponent points.
pub fn ntmg_mixture_payoff(x: Point, opponents: &[(Point, f64)], cfg: &NtmgConfig) -> f64 {
    let p = ntmg_weights(x, cfg);
    opponents
        .iter()
        .map(|(y, w)| w * payoff_from_weights(&p, &ntmg_weights(*y, cfg)))
        .sum()
}

/// Analytic gradient of [`ntmg_mixture_payoff`] with respect to `x`.
pub fn ntmg_mixture_gradient(x: Point, opponents: &[(Point, f64)], cfg: &NtmgConfig) -> Point {
    let p = ntmg_weights(x, cfg);
    // The payoff is linear in p: f = Σ_j c_j p_j with c = S q + 1/2.
    let mut q = [0.0; NUM_HUMPS];
    for (y, w) in opponents {
        let qy = ntmg_weights(*y, cfg);
        for k in 0..NUM_HUMPS {
            q[k] += w * qy[k];
        }
    }
    let total_w: f64 = opponents.iter().map(|o| o.1).sum();
    let c: [f64; NUM_HUMPS] = std::array::from_fn(|i| {
        (0..NUM_HUMPS).map(|j| f64::from(S[i][j]) * q[j]).sum::<f64>() + 0.5 * total_w
    });
    // dp_j/dx = p_j (g_j - ḡ), g_j = -(x - μ_j) / σ², ḡ = Σ_l p_l g_l.
    let var = cfg.gaussian_sigma * cfg.gaussian_sigma;
    let centers = cfg.centers();
    let g: [Point; NUM_HUMPS] =
        std::array::from_fn(|j| [-(x[0] - centers[j][0]) / var, -(x[1] - centers[j][1]) / var]);
    let mean_g = (0..NUM_HUMPS).fold([0.0, 0.0], |acc, j| {
        [acc[0] + p[j] * g[j][0], acc[1] + p[j] * g[j][1]]
    });
    (0..NUM_HUMPS).fold([0.0, 0.0], |acc, j| {
        let s = c[j] * p[j];
        [acc[0] + s * (g[j][0] - mean_g[0]), acc[1] + s * (g[j][1] - mean_g[1])]
    })
}

/// Best-response value and point against a weighted opponent set: a grid
/// scan over the plane followed by gradient refinement of the best cells.
pub fn ntmg_best_response(opponents: &[(Point, f64)], cfg: &NtmgConfig) -> (Point, f64) {
    const GRID: usize = 81;
    const STARTS: usize = 4;
    const REFINE_STEPS: usize = 300;
    let b = cfg.plane_bound;
    let mut cells: Vec<(f64, Point)> = Vec::with_capacity(GRID * GRID);
    for i in 0..GRID {
        for j in 0..GRID {
            let x = [
                -b + 2.0 * b * i as f64 / (GRID - 1) as f64,
                -b + 2.0 * b * j as f64 / (GRID - 1) as f64,
            ];
            cells.push((ntmg_mixture_payoff(x, opponents, cfg), x));
        }
    }
    cells.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut best = (cells[0].1, cells[0].0);
    for &(value, start) in cells.iter().take(STARTS) {
        let mut x = start;
        let mut v = value;
        let mut lr = 0.5;
        for _ in 0..REFINE_STEPS {
            let g = ntmg_mixture_gradient(x, opponents, cfg);
            let cand = cfg.clamp([x[0] + lr * g[0], x[1] + lr * g[1]]);
            let cv = ntmg_mixture_payoff(cand, opponents, cfg);
            if cv >= v {
                x = cand;
                v = cv;
            } else {
                lr *= 0.5;
            }
        }
        if v > best.1 {
            best = (x, v);
        }
    }
    best
}

/// Exploitability of a pair of weighted point populations.
pub fn ntmg_exploitability(
    profile: [&[(Point, f64)]; 2],
    cfg: &NtmgConfig,
) -> f64 {
    let value: f64 = profile[0]
        .iter()
        .map(|(x, w)| w * ntmg_mixture_payoff(*x, profile[1], cfg))
        .sum();
    let br0 = ntmg_best_response(profile[1], cfg).1;
    let br1 = ntmg_best_response(profile[0], cfg).1;
    (br0 - value) + (br1 + value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;
    use rand::Rng;

    #[test]
    fn s_is_skew_symmetric() {
        for i in 0..NUM_HUMPS {
            for j in 0..NUM_HUMPS {
                assert_eq!(S[i][j], -S[j][i]);
            }
        }
    }

    #[test]
    fn weights_concentrate_at_center() {
        let cfg = NtmgConfig::with_sigma(0.1);
        let w = ntmg_weights(cfg.centers()[0], &cfg);
        assert!(w[0] > 0.999);
    }

    #[test]
    fn weights_uniform_at_origin() {
        let w = ntmg_weights([0.0, 0.0], &NtmgConfig::default());
        for v in w {
            assert!((v - 1.0 / 7.0).abs() < 1e-12);
        }
    }

    #[test]
    fn weights_at_center_three_golden() {
        // Direct evaluation of exp(-|x-μ_k|²/2σ²) / Σ_j exp(-|x-μ_j|²/2σ²)
        // at x = μ_3, σ = 1, radius 5.
        let golden = [
            2.293093816643088e-21,
            5.328152819151331e-14,
            8.166228493040089e-05,
            0.9998366754300325,
            8.166228493040104e-05,
            5.3281528191512933e-14,
            2.293093816643104e-21,
        ];
        let cfg = NtmgConfig::default();
        let w = ntmg_weights(cfg.centers()[3], &cfg);
        for k in 0..NUM_HUMPS {
            assert!((w[k] - golden[k]).abs() <= 1e-12 * golden[k].max(1e-300) + 1e-15);
        }
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn payoff_examples() {
        let cfg = NtmgConfig::default();
        let x = [1.3, -2.0];
        assert!(ntmg_payoff(x, x, &cfg).abs() < 1e-15);
        assert!(ntmg_payoff([0.0, 0.0], [0.0, 0.0], &cfg).abs() < 1e-15);
        let small = NtmgConfig::with_sigma(0.1);
        let c = small.centers();
        assert!((ntmg_payoff(c[0], c[1], &small) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn payoff_antisymmetric() {
        let cfg = NtmgConfig::default();
        let mut rng = rng_from_seed(1);
        for _ in 0..1000 {
            let x = [rng.random_range(-10.0..10.0), rng.random_range(-10.0..10.0)];
            let y = [rng.random_range(-10.0..10.0), rng.random_range(-10.0..10.0)];
            assert!((ntmg_payoff(x, y, &cfg) + ntmg_payoff(y, x, &cfg)).abs() < 1e-12);
        }
    }

    #[test]
    fn best_response_beats_grid_points() {
        let cfg = NtmgConfig::default();
        let opp = vec![(cfg.centers()[2], 0.6), (cfg.centers()[5], 0.4)];
        let (_, v) = ntmg_best_response(&opp, &cfg);
        for k in 0..NUM_HUMPS {
            assert!(v >= ntmg_mixture_payoff(cfg.centers()[k], &opp, &cfg) - 1e-12);
        }
    }
}
