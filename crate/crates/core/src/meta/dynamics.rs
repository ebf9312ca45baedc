//! Iterative meta-strategy solvers: projected replicator dynamics and
//! fictitious play.

use super::lp::{bilinear, col_payoffs, row_payoffs};
use crate::policies::argmax;

/// Euclidean projection onto `{x : Σx = 1, xᵢ ≥ γ}`.
pub fn project_floored_simplex(v: &[f64], gamma: f64) -> Vec<f64> {
    let n = v.len();
    let mass = 1.0 - gamma * n as f64;
    let shifted: Vec<f64> = v.iter().map(|x| x - gamma).collect();
    let mut sorted = shifted.clone();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cumulative = 0.0;
    let mut tau = 0.0;
    for (k, &s) in sorted.iter().enumerate() {
        cumulative += s;
        let t = (cumulative - mass) / (k + 1) as f64;
        if s - t > 0.0 {
            tau = t;
        }
    }
    shifted.iter().map(|x| (x - tau).max(0.0) + gamma).collect()
}

/// Discretized replicator dynamics for both players from uniform, each step
/// followed by projection onto the γ-floored simplex.
pub fn solve_prd(m: &[Vec<f64>], gamma: f64, dt: f64, steps: usize) -> (Vec<f64>, Vec<f64>) {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut x = vec![1.0 / rows as f64; rows];
    let mut y = vec![1.0 / cols as f64; cols];
    for _ in 0..steps {
        let fx = row_payoffs(m, &y);
        let fy = col_payoffs(m, &x);
        let v = bilinear(m, &x, &y);
        let nx: Vec<f64> = x.iter().zip(&fx).map(|(xi, f)| xi + dt * xi * (f - v)).collect();
        // The column player maximizes -M.
        let ny: Vec<f64> = y.iter().zip(&fy).map(|(yi, f)| yi + dt * yi * (v - f)).collect();
        x = project_floored_simplex(&nx, gamma);
        y = project_floored_simplex(&ny, gamma);
    }
    (x, y)
}

/// Alternating fictitious play. The row player opens with a best response to
/// a uniform column; ties go to the lowest index.
pub fn solve_fp(m: &[Vec<f64>], iters: usize) -> (Vec<f64>, Vec<f64>) {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut row_counts = vec![0.0; rows];
    let mut col_counts = vec![0.0; cols];
    let opening = argmax(&row_payoffs(m, &vec![1.0 / cols as f64; cols]));
    // Cumulative payoffs against the opponent's plays so far.
    let mut row_payoff = vec![0.0; rows];
    let mut col_payoff = vec![0.0; cols];
    for t in 0..iters.max(1) {
        let r = if t == 0 { opening } else { argmax(&row_payoff) };
        row_counts[r] += 1.0;
        for c in 0..cols {
            col_payoff[c] -= m[r][c];
        }
        let c = argmax(&col_payoff);
        col_counts[c] += 1.0;
        for (rr, v) in row_payoff.iter_mut().enumerate() {
            *v += m[rr][c];
        }
    }
    let n = iters.max(1) as f64;
    (
        row_counts.into_iter().map(|v| v / n).collect(),
        col_counts.into_iter().map(|v| v / n).collect(),
    )
}
