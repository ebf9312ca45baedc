//! Zero-sum matrix game Nash equilibrium by a dense simplex method with
//! Bland's rule.

use crate::error::{Error, Result};

const PIVOT_EPS: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct NashSolution {
    pub row: Vec<f64>,
    pub col: Vec<f64>,
    /// Row player's expected payoff σ_rowᵀ M σ_col.
    pub value: f64,
}

/// Validates shape and finiteness; returns `(rows, cols)`.
pub fn check_matrix(m: &[Vec<f64>]) -> Result<(usize, usize)> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    if rows == 0 || cols == 0 {
        return Err(Error::param("matrix", "needs at least one row and one column"));
    }
    for (r, row) in m.iter().enumerate() {
        if row.len() != cols {
            return Err(Error::param("matrix", format!("row {r} has {} entries, expected {cols}", row.len())));
        }
        if let Some(c) = row.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("matrix entry ({r}, {c})")));
        }
    }
    Ok((rows, cols))
}

/// Solves `max 1ᵀy  s.t.  M' y ≤ 1, y ≥ 0` for the positively shifted matrix
/// `M'`. The optimal `y` scaled to the simplex is the column player's
/// strategy; the slack reduced costs scaled the same way give the row
/// player's.
pub fn solve_nash_lp(m: &[Vec<f64>]) -> Result<NashSolution> {
    let (rows, cols) = check_matrix(m)?;
    let min = m.iter().flatten().copied().fold(f64::INFINITY, f64::min);
    let shift = 1.0 - min;
    let width = cols + rows + 1;
    let rhs = width - 1;
    // Constraint rows then the objective row (reduced costs, negated).
    let mut t = vec![0.0; (rows + 1) * width];
    for r in 0..rows {
        for c in 0..cols {
            t[r * width + c] = m[r][c] + shift;
        }
        t[r * width + cols + r] = 1.0;
        t[r * width + rhs] = 1.0;
    }
    let obj = rows * width;
    for c in 0..cols {
        t[obj + c] = -1.0;
    }
    let mut basis: Vec<usize> = (cols..cols + rows).collect();

    loop {
        // Bland: lowest-index improving column, lowest-index leaving variable.
        let Some(enter) = (0..rhs).find(|&j| t[obj + j] < -PIVOT_EPS) else {
            break;
        };
        let mut leave: Option<usize> = None;
        let mut best = f64::INFINITY;
        for r in 0..rows {
            let a = t[r * width + enter];
            if a > PIVOT_EPS {
                let ratio = t[r * width + rhs] / a;
                let better = match leave {
                    None => true,
                    Some(l) => ratio < best - PIVOT_EPS || (ratio <= best + PIVOT_EPS && basis[r] < basis[l]),
                };
                if better {
                    best = ratio;
                    leave = Some(r);
                }
            }
        }
        // The feasible region is bounded since M' > 0, so a leaving row exists.
        let leave = leave.ok_or_else(|| Error::Unsupported("unbounded meta-game LP".into()))?;
        pivot(&mut t, width, leave, enter);
        basis[leave] = enter;
    }

    let mut y = vec![0.0; cols];
    for (r, &b) in basis.iter().enumerate() {
        if b < cols {
            y[b] = t[r * width + rhs];
        }
    }
    let x: Vec<f64> = (0..rows).map(|r| t[obj + cols + r]).collect();
    let row = normalize(x);
    let col = normalize(y);
    let value = bilinear(m, &row, &col);
    Ok(NashSolution { row, col, value })
}

fn pivot(t: &mut [f64], width: usize, pr: usize, pc: usize) {
    let p = t[pr * width + pc];
    for j in 0..width {
        t[pr * width + j] /= p;
    }
    t[pr * width + pc] = 1.0;
    let height = t.len() / width;
    for r in 0..height {
        if r == pr {
            continue;
        }
        let f = t[r * width + pc];
        if f == 0.0 {
            continue;
        }
        for j in 0..width {
            t[r * width + j] -= f * t[pr * width + j];
        }
        t[r * width + pc] = 0.0;
    }
}

fn normalize(mut v: Vec<f64>) -> Vec<f64> {
    v.iter_mut().for_each(|x| *x = x.max(0.0));
    let total: f64 = v.iter().sum();
    if total > 0.0 {
        v.iter_mut().for_each(|x| *x /= total);
    } else {
        let n = v.len() as f64;
        v.iter_mut().for_each(|x| *x = 1.0 / n);
    }
    v
}

pub fn bilinear(m: &[Vec<f64>], x: &[f64], y: &[f64]) -> f64 {
    m.iter()
        .zip(x)
        .map(|(row, xi)| xi * row.iter().zip(y).map(|(a, yj)| a * yj).sum::<f64>())
        .sum()
}

/// `(M y)_r` for every row.
pub fn row_payoffs(m: &[Vec<f64>], y: &[f64]) -> Vec<f64> {
    m.iter()
        .map(|row| row.iter().zip(y).map(|(a, b)| a * b).sum())
        .collect()
}

/// `(xᵀ M)_c` for every column.
pub fn col_payoffs(m: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols)
        .map(|c| m.iter().zip(x).map(|(row, xi)| xi * row[c]).sum())
        .collect()
}

/// Nash gap of a strategy pair on `M`: best row deviation plus best column
/// deviation.
pub fn matrix_exploitability(m: &[Vec<f64>], x: &[f64], y: &[f64]) -> f64 {
    let best_row = row_payoffs(m, y).into_iter().fold(f64::NEG_INFINITY, f64::max);
    let worst_col = col_payoffs(m, x).into_iter().fold(f64::INFINITY, f64::min);
    best_row - worst_col
}
