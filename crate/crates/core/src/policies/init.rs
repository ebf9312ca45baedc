use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::{mlp, ArchSignature, ParametricPolicy};
use crate::error::Result;
use crate::rng::{rng_from_seed, Rng};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitKind {
    /// Every entry, biases included, drawn from N(0, 0.01).
    Normal,
    /// Orthonormal weight rows or columns, zero biases.
    Orthogonal,
    /// Weights from N(0, 2 / fan_in), zero biases.
    Kaiming,
}

pub fn scratch_init(kind: InitKind, signature: &ArchSignature, seed: u64) -> Result<ParametricPolicy> {
    signature.validate()?;
    let mut rng = rng_from_seed(seed);
    let mut theta = Vec::with_capacity(signature.num_params());
    for (fan_in, fan_out) in mlp::layer_shapes(signature) {
        match kind {
            InitKind::Normal => {
                let d = Normal::new(0.0, 0.1).expect("valid std");
                theta.extend((0..fan_in * fan_out + fan_out).map(|_| d.sample(&mut rng)));
            }
            InitKind::Kaiming => {
                let d = Normal::new(0.0, (2.0 / fan_in as f64).sqrt()).expect("valid std");
                theta.extend((0..fan_in * fan_out).map(|_| d.sample(&mut rng)));
                theta.extend(std::iter::repeat_n(0.0, fan_out));
            }
            InitKind::Orthogonal => {
                theta.extend(orthogonal(fan_out, fan_in, &mut rng));
                theta.extend(std::iter::repeat_n(0.0, fan_out));
            }
        }
    }
    ParametricPolicy::new(signature.clone(), theta)
}

/// Row-major `rows × cols` matrix with orthonormal rows when `rows ≤ cols`,
/// orthonormal columns otherwise.
fn orthogonal(rows: usize, cols: usize, rng: &mut Rng) -> Vec<f64> {
    let (short, long) = if rows <= cols { (rows, cols) } else { (cols, rows) };
    let d = Normal::new(0.0, 1.0).expect("valid std");
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(short);
    while basis.len() < short {
        let mut v: Vec<f64> = (0..long).map(|_| d.sample(rng)).collect();
        // Two Gram-Schmidt passes keep the basis orthogonal to rounding.
        for _ in 0..2 {
            for b in &basis {
                let dot: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
                for (x, y) in v.iter_mut().zip(b) {
                    *x -= dot * y;
                }
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm < 1e-8 {
            continue;
        }
        v.iter_mut().for_each(|x| *x /= norm);
        basis.push(v);
    }
    let mut out = vec![0.0; rows * cols];
    for r in 0..rows {
        for c in 0..cols {
            out[r * cols + c] = if rows <= cols { basis[r][c] } else { basis[c][r] };
        }
    }
    out
}
