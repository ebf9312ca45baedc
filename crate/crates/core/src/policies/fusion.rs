use std::collections::BTreeMap;

use super::{ParametricPolicy, PointPolicy, TabularPolicy};
use crate::error::{Error, Result};

pub const FUSION_TOLERANCE: f64 = 1e-6;

pub fn validate_simplex(weights: &[f64], tol: f64) -> Result<()> {
    if weights.is_empty() {
        return Err(Error::InvalidWeights("empty weight vector".into()));
    }
    if let Some((i, w)) = weights
        .iter()
        .enumerate()
        .find(|(_, w)| !w.is_finite() || **w < -tol)
    {
        return Err(Error::InvalidWeights(format!("weight {i} is {w}")));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > tol {
        return Err(Error::InvalidWeights(format!("weights sum to {total}")));
    }
    Ok(())
}

fn check_lengths(n: usize, weights: &[f64]) -> Result<()> {
    if n == 0 {
        return Err(Error::EmptyPopulation);
    }
    if n != weights.len() {
        return Err(Error::InvalidWeights(format!(
            "{n} policies but {} weights",
            weights.len()
        )));
    }
    validate_simplex(weights, FUSION_TOLERANCE)
}

/// Weighted sum of parameter vectors in population order. Zero-weight terms
/// are skipped, so a one-hot weight vector reproduces its member bit for bit.
pub fn fuse_parameters(policies: &[&ParametricPolicy], weights: &[f64]) -> Result<ParametricPolicy> {
    check_lengths(policies.len(), weights)?;
    let sig = policies[0].signature();
    if let Some(other) = policies.iter().find(|p| p.signature() != sig) {
        return Err(Error::SignatureMismatch(format!(
            "{:?} vs {:?}",
            sig,
            other.signature()
        )));
    }
    let mut theta: Option<Vec<f64>> = None;
    for (p, &w) in policies.iter().zip(weights) {
        if w == 0.0 {
            continue;
        }
        match theta.as_mut() {
            None => theta = Some(p.theta().iter().map(|v| w * v).collect()),
            Some(acc) => {
                for (a, v) in acc.iter_mut().zip(p.theta()) {
                    *a += w * v;
                }
            }
        }
    }
    let theta = theta.unwrap_or_else(|| vec![0.0; sig.num_params()]);
    ParametricPolicy::new(sig.clone(), theta)
}

pub fn fuse_points(points: &[PointPolicy], weights: &[f64]) -> Result<PointPolicy> {
    check_lengths(points.len(), weights)?;
    let mut x: Option<[f64; 2]> = None;
    for (p, &w) in points.iter().zip(weights) {
        if w == 0.0 {
            continue;
        }
        x = Some(match x {
            None => [w * p.x[0], w * p.x[1]],
            Some(a) => [a[0] + w * p.x[0], a[1] + w * p.x[1]],
        });
    }
    Ok(PointPolicy::new(x.unwrap_or([0.0, 0.0])))
}

/// Per-infoset weighted average of action distributions over the union of
/// keys; a member without an entry contributes its uniform default.
pub fn fuse_tabular(policies: &[&TabularPolicy], weights: &[f64]) -> Result<TabularPolicy> {
    check_lengths(policies.len(), weights)?;
    let mut sizes: BTreeMap<&str, usize> = BTreeMap::new();
    for p in policies {
        for (k, v) in &p.table {
            sizes.entry(k.as_str()).or_insert(v.len());
        }
    }
    let mut out = TabularPolicy::new();
    for (key, n) in sizes {
        let mut row: Option<Vec<f64>> = None;
        for (p, &w) in policies.iter().zip(weights) {
            if w == 0.0 {
                continue;
            }
            let probs = p.probs(key, n);
            match row.as_mut() {
                None => row = Some(probs.iter().map(|v| w * v).collect()),
                Some(acc) => {
                    for (a, v) in acc.iter_mut().zip(&probs) {
                        *a += w * v;
                    }
                }
            }
        }
        if let Some(row) = row {
            out.table.insert(key.to_string(), row);
        }
    }
    Ok(out)
}
