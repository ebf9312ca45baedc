use super::Trajectory;
use crate::games::Game;
use crate::policies::{ensemble_distribution, kl_floored, Policy, PolicyMixture};

/// min over hull samples of the mean per-step KL(new ‖ hull sample), the
/// floor applied to the hull side.
pub fn hull_divergence(
    traj: &Trajectory,
    new_policy: &Policy,
    hull: &[PolicyMixture],
    game: &dyn Game,
    player: usize,
) -> f64 {
    if traj.steps.is_empty() || hull.is_empty() {
        return 0.0;
    }
    let new: Vec<Vec<f64>> = traj
        .steps
        .iter()
        .map(|s| new_policy.soft_probs(game, &s.state, player))
        .collect();
    hull.iter()
        .map(|h| {
            let total: f64 = traj
                .steps
                .iter()
                .zip(&new)
                .map(|(s, p)| kl_floored(p, &ensemble_distribution(h, game, &s.state, player)))
                .sum();
            total / traj.steps.len() as f64
        })
        .fold(f64::INFINITY, f64::min)
}

/// Per-step rewards with the diversity bonus `λ·R^kl(τ)` discounted back from
/// the final step and added to each extrinsic reward.
pub fn psd_intrinsic_reward(
    traj: &Trajectory,
    new_policy: &Policy,
    hull: &[PolicyMixture],
    lambda: f64,
    gamma_discount: f64,
    game: &dyn Game,
    player: usize,
) -> Vec<f64> {
    let extrinsic = traj.steps.iter().map(|s| s.reward);
    if lambda == 0.0 {
        return extrinsic.collect();
    }
    let bonus = lambda * hull_divergence(traj, new_policy, hull, game, player);
    let last = traj.steps.len().saturating_sub(1);
    extrinsic
        .enumerate()
        .map(|(t, r)| r + gamma_discount.powi((last - t) as i32) * bonus)
        .collect()
}
