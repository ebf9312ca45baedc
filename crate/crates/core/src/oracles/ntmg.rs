use crate::games::ntmg::{ntmg_mixture_gradient, NtmgConfig, Point};
use crate::policies::PointPolicy;

/// Gradient ascent on the expected payoff against a weighted set of
/// opponent points. Returns the final point and every visited point,
/// starting with `init`.
pub fn ntmg_oracle(
    init: PointPolicy,
    opponents: &[(PointPolicy, f64)],
    steps: usize,
    lr: f64,
    cfg: &NtmgConfig,
) -> (PointPolicy, Vec<Point>) {
    let opp: Vec<(Point, f64)> = opponents.iter().map(|(p, w)| (p.x, *w)).collect();
    let mut x = cfg.clamp(init.x);
    let mut path = Vec::with_capacity(steps + 1);
    path.push(x);
    for _ in 0..steps {
        let g = ntmg_mixture_gradient(x, &opp, cfg);
        x = cfg.clamp([x[0] + lr * g[0], x[1] + lr * g[1]]);
        path.push(x);
    }
    (PointPolicy::new(x), path)
}
