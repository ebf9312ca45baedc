//! Solve small zero-sum matrix games with each meta-strategy solver.
//!
//! cargo run --example solve_matrix_game

use fusion_psro::meta::{matrix_exploitability, solve, solve_nash_lp, MssKind};

fn main() -> fusion_psro::Result<()> {
    let rps = vec![
        vec![0.0, -1.0, 1.0],
        vec![1.0, 0.0, -1.0],
        vec![-1.0, 1.0, 0.0],
    ];
    let biased = vec![vec![3.0, -1.0], vec![-2.0, 1.0]];

    for (name, m) in [("rock-paper-scissors", &rps), ("biased 2x2", &biased)] {
        let ne = solve_nash_lp(m)?;
        println!("{name}: value {:.4}", ne.value);
        for kind in [
            MssKind::Nash,
            MssKind::prd_default(),
            MssKind::FictitiousPlay { iters: 10_000 },
            MssKind::Uniform,
        ] {
            let (row, col) = solve(m, &kind)?;
            println!(
                "  {:<16} row {:?} col {:?} exploitability {:.2e}",
                format!("{kind:?}").split_whitespace().next().unwrap_or(""),
                rounded(&row),
                rounded(&col),
                matrix_exploitability(m, &row, &col)
            );
        }
    }
    Ok(())
}

fn rounded(v: &[f64]) -> Vec<f64> {
    v.iter().map(|x| (x * 1e4).round() / 1e4).collect()
}
