mod common;

use common::{max_pure_deviation, random_int_matrix, rng, rps, support_enumeration_value};
use fusion_psro::meta::{matrix_exploitability, project_floored_simplex, solve, solve_fp, solve_nash_lp, solve_prd, MssKind};
use proptest::prelude::*;
use rand::Rng;

#[test]
fn lp_has_no_profitable_deviation_on_random_matrices() {
    let mut r = rng(11);
    for _ in 0..200 {
        let (rows, cols) = (r.random_range(2..=8), r.random_range(2..=8));
        let m = random_int_matrix(&mut r, rows, cols);
        let ne = solve_nash_lp(&m).unwrap();
        let dev = max_pure_deviation(&m, &ne.row, &ne.col);
        assert!(dev <= 1e-8, "deviation {dev} on {m:?}");
    }
}

#[test]
fn lp_value_matches_support_enumeration() {
    let mut r = rng(12);
    for _ in 0..200 {
        let (rows, cols) = (r.random_range(2..=4), r.random_range(2..=4));
        let m = random_int_matrix(&mut r, rows, cols);
        let lp = solve_nash_lp(&m).unwrap().value;
        let se = support_enumeration_value(&m);
        assert!((lp - se).abs() <= 1e-8, "{lp} vs {se} on {m:?}");
    }
}

#[test]
fn zero_sum_duality() {
    let mut r = rng(13);
    for _ in 0..100 {
        let (rows, cols) = (r.random_range(2..=8), r.random_range(2..=8));
        let m = random_int_matrix(&mut r, rows, cols);
        // The column player's game, seen as a row player.
        let dual: Vec<Vec<f64>> = (0..cols).map(|c| (0..rows).map(|i| -m[i][c]).collect()).collect();
        let v = solve_nash_lp(&m).unwrap().value;
        let w = solve_nash_lp(&dual).unwrap().value;
        assert!((v + w).abs() <= 1e-8, "{v} vs {w}");
    }
}

#[test]
fn dispatcher_examples() {
    let m = vec![vec![0.0; 4]; 4];
    assert_eq!(solve(&m, &MssKind::Uniform).unwrap().0, vec![0.25; 4]);
    for kind in [MssKind::Nash, MssKind::prd_default()] {
        let (x, y) = solve(&rps(), &kind).unwrap();
        for p in x.iter().chain(&y) {
            assert!((p - 1.0 / 3.0).abs() < 1e-9);
        }
    }
}

#[test]
fn prd_converges_on_matching_pennies() {
    let m = vec![vec![1.0, -1.0], vec![-1.0, 1.0]];
    let (x, y) = solve_prd(&m, 0.0, 1e-3, 100_000);
    assert!((x[0] - 0.5).abs() < 0.05 && (y[0] - 0.5).abs() < 0.05);
}

#[test]
fn fictitious_play_improves_with_iterations() {
    let mut r = rng(14);
    let m = random_int_matrix(&mut r, 6, 6);
    let e: Vec<f64> = [10, 100, 1_000, 10_000]
        .iter()
        .map(|&n| {
            let (x, y) = solve_fp(&m, n);
            matrix_exploitability(&m, &x, &y)
        })
        .collect();
    assert!(e[3] < e[0], "{e:?}");
    assert!(e[3] < 10.0 / (10_000f64).sqrt(), "{e:?}");
}

fn matrix_strategy() -> impl Strategy<Value = Vec<Vec<f64>>> {
    (2usize..6, 2usize..6).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-5.0..5.0f64, c), r))
}

proptest! {
    #[test]
    fn prd_respects_floor_and_simplex(m in matrix_strategy(), gamma in 0.0..0.1f64) {
        let (x, y) = solve_prd(&m, gamma, 1e-2, 500);
        for v in [&x, &y] {
            prop_assert!((v.iter().sum::<f64>() - 1.0).abs() < 1e-9);
            prop_assert!(v.iter().all(|&p| p >= gamma - 1e-12));
        }
    }

    #[test]
    fn projection_is_idempotent(v in prop::collection::vec(-3.0..3.0f64, 2..8), gamma in 0.0..0.1f64) {
        let p = project_floored_simplex(&v, gamma);
        let q = project_floored_simplex(&p, gamma);
        for (a, b) in p.iter().zip(&q) {
            prop_assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn lp_value_is_bounded_by_pure_security_levels(m in matrix_strategy()) {
        let v = solve_nash_lp(&m).unwrap().value;
        let maximin = m.iter().map(|r| r.iter().copied().fold(f64::INFINITY, f64::min)).fold(f64::NEG_INFINITY, f64::max);
        let minimax = (0..m[0].len()).map(|c| m.iter().map(|r| r[c]).fold(f64::NEG_INFINITY, f64::max)).fold(f64::INFINITY, f64::min);
        prop_assert!(maximin - 1e-9 <= v && v <= minimax + 1e-9);
    }
}
