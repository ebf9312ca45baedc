//! Double oracle: population growth with exact best responses on Kuhn poker.
//!
//! cargo run --release --example kuhn_double_oracle

use fusion_psro::games::GameSpec;
use fusion_psro::oracles::OracleSpec;
use fusion_psro::psro::{run_psro, PsroConfig};

fn main() -> fusion_psro::Result<()> {
    let config = PsroConfig::new(GameSpec::new("kuhn_poker"), OracleSpec::Exact, 12);
    let history = run_psro(&config, 0)?;
    println!("initial exploitability {:.6}", history.initial_exploitability.unwrap_or(f64::NAN));
    for r in &history.records {
        println!(
            "iter {:>2}  pop {:>2}x{:<2}  exploitability {:.6}",
            r.iteration,
            r.pop_sizes[0],
            r.pop_sizes[1],
            r.exploitability.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
