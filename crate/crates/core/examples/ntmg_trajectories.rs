//! Gradient best responses in the non-transitive mixture game, comparing
//! fusion against inheriting the latest point, and plotting the paths.
//!
//! cargo run --release --example ntmg_trajectories

use fusion_psro::experiment::plot::{render_svg, PlotKind};
use fusion_psro::experiment::run_config;
use fusion_psro::games::GameSpec;
use fusion_psro::oracles::OracleSpec;
use fusion_psro::psro::{InitMethod, PsroConfig};

fn main() -> fusion_psro::Result<()> {
    let base = std::env::temp_dir().join("fusion_psro_ntmg");
    for (name, init) in [("fusion", InitMethod::fusion()), ("inherit", InitMethod::InheritLatest)] {
        let mut config = PsroConfig::new(
            GameSpec::new("ntmg"),
            OracleSpec::Gradient { steps: 20, lr: 0.5 },
            20,
        );
        config.init = init.into();
        let dir = base.join(name);
        let h = run_config(&config, &dir)?.remove(0);
        let run = fusion_psro::experiment::seed_dir(&dir, h.seed);
        let svg = base.join(format!("{name}.svg"));
        render_svg(PlotKind::Trajectories, &[run.join("trajectories.csv")], &svg)?;
        println!(
            "{name:<8} final exploitability {:.4}, trajectories in {}",
            h.final_exploitability().unwrap_or(f64::NAN),
            svg.display()
        );
    }
    Ok(())
}
