//! Distill a mixture of network policies into one student and compare it to
//! parameter fusion by KL to the ensemble.
//!
//! cargo run --release --example distill_ensemble

use std::sync::Arc;

use fusion_psro::games::GameSpec;
use fusion_psro::policies::{
    distill, fuse_parameters, kl_to_ensemble, scratch_init, ArchSignature, InitKind, KlDirection, Policy,
    PolicyMixture,
};

fn main() -> fusion_psro::Result<()> {
    let game = GameSpec::new("kuhn_poker").build()?;
    let sig = ArchSignature::for_game(game.as_ref(), &[16])?;
    let members: Vec<_> = (0..3)
        .map(|s| scratch_init(InitKind::Kaiming, &sig, s))
        .collect::<Result<_, _>>()?;
    let weights = vec![0.5, 0.25, 0.25];
    let mixture = PolicyMixture::new(
        members.iter().cloned().map(|p| Arc::new(Policy::Parametric(p))).collect(),
        weights.clone(),
    )?;

    let refs: Vec<_> = members.iter().collect();
    let fused = Policy::Parametric(fuse_parameters(&refs, &weights)?);
    let report = distill(&mixture, &sig, game.as_ref(), 0, 20, 256, 0.05, 7)?;
    println!(
        "distillation loss {:.4} -> {:.4}",
        report.epoch_losses.first().copied().unwrap_or(f64::NAN),
        report.epoch_losses.last().copied().unwrap_or(f64::NAN)
    );
    let student = Policy::Parametric(report.student);
    for (name, candidate) in [("fusion", &fused), ("distilled", &student)] {
        let kl = kl_to_ensemble(candidate, &mixture, game.as_ref(), 0, 64, 3, KlDirection::default());
        println!("{name:<10} KL to ensemble {kl:.5}");
    }
    Ok(())
}
