//! Parameter fusion of network policies and the checkpoint round trip.
//!
//! cargo run --example policy_checkpoint

use fusion_psro::games::GameSpec;
use fusion_psro::policies::{
    fuse_parameters, load_checkpoint, save_checkpoint, scratch_init, ArchSignature, InitKind,
};

fn main() -> fusion_psro::Result<()> {
    let game = GameSpec::new("kuhn_poker").build()?;
    let sig = ArchSignature::for_game(game.as_ref(), &[16])?;
    println!("architecture {sig:?}: {} parameters", sig.num_params());

    let members: Vec<_> = [InitKind::Normal, InitKind::Orthogonal, InitKind::Kaiming]
        .into_iter()
        .enumerate()
        .map(|(i, kind)| scratch_init(kind, &sig, i as u64))
        .collect::<Result<_, _>>()?;
    let refs: Vec<_> = members.iter().collect();

    let fused = fuse_parameters(&refs, &[0.5, 0.3, 0.2])?;
    let direct: f64 = 0.5 * members[0].theta()[0] + 0.3 * members[1].theta()[0] + 0.2 * members[2].theta()[0];
    println!("fused θ[0] = {:.6} (weighted sum {:.6})", fused.theta()[0], direct);

    let copy = fuse_parameters(&refs, &[0.0, 1.0, 0.0])?;
    println!("one-hot fusion is an exact copy: {}", copy == members[1]);

    let path = std::env::temp_dir().join("fusion_psro_checkpoint.json");
    save_checkpoint(&fused, &path)?;
    let loaded = load_checkpoint(&path)?;
    println!("checkpoint {} round-trips: {}", path.display(), loaded == fused);
    Ok(())
}
