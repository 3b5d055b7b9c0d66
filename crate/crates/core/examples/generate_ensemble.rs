//! Generates a few NSFNET-like logical topologies and reports how far each
//! drifted from the reference link set.

use std::collections::BTreeSet;

use acmn::topology::{generate_acmn_with, load_nsfnet, GenerationMode, GeneratorConfig};

fn main() -> acmn::Result<()> {
    let (nsf, _) = load_nsfnet();
    let reference: BTreeSet<_> = nsf.canonical_links().into_iter().collect();
    for (label, mode) in [
        ("edge swap", GenerationMode::default()),
        ("uniform", GenerationMode::UniformRandom),
    ] {
        let cfg = GeneratorConfig { mode, ..GeneratorConfig::default() };
        println!("{label}:");
        for seed in 0..5 {
            let t = generate_acmn_with(seed, &cfg)?;
            let shared = t.canonical_links().iter().filter(|l| reference.contains(l)).count();
            println!(
                "  seed {seed}: {} links, degrees {:?}, {shared}/21 links shared with NSFNET",
                t.link_count(),
                t.degrees()
            );
        }
    }
    Ok(())
}
