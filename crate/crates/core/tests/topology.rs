use std::collections::HashSet;

use acmn::topology::{generate_acmn, generate_acmn_with, load_nsfnet, node_pairs, GenerationMode, GeneratorConfig};
use proptest::prelude::*;

fn nsfnet_degrees() -> Vec<usize> {
    load_nsfnet().0.degrees()
}

#[test]
fn ten_thousand_seeds_are_valid_meshes() {
    let degrees = nsfnet_degrees();
    for seed in 0..10_000u64 {
        let t = generate_acmn(seed).unwrap();
        assert_eq!(t.node_count, 14);
        assert_eq!(t.link_count(), 21);
        t.check_mesh().unwrap();
        assert_eq!(t.degrees().iter().sum::<usize>(), 42);
        assert_eq!(t.degrees(), degrees, "edge swaps keep the degree sequence");
        assert_eq!(t.canonical_links().windows(2).filter(|w| w[0] == w[1]).count(), 0);
    }
}

#[test]
fn distinct_edge_sets() {
    let sets: HashSet<_> = (0..1000u64).map(|s| generate_acmn(s).unwrap().canonical_links()).collect();
    let dup = 1000 - sets.len();
    println!("{dup} duplicate edge sets in 1000 seeds");
    assert!(sets.len() >= 990);
}

#[test]
fn uniform_mode_is_valid_too() {
    let cfg = GeneratorConfig {
        mode: GenerationMode::UniformRandom,
        ..GeneratorConfig::default()
    };
    for seed in 0..500u64 {
        let t = generate_acmn_with(seed, &cfg).unwrap();
        assert_eq!(t.link_count(), 21);
        t.check_mesh().unwrap();
    }
}

#[test]
fn nsfnet_reference() {
    let (t, km) = load_nsfnet();
    assert_eq!((t.node_count, t.link_count()), (14, 21));
    assert_eq!(node_pairs(&t).len(), 91);
    let mean = km.iter().sum::<f64>() / km.len() as f64;
    assert!((mean - 1463.0).abs() < 0.5);
}

proptest! {
    #[test]
    fn same_seed_same_topology(seed in any::<u64>()) {
        prop_assert_eq!(generate_acmn(seed).unwrap(), generate_acmn(seed).unwrap());
    }
}
