//! Lists NSR-ranked candidate routes for one NSFNET node pair and shows which
//! survive the throughput relaxation at several x.

use acmn::geometry::PhysicalTopology;
use acmn::physlayer::PhysicalLayer;
use acmn::routing::{k_shortest_nsr_paths, link_weights, relax_filter, DEFAULT_K};
use acmn::topology::NodePair;

fn main() -> acmn::Result<()> {
    let pt = PhysicalTopology::nsfnet();
    let layer = PhysicalLayer::new(Default::default(), Default::default())?;
    let weights = link_weights(&pt, &layer);
    let pair = NodePair::new(0, 13);
    let paths = k_shortest_nsr_paths(&pt, &weights, pair, DEFAULT_K, &layer.grid)?;
    for (i, p) in paths.iter().enumerate() {
        let km: f64 = p.links.iter().map(|&l| pt.link_km[l]).sum();
        println!(
            "{i}: {:?}  {km:.0} km  SNR {:.2} dB  {:.1} Gb/s",
            p.nodes,
            -10.0 * p.nsr.log10(),
            p.capacity_bps / 1e9
        );
    }
    for x in [1.0, 0.9, 0.8, 0.7] {
        println!("x = {x}: {} candidates kept", relax_filter(pair, &paths, x)?.candidates.len());
    }
    Ok(())
}
