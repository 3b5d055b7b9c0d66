//! Solves NSFNET with its embedded link lengths and prints the best
//! relaxation value, lightpaths per pair and throughput.

use std::time::Instant;

use acmn::experiments::{default_x_grid, solve_instance};
use acmn::geometry::{normalized_diameter, PhysicalTopology};
use acmn::physlayer::PhysicalLayer;
use acmn::rwa::RwaConfig;

fn main() -> acmn::Result<()> {
    let pt = PhysicalTopology::nsfnet();
    let layer = PhysicalLayer::new(Default::default(), Default::default())?;
    println!(
        "NSFNET: {} nodes, {} links, mean link {:.1} km, D = {:.3}",
        pt.logical.node_count,
        pt.logical.link_count(),
        pt.mean_link_km(),
        normalized_diameter(&pt)?
    );
    let start = Instant::now();
    let sol = solve_instance(&pt, &default_x_grid(), 10, 1, &layer, &RwaConfig::default())?;
    for o in &sol.per_x {
        println!(
            "x = {:.2}: N_lambda {:>3}  total {:>7.2} Tb/s  avg {:>6.1} Gb/s  max occupancy {}",
            o.x,
            o.n_lambda,
            o.total_bps / 1e12,
            o.avg_bps / 1e9,
            o.max_link_occupancy
        );
    }
    println!("best x = {:.2} ({:.2?})", sol.best.x, start.elapsed());
    Ok(())
}
