//! Packs lightpaths onto NSFNET for one relaxation value, validates the
//! result and writes the solution files to a temporary directory.

use acmn::experiments::{candidate_pools, demands_for_x};
use acmn::geometry::PhysicalTopology;
use acmn::io::write_solution;
use acmn::physlayer::PhysicalLayer;
use acmn::rwa::{final_throughput, maximize_lambda, validate_solution, RwaConfig};

fn main() -> acmn::Result<()> {
    let pt = PhysicalTopology::nsfnet();
    let layer = PhysicalLayer::new(Default::default(), Default::default())?;
    let pools = candidate_pools(&pt, &layer, 10)?;
    let demands = demands_for_x(&pools, 0.8)?;
    let routes: usize = demands.iter().map(|d| d.candidates.len()).sum();
    println!("{} pairs, {routes} candidate routes at x = 0.8", demands.len());

    let (n, sol) = maximize_lambda(&demands, pt.logical.link_count(), &RwaConfig::default(), 1)?;
    let sol = final_throughput(&sol, &pt, &layer);
    let report = validate_solution(&sol, &pt.logical, Some(&demands));
    println!(
        "N_lambda = {n}, max link occupancy {}, {} violations",
        sol.max_link_occupancy(),
        report.violations.len()
    );
    let worst = sol.capacity_bps.iter().copied().fold(f64::INFINITY, f64::min);
    println!(
        "total {:.2} Tb/s, average {:.1} Gb/s, worst lightpath {:.1} Gb/s",
        sol.total_bps / 1e12,
        sol.avg_bps / 1e9,
        worst / 1e9
    );

    let dir = std::env::temp_dir().join("acmn-rwa-example");
    std::fs::create_dir_all(&dir).map_err(|e| acmn::Error::io(&dir, e))?;
    write_solution(&dir, &sol)?;
    println!("wrote {}", dir.join("solution.tsv").display());
    Ok(())
}
