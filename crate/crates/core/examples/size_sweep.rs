//! A reduced size sweep: mean lightpaths, average and total throughput
//! against mean link distance, with the log-law fit of the average.

use acmn::analytics::linear_fit;
use acmn::experiments::{sweep_scale, SweepConfig};

fn main() -> acmn::Result<()> {
    let cfg = SweepConfig {
        topologies: 4,
        realisations: 2,
        ..SweepConfig::default()
    };
    let res = sweep_scale(&cfg)?;
    println!("{:>8} {:>9} {:>18} {:>18}", "d [km]", "N_lambda", "avg [Gb/s]", "total [Tb/s]");
    for p in &res.points {
        println!(
            "{:>8.0} {:>9.2} {:>7.1} ({:>5.1}-{:>5.1}) {:>7.1} ({:>5.1}-{:>5.1})",
            p.axis_value,
            p.n_lambda.mean,
            p.avg_gbps.mean,
            p.avg_gbps.p16,
            p.avg_gbps.p84,
            p.total_tbps.mean,
            p.total_tbps.p16,
            p.total_tbps.p84
        );
    }
    let x: Vec<f64> = res.points.iter().map(|p| p.axis_value.log2()).collect();
    let y: Vec<f64> = res.points.iter().map(|p| p.avg_gbps.mean).collect();
    let fit = linear_fit(&x, &y)?;
    println!(
        "avg ≈ {:.1}·log2(d) + {:.1} Gb/s, R² = {:.4}",
        fit.slope, fit.intercept, fit.r_squared
    );
    Ok(())
}
