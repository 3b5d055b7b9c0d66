//! Fits the link-distance density to NSFNET, draws distances for a generated
//! topology, rescales them, and rejection-samples a target ellipticity.

use acmn::geometry::{
    assign_distances, assign_with_ellipticity, fit_kde, normalized_diameter, pair_distance_stats,
    scale_to_mean, EllipticityTarget, ELLIPTICITY_BUDGET,
};
use acmn::topology::{generate_acmn, load_nsfnet};

fn main() -> acmn::Result<()> {
    let (_, km) = load_nsfnet();
    let pdf = fit_kde(&km)?;
    println!("KDE bandwidth {:.1} km over {} samples", pdf.bandwidth, km.len());

    let t = generate_acmn(7)?;
    let pt = assign_distances(&t, &pdf, 7);
    println!("drawn: mean link {:.0} km, D = {:.3}", pt.mean_link_km(), normalized_diameter(&pt)?);
    for target in [640.0, 3040.0] {
        let s = scale_to_mean(&pt, target)?;
        let spans: usize = s.link_spans.iter().sum();
        println!("scaled to {target} km: {spans} spans in total, D = {:.3}", normalized_diameter(&s)?);
    }

    for d in [1.7, 2.3, 3.0] {
        let target = EllipticityTarget::new(d, 0.02, 3070.0)?;
        let draw = assign_with_ellipticity(&t, &target, &pdf, 11, ELLIPTICITY_BUDGET)?;
        let (diam, mean) = pair_distance_stats(&draw.topology.logical, &draw.topology.link_km)?;
        println!(
            "D target {d}: accepted after {} draws, diameter {diam:.0} km, mean pair {mean:.0} km",
            draw.attempts
        );
    }
    Ok(())
}
