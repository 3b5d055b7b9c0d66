//! Compares the closed-form NLI coefficient with the numeric GN integral for
//! a few link loads, then shows LOGON power and span SNR at full load.

use std::time::Instant;

use acmn::physlayer::{
    ase_power_per_span, logon_power, nli_eta_closed_form, nli_eta_numeric, ChannelGrid,
    FiberParams, LinkLoad, NumericOptions, PhysicalLayer,
};

fn db(x: f64) -> f64 {
    10.0 * x.log10()
}

fn main() -> acmn::Result<()> {
    let params = FiberParams::default();
    let grid = ChannelGrid::default();
    let n = grid.channel_count();
    let centre = n / 2;
    let loads = [
        ("1 channel", LinkLoad::from_indices([centre])),
        ("2 channels", LinkLoad::from_indices([centre, centre + 1])),
        ("11 channels", LinkLoad::from_indices(centre - 5..=centre + 5)),
        ("full", LinkLoad::full(n)),
    ];
    println!("{:<12} {:>4} {:>12} {:>12} {:>8}", "load", "ch", "closed", "numeric", "dB");
    for (name, load) in &loads {
        let edge = load.first().expect("nonempty load");
        let channels = if edge == centre { vec![centre] } else { vec![edge, centre] };
        for ch in channels {
            let t = Instant::now();
            let cf = nli_eta_closed_form(&params, &grid, load, ch)?;
            let num = nli_eta_numeric(&params, &grid, load, ch, &NumericOptions::default())?;
            println!(
                "{name:<12} {ch:>4} {cf:>12.3} {:>12.3} {:>+8.3}   ({:.2?})",
                num.eta,
                db(cf / num.eta),
                t.elapsed()
            );
        }
    }

    let layer = PhysicalLayer::new(params, grid)?;
    let p_ase = ase_power_per_span(&params, &grid);
    let eta = nli_eta_closed_form(&params, &grid, &LinkLoad::full(n), centre)?;
    let p = logon_power(p_ase, eta);
    println!("P_ASE = {:.2} dBm, P_opt = {:.2} dBm", db(p_ase * 1e3), db(p * 1e3));
    println!("worst full-load span SNR = {:.2} dB", -db(layer.full_load_span_nsr()));
    Ok(())
}
