//! Closed-form GN-model NLI coefficient for rectangular Nyquist spectra with
//! incoherent span accumulation and no inter-channel Raman scattering.
//!
//! Self-channel interference follows an asinh law in the channel bandwidth,
//! each co-propagating channel adds an arctan term that decays with its
//! frequency separation. Both are asymptotic in the span length
//! (`exp(-αL) ≪ 1`).

use std::f64::consts::PI;

use super::{beta2, ChannelGrid, FiberParams, LinkLoad};
use crate::error::{Error, Result};

/// `asinh(k·x)/x`, continuous at `x = 0`.
fn asinh_ratio(k: f64, x: f64) -> f64 {
    if x.abs() < 1e-300 {
        k
    } else {
        (k * x).asinh() / x
    }
}

fn atan_ratio(k: f64, x: f64) -> f64 {
    if x.abs() < 1e-300 {
        k
    } else {
        (k * x).atan() / x
    }
}

/// SPM term and XPM terms indexed by channel distance, in 1/W² per span.
#[derive(Debug, Clone, PartialEq)]
pub struct NliCoefficients {
    pub spm: f64,
    /// `xpm[d]` is the contribution of an interferer `d` channels away;
    /// `xpm[0]` is zero.
    pub xpm: Vec<f64>,
}

impl NliCoefficients {
    pub fn new(params: &FiberParams, grid: &ChannelGrid) -> Self {
        let alpha = params.alpha_per_m();
        let gamma = params.gamma_per_w_m();
        let b2 = beta2(params).abs();
        let bw = grid.symbol_rate_hz();
        let n = grid.channel_count();

        // (8/27) γ² asinh(3/2 π |β₂| B² / α) / (π |β₂| α B²)
        let spm = 8.0 / 27.0 * gamma * gamma / (PI * alpha * bw * bw)
            * asinh_ratio(1.5 * PI * bw * bw / alpha, b2);

        let mut xpm = vec![0.0; n.max(1)];
        for (d, x) in xpm.iter_mut().enumerate().skip(1) {
            let df = d as f64 * grid.spacing_hz();
            // (32/27) γ² atan(φ B / α) / (B φ α),  φ = 2π² Δf |β₂|
            let phi_per_b2 = 2.0 * PI * PI * df;
            *x = 32.0 / 27.0 * gamma * gamma / (bw * alpha * phi_per_b2)
                * atan_ratio(phi_per_b2 * bw / alpha, b2);
        }
        NliCoefficients { spm, xpm }
    }

    /// Per-span η of `channel` given the occupied set.
    pub fn eta(&self, load: &LinkLoad, channel: usize) -> Result<f64> {
        if !load.contains(channel) {
            return Err(Error::ChannelNotLoaded(channel));
        }
        let mut eta = self.spm;
        for k in load.iter() {
            if k != channel {
                eta += self.xpm[k.abs_diff(channel)];
            }
        }
        Ok(eta)
    }

    /// η of every occupied channel, ascending channel order.
    pub fn etas(&self, load: &LinkLoad) -> Vec<f64> {
        load.iter()
            .map(|i| self.eta(load, i).expect("channel is loaded"))
            .collect()
    }
}

/// Closed-form per-span NLI coefficient η (P_NLI = η P³, 1/W²).
pub fn nli_eta_closed_form(
    params: &FiberParams,
    grid: &ChannelGrid,
    load: &LinkLoad,
    channel: usize,
) -> Result<f64> {
    NliCoefficients::new(params, grid).eta(load, channel)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_channel_is_spm_only() {
        let p = FiberParams::default();
        let g = ChannelGrid::default();
        let c = NliCoefficients::new(&p, &g);
        let load = LinkLoad::from_indices([78]);
        assert_eq!(nli_eta_closed_form(&p, &g, &load, 78).unwrap(), c.spm);
        assert!(nli_eta_closed_form(&p, &g, &load, 77).is_err());
    }

    #[test]
    fn centre_exceeds_edge_under_full_load() {
        let p = FiberParams::default();
        let g = ChannelGrid::default();
        let full = LinkLoad::full(156);
        let centre = nli_eta_closed_form(&p, &g, &full, 78).unwrap();
        let edge = nli_eta_closed_form(&p, &g, &full, 0).unwrap();
        assert!(centre > edge);
        let etas = NliCoefficients::new(&p, &g).etas(&full);
        assert!((etas[78] - centre).abs() < 1e-12 * centre);
    }

    #[test]
    fn zero_gamma_and_zero_dispersion() {
        let g = ChannelGrid::default();
        let p = FiberParams {
            gamma_per_w_km: 0.0,
            ..Default::default()
        };
        let full = LinkLoad::full(156);
        assert_eq!(nli_eta_closed_form(&p, &g, &full, 10).unwrap(), 0.0);
        let p = FiberParams {
            dispersion_ps_per_nm_km: 0.0,
            ..Default::default()
        };
        let eta = nli_eta_closed_form(&p, &g, &full, 10).unwrap();
        assert!(eta.is_finite() && eta > 0.0);
    }
}
