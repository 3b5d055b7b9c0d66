//! Per-channel noise-to-signal ratios from ASE and GN-model nonlinear
//! interference, with LOGON launch power and Shannon capacity.

mod channels;
mod closed_form;
mod numeric;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use channels::{ChannelSet, LinkLoad, MAX_CHANNELS};
pub use closed_form::{nli_eta_closed_form, NliCoefficients};
pub use numeric::{nli_eta_numeric, NumericEta, NumericOptions};

/// Planck constant (J·s).
pub const PLANCK: f64 = 6.626_070_15e-34;
/// Speed of light in vacuum (m/s).
pub const LIGHT_SPEED: f64 = 299_792_458.0;

/// Standard single-mode fibre and amplifier parameters, in the units
/// engineers quote them in. SI conversions are provided as methods.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FiberParams {
    pub alpha_db_per_km: f64,
    pub dispersion_ps_per_nm_km: f64,
    pub gamma_per_w_km: f64,
    pub span_km: f64,
    pub nf_db: f64,
    pub wavelength_nm: f64,
    /// Optical frequency used for every channel's photon energy.
    pub reference_frequency_thz: f64,
}

impl Default for FiberParams {
    fn default() -> Self {
        FiberParams {
            alpha_db_per_km: 0.2,
            dispersion_ps_per_nm_km: 18.0,
            gamma_per_w_km: 1.2,
            span_km: 80.0,
            nf_db: 4.0,
            wavelength_nm: 1550.0,
            reference_frequency_thz: 193.41,
        }
    }
}

impl FiberParams {
    pub fn validate(&self) -> Result<()> {
        let ok = self.alpha_db_per_km > 0.0
            && self.dispersion_ps_per_nm_km >= 0.0
            && self.gamma_per_w_km >= 0.0
            && self.span_km > 0.0
            && self.wavelength_nm > 0.0
            && self.reference_frequency_thz > 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::Config(format!("invalid fibre parameters {self:?}")))
        }
    }

    /// Power attenuation coefficient in 1/m.
    pub fn alpha_per_m(&self) -> f64 {
        self.alpha_db_per_km / (10.0 * std::f64::consts::LOG10_E) / 1e3
    }

    pub fn gamma_per_w_m(&self) -> f64 {
        self.gamma_per_w_km / 1e3
    }

    pub fn span_m(&self) -> f64 {
        self.span_km * 1e3
    }

    /// Linear amplifier gain that exactly compensates one span.
    pub fn span_gain(&self) -> f64 {
        10f64.powf(self.alpha_db_per_km * self.span_km / 10.0)
    }

    pub fn reference_frequency_hz(&self) -> f64 {
        self.reference_frequency_thz * 1e12
    }
}

/// Group-velocity dispersion β₂ in s²/m (negative for anomalous fibre).
pub fn beta2(params: &FiberParams) -> f64 {
    let d = params.dispersion_ps_per_nm_km * 1e-6; // s/m²
    let lambda = params.wavelength_nm * 1e-9;
    -d * lambda * lambda / (2.0 * std::f64::consts::PI * LIGHT_SPEED)
}

/// WDM grid: rectangular (Nyquist) channels of width `symbol_rate` on a
/// uniform `spacing` across `band`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ChannelGrid {
    pub symbol_rate_gbd: f64,
    pub spacing_ghz: f64,
    pub band_thz: f64,
}

impl Default for ChannelGrid {
    fn default() -> Self {
        ChannelGrid {
            symbol_rate_gbd: 32.0,
            spacing_ghz: 32.0,
            band_thz: 5.0,
        }
    }
}

impl ChannelGrid {
    /// A grid holding exactly `n` channels at the default rate and spacing.
    pub fn with_channels(n: usize) -> Self {
        let g = ChannelGrid::default();
        ChannelGrid {
            band_thz: n as f64 * g.spacing_ghz / 1e3,
            ..g
        }
    }

    pub fn channel_count(&self) -> usize {
        (self.band_thz * 1e3 / self.spacing_ghz + 1e-9).floor() as usize
    }

    pub fn symbol_rate_hz(&self) -> f64 {
        self.symbol_rate_gbd * 1e9
    }

    pub fn spacing_hz(&self) -> f64 {
        self.spacing_ghz * 1e9
    }

    /// Centre frequency of channel `i` relative to the band centre (Hz).
    pub fn offset_hz(&self, i: usize) -> f64 {
        (i as f64 - (self.channel_count() as f64 - 1.0) / 2.0) * self.spacing_hz()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.channel_count();
        if !(self.symbol_rate_gbd > 0.0) || self.spacing_ghz < self.symbol_rate_gbd {
            return Err(Error::Config(format!(
                "symbol rate must be positive and no wider than the spacing: {self:?}"
            )));
        }
        if n == 0 || n > MAX_CHANNELS {
            return Err(Error::Config(format!(
                "grid yields {n} channels, supported range is 1..={MAX_CHANNELS}"
            )));
        }
        Ok(())
    }
}

/// ASE power per span within one channel's matched bandwidth (W).
pub fn ase_power_per_span(params: &FiberParams, grid: &ChannelGrid) -> f64 {
    let nf = 10f64.powf(params.nf_db / 10.0);
    nf * PLANCK * params.reference_frequency_hz() * (params.span_gain() - 1.0) * grid.symbol_rate_hz()
}

/// Launch power maximising `P / (P_ase + η P³)`.
pub fn logon_power(p_ase: f64, eta: f64) -> f64 {
    (p_ase / (2.0 * eta)).cbrt()
}

/// Link NSR for one channel at LOGON power, accumulated incoherently over `spans`.
pub fn link_nsr(
    params: &FiberParams,
    grid: &ChannelGrid,
    spans: usize,
    load: &LinkLoad,
    channel: usize,
) -> Result<f64> {
    PhysicalLayer::new(*params, *grid)?.link_nsr(spans, load, channel)
}

/// Sum of link NSRs along a lightpath.
pub fn path_nsr(link_nsrs: &[f64]) -> Result<f64> {
    if link_nsrs.is_empty() {
        return Err(Error::InvalidArgument("empty path".into()));
    }
    Ok(link_nsrs.iter().sum())
}

/// Dual-polarisation Shannon capacity in bit/s.
pub fn shannon_capacity(nsr: f64, grid: &ChannelGrid) -> f64 {
    2.0 * grid.symbol_rate_hz() * (1.0 + 1.0 / nsr).log2()
}

/// Per-channel quality of one link under a given load.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkQuality {
    pub spans: usize,
    /// Occupied channel indices, ascending.
    pub channels: Vec<usize>,
    /// NSR of each entry in `channels`.
    pub nsr: Vec<f64>,
    /// LOGON launch power (W) of each entry in `channels`.
    pub launch_power_w: Vec<f64>,
}

impl LinkQuality {
    pub fn nsr_of(&self, channel: usize) -> Option<f64> {
        self.channels
            .binary_search(&channel)
            .ok()
            .map(|k| self.nsr[k])
    }
}

/// Fibre, grid and precomputed NLI coefficients shared by every link of a
/// solve. Read-only once built.
#[derive(Debug, Clone)]
pub struct PhysicalLayer {
    pub params: FiberParams,
    pub grid: ChannelGrid,
    pub p_ase: f64,
    pub nli: NliCoefficients,
}

impl PhysicalLayer {
    pub fn new(params: FiberParams, grid: ChannelGrid) -> Result<Self> {
        params.validate()?;
        grid.validate()?;
        Ok(PhysicalLayer {
            p_ase: ase_power_per_span(&params, &grid),
            nli: NliCoefficients::new(&params, &grid),
            params,
            grid,
        })
    }

    pub fn channel_count(&self) -> usize {
        self.grid.channel_count()
    }

    /// Single-span NSR at LOGON power for a given per-span η.
    pub fn span_nsr_for_eta(&self, eta: f64) -> f64 {
        if eta == 0.0 {
            // No nonlinearity: no optimum power, SNR grows without bound.
            return 0.0;
        }
        let p = logon_power(self.p_ase, eta);
        (self.p_ase + eta * p * p * p) / p
    }

    pub fn span_nsr(&self, load: &LinkLoad, channel: usize) -> Result<f64> {
        Ok(self.span_nsr_for_eta(self.nli.eta(load, channel)?))
    }

    pub fn link_nsr(&self, spans: usize, load: &LinkLoad, channel: usize) -> Result<f64> {
        if spans == 0 {
            return Err(Error::InvalidArgument("a link has at least one span".into()));
        }
        Ok(spans as f64 * self.span_nsr(load, channel)?)
    }

    /// Worst (largest) single-span NSR across channels under full load.
    pub fn full_load_span_nsr(&self) -> f64 {
        let full = LinkLoad::full(self.channel_count());
        full.iter()
            .map(|i| self.span_nsr(&full, i).expect("channel is loaded"))
            .fold(0.0, f64::max)
    }

    /// NSR and launch power of every occupied channel on a link.
    pub fn link_quality(&self, spans: usize, load: &LinkLoad) -> LinkQuality {
        let etas = self.nli.etas(load);
        let channels: Vec<usize> = load.iter().collect();
        let mut nsr = Vec::with_capacity(channels.len());
        let mut launch = Vec::with_capacity(channels.len());
        for &eta in &etas {
            launch.push(if eta > 0.0 { logon_power(self.p_ase, eta) } else { f64::INFINITY });
            nsr.push(spans as f64 * self.span_nsr_for_eta(eta));
        }
        LinkQuality {
            spans,
            channels,
            nsr,
            launch_power_w: launch,
        }
    }

    pub fn capacity(&self, nsr: f64) -> f64 {
        shannon_capacity(nsr, &self.grid)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn beta2_reference_value() {
        let p = FiberParams::default();
        // ps²/km
        let b2 = beta2(&p) * 1e24 * 1e3;
        // Oracle: -D λ² / (2πc) = -18 * 1550² / (2π * 299792.458) ps²/km
        let oracle = -18.0 * 1550.0 * 1550.0 / (2.0 * std::f64::consts::PI * 299_792.458);
        assert!((b2 - oracle).abs() < 1e-9);
        assert!((b2 + 22.958).abs() < 1e-3);
        let zero = FiberParams {
            dispersion_ps_per_nm_km: 0.0,
            ..p
        };
        assert_eq!(beta2(&zero), 0.0);
        let double = FiberParams {
            dispersion_ps_per_nm_km: 36.0,
            ..p
        };
        assert!((beta2(&double) / beta2(&p) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn ase_reference_value() {
        let p = FiberParams::default();
        let g = ChannelGrid::default();
        // Independent arithmetic: NF 4 dB -> 2.51189, G = 10^1.6 = 39.8107,
        // hν = 6.62607015e-34 * 193.41e12 = 1.28155e-19 J.
        let oracle = 2.511_886_431_509_58 * 1.281_558_e-19 * (39.810_717_055_349_7 - 1.0) * 32e9;
        let pase = ase_power_per_span(&p, &g);
        assert!((pase / oracle - 1.0).abs() < 1e-5, "{pase} vs {oracle}");
        let dbm = 10.0 * (pase * 1e3).log10();
        assert!((dbm + 34.0).abs() < 0.05, "{dbm}");

        let flat = FiberParams { span_km: 1e-9, ..p };
        assert!(ase_power_per_span(&flat, &g) < 1e-15);
        let wide = ChannelGrid {
            symbol_rate_gbd: 64.0,
            spacing_ghz: 64.0,
            ..g
        };
        assert!((ase_power_per_span(&p, &wide) / pase - 2.0).abs() < 1e-12);
    }

    #[test]
    fn grid_has_156_channels() {
        let g = ChannelGrid::default();
        assert_eq!(g.channel_count(), 156);
        assert!((g.offset_hz(0) + 77.5 * 32e9).abs() < 1.0);
        assert!((g.offset_hz(155) - 77.5 * 32e9).abs() < 1.0);
        assert_eq!(ChannelGrid::with_channels(5).channel_count(), 5);
    }

    #[test]
    fn logon_reference_value() {
        let p = logon_power(4e-7, 1e3);
        assert!((p - 2e-10f64.cbrt()).abs() < 1e-15);
        assert!((p - 5.848e-4).abs() < 1e-6);
        let dbm = 10.0 * (p * 1e3).log10();
        assert!((dbm + 2.33).abs() < 0.01);
        assert!((logon_power(8e-7, 1e3) / p - 2f64.cbrt()).abs() < 1e-12);
    }

    #[test]
    fn shannon_values() {
        let g = ChannelGrid::default();
        assert!((shannon_capacity(1.0 / 15.0, &g) - 256e9).abs() < 1e-3);
        assert!(shannon_capacity(1e12, &g) < 1.0);
        let gain = shannon_capacity(1e-4, &g) - shannon_capacity(2e-4, &g);
        assert!((gain - 64e9).abs() < 0.01e9);
    }

    #[test]
    fn path_nsr_sums() {
        assert!((path_nsr(&[0.01, 0.02]).unwrap() - 0.03).abs() < 1e-15);
        assert_eq!(path_nsr(&[0.5]).unwrap(), 0.5);
        assert!(path_nsr(&[]).is_err());
    }

    #[test]
    fn link_nsr_spans_and_identity() {
        let p = FiberParams::default();
        let g = ChannelGrid::default();
        let layer = PhysicalLayer::new(p, g).unwrap();
        let full = LinkLoad::full(156);
        let one = layer.link_nsr(1, &full, 78).unwrap();
        let two = layer.link_nsr(2, &full, 78).unwrap();
        assert!((two - 2.0 * one).abs() <= 1e-15 * two);
        let eta = layer.nli.eta(&full, 78).unwrap();
        let pw = logon_power(layer.p_ase, eta);
        assert!((one - 1.5 * layer.p_ase / pw).abs() < 1e-12 * one);
        assert!(layer.link_nsr(0, &full, 78).is_err());
        let mut single = LinkLoad::empty();
        single.insert(3);
        assert!(matches!(layer.link_nsr(1, &single, 4), Err(Error::ChannelNotLoaded(4))));
        assert!(link_nsr(&p, &g, 18, &full, 78).unwrap() > 0.0);
    }

    #[test]
    fn link_quality_matches_pointwise() {
        let layer = PhysicalLayer::new(FiberParams::default(), ChannelGrid::default()).unwrap();
        let load = LinkLoad::from_indices([0, 5, 6, 100]);
        let q = layer.link_quality(7, &load);
        for &c in &q.channels {
            let direct = layer.link_nsr(7, &load, c).unwrap();
            assert!((q.nsr_of(c).unwrap() - direct).abs() <= 1e-14 * direct);
        }
        assert_eq!(q.nsr_of(1), None);
    }
}
