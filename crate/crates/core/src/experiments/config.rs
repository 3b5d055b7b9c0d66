use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::ELLIPTICITY_BUDGET;
use crate::physlayer::{ChannelGrid, FiberParams, PhysicalLayer};
use crate::routing::DEFAULT_K;
use crate::rwa::RwaConfig;
use crate::topology::GeneratorConfig;

/// Where the logical topologies of an ensemble come from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnsembleSource {
    /// Seeded ACMN variants of NSFNET.
    Generated,
    /// NSFNET itself, repeated.
    Nsfnet,
}

/// Where link distances come from before any scaling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceSource {
    /// I.i.d. draws from the KDE fitted to the NSFNET distances.
    Kde,
    /// The embedded NSFNET distances; requires the NSFNET ensemble.
    Embedded,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub master_seed: u64,
    pub topologies: usize,
    pub realisations: usize,
    pub ensemble: EnsembleSource,
    pub distances: DistanceSource,
    pub generator: GeneratorConfig,
    pub x_grid: Vec<f64>,
    pub k: usize,
    pub rwa: RwaConfig,
    pub fiber: FiberParams,
    pub grid: ChannelGrid,
    /// Mean link km for the size sweep, normalised diameters for the
    /// ellipticity sweep. `None` uses the sweep's default axis.
    pub axis: Option<Vec<f64>>,
    pub mean_node_pair_km: f64,
    pub ellipticity_tolerance: f64,
    pub rejection_budget: usize,
    /// Infeasible instances tolerated before the sweep aborts.
    pub max_infeasible: usize,
}

pub const DEFAULT_SCALE_AXIS: [f64; 7] = [640.0, 1040.0, 1440.0, 1840.0, 2240.0, 2640.0, 3040.0];
pub const DEFAULT_ELLIPTICITY_AXIS: [f64; 3] = [1.7, 2.3, 3.0];

pub fn default_x_grid() -> Vec<f64> {
    (0..=6).map(|i| 0.70 + 0.05 * i as f64).map(|x| (x * 100.0).round() / 100.0).collect()
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            master_seed: 1,
            topologies: 20,
            realisations: 10,
            ensemble: EnsembleSource::Generated,
            distances: DistanceSource::Kde,
            generator: GeneratorConfig::default(),
            x_grid: default_x_grid(),
            k: DEFAULT_K,
            rwa: RwaConfig::default(),
            fiber: FiberParams::default(),
            grid: ChannelGrid::default(),
            axis: None,
            mean_node_pair_km: 3070.0,
            ellipticity_tolerance: 0.02,
            rejection_budget: ELLIPTICITY_BUDGET,
            max_infeasible: 10,
        }
    }
}

impl SweepConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: SweepConfig =
            serde_json::from_str(text).map_err(|e| Error::Config(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.topologies == 0 || self.realisations == 0 {
            return bad("ensemble sizes must be positive".into());
        }
        if self.x_grid.is_empty() || self.x_grid.iter().any(|x| !(0.0..=1.0).contains(x)) {
            return bad(format!("x grid must be nonempty within [0, 1]: {:?}", self.x_grid));
        }
        if self.k == 0 {
            return bad("k must be at least 1".into());
        }
        if let Some(axis) = &self.axis {
            if axis.is_empty() || axis.iter().any(|v| !(*v > 0.0)) {
                return bad(format!("axis must be nonempty and positive: {axis:?}"));
            }
        }
        if self.distances == DistanceSource::Embedded && self.ensemble != EnsembleSource::Nsfnet {
            return bad("embedded distances need the nsfnet ensemble".into());
        }
        if self.rwa.wavelengths == 0 || self.rwa.wavelengths > self.grid.channel_count() {
            return bad(format!(
                "{} wavelengths do not fit a {}-channel grid",
                self.rwa.wavelengths,
                self.grid.channel_count()
            ));
        }
        if !(self.mean_node_pair_km > 0.0) || !(self.ellipticity_tolerance > 0.0) {
            return bad("ellipticity settings must be positive".into());
        }
        self.fiber.validate()?;
        self.grid.validate()
    }

    pub fn physical_layer(&self) -> Result<PhysicalLayer> {
        PhysicalLayer::new(self.fiber, self.grid)
    }

    /// Echo of the effective configuration, with the axis filled in.
    pub fn effective(&self, default_axis: &[f64]) -> SweepConfig {
        SweepConfig {
            axis: Some(self.axis.clone().unwrap_or_else(|| default_axis.to_vec())),
            ..self.clone()
        }
    }

    /// Stable fingerprint of the configuration, used to key resumable records.
    pub fn fingerprint(&self) -> String {
        let text = serde_json::to_string(self).expect("config serialises");
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for b in text.bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
        format!("{h:016x}")
    }
}
