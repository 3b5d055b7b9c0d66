//! Physical link distances: KDE sampling, uniform scaling, and
//! ellipticity-constrained assignment.

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed;
use crate::topology::LogicalTopology;

/// Length of one amplified fibre span.
pub const SPAN_KM: f64 = 80.0;

/// Default lower truncation bound for sampled link distances.
pub const MIN_LINK_KM: f64 = 80.0;

/// Default rejection budget per ellipticity-constrained realisation.
pub const ELLIPTICITY_BUDGET: usize = 100_000;

/// Number of kernel standard deviations kept clear of the truncation floor.
const CLEARANCE_SIGMAS: f64 = 3.0;

/// Span count for a link: nearest integer, never fewer than one span.
pub fn quantize_spans(km: f64) -> usize {
    ((km / SPAN_KM).round() as usize).max(1)
}

/// Gaussian kernel density estimate over observed link distances, truncated
/// below at `support.0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistancePdf {
    pub sample_points: Vec<f64>,
    /// Silverman rule-of-thumb bandwidth (km).
    pub bandwidth: f64,
    /// Per-sample kernel widths. Equal to `bandwidth` except for samples close
    /// to the truncation floor, whose kernels are narrowed so that truncation
    /// does not bias the mean upward.
    pub kernel_widths: Vec<f64>,
    pub support: (f64, f64),
}

/// Fits a truncated Gaussian KDE to positive distance samples.
pub fn fit_kde(samples: &[f64]) -> Result<DistancePdf> {
    if samples.len() < 2 {
        return Err(Error::DegenerateSamples(format!(
            "need at least 2 samples, got {}",
            samples.len()
        )));
    }
    if let Some(bad) = samples.iter().find(|&&s| !(s > 0.0) || !s.is_finite()) {
        return Err(Error::DegenerateSamples(format!("non-positive sample {bad}")));
    }
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = samples.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (n - 1.0);
    let sd = var.sqrt();
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let iqr = crate::analytics::percentile_sorted(&sorted, 0.75)
        - crate::analytics::percentile_sorted(&sorted, 0.25);
    let spread = if iqr > 0.0 { sd.min(iqr / 1.34) } else { sd };
    let bandwidth = 0.9 * spread * n.powf(-0.2);
    if !(bandwidth > 0.0) {
        return Err(Error::DegenerateSamples("all samples identical".into()));
    }
    let floor = MIN_LINK_KM.min(0.5 * sorted[0]);
    let kernel_widths = samples
        .iter()
        .map(|&s| bandwidth.min((s - floor) / CLEARANCE_SIGMAS))
        .collect();
    let upper = sorted[sorted.len() - 1] + 4.0 * bandwidth;
    Ok(DistancePdf {
        sample_points: samples.to_vec(),
        bandwidth,
        kernel_widths,
        support: (floor, upper),
    })
}

impl DistancePdf {
    /// Draws one distance, resampling until it lies above the truncation floor.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        loop {
            let i = rng.gen_range(0..self.sample_points.len());
            let normal = Normal::new(self.sample_points[i], self.kernel_widths[i])
                .expect("kernel widths are positive");
            let d = normal.sample(rng);
            if d > self.support.0 {
                return d;
            }
        }
    }

    /// Mixture density at `x`, ignoring the (sub-percent) truncated mass.
    pub fn density(&self, x: f64) -> f64 {
        if x <= self.support.0 {
            return 0.0;
        }
        let norm = (2.0 * std::f64::consts::PI).sqrt();
        self.sample_points
            .iter()
            .zip(&self.kernel_widths)
            .map(|(&m, &w)| (-0.5 * ((x - m) / w).powi(2)).exp() / (w * norm))
            .sum::<f64>()
            / self.sample_points.len() as f64
    }
}

/// A logical topology with per-link fibre distances and span counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhysicalTopology {
    pub logical: LogicalTopology,
    pub link_km: Vec<f64>,
    pub link_spans: Vec<usize>,
}

impl PhysicalTopology {
    pub fn new(logical: LogicalTopology, link_km: Vec<f64>) -> Result<Self> {
        if link_km.len() != logical.link_count() {
            return Err(Error::InvalidTopology(format!(
                "{} distances for {} links",
                link_km.len(),
                logical.link_count()
            )));
        }
        if let Some(d) = link_km.iter().find(|&&d| !(d > 0.0) || !d.is_finite()) {
            return Err(Error::InvalidTopology(format!("non-positive link distance {d}")));
        }
        let link_spans = link_km.iter().map(|&d| quantize_spans(d)).collect();
        Ok(PhysicalTopology {
            logical,
            link_km,
            link_spans,
        })
    }

    pub fn nsfnet() -> Self {
        let (t, km) = crate::topology::load_nsfnet();
        PhysicalTopology::new(t, km).expect("embedded NSFNET distances are valid")
    }

    pub fn mean_link_km(&self) -> f64 {
        self.link_km.iter().sum::<f64>() / self.link_km.len() as f64
    }
}

/// Assigns an i.i.d. draw from `pdf` to every link.
pub fn assign_distances(t: &LogicalTopology, pdf: &DistancePdf, seed: u64) -> PhysicalTopology {
    let mut rng = seed::rng(seed);
    let km = (0..t.link_count()).map(|_| pdf.sample(&mut rng)).collect();
    PhysicalTopology::new(t.clone(), km).expect("KDE draws are positive")
}

/// Multiplies every link distance by `target_mean_km / mean` and requantises spans.
pub fn scale_to_mean(pt: &PhysicalTopology, target_mean_km: f64) -> Result<PhysicalTopology> {
    if !(target_mean_km > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "target mean must be positive, got {target_mean_km}"
        )));
    }
    let factor = target_mean_km / pt.mean_link_km();
    if factor == 1.0 {
        return Ok(pt.clone());
    }
    PhysicalTopology::new(
        pt.logical.clone(),
        pt.link_km.iter().map(|d| d * factor).collect(),
    )
}

/// All-pairs shortest-path distances over arbitrary link weights (Floyd–Warshall).
pub fn all_pairs_distances(t: &LogicalTopology, weights: &[f64]) -> Result<Vec<Vec<f64>>> {
    let n = t.node_count;
    let mut d = vec![vec![f64::INFINITY; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0.0;
    }
    for (&(a, b), &w) in t.links.iter().zip(weights) {
        if w < d[a][b] {
            d[a][b] = w;
            d[b][a] = w;
        }
    }
    for k in 0..n {
        for i in 0..n {
            let dik = d[i][k];
            if dik.is_infinite() {
                continue;
            }
            for j in 0..n {
                let via = dik + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    if d.iter().flatten().any(|x| x.is_infinite()) {
        return Err(Error::Disconnected);
    }
    Ok(d)
}

/// Maximum and mean of the km shortest-path distance over all node pairs.
pub fn pair_distance_stats(t: &LogicalTopology, km: &[f64]) -> Result<(f64, f64)> {
    let d = all_pairs_distances(t, km)?;
    let n = t.node_count;
    let (mut max, mut sum, mut count) = (0.0f64, 0.0, 0usize);
    for a in 0..n {
        for b in a + 1..n {
            max = max.max(d[a][b]);
            sum += d[a][b];
            count += 1;
        }
    }
    if count == 0 {
        return Err(Error::InvalidTopology("fewer than two nodes".into()));
    }
    Ok((max, sum / count as f64))
}

/// Network diameter in km divided by the mean node-pair distance.
pub fn normalized_diameter(pt: &PhysicalTopology) -> Result<f64> {
    let (max, mean) = pair_distance_stats(&pt.logical, &pt.link_km)?;
    Ok(max / mean)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EllipticityTarget {
    pub d_target: f64,
    pub tolerance: f64,
    pub mean_node_pair_km: f64,
}

impl EllipticityTarget {
    pub fn new(d_target: f64, tolerance: f64, mean_node_pair_km: f64) -> Result<Self> {
        if !(d_target >= 1.0) {
            return Err(Error::InvalidArgument(format!("D target {d_target} < 1")));
        }
        if !(tolerance > 0.0) || !(mean_node_pair_km > 0.0) {
            return Err(Error::InvalidArgument(
                "tolerance and mean node-pair distance must be positive".into(),
            ));
        }
        Ok(EllipticityTarget {
            d_target,
            tolerance,
            mean_node_pair_km,
        })
    }
}

/// An accepted ellipticity-constrained realisation.
#[derive(Debug, Clone)]
pub struct EllipticityDraw {
    pub topology: PhysicalTopology,
    /// Distance draws made, including the accepted one.
    pub attempts: usize,
}

/// Rejection-samples link distances until the normalised diameter is within
/// tolerance of the target, then rescales so the mean node-pair distance is
/// exactly `target.mean_node_pair_km`.
pub fn assign_with_ellipticity(
    t: &LogicalTopology,
    target: &EllipticityTarget,
    pdf: &DistancePdf,
    seed: u64,
    budget: usize,
) -> Result<EllipticityDraw> {
    if !t.is_connected() {
        return Err(Error::Disconnected);
    }
    let mut rng = seed::rng(seed);
    let mut km = vec![0.0; t.link_count()];
    for attempt in 1..=budget {
        for d in km.iter_mut() {
            *d = pdf.sample(&mut rng);
        }
        let (max, mean) = pair_distance_stats(t, &km)?;
        if (max / mean - target.d_target).abs() <= target.tolerance {
            let factor = target.mean_node_pair_km / mean;
            let scaled = km.iter().map(|d| d * factor).collect();
            return Ok(EllipticityDraw {
                topology: PhysicalTopology::new(t.clone(), scaled)?,
                attempts: attempt,
            });
        }
    }
    Err(Error::RejectionBudgetExhausted {
        target: target.d_target,
        budget,
    })
}
