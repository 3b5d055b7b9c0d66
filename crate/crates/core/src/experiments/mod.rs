//! Ensemble studies: per-instance x optimisation, the size sweep and the
//! ellipticity sweep, with resumable per-instance records and TSV output.

mod config;
mod store;

use std::path::Path;

use log::{info, warn};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytics::{ensemble_stats, EnsembleStat};
use crate::error::{Error, Result};
use crate::geometry::{
    assign_distances, assign_with_ellipticity, fit_kde, normalized_diameter, scale_to_mean,
    DistancePdf, EllipticityTarget, PhysicalTopology,
};
use crate::physlayer::PhysicalLayer;
use crate::routing::{k_shortest_nsr_paths, link_weights, relax_filter, CandidatePath};
use crate::rwa::{final_throughput, maximize_lambda, Demand, RwaConfig, RwaSolution};
use crate::seed::child_seed;
use crate::topology::{generate_acmn_with, load_nsfnet, node_pairs, LogicalTopology, NodePair};

pub use config::{
    default_x_grid, DistanceSource, EnsembleSource, SweepConfig, DEFAULT_ELLIPTICITY_AXIS,
    DEFAULT_SCALE_AXIS,
};
pub use store::{read_ledger, RecordStore};

/// Environment variable overriding the worker count.
pub const WORKERS_ENV: &str = "ACMN_WORKERS";

/// Outcome of one x value on one physical topology.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XOutcome {
    pub x: f64,
    pub n_lambda: usize,
    pub total_bps: f64,
    pub avg_bps: f64,
    pub max_link_occupancy: usize,
}

#[derive(Debug, Clone)]
pub struct InstanceSolution {
    pub best: XOutcome,
    /// Every x that produced a feasible solution, in grid order.
    pub per_x: Vec<XOutcome>,
    pub solution: RwaSolution,
    pub demands: Vec<Demand>,
    /// Candidate pool per pair before filtering.
    pub pools: Vec<(NodePair, Vec<CandidatePath>)>,
}

/// Candidate pools for every node pair over full-load NSR weights.
pub fn candidate_pools(
    pt: &PhysicalTopology,
    layer: &PhysicalLayer,
    k: usize,
) -> Result<Vec<(NodePair, Vec<CandidatePath>)>> {
    let weights = link_weights(pt, layer);
    node_pairs(&pt.logical)
        .into_iter()
        .map(|pair| Ok((pair, k_shortest_nsr_paths(pt, &weights, pair, k, &layer.grid)?)))
        .collect()
}

pub fn demands_for_x(pools: &[(NodePair, Vec<CandidatePath>)], x: f64) -> Result<Vec<Demand>> {
    pools.iter().map(|(p, c)| relax_filter(*p, c, x)).collect()
}

/// Sweeps `x_grid`, solving RWA and final throughput for each x, and keeps the
/// x with the largest total throughput (ties go to the smaller x).
pub fn solve_instance(
    pt: &PhysicalTopology,
    x_grid: &[f64],
    k: usize,
    seed: u64,
    layer: &PhysicalLayer,
    rwa: &RwaConfig,
) -> Result<InstanceSolution> {
    if x_grid.is_empty() {
        return Err(Error::InvalidArgument("empty x grid".into()));
    }
    let pools = candidate_pools(pt, layer, k)?;
    let links = pt.logical.link_count();
    let mut per_x = Vec::new();
    let mut best: Option<(XOutcome, RwaSolution, Vec<Demand>)> = None;
    for (xi, &x) in x_grid.iter().enumerate() {
        let demands = demands_for_x(&pools, x)?;
        let sol = match maximize_lambda(&demands, links, rwa, child_seed(seed, &[xi as u64])) {
            Ok((_, s)) => s,
            Err(Error::Infeasible(_)) => continue,
            Err(e) => return Err(e),
        };
        let sol = final_throughput(&sol, pt, layer);
        let out = XOutcome {
            x,
            n_lambda: sol.n_lambda,
            total_bps: sol.total_bps,
            avg_bps: sol.avg_bps,
            max_link_occupancy: sol.max_link_occupancy(),
        };
        per_x.push(out);
        let better = best.as_ref().is_none_or(|(b, _, _)| {
            out.total_bps > b.total_bps || (out.total_bps == b.total_bps && out.x < b.x)
        });
        if better {
            best = Some((out, sol, demands));
        }
    }
    let (best, solution, demands) =
        best.ok_or_else(|| Error::Infeasible(format!("no feasible x for {}", pt.logical.name)))?;
    Ok(InstanceSolution {
        best,
        per_x,
        solution,
        demands,
        pools,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepKind {
    Scale,
    Ellipticity,
}

impl SweepKind {
    pub fn default_axis(self) -> &'static [f64] {
        match self {
            SweepKind::Scale => &DEFAULT_SCALE_AXIS,
            SweepKind::Ellipticity => &DEFAULT_ELLIPTICITY_AXIS,
        }
    }
}

/// One solved instance; a row of the ledger.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub axis_index: usize,
    pub axis_value: f64,
    pub topology: usize,
    pub realisation: usize,
    pub topology_name: String,
    pub mean_link_km: f64,
    pub normalized_diameter: f64,
    /// Distance draws used by ellipticity rejection sampling (1 for the size sweep).
    pub attempts: usize,
    pub best_x: f64,
    pub n_lambda: usize,
    pub avg_gbps: f64,
    pub total_tbps: f64,
    pub max_link_occupancy: usize,
}

/// An instance that produced no record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkippedRun {
    pub axis_index: usize,
    pub axis_value: f64,
    pub topology: usize,
    pub realisation: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum InstanceResult {
    Solved(RunRecord),
    Rejected(SkippedRun),
    Infeasible(SkippedRun),
}

impl InstanceResult {
    fn key(&self) -> (usize, usize, usize) {
        match self {
            InstanceResult::Solved(r) => (r.axis_index, r.topology, r.realisation),
            InstanceResult::Rejected(s) | InstanceResult::Infeasible(s) => {
                (s.axis_index, s.topology, s.realisation)
            }
        }
    }
}

/// Aggregates at one axis value. Units: lightpaths per pair, Gb/s, Tb/s.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxisPoint {
    pub axis_value: f64,
    pub n_lambda: EnsembleStat,
    pub avg_gbps: EnsembleStat,
    pub total_tbps: EnsembleStat,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub kind: SweepKind,
    pub axis: Vec<f64>,
    pub points: Vec<AxisPoint>,
    pub records: Vec<RunRecord>,
    pub skipped: Vec<SkippedRun>,
}

/// Per-axis statistics recomputed from ledger rows. Axis values without any
/// record are left out.
pub fn aggregate(axis: &[f64], records: &[RunRecord]) -> Result<Vec<AxisPoint>> {
    let mut points = Vec::new();
    for (a, &value) in axis.iter().enumerate() {
        let rows: Vec<&RunRecord> = records.iter().filter(|r| r.axis_index == a).collect();
        if rows.is_empty() {
            continue;
        }
        let col = |f: fn(&RunRecord) -> f64| rows.iter().map(|r| f(r)).collect::<Vec<_>>();
        points.push(AxisPoint {
            axis_value: value,
            n_lambda: ensemble_stats(&col(|r| r.n_lambda as f64), value)?,
            avg_gbps: ensemble_stats(&col(|r| r.avg_gbps), value)?,
            total_tbps: ensemble_stats(&col(|r| r.total_tbps), value)?,
        });
    }
    Ok(points)
}

struct Ensemble {
    topologies: Vec<LogicalTopology>,
    pdf: DistancePdf,
    embedded_km: Vec<f64>,
}

impl Ensemble {
    fn build(cfg: &SweepConfig) -> Result<Self> {
        let (nsf, km) = load_nsfnet();
        let topologies = (0..cfg.topologies)
            .map(|t| match cfg.ensemble {
                EnsembleSource::Nsfnet => Ok(nsf.clone()),
                EnsembleSource::Generated => {
                    generate_acmn_with(child_seed(cfg.master_seed, &[0, t as u64]), &cfg.generator)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Ensemble {
            topologies,
            pdf: fit_kde(&km)?,
            embedded_km: km,
        })
    }

    fn base_distances(&self, cfg: &SweepConfig, t: usize, r: usize) -> Result<PhysicalTopology> {
        match cfg.distances {
            DistanceSource::Embedded => {
                PhysicalTopology::new(self.topologies[t].clone(), self.embedded_km.clone())
            }
            DistanceSource::Kde => Ok(assign_distances(
                &self.topologies[t],
                &self.pdf,
                child_seed(cfg.master_seed, &[1, t as u64, r as u64]),
            )),
        }
    }
}

fn run_one(
    kind: SweepKind,
    cfg: &SweepConfig,
    ens: &Ensemble,
    layer: &PhysicalLayer,
    axis: &[f64],
    (a, t, r): (usize, usize, usize),
) -> Result<InstanceResult> {
    let value = axis[a];
    let skipped = |reason: String| SkippedRun {
        axis_index: a,
        axis_value: value,
        topology: t,
        realisation: r,
        reason,
    };
    let (pt, attempts) = match kind {
        SweepKind::Scale => (scale_to_mean(&ens.base_distances(cfg, t, r)?, value)?, 1),
        SweepKind::Ellipticity => {
            let target = EllipticityTarget::new(value, cfg.ellipticity_tolerance, cfg.mean_node_pair_km)
                .map_err(|e| Error::Config(e.to_string()))?;
            let seed = child_seed(cfg.master_seed, &[2, t as u64, r as u64, a as u64]);
            match assign_with_ellipticity(&ens.topologies[t], &target, &ens.pdf, seed, cfg.rejection_budget) {
                Ok(d) => (d.topology, d.attempts),
                Err(e @ Error::RejectionBudgetExhausted { .. }) => {
                    warn!("topology {t} realisation {r} at D={value}: {e}");
                    return Ok(InstanceResult::Rejected(skipped(e.to_string())));
                }
                Err(e) => return Err(e),
            }
        }
    };
    let seed = child_seed(cfg.master_seed, &[3, t as u64, r as u64, a as u64]);
    match solve_instance(&pt, &cfg.x_grid, cfg.k, seed, layer, &cfg.rwa) {
        Ok(sol) => Ok(InstanceResult::Solved(RunRecord {
            axis_index: a,
            axis_value: value,
            topology: t,
            realisation: r,
            topology_name: pt.logical.name.clone(),
            mean_link_km: pt.mean_link_km(),
            normalized_diameter: normalized_diameter(&pt)?,
            attempts,
            best_x: sol.best.x,
            n_lambda: sol.best.n_lambda,
            avg_gbps: sol.best.avg_bps / 1e9,
            total_tbps: sol.best.total_bps / 1e12,
            max_link_occupancy: sol.best.max_link_occupancy,
        })),
        Err(Error::Infeasible(m)) => {
            warn!("topology {t} realisation {r} at axis {value}: infeasible ({m})");
            Ok(InstanceResult::Infeasible(skipped(m)))
        }
        Err(e) => Err(e),
    }
}

fn worker_pool() -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(WORKERS_ENV) {
        let n: usize = v
            .parse()
            .map_err(|_| Error::Config(format!("{WORKERS_ENV}={v} is not a worker count")))?;
        b = b.num_threads(n);
    }
    b.build().map_err(|e| Error::Config(format!("worker pool: {e}")))
}

/// Runs a sweep, optionally persisting each instance to `store` and skipping
/// instances already recorded there for the same configuration.
pub fn execute(kind: SweepKind, cfg: &SweepConfig, store: Option<&RecordStore>) -> Result<SweepResult> {
    cfg.validate()?;
    let cfg = cfg.effective(kind.default_axis());
    let axis = cfg.axis.clone().expect("effective config has an axis");
    let layer = cfg.physical_layer()?;
    let ens = Ensemble::build(&cfg)?;

    let keys: Vec<(usize, usize, usize)> = (0..axis.len())
        .flat_map(|a| (0..cfg.topologies).flat_map(move |t| (0..cfg.realisations).map(move |r| (a, t, r))))
        .collect();
    info!("{kind:?} sweep: {} instances on {} axis points", keys.len(), axis.len());

    let pool = worker_pool()?;
    let mut results: Vec<InstanceResult> = pool.install(|| {
        keys.par_iter()
            .map(|&key| {
                if let Some(done) = store.and_then(|s| s.load(key)) {
                    return Ok(done);
                }
                let res = run_one(kind, &cfg, &ens, &layer, &axis, key)?;
                if let Some(s) = store {
                    s.save(&res)?;
                }
                Ok(res)
            })
            .collect::<Result<Vec<_>>>()
    })?;
    results.sort_by_key(InstanceResult::key);

    let mut records = Vec::new();
    let mut skipped = Vec::new();
    let mut infeasible = 0;
    for r in results {
        match r {
            InstanceResult::Solved(rec) => records.push(rec),
            InstanceResult::Rejected(s) => skipped.push(s),
            InstanceResult::Infeasible(s) => {
                infeasible += 1;
                skipped.push(s);
            }
        }
    }
    if infeasible > cfg.max_infeasible {
        return Err(Error::InfeasibleBudgetExceeded {
            count: infeasible,
            budget: cfg.max_infeasible,
        });
    }
    Ok(SweepResult {
        kind,
        points: aggregate(&axis, &records)?,
        axis,
        records,
        skipped,
    })
}

/// Size sweep: every realisation rescaled to each mean link distance on the axis.
pub fn sweep_scale(cfg: &SweepConfig) -> Result<SweepResult> {
    execute(SweepKind::Scale, cfg, None)
}

/// Ellipticity sweep at fixed mean node-pair distance.
pub fn sweep_ellipticity(cfg: &SweepConfig) -> Result<SweepResult> {
    execute(SweepKind::Ellipticity, cfg, None)
}

/// Runs a sweep into `out`: echoes the configuration, persists per-instance
/// records (resuming from earlier ones), and writes the ledger and TSV curves.
pub fn run_sweep(kind: SweepKind, cfg: &SweepConfig, out: &Path) -> Result<SweepResult> {
    cfg.validate()?;
    let effective = cfg.effective(kind.default_axis());
    crate::io::write_json(&out.join("config.json"), &effective)?;
    let store = RecordStore::open(&out.join("records"), &effective.fingerprint())?;
    let result = execute(kind, &effective, Some(&store))?;
    emit_tsv(&result, out)?;
    Ok(result)
}

/// Names of the metric curves written by [`emit_tsv`].
pub const METRICS: [&str; 3] = ["n_lambda", "avg_throughput_gbps", "total_throughput_tbps"];
pub const STATS: [&str; 3] = ["mean", "p16", "p84"];

/// Writes the ledger CSV, the skipped-instance list, and one two-column TSV
/// per metric and statistic. Curves are recomputed from the ledger file.
pub fn emit_tsv(result: &SweepResult, out: &Path) -> Result<()> {
    if result.records.is_empty() {
        return Err(Error::InvalidArgument("sweep produced no records".into()));
    }
    let ledger = out.join("ledger.csv");
    store::write_ledger(&ledger, &result.records)?;
    store::write_skipped(&out.join("skipped.csv"), &result.skipped)?;
    let points = aggregate(&result.axis, &read_ledger(&ledger)?)?;
    for (m, metric) in METRICS.iter().enumerate() {
        for (s, stat) in STATS.iter().enumerate() {
            let mut text = String::new();
            for p in &points {
                let e = [&p.n_lambda, &p.avg_gbps, &p.total_tbps][m];
                let v = [e.mean, e.p16, e.p84][s];
                text.push_str(&format!("{:.6}\t{:.6}\n", p.axis_value, v));
            }
            crate::io::write_atomic(&out.join(format!("{metric}_{stat}.tsv")), text.as_bytes())?;
        }
    }
    Ok(())
}
