//! Routing and wavelength assignment: `N_λ` lightpaths per node pair on
//! equal-cost candidate routes, wavelength continuity end to end.

use std::collections::{BTreeMap, HashMap, HashSet};

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::PhysicalTopology;
use crate::physlayer::{ChannelSet, PhysicalLayer};
use crate::routing::PathSet;
use crate::seed;
use crate::topology::{LogicalTopology, NodePair};

/// A node pair's demand: its equal-cost candidate routes.
pub type Demand = PathSet;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RwaConfig {
    pub wavelengths: usize,
    pub restarts: usize,
}

impl Default for RwaConfig {
    fn default() -> Self {
        RwaConfig {
            wavelengths: 156,
            restarts: 8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LightpathAssignment {
    pub pair: NodePair,
    pub copy: usize,
    /// Index of the chosen route within the pair's candidate list.
    pub route: usize,
    pub nodes: Vec<usize>,
    pub links: Vec<usize>,
    pub wavelength: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RwaSolution {
    pub n_lambda: usize,
    pub wavelengths: usize,
    pub assignments: Vec<LightpathAssignment>,
    /// Occupied wavelengths per link.
    pub occupancy: Vec<ChannelSet>,
    /// Per-assignment NSR and capacity; empty until [`final_throughput`] runs.
    pub nsr: Vec<f64>,
    pub capacity_bps: Vec<f64>,
    pub total_bps: f64,
    pub avg_bps: f64,
}

impl RwaSolution {
    pub fn max_link_occupancy(&self) -> usize {
        self.occupancy.iter().map(ChannelSet::len).max().unwrap_or(0)
    }

    pub fn total_occupancy(&self) -> usize {
        self.occupancy.iter().map(ChannelSet::len).sum()
    }
}

struct Placement {
    occupancy: Vec<ChannelSet>,
    counts: Vec<usize>,
    max: usize,
    total: usize,
    assignments: Vec<LightpathAssignment>,
}

impl Placement {
    fn new(links: usize) -> Self {
        Placement {
            occupancy: vec![ChannelSet::empty(); links],
            counts: vec![0; links],
            max: 0,
            total: 0,
            assignments: Vec::new(),
        }
    }

    /// Places one unit request; `false` if no candidate has a continuous free wavelength.
    fn place(&mut self, demand: &Demand, copy: usize, all: &ChannelSet) -> bool {
        // (resulting max, added occupancy, route's own max, wavelength, route index)
        type Key = (usize, usize, usize, usize, usize);
        let mut best: Option<(Key, usize)> = None;
        for (j, path) in demand.candidates.iter().enumerate() {
            let mut used = ChannelSet::empty();
            let mut path_max = 0;
            for &l in &path.links {
                used = used.union(&self.occupancy[l]);
                path_max = path_max.max(self.counts[l] + 1);
            }
            let Some(wl) = all.difference(&used).first() else {
                continue;
            };
            let key = (self.max.max(path_max), path.links.len(), path_max, wl, j);
            if best.as_ref().is_none_or(|(k, _)| key < *k) {
                best = Some((key, wl));
            }
        }
        let Some(((res_max, _, _, _, j), wl)) = best else {
            return false;
        };
        let path = &demand.candidates[j];
        for &l in &path.links {
            self.occupancy[l].insert(wl);
            self.counts[l] += 1;
        }
        self.max = res_max;
        self.total += path.links.len();
        self.assignments.push(LightpathAssignment {
            pair: demand.pair,
            copy,
            route: j,
            nodes: path.nodes.clone(),
            links: path.links.clone(),
            wavelength: wl,
        });
        true
    }
}

/// Places `n_lambda` lightpaths for every demand, minimising the maximum link
/// occupancy and then total occupancy. Returns [`Error::Infeasible`] if no
/// restart manages to place every request.
pub fn assign_for_lambda(
    demands: &[Demand],
    link_count: usize,
    n_lambda: usize,
    cfg: &RwaConfig,
    seed: u64,
) -> Result<RwaSolution> {
    if n_lambda == 0 {
        return Err(Error::InvalidArgument("N_λ must be at least 1".into()));
    }
    if cfg.wavelengths == 0 || cfg.wavelengths > crate::physlayer::MAX_CHANNELS {
        return Err(Error::InvalidArgument(format!("unsupported wavelength count {}", cfg.wavelengths)));
    }
    if let Some(d) = demands.iter().find(|d| d.candidates.is_empty()) {
        return Err(Error::InvalidArgument(format!("pair {} has no candidate routes", d.pair)));
    }
    let all = ChannelSet::full(cfg.wavelengths);

    let mut order: Vec<(usize, usize)> = (0..demands.len())
        .flat_map(|d| (0..n_lambda).map(move |c| (d, c)))
        .collect();
    let shortest_nsr = |d: usize| {
        demands[d]
            .candidates
            .iter()
            .map(|c| c.nsr)
            .fold(f64::INFINITY, f64::min)
    };
    order.sort_by(|&(a, ca), &(b, cb)| {
        demands[a]
            .candidates
            .len()
            .cmp(&demands[b].candidates.len())
            .then_with(|| shortest_nsr(b).total_cmp(&shortest_nsr(a)))
            .then_with(|| demands[a].pair.cmp(&demands[b].pair))
            .then_with(|| ca.cmp(&cb))
    });

    let mut rng = seed::rng(seed);
    let mut best: Option<Placement> = None;
    for restart in 0..cfg.restarts.max(1) {
        if restart > 0 {
            order.shuffle(&mut rng);
        }
        let mut p = Placement::new(link_count);
        if !order.iter().all(|&(d, c)| p.place(&demands[d], c, &all)) {
            continue;
        }
        let better = best
            .as_ref()
            .is_none_or(|b| (p.max, p.total) < (b.max, b.total));
        if better {
            best = Some(p);
        }
    }
    let best = best.ok_or_else(|| {
        Error::Infeasible(format!("cannot place {n_lambda} lightpaths per pair"))
    })?;
    let mut assignments = best.assignments;
    assignments.sort_by_key(|a| (a.pair, a.copy));
    Ok(RwaSolution {
        n_lambda,
        wavelengths: cfg.wavelengths,
        assignments,
        occupancy: best.occupancy,
        nsr: Vec::new(),
        capacity_bps: Vec::new(),
        total_bps: 0.0,
        avg_bps: 0.0,
    })
}

/// Increments `N_λ` from 1 until placement fails; returns the last feasible
/// solution.
pub fn maximize_lambda(
    demands: &[Demand],
    link_count: usize,
    cfg: &RwaConfig,
    seed: u64,
) -> Result<(usize, RwaSolution)> {
    let mut best = None;
    for n in 1..=cfg.wavelengths {
        match assign_for_lambda(demands, link_count, n, cfg, seed::child_seed(seed, &[n as u64])) {
            Ok(sol) => best = Some(sol),
            Err(Error::Infeasible(_)) => break,
            Err(e) => return Err(e),
        }
    }
    best.map(|s| (s.n_lambda, s))
        .ok_or_else(|| Error::Infeasible("not even one lightpath per pair fits".into()))
}

/// Recomputes every lightpath's NSR under the solution's actual per-link
/// loading and fills in capacities and totals.
pub fn final_throughput(
    solution: &RwaSolution,
    pt: &PhysicalTopology,
    layer: &PhysicalLayer,
) -> RwaSolution {
    let qualities: Vec<_> = solution
        .occupancy
        .iter()
        .zip(&pt.link_spans)
        .map(|(load, &spans)| layer.link_quality(spans, load))
        .collect();
    let mut out = solution.clone();
    out.nsr = solution
        .assignments
        .iter()
        .map(|a| {
            a.links
                .iter()
                .map(|&l| {
                    qualities[l]
                        .nsr_of(a.wavelength)
                        .expect("assigned wavelength is in the link load")
                })
                .sum()
        })
        .collect();
    out.capacity_bps = out.nsr.iter().map(|&n| layer.capacity(n)).collect();
    out.total_bps = out.capacity_bps.iter().sum();
    out.avg_bps = if out.capacity_bps.is_empty() {
        0.0
    } else {
        out.total_bps / out.capacity_bps.len() as f64
    };
    out
}

/// A lightpath as it appears in a solution dump: enough to check feasibility
/// without solver state.
#[derive(Debug, Clone, PartialEq)]
pub struct LightpathRecord {
    pub pair: NodePair,
    pub copy: usize,
    pub wavelength: usize,
    pub nodes: Vec<usize>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub lightpaths: usize,
    pub n_lambda: Option<usize>,
    pub max_link_occupancy: usize,
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks collision freedom, route shape, wavelength range, per-link
/// occupancy and a uniform number of lightpaths per pair. When `expected_pairs`
/// is given, every listed pair must be present.
pub fn validate_lightpaths(
    records: &[LightpathRecord],
    wavelengths: usize,
    topology: Option<&LogicalTopology>,
    expected_pairs: Option<&[NodePair]>,
) -> ValidationReport {
    let mut v = Vec::new();
    let mut used: HashSet<(NodePair, usize)> = HashSet::new();
    let mut per_link: HashMap<NodePair, usize> = HashMap::new();
    let mut per_pair: BTreeMap<NodePair, Vec<usize>> = BTreeMap::new();
    let links: Option<HashSet<NodePair>> =
        topology.map(|t| t.links.iter().map(|&(a, b)| NodePair::new(a, b)).collect());

    for r in records {
        let tag = format!("lightpath {} copy {}", r.pair, r.copy);
        if r.wavelength >= wavelengths {
            v.push(format!("{tag}: wavelength {} >= {wavelengths}", r.wavelength));
        }
        if r.nodes.len() < 2 {
            v.push(format!("{tag}: route has fewer than two nodes"));
            continue;
        }
        let ends = NodePair::new(r.nodes[0], r.nodes[r.nodes.len() - 1]);
        if ends != r.pair {
            v.push(format!("{tag}: route connects {ends}"));
        }
        let distinct: HashSet<_> = r.nodes.iter().collect();
        if distinct.len() != r.nodes.len() {
            v.push(format!("{tag}: route revisits a node"));
        }
        for w in r.nodes.windows(2) {
            let hop = NodePair::new(w[0], w[1]);
            if let Some(ls) = &links {
                if !ls.contains(&hop) {
                    v.push(format!("{tag}: hop {hop} is not a link"));
                }
            }
            if !used.insert((hop, r.wavelength)) {
                v.push(format!("{tag}: wavelength {} collides on link {hop}", r.wavelength));
            }
            *per_link.entry(hop).or_default() += 1;
        }
        per_pair.entry(r.pair).or_default().push(r.copy);
    }
    let max_occ = per_link.values().copied().max().unwrap_or(0);
    for (hop, &n) in &per_link {
        if n > wavelengths {
            v.push(format!("link {hop} carries {n} > {wavelengths} wavelengths"));
        }
    }
    if let Some(pairs) = expected_pairs {
        for p in pairs {
            if !per_pair.contains_key(p) {
                v.push(format!("pair {p} has no lightpath"));
            }
        }
    }
    let counts: HashSet<usize> = per_pair.values().map(Vec::len).collect();
    let n_lambda = if counts.len() == 1 {
        counts.into_iter().next()
    } else {
        if counts.len() > 1 {
            v.push(format!("non-uniform lightpaths per pair: {counts:?}"));
        }
        None
    };
    for (p, copies) in &mut per_pair {
        copies.sort_unstable();
        if copies.iter().enumerate().any(|(i, &c)| i != c) {
            v.push(format!("pair {p} copies are not 0..{}", copies.len()));
        }
    }
    ValidationReport {
        lightpaths: records.len(),
        n_lambda,
        max_link_occupancy: max_occ,
        violations: v,
    }
}

/// Full check of a solver result, including bookkeeping against the topology
/// and the demands' candidate routes.
pub fn validate_solution(
    sol: &RwaSolution,
    topology: &LogicalTopology,
    demands: Option<&[Demand]>,
) -> ValidationReport {
    let records: Vec<LightpathRecord> = sol
        .assignments
        .iter()
        .map(|a| LightpathRecord {
            pair: a.pair,
            copy: a.copy,
            wavelength: a.wavelength,
            nodes: a.nodes.clone(),
        })
        .collect();
    let pairs = demands.map(|d| d.iter().map(|x| x.pair).collect::<Vec<_>>());
    let mut report = validate_lightpaths(&records, sol.wavelengths, Some(topology), pairs.as_deref());
    let v = &mut report.violations;

    if report.n_lambda.is_some_and(|n| n != sol.n_lambda) {
        v.push(format!("reported N_λ {} != observed {:?}", sol.n_lambda, report.n_lambda));
    }
    let mut occ = vec![ChannelSet::empty(); topology.link_count()];
    for a in &sol.assignments {
        if a.links.len() + 1 != a.nodes.len() {
            v.push(format!("lightpath {} copy {}: link/node count mismatch", a.pair, a.copy));
            continue;
        }
        for (w, &l) in a.nodes.windows(2).zip(&a.links) {
            if topology.links.get(l).copied() != Some((w[0].min(w[1]), w[0].max(w[1]))) {
                v.push(format!("lightpath {} copy {}: link {l} does not join {}-{}", a.pair, a.copy, w[0], w[1]));
            }
            if l < occ.len() {
                occ[l].insert(a.wavelength);
            }
        }
        if let Some(ds) = demands {
            match ds.iter().find(|d| d.pair == a.pair) {
                Some(d) if d.candidates.iter().any(|c| c.nodes == a.nodes) => {}
                _ => v.push(format!("lightpath {} copy {}: route not in its path set", a.pair, a.copy)),
            }
        }
    }
    if occ != sol.occupancy {
        v.push("reported occupancy differs from the assignments".into());
    }
    if sol.max_link_occupancy() != report.max_link_occupancy {
        v.push(format!(
            "reported max occupancy {} != recomputed {}",
            sol.max_link_occupancy(),
            report.max_link_occupancy
        ));
    }
    if !sol.capacity_bps.is_empty() {
        if sol.capacity_bps.len() != sol.assignments.len() {
            v.push("capacity count differs from lightpath count".into());
        }
        let sum: f64 = sol.capacity_bps.iter().sum();
        if (sum - sol.total_bps).abs() > 1e-9 * sum.abs().max(1.0) {
            v.push(format!("total {} != sum of capacities {sum}", sol.total_bps));
        }
        let back = sol.avg_bps * sol.capacity_bps.len() as f64;
        if (back - sol.total_bps).abs() > 1e-9 * sol.total_bps.abs().max(1.0) {
            v.push("average × count != total".into());
        }
    }
    report
}
