//! NSR-weighted k-shortest candidate paths and the throughput-relaxation filter.

use std::cmp::Ordering;
use std::collections::{BTreeSet, BinaryHeap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::PhysicalTopology;
use crate::physlayer::{ChannelGrid, PhysicalLayer};
use crate::topology::{LogicalTopology, NodePair};

/// Default size of the candidate pool per node pair.
pub const DEFAULT_K: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidatePath {
    pub nodes: Vec<usize>,
    /// Link indices into the topology, in traversal order.
    pub links: Vec<usize>,
    pub nsr: f64,
    /// Planning capacity (bit/s) from the full-load NSR.
    pub capacity_bps: f64,
}

impl CandidatePath {
    pub fn hops(&self) -> usize {
        self.links.len()
    }
}

/// Candidates of one node pair that survive the relaxation filter, by
/// descending capacity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathSet {
    pub pair: NodePair,
    pub candidates: Vec<CandidatePath>,
    pub x: f64,
}

/// Per-link routing weights: span count times the worst single-span NSR at
/// full load.
pub fn link_weights(pt: &PhysicalTopology, layer: &PhysicalLayer) -> Vec<f64> {
    let span = layer.full_load_span_nsr();
    pt.link_spans.iter().map(|&s| s as f64 * span).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct RawPath {
    pub nodes: Vec<usize>,
    pub links: Vec<usize>,
    /// Exact sum of the link weights, rounded once.
    pub cost: f64,
}

/// Link weights on a common binary fixed-point scale so that path sums are
/// exact and associative; equal-cost ties are then real ties.
struct FixedWeights {
    units: Vec<u128>,
    exp: i32,
}

impl FixedWeights {
    /// Headroom keeps sums of up to 2^14 maximal weights inside `u128`.
    const SPREAD_BITS: i32 = 60;

    fn new(weights: &[f64]) -> Result<Self> {
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
            return Err(Error::InvalidArgument(format!("link weight {w} is not a finite non-negative number")));
        }
        let parts: Vec<(u64, i32)> = weights.iter().map(|&w| decompose(w)).collect();
        let top = parts.iter().filter(|p| p.0 != 0).map(|p| p.1).max().unwrap_or(0);
        let low = parts.iter().filter(|p| p.0 != 0).map(|p| p.1).min().unwrap_or(0);
        // Weights more than 2^60 below the largest lose their lowest bits.
        let exp = low.max(top - Self::SPREAD_BITS);
        let units = parts
            .iter()
            .map(|&(m, e)| {
                let shift = e - exp;
                if shift >= 0 {
                    (m as u128) << shift
                } else if shift > -64 {
                    ((m as u128) + (1u128 << (-shift - 1))) >> -shift
                } else {
                    0
                }
            })
            .collect();
        Ok(FixedWeights { units, exp })
    }

    fn sum(&self, links: &[usize]) -> u128 {
        links.iter().map(|&l| self.units[l]).sum()
    }

    /// Nearest `f64` to a fixed-point sum.
    fn to_f64(&self, v: u128) -> f64 {
        v as f64 * 2f64.powi(self.exp)
    }
}

/// `w = m·2^e` with integer mantissa.
fn decompose(w: f64) -> (u64, i32) {
    if w == 0.0 {
        return (0, 0);
    }
    let bits = w.to_bits();
    let biased = ((bits >> 52) & 0x7ff) as i32;
    let frac = bits & ((1u64 << 52) - 1);
    if biased == 0 {
        (frac, -1074)
    } else {
        (frac | (1u64 << 52), biased - 1075)
    }
}

#[derive(PartialEq, Eq)]
struct Frontier(u128, usize);

impl Ord for Frontier {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.cmp(&self.0).then_with(|| other.1.cmp(&self.1))
    }
}

impl PartialOrd for Frontier {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Minimum-cost path from `src` to `dst` avoiding blocked nodes and links;
/// among equal-cost paths the lexicographically smallest node sequence wins.
fn lex_shortest_path(
    adj: &[Vec<(usize, usize)>],
    weights: &FixedWeights,
    src: usize,
    dst: usize,
    blocked_nodes: &[bool],
    blocked_links: &[bool],
) -> Option<(Vec<usize>, Vec<usize>)> {
    let n = adj.len();
    let mut dist = vec![u128::MAX; n];
    let mut heap = BinaryHeap::new();
    dist[dst] = 0;
    heap.push(Frontier(0, dst));
    while let Some(Frontier(d, u)) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        for &(v, l) in &adj[u] {
            if blocked_links[l] || (blocked_nodes[v] && v != src) {
                continue;
            }
            let nd = d + weights.units[l];
            if nd < dist[v] {
                dist[v] = nd;
                heap.push(Frontier(nd, v));
            }
        }
    }
    if dist[src] == u128::MAX {
        return None;
    }
    let mut nodes = vec![src];
    let mut links = Vec::new();
    let mut on_path = vec![false; n];
    on_path[src] = true;
    let mut u = src;
    while u != dst {
        // adjacency rows are sorted by neighbour, so the first match is lex-smallest
        let (v, l) = adj[u].iter().copied().find(|&(v, l)| {
            !blocked_links[l]
                && !blocked_nodes[v]
                && !on_path[v]
                && dist[v] != u128::MAX
                && dist[u] == weights.units[l] + dist[v]
        })?;
        on_path[v] = true;
        nodes.push(v);
        links.push(l);
        u = v;
    }
    Some((nodes, links))
}

/// Yen's k shortest loopless paths, ordered by cost then node sequence.
pub fn yen_k_shortest(
    t: &LogicalTopology,
    weights: &[f64],
    src: usize,
    dst: usize,
    k: usize,
) -> Result<Vec<RawPath>> {
    if weights.len() != t.link_count() {
        return Err(Error::InvalidArgument(format!(
            "{} weights for {} links",
            weights.len(),
            t.link_count()
        )));
    }
    if src >= t.node_count || dst >= t.node_count || src == dst {
        return Err(Error::InvalidArgument(format!("bad endpoints {src}, {dst}")));
    }
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let fixed = FixedWeights::new(weights)?;
    let adj = t.adjacency();
    let n = t.node_count;
    let m = t.link_count();
    let none_n = vec![false; n];
    let none_l = vec![false; m];
    let (nodes, links) =
        lex_shortest_path(&adj, &fixed, src, dst, &none_n, &none_l).ok_or(Error::NoPath(src, dst))?;
    // (exact cost, nodes, links); ordering is cost then node sequence
    type Cand = (u128, Vec<usize>, Vec<usize>);
    let mut accepted: Vec<Cand> = vec![(fixed.sum(&links), nodes, links)];
    let mut pool: BTreeSet<Cand> = BTreeSet::new();

    while accepted.len() < k {
        let (_, last_nodes, last_links) = accepted.last().expect("nonempty").clone();
        for i in 0..last_nodes.len() - 1 {
            let spur = last_nodes[i];
            let root = &last_nodes[..=i];
            let mut blocked_l = vec![false; m];
            for (_, pn, pl) in &accepted {
                if pn.len() > i && &pn[..=i] == root {
                    blocked_l[pl[i]] = true;
                }
            }
            let mut blocked_n = vec![false; n];
            for &r in &root[..i] {
                blocked_n[r] = true;
            }
            if let Some((sn, sl)) = lex_shortest_path(&adj, &fixed, spur, dst, &blocked_n, &blocked_l) {
                let mut nodes = root.to_vec();
                nodes.extend_from_slice(&sn[1..]);
                if accepted.iter().any(|(_, pn, _)| *pn == nodes) {
                    continue;
                }
                let mut links = last_links[..i].to_vec();
                links.extend(sl);
                pool.insert((fixed.sum(&links), nodes, links));
            }
        }
        match pool.pop_first() {
            Some(c) => accepted.push(c),
            None => break,
        }
    }
    Ok(accepted
        .into_iter()
        .map(|(c, nodes, links)| RawPath {
            cost: fixed.to_f64(c),
            nodes,
            links,
        })
        .collect())
}

/// The `k` minimum-NSR loopless paths for `pair`, with planning capacities.
pub fn k_shortest_nsr_paths(
    pt: &PhysicalTopology,
    weights: &[f64],
    pair: NodePair,
    k: usize,
    grid: &ChannelGrid,
) -> Result<Vec<CandidatePath>> {
    Ok(yen_k_shortest(&pt.logical, weights, pair.a, pair.b, k)?
        .into_iter()
        .map(|p| CandidatePath {
            capacity_bps: crate::physlayer::shannon_capacity(p.cost, grid),
            nsr: p.cost,
            nodes: p.nodes,
            links: p.links,
        })
        .collect())
}

/// Keeps candidates with capacity ≥ `x` times the best capacity of the pair.
pub fn relax_filter(pair: NodePair, paths: &[CandidatePath], x: f64) -> Result<PathSet> {
    if paths.is_empty() {
        return Err(Error::InvalidArgument(format!("no candidates for pair {pair}")));
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::InvalidArgument(format!("relaxation x = {x} outside [0, 1]")));
    }
    let c_max = paths.iter().map(|p| p.capacity_bps).fold(f64::MIN, f64::max);
    let threshold = x * c_max;
    let mut candidates: Vec<CandidatePath> = paths
        .iter()
        .filter(|p| p.capacity_bps >= threshold)
        .cloned()
        .collect();
    candidates.sort_by(|a, b| b.capacity_bps.total_cmp(&a.capacity_bps));
    Ok(PathSet { pair, candidates, x })
}
