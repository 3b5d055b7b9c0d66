//! Oracles and instance builders shared by the integration tests and the
//! acceptance suite. Reference values never come from the code under test.

#![allow(dead_code)]

use std::collections::BTreeMap;

use acmn::physlayer::{
    nli_eta_closed_form, nli_eta_numeric, ChannelGrid, FiberParams, LinkLoad, NumericOptions,
};
use acmn::routing::{CandidatePath, PathSet};
use acmn::rwa::RwaSolution;
use acmn::topology::{LogicalTopology, NodePair};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// Random connected simple graph: a random spanning tree plus extra links.
pub fn random_connected(nodes: usize, links: usize, seed: u64) -> LogicalTopology {
    assert!(links >= nodes - 1 && links <= nodes * (nodes - 1) / 2);
    let mut r = rng(seed);
    let mut order: Vec<usize> = (0..nodes).collect();
    order.shuffle(&mut r);
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for i in 1..nodes {
        let j = r.gen_range(0..i);
        edges.push((order[i], order[j]));
    }
    let mut rest: Vec<(usize, usize)> = (0..nodes)
        .flat_map(|a| (a + 1..nodes).map(move |b| (a, b)))
        .filter(|&(a, b)| !edges.iter().any(|&(x, y)| (x.min(y), x.max(y)) == (a, b)))
        .collect();
    rest.shuffle(&mut r);
    edges.extend(rest.into_iter().take(links - (nodes - 1)));
    edges.shuffle(&mut r);
    LogicalTopology::new(format!("rand-{seed}"), nodes, edges).unwrap()
}

/// Every simple path from `src` to `dst` by depth-first search, with its
/// exact link weight sum, sorted by (cost, node sequence).
pub fn all_simple_paths(
    t: &LogicalTopology,
    weights: &[f64],
    src: usize,
    dst: usize,
) -> Vec<(Vec<usize>, Vec<usize>, f64)> {
    fn dfs(
        t: &LogicalTopology,
        dst: usize,
        nodes: &mut Vec<usize>,
        links: &mut Vec<usize>,
        out: &mut Vec<(Vec<usize>, Vec<usize>)>,
    ) {
        let u = *nodes.last().unwrap();
        if u == dst {
            out.push((nodes.clone(), links.clone()));
            return;
        }
        for (l, &(a, b)) in t.links.iter().enumerate() {
            let v = if a == u {
                b
            } else if b == u {
                a
            } else {
                continue;
            };
            if nodes.contains(&v) {
                continue;
            }
            nodes.push(v);
            links.push(l);
            dfs(t, dst, nodes, links, out);
            nodes.pop();
            links.pop();
        }
    }
    let mut raw = Vec::new();
    dfs(t, dst, &mut vec![src], &mut Vec::new(), &mut raw);
    let mut out: Vec<_> = raw
        .into_iter()
        .map(|(n, l)| {
            let (num, exp) = exact_sum(l.iter().map(|&x| weights[x]));
            (n, l, num, exp)
        })
        .collect();
    // Compare exact sums on the smallest exponent present.
    let base = out.iter().map(|p| p.3).min().unwrap_or(0);
    out.sort_by(|a, b| {
        (a.2 << (a.3 - base))
            .cmp(&(b.2 << (b.3 - base)))
            .then_with(|| a.0.cmp(&b.0))
    });
    out.into_iter()
        .map(|(n, l, num, exp)| (n, l, num as f64 * 2f64.powi(exp)))
        .collect()
}

/// Exact sum of positive doubles as `num · 2^exp`.
pub fn exact_sum(xs: impl Iterator<Item = f64> + Clone) -> (u128, i32) {
    let parts: Vec<(u128, i32)> = xs
        .map(|x| {
            let (m, e) = num_parts(x);
            (m as u128, e as i32)
        })
        .filter(|p| p.0 != 0)
        .collect();
    let exp = parts.iter().map(|p| p.1).min().unwrap_or(0);
    (parts.iter().map(|&(m, e)| m << (e - exp)).sum(), exp)
}

/// Mantissa and exponent of a finite non-negative double.
fn num_parts(x: f64) -> (u64, i16) {
    let bits = x.to_bits();
    let exponent = ((bits >> 52) & 0x7ff) as i16;
    let mantissa = if exponent == 0 {
        (bits & 0xfffffffffffff) << 1
    } else {
        (bits & 0xfffffffffffff) | 0x10000000000000
    };
    (mantissa, exponent - 1075)
}

/// One closed-form vs numeric comparison.
pub struct GnCase {
    pub label: String,
    pub spans: usize,
    pub closed: f64,
    pub numeric: f64,
    pub limit_db: f64,
}

impl GnCase {
    /// Link NSR ratio in dB; NLI accumulates incoherently so the span count
    /// scales both sides alike.
    pub fn delta_db(&self) -> f64 {
        db((self.spans as f64 * self.closed) / (self.spans as f64 * self.numeric))
    }
}

/// Loads of 1, 2, 11 and 156 channels on the default grid, channel of
/// interest at the edge and centre, 1 and 20 spans.
pub fn gn_battery() -> Vec<GnCase> {
    let params = FiberParams::default();
    let grid = ChannelGrid::default();
    let n = grid.channel_count();
    let c = n / 2;
    let loads: Vec<(&str, LinkLoad, Vec<usize>, f64)> = vec![
        ("1ch", LinkLoad::from_indices([0]), vec![0], 1.0),
        ("1ch", LinkLoad::from_indices([c]), vec![c], 1.0),
        ("2ch", LinkLoad::from_indices([0, 1]), vec![0, 1], 1.0),
        ("2ch", LinkLoad::from_indices([c, c + 1]), vec![c], 1.0),
        ("11ch", LinkLoad::from_indices(0..11), vec![0, 5], 1.0),
        ("11ch", LinkLoad::from_indices(c - 5..=c + 5), vec![c - 5, c], 1.0),
        ("156ch", LinkLoad::full(n), vec![0, c, n - 1], 0.5),
    ];
    let mut out = Vec::new();
    for (name, load, channels, limit) in loads {
        for ch in channels {
            let closed = nli_eta_closed_form(&params, &grid, &load, ch).unwrap();
            let numeric = nli_eta_numeric(&params, &grid, &load, ch, &NumericOptions::default())
                .unwrap()
                .eta;
            for spans in [1, 20] {
                out.push(GnCase {
                    label: format!("{name} ch{ch} {spans}sp"),
                    spans,
                    closed,
                    numeric,
                    limit_db: limit,
                });
            }
        }
    }
    out
}

/// Launch power maximising `P / (p_ase + η P³)` on a 0.001 dB grid from
/// -60 dBm to +30 dBm.
pub fn logon_grid_search(p_ase: f64, eta: f64) -> f64 {
    let mut best = (f64::NEG_INFINITY, 0.0);
    let steps = 90_000;
    for i in 0..=steps {
        let dbm = -60.0 + 90.0 * i as f64 / steps as f64;
        let p = 1e-3 * 10f64.powf(dbm / 10.0);
        let snr = p / (p_ase + eta * p * p * p);
        if snr > best.0 {
            best = (snr, p);
        }
    }
    best.1
}

/// Smallest achievable maximum link load when every pair of `demands` gets
/// `n_lambda` lightpaths, by branch and bound over route choices. Copies of a
/// pair are interchangeable, so each pair picks a multiset of routes.
///
/// With at least as many wavelengths as lightpaths every lightpath can take
/// its own wavelength, so this is also the optimum over route and wavelength.
pub fn min_max_load(demands: &[PathSet], link_count: usize, n_lambda: usize, upper: usize) -> usize {
    fn multisets(k: usize, n: usize) -> Vec<Vec<usize>> {
        if k == 1 {
            return vec![vec![n]];
        }
        let mut out = Vec::new();
        for first in (0..=n).rev() {
            for mut rest in multisets(k - 1, n - first) {
                rest.insert(0, first);
                out.push(rest);
            }
        }
        out
    }
    struct Search<'a> {
        demands: Vec<&'a PathSet>,
        choices: Vec<Vec<Vec<usize>>>,
        load: Vec<usize>,
        best: usize,
    }
    impl Search<'_> {
        fn go(&mut self, i: usize, cur: usize) {
            if cur >= self.best {
                return;
            }
            if i == self.demands.len() {
                self.best = cur;
                return;
            }
            for c in 0..self.choices[i].len() {
                let counts = self.choices[i][c].clone();
                let mut m = cur;
                for (r, &cnt) in counts.iter().enumerate() {
                    for &l in &self.demands[i].candidates[r].links {
                        self.load[l] += cnt;
                        m = m.max(self.load[l]);
                    }
                }
                self.go(i + 1, m);
                for (r, &cnt) in counts.iter().enumerate() {
                    for &l in &self.demands[i].candidates[r].links {
                        self.load[l] -= cnt;
                    }
                }
            }
        }
    }
    let mut ds: Vec<&PathSet> = demands.iter().collect();
    ds.sort_by_key(|d| d.candidates.len());
    let choices = ds.iter().map(|d| multisets(d.candidates.len(), n_lambda)).collect();
    let mut s = Search {
        demands: ds,
        choices,
        load: vec![0; link_count],
        best: upper + 1,
    };
    s.go(0, 0);
    s.best
}

/// Recounts a solution from scratch: one wavelength per link at most once,
/// route continuity, occupancy bound and a uniform count per pair.
pub fn recount(sol: &RwaSolution, t: &LogicalTopology, pairs: &[NodePair]) -> Vec<String> {
    let mut v = Vec::new();
    let mut seen: BTreeMap<(usize, usize), NodePair> = BTreeMap::new();
    let mut per_link = vec![0usize; t.link_count()];
    let mut per_pair: BTreeMap<NodePair, usize> = BTreeMap::new();
    for a in &sol.assignments {
        *per_pair.entry(a.pair).or_default() += 1;
        if a.wavelength >= sol.wavelengths {
            v.push(format!("{} wavelength {} out of range", a.pair, a.wavelength));
        }
        let ends = (a.nodes[0].min(*a.nodes.last().unwrap()), a.nodes[0].max(*a.nodes.last().unwrap()));
        if ends != (a.pair.a, a.pair.b) {
            v.push(format!("{} route ends at {:?}", a.pair, ends));
        }
        for w in a.nodes.windows(2) {
            match t.link_index(w[0], w[1]) {
                None => v.push(format!("{} uses missing link {}-{}", a.pair, w[0], w[1])),
                Some(l) => {
                    per_link[l] += 1;
                    if let Some(p) = seen.insert((l, a.wavelength), a.pair) {
                        v.push(format!("link {l} wavelength {} used by {p} and {}", a.wavelength, a.pair));
                    }
                }
            }
        }
    }
    if let Some(m) = per_link.iter().max() {
        if *m > sol.wavelengths {
            v.push(format!("link occupancy {m} exceeds {}", sol.wavelengths));
        }
    }
    for p in pairs {
        let c = per_pair.get(p).copied().unwrap_or(0);
        if c != sol.n_lambda {
            v.push(format!("pair {p} has {c} lightpaths, expected {}", sol.n_lambda));
        }
    }
    v
}

/// Candidate path with capacity derived from a stand-in NSR.
pub fn candidate(nodes: Vec<usize>, links: Vec<usize>, nsr: f64) -> CandidatePath {
    CandidatePath {
        nodes,
        links,
        nsr,
        capacity_bps: 64e9 * (1.0 + 1.0 / nsr).log2(),
    }
}

/// Toy RWA instance: 4 to 6 nodes, at most 8 links, up to 3 candidate
/// routes per pair from exhaustive enumeration under random weights.
pub fn toy_rwa_instance(seed: u64) -> (LogicalTopology, Vec<PathSet>) {
    let mut r = rng(seed);
    let nodes = r.gen_range(4..=6);
    let max_links = 8.min(nodes * (nodes - 1) / 2);
    let links = r.gen_range(nodes..=max_links);
    let t = random_connected(nodes, links, seed);
    let w: Vec<f64> = (0..links).map(|_| r.gen_range(1..5) as f64).collect();
    let demands = acmn::topology::node_pairs(&t)
        .into_iter()
        .map(|p| {
            let k = r.gen_range(1..=3);
            let candidates = all_simple_paths(&t, &w, p.a, p.b)
                .into_iter()
                .take(k)
                .map(|(n, l, c)| candidate(n, l, c * 1e-3))
                .collect();
            PathSet {
                pair: p,
                candidates,
                x: 0.0,
            }
        })
        .collect();
    (t, demands)
}

/// Fuzz instance: a generated 14-node topology with sampled distances scaled
/// to a random mean, and a random relaxation value.
pub fn fuzz_instance(seed: u64) -> (acmn::geometry::PhysicalTopology, f64) {
    use acmn::geometry::{assign_distances, fit_kde, scale_to_mean};
    let mut r = rng(seed);
    let t = acmn::topology::generate_acmn(seed).unwrap();
    let (_, km) = acmn::topology::load_nsfnet();
    let pdf = fit_kde(&km).unwrap();
    let pt = assign_distances(&t, &pdf, seed ^ 0x5eed);
    let pt = scale_to_mean(&pt, r.gen_range(640.0..3040.0)).unwrap();
    (pt, [0.7, 0.75, 0.8, 0.85, 0.9, 0.95, 1.0][r.gen_range(0..7)])
}

/// Weights for oracle instance `i`: even instances use continuous weights,
/// odd ones integer span counts on a common unit, which produces exact ties.
fn weights(links: usize, i: u64) -> Vec<f64> {
    let mut r = rng(1000 + i);
    if i.is_multiple_of(2) {
        (0..links).map(|_| r.gen_range(0.1..10.0)).collect()
    } else {
        (0..links).map(|_| r.gen_range(1..6) as f64 * 1.147e-3).collect()
    }
}

/// Number of exact mismatches between Yen and exhaustive enumeration over
/// every pair and every k ≤ 10 on a random 8-node instance.
pub fn yen_mismatches(i: u64) -> usize {
    let links = 10 + (i as usize % 9);
    let t = random_connected(8, links, i);
    let w = weights(links, i);
    let mut bad = 0;
    for p in acmn::topology::node_pairs(&t) {
        let all = all_simple_paths(&t, &w, p.a, p.b);
        for k in 1..=10 {
            let got = acmn::routing::yen_k_shortest(&t, &w, p.a, p.b, k).unwrap();
            let expect = &all[..k.min(all.len())];
            let same = got.len() == expect.len()
                && got
                    .iter()
                    .zip(expect)
                    .all(|(g, e)| g.nodes == e.0 && g.links == e.1 && g.cost == e.2);
            if !same {
                bad += 1;
            }
        }
    }
    bad
}

/// (heuristic, optimum) max link load on toy instance `i`.
pub fn toy_gap(i: u64) -> (usize, usize) {
    let (t, demands) = toy_rwa_instance(i);
    let n_lambda = 1 + (i as usize % 3);
    let cfg = acmn::rwa::RwaConfig::default();
    let sol = acmn::rwa::assign_for_lambda(&demands, t.link_count(), n_lambda, &cfg, i).unwrap();
    assert!(acmn::rwa::validate_solution(&sol, &t, Some(&demands)).is_valid());
    assert!(demands.len() * n_lambda <= cfg.wavelengths);
    let h = sol.max_link_occupancy();
    (h, min_max_load(&demands, t.link_count(), n_lambda, h))
}

