//! Logical topologies: the NSFNET reference network and seeded ACMN variants.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed;

/// Node and link counts shared by NSFNET and every default ensemble member.
pub const ACMN_NODES: usize = 14;
pub const ACMN_LINKS: usize = 21;

/// Unordered node pair stored canonically with `a < b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NodePair {
    pub a: usize,
    pub b: usize,
}

impl NodePair {
    pub fn new(x: usize, y: usize) -> Self {
        if x <= y {
            NodePair { a: x, b: y }
        } else {
            NodePair { a: y, b: x }
        }
    }
}

impl std::fmt::Display for NodePair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}-{}", self.a, self.b)
    }
}

/// Undirected simple graph. Links are stored as canonical `(a, b)` with `a < b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogicalTopology {
    pub name: String,
    pub node_count: usize,
    pub links: Vec<(usize, usize)>,
}

impl LogicalTopology {
    /// Builds a topology, rejecting self-loops, parallel links and out-of-range
    /// endpoints. Link order is preserved; endpoints are canonicalised.
    pub fn new(name: impl Into<String>, node_count: usize, links: Vec<(usize, usize)>) -> Result<Self> {
        let mut canon = Vec::with_capacity(links.len());
        let mut seen = std::collections::HashSet::new();
        for (x, y) in links {
            if x == y {
                return Err(Error::InvalidTopology(format!("self-loop at node {x}")));
            }
            if x >= node_count || y >= node_count {
                return Err(Error::InvalidTopology(format!(
                    "link ({x},{y}) references a node outside 0..{node_count}"
                )));
            }
            let p = NodePair::new(x, y);
            if !seen.insert(p) {
                return Err(Error::InvalidTopology(format!("parallel link ({},{})", p.a, p.b)));
            }
            canon.push((p.a, p.b));
        }
        Ok(LogicalTopology {
            name: name.into(),
            node_count,
            links: canon,
        })
    }

    pub fn link_count(&self) -> usize {
        self.links.len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.node_count];
        for &(a, b) in &self.links {
            deg[a] += 1;
            deg[b] += 1;
        }
        deg
    }

    /// Adjacency list of `(neighbour, link index)`, neighbours in ascending order.
    pub fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.node_count];
        for (i, &(a, b)) in self.links.iter().enumerate() {
            adj[a].push((b, i));
            adj[b].push((a, i));
        }
        for row in &mut adj {
            row.sort_unstable();
        }
        adj
    }

    pub fn link_index(&self, x: usize, y: usize) -> Option<usize> {
        let p = NodePair::new(x, y);
        self.links.iter().position(|&(a, b)| a == p.a && b == p.b)
    }

    pub fn is_connected(&self) -> bool {
        if self.node_count == 0 {
            return true;
        }
        let adj = self.adjacency();
        let mut seen = vec![false; self.node_count];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut reached = 1;
        while let Some(u) = queue.pop_front() {
            for &(v, _) in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    reached += 1;
                    queue.push_back(v);
                }
            }
        }
        reached == self.node_count
    }

    /// Checks the mesh invariants on top of simplicity: connected, every node
    /// of degree at least two.
    pub fn check_mesh(&self) -> Result<()> {
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        if let Some((node, d)) = self.degrees().iter().enumerate().find(|(_, &d)| d < 2) {
            return Err(Error::InvalidTopology(format!("node {node} has degree {d} < 2")));
        }
        Ok(())
    }

    /// Sorted link list, used for deduplication and hashing.
    pub fn canonical_links(&self) -> Vec<(usize, usize)> {
        let mut l = self.links.clone();
        l.sort_unstable();
        l
    }
}

/// All unordered node pairs in lexicographic order.
pub fn node_pairs(t: &LogicalTopology) -> Vec<NodePair> {
    let n = t.node_count;
    (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| NodePair { a, b }))
        .collect()
}

/// NSFNET links (0-indexed: WA, CA1, CA2, UT, CO, TX, NE, IL, PA, GA, MI, NY, NJ, MD).
const NSFNET_LINKS: [(usize, usize); ACMN_LINKS] = [
    (0, 1),
    (0, 2),
    (0, 7),
    (1, 2),
    (1, 3),
    (2, 5),
    (3, 4),
    (3, 10),
    (4, 5),
    (4, 6),
    (5, 9),
    (5, 13),
    (6, 7),
    (7, 8),
    (8, 9),
    (8, 11),
    (8, 12),
    (10, 11),
    (10, 12),
    (11, 13),
    (12, 13),
];

/// Fibre distances in km for [`NSFNET_LINKS`], same order. Mean link distance
/// 1463 km, mean node-pair distance ~3070 km, normalised diameter ~2.13.
const NSFNET_KM: [f64; ACMN_LINKS] = [
    1401.0, 2299.0, 2801.0, 883.0, 1313.0, 3209.0, 790.0, 3374.0, 1726.0, 1225.0, 1730.0,
    3103.0, 977.0, 843.0, 1127.0, 499.0, 610.0, 961.0, 992.0, 522.0, 338.0,
];

/// The NSFNET reference topology and its per-link distances in km.
pub fn load_nsfnet() -> (LogicalTopology, Vec<f64>) {
    let t = LogicalTopology::new("nsfnet", ACMN_NODES, NSFNET_LINKS.to_vec())
        .expect("embedded NSFNET is a simple graph");
    (t, NSFNET_KM.to_vec())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum GenerationMode {
    /// Degree-preserving double-edge swaps applied to NSFNET.
    EdgeSwap { swaps: usize },
    /// Uniformly random simple graph with NSFNET's node and link counts,
    /// rejected until connected with minimum degree two.
    UniformRandom,
}

impl Default for GenerationMode {
    fn default() -> Self {
        GenerationMode::EdgeSwap { swaps: 100 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    #[serde(flatten)]
    pub mode: GenerationMode,
    /// Attempt budget. For edge swaps this bounds proposed swaps per accepted
    /// swap; for uniform sampling it bounds whole-graph draws.
    pub max_retries: usize,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            mode: GenerationMode::default(),
            max_retries: 100_000,
        }
    }
}

/// Generates one ACMN ensemble member with the default (edge-swap) mode.
pub fn generate_acmn(seed: u64) -> Result<LogicalTopology> {
    generate_acmn_with(seed, &GeneratorConfig::default())
}

pub fn generate_acmn_with(seed: u64, cfg: &GeneratorConfig) -> Result<LogicalTopology> {
    let mut rng = seed::rng(seed);
    let name = format!("acmn-{seed:016x}");
    match cfg.mode {
        GenerationMode::EdgeSwap { swaps } => {
            let (base, _) = load_nsfnet();
            let mut links = base.links.clone();
            let mut accepted = 0;
            let mut attempts = 0;
            let budget = cfg.max_retries.max(1).saturating_mul(swaps.max(1));
            while accepted < swaps {
                if attempts >= budget {
                    return Err(Error::GenerationFailed { attempts });
                }
                attempts += 1;
                if try_swap(&mut links, ACMN_NODES, &mut rng) {
                    accepted += 1;
                }
            }
            links.sort_unstable();
            LogicalTopology::new(name, ACMN_NODES, links)
        }
        GenerationMode::UniformRandom => {
            let all: Vec<(usize, usize)> = (0..ACMN_NODES)
                .flat_map(|a| (a + 1..ACMN_NODES).map(move |b| (a, b)))
                .collect();
            for _ in 0..cfg.max_retries {
                let mut links: Vec<_> = all.choose_multiple(&mut rng, ACMN_LINKS).copied().collect();
                links.sort_unstable();
                let t = LogicalTopology::new(name.clone(), ACMN_NODES, links)?;
                if t.check_mesh().is_ok() {
                    return Ok(t);
                }
            }
            Err(Error::GenerationFailed {
                attempts: cfg.max_retries,
            })
        }
    }
}

/// Proposes one double-edge swap `(a,b),(c,d) -> (a,d),(c,b)` or
/// `(a,c),(b,d)`; applies it only if the graph stays simple and connected.
fn try_swap<R: Rng>(links: &mut [(usize, usize)], n: usize, rng: &mut R) -> bool {
    let m = links.len();
    if m < 2 {
        return false;
    }
    let i = rng.gen_range(0..m);
    let j = rng.gen_range(0..m);
    if i == j {
        return false;
    }
    let (a, b) = links[i];
    let (c, d) = links[j];
    let (e1, e2) = if rng.gen_bool(0.5) {
        ((a, d), (c, b))
    } else {
        ((a, c), (b, d))
    };
    if e1.0 == e1.1 || e2.0 == e2.1 {
        return false;
    }
    let e1 = NodePair::new(e1.0, e1.1);
    let e2 = NodePair::new(e2.0, e2.1);
    if e1 == e2 {
        return false;
    }
    let exists = |p: NodePair| {
        links
            .iter()
            .enumerate()
            .any(|(k, &(x, y))| k != i && k != j && x == p.a && y == p.b)
    };
    if exists(e1) || exists(e2) {
        return false;
    }
    let old = (links[i], links[j]);
    links[i] = (e1.a, e1.b);
    links[j] = (e2.a, e2.b);
    if !connected(links, n) {
        links[i] = old.0;
        links[j] = old.1;
        return false;
    }
    true
}

fn connected(links: &[(usize, usize)], n: usize) -> bool {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut x = x;
        while p[x] != r {
            let nx = p[x];
            p[x] = r;
            x = nx;
        }
        r
    }
    let mut comps = n;
    for &(a, b) in links {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
            comps -= 1;
        }
    }
    comps <= 1
}
