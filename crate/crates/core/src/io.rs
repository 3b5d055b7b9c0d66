//! File formats: topology JSON, solution TSV and summary JSON, candidate dumps.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::PhysicalTopology;
use crate::routing::{CandidatePath, PathSet};
use crate::rwa::{LightpathRecord, RwaSolution};
use crate::topology::{LogicalTopology, NodePair};

/// On-disk topology: `{"name", "nodes", "links", "length_km"?, "spans"?}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopologyFile {
    pub name: String,
    pub nodes: usize,
    pub links: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub length_km: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spans: Option<Vec<usize>>,
}

impl From<&LogicalTopology> for TopologyFile {
    fn from(t: &LogicalTopology) -> Self {
        TopologyFile {
            name: t.name.clone(),
            nodes: t.node_count,
            links: t.links.iter().map(|&(a, b)| [a, b]).collect(),
            length_km: None,
            spans: None,
        }
    }
}

impl From<&PhysicalTopology> for TopologyFile {
    fn from(p: &PhysicalTopology) -> Self {
        TopologyFile {
            length_km: Some(p.link_km.clone()),
            spans: Some(p.link_spans.clone()),
            ..TopologyFile::from(&p.logical)
        }
    }
}

impl TopologyFile {
    pub fn logical(&self) -> Result<LogicalTopology> {
        LogicalTopology::new(
            self.name.clone(),
            self.nodes,
            self.links.iter().map(|l| (l[0], l[1])).collect(),
        )
    }

    /// Physical topology; spans are always recomputed from `length_km`.
    pub fn physical(&self) -> Result<PhysicalTopology> {
        let km = self
            .length_km
            .clone()
            .ok_or_else(|| Error::Parse(format!("topology {} has no length_km", self.name)))?;
        PhysicalTopology::new(self.logical()?, km)
    }
}

/// Writes via a temporary sibling and rename, so readers never see a partial file.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        }
    }
    let tmp = path.with_extension(format!(
        "{}.tmp",
        path.extension().and_then(|e| e.to_str()).unwrap_or("")
    ));
    fs::write(&tmp, contents).map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

pub fn read_to_string(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    write_atomic(path, s.as_bytes())
}

pub fn read_topology(path: &Path) -> Result<TopologyFile> {
    Ok(serde_json::from_str(&read_to_string(path)?)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionSummary {
    pub n_lambda: usize,
    pub total_tbps: f64,
    pub avg_gbps: f64,
    pub max_link_occupancy: usize,
}

impl From<&RwaSolution> for SolutionSummary {
    fn from(s: &RwaSolution) -> Self {
        SolutionSummary {
            n_lambda: s.n_lambda,
            total_tbps: s.total_bps / 1e12,
            avg_gbps: s.avg_bps / 1e9,
            max_link_occupancy: s.max_link_occupancy(),
        }
    }
}

const SOLUTION_HEADER: &str = "pair\tcopy\twavelength\tnodes\tnsr\tcapacity_gbps";

fn join_nodes(nodes: &[usize]) -> String {
    nodes.iter().map(usize::to_string).collect::<Vec<_>>().join("-")
}

/// One row per lightpath. NSR and capacity columns are `nan` when the
/// solution has not been through final throughput evaluation.
pub fn solution_tsv(sol: &RwaSolution) -> String {
    let mut out = String::from(SOLUTION_HEADER);
    out.push('\n');
    for (i, a) in sol.assignments.iter().enumerate() {
        let nsr = sol.nsr.get(i).copied().unwrap_or(f64::NAN);
        let cap = sol.capacity_bps.get(i).copied().unwrap_or(f64::NAN) / 1e9;
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{:.9e}\t{:.6}",
            a.pair,
            a.copy,
            a.wavelength,
            join_nodes(&a.nodes),
            nsr,
            cap
        );
    }
    out
}

pub fn write_solution(dir: &Path, sol: &RwaSolution) -> Result<()> {
    write_atomic(&dir.join("solution.tsv"), solution_tsv(sol).as_bytes())?;
    write_json(&dir.join("summary.json"), &SolutionSummary::from(sol))
}

fn parse_usize(field: &str, what: &str, line: usize) -> Result<usize> {
    field
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("line {line}: bad {what} '{field}'")))
}

/// Parses a solution TSV back into feasibility records.
pub fn parse_solution_tsv(text: &str) -> Result<Vec<LightpathRecord>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == SOLUTION_HEADER => {}
        _ => return Err(Error::Parse("missing solution header".into())),
    }
    let mut out = Vec::new();
    for (i, line) in lines {
        let n = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 6 {
            return Err(Error::Parse(format!("line {n}: expected 6 columns, got {}", cols.len())));
        }
        let (a, b) = cols[0]
            .split_once('-')
            .ok_or_else(|| Error::Parse(format!("line {n}: bad pair '{}'", cols[0])))?;
        let pair = NodePair::new(parse_usize(a, "pair", n)?, parse_usize(b, "pair", n)?);
        let nodes = cols[3]
            .split('-')
            .map(|s| parse_usize(s, "node", n))
            .collect::<Result<Vec<_>>>()?;
        out.push(LightpathRecord {
            pair,
            copy: parse_usize(cols[1], "copy", n)?,
            wavelength: parse_usize(cols[2], "wavelength", n)?,
            nodes,
        });
    }
    Ok(out)
}

/// Candidate dump: every enumerated path per pair with a kept/filtered flag.
pub fn candidates_tsv(pools: &[(NodePair, Vec<CandidatePath>)], kept: &[PathSet]) -> String {
    let mut out = String::from("pair\trank\tnodes\tnsr\tcapacity_gbps\tstatus\n");
    for ((pair, pool), set) in pools.iter().zip(kept) {
        for (rank, c) in pool.iter().enumerate() {
            let status = if set.candidates.iter().any(|k| k.nodes == c.nodes) {
                "kept"
            } else {
                "filtered"
            };
            let _ = writeln!(
                out,
                "{pair}\t{rank}\t{}\t{:.9e}\t{:.6}\t{status}",
                join_nodes(&c.nodes),
                c.nsr,
                c.capacity_bps / 1e9
            );
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn topology_json_shape() {
        let pt = PhysicalTopology::nsfnet();
        let f = TopologyFile::from(&pt);
        let text = serde_json::to_string(&f).unwrap();
        assert!(text.contains("\"length_km\""));
        assert!(text.contains("\"nodes\":14"));
        let back: TopologyFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back.physical().unwrap(), pt);

        let logical = TopologyFile::from(&pt.logical);
        let text = serde_json::to_string(&logical).unwrap();
        assert!(!text.contains("length_km"));
        assert!(serde_json::from_str::<TopologyFile>(&text).unwrap().physical().is_err());
    }

    #[test]
    fn rejects_malformed_tsv() {
        assert!(parse_solution_tsv("nope\n").is_err());
        let bad = format!("{SOLUTION_HEADER}\n0-1\tx\t0\t0-1\t0\t0\n");
        assert!(parse_solution_tsv(&bad).is_err());
        let short = format!("{SOLUTION_HEADER}\n0-1\t0\t0\n");
        assert!(parse_solution_tsv(&short).is_err());
    }
}
