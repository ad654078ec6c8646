//! Solution files: a kept edge set plus the paths that use it.
//!
//! ```text
//! # method lle
//! KEPT 2
//! 0 1
//! 1 2
//! PATHS 1
//! 0 2 : 0 1 2
//! ```
//!
//! Edges are given by their endpoints, paths by `s t : node node ...`.
//! A pair may list several paths (one line each). PATHS is optional.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use super::ParseError;
use crate::graph::{DemandSet, EdgeId, Network, NodeId, Path};
use crate::heuristics::SolutionSubgraph;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SolutionFile {
    pub comments: Vec<String>,
    pub kept: Vec<(NodeId, NodeId)>,
    pub paths: Vec<(NodeId, NodeId, Vec<NodeId>)>,
}

impl SolutionFile {
    pub fn from_subgraph(network: &Network, demands: &DemandSet, sol: &SolutionSubgraph) -> Self {
        let p = &sol.provenance;
        let mut comments = vec![format!("method {}", p.method), format!("seed {}", p.seed)];
        if let Some(l) = p.lambda {
            comments.push(format!("lambda {l}"));
        }
        if let Some(k) = p.kappa {
            comments.push(format!("kappa {k}"));
        }
        let kept = sol
            .kept
            .iter()
            .map(|&e| (network.edge(e).u, network.edge(e).v))
            .collect();
        let paths = demands
            .iter()
            .zip(sol.witness.assignment())
            .filter_map(|(d, p)| p.as_ref().map(|p| (d.source, d.target, p.nodes().to_vec())))
            .collect();
        SolutionFile {
            comments,
            kept,
            paths,
        }
    }

    /// Kept edges resolved against `network`.
    pub fn kept_edge_ids(&self, network: &Network) -> Result<BTreeSet<EdgeId>, String> {
        self.kept
            .iter()
            .map(|&(u, v)| {
                if u >= network.node_count() || v >= network.node_count() {
                    return Err(format!("kept edge {u}-{v} names a missing node"));
                }
                network
                    .edge_between(u, v)
                    .ok_or_else(|| format!("kept edge {u}-{v} is not in the network"))
            })
            .collect()
    }

    /// Paths resolved against `network`, keyed by their declared pair.
    pub fn resolved_paths(
        &self,
        network: &Network,
    ) -> Result<Vec<((NodeId, NodeId), Path)>, String> {
        self.paths
            .iter()
            .map(|(s, t, nodes)| {
                Path::from_nodes(network, nodes.clone())
                    .map(|p| ((*s, *t), p))
                    .map_err(|e| format!("path for {s}->{t}: {e}"))
            })
            .collect()
    }
}

pub fn write_solution_text(file: &SolutionFile) -> String {
    let mut out = String::new();
    for c in &file.comments {
        let _ = writeln!(out, "# {c}");
    }
    let _ = writeln!(out, "KEPT {}", file.kept.len());
    for (u, v) in &file.kept {
        let _ = writeln!(out, "{u} {v}");
    }
    if !file.paths.is_empty() {
        let _ = writeln!(out, "PATHS {}", file.paths.len());
        for (s, t, nodes) in &file.paths {
            let nodes: Vec<String> = nodes.iter().map(ToString::to_string).collect();
            let _ = writeln!(out, "{s} {t} : {}", nodes.join(" "));
        }
    }
    out
}

fn ids(no: usize, tokens: &[&str]) -> Result<Vec<NodeId>, ParseError> {
    tokens
        .iter()
        .map(|t| {
            t.parse()
                .map_err(|_| ParseError::new(no, 1, format!("bad node id `{t}`")))
        })
        .collect()
}

pub fn parse_solution_text(text: &str) -> Result<SolutionFile, ParseError> {
    let mut file = SolutionFile::default();
    let lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).peekable();
    let mut section: Option<(&str, usize, usize)> = None;
    let mut last = 1;
    for (no, line) in lines {
        last = no;
        if line.is_empty() {
            continue;
        }
        if let Some(c) = line.strip_prefix('#') {
            file.comments.push(c.trim().to_string());
            continue;
        }
        let f: Vec<&str> = line.split_whitespace().collect();
        if f[0] == "KEPT" || f[0] == "PATHS" {
            if let Some((name, want, got)) = section {
                if want != got {
                    return Err(ParseError::new(no, 1, format!("{name} declares {want} records but has {got}")));
                }
            }
            let count = f
                .get(1)
                .and_then(|c| c.parse().ok())
                .filter(|_| f.len() == 2)
                .ok_or_else(|| ParseError::new(no, 1, format!("expected `{} <count>`", f[0])))?;
            section = Some((if f[0] == "KEPT" { "KEPT" } else { "PATHS" }, count, 0));
            continue;
        }
        match &mut section {
            None => return Err(ParseError::new(no, 1, "expected KEPT")),
            Some(("KEPT", _, got)) => {
                let v = ids(no, &f)?;
                if v.len() != 2 {
                    return Err(ParseError::new(no, 1, "expected `u v`"));
                }
                file.kept.push((v[0], v[1]));
                *got += 1;
            }
            Some((_, _, got)) => {
                let Some(colon) = f.iter().position(|t| *t == ":") else {
                    return Err(ParseError::new(no, 1, "expected `s t : nodes`"));
                };
                let head = ids(no, &f[..colon])?;
                let nodes = ids(no, &f[colon + 1..])?;
                if head.len() != 2 || nodes.is_empty() {
                    return Err(ParseError::new(no, 1, "expected `s t : nodes`"));
                }
                file.paths.push((head[0], head[1], nodes));
                *got += 1;
            }
        }
    }
    match section {
        None => Err(ParseError::new(last, 1, "missing KEPT section")),
        Some((name, want, got)) if want != got => Err(ParseError::new(
            last,
            1,
            format!("{name} declares {want} records but has {got}"),
        )),
        Some(_) => Ok(file),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let file = SolutionFile {
            comments: vec!["method exact".into()],
            kept: vec![(0, 1), (1, 2)],
            paths: vec![(0, 2, vec![0, 1, 2]), (2, 0, vec![2, 1, 0])],
        };
        let text = write_solution_text(&file);
        assert_eq!(parse_solution_text(&text).unwrap(), file);
    }

    #[test]
    fn count_mismatch() {
        let e = parse_solution_text("KEPT 2\n0 1\n").unwrap_err();
        assert!(e.message.contains("KEPT declares 2"));
        assert!(parse_solution_text("0 1\n").is_err());
        assert!(parse_solution_text("KEPT 1\n0 1\nPATHS 1\n0 1 0 1\n").is_err());
    }
}
