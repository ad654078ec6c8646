//! Native graph and demand text format.
//!
//! ```text
//! # comment
//! NODES 2
//! 0 Paris
//! 1 Lyon
//! EDGES 1
//! 0 1 5/2
//! DEMANDS 1
//! 0 1 3
//! ```
//!
//! Node records are `id [label]`, edge records `u v capacity` and demand
//! records `s t volume`. Capacities are `p`, `p/q`, a decimal, or `INF`.
//! The DEMANDS section may be omitted.

use std::collections::{BTreeSet, HashSet};
use std::fmt::Write as _;

use num_traits::Signed;

use super::ParseError;
use crate::graph::{fmt_rational, parse_rational, Capacity, Demand, DemandSet, Network};

struct Lines<'a> {
    lines: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l))
            .filter(|(_, l)| {
                let t = l.trim();
                !t.is_empty() && !t.starts_with('#')
            })
            .collect();
        Lines { lines, pos: 0 }
    }

    fn next(&mut self) -> Option<(usize, &'a str)> {
        let l = self.lines.get(self.pos).copied();
        self.pos += 1;
        l
    }

    fn peek(&self) -> Option<(usize, &'a str)> {
        self.lines.get(self.pos).copied()
    }

    fn last_line(&self) -> usize {
        self.lines.last().map_or(1, |l| l.0)
    }
}

// Splits a line into (column, token) pairs, columns 1-based.
fn fields(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((s + 1, &line[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

fn header(lines: &mut Lines, keyword: &str) -> Result<usize, ParseError> {
    let Some((no, line)) = lines.next() else {
        return Err(ParseError::new(lines.last_line(), 1, format!("missing {keyword} section")));
    };
    let f = fields(line);
    if f.len() != 2 || f[0].1 != keyword {
        return Err(ParseError::new(no, 1, format!("expected `{keyword} <count>`")));
    }
    f[1].1
        .parse()
        .map_err(|_| ParseError::new(no, f[1].0, format!("bad {keyword} count `{}`", f[1].1)))
}

fn node_field(no: usize, (col, tok): (usize, &str), n: usize) -> Result<usize, ParseError> {
    let id: usize = tok
        .parse()
        .map_err(|_| ParseError::new(no, col, format!("bad node id `{tok}`")))?;
    if id >= n {
        return Err(ParseError::new(no, col, format!("node {id} out of range (have {n})")));
    }
    Ok(id)
}

fn records<'a>(
    lines: &mut Lines<'a>,
    keyword: &str,
    count: usize,
) -> Result<Vec<(usize, &'a str)>, ParseError> {
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        match lines.peek() {
            Some((no, l)) if ["NODES", "EDGES", "DEMANDS"].contains(&fields(l)[0].1) => {
                return Err(ParseError::new(
                    no,
                    1,
                    format!("{keyword} declares {count} records but has {i}"),
                ));
            }
            Some(rec) => {
                out.push(rec);
                lines.pos += 1;
            }
            None => {
                return Err(ParseError::new(
                    lines.last_line(),
                    1,
                    format!("{keyword} declares {count} records but has {i}"),
                ))
            }
        }
    }
    Ok(out)
}

/// Parses a native document into a network and its demands.
pub fn parse_graph_text(text: &str) -> Result<(Network, DemandSet), ParseError> {
    let mut lines = Lines::new(text);

    let n = header(&mut lines, "NODES")?;
    let mut labels: Vec<Option<String>> = vec![None; n];
    let mut seen = vec![false; n];
    for (no, line) in records(&mut lines, "NODES", n)? {
        let f = fields(line);
        let id = node_field(no, f[0], n)?;
        if seen[id] {
            return Err(ParseError::new(no, f[0].0, format!("node {id} listed twice")));
        }
        seen[id] = true;
        if f.len() > 1 {
            labels[id] = Some(f[1..].iter().map(|x| x.1).collect::<Vec<_>>().join(" "));
        }
    }

    let m = header(&mut lines, "EDGES")?;
    let mut edges = Vec::with_capacity(m);
    let mut pairs = HashSet::new();
    for (no, line) in records(&mut lines, "EDGES", m)? {
        let f = fields(line);
        if f.len() != 3 {
            return Err(ParseError::new(no, 1, "expected `u v capacity`"));
        }
        let u = node_field(no, f[0], n)?;
        let v = node_field(no, f[1], n)?;
        if u == v {
            return Err(ParseError::new(no, f[1].0, format!("self-loop on node {u}")));
        }
        if !pairs.insert((u.min(v), u.max(v))) {
            return Err(ParseError::new(no, 1, format!("duplicate edge {u}-{v}")));
        }
        let cap = if f[2].1 == "INF" {
            Capacity::Unbounded
        } else {
            match parse_rational(f[2].1) {
                Some(c) if !c.is_negative() => Capacity::Finite(c),
                _ => {
                    return Err(ParseError::new(
                        no,
                        f[2].0,
                        format!("bad capacity `{}`", f[2].1),
                    ))
                }
            }
        };
        edges.push((u, v, cap));
    }

    let mut demands = Vec::new();
    let mut demand_pairs = BTreeSet::new();
    if lines.peek().is_some() {
        let k = header(&mut lines, "DEMANDS")?;
        for (no, line) in records(&mut lines, "DEMANDS", k)? {
            let f = fields(line);
            if f.len() != 3 {
                return Err(ParseError::new(no, 1, "expected `s t volume`"));
            }
            let s = node_field(no, f[0], n)?;
            let t = node_field(no, f[1], n)?;
            if s == t {
                return Err(ParseError::new(no, f[1].0, "demand endpoints coincide"));
            }
            if !demand_pairs.insert((s, t)) {
                return Err(ParseError::new(no, 1, format!("duplicate demand {s}->{t}")));
            }
            let vol = parse_rational(f[2].1)
                .filter(|v| v.is_positive())
                .ok_or_else(|| ParseError::new(no, f[2].0, format!("bad volume `{}`", f[2].1)))?;
            demands.push(Demand::new(s, t, vol));
        }
    }
    if let Some((no, _)) = lines.next() {
        return Err(ParseError::new(no, 1, "unexpected text after the last section"));
    }

    let mut network =
        Network::new(n, edges).map_err(|e| ParseError::new(1, 1, e.to_string()))?;
    if labels.iter().all(Option::is_some) && n > 0 {
        network = network
            .with_labels(labels.into_iter().flatten().collect())
            .map_err(|e| ParseError::new(1, 1, e.to_string()))?;
    } else if labels.iter().any(Option::is_some) {
        return Err(ParseError::new(1, 1, "either every node or no node has a label"));
    }
    let demands = DemandSet::new(demands).map_err(|e| ParseError::new(1, 1, e.to_string()))?;
    Ok((network, demands))
}

/// Canonical native text: ids in order, single spaces, `\n` line ends.
pub fn write_graph_text(network: &Network, demands: &DemandSet) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "NODES {}", network.node_count());
    for v in 0..network.node_count() {
        match network.label(v) {
            Some(l) => {
                let _ = writeln!(out, "{v} {}", l.split_whitespace().collect::<Vec<_>>().join(" "));
            }
            None => {
                let _ = writeln!(out, "{v}");
            }
        }
    }
    let _ = writeln!(out, "EDGES {}", network.edge_count());
    for e in network.edges() {
        let _ = writeln!(out, "{} {} {}", e.u, e.v, e.capacity);
    }
    let _ = writeln!(out, "DEMANDS {}", demands.len());
    for d in demands {
        let _ = writeln!(out, "{} {} {}", d.source, d.target, fmt_rational(&d.volume));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{rat, Rational};

    #[test]
    fn minimal_document() {
        let text = "NODES 2\n0\n1\nEDGES 1\n0 1 5\nDEMANDS 1\n0 1 3\n";
        let (net, dem) = parse_graph_text(text).unwrap();
        assert_eq!(net.node_count(), 2);
        assert_eq!(net.edge(0).capacity, Capacity::finite(5));
        assert_eq!(dem.get(0).volume, rat(3));
        assert_eq!(write_graph_text(&net, &dem), text);
    }

    #[test]
    fn inf_labels_fractions_comments() {
        let text = "# demo\nNODES 3\n0 a\n2 c\n1 b\n\nEDGES 2\n1 0 INF\n1 2 5/2\n";
        let (net, dem) = parse_graph_text(text).unwrap();
        assert!(net.edge(0).capacity.is_unbounded());
        assert_eq!(net.edge(1).capacity, Capacity::Finite(Rational::new(5, 2)));
        assert_eq!(net.label(2), Some("c"));
        assert!(dem.is_empty());
        assert_eq!(
            write_graph_text(&net, &dem),
            "NODES 3\n0 a\n1 b\n2 c\nEDGES 2\n0 1 INF\n1 2 5/2\nDEMANDS 0\n"
        );
    }

    #[test]
    fn errors_name_the_line() {
        let short = "NODES 2\n0\n1\nEDGES 2\n0 1 5\nDEMANDS 0\n";
        let e = parse_graph_text(short).unwrap_err();
        assert_eq!(e.line, 6);
        assert!(e.message.contains("EDGES declares 2"));

        let e = parse_graph_text("NODES 2\n0\n1\nEDGES 1\n0 7 5\n").unwrap_err();
        assert_eq!((e.line, e.column), (5, 3));

        let e = parse_graph_text("NODES 2\n0\n1\nEDGES 2\n0 1 5\n1 0 2\n").unwrap_err();
        assert_eq!(e.line, 6);
        assert!(e.message.contains("duplicate"));

        let e = parse_graph_text("NODES 2\n0\n1\nEDGES 1\n0 1 x\n").unwrap_err();
        assert_eq!((e.line, e.column), (5, 5));

        assert!(parse_graph_text("EDGES 0\n").is_err());
        assert!(parse_graph_text("NODES 1\n0\nEDGES 0\nDEMANDS 1\n0 0 1\n").is_err());
    }
}
