//! Reader for the topology part of SNDLib native files.

use std::collections::{HashMap, HashSet};
use std::path::{Path, PathBuf};

use thiserror::Error;

use super::ParseError;
use crate::graph::{Capacity, Network};

/// Environment variable naming a directory of `<name>.txt` topology files.
pub const DATA_DIR_ENV: &str = "GREENROUTE_DATA_DIR";

/// Names of the bundled topologies.
pub const BUILTIN_TOPOLOGIES: &[&str] = &[
    "atlanta",
    "newyork",
    "nobel-germany",
    "france",
    "norway",
    "nobel-eu",
    "cost266",
    "giul39",
    "pioro40",
    "zib54",
];

/// Text of a bundled topology.
pub fn builtin_sndlib(name: &str) -> Option<&'static str> {
    Some(match name {
        "atlanta" => include_str!("../../data/sndlib/atlanta.txt"),
        "newyork" => include_str!("../../data/sndlib/newyork.txt"),
        "nobel-germany" => include_str!("../../data/sndlib/nobel-germany.txt"),
        "france" => include_str!("../../data/sndlib/france.txt"),
        "norway" => include_str!("../../data/sndlib/norway.txt"),
        "nobel-eu" => include_str!("../../data/sndlib/nobel-eu.txt"),
        "cost266" => include_str!("../../data/sndlib/cost266.txt"),
        "giul39" => include_str!("../../data/sndlib/giul39.txt"),
        "pioro40" => include_str!("../../data/sndlib/pioro40.txt"),
        "zib54" => include_str!("../../data/sndlib/zib54.txt"),
        _ => return None,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SndlibLink {
    pub id: String,
    pub source: usize,
    pub target: usize,
}

/// Nodes and links of an SNDLib file; capacities are left to the caller.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SndlibTopology {
    pub node_names: Vec<String>,
    pub links: Vec<SndlibLink>,
}

impl SndlibTopology {
    /// The topology with every link at `capacity`, nodes labelled by name.
    pub fn network(&self, capacity: Capacity) -> Network {
        Network::new(
            self.node_names.len(),
            self.links.iter().map(|l| (l.source, l.target, capacity)),
        )
        .and_then(|n| n.with_labels(self.node_names.clone()))
        .expect("links were validated while parsing")
    }
}

#[derive(Debug, Error)]
pub enum SndlibError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("unknown topology `{0}`")]
    Unknown(String),
}

#[derive(Debug)]
struct Tok<'a> {
    line: usize,
    col: usize,
    text: &'a str,
}

fn tokenize(text: &str) -> Vec<Tok<'_>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let trimmed = line.trim_start();
        if trimmed.starts_with('?') || trimmed.starts_with('#') {
            continue;
        }
        let mut start: Option<usize> = None;
        for (j, c) in line.char_indices() {
            let boundary = c.is_whitespace() || c == '(' || c == ')';
            if boundary {
                if let Some(s) = start.take() {
                    out.push(Tok {
                        line: i + 1,
                        col: s + 1,
                        text: &line[s..j],
                    });
                }
                if !c.is_whitespace() {
                    out.push(Tok {
                        line: i + 1,
                        col: j + 1,
                        text: &line[j..j + 1],
                    });
                }
            } else if start.is_none() {
                start = Some(j);
            }
        }
        if let Some(s) = start {
            out.push(Tok {
                line: i + 1,
                col: s + 1,
                text: &line[s..],
            });
        }
    }
    out
}

struct Cursor<'a> {
    toks: Vec<Tok<'a>>,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<&Tok<'a>> {
        self.toks.get(self.pos)
    }

    fn err(&self, message: impl Into<String>) -> ParseError {
        let (line, col) = self
            .peek()
            .or(self.toks.last())
            .map_or((1, 1), |t| (t.line, t.col));
        ParseError::new(line, col, message)
    }

    fn next(&mut self) -> Result<&Tok<'a>, ParseError> {
        if self.pos >= self.toks.len() {
            return Err(self.err("unexpected end of file"));
        }
        self.pos += 1;
        Ok(&self.toks[self.pos - 1])
    }

    fn expect(&mut self, text: &str) -> Result<(), ParseError> {
        if self.peek().is_some_and(|t| t.text == text) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected `{text}`")))
        }
    }

    fn word(&mut self) -> Result<&'a str, ParseError> {
        let t = self.next()?;
        if t.text == "(" || t.text == ")" {
            self.pos -= 1;
            return Err(self.err("expected a name"));
        }
        Ok(t.text)
    }

    // Skips a balanced group whose `(` has just been consumed.
    fn skip_group(&mut self) -> Result<(), ParseError> {
        let mut depth = 1;
        while depth > 0 {
            match self.next()?.text {
                "(" => depth += 1,
                ")" => depth -= 1,
                _ => {}
            }
        }
        Ok(())
    }
}

/// Parses the NODES and LINKS sections; other sections are skipped.
/// Node ids follow first appearance in NODES.
pub fn parse_sndlib(text: &str) -> Result<SndlibTopology, ParseError> {
    let mut c = Cursor {
        toks: tokenize(text),
        pos: 0,
    };
    let mut node_names: Option<Vec<String>> = None;
    let mut raw_links: Option<Vec<(String, &str, &str, usize, usize)>> = None;
    while c.peek().is_some() {
        let section = c.word()?;
        c.expect("(")?;
        match section {
            "NODES" => {
                let mut names = Vec::new();
                while c.peek().is_some_and(|t| t.text != ")") {
                    names.push(c.word()?.to_string());
                    if c.peek().is_some_and(|t| t.text == "(") {
                        c.pos += 1;
                        c.skip_group()?;
                    }
                }
                c.expect(")")?;
                node_names = Some(names);
            }
            "LINKS" => {
                let mut links = Vec::new();
                while c.peek().is_some_and(|t| t.text != ")") {
                    let (line, col) = c.peek().map(|t| (t.line, t.col)).unwrap_or((1, 1));
                    let id = c.word()?.to_string();
                    c.expect("(")?;
                    let a = c.word()?;
                    let b = c.word()?;
                    c.expect(")")?;
                    while c.peek().is_some_and(|t| t.text.parse::<f64>().is_ok()) {
                        c.pos += 1;
                    }
                    if c.peek().is_some_and(|t| t.text == "(") {
                        c.pos += 1;
                        c.skip_group()?;
                    }
                    links.push((id, a, b, line, col));
                }
                c.expect(")")?;
                raw_links = Some(links);
            }
            _ => c.skip_group()?,
        }
    }
    let node_names = node_names.ok_or_else(|| ParseError::new(1, 1, "missing NODES section"))?;
    let raw_links = raw_links.ok_or_else(|| ParseError::new(1, 1, "missing LINKS section"))?;

    let mut index = HashMap::new();
    for (i, name) in node_names.iter().enumerate() {
        if index.insert(name.as_str(), i).is_some() {
            return Err(ParseError::new(1, 1, format!("node `{name}` listed twice")));
        }
    }
    let mut pairs = HashSet::new();
    let mut links = Vec::with_capacity(raw_links.len());
    for (id, a, b, line, col) in raw_links {
        let resolve = |name: &str| {
            index.get(name).copied().ok_or_else(|| {
                ParseError::new(line, col, format!("link {id} has unknown endpoint `{name}`"))
            })
        };
        let (s, t) = (resolve(a)?, resolve(b)?);
        if s == t {
            return Err(ParseError::new(line, col, format!("link {id} is a self-loop")));
        }
        if !pairs.insert((s.min(t), s.max(t))) {
            return Err(ParseError::new(
                line,
                col,
                format!("link {id} is parallel to an earlier link between {a} and {b}"),
            ));
        }
        links.push(SndlibLink {
            id,
            source: s,
            target: t,
        });
    }
    Ok(SndlibTopology { node_names, links })
}

/// Loads a topology by file path, by `<name>.txt` in the data directory,
/// or from the bundled set, in that order.
pub fn load_sndlib(name: &str) -> Result<SndlibTopology, SndlibError> {
    let direct = Path::new(name);
    let from_dir = std::env::var_os(DATA_DIR_ENV).map(|d| Path::new(&d).join(format!("{name}.txt")));
    for path in [Some(direct.to_path_buf()), from_dir].into_iter().flatten() {
        if path.is_file() {
            let text = std::fs::read_to_string(&path).map_err(|source| SndlibError::Io {
                path: path.clone(),
                source,
            })?;
            return Ok(parse_sndlib(&text)?);
        }
    }
    let text = builtin_sndlib(name).ok_or_else(|| SndlibError::Unknown(name.to_string()))?;
    Ok(parse_sndlib(text)?)
}
