//! A small LP-file model: writer for the exports and a reader for the same
//! dialect, used to check that exports round-trip.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::graph::{parse_rational, Rational};

/// Longest line the writer emits.
pub const MAX_LINE: usize = 255;
/// Longest variable or row name accepted.
pub const MAX_NAME: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Comparison {
    Le,
    Ge,
    Eq,
}

impl Comparison {
    fn symbol(self) -> &'static str {
        match self {
            Comparison::Le => "<=",
            Comparison::Ge => ">=",
            Comparison::Eq => "=",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpRow {
    pub name: String,
    pub terms: Vec<(String, Rational)>,
    pub cmp: Comparison,
    pub rhs: Rational,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VarBound {
    pub name: String,
    pub lower: Rational,
    pub upper: Option<Rational>,
}

/// An LP model. Comments are written but not compared.
#[derive(Clone, Debug)]
pub struct LpModel {
    pub comments: Vec<String>,
    pub sense: Sense,
    pub objective_name: String,
    pub objective: Vec<(String, Rational)>,
    pub rows: Vec<LpRow>,
    pub bounds: Vec<VarBound>,
    pub binaries: Vec<String>,
    pub generals: Vec<String>,
}

impl PartialEq for LpModel {
    fn eq(&self, other: &Self) -> bool {
        self.sense == other.sense
            && self.objective_name == other.objective_name
            && self.objective == other.objective
            && self.rows == other.rows
            && self.bounds == other.bounds
            && self.binaries == other.binaries
            && self.generals == other.generals
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LpError {
    #[error("name `{0}` is longer than {MAX_NAME} characters")]
    NameTooLong(String),
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
}

impl LpModel {
    /// Every variable name mentioned anywhere in the model.
    pub fn variables(&self) -> BTreeSet<String> {
        let mut vars: BTreeSet<String> = self.objective.iter().map(|t| t.0.clone()).collect();
        for row in &self.rows {
            vars.extend(row.terms.iter().map(|t| t.0.clone()));
        }
        vars.extend(self.bounds.iter().map(|b| b.name.clone()));
        vars.extend(self.binaries.iter().cloned());
        vars.extend(self.generals.iter().cloned());
        vars
    }

    pub fn row(&self, name: &str) -> Option<&LpRow> {
        self.rows.iter().find(|r| r.name == name)
    }

    pub fn to_lp_string(&self) -> Result<String, LpError> {
        let check = |name: &str| {
            if name.len() > MAX_NAME {
                Err(LpError::NameTooLong(name.to_string()))
            } else {
                Ok(())
            }
        };
        let mut w = Wrapper::default();
        for c in &self.comments {
            w.line(&format!("\\ {c}"));
        }
        w.line(match self.sense {
            Sense::Minimize => "Minimize",
            Sense::Maximize => "Maximize",
        });
        check(&self.objective_name)?;
        w.start(&format!(" {}:", self.objective_name));
        w.expression(&self.objective, &check)?;
        w.finish();

        w.line("Subject To");
        for row in &self.rows {
            check(&row.name)?;
            w.start(&format!(" {}:", row.name));
            w.expression(&row.terms, &check)?;
            w.token(row.cmp.symbol());
            w.token(&fmt_number(&row.rhs));
            w.finish();
        }
        if !self.bounds.is_empty() {
            w.line("Bounds");
            for b in &self.bounds {
                check(&b.name)?;
                match b.upper {
                    Some(u) => w.line(&format!(
                        " {} <= {} <= {}",
                        fmt_number(&b.lower),
                        b.name,
                        fmt_number(&u)
                    )),
                    None => w.line(&format!(" {} >= {}", b.name, fmt_number(&b.lower))),
                }
            }
        }
        for (title, names) in [("Binary", &self.binaries), ("General", &self.generals)] {
            if names.is_empty() {
                continue;
            }
            w.line(title);
            w.start(" ");
            for n in names {
                check(n)?;
                w.token(n);
            }
            w.finish();
        }
        w.line("End");
        Ok(w.out)
    }
}

/// Integers print exactly; other values print as decimals with up to 12
/// places, which is exact only for terminating fractions.
fn fmt_number(v: &Rational) -> String {
    if v.is_integer() {
        return v.to_integer().to_string();
    }
    let neg = v.is_negative();
    let a = v.abs();
    let mut s = format!("{}.", a.trunc().to_integer());
    let mut frac = a.fract();
    for _ in 0..12 {
        if frac.is_zero() {
            break;
        }
        frac *= Rational::from_integer(10);
        s.push_str(&frac.trunc().to_integer().to_string());
        frac = frac.fract();
    }
    if neg {
        format!("-{s}")
    } else {
        s
    }
}

#[derive(Default)]
struct Wrapper {
    out: String,
    current: String,
}

impl Wrapper {
    fn line(&mut self, text: &str) {
        self.out.push_str(text);
        self.out.push('\n');
    }

    fn start(&mut self, head: &str) {
        self.current = head.to_string();
    }

    fn token(&mut self, tok: &str) {
        if !self.current.trim().is_empty() && self.current.len() + 1 + tok.len() > MAX_LINE {
            let line = std::mem::take(&mut self.current);
            self.line(&line);
            self.current.push(' ');
        }
        if !self.current.is_empty() && !self.current.ends_with(' ') {
            self.current.push(' ');
        }
        self.current.push_str(tok);
    }

    fn finish(&mut self) {
        let line = std::mem::take(&mut self.current);
        if !line.trim().is_empty() {
            self.line(&line);
        }
    }

    fn expression(
        &mut self,
        terms: &[(String, Rational)],
        check: &dyn Fn(&str) -> Result<(), LpError>,
    ) -> Result<(), LpError> {
        if terms.is_empty() {
            self.token("0");
            return Ok(());
        }
        for (i, (name, coef)) in terms.iter().enumerate() {
            check(name)?;
            if coef.is_negative() {
                self.token("-");
            } else if i > 0 {
                self.token("+");
            }
            let a = coef.abs();
            let mut piece = String::new();
            if !a.is_one() {
                let _ = write!(piece, "{} ", fmt_number(&a));
            }
            piece.push_str(name);
            self.token(&piece);
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Section {
    Objective,
    Constraints,
    Bounds,
    Binary,
    General,
    End,
}

fn section_keyword(tokens: &[(usize, String)], i: usize) -> Option<(Section, usize)> {
    let t = tokens.get(i)?.1.to_ascii_lowercase();
    let next = tokens.get(i + 1).map(|x| x.1.to_ascii_lowercase());
    match t.as_str() {
        "subject" if next.as_deref() == Some("to") => Some((Section::Constraints, 2)),
        "such" if next.as_deref() == Some("that") => Some((Section::Constraints, 2)),
        "st" | "s.t." => Some((Section::Constraints, 1)),
        "bounds" | "bound" => Some((Section::Bounds, 1)),
        "binary" | "binaries" | "bin" => Some((Section::Binary, 1)),
        "general" | "generals" | "gen" => Some((Section::General, 1)),
        "end" => Some((Section::End, 1)),
        _ => None,
    }
}

fn tokenize(text: &str) -> Vec<(usize, String)> {
    let mut out = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('\\').next().unwrap_or("");
        let mut spaced = String::with_capacity(line.len());
        let mut chars = line.chars().peekable();
        while let Some(c) = chars.next() {
            match c {
                '<' | '>' | '=' => {
                    spaced.push(' ');
                    spaced.push(c);
                    if let Some(&n) = chars.peek() {
                        if n == '=' || n == '<' || n == '>' {
                            spaced.push(n);
                            chars.next();
                        }
                    }
                    spaced.push(' ');
                }
                '+' | '-' | ':' => {
                    spaced.push(' ');
                    spaced.push(c);
                    spaced.push(' ');
                }
                _ => spaced.push(c),
            }
        }
        for tok in spaced.split_whitespace() {
            out.push((no + 1, tok.to_string()));
        }
    }
    out
}

fn is_name(tok: &str) -> bool {
    tok.chars()
        .next()
        .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && tok
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || "_.[]{}!\"#$%&(),;?@'`|~".contains(c))
}

struct Parser {
    tokens: Vec<(usize, String)>,
    pos: usize,
}

impl Parser {
    fn line(&self) -> usize {
        self.tokens
            .get(self.pos)
            .or(self.tokens.last())
            .map_or(1, |t| t.0)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, LpError> {
        Err(LpError::Syntax {
            line: self.line(),
            message: message.into(),
        })
    }

    fn peek(&self) -> Option<&str> {
        self.tokens.get(self.pos).map(|t| t.1.as_str())
    }

    fn at_section(&self) -> Option<(Section, usize)> {
        section_keyword(&self.tokens, self.pos)
    }

    fn next(&mut self) -> Option<String> {
        let t = self.tokens.get(self.pos).map(|t| t.1.clone());
        self.pos += 1;
        t
    }

    fn number(&mut self) -> Result<Rational, LpError> {
        let mut sign = Rational::one();
        while let Some(t) = self.peek() {
            match t {
                "-" => sign = -sign,
                "+" => {}
                _ => break,
            }
            self.pos += 1;
        }
        let Some(t) = self.next() else {
            return self.err("expected a number");
        };
        match parse_rational(&t) {
            Some(v) if !t.contains('/') => Ok(sign * v),
            _ => {
                self.pos -= 1;
                self.err(format!("expected a number, found `{t}`"))
            }
        }
    }

    fn label(&mut self) -> Option<String> {
        let name = self.peek()?.to_string();
        if is_name(&name) && self.tokens.get(self.pos + 1).is_some_and(|t| t.1 == ":") {
            self.pos += 2;
            Some(name)
        } else {
            None
        }
    }

    // Linear expression up to a comparison, section keyword or label.
    fn expression(&mut self) -> Result<Vec<(String, Rational)>, LpError> {
        let mut terms = Vec::new();
        let mut first = true;
        loop {
            let Some(t) = self.peek() else { break };
            if matches!(t, "<=" | ">=" | "=" | "=<" | "=>" | "<" | ">") || self.at_section().is_some()
            {
                break;
            }
            let mut sign = Rational::one();
            let mut had_sign = false;
            while let Some(t) = self.peek() {
                match t {
                    "-" => sign = -sign,
                    "+" => {}
                    _ => break,
                }
                had_sign = true;
                self.pos += 1;
            }
            if !first && !had_sign {
                let found = self.peek().unwrap_or_default().to_string();
                return self.err(format!("expected `+`, `-` or a keyword, found `{found}`"));
            }
            let Some(tok) = self.next() else {
                return self.err("expression ends after a sign");
            };
            let (coef, name) = if let Some(v) = parse_rational(&tok).filter(|_| !tok.contains('/')) {
                match self.next() {
                    Some(n) if is_name(&n) => (v, n),
                    _ if first => {
                        // constant-only objective such as `obj: 0`
                        if !v.is_zero() {
                            return self.err("constant terms are not supported");
                        }
                        self.pos -= 1;
                        first = false;
                        continue;
                    }
                    other => {
                        return self.err(format!(
                            "expected a variable after {tok}, found {other:?}"
                        ))
                    }
                }
            } else if is_name(&tok) {
                (Rational::one(), tok)
            } else {
                self.pos -= 1;
                return self.err(format!("unexpected token `{tok}`"));
            };
            terms.push((name, sign * coef));
            first = false;
        }
        Ok(terms)
    }

    fn comparison(&mut self) -> Result<Comparison, LpError> {
        match self.next().as_deref() {
            Some("<=" | "=<" | "<") => Ok(Comparison::Le),
            Some(">=" | "=>" | ">") => Ok(Comparison::Ge),
            Some("=") => Ok(Comparison::Eq),
            other => {
                self.pos -= 1;
                self.err(format!("expected a comparison, found {other:?}"))
            }
        }
    }
}

/// Reads the LP dialect written by [`LpModel::to_lp_string`].
pub fn parse_lp_mini(text: &str) -> Result<LpModel, LpError> {
    let mut p = Parser {
        tokens: tokenize(text),
        pos: 0,
    };
    let sense = match p.next().map(|t| t.to_ascii_lowercase()).as_deref() {
        Some("minimize" | "minimise" | "min") => Sense::Minimize,
        Some("maximize" | "maximise" | "max") => Sense::Maximize,
        other => {
            p.pos = 0;
            return p.err(format!("expected Minimize or Maximize, found {other:?}"));
        }
    };
    let mut model = LpModel {
        comments: Vec::new(),
        sense,
        objective_name: String::new(),
        objective: Vec::new(),
        rows: Vec::new(),
        bounds: Vec::new(),
        binaries: Vec::new(),
        generals: Vec::new(),
    };
    let mut section = Section::Objective;
    model.objective_name = p.label().unwrap_or_else(|| "obj".into());
    model.objective = p.expression()?;
    let mut seen_end = false;
    while p.peek().is_some() {
        if let Some((s, width)) = p.at_section() {
            p.pos += width;
            section = s;
            if s == Section::End {
                seen_end = true;
                if p.peek().is_some() {
                    return p.err("text after End");
                }
            }
            continue;
        }
        match section {
            Section::Objective => return p.err("unexpected token after the objective"),
            Section::Constraints => {
                let Some(name) = p.label() else {
                    let found = p.peek().unwrap_or_default().to_string();
                    return p.err(format!("expected `name:` to start a row, found `{found}`"));
                };
                let terms = p.expression()?;
                let cmp = p.comparison()?;
                let rhs = p.number()?;
                model.rows.push(LpRow {
                    name,
                    terms,
                    cmp,
                    rhs,
                });
            }
            Section::Bounds => {
                let bound = if p.peek().is_some_and(is_name) {
                    let name = p.next().unwrap_or_default();
                    if p.peek().is_some_and(|t| t.eq_ignore_ascii_case("free")) {
                        return p.err("free variables are not supported");
                    }
                    match p.comparison()? {
                        Comparison::Ge => VarBound {
                            name,
                            lower: p.number()?,
                            upper: None,
                        },
                        Comparison::Le => VarBound {
                            name,
                            lower: Rational::zero(),
                            upper: Some(p.number()?),
                        },
                        Comparison::Eq => {
                            let v = p.number()?;
                            VarBound {
                                name,
                                lower: v,
                                upper: Some(v),
                            }
                        }
                    }
                } else {
                    let lower = p.number()?;
                    if p.comparison()? != Comparison::Le {
                        return p.err("expected `lower <= name <= upper`");
                    }
                    let Some(name) = p.next().filter(|n| is_name(n)) else {
                        p.pos -= 1;
                        return p.err("expected a variable name");
                    };
                    let upper = if p.peek() == Some("<=") {
                        p.pos += 1;
                        Some(p.number()?)
                    } else {
                        None
                    };
                    VarBound { name, lower, upper }
                };
                model.bounds.push(bound);
            }
            Section::Binary | Section::General => {
                let Some(name) = p.next().filter(|n| is_name(n)) else {
                    p.pos -= 1;
                    return p.err("expected a variable name");
                };
                if section == Section::Binary {
                    model.binaries.push(name);
                } else {
                    model.generals.push(name);
                }
            }
            Section::End => unreachable!("End is terminal"),
        }
    }
    if !seen_end {
        return p.err("missing End");
    }
    Ok(model)
}
