//! Text formats: pre-computed score files, datasets, and DAG files.
//!
//! Score file layout (all newlines `\n`):
//!
//! ```text
//! <n>
//! <name> <K>            # one block per variable
//! <score> <J> <p1> .. <pJ>   # K lines
//! ```
//!
//! Parents may be given as variable names or 0-based indices; the writer
//! always emits indices.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::model::{default_names, Dag, Dataset, NodeScoreTable, ParentSet, ScoreTable, ScoredParentSet};

/// What to do when a variable block has no empty parent set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MissingEmptySet {
    #[default]
    Reject,
    /// Insert `{}` scored one below the block's minimum score.
    Insert,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ScoreFileOptions {
    pub missing_empty: MissingEmptySet,
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines { inner: text.lines().enumerate() }
    }

    /// Next non-blank line with its 1-based number.
    fn next_line(&mut self) -> Option<(usize, &'a str)> {
        self.inner.by_ref().map(|(i, l)| (i + 1, l.trim())).find(|(_, l)| !l.is_empty())
    }

    fn expect_line(&mut self, what: &str) -> Result<(usize, &'a str)> {
        self.next_line().ok_or_else(|| Error::parse(0, format!("unexpected end of input, expected {what}")))
    }
}

fn parse_usize(tok: &str, line: usize, what: &str) -> Result<usize> {
    tok.parse().map_err(|_| Error::parse(line, format!("expected {what}, found {tok:?}")))
}

fn parse_f64(tok: &str, line: usize) -> Result<f64> {
    let v: f64 = tok.parse().map_err(|_| Error::parse(line, format!("expected a decimal score, found {tok:?}")))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::parse(line, format!("score {tok:?} is not finite")))
    }
}

struct RawBlock<'a> {
    name: &'a str,
    line: usize,
    entries: Vec<(usize, f64, Vec<&'a str>)>,
}

pub fn parse_score_file(text: &str) -> Result<ScoreTable> {
    parse_score_file_with(text, ScoreFileOptions::default())
}

pub fn parse_score_file_with(text: &str, opts: ScoreFileOptions) -> Result<ScoreTable> {
    let mut lines = Lines::new(text);
    let (l0, first) = lines.expect_line("variable count")?;
    let n = parse_usize(first, l0, "variable count")?;
    if n == 0 {
        return Err(Error::NoVariables);
    }

    // Blocks are collected before resolving parents so that names may refer
    // to variables declared later in the file.
    let mut blocks: Vec<RawBlock> = Vec::new();
    while let Some((line, header)) = lines.next_line() {
        if blocks.len() == n {
            return Err(Error::parse(line, format!("content after {n} variable blocks")));
        }
        let mut toks = header.split_whitespace();
        let (Some(name), Some(count), None) = (toks.next(), toks.next(), toks.next()) else {
            return Err(Error::parse(line, "expected \"<name> <entry count>\""));
        };
        let count = parse_usize(count, line, "entry count")?;
        let mut entries = Vec::new();
        for _ in 0..count {
            let (el, entry) = lines.next_line().ok_or_else(|| {
                Error::parse(
                    line,
                    format!("variable {name} declares {count} entries but input ended after {}", entries.len()),
                )
            })?;
            let mut toks = entry.split_whitespace();
            let score = parse_f64(toks.next().unwrap_or(""), el)?;
            let size = parse_usize(toks.next().unwrap_or(""), el, "parent count")?;
            let parents: Vec<&str> = toks.collect();
            if parents.len() != size {
                return Err(Error::parse(el, format!("declared {size} parents but listed {}", parents.len())));
            }
            entries.push((el, score, parents));
        }
        blocks.push(RawBlock { name, line, entries });
    }
    if blocks.len() != n {
        return Err(Error::parse(0, format!("declared {n} variables but found {}", blocks.len())));
    }

    let names: Vec<String> = blocks.iter().map(|b| b.name.to_string()).collect();
    let mut by_name: HashMap<&str, usize> = HashMap::new();
    for (i, b) in blocks.iter().enumerate() {
        if by_name.insert(b.name, i).is_some() {
            return Err(Error::parse(b.line, format!("variable {} declared twice", b.name)));
        }
    }
    let resolve = |tok: &str, line: usize| -> Result<usize> {
        if let Some(&i) = by_name.get(tok) {
            return Ok(i);
        }
        match tok.parse::<usize>() {
            Ok(i) if i < n => Ok(i),
            _ => Err(Error::parse(line, format!("unknown parent {tok:?}"))),
        }
    };

    let mut tables = Vec::with_capacity(n);
    for (node, block) in blocks.iter().enumerate() {
        let mut entries = Vec::with_capacity(block.entries.len());
        for (line, score, parents) in &block.entries {
            let members = parents.iter().map(|t| resolve(t, *line)).collect::<Result<Vec<_>>>()?;
            let parents = ParentSet::new(members).map_err(|_| Error::parse(*line, "duplicate parent in one set"))?;
            if parents.contains(node) {
                return Err(Error::parse(*line, format!("{} lists itself as a parent", block.name)));
            }
            entries.push(ScoredParentSet::new(parents, *score));
        }
        if !entries.iter().any(|e| e.parents.is_empty()) {
            match opts.missing_empty {
                MissingEmptySet::Reject => return Err(Error::MissingEmptySet(node)),
                MissingEmptySet::Insert => {
                    let min = entries.iter().map(|e| e.score).reduce(f64::min).unwrap_or(0.0);
                    entries.push(ScoredParentSet::new(ParentSet::empty(), min - 1.0));
                }
            }
        }
        tables.push(NodeScoreTable::new(node, entries).map_err(|e| match e {
            Error::MalformedTable { reason, .. } => Error::parse(block.line, reason),
            other => other,
        })?);
    }
    ScoreTable::new(tables, Some(names))
}

fn format_score(x: f64) -> String {
    format!("{x:?}")
}

/// Canonical score file; scores use the shortest round-tripping decimal form.
pub fn write_score_file(table: &ScoreTable) -> String {
    let names = table_names(table);
    let mut out = String::new();
    let _ = writeln!(out, "{}", table.num_vars());
    for (t, name) in table.tables().iter().zip(&names) {
        let _ = writeln!(out, "{} {}", name, t.len());
        for e in t.entries() {
            let _ = write!(out, "{} {}", format_score(e.score), e.parents.len());
            for p in e.parents.members() {
                let _ = write!(out, " {p}");
            }
            out.push('\n');
        }
    }
    out
}

fn table_names(table: &ScoreTable) -> Vec<String> {
    let defaults = default_names(table.num_vars());
    table.names().iter().zip(defaults).map(|(n, d)| if n.trim().is_empty() { d } else { n.clone() }).collect()
}

/// How the dataset reader treats a line following a header of names.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ArityLine {
    /// Treated as arities when every token is a positive integer.
    #[default]
    Auto,
    Present,
    Absent,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct DatasetOptions {
    pub arity_line: ArityLine,
}

fn tokens(line: &str) -> Vec<&str> {
    line.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()).collect()
}

/// Reads whitespace- or comma-separated integer codes. An optional first
/// line of names (any non-integer token marks it) may be followed by an
/// arity line.
pub fn parse_dataset(text: &str, opts: DatasetOptions) -> Result<Dataset> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty()).peekable();
    let mut names = None;
    let mut arities = None;

    if let Some(&(_, first)) = lines.peek() {
        let toks = tokens(first);
        if toks.iter().any(|t| t.parse::<usize>().is_err()) {
            names = Some(toks.iter().map(|s| s.to_string()).collect::<Vec<_>>());
            lines.next();
            if let Some(&(l, second)) = lines.peek() {
                let toks = tokens(second);
                let parsed: Option<Vec<usize>> = toks.iter().map(|t| t.parse().ok()).collect();
                let take = match opts.arity_line {
                    ArityLine::Present => true,
                    ArityLine::Absent => false,
                    ArityLine::Auto => parsed.as_ref().is_some_and(|v| v.iter().all(|&a| a >= 1)),
                };
                if take {
                    let a = parsed.ok_or_else(|| Error::parse(l, "arity line must hold integers"))?;
                    arities = Some(a);
                    lines.next();
                }
            }
        }
    }
    let mut rows = Vec::new();
    for (l, line) in lines {
        let row = tokens(line)
            .iter()
            .map(|t| t.parse::<usize>().map_err(|_| Error::parse(l, format!("non-integer token {t:?}"))))
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    let num_vars = names.as_ref().map(Vec::len).or_else(|| rows.first().map(Vec::len)).unwrap_or(0);
    Dataset::new(num_vars, rows, arities, names)
}

/// Writes a dataset with a names line and an arity line.
pub fn write_dataset(data: &Dataset) -> String {
    let mut out = String::new();
    let join = |v: &mut dyn Iterator<Item = String>| v.collect::<Vec<_>>().join(",");
    let _ = writeln!(out, "{}", join(&mut data.names_or_default().into_iter()));
    let _ = writeln!(out, "{}", join(&mut data.arities().iter().map(|a| a.to_string())));
    for row in data.rows() {
        let _ = writeln!(out, "{}", join(&mut row.iter().map(|c| c.to_string())));
    }
    out
}

/// One `child <- parents...` line per node plus a trailing `score` line.
pub fn write_dag(dag: &Dag, names: &[String]) -> String {
    let mut out = String::new();
    for (child, ps) in dag.parents.iter().enumerate() {
        out.push_str(&names[child]);
        out.push_str(" <-");
        for &p in ps.members() {
            out.push(' ');
            out.push_str(&names[p]);
        }
        out.push('\n');
    }
    let _ = writeln!(out, "score {}", format_score(dag.score));
    out
}

/// Parses a DAG file. With `names` the children may appear in any order;
/// otherwise the line order defines node indices.
pub fn parse_dag(text: &str, names: Option<&[String]>) -> Result<(Dag, Vec<String>)> {
    let mut child_lines: Vec<(usize, &str, Vec<&str>)> = Vec::new();
    let mut score = None;
    for (i, line) in text.lines().enumerate() {
        let l = i + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("score ") {
            score = Some(parse_f64(rest.trim(), l)?);
            continue;
        }
        let Some((child, parents)) = line.split_once("<-") else {
            return Err(Error::parse(l, "expected \"child <- parents\""));
        };
        child_lines.push((l, child.trim(), parents.split_whitespace().collect()));
    }
    let score = score.ok_or_else(|| Error::parse(0, "missing score line"))?;
    let names: Vec<String> = match names {
        Some(n) => n.to_vec(),
        None => child_lines.iter().map(|(_, c, _)| c.to_string()).collect(),
    };
    let index: HashMap<&str, usize> = names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
    let mut parents: Vec<Option<ParentSet>> = vec![None; names.len()];
    for (l, child, ps) in &child_lines {
        let c = *index.get(child).ok_or_else(|| Error::parse(*l, format!("unknown node {child:?}")))?;
        let members = ps
            .iter()
            .map(|p| index.get(p).copied().ok_or_else(|| Error::parse(*l, format!("unknown node {p:?}"))))
            .collect::<Result<Vec<_>>>()?;
        let set = ParentSet::new(members).map_err(|_| Error::parse(*l, "duplicate parent"))?;
        if set.contains(c) {
            return Err(Error::parse(*l, format!("{child} lists itself as a parent")));
        }
        if parents[c].replace(set).is_some() {
            return Err(Error::parse(*l, format!("node {child:?} listed twice")));
        }
    }
    let parents = parents
        .into_iter()
        .enumerate()
        .map(|(i, p)| p.ok_or_else(|| Error::parse(0, format!("node {:?} has no line", names[i]))))
        .collect::<Result<Vec<_>>>()?;
    let dag = Dag { parents, score };
    if !dag.check_acyclic() {
        return Err(Error::CyclicStructure);
    }
    Ok((dag, names))
}
