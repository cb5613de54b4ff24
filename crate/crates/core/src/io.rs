//! Text formats: edge lists, Graphviz DOT and STG task graphs.
//!
//! All formats label vertices from 1.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use thiserror::Error;

use crate::dag::{Dag, DagError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Format {
    EdgeList,
    Dot,
    Stg,
}

impl Format {
    pub const ALL: [Format; 3] = [Format::EdgeList, Format::Dot, Format::Stg];

    pub fn name(self) -> &'static str {
        match self {
            Format::EdgeList => "edgelist",
            Format::Dot => "dot",
            Format::Stg => "stg",
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Format {
    type Err = IoError;

    fn from_str(s: &str) -> Result<Format, IoError> {
        Format::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| IoError::UnknownFormat(s.to_string()))
    }
}

#[derive(Debug, Error)]
pub enum IoError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Invalid(#[from] DagError),
    #[error("unknown format `{0}` (expected edgelist, dot or stg)")]
    UnknownFormat(String),
}

fn parse_error(line: usize, message: impl Into<String>) -> IoError {
    IoError::Parse { line, message: message.into() }
}

/// A parsed graph plus whether STG dummy entry/exit tasks were stripped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Parsed {
    pub dag: Dag,
    pub dummies_removed: bool,
}

pub fn read(text: &str, format: Format) -> Result<Parsed, IoError> {
    match format {
        Format::EdgeList => Ok(Parsed { dag: read_edge_list(text)?, dummies_removed: false }),
        Format::Dot => Ok(Parsed { dag: read_dot(text)?, dummies_removed: false }),
        Format::Stg => read_stg(text),
    }
}

pub fn write(d: &Dag, format: Format) -> String {
    match format {
        Format::EdgeList => write_edge_list(d),
        Format::Dot => write_dot(d),
        Format::Stg => write_stg(d),
    }
}

/// Non-empty lines with comments stripped, numbered from 1.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

fn parse_field<T: FromStr>(line: usize, token: &str, what: &str) -> Result<T, IoError> {
    token.parse().map_err(|_| parse_error(line, format!("expected {what}, found `{token}`")))
}

pub fn write_edge_list(d: &Dag) -> String {
    let mut out = format!("{}\n", d.n());
    for (u, v) in d.edges() {
        writeln!(out, "{} {}", u + 1, v + 1).unwrap();
    }
    out
}

pub fn read_edge_list(text: &str) -> Result<Dag, IoError> {
    let mut lines = content_lines(text);
    let (first, header) = lines.next().ok_or_else(|| parse_error(1, "missing vertex count"))?;
    let n: usize = parse_field(first, header, "vertex count")?;
    let mut edges = Vec::new();
    for (line, content) in lines {
        let tokens: Vec<&str> = content.split_whitespace().collect();
        if tokens.len() != 2 {
            return Err(parse_error(line, format!("expected `u v`, found `{content}`")));
        }
        edges.push((parse_field(line, tokens[0], "vertex")?, parse_field(line, tokens[1], "vertex")?));
    }
    Ok(Dag::from_edge_list(n, edges)?)
}

pub fn write_dot(d: &Dag) -> String {
    let mut out = String::from("digraph {\n");
    for v in 1..=d.n() {
        writeln!(out, "  {v};").unwrap();
    }
    for (u, v) in d.edges() {
        writeln!(out, "  {} -> {};", u + 1, v + 1).unwrap();
    }
    out.push_str("}\n");
    out
}

/// Reads the DOT subset written by [`write_dot`]: one `v;` statement per
/// vertex and one `u -> v;` per edge.
pub fn read_dot(text: &str) -> Result<Dag, IoError> {
    let mut lines = content_lines(text);
    match lines.next() {
        Some((_, l)) if l.starts_with("digraph") && l.ends_with('{') => {}
        Some((line, l)) => return Err(parse_error(line, format!("expected `digraph {{`, found `{l}`"))),
        None => return Err(parse_error(1, "empty input")),
    }
    let mut n = 0;
    let mut edges = Vec::new();
    let mut closed = false;
    for (line, content) in lines {
        if closed {
            return Err(parse_error(line, "content after closing brace"));
        }
        if content == "}" {
            closed = true;
            continue;
        }
        let statement = content.strip_suffix(';').unwrap_or(content);
        if let Some((u, v)) = statement.split_once("->") {
            let u: usize = parse_field(line, u.trim(), "vertex")?;
            let v: usize = parse_field(line, v.trim(), "vertex")?;
            n = n.max(u).max(v);
            edges.push((u, v));
        } else {
            n = n.max(parse_field(line, statement.trim(), "vertex")?);
        }
    }
    if !closed {
        return Err(parse_error(text.lines().count(), "missing closing brace"));
    }
    Ok(Dag::from_edge_list(n, edges)?)
}

/// STG task list: the task count, then `id cost n_pred pred...` per task
/// with a zero-cost entry task 0 ahead of every source and a zero-cost exit
/// task n + 1 after every sink. Real tasks cost 1.
pub fn write_stg(d: &Dag) -> String {
    let n = d.n();
    let mut out = format!("{n}\n0 0 0\n");
    for v in 0..n {
        let preds = d.predecessors(v);
        let list: Vec<usize> = if preds.is_empty() { vec![0] } else { preds.iter().map(|&u| u + 1).collect() };
        write!(out, "{} 1 {}", v + 1, list.len()).unwrap();
        for p in list {
            write!(out, " {p}").unwrap();
        }
        out.push('\n');
    }
    let sinks: Vec<usize> = (0..n).filter(|&v| d.out_degree(v) == 0).map(|v| v + 1).collect();
    write!(out, "{} 0 {}", n + 1, sinks.len()).unwrap();
    for s in sinks {
        write!(out, " {s}").unwrap();
    }
    out.push('\n');
    out
}

/// Reads an STG task list. Costs must be numeric but are ignored. When the
/// file holds n + 2 tasks, tasks 0 and n + 1 are taken as the dummy entry
/// and exit and removed; with exactly n tasks, ids run from 1 to n.
pub fn read_stg(text: &str) -> Result<Parsed, IoError> {
    let mut lines = content_lines(text);
    let (first, header) = lines.next().ok_or_else(|| parse_error(1, "missing task count"))?;
    let n: usize = parse_field(first, header, "task count")?;
    let mut tasks: Vec<(usize, usize, Vec<usize>)> = Vec::new();
    for (line, content) in lines {
        let tokens: Vec<&str> = content.split_whitespace().collect();
        if tokens.len() < 3 {
            return Err(parse_error(line, format!("expected `id cost n_pred pred...`, found `{content}`")));
        }
        let id: usize = parse_field(line, tokens[0], "task id")?;
        parse_field::<f64>(line, tokens[1], "cost")?;
        let count: usize = parse_field(line, tokens[2], "predecessor count")?;
        if tokens.len() != 3 + count {
            return Err(parse_error(line, format!("task {id} declares {count} predecessors, lists {}", tokens.len() - 3)));
        }
        let preds = tokens[3..].iter().map(|t| parse_field(line, t, "predecessor")).collect::<Result<_, _>>()?;
        tasks.push((line, id, preds));
    }

    let dummies = tasks.len() == n + 2;
    if !dummies && tasks.len() != n {
        let line = tasks.last().map_or(first, |t| t.0);
        return Err(parse_error(line, format!("header declares {n} tasks, found {}", tasks.len())));
    }
    let mut edges = Vec::new();
    for (line, id, preds) in &tasks {
        let expected_range = if dummies { 0..=n + 1 } else { 1..=n };
        if !expected_range.contains(id) {
            return Err(parse_error(*line, format!("task id {id} out of range")));
        }
        if !(1..=n).contains(id) {
            continue;
        }
        for &p in preds {
            if dummies && p == 0 {
                continue;
            }
            if !(1..=n).contains(&p) {
                return Err(parse_error(*line, format!("predecessor {p} of task {id} out of range")));
            }
            edges.push((p, *id));
        }
    }
    Ok(Parsed { dag: Dag::from_edge_list(n, edges)?, dummies_removed: dummies })
}

/// Re-encodes `text` from one format into another.
pub fn convert(text: &str, from: Format, to: Format) -> Result<String, IoError> {
    Ok(write(&read(text, from)?.dag, to))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(n: usize) -> Dag {
        Dag::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    #[test]
    fn edge_list_roundtrip() {
        let d = Dag::from_edge_list(5, [(1, 3), (2, 3), (3, 5)]).unwrap();
        let text = write_edge_list(&d);
        assert_eq!(text, "5\n1 3\n2 3\n3 5\n");
        assert_eq!(read_edge_list(&text).unwrap(), d);
    }

    #[test]
    fn edge_list_comments() {
        let d = read_edge_list("# header\n3 # vertices\n\n1 2\n# edge\n2 3\n").unwrap();
        assert_eq!(d, chain(3));
    }

    #[test]
    fn malformed_line() {
        match read_edge_list("3\n1 2\n1 x\n") {
            Err(IoError::Parse { line: 3, .. }) => {}
            other => panic!("{other:?}"),
        }
        assert!(matches!(read_edge_list("2\n1 2 3\n"), Err(IoError::Parse { line: 2, .. })));
        assert!(matches!(read_edge_list("2\n1 2\n2 1\n"), Err(IoError::Invalid(DagError::CycleDetected(_)))));
    }

    #[test]
    fn dot_keeps_isolated_vertices() {
        let d = Dag::from_edge_list(4, [(2, 3)]).unwrap();
        let dot = write_dot(&d);
        assert!(dot.contains("  4;\n"));
        assert_eq!(read_dot(&dot).unwrap(), d);
    }

    #[test]
    fn stg_chain() {
        let text = write_stg(&chain(3));
        assert_eq!(text, "3\n0 0 0\n1 1 1 0\n2 1 1 1\n3 1 1 2\n4 0 1 3\n");
        let parsed = read_stg(&text).unwrap();
        assert!(parsed.dummies_removed);
        assert_eq!(parsed.dag, chain(3));
    }

    #[test]
    fn stg_without_dummies() {
        let parsed = read_stg("3\n1 4 0\n2 7.5 1 1\n3 2 1 2\n").unwrap();
        assert!(!parsed.dummies_removed);
        assert_eq!(parsed.dag, chain(3));
        assert!(matches!(read_stg("3\n1 1 0\n2 1 2 1\n"), Err(IoError::Parse { line: 3, .. })));
    }

    #[test]
    fn formats_by_name() {
        for f in Format::ALL {
            assert_eq!(f.name().parse::<Format>().unwrap(), f);
        }
        assert!(matches!("gml".parse::<Format>(), Err(IoError::UnknownFormat(_))));
    }
}
