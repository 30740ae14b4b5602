//! Plain-text graph and rooted-tree files, and DOT export.
//!
//! Edge list: a header line `n <vertices>`, then one `u v` line per edge
//! (0-based). A rooted-tree file adds a final `roots: r1 r2 ...` line.
//! Blank lines and lines starting with `#` are ignored on input.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::tree::RootedTree;

fn parse_err<T>(line: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        line,
        msg: msg.into(),
    })
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_number(line: usize, token: &str) -> Result<usize> {
    token
        .parse()
        .or_else(|_| parse_err(line, format!("`{token}` is not a vertex index")))
}

/// Line number and vertices of a `roots:` line.
type RootsLine = (usize, Vec<usize>);

/// Parses the header and edge lines; returns the graph and any `roots:` line.
fn parse_body(text: &str) -> Result<(Graph, Option<RootsLine>)> {
    let mut lines = content_lines(text);
    let Some((header_line, header)) = lines.next() else {
        return parse_err(1, "missing `n <count>` header");
    };
    let n = match header.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["n", count] => parse_number(header_line, count)?,
        _ => return parse_err(header_line, "expected `n <count>`"),
    };
    let mut g = Graph::new(n);
    let mut roots = None;
    for (line, content) in lines {
        if roots.is_some() {
            return parse_err(line, "content after the `roots:` line");
        }
        if let Some(rest) = content.strip_prefix("roots:") {
            let list = rest
                .split_whitespace()
                .map(|t| parse_number(line, t))
                .collect::<Result<Vec<_>>>()?;
            roots = Some((line, list));
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let [u, v] = tokens.as_slice() else {
            return parse_err(line, "expected `u v`");
        };
        let (u, v) = (parse_number(line, u)?, parse_number(line, v)?);
        match g.add_edge(u, v) {
            Ok(true) => {}
            Ok(false) => return parse_err(line, format!("edge {u} {v} listed twice")),
            Err(e) => return parse_err(line, e.to_string()),
        }
    }
    Ok((g, roots))
}

pub fn parse_edge_list(text: &str) -> Result<Graph> {
    match parse_body(text)? {
        (g, None) => Ok(g),
        (_, Some((line, _))) => parse_err(line, "unexpected `roots:` line in an edge list"),
    }
}

pub fn write_edge_list(g: &Graph) -> String {
    let mut out = format!("n {}\n", g.n());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

pub fn parse_rooted_tree(text: &str) -> Result<RootedTree> {
    let (g, roots) = parse_body(text)?;
    let Some((line, roots)) = roots else {
        let last = text.lines().count().max(1);
        return parse_err(last, "missing `roots:` line");
    };
    RootedTree::new(g, roots).or_else(|e| parse_err(line, e.to_string()))
}

pub fn write_rooted_tree(t: &RootedTree) -> String {
    let mut out = write_edge_list(t.graph());
    out.push_str("roots:");
    for r in t.roots() {
        let _ = write!(out, " {r}");
    }
    out.push('\n');
    out
}

/// Undirected DOT; `highlight` vertices are drawn as filled boxes.
pub fn to_dot(g: &Graph, highlight: &[usize]) -> String {
    let mut out = String::from("graph G {\n");
    for v in 0..g.n() {
        let mut attrs = Vec::new();
        if highlight.contains(&v) {
            attrs.push("shape=box, style=filled".to_string());
        }
        if let Some(sides) = g.bipartition() {
            attrs.push(format!("group={}", sides[v]));
        }
        if attrs.is_empty() {
            let _ = writeln!(out, "  {v};");
        } else {
            let _ = writeln!(out, "  {v} [{}];", attrs.join(", "));
        }
    }
    for (u, v) in g.edges() {
        let _ = writeln!(out, "  {u} -- {v};");
    }
    out.push_str("}\n");
    out
}
