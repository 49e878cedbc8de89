//! Text formats for codes and designs.
//!
//! A code file starts with `code <graph> size=<n>` optionally followed by
//! `label=<text>` (the label runs to the end of the line), then lists one
//! vertex per line in increasing vertex-id order. A design file starts with
//! `design n=<n> k=<k> q=<q>` and lists one block per line. Vertices and
//! blocks use the lattice syntax: comma-separated members for sets, and
//! `:`-joined hex rows for subspaces. Blank lines and lines starting with
//! `#` are ignored.

use crate::constructions::Design;
use crate::graphs::{AnyGraph, Graph, GraphSpec};
use crate::subspaces::Lattice;
use crate::verify::Code;
use crate::{Error, Result};
use std::fmt::Write as _;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeHeader {
    pub spec: GraphSpec,
    pub size: usize,
    pub label: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DesignHeader {
    pub n: usize,
    pub k: usize,
    pub q: u64,
}

fn body(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn field<'a>(token: Option<&'a str>, key: &str) -> Result<&'a str> {
    token
        .and_then(|t| t.strip_prefix(key))
        .and_then(|t| t.strip_prefix('='))
        .ok_or_else(|| Error::Parse(format!("expected {key}=<value>")))
}

fn number<T: std::str::FromStr>(s: &str, what: &str) -> Result<T> {
    s.parse().map_err(|_| Error::Parse(format!("bad {what} {s:?}")))
}

pub fn parse_code_header(text: &str) -> Result<CodeHeader> {
    let (_, line) = body(text).next().ok_or_else(|| Error::Parse("empty code file".into()))?;
    let rest = line
        .strip_prefix("code ")
        .ok_or_else(|| Error::Parse(format!("expected a code header, found {line:?}")))?;
    let (head, label) = match rest.find(" label=") {
        Some(at) => (&rest[..at], Some(rest[at + 7..].to_string())),
        None => (rest, None),
    };
    let mut tokens = head.split_whitespace();
    let spec: GraphSpec = tokens.next().ok_or_else(|| Error::Parse("missing graph".into()))?.parse()?;
    let size = number(field(tokens.next(), "size")?, "size")?;
    if let Some(extra) = tokens.next() {
        return Err(Error::Parse(format!("unexpected header field {extra:?}")));
    }
    Ok(CodeHeader { spec, size, label })
}

pub fn write_code<L: Lattice>(graph: &Graph<L>, code: &Code) -> Result<String> {
    if graph.spec() != code.spec() {
        return Err(Error::AmbientMismatch(format!("{} and {}", graph.spec(), code.spec())));
    }
    let mut out = format!("code {} size={}", code.spec(), code.len());
    if let Some(label) = code.label() {
        write!(out, " label={label}").unwrap();
    }
    out.push('\n');
    for &v in code.ids() {
        out += &graph.format_vertex(v);
        out.push('\n');
    }
    Ok(out)
}

pub fn read_code<L: Lattice>(graph: &Graph<L>, text: &str) -> Result<Code> {
    let header = parse_code_header(text)?;
    if header.spec != graph.spec() {
        return Err(Error::AmbientMismatch(format!("file is for {}, graph is {}", header.spec, graph.spec())));
    }
    let mut ids = Vec::with_capacity(header.size);
    for (no, line) in body(text).skip(1) {
        let x = graph
            .lattice()
            .parse(line)
            .map_err(|e| Error::Parse(format!("line {no}: {e}")))?;
        let id = graph
            .id(&x)
            .ok_or_else(|| Error::Parse(format!("line {no}: {line:?} is not a vertex of {}", header.spec)))?;
        if ids.last().is_some_and(|&last| last >= id) {
            return Err(Error::Parse(format!("line {no}: vertices are not sorted or repeat")));
        }
        ids.push(id);
    }
    if ids.len() != header.size {
        return Err(Error::Parse(format!("header says size={} but {} vertices follow", header.size, ids.len())));
    }
    let code = Code::new(header.spec, ids)?;
    Ok(match header.label {
        Some(label) => code.with_label(label),
        None => code,
    })
}

pub fn write_code_any(graph: &AnyGraph, code: &Code) -> Result<String> {
    match graph {
        AnyGraph::Johnson(g) => write_code(g, code),
        AnyGraph::Grassmann(g) => write_code(g, code),
    }
}

pub fn read_code_any(graph: &AnyGraph, text: &str) -> Result<Code> {
    match graph {
        AnyGraph::Johnson(g) => read_code(g, text),
        AnyGraph::Grassmann(g) => read_code(g, text),
    }
}

pub fn parse_design_header(text: &str) -> Result<DesignHeader> {
    let (_, line) = body(text).next().ok_or_else(|| Error::Parse("empty design file".into()))?;
    let mut tokens = line.split_whitespace();
    if tokens.next() != Some("design") {
        return Err(Error::Parse(format!("expected a design header, found {line:?}")));
    }
    let n = number(field(tokens.next(), "n")?, "n")?;
    let k = number(field(tokens.next(), "k")?, "k")?;
    let q = number(field(tokens.next(), "q")?, "q")?;
    Ok(DesignHeader { n, k, q })
}

pub fn write_design<L: Lattice>(lattice: &L, design: &Design<L::Elem>) -> String {
    let mut out = format!("design n={} k={} q={}\n", design.n(), design.k(), design.q());
    for b in design.blocks() {
        out += &lattice.format(b);
        out.push('\n');
    }
    out
}

pub fn read_design<L: Lattice>(lattice: &L, text: &str) -> Result<Design<L::Elem>>
where
    L::Elem: Clone + Eq + std::hash::Hash + Ord,
{
    let h = parse_design_header(text)?;
    if h.n != lattice.n() || h.q != lattice.q() {
        return Err(Error::AmbientMismatch(format!(
            "design over n={} q={}, lattice over n={} q={}",
            h.n,
            h.q,
            lattice.n(),
            lattice.q()
        )));
    }
    let blocks = body(text)
        .skip(1)
        .map(|(no, line)| lattice.parse(line).map_err(|e| Error::Parse(format!("line {no}: {e}"))))
        .collect::<Result<Vec<_>>>()?;
    Design::new(lattice, h.k, blocks)
}
