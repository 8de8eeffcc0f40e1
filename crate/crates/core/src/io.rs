//! Hypergraph text and JSON formats.
//!
//! Text: a header `k=<int> sizes=<n0>,<n1>,...` followed by edge lines
//! `e <c>:<i> <c>:<i> ...` with one vertex per class in any order. `#`
//! starts a comment. JSON: `{"k": 3, "sizes": [..], "edges": [[[c, i], ..], ..]}`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, VertexId};

/// Parses either format, choosing JSON when the input starts with `{`.
pub fn parse(input: &str) -> Result<Hypergraph> {
    if input.trim_start().starts_with('{') {
        parse_json(input)
    } else {
        parse_text(input)
    }
}

pub fn parse_text(input: &str) -> Result<Hypergraph> {
    let mut header: Option<(usize, Vec<usize>)> = None;
    let mut edges: Vec<Vec<VertexId>> = Vec::new();
    let mut seen: HashMap<Vec<VertexId>, usize> = HashMap::new();
    for (idx, raw) in input.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        match &header {
            None => header = Some(parse_header(line, line_no)?),
            Some((k, sizes)) => {
                let mut edge = parse_edge(line, line_no, *k, sizes)?;
                edge.sort_unstable();
                if let Some(first) = seen.insert(edge.clone(), line_no) {
                    return Err(Error::parse(line_no, format!("duplicate edge (first given on line {first})")));
                }
                edges.push(edge);
            }
        }
    }
    let (k, sizes) = header.ok_or_else(|| Error::parse(0, "missing header `k=<int> sizes=<list>`"))?;
    Hypergraph::new(k, sizes, edges).map_err(|e| Error::parse(0, e.to_string()))
}

fn parse_header(line: &str, line_no: usize) -> Result<(usize, Vec<usize>)> {
    let mut k = None;
    let mut sizes = None;
    for token in line.split_whitespace() {
        if let Some(v) = token.strip_prefix("k=") {
            k = Some(v.parse::<usize>().map_err(|_| Error::parse(line_no, format!("bad uniformity `{v}`")))?);
        } else if let Some(v) = token.strip_prefix("sizes=") {
            let list = v
                .split(',')
                .map(|s| s.parse::<usize>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| Error::parse(line_no, format!("bad size list `{v}`")))?;
            sizes = Some(list);
        } else {
            return Err(Error::parse(line_no, format!("unexpected header token `{token}`")));
        }
    }
    let k = k.ok_or_else(|| Error::parse(line_no, "header lacks `k=`"))?;
    let sizes = sizes.ok_or_else(|| Error::parse(line_no, "header lacks `sizes=`"))?;
    if k < 2 {
        return Err(Error::parse(line_no, format!("uniformity must be at least 2, got {k}")));
    }
    if sizes.len() != k {
        return Err(Error::parse(line_no, format!("expected {k} class sizes, got {}", sizes.len())));
    }
    if sizes.contains(&0) {
        return Err(Error::parse(line_no, "class sizes must be positive"));
    }
    Ok((k, sizes))
}

fn parse_edge(line: &str, line_no: usize, k: usize, sizes: &[usize]) -> Result<Vec<VertexId>> {
    let mut tokens = line.split_whitespace();
    if tokens.next() != Some("e") {
        return Err(Error::parse(line_no, "edge lines start with `e`"));
    }
    let mut edge = Vec::with_capacity(k);
    let mut classes = vec![false; k];
    for token in tokens {
        let (c, i) = token
            .split_once(':')
            .and_then(|(c, i)| Some((c.parse::<usize>().ok()?, i.parse::<usize>().ok()?)))
            .ok_or_else(|| Error::parse(line_no, format!("bad vertex `{token}`, expected <class>:<index>")))?;
        check_vertex(c, i, line_no, sizes)?;
        if std::mem::replace(&mut classes[c], true) {
            return Err(Error::parse(line_no, format!("class {c} appears twice in one edge")));
        }
        edge.push(VertexId::new(c, i));
    }
    if edge.len() != k {
        return Err(Error::parse(line_no, format!("edge has {} vertices, expected {k}", edge.len())));
    }
    Ok(edge)
}

fn check_vertex(c: usize, i: usize, line_no: usize, sizes: &[usize]) -> Result<()> {
    if c >= sizes.len() {
        return Err(Error::parse(line_no, format!("class {c} out of range")));
    }
    if i >= sizes[c] {
        return Err(Error::parse(line_no, format!("vertex {c}:{i} out of range (class size {})", sizes[c])));
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct JsonHypergraph {
    k: usize,
    sizes: Vec<usize>,
    edges: Vec<Vec<[usize; 2]>>,
}

pub fn parse_json(input: &str) -> Result<Hypergraph> {
    let raw: JsonHypergraph = serde_json::from_str(input).map_err(|e| Error::parse(e.line(), e.to_string()))?;
    if raw.sizes.len() != raw.k {
        return Err(Error::parse(0, format!("expected {} class sizes, got {}", raw.k, raw.sizes.len())));
    }
    let mut edges = Vec::with_capacity(raw.edges.len());
    let mut seen: HashMap<Vec<VertexId>, usize> = HashMap::new();
    for (j, e) in raw.edges.iter().enumerate() {
        let mut edge = Vec::with_capacity(e.len());
        for &[c, i] in e {
            check_vertex(c, i, 0, &raw.sizes).map_err(|_| Error::parse(0, format!("edge {j}: vertex {c}:{i} out of range")))?;
            edge.push(VertexId::new(c, i));
        }
        edge.sort_unstable();
        if let Some(first) = seen.insert(edge.clone(), j) {
            return Err(Error::parse(0, format!("edge {j} duplicates edge {first}")));
        }
        edges.push(edge);
    }
    Hypergraph::new(raw.k, raw.sizes, edges).map_err(|e| Error::parse(0, e.to_string()))
}

/// Canonical text form: edges in canonical order, vertices by class.
pub fn to_text(g: &Hypergraph) -> String {
    let sizes: Vec<String> = g.class_sizes().iter().map(|s| s.to_string()).collect();
    let mut out = format!("k={} sizes={}\n", g.k(), sizes.join(","));
    for e in g.edges() {
        let vs: Vec<String> = g.vertex_ids(e).iter().map(|v| v.to_string()).collect();
        out.push_str("e ");
        out.push_str(&vs.join(" "));
        out.push('\n');
    }
    out
}

/// Canonical JSON form.
pub fn to_json(g: &Hypergraph) -> String {
    let raw = JsonHypergraph {
        k: g.k(),
        sizes: g.class_sizes().to_vec(),
        edges: g
            .edges()
            .iter()
            .map(|e| g.vertex_ids(e).iter().map(|v| [v.class, v.index]).collect())
            .collect(),
    };
    serde_json::to_string(&raw).expect("hypergraph serialises")
}

/// SHA-256 of the canonical text form, in hex.
pub fn digest(g: &Hypergraph) -> String {
    let hash = Sha256::digest(to_text(g).as_bytes());
    hash.iter().map(|b| format!("{b:02x}")).collect()
}
