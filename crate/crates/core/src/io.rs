//! Text formats for complexes and maps, and JSON renderings of results.
//!
//! Complex files hold one facet per line as comma-separated vertex labels.
//! Map files hold one `source -> target` pair per line. In both, `#` starts
//! a comment and blank lines are ignored. Labels are trimmed; a label that
//! contains `,`, `#`, `"`, `\`, `->` or edge whitespace is written in double
//! quotes with `\"` and `\\` escapes.

use std::fs;
use std::path::Path;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::collapse::CollapseTrace;
use crate::complex::{bit, bits, graded_lex, label_order, Complex, Subcomplex};
use crate::contiguity::{ClassDecision, ContiguityCertificate, Verdict};
use crate::distance::{DistanceReport, Link, SdValue};
use crate::error::{Error, Result};
use crate::maps::{build_map, SimplicialMap};

struct Cursor<'a> {
    line: usize,
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn err(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            column: self.text[..self.pos].chars().count() + 1,
            message: message.into(),
        }
    }

    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    fn skip_ws(&mut self) {
        let rest = self.rest();
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn at_end(&self) -> bool {
        let r = self.rest().trim_start();
        r.is_empty() || r.starts_with('#')
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    /// Reads one label, stopping before any of `stops` or a comment.
    fn label(&mut self, stops: &[&str]) -> Result<String> {
        self.skip_ws();
        if self.rest().starts_with('"') {
            let start = self.pos;
            self.pos += 1;
            let mut out = String::new();
            let mut chars = self.rest().char_indices();
            loop {
                match chars.next() {
                    None => {
                        self.pos = start;
                        return Err(self.err("unterminated quoted label"));
                    }
                    Some((i, '"')) => {
                        self.pos += i + 1;
                        return Ok(out);
                    }
                    Some((_, '\\')) => match chars.next() {
                        Some((_, c @ ('"' | '\\'))) => out.push(c),
                        Some((i, _)) => {
                            self.pos += i;
                            return Err(self.err("unknown escape in quoted label"));
                        }
                        None => {
                            self.pos = start;
                            return Err(self.err("unterminated quoted label"));
                        }
                    },
                    Some((_, c)) => out.push(c),
                }
            }
        }
        let rest = self.rest();
        let end = std::iter::once("#")
            .chain(stops.iter().copied())
            .filter_map(|s| rest.find(s))
            .min()
            .unwrap_or(rest.len());
        let label = rest[..end].trim();
        if label.is_empty() {
            return Err(self.err("empty vertex label"));
        }
        if label.contains('"') {
            return Err(self.err("stray quote in unquoted label"));
        }
        self.pos += end;
        Ok(label.to_string())
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let t = l.trim();
        (!t.is_empty() && !t.starts_with('#')).then_some((i + 1, l))
    })
}

/// Facets as label lists, in file order.
pub fn parse_facets(text: &str) -> Result<Vec<Vec<String>>> {
    let mut facets = Vec::new();
    for (line, raw) in content_lines(text) {
        let mut c = Cursor {
            line,
            text: raw,
            pos: 0,
        };
        let mut facet = vec![c.label(&[","])?];
        while c.eat(",") {
            facet.push(c.label(&[","])?);
        }
        if !c.at_end() {
            return Err(c.err("expected `,` or end of line"));
        }
        facets.push(facet);
    }
    Ok(facets)
}

pub fn parse_complex(text: &str) -> Result<Complex> {
    Complex::build(parse_facets(text)?)
}

/// `(source, target)` pairs in file order.
pub fn parse_map_table(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (line, raw) in content_lines(text) {
        let mut c = Cursor {
            line,
            text: raw,
            pos: 0,
        };
        let src = c.label(&["->"])?;
        if !c.eat("->") {
            return Err(c.err("expected `->`"));
        }
        let dst = c.label(&["->"])?;
        if !c.at_end() {
            return Err(c.err("expected end of line"));
        }
        out.push((src, dst));
    }
    Ok(out)
}

pub fn parse_map(
    text: &str,
    domain: &Arc<Complex>,
    codomain: &Arc<Complex>,
) -> Result<SimplicialMap> {
    build_map(domain, codomain, &parse_map_table(text)?)
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

pub fn parse_complex_file(path: impl AsRef<Path>) -> Result<Complex> {
    parse_complex(&read(path.as_ref())?)
}

pub fn parse_map_file(
    path: impl AsRef<Path>,
    domain: &Arc<Complex>,
    codomain: &Arc<Complex>,
) -> Result<SimplicialMap> {
    parse_map(&read(path.as_ref())?, domain, codomain)
}

/// A label as it must appear in a file.
pub fn quote_label(label: &str) -> String {
    let plain = !label.is_empty()
        && label.trim() == label
        && !label.contains([',', '#', '"', '\\'])
        && !label.contains("->");
    if plain {
        label.to_string()
    } else {
        format!("\"{}\"", label.replace('\\', "\\\\").replace('"', "\\\""))
    }
}

/// Ranks of the vertices of `k` under [`label_order`].
fn label_ranks(k: &Complex) -> Vec<usize> {
    let mut by_label: Vec<usize> = (0..k.num_vertices()).collect();
    by_label.sort_by(|&a, &b| label_order(k.label(a), k.label(b)));
    let mut rank = vec![0; by_label.len()];
    for (r, v) in by_label.into_iter().enumerate() {
        rank[v] = r;
    }
    rank
}

/// Canonical text form. Vertices are ordered by label, each facet is written
/// in that order, and facets are sorted by size and then lexicographically.
/// Parsing and re-emitting this text reproduces it byte for byte.
pub fn emit_complex(k: &Complex) -> String {
    let rank = label_ranks(k);
    let mut facets: Vec<u64> = k
        .facet_masks()
        .into_iter()
        .map(|f| bits(f).fold(0, |m, v| m | bit(rank[v])))
        .collect();
    facets.sort_by(|&a, &b| graded_lex(a, b));
    let mut by_rank = vec![0; rank.len()];
    for (v, &r) in rank.iter().enumerate() {
        by_rank[r] = v;
    }
    let mut out = String::new();
    for f in facets {
        let line: Vec<String> = bits(f).map(|r| quote_label(k.label(by_rank[r]))).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

/// Canonical text form: one line per domain vertex, in label order.
pub fn emit_map(phi: &SimplicialMap) -> String {
    let mut table = phi.table();
    table.sort_by(|a, b| label_order(&a.0, &b.0));
    table
        .into_iter()
        .map(|(a, b)| format!("{} -> {}\n", quote_label(&a), quote_label(&b)))
        .collect()
}

pub fn complex_json(k: &Complex) -> Value {
    json!({
        "vertices": k.labels(),
        "facets": k.facets().iter().map(|f| k.simplex_labels(*f)).collect::<Vec<_>>(),
        "dimension": k.dimension(),
        "num_faces": k.num_faces(),
        "edge_path_connected": k.is_edge_path_connected(),
    })
}

pub fn subcomplex_json(omega: &Subcomplex) -> Value {
    json!(omega.facet_labels())
}

pub fn map_json(phi: &SimplicialMap) -> Value {
    json!(phi
        .table()
        .into_iter()
        .map(|(a, b)| json!([a, b]))
        .collect::<Vec<_>>())
}

pub fn certificate_json(c: &ContiguityCertificate) -> Value {
    json!({
        "steps": c.steps(),
        "chain": c.chain().iter().map(map_json).collect::<Vec<_>>(),
    })
}

pub fn link_json(link: &Link) -> Value {
    match link {
        Link::Chain(c) => json!({"kind": "chain", "certificate": certificate_json(c)}),
        Link::Coordinatewise(cs) => json!({
            "kind": "coordinatewise",
            "certificates": cs.iter().map(certificate_json).collect::<Vec<_>>(),
        }),
    }
}

pub fn class_decision_json(d: &ClassDecision) -> Value {
    let (verdict, chain, steps) = match &d.verdict {
        Verdict::Equivalent(c) => (
            "equivalent",
            json!(c.chain().iter().map(map_json).collect::<Vec<_>>()),
            json!(c.steps()),
        ),
        Verdict::NotEquivalent => ("not_equivalent", Value::Null, Value::Null),
        Verdict::Unknown => ("unknown", Value::Null, Value::Null),
    };
    json!({
        "verdict": verdict,
        "chain": chain,
        "steps": steps,
        "explored": d.explored,
        "budget": d.budget,
    })
}

fn value_json(v: SdValue) -> (Value, Value, &'static str) {
    match v {
        SdValue::Finite(x) => (json!(x), Value::Null, "definite"),
        SdValue::Infinite => (json!("infinite"), Value::Null, "definite"),
        SdValue::Unknown { lower, upper } => (
            Value::Null,
            json!({"lower": lower, "upper": upper}),
            "unknown",
        ),
    }
}

pub fn distance_report_json(r: &DistanceReport) -> Value {
    let (value, bounds, status) = value_json(r.value);
    let (pieces, certificates) = match &r.solution {
        Some(s) => (
            json!(s.pieces.iter().map(subcomplex_json).collect::<Vec<_>>()),
            json!(s
                .links
                .iter()
                .map(|row| row.iter().map(link_json).collect::<Vec<_>>())
                .collect::<Vec<_>>()),
        ),
        None => (json!([]), json!([])),
    };
    json!({
        "status": status,
        "value": value,
        "bounds": bounds,
        "mode": r.mode,
        "pieces": pieces,
        "certificates": certificates,
        "infinite_witness": r.infinite_witness,
        "farber_verified": r.farber_verified,
        "stats": r.stats,
        "budget": r.budget,
    })
}

/// An error as `{kind, message, details}`, with a stable `kind` per variant.
pub fn error_json(e: &Error) -> Value {
    let (kind, details) = match e {
        Error::EmptyFacet { index } => ("empty_facet", json!({"index": index})),
        Error::EmptyComplex => ("empty_complex", json!({})),
        Error::UnknownVertex(v) => ("unknown_vertex", json!({"vertex": v})),
        Error::MissingVertex(v) => ("missing_vertex", json!({"vertex": v})),
        Error::DuplicateAssignment(v) => ("duplicate_assignment", json!({"vertex": v})),
        Error::NotSimplicial(face) => ("not_simplicial", json!({"face": face})),
        Error::DomainMismatch => ("domain_mismatch", json!({})),
        Error::NotASubcomplex(s) => ("not_a_subcomplex", json!({"simplex": s})),
        Error::IndexOutOfRange { index, max } => {
            ("index_out_of_range", json!({"index": index, "max": max}))
        }
        Error::VertexBudgetExceeded { needed, limit } => (
            "vertex_budget_exceeded",
            json!({"needed": needed.to_string(), "limit": limit}),
        ),
        Error::EnumerationBudgetExceeded(n) => ("enumeration_budget_exceeded", json!({"limit": n})),
        Error::NeighborBudgetExceeded(n) => ("neighbor_budget_exceeded", json!({"limit": n})),
        Error::TooFewMaps { needed, got } => {
            ("too_few_maps", json!({"needed": needed, "got": got}))
        }
        Error::Parse {
            line,
            column,
            message,
        } => (
            "parse",
            json!({"line": line, "column": column, "message": message}),
        ),
        Error::Io { path, message } => ("io", json!({"path": path, "message": message})),
    };
    json!({"kind": kind, "message": e.to_string(), "details": details})
}

pub fn collapse_json(trace: &CollapseTrace) -> Value {
    let core = trace.result();
    json!({
        "steps": trace.steps,
        "core": complex_json(&core),
        "strongly_collapsible": core.num_vertices() == 1,
    })
}
