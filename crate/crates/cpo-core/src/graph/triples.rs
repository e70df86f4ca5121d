//! Line-oriented triples export and import.
//!
//! Each line is `subject predicate object .`: node ids in angle brackets,
//! predicates bare, literals as `true`/`false`, bare canonical decimals, or
//! double-quoted strings with `\" \\ \n \t \r` escapes. Class membership
//! uses the pseudo-relation `instance_of` with a bare class id as object.
//! Edges carrying attributes are reified through a blank node:
//!
//! ```text
//! _:e0 edge_subject <cr1> .
//! _:e0 edge_relation concretizes .
//! _:e0 edge_object <ice1> .
//! _:e0 attr_mode "original" .
//! ```
//!
//! This is the asserted-facts view of a graph and is lossy in three
//! documented ways: derived classes, system-provenance annotations, and
//! nodes with no asserted class are not exported. Import does not create
//! nodes from edge endpoints, so references to undeclared nodes surface as
//! dangling-reference violations during validation.

use std::collections::BTreeMap;

use super::{DataRecord, EdgeRecord, GraphError, KGraph, Literal, NodeId, Provenance};
use crate::decimal::Decimal;
use crate::ontology::{ClassId, RelationId};

pub const HEADER: &str = "# cpo-triples 1";

/// Serializes the asserted facts of `graph` as triples (byte-stable).
pub fn to_triples(graph: &KGraph) -> String {
    let mut out = String::from(HEADER);
    out.push('\n');
    for id in graph.node_ids() {
        for class in graph.asserted_classes(id.as_str()) {
            out.push_str(&format!("<{id}> instance_of {} .\n", class.id()));
        }
    }
    let mut blank = 0usize;
    for edge in graph.edges() {
        if edge.attrs.is_empty() {
            out.push_str(&format!("<{}> {} <{}> .\n", edge.s, edge.rel, edge.o));
        } else {
            let label = format!("_:e{blank}");
            blank += 1;
            out.push_str(&format!("{label} edge_subject <{}> .\n", edge.s));
            out.push_str(&format!("{label} edge_relation {} .\n", edge.rel));
            out.push_str(&format!("{label} edge_object <{}> .\n", edge.o));
            for (key, value) in &edge.attrs {
                out.push_str(&format!("{label} attr_{key} {} .\n", quote(value)));
            }
        }
    }
    for record in graph.data() {
        if record.provenance == Provenance::System {
            continue;
        }
        let object = match &record.value {
            Literal::Boolean(b) => b.to_string(),
            Literal::Nominal(s) => quote(s),
            Literal::Decimal(d) => d.as_str().to_owned(),
        };
        out.push_str(&format!("<{}> {} {object} .\n", record.s, record.rel));
    }
    out
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            '\r' => out.push_str("\\r"),
            other => out.push(other),
        }
    }
    out.push('"');
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Term {
    Node(String),
    Blank(String),
    Bare(String),
    Quoted(String),
}

#[derive(Default)]
struct ReifiedEdge {
    s: Option<String>,
    rel: Option<RelationId>,
    o: Option<String>,
    attrs: BTreeMap<String, String>,
}

/// Parses triples text into a graph. Lexical problems (bad syntax, unknown
/// vocabulary) are errors; semantic problems are left for validation.
pub fn from_triples(text: &str) -> Result<KGraph, GraphError> {
    let mut graph = KGraph::new();
    let mut reified: BTreeMap<String, ReifiedEdge> = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |msg: &str| GraphError::Parse(format!("line {}: {msg}", lineno + 1));
        let body = line
            .strip_suffix('.')
            .ok_or_else(|| err("line must end with \".\""))?
            .trim_end();
        let terms = tokenize(body).map_err(|m| err(&m))?;
        let [subject, predicate, object] = terms
            .try_into()
            .map_err(|_| err("expected exactly three terms"))?;
        let Term::Bare(pred) = predicate else {
            return Err(err("predicate must be a bare identifier"));
        };
        match subject {
            Term::Node(s) => {
                handle_plain(&mut graph, &s, &pred, object).map_err(|m| err(&m))?;
            }
            Term::Blank(label) => {
                let entry = reified.entry(label).or_default();
                handle_reified(entry, &pred, object).map_err(|m| err(&m))?;
            }
            _ => return Err(err("subject must be a node or blank label")),
        }
    }
    for (label, part) in reified {
        let missing = |what: &str| {
            GraphError::Parse(format!("reified edge {label} is missing {what}"))
        };
        graph.insert_edge_unchecked(EdgeRecord {
            s: NodeId::new(part.s.ok_or_else(|| missing("edge_subject"))?)?,
            rel: part.rel.ok_or_else(|| missing("edge_relation"))?,
            o: NodeId::new(part.o.ok_or_else(|| missing("edge_object"))?)?,
            attrs: part.attrs,
        });
    }
    Ok(graph)
}

fn handle_plain(
    graph: &mut KGraph,
    subject: &str,
    predicate: &str,
    object: Term,
) -> Result<(), String> {
    if predicate == "instance_of" {
        let Term::Bare(name) = object else {
            return Err("instance_of takes a bare class id".to_owned());
        };
        let class: ClassId = name.parse().map_err(|e| format!("{e}"))?;
        let id = NodeId::new(subject).map_err(|e| format!("{e}"))?;
        graph.insert_node_unchecked(id, [class].into(), Default::default());
        return Ok(());
    }
    let rel: RelationId = predicate.parse().map_err(|e| format!("{e}"))?;
    if rel.is_data_relation() {
        let value = literal_term(rel, object)?;
        graph.insert_data_unchecked(DataRecord {
            s: NodeId::new(subject).map_err(|e| format!("{e}"))?,
            rel,
            value,
            provenance: Provenance::Asserted,
        });
    } else {
        let Term::Node(o) = object else {
            return Err(format!("relation {rel} links nodes; object must be <id>"));
        };
        graph.insert_edge_unchecked(EdgeRecord {
            s: NodeId::new(subject).map_err(|e| format!("{e}"))?,
            rel,
            o: NodeId::new(o).map_err(|e| format!("{e}"))?,
            attrs: BTreeMap::new(),
        });
    }
    Ok(())
}

fn handle_reified(entry: &mut ReifiedEdge, predicate: &str, object: Term) -> Result<(), String> {
    match predicate {
        "edge_subject" => match object {
            Term::Node(s) => entry.s = Some(s),
            _ => return Err("edge_subject takes a node".to_owned()),
        },
        "edge_relation" => match object {
            Term::Bare(name) => {
                let rel: RelationId = name.parse().map_err(|e| format!("{e}"))?;
                entry.rel = Some(rel);
            }
            _ => return Err("edge_relation takes a bare relation id".to_owned()),
        },
        "edge_object" => match object {
            Term::Node(o) => entry.o = Some(o),
            _ => return Err("edge_object takes a node".to_owned()),
        },
        attr if attr.starts_with("attr_") => match object {
            Term::Quoted(v) => {
                entry.attrs.insert(attr["attr_".len()..].to_owned(), v);
            }
            _ => return Err("attribute values must be quoted strings".to_owned()),
        },
        other => return Err(format!("unknown reification predicate {other:?}")),
    }
    Ok(())
}

/// Maps an object term to a literal. As with the JSON loader, a quoted
/// string under a decimal relation stays nominal so validation can flag it.
fn literal_term(rel: RelationId, object: Term) -> Result<Literal, String> {
    match object {
        Term::Quoted(s) => Ok(Literal::Nominal(s)),
        Term::Bare(tok) => match tok.as_str() {
            "true" => Ok(Literal::Boolean(true)),
            "false" => Ok(Literal::Boolean(false)),
            other => Decimal::parse(other)
                .map(Literal::Decimal)
                .map_err(|_| format!("cannot read literal {other:?} for {rel}")),
        },
        Term::Node(_) | Term::Blank(_) => {
            Err(format!("relation {rel} carries a literal; object must not be a node"))
        }
    }
}

fn tokenize(body: &str) -> Result<Vec<Term>, String> {
    let mut terms = Vec::new();
    let mut chars = body.chars().peekable();
    while let Some(&c) = chars.peek() {
        if c.is_ascii_whitespace() {
            chars.next();
        } else if c == '<' {
            chars.next();
            let mut id = String::new();
            loop {
                match chars.next() {
                    Some('>') => break,
                    Some(ch) => id.push(ch),
                    None => return Err("unterminated <node> term".to_owned()),
                }
            }
            terms.push(Term::Node(id));
        } else if c == '"' {
            chars.next();
            let mut value = String::new();
            loop {
                match chars.next() {
                    Some('"') => break,
                    Some('\\') => match chars.next() {
                        Some('"') => value.push('"'),
                        Some('\\') => value.push('\\'),
                        Some('n') => value.push('\n'),
                        Some('t') => value.push('\t'),
                        Some('r') => value.push('\r'),
                        other => return Err(format!("bad escape {other:?}")),
                    },
                    Some(ch) => value.push(ch),
                    None => return Err("unterminated string literal".to_owned()),
                }
            }
            terms.push(Term::Quoted(value));
        } else {
            let mut tok = String::new();
            while let Some(&ch) = chars.peek() {
                if ch.is_ascii_whitespace() {
                    break;
                }
                tok.push(ch);
                chars.next();
            }
            match tok.strip_prefix("_:") {
                Some(label) if !label.is_empty() => terms.push(Term::Blank(label.to_owned())),
                Some(_) => return Err("blank label must be non-empty".to_owned()),
                None => terms.push(Term::Bare(tok)),
            }
        }
    }
    Ok(terms)
}
