//! JSON interchange for graphs.
//!
//! The format is a single object with `meta`, `nodes`, `edges`, and `data`
//! members. Decimals travel as strings so values stay exact; booleans as
//! JSON booleans; everything else as strings. Writing is canonical — nodes
//! sorted by id, classes sorted, edges and data in record order, two-space
//! pretty printing — so a graph serializes to the same bytes no matter how
//! it was built, and `from_json(to_json(g)) == g`.
//!
//! Loading is lexically strict (unknown classes, relations, or fields and
//! malformed values are errors) but semantically permissive: domain, range,
//! attribute, and literal-kind problems are preserved for
//! [`KGraph::validate_wellformed`] to report.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{DataRecord, EdgeRecord, GraphError, KGraph, Literal, NodeId, Provenance};
use crate::decimal::Decimal;
use crate::ontology::{ClassId, LiteralKind, RangeSpec, RelationId};

pub const FORMAT_VERSION: &str = "1";

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileGraph {
    meta: FileMeta,
    nodes: Vec<FileNode>,
    edges: Vec<FileEdge>,
    data: Vec<FileData>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileMeta {
    format_version: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileNode {
    id: String,
    classes: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    derived_classes: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileEdge {
    s: String,
    rel: String,
    o: String,
    #[serde(default)]
    attrs: BTreeMap<String, String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileData {
    s: String,
    rel: String,
    value: serde_json::Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    provenance: Option<String>,
}

/// Serializes `graph` to canonical interchange JSON (trailing newline
/// included).
pub fn to_json(graph: &KGraph) -> String {
    let file = FileGraph {
        meta: FileMeta {
            format_version: FORMAT_VERSION.to_owned(),
        },
        nodes: graph
            .node_ids()
            .map(|id| FileNode {
                id: id.as_str().to_owned(),
                classes: graph
                    .asserted_classes(id.as_str())
                    .map(|c| c.id().to_owned())
                    .collect(),
                derived_classes: graph
                    .derived_classes(id.as_str())
                    .map(|c| c.id().to_owned())
                    .collect(),
            })
            .collect(),
        edges: graph
            .edges()
            .map(|e| FileEdge {
                s: e.s.as_str().to_owned(),
                rel: e.rel.id().to_owned(),
                o: e.o.as_str().to_owned(),
                attrs: e.attrs.clone(),
            })
            .collect(),
        data: graph
            .data()
            .map(|d| FileData {
                s: d.s.as_str().to_owned(),
                rel: d.rel.id().to_owned(),
                value: match &d.value {
                    Literal::Boolean(b) => serde_json::Value::Bool(*b),
                    Literal::Nominal(s) => serde_json::Value::String(s.clone()),
                    Literal::Decimal(dec) => serde_json::Value::String(dec.as_str().to_owned()),
                },
                provenance: match d.provenance {
                    Provenance::Asserted => None,
                    Provenance::System => Some("system".to_owned()),
                },
            })
            .collect(),
    };
    let mut out = serde_json::to_string_pretty(&file).expect("graph serializes");
    out.push('\n');
    out
}

/// Parses interchange JSON into a graph.
pub fn from_json(text: &str) -> Result<KGraph, GraphError> {
    let file: FileGraph =
        serde_json::from_str(text).map_err(|e| GraphError::Parse(e.to_string()))?;
    if file.meta.format_version != FORMAT_VERSION {
        return Err(GraphError::Version(file.meta.format_version));
    }
    let mut graph = KGraph::new();
    let mut seen: BTreeSet<&str> = BTreeSet::new();
    for node in &file.nodes {
        if !seen.insert(&node.id) {
            return Err(GraphError::DuplicateNode(node.id.clone()));
        }
        let parse_classes = |names: &[String]| -> Result<BTreeSet<ClassId>, GraphError> {
            names
                .iter()
                .map(|c| c.parse::<ClassId>().map_err(|e| GraphError::Parse(e.to_string())))
                .collect()
        };
        graph.insert_node_unchecked(
            NodeId::new(node.id.clone())?,
            parse_classes(&node.classes)?,
            parse_classes(&node.derived_classes)?,
        );
    }
    for edge in &file.edges {
        let rel: RelationId = edge
            .rel
            .parse()
            .map_err(|e: crate::ontology::OntologyError| GraphError::Parse(e.to_string()))?;
        graph.insert_edge_unchecked(EdgeRecord {
            s: NodeId::new(edge.s.clone())?,
            rel,
            o: NodeId::new(edge.o.clone())?,
            attrs: edge.attrs.clone(),
        });
    }
    for data in &file.data {
        let rel: RelationId = data
            .rel
            .parse()
            .map_err(|e: crate::ontology::OntologyError| GraphError::Parse(e.to_string()))?;
        let value = literal_from_json(rel, &data.value)?;
        let provenance = match data.provenance.as_deref() {
            None => Provenance::Asserted,
            Some("system") => Provenance::System,
            Some(other) => {
                return Err(GraphError::Parse(format!(
                    "unknown provenance {other:?} (expected \"system\" or absence)"
                )))
            }
        };
        graph.insert_data_unchecked(DataRecord {
            s: NodeId::new(data.s.clone())?,
            rel,
            value,
            provenance,
        });
    }
    Ok(graph)
}

/// Maps a JSON value to a literal. Strings under a decimal-valued relation
/// parse as decimals when they can; a string that fails to parse is kept as
/// a nominal so validation can report the kind mismatch instead of this
/// loader failing fast.
fn literal_from_json(rel: RelationId, value: &serde_json::Value) -> Result<Literal, GraphError> {
    let expected = match rel.signature().range {
        RangeSpec::Literal(k) => Some(k),
        RangeSpec::Class(_) => None,
    };
    match value {
        serde_json::Value::Bool(b) => Ok(Literal::Boolean(*b)),
        serde_json::Value::String(s) => {
            if expected == Some(LiteralKind::Decimal) {
                if let Ok(d) = Decimal::parse(s) {
                    return Ok(Literal::Decimal(d));
                }
            }
            Ok(Literal::Nominal(s.clone()))
        }
        other => Err(GraphError::Parse(format!(
            "literal values must be JSON booleans or strings, got {other}"
        ))),
    }
}
