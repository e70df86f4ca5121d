//! The knowledge-graph store.
//!
//! A [`KGraph`] holds three kinds of facts:
//!
//! * **nodes** — an id plus a set of asserted classes (and, after
//!   annotation, a disjoint set of derived classes);
//! * **edges** — `subject --relation--> object` links between nodes, with an
//!   optional string attribute map (`concretizes` requires a `mode`);
//! * **data** — `subject --relation--> literal` assertions carrying a
//!   boolean, nominal (string), or exact decimal value.
//!
//! All collections are ordered sets, so iteration order, equality, and
//! serialized output are independent of insertion order. The store offers
//! two disciplines: the strict mutation API (`add_*`) rejects ill-typed
//! facts up front, while the interchange loaders in [`json`] and
//! [`triples`] accept anything lexically well-formed and leave semantic
//! problems to [`KGraph::validate_wellformed`], which reports every
//! violation rather than stopping at the first.

pub mod json;
pub mod pattern;
pub mod triples;

use std::borrow::Borrow;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::decimal::Decimal;
use crate::ontology::{ClassId, LiteralKind, RangeSpec, RelationId, Taxonomy};

/// Identifier of a graph node.
///
/// Ids are non-empty ASCII-graphic strings without `<`, `>`, `"`, or `\`
/// (so they embed directly in the triples format) and may not start with
/// the reserved blank-node prefix `_:`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(String);

impl NodeId {
    pub fn new(id: impl Into<String>) -> Result<NodeId, GraphError> {
        let id = id.into();
        let ok = !id.is_empty()
            && !id.starts_with("_:")
            && id
                .chars()
                .all(|c| c.is_ascii_graphic() && !matches!(c, '<' | '>' | '"' | '\\'));
        if ok {
            Ok(NodeId(id))
        } else {
            Err(GraphError::InvalidNodeId(id))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Borrow<str> for NodeId {
    fn borrow(&self) -> &str {
        &self.0
    }
}

/// A literal value in a data assertion.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Literal {
    Boolean(bool),
    Nominal(String),
    Decimal(Decimal),
}

impl Literal {
    pub fn kind(&self) -> LiteralKind {
        match self {
            Literal::Boolean(_) => LiteralKind::Boolean,
            Literal::Nominal(_) => LiteralKind::Nominal,
            Literal::Decimal(_) => LiteralKind::Decimal,
        }
    }

    pub fn nominal(s: impl Into<String>) -> Literal {
        Literal::Nominal(s.into())
    }

    pub fn as_nominal(&self) -> Option<&str> {
        match self {
            Literal::Nominal(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_decimal(&self) -> Option<&Decimal> {
        match self {
            Literal::Decimal(d) => Some(d),
            _ => None,
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Literal::Boolean(b) => write!(f, "{b}"),
            Literal::Nominal(s) => write!(f, "{s:?}"),
            Literal::Decimal(d) => write!(f, "{d}"),
        }
    }
}

/// Origin of a data assertion: written by the author of the graph, or by
/// the reasoner during annotation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub enum Provenance {
    #[default]
    Asserted,
    System,
}

/// One `subject --relation--> object` link.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeRecord {
    pub s: NodeId,
    pub rel: RelationId,
    pub o: NodeId,
    pub attrs: BTreeMap<String, String>,
}

/// One `subject --relation--> literal` assertion.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DataRecord {
    pub s: NodeId,
    pub rel: RelationId,
    pub value: Literal,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct NodeRecord {
    asserted: BTreeSet<ClassId>,
    derived: BTreeSet<ClassId>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("invalid node id {0:?}")]
    InvalidNodeId(String),
    #[error("unknown node {0:?}")]
    UnknownNode(String),
    #[error("duplicate node {0:?}")]
    DuplicateNode(String),
    #[error("relation {rel} carries a literal and cannot appear in an edge")]
    DataRelationInEdge { rel: RelationId },
    #[error("relation {rel} links nodes and cannot appear in a data assertion")]
    NodeRelationInData { rel: RelationId },
    #[error("subject {subject} of {rel} is not an instance of {expected}")]
    DomainViolation {
        subject: String,
        rel: RelationId,
        expected: ClassId,
    },
    #[error("object {object} of {rel} is not an instance of {expected}")]
    RangeViolation {
        object: String,
        rel: RelationId,
        expected: ClassId,
    },
    #[error("relation {rel} requires attribute {attr:?}")]
    MissingAttr { rel: RelationId, attr: &'static str },
    #[error("attribute {attr:?} of {rel} has disallowed value {value:?}")]
    BadAttrValue {
        rel: RelationId,
        attr: String,
        value: String,
    },
    #[error("relation {rel} does not take attribute {attr:?}")]
    UnknownAttr { rel: RelationId, attr: String },
    #[error("relation {rel} expects a {expected:?} literal, got {got:?}")]
    LiteralKindMismatch {
        rel: RelationId,
        expected: LiteralKind,
        got: LiteralKind,
    },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unsupported format version {0:?} (expected \"1\")")]
    Version(String),
}

/// One wellformedness problem found by [`KGraph::validate_wellformed`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    /// Node the problem is anchored to (an edge's subject, a data record's
    /// subject, or a process on a cycle).
    pub subject: String,
    pub detail: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    Domain,
    Range,
    MissingAttr,
    AttrValue,
    UnknownAttr,
    LiteralKind,
    DanglingRef,
    EdgeRelationKind,
    DataRelationKind,
    PipelineCycle,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let id = match self {
            ViolationKind::Domain => "domain",
            ViolationKind::Range => "range",
            ViolationKind::MissingAttr => "missing_attr",
            ViolationKind::AttrValue => "attr_value",
            ViolationKind::UnknownAttr => "unknown_attr",
            ViolationKind::LiteralKind => "literal_kind",
            ViolationKind::DanglingRef => "dangling_ref",
            ViolationKind::EdgeRelationKind => "edge_relation_kind",
            ViolationKind::DataRelationKind => "data_relation_kind",
            ViolationKind::PipelineCycle => "pipeline_cycle",
        };
        f.write_str(id)
    }
}

/// The graph store. See the module docs for the fact kinds and disciplines.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct KGraph {
    nodes: BTreeMap<NodeId, NodeRecord>,
    edges: BTreeSet<EdgeRecord>,
    data: BTreeSet<DataRecord>,
}

impl KGraph {
    pub fn new() -> KGraph {
        KGraph::default()
    }

    // ------------------------------------------------------------------
    // Strict mutation API: every fact is checked before insertion.
    // ------------------------------------------------------------------

    /// Creates `id` or extends an existing node's asserted classes.
    pub fn add_node(
        &mut self,
        id: impl Into<String>,
        classes: impl IntoIterator<Item = ClassId>,
    ) -> Result<NodeId, GraphError> {
        let id = NodeId::new(id)?;
        let record = self.nodes.entry(id.clone()).or_default();
        record.asserted.extend(classes);
        Ok(id)
    }

    /// Adds an edge after checking the relation signature: the relation must
    /// link nodes, both endpoints must exist, the subject must be an
    /// instance of the domain class, the object an instance of the range
    /// class, and attributes must match the signature. Symmetric relations
    /// are stored with endpoints in ascending order.
    pub fn add_edge(
        &mut self,
        s: &str,
        rel: RelationId,
        o: &str,
        attrs: impl IntoIterator<Item = (String, String)>,
    ) -> Result<(), GraphError> {
        let sig = rel.signature();
        let range_class = match sig.range {
            RangeSpec::Class(c) => c,
            RangeSpec::Literal(_) => return Err(GraphError::DataRelationInEdge { rel }),
        };
        if !self.nodes.contains_key(s) {
            return Err(GraphError::UnknownNode(s.to_owned()));
        }
        if !self.nodes.contains_key(o) {
            return Err(GraphError::UnknownNode(o.to_owned()));
        }
        if !self.is_instance_of(s, sig.domain) {
            return Err(GraphError::DomainViolation {
                subject: s.to_owned(),
                rel,
                expected: sig.domain,
            });
        }
        if !self.is_instance_of(o, range_class) {
            return Err(GraphError::RangeViolation {
                object: o.to_owned(),
                rel,
                expected: range_class,
            });
        }
        let attrs: BTreeMap<String, String> = attrs.into_iter().collect();
        check_attrs(rel, &attrs).map_err(|v| match v {
            AttrProblem::Missing(attr) => GraphError::MissingAttr { rel, attr },
            AttrProblem::BadValue(attr, value) => GraphError::BadAttrValue { rel, attr, value },
            AttrProblem::Unknown(attr) => GraphError::UnknownAttr { rel, attr },
        })?;
        let (s, o) = orient(sig.symmetric, NodeId::new(s)?, NodeId::new(o)?);
        self.edges.insert(EdgeRecord { s, rel, o, attrs });
        Ok(())
    }

    /// Adds a data assertion after checking that the relation carries a
    /// literal of the value's kind and the subject exists. Literal-carrying
    /// relations are deliberately not domain-checked: values may be
    /// externalized onto any node (e.g. representation content).
    pub fn add_data(&mut self, s: &str, rel: RelationId, value: Literal) -> Result<(), GraphError> {
        self.add_data_with_provenance(s, rel, value, Provenance::Asserted)
    }

    pub fn add_data_with_provenance(
        &mut self,
        s: &str,
        rel: RelationId,
        value: Literal,
        provenance: Provenance,
    ) -> Result<(), GraphError> {
        let expected = match rel.signature().range {
            RangeSpec::Literal(k) => k,
            RangeSpec::Class(_) => return Err(GraphError::NodeRelationInData { rel }),
        };
        if !self.nodes.contains_key(s) {
            return Err(GraphError::UnknownNode(s.to_owned()));
        }
        if value.kind() != expected {
            return Err(GraphError::LiteralKindMismatch {
                rel,
                expected,
                got: value.kind(),
            });
        }
        self.data.insert(DataRecord {
            s: NodeId::new(s)?,
            rel,
            value,
            provenance,
        });
        Ok(())
    }

    pub fn remove_node(&mut self, id: &str) -> bool {
        if self.nodes.remove(id).is_none() {
            return false;
        }
        self.edges
            .retain(|e| e.s.as_str() != id && e.o.as_str() != id);
        self.data.retain(|d| d.s.as_str() != id);
        true
    }

    pub fn remove_edge(&mut self, edge: &EdgeRecord) -> bool {
        self.edges.remove(edge)
    }

    pub fn remove_data(&mut self, record: &DataRecord) -> bool {
        self.data.remove(record)
    }

    /// Records a class derived by the reasoner. The node must exist.
    pub fn add_derived_class(&mut self, id: &str, class: ClassId) -> Result<(), GraphError> {
        match self.nodes.get_mut(id) {
            Some(rec) => {
                rec.derived.insert(class);
                Ok(())
            }
            None => Err(GraphError::UnknownNode(id.to_owned())),
        }
    }

    // ------------------------------------------------------------------
    // Unchecked insertion, used by the interchange loaders. Ids and
    // vocabulary are still validated (those are format-level rules);
    // semantic checks are deferred to validate_wellformed.
    // ------------------------------------------------------------------

    pub(crate) fn insert_node_unchecked(
        &mut self,
        id: NodeId,
        asserted: BTreeSet<ClassId>,
        derived: BTreeSet<ClassId>,
    ) {
        let record = self.nodes.entry(id).or_default();
        record.asserted.extend(asserted);
        record.derived.extend(derived);
    }

    pub(crate) fn insert_edge_unchecked(&mut self, edge: EdgeRecord) {
        let EdgeRecord { s, rel, o, attrs } = edge;
        let (s, o) = orient(rel.signature().symmetric, s, o);
        self.edges.insert(EdgeRecord { s, rel, o, attrs });
    }

    pub(crate) fn insert_data_unchecked(&mut self, record: DataRecord) {
        self.data.insert(record);
    }

    // ------------------------------------------------------------------
    // Read API.
    // ------------------------------------------------------------------

    pub fn contains_node(&self, id: &str) -> bool {
        self.nodes.contains_key(id)
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn data_count(&self) -> usize {
        self.data.len()
    }

    pub fn node_ids(&self) -> impl Iterator<Item = &NodeId> {
        self.nodes.keys()
    }

    pub fn asserted_classes(&self, id: &str) -> impl Iterator<Item = ClassId> + '_ {
        self.nodes
            .get(id)
            .into_iter()
            .flat_map(|r| r.asserted.iter().copied())
    }

    pub fn derived_classes(&self, id: &str) -> impl Iterator<Item = ClassId> + '_ {
        self.nodes
            .get(id)
            .into_iter()
            .flat_map(|r| r.derived.iter().copied())
    }

    /// Asserted and derived classes together.
    pub fn effective_classes(&self, id: &str) -> impl Iterator<Item = ClassId> + '_ {
        self.asserted_classes(id).chain(self.derived_classes(id))
    }

    /// True when any effective class of `id` is a subclass of `class`
    /// (class membership is inherited up the taxonomy).
    pub fn is_instance_of(&self, id: &str, class: ClassId) -> bool {
        let t = Taxonomy::builtin();
        self.effective_classes(id).any(|c| t.is_subclass_of(c, class))
    }

    /// Like [`KGraph::is_instance_of`] but ignoring derived classes; the
    /// reasoner works from asserted facts only.
    pub fn is_asserted_instance_of(&self, id: &str, class: ClassId) -> bool {
        let t = Taxonomy::builtin();
        self.asserted_classes(id).any(|c| t.is_subclass_of(c, class))
    }

    pub fn edges(&self) -> impl Iterator<Item = &EdgeRecord> {
        self.edges.iter()
    }

    pub fn data(&self) -> impl Iterator<Item = &DataRecord> {
        self.data.iter()
    }

    /// Outgoing edges of `s` with relation `rel`. For symmetric relations
    /// this scans both stored orientations.
    pub fn edges_from<'a>(
        &'a self,
        s: &'a str,
        rel: RelationId,
    ) -> impl Iterator<Item = &'a EdgeRecord> + 'a {
        let symmetric = rel.signature().symmetric;
        self.edges
            .iter()
            .filter(move |e| {
                e.rel == rel
                    && (e.s.as_str() == s || (symmetric && e.o.as_str() == s))
            })
    }

    /// Objects reachable from `s` via `rel` (for symmetric relations, the
    /// other endpoint).
    pub fn objects_of<'a>(
        &'a self,
        s: &'a str,
        rel: RelationId,
    ) -> impl Iterator<Item = &'a NodeId> + 'a {
        self.edges_from(s, rel)
            .map(move |e| if e.s.as_str() == s { &e.o } else { &e.s })
    }

    /// Subjects of `rel` edges pointing at `o`.
    pub fn subjects_of<'a>(
        &'a self,
        rel: RelationId,
        o: &'a str,
    ) -> impl Iterator<Item = &'a NodeId> + 'a {
        let symmetric = rel.signature().symmetric;
        self.edges
            .iter()
            .filter(move |e| {
                e.rel == rel
                    && (e.o.as_str() == o || (symmetric && e.s.as_str() == o))
            })
            .map(move |e| if e.o.as_str() == o { &e.s } else { &e.o })
    }

    /// Literal values asserted on `s` via `rel` (any provenance).
    pub fn data_values<'a>(
        &'a self,
        s: &'a str,
        rel: RelationId,
    ) -> impl Iterator<Item = &'a Literal> + 'a {
        self.data
            .iter()
            .filter(move |d| d.rel == rel && d.s.as_str() == s)
            .map(|d| &d.value)
    }

    // ------------------------------------------------------------------
    // Wellformedness.
    // ------------------------------------------------------------------

    /// Checks every edge and data assertion against the relation
    /// signatures and the process pipeline for cycles, and reports all
    /// problems found. A graph built exclusively through the strict API is
    /// wellformed apart from possible pipeline cycles.
    pub fn validate_wellformed(&self) -> Vec<Violation> {
        let mut out = self.validate_wellformed_local();
        if let Err(cycle) = self.pipeline_order() {
            let members = cycle
                .iter()
                .map(|n| n.as_str())
                .collect::<Vec<_>>()
                .join(", ");
            out.push(Violation {
                kind: ViolationKind::PipelineCycle,
                subject: cycle[0].as_str().to_owned(),
                detail: format!("process pipeline contains a cycle through: {members}"),
            });
        }
        out.sort();
        out
    }

    /// The per-fact checks of [`KGraph::validate_wellformed`], without the
    /// pipeline cycle check (a cycle is the reasoner's concern when
    /// classification, rather than validation, was requested).
    pub fn validate_wellformed_local(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for edge in &self.edges {
            let sig = edge.rel.signature();
            let range_class = match sig.range {
                RangeSpec::Class(c) => c,
                RangeSpec::Literal(_) => {
                    out.push(Violation {
                        kind: ViolationKind::EdgeRelationKind,
                        subject: edge.s.as_str().to_owned(),
                        detail: format!(
                            "relation {} carries a literal and cannot appear in an edge (object {})",
                            edge.rel, edge.o
                        ),
                    });
                    continue;
                }
            };
            let mut dangling = false;
            for end in [&edge.s, &edge.o] {
                if !self.nodes.contains_key(end.as_str()) {
                    dangling = true;
                    out.push(Violation {
                        kind: ViolationKind::DanglingRef,
                        subject: end.as_str().to_owned(),
                        detail: format!(
                            "edge {} --{}--> {} references a node that does not exist",
                            edge.s, edge.rel, edge.o
                        ),
                    });
                }
            }
            if !dangling {
                if !self.is_instance_of(edge.s.as_str(), sig.domain) {
                    out.push(Violation {
                        kind: ViolationKind::Domain,
                        subject: edge.s.as_str().to_owned(),
                        detail: format!(
                            "subject of {} must be an instance of {}",
                            edge.rel, sig.domain
                        ),
                    });
                }
                if !self.is_instance_of(edge.o.as_str(), range_class) {
                    out.push(Violation {
                        kind: ViolationKind::Range,
                        subject: edge.s.as_str().to_owned(),
                        detail: format!(
                            "object {} of {} must be an instance of {}",
                            edge.o, edge.rel, range_class
                        ),
                    });
                }
            }
            if let Err(problem) = check_attrs(edge.rel, &edge.attrs) {
                let (kind, detail) = match problem {
                    AttrProblem::Missing(attr) => (
                        ViolationKind::MissingAttr,
                        format!("edge {} --{}--> {} requires attribute {attr:?}", edge.s, edge.rel, edge.o),
                    ),
                    AttrProblem::BadValue(attr, value) => (
                        ViolationKind::AttrValue,
                        format!(
                            "attribute {attr:?} of {} has disallowed value {value:?}",
                            edge.rel
                        ),
                    ),
                    AttrProblem::Unknown(attr) => (
                        ViolationKind::UnknownAttr,
                        format!("relation {} does not take attribute {attr:?}", edge.rel),
                    ),
                };
                out.push(Violation {
                    kind,
                    subject: edge.s.as_str().to_owned(),
                    detail,
                });
            }
        }
        for record in &self.data {
            match record.rel.signature().range {
                RangeSpec::Literal(expected) => {
                    if record.value.kind() != expected {
                        out.push(Violation {
                            kind: ViolationKind::LiteralKind,
                            subject: record.s.as_str().to_owned(),
                            detail: format!(
                                "{} expects a {} literal, got {} ({})",
                                record.rel,
                                expected.id(),
                                record.value.kind().id(),
                                record.value
                            ),
                        });
                    }
                }
                RangeSpec::Class(_) => {
                    out.push(Violation {
                        kind: ViolationKind::DataRelationKind,
                        subject: record.s.as_str().to_owned(),
                        detail: format!(
                            "relation {} links nodes and cannot carry literal {}",
                            record.rel, record.value
                        ),
                    });
                }
            }
            if !self.nodes.contains_key(record.s.as_str()) {
                out.push(Violation {
                    kind: ViolationKind::DanglingRef,
                    subject: record.s.as_str().to_owned(),
                    detail: format!(
                        "data assertion {} --{}--> {} references a node that does not exist",
                        record.s, record.rel, record.value
                    ),
                });
            }
        }
        out.sort();
        out
    }

    // ------------------------------------------------------------------
    // Pipeline ordering.
    // ------------------------------------------------------------------

    /// Orders the graph's process nodes so that producers precede
    /// consumers: `P` precedes `Q` when some artifact is `has_output` of
    /// `P` and `has_input` of `Q`. Returns the participants of a cycle as
    /// the error value. Process membership is read from asserted classes.
    pub fn pipeline_order(&self) -> Result<Vec<NodeId>, Vec<NodeId>> {
        let processes: BTreeSet<&NodeId> = self
            .nodes
            .keys()
            .filter(|id| self.is_asserted_instance_of(id.as_str(), ClassId::Process))
            .collect();
        // producer_of[artifact] and consumers keyed by artifact node.
        let mut producers: BTreeMap<&NodeId, BTreeSet<&NodeId>> = BTreeMap::new();
        let mut successors: BTreeMap<&NodeId, BTreeSet<&NodeId>> = BTreeMap::new();
        let mut indegree: BTreeMap<&NodeId, usize> = processes.iter().map(|p| (*p, 0)).collect();
        for edge in &self.edges {
            if edge.rel == RelationId::HasOutput && processes.contains(&edge.s) {
                producers.entry(&edge.o).or_default().insert(&edge.s);
            }
        }
        for edge in &self.edges {
            if edge.rel != RelationId::HasInput || !processes.contains(&edge.s) {
                continue;
            }
            if let Some(prods) = producers.get(&edge.o) {
                for p in prods {
                    if *p != &edge.s && successors.entry(p).or_default().insert(&edge.s) {
                        *indegree.get_mut(&edge.s).expect("consumer is a process") += 1;
                    }
                }
            }
        }
        // Self-loops (a process consuming its own output) are cycles too.
        for edge in &self.edges {
            if edge.rel == RelationId::HasInput
                && processes.contains(&edge.s)
                && producers.get(&edge.o).is_some_and(|ps| ps.contains(&edge.s))
            {
                return Err(vec![edge.s.clone()]);
            }
        }
        let mut ready: BTreeSet<&NodeId> = indegree
            .iter()
            .filter(|(_, d)| **d == 0)
            .map(|(p, _)| *p)
            .collect();
        let mut order = Vec::with_capacity(processes.len());
        while let Some(p) = ready.pop_first() {
            order.push(p.clone());
            if let Some(next) = successors.get(p) {
                for q in next {
                    let d = indegree.get_mut(q).expect("successor is a process");
                    *d -= 1;
                    if *d == 0 {
                        ready.insert(q);
                    }
                }
            }
        }
        if order.len() == processes.len() {
            Ok(order)
        } else {
            let stuck: Vec<NodeId> = indegree
                .iter()
                .filter(|(_, d)| **d > 0)
                .map(|(p, _)| (*p).clone())
                .collect();
            Err(stuck)
        }
    }

    /// Hash of the asserted content (nodes with asserted classes, edges,
    /// and author-asserted data). Derived classes and system-provenance
    /// annotations do not contribute, so annotating a graph does not change
    /// its fingerprint. Used to detect stale classification results.
    pub fn fingerprint(&self) -> u64 {
        // FNV-1a, 64-bit.
        let mut hash: u64 = 0xcbf29ce484222325;
        let mut feed = |bytes: &[u8]| {
            for b in bytes {
                hash ^= u64::from(*b);
                hash = hash.wrapping_mul(0x100000001b3);
            }
            hash ^= 0xff;
            hash = hash.wrapping_mul(0x100000001b3);
        };
        feed(b"nodes");
        for (id, rec) in &self.nodes {
            feed(id.as_str().as_bytes());
            for class in &rec.asserted {
                feed(class.id().as_bytes());
            }
        }
        feed(b"edges");
        for e in &self.edges {
            feed(e.s.as_str().as_bytes());
            feed(e.rel.id().as_bytes());
            feed(e.o.as_str().as_bytes());
            for (k, v) in &e.attrs {
                feed(k.as_bytes());
                feed(v.as_bytes());
            }
        }
        feed(b"data");
        for d in &self.data {
            if d.provenance == Provenance::System {
                continue;
            }
            feed(d.s.as_str().as_bytes());
            feed(d.rel.id().as_bytes());
            feed(d.value.kind().id().as_bytes());
            match &d.value {
                Literal::Boolean(b) => feed(if *b { b"true" } else { b"false" }),
                Literal::Nominal(s) => feed(s.as_bytes()),
                Literal::Decimal(dec) => feed(dec.as_str().as_bytes()),
            }
        }
        hash
    }
}

fn orient(symmetric: bool, s: NodeId, o: NodeId) -> (NodeId, NodeId) {
    if symmetric && o < s {
        (o, s)
    } else {
        (s, o)
    }
}

enum AttrProblem {
    Missing(&'static str),
    BadValue(String, String),
    Unknown(String),
}

fn check_attrs(rel: RelationId, attrs: &BTreeMap<String, String>) -> Result<(), AttrProblem> {
    let sig = rel.signature();
    match sig.required_attr {
        Some((name, allowed)) => {
            for (k, v) in attrs {
                if k != name {
                    return Err(AttrProblem::Unknown(k.clone()));
                }
                if !allowed.contains(&v.as_str()) {
                    return Err(AttrProblem::BadValue(k.clone(), v.clone()));
                }
            }
            if !attrs.contains_key(name) {
                return Err(AttrProblem::Missing(name));
            }
            Ok(())
        }
        None => match attrs.keys().next() {
            Some(k) => Err(AttrProblem::Unknown(k.clone())),
            None => Ok(()),
        },
    }
}
