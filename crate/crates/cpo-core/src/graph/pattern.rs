//! Conjunctive pattern matching over a graph.
//!
//! A [`Query`] is a conjunction of triple patterns whose node positions are
//! either fixed ids or named variables. Matching returns every variable
//! binding under which all patterns hold, as a sorted, duplicate-free list
//! — the result is a deterministic function of the graph's content.
//! Variables range over nodes only; literal positions are matched by exact
//! value (or left unconstrained).

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::{KGraph, Literal, NodeId};
use crate::ontology::{ClassId, RangeSpec, RelationId};

/// A node position in a pattern: a variable to bind or a fixed id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Term {
    Var(String),
    Node(String),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn node(id: impl Into<String>) -> Term {
        Term::Node(id.into())
    }
}

/// One conjunct of a query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TriplePattern {
    /// The term is an instance of `class` (inherited: any effective class
    /// at or below `class` matches).
    InstanceOf { term: Term, class: ClassId },
    /// An edge with this relation links `s` to `o`; for symmetric
    /// relations both orientations match. `mode` constrains the edge's
    /// `mode` attribute when present.
    Edge {
        s: Term,
        rel: RelationId,
        o: Term,
        mode: Option<String>,
    },
    /// A data assertion on `s`; `value` of `None` matches any literal.
    Data {
        s: Term,
        rel: RelationId,
        value: Option<Literal>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Query {
    pub patterns: Vec<TriplePattern>,
}

impl Query {
    pub fn new(patterns: Vec<TriplePattern>) -> Query {
        Query { patterns }
    }
}

/// A satisfying assignment of variable names to node ids.
pub type Bindings = BTreeMap<String, NodeId>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PatternError {
    #[error("edge pattern uses literal-carrying relation {0}")]
    LiteralRelationInEdge(RelationId),
    #[error("data pattern uses node-linking relation {0}")]
    NodeRelationInData(RelationId),
    #[error("data pattern value kind {got} does not match relation {rel}")]
    ValueKindMismatch { rel: RelationId, got: &'static str },
    #[error("mode constraint on relation {0}, which takes no mode attribute")]
    ModeOnAttrlessRelation(RelationId),
    #[error("variable names must be non-empty")]
    EmptyVariable,
    #[error("invalid node id {0:?} in pattern")]
    InvalidNodeId(String),
}

/// Evaluates `query` against `graph`.
pub fn match_query(graph: &KGraph, query: &Query) -> Result<Vec<Bindings>, PatternError> {
    for pattern in &query.patterns {
        check_pattern(pattern)?;
    }
    let mut results: BTreeSet<Bindings> = BTreeSet::new();
    solve(graph, &query.patterns, Bindings::new(), &mut results);
    Ok(results.into_iter().collect())
}

fn check_pattern(pattern: &TriplePattern) -> Result<(), PatternError> {
    let check_term = |t: &Term| match t {
        Term::Var(name) if name.is_empty() => Err(PatternError::EmptyVariable),
        Term::Var(_) => Ok(()),
        Term::Node(id) => NodeId::new(id.clone())
            .map(|_| ())
            .map_err(|_| PatternError::InvalidNodeId(id.clone())),
    };
    match pattern {
        TriplePattern::InstanceOf { term, .. } => check_term(term),
        TriplePattern::Edge { s, rel, o, mode } => {
            if rel.is_data_relation() {
                return Err(PatternError::LiteralRelationInEdge(*rel));
            }
            if mode.is_some() && rel.signature().required_attr.map(|(n, _)| n) != Some("mode") {
                return Err(PatternError::ModeOnAttrlessRelation(*rel));
            }
            check_term(s)?;
            check_term(o)
        }
        TriplePattern::Data { s, rel, value } => {
            let expected = match rel.signature().range {
                RangeSpec::Literal(k) => k,
                RangeSpec::Class(_) => return Err(PatternError::NodeRelationInData(*rel)),
            };
            if let Some(v) = value {
                if v.kind() != expected {
                    return Err(PatternError::ValueKindMismatch {
                        rel: *rel,
                        got: v.kind().id(),
                    });
                }
            }
            check_term(s)
        }
    }
}

fn resolve<'a>(term: &'a Term, binding: &'a Bindings) -> Option<&'a str> {
    match term {
        Term::Node(id) => Some(id),
        Term::Var(name) => binding.get(name).map(|n| n.as_str()),
    }
}

/// Extends `binding` so that `term` denotes `id`; `None` on conflict.
fn unify(term: &Term, id: &str, binding: &Bindings) -> Option<Bindings> {
    match term {
        Term::Node(fixed) => (fixed == id).then(|| binding.clone()),
        Term::Var(name) => match binding.get(name) {
            Some(bound) => (bound.as_str() == id).then(|| binding.clone()),
            None => {
                let mut next = binding.clone();
                next.insert(name.clone(), NodeId::new(id).ok()?);
                Some(next)
            }
        },
    }
}

fn solve(
    graph: &KGraph,
    patterns: &[TriplePattern],
    binding: Bindings,
    out: &mut BTreeSet<Bindings>,
) {
    let Some((first, rest)) = patterns.split_first() else {
        out.insert(binding);
        return;
    };
    match first {
        TriplePattern::InstanceOf { term, class } => match resolve(term, &binding) {
            Some(id) => {
                if graph.is_instance_of(id, *class) {
                    solve(graph, rest, binding, out);
                }
            }
            None => {
                for id in graph.node_ids() {
                    if graph.is_instance_of(id.as_str(), *class) {
                        if let Some(next) = unify(term, id.as_str(), &binding) {
                            solve(graph, rest, next, out);
                        }
                    }
                }
            }
        },
        TriplePattern::Edge { s, rel, o, mode } => {
            let symmetric = rel.signature().symmetric;
            for edge in graph.edges() {
                if edge.rel != *rel {
                    continue;
                }
                if let Some(want) = mode {
                    if edge.attrs.get("mode") != Some(want) {
                        continue;
                    }
                }
                let mut orientations = vec![(&edge.s, &edge.o)];
                if symmetric && edge.s != edge.o {
                    orientations.push((&edge.o, &edge.s));
                }
                for (a, b) in orientations {
                    if let Some(next) = unify(s, a.as_str(), &binding) {
                        if let Some(next) = unify(o, b.as_str(), &next) {
                            solve(graph, rest, next, out);
                        }
                    }
                }
            }
        }
        TriplePattern::Data { s, rel, value } => {
            for record in graph.data() {
                if record.rel != *rel {
                    continue;
                }
                if let Some(want) = value {
                    if &record.value != want {
                        continue;
                    }
                }
                if let Some(next) = unify(s, record.s.as_str(), &binding) {
                    solve(graph, rest, next, out);
                }
            }
        }
    }
}
