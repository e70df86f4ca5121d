//! Typed knowledge-graph engine for cognitive-process workflow graphs.
//!
//! The crate models analyst workflows as graphs over a fixed ontology of
//! cognitive-process classes: carriers and content (information bearing
//! entities, information content entities), mental qualities (cognitive
//! representations, confidence values), and the processes that produce them.
//! On top of the graph store it provides:
//!
//! * [`ontology`] — the built-in class taxonomy and typed relation vocabulary;
//! * [`graph`] — the graph store, pattern matching, JSON interchange, and a
//!   line-oriented triples format;
//! * [`shapes`] — structural conformance checks for common node patterns;
//! * [`reasoner`] — classification of belief and warrant status
//!   (believed / properly-functioning / warranted / mere guess) by a
//!   stratified fixed-point pass over the process pipeline;
//! * [`tagger`] — turns analyst event logs into annotated workflow graphs;
//! * [`analytics`] — outcome statistics, step-mix regression, and unit
//!   comparison over tagged workflow records;
//! * [`synthgen`] — deterministic synthetic corpus generation for testing
//!   the full pipeline end to end.
//!
//! All public containers iterate in a canonical order, and every
//! serialization is byte-stable for a given input.

pub mod analytics;
pub mod decimal;
pub mod graph;
pub mod ontology;
pub mod reasoner;
pub mod shapes;
pub mod synthgen;
pub mod tagger;

pub use decimal::{Decimal, DecimalError};
pub use graph::{
    DataRecord, EdgeRecord, GraphError, KGraph, Literal, NodeId, Provenance, Violation,
    ViolationKind,
};
pub use ontology::{ClassId, LiteralKind, OntologyError, RangeSpec, RelationId, RelationSig, Taxonomy};
pub use reasoner::{
    Classification, ClassifyOptions, DerivationTree, ReasonerError, VeridicalityMarks,
    VettingRecord,
};
pub use shapes::{ShapeError, ShapeId, ShapeReport};
pub use analytics::{AnalyzeReport, Regression, TypeStats, UnitComparison};
pub use synthgen::{GenOutput, GenSpec, Lcg};
pub use tagger::{
    Event, MappingTable, SkippedEvent, TagResult, WorkflowRecord, tag_events,
};
