//! Structural conformance checks (shapes).
//!
//! A shape is a named list of requirements evaluated against one focus
//! node. Requirements are declarative data — each carries a stable
//! description string that appears verbatim in reports — and are checked
//! in their declared order, with every failing requirement reported.
//!
//! Shapes read **effective** classes (asserted plus derived), so a graph
//! annotated by the reasoner is checked against what it now claims: a node
//! carrying a warranted class, whether asserted by an author or derived,
//! must exhibit the full warrant pattern. The warranted shape's last
//! requirement needs a classification result; checking it without one is
//! an error rather than a silent pass.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::graph::KGraph;
use crate::ontology::{ClassId, RelationId};
use crate::reasoner::Classification;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(into = "String")]
pub enum ShapeId {
    InformationCarrier,
    Measurement,
    Believed,
    Warranted,
}

impl ShapeId {
    pub fn id(self) -> &'static str {
        match self {
            ShapeId::InformationCarrier => "InformationCarrierShape",
            ShapeId::Measurement => "MeasurementShape",
            ShapeId::Believed => "RTBShape",
            ShapeId::Warranted => "RTWShape",
        }
    }

    pub fn all() -> [ShapeId; 4] {
        [
            ShapeId::InformationCarrier,
            ShapeId::Measurement,
            ShapeId::Believed,
            ShapeId::Warranted,
        ]
    }

    /// The shape's requirements in normative order.
    pub fn requirements(self) -> &'static [Requirement] {
        match self {
            ShapeId::InformationCarrier => INFORMATION_CARRIER_REQS,
            ShapeId::Measurement => MEASUREMENT_REQS,
            ShapeId::Believed => BELIEVED_REQS,
            ShapeId::Warranted => WARRANTED_REQS,
        }
    }
}

impl fmt::Display for ShapeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl From<ShapeId> for String {
    fn from(value: ShapeId) -> String {
        value.id().to_owned()
    }
}

/// One requirement: a named test plus the description used in reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Requirement {
    pub description: &'static str,
    test: ReqTest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ReqTest {
    IsInstance(ClassId),
    CarriedBySomeBearer,
    CarrierHasValue,
    DescribedByMeasurement,
    MeasurementCarried,
    MeasurementHasDecimal,
    FusedWithConfidence,
    ConfidenceMeasured,
    OutputOfCognitiveProcess,
    ProducedByProperFunction,
}

static INFORMATION_CARRIER_REQS: &[Requirement] = &[
    Requirement {
        description: "focus is an instance of InformationContentEntity",
        test: ReqTest::IsInstance(ClassId::InformationContentEntity),
    },
    Requirement {
        description: "focus generically depends on some information bearing entity",
        test: ReqTest::CarriedBySomeBearer,
    },
    Requirement {
        description: "some bearer of focus carries a literal value",
        test: ReqTest::CarrierHasValue,
    },
];

static MEASUREMENT_REQS: &[Requirement] = &[
    Requirement {
        description: "focus is described by some measurement information content entity",
        test: ReqTest::DescribedByMeasurement,
    },
    Requirement {
        description: "some measurement describing focus generically depends on a bearer",
        test: ReqTest::MeasurementCarried,
    },
    Requirement {
        description: "some measurement describing focus has a decimal value on its bearer",
        test: ReqTest::MeasurementHasDecimal,
    },
];

static BELIEVED_REQS: &[Requirement] = &[
    Requirement {
        description: "focus is an instance of CognitiveRepresentation",
        test: ReqTest::IsInstance(ClassId::CognitiveRepresentation),
    },
    Requirement {
        description: "focus is fused with some confidence value",
        test: ReqTest::FusedWithConfidence,
    },
    Requirement {
        description: "some confidence value fused with focus conforms to the measurement pattern",
        test: ReqTest::ConfidenceMeasured,
    },
];

// The warranted shape extends the believed shape: its first requirements
// are exactly BELIEVED_REQS, in the same order.
static WARRANTED_REQS: &[Requirement] = &[
    Requirement {
        description: "focus is an instance of CognitiveRepresentation",
        test: ReqTest::IsInstance(ClassId::CognitiveRepresentation),
    },
    Requirement {
        description: "focus is fused with some confidence value",
        test: ReqTest::FusedWithConfidence,
    },
    Requirement {
        description: "some confidence value fused with focus conforms to the measurement pattern",
        test: ReqTest::ConfidenceMeasured,
    },
    Requirement {
        description: "focus is the output of some cognitive process",
        test: ReqTest::OutputOfCognitiveProcess,
    },
    Requirement {
        description: "some producer of focus is properly functioning",
        test: ReqTest::ProducedByProperFunction,
    },
];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ShapeError {
    #[error("shape {0} requires a classification result")]
    MissingClassification(ShapeId),
}

/// Outcome of checking one focus node against one shape.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct ShapeReport {
    pub shape: ShapeId,
    pub focus: String,
    pub conforms: bool,
    /// Descriptions of the failed requirements, in normative order.
    pub violated: Vec<String>,
}

/// Checks one node against one shape. A focus that does not exist in the
/// graph violates every requirement. `classification` is needed only by
/// shapes that consult reasoner output (the warranted shape).
pub fn check_shape(
    graph: &KGraph,
    shape: ShapeId,
    focus: &str,
    classification: Option<&Classification>,
) -> Result<ShapeReport, ShapeError> {
    let requirements = shape.requirements();
    if requirements
        .iter()
        .any(|r| r.test == ReqTest::ProducedByProperFunction)
        && classification.is_none()
    {
        return Err(ShapeError::MissingClassification(shape));
    }
    let mut violated = Vec::new();
    for req in requirements {
        let ok = graph.contains_node(focus) && holds(graph, focus, req.test, classification);
        if !ok {
            violated.push(req.description.to_owned());
        }
    }
    Ok(ShapeReport {
        shape,
        focus: focus.to_owned(),
        conforms: violated.is_empty(),
        violated,
    })
}

/// Checks every candidate node of every shape. Candidates are selected by
/// effective class (believed/warranted shapes) or by participation in the
/// relevant pattern (content entities for the carrier shape, described
/// targets of measurements for the measurement shape). Reports are sorted
/// by shape, then focus, and include conforming nodes.
pub fn check_all(graph: &KGraph, classification: &Classification) -> Vec<ShapeReport> {
    let mut reports = Vec::new();
    for shape in ShapeId::all() {
        for focus in candidates(graph, shape) {
            let report = check_shape(graph, shape, &focus, Some(classification))
                .expect("classification provided");
            reports.push(report);
        }
    }
    reports.sort();
    reports
}

fn candidates(graph: &KGraph, shape: ShapeId) -> Vec<String> {
    let by_class = |class: ClassId| -> Vec<String> {
        graph
            .node_ids()
            .filter(|n| graph.is_instance_of(n.as_str(), class))
            .map(|n| n.as_str().to_owned())
            .collect()
    };
    match shape {
        ShapeId::InformationCarrier => by_class(ClassId::InformationContentEntity),
        ShapeId::Measurement => {
            let targets: std::collections::BTreeSet<String> = graph
                .edges()
                .filter(|e| {
                    e.rel == RelationId::Describes
                        && graph.is_instance_of(
                            e.s.as_str(),
                            ClassId::MeasurementInformationContentEntity,
                        )
                })
                .map(|e| e.o.as_str().to_owned())
                .collect();
            targets.into_iter().collect()
        }
        ShapeId::Believed => by_class(ClassId::RepresentationThatIsBelieved),
        ShapeId::Warranted => by_class(ClassId::RepresentationThatIsWarranted),
    }
}

fn holds(
    graph: &KGraph,
    focus: &str,
    test: ReqTest,
    classification: Option<&Classification>,
) -> bool {
    match test {
        ReqTest::IsInstance(class) => graph.is_instance_of(focus, class),
        ReqTest::CarriedBySomeBearer => bearers(graph, focus).next().is_some(),
        ReqTest::CarrierHasValue => bearers(graph, focus).any(|b| has_any_literal(graph, b)),
        ReqTest::DescribedByMeasurement => measurements(graph, focus).next().is_some(),
        ReqTest::MeasurementCarried => measurements(graph, focus)
            .any(|m| graph.objects_of(m, RelationId::GenericallyDependsOn).next().is_some()),
        ReqTest::MeasurementHasDecimal => measurements(graph, focus).any(|m| {
            graph
                .objects_of(m, RelationId::GenericallyDependsOn)
                .any(|b| {
                    graph
                        .data_values(b.as_str(), RelationId::HasDecimalValue)
                        .next()
                        .is_some()
                })
        }),
        ReqTest::FusedWithConfidence => confidences(graph, focus).next().is_some(),
        ReqTest::ConfidenceMeasured => confidences(graph, focus).any(|cv| {
            MEASUREMENT_REQS
                .iter()
                .all(|req| holds(graph, cv, req.test, classification))
        }),
        ReqTest::OutputOfCognitiveProcess => graph
            .subjects_of(RelationId::HasOutput, focus)
            .any(|p| graph.is_instance_of(p.as_str(), ClassId::CognitiveProcess)),
        ReqTest::ProducedByProperFunction => {
            let classification = classification.expect("checked by caller");
            graph
                .subjects_of(RelationId::HasOutput, focus)
                .any(|p| classification.ppcf.contains(p))
        }
    }
}

/// Information bearing entities that carry `focus`.
fn bearers<'a>(graph: &'a KGraph, focus: &'a str) -> impl Iterator<Item = &'a str> + 'a {
    graph
        .objects_of(focus, RelationId::GenericallyDependsOn)
        .map(|n| n.as_str())
        .filter(|b| graph.is_instance_of(b, ClassId::InformationBearingEntity))
}

/// Measurement content entities that describe `focus`.
fn measurements<'a>(graph: &'a KGraph, focus: &'a str) -> impl Iterator<Item = &'a str> + 'a {
    graph
        .subjects_of(RelationId::Describes, focus)
        .map(|n| n.as_str())
        .filter(|m| graph.is_instance_of(m, ClassId::MeasurementInformationContentEntity))
}

/// Confidence values fused with `focus`.
fn confidences<'a>(graph: &'a KGraph, focus: &'a str) -> impl Iterator<Item = &'a str> + 'a {
    graph
        .objects_of(focus, RelationId::FusedWith)
        .map(|n| n.as_str())
        .filter(|cv| graph.is_instance_of(cv, ClassId::ConfidenceValue))
}

fn has_any_literal(graph: &KGraph, node: &str) -> bool {
    [
        RelationId::HasBooleanValue,
        RelationId::HasNominalValue,
        RelationId::HasDecimalValue,
    ]
    .into_iter()
    .any(|rel| graph.data_values(node, rel).next().is_some())
}
