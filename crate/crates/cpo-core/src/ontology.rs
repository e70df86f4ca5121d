//! The built-in class taxonomy and relation vocabulary.
//!
//! The taxonomy is a fixed, compiled-in hierarchy of 29 classes rooted at
//! `Entity`, covering material carriers, information content, mental
//! qualities, and cognitive processes. Three classes — `Representation that
//! is Believed`, `Representation that is Warranted`, and `Process of Proper
//! Cognitive Functioning` — are *defined classes*: membership is computed by
//! the reasoner rather than asserted freely (asserting them is still legal
//! input; the classifier treats such assertions as given facts).
//!
//! Relations carry typed signatures: a domain class for the subject and
//! either a range class for node objects or a literal kind for data
//! assertions. The taxonomy is immutable after load and safe to read from
//! any number of threads.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OntologyError {
    #[error("unknown class id {0:?}")]
    UnknownClass(String),
    #[error("unknown relation id {0:?}")]
    UnknownRelation(String),
}

/// Every class in the built-in taxonomy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum ClassId {
    Entity,
    Continuant,
    Occurrent,
    IndependentContinuant,
    SpecificallyDependentContinuant,
    GenericallyDependentContinuant,
    MaterialEntity,
    Object,
    System,
    InformationBearingEntity,
    CognitiveSystem,
    Quality,
    Disposition,
    MentalQuality,
    Representation,
    ConfidenceValue,
    MentalRepresentation,
    CognitiveRepresentation,
    RepresentationThatIsBelieved,
    RepresentationThatIsWarranted,
    InformationContentEntity,
    DescriptiveInformationContentEntity,
    MeasurementInformationContentEntity,
    Process,
    MentalProcess,
    CognitiveProcess,
    InvestigativeProcess,
    ProcessOfProperCognitiveFunctioning,
    Indicator,
}

/// Every relation in the built-in vocabulary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum RelationId {
    InheresIn,
    Concretizes,
    GenericallyDependsOn,
    IsAbout,
    Describes,
    FusedWith,
    HasInput,
    HasOutput,
    HasParticipant,
    HasAgent,
    OccursInEnvironment,
    Realizes,
    HasBooleanValue,
    HasNominalValue,
    HasDecimalValue,
    SystemAnnotation,
    SourceEvent,
    Note,
}

/// The kind of literal a data assertion carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LiteralKind {
    Boolean,
    Nominal,
    Decimal,
}

impl LiteralKind {
    pub fn id(self) -> &'static str {
        match self {
            LiteralKind::Boolean => "boolean",
            LiteralKind::Nominal => "nominal",
            LiteralKind::Decimal => "decimal",
        }
    }
}

/// What a relation's object position accepts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RangeSpec {
    /// The object is a node whose effective classes must include this class.
    Class(ClassId),
    /// The object is a literal of this kind; such relations appear only in
    /// data assertions, never in edges.
    Literal(LiteralKind),
}

/// Typed signature of one relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RelationSig {
    pub id: RelationId,
    pub domain: ClassId,
    pub range: RangeSpec,
    /// Symmetric relations are stored in one canonical orientation.
    pub symmetric: bool,
    /// Name of a required edge attribute and its allowed values, if any.
    pub required_attr: Option<(&'static str, &'static [&'static str])>,
}

struct ClassRow {
    id: ClassId,
    name: &'static str,
    label: &'static str,
    parents: &'static [ClassId],
    definition: Option<&'static str>,
    defined_class: bool,
}

use ClassId::*;

static CLASS_TABLE: &[ClassRow] = &[
    ClassRow {
        id: Entity,
        name: "Entity",
        label: "Entity",
        parents: &[],
        definition: None,
        defined_class: false,
    },
    ClassRow {
        id: Continuant,
        name: "Continuant",
        label: "Continuant",
        parents: &[Entity],
        definition: Some("Entity that persists, endures, or continues to exist through time while maintaining its identity"),
        defined_class: false,
    },
    ClassRow {
        id: Occurrent,
        name: "Occurrent",
        label: "Occurrent",
        parents: &[Entity],
        definition: Some("Entity that unfolds itself in time or is the start or end of such an entity"),
        defined_class: false,
    },
    ClassRow {
        id: IndependentContinuant,
        name: "IndependentContinuant",
        label: "Independent Continuant",
        parents: &[Continuant],
        definition: Some("Continuant which is such that there is no entity it specifically or generically depends on"),
        defined_class: false,
    },
    ClassRow {
        id: SpecificallyDependentContinuant,
        name: "SpecificallyDependentContinuant",
        label: "Specifically Dependent Continuant",
        parents: &[Continuant],
        definition: Some("Continuant which depends on some specific independent continuant bearer"),
        defined_class: false,
    },
    ClassRow {
        id: GenericallyDependentContinuant,
        name: "GenericallyDependentContinuant",
        label: "Generically Dependent Continuant",
        parents: &[Continuant],
        definition: Some("Continuant which depends on one or more independent continuants that can serve as its bearer"),
        defined_class: false,
    },
    ClassRow {
        id: MaterialEntity,
        name: "MaterialEntity",
        label: "Material Entity",
        parents: &[IndependentContinuant],
        definition: Some("Independent Continuant that has some portion of matter as part"),
        defined_class: false,
    },
    ClassRow {
        id: Object,
        name: "Object",
        label: "Object",
        parents: &[MaterialEntity],
        definition: Some("Material Entity that is a maximally self-connected whole"),
        defined_class: false,
    },
    ClassRow {
        id: System,
        name: "System",
        label: "System",
        parents: &[MaterialEntity],
        definition: Some("Material Entity including as parts multiple objects that are causally integrated"),
        defined_class: false,
    },
    ClassRow {
        id: InformationBearingEntity,
        name: "InformationBearingEntity",
        label: "Information Bearing Entity",
        parents: &[Object],
        definition: Some("Object upon which an Information Content Entity generically depends"),
        defined_class: false,
    },
    ClassRow {
        id: CognitiveSystem,
        name: "CognitiveSystem",
        label: "Cognitive System",
        parents: &[System],
        definition: Some("System which realizes cognitive dispositions, all of whose parts are also parts of a single organism"),
        defined_class: false,
    },
    ClassRow {
        id: Quality,
        name: "Quality",
        label: "Quality",
        parents: &[SpecificallyDependentContinuant],
        definition: Some("Specifically Dependent Continuant that is fully exhibited or manifested whenever it inheres in its bearer"),
        defined_class: false,
    },
    ClassRow {
        id: Disposition,
        name: "Disposition",
        label: "Disposition",
        parents: &[SpecificallyDependentContinuant],
        definition: Some("Specifically Dependent Continuant whose realization occurs when its bearer is in some special physical circumstances"),
        defined_class: false,
    },
    ClassRow {
        id: MentalQuality,
        name: "MentalQuality",
        label: "Mental Quality",
        parents: &[Quality],
        definition: Some("Quality which specifically depends on an anatomical structure in the cognitive system of an organism"),
        defined_class: false,
    },
    ClassRow {
        id: Representation,
        name: "Representation",
        label: "Representation",
        parents: &[Quality],
        definition: Some("Quality which concretizes some Information Content Entity"),
        defined_class: false,
    },
    ClassRow {
        id: ConfidenceValue,
        name: "ConfidenceValue",
        label: "Confidence Value",
        parents: &[MentalQuality],
        definition: Some("Mental Quality that, when fused with a Cognitive Representation CR, determines the extent to which a Cognitive System operates as if CR is veridical"),
        defined_class: false,
    },
    ClassRow {
        id: MentalRepresentation,
        name: "MentalRepresentation",
        label: "Mental Representation",
        parents: &[Representation, MentalQuality],
        definition: Some("Representation which is a Mental Quality"),
        defined_class: false,
    },
    ClassRow {
        id: CognitiveRepresentation,
        name: "CognitiveRepresentation",
        label: "Cognitive Representation",
        parents: &[MentalRepresentation],
        definition: Some("Mental Representation that has a mind-to-world direction of fit"),
        defined_class: false,
    },
    ClassRow {
        id: RepresentationThatIsBelieved,
        name: "RepresentationThatIsBelieved",
        label: "Representation that is Believed",
        parents: &[CognitiveRepresentation],
        definition: Some("Cognitive Representation that is fused with a positive Confidence Value"),
        defined_class: true,
    },
    ClassRow {
        id: RepresentationThatIsWarranted,
        name: "RepresentationThatIsWarranted",
        label: "Representation that is Warranted",
        parents: &[RepresentationThatIsBelieved],
        definition: Some("Representation that is Believed formed through Proper Cognitive Functioning in its vetted- or designed-for environment"),
        defined_class: true,
    },
    ClassRow {
        id: InformationContentEntity,
        name: "InformationContentEntity",
        label: "Information Content Entity",
        parents: &[GenericallyDependentContinuant],
        definition: Some("Generically Dependent Continuant that generically depends on some Information Bearing Entity and stands in relation of aboutness to some Entity"),
        defined_class: false,
    },
    ClassRow {
        id: DescriptiveInformationContentEntity,
        name: "DescriptiveInformationContentEntity",
        label: "Descriptive Information Content Entity",
        parents: &[InformationContentEntity],
        definition: Some("Information Content Entity that describes some Entity"),
        defined_class: false,
    },
    ClassRow {
        id: MeasurementInformationContentEntity,
        name: "MeasurementInformationContentEntity",
        label: "Measurement Information Content Entity",
        parents: &[DescriptiveInformationContentEntity],
        definition: Some("Descriptive Information Content Entity that describes the extent, dimensions, quantity, or quality of an Entity relative to some standard"),
        defined_class: false,
    },
    ClassRow {
        id: Process,
        name: "Process",
        label: "Process",
        parents: &[Occurrent],
        definition: Some("Occurrent that has some temporal proper part and has some Material Entity as participant"),
        defined_class: false,
    },
    ClassRow {
        id: MentalProcess,
        name: "MentalProcess",
        label: "Mental Process",
        parents: &[Process],
        definition: Some("Process during which some mental quality of an organism changes or is sustained"),
        defined_class: false,
    },
    ClassRow {
        id: CognitiveProcess,
        name: "CognitiveProcess",
        label: "Cognitive Process",
        parents: &[MentalProcess],
        definition: Some("Mental Process that creates, modifies or has as participant some cognitive representation"),
        defined_class: false,
    },
    ClassRow {
        id: InvestigativeProcess,
        name: "InvestigativeProcess",
        label: "Investigative Process",
        parents: &[CognitiveProcess],
        definition: Some("Cognitive Process whose agent intends to establish or confirm that some portion of reality exists or does not exist"),
        defined_class: false,
    },
    ClassRow {
        id: ProcessOfProperCognitiveFunctioning,
        name: "ProcessOfProperCognitiveFunctioning",
        label: "Process of Proper Cognitive Functioning",
        parents: &[CognitiveProcess],
        definition: Some("Cognitive Process that has been successfully vetted or designed to reliably form veridical Cognitive Representations in environments of given types that include the environment in which the Cognitive Process is occurring"),
        defined_class: true,
    },
    ClassRow {
        id: Indicator,
        name: "Indicator",
        label: "Indicator",
        parents: &[Entity],
        definition: Some("Portion of Reality that, if it is known to exist, affects our estimation that some other portion of reality exists"),
        defined_class: false,
    },
];

use RelationId::*;

static RELATION_TABLE: &[RelationSig] = &[
    RelationSig {
        id: InheresIn,
        domain: SpecificallyDependentContinuant,
        range: RangeSpec::Class(IndependentContinuant),
        symmetric: false,
        required_attr: None,
    },
    RelationSig {
        id: Concretizes,
        domain: Quality,
        range: RangeSpec::Class(InformationContentEntity),
        symmetric: false,
        required_attr: Some(("mode", &["original", "derived"])),
    },
    RelationSig {
        id: GenericallyDependsOn,
        domain: InformationContentEntity,
        range: RangeSpec::Class(InformationBearingEntity),
        symmetric: false,
        required_attr: None,
    },
    RelationSig {
        id: IsAbout,
        domain: InformationContentEntity,
        range: RangeSpec::Class(Entity),
        symmetric: false,
        required_attr: None,
    },
    RelationSig {
        id: Describes,
        domain: DescriptiveInformationContentEntity,
        range: RangeSpec::Class(Entity),
        symmetric: false,
        required_attr: None,
    },
    RelationSig {
        id: FusedWith,
        domain: Quality,
        range: RangeSpec::Class(Quality),
        symmetric: true,
        required_attr: None,
    },
    RelationSig {
        id: HasInput,
        domain: Process,
        range: RangeSpec::Class(Entity),
        symmetric: false,
        required_attr: None,
    },
    RelationSig {
        id: HasOutput,
        domain: Process,
        range: RangeSpec::Class(Entity),
        symmetric: false,
        required_attr: None,
    },
    RelationSig {
        id: HasParticipant,
        domain: Process,
        range: RangeSpec::Class(Entity),
        symmetric: false,
        required_attr: None,
    },
    RelationSig {
        id: HasAgent,
        domain: Process,
        range: RangeSpec::Class(CognitiveSystem),
        symmetric: false,
        required_attr: None,
    },
    RelationSig {
        id: OccursInEnvironment,
        domain: Process,
        range: RangeSpec::Literal(LiteralKind::Nominal),
        symmetric: false,
        required_attr: None,
    },
    RelationSig {
        id: Realizes,
        domain: Process,
        range: RangeSpec::Class(Disposition),
        symmetric: false,
        required_attr: None,
    },
    RelationSig {
        id: HasBooleanValue,
        domain: InformationBearingEntity,
        range: RangeSpec::Literal(LiteralKind::Boolean),
        symmetric: false,
        required_attr: None,
    },
    RelationSig {
        id: HasNominalValue,
        domain: InformationBearingEntity,
        range: RangeSpec::Literal(LiteralKind::Nominal),
        symmetric: false,
        required_attr: None,
    },
    RelationSig {
        id: HasDecimalValue,
        domain: InformationBearingEntity,
        range: RangeSpec::Literal(LiteralKind::Decimal),
        symmetric: false,
        required_attr: None,
    },
    RelationSig {
        id: SystemAnnotation,
        domain: Entity,
        range: RangeSpec::Literal(LiteralKind::Nominal),
        symmetric: false,
        required_attr: None,
    },
    RelationSig {
        id: SourceEvent,
        domain: Process,
        range: RangeSpec::Literal(LiteralKind::Nominal),
        symmetric: false,
        required_attr: None,
    },
    RelationSig {
        id: Note,
        domain: Process,
        range: RangeSpec::Literal(LiteralKind::Nominal),
        symmetric: false,
        required_attr: None,
    },
];

impl ClassId {
    fn row(self) -> &'static ClassRow {
        CLASS_TABLE
            .iter()
            .find(|r| r.id == self)
            .expect("every ClassId has a table row")
    }

    /// Stable machine identifier, e.g. `"RepresentationThatIsBelieved"`.
    pub fn id(self) -> &'static str {
        self.row().name
    }

    /// Human-readable label, e.g. `"Representation that is Believed"`.
    pub fn label(self) -> &'static str {
        self.row().label
    }

    /// Natural-language definition, where one exists.
    pub fn definition(self) -> Option<&'static str> {
        self.row().definition
    }

    /// Direct parents; `Entity` has none, `MentalRepresentation` has two.
    pub fn parents(self) -> &'static [ClassId] {
        self.row().parents
    }

    /// True for classes whose membership the reasoner computes.
    pub fn is_defined_class(self) -> bool {
        self.row().defined_class
    }

    pub fn all() -> impl Iterator<Item = ClassId> {
        CLASS_TABLE.iter().map(|r| r.id)
    }
}

impl RelationId {
    /// Stable machine identifier, e.g. `"fused_with"`.
    pub fn id(self) -> &'static str {
        match self {
            InheresIn => "inheres_in",
            Concretizes => "concretizes",
            GenericallyDependsOn => "generically_depends_on",
            IsAbout => "is_about",
            Describes => "describes",
            FusedWith => "fused_with",
            HasInput => "has_input",
            HasOutput => "has_output",
            HasParticipant => "has_participant",
            HasAgent => "has_agent",
            OccursInEnvironment => "occurs_in_environment",
            Realizes => "realizes",
            HasBooleanValue => "has_boolean_value",
            HasNominalValue => "has_nominal_value",
            HasDecimalValue => "has_decimal_value",
            SystemAnnotation => "system_annotation",
            SourceEvent => "source_event",
            Note => "note",
        }
    }

    pub fn signature(self) -> &'static RelationSig {
        RELATION_TABLE
            .iter()
            .find(|s| s.id == self)
            .expect("every RelationId has a signature")
    }

    /// True when the object position is a literal rather than a node.
    pub fn is_data_relation(self) -> bool {
        matches!(self.signature().range, RangeSpec::Literal(_))
    }

    pub fn all() -> impl Iterator<Item = RelationId> {
        RELATION_TABLE.iter().map(|s| s.id)
    }
}

impl fmt::Display for ClassId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl fmt::Display for RelationId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl std::str::FromStr for ClassId {
    type Err = OntologyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ClassId::all()
            .find(|c| c.id() == s)
            .ok_or_else(|| OntologyError::UnknownClass(s.to_owned()))
    }
}

impl std::str::FromStr for RelationId {
    type Err = OntologyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RelationId::all()
            .find(|r| r.id() == s)
            .ok_or_else(|| OntologyError::UnknownRelation(s.to_owned()))
    }
}

impl TryFrom<String> for ClassId {
    type Error = OntologyError;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        value.parse()
    }
}

impl From<ClassId> for String {
    fn from(value: ClassId) -> String {
        value.id().to_owned()
    }
}

impl TryFrom<String> for RelationId {
    type Error = OntologyError;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        value.parse()
    }
}

impl From<RelationId> for String {
    fn from(value: RelationId) -> String {
        value.id().to_owned()
    }
}

/// The loaded taxonomy: class table plus precomputed ancestor closure.
#[derive(Debug)]
pub struct Taxonomy {
    /// Reflexive-transitive superclass closure, keyed by class.
    ancestors: BTreeMap<ClassId, Vec<ClassId>>,
}

static BUILTIN: OnceLock<Taxonomy> = OnceLock::new();

impl Taxonomy {
    /// Loads the built-in taxonomy. Idempotent; the same instance is shared
    /// across all callers and threads.
    pub fn builtin() -> &'static Taxonomy {
        BUILTIN.get_or_init(|| {
            let mut ancestors: BTreeMap<ClassId, Vec<ClassId>> = BTreeMap::new();
            for class in ClassId::all() {
                let mut seen = std::collections::BTreeSet::new();
                let mut stack = vec![class];
                while let Some(c) = stack.pop() {
                    if seen.insert(c) {
                        stack.extend(c.parents().iter().copied());
                    }
                }
                ancestors.insert(class, seen.into_iter().collect());
            }
            Taxonomy { ancestors }
        })
    }

    /// Reflexive subclass test: every class is a subclass of itself and of
    /// `Entity`.
    pub fn is_subclass_of(&self, sub: ClassId, sup: ClassId) -> bool {
        self.ancestors[&sub].binary_search(&sup).is_ok()
    }

    /// All superclasses of `class`, including itself, in `ClassId` order.
    pub fn ancestors_of(&self, class: ClassId) -> &[ClassId] {
        &self.ancestors[&class]
    }

    /// Plain-text listing of the taxonomy and relation signatures, suitable
    /// for diffing. Output is byte-stable: a version header, then one line
    /// per subclass link (`child<TAB>parent`, roots as a bare id), then one
    /// line per relation (`rel<TAB>domain<TAB>range`), each section sorted.
    pub fn export_text(&self) -> String {
        let mut out = String::from("cpo-taxonomy 1\n");
        let mut class_lines: Vec<String> = Vec::new();
        for class in ClassId::all() {
            if class.parents().is_empty() {
                class_lines.push(class.id().to_owned());
            }
            for parent in class.parents() {
                class_lines.push(format!("{}\t{}", class.id(), parent.id()));
            }
        }
        class_lines.sort();
        for line in class_lines {
            out.push_str(&line);
            out.push('\n');
        }
        let mut rel_lines: Vec<String> = RelationId::all()
            .map(|rel| {
                let sig = rel.signature();
                let range = match sig.range {
                    RangeSpec::Class(c) => c.id().to_owned(),
                    RangeSpec::Literal(k) => k.id().to_owned(),
                };
                format!("{}\t{}\t{}", rel.id(), sig.domain.id(), range)
            })
            .collect();
        rel_lines.sort();
        for line in rel_lines {
            out.push_str(&line);
            out.push('\n');
        }
        out
    }
}
