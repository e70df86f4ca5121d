//! Belief- and warrant-status classification.
//!
//! Given a graph, a set of vetting records, and veridicality marks, the
//! classifier computes four node sets:
//!
//! * **rtb** (believed) — cognitive representations fused with a confidence
//!   value whose measured decimal strictly exceeds the positive threshold;
//! * **ppcf** (properly functioning) — cognitive processes covered by a
//!   vetting record for the environment they occur in, whose input
//!   integrity conditions hold;
//! * **rtw** (warranted) — believed representations output by a properly
//!   functioning process;
//! * **mere_guess** — believed representations output by some process that
//!   is *not* properly functioning (and, by default, that are not
//!   themselves warranted through another producer).
//!
//! Rules read **asserted** facts only, so classification is idempotent:
//! annotating a graph with a result and classifying again yields the same
//! result. Warrant status of a process's inputs is needed to decide the
//! process itself when its vetting record demands warranted inputs, so
//! processes are visited in pipeline order (producers before consumers);
//! because every producer of an artifact precedes every consumer, one pass
//! reaches the unique fixed point. A cyclic pipeline cannot be stratified
//! and is rejected.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::decimal::Decimal;
use crate::graph::{GraphError, KGraph, Literal, NodeId, Provenance};
use crate::ontology::{ClassId, RelationId};

/// Evidence that a process type has been vetted for given environments.
/// A record applies to one process node; integrity flags restrict what the
/// process may consume while still counting as properly functioning.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VettingRecord {
    pub process: String,
    pub environments: BTreeSet<String>,
    /// No input (or content carried by an input) may be marked not
    /// veridical.
    #[serde(default)]
    pub requires_veridical_inputs: bool,
    /// Every representation consumed must itself be warranted; content
    /// entities consumed directly count as unwarranted.
    #[serde(default)]
    pub requires_warranted_inputs: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VettingFile {
    format_version: String,
    records: Vec<VettingRecord>,
}

impl VettingRecord {
    pub fn load_many(text: &str) -> Result<Vec<VettingRecord>, GraphError> {
        let file: VettingFile =
            serde_json::from_str(text).map_err(|e| GraphError::Parse(e.to_string()))?;
        if file.format_version != "1" {
            return Err(GraphError::Version(file.format_version));
        }
        Ok(file.records)
    }

    pub fn save_many(records: &[VettingRecord]) -> String {
        let file = VettingFile {
            format_version: "1".to_owned(),
            records: records.to_vec(),
        };
        let mut out = serde_json::to_string_pretty(&file).expect("vetting serializes");
        out.push('\n');
        out
    }
}

/// Node ids marked as not veridical by some out-of-band check.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VeridicalityMarks {
    pub not_veridical: BTreeSet<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MarksFile {
    format_version: String,
    not_veridical: BTreeSet<String>,
}

impl VeridicalityMarks {
    pub fn from_json(text: &str) -> Result<VeridicalityMarks, GraphError> {
        let file: MarksFile =
            serde_json::from_str(text).map_err(|e| GraphError::Parse(e.to_string()))?;
        if file.format_version != "1" {
            return Err(GraphError::Version(file.format_version));
        }
        Ok(VeridicalityMarks {
            not_veridical: file.not_veridical,
        })
    }

    pub fn to_json(&self) -> String {
        let file = MarksFile {
            format_version: "1".to_owned(),
            not_veridical: self.not_veridical.clone(),
        };
        let mut out = serde_json::to_string_pretty(&file).expect("marks serialize");
        out.push('\n');
        out
    }
}

#[derive(Debug, Clone)]
pub struct ClassifyOptions {
    /// A representation counts as believed only when some confidence
    /// measurement strictly exceeds this value.
    pub threshold: Decimal,
    /// When set, a representation that is warranted through one producer
    /// and output by another non-vetted process is labeled a mere guess as
    /// well; by default the warrant wins and the conflict is noted.
    pub allow_warranted_mere_guess: bool,
}

impl Default for ClassifyOptions {
    fn default() -> ClassifyOptions {
        ClassifyOptions {
            threshold: Decimal::parse("0.5").expect("default threshold"),
            allow_warranted_mere_guess: false,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReasonerError {
    #[error("process pipeline contains a cycle through: {}", .0.join(", "))]
    PipelineCycle(Vec<String>),
    #[error("graph references missing node {0:?}")]
    DanglingRef(String),
    #[error("classification is stale: the graph changed since it was computed")]
    StaleResult,
}

/// One step in a derivation: a conclusion and the premises it rests on.
/// Leaves are asserted facts, vetting evidence, marks, or threshold
/// comparisons.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DerivationTree {
    pub label: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<DerivationTree>,
}

impl DerivationTree {
    fn leaf(label: impl Into<String>) -> DerivationTree {
        DerivationTree {
            label: label.into(),
            children: Vec::new(),
        }
    }

    /// Indented text rendering, two spaces per level.
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.render_into(&mut out, 0);
        out
    }

    fn render_into(&self, out: &mut String, depth: usize) {
        let _ = writeln!(out, "{}{}", "  ".repeat(depth), self.label);
        for child in &self.children {
            child.render_into(out, depth + 1);
        }
    }
}

/// The result of [`classify`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub threshold: Decimal,
    pub rtb: BTreeSet<NodeId>,
    pub ppcf: BTreeSet<NodeId>,
    pub rtw: BTreeSet<NodeId>,
    pub mere_guess: BTreeSet<NodeId>,
    /// Human-readable remarks, e.g. suppressed warrant/guess conflicts.
    pub notes: Vec<String>,
    derivations: BTreeMap<NodeId, Vec<DerivationTree>>,
    fingerprint: u64,
}

impl Classification {
    /// Derivation trees for every status this node received.
    pub fn explain(&self, node: &str) -> &[DerivationTree] {
        self.derivations
            .get(node)
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    /// Canonical JSON rendering (sorted arrays). `stamp` adds a
    /// `generated_at` field when machine output is explicitly timestamped.
    pub fn to_json(&self, stamp: Option<&str>) -> String {
        #[derive(Serialize)]
        struct ResultFile<'a> {
            format_version: &'a str,
            #[serde(skip_serializing_if = "Option::is_none")]
            generated_at: Option<&'a str>,
            threshold: &'a str,
            believed: Vec<&'a str>,
            properly_functioning: Vec<&'a str>,
            warranted: Vec<&'a str>,
            mere_guess: Vec<&'a str>,
            notes: &'a [String],
        }
        fn strs(set: &BTreeSet<NodeId>) -> Vec<&str> {
            set.iter().map(|n| n.as_str()).collect()
        }
        let file = ResultFile {
            format_version: "1",
            generated_at: stamp,
            threshold: self.threshold.as_str(),
            believed: strs(&self.rtb),
            properly_functioning: strs(&self.ppcf),
            warranted: strs(&self.rtw),
            mere_guess: strs(&self.mere_guess),
            notes: &self.notes,
        };
        let mut out = serde_json::to_string_pretty(&file).expect("result serializes");
        out.push('\n');
        out
    }
}

/// Per-classification adjacency index. The graph's own accessors scan the
/// full edge set on every call, which is fine for queries but quadratic
/// when the reasoner touches every process; one pass here makes each
/// lookup proportional to its result. Symmetric relations are indexed in
/// both orientations, matching [`KGraph::objects_of`] and
/// [`KGraph::subjects_of`].
struct Adjacency<'g> {
    out: BTreeMap<&'g str, BTreeMap<RelationId, Vec<&'g NodeId>>>,
    inc: BTreeMap<&'g str, BTreeMap<RelationId, Vec<&'g NodeId>>>,
    values: BTreeMap<&'g str, BTreeMap<RelationId, Vec<&'g Literal>>>,
}

impl<'g> Adjacency<'g> {
    fn new(graph: &'g KGraph) -> Adjacency<'g> {
        let mut index = Adjacency {
            out: BTreeMap::new(),
            inc: BTreeMap::new(),
            values: BTreeMap::new(),
        };
        for edge in graph.edges() {
            index.link(&edge.s, edge.rel, &edge.o);
            if edge.rel.signature().symmetric && edge.s != edge.o {
                index.link(&edge.o, edge.rel, &edge.s);
            }
        }
        for record in graph.data() {
            index
                .values
                .entry(record.s.as_str())
                .or_default()
                .entry(record.rel)
                .or_default()
                .push(&record.value);
        }
        index
    }

    fn link(&mut self, s: &'g NodeId, rel: RelationId, o: &'g NodeId) {
        self.out.entry(s.as_str()).or_default().entry(rel).or_default().push(o);
        self.inc.entry(o.as_str()).or_default().entry(rel).or_default().push(s);
    }

    fn objects(&self, s: &str, rel: RelationId) -> impl Iterator<Item = &'g NodeId> + '_ {
        self.out
            .get(s)
            .and_then(|per| per.get(&rel))
            .into_iter()
            .flatten()
            .copied()
    }

    fn subjects(&self, rel: RelationId, o: &str) -> impl Iterator<Item = &'g NodeId> + '_ {
        self.inc
            .get(o)
            .and_then(|per| per.get(&rel))
            .into_iter()
            .flatten()
            .copied()
    }

    fn data_values(&self, s: &str, rel: RelationId) -> impl Iterator<Item = &'g Literal> + '_ {
        self.values
            .get(s)
            .and_then(|per| per.get(&rel))
            .into_iter()
            .flatten()
            .copied()
    }
}

/// Classifies belief and warrant status. See the module docs for the rules
/// and evaluation order.
pub fn classify(
    graph: &KGraph,
    vetting: &[VettingRecord],
    marks: &VeridicalityMarks,
    options: &ClassifyOptions,
) -> Result<Classification, ReasonerError> {
    // Reasoning navigates edges and data freely, so every reference must
    // resolve.
    for edge in graph.edges() {
        for end in [&edge.s, &edge.o] {
            if !graph.contains_node(end.as_str()) {
                return Err(ReasonerError::DanglingRef(end.as_str().to_owned()));
            }
        }
    }
    for record in graph.data() {
        if !graph.contains_node(record.s.as_str()) {
            return Err(ReasonerError::DanglingRef(record.s.as_str().to_owned()));
        }
    }

    let adjacency = Adjacency::new(graph);
    let mut vetting_for: BTreeMap<&str, Vec<&VettingRecord>> = BTreeMap::new();
    for record in vetting {
        vetting_for.entry(record.process.as_str()).or_default().push(record);
    }

    let mut result = Classification {
        threshold: options.threshold.clone(),
        rtb: BTreeSet::new(),
        ppcf: BTreeSet::new(),
        rtw: BTreeSet::new(),
        mere_guess: BTreeSet::new(),
        notes: Vec::new(),
        derivations: BTreeMap::new(),
        fingerprint: graph.fingerprint(),
    };

    // Believed status is local to each representation; compute it first.
    let believed_trees = compute_rtb(graph, &adjacency, options, &mut result);

    // Properly-functioning and warranted status propagate along the
    // pipeline; producers are decided before consumers.
    let order = graph
        .pipeline_order()
        .map_err(|cycle| ReasonerError::PipelineCycle(
            cycle.iter().map(|n| n.as_str().to_owned()).collect(),
        ))?;
    let mut ppcf_failures: BTreeMap<NodeId, String> = BTreeMap::new();
    for process in &order {
        if !graph.is_asserted_instance_of(process.as_str(), ClassId::CognitiveProcess) {
            continue;
        }
        let records = vetting_for.get(process.as_str()).map(Vec::as_slice).unwrap_or(&[]);
        match decide_ppcf(graph, &adjacency, process, records, marks, &result) {
            Ok(tree) => {
                result.ppcf.insert(process.clone());
                result
                    .derivations
                    .entry(process.clone())
                    .or_default()
                    .push(tree);
                // Believed outputs of a properly functioning process are
                // warranted.
                let outputs: BTreeSet<NodeId> = adjacency
                    .objects(process.as_str(), RelationId::HasOutput)
                    .cloned()
                    .collect();
                for output in outputs {
                    if !result.rtb.contains(&output) || result.rtw.contains(&output) {
                        continue;
                    }
                    let tree = DerivationTree {
                        label: format!("warranted({output}) [rule: output-of-proper-functioning]"),
                        children: vec![
                            believed_trees[&output].clone(),
                            DerivationTree::leaf(format!(
                                "has_output({process}, {output}) [asserted]"
                            )),
                            result
                                .derivations
                                .get(process)
                                .and_then(|ts| ts.last())
                                .cloned()
                                .expect("ppcf tree recorded above"),
                        ],
                    };
                    result.rtw.insert(output.clone());
                    result.derivations.entry(output).or_default().push(tree);
                }
            }
            Err(reason) => {
                ppcf_failures.insert(process.clone(), reason);
            }
        }
    }

    // A believed representation output by a process that is not properly
    // functioning is a mere guess — unless it earned warrant through some
    // other producer, in which case the warrant wins by default and the
    // conflict is noted.
    for cr in result.rtb.clone() {
        let bad_producers: Vec<&NodeId> = adjacency
            .subjects(RelationId::HasOutput, cr.as_str())
            .filter(|p| {
                graph.is_asserted_instance_of(p.as_str(), ClassId::Process)
                    && !result.ppcf.contains(*p)
            })
            .collect();
        let Some(producer) = bad_producers.first() else {
            continue;
        };
        if result.rtw.contains(&cr) && !options.allow_warranted_mere_guess {
            result.notes.push(format!(
                "{cr} is warranted but is also output by non-vetted process {producer}; \
                 mere-guess label suppressed"
            ));
            continue;
        }
        let reason = ppcf_failures
            .get(*producer)
            .cloned()
            .unwrap_or_else(|| "process is not a cognitive process".to_owned());
        let tree = DerivationTree {
            label: format!("mere_guess({cr}) [rule: output-of-unvetted-process]"),
            children: vec![
                believed_trees[&cr].clone(),
                DerivationTree::leaf(format!("has_output({producer}, {cr}) [asserted]")),
                DerivationTree::leaf(format!(
                    "properly_functioning({producer}) does not hold: {reason}"
                )),
            ],
        };
        result.mere_guess.insert(cr.clone());
        result.derivations.entry(cr).or_default().push(tree);
    }

    Ok(result)
}

/// Applies the believed rule to every cognitive representation, recording
/// derivations in `result` and returning each believed node's tree for
/// reuse as a premise.
fn compute_rtb(
    graph: &KGraph,
    adjacency: &Adjacency<'_>,
    options: &ClassifyOptions,
    result: &mut Classification,
) -> BTreeMap<NodeId, DerivationTree> {
    let mut trees = BTreeMap::new();
    for node in graph.node_ids() {
        if !graph.is_asserted_instance_of(node.as_str(), ClassId::CognitiveRepresentation) {
            continue;
        }
        let confidences: BTreeSet<&NodeId> = adjacency
            .objects(node.as_str(), RelationId::FusedWith)
            .filter(|cv| {
                graph.is_asserted_instance_of(cv.as_str(), ClassId::ConfidenceValue)
            })
            .collect();
        let mut witness: Option<(&NodeId, &NodeId, &NodeId, &Decimal)> = None;
        'search: for cv in confidences {
            let mices: BTreeSet<&NodeId> = adjacency
                .subjects(RelationId::Describes, cv.as_str())
                .filter(|m| {
                    graph.is_asserted_instance_of(
                        m.as_str(),
                        ClassId::MeasurementInformationContentEntity,
                    )
                })
                .collect();
            for mice in mices {
                let carriers: BTreeSet<&NodeId> = adjacency
                    .objects(mice.as_str(), RelationId::GenericallyDependsOn)
                    .collect();
                for carrier in carriers {
                    for value in adjacency.data_values(carrier.as_str(), RelationId::HasDecimalValue)
                    {
                        if let Literal::Decimal(d) = value {
                            if *d > options.threshold {
                                witness = Some((cv, mice, carrier, d));
                                break 'search;
                            }
                        }
                    }
                }
            }
        }
        let Some((cv, mice, carrier, value)) = witness else {
            continue;
        };
        let asserted_as = graph
            .asserted_classes(node.as_str())
            .find(|c| {
                crate::ontology::Taxonomy::builtin()
                    .is_subclass_of(*c, ClassId::CognitiveRepresentation)
            })
            .expect("checked above");
        let tree = DerivationTree {
            label: format!("believed({node}) [rule: positive-confidence]"),
            children: vec![
                DerivationTree::leaf(format!("instance_of({node}, {asserted_as}) [asserted]")),
                DerivationTree::leaf(format!("fused_with({node}, {cv}) [asserted]")),
                DerivationTree::leaf(format!("instance_of({cv}, ConfidenceValue) [asserted]")),
                DerivationTree::leaf(format!(
                    "measurement: describes({mice}, {cv}), generically_depends_on({mice}, \
                     {carrier}), has_decimal_value({carrier}, {value}) [asserted]"
                )),
                DerivationTree::leaf(format!(
                    "{value} > positive threshold {}",
                    options.threshold
                )),
            ],
        };
        result.rtb.insert(node.clone());
        result
            .derivations
            .entry(node.clone())
            .or_default()
            .push(tree.clone());
        trees.insert(node.clone(), tree);
    }
    trees
}

/// Decides whether one cognitive process is properly functioning, given
/// warrant statuses computed so far. Returns the derivation tree on
/// success, or a human-readable reason on failure.
fn decide_ppcf(
    graph: &KGraph,
    adjacency: &Adjacency<'_>,
    process: &NodeId,
    records: &[&VettingRecord],
    marks: &VeridicalityMarks,
    sofar: &Classification,
) -> Result<DerivationTree, String> {
    let environments: BTreeSet<&str> = adjacency
        .data_values(process.as_str(), RelationId::OccursInEnvironment)
        .filter_map(Literal::as_nominal)
        .collect();
    if environments.is_empty() {
        return Err(format!("{process} has no occurs_in_environment assertion"));
    }
    if records.is_empty() {
        return Err(format!("no vetting record applies to {process}"));
    }
    let mut last_failure = String::new();
    for record in records {
        // The record's vetted envelope must include every environment the
        // process is asserted to occur in.
        if let Some(missing) = environments
            .iter()
            .find(|e| !record.environments.contains(**e))
        {
            last_failure = format!(
                "vetting record for {process} does not cover environment {missing:?}"
            );
            continue;
        }
        let inputs: BTreeSet<&NodeId> = adjacency
            .objects(process.as_str(), RelationId::HasInput)
            .collect();
        let env_list = environments
            .iter()
            .map(|e| format!("{e:?}"))
            .collect::<Vec<_>>()
            .join(", ");
        let mut children = vec![
            DerivationTree::leaf(format!(
                "instance_of({process}, CognitiveProcess) [asserted]"
            )),
            DerivationTree::leaf(format!(
                "occurs_in_environment({process}, {env_list}) [asserted]"
            )),
            DerivationTree::leaf(format!(
                "vetting record for {process} covers environment(s) {env_list}"
            )),
        ];
        if record.requires_veridical_inputs {
            // The check covers direct inputs and any content the input
            // carriers bear.
            let mut checked: BTreeSet<&NodeId> = inputs.clone();
            for input in &inputs {
                if graph
                    .is_asserted_instance_of(input.as_str(), ClassId::InformationBearingEntity)
                {
                    checked.extend(
                        adjacency.subjects(RelationId::GenericallyDependsOn, input.as_str()),
                    );
                }
            }
            if let Some(bad) = checked
                .iter()
                .find(|n| marks.not_veridical.contains(n.as_str()))
            {
                last_failure =
                    format!("input {bad} of {process} is marked not veridical");
                continue;
            }
            children.push(DerivationTree::leaf(format!(
                "veridical inputs: none of {} checked input(s) is marked not veridical",
                checked.len()
            )));
        }
        if record.requires_warranted_inputs {
            let epistemic: Vec<&NodeId> = inputs
                .iter()
                .copied()
                .filter(|i| {
                    graph.is_asserted_instance_of(i.as_str(), ClassId::Representation)
                        || graph.is_asserted_instance_of(
                            i.as_str(),
                            ClassId::InformationContentEntity,
                        )
                })
                .collect();
            let mut unwarranted = epistemic
                .iter()
                .filter(|i| !sofar.rtw.contains(**i))
                .peekable();
            if let Some(bad) = unwarranted.peek() {
                last_failure = format!("input {bad} of {process} is not warranted");
                continue;
            }
            let mut premise = DerivationTree::leaf(format!(
                "warranted inputs: all {} epistemic input(s) are warranted",
                epistemic.len()
            ));
            for input in &epistemic {
                premise
                    .children
                    .push(DerivationTree::leaf(format!("warranted({input})")));
            }
            children.push(premise);
        }
        return Ok(DerivationTree {
            label: format!("properly_functioning({process}) [rule: vetted-environment]"),
            children,
        });
    }
    Err(last_failure)
}

/// Writes a classification back into the graph: derived classes for
/// believed / properly-functioning / warranted nodes, and a system
/// annotation `"mere guess"` on mere guesses. Fails when the graph's
/// asserted content no longer matches the content the result was computed
/// from. Annotation never changes asserted content, so it is idempotent
/// and re-running [`classify`] afterwards reproduces `result`.
pub fn annotate(graph: &mut KGraph, result: &Classification) -> Result<(), ReasonerError> {
    if graph.fingerprint() != result.fingerprint {
        return Err(ReasonerError::StaleResult);
    }
    let statuses = [
        (&result.rtb, ClassId::RepresentationThatIsBelieved),
        (&result.ppcf, ClassId::ProcessOfProperCognitiveFunctioning),
        (&result.rtw, ClassId::RepresentationThatIsWarranted),
    ];
    for (set, class) in statuses {
        for node in set.iter() {
            graph
                .add_derived_class(node.as_str(), class)
                .expect("classified node exists in fingerprint-matched graph");
        }
    }
    for node in &result.mere_guess {
        graph
            .add_data_with_provenance(
                node.as_str(),
                RelationId::SystemAnnotation,
                Literal::nominal("mere guess"),
                Provenance::System,
            )
            .expect("classified node exists in fingerprint-matched graph");
    }
    Ok(())
}
