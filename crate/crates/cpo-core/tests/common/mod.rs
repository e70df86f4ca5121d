//! Shared helpers for integration tests: fixture paths, a deterministic
//! scenario family with a brute-force classification oracle, and a seeded
//! random scenario generator for property tests.
//!
//! The oracle is written straight from the classification rules, using
//! only the public read API — no reasoner internals — so agreement with
//! `classify` is evidence, not tautology. Instead of evaluating in
//! pipeline order, it enumerates every subset of cognitive processes as a
//! candidate properly-functioning set and keeps the ones consistent with
//! the rules; on acyclic pipelines exactly one must survive.

#![allow(dead_code)]
// Topology builders name nodes by index (`p{i}`, `cr{i-1}`), so indexed
// loops read better than enumerate-and-take.
#![allow(clippy::needless_range_loop)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use cpo_core::decimal::Decimal;
use cpo_core::graph::{KGraph, Literal};
use cpo_core::ontology::{ClassId, RelationId, Taxonomy};
use cpo_core::reasoner::{ClassifyOptions, VeridicalityMarks, VettingRecord};
use cpo_core::synthgen::Lcg;

pub fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
}

pub fn read_golden(name: &str) -> String {
    std::fs::read_to_string(golden(name)).unwrap_or_else(|e| panic!("fixture {name}: {e}"))
}

/// One classification problem: a graph plus the out-of-band inputs.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub label: String,
    pub graph: KGraph,
    pub vetting: Vec<VettingRecord>,
    pub marks: VeridicalityMarks,
    pub options: ClassifyOptions,
}

pub fn dec(s: &str) -> Decimal {
    Decimal::parse(s).unwrap()
}

/// Adds the confidence pattern for `cr`: a confidence value fused with it,
/// measured via the usual three-node measurement.
pub fn add_confidence(graph: &mut KGraph, cr: &str, value: &str) {
    let cv = format!("{cr}.cv");
    let mice = format!("{cr}.m");
    let ibe = format!("{cr}.b");
    graph.add_node(&cv, [ClassId::ConfidenceValue]).unwrap();
    graph
        .add_node(&mice, [ClassId::MeasurementInformationContentEntity])
        .unwrap();
    graph.add_node(&ibe, [ClassId::InformationBearingEntity]).unwrap();
    graph.add_edge(cr, RelationId::FusedWith, &cv, []).unwrap();
    graph.add_edge(&mice, RelationId::Describes, &cv, []).unwrap();
    graph
        .add_edge(&mice, RelationId::GenericallyDependsOn, &ibe, [])
        .unwrap();
    graph
        .add_data(&ibe, RelationId::HasDecimalValue, Literal::Decimal(dec(value)))
        .unwrap();
}

/// Adds an ICE/IBE artifact pair named `{stem}.ice` / `{stem}.ibe`.
pub fn add_artifact(graph: &mut KGraph, stem: &str) -> (String, String) {
    let ice = format!("{stem}.ice");
    let ibe = format!("{stem}.ibe");
    graph.add_node(&ice, [ClassId::InformationContentEntity]).unwrap();
    graph.add_node(&ibe, [ClassId::InformationBearingEntity]).unwrap();
    graph
        .add_edge(&ice, RelationId::GenericallyDependsOn, &ibe, [])
        .unwrap();
    (ice, ibe)
}

fn add_process(graph: &mut KGraph, id: &str, class: ClassId, env: &str) {
    graph.add_node(id, [class]).unwrap();
    graph
        .add_data(id, RelationId::OccursInEnvironment, Literal::nominal(env))
        .unwrap();
}

fn consume(graph: &mut KGraph, process: &str, nodes: &[&str]) {
    for node in nodes {
        graph.add_edge(process, RelationId::HasInput, node, []).unwrap();
    }
}

/// Per-process confidence grades used by every deterministic topology.
const CONFIDENCES: [&str; 4] = ["0.8", "0.5", "0.3", "0.9"];

/// Builds one of the fixed topologies. Each process `p{i}` outputs a
/// representation `cr{i}` (with confidence) and an artifact pair `a{i}`;
/// consumers take the artifact pair and the representation, so both
/// veridical-input and warranted-input checks have targets.
fn topology(name: &str) -> KGraph {
    let mut g = KGraph::new();
    let (src_ice, src_ibe) = add_artifact(&mut g, "src");
    g.add_data(&src_ibe, RelationId::HasNominalValue, Literal::nominal("source"))
        .unwrap();
    let chain = |g: &mut KGraph, k: usize| {
        for i in 0..k {
            let p = format!("p{i}");
            add_process(g, &p, ClassId::CognitiveProcess, "e1");
            let cr = format!("cr{i}");
            g.add_node(&cr, [ClassId::CognitiveRepresentation]).unwrap();
            g.add_edge(&p, RelationId::HasOutput, &cr, []).unwrap();
            add_confidence(g, &cr, CONFIDENCES[i]);
            let (a_ice, a_ibe) = add_artifact(g, &format!("a{i}"));
            g.add_edge(&p, RelationId::HasOutput, &a_ice, []).unwrap();
            g.add_edge(&p, RelationId::HasOutput, &a_ibe, []).unwrap();
            if i == 0 {
                consume(g, &p, &["src.ice", "src.ibe"]);
            } else {
                let prev = i - 1;
                consume(
                    g,
                    &p,
                    &[
                        &format!("a{prev}.ice"),
                        &format!("a{prev}.ibe"),
                        &format!("cr{prev}"),
                    ],
                );
            }
        }
    };
    match name {
        "chain1" => chain(&mut g, 1),
        "chain2" => chain(&mut g, 2),
        "chain3" => chain(&mut g, 3),
        "chain4" => chain(&mut g, 4),
        "diamond" => {
            // p0 feeds p1 and p2 in parallel; p3 joins both branches.
            chain(&mut g, 1);
            for i in [1usize, 2] {
                let p = format!("p{i}");
                add_process(&mut g, &p, ClassId::CognitiveProcess, "e1");
                let cr = format!("cr{i}");
                g.add_node(&cr, [ClassId::CognitiveRepresentation]).unwrap();
                g.add_edge(&p, RelationId::HasOutput, &cr, []).unwrap();
                add_confidence(&mut g, &cr, CONFIDENCES[i]);
                let (a_ice, a_ibe) = add_artifact(&mut g, &format!("a{i}"));
                g.add_edge(&p, RelationId::HasOutput, &a_ice, []).unwrap();
                g.add_edge(&p, RelationId::HasOutput, &a_ibe, []).unwrap();
                consume(&mut g, &p, &["a0.ice", "a0.ibe", "cr0"]);
            }
            add_process(&mut g, "p3", ClassId::CognitiveProcess, "e1");
            g.add_node("cr3", [ClassId::CognitiveRepresentation]).unwrap();
            g.add_edge("p3", RelationId::HasOutput, "cr3", []).unwrap();
            add_confidence(&mut g, "cr3", CONFIDENCES[3]);
            consume(&mut g, "p3", &["a1.ice", "a1.ibe", "cr1", "a2.ice", "a2.ibe", "cr2"]);
        }
        "mental3" => {
            // Three stages where stage n > 0 consumes only the previous
            // representation: the warranted-input requirement can then
            // succeed or fail depending on upstream status.
            for i in 0..3usize {
                let p = format!("p{i}");
                add_process(&mut g, &p, ClassId::CognitiveProcess, "e1");
                let cr = format!("cr{i}");
                g.add_node(&cr, [ClassId::CognitiveRepresentation]).unwrap();
                g.add_edge(&p, RelationId::HasOutput, &cr, []).unwrap();
                add_confidence(&mut g, &cr, CONFIDENCES[i]);
                if i == 0 {
                    consume(&mut g, &p, &["src.ice", "src.ibe"]);
                } else {
                    consume(&mut g, &p, &[&format!("cr{}", i - 1)]);
                }
            }
        }
        "twin" => {
            // Two processes produce the same representation — the case
            // where warranted and mere-guess derivations can collide.
            g.add_node("cr0", [ClassId::CognitiveRepresentation]).unwrap();
            add_confidence(&mut g, "cr0", CONFIDENCES[0]);
            for i in [0usize, 1] {
                let p = format!("p{i}");
                add_process(&mut g, &p, ClassId::CognitiveProcess, "e1");
                consume(&mut g, &p, &["src.ice", "src.ibe"]);
                g.add_edge(&p, RelationId::HasOutput, "cr0", []).unwrap();
            }
        }
        other => panic!("unknown topology {other}"),
    }
    let _ = src_ice;
    g
}

fn process_count(name: &str) -> usize {
    match name {
        "chain1" => 1,
        "chain2" | "twin" => 2,
        "chain3" | "mental3" => 3,
        "chain4" | "diamond" => 4,
        other => panic!("unknown topology {other}"),
    }
}

pub const TOPOLOGIES: [&str; 7] =
    ["chain1", "chain2", "chain3", "chain4", "diamond", "twin", "mental3"];
pub const THRESHOLDS: [&str; 3] = ["0.3", "0.5", "0.8"];

/// Vetting-flag profiles. The first four apply one (veridical, warranted)
/// requirement pair to every record; `Mixed` requires veridical inputs at
/// the source stage and warranted inputs afterwards, the profile under
/// which warrant can actually propagate down a representation chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlagProfile {
    Uniform(bool, bool),
    Mixed,
}

impl FlagProfile {
    pub const ALL: [FlagProfile; 5] = [
        FlagProfile::Uniform(false, false),
        FlagProfile::Uniform(true, false),
        FlagProfile::Uniform(false, true),
        FlagProfile::Uniform(true, true),
        FlagProfile::Mixed,
    ];

    fn flags_for(self, process_index: usize) -> (bool, bool) {
        match self {
            FlagProfile::Uniform(rv, rw) => (rv, rw),
            FlagProfile::Mixed => {
                if process_index == 0 {
                    (true, false)
                } else {
                    (false, true)
                }
            }
        }
    }
}
/// Mark targets shared by all topologies: a source content entity and a
/// produced representation.
pub const MARK_TARGETS: [&str; 2] = ["src.ice", "cr0"];

/// The full deterministic grid: every topology crossed with every vetting
/// subset, vetting-flag profile, environment match, marks subset,
/// threshold, and mere-guess policy.
pub fn all_oracle_scenarios() -> Vec<Scenario> {
    let mut scenarios = Vec::new();
    for name in TOPOLOGIES {
        let k = process_count(name);
        let graph = topology(name);
        for vetted_mask in 0u32..(1 << k) {
            for profile in FlagProfile::ALL {
                for env_match in [true, false] {
                    for marks_mask in 0u32..4 {
                        for threshold in THRESHOLDS {
                            for allow in [false, true] {
                                let vetting: Vec<VettingRecord> = (0..k)
                                    .filter(|i| vetted_mask & (1 << i) != 0)
                                    .map(|i| {
                                        let (rv, rw) = profile.flags_for(i);
                                        VettingRecord {
                                            process: format!("p{i}"),
                                            environments: [if env_match { "e1" } else { "e2" }
                                                .to_owned()]
                                            .into(),
                                            requires_veridical_inputs: rv,
                                            requires_warranted_inputs: rw,
                                        }
                                    })
                                    .collect();
                                let mut marks = VeridicalityMarks::default();
                                for (bit, target) in MARK_TARGETS.iter().enumerate() {
                                    if marks_mask & (1 << bit) != 0 {
                                        marks.not_veridical.insert((*target).to_owned());
                                    }
                                }
                                scenarios.push(Scenario {
                                    label: format!(
                                        "{name} vetted={vetted_mask:b} profile={profile:?} \
                                         env={env_match} marks={marks_mask:b} thr={threshold} \
                                         allow={allow}"
                                    ),
                                    graph: graph.clone(),
                                    vetting,
                                    marks,
                                    options: ClassifyOptions {
                                        threshold: dec(threshold),
                                        allow_warranted_mere_guess: allow,
                                    },
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    scenarios
}

/// What the brute-force oracle concludes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleSets {
    pub rtb: BTreeSet<String>,
    pub ppcf: BTreeSet<String>,
    pub rtw: BTreeSet<String>,
    pub mere_guess: BTreeSet<String>,
}

fn is_asserted(graph: &KGraph, id: &str, class: ClassId) -> bool {
    let taxonomy = Taxonomy::builtin();
    graph
        .asserted_classes(id)
        .any(|c| taxonomy.is_subclass_of(c, class))
}

/// Believed representations, checked directly from the rule: a cognitive
/// representation fused with a confidence value whose measured decimal
/// exceeds the threshold.
fn oracle_rtb(graph: &KGraph, threshold: &Decimal) -> BTreeSet<String> {
    let mut rtb = BTreeSet::new();
    for cr in graph.node_ids() {
        if !is_asserted(graph, cr.as_str(), ClassId::CognitiveRepresentation) {
            continue;
        }
        let believed = graph.edges().any(|edge| {
            if edge.rel != RelationId::FusedWith {
                return false;
            }
            let cv = if edge.s == *cr {
                &edge.o
            } else if edge.o == *cr {
                &edge.s
            } else {
                return false;
            };
            if !is_asserted(graph, cv.as_str(), ClassId::ConfidenceValue) {
                return false;
            }
            // A measurement of the confidence value above the threshold.
            graph.edges().any(|m_edge| {
                m_edge.rel == RelationId::Describes
                    && m_edge.o == *cv
                    && is_asserted(
                        graph,
                        m_edge.s.as_str(),
                        ClassId::MeasurementInformationContentEntity,
                    )
                    && graph.edges().any(|carrier| {
                        carrier.rel == RelationId::GenericallyDependsOn
                            && carrier.s == m_edge.s
                            && graph.data().any(|d| {
                                d.s == carrier.o
                                    && d.rel == RelationId::HasDecimalValue
                                    && d.value
                                        .as_decimal()
                                        .is_some_and(|v| v.to_rational() > threshold.to_rational())
                            })
                    })
            })
        });
        if believed {
            rtb.insert(cr.as_str().to_owned());
        }
    }
    rtb
}

fn producers_of<'g>(graph: &'g KGraph, cr: &str) -> Vec<&'g str> {
    graph
        .edges()
        .filter(|e| e.rel == RelationId::HasOutput && e.o.as_str() == cr)
        .map(|e| e.s.as_str())
        .filter(|p| is_asserted(graph, p, ClassId::Process))
        .collect()
}

fn inputs_of<'g>(graph: &'g KGraph, process: &str) -> Vec<&'g str> {
    graph
        .edges()
        .filter(|e| e.rel == RelationId::HasInput && e.s.as_str() == process)
        .map(|e| e.o.as_str())
        .collect()
}

/// Does the proper-functioning rule hold for `process`, given a candidate
/// warranted set?
fn r2_holds(
    graph: &KGraph,
    process: &str,
    vetting: &[VettingRecord],
    marks: &VeridicalityMarks,
    rtw: &BTreeSet<String>,
) -> bool {
    if !is_asserted(graph, process, ClassId::CognitiveProcess) {
        return false;
    }
    let environments: Vec<&str> = graph
        .data()
        .filter(|d| d.s.as_str() == process && d.rel == RelationId::OccursInEnvironment)
        .filter_map(|d| d.value.as_nominal())
        .collect();
    'records: for record in vetting.iter().filter(|r| r.process == process) {
        if environments.is_empty()
            || !environments.iter().all(|e| record.environments.contains(*e))
        {
            continue;
        }
        // Input integrity ranges over consumed representations and
        // content entities.
        let epistemic: Vec<&str> = inputs_of(graph, process)
            .into_iter()
            .filter(|i| {
                is_asserted(graph, i, ClassId::Representation)
                    || is_asserted(graph, i, ClassId::InformationContentEntity)
            })
            .collect();
        for input in &epistemic {
            if record.requires_veridical_inputs && marks.not_veridical.contains(*input) {
                continue 'records;
            }
            if record.requires_warranted_inputs && !rtw.contains(*input) {
                continue 'records;
            }
        }
        return true;
    }
    false
}

/// Brute-force classification: try every subset of cognitive processes as
/// the properly-functioning set and keep the ones consistent with the
/// rules. Returns an error unless exactly one subset survives.
pub fn oracle_classify(scenario: &Scenario) -> Result<OracleSets, String> {
    let graph = &scenario.graph;
    let rtb = oracle_rtb(graph, &scenario.options.threshold);

    let cognitive: Vec<&str> = graph
        .node_ids()
        .map(|n| n.as_str())
        .filter(|n| is_asserted(graph, n, ClassId::CognitiveProcess))
        .collect();
    assert!(cognitive.len() <= 16, "oracle subset enumeration limit");

    let rtw_for = |ppcf: &BTreeSet<String>| -> BTreeSet<String> {
        rtb.iter()
            .filter(|cr| producers_of(graph, cr).iter().any(|p| ppcf.contains(*p)))
            .cloned()
            .collect()
    };

    let mut consistent = Vec::new();
    for subset_mask in 0u32..(1 << cognitive.len()) {
        let candidate: BTreeSet<String> = cognitive
            .iter()
            .enumerate()
            .filter(|(i, _)| subset_mask & (1 << i) != 0)
            .map(|(_, p)| (*p).to_owned())
            .collect();
        let rtw = rtw_for(&candidate);
        let ok = cognitive.iter().all(|p| {
            candidate.contains(*p)
                == r2_holds(graph, p, &scenario.vetting, &scenario.marks, &rtw)
        });
        if ok {
            consistent.push(candidate);
        }
    }
    if consistent.len() != 1 {
        return Err(format!(
            "{}: expected a unique consistent labeling, found {}",
            scenario.label,
            consistent.len()
        ));
    }
    let ppcf = consistent.pop().unwrap();
    let rtw = rtw_for(&ppcf);
    let mut mere_guess: BTreeSet<String> = rtb
        .iter()
        .filter(|cr| producers_of(graph, cr).iter().any(|p| !ppcf.contains(*p)))
        .cloned()
        .collect();
    if !scenario.options.allow_warranted_mere_guess {
        mere_guess = mere_guess.difference(&rtw).cloned().collect();
    }
    Ok(OracleSets {
        rtb,
        ppcf,
        rtw,
        mere_guess,
    })
}

/// The operations that build a scenario graph, kept as data so property
/// tests can replay them in different insertion orders.
#[derive(Debug, Clone)]
pub enum Op {
    Node(String, Vec<ClassId>),
    Edge(String, RelationId, String, Vec<(String, String)>),
    Data(String, RelationId, Literal),
}

pub fn apply_ops(ops: &[Op]) -> KGraph {
    let mut graph = KGraph::new();
    for op in ops {
        match op {
            Op::Node(id, classes) => {
                graph.add_node(id.clone(), classes.iter().copied()).unwrap();
            }
            Op::Edge(s, rel, o, attrs) => graph.add_edge(s, *rel, o, attrs.clone()).unwrap(),
            Op::Data(s, rel, value) => graph.add_data(s, *rel, value.clone()).unwrap(),
        }
    }
    graph
}

/// Shuffles nodes, edges, and data assertions independently (nodes must
/// exist before anything references them).
pub fn shuffle_ops(ops: &[Op], rng: &mut Lcg) -> Vec<Op> {
    let mut nodes: Vec<Op> = Vec::new();
    let mut rest: Vec<Op> = Vec::new();
    for op in ops {
        match op {
            Op::Node(..) => nodes.push(op.clone()),
            _ => rest.push(op.clone()),
        }
    }
    for group in [&mut nodes, &mut rest] {
        for i in (1..group.len()).rev() {
            group.swap(i, rng.below(i + 1));
        }
    }
    nodes.extend(rest);
    nodes
}

/// A randomized scenario: a layered pipeline with assorted defects —
/// missing confidence, unmeasured confidence, sub-threshold grades,
/// unvetted or wrong-environment processes, marked inputs.
pub fn random_ops(rng: &mut Lcg) -> (Vec<Op>, Vec<VettingRecord>, VeridicalityMarks, ClassifyOptions) {
    let mut ops = Vec::new();
    let mut vetting = Vec::new();
    let mut marks = VeridicalityMarks::default();
    let node = |id: &str, class: ClassId| Op::Node(id.to_owned(), vec![class]);
    let edge = |s: &str, rel: RelationId, o: &str| {
        Op::Edge(s.to_owned(), rel, o.to_owned(), Vec::new())
    };

    ops.push(node("src.ice", ClassId::InformationContentEntity));
    ops.push(node("src.ibe", ClassId::InformationBearingEntity));
    ops.push(edge("src.ice", RelationId::GenericallyDependsOn, "src.ibe"));
    let mut artifacts: Vec<String> = vec!["src".to_owned()];
    let mut representations: Vec<String> = Vec::new();

    let process_total = 1 + rng.below(4);
    for i in 0..process_total {
        let p = format!("p{i}");
        let class = if rng.below(5) == 0 {
            // Occasionally a non-cognitive process: never properly
            // functioning, but its believed outputs still become guesses.
            ClassId::Process
        } else {
            ClassId::CognitiveProcess
        };
        ops.push(node(&p, class));
        let env = if rng.below(4) == 0 { "e2" } else { "e1" };
        ops.push(Op::Data(
            p.clone(),
            RelationId::OccursInEnvironment,
            Literal::nominal(env),
        ));

        // Consume a random prior artifact pair, and sometimes a prior
        // representation.
        let source = &artifacts[rng.below(artifacts.len())];
        ops.push(edge(&p, RelationId::HasInput, &format!("{source}.ice")));
        ops.push(edge(&p, RelationId::HasInput, &format!("{source}.ibe")));
        if !representations.is_empty() && rng.below(2) == 0 {
            let cr = representations[rng.below(representations.len())].clone();
            ops.push(edge(&p, RelationId::HasInput, &cr));
        }

        // Produce a representation with one of several confidence shapes.
        let cr = format!("cr{i}");
        ops.push(node(&cr, ClassId::CognitiveRepresentation));
        ops.push(edge(&p, RelationId::HasOutput, &cr));
        match rng.below(4) {
            0 => {} // bare representation, never believed
            1 => {
                // Fused confidence without any measurement.
                let cv = format!("{cr}.cv");
                ops.push(node(&cv, ClassId::ConfidenceValue));
                ops.push(edge(&cr, RelationId::FusedWith, &cv));
            }
            _ => {
                let grades = ["0.2", "0.4", "0.5", "0.6", "0.8", "0.95"];
                let grade = grades[rng.below(grades.len())];
                let cv = format!("{cr}.cv");
                let mice = format!("{cr}.m");
                let ibe = format!("{cr}.b");
                ops.push(node(&cv, ClassId::ConfidenceValue));
                ops.push(node(&mice, ClassId::MeasurementInformationContentEntity));
                ops.push(node(&ibe, ClassId::InformationBearingEntity));
                ops.push(edge(&cr, RelationId::FusedWith, &cv));
                ops.push(edge(&mice, RelationId::Describes, &cv));
                ops.push(edge(&mice, RelationId::GenericallyDependsOn, &ibe));
                ops.push(Op::Data(
                    ibe,
                    RelationId::HasDecimalValue,
                    Literal::Decimal(dec(grade)),
                ));
            }
        }
        representations.push(cr);

        // Produce a fresh artifact pair for downstream processes.
        let stem = format!("a{i}");
        ops.push(node(&format!("{stem}.ice"), ClassId::InformationContentEntity));
        ops.push(node(&format!("{stem}.ibe"), ClassId::InformationBearingEntity));
        ops.push(edge(
            &format!("{stem}.ice"),
            RelationId::GenericallyDependsOn,
            &format!("{stem}.ibe"),
        ));
        ops.push(edge(&p, RelationId::HasOutput, &format!("{stem}.ice")));
        ops.push(edge(&p, RelationId::HasOutput, &format!("{stem}.ibe")));
        artifacts.push(stem);

        if rng.below(3) != 0 {
            vetting.push(VettingRecord {
                process: p,
                environments: [if rng.below(4) == 0 { "e2" } else { "e1" }.to_owned()].into(),
                requires_veridical_inputs: rng.below(2) == 0,
                requires_warranted_inputs: rng.below(3) == 0,
            });
        }
    }

    for stem in &artifacts {
        if rng.below(4) == 0 {
            marks.not_veridical.insert(format!("{stem}.ice"));
        }
    }
    for cr in &representations {
        if rng.below(6) == 0 {
            marks.not_veridical.insert(cr.clone());
        }
    }

    let thresholds = ["0.3", "0.5", "0.7"];
    let options = ClassifyOptions {
        threshold: dec(thresholds[rng.below(thresholds.len())]),
        allow_warranted_mere_guess: rng.below(4) == 0,
    };
    (ops, vetting, marks, options)
}

pub fn random_scenario(rng: &mut Lcg, label: String) -> Scenario {
    let (ops, vetting, marks, options) = random_ops(rng);
    Scenario {
        label,
        graph: apply_ops(&ops),
        vetting,
        marks,
        options,
    }
}
