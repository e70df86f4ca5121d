//! Turns analyst event logs into annotated workflow graphs.
//!
//! An event log is JSONL: a header line `{"format_version":"1"}` followed
//! by one event object per line. Events describe steps of investigation
//! loops — who did what, when, consuming and producing which artifacts. A
//! mapping table assigns each activity code a process class, the shared
//! environment label, an optional default confidence, and optional vetting
//! evidence.
//!
//! Tagging is deterministic: events are ordered by a full sort key before
//! node ids are assigned, so the same log and mapping produce the same
//! graph byte for byte regardless of input order. For each tagged event
//! the tagger emits a process node wired to artifact carrier/content node
//! pairs, plus — when a default confidence is configured and the event
//! produces output — the belief pattern: a cognitive representation fused
//! with a measured confidence value, concretizing the produced content.
//! Events that cannot be tagged (unmapped activity code, or a note-only
//! event without inputs and outputs) are reported with reasons, never
//! silently dropped.

use std::collections::{BTreeMap, BTreeSet};

use chrono::{DateTime, FixedOffset, SecondsFormat};
use serde::{Deserialize, Serialize};

use crate::decimal::Decimal;
use crate::graph::{GraphError, KGraph, Literal};
use crate::ontology::{ClassId, RelationId, Taxonomy};
use crate::reasoner::VettingRecord;

/// One observed workflow step.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Event {
    pub loop_id: String,
    pub iteration: u32,
    pub timestamp: DateTime<FixedOffset>,
    pub actor_id: String,
    /// Organizational unit of the actor, when the log records one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<String>,
    pub activity_code: String,
    #[serde(default)]
    pub inputs: Vec<String>,
    #[serde(default)]
    pub outputs: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonlHeader {
    format_version: String,
}

/// Parses a JSONL event log (header line, then one event per line).
pub fn load_events(text: &str) -> Result<Vec<Event>, GraphError> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, first) = lines
        .next()
        .ok_or_else(|| GraphError::Parse("event log is empty".to_owned()))?;
    let header: JsonlHeader = serde_json::from_str(first)
        .map_err(|e| GraphError::Parse(format!("line 1: {e}")))?;
    if header.format_version != "1" {
        return Err(GraphError::Version(header.format_version));
    }
    let mut events = Vec::new();
    for (idx, line) in lines {
        let event: Event = serde_json::from_str(line)
            .map_err(|e| GraphError::Parse(format!("line {}: {e}", idx + 1)))?;
        events.push(event);
    }
    Ok(events)
}

/// Serializes an event log (canonical: events in sort-key order).
pub fn save_events(events: &[Event]) -> String {
    let mut sorted: Vec<&Event> = events.iter().collect();
    sorted.sort();
    let mut out = String::from("{\"format_version\":\"1\"}\n");
    for event in sorted {
        out.push_str(&serde_json::to_string(event).expect("event serializes"));
        out.push('\n');
    }
    out
}

/// Vetting evidence declared for an activity code. When `vetted` is false
/// the evidence is recorded but produces no vetting records.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActivityVetting {
    pub vetted: bool,
    pub environments: BTreeSet<String>,
    #[serde(default)]
    pub requires_veridical_inputs: bool,
    #[serde(default)]
    pub requires_warranted_inputs: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActivityMapping {
    /// Process class instantiated for events with this code; must be a
    /// subclass of Process.
    pub class: ClassId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vetting: Option<ActivityVetting>,
}

/// Assigns graph semantics to activity codes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MappingTable {
    pub environment: String,
    /// Confidence attached to every produced representation; omit to tag
    /// without belief patterns.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub default_confidence: Option<Decimal>,
    pub activities: BTreeMap<String, ActivityMapping>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MappingFile {
    format_version: String,
    #[serde(flatten)]
    table: MappingTable,
}

impl MappingTable {
    pub fn from_json(text: &str) -> Result<MappingTable, GraphError> {
        let file: MappingFile =
            serde_json::from_str(text).map_err(|e| GraphError::Parse(e.to_string()))?;
        if file.format_version != "1" {
            return Err(GraphError::Version(file.format_version));
        }
        let taxonomy = Taxonomy::builtin();
        for (code, mapping) in &file.table.activities {
            if !taxonomy.is_subclass_of(mapping.class, ClassId::Process) {
                return Err(GraphError::Parse(format!(
                    "activity {code:?} maps to {}, which is not a process class",
                    mapping.class
                )));
            }
        }
        Ok(file.table)
    }

    pub fn to_json(&self) -> String {
        let file = MappingFile {
            format_version: "1".to_owned(),
            table: self.clone(),
        };
        let mut out = serde_json::to_string_pretty(&file).expect("mapping serializes");
        out.push('\n');
        out
    }
}

/// Flat per-process row kept alongside the graph for analytics.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorkflowRecord {
    /// Node id of the process this row describes.
    pub process: String,
    pub loop_id: String,
    pub iteration: u32,
    pub timestamp: DateTime<FixedOffset>,
    pub actor_id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<String>,
    pub activity_code: String,
    pub process_class: ClassId,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub confidence: Option<Decimal>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RecordsFile {
    format_version: String,
    records: Vec<WorkflowRecord>,
}

pub fn load_records(text: &str) -> Result<Vec<WorkflowRecord>, GraphError> {
    let file: RecordsFile =
        serde_json::from_str(text).map_err(|e| GraphError::Parse(e.to_string()))?;
    if file.format_version != "1" {
        return Err(GraphError::Version(file.format_version));
    }
    Ok(file.records)
}

pub fn save_records(records: &[WorkflowRecord]) -> String {
    let file = RecordsFile {
        format_version: "1".to_owned(),
        records: records.to_vec(),
    };
    let mut out = serde_json::to_string_pretty(&file).expect("records serialize");
    out.push('\n');
    out
}

/// An event the tagger refused, with the reason.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkippedEvent {
    pub event: Event,
    pub reason: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SkippedFile {
    format_version: String,
    skipped: Vec<SkippedEvent>,
}

pub fn save_skipped(skipped: &[SkippedEvent]) -> String {
    let file = SkippedFile {
        format_version: "1".to_owned(),
        skipped: skipped.to_vec(),
    };
    let mut out = serde_json::to_string_pretty(&file).expect("skipped serialize");
    out.push('\n');
    out
}

/// Everything tagging produces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TagResult {
    pub graph: KGraph,
    pub records: Vec<WorkflowRecord>,
    pub skipped: Vec<SkippedEvent>,
    /// Vetting records for tagged processes whose activity declares vetted
    /// evidence — ready to feed the classifier.
    pub vetting: Vec<VettingRecord>,
}

/// Tags an event log into a workflow graph. See the module docs for the
/// produced structure. Node ids follow a fixed scheme: processes are
/// `{loop}.i{iteration}.s{step}` (step index within the loop-iteration in
/// sort order, counting tagged events only), artifacts are shared
/// `art:{id}` / `ice:{id}` carrier/content pairs, actors are
/// `actor:{actor_id}`, and belief-pattern nodes hang off their process id.
pub fn tag_events(events: &[Event], mapping: &MappingTable) -> Result<TagResult, GraphError> {
    let mut sorted: Vec<&Event> = events.iter().collect();
    sorted.sort();

    let mut graph = KGraph::new();
    let mut records = Vec::new();
    let mut skipped = Vec::new();
    let mut vetting = Vec::new();
    let mut step_counter: BTreeMap<(&str, u32), u32> = BTreeMap::new();

    for event in sorted {
        let Some(activity) = mapping.activities.get(&event.activity_code) else {
            skipped.push(SkippedEvent {
                event: event.clone(),
                reason: format!("activity code {:?} has no mapping", event.activity_code),
            });
            continue;
        };
        if event.inputs.is_empty() && event.outputs.is_empty() && event.note.is_some() {
            skipped.push(SkippedEvent {
                event: event.clone(),
                reason: "note-only event (no inputs or outputs)".to_owned(),
            });
            continue;
        }

        let step = step_counter
            .entry((event.loop_id.as_str(), event.iteration))
            .or_insert(0);
        let pid = format!("{}.i{}.s{step}", event.loop_id, event.iteration);
        *step += 1;

        graph.add_node(&pid, [activity.class])?;
        let actor = format!("actor:{}", event.actor_id);
        graph.add_node(&actor, [ClassId::CognitiveSystem])?;
        graph.add_edge(&pid, RelationId::HasAgent, &actor, [])?;
        graph.add_data(
            &pid,
            RelationId::OccursInEnvironment,
            Literal::nominal(&mapping.environment),
        )?;
        let stamp = event.timestamp.to_rfc3339_opts(SecondsFormat::Secs, true);
        graph.add_data(
            &pid,
            RelationId::SourceEvent,
            Literal::nominal(format!(
                "{}/{}/{}/{stamp}/{}",
                event.loop_id, event.iteration, event.activity_code, event.actor_id
            )),
        )?;
        if let Some(note) = &event.note {
            graph.add_data(&pid, RelationId::Note, Literal::nominal(note))?;
        }

        let mut inputs: Vec<String> = event.inputs.clone();
        inputs.sort();
        inputs.dedup();
        let mut outputs: Vec<String> = event.outputs.clone();
        outputs.sort();
        outputs.dedup();
        for artifact in &inputs {
            let (carrier, content) = ensure_artifact(&mut graph, artifact)?;
            graph.add_edge(&pid, RelationId::HasInput, &carrier, [])?;
            graph.add_edge(&pid, RelationId::HasInput, &content, [])?;
        }
        for artifact in &outputs {
            let (carrier, content) = ensure_artifact(&mut graph, artifact)?;
            graph.add_edge(&pid, RelationId::HasOutput, &carrier, [])?;
            graph.add_edge(&pid, RelationId::HasOutput, &content, [])?;
        }

        let taxonomy = Taxonomy::builtin();
        let cognitive = taxonomy.is_subclass_of(activity.class, ClassId::CognitiveProcess);
        let confidence = match &mapping.default_confidence {
            Some(c) if cognitive && !outputs.is_empty() => Some(c.clone()),
            _ => None,
        };
        if let Some(c) = &confidence {
            let cr = format!("{pid}.cr");
            let cv = format!("{pid}.cv");
            let mice = format!("{pid}.cmice");
            let ibe = format!("{pid}.cibe");
            graph.add_node(&cr, [ClassId::CognitiveRepresentation])?;
            graph.add_node(&cv, [ClassId::ConfidenceValue])?;
            graph.add_node(&mice, [ClassId::MeasurementInformationContentEntity])?;
            graph.add_node(&ibe, [ClassId::InformationBearingEntity])?;
            graph.add_edge(&pid, RelationId::HasOutput, &cr, [])?;
            graph.add_edge(&cr, RelationId::FusedWith, &cv, [])?;
            graph.add_edge(&mice, RelationId::Describes, &cv, [])?;
            graph.add_edge(&mice, RelationId::GenericallyDependsOn, &ibe, [])?;
            graph.add_data(&ibe, RelationId::HasDecimalValue, Literal::Decimal(c.clone()))?;
            for artifact in &outputs {
                graph.add_edge(
                    &cr,
                    RelationId::Concretizes,
                    &format!("ice:{artifact}"),
                    [("mode".to_owned(), "original".to_owned())],
                )?;
            }
            graph.add_data(
                &cr,
                RelationId::HasNominalValue,
                Literal::nominal(format!("asserts: {}", outputs.join(", "))),
            )?;
        }

        if let Some(declared) = &activity.vetting {
            if declared.vetted {
                vetting.push(VettingRecord {
                    process: pid.clone(),
                    environments: declared.environments.clone(),
                    requires_veridical_inputs: declared.requires_veridical_inputs,
                    requires_warranted_inputs: declared.requires_warranted_inputs,
                });
            }
        }

        records.push(WorkflowRecord {
            process: pid,
            loop_id: event.loop_id.clone(),
            iteration: event.iteration,
            timestamp: event.timestamp,
            actor_id: event.actor_id.clone(),
            unit: event.unit.clone(),
            activity_code: event.activity_code.clone(),
            process_class: activity.class,
            inputs,
            outputs,
            confidence,
            note: event.note.clone(),
        });
    }

    Ok(TagResult {
        graph,
        records,
        skipped,
        vetting,
    })
}

/// Ensures carrier and content nodes for one artifact id, returning
/// `(art:{id}, ice:{id})`. Artifacts are shared across all events.
fn ensure_artifact(graph: &mut KGraph, artifact: &str) -> Result<(String, String), GraphError> {
    let carrier = format!("art:{artifact}");
    let content = format!("ice:{artifact}");
    graph.add_node(&carrier, [ClassId::InformationBearingEntity])?;
    graph.add_node(&content, [ClassId::InformationContentEntity])?;
    graph.add_edge(&content, RelationId::GenericallyDependsOn, &carrier, [])?;
    graph.add_data(&carrier, RelationId::HasNominalValue, Literal::nominal(artifact))?;
    Ok((carrier, content))
}
