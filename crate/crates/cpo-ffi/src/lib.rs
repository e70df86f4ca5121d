//! C ABI for the `cpo-core` knowledge-graph engine.
//!
//! # Conventions
//!
//! * Every string crossing the boundary is NUL-terminated UTF-8.
//! * Functions return [`CpoStatus`]; on any status other than `Ok` (and on
//!   `Validation` from [`cpo_graph_validate`], which still writes its
//!   report) output parameters are left untouched and a human-readable
//!   message is available from [`cpo_last_error`].
//! * Strings written through `char **` out-parameters are owned by the
//!   caller and must be released with [`cpo_string_free`]. Graph handles
//!   must be released with [`cpo_graph_free`]. The pointer returned by
//!   [`cpo_version`] is static and must not be freed.
//! * Out-parameters may be NULL wherever documented; the corresponding
//!   output is then skipped.
//! * Handles are plain data guarded by no lock; share a handle across
//!   threads only with external synchronization.
//!
//! The payload formats (graph JSON, triples, event logs, mapping tables,
//! vetting records, veridicality marks, outcomes, generator specs) are
//! exactly the file formats of the `cpo` command-line tool, so artifacts
//! move freely between the CLI and bindings built on this ABI.

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::str::FromStr;

use cpo_core::decimal::Decimal;
use cpo_core::graph::json::{from_json, to_json};
use cpo_core::graph::triples::{from_triples, to_triples};
use cpo_core::graph::{KGraph, Violation, ViolationKind};
use cpo_core::ontology::{ClassId, Taxonomy};
use cpo_core::reasoner::{self, ClassifyOptions, VeridicalityMarks, VettingRecord};
use cpo_core::shapes::{self, ShapeReport};
use cpo_core::synthgen::{self, GenSpec};
use cpo_core::{analytics, tagger};
use serde::Serialize;

/// Result of every fallible call in this ABI.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CpoStatus {
    /// The call succeeded and all requested outputs were written.
    Ok = 0,
    /// A required pointer argument was NULL.
    NullPointer = 1,
    /// An input string was not valid UTF-8.
    Utf8 = 2,
    /// An input could not be parsed or accepted (malformed
    /// JSON/triples/JSONL, unknown class or relation name, malformed
    /// decimal, out-of-range threshold or generator-spec value).
    Parse = 3,
    /// The input parsed but is semantically invalid: wellformedness
    /// violations, nonconforming shapes, or events inconsistent with
    /// their mapping table.
    Validation = 4,
    /// The reasoner rejected the graph (pipeline cycle, dangling
    /// reference) or a result no longer matches the graph it came from.
    Reasoner = 5,
    /// An internal invariant failed; a bug, not a caller error.
    Internal = 6,
}

/// An in-memory workflow graph (opaque).
pub struct CpoGraph {
    inner: KGraph,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure {
    status: CpoStatus,
    message: String,
}

impl Failure {
    fn new(status: CpoStatus, message: impl Into<String>) -> Failure {
        Failure {
            status,
            message: message.into(),
        }
    }
}

type FfiResult<T> = Result<T, Failure>;

/// Runs one boundary call: clears the error slot, catches panics, and
/// records the failure message for [`cpo_last_error`].
fn boundary(body: impl FnOnce() -> FfiResult<()>) -> CpoStatus {
    LAST_ERROR.with(|slot| slot.borrow_mut().take());
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => CpoStatus::Ok,
        Ok(Err(failure)) => {
            let text = CString::new(failure.message.replace('\0', "\u{fffd}"))
                .expect("NUL bytes replaced above");
            LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(text));
            failure.status
        }
        Err(panic) => {
            let detail = panic
                .downcast_ref::<&str>()
                .map(|s| (*s).to_owned())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".to_owned());
            let text = CString::new(format!("internal panic: {detail}").replace('\0', "\u{fffd}"))
                .expect("NUL bytes replaced above");
            LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(text));
            CpoStatus::Internal
        }
    }
}

/// Reads a required input string.
///
/// # Safety
/// `ptr` must be NULL or point to a NUL-terminated buffer.
unsafe fn read_str<'a>(name: &str, ptr: *const c_char) -> FfiResult<&'a str> {
    if ptr.is_null() {
        return Err(Failure::new(
            CpoStatus::NullPointer,
            format!("{name} must not be NULL"),
        ));
    }
    unsafe { CStr::from_ptr(ptr) }.to_str().map_err(|e| {
        Failure::new(CpoStatus::Utf8, format!("{name} is not valid UTF-8: {e}"))
    })
}

/// Reads an optional input string; NULL means absent.
///
/// # Safety
/// `ptr` must be NULL or point to a NUL-terminated buffer.
unsafe fn read_opt_str<'a>(name: &str, ptr: *const c_char) -> FfiResult<Option<&'a str>> {
    if ptr.is_null() {
        Ok(None)
    } else {
        unsafe { read_str(name, ptr) }.map(Some)
    }
}

/// Hands a Rust string to the caller. The text never contains NUL bytes
/// (it comes from the crate's serializers), but a replacement keeps the
/// boundary total.
fn give_string(out: *mut *mut c_char, text: String) -> FfiResult<()> {
    if out.is_null() {
        return Ok(());
    }
    let c = CString::new(text.replace('\0', "\u{fffd}")).expect("NUL bytes replaced above");
    unsafe { *out = c.into_raw() };
    Ok(())
}

fn require_out<T>(name: &str, out: *mut T) -> FfiResult<()> {
    if out.is_null() {
        Err(Failure::new(
            CpoStatus::NullPointer,
            format!("{name} must not be NULL"),
        ))
    } else {
        Ok(())
    }
}

/// Borrows the graph behind a handle.
///
/// # Safety
/// `ptr` must be NULL or a handle from this library that has not been freed.
unsafe fn borrow_graph<'a>(name: &str, ptr: *const CpoGraph) -> FfiResult<&'a KGraph> {
    if ptr.is_null() {
        return Err(Failure::new(
            CpoStatus::NullPointer,
            format!("{name} must not be NULL"),
        ));
    }
    Ok(unsafe { &(*ptr).inner })
}

fn parse_failure(context: &str, error: impl std::fmt::Display) -> Failure {
    Failure::new(CpoStatus::Parse, format!("{context}: {error}"))
}

fn load_vetting(text: Option<&str>) -> FfiResult<Vec<VettingRecord>> {
    match text {
        None => Ok(Vec::new()),
        Some(t) => VettingRecord::load_many(t).map_err(|e| parse_failure("vetting records", e)),
    }
}

fn load_marks(text: Option<&str>) -> FfiResult<VeridicalityMarks> {
    match text {
        None => Ok(VeridicalityMarks::default()),
        Some(t) => VeridicalityMarks::from_json(t).map_err(|e| parse_failure("veridicality marks", e)),
    }
}

fn parse_options(threshold: Option<&str>, allow_warranted_mere_guess: bool) -> FfiResult<ClassifyOptions> {
    let mut options = ClassifyOptions::default();
    if let Some(raw) = threshold {
        let value = Decimal::parse(raw)
            .map_err(|e| parse_failure(&format!("threshold {raw:?}"), e))?;
        if !value.in_unit_range() {
            return Err(Failure::new(
                CpoStatus::Parse,
                format!("threshold {value} is outside [0, 1]"),
            ));
        }
        options.threshold = value;
    }
    options.allow_warranted_mere_guess = allow_warranted_mere_guess;
    Ok(options)
}

/// Same layout as the CLI's validation report file.
#[derive(Serialize)]
struct ValidationReport<'a> {
    format_version: &'static str,
    conforms: bool,
    violations: &'a [Violation],
    shapes: &'a [ShapeReport],
}

/// Library version as a static string. Never free this pointer.
#[no_mangle]
pub extern "C" fn cpo_version() -> *const c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr().cast()
}

/// Writes the built-in class taxonomy in its canonical text form.
///
/// # Safety
/// `out_text` must be NULL or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cpo_taxonomy_export(out_text: *mut *mut c_char) -> CpoStatus {
    boundary(|| {
        require_out("out_text", out_text)?;
        give_string(out_text, Taxonomy::builtin().export_text())
    })
}

/// Sets `*out` to true when class `sub` is `sup` or a descendant of it.
/// Class names are spelled as in the taxonomy export; unknown names fail
/// with `Parse`.
///
/// # Safety
/// `sub` and `sup` must be NUL-terminated; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cpo_class_is_subclass_of(
    sub: *const c_char,
    sup: *const c_char,
    out: *mut bool,
) -> CpoStatus {
    boundary(|| {
        let sub = unsafe { read_str("sub", sub) }?;
        let sup = unsafe { read_str("sup", sup) }?;
        require_out("out", out)?;
        let sub = ClassId::from_str(sub).map_err(|e| parse_failure("sub", e))?;
        let sup = ClassId::from_str(sup).map_err(|e| parse_failure("sup", e))?;
        unsafe { *out = Taxonomy::builtin().is_subclass_of(sub, sup) };
        Ok(())
    })
}

/// Parses a graph from its JSON interchange form into a new handle.
///
/// # Safety
/// `text` must be NUL-terminated; `out_graph` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cpo_graph_from_json(
    text: *const c_char,
    out_graph: *mut *mut CpoGraph,
) -> CpoStatus {
    boundary(|| {
        let text = unsafe { read_str("text", text) }?;
        require_out("out_graph", out_graph)?;
        let inner = from_json(text).map_err(|e| parse_failure("graph JSON", e))?;
        unsafe { *out_graph = Box::into_raw(Box::new(CpoGraph { inner })) };
        Ok(())
    })
}

/// Parses a graph from the line-oriented triples form into a new handle.
///
/// # Safety
/// `text` must be NUL-terminated; `out_graph` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cpo_graph_from_triples(
    text: *const c_char,
    out_graph: *mut *mut CpoGraph,
) -> CpoStatus {
    boundary(|| {
        let text = unsafe { read_str("text", text) }?;
        require_out("out_graph", out_graph)?;
        let inner = from_triples(text).map_err(|e| parse_failure("graph triples", e))?;
        unsafe { *out_graph = Box::into_raw(Box::new(CpoGraph { inner })) };
        Ok(())
    })
}

/// Writes a graph's canonical JSON interchange form.
///
/// # Safety
/// `graph` must be a live handle; `out_text` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cpo_graph_to_json(
    graph: *const CpoGraph,
    out_text: *mut *mut c_char,
) -> CpoStatus {
    boundary(|| {
        let graph = unsafe { borrow_graph("graph", graph) }?;
        require_out("out_text", out_text)?;
        give_string(out_text, to_json(graph))
    })
}

/// Writes a graph's asserted content in the line-oriented triples form.
/// Derived classes and system annotations are not part of that form.
///
/// # Safety
/// `graph` must be a live handle; `out_text` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cpo_graph_to_triples(
    graph: *const CpoGraph,
    out_text: *mut *mut c_char,
) -> CpoStatus {
    boundary(|| {
        let graph = unsafe { borrow_graph("graph", graph) }?;
        require_out("out_text", out_text)?;
        give_string(out_text, to_triples(graph))
    })
}

/// Releases a graph handle. NULL is a no-op.
///
/// # Safety
/// `graph` must be NULL or a handle from this library, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn cpo_graph_free(graph: *mut CpoGraph) {
    if !graph.is_null() {
        drop(unsafe { Box::from_raw(graph) });
    }
}

/// Checks wellformedness and shape conformance, writing the same JSON
/// report the CLI produces. Returns `Ok` when the graph conforms and
/// `Validation` when it does not — the report is written in both cases.
/// `vetting_json`, `marks_json`, and `threshold` may be NULL (no records,
/// no marks, default threshold); shape checking consults a classification,
/// so a pipeline cycle or dangling reference fails with `Reasoner`.
///
/// # Safety
/// `graph` must be a live handle; string inputs must be NULL or
/// NUL-terminated; `out_report` must be NULL or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cpo_graph_validate(
    graph: *const CpoGraph,
    vetting_json: *const c_char,
    marks_json: *const c_char,
    threshold: *const c_char,
    allow_warranted_mere_guess: bool,
    out_report: *mut *mut c_char,
) -> CpoStatus {
    boundary(|| {
        let graph = unsafe { borrow_graph("graph", graph) }?;
        let vetting = load_vetting(unsafe { read_opt_str("vetting_json", vetting_json) }?)?;
        let marks = load_marks(unsafe { read_opt_str("marks_json", marks_json) }?)?;
        let options = parse_options(unsafe { read_opt_str("threshold", threshold) }?, allow_warranted_mere_guess)?;

        let violations = graph.validate_wellformed();
        let mut shape_reports = Vec::new();
        if violations.is_empty() {
            let classification = reasoner::classify(graph, &vetting, &marks, &options)
                .map_err(|e| Failure::new(CpoStatus::Reasoner, e.to_string()))?;
            shape_reports = shapes::check_all(graph, &classification);
        }
        let nonconforming = shape_reports.iter().filter(|r| !r.conforms).count();
        let conforms = violations.is_empty() && nonconforming == 0;

        let report = ValidationReport {
            format_version: "1",
            conforms,
            violations: &violations,
            shapes: &shape_reports,
        };
        let mut text = serde_json::to_string_pretty(&report)
            .map_err(|e| Failure::new(CpoStatus::Internal, format!("report serialization: {e}")))?;
        text.push('\n');
        give_string(out_report, text)?;

        if conforms {
            Ok(())
        } else {
            let summary = violations
                .first()
                .map(|v| format!("wellformedness: {} {}: {}", v.kind, v.subject, v.detail))
                .unwrap_or_else(|| format!("{nonconforming} focus node(s) do not conform"));
            Err(Failure::new(CpoStatus::Validation, summary))
        }
    })
}

/// Shared front half of classify/annotate: the CLI's pre-classification
/// wellformedness gate (dangling references are left to the reasoner so
/// their status is `Reasoner`, as in the CLI's exit codes).
fn classify_inner(
    graph: &KGraph,
    vetting: &[VettingRecord],
    marks: &VeridicalityMarks,
    options: &ClassifyOptions,
) -> FfiResult<reasoner::Classification> {
    let mut violations = graph.validate_wellformed_local();
    violations.retain(|v| v.kind != ViolationKind::DanglingRef);
    if let Some(v) = violations.first() {
        return Err(Failure::new(
            CpoStatus::Validation,
            format!("wellformedness: {} {}: {}", v.kind, v.subject, v.detail),
        ));
    }
    reasoner::classify(graph, vetting, marks, options)
        .map_err(|e| Failure::new(CpoStatus::Reasoner, e.to_string()))
}

/// Classifies belief and warrant status, writing the classification result
/// in the CLI's JSON result format. `vetting_json`, `marks_json`, and
/// `threshold` may be NULL as in [`cpo_graph_validate`].
///
/// # Safety
/// `graph` must be a live handle; string inputs must be NULL or
/// NUL-terminated; `out_result` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cpo_graph_classify(
    graph: *const CpoGraph,
    vetting_json: *const c_char,
    marks_json: *const c_char,
    threshold: *const c_char,
    allow_warranted_mere_guess: bool,
    out_result: *mut *mut c_char,
) -> CpoStatus {
    boundary(|| {
        let graph = unsafe { borrow_graph("graph", graph) }?;
        require_out("out_result", out_result)?;
        let vetting = load_vetting(unsafe { read_opt_str("vetting_json", vetting_json) }?)?;
        let marks = load_marks(unsafe { read_opt_str("marks_json", marks_json) }?)?;
        let options = parse_options(unsafe { read_opt_str("threshold", threshold) }?, allow_warranted_mere_guess)?;
        let classification = classify_inner(graph, &vetting, &marks, &options)?;
        give_string(out_result, classification.to_json(None))
    })
}

/// Classifies and writes the result back into the graph in place: derived
/// classes for believed / properly-functioning / warranted nodes and a
/// system annotation on mere guesses. Asserted content is unchanged, so
/// the call is idempotent.
///
/// # Safety
/// `graph` must be a live handle with no other outstanding borrow; string
/// inputs must be NULL or NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn cpo_graph_annotate(
    graph: *mut CpoGraph,
    vetting_json: *const c_char,
    marks_json: *const c_char,
    threshold: *const c_char,
    allow_warranted_mere_guess: bool,
) -> CpoStatus {
    boundary(|| {
        if graph.is_null() {
            return Err(Failure::new(CpoStatus::NullPointer, "graph must not be NULL"));
        }
        let graph = unsafe { &mut (*graph).inner };
        let vetting = load_vetting(unsafe { read_opt_str("vetting_json", vetting_json) }?)?;
        let marks = load_marks(unsafe { read_opt_str("marks_json", marks_json) }?)?;
        let options = parse_options(unsafe { read_opt_str("threshold", threshold) }?, allow_warranted_mere_guess)?;
        let classification = classify_inner(graph, &vetting, &marks, &options)?;
        reasoner::annotate(graph, &classification)
            .map_err(|e| Failure::new(CpoStatus::Reasoner, e.to_string()))
    })
}

/// Tags a JSONL event log into a workflow graph using a mapping table.
/// Optional outputs: the tagged-step records (JSONL), vetting records
/// derived from the mapping (JSON), and skipped events with reasons
/// (JSONL). Unmappable events are skipped, never an error; malformed input
/// fails with `Parse` and an inconsistent mapping with `Validation`.
///
/// # Safety
/// `events_jsonl` and `mapping_json` must be NUL-terminated; out-pointers
/// must be NULL or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cpo_tag(
    events_jsonl: *const c_char,
    mapping_json: *const c_char,
    out_graph: *mut *mut CpoGraph,
    out_records: *mut *mut c_char,
    out_vetting: *mut *mut c_char,
    out_skipped: *mut *mut c_char,
) -> CpoStatus {
    boundary(|| {
        let events_text = unsafe { read_str("events_jsonl", events_jsonl) }?;
        let mapping_text = unsafe { read_str("mapping_json", mapping_json) }?;
        let events = tagger::load_events(events_text).map_err(|e| parse_failure("event log", e))?;
        let mapping = tagger::MappingTable::from_json(mapping_text)
            .map_err(|e| parse_failure("mapping table", e))?;
        let result = tagger::tag_events(&events, &mapping)
            .map_err(|e| Failure::new(CpoStatus::Validation, e.to_string()))?;
        give_string(out_records, tagger::save_records(&result.records))?;
        give_string(out_vetting, VettingRecord::save_many(&result.vetting))?;
        give_string(out_skipped, tagger::save_skipped(&result.skipped))?;
        if !out_graph.is_null() {
            let handle = Box::new(CpoGraph { inner: result.graph });
            unsafe { *out_graph = Box::into_raw(handle) };
        }
        Ok(())
    })
}

/// Runs outcome analytics over tagged-step records (JSONL) and an
/// outcomes file (JSON), writing the CLI's analysis report JSON. When
/// `by_unit` is true the per-unit comparison section is included.
///
/// # Safety
/// `records_jsonl` and `outcomes_json` must be NUL-terminated;
/// `out_report` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cpo_analyze(
    records_jsonl: *const c_char,
    outcomes_json: *const c_char,
    by_unit: bool,
    out_report: *mut *mut c_char,
) -> CpoStatus {
    boundary(|| {
        let records_text = unsafe { read_str("records_jsonl", records_jsonl) }?;
        let outcomes_text = unsafe { read_str("outcomes_json", outcomes_json) }?;
        require_out("out_report", out_report)?;
        let records =
            tagger::load_records(records_text).map_err(|e| parse_failure("records", e))?;
        let outcomes: BTreeMap<String, Decimal> =
            analytics::load_outcomes(outcomes_text).map_err(|e| parse_failure("outcomes", e))?;
        let report = analytics::analyze(&records, &outcomes, by_unit);
        give_string(out_report, report.to_json())
    })
}

/// Generates a synthetic corpus from a generator spec (JSON) and a seed,
/// in the CLI's four file formats: events (JSONL), mapping table (JSON),
/// outcomes (JSON), and veridicality marks (JSON). Each out-pointer may be
/// NULL to skip that output. A malformed or out-of-range spec fails with
/// `Parse`. Generation is deterministic in (spec, seed).
///
/// # Safety
/// `spec_json` must be NUL-terminated; out-pointers must be NULL or valid
/// for writes.
#[no_mangle]
pub unsafe extern "C" fn cpo_generate(
    spec_json: *const c_char,
    seed: u64,
    out_events: *mut *mut c_char,
    out_mapping: *mut *mut c_char,
    out_outcomes: *mut *mut c_char,
    out_marks: *mut *mut c_char,
) -> CpoStatus {
    boundary(|| {
        let spec_text = unsafe { read_str("spec_json", spec_json) }?;
        let spec = GenSpec::from_json(spec_text).map_err(|e| parse_failure("generator spec", e))?;
        let output = synthgen::generate(&spec, seed)
            .map_err(|e| Failure::new(CpoStatus::Validation, e.to_string()))?;
        give_string(out_events, tagger::save_events(&output.events))?;
        give_string(out_mapping, output.mapping.to_json())?;
        give_string(out_outcomes, analytics::save_outcomes(&output.outcomes))?;
        give_string(out_marks, output.marks.to_json())?;
        Ok(())
    })
}

/// Message for the most recent failure on this thread, or NULL when the
/// most recent call succeeded. The pointer is borrowed: it stays valid
/// until the next library call on the same thread. Do not free it.
#[no_mangle]
pub extern "C" fn cpo_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map_or(std::ptr::null(), |text| text.as_ptr())
    })
}

/// Releases a string produced by this library. NULL is a no-op.
///
/// # Safety
/// `text` must be NULL or a string from this library, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn cpo_string_free(text: *mut c_char) {
    if !text.is_null() {
        drop(unsafe { CString::from_raw(text) });
    }
}
