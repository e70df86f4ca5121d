//! Command-line entry point wiring all `cpo_core` modules together.
//!
//! Human-readable summaries go to standard output; machine-readable
//! artifacts are written only to files named by flags, so golden outputs
//! stay stable. Machine outputs carry no timestamps unless `--stamp` is
//! given. `CPO_NO_COLOR` disables ANSI styling.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use cpo_core::decimal::Decimal;
use cpo_core::graph::{json, triples, KGraph, Violation, ViolationKind};
use cpo_core::ontology::Taxonomy;
use cpo_core::reasoner::{self, ClassifyOptions, VeridicalityMarks, VettingRecord};
use cpo_core::shapes::{self, ShapeReport};
use cpo_core::{analytics, synthgen, tagger};

const EXIT_CODES: &str = "Exit codes:
  0  success (all checks conform)
  1  usage or I/O error
  2  validation or shape violations (including unparseable input)
  3  reasoner error (pipeline cycle, dangling reference, stale result)";

#[derive(Parser)]
#[command(
    name = "cpo",
    version,
    about = "Typed knowledge-graph engine for cognitive-process workflow graphs",
    after_help = EXIT_CODES
)]
struct Cli {
    /// Add a generation timestamp to machine outputs.
    #[arg(long, global = true)]
    stamp: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check well-formedness and shape conformance of a graph.
    #[command(after_help = EXIT_CODES)]
    Validate(ValidateArgs),
    /// Infer believed / properly-functioning / warranted / mere-guess status.
    #[command(after_help = EXIT_CODES)]
    Classify(ClassifyArgs),
    /// Tag an event log into a workflow graph.
    #[command(after_help = EXIT_CODES)]
    Tag(TagArgs),
    /// Outcome analytics over tagged workflow records.
    #[command(after_help = EXIT_CODES)]
    Analyze(AnalyzeArgs),
    /// Generate a synthetic corpus from a spec and seed.
    #[command(after_help = EXIT_CODES)]
    Gen(GenArgs),
    /// Re-serialize a graph, or export the built-in taxonomy.
    #[command(after_help = EXIT_CODES)]
    Export(ExportArgs),
}

#[derive(Args)]
struct ValidateArgs {
    /// Graph file (canonical JSON or triples; detected by content).
    graph: PathBuf,
    /// Vetting records consulted during classification.
    #[arg(long)]
    vetting: Option<PathBuf>,
    /// Veridicality marks consulted during classification.
    #[arg(long)]
    marks: Option<PathBuf>,
    /// Positive-confidence threshold (strict, default 0.5).
    #[arg(long)]
    threshold: Option<String>,
    /// Let warranted representations also be flagged as mere guesses.
    #[arg(long)]
    allow_warranted_mere_guess: bool,
    /// Write the full validation report (JSON) here.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct ClassifyArgs {
    /// Graph file (canonical JSON or triples; detected by content).
    graph: PathBuf,
    /// Vetting records file.
    #[arg(long)]
    vetting: Option<PathBuf>,
    /// Veridicality marks file.
    #[arg(long)]
    marks: Option<PathBuf>,
    /// Positive-confidence threshold (strict, default 0.5).
    #[arg(long)]
    threshold: Option<String>,
    /// Let warranted representations also be flagged as mere guesses.
    #[arg(long)]
    allow_warranted_mere_guess: bool,
    /// Write the classification (JSON) here.
    #[arg(short = 'o', long = "out")]
    out: Option<PathBuf>,
    /// Write the graph with derived classes and system annotations here.
    #[arg(long)]
    annotated_out: Option<PathBuf>,
    /// Print the derivation tree for one node.
    #[arg(long, value_name = "NODE")]
    explain: Option<String>,
}

#[derive(Args)]
struct TagArgs {
    /// Event log (JSONL).
    #[arg(long)]
    log: PathBuf,
    /// Activity mapping table (JSON).
    #[arg(long = "map")]
    map: PathBuf,
    /// Write the tagged graph (canonical JSON) here.
    #[arg(short = 'o', long = "out")]
    out: PathBuf,
    /// Write per-process workflow records here.
    #[arg(long)]
    records_out: Option<PathBuf>,
    /// Write skipped events and their reasons here.
    #[arg(long)]
    skipped_out: Option<PathBuf>,
    /// Write vetting records derived from the mapping here.
    #[arg(long)]
    vetting_out: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Workflow records file (from `tag --records-out`).
    #[arg(long)]
    records: PathBuf,
    /// Per-loop outcome scores file.
    #[arg(long)]
    outcomes: PathBuf,
    /// Add the per-unit outcome comparison section.
    #[arg(long)]
    by_unit: bool,
    /// Write the analytics report (JSON) here.
    #[arg(long)]
    report: PathBuf,
}

#[derive(Args)]
struct GenArgs {
    /// Generation spec (JSON).
    #[arg(long)]
    spec: PathBuf,
    /// Random seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Override the spec's loop count.
    #[arg(long)]
    loops: Option<u32>,
    /// Override the spec's iterations per loop.
    #[arg(long)]
    iterations: Option<u32>,
    /// Directory for events.jsonl, mapping.json, outcomes.json, marks.json.
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(Args)]
struct ExportArgs {
    /// Graph file to re-serialize (omit for --format taxonomy).
    input: Option<PathBuf>,
    /// Output format.
    #[arg(long, value_enum)]
    format: ExportFormat,
    /// Write the export here.
    #[arg(short = 'o', long = "out")]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExportFormat {
    /// Canonical JSON graph.
    Canonical,
    /// Line-oriented triples (asserted facts only).
    Triples,
    /// The built-in class taxonomy and relation vocabulary.
    Taxonomy,
}

/// A terminal failure: message for standard error plus the exit code.
struct Failure {
    code: u8,
    message: String,
}

type CliResult<T> = Result<T, Failure>;

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = u8::from(err.use_stderr());
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    let stamp = cli.stamp.then(now_rfc3339);
    let result = match cli.command {
        Command::Validate(args) => cmd_validate(&args, stamp.as_deref()),
        Command::Classify(args) => cmd_classify(&args, stamp.as_deref()),
        Command::Tag(args) => cmd_tag(&args),
        Command::Analyze(args) => cmd_analyze(&args, stamp.as_deref()),
        Command::Gen(args) => cmd_gen(&args),
        Command::Export(args) => cmd_export(&args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("{} {}", paint("31", "error:"), failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn now_rfc3339() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}

fn paint(code: &str, text: &str) -> String {
    if std::env::var_os("CPO_NO_COLOR").is_some() {
        text.to_owned()
    } else {
        format!("\x1b[{code}m{text}\x1b[0m")
    }
}

fn read_file(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| fail(1, format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|e| fail(1, format!("{}: {e}", path.display())))
}

/// Loads a graph from canonical JSON or the triples format, detected by
/// the first significant character.
fn load_graph(path: &Path) -> CliResult<KGraph> {
    let text = read_file(path)?;
    let parsed = if text.trim_start().starts_with('{') {
        json::from_json(&text)
    } else {
        triples::from_triples(&text)
    };
    parsed.map_err(|e| fail(2, format!("{}: {e}", path.display())))
}

fn load_vetting(path: Option<&PathBuf>) -> CliResult<Vec<VettingRecord>> {
    match path {
        None => Ok(Vec::new()),
        Some(p) => VettingRecord::load_many(&read_file(p)?)
            .map_err(|e| fail(2, format!("{}: {e}", p.display()))),
    }
}

fn load_marks(path: Option<&PathBuf>) -> CliResult<VeridicalityMarks> {
    match path {
        None => Ok(VeridicalityMarks::default()),
        Some(p) => VeridicalityMarks::from_json(&read_file(p)?)
            .map_err(|e| fail(2, format!("{}: {e}", p.display()))),
    }
}

fn parse_options(threshold: &Option<String>, allow_warranted_mere_guess: bool) -> CliResult<ClassifyOptions> {
    let mut options = ClassifyOptions::default();
    if let Some(raw) = threshold {
        let value =
            Decimal::parse(raw).map_err(|e| fail(1, format!("invalid --threshold {raw:?}: {e}")))?;
        if !value.in_unit_range() {
            return Err(fail(1, format!("--threshold {value} is outside [0, 1]")));
        }
        options.threshold = value;
    }
    options.allow_warranted_mere_guess = allow_warranted_mere_guess;
    Ok(options)
}

fn print_violations(violations: &[Violation]) {
    for v in violations {
        println!("  {} {}: {}", paint("31", &format!("[{}]", v.kind)), v.subject, v.detail);
    }
}

fn set_line(label: &str, set: &std::collections::BTreeSet<cpo_core::graph::NodeId>) -> String {
    let members: Vec<&str> = set.iter().map(|n| n.as_str()).collect();
    format!("  {label:<20} {:>3}  {}", members.len(), members.join(", "))
}

#[derive(Serialize)]
struct ValidationReport<'a> {
    format_version: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    generated_at: Option<&'a str>,
    conforms: bool,
    violations: &'a [Violation],
    shapes: &'a [ShapeReport],
}

fn cmd_validate(args: &ValidateArgs, stamp: Option<&str>) -> CliResult<u8> {
    let graph = load_graph(&args.graph)?;
    let vetting = load_vetting(args.vetting.as_ref())?;
    let marks = load_marks(args.marks.as_ref())?;
    let options = parse_options(&args.threshold, args.allow_warranted_mere_guess)?;

    println!(
        "graph: {} nodes, {} edges, {} data assertions",
        graph.node_ids().count(),
        graph.edges().count(),
        graph.data().count()
    );

    let violations = graph.validate_wellformed();
    let mut shape_reports = Vec::new();
    if violations.is_empty() {
        // Structure is sound, so classification cannot fail; shapes are
        // checked against the inferred statuses.
        let classification = reasoner::classify(&graph, &vetting, &marks, &options)
            .map_err(|e| fail(3, e.to_string()))?;
        shape_reports = shapes::check_all(&graph, &classification);
    } else {
        println!("well-formedness violations:");
        print_violations(&violations);
    }

    let nonconforming: Vec<&ShapeReport> = shape_reports.iter().filter(|r| !r.conforms).collect();
    if !shape_reports.is_empty() {
        println!(
            "shapes: {} of {} focus nodes conform",
            shape_reports.len() - nonconforming.len(),
            shape_reports.len()
        );
        for report in &nonconforming {
            println!("  {} {} does not conform:", paint("31", report.shape.id()), report.focus);
            for missing in &report.violated {
                println!("    missing: {missing}");
            }
        }
    }

    let conforms = violations.is_empty() && nonconforming.is_empty();
    if let Some(path) = &args.report {
        let report = ValidationReport {
            format_version: "1",
            generated_at: stamp,
            conforms,
            violations: &violations,
            shapes: &shape_reports,
        };
        let mut text = serde_json::to_string_pretty(&report).expect("report serializes");
        text.push('\n');
        write_file(path, &text)?;
    }

    if conforms {
        println!("result: {}", paint("32", "ok"));
        Ok(0)
    } else {
        println!("result: {}", paint("31", "violations found"));
        Ok(2)
    }
}

fn cmd_classify(args: &ClassifyArgs, stamp: Option<&str>) -> CliResult<u8> {
    let graph = load_graph(&args.graph)?;
    let vetting = load_vetting(args.vetting.as_ref())?;
    let marks = load_marks(args.marks.as_ref())?;
    let options = parse_options(&args.threshold, args.allow_warranted_mere_guess)?;

    // Structural violations are reported up front — except dangling
    // references and pipeline cycles, which are the reasoner's to reject.
    let mut violations = graph.validate_wellformed_local();
    violations.retain(|v| v.kind != ViolationKind::DanglingRef);
    if !violations.is_empty() {
        println!("well-formedness violations:");
        print_violations(&violations);
        println!("result: {}", paint("31", "violations found"));
        return Ok(2);
    }

    let classification =
        reasoner::classify(&graph, &vetting, &marks, &options).map_err(|e| fail(3, e.to_string()))?;

    println!("threshold: {}", classification.threshold);
    println!("{}", set_line("believed", &classification.rtb));
    println!("{}", set_line("properly functioning", &classification.ppcf));
    println!("{}", set_line("warranted", &classification.rtw));
    println!("{}", set_line("mere guess", &classification.mere_guess));
    for note in &classification.notes {
        println!("  note: {note}");
    }

    if let Some(node) = &args.explain {
        let trees = classification.explain(node);
        if trees.is_empty() {
            println!("no derivation recorded for {node}");
        } else {
            for tree in trees {
                print!("{}", tree.render());
            }
        }
    }

    if let Some(path) = &args.out {
        write_file(path, &classification.to_json(stamp))?;
    }
    if let Some(path) = &args.annotated_out {
        let mut annotated = graph.clone();
        reasoner::annotate(&mut annotated, &classification).map_err(|e| fail(3, e.to_string()))?;
        write_file(path, &json::to_json(&annotated))?;
    }
    Ok(0)
}

fn cmd_tag(args: &TagArgs) -> CliResult<u8> {
    let events = tagger::load_events(&read_file(&args.log)?)
        .map_err(|e| fail(2, format!("{}: {e}", args.log.display())))?;
    let mapping = tagger::MappingTable::from_json(&read_file(&args.map)?)
        .map_err(|e| fail(2, format!("{}: {e}", args.map.display())))?;
    let result = tagger::tag_events(&events, &mapping).map_err(|e| fail(2, e.to_string()))?;

    write_file(&args.out, &json::to_json(&result.graph))?;
    if let Some(path) = &args.records_out {
        write_file(path, &tagger::save_records(&result.records))?;
    }
    if let Some(path) = &args.skipped_out {
        write_file(path, &tagger::save_skipped(&result.skipped))?;
    }
    if let Some(path) = &args.vetting_out {
        write_file(path, &VettingRecord::save_many(&result.vetting))?;
    }

    println!(
        "tagged {} of {} events into {} nodes, {} edges",
        result.records.len(),
        events.len(),
        result.graph.node_ids().count(),
        result.graph.edges().count()
    );
    println!("vetting records: {}", result.vetting.len());
    if !result.skipped.is_empty() {
        println!("skipped {} events:", result.skipped.len());
        for skip in &result.skipped {
            println!(
                "  {}/{}/{}: {}",
                skip.event.loop_id, skip.event.iteration, skip.event.activity_code, skip.reason
            );
        }
    }
    Ok(0)
}

fn cmd_analyze(args: &AnalyzeArgs, stamp: Option<&str>) -> CliResult<u8> {
    let records = tagger::load_records(&read_file(&args.records)?)
        .map_err(|e| fail(2, format!("{}: {e}", args.records.display())))?;
    let outcomes = analytics::load_outcomes(&read_file(&args.outcomes)?)
        .map_err(|e| fail(2, format!("{}: {e}", args.outcomes.display())))?;

    let mut report = analytics::analyze(&records, &outcomes, args.by_unit);
    report.generated_at = stamp.map(str::to_owned);
    write_file(&args.report, &report.to_json())?;

    println!(
        "loops: {} ({} with outcomes, {} missing)",
        report.loops,
        report.loops_with_outcomes,
        report.missing_outcomes.len()
    );
    for stats in report.type_stats.iter().take(5) {
        println!(
            "  {:<40} n={:<3} mean={} variance={}",
            stats.signature, stats.loops, stats.mean, stats.variance
        );
    }
    match &report.regression {
        Some(fit) => {
            let terms: Vec<String> = fit
                .coefficients
                .iter()
                .map(|(class, beta)| format!("{beta:+.6}·{class}"))
                .collect();
            println!(
                "regression: outcome = {:.6} {} (r² = {:.6}{})",
                fit.intercept,
                terms.join(" "),
                fit.r_squared,
                if fit.ridge_used { ", ridged" } else { "" }
            );
            if !fit.dropped_features.is_empty() {
                println!("  constant features dropped: {}", fit.dropped_features.join(", "));
            }
        }
        None => println!(
            "regression: not applicable (needs two loops with outcomes and a varying class count)"
        ),
    }
    if let Some(rows) = &report.unit_comparison {
        for row in rows.iter().take(5) {
            let means: Vec<String> = row
                .unit_means
                .iter()
                .map(|(unit, mu)| format!("{unit}={mu}"))
                .collect();
            println!("  {:<40} Δ={} {}", row.signature, row.max_delta, means.join(" "));
        }
    }
    Ok(0)
}

fn cmd_gen(args: &GenArgs) -> CliResult<u8> {
    let mut spec = synthgen::GenSpec::from_json(&read_file(&args.spec)?)
        .map_err(|e| fail(2, format!("{}: {e}", args.spec.display())))?;
    if let Some(loops) = args.loops {
        spec.loops = loops;
    }
    if let Some(iterations) = args.iterations {
        spec.iterations_per_loop = iterations;
    }
    let output = synthgen::generate(&spec, args.seed).map_err(|e| fail(2, e.to_string()))?;

    std::fs::create_dir_all(&args.out_dir)
        .map_err(|e| fail(1, format!("{}: {e}", args.out_dir.display())))?;
    write_file(&args.out_dir.join("events.jsonl"), &tagger::save_events(&output.events))?;
    write_file(&args.out_dir.join("mapping.json"), &output.mapping.to_json())?;
    write_file(&args.out_dir.join("outcomes.json"), &analytics::save_outcomes(&output.outcomes))?;
    write_file(&args.out_dir.join("marks.json"), &output.marks.to_json())?;

    println!(
        "generated {} events over {} loops (seed {}) into {}",
        output.events.len(),
        spec.loops,
        args.seed,
        args.out_dir.display()
    );
    println!("marked {} artifact contents not veridical", output.marks.not_veridical.len());
    Ok(0)
}

fn cmd_export(args: &ExportArgs) -> CliResult<u8> {
    let text = match args.format {
        ExportFormat::Taxonomy => {
            if args.input.is_some() {
                return Err(fail(1, "--format taxonomy takes no input graph"));
            }
            Taxonomy::builtin().export_text()
        }
        ExportFormat::Canonical | ExportFormat::Triples => {
            let Some(input) = &args.input else {
                return Err(fail(1, "an input graph file is required"));
            };
            let graph = load_graph(input)?;
            match args.format {
                ExportFormat::Canonical => json::to_json(&graph),
                ExportFormat::Triples => triples::to_triples(&graph),
                ExportFormat::Taxonomy => unreachable!(),
            }
        }
    };
    write_file(&args.out, &text)?;
    println!("wrote {}", args.out.display());
    Ok(0)
}
