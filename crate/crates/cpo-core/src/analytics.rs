//! Outcomes-based analytics over tagged workflow records.
//!
//! Given per-process workflow records and a table of per-loop outcome
//! scores in `[0, 1]`, this module answers three questions:
//!
//! * **Which loop types perform best?** Loops are grouped by signature —
//!   the ordered sequence of activity codes — and each signature gets the
//!   exact mean and population variance of its outcome scores.
//! * **Which process classes predict outcomes?** Least-squares regression
//!   of outcome on per-class step counts, with an intercept.
//! * **Do organizational units differ?** Per-unit outcome means for each
//!   signature, with the largest pairwise gap.
//!
//! Means, variances, and unit deltas are computed in exact rational
//! arithmetic and rendered to twelve fractional digits, so reports are
//! reproducible byte for byte. Regression is estimation, not bookkeeping,
//! and uses floating point.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::decimal::Decimal;
use crate::graph::GraphError;
use crate::ontology::ClassId;
use crate::tagger::WorkflowRecord;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OutcomesFile {
    format_version: String,
    outcomes: BTreeMap<String, Decimal>,
}

/// Parses an outcomes table: loop id to score in `[0, 1]`.
pub fn load_outcomes(text: &str) -> Result<BTreeMap<String, Decimal>, GraphError> {
    let file: OutcomesFile =
        serde_json::from_str(text).map_err(|e| GraphError::Parse(e.to_string()))?;
    if file.format_version != "1" {
        return Err(GraphError::Version(file.format_version));
    }
    for (loop_id, score) in &file.outcomes {
        if !score.in_unit_range() {
            return Err(GraphError::Parse(format!(
                "outcome for {loop_id:?} is {score}, outside [0, 1]"
            )));
        }
    }
    Ok(file.outcomes)
}

pub fn save_outcomes(outcomes: &BTreeMap<String, Decimal>) -> String {
    let file = OutcomesFile {
        format_version: "1".to_owned(),
        outcomes: outcomes.clone(),
    };
    let mut out = serde_json::to_string_pretty(&file).expect("outcomes serialize");
    out.push('\n');
    out
}

/// One investigation loop, folded down from its records.
struct LoopSummary {
    signature: String,
    /// The loop's unit when every record agrees on one; None on absent or
    /// mixed attribution.
    unit: Option<String>,
    class_counts: BTreeMap<ClassId, usize>,
}

fn summarize_loops(records: &[WorkflowRecord]) -> BTreeMap<String, LoopSummary> {
    let mut grouped: BTreeMap<&str, Vec<&WorkflowRecord>> = BTreeMap::new();
    for record in records {
        grouped.entry(&record.loop_id).or_default().push(record);
    }
    let mut summaries = BTreeMap::new();
    for (loop_id, mut rows) in grouped {
        rows.sort_by(|a, b| {
            (a.iteration, a.timestamp, &a.process).cmp(&(b.iteration, b.timestamp, &b.process))
        });
        let signature = rows
            .iter()
            .map(|r| r.activity_code.as_str())
            .collect::<Vec<_>>()
            .join(">");
        let units: BTreeSet<Option<&String>> = rows.iter().map(|r| r.unit.as_ref()).collect();
        let unit = match units.into_iter().collect::<Vec<_>>().as_slice() {
            [Some(u)] => Some((*u).clone()),
            _ => None,
        };
        let mut class_counts = BTreeMap::new();
        for row in &rows {
            *class_counts.entry(row.process_class).or_insert(0) += 1;
        }
        summaries.insert(
            loop_id.to_owned(),
            LoopSummary {
                signature,
                unit,
                class_counts,
            },
        );
    }
    summaries
}

fn mean(values: &[BigRational]) -> BigRational {
    let total: BigRational = values.iter().sum();
    total / BigRational::from_integer(BigInt::from(values.len()))
}

fn population_variance(values: &[BigRational], mu: &BigRational) -> BigRational {
    let total: BigRational = values.iter().map(|v| (v - mu) * (v - mu)).sum();
    total / BigRational::from_integer(BigInt::from(values.len()))
}

/// Outcome statistics for one loop signature.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeStats {
    pub signature: String,
    pub loops: usize,
    pub mean: Decimal,
    pub variance: Decimal,
}

/// Groups loops by signature and computes exact outcome statistics,
/// best-performing signature first (ties broken by signature).
pub fn type_stats(
    records: &[WorkflowRecord],
    outcomes: &BTreeMap<String, Decimal>,
) -> Vec<TypeStats> {
    let summaries = summarize_loops(records);
    let mut by_signature: BTreeMap<&str, Vec<BigRational>> = BTreeMap::new();
    for (loop_id, summary) in &summaries {
        if let Some(score) = outcomes.get(loop_id) {
            by_signature
                .entry(&summary.signature)
                .or_default()
                .push(score.to_rational());
        }
    }
    let mut rows: Vec<(BigRational, TypeStats)> = by_signature
        .into_iter()
        .map(|(signature, values)| {
            let mu = mean(&values);
            let var = population_variance(&values, &mu);
            let stats = TypeStats {
                signature: signature.to_owned(),
                loops: values.len(),
                mean: Decimal::from_rational_rounded(&mu, 12),
                variance: Decimal::from_rational_rounded(&var, 12),
            };
            (mu, stats)
        })
        .collect();
    // Sort on the exact mean, not its rounded rendering.
    rows.sort_by(|(ma, a), (mb, b)| mb.cmp(ma).then_with(|| a.signature.cmp(&b.signature)));
    rows.into_iter().map(|(_, stats)| stats).collect()
}

/// Least-squares fit of outcome on per-class step counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Regression {
    pub intercept: f64,
    /// Per-class slope, keyed by class id.
    pub coefficients: BTreeMap<String, f64>,
    pub r_squared: f64,
    pub loops_used: usize,
    /// True when the normal equations were singular and a small ridge
    /// penalty was added to obtain a solution.
    pub ridge_used: bool,
    /// Class ids excluded because their count never varies across loops.
    pub dropped_features: Vec<String>,
}

/// Regresses outcome scores on per-class step counts via the normal
/// equations. Returns None when fewer than two loops have outcomes or no
/// class count varies across them.
pub fn regress_steps(
    records: &[WorkflowRecord],
    outcomes: &BTreeMap<String, Decimal>,
) -> Option<Regression> {
    let summaries = summarize_loops(records);
    let mut rows: Vec<(&LoopSummary, f64)> = Vec::new();
    for (loop_id, summary) in &summaries {
        if let Some(score) = outcomes.get(loop_id) {
            rows.push((summary, score.to_f64()));
        }
    }
    if rows.len() < 2 {
        return None;
    }

    let mut all_classes: BTreeSet<ClassId> = BTreeSet::new();
    for (summary, _) in &rows {
        all_classes.extend(summary.class_counts.keys().copied());
    }
    let mut features = Vec::new();
    let mut dropped_features = Vec::new();
    for class in all_classes {
        let first = rows[0].0.class_counts.get(&class).copied().unwrap_or(0);
        let varies = rows
            .iter()
            .any(|(s, _)| s.class_counts.get(&class).copied().unwrap_or(0) != first);
        if varies {
            features.push(class);
        } else {
            dropped_features.push(class.id().to_owned());
        }
    }
    if features.is_empty() {
        return None;
    }

    let k = features.len() + 1;
    let mut xtx = vec![vec![0.0f64; k]; k];
    let mut xty = vec![0.0f64; k];
    for (summary, y) in &rows {
        let mut x = Vec::with_capacity(k);
        x.push(1.0);
        for class in &features {
            x.push(summary.class_counts.get(class).copied().unwrap_or(0) as f64);
        }
        for i in 0..k {
            for j in 0..k {
                xtx[i][j] += x[i] * x[j];
            }
            xty[i] += x[i] * y;
        }
    }

    let (beta, ridge_used) = match solve_linear(xtx.clone(), xty.clone()) {
        Some(beta) => (beta, false),
        None => {
            for (i, row) in xtx.iter_mut().enumerate() {
                row[i] += 1e-8;
            }
            let beta = solve_linear(xtx, xty).expect("ridge-regularized system is nonsingular");
            (beta, true)
        }
    };

    let y_bar = rows.iter().map(|(_, y)| y).sum::<f64>() / rows.len() as f64;
    let mut sse = 0.0;
    let mut sst = 0.0;
    for (summary, y) in &rows {
        let mut predicted = beta[0];
        for (idx, class) in features.iter().enumerate() {
            predicted +=
                beta[idx + 1] * summary.class_counts.get(class).copied().unwrap_or(0) as f64;
        }
        sse += (y - predicted) * (y - predicted);
        sst += (y - y_bar) * (y - y_bar);
    }
    let r_squared = if sst == 0.0 { 0.0 } else { 1.0 - sse / sst };

    Some(Regression {
        intercept: beta[0],
        coefficients: features
            .iter()
            .enumerate()
            .map(|(idx, class)| (class.id().to_owned(), beta[idx + 1]))
            .collect(),
        r_squared,
        loops_used: rows.len(),
        ridge_used,
        dropped_features,
    })
}

/// Solves `a x = b` by Gaussian elimination with partial pivoting.
/// Returns None when a pivot vanishes (singular system).
#[allow(clippy::needless_range_loop)] // row ops read a[col] while writing a[row]
fn solve_linear(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            for c in col..n {
                a[row][c] -= factor * a[col][c];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for col in row + 1..n {
            acc -= a[row][col] * x[col];
        }
        x[row] = acc / a[row][row];
    }
    Some(x)
}

/// Per-unit outcome means for one signature.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitComparison {
    pub signature: String,
    pub unit_means: BTreeMap<String, Decimal>,
    /// Largest pairwise gap between unit means; zero with a single unit.
    pub max_delta: Decimal,
}

/// Compares outcome means across units running the same loop signature.
/// Loops without a consistent unit are excluded. Sorted by gap, widest
/// first (ties broken by signature).
pub fn compare_units(
    records: &[WorkflowRecord],
    outcomes: &BTreeMap<String, Decimal>,
) -> Vec<UnitComparison> {
    let summaries = summarize_loops(records);
    let mut grouped: BTreeMap<&str, BTreeMap<&str, Vec<BigRational>>> = BTreeMap::new();
    for (loop_id, summary) in &summaries {
        let (Some(score), Some(unit)) = (outcomes.get(loop_id), summary.unit.as_ref()) else {
            continue;
        };
        grouped
            .entry(&summary.signature)
            .or_default()
            .entry(unit)
            .or_default()
            .push(score.to_rational());
    }
    let mut rows: Vec<(BigRational, UnitComparison)> = grouped
        .into_iter()
        .map(|(signature, by_unit)| {
            let means: BTreeMap<&str, BigRational> = by_unit
                .into_iter()
                .map(|(unit, values)| (unit, mean(&values)))
                .collect();
            let mut max_delta = BigRational::zero();
            for a in means.values() {
                for b in means.values() {
                    let delta = (a - b).abs();
                    if delta > max_delta {
                        max_delta = delta;
                    }
                }
            }
            let comparison = UnitComparison {
                signature: signature.to_owned(),
                unit_means: means
                    .into_iter()
                    .map(|(unit, mu)| (unit.to_owned(), Decimal::from_rational_rounded(&mu, 12)))
                    .collect(),
                max_delta: Decimal::from_rational_rounded(&max_delta, 12),
            };
            (max_delta, comparison)
        })
        .collect();
    rows.sort_by(|(da, a), (db, b)| db.cmp(da).then_with(|| a.signature.cmp(&b.signature)));
    rows.into_iter().map(|(_, row)| row).collect()
}

/// Full analytics report, serializable as canonical JSON.
#[derive(Debug, Clone, Serialize)]
pub struct AnalyzeReport {
    pub format_version: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generated_at: Option<String>,
    pub loops: usize,
    pub loops_with_outcomes: usize,
    pub type_stats: Vec<TypeStats>,
    /// None serializes as null: regression was not applicable.
    pub regression: Option<Regression>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unit_comparison: Option<Vec<UnitComparison>>,
    /// Loop ids present in the records but missing an outcome score.
    pub missing_outcomes: Vec<String>,
}

/// Runs the full analysis. `by_unit` adds the unit comparison section.
pub fn analyze(
    records: &[WorkflowRecord],
    outcomes: &BTreeMap<String, Decimal>,
    by_unit: bool,
) -> AnalyzeReport {
    let summaries = summarize_loops(records);
    let missing_outcomes: Vec<String> = summaries
        .keys()
        .filter(|loop_id| !outcomes.contains_key(*loop_id))
        .cloned()
        .collect();
    let loops_with_outcomes = summaries.len() - missing_outcomes.len();
    AnalyzeReport {
        format_version: "1".to_owned(),
        generated_at: None,
        loops: summaries.len(),
        loops_with_outcomes,
        type_stats: type_stats(records, outcomes),
        regression: regress_steps(records, outcomes),
        unit_comparison: by_unit.then(|| compare_units(records, outcomes)),
        missing_outcomes,
    }
}

impl AnalyzeReport {
    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report serializes");
        out.push('\n');
        out
    }
}
