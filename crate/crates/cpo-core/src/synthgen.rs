//! Synthetic workflow corpus generator.
//!
//! Produces a matched set of artifacts — event log, mapping table, outcome
//! scores, and veridicality marks — from a small generation spec and a
//! seed. Loops are chains: each step consumes the previous step's output
//! artifact, the first step consumes a per-iteration source artifact.
//! Outcome scores follow a linear model over per-class step counts
//! (intercept plus per-class effects, optional uniform noise, clipped to
//! `[0, 1]`), so analytics run on a generated corpus can be checked
//! against known ground truth. With zero noise the scores are computed in
//! exact arithmetic.
//!
//! Generation is a pure function of spec and seed: the random stream
//! comes from a fixed 64-bit linear congruential generator, so the same
//! inputs reproduce the same corpus byte for byte, on any platform.

use std::collections::{BTreeMap, BTreeSet};

use chrono::{DateTime, Duration, FixedOffset};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::decimal::Decimal;
use crate::graph::GraphError;
use crate::ontology::ClassId;
use crate::reasoner::VeridicalityMarks;
use crate::tagger::{ActivityMapping, ActivityVetting, Event, MappingTable};

/// 64-bit linear congruential generator. The multiplier and increment are
/// part of the generation contract: changing them would silently change
/// every seeded corpus, so they are fixed constants, not tunables.
#[derive(Debug, Clone)]
pub struct Lcg {
    state: u64,
}

impl Lcg {
    pub fn new(seed: u64) -> Lcg {
        Lcg { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self
            .state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        self.state
    }

    /// Uniform draw in `0..n` (n > 0). Uses the high bits, which have the
    /// longest period in an LCG.
    pub fn below(&mut self, n: usize) -> usize {
        assert!(n > 0, "empty range");
        ((self.next_u64() >> 32) % n as u64) as usize
    }

    /// Uniform draw in `[0, 1)` with 53 bits of precision.
    pub fn unit_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenActivity {
    pub code: String,
    pub class: ClassId,
}

/// Parameters for one synthetic corpus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenSpec {
    pub loops: u32,
    pub iterations_per_loop: u32,
    /// Steps per iteration are drawn uniformly from `1..=max_steps`.
    pub max_steps: u32,
    pub activities: Vec<GenActivity>,
    pub units: Vec<String>,
    pub environment: String,
    /// Linear outcome model: `intercept + Σ effects[class] · count(class)`.
    pub intercept: Decimal,
    pub effects: BTreeMap<String, Decimal>,
    /// Half-width of uniform noise added to outcomes; zero keeps them exact.
    pub noise_scale: Decimal,
    /// Probability that a consumed artifact's content is marked not
    /// veridical.
    pub bad_source_rate: Decimal,
    pub default_confidence: Decimal,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GenSpecFile {
    format_version: String,
    #[serde(flatten)]
    spec: GenSpec,
}

impl GenSpec {
    pub fn from_json(text: &str) -> Result<GenSpec, GraphError> {
        let file: GenSpecFile =
            serde_json::from_str(text).map_err(|e| GraphError::Parse(e.to_string()))?;
        if file.format_version != "1" {
            return Err(GraphError::Version(file.format_version));
        }
        file.spec.validate()?;
        Ok(file.spec)
    }

    pub fn to_json(&self) -> String {
        let file = GenSpecFile {
            format_version: "1".to_owned(),
            spec: self.clone(),
        };
        let mut out = serde_json::to_string_pretty(&file).expect("spec serializes");
        out.push('\n');
        out
    }

    pub fn validate(&self) -> Result<(), GraphError> {
        let bad = |msg: String| Err(GraphError::Parse(msg));
        if self.max_steps == 0 {
            return bad("max_steps must be at least 1".to_owned());
        }
        if self.activities.is_empty() {
            return bad("at least one activity is required".to_owned());
        }
        let codes: BTreeSet<&str> = self.activities.iter().map(|a| a.code.as_str()).collect();
        if codes.len() != self.activities.len() {
            return bad("activity codes must be distinct".to_owned());
        }
        if self.units.is_empty() {
            return bad("at least one unit is required".to_owned());
        }
        if !self.bad_source_rate.in_unit_range() {
            return bad(format!("bad_source_rate {} outside [0, 1]", self.bad_source_rate));
        }
        if !self.default_confidence.in_unit_range() {
            return bad(format!(
                "default_confidence {} outside [0, 1]",
                self.default_confidence
            ));
        }
        if self.noise_scale.is_negative() {
            return bad(format!("noise_scale {} is negative", self.noise_scale));
        }
        for class in self.effects.keys() {
            if !ClassId::all().any(|c| c.id() == class) {
                return bad(format!("effects key {class:?} is not a class id"));
            }
        }
        Ok(())
    }
}

/// A complete generated corpus, ready to tag, classify, and analyze.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenOutput {
    pub events: Vec<Event>,
    pub mapping: MappingTable,
    pub outcomes: BTreeMap<String, Decimal>,
    pub marks: VeridicalityMarks,
}

/// Generates a corpus from `spec` and `seed`. Same inputs, same corpus.
pub fn generate(spec: &GenSpec, seed: u64) -> Result<GenOutput, GraphError> {
    spec.validate()?;
    let mut rng = Lcg::new(seed);
    let base: DateTime<FixedOffset> =
        DateTime::parse_from_rfc3339("2026-01-05T09:00:00Z").expect("fixed base timestamp");

    let mut events = Vec::new();
    let mut outcomes = BTreeMap::new();
    for l in 0..spec.loops {
        let loop_id = format!("L{l}");
        let unit = spec.units[rng.below(spec.units.len())].clone();
        let actor = format!("{unit}.a{}", rng.below(4));
        let mut class_counts: BTreeMap<ClassId, u32> = BTreeMap::new();
        for iteration in 1..=spec.iterations_per_loop {
            let steps = 1 + rng.below(spec.max_steps as usize) as u32;
            for k in 0..steps {
                let activity = &spec.activities[rng.below(spec.activities.len())];
                *class_counts.entry(activity.class).or_insert(0) += 1;
                let offset = i64::from(l) * 86_400
                    + i64::from(iteration) * 3_600
                    + i64::from(k) * 300;
                let inputs = if k == 0 {
                    vec![format!("{loop_id}.i{iteration}.src")]
                } else {
                    vec![format!("{loop_id}.i{iteration}.out{}", k - 1)]
                };
                events.push(Event {
                    loop_id: loop_id.clone(),
                    iteration,
                    timestamp: base + Duration::seconds(offset),
                    actor_id: actor.clone(),
                    unit: Some(unit.clone()),
                    activity_code: activity.code.clone(),
                    inputs,
                    outputs: vec![format!("{loop_id}.i{iteration}.out{k}")],
                    note: None,
                });
            }
        }

        // One noise draw per loop, consumed whether or not it is applied,
        // so the event stream does not depend on the noise setting.
        let noise_draw = rng.unit_f64();
        let mut exact = spec.intercept.to_rational();
        for (class, count) in &class_counts {
            if let Some(effect) = spec.effects.get(class.id()) {
                exact += effect.to_rational() * BigRational::from_integer((*count).into());
            }
        }
        let score = if spec.noise_scale.to_rational().is_zero() {
            let clipped = exact.max(BigRational::zero()).min(BigRational::one());
            Decimal::from_rational_rounded(&clipped, 12)
        } else {
            let noisy = rational_to_f64(&exact)
                + (2.0 * noise_draw - 1.0) * spec.noise_scale.to_f64();
            Decimal::parse(&format!("{:.12}", noisy.clamp(0.0, 1.0))).expect("formatted decimal")
        };
        outcomes.insert(loop_id, score);
    }

    // Mark consumed artifacts in sorted order so the draw sequence is
    // independent of event ordering.
    let consumed: BTreeSet<&str> = events
        .iter()
        .flat_map(|e| e.inputs.iter().map(String::as_str))
        .collect();
    let mut marks = VeridicalityMarks::default();
    for artifact in consumed {
        if rng.unit_f64() < spec.bad_source_rate.to_f64() {
            marks.not_veridical.insert(format!("ice:{artifact}"));
        }
    }

    let mapping = MappingTable {
        environment: spec.environment.clone(),
        default_confidence: Some(spec.default_confidence.clone()),
        activities: spec
            .activities
            .iter()
            .map(|activity| {
                (
                    activity.code.clone(),
                    ActivityMapping {
                        class: activity.class,
                        vetting: Some(ActivityVetting {
                            vetted: true,
                            environments: [spec.environment.clone()].into(),
                            requires_veridical_inputs: true,
                            requires_warranted_inputs: false,
                        }),
                    },
                )
            })
            .collect(),
    };

    // Events are produced loop by loop; emit them in the same canonical
    // order the event file format uses, so saving and reloading a corpus
    // reproduces it exactly.
    events.sort();

    Ok(GenOutput {
        events,
        mapping,
        outcomes,
        marks,
    })
}

fn rational_to_f64(value: &BigRational) -> f64 {
    Decimal::from_rational_rounded(value, 15).to_f64()
}
