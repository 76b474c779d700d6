//! The grapheme-count fuzzy system: three word features in, grapheme count out.
//!
//! Each input feature (characters, vowels, consonants) carries one set per
//! grapheme count: Gaussians for 2..=12, a Z curve for 1 and an S curve for 14.
//! Thirteen rules bind the same count across all three features, and the output
//! sets are narrow triangles spanning the rounding interval of each count.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::corpus::{extract_features, CorpusError, FeatureVector, GraphemeCountStats};
use crate::fuzzy::{
    Antecedent, FuzzyError, FuzzyRule, InferenceEngine, LinguisticVariable, MembershipFunction,
    DEFAULT_DEFUZZ_STEP,
};

pub const FEATURES: [&str; 3] = ["characters", "vowels", "consonants"];
pub const OUTPUT: &str = "graphemes";
/// Grapheme counts that own a rule. 13 has none.
pub const RULE_COUNTS: [u32; 13] = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 14];
pub const OUTPUT_DOMAIN: (f64, f64) = (1.0, 14.0);
/// Output triangles span `[g - 0.5, g + 0.499]`.
pub const TAIL_BELOW: f64 = 0.5;
pub const TAIL_ABOVE: f64 = 0.499;

/// Upper bound of the input domains; only used for plotting ranges.
const INPUT_DOMAIN_MAX: [f64; 3] = [24.0, 12.0, 16.0];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PredictorError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("parameter file line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error(transparent)]
    Fuzzy(#[from] FuzzyError),
    #[error(transparent)]
    Word(#[from] CorpusError),
}

/// Mean of a feature and its standard deviation, if one was defined.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FeatureParam {
    pub mean: f64,
    pub sigma: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParamRow {
    /// Characters, vowels, consonants.
    pub features: [FeatureParam; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PredictorParams {
    pub rows: BTreeMap<u32, ParamRow>,
    pub defuzz_step: f64,
}

impl PredictorParams {
    /// Parses the tab-separated parameter table. `Div/0`, `NA` or `-` mark an
    /// undefined sigma.
    pub fn parse(text: &str) -> Result<Self, PredictorError> {
        let mut rows = BTreeMap::new();
        let mut header_seen = false;
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim_end();
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |reason: String| PredictorError::Parse {
                line: idx + 1,
                reason,
            };
            let cols: Vec<&str> = line.split('\t').map(str::trim).collect();
            if !header_seen {
                let expected = [
                    "g",
                    "char_mean",
                    "char_sigma",
                    "vowel_mean",
                    "vowel_sigma",
                    "cons_mean",
                    "cons_sigma",
                ];
                if cols != expected {
                    return Err(err(format!("expected header `{}`", expected.join("\\t"))));
                }
                header_seen = true;
                continue;
            }
            if cols.len() != 7 {
                return Err(err(format!("expected 7 columns, found {}", cols.len())));
            }
            let g: u32 = cols[0]
                .parse()
                .map_err(|_| err(format!("bad grapheme count {:?}", cols[0])))?;
            let number = |s: &str| -> Result<f64, PredictorError> {
                s.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| err(format!("bad number {s:?}")))
            };
            let sigma = |s: &str| -> Result<Option<f64>, PredictorError> {
                match s.to_ascii_lowercase().as_str() {
                    "div/0" | "na" | "-" => Ok(None),
                    _ => number(s).map(Some),
                }
            };
            let mut features = [FeatureParam {
                mean: 0.0,
                sigma: None,
            }; 3];
            for (f, feature) in features.iter_mut().enumerate() {
                feature.mean = number(cols[1 + 2 * f])?;
                feature.sigma = sigma(cols[2 + 2 * f])?;
            }
            if rows.insert(g, ParamRow { features }).is_some() {
                return Err(err(format!("duplicate row for g={g}")));
            }
        }
        if !header_seen {
            return Err(PredictorError::Config(
                "parameter file has no header".into(),
            ));
        }
        Ok(Self {
            rows,
            defuzz_step: DEFAULT_DEFUZZ_STEP,
        })
    }

    pub fn from_stats(stats: &GraphemeCountStats) -> Self {
        let rows = stats
            .rows
            .iter()
            .map(|(&g, row)| {
                let p = |m: crate::corpus::Moments| FeatureParam {
                    mean: m.mean,
                    sigma: Some(m.sigma),
                };
                (
                    g as u32,
                    ParamRow {
                        features: [p(row.characters), p(row.vowels), p(row.consonants)],
                    },
                )
            })
            .collect();
        Self {
            rows,
            defuzz_step: DEFAULT_DEFUZZ_STEP,
        }
    }

    fn row(&self, g: u32) -> Result<&ParamRow, PredictorError> {
        self.rows
            .get(&g)
            .ok_or_else(|| PredictorError::Config(format!("missing parameter row for g={g}")))
    }
}

fn label(g: u32) -> String {
    format!("g{g}")
}

/// Input sets for one feature, in [`RULE_COUNTS`] order.
fn feature_sets(
    params: &PredictorParams,
    feature: usize,
) -> Result<Vec<(String, MembershipFunction)>, PredictorError> {
    let name = FEATURES[feature];
    let cfg = |e: FuzzyError, g: u32| PredictorError::Config(format!("{name} set g{g}: {e}"));
    let mut sets = Vec::with_capacity(RULE_COUNTS.len());

    let first = params.row(1)?.features[feature];
    let second = params.row(2)?.features[feature];
    sets.push((
        label(1),
        MembershipFunction::z_shaped(first.mean, second.mean).map_err(|e| cfg(e, 1))?,
    ));

    for g in 2..=12 {
        let p = params.row(g)?.features[feature];
        let sigma = p
            .sigma
            .filter(|s| *s > 0.0)
            .ok_or_else(|| PredictorError::Config(format!("{name} sigma for g={g} must be > 0")))?;
        sets.push((
            label(g),
            MembershipFunction::gaussian(p.mean, sigma).map_err(|e| cfg(e, g))?,
        ));
    }

    let twelve = params.row(12)?.features[feature];
    let last = params.row(14)?.features[feature];
    let foot = twelve.mean + twelve.sigma.unwrap_or(0.0);
    sets.push((
        label(14),
        MembershipFunction::s_shaped(foot, last.mean).map_err(|e| cfg(e, 14))?,
    ));
    Ok(sets)
}

/// Builds the 3-input, 13-rule system described in the module docs.
pub fn build_fis(params: &PredictorParams) -> Result<InferenceEngine, PredictorError> {
    let inputs = (0..FEATURES.len())
        .map(|f| {
            let sets = feature_sets(params, f)?;
            Ok(LinguisticVariable::new(
                FEATURES[f],
                (0.0, INPUT_DOMAIN_MAX[f]),
                sets,
            )?)
        })
        .collect::<Result<Vec<_>, PredictorError>>()?;

    let output_sets = RULE_COUNTS
        .iter()
        .map(|&g| {
            let peak = g as f64;
            Ok((
                label(g),
                MembershipFunction::triangular(peak - TAIL_BELOW, peak, peak + TAIL_ABOVE)?,
            ))
        })
        .collect::<Result<Vec<_>, FuzzyError>>()?;
    let output = LinguisticVariable::new(OUTPUT, OUTPUT_DOMAIN, output_sets)?;

    let rules = RULE_COUNTS
        .iter()
        .map(|&g| {
            FuzzyRule::new(
                FEATURES
                    .iter()
                    .map(|f| Antecedent::new(*f, label(g)))
                    .collect(),
                Antecedent::new(OUTPUT, label(g)),
            )
        })
        .collect();

    Ok(InferenceEngine::new(
        inputs,
        output,
        rules,
        params.defuzz_step,
    )?)
}

/// Round half up.
pub fn round_half_up(x: f64) -> u32 {
    (x + 0.5).floor().max(0.0) as u32
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CountPrediction {
    /// Centroid before reporting precision is applied.
    pub raw: f64,
    /// Centroid at 2 decimal places.
    pub crisp: f64,
    /// `round_half_up(crisp)`.
    pub rounded: u32,
}

impl CountPrediction {
    pub fn from_centroid(raw: f64) -> Self {
        let crisp = (raw * 100.0).round() / 100.0;
        Self {
            raw,
            crisp,
            rounded: round_half_up(crisp),
        }
    }
}

impl fmt::Display for CountPrediction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.2} → {}", self.crisp, self.rounded)
    }
}

/// Per-rule activations alongside the prediction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Explanation {
    pub features: FeatureVector,
    pub activations: Vec<(u32, f64)>,
    pub prediction: CountPrediction,
}

#[derive(Debug, Clone)]
pub struct CountPredictor {
    engine: InferenceEngine,
}

impl CountPredictor {
    pub fn new(params: &PredictorParams) -> Result<Self, PredictorError> {
        Ok(Self {
            engine: build_fis(params)?,
        })
    }

    pub fn engine(&self) -> &InferenceEngine {
        &self.engine
    }

    pub fn predict(&self, word: &str) -> Result<CountPrediction, PredictorError> {
        self.predict_features(&extract_features(word)?)
    }

    pub fn predict_features(&self, fv: &FeatureVector) -> Result<CountPrediction, PredictorError> {
        self.predict_values(fv.as_array())
    }

    /// Prediction at arbitrary real feature values.
    pub fn predict_values(&self, values: [f64; 3]) -> Result<CountPrediction, PredictorError> {
        let inference = self.engine.infer_ordered(&values)?;
        Ok(CountPrediction::from_centroid(inference.crisp))
    }

    pub fn explain(&self, word: &str) -> Result<Explanation, PredictorError> {
        let features = extract_features(word)?;
        let inference = self.engine.infer_ordered(&features.as_array())?;
        Ok(Explanation {
            features,
            activations: RULE_COUNTS
                .iter()
                .copied()
                .zip(inference.activations)
                .collect(),
            prediction: CountPrediction::from_centroid(inference.crisp),
        })
    }
}
