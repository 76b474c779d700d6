//! Browser bindings for the grapheme predictor. Every export takes plain
//! strings/numbers and returns a JSON string (or an error message), so the
//! same functions are exercised natively by the tests below.

use std::sync::OnceLock;

use serde::Serialize;
use wasm_bindgen::prelude::*;

use grapheme_fis::corpus::{extract_features, normalize_word, FeatureVector};
use grapheme_fis::data::Resources;
use grapheme_fis::mapper::{enumerate_segmentations, segment as split, Segmentation};
use grapheme_fis::predictor::{CountPrediction, CountPredictor, FEATURES, RULE_COUNTS};

const CURVE_STEP: f64 = 0.05;
const MAX_LISTED: usize = 200;

struct State {
    resources: Resources,
    predictor: CountPredictor,
}

fn state() -> &'static State {
    static STATE: OnceLock<State> = OnceLock::new();
    STATE.get_or_init(|| {
        let resources = Resources::bundled().expect("bundled data is valid");
        let predictor = CountPredictor::new(&resources.params).expect("bundled params are valid");
        State {
            resources,
            predictor,
        }
    })
}

fn to_json<T: Serialize>(value: &T) -> Result<String, String> {
    serde_json::to_string(value).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct Activation {
    g: u32,
    alpha: f64,
}

#[derive(Serialize)]
struct PredictView {
    word: String,
    features: FeatureVector,
    activations: Vec<Activation>,
    /// `[y, degree]` pairs of the aggregated output set.
    aggregate: Vec<[f64; 2]>,
    prediction: CountPrediction,
    segmentation: Segmentation,
}

/// Full inference trace for `word` plus its segmentation at the predicted count.
#[wasm_bindgen]
pub fn predict(word: &str) -> Result<String, String> {
    let st = state();
    let word = normalize_word(word.trim()).map_err(|e| e.to_string())?;
    let features = extract_features(&word).map_err(|e| e.to_string())?;
    let inference = st
        .predictor
        .engine()
        .infer_ordered(&features.as_array())
        .map_err(|e| e.to_string())?;
    let prediction = CountPrediction::from_centroid(inference.crisp);
    let segmentation = split(&word, prediction.rounded as usize, &st.resources.inventory)
        .map_err(|e| e.to_string())?;
    let activations = RULE_COUNTS
        .iter()
        .zip(&inference.activations)
        .map(|(&g, &alpha)| Activation { g, alpha })
        .collect();
    // every 4th grid point is plenty for drawing
    let aggregate = inference
        .aggregate
        .points()
        .step_by(4)
        .map(|(y, mu)| [y, mu])
        .collect();
    to_json(&PredictView {
        word,
        features,
        activations,
        aggregate,
        prediction,
        segmentation,
    })
}

#[derive(Serialize)]
struct Curve {
    label: String,
    points: Vec<[f64; 2]>,
}

#[derive(Serialize)]
struct CurvesView {
    feature: String,
    domain: (f64, f64),
    curves: Vec<Curve>,
}

/// Sampled membership curves of one input feature (`characters`, `vowels`,
/// `consonants`) or of the output (`graphemes`).
#[wasm_bindgen]
pub fn membership_curves(feature: &str) -> Result<String, String> {
    let engine = state().predictor.engine();
    let var = engine
        .inputs()
        .iter()
        .chain(std::iter::once(engine.output()))
        .find(|v| v.name() == feature)
        .ok_or_else(|| {
            format!("unknown feature {feature:?}; expected one of {FEATURES:?} or \"graphemes\"")
        })?;
    let (lo, hi) = var.domain();
    let n = ((hi - lo) / CURVE_STEP).round() as usize;
    let curves = var
        .sets()
        .iter()
        .map(|s| Curve {
            label: s.label.clone(),
            points: (0..=n)
                .map(|i| {
                    let x = lo + (hi - lo) * i as f64 / n as f64;
                    [x, s.mf.evaluate(x)]
                })
                .collect(),
        })
        .collect();
    to_json(&CurvesView {
        feature: feature.to_string(),
        domain: (lo, hi),
        curves,
    })
}

#[derive(Serialize)]
struct SegmentView {
    chosen: Segmentation,
    all: Vec<String>,
    truncated: bool,
}

/// Segmentation of `word` into `count` graphemes, alongside every possible split.
#[wasm_bindgen]
pub fn segment(word: &str, count: u32) -> Result<String, String> {
    let inventory = &state().resources.inventory;
    let word = normalize_word(word.trim()).map_err(|e| e.to_string())?;
    let chosen = split(&word, count as usize, inventory).map_err(|e| e.to_string())?;
    let all = enumerate_segmentations(&word, inventory, MAX_LISTED).map_err(|e| e.to_string())?;
    to_json(&SegmentView {
        chosen,
        all: all.segmentations.iter().map(ToString::to_string).collect(),
        truncated: all.truncated,
    })
}
