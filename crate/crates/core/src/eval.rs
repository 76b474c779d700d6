//! Scores a method against an annotated corpus.

use std::fmt;

use serde::Serialize;

use crate::corpus::AnnotatedWord;
use crate::data::Resources;
use crate::ipa::{IpaError, IpaResources};
use crate::mapper::{segment, GraphemeInventory};
use crate::predictor::{CountPredictor, PredictorError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Fis,
    Ipa,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Fis => "fis",
            Method::Ipa => "ipa",
        })
    }
}

/// What one method produced for one word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    /// A grapheme count and, when one was produced, the segmentation.
    Predicted {
        count: usize,
        graphemes: Option<Vec<String>>,
    },
    NotInDictionary,
    /// The method could not produce a count (unparsable IPA, no consistent
    /// mapping, or no rule fired).
    Failed,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    pub method: Method,
    pub n: usize,
    pub count_correct: usize,
    pub plus_one: usize,
    pub minus_one: usize,
    pub off_by_more: usize,
    pub exact_mapping_correct: usize,
    /// Included in `off_by_more`.
    pub not_in_dictionary: usize,
    /// Included in `off_by_more`.
    pub failed: usize,
    pub count_correct_pct: f64,
    pub plus_one_pct: f64,
    pub minus_one_pct: f64,
    pub off_by_more_pct: f64,
    pub exact_mapping_correct_pct: f64,
    pub within_one_pct: f64,
}

fn pct(part: usize, n: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    (10_000.0 * part as f64 / n as f64).round() / 100.0
}

impl EvalReport {
    fn empty(method: Method) -> Self {
        Self {
            method,
            n: 0,
            count_correct: 0,
            plus_one: 0,
            minus_one: 0,
            off_by_more: 0,
            exact_mapping_correct: 0,
            not_in_dictionary: 0,
            failed: 0,
            count_correct_pct: 0.0,
            plus_one_pct: 0.0,
            minus_one_pct: 0.0,
            off_by_more_pct: 0.0,
            exact_mapping_correct_pct: 0.0,
            within_one_pct: 0.0,
        }
    }

    /// Builds a report from per-word outcomes paired with their references.
    pub fn tally<'a>(
        method: Method,
        scored: impl IntoIterator<Item = (&'a AnnotatedWord, Outcome)>,
    ) -> Self {
        let mut r = Self::empty(method);
        for (word, outcome) in scored {
            r.n += 1;
            match outcome {
                Outcome::Predicted { count, graphemes } => {
                    let expected = word.grapheme_count();
                    if count == expected {
                        r.count_correct += 1;
                        if graphemes.as_deref() == Some(word.graphemes()) {
                            r.exact_mapping_correct += 1;
                        }
                    } else if count == expected + 1 {
                        r.plus_one += 1;
                    } else if count + 1 == expected {
                        r.minus_one += 1;
                    } else {
                        r.off_by_more += 1;
                    }
                }
                Outcome::NotInDictionary => {
                    r.not_in_dictionary += 1;
                    r.off_by_more += 1;
                }
                Outcome::Failed => {
                    r.failed += 1;
                    r.off_by_more += 1;
                }
            }
        }
        r.count_correct_pct = pct(r.count_correct, r.n);
        r.plus_one_pct = pct(r.plus_one, r.n);
        r.minus_one_pct = pct(r.minus_one, r.n);
        r.off_by_more_pct = pct(r.off_by_more, r.n);
        r.exact_mapping_correct_pct = pct(r.exact_mapping_correct, r.n);
        r.within_one_pct = pct(r.within_one(), r.n);
        r
    }

    pub fn within_one(&self) -> usize {
        self.count_correct + self.plus_one + self.minus_one
    }
}

impl fmt::Display for EvalReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "method: {} (n = {})", self.method, self.n)?;
        let rows = [
            ("Correct Result", self.count_correct, self.count_correct_pct),
            (
                "One Greater Than Expected",
                self.plus_one,
                self.plus_one_pct,
            ),
            (
                "One Lower Than Expected",
                self.minus_one,
                self.minus_one_pct,
            ),
            (
                "Prediction Wrong By More Than 1",
                self.off_by_more,
                self.off_by_more_pct,
            ),
            ("Within +-1", self.within_one(), self.within_one_pct),
            (
                "Exact Mapping Correct",
                self.exact_mapping_correct,
                self.exact_mapping_correct_pct,
            ),
        ];
        for (label, count, pct) in rows {
            writeln!(f, "{label:<34}{count:>6}{pct:>9.2}%")?;
        }
        if self.method == Method::Ipa {
            writeln!(
                f,
                "{:<34}{:>6}",
                "  of which not in dictionary", self.not_in_dictionary
            )?;
        }
        write!(f, "{:<34}{:>6}", "  of which failed", self.failed)
    }
}

/// Everything both methods need, loaded once.
#[derive(Debug, Clone)]
pub struct Evaluator {
    pub predictor: CountPredictor,
    pub inventory: GraphemeInventory,
    pub ipa: IpaResources,
}

impl Evaluator {
    pub fn new(resources: &Resources) -> Result<Self, PredictorError> {
        Ok(Self {
            predictor: CountPredictor::new(&resources.params)?,
            inventory: resources.inventory.clone(),
            ipa: resources.ipa.clone(),
        })
    }

    pub fn outcome(&self, word: &AnnotatedWord, method: Method) -> Outcome {
        match method {
            Method::Fis => {
                let Ok(pred) = self.predictor.predict(word.surface()) else {
                    return Outcome::Failed;
                };
                let count = pred.rounded as usize;
                // a zero count cannot be segmented and can never match
                let graphemes = segment(word.surface(), count, &self.inventory)
                    .ok()
                    .map(|s| s.graphemes);
                Outcome::Predicted { count, graphemes }
            }
            Method::Ipa => match self.ipa.segment(word.surface()) {
                Ok(out) => Outcome::Predicted {
                    count: out.segmentation.achieved_count(),
                    graphemes: Some(out.segmentation.graphemes),
                },
                Err(IpaError::NotInDictionary(_)) => Outcome::NotInDictionary,
                Err(_) => Outcome::Failed,
            },
        }
    }

    pub fn evaluate(&self, corpus: &[AnnotatedWord], method: Method) -> EvalReport {
        EvalReport::tally(method, corpus.iter().map(|w| (w, self.outcome(w, method))))
    }
}

/// One-shot form of [`Evaluator::evaluate`].
pub fn evaluate(
    corpus: &[AnnotatedWord],
    method: Method,
    resources: &Resources,
) -> Result<EvalReport, PredictorError> {
    Ok(Evaluator::new(resources)?.evaluate(corpus, method))
}
