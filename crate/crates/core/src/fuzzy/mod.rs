//! A small Mamdani inference engine.
//!
//! Crisp inputs are fuzzified through [`MembershipFunction`]s, rules combine
//! their antecedents with `min`, each consequent is clipped at its rule's
//! activation, the clipped sets are merged with `max`, and the result is
//! reduced to a crisp value by centroid on a uniform grid.

mod engine;
mod membership;

pub use engine::{
    defuzzify_centroid, Aggregate, Antecedent, CrispInputs, FuzzyRule, Inference, InferenceEngine,
    LinguisticVariable, NamedSet, DEFAULT_DEFUZZ_STEP,
};
pub use membership::{MembershipFunction, Shape};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FuzzyError {
    #[error("invalid membership function: {0}")]
    InvalidMembership(String),
    #[error("invalid variable `{name}`: {reason}")]
    InvalidVariable { name: String, reason: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("variable `{variable}` has no set labelled `{label}`")]
    UnknownLabel { variable: String, label: String },
    #[error("rule consequent must name the output variable `{expected}`, got `{found}`")]
    ConsequentNotOutput { expected: String, found: String },
    #[error("rule has no antecedents")]
    EmptyRule,
    #[error("no crisp value supplied for input `{0}`")]
    MissingInput(String),
    #[error("expected {expected} activations, got {found}")]
    ActivationCount { expected: usize, found: usize },
    #[error("defuzzification step must be positive and finite, got {0}")]
    InvalidStep(f64),
    #[error("no rule fired: the aggregated output set is empty")]
    NoRuleFired,
}
