//! Grapheme-count prediction for English words.
//!
//! A Mamdani fuzzy system estimates how many graphemes a word has from its
//! letter, vowel and consonant counts ([`predictor`]); a constrained
//! segmenter then splits the word into that many graphemes ([`mapper`]).
//! A dictionary-driven IPA baseline ([`ipa`]) and an evaluation harness
//! ([`eval`]) sit alongside.

pub mod corpus;
pub mod data;
pub mod eval;
pub mod fuzzy;
pub mod ipa;
pub mod mapper;
pub mod predictor;
