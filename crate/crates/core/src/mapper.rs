//! Count-constrained grapheme segmentation.
//!
//! Candidates at each position are tried longest first, then main tier before
//! extended, then in inventory order. The search backtracks to the next
//! candidate whenever a branch cannot finish with the requested count.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::corpus::MAX_GRAPHEME_LEN;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MapperError {
    #[error("inventory line {line}: {reason}")]
    Inventory { line: usize, reason: String },
    #[error("word {word:?} cannot be segmented: no grapheme covers {ch:?} at position {position}")]
    UnsegmentableWord {
        word: String,
        ch: char,
        position: usize,
    },
    #[error("invalid word {0:?}: expected non-empty [a-z]")]
    InvalidWord(String),
    #[error("target grapheme count must be at least 1")]
    ZeroTarget,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Tier {
    Main,
    Extended,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InventoryEntry {
    pub grapheme: String,
    pub tier: Tier,
}

/// An ordered set of legal graphemes.
#[derive(Debug, Clone)]
pub struct GraphemeInventory {
    entries: Vec<InventoryEntry>,
    /// grapheme -> (tier, inventory position)
    rank: HashMap<String, (Tier, usize)>,
}

impl GraphemeInventory {
    /// Builds an inventory, rejecting duplicates and graphemes outside `[a-z]{1,4}`.
    /// Missing single letters are not added here; see [`has_all_letters`](Self::has_all_letters).
    pub fn new(entries: Vec<InventoryEntry>) -> Result<Self, MapperError> {
        let mut rank = HashMap::with_capacity(entries.len());
        for (pos, e) in entries.iter().enumerate() {
            let err = |reason: String| MapperError::Inventory {
                line: pos + 1,
                reason,
            };
            if e.grapheme.is_empty()
                || e.grapheme.len() > MAX_GRAPHEME_LEN
                || !e.grapheme.chars().all(|c| c.is_ascii_lowercase())
            {
                return Err(err(format!("illegal grapheme {:?}", e.grapheme)));
            }
            if rank.insert(e.grapheme.clone(), (e.tier, pos)).is_some() {
                return Err(err(format!("duplicate grapheme {:?}", e.grapheme)));
            }
        }
        Ok(Self { entries, rank })
    }

    /// Convenience constructor: every grapheme in the main tier.
    pub fn from_graphemes<S: AsRef<str>>(graphemes: &[S]) -> Result<Self, MapperError> {
        Self::new(
            graphemes
                .iter()
                .map(|g| InventoryEntry {
                    grapheme: g.as_ref().to_string(),
                    tier: Tier::Main,
                })
                .collect(),
        )
    }

    /// One grapheme per line with an optional `\t(main|extended)` suffix
    /// (default extended). `#` lines are comments.
    pub fn parse(text: &str) -> Result<Self, MapperError> {
        let mut entries = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim_end();
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |reason: String| MapperError::Inventory {
                line: idx + 1,
                reason,
            };
            let (grapheme, tier) = match line.split_once('\t') {
                Some((g, t)) => {
                    let tier = match t.trim() {
                        "main" => Tier::Main,
                        "extended" => Tier::Extended,
                        other => return Err(err(format!("unknown tier {other:?}"))),
                    };
                    (g.trim(), tier)
                }
                None => (line.trim(), Tier::Extended),
            };
            entries.push(InventoryEntry {
                grapheme: grapheme.to_string(),
                tier,
            });
        }
        Self::new(entries)
    }

    pub fn entries(&self) -> &[InventoryEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, grapheme: &str) -> bool {
        self.rank.contains_key(grapheme)
    }

    pub fn tier_count(&self, tier: Tier) -> usize {
        self.entries.iter().filter(|e| e.tier == tier).count()
    }

    pub fn has_all_letters(&self) -> bool {
        ('a'..='z').all(|c| self.contains(c.encode_utf8(&mut [0; 4])))
    }

    /// Byte lengths of the graphemes matching `word[pos..]`, in search order.
    fn candidates(&self, word: &str, pos: usize) -> Vec<usize> {
        let rest = &word[pos..];
        let mut found: Vec<(usize, Tier, usize)> = (1..=MAX_GRAPHEME_LEN.min(rest.len()))
            .filter_map(|len| {
                self.rank
                    .get(&rest[..len])
                    .map(|&(tier, order)| (len, tier, order))
            })
            .collect();
        found.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
        found.into_iter().map(|(len, _, _)| len).collect()
    }
}

/// A split of `surface` into inventory graphemes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Segmentation {
    pub surface: String,
    pub graphemes: Vec<String>,
    /// Whether the grapheme count equals the requested target. Segmentations
    /// produced without a target report `true`.
    pub exact_count_match: bool,
}

impl Segmentation {
    pub fn achieved_count(&self) -> usize {
        self.graphemes.len()
    }
}

impl fmt::Display for Segmentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.graphemes.join("|"))
    }
}

fn check_word(word: &str) -> Result<(), MapperError> {
    if word.is_empty() || !word.chars().all(|c| c.is_ascii_lowercase()) {
        return Err(MapperError::InvalidWord(word.to_string()));
    }
    Ok(())
}

/// Candidate lengths per position plus the set of counts that can finish the
/// word from each position.
struct Lattice {
    candidates: Vec<Vec<usize>>,
    /// `reachable[pos][k]`: the suffix from `pos` splits into exactly `k` graphemes.
    reachable: Vec<Vec<bool>>,
}

impl Lattice {
    fn build(word: &str, inventory: &GraphemeInventory) -> Self {
        let n = word.len();
        let candidates: Vec<Vec<usize>> = (0..n).map(|p| inventory.candidates(word, p)).collect();
        let mut reachable = vec![vec![false; n + 1]; n + 1];
        reachable[n][0] = true;
        for pos in (0..n).rev() {
            for &len in &candidates[pos] {
                for k in 0..n {
                    if reachable[pos + len][k] {
                        reachable[pos][k + 1] = true;
                    }
                }
            }
        }
        Self {
            candidates,
            reachable,
        }
    }

    fn can_finish(&self, pos: usize, count: usize) -> bool {
        self.reachable[pos].get(count).copied().unwrap_or(false)
    }

    /// First split of the word with exactly `target` graphemes, in search order.
    fn first_with_count(&self, word: &str, target: usize) -> Option<Vec<String>> {
        let mut path = Vec::with_capacity(target);
        self.descend(word, 0, target, &mut path).then_some(path)
    }

    fn descend(&self, word: &str, pos: usize, remaining: usize, path: &mut Vec<String>) -> bool {
        if pos == word.len() {
            return remaining == 0;
        }
        if remaining == 0 {
            return false;
        }
        for &len in &self.candidates[pos] {
            if !self.can_finish(pos + len, remaining - 1) {
                continue;
            }
            path.push(word[pos..pos + len].to_string());
            if self.descend(word, pos + len, remaining - 1, path) {
                return true;
            }
            path.pop();
        }
        false
    }
}

/// Splits `word` into `target_count` graphemes, longest candidates first.
///
/// When no split has exactly `target_count` graphemes, the first split with
/// the nearest achievable count is returned (ties go to the lower count) and
/// `exact_count_match` is false.
pub fn segment(
    word: &str,
    target_count: usize,
    inventory: &GraphemeInventory,
) -> Result<Segmentation, MapperError> {
    check_word(word)?;
    if target_count == 0 {
        return Err(MapperError::ZeroTarget);
    }
    let lattice = Lattice::build(word, inventory);
    let achievable: Vec<usize> = (1..=word.len())
        .filter(|&k| lattice.can_finish(0, k))
        .collect();
    let Some(&count) = achievable
        .iter()
        .min_by_key(|&&k| (k.abs_diff(target_count), k))
    else {
        return Err(unsegmentable(word, &lattice));
    };
    let graphemes = lattice
        .first_with_count(word, count)
        .expect("count is reachable");
    Ok(Segmentation {
        surface: word.to_string(),
        graphemes,
        exact_count_match: count == target_count,
    })
}

fn unsegmentable(word: &str, lattice: &Lattice) -> MapperError {
    // The first position that is reachable from the start but has no way forward.
    let mut reached = vec![false; word.len() + 1];
    reached[0] = true;
    for pos in 0..word.len() {
        if !reached[pos] {
            continue;
        }
        if lattice.candidates[pos].is_empty() {
            return MapperError::UnsegmentableWord {
                word: word.to_string(),
                ch: word[pos..].chars().next().unwrap_or('?'),
                position: pos,
            };
        }
        for &len in &lattice.candidates[pos] {
            reached[pos + len] = true;
        }
    }
    let position = word.len().saturating_sub(1);
    MapperError::UnsegmentableWord {
        word: word.to_string(),
        ch: word[position..].chars().next().unwrap_or('?'),
        position,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Enumeration {
    pub segmentations: Vec<Segmentation>,
    /// More segmentations exist than `max_results`.
    pub truncated: bool,
}

/// Every split of `word` into inventory graphemes, in search order, capped at
/// `max_results`.
pub fn enumerate_segmentations(
    word: &str,
    inventory: &GraphemeInventory,
    max_results: usize,
) -> Result<Enumeration, MapperError> {
    check_word(word)?;
    let mut out = Enumeration {
        segmentations: Vec::new(),
        truncated: false,
    };
    let mut path = Vec::new();
    walk_all(word, 0, inventory, max_results.max(1), &mut path, &mut out);
    Ok(out)
}

fn walk_all(
    word: &str,
    pos: usize,
    inventory: &GraphemeInventory,
    max_results: usize,
    path: &mut Vec<String>,
    out: &mut Enumeration,
) {
    if out.truncated {
        return;
    }
    if pos == word.len() {
        if out.segmentations.len() == max_results {
            out.truncated = true;
        } else {
            out.segmentations.push(Segmentation {
                surface: word.to_string(),
                graphemes: path.clone(),
                exact_count_match: true,
            });
        }
        return;
    }
    for len in inventory.candidates(word, pos) {
        path.push(word[pos..pos + len].to_string());
        walk_all(word, pos + len, inventory, max_results, path, out);
        path.pop();
    }
}
