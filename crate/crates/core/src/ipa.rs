//! Dictionary-driven baseline: word -> IPA -> phonemes -> graphemes.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::Serialize;
use thiserror::Error;
use unicode_normalization::UnicodeNormalization;

use crate::mapper::{GraphemeInventory, Segmentation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IpaError {
    #[error("{file} line {line}: {reason}")]
    Resource {
        file: &'static str,
        line: usize,
        reason: String,
    },
    #[error("{0:?} is not in the pronunciation dictionary")]
    NotInDictionary(String),
    #[error("cannot parse IPA {ipa:?} at offset {offset}")]
    UnparsableIpa { ipa: String, offset: usize },
    #[error("no grapheme assignment of {phonemes:?} spells {word:?}")]
    MappingFailed { word: String, phonemes: Vec<String> },
}

const STRESS_MARKS: &[char] = &['ˈ', 'ˌ', '.', '\'', ' ', '/', '[', ']'];
const LENGTH_MARK: char = 'ː';

fn resource_err(file: &'static str, line: usize, reason: impl Into<String>) -> IpaError {
    IpaError::Resource {
        file,
        line,
        reason: reason.into(),
    }
}

/// The set of phoneme symbols, each 1..=3 code points.
#[derive(Debug, Clone)]
pub struct PhonemeInventory {
    phonemes: Vec<String>,
    set: HashSet<String>,
    /// Code points preceding `ː` inside some symbol, e.g. `i` for `iː`.
    long_bases: HashSet<char>,
    max_len: usize,
}

impl PhonemeInventory {
    pub fn new(phonemes: Vec<String>) -> Result<Self, IpaError> {
        let mut set = HashSet::new();
        let mut long_bases = HashSet::new();
        for (i, raw) in phonemes.iter().enumerate() {
            let len = raw.chars().count();
            if !(1..=3).contains(&len) {
                return Err(resource_err(
                    "phonemes",
                    i + 1,
                    format!("bad symbol {raw:?}"),
                ));
            }
            if !set.insert(raw.clone()) {
                return Err(resource_err(
                    "phonemes",
                    i + 1,
                    format!("duplicate {raw:?}"),
                ));
            }
            let chars: Vec<char> = raw.chars().collect();
            for w in chars.windows(2) {
                if w[1] == LENGTH_MARK {
                    long_bases.insert(w[0]);
                }
            }
        }
        let max_len = phonemes
            .iter()
            .map(|p| p.chars().count())
            .max()
            .unwrap_or(1);
        Ok(Self {
            phonemes,
            set,
            long_bases,
            max_len,
        })
    }

    /// One symbol per line; `#` comments.
    pub fn parse(text: &str) -> Result<Self, IpaError> {
        let symbols = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(normalize_symbol)
            .collect();
        Self::new(symbols)
    }

    pub fn phonemes(&self) -> &[String] {
        &self.phonemes
    }

    pub fn len(&self) -> usize {
        self.phonemes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phonemes.is_empty()
    }

    pub fn contains(&self, symbol: &str) -> bool {
        self.set.contains(symbol)
    }
}

/// NFC plus common lookalike folding (`ɡ` -> `g`, `ɹ` -> `r`, `:` -> `ː`).
fn normalize_symbol(raw: &str) -> String {
    raw.nfc()
        .map(|c| match c {
            'ɡ' => 'g',
            'ɹ' => 'r',
            ':' => LENGTH_MARK,
            other => other,
        })
        .collect()
}

/// Strips stress, syllable and bracket marks, and drops any length mark that
/// does not belong to a long phoneme of `inventory`.
pub fn normalize_ipa(raw: &str, inventory: &PhonemeInventory) -> String {
    let folded = normalize_symbol(raw);
    let mut out = String::with_capacity(folded.len());
    let mut prev: Option<char> = None;
    for c in folded.chars().filter(|c| !STRESS_MARKS.contains(c)) {
        if c == LENGTH_MARK && !prev.is_some_and(|p| inventory.long_bases.contains(&p)) {
            continue;
        }
        out.push(c);
        prev = Some(c);
    }
    out
}

/// Word -> normalized IPA. The first listed pronunciation of a word wins.
#[derive(Debug, Clone)]
pub struct PronunciationDict {
    entries: HashMap<String, String>,
}

impl PronunciationDict {
    /// `word<TAB>IPA` lines; `#` comments.
    pub fn parse(text: &str, inventory: &PhonemeInventory) -> Result<Self, IpaError> {
        let mut entries = HashMap::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim_end();
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let (word, ipa) = line
                .split_once('\t')
                .ok_or_else(|| resource_err("dictionary", idx + 1, "expected word<TAB>IPA"))?;
            let word = word.trim().to_lowercase();
            let ipa = normalize_ipa(ipa.trim(), inventory);
            if word.is_empty() || ipa.is_empty() {
                return Err(resource_err(
                    "dictionary",
                    idx + 1,
                    "empty word or transcription",
                ));
            }
            entries.entry(word).or_insert(ipa);
        }
        Ok(Self { entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn lookup_ipa(&self, word: &str) -> Result<&str, IpaError> {
        self.entries
            .get(word)
            .map(String::as_str)
            .ok_or_else(|| IpaError::NotInDictionary(word.to_string()))
    }
}

/// Splits `ipa` into inventory phonemes, longest first, backtracking on dead ends.
pub fn parse_phonemes(ipa: &str, inventory: &PhonemeInventory) -> Result<Vec<String>, IpaError> {
    let chars: Vec<char> = ipa.chars().collect();
    if chars.is_empty() {
        return Err(IpaError::UnparsableIpa {
            ipa: ipa.to_string(),
            offset: 0,
        });
    }
    let mut dead = vec![false; chars.len()];
    let mut furthest = 0;
    let mut path = Vec::new();
    if split_phonemes(&chars, 0, inventory, &mut dead, &mut furthest, &mut path) {
        Ok(path)
    } else {
        Err(IpaError::UnparsableIpa {
            ipa: ipa.to_string(),
            offset: furthest,
        })
    }
}

fn split_phonemes(
    chars: &[char],
    pos: usize,
    inventory: &PhonemeInventory,
    dead: &mut [bool],
    furthest: &mut usize,
    path: &mut Vec<String>,
) -> bool {
    if pos == chars.len() {
        return true;
    }
    if dead[pos] {
        return false;
    }
    *furthest = (*furthest).max(pos);
    for len in (1..=inventory.max_len.min(chars.len() - pos)).rev() {
        let symbol: String = chars[pos..pos + len].iter().collect();
        if !inventory.contains(&symbol) {
            continue;
        }
        path.push(symbol);
        if split_phonemes(chars, pos + len, inventory, dead, furthest, path) {
            return true;
        }
        path.pop();
    }
    dead[pos] = true;
    false
}

/// Phoneme -> candidate graphemes in priority order.
#[derive(Debug, Clone)]
pub struct CorrespondenceTable {
    candidates: BTreeMap<String, Vec<String>>,
}

impl CorrespondenceTable {
    /// `phoneme<TAB>g1,g2,...` lines; every phoneme of `phonemes` must have a
    /// row and every candidate must be in `graphemes`.
    pub fn parse(
        text: &str,
        phonemes: &PhonemeInventory,
        graphemes: &GraphemeInventory,
    ) -> Result<Self, IpaError> {
        let mut candidates = BTreeMap::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim_end();
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |reason: String| resource_err("correspondences", idx + 1, reason);
            let (phoneme, list) = line
                .split_once('\t')
                .ok_or_else(|| err("expected phoneme<TAB>graphemes".into()))?;
            let phoneme = normalize_symbol(phoneme.trim());
            if !phonemes.contains(&phoneme) {
                return Err(err(format!("unknown phoneme {phoneme:?}")));
            }
            let list: Vec<String> = list
                .split(',')
                .map(|g| g.trim().to_string())
                .filter(|g| !g.is_empty())
                .collect();
            if list.is_empty() {
                return Err(err(format!("no candidates for {phoneme:?}")));
            }
            if let Some(g) = list.iter().find(|g| !graphemes.contains(g)) {
                return Err(err(format!("{g:?} is not in the grapheme inventory")));
            }
            if candidates.insert(phoneme.clone(), list).is_some() {
                return Err(err(format!("duplicate row for {phoneme:?}")));
            }
        }
        if let Some(missing) = phonemes
            .phonemes()
            .iter()
            .find(|p| !candidates.contains_key(*p))
        {
            return Err(resource_err(
                "correspondences",
                0,
                format!("phoneme {missing:?} has no candidate graphemes"),
            ));
        }
        Ok(Self { candidates })
    }

    pub fn candidates(&self, phoneme: &str) -> &[String] {
        self.candidates.get(phoneme).map_or(&[], Vec::as_slice)
    }
}

/// Assigns one grapheme per phoneme, left to right, so that the graphemes
/// spell `word` exactly. Dead ends backtrack to the previous phoneme's next
/// candidate.
pub fn map_ipa_to_graphemes(
    word: &str,
    phonemes: &[String],
    table: &CorrespondenceTable,
) -> Result<Segmentation, IpaError> {
    let mut failed = HashSet::new();
    let mut path = Vec::with_capacity(phonemes.len());
    if assign(word, 0, phonemes, table, &mut failed, &mut path) {
        Ok(Segmentation {
            surface: word.to_string(),
            graphemes: path,
            exact_count_match: true,
        })
    } else {
        Err(IpaError::MappingFailed {
            word: word.to_string(),
            phonemes: phonemes.to_vec(),
        })
    }
}

fn assign(
    word: &str,
    pos: usize,
    phonemes: &[String],
    table: &CorrespondenceTable,
    failed: &mut HashSet<(usize, usize)>,
    path: &mut Vec<String>,
) -> bool {
    let i = path.len();
    if i == phonemes.len() {
        return pos == word.len();
    }
    if failed.contains(&(i, pos)) {
        return false;
    }
    for g in table.candidates(&phonemes[i]) {
        if word[pos..].starts_with(g.as_str()) {
            path.push(g.clone());
            if assign(word, pos + g.len(), phonemes, table, failed, path) {
                return true;
            }
            path.pop();
        }
    }
    failed.insert((i, pos));
    false
}

/// Everything the baseline needs.
#[derive(Debug, Clone)]
pub struct IpaResources {
    pub dict: PronunciationDict,
    pub phonemes: PhonemeInventory,
    pub table: CorrespondenceTable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IpaSegmentation {
    pub ipa: String,
    pub phonemes: Vec<String>,
    pub segmentation: Segmentation,
}

impl IpaResources {
    pub fn segment(&self, word: &str) -> Result<IpaSegmentation, IpaError> {
        let ipa = self.dict.lookup_ipa(word)?.to_string();
        let phonemes = parse_phonemes(&ipa, &self.phonemes)?;
        let segmentation = map_ipa_to_graphemes(word, &phonemes, &self.table)?;
        Ok(IpaSegmentation {
            ipa,
            phonemes,
            segmentation,
        })
    }
}
