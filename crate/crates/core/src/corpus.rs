//! Annotated corpus parsing, word features, and per-grapheme-count statistics.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::BufRead;

use serde::Serialize;
use thiserror::Error;

/// Maximum grapheme length in characters.
pub const MAX_GRAPHEME_LEN: usize = 4;

const VOWELS: &[char] = &['a', 'e', 'i', 'o', 'u'];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CorpusError {
    #[error("invalid word {word:?}: character {ch:?} at position {position} is not in [a-z]")]
    InvalidWord {
        word: String,
        ch: char,
        position: usize,
    },
    #[error("empty word")]
    EmptyWord,
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("failed to read corpus: {0}")]
    Io(String),
}

/// Lowercases `raw` and checks that every character is in `[a-z]`.
pub fn normalize_word(raw: &str) -> Result<String, CorpusError> {
    let word = raw.to_lowercase();
    if word.is_empty() {
        return Err(CorpusError::EmptyWord);
    }
    if let Some((position, ch)) = word
        .chars()
        .enumerate()
        .find(|(_, c)| !c.is_ascii_lowercase())
    {
        return Err(CorpusError::InvalidWord { word, ch, position });
    }
    Ok(word)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct FeatureVector {
    pub char_count: usize,
    pub vowel_count: usize,
    pub consonant_count: usize,
}

impl FeatureVector {
    pub fn as_array(&self) -> [f64; 3] {
        [
            self.char_count as f64,
            self.vowel_count as f64,
            self.consonant_count as f64,
        ]
    }
}

/// Length, vowel count and consonant count of a lowercase `[a-z]` word.
/// Vowels are `a e i o u`; `y` counts as a consonant.
pub fn extract_features(surface: &str) -> Result<FeatureVector, CorpusError> {
    if surface.is_empty() {
        return Err(CorpusError::EmptyWord);
    }
    let mut vowels = 0;
    for (position, ch) in surface.chars().enumerate() {
        if !ch.is_ascii_lowercase() {
            return Err(CorpusError::InvalidWord {
                word: surface.to_string(),
                ch,
                position,
            });
        }
        if VOWELS.contains(&ch) {
            vowels += 1;
        }
    }
    let chars = surface.len();
    Ok(FeatureVector {
        char_count: chars,
        vowel_count: vowels,
        consonant_count: chars - vowels,
    })
}

/// A word with its reference grapheme segmentation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct AnnotatedWord {
    surface: String,
    graphemes: Vec<String>,
}

impl AnnotatedWord {
    pub fn new(surface: &str, graphemes: Vec<String>) -> Result<Self, String> {
        let surface = normalize_word(surface).map_err(|e| e.to_string())?;
        if graphemes.is_empty() {
            return Err("no graphemes".into());
        }
        let graphemes: Vec<String> = graphemes.into_iter().map(|g| g.to_lowercase()).collect();
        for g in &graphemes {
            if g.is_empty() {
                return Err("empty grapheme".into());
            }
            if g.len() > MAX_GRAPHEME_LEN || !g.chars().all(|c| c.is_ascii_lowercase()) {
                return Err(format!("illegal grapheme {g:?}"));
            }
        }
        let joined = graphemes.concat();
        if joined != surface {
            return Err(format!(
                "graphemes concatenate to {joined:?}, expected {surface:?}"
            ));
        }
        Ok(Self { surface, graphemes })
    }

    pub fn surface(&self) -> &str {
        &self.surface
    }

    pub fn graphemes(&self) -> &[String] {
        &self.graphemes
    }

    pub fn grapheme_count(&self) -> usize {
        self.graphemes.len()
    }

    pub fn features(&self) -> FeatureVector {
        extract_features(&self.surface).expect("surface validated on construction")
    }
}

/// Parses `<surface>\t<g1>|<g2>|...` lines. `#` lines and blank lines are skipped.
pub fn parse_corpus<R: BufRead>(reader: R) -> Result<Vec<AnnotatedWord>, CorpusError> {
    let mut words = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| CorpusError::Io(e.to_string()))?;
        if let Some(word) = parse_line(&line, idx + 1)? {
            words.push(word);
        }
    }
    Ok(words)
}

pub fn parse_corpus_str(text: &str) -> Result<Vec<AnnotatedWord>, CorpusError> {
    parse_corpus(text.as_bytes())
}

fn parse_line(line: &str, number: usize) -> Result<Option<AnnotatedWord>, CorpusError> {
    let line = line.trim_end_matches(['\r', '\n', ' ']);
    if line.trim().is_empty() || line.starts_with('#') {
        return Ok(None);
    }
    let err = |reason: String| CorpusError::Parse {
        line: number,
        reason,
    };
    let (surface, segmentation) = line
        .split_once('\t')
        .ok_or_else(|| err("expected <word><TAB><graphemes>".into()))?;
    let graphemes = segmentation.split('|').map(str::to_string).collect();
    AnnotatedWord::new(surface.trim(), graphemes)
        .map(Some)
        .map_err(err)
}

pub fn serialize_corpus(words: &[AnnotatedWord]) -> String {
    let mut out = String::new();
    for w in words {
        let _ = writeln!(out, "{}\t{}", w.surface, w.graphemes.join("|"));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Moments {
    pub mean: f64,
    /// Population standard deviation.
    pub sigma: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StatsRow {
    pub grapheme_count: usize,
    pub n: usize,
    pub characters: Moments,
    pub vowels: Moments,
    pub consonants: Moments,
    /// False when the row cannot seed a Gaussian (a single sample, or any sigma of 0).
    pub gaussian_usable: bool,
}

/// Per-grapheme-count mean and population sigma of each word feature.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraphemeCountStats {
    pub rows: BTreeMap<usize, StatsRow>,
}

fn moments(values: &[f64]) -> Moments {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    Moments {
        mean,
        sigma: var.sqrt(),
    }
}

pub fn compute_stats(corpus: &[AnnotatedWord]) -> GraphemeCountStats {
    let mut groups: BTreeMap<usize, [Vec<f64>; 3]> = BTreeMap::new();
    for word in corpus {
        let f = word.features().as_array();
        let bucket = groups.entry(word.grapheme_count()).or_default();
        for (column, value) in bucket.iter_mut().zip(f) {
            column.push(value);
        }
    }
    let rows = groups
        .into_iter()
        .map(|(g, [chars, vowels, consonants])| {
            let n = chars.len();
            let (characters, vowels, consonants) =
                (moments(&chars), moments(&vowels), moments(&consonants));
            let gaussian_usable = n > 1
                && [characters, vowels, consonants]
                    .iter()
                    .all(|m| m.sigma > 0.0);
            let row = StatsRow {
                grapheme_count: g,
                n,
                characters,
                vowels,
                consonants,
                gaussian_usable,
            };
            (g, row)
        })
        .collect();
    GraphemeCountStats { rows }
}

impl GraphemeCountStats {
    /// Tab-separated table, means and sigmas to 3 decimal places.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from(
            "grapheme_count\tn\tchar_mean\tchar_sigma\tvowel_mean\tvowel_sigma\tcons_mean\tcons_sigma\n",
        );
        for row in self.rows.values() {
            let _ = writeln!(
                out,
                "{}\t{}\t{:.3}\t{:.3}\t{:.3}\t{:.3}\t{:.3}\t{:.3}",
                row.grapheme_count,
                row.n,
                row.characters.mean,
                row.characters.sigma,
                row.vowels.mean,
                row.vowels.sigma,
                row.consonants.mean,
                row.consonants.sigma
            );
        }
        out
    }
}

/// Relative frequency of each grapheme count among words of the same length,
/// keyed by `(word_length, grapheme_count)`.
pub fn frequency_table(corpus: &[AnnotatedWord]) -> BTreeMap<(usize, usize), f64> {
    let mut counts: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut per_length: BTreeMap<usize, usize> = BTreeMap::new();
    for w in corpus {
        let len = w.surface().len();
        *counts.entry((len, w.grapheme_count())).or_default() += 1;
        *per_length.entry(len).or_default() += 1;
    }
    counts
        .into_iter()
        .map(|((len, g), c)| ((len, g), c as f64 / per_length[&len] as f64))
        .collect()
}

pub fn frequency_tsv(table: &BTreeMap<(usize, usize), f64>) -> String {
    let mut out = String::from("word_length\tgrapheme_count\tprobability\n");
    for ((len, g), p) in table {
        let _ = writeln!(out, "{len}\t{g}\t{p:.4}");
    }
    out
}
