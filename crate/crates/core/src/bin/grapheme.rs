use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use grapheme_fis::corpus::{
    compute_stats, frequency_table, frequency_tsv, normalize_word, parse_corpus_str, AnnotatedWord,
};
use grapheme_fis::data::{ConfigError, DataSources};
use grapheme_fis::eval::{EvalReport, Evaluator, Method};
use grapheme_fis::mapper::{enumerate_segmentations, segment};
use grapheme_fis::predictor::CountPredictor;

#[derive(Parser)]
#[command(
    name = "grapheme",
    version,
    about = "Grapheme-count prediction and segmentation"
)]
struct Cli {
    #[command(flatten)]
    data: DataArgs,
    #[command(subcommand)]
    command: Command,
}

/// Resource overrides. Unset paths fall back to $GRAPHEME_DATA_DIR, then the bundled data.
#[derive(Args)]
struct DataArgs {
    /// Directory holding params.tsv, inventory.txt, dict.tsv, phonemes.txt, correspondences.tsv
    #[arg(long, global = true, value_name = "DIR")]
    data_dir: Option<PathBuf>,
    /// Membership parameter table
    #[arg(long, global = true, value_name = "FILE")]
    params: Option<PathBuf>,
    /// Grapheme inventory
    #[arg(long, global = true, value_name = "FILE")]
    inventory: Option<PathBuf>,
    /// Pronunciation dictionary (word<TAB>IPA)
    #[arg(long, global = true, value_name = "FILE")]
    dict: Option<PathBuf>,
    /// Phoneme inventory
    #[arg(long, global = true, value_name = "FILE")]
    phonemes: Option<PathBuf>,
    /// Phoneme-to-grapheme correspondence table
    #[arg(long, global = true, value_name = "FILE")]
    table: Option<PathBuf>,
}

impl DataArgs {
    fn sources(&self) -> DataSources {
        let mut src = DataSources::from_env();
        if self.data_dir.is_some() {
            src.data_dir.clone_from(&self.data_dir);
        }
        src.params.clone_from(&self.params);
        src.inventory.clone_from(&self.inventory);
        src.dict.clone_from(&self.dict);
        src.phonemes.clone_from(&self.phonemes);
        src.correspondences.clone_from(&self.table);
        src
    }
}

#[derive(Subcommand)]
enum Command {
    /// Per-grapheme-count feature means and sigmas of an annotated corpus
    Stats { corpus: PathBuf },
    /// P(grapheme count | word length) over an annotated corpus
    Freq { corpus: PathBuf },
    /// Predict the grapheme count of a word
    Predict {
        word: String,
        /// Also print features and rule activations
        #[arg(long, short)]
        verbose: bool,
    },
    /// Split a word into graphemes
    Segment {
        word: String,
        /// Target grapheme count
        #[arg(long, short, required_unless_present_any = ["auto", "all"], conflicts_with = "auto")]
        count: Option<usize>,
        /// Predict the count first
        #[arg(long)]
        auto: bool,
        /// List every segmentation instead
        #[arg(long, conflicts_with_all = ["count", "auto"])]
        all: bool,
        /// Cap for --all
        #[arg(long, default_value_t = 1000)]
        limit: usize,
    },
    /// Segment a word through its dictionary pronunciation
    IpaSegment { word: String },
    /// Score one or both methods against an annotated corpus
    Eval {
        corpus: PathBuf,
        #[arg(long, value_enum, default_value_t = MethodArg::Both)]
        method: MethodArg,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Fis,
    Ipa,
    Both,
}

impl MethodArg {
    fn methods(self) -> &'static [Method] {
        match self {
            MethodArg::Fis => &[Method::Fis],
            MethodArg::Ipa => &[Method::Ipa],
            MethodArg::Both => &[Method::Fis, Method::Ipa],
        }
    }
}

/// Exit status classes: 1 for problems with the word being processed, 2 for
/// anything wrong with configuration or inputs.
enum Failure {
    Word(String),
    Config(String),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e.to_string())
    }
}

fn word_err(e: impl std::fmt::Display) -> Failure {
    Failure::Word(e.to_string())
}

fn config_err(e: impl std::fmt::Display) -> Failure {
    Failure::Config(e.to_string())
}

fn read_corpus(path: &PathBuf) -> Result<Vec<AnnotatedWord>, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Config(format!("cannot read {}: {e}", path.display())))?;
    parse_corpus_str(&text).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))
}

fn run(cli: Cli, out: &mut impl Write) -> Result<(), Failure> {
    let src = cli.data.sources();
    match cli.command {
        Command::Stats { corpus } => {
            let corpus = read_corpus(&corpus)?;
            write!(out, "{}", compute_stats(&corpus).to_tsv()).map_err(config_err)?;
        }
        Command::Freq { corpus } => {
            let corpus = read_corpus(&corpus)?;
            write!(out, "{}", frequency_tsv(&frequency_table(&corpus))).map_err(config_err)?;
        }
        Command::Predict { word, verbose } => {
            let predictor = CountPredictor::new(&src.params()?).map_err(config_err)?;
            let word = normalize_word(&word).map_err(word_err)?;
            if verbose {
                let ex = predictor.explain(&word).map_err(word_err)?;
                let f = ex.features;
                writeln!(
                    out,
                    "characters={} vowels={} consonants={}",
                    f.char_count, f.vowel_count, f.consonant_count
                )
                .map_err(config_err)?;
                for (g, alpha) in &ex.activations {
                    writeln!(out, "g{g:<3}{alpha:.6}").map_err(config_err)?;
                }
                writeln!(out, "{}", ex.prediction).map_err(config_err)?;
            } else {
                let p = predictor.predict(&word).map_err(word_err)?;
                writeln!(out, "{p}").map_err(config_err)?;
            }
        }
        Command::Segment {
            word,
            count,
            auto,
            all,
            limit,
        } => {
            let inventory = src.inventory()?;
            let word = normalize_word(&word).map_err(word_err)?;
            if all {
                let e = enumerate_segmentations(&word, &inventory, limit).map_err(word_err)?;
                for s in &e.segmentations {
                    writeln!(out, "{s}").map_err(config_err)?;
                }
                if e.truncated {
                    eprintln!("(truncated at {limit})");
                }
                return Ok(());
            }
            let target = if auto {
                let predictor = CountPredictor::new(&src.params()?).map_err(config_err)?;
                let p = predictor.predict(&word).map_err(word_err)?;
                writeln!(out, "{p}").map_err(config_err)?;
                p.rounded as usize
            } else {
                count.expect("clap enforces --count without --auto")
            };
            let s = segment(&word, target, &inventory).map_err(word_err)?;
            writeln!(out, "{s}").map_err(config_err)?;
            if !s.exact_count_match {
                eprintln!(
                    "no split into {target} graphemes; nearest has {}",
                    s.achieved_count()
                );
            }
        }
        Command::IpaSegment { word } => {
            let ipa = src.ipa(&src.inventory()?)?;
            let word = normalize_word(&word).map_err(word_err)?;
            let r = ipa.segment(&word).map_err(word_err)?;
            writeln!(out, "/{}/ {}", r.ipa, r.phonemes.join(" ")).map_err(config_err)?;
            writeln!(out, "{}", r.segmentation).map_err(config_err)?;
        }
        Command::Eval {
            corpus,
            method,
            json,
        } => {
            let resources = src.load()?;
            let corpus = read_corpus(&corpus)?;
            let evaluator = Evaluator::new(&resources).map_err(config_err)?;
            let reports: Vec<EvalReport> = method
                .methods()
                .iter()
                .map(|&m| evaluator.evaluate(&corpus, m))
                .collect();
            if json {
                let text = serde_json::to_string_pretty(&reports).map_err(config_err)?;
                writeln!(out, "{text}").map_err(config_err)?;
            } else {
                let text: Vec<String> = reports.iter().map(ToString::to_string).collect();
                writeln!(out, "{}", text.join("\n\n")).map_err(config_err)?;
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match run(cli, &mut out) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Word(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
