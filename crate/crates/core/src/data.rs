//! Bundled resource files and the loader that lets users swap them out.
//!
//! Resolution order for each file: explicit path, then
//! `$GRAPHEME_DATA_DIR/<name>`, then the copy compiled into the binary.

use std::env;
use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::ipa::{
    CorrespondenceTable, IpaError, IpaResources, PhonemeInventory, PronunciationDict,
};
use crate::mapper::{GraphemeInventory, MapperError};
use crate::predictor::{PredictorError, PredictorParams};

pub const PARAMS: &str = include_str!("../data/params.tsv");
pub const INVENTORY: &str = include_str!("../data/inventory.txt");
pub const DICT: &str = include_str!("../data/dict.tsv");
pub const PHONEMES: &str = include_str!("../data/phonemes.txt");
pub const CORRESPONDENCES: &str = include_str!("../data/correspondences.tsv");
pub const SAMPLE_CORPUS: &str = include_str!("../data/sample_corpus.tsv");

pub const DATA_DIR_VAR: &str = "GRAPHEME_DATA_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DataFile {
    Params,
    Inventory,
    Dict,
    Phonemes,
    Correspondences,
}

impl DataFile {
    pub fn file_name(self) -> &'static str {
        match self {
            DataFile::Params => "params.tsv",
            DataFile::Inventory => "inventory.txt",
            DataFile::Dict => "dict.tsv",
            DataFile::Phonemes => "phonemes.txt",
            DataFile::Correspondences => "correspondences.tsv",
        }
    }

    pub fn bundled(self) -> &'static str {
        match self {
            DataFile::Params => PARAMS,
            DataFile::Inventory => INVENTORY,
            DataFile::Dict => DICT,
            DataFile::Phonemes => PHONEMES,
            DataFile::Correspondences => CORRESPONDENCES,
        }
    }
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Params {
        path: String,
        source: PredictorError,
    },
    #[error("{path}: {source}")]
    Inventory { path: String, source: MapperError },
    #[error("{path}: {source}")]
    Ipa { path: String, source: IpaError },
}

/// Where each resource comes from. `None` fields fall back to the data
/// directory (if any) and then the bundled copy.
#[derive(Debug, Clone, Default)]
pub struct DataSources {
    pub data_dir: Option<PathBuf>,
    pub params: Option<PathBuf>,
    pub inventory: Option<PathBuf>,
    pub dict: Option<PathBuf>,
    pub phonemes: Option<PathBuf>,
    pub correspondences: Option<PathBuf>,
}

impl DataSources {
    /// Bundled data only, ignoring the environment.
    pub fn bundled() -> Self {
        Self::default()
    }

    /// Picks up `GRAPHEME_DATA_DIR` if set and non-empty.
    pub fn from_env() -> Self {
        let data_dir = env::var_os(DATA_DIR_VAR)
            .filter(|v| !v.is_empty())
            .map(PathBuf::from);
        Self {
            data_dir,
            ..Self::default()
        }
    }

    fn explicit(&self, file: DataFile) -> Option<&Path> {
        match file {
            DataFile::Params => self.params.as_deref(),
            DataFile::Inventory => self.inventory.as_deref(),
            DataFile::Dict => self.dict.as_deref(),
            DataFile::Phonemes => self.phonemes.as_deref(),
            DataFile::Correspondences => self.correspondences.as_deref(),
        }
    }

    /// Returns `(label, text)`; the label names the path or `<bundled name>`.
    pub fn read(&self, file: DataFile) -> Result<(String, String), ConfigError> {
        let path = match (self.explicit(file), &self.data_dir) {
            (Some(p), _) => p.to_path_buf(),
            (None, Some(dir)) => dir.join(file.file_name()),
            (None, None) => {
                return Ok((
                    format!("<bundled {}>", file.file_name()),
                    file.bundled().to_string(),
                ))
            }
        };
        let text = fs::read_to_string(&path).map_err(|source| ConfigError::Read {
            path: path.clone(),
            source,
        })?;
        Ok((path.display().to_string(), text))
    }

    pub fn params(&self) -> Result<PredictorParams, ConfigError> {
        let (path, text) = self.read(DataFile::Params)?;
        PredictorParams::parse(&text).map_err(|source| ConfigError::Params { path, source })
    }

    pub fn inventory(&self) -> Result<GraphemeInventory, ConfigError> {
        let (path, text) = self.read(DataFile::Inventory)?;
        GraphemeInventory::parse(&text).map_err(|source| ConfigError::Inventory { path, source })
    }

    pub fn ipa(&self, graphemes: &GraphemeInventory) -> Result<IpaResources, ConfigError> {
        let (path, text) = self.read(DataFile::Phonemes)?;
        let phonemes =
            PhonemeInventory::parse(&text).map_err(|source| ConfigError::Ipa { path, source })?;
        let (path, text) = self.read(DataFile::Dict)?;
        let dict = PronunciationDict::parse(&text, &phonemes)
            .map_err(|source| ConfigError::Ipa { path, source })?;
        let (path, text) = self.read(DataFile::Correspondences)?;
        let table = CorrespondenceTable::parse(&text, &phonemes, graphemes)
            .map_err(|source| ConfigError::Ipa { path, source })?;
        Ok(IpaResources {
            dict,
            phonemes,
            table,
        })
    }

    pub fn load(&self) -> Result<Resources, ConfigError> {
        let params = self.params()?;
        let inventory = self.inventory()?;
        let ipa = self.ipa(&inventory)?;
        Ok(Resources {
            params,
            inventory,
            ipa,
        })
    }
}

/// All resources, loaded and validated.
#[derive(Debug, Clone)]
pub struct Resources {
    pub params: PredictorParams,
    pub inventory: GraphemeInventory,
    pub ipa: IpaResources,
}

impl Resources {
    pub fn bundled() -> Result<Self, ConfigError> {
        DataSources::bundled().load()
    }
}
