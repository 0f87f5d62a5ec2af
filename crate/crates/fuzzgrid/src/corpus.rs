//! Test-input corpora: loading, validation, and serialization.
//!
//! A corpus is an ordered sequence of test inputs, indexed densely from 0 in
//! generation order. Two sources are supported: a hex dump file (one input
//! per line, two hex digits per byte) and a directory of raw input files
//! ordered lexicographically by filename, which matches the zero-padded
//! `id:NNNNNN,...` names fuzzer queues use.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use thiserror::Error;

/// One generated test case: its position in generation order plus the raw
/// payload bytes. Payloads are never empty; ingestion rejects empty inputs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TestInput {
    pub index: usize,
    pub payload: Vec<u8>,
}

impl TestInput {
    pub fn new(index: usize, payload: Vec<u8>) -> Self {
        Self { index, payload }
    }

    pub fn len(&self) -> usize {
        self.payload.len()
    }

    pub fn is_empty(&self) -> bool {
        self.payload.is_empty()
    }
}

/// Where a corpus comes from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CorpusSource {
    /// A hex dump file, one test input per line.
    HexDump(PathBuf),
    /// A directory of raw input files, ordered lexicographically by filename.
    Directory(PathBuf),
}

impl CorpusSource {
    /// Pick the variant for a path: directories load as `Directory`,
    /// everything else as `HexDump`.
    pub fn for_path(path: &Path) -> Self {
        if path.is_dir() {
            CorpusSource::Directory(path.to_path_buf())
        } else {
            CorpusSource::HexDump(path.to_path_buf())
        }
    }

    pub fn load(&self) -> Result<Vec<TestInput>, CorpusError> {
        match self {
            CorpusSource::HexDump(path) => load_hex_dump(path),
            CorpusSource::Directory(path) => load_directory(path),
        }
    }
}

#[derive(Debug, Error)]
pub enum CorpusError {
    /// A dump line holds an odd number of hex digits. Lines are 1-based.
    #[error("line {line}: odd number of hex digits")]
    OddDigitCount { line: usize },
    /// A non-hex character in a dump line. Line and column are 1-based.
    #[error("line {line}, column {column}: invalid hex digit {found:?}")]
    InvalidHexDigit {
        line: usize,
        column: usize,
        found: char,
    },
    #[error("corpus contains no test inputs")]
    EmptyCorpus,
    #[error("input file {filename:?} is empty")]
    EmptyFile { filename: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

impl CorpusError {
    fn io(path: &Path, source: io::Error) -> Self {
        CorpusError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

fn hex_value(c: char) -> Option<u8> {
    c.to_digit(16).map(|d| d as u8)
}

/// Parse a hex dump. Non-blank line `k` (0-based) becomes the test input with
/// index `k`; blank lines are skipped so a dump truncated mid-campaign still
/// loads. Both digit cases are accepted. A final line without a terminating
/// newline is accepted too.
pub fn parse_hex_dump(text: &str) -> Result<Vec<TestInput>, CorpusError> {
    let mut inputs = Vec::new();
    for (line_no, raw_line) in text.lines().enumerate() {
        let line = line_no + 1;
        if raw_line.trim().is_empty() {
            continue;
        }
        let mut payload = Vec::with_capacity(raw_line.len() / 2);
        let mut pending: Option<u8> = None;
        for (col, c) in raw_line.chars().enumerate() {
            let digit = hex_value(c).ok_or(CorpusError::InvalidHexDigit {
                line,
                column: col + 1,
                found: c,
            })?;
            pending = match pending {
                None => Some(digit),
                Some(high) => {
                    payload.push(high << 4 | digit);
                    None
                }
            };
        }
        if pending.is_some() {
            return Err(CorpusError::OddDigitCount { line });
        }
        inputs.push(TestInput::new(inputs.len(), payload));
    }
    if inputs.is_empty() {
        return Err(CorpusError::EmptyCorpus);
    }
    Ok(inputs)
}

/// Serialize a corpus to dump text: one line per input in index order, each
/// byte as two uppercase hex digits, every line newline-terminated.
pub fn write_hex_dump(corpus: &[TestInput]) -> Result<String, CorpusError> {
    if corpus.is_empty() {
        return Err(CorpusError::EmptyCorpus);
    }
    let total: usize = corpus.iter().map(|t| t.payload.len() * 2 + 1).sum();
    let mut out = String::with_capacity(total);
    for input in corpus {
        for byte in &input.payload {
            write!(out, "{byte:02X}").unwrap();
        }
        out.push('\n');
    }
    Ok(out)
}

pub fn load_hex_dump(path: &Path) -> Result<Vec<TestInput>, CorpusError> {
    let text = fs::read_to_string(path).map_err(|e| CorpusError::io(path, e))?;
    parse_hex_dump(&text)
}

pub fn save_hex_dump(corpus: &[TestInput], path: &Path) -> Result<(), CorpusError> {
    let text = write_hex_dump(corpus)?;
    fs::write(path, text).map_err(|e| CorpusError::io(path, e))
}

/// Load every regular file in `dir` as one test input, ordered
/// lexicographically by filename and indexed 0..n-1. Subdirectories are
/// skipped; zero-length files are rejected.
pub fn load_directory(dir: &Path) -> Result<Vec<TestInput>, CorpusError> {
    let mut files: Vec<(PathBuf, PathBuf)> = Vec::new();
    let entries = fs::read_dir(dir).map_err(|e| CorpusError::io(dir, e))?;
    for entry in entries {
        let entry = entry.map_err(|e| CorpusError::io(dir, e))?;
        let path = entry.path();
        let file_type = entry.file_type().map_err(|e| CorpusError::io(&path, e))?;
        if file_type.is_file() {
            files.push((PathBuf::from(entry.file_name()), path));
        }
    }
    files.sort();
    if files.is_empty() {
        return Err(CorpusError::EmptyCorpus);
    }

    let mut inputs = Vec::with_capacity(files.len());
    for (index, (name, path)) in files.into_iter().enumerate() {
        let payload = fs::read(&path).map_err(|e| CorpusError::io(&path, e))?;
        if payload.is_empty() {
            return Err(CorpusError::EmptyFile {
                filename: name.to_string_lossy().into_owned(),
            });
        }
        inputs.push(TestInput::new(index, payload));
    }
    Ok(inputs)
}

/// Write each input to `dir` as a raw binary file `input_%09d.bin`, creating
/// the directory if needed. Returns the filenames in index order. The naming
/// keeps lexicographic order equal to index order, so a written directory
/// loads back in the same order.
pub fn write_directory(corpus: &[TestInput], dir: &Path) -> Result<Vec<String>, CorpusError> {
    if corpus.is_empty() {
        return Err(CorpusError::EmptyCorpus);
    }
    fs::create_dir_all(dir).map_err(|e| CorpusError::io(dir, e))?;
    let mut names = Vec::with_capacity(corpus.len());
    for input in corpus {
        let name = format!("input_{:09}.bin", input.index);
        let path = dir.join(&name);
        fs::write(&path, &input.payload).map_err(|e| CorpusError::io(&path, e))?;
        names.push(name);
    }
    Ok(names)
}
