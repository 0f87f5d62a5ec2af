//! Classification of diff-record runs into mutation patterns.
//!
//! Walking deterministic mutation stages leave a recognizable signature in
//! first-baseline diffs: a contiguous window of changed bytes whose start
//! offset advances by a constant stride, or a single offset whose value
//! keeps changing. [`detect_patterns`] segments a diff stream into maximal
//! runs of those signatures; everything else stays unclassified.
//!
//! Detection deliberately works on [`crate::diff::BaselineMode::First`]
//! diffs. Against
//! the previous input, a walking k-byte flip changes bytes at both the old
//! and the new window, which obscures the window shape; against the first
//! input the changed set is exactly the current window.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::TestInput;
use crate::diff::DiffRecord;

/// Shortest run the detector will classify. Four steps is long enough to
/// reject coincidental alignments while still catching short stages.
pub const DEFAULT_MIN_RUN: usize = 4;

/// The mutation signature of one run of consecutive inputs.
///
/// `run_length` always equals the number of inputs in the run, i.e.
/// `to - from + 1` of the enclosing [`PatternRun`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum PatternClass {
    /// Every input changes a contiguous window of `k` bytes, and the window
    /// start advances by `stride` bytes per input, beginning at
    /// `start_offset`.
    KByteShifting {
        k: usize,
        stride: usize,
        start_offset: usize,
        run_length: usize,
    },
    /// Every input changes exactly the byte at `offset`, and the value at
    /// that offset differs between every adjacent pair of inputs.
    SingleByteFixed { offset: usize, run_length: usize },
    /// No rule reached the minimum run length at these inputs.
    Unclassified {
        first_index: usize,
        run_length: usize,
    },
}

/// One classified range of input indices, inclusive on both ends.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternRun {
    #[serde(rename = "from")]
    pub from_index: usize,
    #[serde(rename = "to")]
    pub to_index: usize,
    #[serde(flatten)]
    pub class: PatternClass,
}

/// Ordered classification of a whole diff stream. Runs are contiguous,
/// disjoint, ascending, and jointly cover every diffed input exactly once.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternReport {
    pub runs: Vec<PatternRun>,
}

/// Human-readable and machine-readable renderings of a report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportSummary {
    /// One line per run, in index order.
    pub lines: Vec<String>,
    /// The report as a JSON document.
    pub json: String,
}

impl ReportSummary {
    pub fn text(&self) -> String {
        self.lines.join("\n")
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PatternError {
    #[error("record for input {to} has baseline {from}, expected first-input baseline 0")]
    BaselineModeMismatch { from: usize, to: usize },
    #[error(
        "diff records misaligned with corpus: expected {}, found {}",
        .expected.map_or_else(|| "no further records".to_string(), |t| format!("a record for input {t}")),
        .found.map_or_else(|| "none".to_string(), |t| format!("a record for input {t}"))
    )]
    IndexGap {
        expected: Option<usize>,
        found: Option<usize>,
    },
    #[error("minimum run length must be at least 2, got {min_run}")]
    MinRunTooSmall { min_run: usize },
}

/// The bounding window of a sorted, duplicate-free offset set: `(start, k)`
/// iff the set is non-empty and contiguous, i.e. covers exactly
/// `start..start + k`.
pub fn classify_window(changed_offsets: &[usize]) -> Option<(usize, usize)> {
    let first = *changed_offsets.first()?;
    let last = *changed_offsets.last()?;
    (last - first + 1 == changed_offsets.len()).then_some((first, changed_offsets.len()))
}

/// Records must be the first-baseline diff stream of `values`: one record
/// per input `1..n`, in order, each diffed against input 0.
fn validate(
    records: &[DiffRecord],
    values: &[TestInput],
    min_run: usize,
) -> Result<(), PatternError> {
    if min_run < 2 {
        return Err(PatternError::MinRunTooSmall { min_run });
    }
    for record in records {
        if record.from_index != 0 {
            return Err(PatternError::BaselineModeMismatch {
                from: record.from_index,
                to: record.to_index,
            });
        }
    }
    let mut expected = 1..values.len();
    let mut found = records.iter().map(|r| r.to_index);
    loop {
        match (expected.next(), found.next()) {
            (None, None) => return Ok(()),
            (e, f) if e == f => continue,
            (e, f) => {
                return Err(PatternError::IndexGap {
                    expected: e,
                    found: f,
                })
            }
        }
    }
}

/// Length of the longest shifting run at the head of `windows`: contiguous
/// windows of one size whose start offsets form an arithmetic progression
/// with positive stride. The stride is fixed by the first two windows, so a
/// lone window yields length 1 (below any valid minimum run).
fn shifting_run_len(windows: &[Option<(usize, usize)>]) -> usize {
    let Some(Some((first_start, k))) = windows.first().copied() else {
        return 0;
    };
    let Some(Some((second_start, second_k))) = windows.get(1).copied() else {
        return 1;
    };
    if second_k != k || second_start <= first_start {
        return 1;
    }
    let stride = second_start - first_start;
    let mut len = 2;
    let mut start = second_start;
    while windows.get(len).copied().flatten() == Some((start + stride, k)) {
        start += stride;
        len += 1;
    }
    len
}

/// Length of the longest fixed run at the head of `windows`: singleton
/// windows at one offset whose byte value differs between every adjacent
/// pair of inputs. `first_to` is the input index covered by `windows[0]`.
fn fixed_run_len(
    windows: &[Option<(usize, usize)>],
    first_to: usize,
    values: &[TestInput],
) -> usize {
    let Some(Some((offset, 1))) = windows.first().copied() else {
        return 0;
    };
    let mut len = 1;
    while windows.get(len).copied().flatten() == Some((offset, 1)) {
        let previous = values[first_to + len - 1].payload.get(offset);
        let current = values[first_to + len].payload.get(offset);
        match (previous, current) {
            (Some(a), Some(b)) if a != b => len += 1,
            _ => break,
        }
    }
    len
}

/// Segment a first-baseline diff stream into maximal pattern runs.
///
/// The scan is greedy and left to right: at each record it measures the
/// longest shifting run and the longest fixed run starting there, emits the
/// longer one if it reaches `min_run` (ties go to [`PatternClass::SingleByteFixed`],
/// since stride 0 is excluded from shifting), and otherwise leaves the
/// record to a surrounding unclassified run and advances by one.
pub fn detect_patterns(
    records: &[DiffRecord],
    values: &[TestInput],
    min_run: usize,
) -> Result<PatternReport, PatternError> {
    validate(records, values, min_run)?;
    let windows: Vec<Option<(usize, usize)>> = records
        .iter()
        .map(|r| classify_window(&r.changed_offsets))
        .collect();

    let mut runs = Vec::new();
    let mut unclassified_from: Option<usize> = None;
    let flush = |runs: &mut Vec<PatternRun>, pending: &mut Option<usize>, next_from: usize| {
        if let Some(first_index) = pending.take() {
            runs.push(PatternRun {
                from_index: first_index,
                to_index: next_from - 1,
                class: PatternClass::Unclassified {
                    first_index,
                    run_length: next_from - first_index,
                },
            });
        }
    };

    let mut pos = 0;
    while pos < records.len() {
        let from_index = records[pos].to_index;
        let shifting = shifting_run_len(&windows[pos..]);
        let fixed = fixed_run_len(&windows[pos..], from_index, values);
        let run_length = shifting.max(fixed);
        if run_length < min_run {
            unclassified_from.get_or_insert(from_index);
            pos += 1;
            continue;
        }
        flush(&mut runs, &mut unclassified_from, from_index);
        let class = if fixed >= shifting {
            let (offset, _) = windows[pos].expect("fixed run has a window");
            PatternClass::SingleByteFixed { offset, run_length }
        } else {
            let (start_offset, k) = windows[pos].expect("shifting run has a window");
            let (second_start, _) = windows[pos + 1].expect("shifting run is at least 2 long");
            PatternClass::KByteShifting {
                k,
                stride: second_start - start_offset,
                start_offset,
                run_length,
            }
        };
        runs.push(PatternRun {
            from_index,
            to_index: from_index + run_length - 1,
            class,
        });
        pos += run_length;
    }
    if unclassified_from.is_some() {
        let end = records
            .last()
            .expect("pending run implies records")
            .to_index;
        flush(&mut runs, &mut unclassified_from, end + 1);
    }
    Ok(PatternReport { runs })
}

/// Render a report as one line per run plus a JSON document. Both forms
/// list runs in index order with every class field.
pub fn summarize_report(report: &PatternReport) -> ReportSummary {
    let lines = report
        .runs
        .iter()
        .map(|run| {
            let range = format!("inputs {}..{}", run.from_index, run.to_index);
            match run.class {
                PatternClass::KByteShifting {
                    k,
                    stride,
                    start_offset,
                    ..
                } => format!("{range}: {k}-byte shifting window, stride {stride}, from offset {start_offset}"),
                PatternClass::SingleByteFixed { offset, .. } => {
                    format!("{range}: single-byte fixed mutations at offset {offset}")
                }
                PatternClass::Unclassified { run_length, .. } => {
                    format!("{range}: unclassified ({run_length} input(s))")
                }
            }
        })
        .collect();
    let json = serde_json::to_string(report).expect("report serializes without fallible types");
    ReportSummary { lines, json }
}
