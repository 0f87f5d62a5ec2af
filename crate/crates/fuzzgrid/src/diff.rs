//! Changed-byte sets between test inputs.
//!
//! Diffing is strictly positional: offset `o` changed iff the two payloads
//! disagree at `o`, and every offset in the non-overlapping suffix of the
//! longer payload counts as changed. There is no alignment; an insertion
//! shifts everything after it, which is exactly what the box-grid view shows.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::TestInput;

/// Which input a diff is taken against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaselineMode {
    /// The immediately preceding input. Best for highlighting what changed
    /// from one frame to the next.
    Previous,
    /// The first input (the original seed). Walking mutation stages produce
    /// clean shifting windows only against this baseline.
    First,
}

/// Byte offsets at which two inputs differ.
///
/// `changed_offsets` is strictly increasing; it is empty iff the payloads
/// are byte-identical (including equal length).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiffRecord {
    #[serde(rename = "from")]
    pub from_index: usize,
    #[serde(rename = "to")]
    pub to_index: usize,
    #[serde(rename = "changed")]
    pub changed_offsets: Vec<usize>,
    #[serde(rename = "len_from")]
    pub length_from: usize,
    #[serde(rename = "len_to")]
    pub length_to: usize,
}

impl DiffRecord {
    /// True when the two payloads were byte-identical.
    pub fn is_identical(&self) -> bool {
        self.changed_offsets.is_empty()
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DiffError {
    #[error("corpus has {len} input(s); diffing needs at least 2")]
    CorpusTooSmall { len: usize },
}

/// Diff two inputs. The changed set is symmetric in `a` and `b`.
pub fn diff_inputs(a: &TestInput, b: &TestInput) -> DiffRecord {
    let overlap = a.payload.len().min(b.payload.len());
    let longest = a.payload.len().max(b.payload.len());
    let mut changed: Vec<usize> = (0..overlap)
        .filter(|&o| a.payload[o] != b.payload[o])
        .collect();
    changed.extend(overlap..longest);
    DiffRecord {
        from_index: a.index,
        to_index: b.index,
        changed_offsets: changed,
        length_from: a.payload.len(),
        length_to: b.payload.len(),
    }
}

/// Diff every input after the first against its baseline: record `(i-1, i)`
/// for [`BaselineMode::Previous`], `(0, i)` for [`BaselineMode::First`],
/// for `i = 1..n-1` in order.
pub fn diff_stream(corpus: &[TestInput], mode: BaselineMode) -> Result<Vec<DiffRecord>, DiffError> {
    if corpus.len() < 2 {
        return Err(DiffError::CorpusTooSmall { len: corpus.len() });
    }
    let records = (1..corpus.len())
        .map(|i| {
            let base = match mode {
                BaselineMode::Previous => &corpus[i - 1],
                BaselineMode::First => &corpus[0],
            };
            diff_inputs(base, &corpus[i])
        })
        .collect();
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn input(index: usize, payload: &[u8]) -> TestInput {
        TestInput::new(index, payload.to_vec())
    }

    #[test]
    fn identical_inputs_have_empty_changed_set() {
        let a = input(0, &[0x01, 0x02]);
        let b = input(1, &[0x01, 0x02]);
        let d = diff_inputs(&a, &b);
        assert!(d.is_identical());
        assert_eq!(d.length_from, 2);
        assert_eq!(d.length_to, 2);
    }

    #[test]
    fn single_differing_byte() {
        let a = input(0, &[0x00, 0x00]);
        let b = input(1, &[0x00, 0xFF]);
        assert_eq!(diff_inputs(&a, &b).changed_offsets, vec![1]);
    }

    #[test]
    fn length_extension_counts_as_changed() {
        let a = input(0, &[0x01, 0x02]);
        let b = input(1, &[0x01, 0x02, 0x03, 0x04]);
        assert_eq!(diff_inputs(&a, &b).changed_offsets, vec![2, 3]);
    }

    #[test]
    fn shrinking_counts_tail_as_changed() {
        let a = input(0, &[0x01, 0x02, 0x03]);
        let b = input(1, &[0x01]);
        assert_eq!(diff_inputs(&a, &b).changed_offsets, vec![1, 2]);
    }

    #[test]
    fn changed_set_is_symmetric() {
        let a = input(0, &[0x01, 0x02, 0x03]);
        let b = input(1, &[0xFF, 0x02]);
        assert_eq!(
            diff_inputs(&a, &b).changed_offsets,
            diff_inputs(&b, &a).changed_offsets
        );
    }

    #[test]
    fn previous_mode_pairs_neighbors() {
        let corpus = vec![input(0, &[0]), input(1, &[1]), input(2, &[2])];
        let records = diff_stream(&corpus, BaselineMode::Previous).unwrap();
        let pairs: Vec<(usize, usize)> =
            records.iter().map(|r| (r.from_index, r.to_index)).collect();
        assert_eq!(pairs, vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn first_mode_pairs_against_seed() {
        let corpus = vec![input(0, &[0]), input(1, &[1]), input(2, &[2])];
        let records = diff_stream(&corpus, BaselineMode::First).unwrap();
        let pairs: Vec<(usize, usize)> =
            records.iter().map(|r| (r.from_index, r.to_index)).collect();
        assert_eq!(pairs, vec![(0, 1), (0, 2)]);
    }

    #[test]
    fn first_mode_isolates_each_flip() {
        let seed = [0xAA, 0xBB];
        let corpus = vec![
            input(0, &seed),
            input(1, &[0x55, 0xBB]),
            input(2, &[0xAA, 0x44]),
        ];
        let records = diff_stream(&corpus, BaselineMode::First).unwrap();
        assert_eq!(records[0].changed_offsets, vec![0]);
        assert_eq!(records[1].changed_offsets, vec![1]);
    }

    #[test]
    fn stream_rejects_tiny_corpus() {
        let corpus = vec![input(0, &[0])];
        assert_eq!(
            diff_stream(&corpus, BaselineMode::Previous),
            Err(DiffError::CorpusTooSmall { len: 1 })
        );
    }

    #[test]
    fn record_serializes_with_wire_field_names() {
        let d = diff_inputs(&input(0, &[0x00, 0x01]), &input(1, &[0x00, 0x02]));
        let json = serde_json::to_string(&d).unwrap();
        assert_eq!(
            json,
            r#"{"from":0,"to":1,"changed":[1],"len_from":2,"len_to":2}"#
        );
        let back: DiffRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(back, d);
    }
}
