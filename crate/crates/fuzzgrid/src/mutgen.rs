//! Deterministic mutation-stage generators.
//!
//! These reproduce the walking deterministic stages of AFL-style fuzzers as
//! pure functions, so the rendering and pattern-detection pipeline can be
//! exercised end to end without running a fuzzer. Flipping means XOR 0xFF
//! per byte and XOR 1 per bit; bits are numbered most-significant first
//! within each byte, matching AFL's `FLIP_BIT` order. None of these stages
//! ever resizes the input.

use thiserror::Error;

use crate::corpus::TestInput;

/// One deterministic mutation schedule over a seed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MutationStage {
    /// Flip a window of `bits` consecutive bits (1, 2, or 4), walking the
    /// window one bit per generated input.
    WalkingBitFlip { bits: u8 },
    /// Flip a window of `bytes` consecutive bytes (1, 2, or 4), walking the
    /// window one byte per generated input.
    WalkingByteFlip { bytes: usize },
    /// Substitute each of `values` in turn at a fixed `offset`. Values must
    /// be pairwise distinct and differ from the seed's byte at that offset.
    ByteValueSweep { offset: usize, values: Vec<u8> },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MutgenError {
    #[error("seed is {actual} byte(s), stage needs at least {needed}")]
    SeedTooShort { needed: usize, actual: usize },
    #[error("sweep offset {offset} is out of range for a {len}-byte seed")]
    OffsetOutOfRange { offset: usize, len: usize },
    #[error("walking flip width {width} is unsupported (expected 1, 2, or 4)")]
    UnsupportedWidth { width: usize },
    #[error("sweep value {value:#04X} appears more than once")]
    DuplicateSweepValue { value: u8 },
    #[error("sweep value {value:#04X} equals the seed byte at offset {offset}")]
    SweepValueMatchesSeed { value: u8, offset: usize },
}

fn check_width(width: usize) -> Result<(), MutgenError> {
    match width {
        1 | 2 | 4 => Ok(()),
        _ => Err(MutgenError::UnsupportedWidth { width }),
    }
}

/// Run one stage over `seed`. The untouched seed is emitted first, at index
/// 0, so first-baseline diffs of the result need no separate seed argument.
///
/// * `WalkingByteFlip { bytes: k }` appends `len - k + 1` inputs; input `i`
///   is the seed with bytes `[i, i + k)` each XORed with 0xFF.
/// * `WalkingBitFlip { bits: b }` appends `8 * len - b + 1` inputs; input `i`
///   is the seed with bits `[i, i + b)` toggled, bit `j` being bit
///   `7 - (j % 8)` of byte `j / 8`.
/// * `ByteValueSweep` appends one input per value, the seed with
///   `payload[offset]` replaced.
pub fn generate_stage(seed: &[u8], stage: &MutationStage) -> Result<Vec<TestInput>, MutgenError> {
    let mutated = mutated_inputs(seed, stage)?;
    let mut corpus = Vec::with_capacity(mutated.len() + 1);
    corpus.push(TestInput::new(0, seed.to_vec()));
    corpus.extend(
        mutated
            .into_iter()
            .enumerate()
            .map(|(i, payload)| TestInput::new(i + 1, payload)),
    );
    Ok(corpus)
}

/// The mutated payloads of a stage, without the leading seed.
fn mutated_inputs(seed: &[u8], stage: &MutationStage) -> Result<Vec<Vec<u8>>, MutgenError> {
    match *stage {
        MutationStage::WalkingByteFlip { bytes } => {
            check_width(bytes)?;
            if seed.len() < bytes {
                return Err(MutgenError::SeedTooShort {
                    needed: bytes,
                    actual: seed.len(),
                });
            }
            Ok((0..=seed.len() - bytes)
                .map(|start| {
                    let mut payload = seed.to_vec();
                    for byte in &mut payload[start..start + bytes] {
                        *byte ^= 0xFF;
                    }
                    payload
                })
                .collect())
        }
        MutationStage::WalkingBitFlip { bits } => {
            let bits = bits as usize;
            check_width(bits)?;
            if seed.is_empty() {
                return Err(MutgenError::SeedTooShort {
                    needed: 1,
                    actual: 0,
                });
            }
            let total_bits = seed.len() * 8;
            Ok((0..=total_bits - bits)
                .map(|start| {
                    let mut payload = seed.to_vec();
                    for bit in start..start + bits {
                        payload[bit / 8] ^= 0x80 >> (bit % 8);
                    }
                    payload
                })
                .collect())
        }
        MutationStage::ByteValueSweep { offset, ref values } => {
            if offset >= seed.len() {
                return Err(MutgenError::OffsetOutOfRange {
                    offset,
                    len: seed.len(),
                });
            }
            let mut seen = [false; 256];
            for &value in values {
                if seen[value as usize] {
                    return Err(MutgenError::DuplicateSweepValue { value });
                }
                seen[value as usize] = true;
                if value == seed[offset] {
                    return Err(MutgenError::SweepValueMatchesSeed { value, offset });
                }
            }
            Ok(values
                .iter()
                .map(|&value| {
                    let mut payload = seed.to_vec();
                    payload[offset] = value;
                    payload
                })
                .collect())
        }
    }
}

/// Concatenate several stages over one seed into a single corpus: the seed
/// once at index 0, then every stage's mutated inputs in order, indices
/// renumbered densely.
pub fn generate_demo_corpus(
    seed: &[u8],
    stages: &[MutationStage],
) -> Result<Vec<TestInput>, MutgenError> {
    if seed.is_empty() {
        return Err(MutgenError::SeedTooShort {
            needed: 1,
            actual: 0,
        });
    }
    let mut corpus = vec![TestInput::new(0, seed.to_vec())];
    for stage in stages {
        for payload in mutated_inputs(seed, stage)? {
            corpus.push(TestInput::new(corpus.len(), payload));
        }
    }
    Ok(corpus)
}
