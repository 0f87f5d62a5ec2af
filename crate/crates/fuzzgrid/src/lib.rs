//! Byte-level visualization of mutational fuzzing corpora.
//!
//! An ordered corpus of test inputs is turned into a sequence of PNG color
//! grids: each byte becomes one box whose color encodes the byte's value as
//! the red channel, and the boxes changed since a baseline input are
//! outlined. Watching those frames in order shows how a fuzzer's
//! deterministic mutation stages walk over the seed; [`patterns`] recovers
//! the same structure analytically from diff records.
//!
//! The pipeline is composed from small pieces: [`corpus`] reads and writes
//! input sequences, [`color`] maps bytes to colors, [`diff`] computes
//! changed-byte sets, [`render`] draws and encodes frames, [`mutgen`]
//! fabricates corpora with known mutation structure, and [`cli`] ties it
//! all together behind subcommands.

pub mod cli;
pub mod color;
pub mod corpus;
pub mod diff;
pub mod mutgen;
pub mod patterns;
pub mod render;

pub use color::{byte_to_color, color_to_byte, color_to_hex_triplet, Rgb};
pub use corpus::{CorpusSource, TestInput};
pub use diff::{diff_inputs, diff_stream, BaselineMode, DiffRecord};
pub use mutgen::{generate_demo_corpus, generate_stage, MutationStage};
pub use patterns::{detect_patterns, summarize_report, PatternClass, PatternReport};
pub use render::{frame_geometry, render_corpus, render_input, Frame, GridLayout, HighlightStyle};
