//! Acceptance gate: seven checks covering the color formula, corpus round
//! trips, render fidelity, pattern reproduction, generator/detector
//! equivalence, throughput, and determinism.
//!
//! Each check prints exactly one `criterion N PASS/FAIL` line (visible with
//! `--nocapture`) and enforces its runtime budget. The checks serialize on
//! a mutex so the budgets are measured on an otherwise idle process.

use std::collections::BTreeMap;
use std::fs;
use std::panic::{catch_unwind, resume_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::sync::Mutex;
use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, RngCore, SeedableRng};
use sha2::{Digest, Sha256};

use fuzzgrid::color::{byte_to_color, color_to_hex_triplet};
use fuzzgrid::corpus::{parse_hex_dump, save_hex_dump, write_hex_dump, TestInput};
use fuzzgrid::diff::{diff_stream, BaselineMode};
use fuzzgrid::mutgen::{generate_demo_corpus, generate_stage, MutationStage};
use fuzzgrid::patterns::{detect_patterns, PatternClass, PatternReport, DEFAULT_MIN_RUN};
use fuzzgrid::render::{
    decode_png, encode_png, frame_geometry, render_corpus, render_input, GridLayout, HighlightStyle,
};

static GATE: Mutex<()> = Mutex::new(());

/// Run one criterion body serialized and timed, printing its verdict line.
fn criterion<F: FnOnce()>(number: u8, description: &str, budget_s: Option<f64>, body: F) {
    let _guard = GATE.lock().unwrap_or_else(|e| e.into_inner());
    let started = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(body));
    let elapsed = started.elapsed().as_secs_f64();
    if let Err(panic) = outcome {
        println!("criterion {number} FAIL — {description} ({elapsed:.2} s)");
        resume_unwind(panic);
    }
    if let Some(budget) = budget_s {
        if elapsed > budget {
            println!(
                "criterion {number} FAIL — {description} ({elapsed:.2} s over {budget} s budget)"
            );
            panic!("criterion {number} exceeded its {budget} s budget: {elapsed:.2} s");
        }
    }
    println!("criterion {number} PASS — {description} ({elapsed:.2} s)");
}

fn random_payload(rng: &mut StdRng, len: usize) -> Vec<u8> {
    let mut payload = vec![0u8; len];
    rng.fill_bytes(&mut payload);
    payload
}

fn binary(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_fuzzgrid"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn criterion_1_color_formula() {
    criterion(
        1,
        "byte v maps to color (v,0,0) and triplet XY0000",
        Some(1.0),
        || {
            for v in 0..=255u8 {
                let color = byte_to_color(v);
                assert_eq!((color.r, color.g, color.b), (v, 0, 0), "value {v}");
                assert_eq!(
                    color_to_hex_triplet(color).to_string(),
                    format!("{v:02X}0000"),
                    "value {v}"
                );
            }
        },
    );
}

#[test]
fn criterion_2_dump_round_trip() {
    criterion(
        2,
        "500 random corpora survive write/parse exactly",
        Some(10.0),
        || {
            let mut rng = StdRng::seed_from_u64(0x2222);
            for case in 0..500 {
                let input_count = rng.gen_range(1..=100);
                let corpus: Vec<TestInput> = (0..input_count)
                    .map(|i| {
                        let len = rng.gen_range(1..=4096);
                        TestInput::new(i, random_payload(&mut rng, len))
                    })
                    .collect();
                let text = write_hex_dump(&corpus).unwrap();
                assert_eq!(parse_hex_dump(&text).unwrap(), corpus, "case {case}");
            }
        },
    );
}

#[test]
fn criterion_3_render_geometry_and_fidelity() {
    criterion(
        3,
        "200 random renders decode to predicted size and exact box colors",
        Some(30.0),
        || {
            let mut rng = StdRng::seed_from_u64(0x3333);
            for case in 0..200 {
                let len = rng.gen_range(1..=512);
                let payload = random_payload(&mut rng, len);
                let layout = GridLayout {
                    box_width_px: rng.gen_range(1..=9),
                    box_height_px: rng.gen_range(1..=9),
                    bytes_per_row: rng.gen_range(1..=64),
                    gutter_px: rng.gen_range(0..=3),
                    ..GridLayout::default()
                };
                let input = TestInput::new(0, payload.clone());
                let frame =
                    render_input(&input, &layout, &[], HighlightStyle::NoHighlight).unwrap();
                let predicted = frame_geometry(payload.len(), &layout);
                let decoded = decode_png(&encode_png(&frame).unwrap()).unwrap();
                assert_eq!(
                    (decoded.width_px, decoded.height_px),
                    (predicted.width_px, predicted.height_px),
                    "case {case}: decoded dimensions diverge from prediction"
                );
                let pitch_x = layout.box_width_px + layout.gutter_px;
                let pitch_y = layout.box_height_px + layout.gutter_px;
                for (i, &byte) in payload.iter().enumerate() {
                    let x = (i % layout.bytes_per_row) * pitch_x + layout.box_width_px / 2;
                    let y = (i / layout.bytes_per_row) * pitch_y + layout.box_height_px / 2;
                    assert_eq!(
                        decoded.pixel(x, y),
                        byte_to_color(byte),
                        "case {case}: box {i} center pixel"
                    );
                }
            }
        },
    );
}

#[test]
fn criterion_4_pattern_reproduction() {
    criterion(
        4,
        "staged fixture corpus detects as 2-byte, 4-byte, then fixed runs",
        Some(5.0),
        || {
            let mut rng = StdRng::seed_from_u64(0x4444);
            let seed = random_payload(&mut rng, 64);
            let offset = 10;
            let values: Vec<u8> = (1..=5).map(|i| seed[offset] ^ i).collect();
            let stages = [
                MutationStage::WalkingByteFlip { bytes: 2 },
                MutationStage::WalkingByteFlip { bytes: 4 },
                MutationStage::ByteValueSweep { offset, values },
            ];
            let corpus = generate_demo_corpus(&seed, &stages).unwrap();

            let dir = tempfile::tempdir().unwrap();
            let dump = dir.path().join("corpus.txt");
            let report_path = dir.path().join("report.json");
            save_hex_dump(&corpus, &dump).unwrap();
            let out = binary(&[
                "detect",
                "--input",
                dump.to_str().unwrap(),
                "--out",
                report_path.to_str().unwrap(),
                "--quiet",
            ]);
            assert_eq!(
                out.status.code(),
                Some(0),
                "detect failed: {}",
                String::from_utf8_lossy(&out.stderr)
            );

            let report: PatternReport =
                serde_json::from_str(&fs::read_to_string(&report_path).unwrap()).unwrap();
            assert_eq!(report.runs.len(), 3, "expected exactly three runs");
            assert_eq!(report.runs[0].from_index, 1);
            assert_eq!(report.runs[2].to_index, corpus.len() - 1);
            assert_eq!(
                report.runs[0].class,
                PatternClass::KByteShifting {
                    k: 2,
                    stride: 1,
                    start_offset: 0,
                    run_length: 63
                }
            );
            assert_eq!(
                report.runs[1].class,
                PatternClass::KByteShifting {
                    k: 4,
                    stride: 1,
                    start_offset: 0,
                    run_length: 61
                }
            );
            assert_eq!(
                report.runs[2].class,
                PatternClass::SingleByteFixed {
                    offset,
                    run_length: 5
                }
            );
        },
    );
}

#[test]
fn criterion_5_generator_detector_equivalence() {
    criterion(
        5,
        "walking flips over 50 seeds per k detect as one stride-1 run",
        Some(30.0),
        || {
            let mut rng = StdRng::seed_from_u64(0x5555);
            for k in [1usize, 2, 4] {
                for round in 0..50 {
                    let seed_len = rng.gen_range(8..=32);
                    let seed = random_payload(&mut rng, seed_len);
                    let corpus =
                        generate_stage(&seed, &MutationStage::WalkingByteFlip { bytes: k })
                            .unwrap();
                    let records = diff_stream(&corpus, BaselineMode::First).unwrap();
                    let report = detect_patterns(&records, &corpus, DEFAULT_MIN_RUN).unwrap();
                    let mutated = seed.len() - k + 1;
                    assert_eq!(report.runs.len(), 1, "k={k} round={round}");
                    assert_eq!(report.runs[0].from_index, 1, "k={k} round={round}");
                    assert_eq!(report.runs[0].to_index, mutated, "k={k} round={round}");
                    assert_eq!(
                        report.runs[0].class,
                        PatternClass::KByteShifting {
                            k,
                            stride: 1,
                            start_offset: 0,
                            run_length: mutated,
                        },
                        "k={k} round={round}"
                    );
                }
            }
        },
    );
}

#[test]
fn criterion_6_throughput() {
    criterion(
        6,
        "9,606 inputs of 1,024 bytes render within the wall-time bound",
        Some(300.0),
        || {
            let mut rng = StdRng::seed_from_u64(0x6666);
            let corpus: Vec<TestInput> = (0..9606)
                .map(|i| TestInput::new(i, random_payload(&mut rng, 1024)))
                .collect();
            let dir = tempfile::tempdir().unwrap();
            let manifest = render_corpus(
                &corpus,
                &GridLayout::default(),
                HighlightStyle::NoHighlight,
                None,
                dir.path(),
            )
            .unwrap();
            assert_eq!(manifest.len(), 9606);
            assert!(dir.path().join("file_000009605.png").is_file());
        },
    );
}

fn hash_frames(dir: &Path) -> BTreeMap<String, [u8; 32]> {
    let mut hashes = BTreeMap::new();
    for entry in fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "png") {
            let digest = Sha256::digest(fs::read(&path).unwrap());
            hashes.insert(
                path.file_name().unwrap().to_string_lossy().into_owned(),
                digest.into(),
            );
        }
    }
    hashes
}

#[test]
fn criterion_7_determinism() {
    criterion(
        7,
        "two renders of the throughput corpus hash identically",
        None,
        || {
            let mut rng = StdRng::seed_from_u64(0x6666);
            let corpus: Vec<TestInput> = (0..9606)
                .map(|i| TestInput::new(i, random_payload(&mut rng, 1024)))
                .collect();
            let dir = tempfile::tempdir().unwrap();
            let dump = dir.path().join("corpus.txt");
            save_hex_dump(&corpus, &dump).unwrap();
            let frames = dir.path().join("frames");
            let args = [
                "render",
                "--input",
                dump.to_str().unwrap(),
                "--out",
                frames.to_str().unwrap(),
                "--diff",
                "none",
                "--highlight",
                "none",
                "--quiet",
            ];

            let out = binary(&args);
            assert_eq!(
                out.status.code(),
                Some(0),
                "first render failed: {}",
                String::from_utf8_lossy(&out.stderr)
            );
            let first = hash_frames(&frames);
            let out = binary(&args);
            assert_eq!(
                out.status.code(),
                Some(0),
                "second render failed: {}",
                String::from_utf8_lossy(&out.stderr)
            );
            let second = hash_frames(&frames);

            assert_eq!(first.len(), 9606);
            assert_eq!(first, second, "PNG content changed between identical runs");
        },
    );
}
