//! Command-line front end.
//!
//! Four subcommands cover the whole pipeline: `convert` moves corpora
//! between the hex-dump and directory representations, `render` emits one
//! PNG frame per input plus a manifest, `detect` classifies mutation
//! patterns, and `gen` produces fixture corpora from a seed.
//!
//! Exit codes are fixed so shell pipelines can branch: 0 success, 2 input
//! or format errors (including flag parse failures), 3 I/O errors, 4
//! semantic errors such as a corpus too small to diff. Timing goes to
//! standard error so standard output stays machine-parseable.

use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::corpus::{self, CorpusError, CorpusSource};
use crate::diff::{diff_stream, BaselineMode, DiffError};
use crate::mutgen::{generate_demo_corpus, MutationStage, MutgenError};
use crate::patterns::{detect_patterns, summarize_report, PatternError, DEFAULT_MIN_RUN};
use crate::render::{render_corpus, GridLayout, HighlightStyle, RenderError};

/// Render, diff, and classify ordered fuzzing test-input corpora.
#[derive(Debug, Parser)]
#[command(name = "fuzzgrid", version, about)]
pub struct Cli {
    /// Suppress counts, summaries, and timing; errors still print.
    #[arg(long, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Convert a corpus between hex-dump and directory form.
    Convert(ConvertArgs),
    /// Render every input as a PNG color grid with optional change
    /// highlighting.
    Render(RenderArgs),
    /// Classify mutation-pattern runs from first-baseline diffs.
    Detect(DetectArgs),
    /// Generate a mutation-stage corpus from a seed file.
    Gen(GenArgs),
}

#[derive(Debug, Args)]
pub struct ConvertArgs {
    /// Corpus to read: a hex-dump file or a directory of raw input files.
    #[arg(long)]
    pub input: PathBuf,
    /// Destination: a dump file when the input is a directory, a directory
    /// when the input is a dump.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    /// Corpus to read: a hex-dump file or a directory of raw input files.
    #[arg(long)]
    pub input: PathBuf,
    /// Directory that receives the PNG frames and manifest.json.
    #[arg(long)]
    pub out: PathBuf,
    /// Box size in pixels.
    #[arg(long = "box", value_name = "WxH", default_value = "16x16", value_parser = parse_box_size)]
    pub box_size: (usize, usize),
    /// Bytes per grid row.
    #[arg(long, value_name = "N", default_value_t = 32, value_parser = parse_positive)]
    pub bpr: usize,
    /// Gutter between boxes in pixels.
    #[arg(long, value_name = "N", default_value_t = 1)]
    pub gutter: usize,
    /// Baseline each input is diffed against for highlighting.
    #[arg(long, value_enum, default_value_t = DiffArg::Previous)]
    pub diff: DiffArg,
    /// How changed boxes are marked.
    #[arg(long, value_enum, default_value_t = HighlightArg::Outline)]
    pub highlight: HighlightArg,
}

#[derive(Debug, Args)]
pub struct DetectArgs {
    /// Corpus to read: a hex-dump file or a directory of raw input files.
    #[arg(long)]
    pub input: PathBuf,
    /// File that receives the JSON pattern report.
    #[arg(long)]
    pub out: PathBuf,
    /// Shortest run of inputs the detector will classify.
    #[arg(long = "min-run", value_name = "N", default_value_t = DEFAULT_MIN_RUN, value_parser = parse_min_run)]
    pub min_run: usize,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// File whose raw bytes seed every stage.
    #[arg(long)]
    pub seed: PathBuf,
    /// Hex-dump file that receives the generated corpus.
    #[arg(long)]
    pub out: PathBuf,
    /// Mutation stage to run over the seed; repeatable, applied in order.
    /// Forms: byteflip:K or bitflip:K with K in {1,2,4}, and
    /// sweep:OFFSET:V1,V2,... with two-digit hex values.
    #[arg(long = "stage", value_name = "SPEC", required = true, value_parser = parse_stage)]
    pub stages: Vec<MutationStage>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DiffArg {
    Previous,
    First,
    None,
}

impl DiffArg {
    fn baseline(self) -> Option<BaselineMode> {
        match self {
            DiffArg::Previous => Some(BaselineMode::Previous),
            DiffArg::First => Some(BaselineMode::First),
            DiffArg::None => Option::None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum HighlightArg {
    Outline,
    None,
}

impl HighlightArg {
    fn style(self) -> HighlightStyle {
        match self {
            HighlightArg::Outline => HighlightStyle::default(),
            HighlightArg::None => HighlightStyle::NoHighlight,
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Diff(#[from] DiffError),
    #[error(transparent)]
    Pattern(#[from] PatternError),
    #[error(transparent)]
    Mutgen(#[from] MutgenError),
    #[error(transparent)]
    Render(#[from] RenderError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    /// Process exit code: 2 input/format, 3 I/O, 4 semantic.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Corpus(CorpusError::Io { .. }) => 3,
            CliError::Corpus(_) => 2,
            CliError::Mutgen(_) => 2,
            CliError::Render(RenderError::OffsetOutOfRange { .. } | RenderError::EmptyCorpus) => 4,
            CliError::Render(_) => 3,
            CliError::Diff(_) => 4,
            CliError::Pattern(_) => 4,
            CliError::Io { .. } => 3,
        }
    }
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Convert(args) => cmd_convert(args, cli.quiet),
        Command::Render(args) => cmd_render(args, cli.quiet),
        Command::Detect(args) => cmd_detect(args, cli.quiet),
        Command::Gen(args) => cmd_gen(args, cli.quiet),
    }
}

/// Directory in, dump out; dump in, directory out.
fn cmd_convert(args: &ConvertArgs, quiet: bool) -> Result<(), CliError> {
    let source = CorpusSource::for_path(&args.input);
    let loaded = source.load()?;
    match source {
        CorpusSource::Directory(_) => corpus::save_hex_dump(&loaded, &args.out)?,
        CorpusSource::HexDump(_) => {
            corpus::write_directory(&loaded, &args.out)?;
        }
    }
    if !quiet {
        println!("converted {} inputs", loaded.len());
    }
    Ok(())
}

fn cmd_render(args: &RenderArgs, quiet: bool) -> Result<(), CliError> {
    let started = Instant::now();
    let loaded = CorpusSource::for_path(&args.input).load()?;
    let (box_width_px, box_height_px) = args.box_size;
    let layout = GridLayout {
        box_width_px,
        box_height_px,
        bytes_per_row: args.bpr,
        gutter_px: args.gutter,
        ..GridLayout::default()
    };
    let manifest = render_corpus(
        &loaded,
        &layout,
        args.highlight.style(),
        args.diff.baseline(),
        &args.out,
    )?;
    let manifest_path = args.out.join("manifest.json");
    let json = serde_json::to_string_pretty(&manifest).expect("a string list serializes");
    fs::write(&manifest_path, json + "\n").map_err(|source| CliError::Io {
        path: manifest_path,
        source,
    })?;
    if !quiet {
        println!("rendered {} frames", manifest.len());
        eprintln!("elapsed {:.2} s", started.elapsed().as_secs_f64());
    }
    Ok(())
}

fn cmd_detect(args: &DetectArgs, quiet: bool) -> Result<(), CliError> {
    let loaded = CorpusSource::for_path(&args.input).load()?;
    let records = diff_stream(&loaded, BaselineMode::First)?;
    let report = detect_patterns(&records, &loaded, args.min_run)?;
    let summary = summarize_report(&report);
    fs::write(&args.out, summary.json.clone() + "\n").map_err(|source| CliError::Io {
        path: args.out.clone(),
        source,
    })?;
    if !quiet {
        for line in &summary.lines {
            println!("{line}");
        }
    }
    Ok(())
}

fn cmd_gen(args: &GenArgs, quiet: bool) -> Result<(), CliError> {
    let seed = fs::read(&args.seed).map_err(|source| CliError::Io {
        path: args.seed.clone(),
        source,
    })?;
    let generated = generate_demo_corpus(&seed, &args.stages)?;
    corpus::save_hex_dump(&generated, &args.out)?;
    if !quiet {
        println!("generated {} inputs", generated.len());
    }
    Ok(())
}

fn parse_box_size(text: &str) -> Result<(usize, usize), String> {
    let (w, h) = text
        .split_once('x')
        .ok_or_else(|| format!("{text:?} is not of the form WxH, e.g. 16x16"))?;
    let side = |part: &str, name: &str| {
        part.parse::<usize>()
            .ok()
            .filter(|&v| v >= 1)
            .ok_or_else(|| format!("box {name} {part:?} must be a positive integer"))
    };
    Ok((side(w, "width")?, side(h, "height")?))
}

fn parse_positive(text: &str) -> Result<usize, String> {
    text.parse::<usize>()
        .ok()
        .filter(|&v| v >= 1)
        .ok_or_else(|| format!("{text:?} must be a positive integer"))
}

fn parse_min_run(text: &str) -> Result<usize, String> {
    let value = text
        .parse::<usize>()
        .map_err(|_| format!("{text:?} is not an integer"))?;
    if value < 2 {
        return Err("minimum run length must be at least 2".to_string());
    }
    Ok(value)
}

fn parse_stage(spec: &str) -> Result<MutationStage, String> {
    let mut parts = spec.splitn(3, ':');
    let kind = parts.next().unwrap_or_default();
    match kind {
        "byteflip" | "bitflip" => {
            let width = parts
                .next()
                .ok_or_else(|| format!("{kind} needs a width, e.g. {kind}:2"))?;
            if parts.next().is_some() {
                return Err(format!("{kind} takes a single width, e.g. {kind}:2"));
            }
            let width: usize = width
                .parse()
                .map_err(|_| format!("invalid {kind} width {width:?}"))?;
            Ok(if kind == "byteflip" {
                MutationStage::WalkingByteFlip { bytes: width }
            } else {
                let bits =
                    u8::try_from(width).map_err(|_| format!("invalid bitflip width {width}"))?;
                MutationStage::WalkingBitFlip { bits }
            })
        }
        "sweep" => {
            let offset = parts
                .next()
                .ok_or_else(|| "sweep needs an offset, e.g. sweep:0:01,02".to_string())?;
            let offset: usize = offset
                .parse()
                .map_err(|_| format!("invalid sweep offset {offset:?}"))?;
            let values = parts
                .next()
                .ok_or_else(|| "sweep needs values, e.g. sweep:0:01,02".to_string())?;
            let values = values
                .split(',')
                .map(|v| {
                    u8::from_str_radix(v, 16).map_err(|_| format!("invalid sweep value {v:?}"))
                })
                .collect::<Result<Vec<u8>, String>>()?;
            Ok(MutationStage::ByteValueSweep { offset, values })
        }
        other => Err(format!(
            "unknown stage {other:?} (expected byteflip:K, bitflip:K, or sweep:OFFSET:V1,V2,...)"
        )),
    }
}
