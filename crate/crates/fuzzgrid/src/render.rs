//! Box-grid rendering of test inputs and PNG frame emission.
//!
//! Each byte of a payload becomes one colored box, laid out row-major with a
//! fixed number of bytes per row. Gutters separate the boxes; cells past the
//! end of the payload in a partial last row are painted with the background
//! color, so payload length stays visible. Changed bytes can be marked with
//! an outline ring that leaves the byte color readable underneath.
//!
//! Rendering and encoding are deterministic: identical inputs and settings
//! produce byte-identical PNG output, run after run.

use std::fs;
use std::io::Cursor;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use rayon::prelude::*;
use thiserror::Error;

use crate::color::{byte_to_color, Rgb};
use crate::corpus::TestInput;
use crate::diff::{diff_inputs, BaselineMode};

/// Grid geometry and fill colors for rendering one input.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridLayout {
    pub box_width_px: usize,
    pub box_height_px: usize,
    pub bytes_per_row: usize,
    /// Spacing between boxes. No outer margin is added.
    pub gutter_px: usize,
    /// Fill for cells past the end of the payload.
    pub background: Rgb,
    pub gutter_color: Rgb,
}

impl Default for GridLayout {
    fn default() -> Self {
        Self {
            box_width_px: 16,
            box_height_px: 16,
            bytes_per_row: 32,
            gutter_px: 1,
            background: Rgb::new(255, 255, 255),
            gutter_color: Rgb::new(200, 200, 200),
        }
    }
}

impl GridLayout {
    fn assert_valid(&self) {
        assert!(self.box_width_px >= 1, "box width must be at least 1px");
        assert!(self.box_height_px >= 1, "box height must be at least 1px");
        assert!(self.bytes_per_row >= 1, "bytes_per_row must be at least 1");
    }
}

/// Default outline color for changed bytes.
pub const DEFAULT_HIGHLIGHT_COLOR: Rgb = Rgb::new(255, 255, 0);
/// Default outline ring thickness in pixels.
pub const DEFAULT_HIGHLIGHT_THICKNESS: usize = 2;

/// How changed bytes are marked.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HighlightStyle {
    NoHighlight,
    /// Draw the outermost `thickness_px` pixel ring of a changed box in
    /// `color`. The thickness is clamped to half the smaller box dimension,
    /// so the ring never spills past its own box.
    Outline {
        color: Rgb,
        thickness_px: usize,
    },
}

impl Default for HighlightStyle {
    fn default() -> Self {
        HighlightStyle::Outline {
            color: DEFAULT_HIGHLIGHT_COLOR,
            thickness_px: DEFAULT_HIGHLIGHT_THICKNESS,
        }
    }
}

/// A rendered pixel buffer, row-major, exactly `width_px * height_px` pixels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    pub width_px: usize,
    pub height_px: usize,
    pub pixels: Vec<Rgb>,
}

impl Frame {
    pub fn pixel(&self, x: usize, y: usize) -> Rgb {
        assert!(
            x < self.width_px && y < self.height_px,
            "pixel out of frame"
        );
        self.pixels[y * self.width_px + x]
    }

    /// Interleaved 8-bit RGB bytes, the PNG wire layout.
    pub fn to_rgb8(&self) -> Vec<u8> {
        let mut bytes = Vec::with_capacity(self.pixels.len() * 3);
        for p in &self.pixels {
            bytes.extend_from_slice(&[p.r, p.g, p.b]);
        }
        bytes
    }
}

/// Pixel dimensions and row count a payload renders to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FrameGeometry {
    pub width_px: usize,
    pub height_px: usize,
    pub rows: usize,
}

#[derive(Debug, Error)]
pub enum RenderError {
    #[error("changed offset {offset} is out of range for a {len}-byte payload")]
    OffsetOutOfRange { offset: usize, len: usize },
    #[error("corpus contains no test inputs")]
    EmptyCorpus,
    #[error("PNG encoding failed: {0}")]
    EncodingFailure(#[from] png::EncodingError),
    #[error("PNG decoding failed: {0}")]
    DecodingFailure(#[from] png::DecodingError),
    #[error("expected an 8-bit RGB PNG, found {color_type:?}/{bit_depth:?}")]
    UnsupportedPixelFormat {
        color_type: png::ColorType,
        bit_depth: png::BitDepth,
    },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl RenderError {
    fn io(path: &Path, source: std::io::Error) -> Self {
        RenderError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

/// Frame dimensions for a payload of `payload_length` bytes.
///
/// The width is fixed by `bytes_per_row` regardless of payload length; the
/// row count is `ceil(payload_length / bytes_per_row)`. Gutters run between
/// boxes only, never around the outside.
pub fn frame_geometry(payload_length: usize, layout: &GridLayout) -> FrameGeometry {
    layout.assert_valid();
    assert!(payload_length >= 1, "payload must be at least 1 byte");
    let bpr = layout.bytes_per_row;
    let rows = payload_length.div_ceil(bpr);
    let width_px = bpr * layout.box_width_px + (bpr - 1) * layout.gutter_px;
    let height_px = rows * layout.box_height_px + (rows - 1) * layout.gutter_px;
    FrameGeometry {
        width_px,
        height_px,
        rows,
    }
}

fn fill_rect(frame: &mut Frame, x0: usize, y0: usize, w: usize, h: usize, color: Rgb) {
    for y in y0..y0 + h {
        let row = y * frame.width_px;
        frame.pixels[row + x0..row + x0 + w].fill(color);
    }
}

fn draw_ring(frame: &mut Frame, x0: usize, y0: usize, w: usize, h: usize, t: usize, color: Rgb) {
    if t == 0 {
        return;
    }
    fill_rect(frame, x0, y0, w, t, color);
    fill_rect(frame, x0, y0 + h - t, w, t, color);
    for y in y0 + t..y0 + h - t {
        let row = y * frame.width_px;
        frame.pixels[row + x0..row + x0 + t].fill(color);
        frame.pixels[row + x0 + w - t..row + x0 + w].fill(color);
    }
}

/// Render one input as a grid of byte-colored boxes.
///
/// The box for offset `i` sits at grid row `i / bytes_per_row`, column
/// `i % bytes_per_row`, filled with that byte's color. With an
/// [`HighlightStyle::Outline`] style, each offset in `changed` gets an
/// outline ring; an empty `changed` slice draws no highlights. Every offset
/// in `changed` must be within the payload.
pub fn render_input(
    input: &TestInput,
    layout: &GridLayout,
    changed: &[usize],
    style: HighlightStyle,
) -> Result<Frame, RenderError> {
    let len = input.payload.len();
    if let Some(&offset) = changed.iter().find(|&&o| o >= len) {
        return Err(RenderError::OffsetOutOfRange { offset, len });
    }

    let geometry = frame_geometry(len, layout);
    let mut frame = Frame {
        width_px: geometry.width_px,
        height_px: geometry.height_px,
        pixels: vec![layout.gutter_color; geometry.width_px * geometry.height_px],
    };

    let (bw, bh) = (layout.box_width_px, layout.box_height_px);
    let pitch_x = bw + layout.gutter_px;
    let pitch_y = bh + layout.gutter_px;
    let bpr = layout.bytes_per_row;

    for cell in 0..geometry.rows * bpr {
        let (row, col) = (cell / bpr, cell % bpr);
        let (x0, y0) = (col * pitch_x, row * pitch_y);
        let color = match input.payload.get(cell) {
            Some(&byte) => byte_to_color(byte),
            None => layout.background,
        };
        fill_rect(&mut frame, x0, y0, bw, bh, color);
    }

    if let HighlightStyle::Outline {
        color,
        thickness_px,
    } = style
    {
        let t = thickness_px.min(bw / 2).min(bh / 2);
        for &offset in changed {
            let (row, col) = (offset / bpr, offset % bpr);
            draw_ring(&mut frame, col * pitch_x, row * pitch_y, bw, bh, t, color);
        }
    }

    Ok(frame)
}

/// Encode a frame as an 8-bit truecolor PNG without alpha or interlacing.
///
/// Encoding settings are pinned, so the byte stream is a pure function of
/// the pixel buffer and the output decodes back to the identical pixels.
pub fn encode_png(frame: &Frame) -> Result<Vec<u8>, RenderError> {
    let mut out = Vec::new();
    let width = u32::try_from(frame.width_px).map_err(|_| png::EncodingError::LimitsExceeded)?;
    let height = u32::try_from(frame.height_px).map_err(|_| png::EncodingError::LimitsExceeded)?;
    let mut encoder = png::Encoder::new(&mut out, width, height);
    encoder.set_color(png::ColorType::Rgb);
    encoder.set_depth(png::BitDepth::Eight);
    encoder.set_compression(png::Compression::Fast);
    encoder.set_filter(png::Filter::Up);
    let mut writer = encoder.write_header()?;
    writer.write_image_data(&frame.to_rgb8())?;
    writer.finish()?;
    Ok(out)
}

/// Decode an 8-bit RGB PNG back into a [`Frame`], the inverse of
/// [`encode_png`].
pub fn decode_png(bytes: &[u8]) -> Result<Frame, RenderError> {
    let decoder = png::Decoder::new(Cursor::new(bytes));
    let mut reader = decoder.read_info()?;
    let mut buf = vec![0u8; reader.output_buffer_size().unwrap_or_default()];
    let info = reader.next_frame(&mut buf)?;
    if info.color_type != png::ColorType::Rgb || info.bit_depth != png::BitDepth::Eight {
        return Err(RenderError::UnsupportedPixelFormat {
            color_type: info.color_type,
            bit_depth: info.bit_depth,
        });
    }
    let pixels = buf[..info.buffer_size()]
        .chunks_exact(3)
        .map(|c| Rgb::new(c[0], c[1], c[2]))
        .collect();
    Ok(Frame {
        width_px: info.width as usize,
        height_px: info.height as usize,
        pixels,
    })
}

fn frame_filename(index: usize) -> String {
    format!("file_{index:09}.png")
}

/// Render a whole corpus to `file_NNNNNNNNN.png` frames in `out_dir`.
///
/// With a baseline of `Some(mode)`, the changed set for input `i >= 1` is
/// diffed against the chosen baseline and highlighted per `style`; input 0
/// always renders without highlights. Offsets past the end of a payload
/// (possible when an input shrank) have no box to mark and are dropped.
/// `None` disables diffing entirely.
///
/// Frames may be rendered in parallel; file contents and the returned
/// manifest (filenames in index order) are identical to a sequential run.
/// If any frame fails, files already written by this call are removed.
pub fn render_corpus(
    corpus: &[TestInput],
    layout: &GridLayout,
    style: HighlightStyle,
    baseline: Option<BaselineMode>,
    out_dir: &Path,
) -> Result<Vec<String>, RenderError> {
    if corpus.is_empty() {
        return Err(RenderError::EmptyCorpus);
    }
    layout.assert_valid();
    fs::create_dir_all(out_dir).map_err(|e| RenderError::io(out_dir, e))?;

    let written: Mutex<Vec<PathBuf>> = Mutex::new(Vec::with_capacity(corpus.len()));
    let result: Result<(), RenderError> =
        corpus.par_iter().enumerate().try_for_each(|(i, input)| {
            let changed: Vec<usize> = match baseline {
                Some(mode) if i >= 1 => {
                    let base = match mode {
                        BaselineMode::Previous => &corpus[i - 1],
                        BaselineMode::First => &corpus[0],
                    };
                    diff_inputs(base, input)
                        .changed_offsets
                        .into_iter()
                        .filter(|&o| o < input.payload.len())
                        .collect()
                }
                _ => Vec::new(),
            };
            let frame = render_input(input, layout, &changed, style)?;
            let bytes = encode_png(&frame)?;
            let path = out_dir.join(frame_filename(input.index));
            fs::write(&path, bytes).map_err(|e| RenderError::io(&path, e))?;
            written.lock().unwrap().push(path);
            Ok(())
        });

    if let Err(err) = result {
        for path in written.into_inner().unwrap() {
            let _ = fs::remove_file(path);
        }
        return Err(err);
    }

    Ok(corpus.iter().map(|t| frame_filename(t.index)).collect())
}
