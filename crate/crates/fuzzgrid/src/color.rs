//! Byte-to-color encoding.
//!
//! A test-input byte `xy` (two hex digits) maps to the hex color `xy0000`,
//! a shade of red whose intensity is the byte value. The inverse map exists
//! so round trips can be checked end to end.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// An 8-bit RGB color.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rgb {
    pub r: u8,
    pub g: u8,
    pub b: u8,
}

impl Rgb {
    pub const fn new(r: u8, g: u8, b: u8) -> Self {
        Self { r, g, b }
    }
}

impl fmt::Display for Rgb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", HexTriplet::from(*self))
    }
}

/// Six uppercase hex digits, two per channel (`RRGGBB`, no `#` prefix).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HexTriplet(String);

impl HexTriplet {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// The color this triplet denotes.
    pub fn rgb(&self) -> Rgb {
        // The constructor guarantees exactly six hex digits.
        let byte = |i: usize| u8::from_str_radix(&self.0[i..i + 2], 16).unwrap();
        Rgb::new(byte(0), byte(2), byte(4))
    }
}

impl From<Rgb> for HexTriplet {
    fn from(c: Rgb) -> Self {
        HexTriplet(format!("{:02X}{:02X}{:02X}", c.r, c.g, c.b))
    }
}

impl fmt::Display for HexTriplet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for HexTriplet {
    type Err = ColorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.len() != 6 || !s.bytes().all(|b| b.is_ascii_hexdigit()) {
            return Err(ColorError::MalformedTriplet {
                text: s.to_string(),
            });
        }
        Ok(HexTriplet(s.to_ascii_uppercase()))
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ColorError {
    /// The green or blue channel is nonzero, so the color cannot have come
    /// from [`byte_to_color`].
    #[error("color {0} is not a red shade")]
    NotARedShade(Rgb),
    #[error("{text:?} is not a six-digit hex triplet")]
    MalformedTriplet { text: String },
}

/// Encode a byte as its color: value `xy` becomes `xy0000`.
pub fn byte_to_color(value: u8) -> Rgb {
    Rgb::new(value, 0, 0)
}

/// The `RRGGBB` text form of a color.
pub fn color_to_hex_triplet(c: Rgb) -> HexTriplet {
    HexTriplet::from(c)
}

/// Recover the byte a red-shade color encodes.
pub fn color_to_byte(c: Rgb) -> Result<u8, ColorError> {
    if c.g != 0 || c.b != 0 {
        return Err(ColorError::NotARedShade(c));
    }
    Ok(c.r)
}
