//! Texel formats and multi-channel 2D/3D texel grids.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::primitives::{Point, MAX_CHANNELS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TexelFormat {
    Unorm8,
    Unorm16,
    Float32,
}

impl TexelFormat {
    /// Integer bit depth for unorm formats.
    pub fn unorm_bits(self) -> Option<u32> {
        match self {
            TexelFormat::Unorm8 => Some(8),
            TexelFormat::Unorm16 => Some(16),
            TexelFormat::Float32 => None,
        }
    }

    /// Largest stored integer, `2^bits − 1`.
    pub fn unorm_max(self) -> Option<u32> {
        self.unorm_bits().map(|b| (1u32 << b) - 1)
    }

    pub fn is_unorm(self) -> bool {
        self.unorm_bits().is_some()
    }

    pub fn code(self) -> u8 {
        match self {
            TexelFormat::Unorm8 => 0,
            TexelFormat::Unorm16 => 1,
            TexelFormat::Float32 => 2,
        }
    }

    pub fn from_code(code: u8) -> Option<Self> {
        match code {
            0 => Some(TexelFormat::Unorm8),
            1 => Some(TexelFormat::Unorm16),
            2 => Some(TexelFormat::Float32),
            _ => None,
        }
    }

    pub fn bytes_per_value(self) -> usize {
        match self {
            TexelFormat::Unorm8 => 1,
            TexelFormat::Unorm16 => 2,
            TexelFormat::Float32 => 4,
        }
    }

    /// Worst-case absolute error of storing `v` in this format.
    pub fn max_quantization_error(self, v: f64) -> f64 {
        match self.unorm_max() {
            Some(m) => 0.5 / m as f64,
            // half an ulp of the f32 nearest to v
            None => v.abs() * f64::powi(2.0, -24),
        }
    }
}

impl fmt::Display for TexelFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TexelFormat::Unorm8 => "unorm8",
            TexelFormat::Unorm16 => "unorm16",
            TexelFormat::Float32 => "float32",
        })
    }
}

impl FromStr for TexelFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "unorm8" | "u8" => Ok(TexelFormat::Unorm8),
            "unorm16" | "u16" => Ok(TexelFormat::Unorm16),
            "float32" | "f32" => Ok(TexelFormat::Float32),
            _ => Err(format!("unknown texel format `{s}`")),
        }
    }
}

/// Stores `v` in `format` and returns the decoded value.
///
/// Unorm formats clamp to `[0, 1]` and round half away from zero.
pub fn quantize_texel(v: f64, format: TexelFormat) -> f64 {
    match format.unorm_max() {
        Some(max) => unorm_encode(v, max) as f64 / max as f64,
        None => v as f32 as f64,
    }
}

pub(crate) fn unorm_encode(v: f64, max: u32) -> u32 {
    if v.is_nan() {
        return 0;
    }
    (v.clamp(0.0, 1.0) * max as f64).round() as u32
}

/// Width × height × depth grid of texels, row-major with channels
/// interleaved. Depth is 1 for 2D grids. Values are stored decoded, i.e.
/// already quantized to the grid's format.
#[derive(Clone, Debug, PartialEq)]
pub struct TexelGrid {
    width: usize,
    height: usize,
    depth: usize,
    channels: usize,
    format: TexelFormat,
    data: Vec<f64>,
}

impl TexelGrid {
    /// Quantizes `values` into a new grid.
    pub fn new(
        (width, height, depth): (usize, usize, usize),
        channels: usize,
        format: TexelFormat,
        values: &[f64],
    ) -> Result<Self> {
        if width == 0 || height == 0 || depth == 0 {
            return Err(Error::InvalidGrid(format!(
                "dimensions must be positive, got {width}x{height}x{depth}"
            )));
        }
        if !(1..=MAX_CHANNELS).contains(&channels) {
            return Err(Error::InvalidChannels(channels));
        }
        let expected = width * height * depth * channels;
        if values.len() != expected {
            return Err(Error::InvalidGrid(format!(
                "expected {expected} values, got {}",
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidGrid("non-finite texel value".into()));
        }
        Ok(Self {
            width,
            height,
            depth,
            channels,
            format,
            data: values.iter().map(|&v| quantize_texel(v, format)).collect(),
        })
    }

    /// Builds a grid from texel points laid out x-fastest, then y, then z.
    pub fn from_points(
        dims: (usize, usize, usize),
        format: TexelFormat,
        texels: &[Point],
    ) -> Result<Self> {
        let channels = texels.first().map_or(0, |p| p.channels());
        if texels.iter().any(|p| p.channels() != channels) {
            return Err(Error::InvalidGrid("texels differ in channel count".into()));
        }
        let flat: Vec<f64> = texels.iter().flat_map(|p| p.as_slice().to_vec()).collect();
        Self::new(dims, channels, format, &flat)
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.width, self.height, self.depth)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn format(&self) -> TexelFormat {
        self.format
    }

    pub fn texel_count(&self) -> usize {
        self.width * self.height * self.depth
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn is_3d(&self) -> bool {
        self.depth > 1
    }

    fn offset(&self, x: usize, y: usize, z: usize) -> usize {
        ((z * self.height + y) * self.width + x) * self.channels
    }

    pub fn texel(&self, x: usize, y: usize, z: usize) -> Point {
        let o = self.offset(x, y, z);
        Point::new(&self.data[o..o + self.channels]).expect("grid channels are validated")
    }

    pub fn texels(&self) -> impl Iterator<Item = Point> + '_ {
        self.data
            .chunks_exact(self.channels)
            .map(|c| Point::new(c).expect("grid channels are validated"))
    }

    /// Largest decoded magnitude over all texels and channels.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Raw stored integers for unorm grids.
    pub fn unorm_values(&self) -> Option<Vec<u32>> {
        let max = self.format.unorm_max()?;
        Some(self.data.iter().map(|&v| unorm_encode(v, max)).collect())
    }

    /// Rebuilds a unorm grid from raw stored integers.
    pub fn from_unorm_values(
        dims: (usize, usize, usize),
        channels: usize,
        format: TexelFormat,
        raw: &[u32],
    ) -> Result<Self> {
        let max = format
            .unorm_max()
            .ok_or_else(|| Error::InvalidGrid(format!("{format} is not a unorm format")))?;
        if let Some(v) = raw.iter().find(|&&v| v > max) {
            return Err(Error::InvalidGrid(format!("raw value {v} exceeds {max}")));
        }
        let values: Vec<f64> = raw.iter().map(|&v| v as f64 / max as f64).collect();
        Self::new(dims, channels, format, &values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Round-half-away quantization of a rational `num/den ∈ [0, 1]` to
    /// `max` levels using only integer arithmetic.
    fn integer_oracle(num: u64, den: u64, max: u64) -> u64 {
        (2 * num * max + den) / (2 * den)
    }

    #[test]
    fn unorm8_examples() {
        let k = integer_oracle(1, 2, 255);
        assert_eq!(k, 128);
        assert_eq!(quantize_texel(0.5, TexelFormat::Unorm8), k as f64 / 255.0);
        assert!((quantize_texel(0.5, TexelFormat::Unorm8) - 0.501961).abs() < 1e-6);
        assert_eq!(quantize_texel(1.0, TexelFormat::Unorm8), 1.0);
        assert_eq!(quantize_texel(-0.25, TexelFormat::Unorm8), 0.0);
        assert_eq!(quantize_texel(7.0, TexelFormat::Unorm16), 1.0);
    }

    #[test]
    fn unorm_matches_integer_oracle_on_rationals() {
        for den in 1..=64u64 {
            for num in 0..=den {
                for (format, max) in [(TexelFormat::Unorm8, 255u64), (TexelFormat::Unorm16, 65535)] {
                    let expected = integer_oracle(num, den, max) as f64 / max as f64;
                    let got = quantize_texel(num as f64 / den as f64, format);
                    assert_eq!(got, expected, "{num}/{den} {format}");
                }
            }
        }
    }

    #[test]
    fn float32_rounds_to_single_precision() {
        let v = 0.1f64;
        assert_eq!(quantize_texel(v, TexelFormat::Float32), 0.1f32 as f64);
        assert_eq!(quantize_texel(3.0, TexelFormat::Float32), 3.0);
    }

    #[test]
    fn grid_validates_shape() {
        assert!(TexelGrid::new((2, 2, 1), 1, TexelFormat::Float32, &[0.0; 3]).is_err());
        assert!(TexelGrid::new((0, 2, 1), 1, TexelFormat::Float32, &[]).is_err());
        assert!(TexelGrid::new((1, 1, 1), 5, TexelFormat::Float32, &[0.0; 5]).is_err());
        let g = TexelGrid::new((2, 1, 1), 2, TexelFormat::Float32, &[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(g.texel(1, 0, 0), Point::new(&[3.0, 4.0]).unwrap());
    }

    #[test]
    fn unorm_values_lie_on_the_lattice() {
        let g = TexelGrid::new((2, 2, 1), 1, TexelFormat::Unorm8, &[0.1, 0.2, 0.3, 0.4]).unwrap();
        for (&v, k) in g.data().iter().zip(g.unorm_values().unwrap()) {
            assert_eq!(v, k as f64 / 255.0);
        }
        let back =
            TexelGrid::from_unorm_values(g.dims(), 1, TexelFormat::Unorm8, &g.unorm_values().unwrap())
                .unwrap();
        assert_eq!(back, g);
    }
}
