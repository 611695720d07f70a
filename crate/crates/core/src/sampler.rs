//! Software emulation of fixed-function linear texture filtering.
//!
//! Normalized coordinates are converted to texel space as `coord·extent − 0.5`,
//! the two neighbouring texel indices are clamped to the edge, and the
//! fractional position along each axis is quantized to `subtexel_bits` of
//! fixed point before the texels are blended. Blending itself runs in `f64`;
//! the only reduced-precision steps are texel storage (see
//! [`crate::texture::quantize_texel`]) and the fraction quantization here.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::primitives::Point;
use crate::texture::TexelGrid;

/// Largest supported subtexel precision.
pub const MAX_SUBTEXEL_BITS: u32 = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum SubtexelRounding {
    #[default]
    Nearest,
    Floor,
}

impl fmt::Display for SubtexelRounding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SubtexelRounding::Nearest => "nearest",
            SubtexelRounding::Floor => "floor",
        })
    }
}

impl FromStr for SubtexelRounding {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "nearest" => Ok(SubtexelRounding::Nearest),
            "floor" => Ok(SubtexelRounding::Floor),
            _ => Err(format!("unknown subtexel rounding `{s}`")),
        }
    }
}

/// Rounding of decoded texel values. Only round-to-nearest is modelled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum TexelRounding {
    #[default]
    Nearest,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum AddressMode {
    #[default]
    ClampToEdge,
}

/// Everything that determines an emulated filtering result.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SamplerConfig {
    /// Fixed-point fraction bits; 0 disables coordinate quantization.
    pub subtexel_bits: u32,
    pub subtexel_rounding: SubtexelRounding,
    pub texel_rounding: TexelRounding,
    pub address_mode: AddressMode,
}

impl Default for SamplerConfig {
    /// 8 fraction bits, rounded to nearest.
    fn default() -> Self {
        Self {
            subtexel_bits: 8,
            subtexel_rounding: SubtexelRounding::Nearest,
            texel_rounding: TexelRounding::Nearest,
            address_mode: AddressMode::ClampToEdge,
        }
    }
}

impl SamplerConfig {
    pub fn new(subtexel_bits: u32, subtexel_rounding: SubtexelRounding) -> Result<Self> {
        if subtexel_bits > MAX_SUBTEXEL_BITS {
            return Err(Error::InvalidConfig(format!(
                "subtexel_bits must be in [0, {MAX_SUBTEXEL_BITS}], got {subtexel_bits}"
            )));
        }
        Ok(Self {
            subtexel_bits,
            subtexel_rounding,
            ..Self::default()
        })
    }

    /// No coordinate quantization.
    pub fn ideal() -> Self {
        Self {
            subtexel_bits: 0,
            ..Self::default()
        }
    }

    /// Size of one fixed-point fraction step, or 0 when unquantized.
    pub fn fraction_step(&self) -> f64 {
        if self.subtexel_bits == 0 {
            0.0
        } else {
            (-(self.subtexel_bits as f64)).exp2()
        }
    }
}

impl fmt::Display for SamplerConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "subtexel_bits={} subtexel_rounding={}",
            self.subtexel_bits, self.subtexel_rounding
        )
    }
}

/// Quantizes a fractional texel position to the configured fixed point.
///
/// Under nearest rounding the result may be exactly 1.0, which puts the
/// whole weight on the second texel.
pub fn quantize_fraction(f: f64, cfg: &SamplerConfig) -> f64 {
    if cfg.subtexel_bits == 0 {
        return f;
    }
    let scale = (cfg.subtexel_bits as f64).exp2();
    match cfg.subtexel_rounding {
        SubtexelRounding::Nearest => (f * scale + 0.5).floor() / scale,
        SubtexelRounding::Floor => (f * scale).floor() / scale,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axis {
    U,
    V,
    W,
}

impl Axis {
    pub fn index(self) -> usize {
        self as usize
    }
}

/// Decides the interpolation weight used for a fractional texel position.
///
/// [`SamplerConfig`] is the hardware model; other implementations let callers
/// probe the filter at chosen fractions (error bounds, diagnostics).
pub trait FractionMap {
    fn map_fraction(&self, axis: Axis, f: f64) -> f64;
}

impl FractionMap for SamplerConfig {
    fn map_fraction(&self, _axis: Axis, f: f64) -> f64 {
        quantize_fraction(f, self)
    }
}

/// Neighbour pair and fraction along one axis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AxisTap {
    pub i0: usize,
    pub i1: usize,
    /// Post-quantization fraction; weights are `1 − fraction` and `fraction`.
    pub fraction: f64,
}

impl AxisTap {
    pub fn weights(&self) -> [f64; 2] {
        [1.0 - self.fraction, self.fraction]
    }
}

/// What a filtered read touched and how it weighted it.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleTrace {
    /// `(x, y, z)` of the 4 (bilinear) or 8 (trilinear) texels.
    pub texel_indices: Vec<[usize; 3]>,
    /// One tap per filtered axis, in U, V, W order.
    pub axes: Vec<AxisTap>,
    pub raw_value: Point,
}

fn axis_tap(coord: f64, extent: usize, axis: Axis, map: &impl FractionMap) -> Result<AxisTap> {
    if !coord.is_finite() {
        return Err(Error::OutOfDomain {
            what: "texture coordinate",
            value: coord,
            domain: "finite reals".into(),
        });
    }
    let texel = coord * extent as f64 - 0.5;
    let base = texel.floor();
    let f = texel - base;
    let last = extent as i64 - 1;
    let i0 = (base as i64).clamp(0, last) as usize;
    let i1 = (base as i64 + 1).clamp(0, last) as usize;
    Ok(AxisTap {
        i0,
        i1,
        fraction: map.map_fraction(axis, f),
    })
}

/// Bilinear read of one depth slice of any grid.
pub fn sample_slice_bilinear(
    grid: &TexelGrid,
    z: usize,
    u: f64,
    v: f64,
    map: &impl FractionMap,
) -> Result<(Point, SampleTrace)> {
    if z >= grid.depth() {
        return Err(Error::InvalidGrid(format!(
            "slice {z} out of range for depth {}",
            grid.depth()
        )));
    }
    let tu = axis_tap(u, grid.width(), Axis::U, map)?;
    let tv = axis_tap(v, grid.height(), Axis::V, map)?;
    let top = grid.texel(tu.i0, tv.i0, z).lerp(&grid.texel(tu.i1, tv.i0, z), tu.fraction);
    let bottom = grid.texel(tu.i0, tv.i1, z).lerp(&grid.texel(tu.i1, tv.i1, z), tu.fraction);
    let value = top.lerp(&bottom, tv.fraction);
    let trace = SampleTrace {
        texel_indices: vec![
            [tu.i0, tv.i0, z],
            [tu.i1, tv.i0, z],
            [tu.i0, tv.i1, z],
            [tu.i1, tv.i1, z],
        ],
        axes: vec![tu, tv],
        raw_value: value,
    };
    Ok((value, trace))
}

/// Bilinear read of a 2D grid at normalized `(u, v)`.
pub fn sample_bilinear(
    grid: &TexelGrid,
    u: f64,
    v: f64,
    cfg: &SamplerConfig,
) -> Result<(Point, SampleTrace)> {
    sample_bilinear_with(grid, u, v, cfg)
}

pub fn sample_bilinear_with(
    grid: &TexelGrid,
    u: f64,
    v: f64,
    map: &impl FractionMap,
) -> Result<(Point, SampleTrace)> {
    if grid.is_3d() {
        return Err(Error::InvalidGrid(format!(
            "bilinear read needs a 2D grid, got depth {}",
            grid.depth()
        )));
    }
    sample_slice_bilinear(grid, 0, u, v, map)
}

/// Trilinear read of a 3D grid at normalized `(u, v, w)`: two slice reads
/// blended by the quantized depth fraction.
pub fn sample_trilinear(
    grid: &TexelGrid,
    u: f64,
    v: f64,
    w: f64,
    cfg: &SamplerConfig,
) -> Result<(Point, SampleTrace)> {
    sample_trilinear_with(grid, u, v, w, cfg)
}

pub fn sample_trilinear_with(
    grid: &TexelGrid,
    u: f64,
    v: f64,
    w: f64,
    map: &impl FractionMap,
) -> Result<(Point, SampleTrace)> {
    if !grid.is_3d() {
        return Err(Error::InvalidGrid("trilinear read needs a 3D grid".into()));
    }
    let tw = axis_tap(w, grid.depth(), Axis::W, map)?;
    let (front, mut trace) = sample_slice_bilinear(grid, tw.i0, u, v, map)?;
    let (back, back_trace) = sample_slice_bilinear(grid, tw.i1, u, v, map)?;
    let value = front.lerp(&back, tw.fraction);
    trace.texel_indices.extend(back_trace.texel_indices);
    trace.axes.push(tw);
    trace.raw_value = value;
    Ok((value, trace))
}
