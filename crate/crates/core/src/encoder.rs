//! Texel placement for every supported layout.
//!
//! All 2-texel-high grids use row 0 as the `v = 0.25` row. Unorm grids reject
//! texels outside `[0, 1]` unless rescaling is requested, in which case a
//! per-channel [`ValueTransform`] from [`fit_range`] is stored on the curve.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::primitives::{ControlNet, ControlPolygon, Point, ValueTransform, MAX_CHANNELS};
use crate::reference::{check_weights, seiler_terms};
use crate::texture::{TexelFormat, TexelGrid};

/// Homogeneous curves are stored with one of the integral layouts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RationalBase {
    Seiler,
    DeCasteljau,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Layout {
    /// Quadratic, rows `[A, B] / [B, C]`.
    DcQuad2x2,
    /// Cubic, slices `[A, B; B, C]` and `[B, C; C, D]`.
    DcCubic2x2x2,
    /// C0 chain of quadratics in an `(N+1) × 2` grid.
    DcZigzag,
    /// Seiler degree 2 or 3.
    Seiler2d,
    /// Seiler degree 4 or 5.
    Seiler3d,
    BilinearPatch,
    /// Bicubic surface, one control row per channel.
    BicubicRgba,
    RationalHomogeneous(RationalBase),
}

impl Layout {
    /// Codes used by the container format: `(layout, base)`.
    pub fn codes(self) -> (u8, u8) {
        match self {
            Layout::DcQuad2x2 => (0, 0),
            Layout::DcCubic2x2x2 => (1, 0),
            Layout::DcZigzag => (2, 0),
            Layout::Seiler2d => (3, 0),
            Layout::Seiler3d => (4, 0),
            Layout::BilinearPatch => (5, 0),
            Layout::BicubicRgba => (6, 0),
            Layout::RationalHomogeneous(RationalBase::Seiler) => (7, 0),
            Layout::RationalHomogeneous(RationalBase::DeCasteljau) => (7, 1),
        }
    }

    pub fn from_codes(layout: u8, base: u8) -> Option<Self> {
        Some(match (layout, base) {
            (0, 0) => Layout::DcQuad2x2,
            (1, 0) => Layout::DcCubic2x2x2,
            (2, 0) => Layout::DcZigzag,
            (3, 0) => Layout::Seiler2d,
            (4, 0) => Layout::Seiler3d,
            (5, 0) => Layout::BilinearPatch,
            (6, 0) => Layout::BicubicRgba,
            (7, 0) => Layout::RationalHomogeneous(RationalBase::Seiler),
            (7, 1) => Layout::RationalHomogeneous(RationalBase::DeCasteljau),
            _ => return None,
        })
    }
}

impl fmt::Display for Layout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Layout::DcQuad2x2 => "DC_QUAD_2x2",
            Layout::DcCubic2x2x2 => "DC_CUBIC_2x2x2",
            Layout::DcZigzag => "DC_ZIGZAG",
            Layout::Seiler2d => "SEILER_2D",
            Layout::Seiler3d => "SEILER_3D",
            Layout::BilinearPatch => "BILINEAR_PATCH",
            Layout::BicubicRgba => "BICUBIC_RGBA",
            Layout::RationalHomogeneous(RationalBase::Seiler) => "RATIONAL_HOMOGENEOUS/SEILER",
            Layout::RationalHomogeneous(RationalBase::DeCasteljau) => "RATIONAL_HOMOGENEOUS/DC",
        })
    }
}

impl FromStr for Layout {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Ok(match s {
            "DC_QUAD_2x2" => Layout::DcQuad2x2,
            "DC_CUBIC_2x2x2" => Layout::DcCubic2x2x2,
            "DC_ZIGZAG" => Layout::DcZigzag,
            "SEILER_2D" => Layout::Seiler2d,
            "SEILER_3D" => Layout::Seiler3d,
            "BILINEAR_PATCH" => Layout::BilinearPatch,
            "BICUBIC_RGBA" => Layout::BicubicRgba,
            "RATIONAL_HOMOGENEOUS/SEILER" => Layout::RationalHomogeneous(RationalBase::Seiler),
            "RATIONAL_HOMOGENEOUS/DC" => Layout::RationalHomogeneous(RationalBase::DeCasteljau),
            _ => return Err(format!("unknown layout `{s}`")),
        })
    }
}

/// A texel grid plus what is needed to decode it.
#[derive(Clone, Debug, PartialEq)]
pub struct EncodedCurve {
    pub grid: TexelGrid,
    pub layout: Layout,
    pub degree: usize,
    pub segment_count: usize,
    pub transform: ValueTransform,
}

impl EncodedCurve {
    /// Checks layout/degree/dimension consistency.
    pub fn validate(&self) -> Result<()> {
        let dims = self.grid.dims();
        let ok = match self.layout {
            Layout::DcQuad2x2 => self.degree == 2 && dims == (2, 2, 1),
            Layout::DcCubic2x2x2 => self.degree == 3 && dims == (2, 2, 2),
            Layout::DcZigzag => {
                self.degree == 2
                    && self.segment_count >= 1
                    && dims == (self.segment_count + 1, 2, 1)
            }
            Layout::Seiler2d => matches!(self.degree, 2 | 3) && dims == (2, 2, 1),
            Layout::Seiler3d => matches!(self.degree, 4 | 5) && dims == (2, 2, 2),
            Layout::BilinearPatch => self.degree == 1 && dims == (2, 2, 1),
            Layout::BicubicRgba => self.degree == 3 && dims == (2, 2, 2),
            Layout::RationalHomogeneous(RationalBase::Seiler) => {
                matches!(self.degree, 2 | 3) && dims == (2, 2, 1)
            }
            Layout::RationalHomogeneous(RationalBase::DeCasteljau) => match self.degree {
                2 => dims == (2, 2, 1),
                3 => dims == (2, 2, 2),
                _ => false,
            },
        };
        if !ok {
            return Err(Error::LayoutMismatch(format!(
                "{} with degree {} cannot have a {}x{}x{} grid",
                self.layout, self.degree, dims.0, dims.1, dims.2
            )));
        }
        if self.layout != Layout::DcZigzag && self.segment_count != 1 {
            return Err(Error::LayoutMismatch(format!(
                "{} holds a single segment",
                self.layout
            )));
        }
        if self.transform.channels() != self.grid.channels() {
            return Err(Error::ChannelMismatch {
                expected: self.grid.channels(),
                found: self.transform.channels(),
            });
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EncodeOptions {
    pub format: TexelFormat,
    /// Fit out-of-range unorm texels into `[0, 1]` with a stored transform.
    pub rescale: bool,
}

impl EncodeOptions {
    pub fn new(format: TexelFormat) -> Self {
        Self {
            format,
            rescale: false,
        }
    }

    pub fn rescaled(format: TexelFormat) -> Self {
        Self {
            format,
            rescale: true,
        }
    }
}

impl Default for EncodeOptions {
    fn default() -> Self {
        Self::new(TexelFormat::Float32)
    }
}

/// Per-channel affine map taking the `[min, max]` of `values` into `[0, 1]`.
///
/// Channels already inside `[0, 1]` keep the identity; a constant channel
/// outside it gets scale 1 and offset `−min`.
pub fn fit_range(values: &[Point]) -> Result<ValueTransform> {
    let first = values
        .first()
        .ok_or_else(|| Error::InvalidGrid("no values to fit".into()))?;
    let channels = first.channels();
    let mut scale = [1.0; MAX_CHANNELS];
    let mut offset = [0.0; MAX_CHANNELS];
    for c in 0..channels {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for v in values {
            if v.channels() != channels {
                return Err(Error::ChannelMismatch {
                    expected: channels,
                    found: v.channels(),
                });
            }
            let x = v[c];
            if !x.is_finite() {
                return Err(Error::InvalidGrid("non-finite value".into()));
            }
            lo = lo.min(x);
            hi = hi.max(x);
        }
        if lo >= 0.0 && hi <= 1.0 {
            continue;
        }
        offset[c] = -lo;
        if hi > lo {
            scale[c] = 1.0 / (hi - lo);
        }
    }
    ValueTransform::new(
        Point::new(&scale[..channels])?,
        Point::new(&offset[..channels])?,
    )
}

/// Range handling and quantization shared by every encoder.
fn finish(
    texels: Vec<Point>,
    dims: (usize, usize, usize),
    layout: Layout,
    degree: usize,
    segment_count: usize,
    opts: &EncodeOptions,
) -> Result<EncodedCurve> {
    let channels = texels[0].channels();
    let mut transform = ValueTransform::identity(channels);
    let mut stored = texels;
    if opts.format.is_unorm() {
        if opts.rescale {
            transform = fit_range(&stored)?;
            stored = stored.iter().map(|p| transform.apply(p)).collect();
            // guard against rounding just past the unit interval
            stored = stored.iter().map(|p| p.map(|x| x.clamp(0.0, 1.0))).collect();
        } else {
            check_unit_range(&stored, dims)?;
        }
    }
    let grid = TexelGrid::from_points(dims, opts.format, &stored)?;
    let curve = EncodedCurve {
        grid,
        layout,
        degree,
        segment_count,
        transform,
    };
    curve.validate()?;
    Ok(curve)
}

fn check_unit_range(texels: &[Point], (w, h, _): (usize, usize, usize)) -> Result<()> {
    let mut worst: Option<(usize, usize, f64, f64)> = None;
    for (i, p) in texels.iter().enumerate() {
        for (c, &x) in p.as_slice().iter().enumerate() {
            let excursion = if x < 0.0 { -x } else { x - 1.0 };
            if excursion > 0.0 && worst.is_none_or(|(.., e)| excursion > e) {
                worst = Some((i, c, x, excursion));
            }
        }
    }
    match worst {
        None => Ok(()),
        Some((i, channel, value, excursion)) => Err(Error::Range {
            x: i % w,
            y: (i / w) % h,
            z: i / (w * h),
            channel,
            value,
            excursion,
        }),
    }
}

fn require_degree(poly: &ControlPolygon, degree: usize) -> Result<()> {
    if poly.degree() != degree {
        return Err(Error::UnsupportedDegree {
            degree: poly.degree(),
            limit: if degree == 2 {
                "this layout holds quadratics only"
            } else {
                "this layout holds cubics only"
            },
        });
    }
    Ok(())
}

fn dc_quadratic_texels(b: &[Point]) -> Vec<Point> {
    vec![b[0], b[1], b[1], b[2]]
}

fn dc_cubic_texels(b: &[Point]) -> Vec<Point> {
    vec![b[0], b[1], b[1], b[2], b[1], b[2], b[2], b[3]]
}

pub fn encode_dc_quadratic(poly: &ControlPolygon, opts: &EncodeOptions) -> Result<EncodedCurve> {
    require_degree(poly, 2)?;
    finish(dc_quadratic_texels(poly.points()), (2, 2, 1), Layout::DcQuad2x2, 2, 1, opts)
}

pub fn encode_dc_cubic(poly: &ControlPolygon, opts: &EncodeOptions) -> Result<EncodedCurve> {
    require_degree(poly, 3)?;
    finish(dc_cubic_texels(poly.points()), (2, 2, 2), Layout::DcCubic2x2x2, 3, 1, opts)
}

/// Choice of the zig-zag free texel `U_0`.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub enum ZigzagSeed {
    /// The middle control point of the first segment.
    #[default]
    Default,
    Value(Point),
    /// Per channel, the value minimizing the largest texel excursion
    /// outside `[0, 1]`.
    MinimizeExcursion,
}

/// Packs a C0 chain of quadratics into an `(N+1) × 2` grid.
///
/// With top row `T` and bottom row `U`, segment `k` with points
/// `(P0, P1, P2)` satisfies
///
/// ```text
/// even k: T_k = P0, U_{k+1} = P2, T_{k+1} + U_k = 2·P1
/// odd k:  U_k = P0, T_{k+1} = P2, U_{k+1} + T_k = 2·P1
/// ```
///
/// `U_0` is the free variable; everything else follows by forward
/// substitution.
pub fn encode_dc_zigzag(
    segments: &[ControlPolygon],
    seed: ZigzagSeed,
    opts: &EncodeOptions,
) -> Result<EncodedCurve> {
    let (top, bottom) = zigzag_rows(segments, seed)?;
    let n = segments.len();
    let texels: Vec<Point> = top.into_iter().chain(bottom).collect();
    finish(texels, (n + 1, 2, 1), Layout::DcZigzag, 2, n, opts)
}

/// Top and bottom texel rows of a zig-zag packing, before quantization.
pub fn zigzag_rows(
    segments: &[ControlPolygon],
    seed: ZigzagSeed,
) -> Result<(Vec<Point>, Vec<Point>)> {
    if segments.is_empty() {
        return Err(Error::InvalidPolygon("zig-zag packing needs at least one segment".into()));
    }
    let channels = segments[0].channels();
    for (k, s) in segments.iter().enumerate() {
        require_degree(s, 2)?;
        if s.channels() != channels {
            return Err(Error::ChannelMismatch {
                expected: channels,
                found: s.channels(),
            });
        }
        if k + 1 < segments.len() && s.last() != segments[k + 1].first() {
            return Err(Error::Join {
                segment: k,
                next: k + 1,
            });
        }
    }
    let u0 = match seed {
        ZigzagSeed::Default => segments[0][1],
        ZigzagSeed::Value(p) => {
            if p.channels() != channels {
                return Err(Error::ChannelMismatch {
                    expected: channels,
                    found: p.channels(),
                });
            }
            p
        }
        ZigzagSeed::MinimizeExcursion => minimize_excursion_seed(segments),
    };
    Ok(substitute(segments, u0))
}

fn substitute(segments: &[ControlPolygon], u0: Point) -> (Vec<Point>, Vec<Point>) {
    let n = segments.len();
    let mut top = vec![u0; n + 1];
    let mut bottom = vec![u0; n + 1];
    bottom[0] = u0;
    for (k, s) in segments.iter().enumerate() {
        let twice_mid = s[1] * 2.0;
        if k % 2 == 0 {
            top[k] = s[0];
            bottom[k + 1] = s[2];
            top[k + 1] = twice_mid - bottom[k];
        } else {
            bottom[k] = s[0];
            top[k + 1] = s[2];
            bottom[k + 1] = twice_mid - top[k];
        }
    }
    (top, bottom)
}

/// Every derived texel is `c_j ± seed` per channel, so the feasible seeds
/// form an interval; outside it the excursion is minimized at the midpoint
/// of the violated bounds.
fn minimize_excursion_seed(segments: &[ControlPolygon]) -> Point {
    let channels = segments[0].channels();
    let zero = Point::zeros(channels);
    let one = Point::splat(1.0, channels);
    let (t0, b0) = substitute(segments, zero);
    let (t1, b1) = substitute(segments, one);
    let mut seed = segments[0][1];
    let mut out = [0.0; MAX_CHANNELS];
    for c in 0..channels {
        // [lo, hi] = seeds keeping every texel inside [0, 1]
        let mut lo = f64::NEG_INFINITY;
        let mut hi = f64::INFINITY;
        for (a, b) in t0.iter().zip(&t1).chain(b0.iter().zip(&b1)) {
            let c0 = a[c];
            let slope = b[c] - a[c];
            if slope == 0.0 {
                continue;
            }
            // c0 + slope·s ∈ [0, 1]
            let (s_a, s_b) = ((0.0 - c0) / slope, (1.0 - c0) / slope);
            lo = lo.max(s_a.min(s_b));
            hi = hi.min(s_a.max(s_b));
        }
        let preferred = seed[c];
        out[c] = if lo <= hi {
            preferred.clamp(lo, hi)
        } else {
            0.5 * (lo + hi)
        };
    }
    seed = Point::new(&out[..channels]).expect("channel count from segments");
    seed
}

/// Seiler layouts (degrees 2 to 5); see the module docs of
/// [`crate::reference`] for the difference terms.
pub fn encode_seiler(poly: &ControlPolygon, opts: &EncodeOptions) -> Result<EncodedCurve> {
    let (texels, dims, layout) = seiler_texels(poly)?;
    finish(texels, dims, layout, poly.degree(), 1, opts)
}

fn seiler_texels(poly: &ControlPolygon) -> Result<(Vec<Point>, (usize, usize, usize), Layout)> {
    let terms = seiler_terms(poly)?;
    let b = poly.points();
    let d = poly.degree();
    let (b0, bd) = (b[0], b[d]);
    Ok(match d {
        2 => {
            let d1 = *terms.d(1);
            (vec![b0, bd, b0 + d1, bd + d1], (2, 2, 1), Layout::Seiler2d)
        }
        3 => (
            vec![b0, bd, terms.s1.expect("cubic"), terms.s2.expect("cubic")],
            (2, 2, 1),
            Layout::Seiler2d,
        ),
        _ => {
            // z1 rows: [b0 + d1, bd + d_{d−1}; b0 + d1 + d2, bd + d_{d−1} + d_{d−2}]
            let d1 = *terms.d(1);
            let d2 = *terms.d(2);
            let dl = *terms.d(d - 1);
            let dl2 = *terms.d(d - 2);
            let near = b0 + d1;
            let far = bd + dl;
            (
                vec![b0, bd, b0, bd, near, far, near + d2, far + dl2],
                (2, 2, 2),
                Layout::Seiler3d,
            )
        }
    })
}

pub fn encode_bilinear_patch(net: &ControlNet, opts: &EncodeOptions) -> Result<EncodedCurve> {
    if net.rows() != 2 || net.cols() != 2 {
        return Err(Error::InvalidPolygon(format!(
            "bilinear patch needs a 2x2 net, got {}x{}",
            net.rows(),
            net.cols()
        )));
    }
    finish(net.points().to_vec(), (2, 2, 1), Layout::BilinearPatch, 1, 1, opts)
}

/// Bicubic scalar surface in a 2x2x2 grid: channel `j` holds the de Casteljau
/// cubic encoding of control row `j`.
pub fn encode_bicubic_rgba(net: &ControlNet, opts: &EncodeOptions) -> Result<EncodedCurve> {
    if net.rows() != 4 || net.cols() != 4 {
        return Err(Error::InvalidPolygon(format!(
            "bicubic patch needs a 4x4 net, got {}x{}",
            net.rows(),
            net.cols()
        )));
    }
    if net.channels() != 1 {
        return Err(Error::InvalidChannels(net.channels() * 4));
    }
    let rows: Vec<Vec<Point>> = (0..4).map(|r| dc_cubic_texels(net.row(r).points())).collect();
    let texels = (0..8)
        .map(|i| {
            let values: Vec<f64> = rows.iter().map(|r| r[i][0]).collect();
            Point::new(&values).expect("four channels")
        })
        .collect();
    finish(texels, (2, 2, 2), Layout::BicubicRgba, 3, 1, opts)
}

/// Homogeneous points `(w_i·b_i, w_i)` in a Seiler or de Casteljau layout;
/// the weight is the last channel.
pub fn encode_rational(
    poly: &ControlPolygon,
    weights: &[f64],
    base: RationalBase,
    opts: &EncodeOptions,
) -> Result<EncodedCurve> {
    check_weights(poly, weights)?;
    if poly.channels() + 1 > MAX_CHANNELS {
        return Err(Error::InvalidChannels(poly.channels() + 1));
    }
    let d = poly.degree();
    if !matches!(d, 2 | 3) {
        return Err(Error::UnsupportedDegree {
            degree: d,
            limit: "rational layouts hold quadratics and cubics",
        });
    }
    let homogeneous = ControlPolygon::new(
        poly.points()
            .iter()
            .zip(weights)
            .map(|(b, &w)| (*b * w).push(w))
            .collect::<Result<Vec<_>>>()?,
    )?;
    let layout = Layout::RationalHomogeneous(base);
    let (texels, dims) = match base {
        RationalBase::Seiler => {
            let (t, dims, _) = seiler_texels(&homogeneous)?;
            (t, dims)
        }
        RationalBase::DeCasteljau if d == 2 => (dc_quadratic_texels(homogeneous.points()), (2, 2, 1)),
        RationalBase::DeCasteljau => (dc_cubic_texels(homogeneous.points()), (2, 2, 2)),
    };
    finish(texels, dims, layout, d, 1, opts)
}
