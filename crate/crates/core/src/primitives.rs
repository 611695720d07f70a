//! Points, control polygons, exact lerp and the pixel-center coordinate remap.

use std::fmt;
use std::ops::{Add, Index, Mul, Sub};

use crate::error::{Error, Result};

/// Maximum number of channels a point may carry; one per RGBA texel channel.
pub const MAX_CHANNELS: usize = 4;

/// A point with 1 to 4 real channels.
#[derive(Clone, Copy, PartialEq)]
pub struct Point {
    len: u8,
    v: [f64; MAX_CHANNELS],
}

impl Point {
    pub fn new(values: &[f64]) -> Result<Self> {
        if values.is_empty() || values.len() > MAX_CHANNELS {
            return Err(Error::InvalidChannels(values.len()));
        }
        let mut v = [0.0; MAX_CHANNELS];
        v[..values.len()].copy_from_slice(values);
        Ok(Self {
            len: values.len() as u8,
            v,
        })
    }

    pub fn scalar(x: f64) -> Self {
        Self::splat(x, 1)
    }

    /// Panics if `channels` is not in `1..=4`.
    pub fn splat(x: f64, channels: usize) -> Self {
        assert!((1..=MAX_CHANNELS).contains(&channels));
        let mut v = [0.0; MAX_CHANNELS];
        v[..channels].fill(x);
        Self {
            len: channels as u8,
            v,
        }
    }

    pub fn zeros(channels: usize) -> Self {
        Self::splat(0.0, channels)
    }

    #[inline]
    pub fn channels(&self) -> usize {
        self.len as usize
    }

    #[inline]
    pub fn as_slice(&self) -> &[f64] {
        &self.v[..self.len as usize]
    }

    pub fn map(&self, mut f: impl FnMut(f64) -> f64) -> Self {
        let mut out = *self;
        for x in &mut out.v[..self.len as usize] {
            *x = f(*x);
        }
        out
    }

    /// Channel-wise combination; both points must have the same channel count.
    pub fn zip_with(&self, other: &Self, mut f: impl FnMut(f64, f64) -> f64) -> Self {
        debug_assert_eq!(self.len, other.len);
        let mut out = *self;
        for i in 0..self.len as usize {
            out.v[i] = f(self.v[i], other.v[i]);
        }
        out
    }

    /// Appends one channel, e.g. a homogeneous weight.
    pub fn push(&self, x: f64) -> Result<Self> {
        let n = self.channels();
        if n == MAX_CHANNELS {
            return Err(Error::InvalidChannels(n + 1));
        }
        let mut out = *self;
        out.v[n] = x;
        out.len += 1;
        Ok(out)
    }

    pub fn is_finite(&self) -> bool {
        self.as_slice().iter().all(|x| x.is_finite())
    }

    pub fn max_abs(&self) -> f64 {
        self.as_slice().iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Linear interpolation `self·(1−t) + other·t` without the channel check.
    #[inline]
    pub fn lerp(&self, other: &Self, t: f64) -> Self {
        let s = 1.0 - t;
        self.zip_with(other, |a, b| a * s + b * t)
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.as_slice()).finish()
    }
}

impl Index<usize> for Point {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.as_slice()[i]
    }
}

impl Add for Point {
    type Output = Point;

    fn add(self, rhs: Point) -> Point {
        self.zip_with(&rhs, |a, b| a + b)
    }
}

impl Sub for Point {
    type Output = Point;

    fn sub(self, rhs: Point) -> Point {
        self.zip_with(&rhs, |a, b| a - b)
    }
}

impl Mul<f64> for Point {
    type Output = Point;

    fn mul(self, k: f64) -> Point {
        self.map(|a| a * k)
    }
}

impl From<f64> for Point {
    fn from(x: f64) -> Self {
        Point::scalar(x)
    }
}

/// `a·(1−t) + b·t` in full working precision.
pub fn lerp(a: &Point, b: &Point, t: f64) -> Result<Point> {
    if a.channels() != b.channels() {
        return Err(Error::ChannelMismatch {
            expected: a.channels(),
            found: b.channels(),
        });
    }
    Ok(a.lerp(b, t))
}

/// Maps `x ∈ [0, 1]` onto the span between the first and last texel centers
/// of an axis with `extent` texels, in normalized texture coordinates.
pub fn remap_unit_to_texel_span(x: f64, extent: usize) -> Result<f64> {
    if extent < 2 {
        return Err(Error::OutOfDomain {
            what: "extent",
            value: extent as f64,
            domain: "[2, ∞)".into(),
        });
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::OutOfDomain {
            what: "x",
            value: x,
            domain: "[0, 1]".into(),
        });
    }
    Ok(remap(x, extent))
}

#[inline]
pub(crate) fn remap(x: f64, extent: usize) -> f64 {
    (0.5 + x * (extent - 1) as f64) / extent as f64
}

pub(crate) fn check_unit(what: &'static str, x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::OutOfDomain {
            what,
            value: x,
            domain: "[0, 1]".into(),
        })
    }
}

/// Ordered control points `b_0 … b_d` of a polynomial curve.
#[derive(Clone, Debug, PartialEq)]
pub struct ControlPolygon {
    points: Vec<Point>,
}

impl ControlPolygon {
    pub fn new(points: Vec<Point>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidPolygon(format!(
                "need at least 2 control points, got {}",
                points.len()
            )));
        }
        let channels = points[0].channels();
        if let Some(p) = points.iter().find(|p| p.channels() != channels) {
            return Err(Error::ChannelMismatch {
                expected: channels,
                found: p.channels(),
            });
        }
        if points.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidPolygon("non-finite control point".into()));
        }
        Ok(Self { points })
    }

    /// Builds a single-channel polygon.
    pub fn from_scalars(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&x| Point::scalar(x)).collect())
    }

    pub fn degree(&self) -> usize {
        self.points.len() - 1
    }

    pub fn channels(&self) -> usize {
        self.points[0].channels()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn first(&self) -> &Point {
        &self.points[0]
    }

    pub fn last(&self) -> &Point {
        &self.points[self.points.len() - 1]
    }

    pub fn into_points(self) -> Vec<Point> {
        self.points
    }
}

impl Index<usize> for ControlPolygon {
    type Output = Point;

    fn index(&self, i: usize) -> &Point {
        &self.points[i]
    }
}

/// Tensor-product control net. Row `j` is a polygon along `u`; rows are
/// stacked along `v`.
#[derive(Clone, Debug, PartialEq)]
pub struct ControlNet {
    rows: usize,
    cols: usize,
    points: Vec<Point>,
}

impl ControlNet {
    pub fn new(rows: Vec<Vec<Point>>) -> Result<Self> {
        if rows.len() < 2 {
            return Err(Error::InvalidPolygon("control net needs at least 2 rows".into()));
        }
        let cols = rows[0].len();
        if cols < 2 {
            return Err(Error::InvalidPolygon("control net needs at least 2 columns".into()));
        }
        if let Some((j, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != cols) {
            return Err(Error::InvalidPolygon(format!(
                "ragged control net: row {j} has {} points, row 0 has {cols}",
                r.len()
            )));
        }
        let n = rows.len();
        let points: Vec<Point> = rows.into_iter().flatten().collect();
        // validates channels and finiteness
        ControlPolygon::new(points.clone())?;
        Ok(Self {
            rows: n,
            cols,
            points,
        })
    }

    pub fn from_scalar_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::new(
            rows.iter()
                .map(|r| r.iter().map(|&x| Point::scalar(x)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn channels(&self) -> usize {
        self.points[0].channels()
    }

    pub fn get(&self, row: usize, col: usize) -> &Point {
        &self.points[row * self.cols + col]
    }

    pub fn row(&self, row: usize) -> ControlPolygon {
        ControlPolygon {
            points: self.points[row * self.cols..(row + 1) * self.cols].to_vec(),
        }
    }

    pub fn column(&self, col: usize) -> ControlPolygon {
        ControlPolygon {
            points: (0..self.rows).map(|r| *self.get(r, col)).collect(),
        }
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }
}

/// Per-channel affine map applied to texel values at encode time:
/// `stored = (value + offset) · scale`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ValueTransform {
    scale: Point,
    offset: Point,
}

impl ValueTransform {
    pub fn new(scale: Point, offset: Point) -> Result<Self> {
        if scale.channels() != offset.channels() {
            return Err(Error::ChannelMismatch {
                expected: scale.channels(),
                found: offset.channels(),
            });
        }
        if scale.as_slice().iter().any(|&s| s == 0.0 || !s.is_finite())
            || !offset.is_finite()
        {
            return Err(Error::InvalidPolygon(
                "value transform needs finite, nonzero scales".into(),
            ));
        }
        Ok(Self { scale, offset })
    }

    pub fn identity(channels: usize) -> Self {
        Self {
            scale: Point::splat(1.0, channels),
            offset: Point::zeros(channels),
        }
    }

    pub fn scale(&self) -> &Point {
        &self.scale
    }

    pub fn offset(&self) -> &Point {
        &self.offset
    }

    pub fn channels(&self) -> usize {
        self.scale.channels()
    }

    pub fn is_identity(&self) -> bool {
        self.scale.as_slice().iter().all(|&s| s == 1.0)
            && self.offset.as_slice().iter().all(|&o| o == 0.0)
    }

    pub fn apply(&self, p: &Point) -> Point {
        let shifted = p.zip_with(&self.offset, |x, o| x + o);
        shifted.zip_with(&self.scale, |x, s| x * s)
    }

    pub fn invert(&self, p: &Point) -> Point {
        if self.is_identity() {
            return *p;
        }
        let unscaled = p.zip_with(&self.scale, |x, s| x / s);
        unscaled.zip_with(&self.offset, |x, o| x - o)
    }

    /// Smallest absolute scale; decoded errors grow by its reciprocal.
    pub fn min_abs_scale(&self) -> f64 {
        self.scale
            .as_slice()
            .iter()
            .fold(f64::INFINITY, |m, s| m.min(s.abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn lerp_examples() {
        let r = lerp(&0.0.into(), &1.0.into(), 0.5).unwrap();
        assert_eq!(r[0], 0.5);
        let r = lerp(&2.0.into(), &6.0.into(), 0.25).unwrap();
        assert_eq!(r[0], 3.0);
        let x = Point::new(&[0.3, -7.25]).unwrap();
        for t in [0.0, 0.5, 1.0] {
            assert_eq!(lerp(&x, &x, t).unwrap(), x);
        }
        for t in [0.1, 0.9] {
            let r = lerp(&x, &x, t).unwrap();
            assert!((r[0] - x[0]).abs() <= ulp(x[0]) && r[1] == x[1]);
        }
    }

    #[test]
    fn lerp_rejects_channel_mismatch() {
        let a = Point::scalar(1.0);
        let b = Point::new(&[1.0, 2.0]).unwrap();
        assert!(matches!(
            lerp(&a, &b, 0.5),
            Err(Error::ChannelMismatch { expected: 1, found: 2 })
        ));
    }

    #[test]
    fn remap_examples() {
        assert_eq!(remap_unit_to_texel_span(0.0, 2).unwrap(), 0.25);
        assert_eq!(remap_unit_to_texel_span(1.0, 2).unwrap(), 0.75);
        assert_eq!(remap_unit_to_texel_span(0.5, 2).unwrap(), 0.5);
        assert!(remap_unit_to_texel_span(1.5, 2).is_err());
        assert!(remap_unit_to_texel_span(-0.1, 2).is_err());
        assert!(remap_unit_to_texel_span(f64::NAN, 2).is_err());
        assert!(remap_unit_to_texel_span(0.5, 1).is_err());
    }

    #[test]
    fn polygon_invariants() {
        assert!(ControlPolygon::from_scalars(&[1.0]).is_err());
        let mixed = vec![Point::scalar(0.0), Point::new(&[0.0, 1.0]).unwrap()];
        assert!(ControlPolygon::new(mixed).is_err());
        let p = ControlPolygon::from_scalars(&[0.0, 1.0, 0.0]).unwrap();
        assert_eq!(p.degree(), 2);
        assert!(Point::new(&[0.0; 5]).is_err());
    }

    #[test]
    fn ragged_net_is_rejected() {
        let err = ControlNet::from_scalar_rows(&[vec![0.0, 1.0], vec![0.0]]);
        assert!(err.is_err());
    }

    #[test]
    fn transform_round_trip() {
        let t = ValueTransform::new(
            Point::new(&[0.25, 1.0]).unwrap(),
            Point::new(&[1.0, -5.0]).unwrap(),
        )
        .unwrap();
        let p = Point::new(&[-1.0, 5.0]).unwrap();
        assert_eq!(t.apply(&p), Point::new(&[0.0, 0.0]).unwrap());
        assert_eq!(t.invert(&t.apply(&p)), p);
        assert!(ValueTransform::new(Point::scalar(0.0), Point::scalar(0.0)).is_err());
    }

    fn ulp(x: f64) -> f64 {
        let x = x.abs();
        if x == 0.0 {
            f64::MIN_POSITIVE
        } else {
            f64::from_bits(x.to_bits() + 1) - x
        }
    }

    proptest! {
        #[test]
        fn remap_is_affine_and_increasing(
            x in 0.0f64..=1.0,
            y in 0.0f64..=1.0,
            e in 2usize..=4096,
        ) {
            let rx = remap_unit_to_texel_span(x, e).unwrap();
            let ry = remap_unit_to_texel_span(y, e).unwrap();
            if x < y {
                prop_assert!(rx <= ry);
            }
            let ef = e as f64;
            prop_assert_eq!(remap_unit_to_texel_span(0.0, e).unwrap(), 0.5 / ef);
            prop_assert!((remap_unit_to_texel_span(1.0, e).unwrap() - (ef - 0.5) / ef).abs() <= ulp(1.0));
            let mid = remap_unit_to_texel_span(0.5, e).unwrap();
            prop_assert!((mid - 0.5).abs() <= ulp(1.0));
        }

        #[test]
        fn lerp_is_symmetric_up_to_rounding(
            a in -1e3f64..1e3,
            b in -1e3f64..1e3,
            t in 0.0f64..=1.0,
        ) {
            let pa = Point::scalar(a);
            let pb = Point::scalar(b);
            let sum = lerp(&pa, &pb, t).unwrap()[0] + lerp(&pb, &pa, t).unwrap()[0];
            // four roundings per lerp, each at most half an ulp of |a| + |b|
            let scale = a.abs() + b.abs();
            prop_assert!((sum - (a + b)).abs() <= 4.0 * ulp(scale), "{} vs {}", sum, a + b);
        }
    }
}
