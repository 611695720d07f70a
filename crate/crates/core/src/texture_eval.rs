//! Curve and surface evaluation through the emulated texture filter.

use std::fmt;
use std::str::FromStr;

use crate::encoder::{EncodedCurve, Layout, RationalBase};
use crate::error::{Error, Result};
use crate::primitives::{check_unit, remap, ControlPolygon, Point};
use crate::reference::eval_bernstein;
use crate::sampler::{
    sample_bilinear_with, sample_slice_bilinear, sample_trilinear_with, FractionMap, SampleTrace,
    SamplerConfig,
};

/// Smallest decoded homogeneous weight that is still divided by.
pub const MIN_RATIONAL_WEIGHT: f64 = 1e-9;

/// Which texture-path evaluation to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EvalMode {
    /// One bilinear (quadratic) or trilinear (cubic) read at `(t, t[, t])`.
    Dc,
    /// Two bilinear reads of the cubic slices, final lerp at full precision.
    DcHybrid,
    /// One read at `(t, st[, st])`.
    Seiler,
    Zigzag,
    Patch,
    Bicubic,
    Rational,
}

impl EvalMode {
    pub const ALL: [EvalMode; 7] = [
        EvalMode::Dc,
        EvalMode::DcHybrid,
        EvalMode::Seiler,
        EvalMode::Zigzag,
        EvalMode::Patch,
        EvalMode::Bicubic,
        EvalMode::Rational,
    ];

    pub fn default_for(layout: Layout) -> Self {
        match layout {
            Layout::DcQuad2x2 | Layout::DcCubic2x2x2 => EvalMode::Dc,
            Layout::DcZigzag => EvalMode::Zigzag,
            Layout::Seiler2d | Layout::Seiler3d => EvalMode::Seiler,
            Layout::BilinearPatch => EvalMode::Patch,
            Layout::BicubicRgba => EvalMode::Bicubic,
            Layout::RationalHomogeneous(_) => EvalMode::Rational,
        }
    }

    pub fn accepts(self, layout: Layout) -> bool {
        match self {
            EvalMode::Dc => matches!(layout, Layout::DcQuad2x2 | Layout::DcCubic2x2x2),
            EvalMode::DcHybrid => layout == Layout::DcCubic2x2x2,
            EvalMode::Seiler => matches!(layout, Layout::Seiler2d | Layout::Seiler3d),
            EvalMode::Zigzag => layout == Layout::DcZigzag,
            EvalMode::Patch => layout == Layout::BilinearPatch,
            EvalMode::Bicubic => layout == Layout::BicubicRgba,
            EvalMode::Rational => matches!(layout, Layout::RationalHomogeneous(_)),
        }
    }

    pub fn is_surface(self) -> bool {
        matches!(self, EvalMode::Patch | EvalMode::Bicubic)
    }

    pub fn name(self) -> &'static str {
        match self {
            EvalMode::Dc => "dc",
            EvalMode::DcHybrid => "dc-hybrid",
            EvalMode::Seiler => "seiler",
            EvalMode::Zigzag => "zigzag",
            EvalMode::Patch => "patch",
            EvalMode::Bicubic => "bicubic",
            EvalMode::Rational => "rational",
        }
    }
}

impl fmt::Display for EvalMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EvalMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        EvalMode::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown mode `{s}`"))
    }
}

/// Curve parameter or surface coordinates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Param {
    Curve(f64),
    Surface(f64, f64),
}

fn check_mode(curve: &EncodedCurve, mode: EvalMode) -> Result<()> {
    if mode.accepts(curve.layout) {
        Ok(())
    } else {
        Err(Error::LayoutMismatch(format!(
            "mode {mode} cannot evaluate a {} texture",
            curve.layout
        )))
    }
}

fn curve_param(param: Param, mode: EvalMode) -> Result<f64> {
    match param {
        Param::Curve(t) => Ok(t),
        Param::Surface(..) => Err(Error::LayoutMismatch(format!(
            "mode {mode} takes a single curve parameter"
        ))),
    }
}

fn surface_param(param: Param, mode: EvalMode) -> Result<(f64, f64)> {
    match param {
        Param::Surface(u, v) => {
            check_unit("u", u)?;
            check_unit("v", v)?;
            Ok((u, v))
        }
        Param::Curve(_) => Err(Error::LayoutMismatch(format!(
            "mode {mode} takes (u, v) surface coordinates"
        ))),
    }
}

/// Evaluates `curve` with an arbitrary fraction policy and returns every
/// texture read that contributed.
pub fn eval_traced<M: FractionMap>(
    curve: &EncodedCurve,
    mode: EvalMode,
    param: Param,
    map: &M,
) -> Result<(Point, Vec<SampleTrace>)> {
    check_mode(curve, mode)?;
    let grid = &curve.grid;
    let decode = |p: Point| curve.transform.invert(&p);
    match mode {
        EvalMode::Dc => {
            let t = curve_param(param, mode)?;
            check_unit("t", t)?;
            let r = remap(t, 2);
            let (p, trace) = if grid.is_3d() {
                sample_trilinear_with(grid, r, r, r, map)?
            } else {
                sample_bilinear_with(grid, r, r, map)?
            };
            Ok((decode(p), vec![trace]))
        }
        EvalMode::DcHybrid => {
            let t = curve_param(param, mode)?;
            check_unit("t", t)?;
            let r = remap(t, 2);
            let (front, a) = sample_slice_bilinear(grid, 0, r, r, map)?;
            let (back, b) = sample_slice_bilinear(grid, 1, r, r, map)?;
            Ok((decode(front.lerp(&back, t)), vec![a, b]))
        }
        EvalMode::Seiler => {
            let t = curve_param(param, mode)?;
            let (p, trace) = seiler_read(curve, t, map)?;
            Ok((decode(p), vec![trace]))
        }
        EvalMode::Zigzag => {
            let g = curve_param(param, mode)?;
            let n = curve.segment_count;
            if !(0.0..=n as f64).contains(&g) {
                return Err(Error::OutOfDomain {
                    what: "global t",
                    value: g,
                    domain: format!("[0, {n}]"),
                });
            }
            let k = (g.floor() as usize).min(n - 1);
            let local = g - k as f64;
            let u = (k as f64 + 0.5 + local) / (n + 1) as f64;
            let v = if k.is_multiple_of(2) {
                remap(local, 2)
            } else {
                remap(1.0 - local, 2)
            };
            let (p, trace) = sample_bilinear_with(grid, u, v, map)?;
            Ok((decode(p), vec![trace]))
        }
        EvalMode::Patch => {
            let (u, v) = surface_param(param, mode)?;
            let (p, trace) = sample_bilinear_with(grid, remap(u, 2), remap(v, 2), map)?;
            Ok((decode(p), vec![trace]))
        }
        EvalMode::Bicubic => {
            let (u, v) = surface_param(param, mode)?;
            let r = remap(u, 2);
            let (p, trace) = sample_trilinear_with(grid, r, r, r, map)?;
            let isoline = ControlPolygon::from_scalars(decode(p).as_slice())?;
            Ok((eval_bernstein(&isoline, v), vec![trace]))
        }
        EvalMode::Rational => {
            let t = curve_param(param, mode)?;
            let (p, trace) = match curve.layout {
                Layout::RationalHomogeneous(RationalBase::Seiler) => seiler_read(curve, t, map)?,
                _ => {
                    check_unit("t", t)?;
                    let r = remap(t, 2);
                    if grid.is_3d() {
                        sample_trilinear_with(grid, r, r, r, map)?
                    } else {
                        sample_bilinear_with(grid, r, r, map)?
                    }
                }
            };
            let h = decode(p);
            let n = h.channels() - 1;
            let w = h[n];
            if w <= MIN_RATIONAL_WEIGHT {
                return Err(Error::Division(w));
            }
            let point = Point::new(&h.as_slice()[..n])?.map(|x| x / w);
            Ok((point, vec![trace]))
        }
    }
}

fn seiler_read<M: FractionMap>(
    curve: &EncodedCurve,
    t: f64,
    map: &M,
) -> Result<(Point, SampleTrace)> {
    check_unit("t", t)?;
    let m = (1.0 - t) * t;
    assert!((0.0..=0.25).contains(&m), "s·t = {m} left [0, 0.25]");
    let (u, v) = (remap(t, 2), remap(m, 2));
    let grid = &curve.grid;
    if grid.is_3d() {
        sample_trilinear_with(grid, u, v, v, map)
    } else {
        sample_bilinear_with(grid, u, v, map)
    }
}

pub fn eval_with<M: FractionMap>(
    curve: &EncodedCurve,
    mode: EvalMode,
    param: Param,
    map: &M,
) -> Result<Point> {
    eval_traced(curve, mode, param, map).map(|(p, _)| p)
}

/// Evaluates a curve in the default mode for its layout.
pub fn eval(curve: &EncodedCurve, param: Param, cfg: &SamplerConfig) -> Result<Point> {
    eval_with(curve, EvalMode::default_for(curve.layout), param, cfg)
}

pub fn eval_dc(curve: &EncodedCurve, t: f64, cfg: &SamplerConfig) -> Result<Point> {
    eval_with(curve, EvalMode::Dc, Param::Curve(t), cfg)
}

pub fn eval_dc_zigzag(curve: &EncodedCurve, global_t: f64, cfg: &SamplerConfig) -> Result<Point> {
    eval_with(curve, EvalMode::Zigzag, Param::Curve(global_t), cfg)
}

pub fn eval_seiler_tex(curve: &EncodedCurve, t: f64, cfg: &SamplerConfig) -> Result<Point> {
    eval_with(curve, EvalMode::Seiler, Param::Curve(t), cfg)
}

pub fn eval_dc_cubic_hybrid(curve: &EncodedCurve, t: f64, cfg: &SamplerConfig) -> Result<Point> {
    eval_with(curve, EvalMode::DcHybrid, Param::Curve(t), cfg)
}

pub fn eval_bilinear_patch(curve: &EncodedCurve, u: f64, v: f64, cfg: &SamplerConfig) -> Result<Point> {
    eval_with(curve, EvalMode::Patch, Param::Surface(u, v), cfg)
}

pub fn eval_bicubic_rgba(curve: &EncodedCurve, u: f64, v: f64, cfg: &SamplerConfig) -> Result<Point> {
    eval_with(curve, EvalMode::Bicubic, Param::Surface(u, v), cfg)
}

pub fn eval_rational_tex(curve: &EncodedCurve, t: f64, cfg: &SamplerConfig) -> Result<Point> {
    eval_with(curve, EvalMode::Rational, Param::Curve(t), cfg)
}
