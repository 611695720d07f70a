//! Error sweeps against the reference evaluators, quantization error bounds
//! and deviation images.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use rayon::prelude::*;

use crate::encoder::EncodedCurve;
use crate::error::{Error, Result};
use crate::primitives::{ControlNet, ControlPolygon, Point};
use crate::reference::{check_weights, eval_bernstein, eval_decasteljau, eval_seiler};
use crate::sampler::{Axis, FractionMap, SamplerConfig};
use crate::texture_eval::{eval_with, EvalMode, Param};

pub const DEFAULT_SAMPLES: usize = 1024;
pub const RENDER_SAMPLES: usize = 4096;

/// Full-precision evaluator used as ground truth.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum ReferenceEval {
    #[default]
    Bernstein,
    DeCasteljau,
    Seiler,
}

impl ReferenceEval {
    pub fn eval(self, poly: &ControlPolygon, t: f64) -> Result<Point> {
        match self {
            ReferenceEval::Bernstein => Ok(eval_bernstein(poly, t)),
            ReferenceEval::DeCasteljau => Ok(eval_decasteljau(poly, t)),
            ReferenceEval::Seiler => eval_seiler(poly, t),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ReferenceEval::Bernstein => "bernstein",
            ReferenceEval::DeCasteljau => "decasteljau",
            ReferenceEval::Seiler => "seiler",
        }
    }
}

impl fmt::Display for ReferenceEval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ReferenceEval {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "bernstein" => Ok(ReferenceEval::Bernstein),
            "decasteljau" | "de-casteljau" => Ok(ReferenceEval::DeCasteljau),
            "seiler" => Ok(ReferenceEval::Seiler),
            _ => Err(format!("unknown reference evaluator `{s}`")),
        }
    }
}

/// The exact geometry an encoded texture was built from.
#[derive(Clone, Debug, PartialEq)]
pub enum Source {
    Curve(ControlPolygon),
    /// C0 chain evaluated at a global parameter in `[0, N]`.
    Chain(Vec<ControlPolygon>),
    Surface(ControlNet),
    Rational {
        poly: ControlPolygon,
        weights: Vec<f64>,
    },
}

impl Source {
    pub fn is_surface(&self) -> bool {
        matches!(self, Source::Surface(_))
    }

    /// Upper end of the parameter domain (the lower end is 0).
    pub fn domain_end(&self) -> f64 {
        match self {
            Source::Chain(segs) => segs.len() as f64,
            _ => 1.0,
        }
    }

    pub fn eval(&self, reference: ReferenceEval, param: Param) -> Result<Point> {
        match (self, param) {
            (Source::Curve(poly), Param::Curve(t)) => reference.eval(poly, t),
            (Source::Chain(segs), Param::Curve(g)) => {
                if segs.is_empty() {
                    return Err(Error::InvalidPolygon("empty chain".into()));
                }
                let k = (g.max(0.0).floor() as usize).min(segs.len() - 1);
                reference.eval(&segs[k], g - k as f64)
            }
            (Source::Surface(net), Param::Surface(u, v)) => {
                let mut column = Vec::with_capacity(net.rows());
                for r in 0..net.rows() {
                    column.push(reference.eval(&net.row(r), u)?);
                }
                reference.eval(&ControlPolygon::new(column)?, v)
            }
            (Source::Rational { poly, weights }, Param::Curve(t)) => {
                check_weights(poly, weights)?;
                let homogeneous = ControlPolygon::new(
                    poly.points()
                        .iter()
                        .zip(weights)
                        .map(|(b, &w)| (*b * w).push(w))
                        .collect::<Result<Vec<_>>>()?,
                )?;
                let h = reference.eval(&homogeneous, t)?;
                let n = h.channels() - 1;
                if h[n] <= 0.0 {
                    return Err(Error::Division(h[n]));
                }
                Ok(Point::new(&h.as_slice()[..n])?.map(|x| x / h[n]))
            }
            _ => Err(Error::LayoutMismatch(
                "parameter kind does not match the source geometry".into(),
            )),
        }
    }

    fn params(&self, samples: usize) -> Vec<Param> {
        let step = |i: usize| i as f64 / (samples - 1) as f64;
        if self.is_surface() {
            (0..samples)
                .flat_map(|i| (0..samples).map(move |j| Param::Surface(step(i), step(j))))
                .collect()
        } else {
            let end = self.domain_end();
            (0..samples)
                .map(|i| {
                    // keep the last sample exactly on the domain end
                    if i == samples - 1 {
                        Param::Curve(end)
                    } else {
                        Param::Curve(end * step(i))
                    }
                })
                .collect()
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRecord {
    pub param: Param,
    pub reference: Point,
    pub test: Point,
    pub absdev: Point,
}

/// Per-channel summary of absolute deviations.
#[derive(Clone, Debug, PartialEq)]
pub struct ChannelStats {
    pub max: Vec<f64>,
    pub mean: Vec<f64>,
    pub rms: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ErrorReport {
    pub curve_id: String,
    pub mode: EvalMode,
    pub reference: ReferenceEval,
    pub cfg: SamplerConfig,
    pub records: Vec<SweepRecord>,
    pub stats: ChannelStats,
}

impl ErrorReport {
    pub fn sample_count(&self) -> usize {
        self.records.len()
    }

    pub fn channels(&self) -> usize {
        self.stats.max.len()
    }

    /// Largest deviation over all channels.
    pub fn max_error(&self) -> f64 {
        self.stats.max.iter().copied().fold(0.0, f64::max)
    }

    /// Largest `| ‖test‖ − ‖reference‖ |`, e.g. radial error of a circle.
    pub fn max_radial_deviation(&self) -> f64 {
        let norm = |p: &Point| p.as_slice().iter().map(|x| x * x).sum::<f64>().sqrt();
        self.records
            .iter()
            .map(|r| (norm(&r.test) - norm(&r.reference)).abs())
            .fold(0.0, f64::max)
    }

    pub fn is_surface(&self) -> bool {
        matches!(self.records.first().map(|r| r.param), Some(Param::Surface(..)))
    }

    pub fn to_csv(&self) -> String {
        let c = self.channels();
        let mut s = String::new();
        s.push_str(if self.is_surface() { "u,v" } else { "t" });
        for prefix in ["ref", "test", "absdev"] {
            for i in 0..c {
                let _ = write!(s, ",{prefix}_{i}");
            }
        }
        s.push('\n');
        for r in &self.records {
            match r.param {
                Param::Curve(t) => {
                    let _ = write!(s, "{t:?}");
                }
                Param::Surface(u, v) => {
                    let _ = write!(s, "{u:?},{v:?}");
                }
            }
            for p in [&r.reference, &r.test, &r.absdev] {
                for x in p.as_slice() {
                    let _ = write!(s, ",{x:?}");
                }
            }
            s.push('\n');
        }
        for (label, values) in [
            ("#max", &self.stats.max),
            ("#mean", &self.stats.mean),
            ("#rms", &self.stats.rms),
        ] {
            s.push_str(label);
            for x in values {
                let _ = write!(s, ",{x:?}");
            }
            s.push('\n');
        }
        s
    }
}

fn summarize(records: &[SweepRecord], channels: usize) -> ChannelStats {
    let n = records.len() as f64;
    let mut max = vec![0.0; channels];
    let mut sum = vec![0.0; channels];
    let mut sq = vec![0.0; channels];
    for r in records {
        for c in 0..channels {
            let d = r.absdev[c];
            max[c] = f64::max(max[c], d);
            sum[c] += d;
            sq[c] += d * d;
        }
    }
    ChannelStats {
        mean: sum.iter().map(|s| s / n).collect(),
        rms: sq.iter().map(|s| (s / n).sqrt()).collect(),
        max,
    }
    .clamped()
}

impl ChannelStats {
    // the sums can overshoot by rounding; keep max ≥ rms ≥ mean
    fn clamped(mut self) -> Self {
        for c in 0..self.max.len() {
            self.rms[c] = self.rms[c].min(self.max[c]);
            self.mean[c] = self.mean[c].min(self.rms[c]);
        }
        self
    }
}

/// Evaluates `curve` and `source` on a uniform lattice (`samples` points
/// per parameter axis) and collects the deviations. Record order follows
/// the lattice regardless of evaluation order.
pub fn sweep(
    curve: &EncodedCurve,
    source: &Source,
    reference: ReferenceEval,
    mode: EvalMode,
    cfg: &SamplerConfig,
    samples: usize,
) -> Result<ErrorReport> {
    if samples < 2 {
        return Err(Error::InvalidConfig(format!("sweep needs at least 2 samples, got {samples}")));
    }
    if !mode.accepts(curve.layout) {
        return Err(Error::LayoutMismatch(format!(
            "mode {mode} cannot evaluate a {} texture",
            curve.layout
        )));
    }
    let records: Vec<SweepRecord> = source
        .params(samples)
        .into_par_iter()
        .map(|param| {
            let test = eval_with(curve, mode, param, cfg)?;
            let reference = source.eval(reference, param)?;
            if test.channels() != reference.channels() {
                return Err(Error::ChannelMismatch {
                    expected: reference.channels(),
                    found: test.channels(),
                });
            }
            let absdev = test.zip_with(&reference, |a, b| (a - b).abs());
            Ok(SweepRecord {
                param,
                reference,
                test,
                absdev,
            })
        })
        .collect::<Result<_>>()?;
    let channels = records[0].reference.channels();
    let stats = summarize(&records, channels);
    Ok(ErrorReport {
        curve_id: curve.layout.to_string(),
        mode,
        reference,
        cfg: *cfg,
        records,
        stats,
    })
}

/// Picks the lower or upper neighbouring fixed-point fraction per axis.
struct CornerMap {
    scale: f64,
    mask: u8,
}

impl FractionMap for CornerMap {
    fn map_fraction(&self, axis: Axis, f: f64) -> f64 {
        let lo = (f * self.scale).floor();
        let k = if self.mask >> axis.index() & 1 == 1 && lo < f * self.scale {
            lo + 1.0
        } else {
            lo
        };
        k / self.scale
    }
}

/// Largest change of the texture-path value when the filter fractions are
/// moved from their exact values to any neighbouring fixed-point fraction,
/// over the same lattice [`sweep`] uses.
///
/// The filter output is multilinear in the per-axis fractions, and the
/// hardware always picks one of the two neighbours, so the sweep's
/// coordinate error at a sample cannot exceed this value. Rational curves
/// are not covered: the homogeneous divide is not multilinear.
pub fn error_bound_estimate(
    curve: &EncodedCurve,
    source: &Source,
    mode: EvalMode,
    cfg: &SamplerConfig,
    samples: usize,
) -> Result<f64> {
    if mode == EvalMode::Rational {
        return Err(Error::InvalidConfig(
            "no coordinate error bound for rational curves".into(),
        ));
    }
    if samples < 2 {
        return Err(Error::InvalidConfig(format!("bound needs at least 2 samples, got {samples}")));
    }
    if cfg.subtexel_bits == 0 {
        return Ok(0.0);
    }
    let ideal = SamplerConfig::ideal();
    let scale = (cfg.subtexel_bits as f64).exp2();
    let per_sample: Vec<f64> = source
        .params(samples)
        .into_par_iter()
        .map(|param| {
            let exact = eval_with(curve, mode, param, &ideal)?;
            let mut worst: f64 = 0.0;
            for mask in 0..8u8 {
                let p = eval_with(curve, mode, param, &CornerMap { scale, mask })?;
                worst = worst.max((p - exact).max_abs());
            }
            Ok(worst)
        })
        .collect::<Result<_>>()?;
    Ok(per_sample.into_iter().fold(0.0, f64::max))
}

/// Deviation that texel storage alone can introduce into an ideal-sampler
/// evaluation, in decoded units, plus a margin for f64 rounding.
pub fn texel_allowance(curve: &EncodedCurve) -> f64 {
    let format = curve.grid.format();
    let worst = curve
        .grid
        .data()
        .iter()
        .map(|&v| format.max_quantization_error(v))
        .fold(0.0, f64::max);
    let magnitude = curve.grid.max_abs() / curve.transform.min_abs_scale();
    worst / curve.transform.min_abs_scale() + 1e-12 * magnitude.max(1.0)
}

pub type Rgb = [u8; 3];

pub const BLACK: Rgb = [0, 0, 0];
pub const WHITE: Rgb = [255, 255, 255];
pub const RED: Rgb = [255, 0, 0];
pub const GREEN: Rgb = [0, 255, 0];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pixmap {
    width: usize,
    height: usize,
    pixels: Vec<Rgb>,
}

impl Pixmap {
    pub fn new(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            pixels: vec![BLACK; width * height],
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn get(&self, x: usize, y: usize) -> Rgb {
        self.pixels[y * self.width + x]
    }

    pub fn set(&mut self, x: usize, y: usize, c: Rgb) {
        self.pixels[y * self.width + x] = c;
    }

    pub fn count(&self, c: Rgb) -> usize {
        self.pixels.iter().filter(|&&p| p == c).count()
    }

    /// Binary PPM (`P6`, maxval 255).
    pub fn to_ppm(&self) -> Vec<u8> {
        let mut out = format!("P6\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend(self.pixels.iter().flatten());
        out
    }
}

struct AxisMap {
    lo: f64,
    span: f64,
    pixels: usize,
}

impl AxisMap {
    fn fit(values: impl Iterator<Item = f64>, pixels: usize) -> Self {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for v in values {
            lo = lo.min(v);
            hi = hi.max(v);
        }
        if !(hi > lo) {
            lo -= 0.5;
            hi += 0.5;
        }
        let pad = 0.05 * (hi - lo);
        Self {
            lo: lo - pad,
            span: hi - lo + 2.0 * pad,
            pixels,
        }
    }

    fn pixel(&self, v: f64) -> usize {
        let x = ((v - self.lo) / self.span * self.pixels as f64).floor();
        x.clamp(0.0, (self.pixels - 1) as f64) as usize
    }
}

/// Rasterizes a curve sweep: reference samples in white, then every sample
/// whose test value is off by at least half a pixel is painted at its test
/// position, red when below the reference and green when above. For planar
/// curves "below/above" refers to the second coordinate.
pub fn render_report(report: &ErrorReport, width: usize, height: usize) -> Result<Pixmap> {
    if width == 0 || height == 0 {
        return Err(Error::InvalidConfig("image dimensions must be positive".into()));
    }
    if report.is_surface() {
        return Err(Error::InvalidConfig("deviation images need a curve sweep".into()));
    }
    let channels = report.channels();
    let values = || {
        report
            .records
            .iter()
            .flat_map(|r| [r.reference, r.test])
    };
    let t_of = |r: &SweepRecord| match r.param {
        Param::Curve(t) => t,
        Param::Surface(u, _) => u,
    };
    let (xs, ys, key) = match channels {
        1 => (
            AxisMap::fit(report.records.iter().map(t_of), width),
            AxisMap::fit(values().map(|p| p[0]), height),
            0,
        ),
        2 => (
            AxisMap::fit(values().map(|p| p[0]), width),
            AxisMap::fit(values().map(|p| p[1]), height),
            1,
        ),
        c => return Err(Error::InvalidChannels(c)),
    };
    let place = |r: &SweepRecord, p: &Point| {
        let x = if channels == 1 { xs.pixel(t_of(r)) } else { xs.pixel(p[0]) };
        let y = height - 1 - ys.pixel(p[key]);
        (x, y)
    };
    let mut img = Pixmap::new(width, height);
    for r in &report.records {
        let (x, y) = place(r, &r.reference);
        img.set(x, y, WHITE);
    }
    let half_pixel = 0.5 * ys.span / height as f64;
    for r in &report.records {
        let diff = r.test[key] - r.reference[key];
        if diff.abs() >= half_pixel {
            let (x, y) = place(r, &r.test);
            img.set(x, y, if diff < 0.0 { RED } else { GREEN });
        }
    }
    Ok(img)
}

#[allow(clippy::too_many_arguments)]
pub fn render_deviation_image(
    curve: &EncodedCurve,
    source: &Source,
    reference: ReferenceEval,
    mode: EvalMode,
    cfg: &SamplerConfig,
    width: usize,
    height: usize,
) -> Result<Pixmap> {
    let report = sweep(curve, source, reference, mode, cfg, RENDER_SAMPLES)?;
    render_report(&report, width, height)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoder::*;
    use crate::sampler::SubtexelRounding;
    use crate::texture::TexelFormat;

    fn poly(v: &[f64]) -> ControlPolygon {
        ControlPolygon::from_scalars(v).unwrap()
    }

    fn bits(b: u32) -> SamplerConfig {
        SamplerConfig::new(b, SubtexelRounding::Nearest).unwrap()
    }

    fn f32_opts() -> EncodeOptions {
        EncodeOptions::new(TexelFormat::Float32)
    }

    #[test]
    fn ideal_sweeps_are_accurate() {
        let p = poly(&[0.1, 0.9, -0.3, 0.4]);
        let src = Source::Curve(p.clone());
        for (c, mode) in [
            (encode_dc_cubic(&p, &f32_opts()).unwrap(), EvalMode::Dc),
            (encode_dc_cubic(&p, &f32_opts()).unwrap(), EvalMode::DcHybrid),
            (encode_seiler(&p, &f32_opts()).unwrap(), EvalMode::Seiler),
        ] {
            let r = sweep(&c, &src, ReferenceEval::Bernstein, mode, &SamplerConfig::ideal(), 1024).unwrap();
            assert_eq!(r.sample_count(), 1024);
            assert!(r.max_error() <= 1e-6, "{mode}: {}", r.max_error());
        }
    }

    #[test]
    fn constant_curve_only_has_texel_error() {
        // 0.3 = 76.5/255 sits exactly between two unorm8 levels
        let p = poly(&[0.3; 4]);
        let c = encode_dc_cubic(&p, &EncodeOptions::new(TexelFormat::Unorm8)).unwrap();
        let r = sweep(&c, &Source::Curve(p), ReferenceEval::Bernstein, EvalMode::Dc, &bits(8), 256).unwrap();
        assert!(r.max_error() <= 1.0 / 510.0 + 1e-15, "{}", r.max_error());
        assert!(r.max_error() >= 1.0 / 510.0 - 1e-15);
        assert!(r.stats.max[0] >= r.stats.rms[0] && r.stats.rms[0] >= r.stats.mean[0]);
    }

    #[test]
    fn mode_mismatch_is_rejected() {
        let p = poly(&[0.0, 1.0, 1.0, 0.0]);
        let c = encode_dc_cubic(&p, &f32_opts()).unwrap();
        let err = sweep(&c, &Source::Curve(p), ReferenceEval::Bernstein, EvalMode::Seiler, &bits(8), 16);
        assert!(matches!(err, Err(Error::LayoutMismatch(_))));
    }

    #[test]
    fn csv_schema() {
        let p = poly(&[0.0, 0.5, 1.0]);
        let c = encode_dc_quadratic(&p, &f32_opts()).unwrap();
        let r = sweep(&c, &Source::Curve(p), ReferenceEval::Bernstein, EvalMode::Dc, &bits(8), 5).unwrap();
        let csv = r.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "t,ref_0,test_0,absdev_0");
        assert_eq!(lines.len(), 1 + 5 + 3);
        assert!(lines[1].starts_with("0.0,"));
        assert!(lines[5].starts_with("1.0,"));
        assert!(lines[6].starts_with("#max,"));
        assert!(lines[8].starts_with("#rms,"));
    }

    #[test]
    fn quantization_error_shrinks_with_more_bits() {
        let p = poly(&[0.1, 0.9, -0.3, 0.4]);
        let c = encode_dc_cubic(&p, &f32_opts()).unwrap();
        let src = Source::Curve(p);
        let errs: Vec<f64> = [4, 6, 8, 10, 12]
            .iter()
            .map(|&b| {
                sweep(&c, &src, ReferenceEval::Bernstein, EvalMode::Dc, &bits(b), 1024)
                    .unwrap()
                    .max_error()
            })
            .collect();
        assert!(errs.windows(2).all(|w| w[1] <= w[0]), "{errs:?}");
        assert!(errs[2] > 0.0);
    }

    #[test]
    fn seiler_suffers_more_than_de_casteljau_at_8_bits() {
        let p = poly(&[0.0, 1.0, 1.0, 0.0]);
        let src = Source::Curve(p.clone());
        let dc = encode_dc_cubic(&p, &f32_opts()).unwrap();
        let se = encode_seiler(&p, &f32_opts()).unwrap();
        let a = sweep(&dc, &src, ReferenceEval::Bernstein, EvalMode::Dc, &bits(8), 4096).unwrap();
        let b = sweep(&se, &src, ReferenceEval::Bernstein, EvalMode::Seiler, &bits(8), 4096).unwrap();
        assert!(b.max_error() >= a.max_error(), "seiler {} dc {}", b.max_error(), a.max_error());
    }

    #[test]
    fn bound_examples() {
        let p = poly(&[0.0, 0.5, 1.0]);
        let c = encode_dc_quadratic(&p, &f32_opts()).unwrap();
        let src = Source::Curve(p);
        assert_eq!(error_bound_estimate(&c, &src, EvalMode::Dc, &SamplerConfig::ideal(), 64).unwrap(), 0.0);
        let b = error_bound_estimate(&c, &src, EvalMode::Dc, &bits(8), 1024).unwrap();
        assert!(b > 0.0 && b <= 1.0 / 256.0, "{b}");
        let r = sweep(&c, &src, ReferenceEval::Bernstein, EvalMode::Dc, &bits(8), 1024).unwrap();
        assert!(r.max_error() <= b + texel_allowance(&c));
    }

    #[test]
    fn identical_curves_render_white_only() {
        let p = poly(&[0.0, 0.5, 1.0]);
        let c = encode_dc_quadratic(&p, &f32_opts()).unwrap();
        let img = render_deviation_image(
            &c,
            &Source::Curve(p),
            ReferenceEval::DeCasteljau,
            EvalMode::Dc,
            &SamplerConfig::ideal(),
            64,
            48,
        )
        .unwrap();
        assert_eq!((img.width(), img.height()), (64, 48));
        assert!(img.count(WHITE) > 0);
        assert_eq!(img.count(RED) + img.count(GREEN), 0);
        let ppm = img.to_ppm();
        assert!(ppm.starts_with(b"P6\n64 48\n255\n"));
        assert_eq!(ppm.len(), 13 + 64 * 48 * 3);
    }

    #[test]
    fn positive_offset_renders_green() {
        let p = poly(&[0.0, 0.5, 1.0]);
        let c = encode_dc_quadratic(&p, &f32_opts()).unwrap();
        // reference sits 0.2 below the encoded curve
        let low = Source::Curve(poly(&[-0.2, 0.3, 0.8]));
        let r = sweep(&c, &low, ReferenceEval::Bernstein, EvalMode::Dc, &SamplerConfig::ideal(), 256).unwrap();
        let img = render_report(&r, 100, 100).unwrap();
        // reference pixels are still drawn where the band does not cover them
        assert!(img.count(GREEN) > 0);
        assert_eq!(img.count(RED), 0);
        assert!(img.count(WHITE) > 0);
    }

    #[test]
    fn quantized_render_matches_sweep_signs() {
        let p = poly(&[0.1, 0.9, -0.3, 0.4]);
        let c = encode_dc_cubic(&p, &f32_opts()).unwrap();
        let r = sweep(&c, &Source::Curve(p), ReferenceEval::Bernstein, EvalMode::Dc, &bits(8), 512).unwrap();
        let below = r.records.iter().any(|x| x.test[0] < x.reference[0]);
        let above = r.records.iter().any(|x| x.test[0] > x.reference[0]);
        assert!(below && above);
        // deviations are a small fraction of the value range: invisible at low height,
        // both bands appear once a pixel is finer than the error
        let coarse = render_report(&r, 512, 8).unwrap();
        assert_eq!(coarse.count(RED) + coarse.count(GREEN), 0);
        let fine = render_report(&r, 512, 1 << 14).unwrap();
        assert!(fine.count(RED) > 0 && fine.count(GREEN) > 0);
    }

    #[test]
    fn chain_and_surface_sources() {
        let segs = vec![poly(&[0.0, 1.0, 0.0]), poly(&[0.0, 0.5, 0.0])];
        let c = encode_dc_zigzag(&segs, ZigzagSeed::Value(1.0.into()), &f32_opts()).unwrap();
        let r = sweep(&c, &Source::Chain(segs), ReferenceEval::Bernstein, EvalMode::Zigzag, &SamplerConfig::ideal(), 101)
            .unwrap();
        assert!(r.max_error() <= 1e-6);
        let net = ControlNet::from_scalar_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let c = encode_bilinear_patch(&net, &f32_opts()).unwrap();
        let r = sweep(&c, &Source::Surface(net), ReferenceEval::Bernstein, EvalMode::Patch, &SamplerConfig::ideal(), 9)
            .unwrap();
        assert_eq!(r.sample_count(), 81);
        assert!(r.to_csv().starts_with("u,v,ref_0"));
        assert!(render_report(&r, 8, 8).is_err());
    }
}
