//! Line-oriented text description of curves, chains, surfaces and splines.
//!
//! ```text
//! # quarter circle
//! degree 2
//! channels 2
//! weights 1 0.7071067811865476 1
//! 1 0
//! 1 1
//! 0 1
//! ```
//!
//! Directives: `degree d`, `channels c`, `segments n` (C0 chain sharing
//! endpoints, `n·d + 1` points), `rows r` (control net, row-major),
//! `knots …` (B-spline), `weights …` (rational), `basis power|bernstein`.
//! Every other non-comment line is one point.

use std::fmt;
use std::str::FromStr;

use crate::analysis::Source;
use crate::encoder::Layout;
use crate::error::{Error, Result};
use crate::primitives::{ControlNet, ControlPolygon, Point, MAX_CHANNELS};
use crate::reference::{power_to_bernstein, BSplineCurve};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Basis {
    #[default]
    Bernstein,
    Power,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CurveFile {
    pub degree: usize,
    pub channels: usize,
    pub basis: Basis,
    pub segments: Option<usize>,
    pub rows: Option<usize>,
    pub knots: Option<Vec<f64>>,
    pub weights: Option<Vec<f64>>,
    pub points: Vec<Point>,
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_reals(line: usize, fields: &[&str]) -> Result<Vec<f64>> {
    fields
        .iter()
        .map(|f| {
            f.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| parse_err(line, format!("`{f}` is not a finite number")))
        })
        .collect()
}

fn parse_count(line: usize, key: &str, fields: &[&str]) -> Result<usize> {
    match fields {
        [v] => v
            .parse()
            .map_err(|_| parse_err(line, format!("`{key}` expects a non-negative integer"))),
        _ => Err(parse_err(line, format!("`{key}` expects one value"))),
    }
}

impl CurveFile {
    pub fn from_polygon(poly: &ControlPolygon) -> Self {
        Self {
            degree: poly.degree(),
            channels: poly.channels(),
            basis: Basis::Bernstein,
            segments: None,
            rows: None,
            knots: None,
            weights: None,
            points: poly.points().to_vec(),
        }
    }

    /// Chain of C0-joined segments; each segment must start where the
    /// previous one ends.
    pub fn from_chain(segments: &[ControlPolygon]) -> Result<Self> {
        let first = segments
            .first()
            .ok_or_else(|| Error::InvalidPolygon("empty chain".into()))?;
        let mut points = first.points().to_vec();
        for (i, w) in segments.windows(2).enumerate() {
            if w[1].degree() != first.degree() {
                return Err(Error::InvalidPolygon("chain segments differ in degree".into()));
            }
            if w[0].last() != w[1].first() {
                return Err(Error::Join {
                    segment: i,
                    next: i + 1,
                });
            }
            points.extend_from_slice(&w[1].points()[1..]);
        }
        Ok(Self {
            segments: Some(segments.len()),
            ..Self::from_polygon(first)
        }
        .with_points(points))
    }

    pub fn from_net(net: &ControlNet, degree: usize) -> Self {
        Self {
            degree,
            channels: net.channels(),
            basis: Basis::Bernstein,
            segments: None,
            rows: Some(net.rows()),
            knots: None,
            weights: None,
            points: net.points().to_vec(),
        }
    }

    pub fn from_spline(spline: &BSplineCurve) -> Self {
        let points = spline.control_points().to_vec();
        Self {
            degree: spline.degree(),
            channels: points[0].channels(),
            basis: Basis::Bernstein,
            segments: None,
            rows: None,
            knots: Some(spline.knots().to_vec()),
            weights: None,
            points,
        }
    }

    fn with_points(mut self, points: Vec<Point>) -> Self {
        self.points = points;
        self
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut degree = None;
        let mut channels = None;
        let mut file = CurveFile {
            degree: 0,
            channels: 0,
            basis: Basis::Bernstein,
            segments: None,
            rows: None,
            knots: None,
            weights: None,
            points: Vec::new(),
        };
        let mut last_line = 0;
        for (i, raw) in text.lines().enumerate() {
            let n = i + 1;
            last_line = n;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let (head, rest) = (fields[0], &fields[1..]);
            match head {
                "degree" => degree = Some(parse_count(n, head, rest)?),
                "channels" => {
                    let c = parse_count(n, head, rest)?;
                    if !(1..=MAX_CHANNELS).contains(&c) {
                        return Err(parse_err(n, format!("channels must be 1 to {MAX_CHANNELS}")));
                    }
                    channels = Some(c);
                }
                "segments" => file.segments = Some(parse_count(n, head, rest)?),
                "rows" => file.rows = Some(parse_count(n, head, rest)?),
                "knots" => file.knots = Some(parse_reals(n, rest)?),
                "weights" => file.weights = Some(parse_reals(n, rest)?),
                "basis" => {
                    file.basis = match rest {
                        ["power"] => Basis::Power,
                        ["bernstein"] => Basis::Bernstein,
                        _ => return Err(parse_err(n, "basis must be `power` or `bernstein`")),
                    }
                }
                _ if head.starts_with(|c: char| c.is_ascii_alphabetic()) && head.parse::<f64>().is_err() => {
                    return Err(parse_err(n, format!("unknown directive `{head}`")));
                }
                _ => {
                    let values = parse_reals(n, &fields)?;
                    let c = *channels.get_or_insert(values.len());
                    if values.len() != c {
                        return Err(parse_err(
                            n,
                            format!("expected {c} values per point, got {}", values.len()),
                        ));
                    }
                    file.points.push(Point::new(&values).map_err(|e| parse_err(n, e.to_string()))?);
                }
            }
        }
        file.degree = degree.ok_or_else(|| parse_err(last_line, "missing `degree`"))?;
        file.channels = channels.ok_or_else(|| parse_err(last_line, "no control points"))?;
        file.check_counts().map_err(|m| parse_err(last_line, m))?;
        Ok(file)
    }

    fn check_counts(&self) -> std::result::Result<(), String> {
        let n = self.points.len();
        let d = self.degree;
        if self.knots.is_some() {
            return Ok(());
        }
        let expected = if let Some(s) = self.segments {
            if s == 0 {
                return Err("segments must be positive".into());
            }
            s * d + 1
        } else if let Some(r) = self.rows {
            if r == 0 || !n.is_multiple_of(r) {
                return Err(format!("{n} points do not split into {r} rows"));
            }
            n
        } else {
            d + 1
        };
        if n != expected {
            return Err(format!("expected {expected} control points, got {n}"));
        }
        if let Some(w) = &self.weights {
            if w.len() != n {
                return Err(format!("{} weights for {n} points", w.len()));
            }
        }
        Ok(())
    }

    /// The single polygon, converting from power basis if needed.
    pub fn polygon(&self) -> Result<ControlPolygon> {
        match self.basis {
            Basis::Bernstein => ControlPolygon::new(self.points.clone()),
            Basis::Power => power_to_bernstein(&self.points, self.degree),
        }
    }

    /// Chain segments; a file without `segments` is a one-segment chain.
    pub fn chain(&self) -> Result<Vec<ControlPolygon>> {
        let d = self.degree;
        let count = self.segments.unwrap_or(1);
        if d == 0 {
            return Err(Error::InvalidPolygon("chain degree must be positive".into()));
        }
        (0..count)
            .map(|k| ControlPolygon::new(self.points[k * d..=(k + 1) * d].to_vec()))
            .collect()
    }

    pub fn net(&self) -> Result<ControlNet> {
        let rows = self.rows.unwrap_or(1);
        let cols = self.points.len() / rows;
        ControlNet::new(self.points.chunks(cols).map(|c| c.to_vec()).collect())
    }

    /// Reference geometry matching an encoded `layout`.
    pub fn source(&self, layout: Layout) -> Result<Source> {
        Ok(match layout {
            Layout::DcZigzag => Source::Chain(self.chain()?),
            Layout::BilinearPatch | Layout::BicubicRgba => Source::Surface(self.net()?),
            Layout::RationalHomogeneous(_) => Source::Rational {
                poly: self.polygon()?,
                weights: self
                    .weights
                    .clone()
                    .ok_or_else(|| Error::InvalidConfig("rational layout needs `weights`".into()))?,
            },
            _ => Source::Curve(self.polygon()?),
        })
    }

    pub fn spline(&self) -> Result<BSplineCurve> {
        match &self.knots {
            Some(k) => BSplineCurve::new(self.points.clone(), k.clone(), self.degree),
            None => BSplineCurve::clamped_uniform(self.points.clone(), self.degree),
        }
    }
}

fn write_reals(f: &mut fmt::Formatter<'_>, values: &[f64]) -> fmt::Result {
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            f.write_str(" ")?;
        }
        write!(f, "{v:?}")?;
    }
    writeln!(f)
}

impl fmt::Display for CurveFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "degree {}", self.degree)?;
        writeln!(f, "channels {}", self.channels)?;
        if self.basis == Basis::Power {
            writeln!(f, "basis power")?;
        }
        if let Some(s) = self.segments {
            writeln!(f, "segments {s}")?;
        }
        if let Some(r) = self.rows {
            writeln!(f, "rows {r}")?;
        }
        if let Some(k) = &self.knots {
            f.write_str("knots ")?;
            write_reals(f, k)?;
        }
        if let Some(w) = &self.weights {
            f.write_str("weights ")?;
            write_reals(f, w)?;
        }
        for p in &self.points {
            write_reals(f, p.as_slice())?;
        }
        Ok(())
    }
}

impl FromStr for CurveFile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}
