//! B-splines: de Boor evaluation and Bézier extraction by repeated knot
//! insertion (Boehm).

use crate::error::{Error, Result};
use crate::primitives::{ControlPolygon, Point};

#[derive(Clone, Debug, PartialEq)]
pub struct BSplineCurve {
    control_points: Vec<Point>,
    knots: Vec<f64>,
    degree: usize,
}

/// One Bézier piece of a converted spline and the knot interval it covers.
#[derive(Clone, Debug, PartialEq)]
pub struct BezierSegment {
    pub poly: ControlPolygon,
    pub domain: (f64, f64),
}

impl BSplineCurve {
    pub fn new(control_points: Vec<Point>, knots: Vec<f64>, degree: usize) -> Result<Self> {
        if degree == 0 {
            return Err(Error::InvalidSpline("degree must be at least 1".into()));
        }
        if control_points.len() < degree + 1 {
            return Err(Error::InvalidSpline(format!(
                "degree {degree} needs at least {} control points, got {}",
                degree + 1,
                control_points.len()
            )));
        }
        // validates channels
        ControlPolygon::new(control_points.clone())?;
        if knots.len() != control_points.len() + degree + 1 {
            return Err(Error::InvalidSpline(format!(
                "expected {} knots, got {}",
                control_points.len() + degree + 1,
                knots.len()
            )));
        }
        if knots.iter().any(|k| !k.is_finite()) || knots.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::InvalidSpline("knots must be finite and non-decreasing".into()));
        }
        let spline = Self {
            control_points,
            knots,
            degree,
        };
        let (a, b) = spline.domain();
        if !(a < b) {
            return Err(Error::InvalidSpline(format!("empty domain [{a}, {b}]")));
        }
        Ok(spline)
    }

    /// Clamped knot vector with uniformly spaced interior knots over `[0, 1]`.
    pub fn clamped_uniform(control_points: Vec<Point>, degree: usize) -> Result<Self> {
        let n = control_points.len();
        if n < degree + 1 {
            return Err(Error::InvalidSpline("too few control points".into()));
        }
        let spans = n - degree;
        let mut knots = vec![0.0; degree + 1];
        knots.extend((1..spans).map(|i| i as f64 / spans as f64));
        knots.extend(std::iter::repeat_n(1.0, degree + 1));
        Self::new(control_points, knots, degree)
    }

    pub fn control_points(&self) -> &[Point] {
        &self.control_points
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Valid parameter range `[u_p, u_{n+1}]`.
    pub fn domain(&self) -> (f64, f64) {
        (self.knots[self.degree], self.knots[self.control_points.len()])
    }

    /// Index `k` of the nonempty span `[u_k, u_{k+1})` containing `t`; the
    /// right end of the domain belongs to the last nonempty span.
    fn span(&self, t: f64) -> usize {
        let p = self.degree;
        let n = self.control_points.len();
        let (_, b) = self.domain();
        if t >= b {
            let mut k = n - 1;
            while self.knots[k] >= b {
                k -= 1;
            }
            return k;
        }
        let mut k = p;
        while self.knots[k + 1] <= t {
            k += 1;
        }
        k
    }
}

pub fn eval_deboor(spline: &BSplineCurve, t: f64) -> Result<Point> {
    let (a, b) = spline.domain();
    if !(a..=b).contains(&t) {
        return Err(Error::OutOfDomain {
            what: "t",
            value: t,
            domain: format!("[{a}, {b}]"),
        });
    }
    let p = spline.degree;
    let k = spline.span(t);
    let u = &spline.knots;
    let mut d: Vec<Point> = spline.control_points[k - p..=k].to_vec();
    for r in 1..=p {
        for j in (r..=p).rev() {
            let i = j + k - p;
            let alpha = (t - u[i]) / (u[i + p + 1 - r] - u[i]);
            d[j] = d[j - 1].lerp(&d[j], alpha);
        }
    }
    Ok(d[p])
}

/// Single knot insertion into span `k` (`u_k ≤ x ≤ u_{k+1}`, `u_k < u_{k+1}`).
fn insert_knot(spline: &mut BSplineCurve, x: f64, k: usize) {
    let p = spline.degree;
    let u = &spline.knots;
    let old = &spline.control_points;
    let mut pts = Vec::with_capacity(old.len() + 1);
    pts.extend_from_slice(&old[..=k - p]);
    for i in k - p + 1..=k {
        let alpha = (x - u[i]) / (u[i + p] - u[i]);
        pts.push(old[i - 1].lerp(&old[i], alpha));
    }
    pts.extend_from_slice(&old[k..]);
    spline.control_points = pts;
    spline.knots.insert(k + 1, x);
}

/// Converts to piecewise Bézier form by inserting every breakpoint of the
/// domain (ends included) until it has multiplicity `degree`.
pub fn boehm_to_bezier(spline: &BSplineCurve) -> Result<Vec<BezierSegment>> {
    let p = spline.degree;
    let (a, b) = spline.domain();
    if !(a < b) {
        return Err(Error::InvalidSpline(format!("empty domain [{a}, {b}]")));
    }
    let mut s = spline.clone();
    let mut breaks: Vec<f64> = s.knots.iter().copied().filter(|k| (a..=b).contains(k)).collect();
    breaks.dedup();
    for x in breaks {
        loop {
            let mult = s.knots.iter().filter(|&&k| k == x).count();
            if mult >= p {
                break;
            }
            let k = if x < b {
                s.span(x)
            } else {
                // last index with u_k < b
                s.knots.iter().rposition(|&k| k < b).expect("domain is nonempty")
            };
            insert_knot(&mut s, x, k);
        }
    }
    let u = &s.knots;
    let mut segments = Vec::new();
    for k in p..s.control_points.len() {
        if u[k] < u[k + 1] && u[k] >= a && u[k + 1] <= b {
            segments.push(BezierSegment {
                poly: ControlPolygon::new(s.control_points[k - p..=k].to_vec())?,
                domain: (u[k], u[k + 1]),
            });
        }
    }
    Ok(segments)
}

/// Evaluates a converted spline at global parameter `t`.
pub fn eval_segments(segments: &[BezierSegment], t: f64) -> Option<Point> {
    let seg = segments
        .iter()
        .find(|s| t >= s.domain.0 && t < s.domain.1)
        .or_else(|| segments.last().filter(|s| t == s.domain.1))?;
    let (lo, hi) = seg.domain;
    Some(super::eval_decasteljau(&seg.poly, (t - lo) / (hi - lo)))
}
