//! Full-precision ground-truth evaluators and basis conversions.

mod basis;
mod bspline;
mod seiler;

pub use basis::{bernstein_to_power, power_to_bernstein, MAX_CONVERSION_DEGREE};
pub use bspline::{boehm_to_bezier, eval_deboor, eval_segments, BSplineCurve, BezierSegment};
pub use seiler::{eval_seiler, seiler_terms, SeilerTerms, MAX_SEILER_DEGREE};

use crate::error::{Error, Result};
use crate::primitives::{ControlNet, ControlPolygon, Point};

/// Row `n` of Pascal's triangle, built by integer addition.
pub fn pascal_row(n: usize) -> Vec<u64> {
    let mut row = vec![1u64];
    for _ in 0..n {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(1);
        next.extend(row.windows(2).map(|w| w[0] + w[1]));
        next.push(1);
        row = next;
    }
    row
}

pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        0
    } else {
        pascal_row(n)[k]
    }
}

/// `Σ C(d,i)·(1−t)^{d−i}·t^i·b_i`.
pub fn eval_bernstein(poly: &ControlPolygon, t: f64) -> Point {
    let d = poly.degree();
    let coeffs = pascal_row(d);
    let s = 1.0 - t;
    let mut acc = Point::zeros(poly.channels());
    for (i, (b, c)) in poly.points().iter().zip(coeffs).enumerate() {
        let w = c as f64 * s.powi((d - i) as i32) * t.powi(i as i32);
        acc = acc + *b * w;
    }
    acc
}

/// Repeated pairwise lerp until one point remains.
pub fn eval_decasteljau(poly: &ControlPolygon, t: f64) -> Point {
    let mut pts = poly.points().to_vec();
    while pts.len() > 1 {
        for i in 0..pts.len() - 1 {
            pts[i] = pts[i].lerp(&pts[i + 1], t);
        }
        pts.pop();
    }
    pts[0]
}

/// Rational curve: evaluates the homogeneous curve `(w_i·b_i, w_i)` and
/// divides the point part by the weight part.
pub fn eval_rational(poly: &ControlPolygon, weights: &[f64], t: f64) -> Result<Point> {
    check_weights(poly, weights)?;
    let numerator = ControlPolygon::new(
        poly.points()
            .iter()
            .zip(weights)
            .map(|(b, &w)| *b * w)
            .collect(),
    )?;
    let denominator = ControlPolygon::from_scalars(weights)?;
    let w = eval_bernstein(&denominator, t)[0];
    if w.abs() <= f64::MIN_POSITIVE {
        return Err(Error::Division(w));
    }
    Ok(eval_bernstein(&numerator, t).map(|x| x / w))
}

pub(crate) fn check_weights(poly: &ControlPolygon, weights: &[f64]) -> Result<()> {
    if weights.len() != poly.points().len() {
        return Err(Error::InvalidWeights(format!(
            "{} weights for {} control points",
            weights.len(),
            poly.points().len()
        )));
    }
    if let Some(w) = weights.iter().find(|w| !(**w > 0.0 && w.is_finite())) {
        return Err(Error::InvalidWeights(format!("weight {w} is not positive")));
    }
    Ok(())
}

/// Tensor-product Bézier surface: rows at `u`, then the resulting column
/// polygon at `v`.
pub fn eval_tensor_surface(net: &ControlNet, u: f64, v: f64) -> Point {
    let column: Vec<Point> = (0..net.rows())
        .map(|r| eval_bernstein(&net.row(r), u))
        .collect();
    let column = ControlPolygon::new(column).expect("rows share channels");
    eval_bernstein(&column, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn poly(v: &[f64]) -> ControlPolygon {
        ControlPolygon::from_scalars(v).unwrap()
    }

    #[test]
    fn pascal_rows() {
        assert_eq!(pascal_row(0), vec![1]);
        assert_eq!(pascal_row(4), vec![1, 4, 6, 4, 1]);
        assert_eq!(binomial(8, 4), 70);
        assert_eq!(binomial(3, 5), 0);
    }

    #[test]
    fn bernstein_examples() {
        let c = poly(&[0.7; 5]);
        for t in [0.0, 0.3, 1.0] {
            assert!((eval_bernstein(&c, t)[0] - 0.7).abs() < 1e-15);
        }
        assert_eq!(eval_bernstein(&poly(&[0.0, 1.0]), 0.5)[0], 0.5);
        // 3s²t + 3st² at t = 1/2
        let oracle = 3.0 * 0.25 * 0.5 + 3.0 * 0.5 * 0.25;
        let p = poly(&[0.0, 1.0, 1.0, 0.0]);
        assert_eq!(eval_bernstein(&p, 0.5)[0], oracle);
        assert_eq!(eval_decasteljau(&p, 0.5)[0], oracle);
    }

    #[test]
    fn decasteljau_examples() {
        let p = ControlPolygon::new(vec![
            Point::new(&[0.1, 2.0]).unwrap(),
            Point::new(&[0.5, -1.0]).unwrap(),
            Point::new(&[0.9, 3.0]).unwrap(),
        ])
        .unwrap();
        assert_eq!(eval_decasteljau(&p, 0.0), p[0]);
        assert_eq!(eval_decasteljau(&p, 1.0), p[2]);
        // quadratic 2st at t = 1/4
        assert_eq!(eval_decasteljau(&poly(&[0.0, 1.0, 0.0]), 0.25)[0], 2.0 * 0.25 * 0.75);
        assert_eq!(2.0 * 0.25 * 0.75, 0.375);
    }

    #[test]
    fn rational_examples() {
        let p = poly(&[0.2, 0.9, -0.4]);
        let r = eval_rational(&p, &[1.0, 1.0, 1.0], 0.37).unwrap();
        assert!((r[0] - eval_bernstein(&p, 0.37)[0]).abs() < 1e-15);
        let r0 = eval_rational(&p, &[2.0, 0.3, 5.0], 0.0).unwrap();
        assert_eq!(r0[0], 0.2);
        assert!(eval_rational(&p, &[1.0, 0.0, 1.0], 0.5).is_err());
        assert!(eval_rational(&p, &[1.0, 1.0], 0.5).is_err());
    }

    #[test]
    fn rational_quarter_circle() {
        let arc = ControlPolygon::new(vec![
            Point::new(&[1.0, 0.0]).unwrap(),
            Point::new(&[1.0, 1.0]).unwrap(),
            Point::new(&[0.0, 1.0]).unwrap(),
        ])
        .unwrap();
        let w = [1.0, std::f64::consts::FRAC_1_SQRT_2, 1.0];
        for i in 0..1000 {
            let t = i as f64 / 999.0;
            let p = eval_rational(&arc, &w, t).unwrap();
            assert!((p[0] * p[0] + p[1] * p[1] - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn tensor_surface_examples() {
        let net = ControlNet::from_scalar_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let (u, v) = (0.3, 0.8);
        let bilinear = (0.0 * (1.0 - u) + 1.0 * u) * (1.0 - v) + (1.0 * (1.0 - u) + 0.0 * u) * v;
        assert!((eval_tensor_surface(&net, u, v)[0] - bilinear).abs() < 1e-15);
        let c = ControlNet::from_scalar_rows(&vec![vec![0.4; 3]; 4]).unwrap();
        assert!((eval_tensor_surface(&c, 0.2, 0.9)[0] - 0.4).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn tensor_surface_is_symmetric(
            vals in prop::collection::vec(-1.0f64..1.0, 16),
            u in 0.0f64..=1.0, v in 0.0f64..=1.0,
        ) {
            let rows: Vec<Vec<f64>> = vals.chunks(4).map(|c| c.to_vec()).collect();
            let net = ControlNet::from_scalar_rows(&rows).unwrap();
            let by_rows = eval_tensor_surface(&net, u, v)[0];
            let cols: Vec<Point> = (0..4).map(|c| eval_bernstein(&net.column(c), v)).collect();
            let by_cols = eval_bernstein(&ControlPolygon::new(cols).unwrap(), u)[0];
            prop_assert!((by_rows - by_cols).abs() <= 1e-12);
        }

        #[test]
        fn decasteljau_matches_bernstein_within_8_ulps(
            vals in prop::collection::vec(0.0f64..1.0, 9),
            d in 1usize..=8,
            t in 0.0f64..=1.0,
        ) {
            let p = poly(&vals[..=d]);
            let a = eval_bernstein(&p, t)[0];
            let b = eval_decasteljau(&p, t)[0];
            // ulps are measured at the scale of the control points
            let ulp = f64::EPSILON * p.points().iter().fold(0.0f64, |m, x| m.max(x[0].abs()));
            prop_assert!((a - b).abs() <= 8.0 * ulp, "{} vs {}", a, b);
        }

        #[test]
        fn evenly_spaced_lines_are_reproduced(
            a in -1.0f64..1.0, b in -1.0f64..1.0, d in 1usize..=8, t in 0.0f64..=1.0,
        ) {
            let pts: Vec<f64> = (0..=d).map(|i| a + (b - a) * i as f64 / d as f64).collect();
            let p = poly(&pts);
            let line = a + (b - a) * t;
            let ulp = f64::EPSILON * a.abs().max(b.abs());
            prop_assert!((eval_bernstein(&p, t)[0] - line).abs() <= 4.0 * ulp);
            prop_assert!((eval_decasteljau(&p, t)[0] - line).abs() <= 4.0 * ulp);
        }
    }
}
