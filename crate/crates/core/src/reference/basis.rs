use crate::error::{Error, Result};
use crate::primitives::{ControlPolygon, Point};

use super::pascal_row;

/// Highest degree accepted by the power/Bernstein conversions.
pub const MAX_CONVERSION_DEGREE: usize = 8;

fn check_degree(degree: usize) -> Result<()> {
    if (1..=MAX_CONVERSION_DEGREE).contains(&degree) {
        Ok(())
    } else {
        Err(Error::UnsupportedDegree {
            degree,
            limit: "basis conversion supports degrees 1 to 8",
        })
    }
}

/// Power coefficients `a_0 + a_1 t + …` to Bernstein control points of the
/// given degree: `b_j = Σ_{i≤j} C(j,i)/C(d,i) · a_i`. Missing high-order
/// coefficients are zero.
pub fn power_to_bernstein(coeffs: &[Point], degree: usize) -> Result<ControlPolygon> {
    check_degree(degree)?;
    if coeffs.is_empty() || coeffs.len() > degree + 1 {
        return Err(Error::InvalidPolygon(format!(
            "{} power coefficients for degree {degree}",
            coeffs.len()
        )));
    }
    let channels = coeffs[0].channels();
    if let Some(c) = coeffs.iter().find(|c| c.channels() != channels) {
        return Err(Error::ChannelMismatch {
            expected: channels,
            found: c.channels(),
        });
    }
    let top = pascal_row(degree);
    let points = (0..=degree)
        .map(|j| {
            let row = pascal_row(j);
            coeffs
                .iter()
                .enumerate()
                .take(j + 1)
                .fold(Point::zeros(channels), |acc, (i, a)| {
                    acc + *a * (row[i] as f64 / top[i] as f64)
                })
        })
        .collect();
    ControlPolygon::new(points)
}

/// Inverse of [`power_to_bernstein`]:
/// `a_i = C(d,i) · Σ_{j≤i} (−1)^{i−j} C(i,j) b_j`.
pub fn bernstein_to_power(poly: &ControlPolygon) -> Result<Vec<Point>> {
    let d = poly.degree();
    check_degree(d)?;
    let top = pascal_row(d);
    Ok((0..=d)
        .map(|i| {
            let row = pascal_row(i);
            let sum = (0..=i).fold(Point::zeros(poly.channels()), |acc, j| {
                let sign = if (i - j) % 2 == 0 { 1.0 } else { -1.0 };
                acc + poly[j] * (sign * row[j] as f64)
            });
            sum * top[i] as f64
        })
        .collect())
}
