use serde::Serialize;

use super::FuzzyError;

/// The parametric curve behind a [`MembershipFunction`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Shape {
    /// Normalized Gaussian, `exp(-(x - mean)^2 / (2 sigma^2))`, peak 1 at `mean`.
    Gaussian { mean: f64, sigma: f64 },
    /// 1 up to `shoulder`, spline descent to 0 at `foot`.
    ZShaped { shoulder: f64, foot: f64 },
    /// 0 up to `foot`, spline ascent to 1 at `shoulder`.
    SShaped { foot: f64, shoulder: f64 },
    /// Piecewise linear: 0 at `left`, 1 at `peak`, 0 at `right`.
    Triangular { left: f64, peak: f64, right: f64 },
}

/// A validated membership curve mapping any real input to a degree in `[0, 1]`.
///
/// Construction rejects parameters that would break the curve's shape, so
/// [`evaluate`](Self::evaluate) is total.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(transparent)]
pub struct MembershipFunction {
    shape: Shape,
}

fn finite(values: &[f64]) -> bool {
    values.iter().all(|v| v.is_finite())
}

impl MembershipFunction {
    pub fn gaussian(mean: f64, sigma: f64) -> Result<Self, FuzzyError> {
        if !finite(&[mean, sigma]) || sigma <= 0.0 {
            return Err(FuzzyError::InvalidMembership(format!(
                "gaussian needs finite mean and sigma > 0 (mean {mean}, sigma {sigma})"
            )));
        }
        Ok(Self {
            shape: Shape::Gaussian { mean, sigma },
        })
    }

    pub fn z_shaped(shoulder: f64, foot: f64) -> Result<Self, FuzzyError> {
        if !finite(&[shoulder, foot]) || shoulder >= foot {
            return Err(FuzzyError::InvalidMembership(format!(
                "z-shaped needs shoulder < foot (shoulder {shoulder}, foot {foot})"
            )));
        }
        Ok(Self {
            shape: Shape::ZShaped { shoulder, foot },
        })
    }

    pub fn s_shaped(foot: f64, shoulder: f64) -> Result<Self, FuzzyError> {
        if !finite(&[foot, shoulder]) || foot >= shoulder {
            return Err(FuzzyError::InvalidMembership(format!(
                "s-shaped needs foot < shoulder (foot {foot}, shoulder {shoulder})"
            )));
        }
        Ok(Self {
            shape: Shape::SShaped { foot, shoulder },
        })
    }

    pub fn triangular(left: f64, peak: f64, right: f64) -> Result<Self, FuzzyError> {
        if !finite(&[left, peak, right]) || left > peak || peak > right || left == right {
            return Err(FuzzyError::InvalidMembership(format!(
                "triangular needs left <= peak <= right and left < right ({left}, {peak}, {right})"
            )));
        }
        Ok(Self {
            shape: Shape::Triangular { left, peak, right },
        })
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    /// Degree of membership of `x`. NaN maps to 0.
    pub fn evaluate(&self, x: f64) -> f64 {
        if x.is_nan() {
            return 0.0;
        }
        match self.shape {
            Shape::Gaussian { mean, sigma } => {
                let z = (x - mean) / sigma;
                (-0.5 * z * z).exp()
            }
            Shape::ZShaped { shoulder, foot } => 1.0 - spline_rise(x, shoulder, foot),
            Shape::SShaped { foot, shoulder } => spline_rise(x, foot, shoulder),
            Shape::Triangular { left, peak, right } => {
                if x < left || x > right {
                    0.0
                } else if x == peak {
                    1.0
                } else if x < peak {
                    (x - left) / (peak - left)
                } else {
                    (right - x) / (right - peak)
                }
            }
        }
    }
}

/// Quadratic spline from 0 at `a` to 1 at `b`, passing 0.5 at the midpoint.
fn spline_rise(x: f64, a: f64, b: f64) -> f64 {
    if x <= a {
        return 0.0;
    }
    if x >= b {
        return 1.0;
    }
    let width = b - a;
    if x <= (a + b) / 2.0 {
        let t = (x - a) / width;
        2.0 * t * t
    } else {
        let t = (x - b) / width;
        1.0 - 2.0 * t * t
    }
}
