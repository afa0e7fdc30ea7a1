use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::Matrix;
use crate::error::{Error, Result};
use crate::math;
use crate::Point;

/// Scalar function of `t` used by the scalar-type families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ScalarMap {
    /// `factor * t_index^power`
    Coordinate {
        #[serde(default)]
        index: usize,
        #[serde(default = "one")]
        factor: f64,
        #[serde(default = "one")]
        power: f64,
    },
    /// `factor * |t|^power`
    Norm {
        #[serde(default = "one")]
        factor: f64,
        #[serde(default = "one")]
        power: f64,
    },
    Constant { value: f64 },
}

fn one() -> f64 {
    1.0
}

impl Default for ScalarMap {
    fn default() -> Self {
        ScalarMap::Coordinate { index: 0, factor: 1.0, power: 1.0 }
    }
}

fn signed_pow(x: f64, p: f64) -> f64 {
    if p == 1.0 {
        x
    } else {
        math::powf(x, p)
    }
}

impl ScalarMap {
    pub fn eval(&self, t: &Point, dim: usize) -> f64 {
        match *self {
            ScalarMap::Coordinate { index, factor, power } => factor * signed_pow(t[index], power),
            ScalarMap::Norm { factor, power } => factor * signed_pow(math::norm(t, dim), power),
            ScalarMap::Constant { value } => value,
        }
    }

    fn check(&self, dim: usize) -> Result<()> {
        match *self {
            ScalarMap::Coordinate { index, .. } if index >= dim => {
                Err(Error::invalid("index", "coordinate index outside the t-space dimension"))
            }
            _ => Ok(()),
        }
    }
}

/// A map `t -> A(t)` of invertible `n x n` matrices (`t` ranges over R^n).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MatrixFamily {
    Identity,
    /// `A(t) = s(t) I`
    Scalar {
        #[serde(default)]
        s: ScalarMap,
    },
    /// `A(t) = diag(t_1^{d_1}, ..., t_n^{d_n})`
    DiagonalPowers { powers: Vec<f64> },
    /// `A(t) = s(t) R(angle + angle_rate |t|)`, `R` a planar rotation
    RotationScalar {
        #[serde(default)]
        s: ScalarMap,
        #[serde(default)]
        angle: f64,
        #[serde(default)]
        angle_rate: f64,
    },
    Constant { matrix: Matrix },
}

impl MatrixFamily {
    /// `A(t) = t_index I`, the family of the Hardy-type reductions.
    pub fn coordinate(index: usize) -> Self {
        MatrixFamily::Scalar { s: ScalarMap::Coordinate { index, factor: 1.0, power: 1.0 } }
    }

    /// `A(t) = c t_0 I`
    pub fn scaled_coordinate(c: f64) -> Self {
        MatrixFamily::Scalar { s: ScalarMap::Coordinate { index: 0, factor: c, power: 1.0 } }
    }

    pub fn check(&self, dim: usize) -> Result<()> {
        match self {
            MatrixFamily::Scalar { s } | MatrixFamily::RotationScalar { s, .. } => s.check(dim),
            MatrixFamily::DiagonalPowers { powers } if powers.len() != dim => {
                Err(Error::DimensionMismatch { expected: dim, found: powers.len() })
            }
            MatrixFamily::Constant { matrix } if matrix.dim() != dim => {
                Err(Error::DimensionMismatch { expected: dim, found: matrix.dim() })
            }
            _ => Ok(()),
        }
    }

    pub fn eval(&self, t: &Point, dim: usize) -> Matrix {
        match self {
            MatrixFamily::Identity => Matrix::identity(dim),
            MatrixFamily::Scalar { s } => Matrix::scalar(dim, s.eval(t, dim)),
            MatrixFamily::DiagonalPowers { powers } => {
                let d: Vec<f64> = powers.iter().enumerate().map(|(i, &p)| signed_pow(t[i], p)).collect();
                Matrix::diagonal(&d)
            }
            MatrixFamily::RotationScalar { s, angle, angle_rate } => {
                let th = angle + angle_rate * math::norm(t, dim);
                Matrix::rotation(dim, th).scale(s.eval(t, dim))
            }
            MatrixFamily::Constant { matrix } => *matrix,
        }
    }

    /// `A(t)` and `A(t)^{-1}`, failing on a singular value.
    pub fn eval_invertible(&self, t: &Point, dim: usize) -> Result<(Matrix, Matrix)> {
        let a = self.eval(t, dim);
        let inv = a.inverse()?;
        Ok((a, inv))
    }

    /// `s(t)` when `A(t) = s(t) a(t)` with `a(t)` a rotation.
    pub fn scalar_part(&self, t: &Point, dim: usize) -> Option<f64> {
        match self {
            MatrixFamily::Identity => Some(1.0),
            MatrixFamily::Scalar { s } | MatrixFamily::RotationScalar { s, .. } => Some(s.eval(t, dim)),
            _ => scalar_rotation_factor(&self.eval(t, dim)),
        }
    }
}

/// `s` with `A = s R`, `R` a rotation (orthogonal, determinant one), if any.
pub fn scalar_rotation_factor(a: &Matrix) -> Option<f64> {
    let n = a.dim();
    let det = a.det();
    if det == 0.0 || !det.is_finite() {
        return None;
    }
    let mag = math::powf(math::abs(det), 1.0 / n as f64);
    let s = if det > 0.0 {
        mag
    } else if n % 2 == 1 {
        -mag
    } else {
        return None;
    };
    if a.scale(1.0 / s).orthogonality_defect() <= 1e-12 {
        Some(s)
    } else {
        None
    }
}
