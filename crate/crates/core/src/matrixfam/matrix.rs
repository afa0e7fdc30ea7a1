use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math;
use crate::{Point, MAX_DIM};

/// Dense real n x n matrix, n <= 3, stored in a fixed 3 x 3 block.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "alloc::vec::Vec<alloc::vec::Vec<f64>>", into = "alloc::vec::Vec<alloc::vec::Vec<f64>>")]
pub struct Matrix {
    n: usize,
    a: [[f64; MAX_DIM]; MAX_DIM],
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        assert!((1..=MAX_DIM).contains(&n), "matrix dimension {n} outside 1..=3");
        Self { n, a: [[0.0; MAX_DIM]; MAX_DIM] }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, 1.0)
    }

    pub fn scalar(n: usize, s: f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.a[i][i] = s;
        }
        m
    }

    pub fn diagonal(entries: &[f64]) -> Self {
        let mut m = Self::zeros(entries.len());
        for (i, &d) in entries.iter().enumerate() {
            m.a[i][i] = d;
        }
        m
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        if !(1..=MAX_DIM).contains(&n) {
            return Err(Error::invalid("matrix", "dimension must be 1, 2 or 3"));
        }
        let mut m = Self::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n {
                return Err(Error::invalid("matrix", "matrix must be square"));
            }
            m.a[i][..n].copy_from_slice(row);
        }
        Ok(m)
    }

    /// Planar rotation by `angle` acting on the first two coordinates.
    /// In dimension 1 only the angles 0 and pi give orthogonal maps; any
    /// other angle is rounded to the nearer of the two.
    pub fn rotation(n: usize, angle: f64) -> Self {
        let mut m = Self::identity(n);
        if n == 1 {
            if math::cos(angle) < 0.0 {
                m.a[0][0] = -1.0;
            }
            return m;
        }
        let (s, c) = (math::sin(angle), math::cos(angle));
        m.a[0][0] = c;
        m.a[0][1] = -s;
        m.a[1][0] = s;
        m.a[1][1] = c;
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.a[i][j]
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut m = *self;
        for i in 0..self.n {
            for j in 0..self.n {
                m.a[i][j] *= s;
            }
        }
        m
    }

    pub fn sub(&self, other: &Matrix) -> Self {
        let mut m = *self;
        for i in 0..self.n {
            for j in 0..self.n {
                m.a[i][j] -= other.a[i][j];
            }
        }
        m
    }

    pub fn mul(&self, other: &Matrix) -> Self {
        let mut m = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                let mut s = 0.0;
                for k in 0..self.n {
                    s += self.a[i][k] * other.a[k][j];
                }
                m.a[i][j] = s;
            }
        }
        m
    }

    pub fn transpose(&self) -> Self {
        let mut m = *self;
        for i in 0..self.n {
            for j in 0..self.n {
                m.a[i][j] = self.a[j][i];
            }
        }
        m
    }

    #[inline]
    pub fn mul_vec(&self, x: &Point) -> Point {
        let mut y = [0.0; MAX_DIM];
        for (i, yi) in y.iter_mut().enumerate().take(self.n) {
            let mut s = 0.0;
            for j in 0..self.n {
                s += self.a[i][j] * x[j];
            }
            *yi = s;
        }
        y
    }

    pub fn det(&self) -> f64 {
        let a = &self.a;
        match self.n {
            1 => a[0][0],
            2 => a[0][0] * a[1][1] - a[0][1] * a[1][0],
            _ => {
                a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
                    - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
                    + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
            }
        }
    }

    /// Inverse through the adjugate.
    pub fn inverse(&self) -> Result<Matrix> {
        let d = self.det();
        if d == 0.0 || !d.is_finite() {
            return Err(Error::SingularMatrix);
        }
        let a = &self.a;
        let mut m = Self::zeros(self.n);
        match self.n {
            1 => m.a[0][0] = 1.0 / a[0][0],
            2 => {
                m.a[0][0] = a[1][1] / d;
                m.a[0][1] = -a[0][1] / d;
                m.a[1][0] = -a[1][0] / d;
                m.a[1][1] = a[0][0] / d;
            }
            _ => {
                for i in 0..3 {
                    for j in 0..3 {
                        // cofactor of (j, i)
                        let r0 = if j == 0 { 1 } else { 0 };
                        let r1 = if j == 2 { 1 } else { 2 };
                        let c0 = if i == 0 { 1 } else { 0 };
                        let c1 = if i == 2 { 1 } else { 2 };
                        let minor = a[r0][c0] * a[r1][c1] - a[r0][c1] * a[r1][c0];
                        let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
                        m.a[i][j] = sign * minor / d;
                    }
                }
            }
        }
        Ok(m)
    }

    /// `max |(M^T M - I)_{ij}|`, the distance from orthogonality.
    pub fn orthogonality_defect(&self) -> f64 {
        let g = self.transpose().mul(self).sub(&Matrix::identity(self.n));
        let mut worst: f64 = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                worst = worst.max(math::abs(g.a[i][j]));
            }
        }
        worst
    }
}

impl TryFrom<alloc::vec::Vec<alloc::vec::Vec<f64>>> for Matrix {
    type Error = Error;

    fn try_from(rows: alloc::vec::Vec<alloc::vec::Vec<f64>>) -> Result<Self> {
        Matrix::from_rows(&rows)
    }
}

impl From<Matrix> for alloc::vec::Vec<alloc::vec::Vec<f64>> {
    fn from(m: Matrix) -> Self {
        (0..m.n).map(|i| m.a[i][..m.n].to_vec()).collect()
    }
}

/// Entrywise (Frobenius) norm `(sum |a_ij|^2)^{1/2}`.
pub fn frobenius_norm(a: &Matrix) -> f64 {
    let mut s = 0.0;
    for i in 0..a.n {
        for j in 0..a.n {
            s += a.a[i][j] * a.a[i][j];
        }
    }
    math::sqrt(s)
}
