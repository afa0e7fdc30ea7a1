//! Thin wrappers over `libm` so the rest of the crate reads like ordinary
//! floating-point code without `std`.

use crate::Point;

#[inline]
pub fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub fn powf(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

#[inline]
pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub fn log2(x: f64) -> f64 {
    libm::log2(x)
}

#[inline]
pub fn floor(x: f64) -> f64 {
    libm::floor(x)
}

#[inline]
pub fn sin(x: f64) -> f64 {
    libm::sin(x)
}

#[inline]
pub fn cos(x: f64) -> f64 {
    libm::cos(x)
}

/// `2^k`, exact for every `k` in the normal range.
#[inline]
pub fn exp2i(k: i32) -> f64 {
    libm::ldexp(1.0, k)
}

/// `x * 2^k` without rounding (barring overflow/underflow).
#[inline]
pub fn ldexp(x: f64, k: i32) -> f64 {
    libm::ldexp(x, k)
}

/// Euclidean norm of the first `dim` coordinates.
#[inline]
pub fn norm(x: &Point, dim: usize) -> f64 {
    let mut s = 0.0;
    for v in &x[..dim] {
        s += v * v;
    }
    sqrt(s)
}

/// `|x|^p` with the conventions `0^0 = 1` and `0^p = +inf` for `p < 0`.
#[inline]
pub fn abs_pow(x: f64, p: f64) -> f64 {
    powf(abs(x), p)
}

/// Surface measure of the unit sphere S^{n-1}.
pub fn sphere_area(dim: usize) -> f64 {
    match dim {
        1 => 2.0,
        2 => 2.0 * core::f64::consts::PI,
        3 => 4.0 * core::f64::consts::PI,
        _ => f64::NAN,
    }
}
