//! Matrix families `A_i(t)`, kernels `Phi`, the dyadic index and the
//! structural factors entering the theorem constants.

mod constants;
mod family;
mod kernel;
mod matrix;

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

pub use constants::{theorem_constant, ConstantFamily, ConstantId, ConstantInputs, ConstantReport};
pub use family::{scalar_rotation_factor, MatrixFamily, ScalarMap};
pub use kernel::{kernel_nodes, kernel_nodes_split, reduce_shells, shell_contributions, KernelSpec, ShellSum, TNode, DIVERGENCE_RATIO};
pub use matrix::{frobenius_norm, Matrix};

use crate::error::{Error, Result};
use crate::exponents::{theta_exponent, ExponentFunction, ThetaVariant};
use crate::flags::{Flag, Flags};
use crate::math;
use crate::norms::luxemburg_norm;
use crate::quadrature::{PowerWeight, QuadratureGrid, Shape, TestFunction};
use crate::Point;

const DET_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetBounds {
    /// `||A||^{-n}`
    pub lower: f64,
    /// `|det A^{-1}|`
    pub mid: f64,
    /// `||A^{-1}||^n`
    pub upper: f64,
    pub holds: bool,
}

/// `||A||^{-n} <= |det A^{-1}| <= ||A^{-1}||^n` with relative slack `1e-12`.
pub fn det_bounds_check(a: &Matrix) -> Result<DetBounds> {
    let inv = a.inverse()?;
    let n = a.dim() as i32;
    let lower = math::powf(frobenius_norm(a), -n as f64);
    let mid = math::abs(inv.det());
    let upper = math::powf(frobenius_norm(&inv), n as f64);
    let holds = lower <= mid * (1.0 + DET_SLACK) && mid <= upper * (1.0 + DET_SLACK);
    Ok(DetBounds { lower, mid, upper, holds })
}

/// `||A|| ||A^{-1}||`, clamped below by `n` (its exact lower bound).
pub fn condition_number(a: &Matrix) -> Result<f64> {
    let inv = a.inverse()?;
    Ok((frobenius_norm(a) * frobenius_norm(&inv)).max(a.dim() as f64))
}

/// The integer `theta` with `2^theta rho < 1 <= 2^{theta+1} rho`.
pub fn theta_from_rho(rho: f64) -> Result<i32> {
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(Error::invalid("rho", "must be positive and finite"));
    }
    let mut theta = -(math::floor(math::log2(rho)) as i32) - 1;
    // the comparisons below are exact: scaling by a power of two only moves the exponent
    while math::ldexp(rho, theta) >= 1.0 {
        theta -= 1;
    }
    while math::ldexp(rho, theta + 1) < 1.0 {
        theta += 1;
    }
    Ok(theta)
}

/// `Theta*` for the matrices `A_1(t), ..., A_m(t)`.
pub fn theta_star(matrices: &[Matrix]) -> Result<i32> {
    if matrices.is_empty() {
        return Err(Error::invalid("families", "need at least one matrix"));
    }
    let mut rho: f64 = 0.0;
    for a in matrices {
        rho = rho.max(condition_number(a)?);
    }
    theta_from_rho(rho)
}

/// Per-family parameters of the structural factors.
#[derive(Debug, Clone, Copy)]
pub struct FactorParams<'a> {
    pub q: &'a ExponentFunction,
    /// Power of the weight in `c` and `psi`.
    pub gamma: f64,
    pub lambda: f64,
    pub alpha0: f64,
    pub alpha_inf: f64,
    pub beta: f64,
    pub zeta: f64,
    pub variant: ThetaVariant,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorBundle {
    pub c: f64,
    pub phi: f64,
    pub psi: f64,
    /// Absent without scalar-rotation structure.
    pub varphi: Option<f64>,
    pub commutator_gap: f64,
    pub one_norm_theta: f64,
    pub flags: Flags,
}

/// `max(||A||^{-g}, ||A^{-1}||^g) max(|det A^{-1}|^{1/q+}, |det A^{-1}|^{1/q-})`
pub fn c_factor(a: &Matrix, inv: &Matrix, q: &ExponentFunction, g: f64) -> f64 {
    let d = math::abs(inv.det());
    let w = math::powf(frobenius_norm(a), -g).max(math::powf(frobenius_norm(inv), g));
    w * math::powf(d, 1.0 / q.p_plus()).max(math::powf(d, 1.0 / q.p_minus()))
}

/// `phi_{A, lambda}` at dyadic index `theta`.
pub fn phi_factor(a: &Matrix, lambda: f64, alpha0: f64, alpha_inf: f64, theta: i32) -> f64 {
    let na = frobenius_norm(a);
    let head = math::powf(na, lambda - alpha0).max(math::powf(na, lambda - alpha_inf));
    let sum = |e: f64| -> f64 { (theta - 1..=0).map(|r| math::powf(2.0, r as f64 * e)).sum() };
    head * sum(lambda - alpha0).max(sum(lambda - alpha_inf))
}

/// `|det A^{-1}| max(||A^{-1}||^g, ||A||^{-g})`
pub fn psi_factor(a: &Matrix, inv: &Matrix, g: f64) -> f64 {
    math::abs(inv.det()) * math::powf(frobenius_norm(inv), g).max(math::powf(frobenius_norm(a), -g))
}

/// `max(ln(4|s|), ln(2/|s|))`
pub fn varphi_factor(s: f64) -> f64 {
    let s = math::abs(s);
    math::ln(4.0 * s).max(math::ln(2.0 / s))
}

/// `||I - A||^beta`, zero when `A = I`.
pub fn commutator_gap(a: &Matrix, beta: f64) -> f64 {
    let d = frobenius_norm(&Matrix::identity(a.dim()).sub(a));
    if d == 0.0 {
        0.0
    } else {
        math::powf(d, beta)
    }
}

/// `||1||_{L^{theta(t, .)}}`: exactly 1 when `theta = inf`, otherwise the
/// Luxemburg norm over the annulus of `grid`, flagged DOMAIN_TRUNCATED.
pub fn one_norm_theta(
    q: &ExponentFunction,
    a: &Matrix,
    zeta: f64,
    variant: ThetaVariant,
    grid: &QuadratureGrid,
    samples: &[Point],
) -> Result<(f64, Flags)> {
    let theta = theta_exponent(q, a, zeta, variant, samples)?;
    let mut flags = Flags::new();
    if theta.constant_value() == Some(f64::INFINITY) {
        return Ok((1.0, flags));
    }
    let one = TestFunction::new(q.dim(), Shape::Constant { value: 1.0 })?;
    let v = luxemburg_norm(&one, &theta, &PowerWeight::UNIT, grid)?;
    flags.insert(Flag::DomainTruncated);
    flags.extend(&v.flags);
    Ok((v.value, flags))
}

/// Every structural factor of one family at `t`.
pub fn structural_factors(
    family: &MatrixFamily,
    params: &FactorParams<'_>,
    t: &Point,
    theta_star: i32,
    one_norm_grid: &QuadratureGrid,
    samples: &[Point],
) -> Result<FactorBundle> {
    let dim = params.q.dim();
    family.check(dim)?;
    let (a, inv) = family.eval_invertible(t, dim)?;
    let mut flags = Flags::new();
    let varphi = match family.scalar_part(t, dim) {
        Some(s) if s != 0.0 => Some(varphi_factor(s)),
        _ => {
            flags.insert(Flag::NoRotationStructure);
            None
        }
    };
    let (one_norm, f) = one_norm_theta(params.q, &a, params.zeta, params.variant, one_norm_grid, samples)?;
    flags.extend(&f);
    Ok(FactorBundle {
        c: c_factor(&a, &inv, params.q, params.gamma),
        phi: phi_factor(&a, params.lambda, params.alpha0, params.alpha_inf, theta_star),
        psi: psi_factor(&a, &inv, params.gamma),
        varphi,
        commutator_gap: commutator_gap(&a, params.beta),
        one_norm_theta: one_norm,
        flags,
    })
}

/// Dyadic index `l` with `2^{l-1} < x <= 2^l`.
pub fn dyadic_index(x: f64) -> Result<i32> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::invalid("x", "must be positive and finite"));
    }
    let mut l = math::floor(math::log2(x)) as i32;
    while math::ldexp(1.0, l) < x {
        l += 1;
    }
    while math::ldexp(1.0, l - 1) >= x {
        l -= 1;
    }
    Ok(l)
}

/// Matrices of every family at `t`.
pub fn eval_all(families: &[MatrixFamily], t: &Point, dim: usize) -> Vec<Matrix> {
    families.iter().map(|f| f.eval(t, dim)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponents::ExponentSpec;

    #[test]
    fn frobenius_examples() {
        assert_eq!(frobenius_norm(&Matrix::identity(2)), 2f64.sqrt());
        let m = Matrix::from_rows(&[[1.0, 2.0], [3.0, 4.0]]).unwrap();
        assert_eq!(frobenius_norm(&m), 30f64.sqrt());
        assert_eq!(frobenius_norm(&Matrix::zeros(3)), 0.0);
    }

    #[test]
    fn det_bounds_examples() {
        let b = det_bounds_check(&Matrix::scalar(2, 2.0)).unwrap();
        assert!((b.lower - 0.125).abs() < 1e-15);
        assert_eq!(b.mid, 0.25);
        assert!((b.upper - 0.5).abs() < 1e-15);
        assert!(b.holds);
        for n in 1..=3 {
            let b = det_bounds_check(&Matrix::identity(n)).unwrap();
            let nf = n as f64;
            assert!((b.lower - nf.powf(-nf / 2.0)).abs() < 1e-15);
            assert_eq!(b.mid, 1.0);
            assert!((b.upper - nf.powf(nf / 2.0)).abs() < 1e-14);
            assert!(b.holds);
        }
        assert!(matches!(det_bounds_check(&Matrix::zeros(2)), Err(Error::SingularMatrix)));
    }

    #[test]
    fn theta_star_examples() {
        assert_eq!(theta_star(&[Matrix::scalar(1, 0.3)]).unwrap(), -1);
        assert_eq!(theta_star(&[Matrix::scalar(2, 5.0)]).unwrap(), -2);
        let skew = Matrix::diagonal(&[1.0, 1.0]);
        assert_eq!(theta_star(&[Matrix::scalar(1, 2.0), skew]).unwrap(), -2);
        for k in -3..40 {
            let rho = 2f64.powi(k);
            let th = theta_from_rho(rho).unwrap();
            assert!(math::ldexp(rho, th) < 1.0 && 1.0 <= math::ldexp(rho, th + 1), "{k}");
        }
    }

    #[test]
    fn dyadic_index_brackets() {
        assert_eq!(dyadic_index(1.0).unwrap(), 0);
        assert_eq!(dyadic_index(1.5).unwrap(), 1);
        assert_eq!(dyadic_index(2.0).unwrap(), 1);
        assert_eq!(dyadic_index(0.5).unwrap(), -1);
    }

    #[test]
    fn structural_factor_examples() {
        let q = ExponentFunction::constant(1, 2.0);
        let grid = crate::quadrature::make_grid(1, -4, 4, 4, 1, crate::quadrature::Rule::GaussLegendre).unwrap();
        let params = FactorParams {
            q: &q,
            gamma: 0.0,
            lambda: 0.0,
            alpha0: 0.0,
            alpha_inf: 0.0,
            beta: 1.0,
            zeta: 1.0,
            variant: ThetaVariant::Theta,
        };
        let b = structural_factors(&MatrixFamily::coordinate(0), &params, &[0.25, 0.0, 0.0], -1, &grid, &[]).unwrap();
        assert!((b.c - 2.0).abs() < 1e-15);
        assert_eq!(b.one_norm_theta, 1.0);
        assert!((b.commutator_gap - 0.75).abs() < 1e-15);
        let b = structural_factors(&MatrixFamily::Identity, &params, &[0.25, 0.0, 0.0], -1, &grid, &[]).unwrap();
        assert_eq!(b.commutator_gap, 0.0);
        assert_eq!(b.varphi, Some(4f64.ln()));
        let d = MatrixFamily::DiagonalPowers { powers: alloc::vec![1.0] };
        let b = structural_factors(&d, &params, &[0.5, 0.0, 0.0], -1, &grid, &[]).unwrap();
        assert!(b.varphi.is_some());
    }

    #[test]
    fn c_reduces_to_determinant_power() {
        let q = crate::exponents::make_exponent(2, &ExponentSpec::Constant { value: 3.0 }, crate::exponents::FunctionKind::Exponent).unwrap();
        let a = Matrix::from_rows(&[[2.0, 1.0], [0.5, 3.0]]).unwrap();
        let inv = a.inverse().unwrap();
        let c = c_factor(&a, &inv, &q, 0.0);
        assert!((c - inv.det().abs().powf(1.0 / 3.0)).abs() < 1e-15);
    }

    #[test]
    fn one_norm_of_finite_theta_is_flagged() {
        let q = ExponentFunction::constant(1, 2.0);
        let grid = crate::quadrature::make_grid(1, -4, 4, 4, 1, crate::quadrature::Rule::GaussLegendre).unwrap();
        let (v, flags) = one_norm_theta(&q, &Matrix::scalar(1, 1.0), 2.0, ThetaVariant::Theta, &grid, &[]).unwrap();
        // theta = 4 on the annulus 2^-5 < |x| <= 2^4 of total length 2 (16 - 1/32)
        let len = 2.0 * (16.0 - 1.0 / 32.0);
        assert!((v - f64::powf(len, 0.25)).abs() < 1e-12);
        assert!(flags.contains(Flag::DomainTruncated));
    }
}
