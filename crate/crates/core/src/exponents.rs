//! Variable exponents `p(.) : R^n -> [1, inf]` and the real-valued functions
//! `alpha(.)`, `gamma(.)` that share their representation.
//!
//! Exponents are closed-form objects. Bounds, the value at the origin and the
//! limit at infinity are carried analytically through every composition, so
//! class membership never depends on sampling. Composition is limited to what
//! the boundedness theorems need: affine combinations, reciprocals, linear
//! changes of variable and the `theta` exponent built from a matrix family.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math;
use crate::matrixfam::Matrix;
use crate::Point;

/// Closed-form catalog entry, named in scenario files by `kind`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ExponentSpec {
    /// `c`
    Constant { value: f64 },
    /// `a + b / (1 + |x|)`
    RationalBump { a: f64, b: f64 },
    /// `a + b / log(e + |x|)`
    ClampLog { a: f64, b: f64 },
}

impl ExponentSpec {
    fn eval_radial(&self, r: f64) -> f64 {
        match *self {
            ExponentSpec::Constant { value } => value,
            ExponentSpec::RationalBump { a, b } => a + b / (1.0 + r),
            ExponentSpec::ClampLog { a, b } => a + b / math::ln(core::f64::consts::E + r),
        }
    }

    /// `(inf, sup, value at 0, limit at infinity)`; every form is monotone in `|x|`.
    fn analytic_bounds(&self) -> (f64, f64, f64, f64) {
        match *self {
            ExponentSpec::Constant { value } => (value, value, value, value),
            ExponentSpec::RationalBump { a, b } | ExponentSpec::ClampLog { a, b } => {
                let zero = a + b;
                (a.min(zero), a.max(zero), zero, a)
            }
        }
    }

    fn check_parameters(&self) -> Result<()> {
        let finite = match *self {
            ExponentSpec::Constant { value } => !value.is_nan(),
            ExponentSpec::RationalBump { a, b } | ExponentSpec::ClampLog { a, b } => {
                a.is_finite() && b.is_finite()
            }
        };
        if finite {
            Ok(())
        } else {
            Err(Error::invalid("exponent", "parameters must be finite"))
        }
    }
}

/// Whether a function is a genuine exponent (values in `[1, inf]`) or a
/// bounded real function such as `alpha(.)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FunctionKind {
    Exponent,
    Real,
}

#[derive(Debug, Clone, PartialEq)]
enum Expr {
    Closed(ExponentSpec),
    /// `constant + sum coef * term`
    Affine { constant: f64, terms: Vec<(f64, Expr)> },
    /// `1 / e`, with `1/0 = inf` and `1/inf = 0`.
    Reciprocal(Box<Expr>),
    /// `e(M x)`
    Composed { inner: Box<Expr>, map: Matrix },
    /// `1 / (1/q(M x) - 1/(zeta q(x)))`; `+inf` where the difference vanishes.
    Theta { q: Box<Expr>, inverse: Matrix, zeta: f64 },
}

/// Tolerance under which a negative `1/theta` counts as rounding noise.
const THETA_SLACK: f64 = 1e-12;

impl Expr {
    fn eval(&self, x: &Point, dim: usize) -> f64 {
        match self {
            Expr::Closed(spec) => spec.eval_radial(math::norm(x, dim)),
            Expr::Affine { constant, terms } => {
                let mut s = *constant;
                for (c, e) in terms {
                    s += c * e.eval(x, dim);
                }
                s
            }
            Expr::Reciprocal(e) => 1.0 / e.eval(x, dim),
            Expr::Composed { inner, map } => inner.eval(&map.mul_vec(x), dim),
            Expr::Theta { q, inverse, zeta } => {
                let moved = 1.0 / q.eval(&inverse.mul_vec(x), dim);
                let d = moved - 1.0 / (zeta * q.eval(x, dim));
                if d > THETA_SLACK * moved {
                    1.0 / d
                } else if d >= -THETA_SLACK * moved {
                    f64::INFINITY
                } else {
                    f64::NAN
                }
            }
        }
    }

    fn constant_value(&self) -> Option<f64> {
        match self {
            Expr::Closed(ExponentSpec::Constant { value }) => Some(*value),
            _ => None,
        }
    }

    fn constant(value: f64) -> Expr {
        Expr::Closed(ExponentSpec::Constant { value })
    }

    fn reciprocal(e: Expr) -> Expr {
        match e {
            Expr::Closed(ExponentSpec::Constant { value }) => Expr::constant(1.0 / value),
            Expr::Reciprocal(inner) => *inner,
            other => Expr::Reciprocal(Box::new(other)),
        }
    }

    fn affine(constant: f64, terms: Vec<(f64, Expr)>) -> Expr {
        let mut c0 = constant;
        let mut kept = Vec::new();
        for (c, e) in terms {
            if c == 0.0 {
                continue;
            }
            match e.constant_value() {
                Some(v) => c0 += c * v,
                None => kept.push((c, e)),
            }
        }
        if kept.is_empty() {
            return Expr::constant(c0);
        }
        if c0 == 0.0 && kept.len() == 1 && kept[0].0 == 1.0 {
            return kept.pop().unwrap().1;
        }
        Expr::Affine { constant: c0, terms: kept }
    }
}

/// A measurable exponent (or bounded real function) with cached bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentFunction {
    dim: usize,
    kind: FunctionKind,
    expr: Expr,
    p_minus: f64,
    p_plus: f64,
    p_zero: f64,
    p_infty: Option<f64>,
    c0_log: Option<f64>,
    cinf_log: Option<f64>,
}

/// Builds a catalog exponent. Bounds are analytic.
pub fn make_exponent(dim: usize, spec: &ExponentSpec, kind: FunctionKind) -> Result<ExponentFunction> {
    check_dim(dim)?;
    spec.check_parameters()?;
    let (lo, hi, zero, inf) = spec.analytic_bounds();
    if kind == FunctionKind::Exponent && lo < 1.0 {
        let parameter = match spec {
            ExponentSpec::Constant { .. } => "value",
            ExponentSpec::RationalBump { b, .. } | ExponentSpec::ClampLog { b, .. } => {
                if *b < 0.0 {
                    "a + b"
                } else {
                    "a"
                }
            }
        };
        return Err(Error::ExponentBelowOne { parameter: parameter.to_string(), value: lo });
    }
    if kind == FunctionKind::Real && !(lo.is_finite() && hi.is_finite()) {
        return Err(Error::invalid("exponent", "real-class functions must be bounded"));
    }
    let (c0_log, cinf_log) = match *spec {
        ExponentSpec::Constant { .. } => (Some(0.0), Some(0.0)),
        // |b| / log(e+|x|) * log(e+|x|) = |b| exactly
        ExponentSpec::ClampLog { b, .. } => (None, Some(math::abs(b))),
        ExponentSpec::RationalBump { .. } => (None, None),
    };
    Ok(ExponentFunction {
        dim,
        kind,
        expr: Expr::Closed(*spec),
        p_minus: lo,
        p_plus: hi,
        p_zero: zero,
        p_infty: Some(inf),
        c0_log,
        cinf_log,
    })
}

fn check_dim(dim: usize) -> Result<()> {
    if (1..=crate::MAX_DIM).contains(&dim) {
        Ok(())
    } else {
        Err(Error::invalid("dim", "dimension must be 1, 2 or 3"))
    }
}

/// `coef * [lo, hi]`
fn scale_interval(c: f64, lo: f64, hi: f64) -> (f64, f64) {
    let (a, b) = (mul_ext(c, lo), mul_ext(c, hi));
    (a.min(b), a.max(b))
}

/// Multiplication where `0 * inf = 0`.
fn mul_ext(c: f64, v: f64) -> f64 {
    if c == 0.0 || v == 0.0 {
        0.0
    } else {
        c * v
    }
}

fn recip_interval(lo: f64, hi: f64) -> (f64, f64) {
    // assumes lo >= 0
    (1.0 / hi, 1.0 / lo)
}

impl ExponentFunction {
    /// Constant function; `value` may be `+inf` for the sup-norm exponent.
    pub fn constant(dim: usize, value: f64) -> Self {
        let kind = if value >= 1.0 { FunctionKind::Exponent } else { FunctionKind::Real };
        Self {
            dim,
            kind,
            expr: Expr::constant(value),
            p_minus: value,
            p_plus: value,
            p_zero: value,
            p_infty: Some(value),
            c0_log: Some(0.0),
            cinf_log: Some(0.0),
        }
    }

    /// Constant real-class function (a weight power, a shift).
    pub fn real_constant(dim: usize, value: f64) -> Self {
        let mut f = Self::constant(dim, value);
        f.kind = FunctionKind::Real;
        f
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> FunctionKind {
        self.kind
    }

    #[inline]
    pub fn eval(&self, x: &Point) -> f64 {
        self.expr.eval(x, self.dim)
    }

    pub fn p_minus(&self) -> f64 {
        self.p_minus
    }

    pub fn p_plus(&self) -> f64 {
        self.p_plus
    }

    pub fn p_zero(&self) -> f64 {
        self.p_zero
    }

    pub fn p_infty(&self) -> Option<f64> {
        self.p_infty
    }

    pub fn c0_log(&self) -> Option<f64> {
        self.c0_log
    }

    pub fn cinf_log(&self) -> Option<f64> {
        self.cinf_log
    }

    /// `Some(c)` when the function is identically `c` (including `+inf`).
    pub fn constant_value(&self) -> Option<f64> {
        if self.p_minus == self.p_plus {
            Some(self.p_minus)
        } else {
            None
        }
    }

    /// Membership in P: values in `[1, inf]`.
    pub fn in_p(&self) -> bool {
        self.kind == FunctionKind::Exponent && self.p_minus >= 1.0
    }

    /// Membership in P_b: `1 < p_- <= p_+ < inf`.
    pub fn in_p_b(&self) -> bool {
        self.in_p() && self.p_minus > 1.0 && self.p_plus < f64::INFINITY
    }

    /// Membership in P_inf: the limit at infinity exists.
    pub fn in_p_infty(&self) -> bool {
        self.in_p() && self.p_infty.is_some()
    }

    pub fn require_exponent(&self) -> Result<()> {
        if self.in_p() {
            Ok(())
        } else {
            Err(Error::NotAnExponent)
        }
    }

    /// Same values, tagged as real-class.
    pub fn as_real(&self) -> Self {
        let mut f = self.clone();
        f.kind = FunctionKind::Real;
        f
    }

    /// Reinterprets a real-class function as an exponent after checking the
    /// analytic lower bound.
    pub fn into_exponent(mut self) -> Result<Self> {
        if self.p_minus < 1.0 {
            return Err(Error::ExponentBelowOne { parameter: "p_minus".to_string(), value: self.p_minus });
        }
        self.kind = FunctionKind::Exponent;
        Ok(self)
    }

    /// `constant + sum coef_i * f_i`, tagged `kind`.
    pub fn affine(dim: usize, kind: FunctionKind, constant: f64, terms: &[(f64, &ExponentFunction)]) -> Result<Self> {
        check_dim(dim)?;
        let mut lo = constant;
        let mut hi = constant;
        let mut zero = constant;
        let mut inf = Some(constant);
        let mut exprs = Vec::with_capacity(terms.len());
        for &(c, f) in terms {
            if f.dim != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: f.dim });
            }
            let (a, b) = scale_interval(c, f.p_minus, f.p_plus);
            lo += a;
            hi += b;
            zero += mul_ext(c, f.p_zero);
            inf = match (inf, f.p_infty) {
                (Some(s), Some(v)) => Some(s + mul_ext(c, v)),
                _ => None,
            };
            exprs.push((c, f.expr.clone()));
        }
        if lo.is_nan() || hi.is_nan() {
            return Err(Error::invalid("affine", "indeterminate inf - inf"));
        }
        let expr = Expr::affine(constant, exprs);
        let out = Self::finish(dim, kind, expr, lo, hi, zero, inf);
        if kind == FunctionKind::Exponent && out.p_minus < 1.0 {
            return Err(Error::ExponentBelowOne { parameter: "affine combination".to_string(), value: out.p_minus });
        }
        Ok(out)
    }

    /// `c * f`
    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::affine(self.dim, self.kind, 0.0, &[(c, self)])
    }

    /// `1 / f` for a non-negative `f`.
    pub fn reciprocal(&self, kind: FunctionKind) -> Result<Self> {
        if self.p_minus < 0.0 {
            return Err(Error::invalid("reciprocal", "argument must be non-negative"));
        }
        let (lo, hi) = recip_interval(self.p_minus, self.p_plus);
        let out = Self::finish(
            self.dim,
            kind,
            Expr::reciprocal(self.expr.clone()),
            lo,
            hi,
            1.0 / self.p_zero,
            self.p_infty.map(|v| 1.0 / v),
        );
        if kind == FunctionKind::Exponent && out.p_minus < 1.0 {
            return Err(Error::ExponentBelowOne { parameter: "reciprocal".to_string(), value: out.p_minus });
        }
        Ok(out)
    }

    /// `x -> f(M x)` for invertible `M`. Bounds, origin value and the limit
    /// at infinity are unchanged.
    pub fn composed(&self, map: &Matrix) -> Result<Self> {
        if map.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: map.dim() });
        }
        map.inverse()?;
        let expr = match &self.expr {
            Expr::Closed(ExponentSpec::Constant { .. }) => self.expr.clone(),
            e => Expr::Composed { inner: Box::new(e.clone()), map: *map },
        };
        let mut out = self.clone();
        out.expr = expr;
        out.c0_log = None;
        out.cinf_log = None;
        if self.constant_value().is_some() {
            out.c0_log = Some(0.0);
            out.cinf_log = Some(0.0);
        }
        Ok(out)
    }

    fn finish(dim: usize, kind: FunctionKind, expr: Expr, lo: f64, hi: f64, zero: f64, inf: Option<f64>) -> Self {
        let constant = expr.constant_value();
        let (lo, hi, zero, inf) = match constant {
            Some(v) => (v, v, v, Some(v)),
            None => (lo, hi, zero, inf),
        };
        Self {
            dim,
            kind,
            expr,
            p_minus: lo,
            p_plus: hi,
            p_zero: zero,
            p_infty: inf,
            c0_log: constant.map(|_| 0.0),
            cinf_log: constant.map(|_| 0.0),
        }
    }
}

/// Unit directions used for sampling: +/- axes plus diagonals.
pub fn sample_directions(dim: usize) -> Vec<Point> {
    let mut out = Vec::new();
    for i in 0..dim {
        for s in [1.0, -1.0] {
            let mut u = [0.0; 3];
            u[i] = s;
            out.push(u);
        }
    }
    if dim >= 2 {
        let c = 1.0 / math::sqrt(dim as f64);
        let signs: &[[f64; 3]] = if dim == 2 {
            &[[1.0, 1.0, 0.0], [1.0, -1.0, 0.0], [-1.0, 1.0, 0.0], [-1.0, -1.0, 0.0]]
        } else {
            &[[1.0, 1.0, 1.0], [1.0, -1.0, 1.0], [-1.0, 1.0, -1.0], [-1.0, -1.0, -1.0]]
        };
        for s in signs {
            out.push([s[0] * c, s[1] * c, s[2] * c]);
        }
    }
    out
}

/// Radii `2^{j / per_octave}` for `j` in `[j_min * per_octave, j_max * per_octave]`.
pub fn log_sweep(j_min: i32, j_max: i32, per_octave: u32) -> Vec<f64> {
    let per = per_octave.max(1) as i32;
    (j_min * per..=j_max * per).map(|j| math::powf(2.0, j as f64 / per as f64)).collect()
}

/// Sample points `r u` over the sweep and the sampling directions.
pub fn sample_points(dim: usize, radius_sweep: &[f64]) -> Vec<Point> {
    let dirs = sample_directions(dim);
    let mut pts = Vec::with_capacity(dirs.len() * radius_sweep.len());
    for &r in radius_sweep {
        for u in &dirs {
            pts.push([u[0] * r, u[1] * r, u[2] * r]);
        }
    }
    pts
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassReport {
    pub in_p: bool,
    pub in_p_b: bool,
    pub in_p_infty: bool,
    /// `sup |p(x) - p(0)| log(e + 1/|x|)` over the samples.
    pub c0_log_estimate: f64,
    /// `sup |p(x) - p_inf| log(e + |x|)` over the samples; absent without a limit.
    pub cinf_log_estimate: Option<f64>,
}

/// Classifies `p` and estimates its log-Hoelder moduli along `radius_sweep`.
pub fn classify_exponent(p: &ExponentFunction, radius_sweep: &[f64]) -> Result<ClassReport> {
    if radius_sweep.is_empty() {
        return Err(Error::invalid("radius_sweep", "must be non-empty"));
    }
    let e = core::f64::consts::E;
    let mut c0: f64 = 0.0;
    let mut cinf: f64 = 0.0;
    for x in sample_points(p.dim, radius_sweep) {
        let r = math::norm(&x, p.dim);
        let v = p.eval(&x);
        let d0 = math::abs(v - p.p_zero);
        if d0 > 0.0 {
            c0 = c0.max(d0 * math::ln(e + 1.0 / r));
        }
        if let Some(inf) = p.p_infty {
            let di = math::abs(v - inf);
            if di > 0.0 {
                cinf = cinf.max(di * math::ln(e + r));
            }
        }
    }
    Ok(ClassReport {
        in_p: p.in_p(),
        in_p_b: p.in_p_b(),
        in_p_infty: p.in_p_infty(),
        c0_log_estimate: c0,
        cinf_log_estimate: p.p_infty.map(|_| cinf),
    })
}

/// Inputs of the composite-exponent algebra shared by the Herz-type theorems.
#[derive(Debug, Clone, Copy)]
pub struct CompositionInput<'a> {
    pub dim: usize,
    pub betas: &'a [f64],
    pub lambdas: &'a [f64],
    pub gammas: &'a [f64],
    pub r: &'a [ExponentFunction],
    pub q: &'a [ExponentFunction],
    pub alpha: &'a [ExponentFunction],
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComposedExponents {
    /// `sum beta_i`
    pub beta: f64,
    /// `sum lambda_i`
    pub lambda: f64,
    /// `sum gamma_i + sum gamma_i / r_i(.)`
    pub gamma: ExponentFunction,
    /// `1/q = sum 1/q_i + sum 1/r_i`
    pub q: ExponentFunction,
    /// `sum alpha_i - sum beta_i - sum (gamma_i + n) / r_i(.)`
    pub alpha_star: ExponentFunction,
    /// `sum alpha_i - sum (gamma_i + n) / r_i`, only when every `r_i` is constant.
    pub alpha_star_star: Option<ExponentFunction>,
}

/// Builds the composite exponents and parameters of the Herz-type theorems.
///
/// `q` is checked pointwise over `samples`: `1/q(x) > 1` anywhere means the
/// scenario is inconsistent and is reported as an error.
pub fn compose_theorem_exponents(input: &CompositionInput<'_>, samples: &[Point]) -> Result<ComposedExponents> {
    let m = input.q.len();
    let dim = input.dim;
    check_dim(dim)?;
    for (name, len) in [
        ("beta", input.betas.len()),
        ("lambda", input.lambdas.len()),
        ("gamma", input.gammas.len()),
        ("r", input.r.len()),
        ("alpha", input.alpha.len()),
    ] {
        if len != m {
            return Err(Error::invalid(name, format!("expected {m} entries, found {len}")));
        }
    }
    let n = dim as f64;
    let beta: f64 = input.betas.iter().sum();
    let lambda: f64 = input.lambdas.iter().sum();

    let recip_r: Vec<ExponentFunction> =
        input.r.iter().map(|r| r.reciprocal(FunctionKind::Real)).collect::<Result<_>>()?;
    let recip_q: Vec<ExponentFunction> =
        input.q.iter().map(|q| q.reciprocal(FunctionKind::Real)).collect::<Result<_>>()?;

    let gamma_terms: Vec<(f64, &ExponentFunction)> =
        input.gammas.iter().zip(&recip_r).map(|(&g, rr)| (g, rr)).collect();
    let gamma = ExponentFunction::affine(dim, FunctionKind::Real, input.gammas.iter().sum(), &gamma_terms)?;

    let inv_q_terms: Vec<(f64, &ExponentFunction)> =
        recip_q.iter().chain(recip_r.iter()).map(|f| (1.0, f)).collect();
    let inv_q = ExponentFunction::affine(dim, FunctionKind::Real, 0.0, &inv_q_terms)?;
    for x in samples {
        let v = inv_q.eval(x);
        if v > 1.0 + 1e-12 {
            return Err(Error::HypothesisViolation {
                condition: "q in P",
                witness: *x,
                detail: format!("composed 1/q = {v} > 1; q(.) leaves the exponent class"),
            });
        }
    }
    if inv_q.p_plus > 1.0 + 1e-12 && samples.is_empty() {
        return Err(Error::ExponentBelowOne { parameter: "q".to_string(), value: 1.0 / inv_q.p_plus });
    }
    let mut q = inv_q.reciprocal(FunctionKind::Real)?;
    q.kind = FunctionKind::Exponent;
    if q.p_minus < 1.0 {
        // interval bounds are conservative for sums of several variable terms;
        // the sampled check above is the authoritative one
        q.p_minus = 1.0;
    }

    let mut star_terms: Vec<(f64, &ExponentFunction)> = input.alpha.iter().map(|a| (1.0, a)).collect();
    for (g, rr) in input.gammas.iter().zip(&recip_r) {
        star_terms.push((-(g + n), rr));
    }
    let alpha_star = ExponentFunction::affine(dim, FunctionKind::Real, -beta, &star_terms)?;

    let alpha_star_star = if input.r.iter().all(|r| r.constant_value().is_some()) {
        Some(ExponentFunction::affine(dim, FunctionKind::Real, 0.0, &star_terms)?)
    } else {
        None
    };

    Ok(ComposedExponents { beta, lambda, gamma, q, alpha_star, alpha_star_star })
}

/// Parameters of the central Morrey theorems (all scalar except `q`).
#[derive(Debug, Clone, PartialEq)]
pub struct CentralComposition {
    /// `sum beta_i`
    pub beta: f64,
    /// `sum alpha_i + sum alpha_i / r_i`
    pub alpha: f64,
    /// `1/q = sum 1/q_i + sum 1/r_i`
    pub q: ExponentFunction,
}

pub fn compose_central_parameters(
    dim: usize,
    betas: &[f64],
    alphas: &[f64],
    r: &[f64],
    q: &[ExponentFunction],
) -> Result<CentralComposition> {
    let m = q.len();
    if betas.len() != m || alphas.len() != m || r.len() != m {
        return Err(Error::invalid("central parameters", "beta, alpha, r and q must have equal length"));
    }
    let beta = betas.iter().sum();
    let alpha = alphas.iter().sum::<f64>() + alphas.iter().zip(r).map(|(a, r)| a / r).sum::<f64>();
    let recip_q: Vec<ExponentFunction> =
        q.iter().map(|q| q.reciprocal(FunctionKind::Real)).collect::<Result<_>>()?;
    let terms: Vec<(f64, &ExponentFunction)> = recip_q.iter().map(|f| (1.0, f)).collect();
    let inv_q = ExponentFunction::affine(dim, FunctionKind::Real, r.iter().map(|r| 1.0 / r).sum(), &terms)?;
    let q = inv_q.reciprocal(FunctionKind::Real)?.into_exponent()?;
    Ok(CentralComposition { beta, alpha, q })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThetaVariant {
    /// `1/theta = 1/q(A^{-1} x) - 1/(zeta q(x))`
    Theta,
    /// `zeta = 1`: `1/theta_1 = 1/q(A^{-1} x) - 1/q(x)`
    ThetaOne,
}

/// The exponent `theta_i(t, .)` built from `q_i` and the matrix `A_i(t)`.
///
/// The inclusion hypothesis `q(A^{-1} x) <= zeta q(x)` is checked over
/// `samples`; a violation is returned with its witness point.
pub fn theta_exponent(
    q: &ExponentFunction,
    a: &Matrix,
    zeta: f64,
    variant: ThetaVariant,
    samples: &[Point],
) -> Result<ExponentFunction> {
    q.require_exponent()?;
    if !(zeta > 0.0) {
        return Err(Error::invalid("zeta", "must be positive"));
    }
    let zeta = match variant {
        ThetaVariant::Theta => zeta,
        ThetaVariant::ThetaOne => 1.0,
    };
    let inverse = a.inverse()?;
    let condition = match variant {
        ThetaVariant::Theta => "DKnhung",
        ThetaVariant::ThetaOne => "DKnhung1",
    };
    for x in samples {
        let moved = q.eval(&inverse.mul_vec(x));
        let bound = zeta * q.eval(x);
        if moved > bound * (1.0 + THETA_SLACK) {
            return Err(Error::HypothesisViolation {
                condition,
                witness: *x,
                detail: format!("q(A^-1 x) = {moved} > zeta q(x) = {bound}"),
            });
        }
    }
    // interval bounds on 1/theta
    let inv_lo = (1.0 / q.p_plus - 1.0 / (zeta * q.p_minus)).max(0.0);
    let inv_hi = (1.0 / q.p_minus - 1.0 / (zeta * q.p_plus)).max(0.0);
    let zero = {
        let d = (1.0 / q.p_zero) * (1.0 - 1.0 / zeta);
        if d > 0.0 { 1.0 / d } else { f64::INFINITY }
    };
    let infty = q.p_infty.map(|v| {
        let d = (1.0 / v) * (1.0 - 1.0 / zeta);
        if d > 0.0 { 1.0 / d } else { f64::INFINITY }
    });
    let expr = match q.constant_value() {
        Some(c) => {
            let d = (1.0 / c) * (1.0 - 1.0 / zeta);
            Expr::constant(if d > THETA_SLACK / c { 1.0 / d } else { f64::INFINITY })
        }
        None => Expr::Theta { q: Box::new(q.expr.clone()), inverse, zeta },
    };
    let out = ExponentFunction::finish(
        q.dim,
        FunctionKind::Exponent,
        expr,
        1.0 / inv_hi,
        1.0 / inv_lo,
        zero,
        infty,
    );
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bump(a: f64, b: f64) -> ExponentFunction {
        make_exponent(1, &ExponentSpec::RationalBump { a, b }, FunctionKind::Exponent).unwrap()
    }

    #[test]
    fn constant_exponent_bounds() {
        let p = make_exponent(1, &ExponentSpec::Constant { value: 2.0 }, FunctionKind::Exponent).unwrap();
        assert_eq!(p.eval(&[0.3, 0.0, 0.0]), 2.0);
        assert_eq!((p.p_minus(), p.p_plus(), p.p_zero(), p.p_infty()), (2.0, 2.0, 2.0, Some(2.0)));
    }

    #[test]
    fn rational_bump_bounds_match_dense_sampling() {
        let p = bump(2.0, 1.0);
        assert_eq!((p.p_zero(), p.p_infty(), p.p_minus(), p.p_plus()), (3.0, Some(2.0), 2.0, 3.0));
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for j in -4000..=4000 {
            let r = 2f64.powf(j as f64 / 100.0);
            let v = p.eval(&[r, 0.0, 0.0]);
            lo = lo.min(v);
            hi = hi.max(v);
            assert!(v >= p.p_minus() && v <= p.p_plus());
        }
        assert!((hi - 3.0).abs() < 1e-10 && (lo - 2.0).abs() < 1e-10);
    }

    #[test]
    fn exponent_one_is_in_p_but_not_p_b() {
        let p = make_exponent(1, &ExponentSpec::Constant { value: 1.0 }, FunctionKind::Exponent).unwrap();
        assert_eq!(p.p_minus(), 1.0);
        assert!(p.in_p() && !p.in_p_b());
        let report = classify_exponent(&p, &log_sweep(-4, 4, 1)).unwrap();
        assert!(report.in_p && !report.in_p_b);
    }

    #[test]
    fn below_one_rejected_with_parameter() {
        let err = make_exponent(1, &ExponentSpec::RationalBump { a: 0.5, b: 1.0 }, FunctionKind::Exponent)
            .unwrap_err();
        assert_eq!(err, Error::ExponentBelowOne { parameter: "a".into(), value: 0.5 });
        let err = make_exponent(1, &ExponentSpec::Constant { value: 0.9 }, FunctionKind::Exponent).unwrap_err();
        assert!(matches!(err, Error::ExponentBelowOne { ref parameter, .. } if parameter == "value"));
        // the same spec is fine as a real-class function
        assert!(make_exponent(1, &ExponentSpec::Constant { value: 0.9 }, FunctionKind::Real).is_ok());
    }

    #[test]
    fn classification_of_catalog() {
        let sweep = log_sweep(-20, 20, 2);
        let c = classify_exponent(&ExponentFunction::constant(1, 2.0), &sweep).unwrap();
        assert!(c.in_p_b && c.in_p_infty);
        assert_eq!((c.c0_log_estimate, c.cinf_log_estimate), (0.0, Some(0.0)));
        let b = classify_exponent(&bump(2.0, 1.0), &sweep).unwrap();
        assert!(b.in_p_b && b.in_p_infty);
        assert!(b.c0_log_estimate > 0.0 && b.c0_log_estimate < 2.0);
    }

    #[test]
    fn composition_examples() {
        let q4 = ExponentFunction::constant(1, 4.0);
        let zero = ExponentFunction::real_constant(1, 0.0);
        let c = compose_theorem_exponents(
            &CompositionInput {
                dim: 1,
                betas: &[1.0, 0.5],
                lambdas: &[0.5, 0.25],
                gammas: &[0.0, 0.0],
                r: &[q4.clone(), q4.clone()],
                q: &[q4.clone(), q4.clone()],
                alpha: &[zero.clone(), zero.clone()],
            },
            &[],
        )
        .unwrap();
        assert_eq!(c.q.constant_value(), Some(1.0));
        assert_eq!((c.beta, c.lambda), (1.5, 0.75));

        let c = compose_theorem_exponents(
            &CompositionInput {
                dim: 1,
                betas: &[1.0],
                lambdas: &[0.5],
                gammas: &[0.0],
                r: &[ExponentFunction::constant(1, 2.0)],
                q: &[q4.clone()],
                alpha: &[ExponentFunction::real_constant(1, 1.0)],
            },
            &[],
        )
        .unwrap();
        assert_eq!(c.alpha_star.constant_value(), Some(-0.5));
        assert_eq!((c.beta, c.lambda), (1.0, 0.5));
    }

    #[test]
    fn composition_identity_when_offsets_vanish() {
        let q = bump(2.0, 1.0);
        let alpha = make_exponent(1, &ExponentSpec::ClampLog { a: 0.5, b: 0.25 }, FunctionKind::Real).unwrap();
        let c = compose_theorem_exponents(
            &CompositionInput {
                dim: 1,
                betas: &[0.0],
                lambdas: &[0.0],
                gammas: &[0.0],
                r: &[ExponentFunction::constant(1, f64::INFINITY)],
                q: &[q.clone()],
                alpha: &[alpha.clone()],
            },
            &[],
        )
        .unwrap();
        for x in sample_points(1, &log_sweep(-6, 6, 1)) {
            assert_eq!(c.q.eval(&x), q.eval(&x));
            assert_eq!(c.alpha_star.eval(&x), alpha.eval(&x));
            assert_eq!(c.gamma.eval(&x), 0.0);
        }
    }

    #[test]
    fn composition_rejects_q_below_one() {
        let q2 = ExponentFunction::constant(1, 2.0);
        let zero = ExponentFunction::real_constant(1, 0.0);
        let err = compose_theorem_exponents(
            &CompositionInput {
                dim: 1,
                betas: &[1.0, 1.0],
                lambdas: &[0.0, 0.0],
                gammas: &[0.0, 0.0],
                r: &[q2.clone(), q2.clone()],
                q: &[q2.clone(), q2.clone()],
                alpha: &[zero.clone(), zero],
            },
            &sample_points(1, &[1.0]),
        )
        .unwrap_err();
        assert!(matches!(err, Error::HypothesisViolation { condition: "q in P", .. }));
    }

    #[test]
    fn theta_examples() {
        let q2 = ExponentFunction::constant(1, 2.0);
        let id = Matrix::identity(1);
        let t = theta_exponent(&q2, &id, 1.0, ThetaVariant::Theta, &[]).unwrap();
        assert_eq!(t.constant_value(), Some(f64::INFINITY));
        let t = theta_exponent(&q2, &id, 2.0, ThetaVariant::Theta, &[]).unwrap();
        assert_eq!(t.constant_value(), Some(4.0));
        // the theta-one variant ignores zeta
        let t = theta_exponent(&q2, &id, 2.0, ThetaVariant::ThetaOne, &[]).unwrap();
        assert_eq!(t.constant_value(), Some(f64::INFINITY));
    }

    #[test]
    fn theta_of_bump_matches_pointwise_formula() {
        let q = bump(2.0, 1.0);
        let a = Matrix::scalar(1, 0.5);
        let samples = sample_points(1, &log_sweep(-5, 5, 1));
        let t = theta_exponent(&q, &a, 1.0, ThetaVariant::Theta, &samples).unwrap();
        for (i, x) in [0.1, 0.25, 0.5, 0.9, 1.0, 1.5, 3.0, 7.0, 20.0, -2.0].iter().enumerate() {
            let p = [*x, 0.0, 0.0];
            let expected = 1.0 / (1.0 / q.eval(&[2.0 * x, 0.0, 0.0]) - 1.0 / q.eval(&p));
            let got = t.eval(&p);
            assert!((got - expected).abs() <= 1e-12 * expected, "sample {i}: {got} vs {expected}");
            assert!(got >= t.p_minus() && got <= t.p_plus());
        }
    }

    #[test]
    fn theta_detects_inclusion_violation() {
        // q decreases in |x|, so q(x/2) > q(x)
        let q = bump(2.0, 1.0);
        let a = Matrix::scalar(1, 2.0);
        let err = theta_exponent(&q, &a, 1.0, ThetaVariant::Theta, &sample_points(1, &[1.0])).unwrap_err();
        assert!(matches!(err, Error::HypothesisViolation { condition: "DKnhung", .. }));
    }
}
