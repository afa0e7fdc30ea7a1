//! Pointwise evaluation of multilinear Hausdorff operators, their commutators
//! and the Hardy and Hardy-Cesaro special cases.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;
use core::cell::RefCell;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flags::Flags;
use crate::math;
use crate::matrixfam::{
    frobenius_norm, kernel_nodes, kernel_nodes_split, reduce_shells, shell_contributions, KernelSpec, Matrix,
    MatrixFamily, ScalarMap, TNode,
};
use crate::quadrature::{gauss_legendre_unit, QuadratureGrid, RealFunction, TestFunction};
use crate::Point;

/// `H^b_{Phi,A}(f)` with its `t`-quadrature precomputed.
#[derive(Debug, Clone)]
pub struct OperatorSpec {
    dim: usize,
    kernel: KernelSpec,
    families: Vec<MatrixFamily>,
    symbols: Option<Vec<TestFunction>>,
    inputs: Vec<TestFunction>,
    t_grid: QuadratureGrid,
    nodes: Vec<TNode>,
    matrices: Vec<Vec<Matrix>>,
}

impl OperatorSpec {
    pub fn new(
        kernel: KernelSpec,
        families: Vec<MatrixFamily>,
        symbols: Option<Vec<TestFunction>>,
        inputs: Vec<TestFunction>,
        t_grid: QuadratureGrid,
    ) -> Result<Self> {
        let dim = t_grid.dim();
        let m = families.len();
        if m == 0 {
            return Err(Error::invalid("families", "arity must be at least 1"));
        }
        if inputs.len() != m {
            return Err(Error::invalid("inputs", format!("expected {m} inputs, found {}", inputs.len())));
        }
        if let Some(b) = &symbols {
            if b.len() != m {
                return Err(Error::invalid("symbols", format!("expected {m} symbols, found {}", b.len())));
            }
        }
        for f in &families {
            f.check(dim)?;
        }
        for f in inputs.iter().chain(symbols.iter().flatten()) {
            if f.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: f.dim() });
            }
        }
        let nodes = kernel_nodes(&kernel, &t_grid)?;
        let matrices = eval_checked(&families, &nodes, dim)?;
        Ok(Self { dim, kernel, families, symbols, inputs, t_grid, nodes, matrices })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn arity(&self) -> usize {
        self.families.len()
    }

    pub fn kernel(&self) -> &KernelSpec {
        &self.kernel
    }

    pub fn families(&self) -> &[MatrixFamily] {
        &self.families
    }

    pub fn symbols(&self) -> Option<&[TestFunction]> {
        self.symbols.as_deref()
    }

    pub fn inputs(&self) -> &[TestFunction] {
        &self.inputs
    }

    pub fn t_grid(&self) -> &QuadratureGrid {
        &self.t_grid
    }

    /// Same operator on new inputs; the `t`-quadrature is reused.
    pub fn with_inputs(&self, inputs: Vec<TestFunction>) -> Result<Self> {
        if inputs.len() != self.arity() || inputs.iter().any(|f| f.dim() != self.dim) {
            return Err(Error::invalid("inputs", "arity or dimension mismatch"));
        }
        Ok(Self { inputs, ..self.clone() })
    }

    /// Same operator with new symbols; the `t`-quadrature is reused.
    pub fn with_symbols(&self, symbols: Option<Vec<TestFunction>>) -> Result<Self> {
        if let Some(b) = &symbols {
            if b.len() != self.arity() || b.iter().any(|f| f.dim() != self.dim) {
                return Err(Error::invalid("symbols", "arity or dimension mismatch"));
            }
        }
        Ok(Self { symbols, ..self.clone() })
    }

    /// Radii in `t`-space where `|A_i(t) x|` crosses a break of `f_i` or
    /// `b_i`. Only families with `|A(t) x| = g(|t|) |x|` contribute.
    fn t_breaks(&self, x: &Point) -> Vec<f64> {
        let rx = math::norm(x, self.dim);
        let mut out = Vec::new();
        if rx == 0.0 {
            return out;
        }
        for (i, fam) in self.families.iter().enumerate() {
            let (factor, power) = match fam {
                MatrixFamily::Scalar { s } | MatrixFamily::RotationScalar { s, .. } => match *s {
                    ScalarMap::Norm { factor, power } => (factor, power),
                    ScalarMap::Coordinate { factor, power, .. } if self.dim == 1 => (factor, power),
                    _ => continue,
                },
                _ => continue,
            };
            if factor == 0.0 || power == 0.0 {
                continue;
            }
            let mut radii = self.inputs[i].radial_breaks();
            let sr = self.inputs[i].support_radius();
            if sr.is_finite() {
                radii.push(sr);
            }
            if let Some(b) = &self.symbols {
                radii.extend(b[i].radial_breaks());
            }
            for r in radii {
                if r > 0.0 {
                    out.push(math::powf(r / (math::abs(factor) * rx), 1.0 / power));
                }
            }
        }
        out.sort_by(f64::total_cmp);
        out.dedup();
        out
    }

    /// Conservative radius beyond which the output vanishes:
    /// `max_t min_i ||A_i(t)^{-1}|| R_i` with `R_i` the support radius of `f_i`.
    pub fn output_support_radius(&self) -> f64 {
        if self.nodes.is_empty() {
            return 0.0;
        }
        let radii: Vec<f64> = self.inputs.iter().map(|f| f.support_radius()).collect();
        if radii.iter().all(|r| !r.is_finite()) {
            return f64::INFINITY;
        }
        let mut best: f64 = 0.0;
        for mats in &self.matrices {
            let mut bound = f64::INFINITY;
            for (a, r) in mats.iter().zip(&radii) {
                if r.is_finite() {
                    let inv = match a.inverse() {
                        Ok(inv) => inv,
                        Err(_) => return f64::INFINITY,
                    };
                    bound = bound.min(frobenius_norm(&inv) * r);
                }
            }
            best = best.max(bound);
        }
        best
    }
}

fn eval_checked(families: &[MatrixFamily], nodes: &[TNode], dim: usize) -> Result<Vec<Vec<Matrix>>> {
    let mut out = Vec::with_capacity(nodes.len());
    for n in nodes {
        let mut mats = Vec::with_capacity(families.len());
        for f in families {
            let a = f.eval(&n.t, dim);
            let d = a.det();
            if d == 0.0 || !d.is_finite() {
                return Err(Error::SingularMatrix);
            }
            mats.push(a);
        }
        out.push(mats);
    }
    Ok(out)
}

/// Integrand of the operator at `x` for one `t`-node, without the kernel weight.
fn integrand(spec: &OperatorSpec, x: &Point, mats: &[Matrix]) -> Result<f64> {
    let mut v = 1.0;
    for (i, a) in mats.iter().enumerate() {
        let y = a.mul_vec(x);
        if let Some(b) = &spec.symbols {
            let gap = b[i].difference(x, &y);
            if gap == 0.0 {
                return Ok(0.0);
            }
            v *= gap;
        }
        let f = spec.inputs[i].eval(&y)?;
        if f == 0.0 {
            return Ok(0.0);
        }
        v *= f;
    }
    Ok(v)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApplyReport {
    pub value: f64,
    pub flags: Flags,
}

/// `H(f)(x)` (or the commutator when symbols are present).
pub fn apply(spec: &OperatorSpec, x: &Point) -> Result<f64> {
    Ok(apply_report(spec, x)?.value)
}

/// As [`apply`], with TRUNCATION_SUSPECT when an edge `t`-shell is not negligible.
pub fn apply_report(spec: &OperatorSpec, x: &Point) -> Result<ApplyReport> {
    if x.iter().any(|c| !c.is_finite()) {
        return Err(Error::invalid("x", "must be finite"));
    }
    if spec.nodes.is_empty() {
        return Ok(ApplyReport { value: 0.0, flags: Flags::new() });
    }
    if let Some(b) = &spec.symbols {
        if b.iter().any(|b| b.is_constant()) {
            return Ok(ApplyReport { value: 0.0, flags: Flags::new() });
        }
    }
    let breaks = spec.t_breaks(x);
    let contributions = if breaks.is_empty() {
        let mut i = 0;
        shell_contributions(&spec.nodes, &spec.t_grid, |_| {
            let v = integrand(spec, x, &spec.matrices[i]);
            i += 1;
            v
        })?
    } else {
        let nodes = kernel_nodes_split(&spec.kernel, &spec.t_grid, &breaks)?;
        let matrices = eval_checked(&spec.families, &nodes, spec.dim)?;
        let mut i = 0;
        shell_contributions(&nodes, &spec.t_grid, |_| {
            let v = integrand(spec, x, &matrices[i]);
            i += 1;
            v
        })?
    };
    let sum = reduce_shells(&contributions);
    if sum.divergent {
        return Err(Error::infinite(format!("t-integral at x = {:?} does not decay across the edge shells", x)));
    }
    Ok(ApplyReport { value: sum.value, flags: sum.flags })
}

/// The operator output as a function of `x`, memoized per point.
///
/// The cache is single-threaded; concurrent callers each hold their own
/// instance, which recomputes identical values.
pub struct OperatorOutput<'a> {
    spec: &'a OperatorSpec,
    support: f64,
    cache: RefCell<BTreeMap<[u64; 3], f64>>,
}

impl<'a> OperatorOutput<'a> {
    pub fn new(spec: &'a OperatorSpec) -> Self {
        Self { spec, support: spec.output_support_radius(), cache: RefCell::new(BTreeMap::new()) }
    }

    pub fn evaluations(&self) -> usize {
        self.cache.borrow().len()
    }
}

impl RealFunction for OperatorOutput<'_> {
    fn dim(&self) -> usize {
        self.spec.dim
    }

    fn eval(&self, x: &Point) -> Result<f64> {
        let key = [x[0].to_bits(), x[1].to_bits(), x[2].to_bits()];
        if let Some(v) = self.cache.borrow().get(&key) {
            return Ok(*v);
        }
        let v = apply(self.spec, x)?;
        self.cache.borrow_mut().insert(key, v);
        Ok(v)
    }

    fn support_radius(&self) -> f64 {
        self.support
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpecialKind {
    /// `int_{[0,1]^m} prod f_i(t_i x) prod (b_i(x) - b_i(t_i x)) w(t) dt`
    Hardy14,
    /// `int_{[0,1]^n} prod f_i(s_i(t) x) prod (b_i(x) - b_i(s_i(t) x)) psi(t) dt`
    HardyCesaro15,
}

/// Composite Gauss-Legendre rule per axis of the unit cube, graded towards 0
/// by dyadic panels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CubeRule {
    /// Panels `[2^{-j-1}, 2^{-j}]` for `j < levels`, plus `[0, 2^{-levels}]`.
    pub levels: u32,
    pub nodes: usize,
}

impl Default for CubeRule {
    fn default() -> Self {
        Self { levels: 24, nodes: 10 }
    }
}

impl CubeRule {
    pub fn axis(&self) -> Vec<(f64, f64)> {
        self.axis_split(&[])
    }

    /// As [`CubeRule::axis`], with panels also split at `breaks` inside `(0, 1)`.
    pub fn axis_split(&self, breaks: &[f64]) -> Vec<(f64, f64)> {
        let gl = gauss_legendre_unit(self.nodes);
        let mut ends = Vec::with_capacity(self.levels as usize + 2 + breaks.len());
        ends.push(0.0);
        for j in (0..=self.levels as i32).rev() {
            ends.push(math::exp2i(-j));
        }
        ends.extend(breaks.iter().copied().filter(|&b| b > 0.0 && b < 1.0));
        ends.sort_by(f64::total_cmp);
        ends.dedup();
        let mut out = Vec::with_capacity(gl.len() * ends.len());
        for pair in ends.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            for &(x, w) in &gl {
                out.push((a + (b - a) * x, (b - a) * w));
            }
        }
        out
    }
}

/// A special-case operator on the unit cube `[0, 1]^d`.
#[derive(Debug, Clone)]
pub struct SpecialOperator {
    pub kind: SpecialKind,
    /// Dimension of `x`.
    pub dim: usize,
    /// Dimension of the cube.
    pub cube_dim: usize,
    /// `w` for the Hardy case, `psi` for the Hardy-Cesaro case; only its
    /// values on the cube are used.
    pub weight: KernelSpec,
    pub scalars: Vec<ScalarMap>,
    pub inputs: Vec<TestFunction>,
    pub symbols: Option<Vec<TestFunction>>,
    pub rule: CubeRule,
}

impl SpecialOperator {
    /// Hardy-type operator with `s_i(t) = t_i`, `m = n`.
    pub fn hardy(weight: KernelSpec, inputs: Vec<TestFunction>, symbols: Option<Vec<TestFunction>>) -> Result<Self> {
        let m = inputs.len();
        let dim = inputs.first().map_or(0, |f| f.dim());
        if m != dim {
            return Err(Error::invalid("inputs", "the Hardy form needs arity equal to the dimension"));
        }
        let scalars = (0..m).map(|i| ScalarMap::Coordinate { index: i, factor: 1.0, power: 1.0 }).collect();
        let out = Self { kind: SpecialKind::Hardy14, dim, cube_dim: m, weight, scalars, inputs, symbols, rule: CubeRule::default() };
        out.check()?;
        Ok(out)
    }

    /// Hardy-Cesaro operator with `t` in `[0, 1]^n`.
    pub fn hardy_cesaro(
        weight: KernelSpec,
        scalars: Vec<ScalarMap>,
        inputs: Vec<TestFunction>,
        symbols: Option<Vec<TestFunction>>,
    ) -> Result<Self> {
        let dim = inputs.first().map_or(0, |f| f.dim());
        let out = Self {
            kind: SpecialKind::HardyCesaro15,
            dim,
            cube_dim: dim,
            weight,
            scalars,
            inputs,
            symbols,
            rule: CubeRule::default(),
        };
        out.check()?;
        Ok(out)
    }

    fn check(&self) -> Result<()> {
        let m = self.inputs.len();
        if m == 0 || self.scalars.len() != m {
            return Err(Error::invalid("scalars", "need one scalar map per input"));
        }
        if !(1..=crate::MAX_DIM).contains(&self.cube_dim) {
            return Err(Error::invalid("cube_dim", "must be 1, 2 or 3"));
        }
        if let Some(b) = &self.symbols {
            if b.len() != m {
                return Err(Error::invalid("symbols", "need one symbol per input"));
            }
        }
        for f in self.inputs.iter().chain(self.symbols.iter().flatten()) {
            if f.dim() != self.dim {
                return Err(Error::DimensionMismatch { expected: self.dim, found: f.dim() });
            }
        }
        for s in &self.scalars {
            if let ScalarMap::Coordinate { index, .. } = s {
                if *index >= self.cube_dim {
                    return Err(Error::invalid("scalars", "coordinate index outside the cube"));
                }
            }
        }
        self.weight.check(self.cube_dim)
    }

    /// Points of `(0, 1)` where a one-dimensional integrand has a kink or jump.
    fn t_breaks(&self, x: &Point) -> Vec<f64> {
        let rx = math::norm(x, self.dim);
        let mut out = Vec::new();
        if rx == 0.0 {
            return out;
        }
        for (i, s) in self.scalars.iter().enumerate() {
            let (factor, power) = match *s {
                ScalarMap::Norm { factor, power } | ScalarMap::Coordinate { factor, power, .. } => (factor, power),
                _ => continue,
            };
            if factor == 0.0 || power == 0.0 {
                continue;
            }
            let mut radii = self.inputs[i].radial_breaks();
            radii.push(self.inputs[i].support_radius());
            if let Some(b) = &self.symbols {
                radii.extend(b[i].radial_breaks());
            }
            for r in radii.into_iter().filter(|r| r.is_finite() && *r > 0.0) {
                out.push(math::powf(r / (math::abs(factor) * rx), 1.0 / power));
            }
        }
        out
    }

    fn weight_on_cube(&self, t: &Point) -> f64 {
        match &self.weight {
            KernelSpec::PowerCube { coefficient, norm_power, coord_powers } => {
                let mut v = *coefficient;
                if *norm_power != 0.0 {
                    v *= math::powf(math::norm(t, self.cube_dim), *norm_power);
                }
                for (i, &e) in coord_powers.iter().enumerate() {
                    if e != 0.0 {
                        v *= math::powf(t[i], e);
                    }
                }
                v
            }
            other => other.eval(t, self.cube_dim),
        }
    }

    /// Direct tensor-product quadrature on the cube.
    pub fn apply(&self, x: &Point) -> Result<f64> {
        if self.weight.is_zero() {
            return Ok(0.0);
        }
        if let Some(b) = &self.symbols {
            if b.iter().any(|b| b.is_constant()) {
                return Ok(0.0);
            }
        }
        let d = self.cube_dim;
        let axis = if d == 1 { self.rule.axis_split(&self.t_breaks(x)) } else { self.rule.axis() };
        let n = axis.len();
        let total = n.pow(d as u32);
        let mut sum = 0.0;
        let mut idx = [0usize; 3];
        for _ in 0..total {
            let mut t = [0.0; 3];
            let mut w = 1.0;
            for j in 0..d {
                t[j] = axis[idx[j]].0;
                w *= axis[idx[j]].1;
            }
            let mut v = self.weight_on_cube(&t);
            for (i, s) in self.scalars.iter().enumerate() {
                if v == 0.0 {
                    break;
                }
                let sv = s.eval(&t, d);
                let y = [sv * x[0], sv * x[1], sv * x[2]];
                if let Some(b) = &self.symbols {
                    v *= b[i].difference(x, &y);
                }
                v *= self.inputs[i].eval(&y)?;
            }
            if !v.is_finite() {
                return Err(Error::NonFiniteValue { node: t, value: v });
            }
            sum += v * w;
            for j in 0..d {
                idx[j] += 1;
                if idx[j] < n {
                    break;
                }
                idx[j] = 0;
            }
        }
        Ok(sum)
    }

    /// The same operator written as a general Hausdorff operator:
    /// `Phi(t) = |t|^d w(t) chi_cube(t)` and `A_i(t) = s_i(t) I`.
    pub fn general_form(&self, t_grid: QuadratureGrid) -> Result<OperatorSpec> {
        if t_grid.dim() != self.cube_dim || self.cube_dim != self.dim {
            return Err(Error::invalid("t_grid", "the general form needs t-space equal to x-space"));
        }
        let kernel = match &self.weight {
            KernelSpec::Zero => KernelSpec::Zero,
            KernelSpec::PowerCube { coefficient, norm_power, coord_powers } => KernelSpec::PowerCube {
                coefficient: *coefficient,
                norm_power: norm_power + self.cube_dim as f64,
                coord_powers: coord_powers.clone(),
            },
            _ => return Err(Error::invalid("weight", "the general form needs a power_cube weight")),
        };
        let families = self.scalars.iter().map(|s| MatrixFamily::Scalar { s: *s }).collect();
        OperatorSpec::new(kernel, families, self.symbols.clone(), self.inputs.clone(), t_grid)
    }
}

/// Largest `|general(x) - special(x)|` over `xs`.
pub fn reduction_check(general: &OperatorSpec, special: &SpecialOperator, xs: &[Point]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for x in xs {
        let d = math::abs(apply(general, x)? - special.apply(x)?);
        worst = worst.max(d);
    }
    Ok(worst)
}
