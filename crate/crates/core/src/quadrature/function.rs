use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math;
use crate::Point;

/// Anything that can be sampled on a quadrature grid.
pub trait RealFunction {
    fn dim(&self) -> usize;

    fn eval(&self, x: &Point) -> Result<f64>;

    /// `f(x) = 0` for `|x|` beyond this radius.
    fn support_radius(&self) -> f64 {
        f64::INFINITY
    }

    /// Radii across which `f` is not smooth. Grids split shells there.
    fn radial_breaks(&self) -> Vec<f64> {
        Vec::new()
    }
}

/// Closed-form shapes of the test-function catalog.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Shape {
    Zero,
    Constant { value: f64 },
    /// `|x|^a` on `|x| <= radius`
    TruncatedPower { a: f64, radius: f64 },
    /// `|x|^a`
    RadialPower { a: f64 },
    /// `exp(-|x|^2)`
    Gaussian,
    /// `exp(1 - 1/(1 - |x/radius|^2))` inside the ball, so the peak is 1
    Bump { radius: f64 },
    /// indicator of `r_inner < |x| <= r_outer`
    IndicatorAnnulus { r_inner: f64, r_outer: f64 },
    /// `<c, x>`; `c` defaults to the first unit vector
    Linear {
        #[serde(default)]
        coefficients: Vec<f64>,
    },
    /// sign of the `axis` coordinate
    Sign {
        #[serde(default)]
        axis: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeclaredLip {
    pub beta: f64,
    pub constant: f64,
}

fn one() -> f64 {
    1.0
}

/// Catalog shape plus the transformations `x -> amplitude * shape(dilation x) + offset`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionSpec {
    pub shape: Shape,
    #[serde(default = "one")]
    pub amplitude: f64,
    #[serde(default = "one")]
    pub dilation: f64,
    #[serde(default)]
    pub offset: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub declared_lip: Option<DeclaredLip>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub oracle_norms: BTreeMap<String, f64>,
}

impl FunctionSpec {
    pub fn new(shape: Shape) -> Self {
        Self {
            shape,
            amplitude: 1.0,
            dilation: 1.0,
            offset: 0.0,
            declared_lip: None,
            oracle_norms: BTreeMap::new(),
        }
    }
}

impl From<Shape> for FunctionSpec {
    fn from(shape: Shape) -> Self {
        Self::new(shape)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TestFunction {
    dim: usize,
    spec: FunctionSpec,
    coefficients: Point,
}

impl TestFunction {
    pub fn new(dim: usize, spec: impl Into<FunctionSpec>) -> Result<Self> {
        let spec = spec.into();
        if !(1..=crate::MAX_DIM).contains(&dim) {
            return Err(Error::invalid("dim", "dimension must be 1, 2 or 3"));
        }
        if !(spec.dilation > 0.0 && spec.dilation.is_finite()) {
            return Err(Error::invalid("dilation", "must be positive and finite"));
        }
        if !spec.amplitude.is_finite() || !spec.offset.is_finite() {
            return Err(Error::invalid("amplitude", "amplitude and offset must be finite"));
        }
        let mut coefficients = [0.0; 3];
        match &spec.shape {
            Shape::TruncatedPower { radius, .. } | Shape::Bump { radius } if !(*radius > 0.0) => {
                return Err(Error::invalid("radius", "must be positive"));
            }
            Shape::IndicatorAnnulus { r_inner, r_outer } if !(0.0 <= *r_inner && r_inner < r_outer) => {
                return Err(Error::invalid("r_inner", "need 0 <= r_inner < r_outer"));
            }
            Shape::Linear { coefficients: c } => {
                if c.is_empty() {
                    coefficients[0] = 1.0;
                } else if c.len() != dim {
                    return Err(Error::DimensionMismatch { expected: dim, found: c.len() });
                } else {
                    coefficients[..dim].copy_from_slice(c);
                }
            }
            Shape::Sign { axis } if *axis >= dim => {
                return Err(Error::invalid("axis", "outside the ambient dimension"));
            }
            _ => {}
        }
        Ok(Self { dim, spec, coefficients })
    }

    pub fn spec(&self) -> &FunctionSpec {
        &self.spec
    }

    pub fn shape(&self) -> &Shape {
        &self.spec.shape
    }

    /// `c f`
    pub fn scaled(&self, c: f64) -> Self {
        let mut out = self.clone();
        out.spec.amplitude *= c;
        out.spec.offset *= c;
        if let Some(lip) = out.spec.declared_lip.as_mut() {
            lip.constant *= math::abs(c);
        }
        out
    }

    /// `x -> f(s x)`
    pub fn dilated(&self, s: f64) -> Self {
        let mut out = self.clone();
        out.spec.dilation *= s;
        if let Some(lip) = out.spec.declared_lip.as_mut() {
            lip.constant *= math::powf(s, lip.beta);
        }
        out
    }

    /// `f + c`
    pub fn shifted(&self, c: f64) -> Self {
        let mut out = self.clone();
        out.spec.offset += c;
        out
    }

    /// True when `f` is the same constant everywhere.
    pub fn is_constant(&self) -> bool {
        matches!(self.spec.shape, Shape::Zero | Shape::Constant { .. }) || self.spec.amplitude == 0.0
    }

    pub fn is_radial(&self) -> bool {
        !matches!(self.spec.shape, Shape::Linear { .. } | Shape::Sign { .. })
    }

    #[inline]
    pub fn value(&self, x: &Point) -> f64 {
        let s = self.spec.dilation;
        let y = [x[0] * s, x[1] * s, x[2] * s];
        self.spec.amplitude * self.shape_value(&y) + self.spec.offset
    }

    /// `f(x) - f(y)` with the offset cancelled exactly.
    #[inline]
    pub fn difference(&self, x: &Point, y: &Point) -> f64 {
        if self.is_constant() {
            return 0.0;
        }
        let s = self.spec.dilation;
        let xs = [x[0] * s, x[1] * s, x[2] * s];
        let ys = [y[0] * s, y[1] * s, y[2] * s];
        self.spec.amplitude * (self.shape_value(&xs) - self.shape_value(&ys))
    }

    /// `f` without its additive offset.
    pub fn without_offset(&self) -> Self {
        let mut out = self.clone();
        out.spec.offset = 0.0;
        out
    }

    fn shape_value(&self, y: &Point) -> f64 {
        let r = || math::norm(y, self.dim);
        match self.spec.shape {
            Shape::Zero => 0.0,
            Shape::Constant { value } => value,
            Shape::TruncatedPower { a, radius } => {
                let r = r();
                if r <= radius {
                    math::powf(r, a)
                } else {
                    0.0
                }
            }
            Shape::RadialPower { a } => math::powf(r(), a),
            Shape::Gaussian => {
                let r = r();
                math::exp(-r * r)
            }
            Shape::Bump { radius } => {
                let u = r() / radius;
                if u < 1.0 {
                    math::exp(1.0 - 1.0 / (1.0 - u * u))
                } else {
                    0.0
                }
            }
            Shape::IndicatorAnnulus { r_inner, r_outer } => {
                let r = r();
                if r > r_inner && r <= r_outer {
                    1.0
                } else {
                    0.0
                }
            }
            Shape::Linear { .. } => {
                let c = &self.coefficients;
                c[0] * y[0] + c[1] * y[1] + c[2] * y[2]
            }
            Shape::Sign { axis } => {
                let v = y[axis];
                if v > 0.0 {
                    1.0
                } else if v < 0.0 {
                    -1.0
                } else {
                    0.0
                }
            }
        }
    }

    /// Declared `Lip^beta` constant: the scenario's declaration if present,
    /// else the known constant of the catalog shape.
    pub fn declared_lip(&self) -> Option<DeclaredLip> {
        if let Some(d) = self.spec.declared_lip {
            return Some(d);
        }
        let amp = math::abs(self.spec.amplitude);
        let s = self.spec.dilation;
        match self.spec.shape {
            Shape::Zero | Shape::Constant { .. } => Some(DeclaredLip { beta: 1.0, constant: 0.0 }),
            Shape::Linear { .. } => {
                let c = math::norm(&self.coefficients, self.dim);
                Some(DeclaredLip { beta: 1.0, constant: amp * c * s })
            }
            Shape::RadialPower { a } if a > 0.0 && a <= 1.0 => {
                Some(DeclaredLip { beta: a, constant: amp * math::powf(s, a) })
            }
            _ => None,
        }
    }

    pub fn oracle_norm(&self, key: &str) -> Option<f64> {
        self.spec.oracle_norms.get(key).copied()
    }
}

impl RealFunction for TestFunction {
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, x: &Point) -> Result<f64> {
        Ok(self.value(x))
    }

    fn support_radius(&self) -> f64 {
        if self.spec.offset != 0.0 {
            return f64::INFINITY;
        }
        if self.spec.amplitude == 0.0 {
            return 0.0;
        }
        let base = match self.spec.shape {
            Shape::Zero => 0.0,
            Shape::TruncatedPower { radius, .. } | Shape::Bump { radius } => radius,
            Shape::IndicatorAnnulus { r_outer, .. } => r_outer,
            Shape::Constant { value } if value == 0.0 => 0.0,
            _ => f64::INFINITY,
        };
        base / self.spec.dilation
    }

    fn radial_breaks(&self) -> Vec<f64> {
        let s = self.spec.dilation;
        match self.spec.shape {
            Shape::TruncatedPower { radius, .. } | Shape::Bump { radius } => vec![radius / s],
            Shape::IndicatorAnnulus { r_inner, r_outer } => vec![r_inner / s, r_outer / s],
            _ => Vec::new(),
        }
    }
}

/// Pointwise product.
pub struct Product<'a> {
    pub factors: Vec<&'a dyn RealFunction>,
}

impl RealFunction for Product<'_> {
    fn dim(&self) -> usize {
        self.factors.first().map_or(1, |f| f.dim())
    }

    fn eval(&self, x: &Point) -> Result<f64> {
        let mut v = 1.0;
        for f in &self.factors {
            v *= f.eval(x)?;
        }
        Ok(v)
    }

    fn support_radius(&self) -> f64 {
        self.factors.iter().map(|f| f.support_radius()).fold(f64::INFINITY, f64::min)
    }

    fn radial_breaks(&self) -> Vec<f64> {
        self.factors.iter().flat_map(|f| f.radial_breaks()).collect()
    }
}

/// `sum c_i f_i`
pub struct Combination<'a> {
    pub terms: Vec<(f64, &'a dyn RealFunction)>,
}

impl RealFunction for Combination<'_> {
    fn dim(&self) -> usize {
        self.terms.first().map_or(1, |t| t.1.dim())
    }

    fn eval(&self, x: &Point) -> Result<f64> {
        let mut v = 0.0;
        for (c, f) in &self.terms {
            v += c * f.eval(x)?;
        }
        Ok(v)
    }

    fn support_radius(&self) -> f64 {
        self.terms.iter().map(|t| t.1.support_radius()).fold(0.0, f64::max)
    }

    fn radial_breaks(&self) -> Vec<f64> {
        self.terms.iter().flat_map(|t| t.1.radial_breaks()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(shape: Shape) -> TestFunction {
        TestFunction::new(1, shape).unwrap()
    }

    #[test]
    fn catalog_values() {
        let p = f(Shape::TruncatedPower { a: 0.5, radius: 1.0 });
        assert_eq!(p.value(&[0.25, 0.0, 0.0]), 0.5);
        assert_eq!(p.value(&[-1.0, 0.0, 0.0]), 1.0);
        assert_eq!(p.value(&[1.5, 0.0, 0.0]), 0.0);
        assert_eq!(f(Shape::Bump { radius: 2.0 }).value(&[0.0; 3]), 1.0);
        assert_eq!(f(Shape::Sign { axis: 0 }).value(&[-3.0, 0.0, 0.0]), -1.0);
        let a = f(Shape::IndicatorAnnulus { r_inner: 0.5, r_outer: 1.0 });
        assert_eq!((a.value(&[0.5, 0.0, 0.0]), a.value(&[1.0, 0.0, 0.0])), (0.0, 1.0));
    }

    #[test]
    fn support_respected() {
        for shape in [
            Shape::TruncatedPower { a: -0.3, radius: 1.5 },
            Shape::Bump { radius: 0.7 },
            Shape::IndicatorAnnulus { r_inner: 0.1, r_outer: 2.0 },
        ] {
            let g = TestFunction::new(1, FunctionSpec { dilation: 2.0, ..shape.into() }).unwrap();
            let r = g.support_radius();
            for j in 1..50 {
                let x = r * (1.0 + j as f64 / 10.0);
                assert_eq!(g.value(&[x, 0.0, 0.0]), 0.0);
                assert_eq!(g.value(&[-x, 0.0, 0.0]), 0.0);
            }
        }
    }

    #[test]
    fn dilation_and_scaling() {
        let g = f(Shape::Linear { coefficients: Vec::new() });
        let h = g.dilated(2.0).scaled(3.0);
        assert_eq!(h.value(&[1.0, 0.0, 0.0]), 6.0);
        assert_eq!(h.declared_lip().unwrap().constant, 6.0);
        assert_eq!(g.shifted(7.0).value(&[1.0, 0.0, 0.0]), 8.0);
    }

    #[test]
    fn linear_coefficients_must_match_dim() {
        assert!(TestFunction::new(2, Shape::Linear { coefficients: alloc::vec![1.0] }).is_err());
        let g = TestFunction::new(2, Shape::Linear { coefficients: alloc::vec![1.0, -2.0] }).unwrap();
        assert_eq!(g.value(&[1.0, 1.0, 0.0]), -1.0);
    }
}
