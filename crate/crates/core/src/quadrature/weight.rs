use crate::error::{Error, Result};
use crate::exponents::ExponentFunction;
use crate::math;
use crate::Point;

/// `w(x) = |x|^gamma` with constant or variable power.
#[derive(Debug, Clone, PartialEq)]
pub enum PowerWeight {
    Constant(f64),
    Variable(ExponentFunction),
}

impl PowerWeight {
    /// The weight identically one.
    pub const UNIT: PowerWeight = PowerWeight::Constant(0.0);

    #[inline]
    pub fn eval(&self, x: &Point, dim: usize) -> f64 {
        let r = math::norm(x, dim);
        match self {
            PowerWeight::Constant(g) => {
                if *g == 0.0 {
                    1.0
                } else {
                    math::powf(r, *g)
                }
            }
            PowerWeight::Variable(g) => math::powf(r, g.eval(x)),
        }
    }

    pub fn constant_power(&self) -> Option<f64> {
        match self {
            PowerWeight::Constant(g) => Some(*g),
            PowerWeight::Variable(g) => g.constant_value(),
        }
    }

    pub fn is_unit(&self) -> bool {
        self.constant_power() == Some(0.0)
    }

    /// `w(B(0, R)) = |S^{n-1}| R^{gamma+n} / (gamma+n)` for a constant power.
    pub fn ball_mass(&self, dim: usize, radius: f64) -> Result<f64> {
        let g = self
            .constant_power()
            .ok_or_else(|| Error::invalid("weight", "closed-form ball mass needs a constant power"))?;
        let e = g + dim as f64;
        if e <= 0.0 {
            return Err(Error::invalid("weight", "power <= -n makes the ball mass diverge"));
        }
        Ok(math::sphere_area(dim) * math::powf(radius, e) / e)
    }
}
