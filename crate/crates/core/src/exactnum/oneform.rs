use super::{GaussianRational, RationalFunction, UniPoly};
use crate::error::Result;

/// `(num/den) dz` in the affine chart, reduced with monic denominator.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RationalOneForm(pub RationalFunction);

impl RationalOneForm {
    pub fn new(num: UniPoly, den: UniPoly) -> Result<Self> {
        Ok(Self(RationalFunction::new(num, den)?))
    }

    pub fn zero() -> Self {
        Self(RationalFunction::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn coefficient(&self) -> &RationalFunction {
        &self.0
    }

    /// Multiply by a function (e.g. a dehomogenized section).
    pub fn times_poly(&self, p: &UniPoly) -> Self {
        Self(self.0.mul_poly(p))
    }

    pub fn residue_at(&self, p: &GaussianRational) -> GaussianRational {
        self.0.residue_at(p)
    }

    pub fn pole_order(&self, p: &GaussianRational) -> usize {
        self.0.pole_order(p)
    }

    /// Tensor product of two 1-forms.
    pub fn tensor(&self, other: &Self) -> QuadraticDifferential {
        QuadraticDifferential(&self.0 * &other.0)
    }
}

/// `f dz^2` in the affine chart.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuadraticDifferential(pub RationalFunction);

impl QuadraticDifferential {
    pub fn zero() -> Self {
        Self(RationalFunction::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(&self.0 + &other.0)
    }
}
