//! The one-parameter group `φ_t(x) = x ∘ (t x + (1 − t) e)^{-1}`, `t < 1`.

use crate::algebra::Element;
use crate::error::{Error, Result};
use crate::spectral::apply_function;

use super::require_effect;

/// Parameters at or above `1 − PHI_T_MARGIN` are rejected.
pub const PHI_T_MARGIN: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiParam(f64);

impl PhiParam {
    pub fn new(t: f64) -> Result<Self> {
        if t.is_finite() && t < 1.0 - PHI_T_MARGIN {
            Ok(PhiParam(t))
        } else {
            Err(Error::PhiParamRange(t))
        }
    }

    pub fn t(self) -> f64 {
        self.0
    }

    pub fn compose(self, other: PhiParam) -> Result<PhiParam> {
        PhiParam::new(phi_compose_t(self.0, other.0)?)
    }

    pub fn inverse(self) -> PhiParam {
        PhiParam(self.0 / (self.0 - 1.0))
    }

    pub fn scalar(self, s: f64) -> f64 {
        phi_scalar(self.0, s)
    }
}

/// `λ / (t λ + 1 − t)`.
pub fn phi_scalar(t: f64, s: f64) -> f64 {
    s / (t * s + (1.0 - t))
}

/// `φ_t(x)` for `x ∈ [0, e]`.
pub fn phi_apply(t: PhiParam, x: &Element) -> Result<Element> {
    require_effect(x)?;
    phi_unchecked(t, x)
}

pub(crate) fn phi_unchecked(t: PhiParam, x: &Element) -> Result<Element> {
    if t.0 == 0.0 {
        return Ok(x.clone());
    }
    apply_function(x, |s| phi_scalar(t.0, s))
}

/// `φ_t ∘ φ_s = φ_{t + s − ts}`.
pub fn phi_compose_t(t: f64, s: f64) -> Result<f64> {
    let t = PhiParam::new(t)?;
    let s = PhiParam::new(s)?;
    Ok(t.0 + s.0 - t.0 * s.0)
}

/// `φ_t^{-1} = φ_{t/(t−1)}`.
pub fn phi_inverse_t(t: f64) -> Result<f64> {
    Ok(PhiParam::new(t)?.inverse().0)
}
