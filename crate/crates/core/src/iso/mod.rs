//! Order isomorphisms of effect algebras `[0, e]` and the maps they are
//! assembled from.

mod composite;
mod factor;
mod interval;
mod jordan;
mod phi;
mod recover;

pub use composite::{counterexample_iso, CompositeOrderIso, EngagedPart, ScalarOrderIso};
pub use factor::{lift_cone_iso, param_from_y, transitivity_witness, FactorOrderIso};
pub use interval::{cone_interval_transform, interval_top_iso, ConeDirection};
pub use jordan::{jordan_apply, FactorJordanMap, JordanIsomorphism, ISOMETRY_TOL};
pub use phi::{phi_apply, phi_compose_t, phi_inverse_t, phi_scalar, PhiParam, PHI_T_MARGIN};
pub use recover::{recover_parameters, RecoveryOptions};

use crate::algebra::Element;
use crate::error::{Error, Result};
use crate::order::in_effect_interval;
use crate::tolerance;

/// Direction of an invertible map.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

/// Slack for `x ∈ [0, e]` checks.
pub fn effect_tol(x: &Element) -> f64 {
    tolerance::scaled(tolerance::ORDER, x.norm())
}

pub(crate) fn require_effect(x: &Element) -> Result<()> {
    if in_effect_interval(x, effect_tol(x)) {
        Ok(())
    } else {
        let ev = crate::spectral::eigenvalues(x);
        Err(Error::NotInInterval(format!(
            "spectrum [{}, {}] is not inside [0, 1]",
            ev[0],
            ev[ev.len() - 1]
        )))
    }
}
