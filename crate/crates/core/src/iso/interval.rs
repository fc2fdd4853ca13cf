//! `U_{x^{1/2}} : [0, r(x)] → [0, x]` and the anti-isomorphism between
//! `(0, e]` and the cone.

use crate::algebra::Element;
use crate::error::{Error, Result};
#[cfg(test)]
use crate::order::leq;
use crate::order::{default_leq_tol, in_interval};
use crate::spectral::{invert_element, min_eigenvalue, range_projection, sqrt, InverseMode};

use super::{effect_tol, require_effect, Direction};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConeDirection {
    IntervalToCone,
    ConeToInterval,
}

/// FORWARD: `y ∈ [0, r(x)] ↦ U_{x^{1/2}} y`.
/// BACKWARD: `y ∈ [0, x] ↦ U_s y` with `s` the pseudo-inverse of `x^{1/2}`.
pub fn interval_top_iso(x: &Element, y: &Element, direction: Direction) -> Result<Element> {
    x.check_same_shape(y)?;
    if x.norm() == 0.0 {
        return Err(Error::NotInCone(0.0));
    }
    let root = sqrt(x)?;
    match direction {
        Direction::Forward => {
            let top = range_projection(x)?;
            if !in_interval(y, &top, default_leq_tol(y, &top))? {
                return Err(Error::NotInInterval("y is not in [0, r(x)]".into()));
            }
            root.quad_rep(y)
        }
        Direction::Backward => {
            if !in_interval(y, x, default_leq_tol(y, x))? {
                return Err(Error::NotInInterval("y is not in [0, x]".into()));
            }
            invert_element(&root, InverseMode::Pseudo)?.quad_rep(y)
        }
    }
}

/// `x ↦ x^{-1} − e` on `(0, e]` and `x ↦ (x + e)^{-1}` on the cone.
pub fn cone_interval_transform(x: &Element, direction: ConeDirection) -> Result<Element> {
    match direction {
        ConeDirection::IntervalToCone => {
            require_effect(x)?;
            Ok(invert_element(x, InverseMode::Strict)?.add_unit(-1.0))
        }
        ConeDirection::ConeToInterval => {
            let least = min_eigenvalue(x);
            if least < -effect_tol(x) {
                return Err(Error::NotInCone(least));
            }
            invert_element(&x.add_unit(1.0), InverseMode::Strict)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{
        random_element, AlgebraDescriptor, DivisionRing, ElementClass, FactorDescriptor,
    };

    fn reverses(x: &Element, y: &Element, direction: ConeDirection) -> Result<bool> {
        let tx = cone_interval_transform(x, direction)?;
        let ty = cone_interval_transform(y, direction)?;
        leq(&ty, &tx, default_leq_tol(&tx, &ty))
    }

    #[test]
    fn diagonal_example() {
        let x = Element::real_diag(&[4.0, 0.0]);
        let y = Element::real_diag(&[1.0, 0.0]);
        let f = interval_top_iso(&x, &y, Direction::Forward).unwrap();
        assert!(f.dist(&Element::real_diag(&[4.0, 0.0])).unwrap() < 1e-14);
        let b = interval_top_iso(&x, &f, Direction::Backward).unwrap();
        assert!(b.dist(&y).unwrap() < 1e-14);
        let z = Element::real_diag(&[0.0, 0.0]);
        assert_eq!(
            interval_top_iso(&x, &z, Direction::Forward).unwrap().norm(),
            0.0
        );
        assert_eq!(
            interval_top_iso(&x, &z, Direction::Backward)
                .unwrap()
                .norm(),
            0.0
        );
        let outside = Element::real_diag(&[0.0, 1.0]);
        assert_eq!(
            interval_top_iso(&x, &outside, Direction::Forward)
                .unwrap_err()
                .code(),
            "NOT_IN_INTERVAL"
        );
    }

    #[test]
    fn round_trip_on_rank_deficient_top() {
        let d = AlgebraDescriptor::single(
            FactorDescriptor::hermitian(3, DivisionRing::Quaternion).unwrap(),
        )
        .unwrap();
        for seed in 0..10 {
            // Rank-deficient x: square of a projection-weighted element.
            let p = random_element(&d, seed, ElementClass::Projection).unwrap();
            let c = random_element(&d, seed + 50, ElementClass::Interior).unwrap();
            let x = p.quad_rep(&c).unwrap();
            if x.norm() < 1e-6 {
                continue;
            }
            let r = range_projection(&x).unwrap();
            let e = random_element(&d, seed + 99, ElementClass::Effect).unwrap();
            let y = r.quad_rep(&e).unwrap();
            let f = interval_top_iso(&x, &y, Direction::Forward).unwrap();
            let b = interval_top_iso(&x, &f, Direction::Backward).unwrap();
            assert!(b.dist(&y).unwrap() < 1e-8, "seed {seed}");
        }
    }

    #[test]
    fn cone_transform_examples() {
        let e = Element::real_diag(&[1.0, 1.0]);
        let z = Element::real_diag(&[0.0, 0.0]);
        let h = Element::real_diag(&[0.5, 0.5]);
        assert!(
            cone_interval_transform(&e, ConeDirection::IntervalToCone)
                .unwrap()
                .norm()
                < 1e-15
        );
        assert_eq!(
            cone_interval_transform(&z, ConeDirection::ConeToInterval).unwrap(),
            e
        );
        assert!(
            cone_interval_transform(&h, ConeDirection::IntervalToCone)
                .unwrap()
                .dist(&e)
                .unwrap()
                < 1e-15
        );
        assert_eq!(
            cone_interval_transform(&z, ConeDirection::IntervalToCone)
                .unwrap_err()
                .code(),
            "SINGULAR"
        );
        let a = Element::real_diag(&[0.25, 0.5]);
        let b = Element::real_diag(&[0.5, 0.5]);
        assert!(reverses(&a, &b, ConeDirection::IntervalToCone).unwrap());
    }

    #[test]
    fn cone_transform_round_trip() {
        let d = AlgebraDescriptor::single(FactorDescriptor::spin(3).unwrap()).unwrap();
        for seed in 0..20 {
            let x = random_element(&d, seed, ElementClass::InvertibleEffect).unwrap();
            let c = cone_interval_transform(&x, ConeDirection::IntervalToCone).unwrap();
            let back = cone_interval_transform(&c, ConeDirection::ConeToInterval).unwrap();
            assert!(back.dist(&x).unwrap() < 1e-12);
        }
    }
}
