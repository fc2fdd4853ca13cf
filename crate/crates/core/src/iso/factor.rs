//! Closed-form order isomorphism of `[0, e]` for algebras without central
//! atoms:
//!
//! `f(x) = φ_t(U_{(z² + e)^{1/2}}(e − (e + U_{z^{-1}} J x)^{-1}))`.

use crate::algebra::{AlgebraDescriptor, Element};
use crate::error::{Error, Result};
use crate::spectral::{
    apply_function, invert_element, max_eigenvalue, min_eigenvalue, sqrt, InverseMode,
};
use crate::tolerance;

use super::jordan::JordanIsomorphism;
use super::phi::{phi_unchecked, PhiParam};
use super::require_effect;

#[derive(Debug, Clone, PartialEq)]
pub struct FactorOrderIso {
    t: PhiParam,
    z: Element,
    j: JordanIsomorphism,
    z_inv: Element,
    // (z² + e)^{1/2} and its inverse
    w: Element,
    w_inv: Element,
}

fn strictly_interior(z: &Element) -> Result<()> {
    let least = min_eigenvalue(z);
    if least > tolerance::scaled(tolerance::SINGULAR, z.norm()) {
        Ok(())
    } else {
        Err(Error::NotInCone(least))
    }
}

impl FactorOrderIso {
    pub fn new(t: PhiParam, z: Element, j: JordanIsomorphism) -> Result<Self> {
        z.check_descriptor(&j.target())?;
        strictly_interior(&z)?;
        let z_inv = invert_element(&z, InverseMode::Strict)?;
        let w = sqrt(&z.square().add_unit(1.0))?;
        let w_inv = invert_element(&w, InverseMode::Strict)?;
        Ok(FactorOrderIso {
            t,
            z,
            j,
            z_inv,
            w,
            w_inv,
        })
    }

    /// `t = 0`, `z = e`, `J = id`.
    pub fn standard(descriptor: &AlgebraDescriptor) -> Self {
        FactorOrderIso::new(
            PhiParam::new(0.0).unwrap(),
            Element::unit(descriptor),
            JordanIsomorphism::identity(descriptor),
        )
        .expect("unit is interior")
    }

    pub fn t(&self) -> PhiParam {
        self.t
    }

    pub fn z(&self) -> &Element {
        &self.z
    }

    pub fn jordan(&self) -> &JordanIsomorphism {
        &self.j
    }

    pub fn source(&self) -> AlgebraDescriptor {
        self.j.source()
    }

    pub fn target(&self) -> AlgebraDescriptor {
        self.j.target()
    }

    /// `f(x)` for `x ∈ [0, e]` of the source.
    pub fn apply(&self, x: &Element) -> Result<Element> {
        x.check_descriptor(&self.source())?;
        require_effect(x)?;
        let b = self.z_inv.quad_rep(&self.j.apply(x)?)?;
        // spectrum of e + b is ≥ 1, so the strict inverse always exists
        let d = invert_element(&b.add_unit(1.0), InverseMode::Strict)?;
        let g = d.scale(-1.0).add_unit(1.0);
        phi_unchecked(self.t, &self.w.quad_rep(&g)?)
    }

    /// `f^{-1}(y)` for `y ∈ [0, e]` of the target.
    pub fn inverse_apply(&self, y: &Element) -> Result<Element> {
        y.check_descriptor(&self.target())?;
        require_effect(y)?;
        let h = phi_unchecked(self.t.inverse(), y)?;
        let g = self.w_inv.quad_rep(&h)?;
        let b = invert_element(&g.scale(-1.0).add_unit(1.0), InverseMode::Strict)?.add_unit(-1.0);
        self.j.inverse().apply(&self.z.quad_rep(&b)?)
    }

    /// `second ∘ self`.
    pub fn then_apply(&self, second: &FactorOrderIso, x: &Element) -> Result<Element> {
        second.apply(&self.apply(x)?)
    }
}

/// `f(x) = (U_y J x^{-1} − y² + e)^{-1}` on `(0, e]`.
pub fn lift_cone_iso(y: &Element, j: &JordanIsomorphism, x: &Element) -> Result<Element> {
    x.check_descriptor(&j.source())?;
    y.check_descriptor(&j.target())?;
    strictly_interior(y)?;
    require_effect(x)?;
    let x_inv = invert_element(x, InverseMode::Strict)?;
    let inner = y
        .quad_rep(&j.apply(&x_inv)?)?
        .sub(&y.square())?
        .add_unit(1.0);
    invert_element(&inner, InverseMode::Strict)
}

/// Parameters `(t, z, J)` equal to [`lift_cone_iso`] with `y`:
/// `z = U_{y^{1/2}}(λe − y²)^{-1/2}`, `t = 1 − λ`. Default `λ = 1 + max eig(y²)`.
pub fn param_from_y(
    y: &Element,
    lambda: Option<f64>,
    j: &JordanIsomorphism,
) -> Result<FactorOrderIso> {
    y.check_descriptor(&j.target())?;
    strictly_interior(y)?;
    let y2 = y.square();
    let bound = max_eigenvalue(&y2);
    let lambda = lambda.unwrap_or(1.0 + bound);
    let m = y2.scale(-1.0).add_unit(lambda);
    if !lambda.is_finite() || min_eigenvalue(&m) <= tolerance::scaled(tolerance::SINGULAR, m.norm())
    {
        return Err(Error::LambdaTooSmall { lambda, bound });
    }
    let m_inv_half = apply_function(&m, |s| 1.0 / s.sqrt())?;
    let z = sqrt(y)?.quad_rep(&m_inv_half)?;
    FactorOrderIso::new(PhiParam::new(1.0 - lambda)?, z, j.clone())
}

/// `y = (w^{-1} − e)^{1/2}`, so that `lift_cone_iso(y, id, ½e) = w`.
pub fn transitivity_witness(w: &Element) -> Result<Element> {
    let tol = tolerance::scaled(tolerance::SINGULAR, w.norm());
    let (lo, hi) = (min_eigenvalue(w), max_eigenvalue(w));
    if lo <= tol || hi >= 1.0 - tol {
        return Err(Error::NotInInterval(format!(
            "spectrum [{lo}, {hi}] must lie strictly inside (0, 1)"
        )));
    }
    sqrt(&invert_element(w, InverseMode::Strict)?.add_unit(-1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{random_element, DivisionRing, ElementClass, FactorDescriptor};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn herm2() -> AlgebraDescriptor {
        AlgebraDescriptor::single(FactorDescriptor::hermitian(2, DivisionRing::Real).unwrap())
            .unwrap()
    }

    fn scalar(c: f64) -> Element {
        Element::real_diag(&[c, c])
    }

    fn random_iso(d: &AlgebraDescriptor, seed: u64) -> FactorOrderIso {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let j = JordanIsomorphism::random(d, &mut rng);
        let z = crate::algebra::random_with(d, ElementClass::Interior, &mut rng).unwrap();
        FactorOrderIso::new(PhiParam::new(0.9 - 0.37 * (seed % 7) as f64).unwrap(), z, j).unwrap()
    }

    #[test]
    fn standard_examples() {
        let f = FactorOrderIso::standard(&herm2());
        assert!(
            f.apply(&scalar(0.5))
                .unwrap()
                .dist(&scalar(2.0 / 3.0))
                .unwrap()
                < 1e-15
        );
        assert!(
            f.inverse_apply(&scalar(2.0 / 3.0))
                .unwrap()
                .dist(&scalar(0.5))
                .unwrap()
                < 1e-15
        );
        let p = Element::real_diag(&[1.0, 0.0]);
        assert!(f.apply(&p).unwrap().dist(&p).unwrap() < 1e-15);
        assert_eq!(f.apply(&scalar(1.5)).unwrap_err().code(), "NOT_IN_INTERVAL");
    }

    #[test]
    fn endpoints_and_round_trip() {
        let kinds = [
            FactorDescriptor::hermitian(3, DivisionRing::Real).unwrap(),
            FactorDescriptor::hermitian(3, DivisionRing::Complex).unwrap(),
            FactorDescriptor::hermitian(2, DivisionRing::Quaternion).unwrap(),
            FactorDescriptor::spin(3).unwrap(),
        ];
        for k in kinds {
            let d = AlgebraDescriptor::single(k).unwrap();
            for seed in 0..10 {
                let f = random_iso(&d, seed);
                let e = Element::unit(&d);
                let zero = Element::zero(&d);
                assert!(f.apply(&zero).unwrap().norm() < 1e-12);
                assert!(f.apply(&e).unwrap().dist(&e).unwrap() < 1e-12);
                assert!(f.inverse_apply(&zero).unwrap().norm() < 1e-12);
                assert!(f.inverse_apply(&e).unwrap().dist(&e).unwrap() < 1e-12);
                let y = random_element(&d, seed + 7, ElementClass::Effect).unwrap();
                let back = f.apply(&f.inverse_apply(&y).unwrap()).unwrap();
                assert!(back.dist(&y).unwrap() < 1e-8, "{k} seed {seed}");
            }
        }
    }

    #[test]
    fn lift_examples() {
        let d = herm2();
        let id = JordanIsomorphism::identity(&d);
        let l = lift_cone_iso(&Element::unit(&d), &id, &scalar(0.5)).unwrap();
        assert!(l.dist(&scalar(0.5)).unwrap() < 1e-15);
        let y = scalar(3f64.powf(-0.5));
        let l = lift_cone_iso(&y, &id, &scalar(0.5)).unwrap();
        assert!(l.dist(&scalar(0.75)).unwrap() < 1e-14);
        let l = lift_cone_iso(&y, &id, &Element::unit(&d)).unwrap();
        assert!(l.dist(&Element::unit(&d)).unwrap() < 1e-14);
        assert_eq!(
            lift_cone_iso(&y, &id, &Element::real_diag(&[1.0, 0.0]))
                .unwrap_err()
                .code(),
            "SINGULAR"
        );
    }

    #[test]
    fn param_examples() {
        let d = herm2();
        let id = JordanIsomorphism::identity(&d);
        let e = Element::unit(&d);
        let p = param_from_y(&e, Some(2.0), &id).unwrap();
        assert_eq!(p.t().t(), -1.0);
        assert!(p.z().dist(&e).unwrap() < 1e-15);
        let p = param_from_y(&e, Some(4.0), &id).unwrap();
        assert_eq!(p.t().t(), -3.0);
        assert!(p.z().dist(&scalar(3f64.powf(-0.5))).unwrap() < 1e-15);
        assert_eq!(
            param_from_y(&e, Some(1.0), &id).unwrap_err().code(),
            "LAMBDA_TOO_SMALL"
        );
        // λ below 1 is admissible as long as it exceeds the spectrum of y²
        let y = scalar(0.5);
        let p = param_from_y(&y, Some(0.5), &id).unwrap();
        let x = scalar(0.3);
        let lhs = p.apply(&x).unwrap();
        let rhs = lift_cone_iso(&y, &id, &x).unwrap();
        assert!(lhs.dist(&rhs).unwrap() < 1e-14);
    }

    #[test]
    fn lift_matches_closed_form() {
        let d = AlgebraDescriptor::single(
            FactorDescriptor::hermitian(3, DivisionRing::Complex).unwrap(),
        )
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for seed in 0..10 {
            let j = JordanIsomorphism::random(&d, &mut rng);
            let y = random_element(&d, seed, ElementClass::Interior).unwrap();
            for lambda in [None, Some(max_eigenvalue(&y.square()) * 3.0 + 0.5)] {
                let p = param_from_y(&y, lambda, &j).unwrap();
                let x = random_element(&d, seed + 40, ElementClass::InvertibleEffect).unwrap();
                let a = p.apply(&x).unwrap();
                let b = lift_cone_iso(&y, &j, &x).unwrap();
                assert!(a.dist(&b).unwrap() < 1e-8, "seed {seed}");
            }
        }
    }

    #[test]
    fn transitivity_examples() {
        let d = herm2();
        let id = JordanIsomorphism::identity(&d);
        let y = transitivity_witness(&scalar(0.5)).unwrap();
        assert!(y.dist(&Element::unit(&d)).unwrap() < 1e-15);
        let y = transitivity_witness(&scalar(0.75)).unwrap();
        assert!(y.dist(&scalar(3f64.powf(-0.5))).unwrap() < 1e-15);
        assert!(
            lift_cone_iso(&y, &id, &scalar(0.5))
                .unwrap()
                .dist(&scalar(0.75))
                .unwrap()
                < 1e-14
        );
        assert!(transitivity_witness(&Element::real_diag(&[1.0, 0.5])).is_err());
        assert!(transitivity_witness(&Element::real_diag(&[0.0, 0.5])).is_err());
    }
}
