//! Quadratic-representation identities and functional-calculus commutation:
//!
//! * `U_y x ≥ 0` for `x ≥ 0`
//! * `U_x^{-1} = U_{x^{-1}}`
//! * `(U_y x)^{-1} = U_{y^{-1}} x^{-1}`
//! * `U_y U_x U_y = U_{U_y x}`
//! * `U_y e = y²`
//! * `U_{f(y)} U_{g(y)} = U_{(fg)(y)}` and `U_{f(y)} g(y) = (f²g)(y)`

use rand::Rng;
use rand_distr::StandardNormal;

use crate::algebra::{random_general, random_with, Element, ElementClass};
use crate::error::Result;
use crate::spectral::{apply_function, invert_element, min_eigenvalue, InverseMode};

use super::{
    relative_residual, residual, run_trials, trial_rng, well_conditioned, CheckSpec, Suite,
    SuiteConfig, SuiteReport,
};

pub struct IdentitySuite;

/// Quadratic representation with one sign flipped, `2(x∘y)∘x + x²∘y`.
/// Used only by the self-test mode.
pub fn mutated_quad_rep(x: &Element, y: &Element) -> Result<Element> {
    let xy = x.jordan_product(y)?;
    xy.jordan_product(x)?
        .scale(2.0)
        .add(&x.square().jordan_product(y)?)
}

fn poly(coeffs: &[f64], t: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c)
}

fn random_poly(rng: &mut impl Rng) -> Vec<f64> {
    let degree = rng.random_range(0..=4);
    (0..=degree)
        .map(|_| rng.sample::<f64, _>(StandardNormal))
        .collect()
}

const CHECKS: [&str; 7] = [
    "quad_preserves_cone",
    "quad_inverse",
    "inverse_of_quad",
    "fundamental_identity",
    "quad_of_unit",
    "calculus_quad_product",
    "calculus_quad_value",
];

impl Suite for IdentitySuite {
    fn name(&self) -> &'static str {
        "identity"
    }

    fn description(&self) -> &'static str {
        "quadratic-representation identities and functional-calculus commutation"
    }

    fn default_tol(&self) -> f64 {
        1e-8
    }

    fn run(&self, config: &SuiteConfig) -> SuiteReport {
        let tol = config.tol.unwrap_or(self.default_tol());
        let d = &config.descriptor;
        let checks: Vec<CheckSpec> = CHECKS.iter().map(|&name| CheckSpec { name, tol }).collect();
        run_trials(self.name(), config, d.to_string(), &checks, |i| {
            let mut rng = trial_rng(config.seed, i);
            let mut out = Vec::with_capacity(CHECKS.len());
            let mut step = |f: &mut dyn FnMut(&mut rand_chacha::ChaCha8Rng) -> Result<f64>| {
                out.push(residual(f(&mut rng)));
            };
            step(&mut |rng| {
                let x = random_with(d, ElementClass::Cone, rng)?;
                let y = random_general(d, rng);
                let u = y.quad_rep(&x)?;
                Ok((-min_eigenvalue(&u)).max(0.0) / u.norm().max(1.0))
            });
            step(&mut |rng| {
                let x = well_conditioned(d, rng)?;
                let w = random_general(d, rng);
                let back = invert_element(&x, InverseMode::Strict)?.quad_rep(&x.quad_rep(&w)?)?;
                relative_residual(&back, &w)
            });
            step(&mut |rng| {
                let x = well_conditioned(d, rng)?;
                let y = well_conditioned(d, rng)?;
                let lhs = invert_element(&y.quad_rep(&x)?, InverseMode::Strict)?;
                let rhs = invert_element(&y, InverseMode::Strict)?
                    .quad_rep(&invert_element(&x, InverseMode::Strict)?)?;
                relative_residual(&lhs, &rhs)
            });
            step(&mut |rng| {
                let x = random_general(d, rng);
                let y = random_general(d, rng);
                let w = random_general(d, rng);
                let quad = |a: &Element, b: &Element| {
                    if config.mutate {
                        mutated_quad_rep(a, b)
                    } else {
                        a.quad_rep(b)
                    }
                };
                let lhs = quad(&y, &x.quad_rep(&quad(&y, &w)?)?)?;
                let rhs = y.quad_rep(&x)?.quad_rep(&w)?;
                relative_residual(&lhs, &rhs)
            });
            step(&mut |rng| {
                let y = random_general(d, rng);
                relative_residual(&y.quad_rep(&y.unit_like())?, &y.square())
            });
            step(&mut |rng| {
                let y = random_general(d, rng);
                let (f, g) = (random_poly(rng), random_poly(rng));
                let w = random_general(d, rng);
                let fy = apply_function(&y, |t| poly(&f, t))?;
                let gy = apply_function(&y, |t| poly(&g, t))?;
                let fgy = apply_function(&y, |t| poly(&f, t) * poly(&g, t))?;
                relative_residual(&fy.quad_rep(&gy.quad_rep(&w)?)?, &fgy.quad_rep(&w)?)
            });
            step(&mut |rng| {
                let y = random_general(d, rng);
                let (f, g) = (random_poly(rng), random_poly(rng));
                let fy = apply_function(&y, |t| poly(&f, t))?;
                let gy = apply_function(&y, |t| poly(&g, t))?;
                let ffg = apply_function(&y, |t| poly(&f, t).powi(2) * poly(&g, t))?;
                relative_residual(&fy.quad_rep(&gy)?, &ffg)
            });
            out
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{AlgebraDescriptor, DivisionRing, FactorDescriptor};

    #[test]
    fn examples() {
        let d = AlgebraDescriptor::single(
            FactorDescriptor::hermitian(4, DivisionRing::Complex).unwrap(),
        )
        .unwrap();
        let r = IdentitySuite.run(&SuiteConfig::new(d).seed(42).trials(50));
        assert!(r.passed, "{}", r.render_text());
        let d = AlgebraDescriptor::single(FactorDescriptor::spin(5).unwrap()).unwrap();
        let r = IdentitySuite.run(&SuiteConfig::new(d).seed(7).trials(50));
        assert!(r.passed, "{}", r.render_text());
    }

    #[test]
    fn mutation_is_caught_only_in_fundamental_identity() {
        let d =
            AlgebraDescriptor::single(FactorDescriptor::hermitian(3, DivisionRing::Real).unwrap())
                .unwrap();
        let r = IdentitySuite.run(&SuiteConfig::new(d).trials(20).mutate(true));
        assert!(!r.passed);
        for c in &r.checks {
            assert_eq!(c.ok(), c.name != "fundamental_identity", "{}", c.name);
        }
    }
}
