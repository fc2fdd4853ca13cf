//! Constructed order isomorphisms: order preservation both ways, endpoint
//! rigidity, invertible-part invariance, rank-one preservation, round trips,
//! the φ group law and the lift/closed-form equivalence.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{random_general, random_with, AlgebraDescriptor, Element, ElementClass};
use crate::error::{Error, Result};
use crate::iso::{
    lift_cone_iso, param_from_y, phi_apply, CompositeOrderIso, Direction, EngagedPart,
    FactorOrderIso, JordanIsomorphism, PhiParam, ScalarOrderIso,
};
use crate::order::second_largest_eigenvalue;
use crate::spectral::{apply_function, max_eigenvalue, min_eigenvalue};

use super::{residual, run_trials, trial_rng, CheckSpec, Suite, SuiteConfig, SuiteReport};

pub struct OrderIsoSuite;

/// Strict floor on the image spectrum of elements with spectrum `≥ 1e-3`.
const INVERTIBLE_IMAGE_FLOOR: f64 = 1e-12;
const ENDPOINT_TOL: f64 = 1e-12;
const PHI_LAW_TOL: f64 = 1e-9;

fn random_t(rng: &mut impl Rng) -> f64 {
    rng.random_range(-3.0..0.9)
}

/// Random `(t, z, J)` on a single-factor algebra with
/// `z = s exp(g / (1 + ρ(g)))`, `s ∈ [e^{-1}, e]`, so `cond(z) ≤ e²`. The
/// closed form loses about `cond(z)² ε` to rounding.
pub fn random_factor_iso(
    factor: &AlgebraDescriptor,
    rng: &mut ChaCha8Rng,
) -> Result<FactorOrderIso> {
    let j = JordanIsomorphism::random(factor, rng);
    let g = random_general(factor, rng);
    let rho = 1.0 + min_eigenvalue(&g).abs().max(max_eigenvalue(&g).abs());
    let s: f64 = rng.random_range(-1.0..1.0);
    let z = apply_function(&g, |l| (s + l / rho).exp())?;
    FactorOrderIso::new(PhiParam::new(random_t(rng))?, z, j)
}

fn random_scalar_iso(rng: &mut impl Rng) -> Result<ScalarOrderIso> {
    if rng.random_bool(0.5) {
        return ScalarOrderIso::phi(random_t(rng));
    }
    let inner = rng.random_range(1..4);
    let mut xs: Vec<f64> = (0..inner).map(|_| rng.random_range(0.05..0.95)).collect();
    let mut ys: Vec<f64> = (0..inner).map(|_| rng.random_range(0.05..0.95)).collect();
    xs.sort_by(f64::total_cmp);
    ys.sort_by(f64::total_cmp);
    let mut knots = vec![(0.0, 0.0)];
    knots.extend(xs.into_iter().zip(ys));
    knots.push((1.0, 1.0));
    knots.dedup_by(|a, b| a.0 == b.0 || a.1 == b.1);
    ScalarOrderIso::pwl(knots)
}

/// Random order isomorphism `[0, e_source] → [0, e_target]`: random routing
/// of rank-one factors, random matching of equal engaged factors.
pub fn random_composite_iso(
    source: &AlgebraDescriptor,
    target: &AlgebraDescriptor,
    rng: &mut ChaCha8Rng,
) -> Result<CompositeOrderIso> {
    let mut sigma = target.disengaged();
    if sigma.len() != source.disengaged().len() {
        return Err(Error::InvalidDescriptor(format!(
            "{source} and {target} are not Jordan isomorphic"
        )));
    }
    sigma.shuffle(rng);
    let scalar_isos = sigma
        .iter()
        .map(|_| random_scalar_iso(rng))
        .collect::<Result<Vec<_>>>()?;
    let mut free = target.engaged();
    free.shuffle(rng);
    let mut engaged = Vec::new();
    for s in source.engaged() {
        let pos = free
            .iter()
            .position(|&t| target.factors()[t] == source.factors()[s])
            .ok_or_else(|| {
                Error::InvalidDescriptor(format!("{source} and {target} are not Jordan isomorphic"))
            })?;
        let t = free.remove(pos);
        let local = AlgebraDescriptor::single(source.factors()[s])?;
        engaged.push(EngagedPart {
            source: s,
            target: t,
            iso: random_factor_iso(&local, rng)?,
        });
    }
    if !free.is_empty() {
        return Err(Error::InvalidDescriptor(format!(
            "{source} and {target} are not Jordan isomorphic"
        )));
    }
    CompositeOrderIso::new(source.clone(), target.clone(), sigma, scalar_isos, engaged)
}

/// `x ≤ y` in `[0, e]`: `y = x + c` for a cone element `c`, rescaled into `[0, e]`.
fn ordered_pair(d: &AlgebraDescriptor, rng: &mut ChaCha8Rng) -> Result<(Element, Element)> {
    let x = random_with(d, ElementClass::Effect, rng)?;
    let c = random_with(d, ElementClass::Cone, rng)?.scale(rng.random_range(0.01..1.0));
    let y = x.add(&c)?;
    let m = max_eigenvalue(&y).max(1.0);
    Ok((x.scale(1.0 / m), y.scale(1.0 / m)))
}

fn order_violation(lo: &Element, hi: &Element) -> Result<f64> {
    Ok((-min_eigenvalue(&hi.sub(lo)?)).max(0.0))
}

const CHECKS: [&str; 9] = [
    "order_forward",
    "order_backward",
    "endpoints",
    "invertible_part",
    "singular_part",
    "atom_rank_one",
    "round_trip",
    "phi_group_law",
    "lift_param_equivalence",
];

impl Suite for OrderIsoSuite {
    fn name(&self) -> &'static str {
        "order-iso"
    }

    fn description(&self) -> &'static str {
        "random composite order isomorphisms and the closed-form factor map"
    }

    fn default_tol(&self) -> f64 {
        1e-8
    }

    fn run(&self, config: &SuiteConfig) -> SuiteReport {
        let tol = config.tol.unwrap_or(self.default_tol());
        let source = &config.descriptor;
        let target = config.target_descriptor();
        let tols = [
            tol,
            tol,
            ENDPOINT_TOL,
            0.0,
            1e-10,
            tol,
            tol,
            PHI_LAW_TOL.min(tol),
            tol,
        ];
        let checks: Vec<CheckSpec> = CHECKS
            .iter()
            .zip(tols)
            .map(|(&name, tol)| CheckSpec { name, tol })
            .collect();
        let label = if source == target {
            source.to_string()
        } else {
            format!("{source} -> {target}")
        };
        run_trials(self.name(), config, label, &checks, |i| {
            let mut rng = trial_rng(config.seed, i);
            let iso = match random_composite_iso(source, target, &mut rng) {
                Ok(iso) => iso,
                Err(_) => return vec![Some(f64::INFINITY); CHECKS.len()],
            };
            let forward = |x: &Element| -> Result<Element> {
                let y = iso.apply(x, Direction::Forward)?;
                // self-test: squaring breaks both order preservation and invertibility of the pair
                Ok(if config.mutate { y.square() } else { y })
            };
            let backward = |y: &Element| iso.apply(y, Direction::Backward);
            let mut out = Vec::with_capacity(CHECKS.len());
            out.push(residual((|| {
                let (x, y) = ordered_pair(source, &mut rng)?;
                order_violation(&forward(&x)?, &forward(&y)?)
            })()));
            out.push(residual((|| {
                let (x, y) = ordered_pair(target, &mut rng)?;
                order_violation(&backward(&x)?, &backward(&y)?)
            })()));
            out.push(residual((|| {
                let e = Element::unit(source);
                let z = Element::zero(source);
                Ok(forward(&z)?
                    .norm()
                    .max(forward(&e)?.dist(&Element::unit(target))?))
            })()));
            out.push(residual((|| {
                let x = random_with(source, ElementClass::InvertibleEffect, &mut rng)?;
                Ok((INVERTIBLE_IMAGE_FLOOR - min_eigenvalue(&forward(&x)?)).max(0.0))
            })()));
            out.push(residual((|| {
                // compress an effect by e − p for an atom p: spectrum touches zero
                let p = random_with(source, ElementClass::Atom, &mut rng)?;
                let x = random_with(source, ElementClass::InvertibleEffect, &mut rng)?;
                let x = p.scale(-1.0).add_unit(1.0).quad_rep(&x)?;
                Ok(min_eigenvalue(&forward(&x)?).max(0.0))
            })()));
            out.push(if iso.engaged().is_empty() {
                None
            } else {
                residual((|| {
                    let part = &iso.engaged()[rng.random_range(0..iso.engaged().len())];
                    let local = part.iso.source();
                    let p = random_with(&local, ElementClass::Atom, &mut rng)?;
                    let lambda: f64 = 1.0 - rng.random::<f64>();
                    let img = part.iso.apply(&p.scale(lambda))?;
                    let img = if config.mutate {
                        img.add_unit(0.1 * lambda)
                    } else {
                        img
                    };
                    Ok(second_largest_eigenvalue(&img).max(0.0))
                })())
            });
            out.push(residual((|| {
                let x = random_with(source, ElementClass::Effect, &mut rng)?;
                let y = random_with(target, ElementClass::Effect, &mut rng)?;
                let fx = forward(&x)?;
                Ok(backward(&fx)?
                    .dist(&x)?
                    .max(forward(&backward(&y)?)?.dist(&y)?))
            })()));
            out.push(residual((|| {
                let x = random_with(source, ElementClass::Effect, &mut rng)?;
                let t = PhiParam::new(random_t(&mut rng))?;
                let s = PhiParam::new(random_t(&mut rng))?;
                let lhs = phi_apply(t, &phi_apply(s, &x)?)?;
                let rhs = phi_apply(t.compose(s)?, &x)?;
                lhs.dist(&rhs)
            })()));
            out.push(if iso.engaged().is_empty() {
                None
            } else {
                residual((|| {
                    let part = &iso.engaged()[rng.random_range(0..iso.engaged().len())];
                    let local = part.iso.source();
                    let j = part.iso.jordan();
                    let y = random_with(&local, ElementClass::Interior, &mut rng)?;
                    let x = random_with(&local, ElementClass::InvertibleEffect, &mut rng)?;
                    let lifted = lift_cone_iso(&y, j, &x)?;
                    let bound = max_eigenvalue(&y.square());
                    let mut worst: f64 = 0.0;
                    for lambda in [None, Some(2.0 * bound + 3.0)] {
                        let closed = param_from_y(&y, lambda, j)?.apply(&x)?;
                        worst = worst.max(closed.dist(&lifted)?);
                    }
                    Ok(worst)
                })())
            });
            out
        })
    }
}
