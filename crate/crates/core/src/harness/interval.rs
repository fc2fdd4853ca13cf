//! `U_{x^{1/2}} : [0, r(x)] → [0, x]`, exact stabilization of the
//! approximants `g_n`, `h_n`, the decreasing approximants `max(x, 1/n)`, and
//! projection-lattice laws.

use rand_chacha::ChaCha8Rng;

use crate::algebra::{random_with, AlgebraDescriptor, Element, ElementClass};
use crate::error::Result;
use crate::iso::{interval_top_iso, Direction};
use crate::order::{proj_join, proj_meet};
use crate::spectral::{
    inf_dense_approx, least_positive_eigenvalue, max_eigenvalue, min_eigenvalue, prop_approx_maps,
    range_projection, sqrt,
};

use super::{
    relative_residual, residual, run_trials, trial_rng, CheckSpec, Suite, SuiteConfig, SuiteReport,
};

pub struct IntervalSuite;

const STABILIZATION_TOL: f64 = 1e-12;
const MONOTONE_STEPS: u32 = 8;

/// Cone element that is singular about half of the time: `U_p c` for a
/// random projection `p` and interior `c`.
fn cone_sample(d: &AlgebraDescriptor, rng: &mut ChaCha8Rng) -> Result<Element> {
    let c = random_with(d, ElementClass::Interior, rng)?;
    let p = random_with(d, ElementClass::Projection, rng)?;
    if p.norm() < 0.5 {
        return Ok(c);
    }
    p.quad_rep(&c)
}

fn violation(lo: &Element, hi: &Element) -> Result<f64> {
    Ok((-min_eigenvalue(&hi.sub(lo)?)).max(0.0))
}

const CHECKS: [&str; 5] = [
    "top_round_trip",
    "top_round_trip_inverse",
    "exact_stabilization",
    "inf_dense_monotone",
    "projection_lattice",
];

impl Suite for IntervalSuite {
    fn name(&self) -> &'static str {
        "interval"
    }

    fn description(&self) -> &'static str {
        "interval isomorphisms, approximation sequences and projection lattice"
    }

    fn default_tol(&self) -> f64 {
        1e-8
    }

    fn run(&self, config: &SuiteConfig) -> SuiteReport {
        let tol = config.tol.unwrap_or(self.default_tol());
        let d = &config.descriptor;
        let tols = [tol, tol, STABILIZATION_TOL, tol, tol];
        let checks: Vec<CheckSpec> = CHECKS
            .iter()
            .zip(tols)
            .map(|(&name, tol)| CheckSpec { name, tol })
            .collect();
        run_trials(self.name(), config, d.to_string(), &checks, |i| {
            let mut rng = trial_rng(config.seed, i);
            let backward = |x: &Element, y: &Element| -> Result<Element> {
                let b = interval_top_iso(x, y, Direction::Backward)?;
                Ok(if config.mutate { b.scale(1.001) } else { b })
            };
            let mut out = Vec::with_capacity(CHECKS.len());
            out.push(residual((|| {
                let x = cone_sample(d, &mut rng)?;
                let y = range_projection(&x)?.quad_rep(&random_with(
                    d,
                    ElementClass::Effect,
                    &mut rng,
                )?)?;
                let f = interval_top_iso(&x, &y, Direction::Forward)?;
                backward(&x, &f)?.dist(&y)
            })()));
            out.push(residual((|| {
                let x = cone_sample(d, &mut rng)?;
                let y = sqrt(&x)?.quad_rep(&random_with(d, ElementClass::Effect, &mut rng)?)?;
                let b = backward(&x, &y)?;
                relative_residual(&interval_top_iso(&x, &b, Direction::Forward)?, &y)
            })()));
            out.push(residual((|| {
                let x = cone_sample(d, &mut rng)?;
                let lambda = least_positive_eigenvalue(&x)?.expect("non-zero cone sample");
                let n = (1.0 / lambda).floor() as u32 + 1;
                let (_, g, h) = prop_approx_maps(&x, n)?;
                let r = range_projection(&x)?;
                Ok(g.dist(&r)?.max(h.dist(&r)?))
            })()));
            out.push(residual((|| {
                let x = random_with(d, ElementClass::Effect, &mut rng)?;
                let mut worst: f64 = 0.0;
                let mut prev = inf_dense_approx(&x, 1)?;
                for n in 1..=MONOTONE_STEPS {
                    let next = inf_dense_approx(&x, n + 1)?;
                    worst = worst.max(violation(&next, &prev)?);
                    worst = worst.max(violation(&x, &prev)?);
                    worst = worst.max((max_eigenvalue(&prev.sub(&x)?) - 1.0 / n as f64).max(0.0));
                    prev = next;
                }
                Ok(worst)
            })()));
            out.push(residual((|| {
                let p = random_with(d, ElementClass::Projection, &mut rng)?;
                let q = random_with(d, ElementClass::Projection, &mut rng)?;
                let meet = proj_meet(&p, &q)?;
                let join = proj_join(&p, &q)?;
                let mut worst = meet.square().dist(&meet)?.max(join.square().dist(&join)?);
                worst = worst.max(violation(&meet, &p)?).max(violation(&meet, &q)?);
                worst = worst.max(violation(&p, &join)?).max(violation(&q, &join)?);
                worst = worst
                    .max(proj_meet(&q, &p)?.dist(&meet)?)
                    .max(proj_join(&q, &p)?.dist(&join)?);
                worst = worst
                    .max(proj_meet(&p, &join)?.dist(&p)?)
                    .max(proj_join(&p, &meet)?.dist(&p)?);
                Ok(worst)
            })()));
            out
        })
    }
}
