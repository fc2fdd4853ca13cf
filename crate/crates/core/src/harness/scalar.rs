//! Library evaluation of the factor formula against direct real arithmetic
//! on `Herm(1, ℝ)`, and coordinatewise against diagonal inputs on `Herm(2, ℝ)`.

use rand::Rng;

use crate::algebra::{AlgebraDescriptor, DivisionRing, Element, FactorDescriptor};
use crate::error::Result;
use crate::iso::{FactorOrderIso, JordanIsomorphism, PhiParam};

use super::{residual, run_trials, trial_rng, CheckSpec, Suite, SuiteConfig, SuiteReport};

pub struct ScalarOracleSuite;

pub const DEFAULT_GRID: usize = 10_000;
const DIAGONAL_GRID: usize = 100;
const RANDOM_SETS: usize = 8;

/// `φ_t((z² + 1)(1 − (1 + s/z²)^{-1}))` in plain arithmetic.
pub fn scalar_formula(t: f64, z: f64, s: f64) -> f64 {
    let b = s / (z * z);
    let g = 1.0 - 1.0 / (1.0 + b);
    let h = (z * z + 1.0) * g;
    h / (t * h + 1.0 - t)
}

fn factor(n: usize) -> AlgebraDescriptor {
    AlgebraDescriptor::single(FactorDescriptor::hermitian(n, DivisionRing::Real).unwrap()).unwrap()
}

fn iso(t: f64, z: &[f64]) -> Result<FactorOrderIso> {
    let d = factor(z.len());
    FactorOrderIso::new(
        PhiParam::new(t)?,
        Element::real_diag(z),
        JordanIsomorphism::identity(&d),
    )
}

/// Largest deviation between the library and [`scalar_formula`] over a
/// uniform grid of `[0, 1]` with `grid` points.
pub fn scalar_oracle_compare(grid: usize, t: f64, z: f64) -> Result<f64> {
    scalar_deviation(grid, t, z, t)
}

fn scalar_deviation(grid: usize, t_lib: f64, z: f64, t_oracle: f64) -> Result<f64> {
    let f = iso(t_lib, &[z])?;
    let mut worst: f64 = 0.0;
    for k in 0..grid {
        let s = k as f64 / (grid - 1).max(1) as f64;
        let lib = f.apply(&Element::real_diag(&[s]))?.coordinates()[0];
        worst = worst.max((lib - scalar_formula(t_oracle, z, s)).abs());
    }
    Ok(worst)
}

fn diagonal_deviation(t_lib: f64, z: [f64; 2], t_oracle: f64) -> Result<f64> {
    let f = iso(t_lib, &z)?;
    let mut worst: f64 = 0.0;
    for a in 0..DIAGONAL_GRID {
        for b in [0.0, 0.37, 1.0] {
            let s = [a as f64 / (DIAGONAL_GRID - 1) as f64, b];
            let c = f.apply(&Element::real_diag(&s))?.coordinates();
            // diagonal coordinates first, then the off-diagonal entry
            worst = worst.max((c[0] - scalar_formula(t_oracle, z[0], s[0])).abs());
            worst = worst.max((c[1] - scalar_formula(t_oracle, z[1], s[1])).abs());
            worst = worst.max(c[2].abs());
        }
    }
    Ok(worst)
}

/// The two fixed parameter sets followed by seeded random ones.
fn parameter_set(seed: u64, k: usize) -> (f64, [f64; 2]) {
    match k {
        0 => (0.0, [1.0, 1.0]),
        1 => (0.5, [2.0, 2.0]),
        _ => {
            let mut rng = trial_rng(seed, k);
            let t = rng.random_range(-3.0..0.9);
            (t, [rng.random_range(0.2..3.0), rng.random_range(0.2..3.0)])
        }
    }
}

impl Suite for ScalarOracleSuite {
    fn name(&self) -> &'static str {
        "scalar-oracle"
    }

    fn description(&self) -> &'static str {
        "closed-form factor map against plain scalar arithmetic"
    }

    fn default_tol(&self) -> f64 {
        1e-12
    }

    fn run(&self, config: &SuiteConfig) -> SuiteReport {
        let tol = config
            .tol
            .unwrap_or(self.default_tol())
            .min(self.default_tol());
        let grid = config.n.unwrap_or(DEFAULT_GRID).max(2);
        let sets = SuiteConfig {
            trials: 2 + RANDOM_SETS,
            ..config.clone()
        };
        let checks = [
            CheckSpec {
                name: "scalar_grid",
                tol,
            },
            CheckSpec {
                name: "diagonal_reduction",
                tol,
            },
        ];
        let mut report = run_trials(
            self.name(),
            &sets,
            "Herm(1,R), Herm(2,R)".into(),
            &checks,
            |k| {
                let (t, z) = parameter_set(config.seed, k);
                let t_lib = if config.mutate { t + 1e-6 } else { t };
                vec![
                    residual(scalar_deviation(grid, t_lib, z[0], t)),
                    residual(diagonal_deviation(t_lib, z, t)),
                ]
            },
        );
        report
            .notes
            .push(format!("grid of {grid} points on [0, 1] per parameter set"));
        report
    }
}
