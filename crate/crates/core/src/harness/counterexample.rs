//! Product of `φ_{t_n}` on `⊕ ℝ` sending `½e` to `(2^{-n})_n`: every finite
//! product stays invertible on `(0, e]`, but no spectral floor is uniform in
//! `N`. Also evaluates the competing parameter `½(3 − 2^n)` with the scalar
//! oracle `φ_t(½) = 1 / (2 − t)`.

use std::collections::BTreeMap;
use std::time::Instant;

use crate::algebra::{AlgebraDescriptor, Element};
use crate::iso::{counterexample_iso, phi_scalar, Direction, ScalarOrderIso};

use super::{finish, CheckReport, Suite, SuiteConfig, SuiteReport};

pub struct CounterexampleSuite;

pub const ALTERNATIVE_PARAMETER_LABEL: &str = "(3 - 2^n)/2";
pub const DEFAULT_LENGTH: usize = 20;
const EXACT_TOL: f64 = 1e-15;

fn alternative_parameter(n: u32) -> f64 {
    0.5 * (3.0 - 2f64.powi(n as i32))
}

fn oracle(t: f64) -> f64 {
    1.0 / (2.0 - t)
}

fn tally(name: &str, residuals: &[f64], tol: f64) -> CheckReport {
    let failed = residuals.iter().filter(|r| !(**r <= tol)).count();
    CheckReport {
        name: name.into(),
        passed: residuals.len() - failed,
        failed,
        worst_residual: residuals.iter().copied().fold(0.0, f64::max),
        tolerance: tol,
    }
}

impl Suite for CounterexampleSuite {
    fn name(&self) -> &'static str {
        "counterexample"
    }

    fn description(&self) -> &'static str {
        "finite products of phi maps with no uniform spectral floor"
    }

    fn default_tol(&self) -> f64 {
        1e-8
    }

    fn run(&self, config: &SuiteConfig) -> SuiteReport {
        let start = Instant::now();
        let tol = config.tol.unwrap_or(self.default_tol());
        let len = config.n.unwrap_or(DEFAULT_LENGTH).clamp(1, 1000);
        let cfg = SuiteConfig {
            trials: len,
            ..config.clone()
        };
        let ns: Vec<u32> = (1..=len as u32).collect();
        let target: Vec<f64> = ns.iter().map(|&n| 2f64.powi(-(n as i32))).collect();

        let (iso, image) = if config.mutate {
            // self-test: build the product from the competing parameter
            let d = AlgebraDescriptor::real_sequence(len).unwrap();
            let isos = ns
                .iter()
                .map(|&n| ScalarOrderIso::phi(alternative_parameter(n)).unwrap())
                .collect();
            let iso = crate::iso::CompositeOrderIso::new(
                d.clone(),
                d.clone(),
                (0..len).collect(),
                isos,
                vec![],
            )
            .unwrap();
            let image = iso
                .apply(&Element::unit(&d).scale(0.5), Direction::Forward)
                .unwrap();
            (iso, image)
        } else {
            counterexample_iso(len).expect("length is positive")
        };
        let coords = image.coordinates();
        let used: Vec<f64> = iso
            .scalar_isos()
            .iter()
            .map(|s| match s {
                ScalarOrderIso::Phi(t) => t.t(),
                ScalarOrderIso::Pwl(_) => f64::NAN,
            })
            .collect();
        let alternative: Vec<f64> = ns.iter().map(|&n| alternative_parameter(n)).collect();
        let alt_values: Vec<f64> = alternative.iter().map(|&t| oracle(t)).collect();

        let exact: Vec<f64> = coords
            .iter()
            .zip(&target)
            .map(|(c, t)| (c - t).abs())
            .collect();
        let used_oracle: Vec<f64> = used
            .iter()
            .zip(&target)
            .map(|(&t, &v)| (oracle(t) - v).abs().max((phi_scalar(t, 0.5) - v).abs()))
            .collect();
        // the competing parameter must miss 2^{-n}; residual 1 if it does not
        let alt_differs: Vec<f64> = alt_values
            .iter()
            .zip(&target)
            .map(|(a, t)| if (a - t).abs() > EXACT_TOL { 0.0 } else { 1.0 })
            .collect();
        let back = iso
            .apply(&image, Direction::Backward)
            .map(|b| b.coordinates());
        let round: Vec<f64> = match back {
            Ok(b) => b.iter().map(|v| (v - 0.5).abs()).collect(),
            Err(_) => vec![f64::INFINITY],
        };

        let checks = vec![
            tally("coordinates_exact", &exact, EXACT_TOL),
            tally("parameter_oracle", &used_oracle, EXACT_TOL),
            tally("alternative_parameter_differs", &alt_differs, 0.0),
            tally("round_trip", &round, tol),
        ];
        let mut report = finish(self.name(), &cfg, format!("R^{len}"), checks, start);
        let min = coords.iter().copied().fold(f64::INFINITY, f64::min);
        report.notes.push(format!(
            "t_n = 2 - 2^n gives phi(1/2) = 2^-n exactly; t_n = {ALTERNATIVE_PARAMETER_LABEL} gives phi(1/2) = {} at n = 1 (expected 0.5)",
            alt_values[0]
        ));
        report.notes.push(format!(
            "min coordinate {min:e} = 2^-{len}: no uniform spectral floor, the infinite product leaves (0, e]"
        ));
        report.series = BTreeMap::from([
            ("coordinates".to_string(), coords),
            ("t".to_string(), used),
            ("t_alternative".to_string(), alternative),
            ("alternative_values".to_string(), alt_values),
        ]);
        report
    }
}
