//! Seeded verification suites behind a common [`Suite`] trait, selected by
//! name from a [`Registry`].
//!
//! Trials run in parallel; each trial draws from its own ChaCha stream
//! derived from `(seed, trial index)`, and aggregation only uses counts and
//! maxima, so reports do not depend on scheduling.

mod counterexample;
mod identity;
mod interval;
mod order_iso;
mod scalar;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{random_general, AlgebraDescriptor, Element};
use crate::error::Result;
use crate::spectral::apply_function;

pub use counterexample::{CounterexampleSuite, ALTERNATIVE_PARAMETER_LABEL};
pub use identity::{mutated_quad_rep, IdentitySuite};
pub use interval::IntervalSuite;
pub use order_iso::{random_composite_iso, random_factor_iso, OrderIsoSuite};
pub use scalar::{scalar_formula, scalar_oracle_compare, ScalarOracleSuite};

// JSON has no infinity; serde_json writes it as null.
fn infinite_if_null<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
}

/// Pass/fail tally of one named check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub passed: usize,
    pub failed: usize,
    #[serde(deserialize_with = "infinite_if_null")]
    pub worst_residual: f64,
    pub tolerance: f64,
}

impl CheckReport {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub descriptor: String,
    pub seed: u64,
    pub trials: usize,
    pub passed: bool,
    #[serde(deserialize_with = "infinite_if_null")]
    pub worst_residual: f64,
    pub elapsed_ms: f64,
    pub checks: Vec<CheckReport>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub series: BTreeMap<String, Vec<f64>>,
}

impl SuiteReport {
    pub fn check(&self, name: &str) -> Option<&CheckReport> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Copy with the elapsed time zeroed, for determinism comparisons.
    pub fn without_timing(&self) -> SuiteReport {
        SuiteReport {
            elapsed_ms: 0.0,
            ..self.clone()
        }
    }

    pub fn render_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "suite {} [{}] seed={} trials={}: {} (worst residual {:.3e}, {:.1} ms)",
            self.suite,
            self.descriptor,
            self.seed,
            self.trials,
            if self.passed { "PASS" } else { "FAIL" },
            self.worst_residual,
            self.elapsed_ms
        );
        for c in &self.checks {
            let _ = writeln!(
                s,
                "  {:<28} {:>6}/{:<6} worst {:.3e}  tol {:.1e}  {}",
                c.name,
                c.passed,
                c.passed + c.failed,
                c.worst_residual,
                c.tolerance,
                if c.ok() { "ok" } else { "FAIL" }
            );
        }
        for n in &self.notes {
            let _ = writeln!(s, "  note: {n}");
        }
        s
    }
}

/// Inputs shared by all suites.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub descriptor: AlgebraDescriptor,
    /// Target algebra for suites that map between algebras; defaults to the source.
    pub target: Option<AlgebraDescriptor>,
    pub seed: u64,
    pub trials: usize,
    /// Overrides the suite's primary tolerance.
    pub tol: Option<f64>,
    /// Self-test mode: inject a defect that the suite must detect.
    pub mutate: bool,
    /// Size parameter for suites that take one (counterexample length, grid size).
    pub n: Option<usize>,
}

impl SuiteConfig {
    pub fn new(descriptor: AlgebraDescriptor) -> Self {
        SuiteConfig {
            descriptor,
            target: None,
            seed: 42,
            trials: 200,
            tol: None,
            mutate: false,
            n: None,
        }
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn trials(mut self, trials: usize) -> Self {
        self.trials = trials;
        self
    }

    pub fn tol(mut self, tol: f64) -> Self {
        self.tol = Some(tol);
        self
    }

    pub fn target(mut self, target: AlgebraDescriptor) -> Self {
        self.target = Some(target);
        self
    }

    pub fn mutate(mut self, on: bool) -> Self {
        self.mutate = on;
        self
    }

    pub fn n(mut self, n: usize) -> Self {
        self.n = Some(n);
        self
    }

    pub fn target_descriptor(&self) -> &AlgebraDescriptor {
        self.target.as_ref().unwrap_or(&self.descriptor)
    }
}

pub trait Suite: Send + Sync {
    fn name(&self) -> &'static str;
    fn description(&self) -> &'static str;
    /// Primary tolerance used when the config does not override it.
    fn default_tol(&self) -> f64;
    fn run(&self, config: &SuiteConfig) -> SuiteReport;
}

/// Suites keyed by name.
pub struct Registry {
    suites: BTreeMap<&'static str, Box<dyn Suite>>,
}

impl Registry {
    pub fn empty() -> Self {
        Registry {
            suites: BTreeMap::new(),
        }
    }

    pub fn register(&mut self, suite: Box<dyn Suite>) {
        self.suites.insert(suite.name(), suite);
    }

    pub fn get(&self, name: &str) -> Option<&dyn Suite> {
        self.suites.get(name).map(|s| s.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.suites.keys().copied().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn Suite> {
        self.suites.values().map(|s| s.as_ref())
    }
}

impl Default for Registry {
    fn default() -> Self {
        let mut r = Registry::empty();
        r.register(Box::new(IdentitySuite));
        r.register(Box::new(OrderIsoSuite));
        r.register(Box::new(IntervalSuite));
        r.register(Box::new(ScalarOracleSuite));
        r.register(Box::new(CounterexampleSuite));
        r
    }
}

/// `‖a − b‖ / max(1, ‖a‖, ‖b‖)`.
pub fn relative_residual(a: &Element, b: &Element) -> Result<f64> {
    Ok(a.dist(b)? / 1f64.max(a.norm()).max(b.norm()))
}

/// Per-trial generator: stream `trial` of the ChaCha generator seeded by `seed`.
pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

/// General element with every eigenvalue pushed at least `0.5` away from zero.
pub fn well_conditioned(descriptor: &AlgebraDescriptor, rng: &mut ChaCha8Rng) -> Result<Element> {
    apply_function(&random_general(descriptor, rng), |l| {
        if l < 0.0 {
            l - 0.5
        } else {
            l + 0.5
        }
    })
}

/// Name and tolerance of a check.
pub(crate) struct CheckSpec {
    pub name: &'static str,
    pub tol: f64,
}

/// Residual of one check in one trial; `None` when not applicable.
pub(crate) type TrialOutcome = Vec<Option<f64>>;

/// Runs `trial` for every index in parallel and tallies the outcomes.
pub(crate) fn run_trials(
    suite: &str,
    config: &SuiteConfig,
    descriptor: String,
    checks: &[CheckSpec],
    trial: impl Fn(usize) -> TrialOutcome + Sync,
) -> SuiteReport {
    let start = Instant::now();
    let outcomes: Vec<TrialOutcome> = (0..config.trials).into_par_iter().map(&trial).collect();
    let mut reports: Vec<CheckReport> = checks
        .iter()
        .map(|c| CheckReport {
            name: c.name.to_string(),
            passed: 0,
            failed: 0,
            worst_residual: 0.0,
            tolerance: c.tol,
        })
        .collect();
    for outcome in &outcomes {
        for (r, value) in reports.iter_mut().zip(outcome) {
            if let Some(v) = *value {
                // NaN counts as a failure
                if v <= r.tolerance {
                    r.passed += 1;
                } else {
                    r.failed += 1;
                }
                r.worst_residual = if v.is_nan() {
                    f64::INFINITY
                } else {
                    r.worst_residual.max(v)
                };
            }
        }
    }
    finish(suite, config, descriptor, reports, start)
}

pub(crate) fn finish(
    suite: &str,
    config: &SuiteConfig,
    descriptor: String,
    checks: Vec<CheckReport>,
    start: Instant,
) -> SuiteReport {
    let worst = checks.iter().map(|c| c.worst_residual).fold(0.0, f64::max);
    SuiteReport {
        suite: suite.to_string(),
        descriptor,
        seed: config.seed,
        trials: config.trials,
        passed: checks.iter().all(CheckReport::ok),
        worst_residual: worst,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
        checks,
        notes: Vec::new(),
        series: BTreeMap::new(),
    }
}

/// Collapses a fallible residual: errors count as an infinite residual.
pub(crate) fn residual(r: Result<f64>) -> Option<f64> {
    Some(r.unwrap_or(f64::INFINITY))
}
