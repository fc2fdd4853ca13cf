//! `jbw`: command-line driver for construction, application, inversion and
//! recovery of effect-algebra order isomorphisms, plus the verification suites.
//!
//! Exit codes: 0 success, 1 validation or usage error, 2 suite failure.
//! Errors are printed to stderr as `error[CODE]: message`.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use jbw_core::algebra::random_with;
use jbw_core::harness::{random_composite_iso, trial_rng, Registry, SuiteConfig, SuiteReport};
use jbw_core::io::{self, ReportDocument};
use jbw_core::iso::{
    phi_compose_t, recover_parameters, CompositeOrderIso, Direction, EngagedPart, RecoveryOptions,
    ScalarOrderIso,
};
use jbw_core::{AlgebraDescriptor, Element, ElementClass, Error, Result};

#[derive(Parser)]
#[command(
    name = "jbw",
    version,
    about = "Order isomorphisms of effect algebras of Euclidean Jordan algebras"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites and write a REPORT.
    Verify {
        #[arg(long)]
        algebra: PathBuf,
        /// Target algebra for the isomorphism suite (defaults to the source).
        #[arg(long)]
        target: Option<PathBuf>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long)]
        tol: Option<f64>,
        /// Suite name, or `all`.
        #[arg(long, default_value = "all")]
        suite: String,
        /// Inject a defect into each suite; the run must then fail.
        #[arg(long)]
        mutate: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Apply an ISO to an ELEMENT.
    Apply {
        #[arg(long)]
        iso: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Apply the inverse of an ISO to an ELEMENT.
    Invert {
        #[arg(long)]
        iso: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recover (t, z, J) from black-box evaluations of a single-factor ISO.
    Recover {
        #[arg(long)]
        iso: PathBuf,
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw a seeded random ELEMENT, or an ISO with `--class iso`.
    Random {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        target: Option<PathBuf>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// general, cone, interior, effect, invertible-effect, projection, atom or iso
        #[arg(long, default_value = "general")]
        class: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Product of scalar maps sending ½e to (2⁻¹, …, 2⁻ᴺ).
    DemoCounterexample {
        #[arg(long, default_value_t = 20)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_algebra(path: &Path) -> Result<AlgebraDescriptor> {
    io::parse_algebra(&read(path)?)
}

fn load_iso(path: &Path) -> Result<CompositeOrderIso> {
    io::parse_iso(&read(path)?)
}

fn load_element(path: &Path) -> Result<Element> {
    io::parse_element(&read(path)?)
}

/// Writes reports; returns whether every suite passed.
fn emit_reports(reports: Vec<SuiteReport>, out: Option<&Path>) -> Result<bool> {
    let doc = ReportDocument::new(reports);
    if out.is_some() {
        for r in &doc.reports {
            print!("{}", r.render_text());
        }
    } else {
        for r in &doc.reports {
            eprint!("{}", r.render_text());
        }
    }
    emit(out, &io::serialize_reports(&doc))?;
    Ok(doc.passed)
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Verify {
            algebra,
            target,
            seed,
            trials,
            tol,
            suite,
            mutate,
            out,
        } => {
            let mut config = SuiteConfig::new(load_algebra(&algebra)?)
                .seed(seed)
                .trials(trials)
                .mutate(mutate);
            if let Some(t) = target {
                config = config.target(load_algebra(&t)?);
            }
            if let Some(t) = tol {
                if !(t.is_finite() && t > 0.0) {
                    return Err(Error::Schema {
                        path: "--tol".into(),
                        message: format!("{t} is not a positive tolerance"),
                    });
                }
                config = config.tol(t);
            }
            let registry = Registry::default();
            let reports = if suite == "all" {
                registry.iter().map(|s| s.run(&config)).collect()
            } else {
                let s = registry.get(&suite).ok_or_else(|| Error::Schema {
                    path: "--suite".into(),
                    message: format!(
                        "unknown suite \"{suite}\" (known: all, {})",
                        registry.names().join(", ")
                    ),
                })?;
                vec![s.run(&config)]
            };
            emit_reports(reports, out.as_deref())
        }
        Command::Apply { iso, input, out } => {
            let y = load_iso(&iso)?.apply(&load_element(&input)?, Direction::Forward)?;
            emit(out.as_deref(), &io::serialize_element(&y))?;
            Ok(true)
        }
        Command::Invert { iso, input, out } => {
            let x = load_iso(&iso)?.apply(&load_element(&input)?, Direction::Backward)?;
            emit(out.as_deref(), &io::serialize_element(&x))?;
            Ok(true)
        }
        Command::Recover {
            iso,
            lambda,
            seed,
            out,
        } => {
            let black_box = load_iso(&iso)?;
            let source = black_box.source().clone();
            let target = black_box.target().clone();
            let options = RecoveryOptions {
                lambda,
                seed,
                ..RecoveryOptions::default()
            };
            let g = |x: &Element| black_box.apply(x, Direction::Forward);
            let recovered = recover_parameters(&g, &source, &target, &options)?;
            let iso = if source.engaged().is_empty() {
                // rank one: x ↦ x(z²+1)/(z²+x) is φ_s with s = 1/(z²+1)
                let z = recovered.z().coordinates()[0];
                let t = phi_compose_t(recovered.t().t(), 1.0 / (z * z + 1.0))?;
                CompositeOrderIso::new(
                    source,
                    target,
                    vec![0],
                    vec![ScalarOrderIso::phi(t)?],
                    vec![],
                )?
            } else {
                let part = EngagedPart {
                    source: 0,
                    target: 0,
                    iso: recovered,
                };
                CompositeOrderIso::new(source, target, vec![], vec![], vec![part])?
            };
            emit(out.as_deref(), &io::serialize_iso(&iso))?;
            Ok(true)
        }
        Command::Random {
            algebra,
            target,
            seed,
            class,
            out,
        } => {
            let source = load_algebra(&algebra)?;
            let mut rng = trial_rng(seed, 0);
            let text = if class == "iso" {
                let target = match target {
                    Some(t) => load_algebra(&t)?,
                    None => source.clone(),
                };
                io::serialize_iso(&random_composite_iso(&source, &target, &mut rng)?)
            } else {
                let c = ElementClass::from_name(&class).ok_or_else(|| Error::Schema {
                    path: "--class".into(),
                    message: format!("unknown class \"{class}\""),
                })?;
                io::serialize_element(&random_with(&source, c, &mut rng)?)
            };
            emit(out.as_deref(), &text)?;
            Ok(true)
        }
        Command::DemoCounterexample { n, out } => {
            if n == 0 {
                return Err(Error::Schema {
                    path: "--n".into(),
                    message: "length must be at least 1".into(),
                });
            }
            let registry = Registry::default();
            let suite = registry
                .get("counterexample")
                .expect("registered by default");
            let config = SuiteConfig::new(AlgebraDescriptor::real_sequence(n)?).n(n);
            emit_reports(vec![suite.run(&config)], out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            eprintln!(
                "error[USAGE]: {}",
                msg.lines()
                    .next()
                    .unwrap_or("")
                    .trim_start_matches("error: ")
            );
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error[{}]: {e}", e.code());
            ExitCode::from(1)
        }
    }
}
