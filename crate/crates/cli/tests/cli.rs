use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use jbw_core::io;
use tempfile::TempDir;

fn jbw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jbw"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

const MIXED: &str = r#"{"factors":[{"kind":"herm","n":3,"ring":"C"},{"kind":"spin","d":4},{"kind":"herm","n":1,"ring":"R"}]}"#;

#[test]
fn apply_then_invert_round_trips() {
    let dir = TempDir::new().unwrap();
    let alg = write(&dir, "a.json", MIXED);
    let (iso, x, y, back) = (
        dir.path().join("f.json"),
        dir.path().join("x.json"),
        dir.path().join("y.json"),
        dir.path().join("b.json"),
    );
    assert!(jbw(&[
        "random",
        "--algebra",
        s(&alg),
        "--seed",
        "3",
        "--class",
        "iso",
        "--out",
        s(&iso)
    ])
    .status
    .success());
    assert!(jbw(&[
        "random",
        "--algebra",
        s(&alg),
        "--seed",
        "4",
        "--class",
        "effect",
        "--out",
        s(&x)
    ])
    .status
    .success());
    let o = jbw(&["apply", "--iso", s(&iso), "--in", s(&x), "--out", s(&y)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let o = jbw(&["invert", "--iso", s(&iso), "--in", s(&y), "--out", s(&back)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let x = io::parse_element(&fs::read_to_string(&x).unwrap()).unwrap();
    let back = io::parse_element(&fs::read_to_string(&back).unwrap()).unwrap();
    assert!(x.dist(&back).unwrap() <= 1e-8);
}

#[test]
fn random_is_deterministic_and_writes_stdout() {
    let dir = TempDir::new().unwrap();
    let alg = write(&dir, "a.json", MIXED);
    for class in [
        "general",
        "cone",
        "interior",
        "effect",
        "invertible-effect",
        "projection",
        "atom",
        "iso",
    ] {
        let a = jbw(&[
            "random",
            "--algebra",
            s(&alg),
            "--seed",
            "9",
            "--class",
            class,
        ]);
        let b = jbw(&[
            "random",
            "--algebra",
            s(&alg),
            "--seed",
            "9",
            "--class",
            class,
        ]);
        assert!(a.status.success(), "{class}: {}", stderr(&a));
        assert_eq!(a.stdout, b.stdout);
        io::parse_document(&String::from_utf8(a.stdout).unwrap()).unwrap();
    }
}

#[test]
fn demo_counterexample_reports_exact_coordinates() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("r.json");
    let o = jbw(&["demo-counterexample", "--n", "20", "--out", s(&out)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let doc = io::parse_document(&fs::read_to_string(&out).unwrap()).unwrap();
    let io::Document::Report(doc) = doc else {
        panic!("expected a report")
    };
    assert!(doc.passed);
    let coords = &doc.reports[0].series["coordinates"];
    assert_eq!(coords.len(), 20);
    for (k, c) in coords.iter().enumerate() {
        assert_eq!(*c, 0.5f64.powi(k as i32 + 1));
    }
}

#[test]
fn verify_passes_and_mutation_exits_two() {
    let dir = TempDir::new().unwrap();
    let alg = write(
        &dir,
        "a.json",
        r#"{"factors":[{"kind":"herm","n":2,"ring":"H"},{"kind":"herm","n":1,"ring":"R"}]}"#,
    );
    let out = dir.path().join("r.json");
    let o = jbw(&[
        "verify",
        "--algebra",
        s(&alg),
        "--seed",
        "42",
        "--trials",
        "40",
        "--tol",
        "1e-8",
        "--out",
        s(&out),
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stdout)
    );
    let text = fs::read_to_string(&out).unwrap();
    let io::Document::Report(doc) = io::parse_document(&text).unwrap() else {
        panic!("expected a report")
    };
    assert_eq!(doc.reports.len(), 5);

    let o = jbw(&[
        "verify",
        "--algebra",
        s(&alg),
        "--trials",
        "40",
        "--mutate",
        "--suite",
        "order-iso",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_is_deterministic_apart_from_timing() {
    let dir = TempDir::new().unwrap();
    let alg = write(&dir, "a.json", r#"{"factors":[{"kind":"spin","d":3}]}"#);
    let run = || {
        let o = jbw(&[
            "verify",
            "--algebra",
            s(&alg),
            "--seed",
            "7",
            "--trials",
            "30",
        ]);
        assert!(o.status.success());
        let io::Document::Report(doc) =
            io::parse_document(&String::from_utf8(o.stdout).unwrap()).unwrap()
        else {
            panic!("expected a report")
        };
        doc.reports
            .iter()
            .map(|r| r.without_timing())
            .collect::<Vec<_>>()
    };
    assert_eq!(run(), run());
}

#[test]
fn recover_reproduces_single_factor_map() {
    let dir = TempDir::new().unwrap();
    for (name, alg) in [
        ("herm", r#"{"factors":[{"kind":"herm","n":3,"ring":"C"}]}"#),
        (
            "scalar",
            r#"{"factors":[{"kind":"herm","n":1,"ring":"R"}]}"#,
        ),
    ] {
        let alg = write(&dir, &format!("{name}.json"), alg);
        let iso = dir.path().join(format!("{name}-f.json"));
        let rec = dir.path().join(format!("{name}-g.json"));
        assert!(jbw(&[
            "random",
            "--algebra",
            s(&alg),
            "--seed",
            "5",
            "--class",
            "iso",
            "--out",
            s(&iso)
        ])
        .status
        .success());
        let o = jbw(&["recover", "--iso", s(&iso), "--out", s(&rec)]);
        assert!(o.status.success(), "{name}: {}", stderr(&o));
        let f = io::parse_iso(&fs::read_to_string(&iso).unwrap()).unwrap();
        let g = io::parse_iso(&fs::read_to_string(&rec).unwrap()).unwrap();
        let d = f.source().clone();
        for seed in 0..10 {
            let x =
                jbw_core::algebra::random_element(&d, 100 + seed, jbw_core::ElementClass::Effect)
                    .unwrap();
            let a = f.apply(&x, jbw_core::iso::Direction::Forward).unwrap();
            let b = g.apply(&x, jbw_core::iso::Direction::Forward).unwrap();
            assert!(a.dist(&b).unwrap() <= 1e-6, "{name}");
        }
    }
}

#[test]
fn validation_errors_exit_one_with_code() {
    let dir = TempDir::new().unwrap();
    let alg = write(
        &dir,
        "a.json",
        r#"{"factors":[{"kind":"herm","n":2,"ring":"R"}]}"#,
    );
    let bad_t = write(
        &dir,
        "f.json",
        r#"{"source":{"factors":[{"kind":"herm","n":1,"ring":"R"}]},"sigma":[0],"scalar_isos":[{"kind":"phi","t":1.5}],"engaged":[]}"#,
    );
    let x = write(
        &dir,
        "x.json",
        r#"{"algebra":{"factors":[{"kind":"herm","n":1,"ring":"R"}]},"blocks":[[[0.5]]]}"#,
    );
    let shape = write(
        &dir,
        "y.json",
        r#"{"algebra":{"factors":[{"kind":"herm","n":2,"ring":"R"}]},"blocks":[[[0.5]]]}"#,
    );
    let missing = dir.path().join("missing.json");

    let cases: Vec<(Vec<&str>, &str)> = vec![
        (
            vec!["apply", "--iso", s(&bad_t), "--in", s(&x)],
            "PHI_PARAM_RANGE",
        ),
        (vec!["random", "--algebra", s(&shape)], "SCHEMA"),
        (vec!["apply", "--iso", s(&missing), "--in", s(&x)], "IO"),
        (
            vec!["random", "--algebra", s(&alg), "--class", "bogus"],
            "SCHEMA",
        ),
        (
            vec!["verify", "--algebra", s(&alg), "--suite", "bogus"],
            "SCHEMA",
        ),
        (
            vec!["verify", "--algebra", s(&alg), "--frobnicate"],
            "USAGE",
        ),
        (vec!["demo-counterexample", "--n", "0"], "SCHEMA"),
    ];
    for (args, code) in cases {
        let o = jbw(&args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(
            stderr(&o).starts_with(&format!("error[{code}]")),
            "{args:?}: {}",
            stderr(&o)
        );
    }

    let iso = write(
        &dir,
        "g.json",
        &io::serialize_iso(&jbw_core::iso::CompositeOrderIso::standard(
            &io::parse_algebra(r#"{"factors":[{"kind":"herm","n":2,"ring":"R"}]}"#).unwrap(),
        )),
    );
    let o = jbw(&["apply", "--iso", s(&iso), "--in", s(&shape)]);
    assert!(
        stderr(&o).starts_with("error[SHAPE_MISMATCH]"),
        "{}",
        stderr(&o)
    );
}
