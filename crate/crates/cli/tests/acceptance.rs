//! The acceptance gate: every criterion at its stated time limit, run one
//! after another so timings are not disturbed, with one line per criterion.

use std::io::Write;
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use polyana::functor_rep::test_morphisms;
use polyana::io;
use polyana::signatures::Colours;
use polyana::suites::{self, separating_square, Settings};

struct Criterion {
    number: usize,
    title: &'static str,
    limit: Option<Duration>,
    run: fn() -> Result<String, String>,
}

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn suite(name: &str) -> Result<String, String> {
    let report = suites::run(name, &Settings::default()).map_err(|e| e.to_string())?;
    if report.passed() {
        Ok(format!("checks passed: {}", report.checks.len()))
    } else {
        Err(report.to_string())
    }
}

fn separating_fixture() -> Result<String, String> {
    let text = std::fs::read_to_string(fixtures().join("orbit_projection.json"))
        .map_err(|e| e.to_string())?;
    let doc = io::parse(&text).map_err(|e| e.to_string())?;
    let h = io::algebra_morphism_from_doc(&doc).map_err(|e| e.to_string())?;
    let one = Colours::single();
    separating_square(&h, &test_morphisms(&one, 3)).map_err(|e| e.to_string())
}

fn check_twice() -> Result<String, String> {
    let limit = Duration::from_secs(120);
    let mut outputs = Vec::new();
    for _ in 0..2 {
        let start = Instant::now();
        let out = Command::new(env!("CARGO_BIN_EXE_polyana"))
            .args([
                "check",
                "--suite",
                "all",
                "--bound",
                "default",
                "--fixtures",
            ])
            .arg(fixtures())
            .output()
            .map_err(|e| e.to_string())?;
        let took = start.elapsed();
        if !out.status.success() {
            return Err(format!(
                "status {:?}\n{}",
                out.status.code(),
                String::from_utf8_lossy(&out.stdout)
            ));
        }
        if took > limit {
            return Err(format!("one run took {took:.1?}"));
        }
        outputs.push(out.stdout);
    }
    if outputs[0] != outputs[1] {
        return Err("repeated runs differ".into());
    }
    Ok(format!("two identical runs, {} bytes", outputs[0].len()))
}

const CRITERIA: [Criterion; 12] = [
    Criterion {
        number: 1,
        title: "monad laws for F, S, R",
        limit: Some(Duration::from_secs(10)),
        run: || suite("monad"),
    },
    Criterion {
        number: 2,
        title: "lax monoidal monads",
        limit: Some(Duration::from_secs(30)),
        run: || suite("lax"),
    },
    Criterion {
        number: 3,
        title: "Kleisli tensor",
        limit: Some(Duration::from_secs(30)),
        run: || suite("kleisli"),
    },
    Criterion {
        number: 4,
        title: "Linton tensor",
        limit: Some(Duration::from_secs(60)),
        run: || suite("linton"),
    },
    Criterion {
        number: 5,
        title: "split coequalizers and free tensors",
        limit: None,
        run: || suite("split"),
    },
    Criterion {
        number: 6,
        title: "analytic evaluation against Burnside",
        limit: None,
        run: || suite("evaluation"),
    },
    Criterion {
        number: 7,
        title: "combing trees",
        limit: Some(Duration::from_secs(60)),
        run: || suite("comb"),
    },
    Criterion {
        number: 8,
        title: "cartesian and weakly cartesian transformations",
        limit: None,
        run: || {
            let s = suite("cartesian")?;
            let w = separating_fixture()?;
            Ok(format!("{s}; shipped fixture: {w}"))
        },
    },
    Criterion {
        number: 9,
        title: "co-Yoneda and discrete coends",
        limit: None,
        run: || suite("coend"),
    },
    Criterion {
        number: 10,
        title: "analytic equivalence",
        limit: None,
        run: || suite("analytic"),
    },
    Criterion {
        number: 11,
        title: "Frobenius",
        limit: None,
        run: || suite("frobenius"),
    },
    Criterion {
        number: 12,
        title: "CLI check is green and deterministic",
        limit: None,
        run: check_twice,
    },
];

#[test]
fn acceptance() {
    let mut failed = Vec::new();
    for c in &CRITERIA {
        let start = Instant::now();
        let outcome = (c.run)();
        let took = start.elapsed();
        let outcome = match (outcome, c.limit) {
            (Ok(_), Some(limit)) if took > limit => {
                Err(format!("took {took:.2?}, limit {limit:?}"))
            }
            (o, _) => o,
        };
        let (verdict, detail) = match &outcome {
            Ok(detail) => ("pass", detail),
            Err(why) => {
                failed.push(c.number);
                ("FAIL", why)
            }
        };
        // Written to the handle directly so the lines survive output capture.
        let _ = writeln!(
            std::io::stdout().lock(),
            "criterion {:2} {verdict}  {:6.2}s  {}: {detail}",
            c.number,
            took.as_secs_f64(),
            c.title
        );
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
