//! Acceptance suite: one PASS or FAIL line per criterion.
//!
//! Lines go straight to the stdout handle so they show without
//! `--nocapture`. Criteria listed in `KNOWN_FAILING` print FAIL without
//! failing the test; any other FAIL fails it.

use std::io::Write;
use std::time::{Duration, Instant};

use essence_core::par;
use essence_core::suite::{run_check, run_suite, SuiteConfig};

/// F1's height-0 count (16 against 12) and the converted plumbing picture,
/// whose unconverted half is not modelled.
const KNOWN_FAILING: &[u32] = &[5, 6];

/// Runtime limits in seconds for the timed criteria. Check 3 covers four
/// fixtures, so its limit is also the per-fixture limit.
const LIMITS: &[(u32, u64)] = &[(1, 60), (3, 5), (5, 120)];

fn line(out: &mut impl Write, id: u32, pass: bool, name: &str, detail: &str) {
    let tag = if pass { "PASS" } else { "FAIL" };
    writeln!(out, "[{tag}] {id:>2} {name}: {detail}").unwrap();
}

#[test]
fn acceptance() {
    let cfg = SuiteConfig::default();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    writeln!(out).unwrap();
    let mut unexpected = Vec::new();
    for id in 1..=10 {
        let start = Instant::now();
        let r = run_check(id, &cfg).expect("check exists");
        let took = start.elapsed();
        let limit = LIMITS.iter().find(|l| l.0 == id).map(|l| Duration::from_secs(l.1));
        let in_time = limit.is_none_or(|l| took <= l);
        let pass = r.pass && in_time;
        let mut detail = r.detail.clone();
        if let Some(l) = limit {
            detail.push_str(&format!(" ({} ms, limit {} s)", took.as_millis(), l.as_secs()));
        }
        line(&mut out, id, pass, r.name, &detail);
        if !pass && !KNOWN_FAILING.contains(&id) {
            unexpected.push(id);
        }
    }

    // the same JSON twice, and on one and on eight threads
    let render = |threads| {
        par::with_threads(threads, || serde_json::to_string(&run_suite(&cfg)).unwrap())
    };
    let a = render(1);
    let b = render(1);
    let c = render(8);
    let same = a == b && a == c;
    line(
        &mut out,
        11,
        same,
        "selftest determinism",
        &format!("{} bytes, runs agree {}, threads 1 and 8 agree {}", a.len(), a == b, a == c),
    );
    if !same {
        unexpected.push(11);
    }
    drop(out);
    assert!(unexpected.is_empty(), "unexpected failures: {unexpected:?}");
}
