//! Acceptance run: one PASS/FAIL line per criterion, then a nonzero exit if a
//! criterion fails that is not on the known-conflict list.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::{Duration, Instant};

use panache::ext::{h1_dim, h2_dim, yoneda_compose};
use panache::group::GroupPresentation;
use panache::lie::{galois_dim, is_large_u, u_of};
use panache::linalg::Rat;
use panache::mt::*;
use panache::panachage::{blend, counterexample_search, SearchBounds, SearchOutcome, SearchPattern};
use panache::suites::run_suite;

/// Criteria whose literal statement contradicts itself; their line may read FAIL.
const KNOWN_CONFLICTS: &[u32] = &[10];

/// Number, title and check of one criterion.
type Criterion = (u32, &'static str, fn() -> (bool, String));

struct Line {
    id: u32,
    ok: bool,
    detail: String,
}

fn workers() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1).min(8)
}

/// Runs `suite` until `count` instances qualify; the detail string carries the counts.
fn suite(name: &str, count: usize) -> (bool, String) {
    match run_suite(name, 0, count, (count as u64 * 50).max(100), workers()) {
        Ok(r) => {
            let mut d = format!("{name}: {} instances, {} checks, {} failures", r.instances, r.checks, r.failures.len());
            if r.vacuous > 0 {
                d.push_str(&format!(", {} vacuous samples", r.vacuous));
            }
            if let Some(f) = r.failures.first() {
                d.push_str(&format!(" (first: seed {} {})", f.seed, f.detail));
            }
            (r.passed(), d)
        }
        Err(e) => (false, format!("{name}: error {e}")),
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let out = f();
    (out, t.elapsed())
}

fn crit1() -> (bool, String) {
    let ((ok, d), t) = timed(|| suite("total-split", 200));
    let fast = t <= Duration::from_secs(60);
    (ok && fast, format!("{d}; {:.2}s (limit 60s)", t.as_secs_f64()))
}

fn crit4() -> (bool, String) {
    let (a, da) = suite("ia2-split", 100);
    let (b, db) = suite("ia3-split", 100);
    (a && b, format!("{da}; {db}"))
}

fn crit8() -> (bool, String) {
    let (ok, d) = suite("blend-yoneda", 100);
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/rank_two_pairs.json");
    let doc = match panache::io::workspace::load_workspace(&path) {
        Ok(doc) => doc,
        Err(e) => return (false, format!("{d}; fixture error {e}")),
    };
    let mut fixture_ok = true;
    let mut notes = Vec::new();
    for (name, expect_blend) in [("obstructed", false), ("compatible", true), ("compatible_rescaled", true), ("independent", false)] {
        let Ok(p) = doc.pair(name) else {
            fixture_ok = false;
            notes.push(format!("{name} missing"));
            continue;
        };
        let vanishes = yoneda_compose(&p.l, &p.n).map(|y| y.vanishes()).unwrap_or(!expect_blend);
        let blended = blend(p).map(|b| b.diagram().is_some_and(|d| d.validate().ok())).unwrap_or(false);
        let good = vanishes == blended && blended == expect_blend;
        fixture_ok &= good;
        notes.push(format!("{name} {}", if blended { "blends" } else { "obstructed" }));
    }
    (ok && fixture_ok, format!("{d}; fixtures: {}", notes.join(", ")))
}

fn crit9() -> (bool, String) {
    let (res, t) = timed(|| -> Result<Vec<String>, String> {
        let model = build_mt_model(9, 4).map_err(|e| e.to_string())?;
        let mut bad = Vec::new();
        for n in 1..=9 {
            let x = model.tate(n);
            let want = match n {
                1 => 4,
                n if n % 2 == 1 => 1,
                _ => 0,
            };
            let (h1, h2) = (h1_dim(&x), h2_dim(&x));
            if h1 != want || h2 != 0 {
                bad.push(format!("Q({n}): h1 {h1} (want {want}), h2 {h2}"));
            }
        }
        Ok(bad)
    });
    let fast = t <= Duration::from_secs(120);
    match res {
        Ok(bad) => (bad.is_empty() && fast, format!("h1/h2 of Q(1..9) in model (9, 4): {} mismatches {bad:?}; {:.2}s (limit 120s)", bad.len(), t.as_secs_f64())),
        Err(e) => (false, format!("model error {e}")),
    }
}

fn crit10() -> (bool, String) {
    let opts = ClassifyOptions::default();
    let mut subs: Vec<(String, bool)> = Vec::new();
    let case = |n, k| classify_three_dim(n, k, &opts).map(|c| c.case).map_err(|e| e.to_string());
    subs.push(("(4,1) Case I".into(), case(4, 1) == Ok(MtCase::I)));
    let c63 = classify_three_dim(6, 3, &opts);
    let got63 = c63.as_ref().map(|c| format!("{:?}", c.case)).unwrap_or_else(|e| e.to_string());
    subs.push((format!("(6,3) Case II with unique attached object (got {got63}; n = 2k, see known conflict)"), c63.is_ok_and(|c| c.case == MtCase::II && c.attached == Some("unique"))));
    let c83 = classify_three_dim(8, 3, &opts);
    subs.push(("(8,3) Case II with unique attached object".into(), c83.is_ok_and(|c| c.case == MtCase::II && c.attached == Some("unique"))));
    subs.push(("(6,5) Case III".into(), case(6, 5) == Ok(MtCase::III)));
    subs.push(("(4,2) Rejected".into(), matches!(case(4, 2), Ok(MtCase::Rejected(_)))));
    let rep_ok = classify_three_dim(4, 1, &opts).is_ok_and(|c| {
        let Some(m) = c.representative.as_ref() else { return false };
        let Ok(rep) = period_matrix_report(&c) else { return false };
        let expected: BTreeSet<String> = ["(2πi)^-4", "(2πi)^-4 ζ(3)", "*", "(2πi)^-1", "(2πi)^-1 log 2", "1"].iter().map(|s| s.to_string()).collect();
        is_large_u(m) && u_of(m).dim() == 3 && galois_dim(m) == 4 && rep.matrix.nonzero_entries() == expected && rep.notes.iter().any(|n| n.contains("Euler"))
    });
    subs.push(("M_{4,2}: large u, dim u 3, galois_dim 4, period symbols, Euler note".into(), rep_ok));
    let failed: Vec<&str> = subs.iter().filter(|(_, ok)| !ok).map(|(s, _)| s.as_str()).collect();
    let passed = subs.len() - failed.len();
    (failed.is_empty(), format!("{passed}/{} sub-checks pass; failing: {failed:?}", subs.len()))
}

fn crit11() -> (bool, String) {
    let rs = [Rat::from_int(2), Rat::from_int(3), Rat::new(3, 2)];
    let got: Vec<String> = rs.iter().map(|r| format!("{r}: {:?}", duality_check(6, r, 2).map_err(|e| e.to_string()))).collect();
    let ok = rs.iter().all(|r| duality_check(6, r, 2).unwrap_or(false));
    (ok, got.join(", "))
}

fn crit12() -> (bool, String) {
    match build_four_dim_example(&Rat::from_int(2), 2) {
        Ok(ex) => (ex.ia3 && ex.dim_u == 6 && ex.galois_dim == 7, format!("ia3 {}, dim u {}, galois_dim {}", ex.ia3, ex.dim_u, ex.galois_dim)),
        Err(e) => (false, format!("error {e}")),
    }
}

fn crit13() -> (bool, String) {
    let want = [((8, 1), (2, 1)), ((4, 9), (3, 2)), ((5, 1), (5, 1))];
    let examples_ok = want.iter().all(|&((a, b), (c, d))| kummer_canonical(&Rat::new(a, b)).is_ok_and(|k| k.value() == Rat::new(c, d)));
    let (ok, d) = suite("kummer", 1000);
    (examples_ok && ok, format!("8 -> 2, 4/9 -> 3/2, 5 -> 5: {examples_ok}; {d}"))
}

fn tate_abelian(degrees: &[i64]) -> Arc<GroupPresentation> {
    let ds: Vec<Vec<i64>> = degrees.iter().map(|&d| vec![d]).collect();
    Arc::new(GroupPresentation::abelian(vec![-2], &ds).expect("abelian presentation"))
}

fn pattern(degrees: &[i64], chars: &[i64]) -> SearchPattern {
    SearchPattern { presentation: tate_abelian(degrees), characters: chars.iter().map(|&c| vec![c]).collect() }
}

fn crit15() -> (bool, String) {
    let bounds = SearchBounds { seeds: 0..10_000, density: 0.7, max_found: 10_000, workers: workers() };
    let (out, t) = timed(|| counterexample_search(&pattern(&[1, 2], &[0, 1, 2]), &bounds));
    let out = match out {
        Ok(o) => o,
        Err(e) => return (false, format!("search error {e}")),
    };
    let fast = t <= Duration::from_secs(600);
    let found = out.instances();
    let reverified = found.iter().filter(|f| f.certificate.verify() && f.certificate.reverify(&f.object).unwrap_or(false)).count();
    let log = out.log();
    let main = format!(
        "{{0,-2,-4}}: {} seeds, {} instances, {} found, {reverified} certificates re-verified, {} theorem violations, {:.1}s (limit 600s)",
        log.seeds_tried,
        log.instances,
        found.len(),
        log.theorem_violations,
        t.as_secs_f64()
    );
    let mut ia3_ok = true;
    let mut ia3_notes = Vec::new();
    for (degs, chars) in [(&[1, 2, 3][..], &[0, 1, 3][..]), (&[2, 3, 5][..], &[0, 2, 5][..])] {
        let b = SearchBounds { seeds: 0..1000, density: 0.8, max_found: 10, workers: workers() };
        match counterexample_search(&pattern(degs, chars), &b) {
            Ok(o) => {
                let all_ia3 = o.log().ia3_instances == o.log().instances;
                let not_found = matches!(o, SearchOutcome::NotFound { .. });
                ia3_ok &= all_ia3 && not_found;
                ia3_notes.push(format!("chars {chars:?}: {} instances, all IA3 {all_ia3}, NotFound {not_found}", o.log().instances));
            }
            Err(e) => {
                ia3_ok = false;
                ia3_notes.push(format!("chars {chars:?}: error {e}"));
            }
        }
    }
    let ok = fast && reverified == found.len() && log.theorem_violations == 0 && ia3_ok;
    (ok, format!("{main}; {}", ia3_notes.join("; ")))
}

fn main() {
    // `cargo test` passes harness flags such as `--list`; answer them without running.
    if std::env::args().any(|a| a == "--list") {
        println!("acceptance: test");
        return;
    }
    let checks: Vec<Criterion> = vec![
        (1, "total class splits modulo u", crit1),
        (2, "total class is nonsplit modulo subobjects avoiding u", || suite("minimality", 200)),
        (3, "E_p / u_p originates from W_p + M/W_p; fails for A avoiding u_p", || suite("origination", 100)),
        (4, "IA2 at every q <= p, and IA3, force E_p / u_p to split", crit4),
        (5, "IA2' (q > p) gives origination from W_q + Gr", || suite("ia2-prime", 50)),
        (6, "u_p equals the relative kernel of W_p + M/W_p", || suite("up-kernel", 100)),
        (7, "Gr u_>=q splits along the two regions under IA2", || suite("gr-decomposition", 100)),
        (8, "blend succeeds iff the Yoneda product vanishes", crit8),
        (9, "mixed Tate model cohomology table", crit9),
        (10, "three-dimensional classification pipeline", crit10),
        (11, "Case III duality for r in {2, 3, 3/2}", crit11),
        (12, "four-dimensional example", crit12),
        (13, "Kummer canonicalization", crit13),
        (14, "exp and log of nilpotent matrices", || suite("exp-log", 100)),
        (15, "counterexample search contract", crit15),
    ];
    let mut lines = Vec::new();
    for (id, title, f) in checks {
        let ((ok, detail), t) = timed(f);
        let line = Line { id, ok, detail: format!("{title}. {detail} [{:.2}s]", t.as_secs_f64()) };
        println!("{} criterion {:>2}: {}", if line.ok { "PASS" } else { "FAIL" }, line.id, line.detail);
        lines.push(line);
    }
    let unexpected: Vec<u32> = lines.iter().filter(|l| !l.ok && !KNOWN_CONFLICTS.contains(&l.id)).map(|l| l.id).collect();
    let known: Vec<u32> = lines.iter().filter(|l| !l.ok && KNOWN_CONFLICTS.contains(&l.id)).map(|l| l.id).collect();
    if !known.is_empty() {
        println!("known conflicts reported as FAIL: {known:?}. (6,3) has n = 2k, which the classification itself rejects; Case II is exercised by (8,3).");
    }
    let passed = lines.iter().filter(|l| l.ok).count();
    println!("acceptance: {passed}/{} criteria pass", lines.len());
    if !unexpected.is_empty() {
        println!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
