//! The ten acceptance criteria, each mapped to one verification suite and
//! run over the default configuration (ℚ and ℚ(√2), max degree 6).

use std::io::Write;
use std::time::Instant;

use mm::suites::{run_with, Ctx};
use mm::SuiteConfig;

const CRITERIA: [(&str, &str); 10] = [
    ("dims", "dimension suite: hdr_compute = truncated Čech at N and N+5 = oracle"),
    ("decomposition", "canonical decomposition: b∘a = id, dimension split, graded pullbacks"),
    ("duality", "duality: Gram matrices invertible, swap symmetry, push = pairing transpose"),
    ("functoriality", "functor laws on identities and composable pairs, residue theorem"),
    ("nori-end", "Nori endomorphisms: End = k, edge matrices reproduced by hdr_pull"),
    ("coalgebra", "coalgebra and comodule axioms, M2 and nilpotent fixtures"),
    ("lemma", "generator in powers of a, mu = 1..6, the (-3/4, 1/2) instance"),
    ("laumon-compat", "R_dR(LM(T)) matches the graded cohomology blockwise"),
    ("filtration", "fil1, Gr1, fil2 kernel and Cartier dual dimensions"),
    ("ayoub", "disjoint-union isomorphism and kernel submodule conditions"),
];

/// Written straight to stderr so the lines show up without --nocapture.
fn say(line: String) {
    let _ = writeln!(std::io::stderr().lock(), "{}", line);
}

#[test]
fn acceptance_criteria() {
    let start = Instant::now();
    let ctx = Ctx::new(&SuiteConfig::default()).expect("default corpus");
    let mut red = Vec::new();
    for (i, (suite, what)) in CRITERIA.iter().enumerate() {
        let t = Instant::now();
        let report = run_with(&ctx, suite).expect("known suite");
        let ok = report.passed();
        say(format!(
            "criterion {:>2} [{}] {}: {} ({} checks, {} ms)",
            i + 1,
            suite,
            what,
            if ok { "PASS" } else { "FAIL" },
            report.checks.len(),
            t.elapsed().as_millis()
        ));
        for c in report.failures() {
            say(format!("    failed: {} witness={}", c.name, c.witness.as_ref().map(|w| w.to_string()).unwrap_or_default()));
        }
        if !ok {
            red.push(i + 1);
        }
    }
    say(format!("total {} s", start.elapsed().as_secs()));
    assert!(red.is_empty(), "failing criteria: {:?}", red);
}
