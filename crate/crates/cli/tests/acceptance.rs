//! Full acceptance sweep: runs every criterion and prints one line per result.
//!
//! The fast tier runs by default. The slow tier (larger Coxeter groups and the
//! rank-3 matrix-group instances) is behind `--ignored`:
//!
//! ```text
//! cargo test --test acceptance -- --ignored --nocapture
//! ```

use coxcert::accept::run_acceptance;

fn report(slow: bool) {
    let results = run_acceptance(slow, 0);
    let mut ok = true;
    for r in &results {
        let status = if r.pass { "PASS" } else { "FAIL" };
        println!("criterion {:02} {}: {} — {}", r.index, r.name, status, r.detail);
        ok &= r.pass;
    }
    assert!(ok, "at least one acceptance criterion failed");
}

#[test]
fn acceptance_fast() {
    report(false);
}

#[test]
#[ignore = "slow tier: D4 contractions and rank-3 bimodule equivalences"]
fn acceptance_slow() {
    report(true);
}
