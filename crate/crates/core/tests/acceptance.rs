//! Runs the ten acceptance criteria and prints one PASS/FAIL line for each.
//!
//! Criteria 4 and 5 are false as stated; their counterexamples are listed in
//! the README. They are run and reported like the others, but only an
//! unexpected failure makes this target exit nonzero.

use std::process::ExitCode;

use singmod::acceptance::{run_all, AcceptanceConfig};

/// Criteria with known counterexamples: id, number of violations, reason.
const KNOWN_COUNTEREXAMPLES: [(u8, usize, &str); 2] = [
    (4, 1, "the A3 form 2,10,4,1,0,6 has r(1) = 12 > 6"),
    (5, 10, "non-fundamental discriminants, e.g. x^2 + 25y^2 = 625 has 12 > 10 solutions"),
];

fn main() -> ExitCode {
    let config = AcceptanceConfig::default();
    if let Some(dir) = config.store.dir() {
        println!("class polynomial cache: {}", dir.display());
    }
    let results = run_all(&config, |r| println!("{r}"));
    let mut unexpected = 0;
    for r in &results {
        let known = KNOWN_COUNTEREXAMPLES.iter().find(|(id, ..)| *id == r.id);
        match (r.passed, known) {
            (false, Some((_, count, why))) if r.within_budget && r.failures.len() == *count => {
                println!("   criterion {} fails as expected: {why}", r.id)
            }
            (true, Some(_)) => println!("   criterion {} now passes; its counterexamples are gone", r.id),
            (false, _) => {
                unexpected += 1;
                for f in &r.failures {
                    println!("   {f}");
                }
            }
            (true, None) => {}
        }
    }
    let passed = results.iter().filter(|r| r.passed).count();
    println!("acceptance: {passed}/{} criteria passed, {unexpected} unexpected failures", results.len());
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
