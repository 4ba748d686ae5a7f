//! Acceptance suite: runs every criterion at its pinned tolerance and
//! prints one status line each (visible with `--nocapture`).

use reslab_core::acceptance;

#[test]
fn acceptance_criteria() {
    let results = acceptance::run_all();
    let mut all_passed = true;
    for r in &results {
        println!("{}", r.status_line());
        all_passed &= r.passed;
    }
    assert!(
        all_passed,
        "failing criteria:\n{}",
        results
            .iter()
            .filter(|r| !r.passed)
            .map(|r| r.status_line())
            .collect::<Vec<_>>()
            .join("\n")
    );
}
