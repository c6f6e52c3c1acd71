use std::io::Write;

use matfac::acceptance::{run_all, SEED};

#[test]
fn acceptance_criteria() {
    let results = run_all(SEED);
    // Written through the handle so the lines survive output capture.
    let mut out = std::io::stdout().lock();
    for r in &results {
        writeln!(out, "{r}").unwrap();
    }
    let failed: Vec<u8> = results.iter().filter(|r| !r.pass).map(|r| r.id).collect();
    assert_eq!(results.len(), 10);
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
