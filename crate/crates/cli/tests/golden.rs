mod support;

#[test]
fn golden_reports() {
    let failures = support::check_all();
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}
