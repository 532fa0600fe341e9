#[path = "support/brute_force.rs"]
mod brute_force;

#[test]
fn generic_point_matches_brute_force_derived() {
    let (library, oracle) = brute_force::generic_unit_point(false);
    assert_eq!(library, oracle);
}

#[test]
fn generic_point_matches_brute_force_tabulated() {
    let (library, oracle) = brute_force::generic_unit_point(true);
    assert_eq!(library, oracle);
}
