use myopic_web::{bound_value, simulate_obstacle};

#[test]
fn obstacle_runs_match_the_core_library() {
    let perfect = simulate_obstacle("nominal", 0.0, 1.5).unwrap();
    assert_eq!(perfect.outcome(), "reached_target");
    assert_eq!(perfect.dim(), 2);
    assert_eq!(perfect.path().len() % 2, 0);
    assert!(perfect.error() <= 5.0);

    assert_eq!(simulate_obstacle("nominal", 1.5, 1.5).unwrap().outcome(), "collided");
    let robust = simulate_obstacle("robust", 1.5, 1.5).unwrap();
    assert_eq!(robust.outcome(), "reached_target");
    assert!(robust.min_distance() > 0.0);
}

#[test]
fn bad_inputs_are_errors() {
    assert!(simulate_obstacle("sideways", 0.0, 1.5).is_err());
    assert!(simulate_obstacle("robust", 1.0, 0.5).is_err());
    assert!(bound_value(0, 1.0, 1.0, 0.0, 1.0, 1.0, 1.0).is_err());
}

#[test]
fn bound_matches_unit_values() {
    assert_eq!(bound_value(1, 1.0, 1.0, 0.0, 1.0, 1.0, 1.0).unwrap(), 320.0);
    assert_eq!(bound_value(1, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0).unwrap(), 366.0);
}
