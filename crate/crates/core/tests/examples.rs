//! Runs every example once so they cannot rot.

#[path = "../examples/replica_solution.rs"]
mod replica_solution;

#[test]
fn run_replica_solution() {
    replica_solution::main();
}

#[path = "../examples/cost_ratio_theory.rs"]
mod cost_ratio_theory;

#[test]
fn run_cost_ratio_theory() {
    cost_ratio_theory::main();
}

#[path = "../examples/single_game.rs"]
mod single_game;

#[test]
fn run_single_game() {
    single_game::main();
}

#[path = "../examples/single_metaorder.rs"]
mod single_metaorder;

#[test]
fn run_single_metaorder() {
    single_metaorder::main();
}

#[path = "../examples/ensemble_impact.rs"]
mod ensemble_impact;

#[test]
fn run_ensemble_impact() {
    ensemble_impact::main();
}

#[path = "../examples/linear_collapse.rs"]
mod linear_collapse;

#[test]
fn run_linear_collapse() {
    linear_collapse::main();
}

#[path = "../examples/saturation_slope.rs"]
mod saturation_slope;

#[test]
fn run_saturation_slope() {
    saturation_slope::main();
}

#[path = "../examples/response_kernel.rs"]
mod response_kernel;

#[test]
fn run_response_kernel() {
    response_kernel::main();
}
