mod common;

use beliefplan_core::{Agent, Mode};
use common::*;

#[test]
fn robot_starts_aligned_and_copresent() {
    scenario_a();
}

#[test]
fn human_starts_and_misses_the_salt() {
    scenario_b();
}

#[test]
fn stale_pasta_location() {
    scenario_c();
}

#[test]
fn legacy_human_start_misses_nothing_when_aligned() {
    let p = problem("cooking").with_start(Agent::Human);
    let legacy = plan_mode(&p, Mode::Legacy);
    assert_eq!(verdict(&p, &legacy), "S");
}
