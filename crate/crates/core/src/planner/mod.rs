//! Joint robot-human policy search and execution-time evaluation.

mod deadlock;
mod policy;
mod search;
mod simulate;

pub use deadlock::{detect_deadlock, detect_deadlock_with, DEADLOCK_RUN};
pub use policy::{Leaf, Policy, PolicyEdge, PolicyNode};
pub use search::{choices, plan, robot_choices, Choice};
pub use simulate::{judging_dynamics, simulate, simulate_with, ExecutionReport, Resolver, Verdict};

use crate::comm::RelevanceScope;

/// Default bound on actions along one policy branch.
pub const DEFAULT_DEPTH_BOUND: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mode {
    /// Observation-aware beliefs with communication.
    New,
    /// Every agent sees every effect; no assessment, no communication.
    Legacy,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::New => "new",
            Mode::Legacy => "legacy",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PlannerConfig {
    pub mode: Mode,
    pub depth_bound: usize,
    pub deadlock_run: usize,
    pub relevance: RelevanceScope,
}

impl PlannerConfig {
    pub fn new(mode: Mode) -> PlannerConfig {
        PlannerConfig {
            mode,
            depth_bound: DEFAULT_DEPTH_BOUND,
            deadlock_run: DEADLOCK_RUN,
            relevance: RelevanceScope::AllOps,
        }
    }
}

/// Moves the human may make from its agenda under its own belief.
pub fn emulate_human_choices(
    model: &crate::model::Model,
    agenda: &crate::htn::TaskNetwork,
    human: &crate::state::BeliefState,
) -> alloc::vec::Vec<Choice> {
    choices(model, agenda, human)
}
