//! Belief-aware hierarchical planning for a robot working with a human.
//!
//! The robot's belief is the ground truth. The human keeps its own belief,
//! updated by acting, by watching co-present actions, by assessing the
//! observable attributes of its current place, and by messages from the
//! robot. The planner searches a joint policy that branches on the human's
//! possible choices and inserts the fewest messages needed to keep the
//! human's belief from misleading it.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod belief;
pub mod comm;
pub mod error;
pub mod htn;
pub mod model;
pub mod observability;
pub mod planner;
pub mod state;

pub use belief::{Action, AgentModel, Beliefs, Dynamics};
pub use comm::{CommAction, CommPlan, RelevanceScope};
pub use error::{Error, Result};
pub use htn::Agent;
pub use model::{Model, ModelParts, Problem};
pub use planner::{plan, simulate, Mode, PlannerConfig, Policy, Verdict};
pub use state::{AttrId, BeliefState, ConstId, GroupId, Universe, UniverseBuilder, Value, VarId};
