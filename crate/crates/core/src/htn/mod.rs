//! Operators, methods, task networks and decomposition.

mod method;
mod network;
mod operator;
mod steps;

pub use method::{
    decompose, enumerate_decompositions, guard_holds, instantiate_subtasks, unify, CompoundTask, GroundMethod,
    MethodId, MethodSchema, SubtaskTemplate,
};
pub use network::{CompoundId, TaskInstance, TaskNetwork, TaskSymbol};
pub use operator::{
    applicable, apply, write_effects, Agent, AttrTemplate, GroundOp, GroundOpId, Literal, OpId, OpKind, OperatorSchema,
    Param, Term,
};
pub(crate) use operator::{check_literal, ground_literal, resolve_template, same_kind};
pub use steps::{next_steps, reachable_ops, Expansion, Step, MAX_EXPANSION_DEPTH};
