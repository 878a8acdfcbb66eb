use alloc::string::String;

use crate::state::AttrId;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Errors raised by the model, the belief machinery and the planner.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("unknown attribute `{0}`")]
    UnknownAttribute(String),
    #[error("bad argument: {0}")]
    BadArgument(String),
    #[error("beliefs were built from different declaration universes")]
    UniverseMismatch,
    #[error("invalid declaration: {0}")]
    Declaration(String),
    #[error("belief is not total: no value for attribute #{}", .0 .0)]
    NonTotal(AttrId),
    #[error("value out of domain for attribute #{}", .0 .0)]
    ValueOutOfDomain(AttrId),
    #[error("operator `{0}` is not applicable")]
    NotApplicable(String),
    #[error("method `{0}` is not relevant for the task")]
    NotRelevant(String),
    #[error("ordering constraints became cyclic")]
    CycleIntroduced,
    #[error("placement rule of attribute #{} does not denote a place", .0 .0)]
    BadRule(AttrId),
    #[error("stale communication: receiver already holds the value of attribute #{}", .0 .0)]
    StaleComm(AttrId),
    #[error("no robot strategy covers every emulated human choice")]
    Unsolvable,
    #[error("search exceeded the depth bound of {0}")]
    DepthExceeded(usize),
}
