//! Robot-to-human communication of attribute values.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::htn::{applicable, reachable_ops, write_effects, Agent, GroundOpId, TaskNetwork};
use crate::model::Model;
use crate::state::{diverging_attributes, AttrId, BeliefState, Value};

/// Tell the receiver that `attr` has `value`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CommAction {
    pub sender: Agent,
    pub receiver: Agent,
    pub attr: AttrId,
    pub value: Value,
}

impl CommAction {
    /// A robot-to-human message carrying the sender's value; the receiver
    /// must currently disagree.
    pub fn build(world: &BeliefState, human: &BeliefState, attr: AttrId) -> Result<CommAction> {
        let value = world.get(attr);
        if human.get(attr) == value {
            return Err(Error::StaleComm(attr));
        }
        Ok(CommAction { sender: Agent::Robot, receiver: Agent::Human, attr, value })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct CommPlan {
    pub actions: Vec<CommAction>,
}

impl CommPlan {
    pub fn is_empty(&self) -> bool {
        self.actions.is_empty()
    }

    pub fn len(&self) -> usize {
        self.actions.len()
    }

    /// Applies every action in order.
    pub fn apply(&self, receiver: &BeliefState) -> Result<BeliefState> {
        self.actions.iter().try_fold(receiver.clone(), |b, ca| apply_comm(ca, &b))
    }
}

pub fn apply_comm(ca: &CommAction, receiver: &BeliefState) -> Result<BeliefState> {
    if receiver.get(ca.attr) == ca.value {
        return Err(Error::StaleComm(ca.attr));
    }
    Ok(receiver.with(ca.attr, ca.value))
}

/// Which human operators the relevance test considers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum RelevanceScope {
    /// Every grounded human operator of the domain.
    #[default]
    AllOps,
    /// Operators the human agenda can still reach through its methods.
    Agenda,
}

/// Human operators under the given scope.
pub fn scoped_ops(model: &Model, scope: RelevanceScope, agenda: &TaskNetwork) -> Vec<GroundOpId> {
    match scope {
        RelevanceScope::AllOps => model.agent_ops(Agent::Human).collect(),
        RelevanceScope::Agenda => reachable_ops(model, agenda),
    }
}

/// True iff the two beliefs disagree on which of `ops` are applicable, or
/// some op applicable in both leaves different values on the attributes
/// it writes.
pub fn is_relevant_divergence(model: &Model, world: &BeliefState, human: &BeliefState, ops: &[GroundOpId]) -> bool {
    if world == human {
        return false;
    }
    ops.iter().any(|&g| {
        let op = model.ground_op(g);
        match (applicable(op, world), applicable(op, human)) {
            (true, true) => {
                let (w, h) = (write_effects(op, world), write_effects(op, human));
                op.eff.iter().any(|&(a, _)| w.get(a) != h.get(a))
            }
            (a, b) => a != b,
        }
    })
}

/// A minimum-size set of messages after which the remaining divergence is
/// no longer relevant. Breadth-first over subsets of the diverging
/// attributes, expanded in attribute order.
pub fn min_comm_bfs(model: &Model, world: &BeliefState, human: &BeliefState, ops: &[GroundOpId]) -> CommPlan {
    let Ok(report) = diverging_attributes(world, human) else { return CommPlan::default() };
    let diverging: Vec<AttrId> = report.attrs().collect();
    let mut visited: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut queue: VecDeque<(Vec<usize>, BeliefState)> = VecDeque::new();
    visited.insert(Vec::new());
    queue.push_back((Vec::new(), human.clone()));
    while let Some((subset, belief)) = queue.pop_front() {
        if !is_relevant_divergence(model, world, &belief, ops) {
            let actions = subset
                .iter()
                .map(|&i| CommAction {
                    sender: Agent::Robot,
                    receiver: Agent::Human,
                    attr: diverging[i],
                    value: world.get(diverging[i]),
                })
                .collect();
            return CommPlan { actions };
        }
        for (i, &attr) in diverging.iter().enumerate() {
            if subset.contains(&i) {
                continue;
            }
            let mut next = subset.clone();
            next.push(i);
            next.sort_unstable();
            if visited.insert(next.clone()) {
                let b = belief.with(attr, world.get(attr));
                queue.push_back((next, b));
            }
        }
    }
    unreachable!("full alignment leaves no divergence")
}
