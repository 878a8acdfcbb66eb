//! Belief updates around one action: acting, observing, situation assessment.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::htn::{applicable, write_effects, Agent, GroundOpId, TaskNetwork};
use crate::model::Model;
use crate::state::BeliefState;

/// A primitive step in a plan.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Action {
    Op(GroundOpId),
    /// Agenda exhausted.
    Idle,
    /// Agenda not exhausted but nothing is applicable.
    Wait,
}

impl Action {
    pub fn is_inactive(self) -> bool {
        !matches!(self, Action::Op(_))
    }

    pub fn op(self) -> Option<GroundOpId> {
        match self {
            Action::Op(g) => Some(g),
            _ => None,
        }
    }
}

/// How action effects reach the beliefs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Dynamics {
    /// Acting, observation under co-presence, then situation assessment.
    Aware,
    /// Every effect reaches both agents; no assessment.
    Omniscient,
}

/// Ground truth (the robot's belief) and the human's belief.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Beliefs {
    pub world: BeliefState,
    pub human: BeliefState,
}

impl Beliefs {
    pub fn of(&self, agent: Agent) -> &BeliefState {
        match agent {
            Agent::Robot => &self.world,
            Agent::Human => &self.human,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AgentModel {
    pub agent: Agent,
    pub belief: BeliefState,
    pub agenda: TaskNetwork,
    pub plan: Vec<Action>,
}

/// The actor's own belief after executing `action`.
pub fn update_on_act(model: &Model, belief: &BeliefState, action: Action) -> Result<BeliefState> {
    match action {
        Action::Op(g) => {
            let op = model.ground_op(g);
            if !applicable(op, belief) {
                return Err(Error::NotApplicable(model.show_op(g)));
            }
            Ok(write_effects(op, belief))
        }
        Action::Idle | Action::Wait => Ok(belief.clone()),
    }
}

/// The observer's belief after `actor` executed `action`, taking `world_before`
/// to `world_after`. The robot always learns the effects; the human only
/// when co-present with the actor in both states.
pub fn update_on_observe(
    model: &Model,
    observer: Agent,
    belief: &BeliefState,
    actor: Agent,
    action: Action,
    world_before: &BeliefState,
    world_after: &BeliefState,
) -> BeliefState {
    let Action::Op(g) = action else { return belief.clone() };
    let seen = observer == Agent::Robot
        || (model.copresent(observer, actor, world_before) && model.copresent(observer, actor, world_after));
    if seen {
        write_effects(model.ground_op(g), belief)
    } else {
        belief.clone()
    }
}

/// One execution step: act, observe, assess.
///
/// The actor's applicability is checked against its own belief. When the
/// human acts, the world takes the effects without a check; callers that
/// need validity against ground truth test it beforehand.
pub fn step_beliefs(model: &Model, dynamics: Dynamics, actor: Agent, action: Action, b: &Beliefs) -> Result<Beliefs> {
    let acted = update_on_act(model, b.of(actor), action)?;
    let Action::Op(g) = action else { return Ok(b.clone()) };
    let op = model.ground_op(g);
    match (dynamics, actor) {
        (Dynamics::Omniscient, Agent::Robot) => Ok(Beliefs { world: acted, human: write_effects(op, &b.human) }),
        (Dynamics::Omniscient, Agent::Human) => Ok(Beliefs { world: write_effects(op, &b.world), human: acted }),
        (Dynamics::Aware, Agent::Robot) => {
            let human = update_on_observe(model, Agent::Human, &b.human, actor, action, &b.world, &acted);
            let human = model.assess(&human, &acted);
            Ok(Beliefs { world: acted, human })
        }
        (Dynamics::Aware, Agent::Human) => {
            let world = update_on_observe(model, Agent::Robot, &b.world, actor, action, &b.world, &b.world);
            let human = model.assess(&acted, &world);
            Ok(Beliefs { world, human })
        }
    }
}

/// [`step_beliefs`] over agent structures; also appends the action to the
/// actor's plan. Agendas are left to the caller.
pub fn step_belief_protocol(
    model: &Model,
    dynamics: Dynamics,
    robot: &AgentModel,
    human: &AgentModel,
    actor: Agent,
    action: Action,
) -> Result<(AgentModel, AgentModel)> {
    let b = Beliefs { world: robot.belief.clone(), human: human.belief.clone() };
    let next = step_beliefs(model, dynamics, actor, action, &b)?;
    let mut r = AgentModel { belief: next.world, ..robot.clone() };
    let mut h = AgentModel { belief: next.human, ..human.clone() };
    match actor {
        Agent::Robot => r.plan.push(action),
        Agent::Human => h.plan.push(action),
    }
    Ok((r, h))
}
