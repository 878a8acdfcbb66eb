use alloc::collections::{BTreeMap, BTreeSet};
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::belief::{step_beliefs, Action, Beliefs, Dynamics};
use crate::comm::{is_relevant_divergence, min_comm_bfs, scoped_ops, CommPlan};
use crate::error::{Error, Result};
use crate::htn::{applicable, next_steps, Agent, Expansion, Step, TaskNetwork};
use crate::model::{Model, Problem};
use crate::planner::policy::{Leaf, Policy, PolicyEdge, PolicyNode};
use crate::planner::{Mode, PlannerConfig};
use crate::state::BeliefState;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Key {
    world: BeliefState,
    human: BeliefState,
    agendas: [TaskNetwork; 2],
    turn: Agent,
    stall: usize,
}

/// One candidate move of the acting agent.
#[derive(Clone, Debug)]
pub struct Choice {
    pub action: Action,
    pub node: Option<usize>,
    pub expansions: Vec<Expansion>,
    pub agenda: TaskNetwork,
}

/// Next moves of an agent whose agenda is evaluated in `belief`: every
/// exposed primitive applicable there, else WAIT (tasks left) or IDLE.
pub fn choices(model: &Model, agenda: &TaskNetwork, belief: &BeliefState) -> Vec<Choice> {
    if agenda.is_empty() {
        return alloc::vec![Choice {
            action: Action::Idle,
            node: None,
            expansions: Vec::new(),
            agenda: agenda.clone()
        }];
    }
    let steps = next_steps(model, agenda, belief);
    if steps.is_empty() {
        return alloc::vec![Choice {
            action: Action::Wait,
            node: None,
            expansions: Vec::new(),
            agenda: agenda.clone()
        }];
    }
    steps
        .into_iter()
        .map(|Step { op, node, expansions, agenda }| Choice {
            action: op.map_or(Action::Idle, Action::Op),
            node,
            expansions,
            agenda,
        })
        .collect()
}

/// Robot moves in tie-break order: operator name, then arguments, with
/// inactive moves last. Moves of the same operator that leave different
/// agendas stay in discovery order.
pub fn robot_choices(model: &Model, agenda: &TaskNetwork, world: &BeliefState) -> Vec<Choice> {
    let mut cs = choices(model, agenda, world);
    let rank = |c: &Choice| match c.action {
        Action::Op(g) => {
            let op = model.ground_op(g);
            (0, Some((model.operator(op.schema).name.as_str(), op.args.clone())))
        }
        _ => (1, None),
    };
    cs.sort_by(|a, b| rank(a).cmp(&rank(b)));
    cs
}

struct Search<'a> {
    model: &'a Model,
    cfg: &'a PlannerConfig,
    dynamics: Dynamics,
    solved: BTreeMap<Key, (Arc<PolicyNode>, bool)>,
    failed: BTreeMap<Key, usize>,
    on_path: BTreeSet<Key>,
    hit_depth: bool,
}

impl Search<'_> {
    /// A policy for the state, and whether it is free of stalled leaves.
    fn solve(&mut self, key: Key, depth: usize) -> Option<(Arc<PolicyNode>, bool)> {
        if let Some(hit) = self.solved.get(&key) {
            return Some(hit.clone());
        }
        let remaining = self.cfg.depth_bound.saturating_sub(depth);
        if matches!(self.failed.get(&key), Some(&r) if r >= remaining) || self.on_path.contains(&key) {
            return None;
        }
        let leaf = |leaf: Leaf, k: &Key| PolicyNode {
            world: k.world.clone(),
            human: k.human.clone(),
            agendas: k.agendas.clone(),
            turn: k.turn,
            stall: k.stall,
            comms: CommPlan::default(),
            edges: Vec::new(),
            leaf: Some(leaf),
        };
        if key.agendas.iter().all(TaskNetwork::is_empty) {
            let n = Arc::new(leaf(Leaf::Done, &key));
            self.solved.insert(key, (n.clone(), true));
            return Some((n, true));
        }
        if key.stall >= self.cfg.deadlock_run {
            if self.cfg.mode == Mode::Legacy {
                let n = Arc::new(leaf(Leaf::Stalled, &key));
                self.solved.insert(key, (n.clone(), false));
                return Some((n, false));
            }
            self.failed.insert(key, usize::MAX);
            return None;
        }
        if remaining == 0 {
            self.hit_depth = true;
            self.failed.insert(key, 0);
            return None;
        }

        self.on_path.insert(key.clone());
        let result = self.expand(&key, depth);
        self.on_path.remove(&key);
        match result {
            Some((edges, comms, clean)) => {
                let n = Arc::new(PolicyNode {
                    world: key.world.clone(),
                    human: key.human.clone(),
                    agendas: key.agendas.clone(),
                    turn: key.turn,
                    stall: key.stall,
                    comms,
                    edges,
                    leaf: None,
                });
                self.solved.insert(key, (n.clone(), clean));
                Some((n, clean))
            }
            None => {
                self.failed.insert(key, remaining);
                None
            }
        }
    }

    fn expand(&mut self, key: &Key, depth: usize) -> Option<(Vec<PolicyEdge>, CommPlan, bool)> {
        let model = self.model;
        let mut human = key.human.clone();
        let mut comms = CommPlan::default();
        if self.cfg.mode == Mode::New {
            let ops = scoped_ops(model, self.cfg.relevance, &key.agendas[Agent::Human.index()]);
            if is_relevant_divergence(model, &key.world, &human, &ops) {
                comms = min_comm_bfs(model, &key.world, &human, &ops);
                human = comms.apply(&human).expect("messages carry diverging values");
            }
        }
        let actor = key.turn;
        let beliefs = Beliefs { world: key.world.clone(), human };
        let agenda = &key.agendas[actor.index()];

        match actor {
            Agent::Robot => {
                let mut fallback = None;
                for c in robot_choices(model, agenda, &beliefs.world) {
                    let Some(child_key) = self.transition(key, &beliefs, &c) else { continue };
                    if let Some((child, clean)) = self.solve(child_key, depth + 1) {
                        let edge =
                            PolicyEdge { actor, action: c.action, expansions: c.expansions, node: c.node, child };
                        if clean {
                            return Some((alloc::vec![edge], comms, true));
                        }
                        if fallback.is_none() {
                            fallback = Some(edge);
                        }
                    }
                }
                fallback.map(|e| (alloc::vec![e], comms, false))
            }
            Agent::Human => {
                let mut edges = Vec::new();
                let mut clean = true;
                for c in choices(model, agenda, &beliefs.human) {
                    if self.cfg.mode == Mode::New {
                        if let Action::Op(g) = c.action {
                            if !applicable(model.ground_op(g), &beliefs.world) {
                                return None;
                            }
                        }
                    }
                    let child_key = self.transition(key, &beliefs, &c)?;
                    let (child, ok) = self.solve(child_key, depth + 1)?;
                    clean &= ok;
                    edges.push(PolicyEdge { actor, action: c.action, expansions: c.expansions, node: c.node, child });
                }
                Some((edges, comms, clean))
            }
        }
    }

    fn transition(&self, key: &Key, beliefs: &Beliefs, c: &Choice) -> Option<Key> {
        let next = step_beliefs(self.model, self.dynamics, key.turn, c.action, beliefs).ok()?;
        let mut agendas = key.agendas.clone();
        agendas[key.turn.index()] = c.agenda.clone();
        Some(Key {
            world: next.world,
            human: next.human,
            agendas,
            turn: key.turn.other(),
            stall: if c.action.is_inactive() { key.stall + 1 } else { 0 },
        })
    }
}

/// Searches a joint policy for the problem.
///
/// Robot turns pick the first move (in tie-break order) whose subtree is
/// solvable; human turns must cover every emulated choice.
pub fn plan(problem: &Problem, cfg: &PlannerConfig) -> Result<Policy> {
    let model = &*problem.model;
    let dynamics = match cfg.mode {
        Mode::New => Dynamics::Aware,
        Mode::Legacy => Dynamics::Omniscient,
    };
    let human = match cfg.mode {
        Mode::New => model.assess(&problem.human_belief, &problem.world),
        Mode::Legacy => problem.human_belief.clone(),
    };
    let root = Key {
        world: problem.world.clone(),
        human,
        agendas: [problem.agenda(Agent::Robot), problem.agenda(Agent::Human)],
        turn: problem.start,
        stall: 0,
    };
    let mut search = Search {
        model,
        cfg,
        dynamics,
        solved: BTreeMap::new(),
        failed: BTreeMap::new(),
        on_path: BTreeSet::new(),
        hit_depth: false,
    };
    match search.solve(root, 0) {
        Some((root, _)) => Ok(Policy { root, mode: cfg.mode, start: problem.start }),
        None if search.hit_depth => Err(Error::DepthExceeded(cfg.depth_bound)),
        None => Err(Error::Unsolvable),
    }
}
