use alloc::vec::Vec;

use crate::htn::method::{guard_holds, instantiate_subtasks, unify, GroundMethod};
use crate::htn::network::{TaskNetwork, TaskSymbol};
use crate::htn::operator::{applicable, GroundOpId};
use crate::model::Model;
use crate::state::BeliefState;

/// Bound on nested method expansions performed to reach one primitive.
pub const MAX_EXPANSION_DEPTH: usize = 24;

/// One method expansion: node position at the time, and the grounded method.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Expansion {
    pub node: usize,
    pub method: GroundMethod,
}

/// A next primitive action an agent can take from its agenda, together with
/// the expansions that exposed it and the agenda left afterwards.
///
/// `op == None` means the expansions emptied the agenda.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub op: Option<GroundOpId>,
    pub node: Option<usize>,
    pub expansions: Vec<Expansion>,
    pub agenda: TaskNetwork,
}

/// All next steps of an agenda whose primitive is applicable in `belief`.
///
/// Method guards are evaluated in `belief`. Steps are unique by
/// (operator, remaining agenda); the first expansion path found is kept.
pub fn next_steps(model: &Model, agenda: &TaskNetwork, belief: &BeliefState) -> Vec<Step> {
    let mut out = Vec::new();
    let mut path = Vec::new();
    explore(model, agenda, belief, &mut path, &mut out, 0);
    let mut unique: Vec<Step> = Vec::with_capacity(out.len());
    for s in out {
        if !unique.iter().any(|u| u.op == s.op && u.agenda == s.agenda) {
            unique.push(s);
        }
    }
    unique
}

fn explore(
    model: &Model,
    agenda: &TaskNetwork,
    belief: &BeliefState,
    path: &mut Vec<Expansion>,
    out: &mut Vec<Step>,
    depth: usize,
) {
    if agenda.is_empty() {
        if !path.is_empty() {
            out.push(Step { op: None, node: None, expansions: path.clone(), agenda: TaskNetwork::empty() });
        }
        return;
    }
    let roots: Vec<usize> = agenda.roots().collect();
    for u in roots {
        let task = agenda.task(u);
        match task.symbol {
            TaskSymbol::Primitive(op) => {
                let mut remaining = None;
                for g in model.groundings(op, &task.args) {
                    if applicable(model.ground_op(g), belief) {
                        let rest = remaining.get_or_insert_with(|| agenda.remove(u)).clone();
                        out.push(Step { op: Some(g), node: Some(u), expansions: path.clone(), agenda: rest });
                    }
                }
            }
            TaskSymbol::Compound(c) => {
                if depth >= MAX_EXPANSION_DEPTH {
                    continue;
                }
                for &mid in model.methods_for(c) {
                    let method = model.method(mid);
                    let Some(binding) = unify(model, method, task) else { continue };
                    let gm = GroundMethod { method: mid, binding };
                    if !guard_holds(model, &gm, belief) {
                        continue;
                    }
                    let subtasks = instantiate_subtasks(method, &gm.binding);
                    let Ok(next) = agenda.replace(u, &subtasks, &method.order) else { continue };
                    path.push(Expansion { node: u, method: gm });
                    explore(model, &next, belief, path, out, depth + 1);
                    path.pop();
                }
            }
        }
    }
}

/// Grounded operators the agenda could ever call for, by static reachability
/// through methods.
pub fn reachable_ops(model: &Model, agenda: &TaskNetwork) -> Vec<GroundOpId> {
    let mut schemas = Vec::new();
    for t in agenda.tasks() {
        match t.symbol {
            TaskSymbol::Primitive(op) => schemas.push(op),
            TaskSymbol::Compound(c) => schemas.extend_from_slice(model.reachable_schemas(c)),
        }
    }
    schemas.sort_unstable();
    schemas.dedup();
    schemas.iter().flat_map(|&s| model.groundings(s, &[]).collect::<Vec<_>>()).collect()
}
