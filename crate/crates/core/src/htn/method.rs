use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::htn::network::{CompoundId, TaskInstance, TaskNetwork, TaskSymbol};
use crate::htn::operator::{Agent, Literal, Param, Term};
use crate::model::Model;
use crate::state::{BeliefState, Value};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompoundTask {
    pub name: String,
    pub agent: Agent,
    pub params: Vec<Param>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubtaskTemplate {
    pub symbol: TaskSymbol,
    pub args: Vec<Term>,
}

/// `name`, the task it refines (`head` unifies with the task arguments),
/// an optional guard over head variables, subtasks and their precedence.
///
/// Variables that do not occur in the head stay free; each may appear in
/// one primitive subtask only and is bound when that operator executes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MethodSchema {
    pub name: String,
    pub task: CompoundId,
    pub vars: Vec<Param>,
    pub head: Vec<Term>,
    pub pre: Vec<Literal>,
    pub subtasks: Vec<SubtaskTemplate>,
    pub order: Vec<(usize, usize)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MethodId(pub u16);

/// A method with its head variables bound.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroundMethod {
    pub method: MethodId,
    pub binding: Vec<Option<Value>>,
}

/// Syntactic unification of a method head with a task instance.
pub fn unify(model: &Model, method: &MethodSchema, task: &TaskInstance) -> Option<Vec<Option<Value>>> {
    if task.symbol != TaskSymbol::Compound(method.task) || task.args.len() != method.head.len() {
        return None;
    }
    let mut binding: Vec<Option<Value>> = alloc::vec![None; method.vars.len()];
    for (term, arg) in method.head.iter().zip(&task.args) {
        let arg = (*arg)?;
        match *term {
            Term::Var(i) => match binding[i] {
                Some(v) if v != arg => return None,
                Some(_) => {}
                None => {
                    if !model.universe().group(method.vars[i].group).contains(arg) {
                        return None;
                    }
                    binding[i] = Some(arg);
                }
            },
            Term::Const(c) => {
                if c != arg {
                    return None;
                }
            }
            Term::Shifted(..) => return None,
        }
    }
    Some(binding)
}

pub fn instantiate_subtasks(method: &MethodSchema, binding: &[Option<Value>]) -> Vec<TaskInstance> {
    method
        .subtasks
        .iter()
        .map(|st| TaskInstance {
            symbol: st.symbol,
            args: st
                .args
                .iter()
                .map(|t| match *t {
                    Term::Var(i) => binding[i],
                    Term::Const(v) => Some(v),
                    Term::Shifted(..) => None,
                })
                .collect(),
        })
        .collect()
}

/// Evaluates the method guard in a belief. Guards only mention head variables.
pub fn guard_holds(model: &Model, gm: &GroundMethod, belief: &BeliefState) -> bool {
    let method = model.method(gm.method);
    if method.pre.is_empty() {
        return true;
    }
    let binding: Vec<Value> = gm.binding.iter().map(|v| v.unwrap_or(Value::Bool(false))).collect();
    method.pre.iter().all(|lit| match crate::htn::operator::ground_literal(model.universe(), lit, &binding) {
        Ok(Some((a, v))) => belief.get(a) == v,
        _ => false,
    })
}

/// Replaces node `u` by the subtasks of a relevant grounded method.
pub fn decompose(model: &Model, w: &TaskNetwork, u: usize, gm: &GroundMethod) -> Result<TaskNetwork> {
    let method = model.method(gm.method);
    if u >= w.len() {
        return Err(Error::NotRelevant(method.name.clone()));
    }
    match unify(model, method, w.task(u)) {
        Some(b) if b.iter().zip(&gm.binding).all(|(x, y)| x.is_none() || x == y) => {}
        _ => return Err(Error::NotRelevant(method.name.clone())),
    }
    let subtasks = instantiate_subtasks(method, &gm.binding);
    w.replace(u, &subtasks, &method.order)
}

/// Every (root compound node, relevant grounded method) pair, in node then
/// declaration order.
pub fn enumerate_decompositions(model: &Model, w: &TaskNetwork) -> Vec<(usize, GroundMethod)> {
    let mut out = Vec::new();
    for u in w.roots() {
        if let TaskSymbol::Compound(c) = w.task(u).symbol {
            for &mid in model.methods_for(c) {
                if let Some(binding) = unify(model, model.method(mid), w.task(u)) {
                    out.push((u, GroundMethod { method: mid, binding }));
                }
            }
        }
    }
    out
}
