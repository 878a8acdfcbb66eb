use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::belief::Action;
use crate::comm::CommPlan;
use crate::htn::{Agent, Expansion, TaskNetwork};
use crate::planner::Mode;
use crate::state::BeliefState;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Leaf {
    /// Both agendas are empty.
    Done,
    /// Nobody progressed for too long. Only the legacy planner keeps these.
    Stalled,
}

/// A vertex of the joint policy: ground truth and the estimated human belief
/// before the turn, messages sent at the start of the turn, and the
/// outgoing edges (one for the robot, one per emulated human choice).
#[derive(Debug)]
pub struct PolicyNode {
    pub world: BeliefState,
    pub human: BeliefState,
    pub agendas: [TaskNetwork; 2],
    pub turn: Agent,
    pub stall: usize,
    pub comms: CommPlan,
    pub edges: Vec<PolicyEdge>,
    pub leaf: Option<Leaf>,
}

impl PolicyNode {
    pub fn agenda(&self, agent: Agent) -> &TaskNetwork {
        &self.agendas[agent.index()]
    }

    pub fn is_leaf(&self) -> bool {
        self.leaf.is_some()
    }
}

#[derive(Debug)]
pub struct PolicyEdge {
    pub actor: Agent,
    pub action: Action,
    /// Method expansions that exposed the action, and the agenda node it
    /// consumed (none for WAIT/IDLE).
    pub expansions: Vec<Expansion>,
    pub node: Option<usize>,
    pub child: Arc<PolicyNode>,
}

#[derive(Clone, Debug)]
pub struct Policy {
    pub root: Arc<PolicyNode>,
    pub mode: Mode,
    pub start: Agent,
}

fn key(n: &Arc<PolicyNode>) -> usize {
    Arc::as_ptr(n) as usize
}

impl Policy {
    /// Distinct nodes in depth-first preorder; shared subtrees appear once.
    pub fn nodes(&self) -> Vec<&Arc<PolicyNode>> {
        let mut seen = BTreeMap::new();
        let mut out = Vec::new();
        let mut stack = alloc::vec![&self.root];
        while let Some(n) = stack.pop() {
            if seen.insert(key(n), out.len()).is_some() {
                continue;
            }
            out.push(n);
            for e in n.edges.iter().rev() {
                stack.push(&e.child);
            }
        }
        out
    }

    /// Position of every node in [`Policy::nodes`], keyed by address.
    pub fn node_ids(&self) -> BTreeMap<usize, usize> {
        self.nodes().iter().enumerate().map(|(i, n)| (key(n), i)).collect()
    }

    pub fn id_of(ids: &BTreeMap<usize, usize>, node: &Arc<PolicyNode>) -> usize {
        ids[&key(node)]
    }

    /// Total messages over distinct nodes.
    pub fn comm_count(&self) -> usize {
        self.nodes().iter().map(|n| n.comms.len()).sum()
    }

    pub fn has_comm(&self) -> bool {
        self.nodes().iter().any(|n| !n.comms.is_empty())
    }

    /// Number of root-to-leaf paths.
    pub fn branch_count(&self) -> u64 {
        let mut memo = BTreeMap::new();
        count_paths(&self.root, &mut memo)
    }

    /// Longest root-to-leaf path, in edges.
    pub fn depth(&self) -> usize {
        let mut memo = BTreeMap::new();
        depth(&self.root, &mut memo)
    }

    /// Every root-to-leaf path as (actor, action) pairs, up to `limit` paths.
    pub fn paths(&self, limit: usize) -> Vec<Vec<(Agent, Action)>> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        collect(&self.root, &mut cur, &mut out, limit);
        out
    }
}

fn count_paths(n: &Arc<PolicyNode>, memo: &mut BTreeMap<usize, u64>) -> u64 {
    if let Some(&c) = memo.get(&key(n)) {
        return c;
    }
    let c = if n.edges.is_empty() { 1 } else { n.edges.iter().map(|e| count_paths(&e.child, memo)).sum() };
    memo.insert(key(n), c);
    c
}

fn depth(n: &Arc<PolicyNode>, memo: &mut BTreeMap<usize, usize>) -> usize {
    if let Some(&d) = memo.get(&key(n)) {
        return d;
    }
    let d = n.edges.iter().map(|e| 1 + depth(&e.child, memo)).max().unwrap_or(0);
    memo.insert(key(n), d);
    d
}

fn collect(n: &PolicyNode, cur: &mut Vec<(Agent, Action)>, out: &mut Vec<Vec<(Agent, Action)>>, limit: usize) {
    if out.len() >= limit {
        return;
    }
    if n.edges.is_empty() {
        out.push(cur.clone());
        return;
    }
    for e in &n.edges {
        cur.push((e.actor, e.action));
        collect(&e.child, cur, out, limit);
        cur.pop();
    }
}
