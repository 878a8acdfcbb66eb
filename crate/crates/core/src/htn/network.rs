use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::htn::operator::OpId;
use crate::state::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CompoundId(pub u16);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TaskSymbol {
    Primitive(OpId),
    Compound(CompoundId),
}

/// Task symbol plus arguments. A `None` argument is a free variable of a
/// primitive task, bound against the acting belief when the task is executed.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TaskInstance {
    pub symbol: TaskSymbol,
    pub args: Vec<Option<Value>>,
}

impl TaskInstance {
    pub fn is_primitive(&self) -> bool {
        matches!(self.symbol, TaskSymbol::Primitive(_))
    }
}

/// Task nodes plus a precedence relation over node positions.
///
/// Nodes are identified by their position; every operation returns a
/// renumbered network with sorted, deduplicated constraints, so structurally
/// identical networks compare equal.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TaskNetwork {
    tasks: Vec<TaskInstance>,
    order: Vec<(usize, usize)>,
}

impl TaskNetwork {
    pub fn new(tasks: Vec<TaskInstance>, mut order: Vec<(usize, usize)>) -> Result<TaskNetwork> {
        let n = tasks.len();
        if order.iter().any(|&(a, b)| a >= n || b >= n) {
            return Err(Error::Declaration("ordering constraint refers to a missing node".into()));
        }
        order.sort_unstable();
        order.dedup();
        let net = TaskNetwork { tasks, order };
        if !net.is_acyclic() {
            return Err(Error::CycleIntroduced);
        }
        Ok(net)
    }

    pub fn empty() -> TaskNetwork {
        TaskNetwork::default()
    }

    pub fn tasks(&self) -> &[TaskInstance] {
        &self.tasks
    }

    pub fn task(&self, node: usize) -> &TaskInstance {
        &self.tasks[node]
    }

    pub fn order(&self) -> &[(usize, usize)] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.tasks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tasks.is_empty()
    }

    pub fn is_primitive(&self) -> bool {
        self.tasks.iter().all(TaskInstance::is_primitive)
    }

    /// Nodes without predecessors, in node order.
    pub fn roots(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.tasks.len()).filter(move |&u| !self.order.iter().any(|&(_, b)| b == u))
    }

    fn is_acyclic(&self) -> bool {
        let n = self.tasks.len();
        let mut indeg = alloc::vec![0usize; n];
        for &(_, b) in &self.order {
            indeg[b] += 1;
        }
        let mut ready: Vec<usize> = (0..n).filter(|&u| indeg[u] == 0).collect();
        let mut seen = 0;
        while let Some(u) = ready.pop() {
            seen += 1;
            for &(a, b) in &self.order {
                if a == u {
                    indeg[b] -= 1;
                    if indeg[b] == 0 {
                        ready.push(b);
                    }
                }
            }
        }
        seen == n
    }

    /// Replaces node `u` by `subtasks` ordered internally by `inner`.
    ///
    /// Every constraint `x < u` becomes `x < s` and every `u < y` becomes
    /// `s < y` for each new node `s`. With no subtasks, constraints through
    /// `u` are contracted to `x < y`.
    pub fn replace(&self, u: usize, subtasks: &[TaskInstance], inner: &[(usize, usize)]) -> Result<TaskNetwork> {
        let n = self.tasks.len();
        if u >= n {
            return Err(Error::Declaration("node index out of range".into()));
        }
        let k = subtasks.len();
        if inner.iter().any(|&(a, b)| a >= k || b >= k) {
            return Err(Error::Declaration("method ordering refers to a missing subtask".into()));
        }
        // Surviving nodes keep relative order; new nodes take u's position.
        let remap = |x: usize| if x < u { x } else { x - 1 + k };
        let mut tasks = Vec::with_capacity(n - 1 + k);
        tasks.extend_from_slice(&self.tasks[..u]);
        tasks.extend_from_slice(subtasks);
        tasks.extend_from_slice(&self.tasks[u + 1..]);
        let new_nodes = u..u + k;

        let preds: Vec<usize> = self.order.iter().filter(|&&(_, b)| b == u).map(|&(a, _)| a).collect();
        let succs: Vec<usize> = self.order.iter().filter(|&&(a, _)| a == u).map(|&(_, b)| b).collect();

        let mut order = Vec::new();
        for &(a, b) in &self.order {
            if a != u && b != u {
                order.push((remap(a), remap(b)));
            }
        }
        if k == 0 {
            for &p in &preds {
                for &s in &succs {
                    order.push((remap(p), remap(s)));
                }
            }
        } else {
            for s in new_nodes.clone() {
                for &p in &preds {
                    order.push((remap(p), s));
                }
                for &y in &succs {
                    order.push((s, remap(y)));
                }
            }
            for &(a, b) in inner {
                order.push((u + a, u + b));
            }
        }
        TaskNetwork::new(tasks, order)
    }

    /// Removes an executed node, contracting constraints through it.
    pub fn remove(&self, u: usize) -> TaskNetwork {
        self.replace(u, &[], &[]).expect("contraction preserves acyclicity")
    }

    /// Transitive closure of the precedence relation as a reachability matrix.
    #[allow(clippy::needless_range_loop)]
    pub fn closure(&self) -> Vec<Vec<bool>> {
        let n = self.tasks.len();
        let mut reach = alloc::vec![alloc::vec![false; n]; n];
        for &(a, b) in &self.order {
            reach[a][b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if reach[i][k] {
                    for j in 0..n {
                        if reach[k][j] {
                            reach[i][j] = true;
                        }
                    }
                }
            }
        }
        reach
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn t(i: u16) -> TaskInstance {
        TaskInstance { symbol: TaskSymbol::Primitive(OpId(i)), args: vec![] }
    }

    #[test]
    fn cyclic_network_rejected() {
        assert_eq!(TaskNetwork::new(vec![t(0), t(1)], vec![(0, 1), (1, 0)]), Err(Error::CycleIntroduced));
    }

    #[test]
    fn empty_expansion_contracts() {
        let w = TaskNetwork::new(vec![t(0), t(1), t(2)], vec![(0, 1), (1, 2)]).unwrap();
        let w2 = w.replace(1, &[], &[]).unwrap();
        assert_eq!(w2.tasks(), &[t(0), t(2)]);
        assert_eq!(w2.order(), &[(0, 1)]);
    }

    #[test]
    fn retargets_constraints_to_every_subtask() {
        // u1 < u < u2, u -> {a, b} unordered
        let w = TaskNetwork::new(vec![t(0), t(9), t(2)], vec![(0, 1), (1, 2)]).unwrap();
        let w2 = w.replace(1, &[t(10), t(11)], &[]).unwrap();
        assert_eq!(w2.tasks(), &[t(0), t(10), t(11), t(2)]);
        assert_eq!(w2.order(), &[(0, 1), (0, 2), (1, 3), (2, 3)]);
    }

    #[test]
    fn roots_skip_constrained_nodes() {
        let w = TaskNetwork::new(vec![t(0), t(1), t(2)], vec![(0, 2)]).unwrap();
        assert_eq!(w.roots().collect::<Vec<_>>(), vec![0, 1]);
    }
}
