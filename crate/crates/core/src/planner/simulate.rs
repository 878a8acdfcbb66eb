use alloc::collections::BTreeMap;
use alloc::sync::Arc;

use crate::belief::{step_beliefs, Action, Beliefs, Dynamics};
use crate::htn::applicable;
use crate::model::Model;
use crate::planner::policy::{Leaf, Policy, PolicyNode};
use crate::planner::{Mode, DEADLOCK_RUN};
use crate::state::BeliefState;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Verdict {
    Success,
    /// An action was inapplicable in ground truth or in its actor's belief.
    NotApplicable,
    /// Inactivity deadlock.
    Deadlock,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::Success => "S",
            Verdict::NotApplicable => "NA",
            Verdict::Deadlock => "IDL",
        }
    }
}

/// Which human branches the walk follows.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Resolver {
    #[default]
    Exhaustive,
    First,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ExecutionReport {
    pub branches: u64,
    pub success: u64,
    pub not_applicable: u64,
    pub deadlock: u64,
    /// First failing branch in depth-first edge order.
    pub first_failure: Option<Verdict>,
    /// Most real (non WAIT/IDLE) actions on one branch.
    pub longest: usize,
}

impl ExecutionReport {
    pub fn verdict(&self) -> Verdict {
        self.first_failure.unwrap_or(Verdict::Success)
    }

    fn leaf(v: Verdict) -> ExecutionReport {
        let mut r = ExecutionReport { branches: 1, ..Default::default() };
        match v {
            Verdict::Success => r.success = 1,
            Verdict::NotApplicable => r.not_applicable = 1,
            Verdict::Deadlock => r.deadlock = 1,
        }
        if v != Verdict::Success {
            r.first_failure = Some(v);
        }
        r
    }

    fn merge(&mut self, other: &ExecutionReport, real: usize) {
        self.branches += other.branches;
        self.success += other.success;
        self.not_applicable += other.not_applicable;
        self.deadlock += other.deadlock;
        self.first_failure = self.first_failure.or(other.first_failure);
        self.longest = self.longest.max(other.longest + real);
    }
}

/// Inactivity bookkeeping equivalent to running `detect_deadlock` on the
/// full trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Run {
    len: usize,
    idle_only: bool,
    hit: bool,
}

impl Run {
    fn start() -> Run {
        Run { len: 0, idle_only: true, hit: false }
    }

    fn push(self, a: Action, threshold: usize) -> Run {
        match a {
            Action::Op(_) => Run { len: 0, idle_only: true, hit: self.hit || self.len >= threshold },
            Action::Idle => Run { len: self.len + 1, ..self },
            Action::Wait => Run { len: self.len + 1, idle_only: false, ..self },
        }
    }

    fn deadlocked(self, threshold: usize) -> bool {
        self.hit || (self.len >= threshold && !self.idle_only)
    }
}

struct Walk<'a> {
    model: &'a Model,
    dynamics: Dynamics,
    resolver: Resolver,
    threshold: usize,
    memo: BTreeMap<(usize, Beliefs, Run), ExecutionReport>,
}

impl Walk<'_> {
    fn node(&mut self, n: &Arc<PolicyNode>, b: Beliefs, run: Run) -> ExecutionReport {
        let key = (Arc::as_ptr(n) as usize, b, run);
        if let Some(r) = self.memo.get(&key) {
            return *r;
        }
        let (_, b, _) = &key;
        let mut human = b.human.clone();
        for ca in &n.comms.actions {
            if human.get(ca.attr) != ca.value {
                human = human.with(ca.attr, ca.value);
            }
        }
        let b = Beliefs { world: b.world.clone(), human };
        let report = match n.leaf {
            Some(Leaf::Done) if run.deadlocked(self.threshold) => ExecutionReport::leaf(Verdict::Deadlock),
            Some(Leaf::Done) => ExecutionReport::leaf(Verdict::Success),
            Some(Leaf::Stalled) => ExecutionReport::leaf(Verdict::Deadlock),
            None if n.edges.is_empty() => ExecutionReport::leaf(Verdict::NotApplicable),
            None => {
                let take = match self.resolver {
                    Resolver::Exhaustive => n.edges.len(),
                    Resolver::First => 1,
                };
                let mut acc = ExecutionReport::default();
                for e in &n.edges[..take] {
                    let valid = match e.action {
                        Action::Op(g) => {
                            let op = self.model.ground_op(g);
                            applicable(op, &b.world) && applicable(op, b.of(e.actor))
                        }
                        _ => true,
                    };
                    let sub = match valid.then(|| step_beliefs(self.model, self.dynamics, e.actor, e.action, &b)) {
                        Some(Ok(next)) => self.node(&e.child, next, run.push(e.action, self.threshold)),
                        _ => ExecutionReport::leaf(Verdict::NotApplicable),
                    };
                    acc.merge(&sub, usize::from(e.action.op().is_some() && valid));
                }
                acc
            }
        };
        self.memo.insert(key, report);
        report
    }
}

/// The belief protocol a policy is judged under: the one its planner assumed.
pub fn judging_dynamics(mode: Mode) -> Dynamics {
    match mode {
        Mode::New => Dynamics::Aware,
        Mode::Legacy => Dynamics::Omniscient,
    }
}

/// Executes every branch of a policy from the true initial beliefs,
/// classifying each branch. Beliefs evolve under the policy's own protocol.
pub fn simulate(
    model: &Model,
    policy: &Policy,
    world: &BeliefState,
    human: &BeliefState,
    resolver: Resolver,
) -> ExecutionReport {
    simulate_with(model, policy, world, human, resolver, judging_dynamics(policy.mode), DEADLOCK_RUN)
}

pub fn simulate_with(
    model: &Model,
    policy: &Policy,
    world: &BeliefState,
    human: &BeliefState,
    resolver: Resolver,
    dynamics: Dynamics,
    threshold: usize,
) -> ExecutionReport {
    let human = match dynamics {
        Dynamics::Aware => model.assess(human, world),
        Dynamics::Omniscient => human.clone(),
    };
    let b = Beliefs { world: world.clone(), human };
    let mut walk = Walk { model, dynamics, resolver, threshold, memo: BTreeMap::new() };
    walk.node(&policy.root, b, Run::start())
}
