//! A validated, grounded two-agent domain and planning problems over it.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::htn::{
    check_literal, ground_literal, same_kind, Agent, CompoundId, CompoundTask, GroundOp, GroundOpId, MethodId,
    MethodSchema, OpId, OperatorSchema, TaskInstance, TaskNetwork, TaskSymbol, Term,
};
use crate::observability::{ObservabilityModel, ObservabilitySpec};
use crate::state::{cartesian, AttrId, BeliefState, ConstId, GroupId, Universe, Value, VarId};

/// Everything needed to build a [`Model`].
#[derive(Clone, Debug)]
pub struct ModelParts {
    pub universe: Universe,
    pub operators: Vec<OperatorSchema>,
    pub compounds: Vec<CompoundTask>,
    pub methods: Vec<MethodSchema>,
    pub observability: ObservabilitySpec,
    pub robot: ConstId,
    pub human: ConstId,
    /// State variable giving each agent's place, e.g. `AgtAt(?a)`.
    pub location: VarId,
}

#[derive(Debug)]
pub struct Model {
    universe: Universe,
    operators: Vec<OperatorSchema>,
    compounds: Vec<CompoundTask>,
    methods: Vec<MethodSchema>,
    observability: ObservabilityModel,
    robot: ConstId,
    human: ConstId,
    location: VarId,
    ground: Vec<GroundOp>,
    by_schema: Vec<Vec<GroundOpId>>,
    by_task: Vec<Vec<MethodId>>,
    reachable: Vec<Vec<OpId>>,
    loc_attr: [AttrId; 2],
}

impl Model {
    pub fn new(parts: ModelParts) -> Result<Model> {
        let ModelParts { universe, operators, compounds, methods, observability, robot, human, location } = parts;
        let observability = ObservabilityModel::new(&universe, observability)?;

        if robot == human {
            return Err(Error::Declaration("robot and human must be distinct constants".into()));
        }
        let loc_decl = universe
            .decls()
            .get(location.0 as usize)
            .ok_or_else(|| Error::Declaration("unknown location variable".into()))?;
        if loc_decl.params.len() != 1 || loc_decl.value != observability.places_group() {
            return Err(Error::Declaration(format!(
                "location variable {} must map one agent argument to a place",
                loc_decl.symbol
            )));
        }
        let loc_of = |c: ConstId| universe.resolve_named(&loc_decl.symbol, &[Value::Sym(c)]);
        let loc_attr = [loc_of(robot)?, loc_of(human)?];

        for (i, op) in operators.iter().enumerate() {
            if operators[..i].iter().any(|o| o.name == op.name && o.agent == op.agent) {
                return Err(Error::Declaration(format!("operator {} declared twice for {}", op.name, op.agent.name())));
            }
            let groups: Vec<GroupId> = op.params.iter().map(|p| p.group).collect();
            let ctx = format!("operator {}", op.name);
            for lit in &op.pre {
                check_literal(&universe, lit, &groups, false, &ctx)?;
            }
            for lit in &op.eff {
                check_literal(&universe, lit, &groups, true, &ctx)?;
            }
        }

        for (i, c) in compounds.iter().enumerate() {
            if compounds[..i].iter().any(|o| o.name == c.name && o.agent == c.agent) {
                return Err(Error::Declaration(format!("task {} declared twice", c.name)));
            }
        }

        let mut by_task = alloc::vec![Vec::new(); compounds.len()];
        for (mi, m) in methods.iter().enumerate() {
            validate_method(&universe, &operators, &compounds, m)?;
            by_task[m.task.0 as usize].push(MethodId(mi as u16));
        }

        let mut ground = Vec::new();
        let mut by_schema = Vec::with_capacity(operators.len());
        for (oi, op) in operators.iter().enumerate() {
            let mut ids = Vec::new();
            let domains: Vec<Vec<Value>> = op.params.iter().map(|p| universe.group(p.group).values()).collect();
            'bind: for args in cartesian(&domains) {
                let mut pre = Vec::new();
                for lit in &op.pre {
                    match ground_literal(&universe, lit, &args)? {
                        Some(x) => pre.push(x),
                        None => continue 'bind,
                    }
                }
                let mut eff: Vec<(AttrId, Value)> = Vec::new();
                for lit in &op.eff {
                    match ground_literal(&universe, lit, &args)? {
                        Some(x) => {
                            if eff.iter().any(|(a, _)| *a == x.0) {
                                return Err(Error::Declaration(format!(
                                    "operator {} assigns {} twice",
                                    op.name,
                                    universe.show_attr(x.0)
                                )));
                            }
                            eff.push(x)
                        }
                        None => continue 'bind,
                    }
                }
                ids.push(GroundOpId(ground.len() as u32));
                ground.push(GroundOp { schema: OpId(oi as u16), agent: op.agent, args, pre, eff });
            }
            by_schema.push(ids);
        }

        let reachable =
            (0..compounds.len()).map(|c| reachable_from(&methods, &by_task, CompoundId(c as u16))).collect();

        Ok(Model {
            universe,
            operators,
            compounds,
            methods,
            observability,
            robot,
            human,
            location,
            ground,
            by_schema,
            by_task,
            reachable,
            loc_attr,
        })
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn observability(&self) -> &ObservabilityModel {
        &self.observability
    }

    pub fn operators(&self) -> &[OperatorSchema] {
        &self.operators
    }

    pub fn operator(&self, id: OpId) -> &OperatorSchema {
        &self.operators[id.0 as usize]
    }

    pub fn compounds(&self) -> &[CompoundTask] {
        &self.compounds
    }

    pub fn compound(&self, id: CompoundId) -> &CompoundTask {
        &self.compounds[id.0 as usize]
    }

    pub fn methods(&self) -> &[MethodSchema] {
        &self.methods
    }

    pub fn method(&self, id: MethodId) -> &MethodSchema {
        &self.methods[id.0 as usize]
    }

    pub fn methods_for(&self, task: CompoundId) -> &[MethodId] {
        &self.by_task[task.0 as usize]
    }

    pub(crate) fn reachable_schemas(&self, task: CompoundId) -> &[OpId] {
        &self.reachable[task.0 as usize]
    }

    pub fn agent_constant(&self, agent: Agent) -> ConstId {
        match agent {
            Agent::Robot => self.robot,
            Agent::Human => self.human,
        }
    }

    pub fn location_var(&self) -> VarId {
        self.location
    }

    /// The attribute holding an agent's place.
    pub fn location_of(&self, agent: Agent) -> AttrId {
        self.loc_attr[agent.index()]
    }

    pub fn ground_ops(&self) -> &[GroundOp] {
        &self.ground
    }

    pub fn ground_op(&self, id: GroundOpId) -> &GroundOp {
        &self.ground[id.0 as usize]
    }

    /// Grounded operators of one agent.
    pub fn agent_ops(&self, agent: Agent) -> impl Iterator<Item = GroundOpId> + '_ {
        (0..self.ground.len() as u32).map(GroundOpId).filter(move |g| self.ground[g.0 as usize].agent == agent)
    }

    /// Groundings of a schema matching the bound arguments; an empty `bound`
    /// slice matches every grounding.
    pub fn groundings<'a>(&'a self, op: OpId, bound: &'a [Option<Value>]) -> impl Iterator<Item = GroundOpId> + 'a {
        self.by_schema[op.0 as usize].iter().copied().filter(move |g| {
            let args = &self.ground[g.0 as usize].args;
            bound.is_empty() || bound.iter().zip(args).all(|(b, a)| b.is_none_or(|b| b == *a))
        })
    }

    pub fn find_ground_op(&self, agent: Agent, name: &str, args: &[Value]) -> Option<GroundOpId> {
        let schema = self.operators.iter().position(|o| o.agent == agent && o.name == name)?;
        self.by_schema[schema].iter().copied().find(|g| self.ground[g.0 as usize].args == args)
    }

    pub fn find_compound(&self, agent: Agent, name: &str) -> Option<CompoundId> {
        self.compounds.iter().position(|c| c.agent == agent && c.name == name).map(|i| CompoundId(i as u16))
    }

    pub fn find_operator(&self, agent: Agent, name: &str) -> Option<OpId> {
        self.operators.iter().position(|o| o.agent == agent && o.name == name).map(|i| OpId(i as u16))
    }

    pub fn task_agent(&self, symbol: TaskSymbol) -> Agent {
        match symbol {
            TaskSymbol::Primitive(op) => self.operator(op).agent,
            TaskSymbol::Compound(c) => self.compound(c).agent,
        }
    }

    /// `name(arg, ...)` of a grounded operator.
    pub fn show_op(&self, id: GroundOpId) -> String {
        let g = self.ground_op(id);
        let args: Vec<String> = g.args.iter().map(|a| self.universe.show_value(*a)).collect();
        format!("{}({})", self.operator(g.schema).name, args.join(","))
    }

    pub fn show_task(&self, t: &TaskInstance) -> String {
        let name = match t.symbol {
            TaskSymbol::Primitive(op) => &self.operator(op).name,
            TaskSymbol::Compound(c) => &self.compound(c).name,
        };
        let args: Vec<String> =
            t.args.iter().map(|a| a.map_or_else(|| String::from("_"), |v| self.universe.show_value(v))).collect();
        format!("{}({})", name, args.join(","))
    }

    pub fn copresent(&self, a: Agent, b: Agent, state: &BeliefState) -> bool {
        self.observability.copresent(self.location_of(a), self.location_of(b), state)
    }

    /// Situation assessment for the human from its place in `world`.
    pub fn assess(&self, human: &BeliefState, world: &BeliefState) -> BeliefState {
        self.observability.assess(self.location_of(Agent::Human), human, world)
    }
}

fn reachable_from(methods: &[MethodSchema], by_task: &[Vec<MethodId>], root: CompoundId) -> Vec<OpId> {
    let mut seen = alloc::vec![false; by_task.len()];
    let mut stack = alloc::vec![root];
    let mut ops = Vec::new();
    seen[root.0 as usize] = true;
    while let Some(c) = stack.pop() {
        for m in &by_task[c.0 as usize] {
            for st in &methods[m.0 as usize].subtasks {
                match st.symbol {
                    TaskSymbol::Primitive(op) => ops.push(op),
                    TaskSymbol::Compound(next) => {
                        if !seen[next.0 as usize] {
                            seen[next.0 as usize] = true;
                            stack.push(next);
                        }
                    }
                }
            }
        }
    }
    ops.sort_unstable();
    ops.dedup();
    ops
}

fn validate_method(
    universe: &Universe,
    operators: &[OperatorSchema],
    compounds: &[CompoundTask],
    m: &MethodSchema,
) -> Result<()> {
    let ctx = format!("method {}", m.name);
    let task = compounds.get(m.task.0 as usize).ok_or_else(|| Error::Declaration(format!("{ctx}: unknown task")))?;
    if m.head.len() != task.params.len() {
        return Err(Error::Declaration(format!("{ctx}: head arity differs from task {}", task.name)));
    }
    let groups: Vec<GroupId> = m.vars.iter().map(|p| p.group).collect();
    let mut in_head = alloc::vec![false; m.vars.len()];
    for (t, p) in m.head.iter().zip(&task.params) {
        match *t {
            Term::Var(i) if i < m.vars.len() => {
                if !same_kind(universe, groups[i], p.group) {
                    return Err(Error::Declaration(format!("{ctx}: head variable type mismatch")));
                }
                in_head[i] = true;
            }
            Term::Const(v) if universe.group(p.group).contains(v) => {}
            _ => return Err(Error::Declaration(format!("{ctx}: bad head term"))),
        }
    }
    for lit in &m.pre {
        check_literal(universe, lit, &groups, false, &ctx)?;
        let mentions = lit.attr.args.iter().chain(core::iter::once(&lit.value));
        for t in mentions {
            if let Term::Var(i) = t {
                if !in_head[*i] {
                    return Err(Error::Declaration(format!("{ctx}: guard uses a variable not bound by the head")));
                }
            }
        }
    }
    let mut local_use = alloc::vec![0usize; m.vars.len()];
    for st in &m.subtasks {
        let (agent, params) = match st.symbol {
            TaskSymbol::Primitive(op) => {
                let o = operators
                    .get(op.0 as usize)
                    .ok_or_else(|| Error::Declaration(format!("{ctx}: unknown operator")))?;
                (o.agent, &o.params)
            }
            TaskSymbol::Compound(c) => {
                let t =
                    compounds.get(c.0 as usize).ok_or_else(|| Error::Declaration(format!("{ctx}: unknown task")))?;
                (t.agent, &t.params)
            }
        };
        if agent != task.agent {
            return Err(Error::Declaration(format!("{ctx}: subtask belongs to the other agent")));
        }
        if st.args.len() != params.len() {
            return Err(Error::Declaration(format!("{ctx}: subtask arity mismatch")));
        }
        for (t, p) in st.args.iter().zip(params) {
            match *t {
                Term::Var(i) if i < m.vars.len() => {
                    if !same_kind(universe, groups[i], p.group) {
                        return Err(Error::Declaration(format!("{ctx}: subtask argument type mismatch")));
                    }
                    if !in_head[i] {
                        if !matches!(st.symbol, TaskSymbol::Primitive(_)) {
                            return Err(Error::Declaration(format!(
                                "{ctx}: free variable {} passed to a compound task",
                                m.vars[i].name
                            )));
                        }
                        local_use[i] += 1;
                    }
                }
                Term::Const(v) if universe.group(p.group).contains(v) => {}
                _ => return Err(Error::Declaration(format!("{ctx}: bad subtask argument"))),
            }
        }
    }
    if local_use.iter().any(|&n| n > 1) {
        return Err(Error::Declaration(format!("{ctx}: a free variable may appear in one subtask only")));
    }
    TaskNetwork::new(
        m.subtasks.iter().map(|s| TaskInstance { symbol: s.symbol, args: Vec::new() }).collect(),
        m.order.clone(),
    )
    .map_err(|e| match e {
        Error::CycleIntroduced => Error::Declaration(format!("{ctx}: cyclic subtask order")),
        other => other,
    })?;
    Ok(())
}

/// An HTN problem for the robot-human pair: ground truth, the human's
/// initial belief, the shared initial network and the agent acting first.
#[derive(Clone, Debug)]
pub struct Problem {
    pub model: Arc<Model>,
    pub world: BeliefState,
    pub human_belief: BeliefState,
    pub network: TaskNetwork,
    pub start: Agent,
}

impl Problem {
    pub fn new(
        model: Arc<Model>,
        world: BeliefState,
        human_belief: BeliefState,
        network: TaskNetwork,
        start: Agent,
    ) -> Result<Problem> {
        model.universe().check(&world)?;
        model.universe().check(&human_belief)?;
        if network.is_empty() {
            return Err(Error::Declaration("initial task network is empty".into()));
        }
        for t in network.tasks() {
            if t.args.iter().any(Option::is_none) {
                return Err(Error::Declaration(format!("initial task {} has unbound arguments", model.show_task(t))));
            }
            match t.symbol {
                TaskSymbol::Compound(c) => {
                    if !model.methods_for(c).iter().any(|&m| crate::htn::unify(&model, model.method(m), t).is_some()) {
                        return Err(Error::Declaration(format!("no method refines {}", model.show_task(t))));
                    }
                }
                TaskSymbol::Primitive(op) => {
                    if model.groundings(op, &t.args).next().is_none() {
                        return Err(Error::Declaration(format!("{} has no grounding", model.show_task(t))));
                    }
                }
            }
        }
        for &(a, b) in network.order() {
            if model.task_agent(network.task(a).symbol) != model.task_agent(network.task(b).symbol) {
                return Err(Error::Declaration("ordering constraints across agents are not supported".into()));
            }
        }
        Ok(Problem { model, world, human_belief, network, start })
    }

    /// The part of the initial network owned by one agent.
    pub fn agenda(&self, agent: Agent) -> TaskNetwork {
        let keep: Vec<usize> =
            (0..self.network.len()).filter(|&i| self.model.task_agent(self.network.task(i).symbol) == agent).collect();
        let tasks = keep.iter().map(|&i| self.network.task(i).clone()).collect();
        let order = self
            .network
            .order()
            .iter()
            .filter_map(|&(a, b)| {
                let a = keep.iter().position(|&k| k == a)?;
                let b = keep.iter().position(|&k| k == b)?;
                Some((a, b))
            })
            .collect();
        TaskNetwork::new(tasks, order).expect("restriction of an acyclic network")
    }

    pub fn with_beliefs(&self, world: BeliefState, human_belief: BeliefState) -> Problem {
        Problem { world, human_belief, ..self.clone() }
    }

    pub fn with_start(&self, start: Agent) -> Problem {
        Problem { start, ..self.clone() }
    }
}
