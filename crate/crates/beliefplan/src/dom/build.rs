//! Name resolution and validation: syntax tree to a planning problem.

use std::sync::Arc;

use beliefplan_core::htn::{
    Agent, AttrTemplate, CompoundTask, Literal, MethodSchema, OperatorSchema, Param, SubtaskTemplate, TaskInstance,
    TaskNetwork, TaskSymbol, Term,
};
use beliefplan_core::observability::{ObsClass, ObservabilitySpec, PlaceExpr};
use beliefplan_core::state::GroupKind;
use beliefplan_core::{AttrId, BeliefState, GroupId, Model, ModelParts, Problem, Universe, UniverseBuilder, Value};

use super::ast::*;
use super::Diagnostic;

fn agent_of(a: AgentName) -> Agent {
    match a {
        AgentName::Robot => Agent::Robot,
        AgentName::Human => Agent::Human,
    }
}

struct Ctx {
    diags: Vec<Diagnostic>,
}

impl Ctx {
    fn err(&mut self, pos: Pos, message: impl Into<String>) {
        self.diags.push(Diagnostic { pos, message: message.into() });
    }
}

/// Variables in scope of a schema: name and group, by position.
type Scope = Vec<(String, GroupId)>;

fn scope_of(cx: &mut Ctx, u: &Universe, vars: &[TypedVar]) -> Option<Scope> {
    let mut scope = Vec::new();
    let mut ok = true;
    for v in vars {
        if scope.iter().any(|(n, _): &(String, GroupId)| *n == v.name.name) {
            cx.err(v.name.pos, format!("parameter `?{}` declared twice", v.name.name));
            ok = false;
        }
        match u.group_id(&v.group.name) {
            Some(g) => scope.push((v.name.name.clone(), g)),
            None => {
                cx.err(v.group.pos, format!("unknown group `{}`", v.group.name));
                ok = false;
            }
        }
    }
    ok.then_some(scope)
}

/// A term in a position expecting a member of `want`.
fn resolve_term(
    cx: &mut Ctx,
    u: &Universe,
    scope: &Scope,
    t: &TermAst,
    want: GroupId,
    allow_shift: bool,
) -> Option<Term> {
    match t {
        TermAst::Var(v, k) => {
            let Some(i) = scope.iter().position(|(n, _)| *n == v.name) else {
                cx.err(v.pos, format!("unknown variable `?{}`", v.name));
                return None;
            };
            if *k == 0 {
                Some(Term::Var(i))
            } else if allow_shift {
                Some(Term::Shifted(i, *k))
            } else {
                cx.err(v.pos, "offsets are only allowed in effect values");
                None
            }
        }
        TermAst::Name(n) => match u.parse_value(want, &n.name) {
            Some(v) => Some(Term::Const(v)),
            None => {
                let msg = match u.constant_id(&n.name) {
                    Some(_) => format!("`{}` is not a member of `{}`", n.name, u.group(want).name),
                    None if matches!(u.group(want).kind, GroupKind::Bool) => {
                        format!("expected `true` or `false`, found `{}`", n.name)
                    }
                    None => format!("unknown constant `{}`", n.name),
                };
                cx.err(n.pos, msg);
                None
            }
        },
        TermAst::Int(n, pos) => match u.parse_value(want, &n.to_string()) {
            Some(v) if matches!(u.group(want).kind, GroupKind::Range { .. }) => Some(Term::Const(v)),
            _ => {
                cx.err(*pos, format!("`{n}` is not a member of `{}`", u.group(want).name));
                None
            }
        },
    }
}

/// A state-variable reference; a nullary reference to a declaration whose
/// parameter groups are singletons is expanded to its only grounding.
fn attr_template(cx: &mut Ctx, u: &Universe, scope: &Scope, c: &Call) -> Option<(AttrTemplate, GroupId)> {
    let Some(var) = u.var_id(&c.name.name) else {
        cx.err(c.name.pos, format!("unknown state variable `{}`", c.name.name));
        return None;
    };
    let decl = u.decl(var);
    if c.args.is_empty() && !decl.params.is_empty() {
        let singles: Option<Vec<Term>> = decl
            .params
            .iter()
            .map(|g| {
                let vs = u.group(*g).values();
                (vs.len() == 1).then(|| Term::Const(vs[0]))
            })
            .collect();
        if let Some(args) = singles {
            return Some((AttrTemplate { var, args }, decl.value));
        }
    }
    if c.args.len() != decl.params.len() {
        cx.err(
            c.name.pos,
            format!("`{}` expects {} argument(s), got {}", c.name.name, decl.params.len(), c.args.len()),
        );
        return None;
    }
    let params = decl.params.clone();
    let value = decl.value;
    let args: Option<Vec<Term>> =
        c.args.iter().zip(&params).map(|(t, g)| resolve_term(cx, u, scope, t, *g, false)).collect();
    Some((AttrTemplate { var, args: args? }, value))
}

fn literal(cx: &mut Ctx, u: &Universe, scope: &Scope, l: &LiteralAst, effect: bool) -> Option<Literal> {
    let (attr, vg) = attr_template(cx, u, scope, &l.attr)?;
    let value = resolve_term(cx, u, scope, &l.value, vg, effect)?;
    Some(Literal { attr, value })
}

fn literals(cx: &mut Ctx, u: &Universe, scope: &Scope, ls: &[LiteralAst], effect: bool) -> Option<Vec<Literal>> {
    let out: Vec<Option<Literal>> = ls.iter().map(|l| literal(cx, u, scope, l, effect)).collect();
    out.into_iter().collect()
}

fn ground_attr(cx: &mut Ctx, u: &Universe, c: &Call) -> Option<AttrId> {
    let (t, _) = attr_template(cx, u, &Vec::new(), c)?;
    let args: Vec<Value> = t
        .args
        .iter()
        .map(|x| match x {
            Term::Const(v) => *v,
            _ => unreachable!("no variables in scope"),
        })
        .collect();
    match u.resolve(&beliefplan_core::state::GroundedAttribute { var: t.var, args }) {
        Ok(a) => Some(a),
        Err(e) => {
            cx.err(c.name.pos, e.to_string());
            None
        }
    }
}

fn belief(cx: &mut Ctx, u: &Universe, assigns: &[Assign], section: &str, pos: Pos) -> Option<BeliefState> {
    let mut slots: Vec<Option<Value>> = vec![None; u.attr_count()];
    let mut ok = true;
    for a in assigns {
        let Some(attr) = ground_attr(cx, u, &a.attr) else {
            ok = false;
            continue;
        };
        let Some(Term::Const(v)) =
            resolve_term(cx, u, &Vec::new(), &a.value, u.decl(u.attribute(attr).var).value, false)
        else {
            ok = false;
            continue;
        };
        if slots[attr.index()].is_some() {
            cx.err(a.attr.name.pos, format!("{} assigned twice in [{section}]", u.show_attr(attr)));
            ok = false;
        }
        slots[attr.index()] = Some(v);
    }
    let missing: Vec<String> = u.attrs().filter(|a| slots[a.index()].is_none()).map(|a| u.show_attr(a)).collect();
    if !missing.is_empty() && ok {
        cx.err(pos, format!("[{section}] is not total: no value for {}", missing.join(", ")));
        return None;
    }
    if !ok {
        return None;
    }
    u.belief(u.attrs().map(|a| (a, slots[a.index()].unwrap()))).ok()
}

/// The validated problem described by a domain file.
pub fn build(d: &DomainFile) -> Result<Problem, Vec<Diagnostic>> {
    let mut cx = Ctx { diags: Vec::new() };

    let mut ub = UniverseBuilder::new();
    let mut places: Option<(GroupId, Pos)> = None;
    for g in &d.groups {
        let r = match &g.body {
            GroupBody::Symbols(ms) => {
                let names: Vec<&str> = ms.iter().map(|m| m.name.as_str()).collect();
                ub.symbols(&g.name.name, &names)
            }
            GroupBody::Range { lo, hi } => ub.range(&g.name.name, *lo, *hi),
        };
        match r {
            Ok(id) if g.places => {
                if let Some((_, first)) = places {
                    cx.err(g.name.pos, format!("places group declared twice (first at {first})"));
                } else {
                    places = Some((id, g.name.pos));
                }
            }
            Ok(_) => {}
            Err(e) => cx.err(g.name.pos, e.to_string()),
        }
    }
    if places.is_none() {
        cx.err(Pos { line: 1, col: 1 }, "no places group: declare one with `places <Name> = ...` in [groups]");
    }

    let mut classes = Vec::new();
    for s in &d.state {
        let mut groups = Vec::new();
        for p in &s.params {
            match ub.group_id(&p.group.name) {
                Some(g) => groups.push(g),
                None => cx.err(p.group.pos, format!("unknown group `{}`", p.group.name)),
            }
        }
        let Some(value) = ub.group_id(&s.value.name) else {
            cx.err(s.value.pos, format!("unknown group `{}`", s.value.name));
            continue;
        };
        if groups.len() != s.params.len() {
            continue;
        }
        if let Err(e) = ub.state_var(&s.symbol.name, &groups, value) {
            cx.err(s.symbol.pos, e.to_string());
            continue;
        }
        classes.push(s);
    }
    if !cx.diags.is_empty() {
        return Err(cx.diags);
    }
    let u = ub.build();
    let places = places.unwrap().0;

    let mut spec = ObservabilitySpec { places, classes: Vec::new(), placement: Vec::new() };
    for s in &classes {
        spec.classes.push(match s.class {
            ClassAst::Obs => ObsClass::Obs,
            ClassAst::Inf => ObsClass::Inf,
        });
        let scope: Scope = s.params.iter().map(|p| (p.name.name.clone(), u.group_id(&p.group.name).unwrap())).collect();
        let placement = match &s.place {
            None => None,
            Some(c) if u.var_id(&c.name.name).is_some() => {
                attr_template(&mut cx, &u, &scope, c).map(|(t, _)| PlaceExpr::Attribute(t))
            }
            Some(c) => match (c.args.is_empty(), u.parse_value(places, &c.name.name)) {
                (true, Some(Value::Sym(p))) => Some(PlaceExpr::Fixed(p)),
                _ => {
                    cx.err(c.name.pos, format!("`{}` is neither a place nor a state variable", c.name.name));
                    None
                }
            },
        };
        spec.placement.push(placement);
    }

    let agent_const = |cx: &mut Ctx, id: &Ident| match u.constant_id(&id.name) {
        Some(c) => Some(c),
        None => {
            cx.err(id.pos, format!("unknown constant `{}`", id.name));
            None
        }
    };
    let robot = agent_const(&mut cx, &d.robot);
    let human = agent_const(&mut cx, &d.human);
    let location = u.var_id(&d.location.name);
    if location.is_none() {
        cx.err(d.location.pos, format!("unknown state variable `{}`", d.location.name));
    }

    let mut operators = Vec::new();
    let mut compounds = Vec::new();
    for agent in [AgentName::Robot, AgentName::Human] {
        let sec = &d.agents[agent.index()];
        for op in &sec.operators {
            if operators.iter().any(|o: &OperatorSchema| o.agent == agent_of(agent) && o.name == op.name.name) {
                cx.err(op.name.pos, format!("operator `{}` declared twice", op.name.name));
                continue;
            }
            let Some(scope) = scope_of(&mut cx, &u, &op.params) else { continue };
            let pre = literals(&mut cx, &u, &scope, &op.pre, false);
            let eff = literals(&mut cx, &u, &scope, &op.eff, true);
            if let (Some(pre), Some(eff)) = (pre, eff) {
                let mut seen: Vec<&Call> = Vec::new();
                for l in &op.eff {
                    if seen.iter().any(|c| **c == l.attr) {
                        cx.err(l.attr.name.pos, format!("`{}` assigns the same attribute twice", op.name.name));
                    }
                    seen.push(&l.attr);
                }
                operators.push(OperatorSchema {
                    name: op.name.name.clone(),
                    agent: agent_of(agent),
                    params: params(&scope),
                    pre,
                    eff,
                });
            }
        }
        for t in &sec.tasks {
            if compounds.iter().any(|c: &CompoundTask| c.agent == agent_of(agent) && c.name == t.name.name) {
                cx.err(t.name.pos, format!("task `{}` declared twice", t.name.name));
                continue;
            }
            if sec.operators.iter().any(|o| o.name.name == t.name.name) {
                cx.err(t.name.pos, format!("`{}` is both an operator and a task", t.name.name));
                continue;
            }
            let Some(scope) = scope_of(&mut cx, &u, &t.params) else { continue };
            compounds.push(CompoundTask { name: t.name.name.clone(), agent: agent_of(agent), params: params(&scope) });
        }
    }

    let lookup_task = |agent: Agent, name: &str| -> Option<(TaskSymbol, Vec<GroupId>)> {
        if let Some(i) = operators.iter().position(|o| o.agent == agent && o.name == name) {
            let op = &operators[i];
            return Some((
                TaskSymbol::Primitive(beliefplan_core::htn::OpId(i as u16)),
                op.params.iter().map(|p| p.group).collect(),
            ));
        }
        compounds.iter().position(|c| c.agent == agent && c.name == name).map(|i| {
            (
                TaskSymbol::Compound(beliefplan_core::htn::CompoundId(i as u16)),
                compounds[i].params.iter().map(|p| p.group).collect(),
            )
        })
    };

    let mut methods = Vec::new();
    for agent in [AgentName::Robot, AgentName::Human] {
        let a = agent_of(agent);
        for m in &d.agents[agent.index()].methods {
            let Some(scope) = scope_of(&mut cx, &u, &m.vars) else { continue };
            let task = match lookup_task(a, &m.task.name.name) {
                Some((TaskSymbol::Compound(c), groups)) => Some((c, groups)),
                Some(_) => {
                    cx.err(m.task.name.pos, format!("`{}` is an operator, not a task", m.task.name.name));
                    None
                }
                None => {
                    cx.err(m.task.name.pos, format!("unknown {} task `{}`", agent.as_str(), m.task.name.name));
                    None
                }
            };
            let Some((task, groups)) = task else { continue };
            if groups.len() != m.task.args.len() {
                cx.err(
                    m.task.name.pos,
                    format!("`{}` expects {} argument(s), got {}", m.task.name.name, groups.len(), m.task.args.len()),
                );
                continue;
            }
            let head: Option<Vec<Term>> =
                m.task.args.iter().zip(&groups).map(|(t, g)| resolve_term(&mut cx, &u, &scope, t, *g, false)).collect();
            let pre = literals(&mut cx, &u, &scope, &m.pre, false);
            let mut subtasks = Vec::new();
            let mut ok = true;
            for st in &m.subtasks {
                match lookup_task(a, &st.name.name) {
                    Some((symbol, gs)) if gs.len() == st.args.len() => {
                        let args: Option<Vec<Term>> = st
                            .args
                            .iter()
                            .zip(&gs)
                            .map(|(t, g)| resolve_term(&mut cx, &u, &scope, t, *g, false))
                            .collect();
                        match args {
                            Some(args) => subtasks.push(SubtaskTemplate { symbol, args }),
                            None => ok = false,
                        }
                    }
                    Some((_, gs)) => {
                        cx.err(
                            st.name.pos,
                            format!("`{}` expects {} argument(s), got {}", st.name.name, gs.len(), st.args.len()),
                        );
                        ok = false;
                    }
                    None => {
                        cx.err(st.name.pos, format!("unknown {} task or operator `{}`", agent.as_str(), st.name.name));
                        ok = false;
                    }
                }
            }
            for &(x, y) in &m.order {
                if x >= m.subtasks.len() || y >= m.subtasks.len() {
                    cx.err(m.pos, format!("method `{}` orders a missing subtask ({x} < {y})", m.name.name));
                    ok = false;
                }
            }
            if let (Some(head), Some(pre), true) = (head, pre, ok) {
                methods.push((
                    m.pos,
                    MethodSchema {
                        name: m.name.name.clone(),
                        task,
                        vars: params(&scope),
                        head,
                        pre,
                        subtasks,
                        order: m.order.clone(),
                    },
                ));
            }
        }
    }

    let world = belief(&mut cx, &u, &d.world, "world", d.world_pos);
    let human_belief = belief(&mut cx, &u, &d.human_belief, "human-belief", d.human_belief_pos);

    let mut net_tasks = Vec::new();
    for t in &d.network.tasks {
        let a = agent_of(t.agent);
        match lookup_task(a, &t.task.name.name) {
            Some((symbol, gs)) if gs.len() == t.task.args.len() => {
                let args: Option<Vec<Option<Value>>> = t
                    .task
                    .args
                    .iter()
                    .zip(&gs)
                    .map(|(x, g)| match resolve_term(&mut cx, &u, &Vec::new(), x, *g, false) {
                        Some(Term::Const(v)) => Some(Some(v)),
                        _ => None,
                    })
                    .collect();
                if let Some(args) = args {
                    net_tasks.push(TaskInstance { symbol, args });
                }
            }
            Some((_, gs)) => cx.err(
                t.task.name.pos,
                format!("`{}` expects {} argument(s), got {}", t.task.name.name, gs.len(), t.task.args.len()),
            ),
            None => cx.err(t.task.name.pos, format!("unknown {} task `{}`", t.agent.as_str(), t.task.name.name)),
        }
    }
    for (i, t) in d.network.tasks.iter().enumerate() {
        for &(x, y) in &d.network.order {
            if (x == i || y == i)
                && d.network.tasks.get(x.max(y)).is_some()
                && d.network.tasks[x].agent != d.network.tasks[y].agent
            {
                cx.err(t.task.name.pos, "ordering constraints across agents are not supported");
            }
        }
    }
    if d.network.tasks.is_empty() {
        cx.err(d.network_pos, "the initial task network is empty");
    }

    if !cx.diags.is_empty() {
        return Err(cx.diags);
    }
    let network = match TaskNetwork::new(net_tasks, d.network.order.clone()) {
        Ok(n) => n,
        Err(e) => return Err(vec![Diagnostic { pos: d.network_pos, message: e.to_string() }]),
    };
    let method_pos: Vec<Pos> = methods.iter().map(|(p, _)| *p).collect();
    let parts = ModelParts {
        universe: u,
        operators,
        compounds,
        methods: methods.into_iter().map(|(_, m)| m).collect(),
        observability: spec,
        robot: robot.unwrap(),
        human: human.unwrap(),
        location: location.unwrap(),
    };
    let model = Model::new(parts).map_err(|e| {
        let msg = e.to_string();
        let pos = d
            .agents
            .iter()
            .flat_map(|s| &s.methods)
            .zip(&method_pos)
            .find(|(m, _)| msg.contains(&format!("method {}:", m.name.name)))
            .map_or(Pos { line: 1, col: 1 }, |(_, p)| *p);
        vec![Diagnostic { pos, message: msg }]
    })?;
    let start = agent_of(d.start);
    Problem::new(Arc::new(model), world.unwrap(), human_belief.unwrap(), network, start)
        .map_err(|e| vec![Diagnostic { pos: d.network_pos, message: e.to_string() }])
}

fn params(scope: &Scope) -> Vec<Param> {
    scope.iter().map(|(n, g)| Param { name: n.clone(), group: *g }).collect()
}
