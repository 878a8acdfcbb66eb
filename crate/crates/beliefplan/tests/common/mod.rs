#![allow(dead_code)]

use beliefplan::builtins;
use beliefplan::dom;
use beliefplan::experiment::{run_builtin, ExperimentResult};
use beliefplan::export::to_text;
use beliefplan_core::comm::{is_relevant_divergence, min_comm_bfs};
use beliefplan_core::htn::{applicable, Agent};
use beliefplan_core::planner::{plan, simulate, Resolver};
use beliefplan_core::{BeliefState, Mode, Model, PlannerConfig, Policy, Problem, Value};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const DOMAINS: [&str; 2] = ["cooking", "box"];

pub fn problem(name: &str) -> Problem {
    builtins::builtin(name).expect("built-in domain loads").problem
}

pub fn stale_pasta() -> Problem {
    let text = include_str!("../../domains/cooking-stale-pasta.dom");
    dom::parse(text).expect("scenario file loads").problem
}

pub fn value(p: &Problem, attr: &str, b: &BeliefState) -> String {
    let u = p.model.universe();
    let a = u.attrs().find(|&a| u.show_attr(a) == attr).unwrap_or_else(|| panic!("no attribute {attr}"));
    u.show_value(b.get(a))
}

pub fn plan_mode(p: &Problem, mode: Mode) -> Policy {
    plan(p, &PlannerConfig::new(mode)).expect("policy exists")
}

pub fn verdict(p: &Problem, policy: &Policy) -> &'static str {
    simulate(&p.model, policy, &p.world, &p.human_belief, Resolver::Exhaustive).verdict().label()
}

/// Every message of a policy as `tell(attr,value)`.
pub fn tells(p: &Problem, policy: &Policy) -> Vec<String> {
    let u = p.model.universe();
    policy
        .nodes()
        .iter()
        .flat_map(|n| {
            n.comms.actions.iter().map(|c| format!("tell({},{})", u.show_attr(c.attr), u.show_value(c.value)))
        })
        .collect()
}

/// Both experiment sweeps, computed once per test binary.
pub fn sweeps() -> &'static [(String, ExperimentResult)] {
    use std::sync::OnceLock;
    static CELL: OnceLock<Vec<(String, ExperimentResult)>> = OnceLock::new();
    CELL.get_or_init(|| {
        DOMAINS
            .iter()
            .map(|d| (d.to_string(), run_builtin(d, &[Mode::New, Mode::Legacy]).expect("sweep runs")))
            .collect()
    })
}

/// A uniformly random total belief.
pub fn random_belief(model: &Model, rng: &mut ChaCha8Rng) -> BeliefState {
    let u = model.universe();
    let pairs: Vec<_> = u
        .attrs()
        .map(|a| {
            let vs: Vec<Value> = u.value_group(a).values();
            (a, vs[rng.gen_range(0..vs.len())])
        })
        .collect();
    u.belief(pairs).expect("total belief")
}

/// A human belief that keeps each world value with probability `keep`.
pub fn perturb(model: &Model, world: &BeliefState, keep: f64, rng: &mut ChaCha8Rng) -> BeliefState {
    let other = random_belief(model, rng);
    let mut h = world.clone();
    for a in model.universe().attrs() {
        if !rng.gen_bool(keep) {
            h = h.with(a, other.get(a));
        }
    }
    h
}

/// Relevance restated: some human operator is applicable in exactly one of
/// the two beliefs. Effects are unconditional in both built-in domains, so
/// applying an operator to both beliefs leaves its written attributes equal.
pub fn oracle_relevant(model: &Model, world: &BeliefState, human: &BeliefState) -> bool {
    model.agent_ops(Agent::Human).any(|g| {
        let op = model.ground_op(g);
        applicable(op, world) != applicable(op, human)
    })
}

/// Smallest number of diverging attributes whose correction removes every
/// relevant divergence, by enumerating all subsets.
pub fn oracle_min_comm(model: &Model, world: &BeliefState, human: &BeliefState) -> usize {
    let diverging: Vec<_> = model.universe().attrs().filter(|&a| world.get(a) != human.get(a)).collect();
    let n = diverging.len();
    let mut best = n;
    for mask in 0u32..1 << n {
        let size = mask.count_ones() as usize;
        if size >= best {
            continue;
        }
        let mut h = human.clone();
        for (i, &a) in diverging.iter().enumerate() {
            if mask >> i & 1 == 1 {
                h = h.with(a, world.get(a));
            }
        }
        if !oracle_relevant(model, world, &h) {
            best = size;
        }
    }
    best
}

/// Checks min_comm_bfs against the subset oracle on `pairs` random pairs.
/// Returns the number of pairs with a nonempty divergence and the largest
/// message count seen.
pub fn check_min_comm(domain: &str, pairs: usize, seed: u64) -> Result<(usize, usize), String> {
    let p = problem(domain);
    let model = &*p.model;
    let ops: Vec<_> = model.agent_ops(Agent::Human).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut divergent = 0;
    let mut most = 0;
    for i in 0..pairs {
        let world = random_belief(model, &mut rng);
        let keep = [0.3, 0.6, 0.85][i % 3];
        let human = perturb(model, &world, keep, &mut rng);
        if world != human {
            divergent += 1;
        }
        let relevant = is_relevant_divergence(model, &world, &human, &ops);
        if relevant != oracle_relevant(model, &world, &human) {
            return Err(format!("{domain} pair {i}: relevance disagrees with the oracle"));
        }
        let plan = min_comm_bfs(model, &world, &human, &ops);
        let want = oracle_min_comm(model, &world, &human);
        if plan.len() != want {
            return Err(format!("{domain} pair {i}: {} messages, oracle says {want}", plan.len()));
        }
        most = most.max(want);
        let after = plan.apply(&human).map_err(|e| format!("{domain} pair {i}: {e}"))?;
        if is_relevant_divergence(model, &world, &after, &ops) {
            return Err(format!("{domain} pair {i}: divergence still relevant after messages"));
        }
    }
    Ok((divergent, most))
}

/// Runs one random joint trace under observation-aware dynamics from
/// generated instance `instance` and checks the belief protocol after every
/// step. `picks` selects among the applicable moves (and WAIT).
pub fn check_trace(domain: &str, instance: usize, picks: &[u32]) -> Result<(), String> {
    use beliefplan::experiment::{generate_initial_states, GeneratorSpec};
    use beliefplan_core::belief::{step_belief_protocol, Action, AgentModel};
    use beliefplan_core::htn::{apply, TaskNetwork};
    use beliefplan_core::observability::ObsClass;
    use beliefplan_core::Dynamics;

    let p = problem(domain);
    let model = &*p.model;
    let obs = model.observability();
    let spec = GeneratorSpec::default_for(domain).expect("default generator");
    let insts = generate_initial_states(&p, &spec).map_err(|e| e.to_string())?;
    let inst = &insts[instance % insts.len()];
    let agent = |a, belief| AgentModel { agent: a, belief, agenda: TaskNetwork::empty(), plan: Vec::new() };
    let mut robot = agent(Agent::Robot, inst.world.clone());
    let mut human = agent(Agent::Human, model.assess(&inst.human, &inst.world));
    let mut replay = inst.world.clone();
    let mut actor = inst.start;

    for (k, &pick) in picks.iter().enumerate() {
        let belief = if actor == Agent::Robot { &robot.belief } else { &human.belief };
        let moves: Vec<_> = model
            .agent_ops(actor)
            .filter(|&g| applicable(model.ground_op(g), belief) && applicable(model.ground_op(g), &replay))
            .collect();
        let action = match moves.get(pick as usize % (moves.len() + 1)) {
            Some(&g) => Action::Op(g),
            None => Action::Wait,
        };
        let before_human = human.belief.clone();
        let (r, h) = step_belief_protocol(model, Dynamics::Aware, &robot, &human, actor, action)
            .map_err(|e| format!("step {k}: {e}"))?;
        if let Action::Op(g) = action {
            let op = model.ground_op(g);
            let next = apply(op, &replay).map_err(|e| format!("step {k}: {e}"))?;
            for a in model.universe().attrs() {
                let written = op.eff.iter().find(|(x, _)| *x == a);
                match written {
                    Some(&(_, v)) if next.get(a) != v => return Err(format!("step {k}: effect not written")),
                    None if next.get(a) != replay.get(a) => return Err(format!("step {k}: frame axiom broken")),
                    _ => {}
                }
            }
            replay = next;
        }
        if r.belief != replay {
            return Err(format!("step {k}: robot belief differs from the replayed world"));
        }
        let once = model.assess(&h.belief, &replay);
        if once != h.belief || model.assess(&once, &replay) != once {
            return Err(format!("step {k}: assess is not idempotent"));
        }
        let raw = model.assess(&before_human, &replay);
        for a in model.universe().attrs() {
            if obs.class(a) == ObsClass::Inf && raw.get(a) != before_human.get(a) {
                return Err(format!("step {k}: assess changed an inferrable attribute"));
            }
        }
        let here = obs.place_of(model.location_of(Agent::Human), &replay).map_err(|e| e.to_string())?;
        for a in model.universe().attrs() {
            let at_human = here.is_some() && obs.place_of(a, &replay).map_err(|e| e.to_string())? == here;
            if obs.class(a) == ObsClass::Obs && at_human && h.belief.get(a) != replay.get(a) {
                return Err(format!("step {k}: observable attribute at the human's place diverges"));
            }
        }
        robot = r;
        human = h;
        actor = actor.other();
    }
    Ok(())
}

/// `traces` seeded random traces of up to 30 steps each.
pub fn check_traces(domain: &str, traces: usize, seed: u64) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for t in 0..traces {
        let len = rng.gen_range(1..=30);
        let picks: Vec<u32> = (0..len).map(|_| rng.gen()).collect();
        let inst = rng.gen_range(0..512);
        check_trace(domain, inst, &picks).map_err(|e| format!("{domain} trace {t}: {e}"))?;
    }
    Ok(())
}

/// Robot starts, beliefs aligned, both agents in the kitchen.
pub fn scenario_a() {
    let p = problem("cooking");
    assert_eq!(p.world, p.human_belief);
    let new = plan_mode(&p, Mode::New);
    let legacy = plan_mode(&p, Mode::Legacy);
    assert!(tells(&p, &new).is_empty());
    assert_eq!(new.paths(16), legacy.paths(16));
    assert_eq!(new.branch_count(), 1);
    assert_eq!(verdict(&p, &new), "S");
    assert_eq!(verdict(&p, &legacy), "S");
}

/// Human starts and leaves for the pasta while the robot salts the pot.
pub fn scenario_b() {
    let p = problem("cooking").with_start(Agent::Human);
    let policy = plan_mode(&p, Mode::New);
    assert_eq!(tells(&p, &policy), ["tell(SaltInPot,true)"]);
    assert_eq!(verdict(&p, &policy), "S");

    let m = &p.model;
    let text = to_text(m, &policy);
    let edges: Vec<&str> = text.lines().filter(|l| l.starts_with("edge")).collect();
    assert_eq!(
        edges,
        [
            "edge 0 -> 1 human move(Kitchen,Room)",
            "edge 1 -> 2 robot add-salt()",
            "edge 2 -> 3 human grab-pasta(Room)",
            "edge 3 -> 4 robot turn-on()",
            "edge 4 -> 5 human move(Room,Kitchen)",
            "edge 5 -> 6 robot tell(SaltInPot,true) IDLE",
            "edge 6 -> 7 human pour-pasta()",
        ]
    );

    // The stove was switched on behind the human's back; coming back into
    // the kitchen fixes that belief without a message.
    let nodes = policy.nodes();
    assert_eq!(value(&p, "Stove", &nodes[4].world), "on");
    assert_eq!(value(&p, "Stove", &nodes[4].human), "off");
    assert_eq!(value(&p, "Stove", &nodes[5].human), "on");
    assert_eq!(value(&p, "SaltInPot", &nodes[5].human), "false");
    assert!(nodes[5].comms.len() == 1);
}

/// The human's belief about the pasta location is stale.
pub fn scenario_c() {
    let p = stale_pasta();
    assert_eq!(value(&p, "PastaLoc", &p.world), "Kitchen");
    assert_eq!(value(&p, "PastaLoc", &p.human_belief), "Room");

    let new = plan_mode(&p, Mode::New);
    assert!(tells(&p, &new).is_empty());
    assert_eq!(verdict(&p, &new), "S");
    let path = &new.paths(4)[0];
    assert!(path
        .iter()
        .all(|(a, act)| *a != Agent::Human || act.op().is_none_or(|g| p.model.show_op(g) != "move(Kitchen,Room)")));

    let legacy = plan_mode(&p, Mode::Legacy);
    assert_eq!(verdict(&p, &legacy), "NA");
    let text = to_text(&p.model, &legacy);
    assert!(text.contains("edge 1 -> 2 human move(Kitchen,Room)"), "{text}");
}
