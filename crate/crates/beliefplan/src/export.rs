//! Policy graphs as line-oriented text and as JSON.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use beliefplan_core::belief::Action;
use beliefplan_core::planner::{Leaf, PolicyNode};
use beliefplan_core::{BeliefState, Model, Policy};
use serde_json::{json, Map, Value as Json};

/// FNV-1a over the belief's values, for compact node labels.
pub fn belief_hash(b: &BeliefState) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for v in b.values() {
        for byte in format!("{v:?}").bytes() {
            h ^= u64::from(byte);
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
        h ^= 0xff;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

pub fn show_action(model: &Model, a: Action) -> String {
    match a {
        Action::Op(id) => model.show_op(id),
        Action::Idle => "IDLE".into(),
        Action::Wait => "WAIT".into(),
    }
}

fn leaf_name(l: Leaf) -> &'static str {
    match l {
        Leaf::Done => "done",
        Leaf::Stalled => "stalled",
    }
}

fn tells(model: &Model, n: &PolicyNode) -> Vec<String> {
    let u = model.universe();
    n.comms.actions.iter().map(|c| format!("tell({},{})", u.show_attr(c.attr), u.show_value(c.value))).collect()
}

/// One line per node and per edge. Shared nodes are listed once; messages
/// sent at a node are shown on each of its outgoing edges.
pub fn to_text(model: &Model, policy: &Policy) -> String {
    let nodes = policy.nodes();
    let ids = policy.node_ids();
    let mut s = String::new();
    let _ = writeln!(s, "policy mode={} start={} nodes={}", policy.mode.name(), policy.start.name(), nodes.len());
    for (i, n) in nodes.iter().enumerate() {
        let _ = write!(
            s,
            "node {i} turn={} world={:016x} human={:016x}",
            n.turn.name(),
            belief_hash(&n.world),
            belief_hash(&n.human)
        );
        if let Some(l) = n.leaf {
            let _ = write!(s, " leaf={}", leaf_name(l));
        }
        s.push('\n');
    }
    for (i, n) in nodes.iter().enumerate() {
        let tell = tells(model, n);
        for e in &n.edges {
            let _ = write!(s, "edge {i} -> {} {}", Policy::id_of(&ids, &e.child), e.actor.name());
            for t in &tell {
                let _ = write!(s, " {t}");
            }
            let _ = writeln!(s, " {}", show_action(model, e.action));
        }
    }
    s
}

fn belief_json(model: &Model, b: &BeliefState) -> Json {
    let u = model.universe();
    let m: Map<String, Json> = u.attrs().map(|a| (u.show_attr(a), Json::String(u.show_value(b.get(a))))).collect();
    Json::Object(m)
}

fn node_json(model: &Model, n: &Arc<PolicyNode>, ids: &BTreeMap<usize, usize>, done: &mut Vec<bool>) -> Json {
    let id = Policy::id_of(ids, n);
    if done[id] {
        return json!({ "ref": id });
    }
    done[id] = true;
    let edges: Vec<Json> = n
        .edges
        .iter()
        .map(|e| {
            json!({
                "actor": e.actor.name(),
                "action": show_action(model, e.action),
                "child": node_json(model, &e.child, ids, done),
            })
        })
        .collect();
    let comms: Vec<Json> = tells(model, n).into_iter().map(Json::String).collect();
    json!({
        "id": id,
        "turn": n.turn.name(),
        "leaf": n.leaf.map(leaf_name),
        "world": belief_json(model, &n.world),
        "human": belief_json(model, &n.human),
        "comms": comms,
        "edges": edges,
    })
}

/// Nested policy tree; a node reached a second time is written as
/// `{"ref": id}`.
pub fn to_json(model: &Model, policy: &Policy) -> Json {
    let ids = policy.node_ids();
    let mut done = vec![false; ids.len()];
    json!({
        "mode": policy.mode.name(),
        "start": policy.start.name(),
        "nodes": ids.len(),
        "root": node_json(model, &policy.root, &ids, &mut done),
    })
}
