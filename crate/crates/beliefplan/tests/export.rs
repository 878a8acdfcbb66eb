mod common;

use beliefplan::export::{belief_hash, to_json, to_text};
use beliefplan_core::{Agent, Mode};
use common::*;

#[test]
fn text_header_and_counts() {
    let p = problem("cooking").with_start(Agent::Human);
    let policy = plan_mode(&p, Mode::New);
    let text = to_text(&p.model, &policy);
    let n = policy.nodes().len();
    assert_eq!(text.lines().next().unwrap(), format!("policy mode=new start=human nodes={n}"));
    assert_eq!(text.lines().filter(|l| l.starts_with("node ")).count(), n);
    let edges: usize = policy.nodes().iter().map(|x| x.edges.len()).sum();
    assert_eq!(text.lines().filter(|l| l.starts_with("edge ")).count(), edges);
    let root = format!("node 0 turn=human world={:016x}", belief_hash(&p.world));
    assert!(text.contains(&root), "{text}");
    assert!(text.lines().last().unwrap().starts_with("edge"));
    assert!(text.contains("leaf=done"));
}

#[test]
fn json_mirrors_the_tree() {
    let p = problem("cooking").with_start(Agent::Human);
    let policy = plan_mode(&p, Mode::New);
    let j = to_json(&p.model, &policy);
    assert_eq!(j["mode"], "new");
    assert_eq!(j["nodes"], policy.nodes().len());
    let mut node = &j["root"];
    let mut tells = Vec::new();
    let mut actions = Vec::new();
    loop {
        for t in node["comms"].as_array().unwrap() {
            tells.push(t.as_str().unwrap().to_string());
        }
        let edges = node["edges"].as_array().unwrap();
        if edges.is_empty() {
            assert_eq!(node["leaf"], "done");
            break;
        }
        actions.push(edges[0]["action"].as_str().unwrap().to_string());
        node = &edges[0]["child"];
    }
    assert_eq!(tells, ["tell(SaltInPot,true)"]);
    assert_eq!(actions.len(), 7);
    assert_eq!(node["world"]["PastaInPot"], "true");
}

#[test]
fn shared_nodes_become_refs() {
    let p = problem("box");
    let policy = plan_mode(&p, Mode::New);
    let j = to_json(&p.model, &policy);
    fn count(v: &serde_json::Value, full: &mut usize, refs: &mut usize) {
        if v.get("ref").is_some() {
            *refs += 1;
            return;
        }
        *full += 1;
        for e in v["edges"].as_array().unwrap() {
            count(&e["child"], full, refs);
        }
    }
    let (mut full, mut refs) = (0, 0);
    count(&j["root"], &mut full, &mut refs);
    assert_eq!(full, policy.nodes().len());
    let edges: usize = policy.nodes().iter().map(|x| x.edges.len()).sum();
    assert_eq!(full - 1 + refs, edges);
}
