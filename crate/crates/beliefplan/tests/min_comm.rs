mod common;

use std::time::Instant;

use common::*;

#[test]
fn bfs_matches_subset_enumeration() {
    let t = Instant::now();
    for (i, d) in DOMAINS.iter().enumerate() {
        let (divergent, most) = check_min_comm(d, 200, 7 + i as u64).unwrap();
        println!("{d}: {divergent} divergent pairs, up to {most} messages");
        assert!(divergent > 100, "{d}: only {divergent} divergent pairs");
        assert!(most >= 2, "{d}: oracle never needed more than one message");
    }
    assert!(t.elapsed().as_secs() < 30);
}

#[test]
fn aligned_beliefs_need_no_messages() {
    use beliefplan_core::comm::min_comm_bfs;
    use beliefplan_core::htn::Agent;
    for d in DOMAINS {
        let p = problem(d);
        let ops: Vec<_> = p.model.agent_ops(Agent::Human).collect();
        assert!(min_comm_bfs(&p.model, &p.world, &p.world, &ops).is_empty());
    }
}
