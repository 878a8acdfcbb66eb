//! One line per acceptance criterion; exits nonzero if any criterion fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use beliefplan_core::belief::Action;
use beliefplan_core::htn::GroundOpId;
use beliefplan_core::planner::detect_deadlock;
use beliefplan_core::Mode;
use common::*;

const SWEEP_SECONDS: u64 = 120;
const MIN_COMM_SECONDS: u64 = 30;
const MIN_COMM_PAIRS: usize = 200;
const TRACES: usize = 1000;
const LEGACY_S_BAND: (f64, f64) = (12.5, 40.0);
const LEGACY_NA_FLOOR: f64 = 50.0;
const COM_BAND: (f64, f64) = (40.0, 80.0);

fn guarded(f: impl FnOnce() -> Result<String, String>) -> Result<String, String> {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(r) => r,
        Err(e) => Err(e
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panicked".into())),
    }
}

fn criterion_1(secs: f64) -> Result<String, String> {
    let mut parts = Vec::new();
    for (d, res) in sweeps() {
        let r = res.table.row(d, Mode::New).unwrap();
        if r.successes != r.instances || r.instances != 512 {
            return Err(format!("{d}: new S = {:.1}% over {} instances", r.s_pct, r.instances));
        }
        parts.push(format!("{d} S=100.0%"));
    }
    if secs > SWEEP_SECONDS as f64 {
        return Err(format!("sweep took {secs:.1}s"));
    }
    Ok(format!("{} in {secs:.1}s", parts.join(", ")))
}

fn criterion_2() -> Result<String, String> {
    let mut parts = Vec::new();
    for (d, res) in sweeps() {
        let r = res.table.row(d, Mode::Legacy).unwrap();
        if r.aligned != 64 || r.aligned_successes != 64 {
            return Err(format!("{d}: {}/{} aligned legacy successes", r.aligned_successes, r.aligned));
        }
        parts.push(format!("{d} 64/64"));
    }
    Ok(parts.join(", "))
}

fn criterion_3() -> Result<String, String> {
    let mut parts = Vec::new();
    for (d, res) in sweeps() {
        let r = res.table.row(d, Mode::Legacy).unwrap();
        let failed = r.instances - r.successes;
        if r.na + r.idl != failed || r.errors != 0 {
            return Err(format!("{d}: NA {} + IDL {} != {failed} failures ({} errors)", r.na, r.idl, r.errors));
        }
        if r.s_pct < LEGACY_S_BAND.0 || r.s_pct > LEGACY_S_BAND.1 {
            return Err(format!("{d}: legacy S = {:.1}% outside band", r.s_pct));
        }
        if r.na_pct <= LEGACY_NA_FLOOR {
            return Err(format!("{d}: NA = {:.1}% of failures", r.na_pct));
        }
        parts.push(format!("{d} S={:.1}% NA={:.1}% IDL={:.1}%", r.s_pct, r.na_pct, r.idl_pct));
    }
    Ok(parts.join(", "))
}

fn criterion_4() -> Result<String, String> {
    let mut parts = Vec::new();
    for (d, res) in sweeps() {
        let r = res.table.row(d, Mode::New).unwrap();
        if !(r.com_pct > 0.0 && r.com_pct < 100.0) || r.com_pct < COM_BAND.0 || r.com_pct > COM_BAND.1 {
            return Err(format!("{d}: Com = {:.1}%", r.com_pct));
        }
        parts.push(format!("{d} Com={:.1}%", r.com_pct));
    }
    Ok(parts.join(", "))
}

fn criterion_5() -> Result<String, String> {
    scenario_a();
    scenario_b();
    scenario_c();
    Ok("scenarios A, B, C".into())
}

fn criterion_6() -> Result<String, String> {
    let t = Instant::now();
    let mut parts = Vec::new();
    for (i, d) in DOMAINS.iter().enumerate() {
        let (divergent, most) = check_min_comm(d, MIN_COMM_PAIRS, 7 + i as u64)?;
        parts.push(format!("{d} {MIN_COMM_PAIRS} pairs ({divergent} divergent, max {most} msgs)"));
    }
    let secs = t.elapsed().as_secs_f64();
    if secs >= MIN_COMM_SECONDS as f64 {
        return Err(format!("took {secs:.1}s"));
    }
    Ok(format!("{} in {secs:.2}s", parts.join(", ")))
}

fn criterion_7() -> Result<String, String> {
    for (i, d) in DOMAINS.iter().enumerate() {
        check_traces(d, TRACES, 100 + i as u64)?;
    }
    Ok(format!("{} traces, 0 violations", TRACES * DOMAINS.len()))
}

fn criterion_8() -> Result<String, String> {
    let t = |s: &str| -> Vec<Action> {
        s.chars()
            .map(|c| match c {
                'o' => Action::Op(GroundOpId(0)),
                'w' => Action::Wait,
                _ => Action::Idle,
            })
            .collect()
    };
    let cases = [
        ("owwwo", false),
        ("owwwwo", true),
        ("owiwo", false),
        ("owiwio", true),
        ("wwwowwwowww", false),
        ("ooiiiiii", false),
        ("owwii", true),
        ("", false),
    ];
    for (trace, want) in cases {
        if detect_deadlock(&t(trace)) != want {
            return Err(format!("trace `{trace}`: expected {want}"));
        }
    }
    Ok(format!("{} hand-built traces", cases.len()))
}

fn main() {
    let start = Instant::now();
    let _ = sweeps();
    let sweep_secs = start.elapsed().as_secs_f64();

    let results = [
        guarded(|| criterion_1(sweep_secs)),
        guarded(criterion_2),
        guarded(criterion_3),
        guarded(criterion_4),
        guarded(criterion_5),
        guarded(criterion_6),
        guarded(criterion_7),
        guarded(criterion_8),
    ];
    let mut failed = 0;
    for (i, r) in results.iter().enumerate() {
        match r {
            Ok(detail) => println!("criterion {}: PASS ({detail})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL ({why})", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
