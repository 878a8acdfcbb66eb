use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_beliefplan"))
}

fn run(args: &[&str]) -> (bool, String, String) {
    let out = bin().args(args).output().expect("binary runs");
    (out.status.success(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

const STALE: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/domains/cooking-stale-pasta.dom");

#[test]
fn plan_human_start_has_one_tell() {
    let (ok, out, _) = run(&["plan", "--domain", "cooking", "--mode", "new", "--start", "human"]);
    assert!(ok);
    assert_eq!(out.matches("tell(").count(), 1, "{out}");
    assert!(out.contains("tell(SaltInPot,true)"));
}

#[test]
fn simulate_legacy_stale_pasta_is_na() {
    let (ok, out, _) = run(&["simulate", "--domain", STALE, "--mode", "legacy"]);
    assert!(ok);
    assert!(out.starts_with("verdict NA\n"), "{out}");
    let (_, out, _) = run(&["simulate", "--domain", STALE, "--mode", "new"]);
    assert!(out.starts_with("verdict S\n"), "{out}");
}

#[test]
fn realistic_judging_of_legacy_policy() {
    let (ok, out, _) = run(&["simulate", "--domain", "cooking", "--mode", "legacy", "--start", "human", "--realistic"]);
    assert!(ok);
    assert!(out.starts_with("verdict "), "{out}");
}

#[test]
fn export_writes_both_formats() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("p.json");
    let text = dir.path().join("p.txt");
    assert!(run(&["export", "--domain", "box", "--out", json.to_str().unwrap()]).0);
    assert!(run(&["export", "--domain", "box", "--format", "text", "--out", text.to_str().unwrap()]).0);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(json).unwrap()).unwrap();
    assert_eq!(v["mode"], "new");
    assert!(std::fs::read_to_string(text).unwrap().starts_with("policy mode=new start=robot"));
}

#[test]
fn experiment_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for d in [&a, &b] {
        let (ok, out, err) =
            run(&["experiment", "--domain", "box", "--seed", "0", "--sample", "40", "--out", d.to_str().unwrap()]);
        assert!(ok, "{err}");
        assert!(out.contains("box"));
    }
    for f in ["box_instances.csv", "metrics.csv"] {
        assert_eq!(std::fs::read(a.join(f)).unwrap(), std::fs::read(b.join(f)).unwrap());
    }
}

#[test]
fn experiment_output_dir_from_env() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["experiment", "--domain", "cooking", "--mode", "legacy", "--sample", "8"])
        .env("BELIEFPLAN_OUT", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(dir.path().join("cooking_instances.csv").exists());
}

#[test]
fn validate_domain_reports_diagnostics() {
    let (ok, out, _) = run(&["validate-domain", STALE]);
    assert!(ok);
    assert!(out.starts_with("ok: domain cooking"), "{out}");

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.dom");
    let text = beliefplan::builtins::COOKING.replace("  eff SaltInPot = true", "  eff Salt = true");
    std::fs::write(&bad, text).unwrap();
    let (ok, _, err) = run(&["validate-domain", bad.to_str().unwrap()]);
    assert!(!ok);
    assert!(err.contains("28:7: unknown state variable `Salt`"), "{err}");
}

#[test]
fn canonical_output_round_trips() {
    let (ok, out, _) = run(&["validate-domain", "--canonical", STALE]);
    assert!(ok);
    let ast = beliefplan::dom::parse_ast(&out).unwrap();
    assert_eq!(beliefplan::dom::serialize(&ast), out);
}

#[test]
fn unknown_domain_fails() {
    let (ok, _, err) = run(&["plan", "--domain", "nowhere.dom"]);
    assert!(!ok);
    assert!(err.starts_with("error: cannot read domain"), "{err}");
}
