use beliefplan::builtins::{self, box_source, BoxKnobs};
use beliefplan::dom::{self, parse_ast, serialize};
use proptest::prelude::*;

fn roundtrip(text: &str) {
    let ast = parse_ast(text).expect("parses");
    let canon = serialize(&ast);
    let again = parse_ast(&canon).expect("canonical text parses");
    assert_eq!(ast, again);
    assert_eq!(canon, serialize(&again));
}

#[test]
fn builtins_round_trip() {
    for name in builtins::NAMES {
        roundtrip(builtins::source(name).unwrap());
    }
    roundtrip(include_str!("../domains/cooking-stale-pasta.dom"));
}

#[test]
fn box_file_matches_generator() {
    assert_eq!(builtins::BOX, box_source(&BoxKnobs::default()));
}

#[test]
fn builtin_sizes() {
    let c = builtins::builtin("cooking").unwrap();
    assert_eq!(c.problem.model.universe().attr_count(), 7);
    let b = builtins::builtin("box").unwrap();
    assert_eq!(b.problem.model.universe().attr_count(), 13);
    assert!(matches!(builtins::builtin("kitchen"), Err(builtins::BuiltinError::UnknownDomain(_))));
}

fn first_error(text: &str) -> String {
    match dom::parse(text) {
        Ok(_) => panic!("expected a diagnostic"),
        Err(d) => d.0[0].to_string(),
    }
}

fn cooking_with(from: &str, to: &str) -> String {
    let src = builtins::COOKING;
    assert!(src.contains(from), "fixture text `{from}` missing");
    src.replacen(from, to, 1)
}

#[test]
fn unsupported_constraint_kind() {
    let text = cooking_with("  order 0 < 1\nmethod salted", "  before 0 1\nmethod salted");
    let e = first_error(&text);
    assert!(e.starts_with("51:3: unsupported constraint kind `before`"), "{e}");
}

#[test]
fn unknown_names_are_positioned() {
    let e = first_error(&cooking_with("  eff SaltInPot = true", "  eff Salt = true"));
    assert_eq!(e, "28:7: unknown state variable `Salt`");
    let e = first_error(&cooking_with("robot-move(Room, Kitchen)", "robot-move(Room, Garden)"));
    assert!(e.contains("unknown constant `Garden`"), "{e}");
    let e = first_error(&cooking_with("task PrepStove\n", "task PrepStove\ntask PrepStove\n"));
    assert!(e.contains("task `PrepStove` declared twice"), "{e}");
}

#[test]
fn world_must_be_total() {
    let e = first_error(&cooking_with("[world]\nAgtAt(robot) = Kitchen\n", "[world]\n"));
    assert!(e.contains("[world] is not total: no value for AgtAt(robot)"), "{e}");
}

#[test]
fn all_syntax_errors_are_reported() {
    let text = cooking_with("op add-salt\n", "op add-salt(\n").replacen("op turn-on\n", "op turn-on )\n", 1);
    let d = dom::parse(&text).unwrap_err();
    assert_eq!(d.0.len(), 2, "{d}");
    assert_eq!(d.0[0].pos.line, 26);
    assert_eq!(d.0[1].pos.line, 29);
}

#[test]
fn version_and_header() {
    let e = first_error(&cooking_with("dom 1", "dom 2"));
    assert!(e.contains("unsupported format version 2"), "{e}");
    let e = first_error(&cooking_with("start robot\n", ""));
    assert!(e.contains("missing") && e.contains("start"), "{e}");
}

#[test]
fn offsets_only_in_effects() {
    let text = box_source(&BoxKnobs::default()).replacen("BallsInBox(?b) = ?n,", "BallsInBox(?b) = ?n+1,", 1);
    let e = first_error(&text);
    assert!(e.contains("offsets are only allowed in effect values"), "{e}");
}

#[test]
fn cross_agent_order_rejected() {
    let e = first_error(&cooking_with("human CookPasta\n", "human CookPasta\norder 0 < 1\n"));
    assert!(e.contains("ordering constraints across agents are not supported"), "{e}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn generated_box_domains_load_and_round_trip(boxes in 1usize..4, capacity in 1i32..4, bucket in 3i32..7) {
        let text = box_source(&BoxKnobs { boxes, capacity, bucket });
        roundtrip(&text);
        let loaded = dom::parse(&text).map_err(|d| TestCaseError::fail(d.to_string()))?;
        prop_assert_eq!(loaded.problem.model.universe().attr_count(), 4 + 3 * boxes);
    }
}
