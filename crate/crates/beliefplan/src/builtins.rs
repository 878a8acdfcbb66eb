//! The two benchmark domains.

use std::fmt::Write;

use thiserror::Error;

use crate::dom::{self, Loaded};

pub const COOKING: &str = include_str!("../domains/cooking.dom");
pub const BOX: &str = include_str!("../domains/box.dom");

#[derive(Debug, Error)]
pub enum BuiltinError {
    #[error("unknown domain `{0}` (expected `cooking` or `box`)")]
    UnknownDomain(String),
    #[error("built-in domain failed to load:\n{0}")]
    Invalid(#[from] dom::Diagnostics),
}

pub const NAMES: [&str; 2] = ["cooking", "box"];

pub fn source(name: &str) -> Result<&'static str, BuiltinError> {
    match name {
        "cooking" => Ok(COOKING),
        "box" => Ok(BOX),
        other => Err(BuiltinError::UnknownDomain(other.to_string())),
    }
}

pub fn builtin(name: &str) -> Result<Loaded, BuiltinError> {
    Ok(dom::parse(source(name)?)?)
}

/// Size parameters of the box domain.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoxKnobs {
    pub boxes: usize,
    /// Balls per full box.
    pub capacity: i32,
    /// Balls in a full bucket. Filling needs two balls in the bucket, so a
    /// restock is due when one ball is left.
    pub bucket: i32,
}

impl Default for BoxKnobs {
    fn default() -> Self {
        BoxKnobs { boxes: 3, capacity: 2, bucket: 5 }
    }
}

/// Text of the box domain for the given knobs. With the defaults this is
/// exactly `domains/box.dom`.
pub fn box_source(k: &BoxKnobs) -> String {
    let boxes: Vec<String> = (1..=k.boxes).map(|i| format!("box{i}")).collect();
    let cap = k.capacity;
    let mut s = String::new();
    s.push_str(
        "# Preparing boxes. The human fills each box with balls and sends it once\n\
         # it is full and carries a sticker; the robot pastes stickers and may help\n\
         # filling. When one ball is left the human restocks the bucket from storage.\n",
    );
    s.push_str("dom 1\ndomain box\nstart robot\n\n[groups]\n");
    s.push_str("group Agents = robot human\nplaces Places = Table Storage\n");
    let _ = writeln!(s, "group Boxes = {}", boxes.join(" "));
    let _ = writeln!(s, "range Level = 0..{cap}");
    let _ = writeln!(s, "range Short = 0..{}", cap - 1);
    let _ = writeln!(s, "range Stock = 0..{}", k.bucket);
    let _ = writeln!(s, "range Avail = 2..{}", k.bucket);
    s.push_str(
        "\n[agents]\nrobot robot\nhuman human\nlocation AgtAt\n\n[state]\n\
         AgtAt(?a:Agents) : Places obs at AgtAt(?a)\n\
         BallsInBox(?b:Boxes) : Level inf at Table\n\
         Sticker(?b:Boxes) : bool obs at Table\n\
         Sent(?b:Boxes) : bool obs at Table\n\
         BucketBalls : Stock obs at Table\n\
         HumanHasBalls : bool obs at AgtAt(human)\n",
    );
    let fill = |agent: &str| {
        format!(
            "op fill(?b:Boxes, ?n:Short, ?k:Avail)\n\
             \x20 pre AgtAt({agent}) = Table, BallsInBox(?b) = ?n, BucketBalls = ?k, Sent(?b) = false\n\
             \x20 eff BallsInBox(?b) = ?n+1, BucketBalls = ?k-1\n"
        )
    };
    s.push_str("\n[operators robot]\n");
    s.push_str(&fill("robot"));
    s.push_str(
        "op paste(?b:Boxes)\n\
         \x20 pre AgtAt(robot) = Table, Sticker(?b) = false\n\
         \x20 eff Sticker(?b) = true\n\
         \n[tasks robot]\ntask Stick(?b:Boxes)\ntask Help\n\
         \n[methods robot]\n\
         method paste-it(?b:Boxes) for Stick(?b)\n\
         \x20 sub paste(?b)\n\
         method stuck(?b:Boxes) for Stick(?b)\n\
         \x20 pre Sticker(?b) = true\n\
         method help-fill(?b:Boxes, ?n:Short, ?k:Avail) for Help\n\
         \x20 sub fill(?b, ?n, ?k)\n\
         \x20 sub Help\n\
         \x20 order 0 < 1\n\
         method help-done for Help\n",
    );
    s.push_str("\n[operators human]\n");
    s.push_str(&fill("human"));
    let _ = write!(
        s,
        "op send(?b:Boxes)\n\
         \x20 pre AgtAt(human) = Table, BallsInBox(?b) = {cap}, Sticker(?b) = true, Sent(?b) = false\n\
         \x20 eff Sent(?b) = true\n\
         op move(?from:Places, ?to:Places)\n\
         \x20 pre AgtAt(human) = ?from\n\
         \x20 eff AgtAt(human) = ?to\n\
         op grab-balls\n\
         \x20 pre AgtAt(human) = Storage, HumanHasBalls = false\n\
         \x20 eff HumanHasBalls = true\n\
         op refill\n\
         \x20 pre AgtAt(human) = Table, HumanHasBalls = true\n\
         \x20 eff BucketBalls = {}, HumanHasBalls = false\n",
        k.bucket
    );
    let _ = write!(
        s,
        "\n[tasks human]\ntask Arrive\ntask SendBox(?b:Boxes)\ntask FillBox(?b:Boxes)\n\
         \n[methods human]\n\
         method at-table for Arrive\n\
         \x20 pre AgtAt(human) = Table\n\
         method walk-in for Arrive\n\
         \x20 pre AgtAt(human) = Storage\n\
         \x20 sub move(Storage, Table)\n\
         method send-box(?b:Boxes) for SendBox(?b)\n\
         \x20 sub FillBox(?b)\n\
         \x20 sub send(?b)\n\
         \x20 order 0 < 1\n\
         method filled(?b:Boxes) for FillBox(?b)\n\
         \x20 pre BallsInBox(?b) = {cap}\n\
         method fill-more(?b:Boxes, ?n:Short, ?k:Avail) for FillBox(?b)\n\
         \x20 sub fill(?b, ?n, ?k)\n\
         \x20 sub FillBox(?b)\n\
         \x20 order 0 < 1\n\
         method restock(?b:Boxes) for FillBox(?b)\n\
         \x20 pre BucketBalls = 1\n\
         \x20 sub move(Table, Storage)\n\
         \x20 sub grab-balls\n\
         \x20 sub move(Storage, Table)\n\
         \x20 sub refill\n\
         \x20 sub FillBox(?b)\n\
         \x20 order 0 < 1 < 2 < 3 < 4\n"
    );
    for title in ["world", "human-belief"] {
        let _ = write!(s, "\n[{title}]\nAgtAt(robot) = Table\nAgtAt(human) = Table\n");
        for b in &boxes {
            let _ = writeln!(s, "BallsInBox({b}) = 0");
        }
        for b in &boxes {
            let _ = writeln!(s, "Sticker({b}) = false");
        }
        for b in &boxes {
            let _ = writeln!(s, "Sent({b}) = false");
        }
        let _ = writeln!(s, "BucketBalls = {}", k.bucket);
        s.push_str("HumanHasBalls = false\n");
    }
    s.push_str("\n[network]\n");
    for b in &boxes {
        let _ = writeln!(s, "robot Stick({b})");
    }
    s.push_str("robot Help\nhuman Arrive\n");
    for b in &boxes {
        let _ = writeln!(s, "human SendBox({b})");
    }
    let first_human = k.boxes + 1;
    let chain: Vec<String> = (first_human..first_human + k.boxes + 1).map(|i| i.to_string()).collect();
    let _ = writeln!(s, "order {}", chain.join(" < "));
    s
}
