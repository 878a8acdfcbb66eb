//! Domain files, built-in benchmark domains, policy export and the
//! experiment harness around `beliefplan-core`.

pub mod builtins;
pub mod dom;
pub mod experiment;
pub mod export;
