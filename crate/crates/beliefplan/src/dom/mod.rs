//! The `.dom` domain file format.
//!
//! A file is a header (`dom 1`, `domain <name>`, `start robot|human`)
//! followed by sections: `[groups]`, `[agents]`, `[state]`,
//! `[operators <agent>]`, `[tasks <agent>]`, `[methods <agent>]`, `[world]`,
//! `[human-belief]` and `[network]`. The grammar is documented in
//! `docs/dom-format.md`.

pub mod ast;
mod build;
mod lexer;
mod parser;
mod serialize;

use std::fmt;

use beliefplan_core::Problem;

pub use ast::{DomainFile, Pos};
pub use build::build;
pub use parser::{parse_ast, VERSION};
pub use serialize::serialize;

/// A positioned error message.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub pos: Pos,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.pos.line, self.pos.col, self.message)
    }
}

/// All diagnostics of a failed load.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub struct Diagnostics(pub Vec<Diagnostic>);

impl fmt::Display for Diagnostics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

/// A parsed and validated domain file.
#[derive(Clone, Debug)]
pub struct Loaded {
    pub ast: DomainFile,
    pub problem: Problem,
}

pub fn parse(text: &str) -> Result<Loaded, Diagnostics> {
    let ast = parse_ast(text).map_err(Diagnostics)?;
    let problem = build(&ast).map_err(Diagnostics)?;
    Ok(Loaded { ast, problem })
}
