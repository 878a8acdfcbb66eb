//! Syntax tree of a `.dom` file. Positions are carried for diagnostics but
//! never take part in equality, so a re-parsed file compares equal to the
//! tree it was printed from.

use std::fmt;

#[derive(Clone, Copy, Debug, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl PartialEq for Pos {
    fn eq(&self, _: &Pos) -> bool {
        true
    }
}

impl Eq for Pos {}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ident {
    pub name: String,
    pub pos: Pos,
}

impl Ident {
    pub fn new(name: impl Into<String>) -> Ident {
        Ident { name: name.into(), pos: Pos::default() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AgentName {
    Robot,
    Human,
}

impl AgentName {
    pub fn as_str(self) -> &'static str {
        match self {
            AgentName::Robot => "robot",
            AgentName::Human => "human",
        }
    }

    pub fn index(self) -> usize {
        match self {
            AgentName::Robot => 0,
            AgentName::Human => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupBody {
    Symbols(Vec<Ident>),
    Range { lo: i32, hi: i32 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupDecl {
    pub name: Ident,
    /// The distinguished group of places.
    pub places: bool,
    pub body: GroupBody,
}

/// `?name:Group`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypedVar {
    pub name: Ident,
    pub group: Ident,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TermAst {
    /// `?x`, or `?x+k` / `?x-k` when the offset is nonzero.
    Var(Ident, i32),
    /// A constant name, `true` or `false`.
    Name(Ident),
    Int(i32, Pos),
}

/// `Symbol(arg, ...)`; parentheses are optional for zero arguments.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Call {
    pub name: Ident,
    pub args: Vec<TermAst>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiteralAst {
    pub attr: Call,
    pub value: TermAst,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClassAst {
    Obs,
    Inf,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateDecl {
    pub symbol: Ident,
    pub params: Vec<TypedVar>,
    pub value: Ident,
    pub class: ClassAst,
    /// `at Place` or `at Attribute(args)`.
    pub place: Option<Call>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpDecl {
    pub name: Ident,
    pub params: Vec<TypedVar>,
    pub pre: Vec<LiteralAst>,
    pub eff: Vec<LiteralAst>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TaskDecl {
    pub name: Ident,
    pub params: Vec<TypedVar>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MethodDecl {
    pub name: Ident,
    pub vars: Vec<TypedVar>,
    pub task: Call,
    pub pre: Vec<LiteralAst>,
    pub subtasks: Vec<Call>,
    pub order: Vec<(usize, usize)>,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assign {
    pub attr: Call,
    pub value: TermAst,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NetworkTask {
    pub agent: AgentName,
    pub task: Call,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NetworkDecl {
    pub tasks: Vec<NetworkTask>,
    pub order: Vec<(usize, usize)>,
}

/// Per-agent declarations, indexed by [`AgentName::index`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AgentSections {
    pub operators: Vec<OpDecl>,
    pub tasks: Vec<TaskDecl>,
    pub methods: Vec<MethodDecl>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DomainFile {
    pub version: u32,
    pub name: Ident,
    pub start: AgentName,
    pub groups: Vec<GroupDecl>,
    pub robot: Ident,
    pub human: Ident,
    pub location: Ident,
    pub state: Vec<StateDecl>,
    pub agents: [AgentSections; 2],
    pub world: Vec<Assign>,
    pub human_belief: Vec<Assign>,
    pub network: NetworkDecl,
    /// Positions of section headers, for diagnostics about whole sections.
    pub world_pos: Pos,
    pub human_belief_pos: Pos,
    pub network_pos: Pos,
}
