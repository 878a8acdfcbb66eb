use super::ast::*;
use super::lexer::{lex_line, Tok, Token};
use super::Diagnostic;

pub const VERSION: u32 = 1;

type PResult<T> = Result<T, Diagnostic>;

struct Cursor<'a> {
    toks: &'a [Token],
    i: usize,
    eol: Pos,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<&'a Tok> {
        self.toks.get(self.i).map(|t| &t.tok)
    }

    fn pos(&self) -> Pos {
        self.toks.get(self.i).map_or(self.eol, |t| t.pos)
    }

    fn err<T>(&self, msg: impl Into<String>) -> PResult<T> {
        Err(Diagnostic { pos: self.pos(), message: msg.into() })
    }

    fn found(&self) -> String {
        self.peek().map_or_else(|| "end of line".into(), Tok::describe)
    }

    fn ident(&mut self, what: &str) -> PResult<Ident> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let id = Ident { name: s.clone(), pos: self.pos() };
                self.i += 1;
                Ok(id)
            }
            _ => self.err(format!("expected {what}, found {}", self.found())),
        }
    }

    fn keyword(&mut self, kw: &str) -> PResult<()> {
        match self.peek() {
            Some(Tok::Ident(s)) if s == kw => {
                self.i += 1;
                Ok(())
            }
            _ => self.err(format!("expected `{kw}`, found {}", self.found())),
        }
    }

    fn int(&mut self) -> PResult<i32> {
        match self.peek() {
            Some(Tok::Int(n)) => {
                self.i += 1;
                Ok(*n)
            }
            _ => self.err(format!("expected an integer, found {}", self.found())),
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Punct(c)) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> PResult<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected `{c}`, found {}", self.found()))
        }
    }

    fn at_end(&self) -> bool {
        self.i >= self.toks.len()
    }

    fn finish(&self) -> PResult<()> {
        if self.at_end() {
            Ok(())
        } else {
            self.err(format!("unexpected {} at end of line", self.found()))
        }
    }

    fn agent(&mut self) -> PResult<AgentName> {
        let id = self.ident("`robot` or `human`")?;
        match id.name.as_str() {
            "robot" => Ok(AgentName::Robot),
            "human" => Ok(AgentName::Human),
            other => Err(Diagnostic { pos: id.pos, message: format!("expected `robot` or `human`, found `{other}`") }),
        }
    }

    /// `(?x:G, ?y:H)`; the whole list is optional.
    fn typed_vars(&mut self) -> PResult<Vec<TypedVar>> {
        let mut out = Vec::new();
        if !self.eat('(') {
            return Ok(out);
        }
        if self.eat(')') {
            return Ok(out);
        }
        loop {
            let pos = self.pos();
            let name = match self.peek() {
                Some(Tok::Var(s, 0)) => s.clone(),
                _ => return self.err(format!("expected a parameter `?name`, found {}", self.found())),
            };
            self.i += 1;
            self.expect(':')?;
            let group = self.ident("a group name")?;
            out.push(TypedVar { name: Ident { name, pos }, group });
            if self.eat(')') {
                return Ok(out);
            }
            self.expect(',')?;
        }
    }

    fn term(&mut self) -> PResult<TermAst> {
        let pos = self.pos();
        let t = match self.peek() {
            Some(Tok::Var(s, k)) => TermAst::Var(Ident { name: s.clone(), pos }, *k),
            Some(Tok::Ident(s)) => TermAst::Name(Ident { name: s.clone(), pos }),
            Some(Tok::Int(n)) => TermAst::Int(*n, pos),
            _ => return self.err(format!("expected a value, found {}", self.found())),
        };
        self.i += 1;
        Ok(t)
    }

    fn call(&mut self, what: &str) -> PResult<Call> {
        let name = self.ident(what)?;
        let mut args = Vec::new();
        if self.eat('(') && !self.eat(')') {
            loop {
                args.push(self.term()?);
                if self.eat(')') {
                    break;
                }
                self.expect(',')?;
            }
        }
        Ok(Call { name, args })
    }

    fn literal(&mut self) -> PResult<LiteralAst> {
        let attr = self.call("a state variable")?;
        self.expect('=')?;
        let value = self.term()?;
        Ok(LiteralAst { attr, value })
    }

    fn literals(&mut self) -> PResult<Vec<LiteralAst>> {
        let mut out = vec![self.literal()?];
        while self.eat(',') {
            out.push(self.literal()?);
        }
        self.finish()?;
        Ok(out)
    }

    /// `a < b < c, d < e`
    fn order(&mut self) -> PResult<Vec<(usize, usize)>> {
        let mut out = Vec::new();
        loop {
            let mut prev = self.index()?;
            self.expect('<')?;
            loop {
                let next = self.index()?;
                out.push((prev, next));
                prev = next;
                if !self.eat('<') {
                    break;
                }
            }
            if !self.eat(',') {
                break;
            }
        }
        self.finish()?;
        Ok(out)
    }

    fn index(&mut self) -> PResult<usize> {
        let pos = self.pos();
        let n = self.int()?;
        usize::try_from(n).map_err(|_| Diagnostic { pos, message: "subtask index must be non-negative".into() })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Section {
    Header,
    Groups,
    Agents,
    State,
    Operators(AgentName),
    Tasks(AgentName),
    Methods(AgentName),
    World,
    HumanBelief,
    Network,
}

#[derive(Default)]
struct Partial {
    version: Option<u32>,
    name: Option<Ident>,
    start: Option<AgentName>,
    groups: Vec<GroupDecl>,
    robot: Option<Ident>,
    human: Option<Ident>,
    location: Option<Ident>,
    state: Vec<StateDecl>,
    agents: [AgentSections; 2],
    world: Vec<Assign>,
    human_belief: Vec<Assign>,
    network: NetworkDecl,
    seen: Vec<&'static str>,
    world_pos: Pos,
    human_belief_pos: Pos,
    network_pos: Pos,
}

const BODY_KEYWORDS: [&str; 7] = ["pre", "eff", "sub", "order", "before", "after", "between"];

const MANDATORY: [&str; 6] = ["groups", "agents", "state", "world", "human-belief", "network"];

/// Parses a `.dom` file into its syntax tree. All line-level errors are
/// reported together.
pub fn parse_ast(text: &str) -> Result<DomainFile, Vec<Diagnostic>> {
    let mut p = Partial::default();
    let mut section = Section::Header;
    let mut diags = Vec::new();
    let mut last_line = 0;
    let mut broken = false;
    for (n, raw) in text.lines().enumerate() {
        let lineno = n + 1;
        last_line = lineno;
        let toks = match lex_line(raw, lineno) {
            Ok(t) => t,
            Err(d) => {
                diags.push(d);
                continue;
            }
        };
        if toks.is_empty() {
            continue;
        }
        let first = match &toks[0].tok {
            Tok::Ident(s) => s.as_str(),
            _ => "",
        };
        let opens_block =
            matches!(section, Section::Operators(_) | Section::Methods(_)) && matches!(first, "op" | "method");
        // Body lines of a block whose header failed are not checked.
        if broken && !opens_block && BODY_KEYWORDS.contains(&first) {
            continue;
        }
        let mut c = Cursor { toks: &toks, i: 0, eol: Pos { line: lineno, col: raw.chars().count() + 1 } };
        let res = if c.eat('[') {
            broken = false;
            section_header(&mut c, &mut p).map(|s| section = s)
        } else {
            line(&mut c, section, &mut p)
        };
        if opens_block {
            broken = res.is_err();
        }
        if let Err(d) = res {
            diags.push(d);
        }
    }
    let end = Pos { line: last_line.max(1), col: 1 };
    let mut missing = Vec::new();
    if p.version.is_none() {
        missing.push("header line `dom 1`".to_string());
    }
    if p.name.is_none() {
        missing.push("header line `domain <name>`".to_string());
    }
    if p.start.is_none() {
        missing.push("header line `start robot|human`".to_string());
    }
    for s in MANDATORY {
        if !p.seen.contains(&s) {
            missing.push(format!("section [{s}]"));
        }
    }
    if p.seen.contains(&"agents") {
        for (v, what) in [(&p.robot, "robot"), (&p.human, "human"), (&p.location, "location")] {
            if v.is_none() {
                missing.push(format!("`{what}` line in [agents]"));
            }
        }
    }
    if !missing.is_empty() {
        diags.push(Diagnostic { pos: end, message: format!("missing {}", missing.join(", ")) });
    }
    if !diags.is_empty() {
        return Err(diags);
    }
    Ok(DomainFile {
        version: p.version.unwrap(),
        name: p.name.unwrap(),
        start: p.start.unwrap(),
        groups: p.groups,
        robot: p.robot.unwrap(),
        human: p.human.unwrap(),
        location: p.location.unwrap(),
        state: p.state,
        agents: p.agents,
        world: p.world,
        human_belief: p.human_belief,
        network: p.network,
        world_pos: p.world_pos,
        human_belief_pos: p.human_belief_pos,
        network_pos: p.network_pos,
    })
}

fn section_header(c: &mut Cursor<'_>, p: &mut Partial) -> PResult<Section> {
    let pos = c.pos();
    let name = c.ident("a section name")?;
    let s = match name.name.as_str() {
        "groups" => Section::Groups,
        "agents" => Section::Agents,
        "state" => Section::State,
        "world" => Section::World,
        "human-belief" => Section::HumanBelief,
        "network" => Section::Network,
        "operators" => Section::Operators(c.agent()?),
        "tasks" => Section::Tasks(c.agent()?),
        "methods" => Section::Methods(c.agent()?),
        other => return Err(Diagnostic { pos: name.pos, message: format!("unknown section `[{other}]`") }),
    };
    c.expect(']')?;
    c.finish()?;
    let key = match s {
        Section::Groups => "groups",
        Section::Agents => "agents",
        Section::State => "state",
        Section::World => {
            p.world_pos = pos;
            "world"
        }
        Section::HumanBelief => {
            p.human_belief_pos = pos;
            "human-belief"
        }
        Section::Network => {
            p.network_pos = pos;
            "network"
        }
        _ => "",
    };
    if !key.is_empty() && !p.seen.contains(&key) {
        p.seen.push(key);
    }
    Ok(s)
}

fn line(c: &mut Cursor<'_>, section: Section, p: &mut Partial) -> PResult<()> {
    match section {
        Section::Header => header_line(c, p),
        Section::Groups => group_line(c, p),
        Section::Agents => agents_line(c, p),
        Section::State => state_line(c, p),
        Section::Operators(a) => op_line(c, &mut p.agents[a.index()]),
        Section::Tasks(a) => {
            c.keyword("task")?;
            let name = c.ident("a task name")?;
            let params = c.typed_vars()?;
            c.finish()?;
            p.agents[a.index()].tasks.push(TaskDecl { name, params });
            Ok(())
        }
        Section::Methods(a) => method_line(c, &mut p.agents[a.index()]),
        Section::World => assign_line(c, &mut p.world),
        Section::HumanBelief => assign_line(c, &mut p.human_belief),
        Section::Network => network_line(c, &mut p.network),
    }
}

fn header_line(c: &mut Cursor<'_>, p: &mut Partial) -> PResult<()> {
    let kw = c.ident("`dom`, `domain` or `start`")?;
    match kw.name.as_str() {
        "dom" => {
            let pos = c.pos();
            let v = c.int()?;
            if v != VERSION as i32 {
                return Err(Diagnostic { pos, message: format!("unsupported format version {v}; expected {VERSION}") });
            }
            p.version = Some(VERSION);
        }
        "domain" => p.name = Some(c.ident("a domain name")?),
        "start" => p.start = Some(c.agent()?),
        other => {
            return Err(Diagnostic { pos: kw.pos, message: format!("unexpected `{other}` before the first section") })
        }
    }
    c.finish()
}

fn group_line(c: &mut Cursor<'_>, p: &mut Partial) -> PResult<()> {
    let kw = c.ident("`group`, `places` or `range`")?;
    let name = c.ident("a group name")?;
    c.expect('=')?;
    let decl = match kw.name.as_str() {
        "group" | "places" => {
            let mut members = Vec::new();
            while !c.at_end() {
                members.push(c.ident("a constant name")?);
            }
            if members.is_empty() {
                return c.err("a group needs at least one member");
            }
            GroupDecl { name, places: kw.name == "places", body: GroupBody::Symbols(members) }
        }
        "range" => {
            let lo = c.int()?;
            if c.peek() != Some(&Tok::DotDot) {
                return c.err(format!("expected `..`, found {}", c.found()));
            }
            c.i += 1;
            let hi = c.int()?;
            GroupDecl { name, places: false, body: GroupBody::Range { lo, hi } }
        }
        other => return Err(Diagnostic { pos: kw.pos, message: format!("unknown group kind `{other}`") }),
    };
    c.finish()?;
    p.groups.push(decl);
    Ok(())
}

fn agents_line(c: &mut Cursor<'_>, p: &mut Partial) -> PResult<()> {
    let kw = c.ident("`robot`, `human` or `location`")?;
    let value = c.ident("a name")?;
    c.finish()?;
    let slot = match kw.name.as_str() {
        "robot" => &mut p.robot,
        "human" => &mut p.human,
        "location" => &mut p.location,
        other => return Err(Diagnostic { pos: kw.pos, message: format!("unknown agents entry `{other}`") }),
    };
    if slot.is_some() {
        return Err(Diagnostic { pos: kw.pos, message: format!("`{}` given twice", kw.name) });
    }
    *slot = Some(value);
    Ok(())
}

fn state_line(c: &mut Cursor<'_>, p: &mut Partial) -> PResult<()> {
    let symbol = c.ident("a state variable name")?;
    let params = c.typed_vars()?;
    c.expect(':')?;
    let value = c.ident("a value group")?;
    let cls = c.ident("`obs` or `inf`")?;
    let class = match cls.name.as_str() {
        "obs" => ClassAst::Obs,
        "inf" => ClassAst::Inf,
        other => return Err(Diagnostic { pos: cls.pos, message: format!("expected `obs` or `inf`, found `{other}`") }),
    };
    let place = if c.at_end() {
        None
    } else {
        c.keyword("at")?;
        Some(c.call("a place or state variable")?)
    };
    c.finish()?;
    p.state.push(StateDecl { symbol, params, value, class, place });
    Ok(())
}

fn op_line(c: &mut Cursor<'_>, sec: &mut AgentSections) -> PResult<()> {
    let kw = c.ident("`op`, `pre` or `eff`")?;
    match kw.name.as_str() {
        "op" => {
            let name = c.ident("an operator name")?;
            let params = c.typed_vars()?;
            c.finish()?;
            sec.operators.push(OpDecl { name, params, pre: Vec::new(), eff: Vec::new() });
            Ok(())
        }
        "pre" | "eff" => {
            let Some(op) = sec.operators.last_mut() else {
                return Err(Diagnostic { pos: kw.pos, message: format!("`{}` outside an operator", kw.name) });
            };
            let lits = c.literals()?;
            if kw.name == "pre" {
                op.pre.extend(lits);
            } else {
                op.eff.extend(lits);
            }
            Ok(())
        }
        other => Err(Diagnostic { pos: kw.pos, message: format!("unexpected `{other}` in an operators section") }),
    }
}

fn method_line(c: &mut Cursor<'_>, sec: &mut AgentSections) -> PResult<()> {
    let kw = c.ident("`method`, `pre`, `sub` or `order`")?;
    if kw.name == "method" {
        let name = c.ident("a method name")?;
        let vars = c.typed_vars()?;
        c.keyword("for")?;
        let task = c.call("a task")?;
        c.finish()?;
        sec.methods.push(MethodDecl {
            name,
            vars,
            task,
            pre: Vec::new(),
            subtasks: Vec::new(),
            order: Vec::new(),
            pos: kw.pos,
        });
        return Ok(());
    }
    let Some(m) = sec.methods.last_mut() else {
        return Err(Diagnostic { pos: kw.pos, message: format!("`{}` outside a method", kw.name) });
    };
    match kw.name.as_str() {
        "pre" => m.pre.extend(c.literals()?),
        "sub" => {
            m.subtasks.push(c.call("a subtask")?);
            c.finish()?;
        }
        "order" => m.order.extend(c.order()?),
        "before" | "after" | "between" => {
            return Err(Diagnostic {
                pos: kw.pos,
                message: format!(
                    "unsupported constraint kind `{}`: only precedence (`order a < b`) is supported",
                    kw.name
                ),
            })
        }
        other => return Err(Diagnostic { pos: kw.pos, message: format!("unexpected `{other}` in a methods section") }),
    }
    Ok(())
}

fn assign_line(c: &mut Cursor<'_>, out: &mut Vec<Assign>) -> PResult<()> {
    let attr = c.call("a state variable")?;
    c.expect('=')?;
    let value = c.term()?;
    c.finish()?;
    out.push(Assign { attr, value });
    Ok(())
}

fn network_line(c: &mut Cursor<'_>, net: &mut NetworkDecl) -> PResult<()> {
    if c.peek() == Some(&Tok::Ident("order".into())) {
        c.i += 1;
        net.order.extend(c.order()?);
        return Ok(());
    }
    let agent = c.agent()?;
    let task = c.call("a task")?;
    c.finish()?;
    net.tasks.push(NetworkTask { agent, task });
    Ok(())
}
