use std::fmt::Write;

use super::ast::*;

fn term(t: &TermAst) -> String {
    match t {
        TermAst::Var(v, 0) => format!("?{}", v.name),
        TermAst::Var(v, k) => format!("?{}{k:+}", v.name),
        TermAst::Name(n) => n.name.clone(),
        TermAst::Int(n, _) => n.to_string(),
    }
}

fn call(c: &Call) -> String {
    if c.args.is_empty() {
        return c.name.name.clone();
    }
    let args: Vec<String> = c.args.iter().map(term).collect();
    format!("{}({})", c.name.name, args.join(", "))
}

fn typed(vars: &[TypedVar]) -> String {
    if vars.is_empty() {
        return String::new();
    }
    let vs: Vec<String> = vars.iter().map(|v| format!("?{}:{}", v.name.name, v.group.name)).collect();
    format!("({})", vs.join(", "))
}

fn literals(lits: &[LiteralAst]) -> String {
    let ls: Vec<String> = lits.iter().map(|l| format!("{} = {}", call(&l.attr), term(&l.value))).collect();
    ls.join(", ")
}

fn order(pairs: &[(usize, usize)]) -> String {
    let ps: Vec<String> = pairs.iter().map(|(a, b)| format!("{a} < {b}")).collect();
    ps.join(", ")
}

/// Canonical text of a domain file.
pub fn serialize(d: &DomainFile) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "dom {}", d.version);
    let _ = writeln!(s, "domain {}", d.name.name);
    let _ = writeln!(s, "start {}", d.start.as_str());

    s.push_str("\n[groups]\n");
    for g in &d.groups {
        match &g.body {
            GroupBody::Symbols(ms) => {
                let kw = if g.places { "places" } else { "group" };
                let names: Vec<&str> = ms.iter().map(|m| m.name.as_str()).collect();
                let _ = writeln!(s, "{kw} {} = {}", g.name.name, names.join(" "));
            }
            GroupBody::Range { lo, hi } => {
                let _ = writeln!(s, "range {} = {lo}..{hi}", g.name.name);
            }
        }
    }

    s.push_str("\n[agents]\n");
    let _ = writeln!(s, "robot {}", d.robot.name);
    let _ = writeln!(s, "human {}", d.human.name);
    let _ = writeln!(s, "location {}", d.location.name);

    s.push_str("\n[state]\n");
    for v in &d.state {
        let class = match v.class {
            ClassAst::Obs => "obs",
            ClassAst::Inf => "inf",
        };
        let _ = write!(s, "{}{} : {} {class}", v.symbol.name, typed(&v.params), v.value.name);
        if let Some(p) = &v.place {
            let _ = write!(s, " at {}", call(p));
        }
        s.push('\n');
    }

    for agent in [AgentName::Robot, AgentName::Human] {
        let sec = &d.agents[agent.index()];
        if !sec.operators.is_empty() {
            let _ = writeln!(s, "\n[operators {}]", agent.as_str());
            for op in &sec.operators {
                let _ = writeln!(s, "op {}{}", op.name.name, typed(&op.params));
                if !op.pre.is_empty() {
                    let _ = writeln!(s, "  pre {}", literals(&op.pre));
                }
                if !op.eff.is_empty() {
                    let _ = writeln!(s, "  eff {}", literals(&op.eff));
                }
            }
        }
        if !sec.tasks.is_empty() {
            let _ = writeln!(s, "\n[tasks {}]", agent.as_str());
            for t in &sec.tasks {
                let _ = writeln!(s, "task {}{}", t.name.name, typed(&t.params));
            }
        }
        if !sec.methods.is_empty() {
            let _ = writeln!(s, "\n[methods {}]", agent.as_str());
            for m in &sec.methods {
                let _ = writeln!(s, "method {}{} for {}", m.name.name, typed(&m.vars), call(&m.task));
                if !m.pre.is_empty() {
                    let _ = writeln!(s, "  pre {}", literals(&m.pre));
                }
                for st in &m.subtasks {
                    let _ = writeln!(s, "  sub {}", call(st));
                }
                if !m.order.is_empty() {
                    let _ = writeln!(s, "  order {}", order(&m.order));
                }
            }
        }
    }

    for (title, assigns) in [("world", &d.world), ("human-belief", &d.human_belief)] {
        let _ = writeln!(s, "\n[{title}]");
        for a in assigns {
            let _ = writeln!(s, "{} = {}", call(&a.attr), term(&a.value));
        }
    }

    s.push_str("\n[network]\n");
    for t in &d.network.tasks {
        let _ = writeln!(s, "{} {}", t.agent.as_str(), call(&t.task));
    }
    if !d.network.order.is_empty() {
        let _ = writeln!(s, "order {}", order(&d.network.order));
    }
    s
}
