use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::state::{AttrId, BeliefState, GroundedAttribute, GroupId, GroupKind, Universe, Value, VarId};

/// Which member of the robot-human pair owns an operator, task or belief.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Agent {
    Robot,
    Human,
}

impl Agent {
    pub fn other(self) -> Agent {
        match self {
            Agent::Robot => Agent::Human,
            Agent::Human => Agent::Robot,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Agent::Robot => 0,
            Agent::Human => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Agent::Robot => "robot",
            Agent::Human => "human",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Param {
    pub name: String,
    pub group: GroupId,
}

/// Argument or value position in a schema.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Term {
    /// Index into the enclosing schema's parameter list.
    Var(usize),
    Const(Value),
    /// An integer parameter plus a constant offset; only valid as an effect value.
    Shifted(usize, i32),
}

impl Term {
    pub fn bind(self, binding: &[Value]) -> Option<Value> {
        match self {
            Term::Var(i) => binding.get(i).copied(),
            Term::Const(v) => Some(v),
            Term::Shifted(i, k) => match binding.get(i)? {
                Value::Int(n) => Some(Value::Int(n + k)),
                _ => None,
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AttrTemplate {
    pub var: VarId,
    pub args: Vec<Term>,
}

/// `attr = value`; a precondition test or an effect assignment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Literal {
    pub attr: AttrTemplate,
    pub value: Term,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OpKind {
    Regular,
    Idle,
    Wait,
    Communication,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorSchema {
    pub name: String,
    pub agent: Agent,
    pub params: Vec<Param>,
    pub pre: Vec<Literal>,
    pub eff: Vec<Literal>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OpId(pub u16);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroundOpId(pub u32);

/// A fully instantiated operator with resolved attribute indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundOp {
    pub schema: OpId,
    pub agent: Agent,
    pub args: Vec<Value>,
    pub pre: Vec<(AttrId, Value)>,
    pub eff: Vec<(AttrId, Value)>,
}

impl GroundOp {
    pub fn reads_or_writes(&self, attr: AttrId) -> bool {
        self.pre.iter().chain(&self.eff).any(|(a, _)| *a == attr)
    }
}

/// True iff every precondition test holds in the belief.
pub fn applicable(op: &GroundOp, belief: &BeliefState) -> bool {
    op.pre.iter().all(|&(a, v)| belief.get(a) == v)
}

/// Rewrites exactly the effect attributes of an applicable operator.
pub fn apply(op: &GroundOp, state: &BeliefState) -> Result<BeliefState> {
    if !applicable(op, state) {
        return Err(Error::NotApplicable(format!("#{}", op.schema.0)));
    }
    Ok(write_effects(op, state))
}

/// Effect assignment without the applicability check.
pub fn write_effects(op: &GroundOp, state: &BeliefState) -> BeliefState {
    let mut next = state.clone();
    for &(a, v) in &op.eff {
        next.set(a, v);
    }
    next
}

pub(crate) fn resolve_template(universe: &Universe, attr: &AttrTemplate, binding: &[Value]) -> Result<AttrId> {
    let mut args = Vec::with_capacity(attr.args.len());
    for t in &attr.args {
        args.push(t.bind(binding).ok_or_else(|| Error::BadArgument(format!("unbound term {t:?}")))?);
    }
    universe.resolve(&GroundedAttribute { var: attr.var, args })
}

/// Grounds a literal; `None` when the bound value falls outside the attribute's domain.
pub(crate) fn ground_literal(universe: &Universe, lit: &Literal, binding: &[Value]) -> Result<Option<(AttrId, Value)>> {
    let attr = resolve_template(universe, &lit.attr, binding)?;
    let value = lit.value.bind(binding).ok_or_else(|| Error::BadArgument(format!("unbound term {:?}", lit.value)))?;
    if !universe.value_group(attr).contains(value) {
        return Ok(None);
    }
    Ok(Some((attr, value)))
}

pub(crate) fn same_kind(universe: &Universe, a: GroupId, b: GroupId) -> bool {
    match (&universe.group(a).kind, &universe.group(b).kind) {
        (GroupKind::Symbols(_), GroupKind::Symbols(_)) => universe.group(a).is_subset_of(universe.group(b)),
        (GroupKind::Bool, GroupKind::Bool) => true,
        (GroupKind::Range { .. }, GroupKind::Range { .. }) => true,
        _ => false,
    }
}

/// Type-checks a literal against the declarations; `params` gives the schema variable groups.
pub(crate) fn check_literal(
    universe: &Universe,
    lit: &Literal,
    params: &[GroupId],
    effect: bool,
    ctx: &str,
) -> Result<()> {
    let decl = universe
        .decls()
        .get(lit.attr.var.0 as usize)
        .ok_or_else(|| Error::Declaration(format!("{ctx}: unknown state variable")))?;
    if decl.params.len() != lit.attr.args.len() {
        return Err(Error::Declaration(format!(
            "{ctx}: {} expects {} argument(s), got {}",
            decl.symbol,
            decl.params.len(),
            lit.attr.args.len()
        )));
    }
    let check_term = |t: Term, want: GroupId, allow_shift: bool| -> Result<()> {
        match t {
            Term::Var(i) => {
                let g = *params.get(i).ok_or_else(|| Error::Declaration(format!("{ctx}: unknown variable #{i}")))?;
                if !same_kind(universe, g, want) {
                    return Err(Error::Declaration(format!(
                        "{ctx}: variable of group `{}` used where `{}` is expected",
                        universe.group(g).name,
                        universe.group(want).name
                    )));
                }
                Ok(())
            }
            Term::Const(v) => {
                if !universe.group(want).contains(v) {
                    return Err(Error::Declaration(format!(
                        "{ctx}: `{}` is not a member of `{}`",
                        universe.show_value(v),
                        universe.group(want).name
                    )));
                }
                Ok(())
            }
            Term::Shifted(i, _) => {
                if !allow_shift {
                    return Err(Error::Declaration(format!("{ctx}: offsets are only allowed in effect values")));
                }
                let g = *params.get(i).ok_or_else(|| Error::Declaration(format!("{ctx}: unknown variable #{i}")))?;
                let int = |g: GroupId| matches!(universe.group(g).kind, GroupKind::Range { .. });
                if !int(g) || !int(want) {
                    return Err(Error::Declaration(format!("{ctx}: offsets need integer ranges")));
                }
                Ok(())
            }
        }
    };
    for (t, g) in lit.attr.args.iter().zip(&decl.params) {
        check_term(*t, *g, false)?;
    }
    check_term(lit.value, decl.value, effect)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::UniverseBuilder;
    use alloc::vec;

    #[test]
    fn shifted_term_binds_integers_only() {
        assert_eq!(Term::Shifted(0, 1).bind(&[Value::Int(1)]), Some(Value::Int(2)));
        assert_eq!(Term::Shifted(0, 1).bind(&[Value::Bool(true)]), None);
        assert_eq!(Term::Var(3).bind(&[Value::Int(1)]), None);
    }

    #[test]
    fn out_of_domain_effect_is_dropped() {
        let mut b = UniverseBuilder::new();
        let level = b.range("Level", 0, 2).unwrap();
        let v = b.state_var("Count", &[], level).unwrap();
        let u = b.build();
        let lit = Literal { attr: AttrTemplate { var: v, args: vec![] }, value: Term::Shifted(0, 1) };
        assert!(ground_literal(&u, &lit, &[Value::Int(1)]).unwrap().is_some());
        assert!(ground_literal(&u, &lit, &[Value::Int(2)]).unwrap().is_none());
    }

    #[test]
    fn shift_rejected_in_preconditions() {
        let mut b = UniverseBuilder::new();
        let level = b.range("Level", 0, 2).unwrap();
        let v = b.state_var("Count", &[], level).unwrap();
        let u = b.build();
        let lit = Literal { attr: AttrTemplate { var: v, args: vec![] }, value: Term::Shifted(0, 1) };
        assert!(check_literal(&u, &lit, &[level], false, "t").is_err());
        assert!(check_literal(&u, &lit, &[level], true, "t").is_ok());
    }
}
