//! Typed constant universe, state-variable declarations and belief states.
//!
//! Every grounded attribute is interned to a dense [`AttrId`] when the
//! [`Universe`] is built, so a [`BeliefState`] is a fixed-width vector of
//! values indexed by attribute.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConstId(pub u16);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupId(pub u16);

/// Index of a state-variable declaration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(pub u16);

/// Dense index of a grounded attribute.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AttrId(pub u32);

impl AttrId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A value of a finite domain: a named constant, a boolean or a bounded integer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Sym(ConstId),
    Bool(bool),
    Int(i32),
}

impl Value {
    pub fn as_sym(self) -> Option<ConstId> {
        match self {
            Value::Sym(c) => Some(c),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupKind {
    Symbols(Vec<ConstId>),
    Bool,
    Range { lo: i32, hi: i32 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Group {
    pub name: String,
    pub kind: GroupKind,
}

impl Group {
    pub fn contains(&self, v: Value) -> bool {
        match (&self.kind, v) {
            (GroupKind::Symbols(members), Value::Sym(c)) => members.contains(&c),
            (GroupKind::Bool, Value::Bool(_)) => true,
            (GroupKind::Range { lo, hi }, Value::Int(i)) => *lo <= i && i <= *hi,
            _ => false,
        }
    }

    /// Members in declaration order.
    pub fn values(&self) -> Vec<Value> {
        match &self.kind {
            GroupKind::Symbols(members) => members.iter().map(|&c| Value::Sym(c)).collect(),
            GroupKind::Bool => alloc::vec![Value::Bool(false), Value::Bool(true)],
            GroupKind::Range { lo, hi } => (*lo..=*hi).map(Value::Int).collect(),
        }
    }

    pub fn len(&self) -> usize {
        match &self.kind {
            GroupKind::Symbols(members) => members.len(),
            GroupKind::Bool => 2,
            GroupKind::Range { lo, hi } => (hi - lo + 1).max(0) as usize,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// True when every member of `self` is also a member of `other`.
    pub fn is_subset_of(&self, other: &Group) -> bool {
        self.values().into_iter().all(|v| other.contains(v))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateVarDecl {
    pub symbol: String,
    pub params: Vec<GroupId>,
    pub value: GroupId,
}

/// A fully instantiated state-variable application, the unit of belief.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroundedAttribute {
    pub var: VarId,
    pub args: Vec<Value>,
}

/// Incrementally collects groups and declarations, then grounds them.
#[derive(Debug)]
pub struct UniverseBuilder {
    groups: Vec<Group>,
    constants: Vec<(String, GroupId)>,
    decls: Vec<StateVarDecl>,
}

impl Default for UniverseBuilder {
    fn default() -> Self {
        Self::new()
    }
}

impl UniverseBuilder {
    /// The builder starts with the built-in `bool` group.
    pub fn new() -> Self {
        UniverseBuilder {
            groups: alloc::vec![Group { name: "bool".to_string(), kind: GroupKind::Bool }],
            constants: Vec::new(),
            decls: Vec::new(),
        }
    }

    fn check_new_group(&self, name: &str) -> Result<()> {
        if self.groups.iter().any(|g| g.name == name) {
            return Err(Error::Declaration(format!("group `{name}` declared twice")));
        }
        Ok(())
    }

    pub fn symbols<S: AsRef<str>>(&mut self, name: &str, members: &[S]) -> Result<GroupId> {
        self.check_new_group(name)?;
        if members.is_empty() {
            return Err(Error::Declaration(format!("group `{name}` is empty")));
        }
        let gid = GroupId(self.groups.len() as u16);
        let mut ids = Vec::with_capacity(members.len());
        for m in members {
            let m = m.as_ref();
            if let Some((_, owner)) = self.constants.iter().find(|(n, _)| n == m) {
                return Err(Error::Declaration(format!(
                    "constant `{m}` already belongs to group `{}`",
                    self.groups[owner.0 as usize].name
                )));
            }
            ids.push(ConstId(self.constants.len() as u16));
            self.constants.push((m.to_string(), gid));
        }
        self.groups.push(Group { name: name.to_string(), kind: GroupKind::Symbols(ids) });
        Ok(gid)
    }

    pub fn range(&mut self, name: &str, lo: i32, hi: i32) -> Result<GroupId> {
        self.check_new_group(name)?;
        if lo > hi {
            return Err(Error::Declaration(format!("range `{name}` is empty ({lo}..{hi})")));
        }
        let gid = GroupId(self.groups.len() as u16);
        self.groups.push(Group { name: name.to_string(), kind: GroupKind::Range { lo, hi } });
        Ok(gid)
    }

    pub fn group_id(&self, name: &str) -> Option<GroupId> {
        self.groups.iter().position(|g| g.name == name).map(|i| GroupId(i as u16))
    }

    pub fn state_var(&mut self, symbol: &str, params: &[GroupId], value: GroupId) -> Result<VarId> {
        if self.decls.iter().any(|d| d.symbol == symbol) {
            return Err(Error::Declaration(format!("state variable `{symbol}` declared twice")));
        }
        for g in params.iter().chain(core::iter::once(&value)) {
            if g.0 as usize >= self.groups.len() {
                return Err(Error::Declaration(format!("unknown group #{} in `{symbol}`", g.0)));
            }
        }
        let id = VarId(self.decls.len() as u16);
        self.decls.push(StateVarDecl { symbol: symbol.to_string(), params: params.to_vec(), value });
        Ok(id)
    }

    pub fn build(self) -> Universe {
        let mut attrs = Vec::new();
        let mut index = BTreeMap::new();
        for (vi, decl) in self.decls.iter().enumerate() {
            let domains: Vec<Vec<Value>> = decl.params.iter().map(|g| self.groups[g.0 as usize].values()).collect();
            for args in cartesian(&domains) {
                let ga = GroundedAttribute { var: VarId(vi as u16), args };
                index.insert(ga.clone(), AttrId(attrs.len() as u32));
                attrs.push(ga);
            }
        }
        let fingerprint = fingerprint(&self.groups, &self.constants, &self.decls);
        Universe { groups: self.groups, constants: self.constants, decls: self.decls, attrs, index, fingerprint }
    }
}

/// All combinations of one value per position, first position slowest.
pub fn cartesian(domains: &[Vec<Value>]) -> Vec<Vec<Value>> {
    let mut out: Vec<Vec<Value>> = alloc::vec![Vec::new()];
    for dom in domains {
        let mut next = Vec::with_capacity(out.len() * dom.len());
        for prefix in &out {
            for &v in dom {
                let mut p = prefix.clone();
                p.push(v);
                next.push(p);
            }
        }
        out = next;
    }
    out
}

// FNV-1a over the declaration text; two universes with identical
// declarations are interchangeable.
fn fingerprint(groups: &[Group], constants: &[(String, GroupId)], decls: &[StateVarDecl]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    let mut feed = |bytes: &[u8]| {
        for b in bytes {
            h ^= *b as u64;
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
        h ^= 0xff;
        h = h.wrapping_mul(0x0100_0000_01b3);
    };
    for g in groups {
        feed(g.name.as_bytes());
        if let GroupKind::Range { lo, hi } = g.kind {
            feed(&lo.to_le_bytes());
            feed(&hi.to_le_bytes());
        }
    }
    for (c, g) in constants {
        feed(c.as_bytes());
        feed(&g.0.to_le_bytes());
    }
    for d in decls {
        feed(d.symbol.as_bytes());
        for p in &d.params {
            feed(&p.0.to_le_bytes());
        }
        feed(&d.value.0.to_le_bytes());
    }
    h
}

/// The grounded declaration universe shared by every belief of a domain.
#[derive(Debug, Clone)]
pub struct Universe {
    groups: Vec<Group>,
    constants: Vec<(String, GroupId)>,
    decls: Vec<StateVarDecl>,
    attrs: Vec<GroundedAttribute>,
    index: BTreeMap<GroundedAttribute, AttrId>,
    fingerprint: u64,
}

impl Universe {
    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    pub fn groups(&self) -> &[Group] {
        &self.groups
    }

    pub fn group(&self, id: GroupId) -> &Group {
        &self.groups[id.0 as usize]
    }

    pub fn group_id(&self, name: &str) -> Option<GroupId> {
        self.groups.iter().position(|g| g.name == name).map(|i| GroupId(i as u16))
    }

    pub fn bool_group(&self) -> GroupId {
        GroupId(0)
    }

    pub fn constant_id(&self, name: &str) -> Option<ConstId> {
        self.constants.iter().position(|(n, _)| n == name).map(|i| ConstId(i as u16))
    }

    pub fn constant_name(&self, id: ConstId) -> &str {
        &self.constants[id.0 as usize].0
    }

    pub fn constant_group(&self, id: ConstId) -> GroupId {
        self.constants[id.0 as usize].1
    }

    pub fn decls(&self) -> &[StateVarDecl] {
        &self.decls
    }

    pub fn decl(&self, var: VarId) -> &StateVarDecl {
        &self.decls[var.0 as usize]
    }

    pub fn var_id(&self, symbol: &str) -> Option<VarId> {
        self.decls.iter().position(|d| d.symbol == symbol).map(|i| VarId(i as u16))
    }

    pub fn attr_count(&self) -> usize {
        self.attrs.len()
    }

    pub fn attrs(&self) -> impl Iterator<Item = AttrId> + '_ {
        (0..self.attrs.len() as u32).map(AttrId)
    }

    pub fn attribute(&self, id: AttrId) -> &GroundedAttribute {
        &self.attrs[id.index()]
    }

    pub fn value_group(&self, id: AttrId) -> &Group {
        let decl = self.decl(self.attrs[id.index()].var);
        self.group(decl.value)
    }

    /// Interned index of a grounded attribute.
    ///
    /// A declaration whose parameter groups are all singletons may be
    /// referenced without arguments; the arguments are filled in.
    pub fn resolve(&self, attr: &GroundedAttribute) -> Result<AttrId> {
        let decl =
            self.decls.get(attr.var.0 as usize).ok_or_else(|| Error::UnknownAttribute(format!("#{}", attr.var.0)))?;
        let args: Vec<Value> = if attr.args.is_empty() && !decl.params.is_empty() {
            let mut filled = Vec::new();
            for g in &decl.params {
                let members = self.group(*g).values();
                if members.len() != 1 {
                    return Err(Error::UnknownAttribute(format!(
                        "{} expects {} argument(s)",
                        decl.symbol,
                        decl.params.len()
                    )));
                }
                filled.push(members[0]);
            }
            filled
        } else {
            attr.args.clone()
        };
        if args.len() != decl.params.len() {
            return Err(Error::UnknownAttribute(format!(
                "{} expects {} argument(s), got {}",
                decl.symbol,
                decl.params.len(),
                args.len()
            )));
        }
        for (i, (a, g)) in args.iter().zip(&decl.params).enumerate() {
            if !self.group(*g).contains(*a) {
                return Err(Error::BadArgument(format!(
                    "argument {} of {} is `{}`, not a member of `{}`",
                    i + 1,
                    decl.symbol,
                    self.show_value(*a),
                    self.group(*g).name
                )));
            }
        }
        let key = GroundedAttribute { var: attr.var, args };
        self.index.get(&key).copied().ok_or_else(|| Error::UnknownAttribute(self.show_attr_key(&key)))
    }

    /// Resolves an attribute given by symbol name and argument values.
    pub fn resolve_named(&self, symbol: &str, args: &[Value]) -> Result<AttrId> {
        let var = self.var_id(symbol).ok_or_else(|| Error::UnknownAttribute(symbol.to_string()))?;
        self.resolve(&GroundedAttribute { var, args: args.to_vec() })
    }

    /// Parses a value token against a group: constant name, `true`/`false`, or an integer.
    pub fn parse_value(&self, group: GroupId, token: &str) -> Option<Value> {
        let g = self.group(group);
        let v = match g.kind {
            GroupKind::Symbols(_) => Value::Sym(self.constant_id(token)?),
            GroupKind::Bool => match token {
                "true" => Value::Bool(true),
                "false" => Value::Bool(false),
                _ => return None,
            },
            GroupKind::Range { .. } => Value::Int(token.parse().ok()?),
        };
        g.contains(v).then_some(v)
    }

    pub fn show_value(&self, v: Value) -> String {
        match v {
            Value::Sym(c) => self.constant_name(c).to_string(),
            Value::Bool(b) => b.to_string(),
            Value::Int(i) => i.to_string(),
        }
    }

    fn show_attr_key(&self, attr: &GroundedAttribute) -> String {
        let decl = self.decl(attr.var);
        if attr.args.is_empty() {
            return decl.symbol.clone();
        }
        let args: Vec<String> = attr.args.iter().map(|a| self.show_value(*a)).collect();
        format!("{}({})", decl.symbol, args.join(","))
    }

    /// `Symbol(arg1,arg2)` or `Symbol` for nullary attributes.
    pub fn show_attr(&self, id: AttrId) -> String {
        self.show_attr_key(self.attribute(id))
    }

    /// Builds a total belief from an assignment; every attribute must be given.
    pub fn belief<I>(&self, assignment: I) -> Result<BeliefState>
    where
        I: IntoIterator<Item = (AttrId, Value)>,
    {
        let mut slots: Vec<Option<Value>> = alloc::vec![None; self.attrs.len()];
        for (a, v) in assignment {
            if a.index() >= slots.len() {
                return Err(Error::UnknownAttribute(format!("#{}", a.0)));
            }
            if !self.value_group(a).contains(v) {
                return Err(Error::ValueOutOfDomain(a));
            }
            slots[a.index()] = Some(v);
        }
        let mut values = Vec::with_capacity(slots.len());
        for (i, s) in slots.into_iter().enumerate() {
            values.push(s.ok_or(Error::NonTotal(AttrId(i as u32)))?);
        }
        Ok(BeliefState { universe: self.fingerprint, values })
    }

    /// Copy-and-update with a domain check.
    pub fn update(&self, belief: &BeliefState, attr: AttrId, value: Value) -> Result<BeliefState> {
        self.check(belief)?;
        if attr.index() >= self.attrs.len() {
            return Err(Error::UnknownAttribute(format!("#{}", attr.0)));
        }
        if !self.value_group(attr).contains(value) {
            return Err(Error::ValueOutOfDomain(attr));
        }
        Ok(belief.with(attr, value))
    }

    pub fn check(&self, belief: &BeliefState) -> Result<()> {
        if belief.universe != self.fingerprint || belief.values.len() != self.attrs.len() {
            return Err(Error::UniverseMismatch);
        }
        Ok(())
    }
}

/// One agent's total assignment of values to grounded attributes.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BeliefState {
    universe: u64,
    values: Vec<Value>,
}

impl BeliefState {
    pub fn get(&self, attr: AttrId) -> Value {
        self.values[attr.index()]
    }

    pub fn universe(&self) -> u64 {
        self.universe
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Value] {
        &self.values
    }

    /// Copy with one attribute rewritten. The value is not domain-checked;
    /// see [`Universe::update`].
    pub fn with(&self, attr: AttrId, value: Value) -> BeliefState {
        let mut next = self.clone();
        next.values[attr.index()] = value;
        next
    }

    pub(crate) fn set(&mut self, attr: AttrId, value: Value) {
        self.values[attr.index()] = value;
    }
}

/// Evaluates a grounded attribute in a belief.
pub fn lookup(universe: &Universe, belief: &BeliefState, attr: &GroundedAttribute) -> Result<Value> {
    universe.check(belief)?;
    let id = universe.resolve(attr)?;
    Ok(belief.get(id))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Divergence {
    pub attr: AttrId,
    pub robot: Value,
    pub human: Value,
}

/// Attributes on which two beliefs disagree, in attribute order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DivergenceReport {
    pub entries: Vec<Divergence>,
}

impl DivergenceReport {
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn attrs(&self) -> impl Iterator<Item = AttrId> + '_ {
        self.entries.iter().map(|d| d.attr)
    }

    pub fn contains(&self, attr: AttrId) -> bool {
        self.entries.iter().any(|d| d.attr == attr)
    }
}

pub fn diverging_attributes(robot: &BeliefState, human: &BeliefState) -> Result<DivergenceReport> {
    if robot.universe != human.universe || robot.values.len() != human.values.len() {
        return Err(Error::UniverseMismatch);
    }
    let entries = robot
        .values
        .iter()
        .zip(&human.values)
        .enumerate()
        .filter(|(_, (r, h))| r != h)
        .map(|(i, (&r, &h))| Divergence { attr: AttrId(i as u32), robot: r, human: h })
        .collect();
    Ok(DivergenceReport { entries })
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Sym(c) => write!(f, "#{}", c.0),
            Value::Bool(b) => write!(f, "{b}"),
            Value::Int(i) => write!(f, "{i}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn universe() -> Universe {
        let mut b = UniverseBuilder::new();
        let agents = b.symbols("Agents", &["robot", "human"]).unwrap();
        let places = b.symbols("Places", &["Kitchen", "Room"]).unwrap();
        let stoves = b.symbols("Stoves", &["stove1"]).unwrap();
        let switch = b.symbols("Switch", &["on", "off"]).unwrap();
        b.state_var("AgtAt", &[agents], places).unwrap();
        b.state_var("StoveAt", &[stoves], switch).unwrap();
        b.state_var("SaltInPot", &[], GroupId(0)).unwrap();
        b.build()
    }

    #[test]
    fn grounding_is_dense() {
        let u = universe();
        assert_eq!(u.attr_count(), 4);
        let ids: Vec<u32> = u.attrs().map(|a| a.0).collect();
        assert_eq!(ids, vec![0, 1, 2, 3]);
    }

    #[test]
    fn constant_in_two_groups_is_rejected() {
        let mut b = UniverseBuilder::new();
        b.symbols("A", &["x"]).unwrap();
        assert!(matches!(b.symbols("B", &["x"]), Err(Error::Declaration(_))));
    }

    #[test]
    fn singleton_params_collapse() {
        let u = universe();
        let var = u.var_id("StoveAt").unwrap();
        let short = u.resolve(&GroundedAttribute { var, args: vec![] }).unwrap();
        let stove1 = Value::Sym(u.constant_id("stove1").unwrap());
        let long = u.resolve(&GroundedAttribute { var, args: vec![stove1] }).unwrap();
        assert_eq!(short, long);
    }

    #[test]
    fn lookup_errors() {
        let u = universe();
        let b = u.belief(u.attrs().map(|a| (a, u.value_group(a).values()[0]))).unwrap();
        let var = u.var_id("AgtAt").unwrap();
        let kitchen = Value::Sym(u.constant_id("Kitchen").unwrap());
        assert!(matches!(lookup(&u, &b, &GroundedAttribute { var, args: vec![kitchen] }), Err(Error::BadArgument(_))));
        assert!(matches!(lookup(&u, &b, &GroundedAttribute { var, args: vec![] }), Err(Error::UnknownAttribute(_))));
        assert!(matches!(
            lookup(&u, &b, &GroundedAttribute { var: VarId(42), args: vec![] }),
            Err(Error::UnknownAttribute(_))
        ));
    }

    #[test]
    fn read_after_write() {
        let u = universe();
        let room = Value::Sym(u.constant_id("Room").unwrap());
        let kitchen = Value::Sym(u.constant_id("Kitchen").unwrap());
        let human = Value::Sym(u.constant_id("human").unwrap());
        let at = u.resolve_named("AgtAt", &[human]).unwrap();
        let b = u.belief(u.attrs().map(|a| (a, u.value_group(a).values()[0]))).unwrap();
        let b = u.update(&b, at, room).unwrap();
        let b = u.update(&b, at, kitchen).unwrap();
        let var = u.var_id("AgtAt").unwrap();
        assert_eq!(lookup(&u, &b, &GroundedAttribute { var, args: vec![human] }).unwrap(), kitchen);
    }

    #[test]
    fn non_total_belief_is_rejected() {
        let u = universe();
        let partial = u.attrs().skip(1).map(|a| (a, u.value_group(a).values()[0]));
        assert_eq!(u.belief(partial), Err(Error::NonTotal(AttrId(0))));
    }

    #[test]
    fn mismatched_universes() {
        let u = universe();
        let mut other = UniverseBuilder::new();
        other.state_var("X", &[], GroupId(0)).unwrap();
        let other = other.build();
        let a = u.belief(u.attrs().map(|a| (a, u.value_group(a).values()[0]))).unwrap();
        let b = other.belief(other.attrs().map(|a| (a, Value::Bool(true)))).unwrap();
        assert_eq!(diverging_attributes(&a, &b), Err(Error::UniverseMismatch));
        assert_eq!(u.check(&b), Err(Error::UniverseMismatch));
    }
}
