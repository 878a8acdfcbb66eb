//! Places, place-specific attributes and situation assessment.
//!
//! Each state variable is classified observable or inferrable and may carry
//! a placement rule. A grounded attribute is either pinned to a fixed place,
//! follows the value of a reference attribute (an agent's or object's own
//! location), or has no place and is never assessed spatially.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::htn::{resolve_template, AttrTemplate, Term};
use crate::state::{AttrId, BeliefState, ConstId, GroupId, Universe, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ObsClass {
    Obs,
    Inf,
}

/// Where a state variable's groundings live. Template terms index the
/// declaration's own parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PlaceExpr {
    Fixed(ConstId),
    Attribute(AttrTemplate),
}

/// Per-declaration observability input, indexed by `VarId`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObservabilitySpec {
    pub places: GroupId,
    pub classes: Vec<ObsClass>,
    pub placement: Vec<Option<PlaceExpr>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroundPlace {
    Unplaced,
    Fixed(ConstId),
    Follows(AttrId),
}

#[derive(Clone, Debug)]
pub struct ObservabilityModel {
    spec: ObservabilitySpec,
    places: Vec<GroundPlace>,
    classes: Vec<ObsClass>,
    assessable: Vec<AttrId>,
}

impl ObservabilityModel {
    pub fn new(universe: &Universe, spec: ObservabilitySpec) -> Result<ObservabilityModel> {
        let n = universe.decls().len();
        if spec.classes.len() != n || spec.placement.len() != n {
            return Err(Error::Declaration(format!(
                "observability covers {} of {} state variables",
                spec.classes.len().min(spec.placement.len()),
                n
            )));
        }
        let places_group = universe.group(spec.places);
        if !matches!(places_group.kind, crate::state::GroupKind::Symbols(_)) {
            return Err(Error::Declaration("the places group must hold named constants".into()));
        }
        let mut places = Vec::with_capacity(universe.attr_count());
        let mut classes = Vec::with_capacity(universe.attr_count());
        for a in universe.attrs() {
            let ga = universe.attribute(a);
            let decl = universe.decl(ga.var);
            classes.push(spec.classes[ga.var.0 as usize]);
            let gp = match &spec.placement[ga.var.0 as usize] {
                None => GroundPlace::Unplaced,
                Some(PlaceExpr::Fixed(p)) => {
                    if !places_group.contains(Value::Sym(*p)) {
                        return Err(Error::Declaration(format!("{} is placed outside the places group", decl.symbol)));
                    }
                    GroundPlace::Fixed(*p)
                }
                Some(PlaceExpr::Attribute(t)) => {
                    if t.args.iter().any(|x| matches!(x, Term::Shifted(..))) {
                        return Err(Error::Declaration(format!("{}: bad placement reference", decl.symbol)));
                    }
                    let r = resolve_template(universe, t, &ga.args)?;
                    if universe.decl(universe.attribute(r).var).value != spec.places {
                        return Err(Error::Declaration(format!(
                            "{}: placement reference {} does not range over places",
                            decl.symbol,
                            universe.show_attr(r)
                        )));
                    }
                    GroundPlace::Follows(r)
                }
            };
            places.push(gp);
        }
        let assessable = universe
            .attrs()
            .filter(|a| classes[a.index()] == ObsClass::Obs && places[a.index()] != GroundPlace::Unplaced)
            .collect();
        Ok(ObservabilityModel { spec, places, classes, assessable })
    }

    pub fn spec(&self) -> &ObservabilitySpec {
        &self.spec
    }

    pub fn places_group(&self) -> GroupId {
        self.spec.places
    }

    pub fn class(&self, attr: AttrId) -> ObsClass {
        self.classes[attr.index()]
    }

    pub fn ground_place(&self, attr: AttrId) -> GroundPlace {
        self.places[attr.index()]
    }

    /// The place an attribute is observable at in `state`, if it has one.
    pub fn place_of(&self, attr: AttrId, state: &BeliefState) -> Result<Option<ConstId>> {
        match self.places[attr.index()] {
            GroundPlace::Unplaced => Ok(None),
            GroundPlace::Fixed(p) => Ok(Some(p)),
            GroundPlace::Follows(r) => match state.get(r) {
                Value::Sym(p) => Ok(Some(p)),
                _ => Err(Error::BadRule(attr)),
            },
        }
    }

    /// Co-location of two location attributes (e.g. two agents' `AgtAt`).
    pub fn copresent(&self, loc_a: AttrId, loc_b: AttrId, state: &BeliefState) -> bool {
        loc_a == loc_b
            || matches!(
                (self.place_of(loc_a, state), self.place_of(loc_b, state)),
                (Ok(Some(p)), Ok(Some(q))) if p == q
            )
    }

    /// Situation assessment from the observer's current place in `world`:
    /// every observable attribute placed there takes its world value.
    pub fn assess(&self, observer_loc: AttrId, observer: &BeliefState, world: &BeliefState) -> BeliefState {
        let Ok(Some(here)) = self.place_of(observer_loc, world) else {
            return observer.clone();
        };
        let mut out = observer.clone();
        for &a in &self.assessable {
            if matches!(self.place_of(a, world), Ok(Some(p)) if p == here) {
                out.set(a, world.get(a));
            }
        }
        out
    }
}
