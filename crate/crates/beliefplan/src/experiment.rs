//! Initial-state generation and the solver comparison sweep.

use std::fmt::Write as _;
use std::io;

use beliefplan_core::htn::Agent;
use beliefplan_core::planner::{plan, simulate, Mode, PlannerConfig, Resolver};
use beliefplan_core::state::diverging_attributes;
use beliefplan_core::{AttrId, BeliefState, Problem, Value};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

/// Version of the per-instance CSV layout.
pub const CSV_SCHEMA: u32 = 1;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("generator spec does not fit the domain: {0}")]
    SpecMismatch(String),
    #[error(transparent)]
    Builtin(#[from] crate::builtins::BuiltinError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// A binary dimension of the initial world, given by names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DimSpec {
    /// Attribute text (`Stove`, `AgtAt(human)`) and its two values.
    Attr { attr: String, values: [String; 2] },
    /// Which agent acts first.
    Start,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub world: Vec<DimSpec>,
    /// Attributes whose human value may be flipped to the other value of
    /// the pair. Each must be one of the world dimensions.
    pub flips: Vec<String>,
}

fn attr_dim(attr: &str, a: &str, b: &str) -> DimSpec {
    DimSpec::Attr { attr: attr.into(), values: [a.into(), b.into()] }
}

impl GeneratorSpec {
    /// The default 6 x 3 dimensions of a built-in domain.
    pub fn default_for(domain: &str) -> Option<GeneratorSpec> {
        match domain {
            "cooking" => Some(GeneratorSpec {
                world: vec![
                    attr_dim("AgtAt(robot)", "Kitchen", "Room"),
                    attr_dim("AgtAt(human)", "Kitchen", "Room"),
                    attr_dim("PastaLoc", "Kitchen", "Room"),
                    attr_dim("Stove", "off", "on"),
                    attr_dim("SaltInPot", "false", "true"),
                    DimSpec::Start,
                ],
                flips: vec!["PastaLoc".into(), "Stove".into(), "SaltInPot".into()],
            }),
            "box" => Some(GeneratorSpec {
                world: vec![
                    attr_dim("AgtAt(human)", "Table", "Storage"),
                    attr_dim("BallsInBox(box1)", "0", "2"),
                    attr_dim("BallsInBox(box2)", "0", "2"),
                    attr_dim("Sticker(box1)", "false", "true"),
                    attr_dim("Sticker(box2)", "false", "true"),
                    DimSpec::Start,
                ],
                flips: vec!["BallsInBox(box1)".into(), "Sticker(box1)".into(), "Sticker(box2)".into()],
            }),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub id: usize,
    pub world: BeliefState,
    pub human: BeliefState,
    pub start: Agent,
}

impl Instance {
    pub fn aligned(&self) -> bool {
        self.world == self.human
    }
}

enum Dim {
    Attr(AttrId, [Value; 2]),
    Start,
}

fn resolve_attr(problem: &Problem, text: &str) -> Result<AttrId, ExperimentError> {
    let u = problem.model.universe();
    u.attrs()
        .find(|&a| u.show_attr(a) == text.replace(' ', ""))
        .ok_or_else(|| ExperimentError::SpecMismatch(format!("unknown attribute `{text}`")))
}

/// Every combination of world dimensions (first dimension slowest) times
/// every subset of flips (empty subset first). Attributes not named keep
/// their value from the base problem; the base human belief is ignored.
pub fn generate_initial_states(base: &Problem, spec: &GeneratorSpec) -> Result<Vec<Instance>, ExperimentError> {
    let u = base.model.universe();
    let mut dims = Vec::new();
    for d in &spec.world {
        dims.push(match d {
            DimSpec::Start => Dim::Start,
            DimSpec::Attr { attr, values } => {
                let a = resolve_attr(base, attr)?;
                let g = u.decl(u.attribute(a).var).value;
                let parse = |s: &str| {
                    u.parse_value(g, s)
                        .ok_or_else(|| ExperimentError::SpecMismatch(format!("`{s}` is not a value of {attr}")))
                };
                let vs = [parse(&values[0])?, parse(&values[1])?];
                if vs[0] == vs[1] {
                    return Err(ExperimentError::SpecMismatch(format!("{attr} varies over one value")));
                }
                Dim::Attr(a, vs)
            }
        });
    }
    if dims.iter().filter(|d| matches!(d, Dim::Start)).count() > 1 {
        return Err(ExperimentError::SpecMismatch("start dimension given twice".into()));
    }
    let mut flips = Vec::new();
    for f in &spec.flips {
        let a = resolve_attr(base, f)?;
        let pair = dims.iter().find_map(|d| match d {
            Dim::Attr(x, vs) if *x == a => Some(*vs),
            _ => None,
        });
        match pair {
            Some(vs) if !flips.iter().any(|(x, _)| *x == a) => flips.push((a, vs)),
            Some(_) => return Err(ExperimentError::SpecMismatch(format!("{f} flipped twice"))),
            None => {
                return Err(ExperimentError::SpecMismatch(format!("flipped attribute {f} is not a world dimension")))
            }
        }
    }

    let mut out = Vec::with_capacity((1 << dims.len()) << flips.len());
    for w in 0..1usize << dims.len() {
        let mut world = base.world.clone();
        let mut start = base.start;
        for (i, d) in dims.iter().enumerate() {
            let bit = (w >> (dims.len() - 1 - i)) & 1;
            match d {
                Dim::Attr(a, vs) => world = world.with(*a, vs[bit]),
                Dim::Start => start = if bit == 0 { Agent::Robot } else { Agent::Human },
            }
        }
        for h in 0..1usize << flips.len() {
            let mut human = world.clone();
            for (j, (a, vs)) in flips.iter().enumerate() {
                if (h >> j) & 1 == 1 {
                    let other = if world.get(*a) == vs[0] { vs[1] } else { vs[0] };
                    human = human.with(*a, other);
                }
            }
            out.push(Instance { id: out.len(), world: world.clone(), human, start });
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub domain: String,
    pub modes: Vec<Mode>,
    pub spec: GeneratorSpec,
    /// Run only this many instances, drawn with `seed`.
    pub sample: Option<usize>,
    pub seed: u64,
    pub planner: PlannerConfig,
}

impl ExperimentConfig {
    pub fn new(domain: &str) -> Result<ExperimentConfig, ExperimentError> {
        let spec = GeneratorSpec::default_for(domain)
            .ok_or_else(|| ExperimentError::SpecMismatch(format!("no default generator for `{domain}`")))?;
        Ok(ExperimentConfig {
            domain: domain.into(),
            modes: vec![Mode::New, Mode::Legacy],
            spec,
            sample: None,
            seed: 0,
            planner: PlannerConfig::new(Mode::New),
        })
    }
}

/// Outcome of one instance under one solver.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InstanceRow {
    pub schema: u32,
    pub domain: String,
    pub mode: &'static str,
    pub instance: usize,
    pub start: &'static str,
    pub aligned: bool,
    pub divergent_attrs: usize,
    /// `S`, `NA`, `IDL`, or `ERR` when no policy was found.
    pub verdict: &'static str,
    pub branches: u64,
    pub failed_branches: u64,
    pub plan_length: usize,
    pub comm_actions: usize,
    pub nodes: usize,
    pub error: String,
}

pub fn run_instance(base: &Problem, domain: &str, inst: &Instance, mode: Mode, planner: &PlannerConfig) -> InstanceRow {
    let problem = base.with_beliefs(inst.world.clone(), inst.human.clone()).with_start(inst.start);
    let model = &*problem.model;
    let cfg = PlannerConfig { mode, ..*planner };
    let divergent = diverging_attributes(&inst.world, &inst.human).map_or(0, |r| r.len());
    let mut row = InstanceRow {
        schema: CSV_SCHEMA,
        domain: domain.into(),
        mode: mode.name(),
        instance: inst.id,
        start: inst.start.name(),
        aligned: inst.aligned(),
        divergent_attrs: divergent,
        verdict: "ERR",
        branches: 0,
        failed_branches: 0,
        plan_length: 0,
        comm_actions: 0,
        nodes: 0,
        error: String::new(),
    };
    match plan(&problem, &cfg) {
        Ok(policy) => {
            let report = simulate(model, &policy, &inst.world, &inst.human, Resolver::Exhaustive);
            row.verdict = report.verdict().label();
            row.branches = report.branches;
            row.failed_branches = report.branches - report.success;
            row.plan_length = report.longest;
            row.comm_actions = policy.comm_count();
            row.nodes = policy.nodes().len();
        }
        Err(e) => row.error = e.to_string(),
    }
    row
}

/// Aggregates of one (domain, mode) pair. Percentages are in [0, 100].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MetricsRow {
    pub domain: String,
    pub mode: &'static str,
    pub instances: usize,
    pub successes: usize,
    pub aligned: usize,
    pub aligned_successes: usize,
    pub na: usize,
    pub idl: usize,
    pub errors: usize,
    /// Share of instances that succeed.
    pub s_pct: f64,
    /// Share of failed instances failing by an inapplicable action.
    pub na_pct: f64,
    /// Share of failed instances failing by an inactivity deadlock.
    pub idl_pct: f64,
    /// Share of successful instances whose policy communicates.
    pub com_pct: f64,
    pub mean_plan_length: f64,
    pub mean_comm_actions: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct MetricsTable {
    pub rows: Vec<MetricsRow>,
}

fn pct(n: usize, d: usize) -> f64 {
    if d == 0 {
        0.0
    } else {
        100.0 * n as f64 / d as f64
    }
}

impl MetricsTable {
    pub fn from_rows(rows: &[InstanceRow]) -> MetricsTable {
        let mut keys: Vec<(String, &'static str)> = Vec::new();
        for r in rows {
            if !keys.iter().any(|(d, m)| *d == r.domain && *m == r.mode) {
                keys.push((r.domain.clone(), r.mode));
            }
        }
        let rows = keys
            .into_iter()
            .map(|(domain, mode)| {
                let rs: Vec<&InstanceRow> = rows.iter().filter(|r| r.domain == domain && r.mode == mode).collect();
                let count = |v: &str| rs.iter().filter(|r| r.verdict == v).count();
                let ok: Vec<&&InstanceRow> = rs.iter().filter(|r| r.verdict == "S").collect();
                let (s, na, idl, err) = (count("S"), count("NA"), count("IDL"), count("ERR"));
                let failed = rs.len() - s;
                let mean = |f: &dyn Fn(&InstanceRow) -> usize| {
                    if ok.is_empty() {
                        0.0
                    } else {
                        ok.iter().map(|r| f(r) as f64).sum::<f64>() / ok.len() as f64
                    }
                };
                MetricsRow {
                    instances: rs.len(),
                    successes: s,
                    aligned: rs.iter().filter(|r| r.aligned).count(),
                    aligned_successes: rs.iter().filter(|r| r.aligned && r.verdict == "S").count(),
                    na,
                    idl,
                    errors: err,
                    s_pct: pct(s, rs.len()),
                    na_pct: pct(na, failed),
                    idl_pct: pct(idl, failed),
                    com_pct: pct(ok.iter().filter(|r| r.comm_actions > 0).count(), s),
                    mean_plan_length: mean(&|r| r.plan_length),
                    mean_comm_actions: mean(&|r| r.comm_actions),
                    domain,
                    mode,
                }
            })
            .collect();
        MetricsTable { rows }
    }

    pub fn row(&self, domain: &str, mode: Mode) -> Option<&MetricsRow> {
        self.rows.iter().find(|r| r.domain == domain && r.mode == mode.name())
    }

    /// Fixed-width text table.
    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{:<8} {:<7} {:>5} {:>7} {:>7} {:>7} {:>7} {:>8} {:>8} {:>6}",
            "domain", "mode", "n", "S%", "NA%", "IDL%", "Com%", "len", "comms", "err"
        );
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{:<8} {:<7} {:>5} {:>7.1} {:>7.1} {:>7.1} {:>7.1} {:>8.2} {:>8.2} {:>6}",
                r.domain,
                r.mode,
                r.instances,
                r.s_pct,
                r.na_pct,
                r.idl_pct,
                r.com_pct,
                r.mean_plan_length,
                r.mean_comm_actions,
                r.errors
            );
        }
        s
    }
}

#[derive(Clone, Debug)]
pub struct ExperimentResult {
    pub rows: Vec<InstanceRow>,
    pub table: MetricsTable,
}

impl ExperimentResult {
    pub fn write_csv<W: io::Write>(&self, w: W) -> Result<(), ExperimentError> {
        let mut wr = csv::Writer::from_writer(w);
        for r in &self.rows {
            wr.serialize(r)?;
        }
        wr.flush()?;
        Ok(())
    }

    pub fn write_metrics_csv<W: io::Write>(&self, w: W) -> Result<(), ExperimentError> {
        let mut wr = csv::Writer::from_writer(w);
        for r in &self.table.rows {
            wr.serialize(r)?;
        }
        wr.flush()?;
        Ok(())
    }
}

/// Plans and simulates every generated instance under every mode. Instances
/// run in parallel; rows come back in (mode, instance id) order.
pub fn run_experiment(base: &Problem, config: &ExperimentConfig) -> Result<ExperimentResult, ExperimentError> {
    let mut instances = generate_initial_states(base, &config.spec)?;
    if let Some(n) = config.sample {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        instances.shuffle(&mut rng);
        instances.truncate(n);
        instances.sort_by_key(|i| i.id);
    }
    let mut rows = Vec::new();
    for &mode in &config.modes {
        let part: Vec<InstanceRow> =
            instances.par_iter().map(|inst| run_instance(base, &config.domain, inst, mode, &config.planner)).collect();
        rows.extend(part);
    }
    let table = MetricsTable::from_rows(&rows);
    Ok(ExperimentResult { rows, table })
}

/// Runs a built-in domain with its default generator.
pub fn run_builtin(domain: &str, modes: &[Mode]) -> Result<ExperimentResult, ExperimentError> {
    let loaded = crate::builtins::builtin(domain)?;
    let mut cfg = ExperimentConfig::new(domain)?;
    cfg.modes = modes.to_vec();
    run_experiment(&loaded.problem, &cfg)
}
