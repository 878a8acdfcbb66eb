use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use beliefplan::builtins;
use beliefplan::dom::{self, Loaded};
use beliefplan::experiment::{run_experiment, ExperimentConfig, ExperimentResult, MetricsTable};
use beliefplan::export::{to_json, to_text};
use beliefplan_core::planner::{judging_dynamics, plan, simulate_with, Resolver, DEADLOCK_RUN};
use beliefplan_core::{Agent, Dynamics, Mode, PlannerConfig, Policy, Problem};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "beliefplan", version, about = "Belief-aware joint HTN planning for a robot and a human")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Plan a joint policy and print it.
    Plan(PlanArgs),
    /// Plan, then execute the policy against the initial world.
    Simulate {
        #[command(flatten)]
        plan: PlanArgs,
        #[arg(long, value_enum, default_value_t = ResolverArg::Exhaustive)]
        resolver: ResolverArg,
        /// Judge with observation-aware dynamics regardless of mode.
        #[arg(long)]
        realistic: bool,
    },
    /// Plan and write the policy graph to a file.
    Export {
        #[command(flatten)]
        plan: PlanArgs,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long, short)]
        out: PathBuf,
    },
    /// Run the solver comparison over generated initial states.
    Experiment {
        /// `cooking`, `box` or `all`.
        #[arg(long, default_value = "all")]
        domain: String,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        /// Run a seeded random subset of this many instances.
        #[arg(long)]
        sample: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, env = "BELIEFPLAN_OUT", default_value = "results")]
        out: PathBuf,
    },
    /// Parse and check a domain file.
    ValidateDomain {
        path: PathBuf,
        /// Print the canonical form of the file.
        #[arg(long)]
        canonical: bool,
    },
}

#[derive(Args)]
struct PlanArgs {
    /// Built-in domain name or path to a .dom file.
    #[arg(long, default_value = "cooking")]
    domain: String,
    #[arg(long, value_enum, default_value_t = ModeArg::New)]
    mode: ModeArg,
    /// Override the agent that acts first.
    #[arg(long, value_enum)]
    start: Option<AgentArg>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    New,
    Legacy,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::New => Mode::New,
            ModeArg::Legacy => Mode::Legacy,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum AgentArg {
    Robot,
    Human,
}

#[derive(Clone, Copy, ValueEnum)]
enum ResolverArg {
    Exhaustive,
    First,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

fn load(domain: &str) -> Result<Loaded> {
    if builtins::NAMES.contains(&domain) {
        return Ok(builtins::builtin(domain)?);
    }
    let text = fs::read_to_string(domain).with_context(|| format!("cannot read domain `{domain}`"))?;
    dom::parse(&text).map_err(|d| anyhow::anyhow!("{domain}:\n{d}"))
}

fn planned(args: &PlanArgs) -> Result<(Problem, Policy)> {
    let mut problem = load(&args.domain)?.problem;
    if let Some(s) = args.start {
        problem = problem.with_start(match s {
            AgentArg::Robot => Agent::Robot,
            AgentArg::Human => Agent::Human,
        });
    }
    let policy = plan(&problem, &PlannerConfig::new(args.mode.into())).context("planning failed")?;
    Ok((problem, policy))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn run(cli: Cli) -> Result<()> {
    match cli.cmd {
        Cmd::Plan(args) => {
            let (problem, policy) = planned(&args)?;
            print!("{}", to_text(&problem.model, &policy));
        }
        Cmd::Simulate { plan: args, resolver, realistic } => {
            let (problem, policy) = planned(&args)?;
            let dynamics = if realistic { Dynamics::Aware } else { judging_dynamics(policy.mode) };
            let resolver = match resolver {
                ResolverArg::Exhaustive => Resolver::Exhaustive,
                ResolverArg::First => Resolver::First,
            };
            let r = simulate_with(
                &problem.model,
                &policy,
                &problem.world,
                &problem.human_belief,
                resolver,
                dynamics,
                DEADLOCK_RUN,
            );
            println!("verdict {}", r.verdict().label());
            println!(
                "branches {} success {} na {} idl {} longest {} comms {}",
                r.branches,
                r.success,
                r.not_applicable,
                r.deadlock,
                r.longest,
                policy.comm_count()
            );
        }
        Cmd::Export { plan: args, format, out } => {
            let (problem, policy) = planned(&args)?;
            let text = match format {
                Format::Json => serde_json::to_string_pretty(&to_json(&problem.model, &policy))? + "\n",
                Format::Text => to_text(&problem.model, &policy),
            };
            write_file(&out, &text)?;
        }
        Cmd::Experiment { domain, mode, sample, seed, out } => {
            let domains: Vec<&str> = match domain.as_str() {
                "all" => builtins::NAMES.to_vec(),
                d if builtins::NAMES.contains(&d) => vec![d],
                d => bail!("experiments run on built-in domains only, not `{d}`"),
            };
            fs::create_dir_all(&out).with_context(|| format!("cannot create {}", out.display()))?;
            let mut rows = Vec::new();
            for d in domains {
                let loaded = builtins::builtin(d)?;
                let mut cfg = ExperimentConfig::new(d)?;
                if let Some(m) = mode {
                    cfg.modes = vec![m.into()];
                }
                cfg.sample = sample;
                cfg.seed = seed;
                let res = run_experiment(&loaded.problem, &cfg)?;
                res.write_csv(fs::File::create(out.join(format!("{d}_instances.csv")))?)?;
                rows.extend(res.rows);
            }
            let table = MetricsTable::from_rows(&rows);
            let summary = ExperimentResult { rows, table };
            summary.write_metrics_csv(fs::File::create(out.join("metrics.csv"))?)?;
            print!("{}", summary.table.render());
        }
        Cmd::ValidateDomain { path, canonical } => {
            let text = fs::read_to_string(&path).with_context(|| format!("cannot read {}", path.display()))?;
            match dom::parse(&text) {
                Ok(l) => {
                    if canonical {
                        print!("{}", dom::serialize(&l.ast));
                    } else {
                        let m = &l.problem.model;
                        println!(
                            "ok: domain {} with {} attributes, {} ground operators, {} methods",
                            l.ast.name.name,
                            m.universe().attr_count(),
                            m.ground_ops().len(),
                            m.methods().len()
                        );
                    }
                }
                Err(d) => bail!("{}:\n{d}", path.display()),
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
