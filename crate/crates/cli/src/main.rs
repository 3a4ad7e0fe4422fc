mod config;
mod report;

use std::collections::BTreeSet;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use striprev::benchgen::{gen_random_domain, gen_rev_domain, RandomSpec, RevSpec};
use striprev::encodings::{
    default_solver_command, emit, extract_plans, run_external_solver, EncodingKind, ExtractedPlan,
    SolverError,
};
use striprev::formula::enumerate_states;
use striprev::model::Strictness;
use striprev::pddl::{parse_domain_with, parse_problem, pretty_print, PddlSource};
use striprev::reversibility::{decide_over_states, DecideError, DEFAULT_MAX_PLANS};
use striprev::{
    decide_universal, ActionId, CapExceeded, Domain, Formula, Limits, PlanningTask, SearchConfig,
    State, StateSetSpec, Verdict, VerdictMode,
};

use config::FileConfig;
use report::{
    CheckBody, CheckConfig, CrosscheckBody, PlanPair, ReachableBody, Report, VerdictEntry,
};

const EXIT_USAGE: u8 = 1;
const EXIT_CAP: u8 = 2;
const EXIT_SOLVER: u8 = 3;
const EXIT_DISAGREE: u8 = 4;

/// Decide uniform reversibility of STRIPS actions.
#[derive(Debug, Parser)]
#[command(name = "striprev", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Debug, Args)]
struct Global {
    /// Write output here instead of stdout (`-` is stdout).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Render a table instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,
    /// Leave timings out of the report, making it reproducible byte for byte.
    #[arg(long, global = true)]
    no_timing: bool,
    /// Worker threads for per-action checks.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// TOML file with defaults for the flags.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Check every action (or a subset) of a domain.
    Check(CheckArgs),
    /// Write an ASP/ELP program for a domain.
    Emit(EmitArgs),
    /// Compare the internal search with an external ASP solver.
    Crosscheck(CrosscheckArgs),
    /// Generate benchmark domains.
    Gen(GenArgs),
    /// List the reachable states of a task.
    Reachable(ReachableArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Universal,
    Phi,
    Set,
    Task,
}

impl Mode {
    fn as_str(self) -> &'static str {
        match self {
            Mode::Universal => "universal",
            Mode::Phi => "phi",
            Mode::Set => "set",
            Mode::Task => "task",
        }
    }
}

#[derive(Debug, Args)]
struct DomainArg {
    /// PDDL domain file (`-` reads stdin).
    domain: PathBuf,
    /// Drop add effects that repeat a precondition instead of rejecting the domain.
    #[arg(long)]
    lenient: bool,
}

#[derive(Debug, Args)]
struct PhiArgs {
    /// State formula, e.g. "(and f0 (not f1))".
    #[arg(long, conflicts_with = "phi_file")]
    phi: Option<String>,
    /// File containing the state formula.
    #[arg(long)]
    phi_file: Option<PathBuf>,
}

impl PhiArgs {
    fn text(&self) -> Result<Option<String>> {
        match (&self.phi, &self.phi_file) {
            (Some(t), _) => Ok(Some(t.clone())),
            (None, Some(p)) => Ok(Some(read_text(p)?)),
            (None, None) => Ok(None),
        }
    }
}

#[derive(Debug, Args)]
struct CheckArgs {
    #[command(flatten)]
    domain: DomainArg,
    /// Which start states the reverse plan must cover. Inferred from
    /// --phi, --states or --task when omitted.
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    /// Plan length bound [default: 1].
    #[arg(long)]
    horizon: Option<usize>,
    /// Only plans of length exactly --horizon (default: every length up to it).
    #[arg(long)]
    exact: bool,
    #[command(flatten)]
    phi: PhiArgs,
    /// JSON file with the explicit start states, e.g. [["f0"], []].
    #[arg(long)]
    states: Option<PathBuf>,
    /// PDDL problem file; start states are its reachable states.
    #[arg(long)]
    task: Option<PathBuf>,
    /// Comma-separated action names to check (default: all).
    #[arg(long, value_delimiter = ',')]
    actions: Vec<String>,
    /// Witnesses reported per action.
    #[arg(long)]
    max_plans: Option<usize>,
    /// Largest fact count for which all states may be enumerated.
    #[arg(long)]
    enum_cap: Option<usize>,
    /// Largest number of states a search may visit.
    #[arg(long)]
    state_cap: Option<usize>,
}

#[derive(Debug, Args)]
struct EmitArgs {
    #[command(flatten)]
    domain: DomainArg,
    #[arg(long, value_parser = parse_kind)]
    kind: EncodingKind,
    /// Reverse-plan length [default: 1].
    #[arg(long)]
    horizon: Option<usize>,
    #[command(flatten)]
    phi: PhiArgs,
}

#[derive(Debug, Args)]
struct CrosscheckArgs {
    #[command(flatten)]
    domain: DomainArg,
    /// Reverse-plan length [default: 1].
    #[arg(long)]
    horizon: Option<usize>,
    /// Solver command template with {program} and {all_models} placeholders.
    #[arg(long)]
    solver: Option<String>,
}

#[derive(Debug, Args)]
struct GenArgs {
    #[command(subcommand)]
    what: GenWhat,
    /// Directory for the generated files.
    #[arg(long, global = true, default_value = ".")]
    out_dir: PathBuf,
}

#[derive(Debug, Subcommand)]
enum GenWhat {
    /// rev-i domains; I is a number or an inclusive range like 1..6.
    Rev { i: String },
    /// A seeded random STRIPS domain.
    Random {
        #[arg(long)]
        facts: usize,
        #[arg(long)]
        actions: usize,
        #[arg(long)]
        seed: u64,
        /// Probability of each fact in each of pre, add and del.
        #[arg(long, default_value_t = 0.5)]
        p: f64,
    },
}

#[derive(Debug, Args)]
struct ReachableArgs {
    #[command(flatten)]
    domain: DomainArg,
    /// PDDL problem file.
    task: PathBuf,
    /// Largest number of states to enumerate.
    #[arg(long)]
    cap: Option<usize>,
}

fn parse_kind(s: &str) -> Result<EncodingKind, String> {
    s.parse()
}

fn read_text(path: &Path) -> Result<String> {
    if path == Path::new("-") {
        return std::io::read_to_string(std::io::stdin()).context("reading stdin");
    }
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_domain(arg: &DomainArg) -> Result<Domain> {
    let text = read_text(&arg.domain)?;
    let src = if arg.domain == Path::new("-") {
        PddlSource::stdin(text)
    } else {
        PddlSource::new(text, arg.domain.display().to_string())
    };
    let strictness = if arg.lenient {
        Strictness::Lenient
    } else {
        Strictness::Strict
    };
    let (d, warnings) = parse_domain_with(&src, strictness)?;
    for w in warnings {
        eprintln!("warning: {w}");
    }
    Ok(d)
}

fn load_task(d: &Domain, path: &Path) -> Result<PlanningTask> {
    let src = PddlSource::new(read_text(path)?, path.display().to_string());
    Ok(parse_problem(&src, d)?)
}

struct Ctx {
    global: Global,
    file: FileConfig,
}

impl Ctx {
    fn pretty(&self) -> bool {
        self.global.pretty || self.file.pretty.unwrap_or(false)
    }

    fn timing(&self) -> bool {
        !(self.global.no_timing || self.file.no_timing.unwrap_or(false))
    }

    fn jobs(&self) -> Option<usize> {
        self.global.jobs.or(self.file.jobs)
    }

    fn write(&self, text: &str) -> Result<()> {
        match &self.global.out {
            Some(p) if p != Path::new("-") => {
                std::fs::write(p, text).with_context(|| format!("writing {}", p.display()))
            }
            _ => {
                let mut stdout = std::io::stdout().lock();
                stdout.write_all(text.as_bytes())?;
                Ok(stdout.flush()?)
            }
        }
    }

    fn emit_report<T: Serialize>(
        &self,
        report: &Report<T>,
        table: impl FnOnce() -> String,
    ) -> Result<()> {
        if self.pretty() {
            self.write(&table())
        } else {
            let mut json = serde_json::to_string_pretty(report)?;
            json.push('\n');
            self.write(&json)
        }
    }

    /// Runs `f` on a pool of `--jobs` threads when parallelism is built in.
    fn install<R: Send>(&self, f: impl FnOnce() -> R + Send) -> Result<R> {
        #[cfg(feature = "parallel")]
        if let Some(n) = self.jobs() {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(n).build()?;
            return Ok(pool.install(f));
        }
        #[cfg(not(feature = "parallel"))]
        let _ = self.jobs();
        Ok(f())
    }
}

fn ms_since(t: Instant) -> f64 {
    (t.elapsed().as_secs_f64() * 1e6).round() / 1e3
}

fn cmd_check(cx: &Ctx, args: &CheckArgs) -> Result<u8> {
    let d = load_domain(&args.domain)?;
    let phi_text = args.phi.text()?;
    let mode = match args.mode {
        Some(m) => m,
        None if phi_text.is_some() => Mode::Phi,
        None if args.states.is_some() => Mode::Set,
        None if args.task.is_some() => Mode::Task,
        None => match cx.file.mode.as_deref() {
            None => Mode::Universal,
            Some(m) => Mode::from_str(m, true).map_err(|e| anyhow!("config key `mode`: {e}"))?,
        },
    };

    let horizon = args.horizon.or(cx.file.horizon).unwrap_or(1);
    let exact = args.exact || cx.file.exact.unwrap_or(false);
    let defaults = Limits::default();
    let limits = Limits {
        max_facts: args
            .enum_cap
            .or(cx.file.enum_cap)
            .unwrap_or(defaults.max_facts),
        max_states: args
            .state_cap
            .or(cx.file.state_cap)
            .unwrap_or(defaults.max_states),
    };
    let max_plans = args
        .max_plans
        .or(cx.file.max_plans)
        .unwrap_or(DEFAULT_MAX_PLANS);
    let cfg = if exact {
        SearchConfig::exact(horizon)
    } else {
        SearchConfig::up_to(horizon)
    }
    .with_max_plans(max_plans)
    .with_limits(limits);
    cfg.validate()?;

    let actions: Vec<ActionId> = if args.actions.is_empty() {
        d.action_ids().collect()
    } else {
        args.actions
            .iter()
            .map(|n| {
                d.action_id(n)
                    .ok_or_else(|| anyhow!("unknown action `{n}`"))
            })
            .collect::<Result<_>>()?
    };

    let mut echo = CheckConfig {
        mode: mode.as_str(),
        horizon,
        search: cfg.mode,
        phi: None,
        task: None,
        states: None,
        max_plans,
        enum_cap: limits.max_facts,
        state_cap: limits.max_states,
    };

    // start states shared by all actions, with the mode recorded in verdicts
    let shared: Option<(Vec<State>, VerdictMode)> = match mode {
        Mode::Universal => None,
        Mode::Phi => {
            let text = phi_text.ok_or_else(|| anyhow!("--mode phi needs --phi or --phi-file"))?;
            let phi = Formula::parse(&text, &d)?;
            echo.phi = Some(phi.to_text(&d));
            let states = enumerate_states(&StateSetSpec::ByFormula(phi.clone()), &d, &limits)?;
            Some((states, VerdictMode::ByFormula(phi)))
        }
        Mode::Set => {
            let path = args
                .states
                .as_ref()
                .ok_or_else(|| anyhow!("--mode set needs --states"))?;
            let names: Vec<Vec<String>> = serde_json::from_str(&read_text(path)?)
                .with_context(|| format!("parsing {}", path.display()))?;
            let states = names
                .iter()
                .map(|s| d.state(s))
                .collect::<Result<Vec<_>, _>>()?;
            let states = enumerate_states(&StateSetSpec::Explicit(states), &d, &limits)?;
            echo.states = Some(states.len());
            Some((states, VerdictMode::ExplicitSet))
        }
        Mode::Task => {
            let path = args
                .task
                .as_ref()
                .ok_or_else(|| anyhow!("--mode task needs --task"))?;
            let task = load_task(&d, path)?;
            echo.task = Some(path.display().to_string());
            let states = enumerate_states(&StateSetSpec::ReachableOf(task), &d, &limits)?;
            Some((states, VerdictMode::InTask))
        }
    };

    let timing = cx.timing();
    let decide = |a: &ActionId| -> Result<(Verdict, f64), DecideError> {
        let t = Instant::now();
        let v = match &shared {
            None => decide_universal(&d, *a, &cfg),
            Some((states, vm)) => decide_over_states(&d, *a, states, vm.clone(), &cfg)?,
        };
        Ok((v, ms_since(t)))
    };
    let results = cx.install(|| striprev::par::map(&actions, decide))?;
    let verdicts = results
        .into_iter()
        .map(|r| r.map(|(v, ms)| VerdictEntry::new(&d, &v, timing.then_some(ms))))
        .collect::<Result<Vec<_>, _>>()?;

    let report = Report::new(
        "check",
        &d,
        CheckBody {
            config: echo,
            verdicts,
        },
    );
    cx.emit_report(&report, || report::check_table(d.name(), &report.body))?;
    Ok(0)
}

fn cmd_emit(cx: &Ctx, args: &EmitArgs) -> Result<u8> {
    let d = load_domain(&args.domain)?;
    let horizon = args.horizon.or(cx.file.horizon).unwrap_or(1);
    let phi = args
        .phi
        .text()?
        .map(|t| Formula::parse(&t, &d))
        .transpose()?;
    let prog = emit(args.kind, &d, horizon, phi.as_ref())?;
    cx.write(&prog.text)?;
    Ok(0)
}

fn solver_command(cx: &Ctx, flag: Option<&String>) -> Result<String> {
    if let Some(s) = flag.or(cx.file.solver.as_ref()) {
        return Ok(s.clone());
    }
    default_solver_command().ok_or_else(|| {
        SolverError::SolverNotFound("no clingo binary or python module found".into()).into()
    })
}

fn cmd_crosscheck(cx: &Ctx, args: &CrosscheckArgs) -> Result<u8> {
    let d = load_domain(&args.domain)?;
    let horizon = args.horizon.or(cx.file.horizon).unwrap_or(1);
    let solver = solver_command(cx, args.solver.as_ref())?;
    let t = Instant::now();

    let cfg = SearchConfig::exact(horizon).unlimited();
    let ids: Vec<ActionId> = d.action_ids().collect();
    let verdicts =
        cx.install(|| striprev::reversibility::check_all(&ids, |a| decide_universal(&d, a, &cfg)))?;
    let internal: BTreeSet<ExtractedPlan> = verdicts
        .iter()
        .flat_map(|v| {
            v.witnesses.iter().map(|p| ExtractedPlan {
                action: v.action.clone(),
                plan: d.plan_names(p),
            })
        })
        .collect();

    let prog = emit(EncodingKind::SimpleAsp, &d, horizon, None)?;
    let result = run_external_solver(&prog, &solver)?;
    let extracted = extract_plans(&result)?;
    let external: BTreeSet<ExtractedPlan> = extracted.iter().cloned().collect();
    if external.len() != extracted.len() {
        eprintln!(
            "warning: solver reported {} duplicate answer sets",
            extracted.len() - external.len()
        );
    }

    let pairs = |set: &mut dyn Iterator<Item = &ExtractedPlan>| -> Vec<PlanPair> {
        set.map(|p| PlanPair {
            action: p.action.clone(),
            plan: p.plan.clone(),
        })
        .collect()
    };
    let agree = internal == external && external.len() == extracted.len();
    let body = CrosscheckBody {
        horizon,
        solver,
        agreement: if agree { "AGREE" } else { "DISAGREE" },
        pairs: internal.len(),
        internal: pairs(&mut internal.iter()),
        external: pairs(&mut external.iter()),
        only_internal: pairs(&mut internal.difference(&external)),
        only_external: pairs(&mut external.difference(&internal)),
        elapsed_ms: cx.timing().then(|| ms_since(t)),
    };
    let report = Report::new("crosscheck", &d, body);
    cx.emit_report(&report, || report::crosscheck_table(d.name(), &report.body))?;
    Ok(if agree { 0 } else { EXIT_DISAGREE })
}

fn parse_rev_range(s: &str) -> Result<Vec<usize>> {
    let num = |t: &str| {
        t.trim()
            .parse::<usize>()
            .with_context(|| format!("bad rev index `{t}`"))
    };
    match s.split_once("..") {
        Some((lo, hi)) => {
            let (lo, hi) = (num(lo)?, num(hi.strip_prefix('=').unwrap_or(hi))?);
            if lo > hi {
                bail!("empty range {s}");
            }
            Ok((lo..=hi).collect())
        }
        None => Ok(vec![num(s)?]),
    }
}

fn cmd_gen(cx: &Ctx, args: &GenArgs) -> Result<u8> {
    std::fs::create_dir_all(&args.out_dir)
        .with_context(|| format!("creating {}", args.out_dir.display()))?;
    let files: Vec<(String, String)> = match &args.what {
        GenWhat::Rev { i } => parse_rev_range(i)?
            .into_iter()
            .map(|i| {
                let src = gen_rev_domain(RevSpec::new(i)?);
                Ok((src.origin, src.text))
            })
            .collect::<Result<_>>()?,
        GenWhat::Random {
            facts,
            actions,
            seed,
            p,
        } => {
            let spec = RandomSpec::new(*facts, *actions, *seed, *p)?;
            vec![(
                format!("{}.pddl", spec.name()),
                pretty_print(&gen_random_domain(spec)),
            )]
        }
    };
    let mut listing = String::new();
    for (name, text) in files {
        let path = args.out_dir.join(name);
        std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
        listing.push_str(&format!("{}\n", path.display()));
    }
    cx.write(&listing)?;
    Ok(0)
}

fn cmd_reachable(cx: &Ctx, args: &ReachableArgs) -> Result<u8> {
    let d = load_domain(&args.domain)?;
    let task = load_task(&d, &args.task)?;
    let cap = args
        .cap
        .or(cx.file.state_cap)
        .unwrap_or(Limits::default().max_states);
    let states = striprev::reversibility::reachable_states(&task, cap)?;
    let body = ReachableBody {
        count: states.len(),
        states: states
            .iter()
            .map(|s| d.names(s).into_iter().map(str::to_owned).collect())
            .collect(),
    };
    let report = Report::new("reachable", &d, body);
    cx.emit_report(&report, || report::reachable_table(d.name(), &report.body))?;
    Ok(0)
}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.is::<CapExceeded>()
            || matches!(
                cause.downcast_ref::<DecideError>(),
                Some(DecideError::Cap(_))
            )
        {
            return EXIT_CAP;
        }
        if cause.is::<SolverError>() {
            return EXIT_SOLVER;
        }
    }
    EXIT_USAGE
}

fn run(cli: Cli) -> Result<u8> {
    let file = match &cli.global.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let cx = Ctx {
        global: cli.global,
        file,
    };
    match &cli.command {
        Cmd::Check(a) => cmd_check(&cx, a),
        Cmd::Emit(a) => cmd_emit(&cx, a),
        Cmd::Crosscheck(a) => cmd_crosscheck(&cx, a),
        Cmd::Gen(a) => cmd_gen(&cx, a),
        Cmd::Reachable(a) => cmd_reachable(&cx, a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
