//! Command-line front end.
//!
//! Exit codes: 0 success, 1 a checked property fails, 2 usage error,
//! 3 I/O or parse error, 4 enumeration budget exceeded.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::checks::{
    find_blocking_coalition, find_imperfect_agent, find_is_deviation, find_nash_deviation,
    find_pareto_dominator,
};
use crate::error::Error;
use crate::exact::{perfect_partition, psi_max_partition, socially_optimal, EnumerationBudget};
use crate::generators::{
    from_exact_cover, from_independent_set, pos_family, random_instance, GraphSpec, RandomParams,
    SetCoverSpec,
};
use crate::greedy::greedy_solve;
use crate::matching::{match2_opt, match2_pcis};
use crate::metrics::welfare_summary;
use crate::model::{
    parse_instance, parse_partition, psi, serialize_instance, serialize_partition, welfare,
    Instance, Partition, Utility,
};

pub const BUDGET_ENV: &str = "HGCRP_BUDGET_AGENTS";
const PSI_PREFIX: usize = 10;

#[derive(Parser, Debug)]
#[command(
    name = "hgcrp",
    version,
    about = "Coalition formation under the common ranking property"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute a partition and verify it before writing.
    Solve {
        #[arg(long, value_enum)]
        alg: Alg,
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        /// Partition file; printed to stdout when omitted.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Test a partition against solution concepts.
    Check {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        #[arg(long, value_name = "FILE")]
        partition: PathBuf,
        #[arg(long, value_enum, value_delimiter = ',', required = true)]
        props: Vec<Prop>,
    },
    /// Welfare figures and prices of anarchy and stability.
    Metrics {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        #[arg(long, value_enum)]
        what: What,
    },
    /// Write a generated instance.
    Gen(GenArgs),
}

#[derive(Args, Debug)]
struct GenArgs {
    #[command(subcommand)]
    kind: GenKind,
    /// Instance file; printed to stdout when omitted.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum GenKind {
    /// Reduction from exact cover.
    ExactCover {
        #[arg(long, value_name = "FILE")]
        sets: PathBuf,
    },
    /// Reduction from maximum independent set.
    Mis {
        #[arg(long, value_name = "FILE")]
        graph: PathBuf,
        #[arg(long)]
        eps: Option<Utility>,
    },
    /// Family whose price of stability is n/(1+eps).
    PosFamily {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "1/2")]
        eps: Utility,
    },
    /// Seeded random instance.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        max_size: Option<usize>,
        #[arg(long, default_value_t = 0.5)]
        density: f64,
        #[arg(long, default_value_t = 4)]
        max_den: i64,
        #[arg(long, default_value_t = 4)]
        cap: i64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Alg {
    Greedy,
    Exact,
    Opt,
    Perfect,
    #[value(name = "match2-opt")]
    Match2Opt,
    #[value(name = "match2-pcis")]
    Match2Pcis,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Prop {
    Core,
    Is,
    Nash,
    Pareto,
    Perfect,
}

impl Prop {
    fn name(self) -> &'static str {
        match self {
            Prop::Core => "core",
            Prop::Is => "is",
            Prop::Nash => "nash",
            Prop::Pareto => "pareto",
            Prop::Perfect => "perfect",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum What {
    Poa,
    Pos,
    Welfare,
    CoreCount,
}

enum Failure {
    /// A property does not hold; the witness has already been printed.
    Property,
    Usage(String),
    Input(String),
    Budget(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Property => 1,
            Failure::Usage(_) => 2,
            Failure::Input(_) => 3,
            Failure::Budget(_) => 4,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExceeded(_) => Failure::Budget(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = std::result::Result<(), Failure>;

/// Runs the CLI on `args` (without the program name) and returns the exit
/// code. The enumeration budget is read from `HGCRP_BUDGET_AGENTS`.
pub fn run(args: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let budget_var = std::env::var(BUDGET_ENV).ok();
    run_with_budget(args, budget_var.as_deref(), out, err)
}

/// As [`run`], with the budget override passed explicitly.
pub fn run_with_budget(
    args: &[String],
    budget_var: Option<&str>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let argv = std::iter::once("hgcrp".to_string()).chain(args.iter().cloned());
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if code == 0 { out } else { err };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    let result = budget(budget_var).and_then(|b| dispatch(cli.command, &b, out));
    match result {
        Ok(()) => 0,
        Err(f) => {
            match &f {
                Failure::Property => {}
                Failure::Usage(m) => {
                    let _ = writeln!(err, "usage error: {m}");
                }
                Failure::Input(m) => {
                    let _ = writeln!(err, "error: {m}");
                }
                Failure::Budget(m) => {
                    let _ = writeln!(err, "error: {m}; raise {BUDGET_ENV} to allow more agents");
                }
            }
            f.code()
        }
    }
}

fn budget(var: Option<&str>) -> std::result::Result<EnumerationBudget, Failure> {
    let Some(v) = var else {
        return Ok(EnumerationBudget::default());
    };
    let agents: usize = v
        .trim()
        .parse()
        .map_err(|_| Failure::Usage(format!("{BUDGET_ENV}={v:?} is not a count")))?;
    EnumerationBudget::default()
        .with_max_agents(agents)
        .map_err(|e| Failure::Usage(e.to_string()))
}

fn dispatch(cmd: Command, budget: &EnumerationBudget, out: &mut dyn Write) -> Outcome {
    match cmd {
        Command::Solve {
            alg,
            input,
            out: path,
        } => solve(alg, &input, path.as_deref(), budget, out),
        Command::Check {
            input,
            partition,
            props,
        } => check(&input, &partition, &props, budget, out),
        Command::Metrics { input, what } => metrics(&input, what, budget, out),
        Command::Gen(args) => generate(args, out),
    }
}

fn read(path: &Path) -> std::result::Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Outcome {
    std::fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_instance(path: &Path) -> std::result::Result<Instance, Failure> {
    parse_instance(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn rational(u: Utility) -> String {
    format!("{u} (≈{:.6})", u.to_f64())
}

/// Witness text when `prop` fails on `pi`, `None` when it holds.
fn violation(
    prop: Prop,
    inst: &Instance,
    pi: &Partition,
    budget: &EnumerationBudget,
) -> std::result::Result<Option<String>, Failure> {
    Ok(match prop {
        Prop::Core => find_blocking_coalition(inst, pi).map(|c| format!("blocking coalition {c}")),
        Prop::Is => find_is_deviation(inst, pi).map(|m| m.to_string()),
        Prop::Nash => find_nash_deviation(inst, pi).map(|m| m.to_string()),
        Prop::Pareto => {
            find_pareto_dominator(inst, pi, budget)?.map(|p| format!("dominated by {p}"))
        }
        Prop::Perfect => find_imperfect_agent(inst, pi).map(|a| format!("agent {a} can do better")),
    })
}

fn solve(
    alg: Alg,
    input: &Path,
    path: Option<&Path>,
    budget: &EnumerationBudget,
    out: &mut dyn Write,
) -> Outcome {
    let inst = load_instance(input)?;
    let (name, pi, props): (&str, Partition, &[Prop]) = match alg {
        Alg::Greedy => ("greedy", greedy_solve(&inst), &[Prop::Core, Prop::Is]),
        Alg::Exact => (
            "exact",
            psi_max_partition(&inst, budget)?,
            &[Prop::Core, Prop::Is, Prop::Pareto],
        ),
        Alg::Opt => ("opt", socially_optimal(&inst, budget)?, &[Prop::Pareto]),
        Alg::Perfect => match perfect_partition(&inst, budget)? {
            Some(pi) => ("perfect", pi, &[Prop::Perfect, Prop::Core, Prop::Nash]),
            None => {
                writeln!(out, "algorithm: perfect")?;
                writeln!(out, "result: no perfect partition exists")?;
                return Err(Failure::Property);
            }
        },
        Alg::Match2Opt => ("match2-opt", match2_opt(&inst)?, &[]),
        Alg::Match2Pcis => ("match2-pcis", match2_pcis(&inst)?, &[Prop::Core, Prop::Is]),
    };

    // Fail closed: nothing is written unless every property re-checks.
    let pi = Partition::new(&inst, pi.coalitions().to_vec())?;
    for &p in props {
        if let Some(w) = violation(p, &inst, &pi, budget)? {
            return Err(Failure::Input(format!(
                "internal check failed for {name}: {}: {w}",
                p.name()
            )));
        }
    }

    let mut summary = String::new();
    let w = welfare(&inst, &pi)?;
    let psi = psi(&inst, &pi);
    let mut prefix: Vec<String> = psi
        .values()
        .iter()
        .take(PSI_PREFIX)
        .map(Utility::to_string)
        .collect();
    if psi.len() > PSI_PREFIX {
        prefix.push("...".into());
    }
    let verified: Vec<&str> = std::iter::once("valid")
        .chain(props.iter().map(|p| p.name()))
        .collect();
    let _ = writeln!(summary, "algorithm: {name}");
    let _ = writeln!(summary, "agents: {}", inst.agent_count());
    let _ = writeln!(summary, "coalitions: {}", pi.coalitions().len());
    let _ = writeln!(summary, "welfare: {}", rational(w));
    let _ = writeln!(summary, "psi: {}", prefix.join(","));
    let _ = writeln!(summary, "verified: {}", verified.join(","));

    match path {
        Some(p) => {
            write_file(p, &serialize_partition(&pi))?;
            out.write_all(summary.as_bytes())?;
        }
        None => {
            out.write_all(serialize_partition(&pi).as_bytes())?;
            for line in summary.lines() {
                writeln!(out, "# {line}")?;
            }
        }
    }
    Ok(())
}

fn check(
    input: &Path,
    partition: &Path,
    props: &[Prop],
    budget: &EnumerationBudget,
    out: &mut dyn Write,
) -> Outcome {
    let inst = load_instance(input)?;
    let pi = parse_partition(&inst, &read(partition)?)
        .map_err(|e| Failure::Input(format!("{}: {e}", partition.display())))?;
    let mut failed = false;
    for &p in props {
        match violation(p, &inst, &pi, budget)? {
            None => writeln!(out, "{}: holds", p.name())?,
            Some(w) => {
                failed = true;
                writeln!(out, "{}: fails, {w}", p.name())?;
            }
        }
    }
    if failed {
        Err(Failure::Property)
    } else {
        Ok(())
    }
}

fn metrics(input: &Path, what: What, budget: &EnumerationBudget, out: &mut dyn Write) -> Outcome {
    let inst = load_instance(input)?;
    let summary = welfare_summary(&inst, budget)?;
    let price = match what {
        What::Poa => summary.price_of_anarchy(),
        What::Pos => summary.price_of_stability(),
        What::Welfare => Ok(summary.optimum),
        What::CoreCount => {
            writeln!(out, "{}", summary.core_stable_count)?;
            return Ok(());
        }
    };
    match price {
        Ok(v) => writeln!(out, "{}", rational(v))?,
        Err(Error::Unbounded) => writeln!(out, "unbounded")?,
        Err(e) => return Err(e.into()),
    }
    Ok(())
}

fn generate(args: GenArgs, out: &mut dyn Write) -> Outcome {
    let inst = match args.kind {
        GenKind::ExactCover { sets } => {
            let spec = SetCoverSpec::parse(&read(&sets)?)
                .map_err(|e| Failure::Input(format!("{}: {e}", sets.display())))?;
            from_exact_cover(&spec)?
        }
        GenKind::Mis { graph, eps } => {
            let spec = GraphSpec::parse(&read(&graph)?)
                .map_err(|e| Failure::Input(format!("{}: {e}", graph.display())))?;
            from_independent_set(&spec, eps).map_err(usage)?.instance
        }
        GenKind::PosFamily { n, eps } => pos_family(n, eps).map_err(usage)?,
        GenKind::Random {
            n,
            max_size,
            density,
            max_den,
            cap,
            seed,
        } => {
            let mut params = RandomParams::new(n, max_size.unwrap_or(n), density, max_den, seed);
            params.cap = cap;
            random_instance(&params).map_err(usage)?
        }
    };
    let text = serialize_instance(&inst);
    match args.out {
        Some(p) => write_file(&p, &text),
        None => Ok(out.write_all(text.as_bytes())?),
    }
}

/// Bad generator parameters are usage errors; anything else keeps its class.
fn usage(e: Error) -> Failure {
    match e {
        Error::InvalidParameter(m) => Failure::Usage(m),
        other => other.into(),
    }
}
