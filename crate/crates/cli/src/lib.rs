//! The `fairdiv` command line. `run` takes the argument list and output
//! streams so it can be driven in-process by tests.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::Rng;

use fairdiv_core::allocate::{
    ef1_fpo_two_agents, ef1_identical, round_robin, welfare_max_allocation, AgentOrder,
};
use fairdiv_core::hardness::{check_equivalence, format_graph, parse_graph, random_bounded_graph, reduce_lfmm_to_rr};
use fairdiv_core::matching::{ef1_po_alpha, ef1_po_restricted, Alpha};
use fairdiv_core::model::generate::rng;
use fairdiv_core::model::io::{
    format_allocation, format_instance, format_order, format_payments, parse_allocation, parse_constraints,
    parse_instance, parse_order,
};
use fairdiv_core::model::{
    brute_force_max_welfare, brute_force_min_payments, brute_force_po_check, random_instance, InstanceParams,
};
use fairdiv_core::pram::{
    apsp_minplus, bitonic_sort, par_reduce, transitive_closure, with_workers, BoolMatrix, CostMeter, Dist,
    DistMatrix, Sum,
};
use fairdiv_core::subsidy::{constrained_payments_with, PaymentOutcome, SubsidyConfig};
use fairdiv_core::verify::{check, Property};
use fairdiv_core::{Allocation, Instance, PaymentConstraint, ValuationClass};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "fairdiv", version, about = "Fair division of indivisible goods")]
pub struct Cli {
    /// Worker threads for the parallel primitives. Never changes output.
    #[arg(long, global = true, env = "FAIRDIV_THREADS", default_value_t = 1)]
    pub threads: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check EF, EF1 or EFX of an allocation.
    Verify {
        #[command(flatten)]
        input: InstanceAllocation,
        #[arg(long, value_parser = parse_property)]
        property: Property,
    },
    /// Compute an allocation.
    Allocate {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_enum)]
        method: Method,
        /// Agent order file for rr and identical (default 1..n).
        #[arg(long)]
        order: Option<PathBuf>,
        /// Round values to powers of 1/alpha first (matching only), e.g. 1/2.
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Minimal envy-eliminating payments, optionally under constraints.
    Subsidize {
        #[command(flatten)]
        input: InstanceAllocation,
        #[arg(long)]
        constraints: Option<PathBuf>,
        #[command(flatten)]
        caps: Caps,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Turn a bipartite graph into a Round-Robin instance and agent order.
    ReduceLfmm {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        instance_out: Option<PathBuf>,
        #[arg(long)]
        order_out: Option<PathBuf>,
    },
    /// Compare greedy matching with first-round Round-Robin picks.
    CheckLfmm {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Write a seeded random instance or graph.
    Gen(GenArgs),
    /// Measure depth, work and wall time of a parallel primitive.
    Bench {
        #[arg(long, value_enum)]
        primitive: Primitive,
        /// Comma-separated sizes.
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Brute-force counterparts for cross-checking small inputs.
    Oracle {
        #[arg(long, value_enum)]
        task: OracleTask,
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        allocation: Option<PathBuf>,
        #[arg(long)]
        constraints: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
pub struct InstanceAllocation {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long)]
    pub allocation: PathBuf,
}

#[derive(Args, Debug)]
pub struct Caps {
    /// Grids up to this many vertices use an explicit transitive closure.
    #[arg(long, env = "FAIRDIV_CLOSURE_CAP", default_value_t = SubsidyConfig::default().closure_cap)]
    pub closure_cap: usize,
    /// Largest payment grid accepted.
    #[arg(long, env = "FAIRDIV_GRID_CAP", default_value_t = SubsidyConfig::default().grid_cap)]
    pub grid_cap: usize,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(long, value_enum, default_value_t = GenKind::Instance)]
    pub kind: GenKind,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Agents (instance) or left vertices (graph).
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    /// Items (instance) or right vertices (graph).
    #[arg(long, default_value_t = 5)]
    pub m: usize,
    #[arg(long, default_value = "additive", value_parser = parse_class)]
    pub class: ValuationClass,
    #[arg(long, default_value_t = 0)]
    pub min: u64,
    #[arg(long, default_value_t = 10)]
    pub max: u64,
    #[arg(long, default_value_t = 1.0)]
    pub density: f64,
    /// Distinct inherent values (restricted additive).
    #[arg(long)]
    pub distinct: Option<usize>,
    /// Degree bound (graph).
    #[arg(long, default_value_t = 3)]
    pub bound: usize,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Rr,
    TwoAgent,
    Identical,
    Matching,
    WelfareMax,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    Instance,
    Graph,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Primitive {
    Reduce,
    Sort,
    Apsp,
    Closure,
}

impl fmt::Display for Primitive {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.to_possible_value().expect("no skipped variants").get_name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OracleTask {
    /// Pareto optimality of the allocation.
    Po,
    /// Maximum utilitarian welfare.
    Welfare,
    /// Minimal payments under optional constraints.
    Payments,
}

fn parse_property(s: &str) -> Result<Property, String> {
    s.parse()
}

fn parse_class(s: &str) -> Result<ValuationClass, String> {
    s.parse()
}

/// A failure with the exit code it maps to.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

impl From<fairdiv_core::Error> for Failure {
    fn from(e: fairdiv_core::Error) -> Self {
        Failure::input(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::input(format!("i/o error: {e}"))
    }
}

type Outcome = Result<i32, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))
}

fn load<T>(path: &Path, parse: impl FnOnce(&str) -> fairdiv_core::Result<T>) -> Result<T, Failure> {
    parse(&read(path)?).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn emit(text: &str, output: Option<&Path>, stdout: &mut dyn Write) -> Result<(), Failure> {
    match output {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display()))),
        None => Ok(stdout.write_all(text.as_bytes())?),
    }
}

/// Parse `args` (including the program name) and execute. Returns the exit
/// code: 0 on success, 1 when a checked property fails or no payment vector
/// exists, 2 on bad input.
pub fn run<I, S>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    if cli.threads == 0 {
        let _ = writeln!(stderr, "error: --threads must be at least 1");
        return EXIT_INPUT;
    }
    let threads = cli.threads;
    // Output is buffered so the worker pool only touches owned data.
    let result = with_workers(threads, move || {
        let mut out = Vec::new();
        let code = dispatch(cli.command, &mut out);
        (code, out)
    });
    let (code, out) = result;
    let _ = stdout.write_all(&out);
    match code {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(command: Command, stdout: &mut dyn Write) -> Outcome {
    match command {
        Command::Verify { input, property } => verify(&input, property, stdout),
        Command::Allocate {
            instance,
            method,
            order,
            alpha,
            output,
        } => allocate(&instance, method, order.as_deref(), alpha.as_deref(), output.as_deref(), stdout),
        Command::Subsidize {
            input,
            constraints,
            caps,
            output,
        } => subsidize(&input, constraints.as_deref(), &caps, output.as_deref(), stdout),
        Command::ReduceLfmm {
            graph,
            instance_out,
            order_out,
        } => reduce(&graph, instance_out.as_deref(), order_out.as_deref(), stdout),
        Command::CheckLfmm { graph } => {
            let g = load(&graph, parse_graph)?;
            if check_equivalence(&g)? {
                writeln!(stdout, "EQUIVALENT")?;
                Ok(EXIT_OK)
            } else {
                writeln!(stdout, "MISMATCH")?;
                Ok(EXIT_VIOLATION)
            }
        }
        Command::Gen(args) => generate(&args, stdout),
        Command::Bench { primitive, sizes, seed } => bench(primitive, &sizes, seed, stdout),
        Command::Oracle {
            task,
            instance,
            allocation,
            constraints,
        } => oracle(task, &instance, allocation.as_deref(), constraints.as_deref(), stdout),
    }
}

fn load_pair(input: &InstanceAllocation) -> Result<(Instance, Allocation), Failure> {
    let inst = load(&input.instance, parse_instance)?;
    let alloc = load(&input.allocation, |t| parse_allocation(t, &inst))?;
    Ok((inst, alloc))
}

fn verify(input: &InstanceAllocation, property: Property, stdout: &mut dyn Write) -> Outcome {
    let (inst, alloc) = load_pair(input)?;
    let report = check(&inst, &alloc, property)?;
    match report.witness {
        None => {
            writeln!(stdout, "PASS")?;
            Ok(EXIT_OK)
        }
        Some(w) => {
            write!(stdout, "FAIL {property}: agent {} envies agent {}", w.envier + 1, w.envied + 1)?;
            if !w.items.is_empty() {
                let items: Vec<String> = w.items.iter().map(|g| (g + 1).to_string()).collect();
                write!(stdout, " (items [{}])", items.join(","))?;
            }
            writeln!(stdout)?;
            Ok(EXIT_VIOLATION)
        }
    }
}

fn allocate(
    instance: &Path,
    method: Method,
    order: Option<&Path>,
    alpha: Option<&str>,
    output: Option<&Path>,
    stdout: &mut dyn Write,
) -> Outcome {
    let inst = load(instance, parse_instance)?;
    if alpha.is_some() && method != Method::Matching {
        return Err(Failure::input("--alpha only applies to --method matching"));
    }
    if order.is_some() && !matches!(method, Method::Rr | Method::Identical) {
        return Err(Failure::input("--order only applies to --method rr and identical"));
    }
    let order = match order {
        Some(path) => AgentOrder::new(load(path, parse_order)?, inst.n())?,
        None => AgentOrder::identity(inst.n()),
    };
    let alloc = match method {
        Method::Rr => round_robin(&inst, &order)?,
        Method::TwoAgent => ef1_fpo_two_agents(&inst)?,
        Method::Identical => ef1_identical(&inst, &order)?,
        Method::WelfareMax => welfare_max_allocation(&inst)?,
        Method::Matching => match alpha {
            Some(a) => ef1_po_alpha(&inst, a.parse::<Alpha>()?)?,
            None => ef1_po_restricted(&inst)?,
        },
    };
    emit(&format_allocation(&alloc), output, stdout)?;
    Ok(EXIT_OK)
}

fn load_constraints(path: Option<&Path>, inst: &Instance) -> Result<Vec<PaymentConstraint>, Failure> {
    match path {
        Some(p) => load(p, |t| parse_constraints(t, inst)),
        None => Ok(Vec::new()),
    }
}

fn subsidize(
    input: &InstanceAllocation,
    constraints: Option<&Path>,
    caps: &Caps,
    output: Option<&Path>,
    stdout: &mut dyn Write,
) -> Outcome {
    let (inst, alloc) = load_pair(input)?;
    let constraints = load_constraints(constraints, &inst)?;
    let config = SubsidyConfig {
        closure_cap: caps.closure_cap,
        grid_cap: caps.grid_cap,
    };
    let outcome = constrained_payments_with(&inst, &alloc, &constraints, &config).map_err(|e| match e {
        fairdiv_core::Error::GridTooLarge { .. } => {
            Failure::input(format!("{e}; rescale values or raise --grid-cap / FAIRDIV_GRID_CAP"))
        }
        other => other.into(),
    })?;
    write_payments(&outcome, output, stdout)
}

fn write_payments(outcome: &PaymentOutcome, output: Option<&Path>, stdout: &mut dyn Write) -> Outcome {
    match outcome {
        PaymentOutcome::Satisfied(q) => {
            emit(&format_payments(q), output, stdout)?;
            Ok(EXIT_OK)
        }
        PaymentOutcome::NoSatisfyingVector => {
            emit("NO_SATISFYING_VECTOR\n", output, stdout)?;
            Ok(EXIT_VIOLATION)
        }
    }
}

fn reduce(graph: &Path, instance_out: Option<&Path>, order_out: Option<&Path>, stdout: &mut dyn Write) -> Outcome {
    let g = load(graph, parse_graph)?;
    let (inst, order) = reduce_lfmm_to_rr(&g)?;
    emit(&format_instance(&inst), instance_out, stdout)?;
    emit(&format_order(order.as_slice()), order_out, stdout)?;
    Ok(EXIT_OK)
}

fn generate(args: &GenArgs, stdout: &mut dyn Write) -> Outcome {
    let text = match args.kind {
        GenKind::Instance => {
            let mut params = InstanceParams::new(args.n, args.m, args.class)
                .value_range(args.min, args.max)
                .density(args.density);
            if let Some(t) = args.distinct {
                params = params.distinct_values(t);
            }
            format_instance(&random_instance(&params, args.seed)?)
        }
        GenKind::Graph => format_graph(&random_bounded_graph(args.n, args.m, args.bound, args.density, args.seed)?),
    };
    emit(&text, args.output.as_deref(), stdout)?;
    Ok(EXIT_OK)
}

fn bench(primitive: Primitive, sizes: &[usize], seed: u64, stdout: &mut dyn Write) -> Outcome {
    let mut table = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| Failure::input(format!("csv: {e}"));
    table
        .write_record(["primitive", "size", "depth", "work", "peak_width", "wall_ms"])
        .map_err(csv_err)?;
    for &size in sizes {
        let mut rng = rng(seed ^ size as u64);
        let start = Instant::now();
        let cost: CostMeter = match primitive {
            Primitive::Reduce => {
                let xs: Vec<u64> = (0..size).map(|_| rng.gen_range(0..1000u64)).collect();
                par_reduce(&xs, &Sum).cost
            }
            Primitive::Sort => {
                let xs: Vec<u64> = (0..size).map(|_| rng.gen::<u64>()).collect();
                bitonic_sort(&xs).cost
            }
            Primitive::Apsp => {
                let rows = (0..size)
                    .map(|_| (0..size).map(|_| Dist::Finite(rng.gen_range(0..100))).collect())
                    .collect();
                apsp_minplus(&DistMatrix::from_rows(rows)?)?.cost
            }
            Primitive::Closure => {
                let p = 2.0 / size.max(1) as f64;
                let rows = (0..size)
                    .map(|_| (0..size).map(|_| rng.gen_bool(p.min(1.0))).collect())
                    .collect();
                transitive_closure(&BoolMatrix::from_rows(rows)?).cost
            }
        };
        let wall_ms = start.elapsed().as_secs_f64() * 1000.0;
        table
            .write_record([
                primitive.to_string(),
                size.to_string(),
                cost.depth.to_string(),
                cost.work.to_string(),
                cost.peak_width.to_string(),
                format!("{wall_ms:.3}"),
            ])
            .map_err(csv_err)?;
    }
    let bytes = table.into_inner().map_err(|e| Failure::input(format!("csv: {e}")))?;
    stdout.write_all(&bytes)?;
    Ok(EXIT_OK)
}

fn oracle(
    task: OracleTask,
    instance: &Path,
    allocation: Option<&Path>,
    constraints: Option<&Path>,
    stdout: &mut dyn Write,
) -> Outcome {
    let inst = load(instance, parse_instance)?;
    let need_alloc = || -> Result<Allocation, Failure> {
        let path = allocation.ok_or_else(|| Failure::input("this oracle task needs --allocation"))?;
        load(path, |t| parse_allocation(t, &inst))
    };
    match task {
        OracleTask::Welfare => {
            writeln!(stdout, "{}", brute_force_max_welfare(&inst)?)?;
            Ok(EXIT_OK)
        }
        OracleTask::Po => {
            if brute_force_po_check(&inst, &need_alloc()?)? {
                writeln!(stdout, "PO")?;
                Ok(EXIT_OK)
            } else {
                writeln!(stdout, "NOT_PO")?;
                Ok(EXIT_VIOLATION)
            }
        }
        OracleTask::Payments => {
            let alloc = need_alloc()?;
            let constraints = load_constraints(constraints, &inst)?;
            let outcome = match brute_force_min_payments(&inst, &alloc, &constraints, None)? {
                Some(q) => PaymentOutcome::Satisfied(q),
                None => PaymentOutcome::NoSatisfyingVector,
            };
            write_payments(&outcome, None, stdout)
        }
    }
}
