//! The `walk-oracle` command line.
//!
//! Exit codes: 0 on success, 2 on usage errors (bad flags, missing or
//! inconsistent parameters), 1 on runtime failures and failed checks.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::abelian::AbelianOracle;
use crate::adversary::{
    adaptive_attack, oblivious_attack, AttackConfig, AttackReport, AttackTarget, HonestWalker, Opaque,
    UniformCheater,
};
use crate::bench::{parse_sizes, run_bench, BenchConfig};
use crate::error::Error;
use crate::expander::ExpanderOracle;
use crate::gen::{
    cartesian_product, gen_alon_roichman, gen_cycle, gen_hypercube, gen_random_regular, tensor_product,
};
use crate::graph::{RegularGraph, Vertex};
use crate::group::{GroupElement, GroupSpec};
use crate::io::{parse_queries, read_graph, write_graph};
use crate::probe::ProbeSession;
use crate::product::{DenseOracle, PowerKind, PowerOracle};
use crate::rng::stream;
use crate::selftest::sampler_selftest;
use crate::stats::exact::exact_joint;
use crate::stats::matrix::PowerCache;
use crate::stats::{empirical_joint_l1, spectral};
use crate::walk::LocalWalk;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser, Debug)]
#[command(name = "walk-oracle", version, about = "Local access to random walks on regular graphs")]
pub struct Cli {
    /// Master seed of every random stream.
    #[arg(long, global = true, env = "WALK_ORACLE_SEED", default_value_t = 0)]
    pub seed: u64,

    /// Worker threads for independent trials; 0 picks the core count.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Generate a graph file.
    Gen(GenArgs),
    /// Answer a query script with one walk.
    Walk(WalkArgs),
    /// Compare an oracle's joint law with the exact one.
    Verify(VerifyArgs),
    /// Run the adaptive or oblivious attack.
    Attack(AttackArgs),
    /// Measure probe counts of the expander oracle against n.
    Bench(BenchArgs),
    /// Certify the multinomial and hypergeometric samplers.
    SampleSelftest(SelftestArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Regular,
    Cycle,
    Hypercube,
    Cayley,
    ArExpander,
}

#[derive(Args, Debug, Serialize)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 3)]
    pub d: usize,
    /// Hypercube dimension, or the rank m of (Z_2)^m for `ar-expander`.
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    pub moduli: Option<Vec<u64>>,
    #[arg(long)]
    pub gens: Option<String>,
    /// Generators per dimension for `ar-expander`.
    #[arg(long, default_value_t = 8)]
    pub multiplier: usize,
    #[arg(long)]
    pub out: PathBuf,
}

/// Where the walked graph comes from: a graph file or a Cayley group.
#[derive(Args, Debug, Clone, Serialize)]
pub struct GraphSource {
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// Moduli of Z_m1 x ... x Z_mr.
    #[arg(long, value_delimiter = ',')]
    pub moduli: Option<Vec<u64>>,
    /// Generators: a comma list for a single modulus, otherwise `;`-separated
    /// tuples such as `1,0,0;0,1,0;0,0,1`.
    #[arg(long)]
    pub gens: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algo {
    Expander,
    Abelian,
    Dense,
    TensorPower,
    CartesianPower,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct OracleArgs {
    #[arg(long, value_enum)]
    pub algo: Algo,
    /// Power of the base graph for the product algorithms.
    #[arg(long)]
    pub k: Option<u64>,
    /// Spectral bound for `expander`; measured when omitted.
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long, default_value_t = 1e-3)]
    pub eps: f64,
    #[arg(long, default_value_t = 1000)]
    pub budget: u64,
    /// Start vertex (of the base graph for powers).
    #[arg(long, default_value_t = 0)]
    pub start: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct WalkArgs {
    #[command(flatten)]
    pub source: GraphSource,
    #[command(flatten)]
    pub oracle: OracleArgs,
    #[arg(long)]
    pub queries: PathBuf,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub source: GraphSource,
    #[command(flatten)]
    pub oracle: OracleArgs,
    #[arg(long)]
    pub queries: PathBuf,
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    /// Pass when the estimated l1 is at most this plus the CI half-width.
    #[arg(long, default_value_t = 0.1)]
    pub threshold: f64,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Adaptive,
    Oblivious,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Target {
    Expander,
    Abelian,
    Dense,
    Cheater,
    Honest,
}

#[derive(Args, Debug, Serialize)]
pub struct AttackArgs {
    #[arg(long, value_enum)]
    pub mode: Mode,
    #[arg(long, value_enum)]
    pub target: Target,
    #[command(flatten)]
    pub source: GraphSource,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long, default_value_t = 1e-3)]
    pub eps: f64,
    /// Query budget of the target; defaults to everything the attack may ask.
    #[arg(long)]
    pub budget: Option<u64>,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct BenchArgs {
    #[arg(long, default_value = "expander")]
    pub algo: String,
    /// `a..b` for the powers of two in between, or a comma list.
    #[arg(long, default_value = "256..16384")]
    pub sizes: String,
    #[arg(long, default_value_t = 50)]
    pub trials: usize,
    #[arg(long, default_value_t = 3)]
    pub degree: usize,
    #[arg(long, default_value_t = 0.95)]
    pub lambda: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub eps: f64,
    #[arg(long, default_value_t = 1000)]
    pub budget: u64,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct SelftestArgs {
    #[arg(long, default_value_t = 1_000_000)]
    pub draws: usize,
    #[arg(long, default_value_t = 1e-6)]
    pub eps: f64,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Runtime(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(msg.into()))
}

/// Parses `args` (including the program name) and runs the subcommand.
/// Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    match pool.install(|| dispatch(&cli)) {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(CliError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            1
        }
    }
}

/// Entry point of the binary.
pub fn main() -> i32 {
    run(std::env::args_os())
}

fn dispatch(cli: &Cli) -> CliResult<i32> {
    match &cli.command {
        Command::Gen(a) => gen(a, cli.seed),
        Command::Walk(a) => walk(a, cli.seed),
        Command::Verify(a) => verify(a, cli.seed),
        Command::Attack(a) => attack(a, cli.seed),
        Command::Bench(a) => bench(a, cli.seed),
        Command::SampleSelftest(a) => selftest(a, cli.seed),
    }
}

fn meta(seed: u64, command: &str, config: &impl Serialize) -> Value {
    json!({ "version": VERSION, "seed": seed, "command": command, "config": config })
}

/// JSON lines: the metadata record first, then one record per item.
fn write_report(path: &Path, meta: &Value, records: &[Value]) -> CliResult<()> {
    let mut out = String::new();
    for r in std::iter::once(meta).chain(records) {
        out.push_str(&serde_json::to_string(r).map_err(Error::from)?);
        out.push('\n');
    }
    fs::write(path, out)?;
    Ok(())
}

pub fn parse_generators(text: &str, rank: usize) -> std::result::Result<Vec<GroupElement>, String> {
    let num = |s: &str| s.trim().parse::<u64>().map_err(|_| format!("bad generator component {s:?}"));
    if rank == 1 && !text.contains(';') {
        return text.split(',').map(|s| Ok(GroupElement(vec![num(s)?]))).collect();
    }
    text.split(';')
        .map(|g| {
            let parts = g.split(',').map(num).collect::<std::result::Result<Vec<_>, _>>()?;
            if parts.len() != rank {
                return Err(format!("generator {g:?} has {} components, expected {rank}", parts.len()));
            }
            Ok(GroupElement(parts))
        })
        .collect()
}

fn group_spec(moduli: &Option<Vec<u64>>, gens: &Option<String>) -> CliResult<Option<GroupSpec>> {
    match (moduli, gens) {
        (None, None) => Ok(None),
        (Some(m), Some(g)) => {
            let gens = parse_generators(g, m.len()).map_err(CliError::Usage)?;
            GroupSpec::new(m.clone(), gens).map(Some).map_err(|e| CliError::Usage(e.to_string()))
        }
        _ => usage("--moduli and --gens must be given together"),
    }
}

/// The graph an oracle walks on, plus what each algorithm needs up front.
struct Prepared {
    algo: Algo,
    args: OracleArgs,
    graph: Arc<RegularGraph>,
    spec: Option<GroupSpec>,
    lambda: f64,
    cache: Option<Arc<PowerCache>>,
}

impl Prepared {
    fn new(source: &GraphSource, args: &OracleArgs) -> CliResult<Self> {
        let spec = group_spec(&source.moduli, &source.gens)?;
        let graph = match (&source.graph, &spec) {
            (Some(_), Some(_)) => return usage("give either --graph or --moduli/--gens, not both"),
            (Some(p), None) => read_graph(p)?,
            (None, Some(s)) => RegularGraph::cayley(s.clone())?,
            (None, None) => return usage("a graph source is required: --graph or --moduli/--gens"),
        };
        if args.algo == Algo::Abelian && spec.is_none() {
            return usage("--algo abelian needs --moduli and --gens");
        }
        let is_power = matches!(args.algo, Algo::TensorPower | Algo::CartesianPower);
        if is_power && args.k.is_none() {
            return usage("power algorithms need --k");
        }
        if !is_power && args.k.is_some() {
            return usage("--k only applies to tensor-power and cartesian-power");
        }
        if args.start >= graph.n() {
            return usage(format!("--start {} out of range (n = {})", args.start, graph.n()));
        }
        let lambda = match (args.algo, args.lambda) {
            (Algo::Expander, Some(l)) => l,
            (Algo::Expander, None) => {
                let l = measured_lambda(&graph)?;
                eprintln!("note: no --lambda given, using measured bound {l:.6}");
                l
            }
            _ => 0.0,
        };
        let cache = match args.algo {
            Algo::Dense | Algo::TensorPower | Algo::CartesianPower => Some(DenseOracle::shared_cache(&graph)?),
            _ => None,
        };
        Ok(Self {
            algo: args.algo,
            args: args.clone(),
            graph: Arc::new(graph),
            spec,
            lambda,
            cache,
        })
    }

    fn oracle(&self, seed: u64, index: u64) -> crate::Result<Oracle> {
        let a = &self.args;
        let rng = stream(seed, index);
        Ok(match self.algo {
            Algo::Expander => {
                let session = ProbeSession::new(self.graph.clone(), rng);
                Oracle::Expander(ExpanderOracle::new(session, self.lambda, a.eps, a.budget, a.start)?)
            }
            Algo::Abelian => {
                let spec = self.spec.clone().expect("checked in new");
                let start = spec.decode(a.start as u64);
                Oracle::Abelian(AbelianOracle::new(spec, a.eps, a.budget, start, rng)?)
            }
            Algo::Dense => Oracle::Dense(DenseOracle::new(
                self.graph.clone(),
                self.cache.clone().expect("built in new"),
                a.eps,
                a.budget,
                a.start,
                rng,
            )?),
            Algo::TensorPower | Algo::CartesianPower => {
                let kind = if self.algo == Algo::TensorPower { PowerKind::Tensor } else { PowerKind::Cartesian };
                let mut rng = rng;
                Oracle::Power(PowerOracle::build_with_cache(
                    self.graph.clone(),
                    self.cache.clone().expect("built in new"),
                    a.k.expect("checked in new"),
                    kind,
                    a.eps,
                    a.budget,
                    a.start,
                    rng.random(),
                )?)
            }
        })
    }

    /// The explicit graph the oracle's answers live on, and its start id.
    fn reference(&self) -> crate::Result<(RegularGraph, Vertex)> {
        let base = self.graph.materialize();
        match self.algo {
            Algo::TensorPower | Algo::CartesianPower => {
                let k = self.args.k.expect("checked in new");
                let mut p = base.clone();
                let mut start = self.args.start;
                for _ in 1..k {
                    p = if self.algo == Algo::TensorPower {
                        tensor_product(&p, &base)?
                    } else {
                        cartesian_product(&p, &base)?
                    };
                    start = start * base.n() + self.args.start;
                }
                Ok((p, start))
            }
            _ => Ok((base, self.args.start)),
        }
    }
}

enum Oracle {
    Expander(ExpanderOracle),
    Abelian(AbelianOracle),
    Dense(DenseOracle),
    Power(PowerOracle),
}

impl LocalWalk for Oracle {
    fn position(&mut self, t: u64) -> crate::Result<Vertex> {
        match self {
            Oracle::Expander(o) => o.position(t),
            Oracle::Abelian(o) => o.position(t),
            Oracle::Dense(o) => o.position(t),
            Oracle::Power(o) => o.position(t),
        }
    }

    fn num_vertices(&self) -> usize {
        match self {
            Oracle::Expander(o) => o.num_vertices(),
            Oracle::Abelian(o) => o.num_vertices(),
            Oracle::Dense(o) => o.num_vertices(),
            Oracle::Power(o) => o.num_vertices(),
        }
    }
}

fn join(xs: impl IntoIterator<Item = impl ToString>) -> String {
    xs.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

impl Oracle {
    /// Group elements and power tuples print as comma-separated coordinates.
    fn render(&mut self, t: u64) -> crate::Result<String> {
        Ok(match self {
            Oracle::Abelian(o) => join(o.element(t)?.0),
            Oracle::Power(o) => join(o.tuple(t)?),
            other => other.position(t)?.to_string(),
        })
    }
}

/// Spectral bound for an expander run when the user gave none. Bipartite or
/// disconnected graphs come out at 1 up to rounding and are refused.
fn measured_lambda(g: &RegularGraph) -> CliResult<f64> {
    let est = spectral::lambda(g);
    if est.value >= 1.0 - 1e-9 {
        return Err(CliError::Runtime(format!(
            "measured spectral bound {:.9} is 1: the graph is not an expander",
            est.value
        )));
    }
    Ok(est.value)
}

fn read_queries(path: &Path) -> CliResult<Vec<u64>> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Runtime(format!("{}: {e}", path.display())))?;
    Ok(parse_queries(&text)?)
}

fn gen(a: &GenArgs, seed: u64) -> CliResult<i32> {
    let mut rng = stream(seed, 0);
    let need = |x: Option<usize>, flag: &str| x.ok_or_else(|| CliError::Usage(format!("--family needs {flag}")));
    let mut extra = json!({});
    let graph = match a.family {
        Family::Regular => {
            let g = gen_random_regular(need(a.n, "--n")?, a.d, &mut rng)?;
            extra = json!({ "rejections": g.rejections, "warnings": g.warnings });
            g.graph
        }
        Family::Cycle => gen_cycle(need(a.n, "--n")?)?,
        Family::Hypercube => gen_hypercube(need(a.dim, "--dim")?)?,
        Family::Cayley => match group_spec(&a.moduli, &a.gens)? {
            Some(spec) => RegularGraph::cayley(spec)?,
            None => return usage("--family cayley needs --moduli and --gens"),
        },
        Family::ArExpander => {
            let ar = gen_alon_roichman(need(a.dim, "--dim")?, a.multiplier, &mut rng)?;
            extra = json!({ "lambda": ar.lambda, "attempts": ar.attempts });
            ar.graph
        }
    };
    write_graph(&graph, &a.out)?;
    let mut sidecar = meta(seed, "gen", a);
    sidecar["graph"] = json!({ "n": graph.n(), "d": graph.d(), "orientation": graph.orientation().as_str() });
    sidecar["result"] = extra;
    let mut path = a.out.as_os_str().to_owned();
    path.push(".meta.json");
    fs::write(PathBuf::from(path), serde_json::to_string_pretty(&sidecar).map_err(Error::from)? + "\n")?;
    println!("wrote {} ({} vertices, degree {})", a.out.display(), graph.n(), graph.d());
    Ok(0)
}

fn walk(a: &WalkArgs, seed: u64) -> CliResult<i32> {
    let queries = read_queries(&a.queries)?;
    let prepared = Prepared::new(&a.source, &a.oracle)?;
    let mut oracle = prepared.oracle(seed, 0)?;
    let mut out = String::new();
    let config = serde_json::to_string(a).map_err(Error::from)?;
    let _ = writeln!(out, "# walk-oracle {VERSION} seed={seed} config={config}");
    for &t in &queries {
        let v = oracle.render(t)?;
        let _ = writeln!(out, "{t} {v}");
    }
    match &a.out {
        Some(p) => fs::write(p, out)?,
        None => std::io::stdout().lock().write_all(out.as_bytes())?,
    }
    Ok(0)
}

fn verify(a: &VerifyArgs, seed: u64) -> CliResult<i32> {
    let queries = read_queries(&a.queries)?;
    if queries.is_empty() {
        return usage("query script is empty");
    }
    let prepared = Prepared::new(&a.source, &a.oracle)?;
    let (reference_graph, start) = prepared.reference()?;
    let mut times = queries.clone();
    times.sort_unstable();
    times.dedup();
    let reference = exact_joint(&reference_graph, start, &times)?;
    let est = empirical_joint_l1(|i| prepared.oracle(seed, i), &queries, a.samples, &reference, seed)?;
    let pass = est.l1 <= a.threshold + est.ci_half_width;
    println!(
        "l1 = {:.5}  ci = +/-{:.5}  outside support = {}  threshold = {}  {}",
        est.l1,
        est.ci_half_width,
        est.outside_support,
        a.threshold,
        if pass { "PASS" } else { "FAIL" }
    );
    if let Some(p) = &a.report {
        let record = json!({ "queries": queries, "estimate": est, "pass": pass });
        write_report(p, &meta(seed, "verify", a), &[record])?;
    }
    Ok(if pass { 0 } else { 1 })
}

fn run_attack<T: AttackTarget>(mut target: T, graph: &RegularGraph, mode: Mode, cfg: &AttackConfig) -> AttackReport {
    match mode {
        Mode::Adaptive => adaptive_attack(&mut target, graph, cfg),
        Mode::Oblivious => oblivious_attack(&mut target, graph, cfg),
    }
}

fn attack(a: &AttackArgs, seed: u64) -> CliResult<i32> {
    let spec = group_spec(&a.source.moduli, &a.source.gens)?;
    let graph = Arc::new(match (&a.source.graph, &spec) {
        (Some(_), Some(_)) => return usage("give either --graph or --moduli/--gens, not both"),
        (Some(p), None) => read_graph(p)?,
        (None, Some(s)) => RegularGraph::cayley(s.clone())?,
        (None, None) => return usage("a graph source is required: --graph or --moduli/--gens"),
    });
    if a.target == Target::Abelian && spec.is_none() {
        return usage("--target abelian needs --moduli and --gens");
    }
    let cfg = AttackConfig::default();
    let n = graph.n();
    let max_time = cfg.walk_len(n).max(cfg.oblivious_e(n));
    let budget = a.budget.unwrap_or(match a.mode {
        Mode::Adaptive => cfg.query_cap(n) + 1,
        Mode::Oblivious => cfg.oblivious_e(n) + 1,
    });
    let lambda = match (a.target, a.lambda) {
        (Target::Expander, None) => measured_lambda(&graph)?,
        (_, l) => l.unwrap_or(0.0),
    };
    let cache = match a.target {
        Target::Dense => Some(DenseOracle::shared_cache(&graph)?),
        _ => None,
    };
    let reports: Vec<AttackReport> = (0..a.trials as u64)
        .into_par_iter()
        .map(|i| {
            let session = ProbeSession::new(graph.clone(), stream(seed, i));
            Ok(match a.target {
                Target::Cheater => run_attack(UniformCheater::new(session, 0), &graph, a.mode, &cfg),
                Target::Honest => run_attack(HonestWalker::new(session, 0, max_time), &graph, a.mode, &cfg),
                Target::Expander => run_attack(
                    ExpanderOracle::new(session, lambda, a.eps, budget, 0)?,
                    &graph,
                    a.mode,
                    &cfg,
                ),
                Target::Abelian => {
                    let spec = spec.clone().expect("checked above");
                    let start = spec.identity();
                    let o = AbelianOracle::new(spec, a.eps, budget, start, stream(seed, i))?;
                    run_attack(Opaque(o), &graph, a.mode, &cfg)
                }
                Target::Dense => {
                    let c = cache.clone().expect("built above");
                    let o = DenseOracle::new(graph.clone(), c, a.eps, budget, 0, stream(seed, i))?;
                    run_attack(Opaque(o), &graph, a.mode, &cfg)
                }
            })
        })
        .collect::<crate::Result<_>>()?;
    let detections = reports.iter().filter(|r| r.verdict).count();
    let frequency = detections as f64 / a.trials.max(1) as f64;
    println!(
        "{} detections in {} trials (frequency {:.3})",
        detections, a.trials, frequency
    );
    if let Some(p) = &a.report {
        let mut records: Vec<Value> = reports
            .iter()
            .enumerate()
            .map(|(i, r)| json!({ "trial": i, "report": r }))
            .collect();
        records.push(json!({ "trials": a.trials, "detections": detections, "frequency": frequency }));
        let mut m = meta(seed, "attack", a);
        m["attack_config"] = json!(cfg);
        write_report(p, &m, &records)?;
    }
    Ok(0)
}

fn bench(a: &BenchArgs, seed: u64) -> CliResult<i32> {
    if a.algo != "expander" {
        return usage(format!("bench supports --algo expander only, got {:?}", a.algo));
    }
    let sizes = parse_sizes(&a.sizes).map_err(|e| CliError::Usage(e.to_string()))?;
    let cfg = BenchConfig {
        sizes,
        trials: a.trials,
        degree: a.degree,
        lambda: a.lambda,
        eps: a.eps,
        budget: a.budget,
        seed,
    };
    let report = run_bench(&cfg)?;
    for p in &report.points {
        println!(
            "n = {:>6}  k = {:>4}  probes/query = {:>9.1}  (min {:.1}, max {:.1})",
            p.n, p.k, p.mean_probes_per_query, p.min_probes_per_query, p.max_probes_per_query
        );
    }
    println!("fitted exponent = {:.4}", report.slope);
    if let Some(p) = &a.report {
        let mut records: Vec<Value> = report.points.iter().map(|p| json!(p)).collect();
        records.push(json!({ "slope": report.slope, "intercept": report.intercept }));
        write_report(p, &meta(seed, "bench", a), &records)?;
    }
    Ok(0)
}

fn selftest(a: &SelftestArgs, seed: u64) -> CliResult<i32> {
    let report = sampler_selftest(a.draws, a.eps, seed)?;
    for c in &report.cases {
        println!(
            "{:<18} size {:>2} params {:<14} l1 {:.5} <= {:.5}  {}",
            c.kind,
            c.size,
            join(&c.params),
            c.l1,
            c.threshold,
            if c.pass { "ok" } else { "FAIL" }
        );
    }
    let c = &report.cost;
    println!(
        "cost: t = {} at {:.0} ns, t = {} at {:.0} ns, ratio {:.2} <= {:.0}  {}",
        c.small_t,
        c.small_ns_per_draw,
        c.large_t,
        c.large_ns_per_draw,
        c.ratio,
        c.bound,
        if c.pass { "ok" } else { "FAIL" }
    );
    if let Some(p) = &a.report {
        let mut records: Vec<Value> = report.cases.iter().map(|c| json!(c)).collect();
        records.push(json!({ "cost": report.cost, "pass": report.pass }));
        write_report(p, &meta(seed, "sample-selftest", a), &records)?;
    }
    Ok(if report.pass { 0 } else { 1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_lists() {
        assert_eq!(
            parse_generators("1,15", 1).unwrap(),
            vec![GroupElement(vec![1]), GroupElement(vec![15])]
        );
        assert_eq!(
            parse_generators("1,0;0,1", 2).unwrap(),
            vec![GroupElement(vec![1, 0]), GroupElement(vec![0, 1])]
        );
        assert!(parse_generators("1,0,0", 2).is_err());
        assert!(parse_generators("x", 1).is_err());
    }

    #[test]
    fn usage_errors_exit_with_two() {
        assert_eq!(run(["walk-oracle", "frobnicate"]), 2);
        assert_eq!(run(["walk-oracle", "gen", "--family", "cycle", "--out", "/nonexistent/x"]), 2);
        assert_eq!(run(["walk-oracle", "bench", "--algo", "dense"]), 2);
    }

    #[test]
    fn runtime_errors_exit_with_one() {
        let code = run([
            "walk-oracle",
            "walk",
            "--algo",
            "dense",
            "--graph",
            "/nonexistent/g",
            "--queries",
            "/nonexistent/q",
        ]);
        assert_eq!(code, 1);
    }
}
