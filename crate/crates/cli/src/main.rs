use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use bsrec::bench::{
    run_cacrec_quality, run_crec_scaling, run_greedy_scaling, CrecScalingConfig,
    GreedyScalingConfig, IlpArmConfig, QualityConfig,
};
use bsrec::cacrec_greedy::conflict_degree;
use bsrec::cacrec_sdp::{DEFAULT_RESTARTS, DEFAULT_SDP_CAP};
use bsrec::genlab::{generate, GenConfig, ThresholdMode, WeightMode};
use bsrec::lp::LpError;
use bsrec::model::io::{
    import_csv, read_instance, read_instance_unchecked, read_solution, write_instance,
    write_solution, CsvDefaults, SolutionDoc,
};
use bsrec::oracle::MAX_ORACLE_EDGES;
use bsrec::reductions::{read_rmis, rmis_to_cacrec};
use bsrec::{check_feasible, solve, validate, Error, Instance, Method, SolveOptions, SolveReport};

const OUT_DIR_ENV: &str = "BSREC_OUT_DIR";

const EXIT_INVALID: u8 = 1;
const EXIT_LIMIT: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

/// Buyer-to-seller recommendation under degree and conflict constraints.
#[derive(Parser)]
#[command(name = "bsrec", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic instance.
    Generate(GenerateArgs),
    /// Check an instance, and optionally a solution against it.
    Validate(ValidateArgs),
    /// Run one method on an instance.
    Solve(SolveArgs),
    /// Reduce another problem to an instance.
    #[command(subcommand)]
    Reduce(ReduceCommand),
    /// Run an experiment and write its CSV tables.
    #[command(subcommand)]
    Bench(BenchCommand),
    /// Run several methods on one instance and print them side by side.
    Compare(CompareArgs),
    /// Build an instance from edge and conflict CSV files.
    Import(ImportArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Weights {
    Money,
    Rank,
}

impl From<Weights> for WeightMode {
    fn from(w: Weights) -> Self {
        match w {
            Weights::Money => WeightMode::Money,
            Weights::Rank => WeightMode::Rank,
        }
    }
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long)]
    buyers: usize,
    #[arg(long)]
    sellers: usize,
    #[arg(long)]
    seed: u64,
    /// Fraction of buyers in each seller's window.
    #[arg(long, default_value_t = 0.005)]
    density: f64,
    /// Buyers per seller; overrides --density.
    #[arg(long)]
    window: Option<usize>,
    #[arg(long)]
    stride: Option<usize>,
    #[arg(long, default_value_t = 0.5)]
    degree_ratio: f64,
    #[arg(long, default_value_t = 0.0)]
    conflict_ratio: f64,
    /// Constant per-seller conflict threshold.
    #[arg(long, conflicts_with = "threshold_fraction")]
    threshold: Option<u32>,
    /// Threshold as a fraction of each seller's incident conflict pairs.
    #[arg(long)]
    threshold_fraction: Option<f64>,
    #[arg(long, value_enum, default_value_t = Weights::Money)]
    weights: Weights,
    /// Numerator of rank weights; defaults to buyers + sellers.
    #[arg(long)]
    total_nodes: Option<usize>,
    /// Output directory; receives instance.json and generation.json.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ValidateArgs {
    instance: PathBuf,
    #[arg(long)]
    solution: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct SolverFlags {
    #[arg(long)]
    node_limit: Option<u64>,
    /// Seconds.
    #[arg(long)]
    time_limit: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_RESTARTS)]
    restarts: usize,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_SDP_CAP)]
    sdp_cap: usize,
}

impl SolverFlags {
    fn options(&self) -> Result<SolveOptions, Error> {
        let time_limit = match self.time_limit {
            Some(s) if !(s.is_finite() && s >= 0.0) => {
                return Err(Error::Config(format!("invalid time limit {s}")))
            }
            Some(s) => Some(Duration::from_secs_f64(s)),
            None => None,
        };
        Ok(SolveOptions {
            node_limit: self.node_limit,
            time_limit,
            restarts: self.restarts,
            seed: self.seed,
            sdp_cap: self.sdp_cap,
            ..SolveOptions::default()
        })
    }
}

#[derive(Args)]
struct SolveArgs {
    instance: PathBuf,
    #[arg(long)]
    method: Method,
    #[command(flatten)]
    flags: SolverFlags,
    /// Output directory for the solution and report files.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Store the wall-clock time in the written files.
    #[arg(long)]
    record_elapsed: bool,
}

#[derive(Subcommand)]
enum ReduceCommand {
    /// Revenue-maximizing interval scheduling to an instance.
    Rmis {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct BenchCommon {
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Subcommand)]
enum BenchCommand {
    CrecScaling {
        #[command(flatten)]
        common: BenchCommon,
        #[arg(long)]
        buyers: Option<usize>,
        #[arg(long)]
        sellers: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        densities: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',')]
        ratios: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',')]
        fractions: Option<Vec<f64>>,
        #[arg(long)]
        runs: Option<usize>,
    },
    CacrecQuality {
        #[command(flatten)]
        common: BenchCommon,
        #[arg(long, value_delimiter = ',')]
        conflict_ratios: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',')]
        degree_ratios: Option<Vec<f64>>,
        #[arg(long, value_enum, value_delimiter = ',')]
        weights: Option<Vec<Weights>>,
        #[arg(long)]
        restarts: Option<usize>,
        /// Skip the ILP-scale table.
        #[arg(long)]
        no_ilp: bool,
        #[arg(long)]
        ilp_buyers: Option<usize>,
        #[arg(long)]
        ilp_sellers: Option<usize>,
        #[arg(long)]
        ilp_window: Option<usize>,
    },
    GreedyScaling {
        #[command(flatten)]
        common: BenchCommon,
        #[arg(long)]
        buyers: Option<usize>,
        #[arg(long)]
        sellers: Option<usize>,
        #[arg(long)]
        window: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        fractions: Option<Vec<f64>>,
        #[arg(long)]
        runs: Option<usize>,
    },
}

#[derive(Args)]
struct CompareArgs {
    instance: PathBuf,
    /// Defaults to greedy, lp-round and ilp, plus sdp when seeded and small
    /// enough, plus oracle on tiny instances.
    #[arg(long, value_delimiter = ',')]
    methods: Option<Vec<Method>>,
    #[command(flatten)]
    flags: SolverFlags,
    /// Output directory for compare.csv.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ImportArgs {
    #[arg(long)]
    edges: PathBuf,
    #[arg(long)]
    conflicts: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    buyer_bound: u32,
    #[arg(long, default_value_t = 1)]
    seller_bound: u32,
    #[arg(long, default_value_t = 0)]
    threshold: u32,
    #[arg(long)]
    buyers: Option<usize>,
    #[arg(long)]
    sellers: Option<usize>,
    #[arg(long)]
    out: PathBuf,
}

enum Failure {
    Error(Error),
    /// Message and exit code.
    Exit(String, u8),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

type CmdResult = Result<u8, Failure>;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Lp(LpError::IterationLimit(_)) => EXIT_LIMIT,
        Error::Lp(_) | Error::NotPsd(_) => EXIT_INTERNAL,
        _ => EXIT_INVALID,
    }
}

fn out_dir(flag: Option<PathBuf>) -> Option<PathBuf> {
    flag.or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
}

fn require_out_dir(flag: Option<PathBuf>) -> Result<PathBuf, Failure> {
    let dir = out_dir(flag).ok_or_else(|| {
        Failure::Exit(format!("no output directory: pass --out or set {OUT_DIR_ENV}"), EXIT_INVALID)
    })?;
    ensure_dir(&dir)?;
    Ok(dir)
}

fn ensure_dir(dir: &Path) -> Result<(), Failure> {
    fs::create_dir_all(dir)
        .map_err(|e| Failure::Exit(format!("cannot create {}: {e}", dir.display()), EXIT_INVALID))
}

fn write_text(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text)
        .map_err(|e| Failure::Exit(format!("cannot write {}: {e}", path.display()), EXIT_INVALID))
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".into(), |x| format!("{x}"))
}

fn cmd_generate(a: GenerateArgs) -> CmdResult {
    let mut cfg = GenConfig::new(a.buyers, a.sellers, a.seed);
    cfg.density = a.density;
    cfg.window = a.window;
    cfg.stride = a.stride;
    cfg.degree_ratio = a.degree_ratio;
    cfg.conflict_ratio = a.conflict_ratio;
    cfg.threshold = match (a.threshold, a.threshold_fraction) {
        (_, Some(f)) => ThresholdMode::FractionOfIncidentPairs(f),
        (Some(t), None) => ThresholdMode::Constant(t),
        (None, None) => ThresholdMode::Constant(0),
    };
    cfg.weights = a.weights.into();
    cfg.total_nodes = a.total_nodes;
    let dir = require_out_dir(a.out)?;
    let (inst, report) = generate(&cfg)?;
    let inst_path = dir.join("instance.json");
    write_instance(&inst, &inst_path)?;
    let mut text = serde_json::to_string_pretty(&report).expect("report serializes");
    text.push('\n');
    write_text(&dir.join("generation.json"), &text)?;
    println!("instance      {}", inst_path.display());
    println!("buyers        {}", inst.buyers);
    println!("sellers       {}", inst.sellers);
    println!("edges         {}", report.edges);
    println!("density       {:.6}", report.realized_density);
    println!("window        {} (stride {})", report.window, report.stride);
    println!("conflicts     {}", report.conflicts);
    println!("window hash   {}", report.window_hash);
    Ok(0)
}

fn cmd_validate(a: ValidateArgs) -> CmdResult {
    let inst = read_instance_unchecked(&a.instance)?;
    let violations = validate(&inst);
    if !violations.is_empty() {
        for v in &violations {
            println!("violation: {v}");
        }
        return Err(Failure::Exit(
            format!("{}: {} violation(s)", a.instance.display(), violations.len()),
            EXIT_INVALID,
        ));
    }
    println!(
        "instance ok: {} buyers, {} sellers, {} edges, {} conflicts",
        inst.buyers,
        inst.sellers,
        inst.edges.len(),
        inst.conflicts.len()
    );
    if let Some(path) = a.solution {
        let (rec, doc) = read_solution(&path, &inst)?;
        let f = check_feasible(&inst, &rec);
        if !f.is_ok() {
            for v in &f.violations {
                println!("violation: {v}");
            }
            return Err(Failure::Exit(
                format!("{}: {} violation(s)", path.display(), f.violations.len()),
                EXIT_INVALID,
            ));
        }
        println!(
            "solution ok: {} pairs, objective {} ({})",
            rec.len(),
            rec.objective(),
            doc.method
        );
    }
    Ok(0)
}

fn limit_hit(report: &SolveReport, opts: &SolveOptions) -> bool {
    report.method == Method::Ilp
        && report.optimal == Some(false)
        && (opts.node_limit.is_some() || opts.time_limit.is_some())
}

fn report_json(report: &SolveReport, record_elapsed: bool) -> String {
    let mut v = serde_json::to_value(report).expect("report serializes");
    if !record_elapsed {
        v.as_object_mut().expect("report is an object").remove("elapsed_s");
    }
    let mut s = serde_json::to_string_pretty(&v).expect("value serializes");
    s.push('\n');
    s
}

fn print_report(report: &SolveReport) {
    println!("method        {}", report.method);
    println!("objective     {}", report.objective);
    println!("upper bound   {}", fmt_opt(report.upper_bound));
    println!("relaxation    {}", fmt_opt(report.relaxation));
    println!("feasible      {}", report.feasible);
    if let Some(o) = report.optimal {
        println!("optimal       {o}");
    }
    if let Some(c) = report.converged {
        println!("converged     {c}");
    }
    if report.nodes > 0 {
        println!("nodes         {}", report.nodes);
    }
    println!("iterations    {}", report.iterations);
    println!("elapsed       {:.3}s", report.elapsed_s);
    for n in &report.notes {
        println!("note          {n}");
    }
}

fn cmd_solve(a: SolveArgs) -> CmdResult {
    let inst = read_instance(&a.instance)?;
    let opts = a.flags.options()?;
    let (rec, report) = solve(&inst, a.method, &opts)?;
    let check = if a.method.is_crec() {
        check_feasible(&inst.without_conflicts(), &rec)
    } else {
        check_feasible(&inst, &rec)
    };
    if !check.is_ok() {
        return Err(Failure::Exit(
            format!("{} produced an infeasible selection: {}", a.method, check.violations[0]),
            EXIT_INTERNAL,
        ));
    }
    print_report(&report);
    if let Some(dir) = out_dir(a.out) {
        ensure_dir(&dir)?;
        let mut doc = SolutionDoc::new(&inst, &rec, a.method);
        doc.upper_bound = report.upper_bound;
        if a.record_elapsed {
            doc.elapsed_s = Some(report.elapsed_s);
        }
        let sol = dir.join(format!("{}.solution.json", a.method));
        write_solution(&doc, &sol)?;
        write_text(
            &dir.join(format!("{}.report.json", a.method)),
            &report_json(&report, a.record_elapsed),
        )?;
        println!("solution      {}", sol.display());
    }
    if limit_hit(&report, &opts) {
        eprintln!("solver limit reached; best solution kept");
        return Ok(EXIT_LIMIT);
    }
    Ok(0)
}

fn cmd_reduce(c: ReduceCommand) -> CmdResult {
    match c {
        ReduceCommand::Rmis { input, out } => {
            let rmis = read_rmis(&input)?;
            let inst = rmis_to_cacrec(&rmis)?;
            write_instance(&inst, &out)?;
            println!(
                "{} jobs, {} machines -> {} buyers, {} sellers, {} edges, {} conflicts",
                rmis.jobs.len(),
                rmis.machines,
                inst.buyers,
                inst.sellers,
                inst.edges.len(),
                inst.conflicts.len()
            );
            println!("instance      {}", out.display());
            Ok(0)
        }
    }
}

fn print_warnings(w: &[String]) {
    for x in w {
        eprintln!("warning: {x}");
    }
}

fn cmd_bench(c: BenchCommand) -> CmdResult {
    match c {
        BenchCommand::CrecScaling {
            common,
            buyers,
            sellers,
            densities,
            ratios,
            fractions,
            runs,
        } => {
            let dir = require_out_dir(common.out)?;
            let mut cfg = CrecScalingConfig::new(common.seed);
            cfg.jobs = common.jobs;
            cfg.buyers = buyers.unwrap_or(cfg.buyers);
            cfg.sellers = sellers.unwrap_or(cfg.sellers);
            cfg.densities = densities.unwrap_or(cfg.densities);
            cfg.ratios = ratios.unwrap_or(cfg.ratios);
            cfg.fractions = fractions.unwrap_or(cfg.fractions);
            cfg.runs = runs.unwrap_or(cfg.runs);
            let t = run_crec_scaling(&cfg)?;
            let path = dir.join("crec_scaling.csv");
            t.write_csv(&path)?;
            println!("{:>8} {:>6} {:>8} {:>9} {:>11} {:>16}", "density", "ratio", "fraction", "edges", "runtime_s", "objective");
            for r in &t.rows {
                println!(
                    "{:>8} {:>6} {:>8} {:>9} {:>11.4} {:>16}",
                    r.density, r.ratio, r.fraction, r.edges, r.runtime_s, r.objective
                );
            }
            print_warnings(&t.warnings);
            println!("wrote {}", path.display());
        }
        BenchCommand::CacrecQuality {
            common,
            conflict_ratios,
            degree_ratios,
            weights,
            restarts,
            no_ilp,
            ilp_buyers,
            ilp_sellers,
            ilp_window,
        } => {
            let dir = require_out_dir(common.out)?;
            let mut cfg = QualityConfig::new(common.seed);
            cfg.jobs = common.jobs;
            cfg.conflict_ratios = conflict_ratios.unwrap_or(cfg.conflict_ratios);
            cfg.degree_ratios = degree_ratios.unwrap_or(cfg.degree_ratios);
            if let Some(w) = weights {
                cfg.weight_modes = w.into_iter().map(WeightMode::from).collect();
            }
            cfg.restarts = restarts.unwrap_or(cfg.restarts);
            cfg.ilp = if no_ilp {
                None
            } else {
                let d = IlpArmConfig::default();
                Some(IlpArmConfig {
                    buyers: ilp_buyers.unwrap_or(d.buyers),
                    sellers: ilp_sellers.unwrap_or(d.sellers),
                    window: ilp_window.unwrap_or(d.window),
                    ..d
                })
            };
            let t = run_cacrec_quality(&cfg)?;
            let path = dir.join("cacrec_quality_sdp.csv");
            t.sdp.write_csv(&path)?;
            println!("{:>6} {:>5} {:>5} {:>3} {:>8} {:>8} {:>8} {:>8}", "weights", "cr", "dr", "d", "opt", "sdp", "lp", "greedy");
            for r in &t.sdp.rows {
                println!(
                    "{:>6} {:>5} {:>5} {:>3} {:>8.4} {:>8.4} {:>8.4} {:>8.4}",
                    r.weights, r.conflict_ratio, r.degree_ratio, r.d, 1.0, r.sdp_ratio, r.lp_ratio, r.greedy_ratio
                );
            }
            print_warnings(&t.sdp.warnings);
            println!("wrote {}", path.display());
            if let Some(ilp) = &t.ilp {
                let path = dir.join("cacrec_quality_ilp.csv");
                ilp.write_csv(&path)?;
                for r in &ilp.rows {
                    println!(
                        "{:>6} fraction {:>5} edges {:>6} ilp {} (optimal {}) lp {:.4} greedy {:.4}",
                        r.weights, r.fraction, r.edges, r.ilp, r.ilp_optimal, r.lp_ratio, r.greedy_ratio
                    );
                }
                print_warnings(&ilp.warnings);
                println!("wrote {}", path.display());
            }
        }
        BenchCommand::GreedyScaling {
            common,
            buyers,
            sellers,
            window,
            fractions,
            runs,
        } => {
            let dir = require_out_dir(common.out)?;
            let mut cfg = GreedyScalingConfig::new(common.seed);
            cfg.buyers = buyers.unwrap_or(cfg.buyers);
            cfg.sellers = sellers.unwrap_or(cfg.sellers);
            cfg.window = window.unwrap_or(cfg.window);
            cfg.fractions = fractions.unwrap_or(cfg.fractions);
            cfg.runs = runs.unwrap_or(cfg.runs);
            let s = run_greedy_scaling(&cfg)?;
            let path = dir.join("greedy_scaling.csv");
            s.table.write_csv(&path)?;
            for r in &s.table.rows {
                println!("edges {:>8} runtime {:.4}s objective {}", r.edges, r.runtime_s, r.objective);
            }
            for r in &s.step_ratios {
                println!("step ratio {r:.3}");
            }
            println!("log-log slope {:.3}", s.slope);
            print_warnings(&s.table.warnings);
            println!("wrote {}", path.display());
        }
    }
    Ok(0)
}

#[derive(serde::Serialize)]
struct CompareRow {
    method: String,
    objective: f64,
    upper_bound: Option<f64>,
    ratio: Option<f64>,
    feasible: bool,
    optimal: Option<bool>,
}

fn default_methods(inst: &Instance, flags: &SolverFlags) -> Vec<Method> {
    let mut m = vec![Method::Greedy, Method::LpRound, Method::Ilp];
    if flags.seed.is_some() && inst.edges.len() <= flags.sdp_cap {
        m.push(Method::Sdp);
    }
    if inst.edges.len() <= MAX_ORACLE_EDGES {
        m.push(Method::Oracle);
    }
    m
}

fn cmd_compare(a: CompareArgs) -> CmdResult {
    let inst = read_instance(&a.instance)?;
    let opts = a.flags.options()?;
    let methods = a.methods.clone().unwrap_or_else(|| default_methods(&inst, &a.flags));
    let mut results = Vec::new();
    let mut code = 0;
    for &m in &methods {
        let (rec, report) = solve(&inst, m, &opts)?;
        if limit_hit(&report, &opts) {
            code = EXIT_LIMIT;
        }
        let feasible = check_feasible(&inst, &rec).is_ok();
        results.push((report, feasible));
    }
    let reference = results
        .iter()
        .find(|(r, f)| *f && r.optimal == Some(true) && !r.method.is_crec())
        .map(|(r, _)| r.objective);
    let rows: Vec<CompareRow> = results
        .iter()
        .map(|(r, f)| CompareRow {
            method: r.method.to_string(),
            objective: r.objective,
            upper_bound: r.upper_bound,
            ratio: reference.map(|opt| if opt > 0.0 { r.objective / opt } else { 1.0 }),
            feasible: *f,
            optimal: r.optimal,
        })
        .collect();
    println!("d = {}", conflict_degree(&inst).d);
    println!("{:<10} {:>16} {:>16} {:>8} {:>8} {:>7}", "method", "objective", "upper_bound", "ratio", "feasible", "optimal");
    for r in &rows {
        println!(
            "{:<10} {:>16} {:>16} {:>8} {:>8} {:>7}",
            r.method,
            r.objective,
            fmt_opt(r.upper_bound),
            r.ratio.map_or_else(|| "-".into(), |x| format!("{x:.4}")),
            r.feasible,
            r.optimal.map_or_else(|| "-".into(), |x| x.to_string())
        );
    }
    if let Some(dir) = out_dir(a.out) {
        ensure_dir(&dir)?;
        let path = dir.join("compare.csv");
        write_text(&path, &bsrec::bench::to_csv(&rows)?)?;
        println!("wrote {}", path.display());
    }
    Ok(code)
}

fn open(path: &Path) -> Result<fs::File, Failure> {
    fs::File::open(path)
        .map_err(|e| Failure::Exit(format!("cannot open {}: {e}", path.display()), EXIT_INVALID))
}

fn cmd_import(a: ImportArgs) -> CmdResult {
    let mut edges = open(&a.edges)?;
    let mut conflicts = a.conflicts.as_deref().map(open).transpose()?;
    let defaults = CsvDefaults {
        buyer_bound: a.buyer_bound,
        seller_bound: a.seller_bound,
        threshold: a.threshold,
        buyers: a.buyers,
        sellers: a.sellers,
    };
    let inst = import_csv(
        &mut edges,
        conflicts.as_mut().map(|f| f as &mut dyn std::io::Read),
        &defaults,
    )?;
    write_instance(&inst, &a.out)?;
    println!(
        "{} buyers, {} sellers, {} edges, {} conflicts -> {}",
        inst.buyers,
        inst.sellers,
        inst.edges.len(),
        inst.conflicts.len(),
        a.out.display()
    );
    Ok(0)
}

fn run(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Generate(a) => cmd_generate(a),
        Command::Validate(a) => cmd_validate(a),
        Command::Solve(a) => cmd_solve(a),
        Command::Reduce(c) => cmd_reduce(c),
        Command::Bench(c) => cmd_bench(c),
        Command::Compare(a) => cmd_compare(a),
        Command::Import(a) => cmd_import(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match std::panic::catch_unwind(|| run(cli)) {
        Ok(Ok(code)) => ExitCode::from(code),
        Ok(Err(Failure::Error(e))) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
        Ok(Err(Failure::Exit(msg, code))) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
        Err(_) => ExitCode::from(EXIT_INTERNAL),
    }
}
