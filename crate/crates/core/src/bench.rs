//! Experiment harness: instance families, solver runs and CSV tables.
//!
//! Three experiments are provided:
//!
//! * [`run_crec_scaling`]: exact C-REC runtime over densities, degree ratios
//!   and edge-subset fractions.
//! * [`run_cacrec_quality`]: CAC-REC objectives of every method against the
//!   optimum, on a small grid solvable by the SDP (the `sdp` table) and on
//!   larger ILP-scale instances (the `ilp` table).
//! * [`run_greedy_scaling`]: greedy runtime as the edge count doubles.
//!
//! Trend checks never fail a run; they are returned as warnings. Runtime
//! columns aside, every table is a deterministic function of the config.
//!
//! CSV schemas (one header row, then one row per cell):
//!
//! * `crec_scaling.csv`: `density,ratio,fraction,edges,runtime_s,objective`
//! * `cacrec_quality_sdp.csv`: `weights,conflict_ratio,degree_ratio,edges,
//!   conflicts,d,optimum,optimum_method,sdp_relaxation,sdp_rounded,lp_bound,
//!   lp_round,greedy,sdp_ratio,lp_ratio,greedy_ratio,bound_ok`
//! * `cacrec_quality_ilp.csv`: `weights,fraction,edges,conflicts,d,ilp,
//!   ilp_optimal,ilp_nodes,ilp_upper_bound,lp_bound,lp_round,greedy,lp_ratio,
//!   greedy_ratio,bound_ok,runtime_ilp_s`
//! * `greedy_scaling.csv`: `fraction,edges,conflicts,runtime_s,objective`

use std::fs;
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::cacrec_greedy::{conflict_degree, solve_greedy};
use crate::cacrec_milp::{solve_ilp, solve_lp_rounding, IlpLimits};
use crate::cacrec_sdp::{solve_sdp_rounding, SdpPipeline};
use crate::crec::solve_crec;
use crate::genlab::{
    edge_subset, generate, GenConfig, ThresholdMode, WeightMode, MARKET_BUYERS, MARKET_SELLERS,
};
use crate::model::{check_feasible, Instance, Recommendation};
use crate::oracle::{brute_force_cacrec, MAX_ORACLE_EDGES};
use crate::{Error, Result};

/// A finished experiment.
#[derive(Debug, Clone)]
pub struct BenchTable<R> {
    pub rows: Vec<R>,
    pub warnings: Vec<String>,
}

impl<R: Serialize> BenchTable<R> {
    pub fn to_csv(&self) -> Result<String> {
        to_csv(&self.rows)
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_csv()?).map_err(|e| Error::io(path, e))
    }
}

pub fn to_csv<R: Serialize>(rows: &[R]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Error::Malformed(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Malformed(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Runs `f(0..n)` on up to `jobs` threads, keeping results in index order.
pub fn run_cells<T, F>(n: usize, jobs: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync,
{
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<Result<T>>>> = Mutex::new((0..n).map(|_| None).collect());
    std::thread::scope(|s| {
        for _ in 0..jobs.clamp(1, n.max(1)) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= n {
                    break;
                }
                let r = f(i);
                slots.lock().expect("no panics while holding the lock")[i] = Some(r);
            });
        }
    });
    slots
        .into_inner()
        .expect("workers joined")
        .into_iter()
        .map(|r| r.expect("every cell ran"))
        .collect()
}

fn ensure_feasible(inst: &Instance, rec: &Recommendation, what: &str) -> Result<()> {
    let f = check_feasible(inst, rec);
    if f.is_ok() {
        Ok(())
    } else {
        Err(Error::Infeasible(format!("{what}: {}", f.violations[0])))
    }
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n == 0 {
        0.0
    } else if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

fn ratio(value: f64, optimum: f64) -> f64 {
    if optimum > 0.0 {
        value / optimum
    } else {
        1.0
    }
}

#[derive(Debug, Clone)]
pub struct CrecScalingConfig {
    pub buyers: usize,
    pub sellers: usize,
    pub densities: Vec<f64>,
    pub ratios: Vec<f64>,
    pub fractions: Vec<f64>,
    pub runs: usize,
    pub seed: u64,
    pub jobs: usize,
}

impl CrecScalingConfig {
    pub fn new(seed: u64) -> Self {
        CrecScalingConfig {
            buyers: MARKET_BUYERS,
            sellers: MARKET_SELLERS,
            densities: vec![0.005, 0.01, 0.015, 0.02],
            ratios: vec![0.1, 0.2, 0.3, 0.4, 0.5],
            fractions: vec![0.25, 0.5, 0.75, 1.0],
            runs: 5,
            seed,
            jobs: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrecScalingRow {
    pub density: f64,
    pub ratio: f64,
    pub fraction: f64,
    pub edges: usize,
    pub runtime_s: f64,
    pub objective: f64,
}

/// Mean C-REC runtime and objective for every (density, ratio, fraction).
pub fn run_crec_scaling(cfg: &CrecScalingConfig) -> Result<BenchTable<CrecScalingRow>> {
    let nf = cfg.fractions.len();
    let nr = cfg.ratios.len();
    let cells = cfg.densities.len() * nr;
    let per_cell = run_cells(cells, cfg.jobs, |c| {
        let density = cfg.densities[c / nr];
        let ratio = cfg.ratios[c % nr];
        let mut gen = GenConfig::new(cfg.buyers, cfg.sellers, cfg.seed);
        gen.density = density;
        gen.degree_ratio = ratio;
        let (full, _) = generate(&gen)?;
        let mut rows = Vec::with_capacity(nf);
        for &fraction in &cfg.fractions {
            let inst = edge_subset(&full, fraction);
            let mut total = 0.0;
            let mut objective = None;
            for _ in 0..cfg.runs.max(1) {
                let (rec, report) = solve_crec(&inst)?;
                ensure_feasible(&inst, &rec, "crec-flow")?;
                total += report.elapsed_s;
                if objective.is_some_and(|o| o != rec.objective()) {
                    return Err(Error::Infeasible("non-deterministic C-REC objective".into()));
                }
                objective = Some(rec.objective());
            }
            rows.push(CrecScalingRow {
                density,
                ratio,
                fraction,
                edges: inst.edges.len(),
                runtime_s: total / cfg.runs.max(1) as f64,
                objective: objective.unwrap_or(0.0),
            });
        }
        Ok(rows)
    })?;
    let rows: Vec<CrecScalingRow> = per_cell.into_iter().flatten().collect();

    let mut warnings = Vec::new();
    let at = |d: usize, r: usize, f: usize| &rows[(d * nr + r) * nf + f];
    for r in 0..nr {
        for d in 1..cfg.densities.len() {
            let holds = (0..nf)
                .filter(|&f| at(d, r, f).runtime_s >= at(d - 1, r, f).runtime_s)
                .count();
            if 4 * holds < 3 * nf {
                warnings.push(format!(
                    "ratio {}: density {} ran faster than {} on {} of {} sizes",
                    cfg.ratios[r],
                    cfg.densities[d],
                    cfg.densities[d - 1],
                    nf - holds,
                    nf
                ));
            }
        }
    }
    Ok(BenchTable { rows, warnings })
}

#[derive(Debug, Clone)]
pub struct QualityConfig {
    pub weight_modes: Vec<WeightMode>,
    pub conflict_ratios: Vec<f64>,
    pub degree_ratios: Vec<f64>,
    /// Small grid solved by every method including the SDP.
    pub sdp_buyers: usize,
    pub sdp_sellers: usize,
    pub sdp_window: usize,
    pub sdp_threshold: u32,
    pub restarts: usize,
    /// Rank-weight numerator.
    pub total_nodes: usize,
    /// ILP-scale arm; `None` skips it.
    pub ilp: Option<IlpArmConfig>,
    pub seed: u64,
    pub jobs: usize,
}

#[derive(Debug, Clone)]
pub struct IlpArmConfig {
    pub buyers: usize,
    pub sellers: usize,
    pub window: usize,
    pub degree_ratio: f64,
    pub conflict_ratio: f64,
    pub threshold_fraction: f64,
    pub fractions: Vec<f64>,
    pub node_limit: Option<u64>,
    pub time_limit: Option<Duration>,
}

impl Default for IlpArmConfig {
    fn default() -> Self {
        IlpArmConfig {
            buyers: 90,
            sellers: 9,
            window: 15,
            degree_ratio: 0.5,
            conflict_ratio: 0.1,
            threshold_fraction: 0.5,
            fractions: vec![0.25, 0.5, 0.75, 1.0],
            node_limit: Some(20_000),
            time_limit: Some(Duration::from_secs(600)),
        }
    }
}

impl QualityConfig {
    pub fn new(seed: u64) -> Self {
        QualityConfig {
            weight_modes: vec![WeightMode::Money, WeightMode::Rank],
            conflict_ratios: vec![0.05, 0.10, 0.15, 0.20],
            degree_ratios: vec![0.2, 0.3, 0.4, 0.5, 0.6],
            sdp_buyers: 26,
            sdp_sellers: 5,
            sdp_window: 10,
            sdp_threshold: 1,
            restarts: 20,
            total_nodes: MARKET_BUYERS + MARKET_SELLERS,
            ilp: Some(IlpArmConfig::default()),
            seed,
            jobs: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SdpQualityRow {
    pub weights: String,
    pub conflict_ratio: f64,
    pub degree_ratio: f64,
    pub edges: usize,
    pub conflicts: usize,
    pub d: usize,
    pub optimum: f64,
    pub optimum_method: String,
    pub sdp_relaxation: f64,
    pub sdp_rounded: f64,
    pub lp_bound: f64,
    pub lp_round: f64,
    pub greedy: f64,
    pub sdp_ratio: f64,
    pub lp_ratio: f64,
    pub greedy_ratio: f64,
    /// `optimum ≤ (2 + d) · greedy`.
    pub bound_ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IlpQualityRow {
    pub weights: String,
    pub fraction: f64,
    pub edges: usize,
    pub conflicts: usize,
    pub d: usize,
    pub ilp: f64,
    pub ilp_optimal: bool,
    pub ilp_nodes: u64,
    pub ilp_upper_bound: f64,
    pub lp_bound: f64,
    pub lp_round: f64,
    pub greedy: f64,
    pub lp_ratio: f64,
    pub greedy_ratio: f64,
    pub bound_ok: bool,
    pub runtime_ilp_s: f64,
}

#[derive(Debug, Clone)]
pub struct QualityTables {
    pub sdp: BenchTable<SdpQualityRow>,
    pub ilp: Option<BenchTable<IlpQualityRow>>,
}

fn mode_name(m: WeightMode) -> String {
    match m {
        WeightMode::Money => "money".into(),
        WeightMode::Rank => "rank".into(),
    }
}

/// Exact optimum: exhaustive search when small enough, otherwise ILP.
fn exact_optimum(inst: &Instance) -> Result<(Recommendation, &'static str)> {
    if inst.edges.len() <= MAX_ORACLE_EDGES {
        Ok((brute_force_cacrec(inst)?.0, "oracle"))
    } else {
        let (rec, report) = solve_ilp(inst, &IlpLimits::none())?;
        debug_assert_eq!(report.optimal, Some(true));
        Ok((rec, "ilp"))
    }
}

/// The instance of the small SDP grid for one cell.
pub fn sdp_grid_instance(
    cfg: &QualityConfig,
    mode: WeightMode,
    conflict_ratio: f64,
    degree_ratio: f64,
) -> Result<Instance> {
    let mut gen = GenConfig::new(cfg.sdp_buyers, cfg.sdp_sellers, cfg.seed);
    gen.window = Some(cfg.sdp_window);
    gen.degree_ratio = degree_ratio;
    gen.conflict_ratio = conflict_ratio;
    gen.threshold = ThresholdMode::Constant(cfg.sdp_threshold);
    gen.weights = mode;
    gen.total_nodes = Some(cfg.total_nodes);
    Ok(generate(&gen)?.0)
}

fn sdp_cell(
    cfg: &QualityConfig,
    mode: WeightMode,
    conflict_ratio: f64,
    degree_ratio: f64,
) -> Result<SdpQualityRow> {
    let inst = sdp_grid_instance(cfg, mode, conflict_ratio, degree_ratio)?;
    let (opt, optimum_method) = exact_optimum(&inst)?;
    let mut pipeline = SdpPipeline::new(cfg.seed);
    pipeline.restarts = cfg.restarts;
    let (sdp, sdp_report) = solve_sdp_rounding(&inst, &pipeline)?;
    let (lp, lp_report) = solve_lp_rounding(&inst)?;
    let (greedy, _) = solve_greedy(&inst)?;
    for (rec, what) in [(&opt, "optimum"), (&sdp, "sdp"), (&lp, "lp-round"), (&greedy, "greedy")] {
        ensure_feasible(&inst, rec, what)?;
    }
    let d = conflict_degree(&inst).d;
    let optimum = opt.objective();
    Ok(SdpQualityRow {
        weights: mode_name(mode),
        conflict_ratio,
        degree_ratio,
        edges: inst.edges.len(),
        conflicts: inst.conflicts.len(),
        d,
        optimum,
        optimum_method: optimum_method.into(),
        sdp_relaxation: sdp_report.relaxation.unwrap_or(f64::NAN),
        sdp_rounded: sdp.objective(),
        lp_bound: lp_report.upper_bound.unwrap_or(f64::NAN),
        lp_round: lp.objective(),
        greedy: greedy.objective(),
        sdp_ratio: ratio(sdp.objective(), optimum),
        lp_ratio: ratio(lp.objective(), optimum),
        greedy_ratio: ratio(greedy.objective(), optimum),
        bound_ok: optimum <= (2.0 + d as f64) * greedy.objective() + 1e-9 * (1.0 + optimum),
    })
}

fn ilp_cell(
    arm: &IlpArmConfig,
    seed: u64,
    mode: WeightMode,
    total_nodes: usize,
    fraction: f64,
) -> Result<IlpQualityRow> {
    let mut gen = GenConfig::new(arm.buyers, arm.sellers, seed);
    gen.window = Some(arm.window);
    gen.degree_ratio = arm.degree_ratio;
    gen.conflict_ratio = arm.conflict_ratio;
    gen.threshold = ThresholdMode::FractionOfIncidentPairs(arm.threshold_fraction);
    gen.weights = mode;
    gen.total_nodes = Some(total_nodes);
    let (full, _) = generate(&gen)?;
    let inst = edge_subset(&full, fraction);
    let limits = IlpLimits {
        node_limit: arm.node_limit,
        time_limit: arm.time_limit,
    };
    let (ilp, ilp_report) = solve_ilp(&inst, &limits)?;
    let (lp, lp_report) = solve_lp_rounding(&inst)?;
    let (greedy, _) = solve_greedy(&inst)?;
    for (rec, what) in [(&ilp, "ilp"), (&lp, "lp-round"), (&greedy, "greedy")] {
        ensure_feasible(&inst, rec, what)?;
    }
    let d = conflict_degree(&inst).d;
    let best = ilp.objective();
    Ok(IlpQualityRow {
        weights: mode_name(mode),
        fraction,
        edges: inst.edges.len(),
        conflicts: inst.conflicts.len(),
        d,
        ilp: best,
        ilp_optimal: ilp_report.optimal == Some(true),
        ilp_nodes: ilp_report.nodes,
        ilp_upper_bound: ilp_report.upper_bound.unwrap_or(f64::NAN),
        lp_bound: lp_report.upper_bound.unwrap_or(f64::NAN),
        lp_round: lp.objective(),
        greedy: greedy.objective(),
        lp_ratio: ratio(lp.objective(), best),
        greedy_ratio: ratio(greedy.objective(), best),
        bound_ok: best <= (2.0 + d as f64) * greedy.objective() + 1e-9 * (1.0 + best),
        runtime_ilp_s: ilp_report.elapsed_s,
    })
}

/// Objectives of every CAC-REC method against the optimum.
pub fn run_cacrec_quality(cfg: &QualityConfig) -> Result<QualityTables> {
    let (nm, nc, nd) = (
        cfg.weight_modes.len(),
        cfg.conflict_ratios.len(),
        cfg.degree_ratios.len(),
    );
    let rows = run_cells(nm * nc * nd, cfg.jobs, |i| {
        let mode = cfg.weight_modes[i / (nc * nd)];
        let cr = cfg.conflict_ratios[(i / nd) % nc];
        let dr = cfg.degree_ratios[i % nd];
        sdp_cell(cfg, mode, cr, dr)
    })?;
    let mut warnings = Vec::new();
    for r in &rows {
        let tol = 1e-9 * (1.0 + r.optimum.abs());
        if r.greedy > r.optimum + tol || r.lp_round > r.optimum + tol || r.sdp_rounded > r.optimum + tol {
            warnings.push(format!(
                "{} cr={} dr={}: a heuristic beat the optimum",
                r.weights, r.conflict_ratio, r.degree_ratio
            ));
        }
        if !r.bound_ok {
            warnings.push(format!(
                "{} cr={} dr={}: optimum exceeds (2 + d) x greedy",
                r.weights, r.conflict_ratio, r.degree_ratio
            ));
        }
    }
    for mode in &cfg.weight_modes {
        let name = mode_name(*mode);
        let gap = |r: &SdpQualityRow| 1.0 - r.sdp_ratio.min(r.greedy_ratio).min(r.lp_ratio);
        let mine: Vec<&SdpQualityRow> = rows.iter().filter(|r| r.weights == name).collect();
        let corner = mine.iter().max_by(|a, b| {
            (a.conflict_ratio, a.degree_ratio)
                .partial_cmp(&(b.conflict_ratio, b.degree_ratio))
                .expect("finite ratios")
        });
        if let Some(corner) = corner {
            let mean = mine.iter().map(|r| gap(r)).sum::<f64>() / mine.len() as f64;
            if gap(corner) < mean {
                warnings.push(format!(
                    "{name}: quality gap at the loosest degree bound and highest conflict ratio ({:.4}) is below the grid mean ({:.4})",
                    gap(corner),
                    mean
                ));
            }
        }
    }
    let sdp = BenchTable { rows, warnings };

    let ilp = match &cfg.ilp {
        None => None,
        Some(arm) => {
            let nf = arm.fractions.len();
            let rows = run_cells(nm * nf, cfg.jobs, |i| {
                ilp_cell(arm, cfg.seed, cfg.weight_modes[i / nf], cfg.total_nodes, arm.fractions[i % nf])
            })?;
            let mut warnings = Vec::new();
            for r in &rows {
                if !r.ilp_optimal {
                    warnings.push(format!(
                        "{} fraction {}: ILP stopped at a limit (gap {:.6})",
                        r.weights,
                        r.fraction,
                        r.ilp_upper_bound - r.ilp
                    ));
                }
                if !r.bound_ok {
                    warnings.push(format!(
                        "{} fraction {}: ILP value exceeds (2 + d) x greedy",
                        r.weights, r.fraction
                    ));
                }
            }
            Some(BenchTable { rows, warnings })
        }
    };
    Ok(QualityTables { sdp, ilp })
}

#[derive(Debug, Clone)]
pub struct GreedyScalingConfig {
    pub buyers: usize,
    pub sellers: usize,
    /// Buyers per seller; 390 gives 734,760 edges at full size.
    pub window: usize,
    pub degree_ratio: f64,
    pub conflict_ratio: f64,
    pub threshold_fraction: f64,
    pub fractions: Vec<f64>,
    pub runs: usize,
    pub seed: u64,
}

impl GreedyScalingConfig {
    pub fn new(seed: u64) -> Self {
        GreedyScalingConfig {
            buyers: MARKET_BUYERS,
            sellers: MARKET_SELLERS,
            window: 390,
            degree_ratio: 0.6,
            conflict_ratio: 0.1,
            threshold_fraction: 0.5,
            fractions: vec![0.125, 0.25, 0.5, 1.0],
            runs: 3,
            seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GreedyScalingRow {
    pub fraction: f64,
    pub edges: usize,
    pub conflicts: usize,
    /// Median over runs.
    pub runtime_s: f64,
    pub objective: f64,
}

#[derive(Debug, Clone)]
pub struct GreedyScaling {
    pub table: BenchTable<GreedyScalingRow>,
    /// `runtime[i+1] / runtime[i]` for consecutive sizes.
    pub step_ratios: Vec<f64>,
    /// Least-squares slope of log runtime against log edges.
    pub slope: f64,
}

/// Greedy runtime on nested subsets of one large instance. Runs serially so
/// timings are not disturbed.
pub fn run_greedy_scaling(cfg: &GreedyScalingConfig) -> Result<GreedyScaling> {
    let mut gen = GenConfig::new(cfg.buyers, cfg.sellers, cfg.seed);
    gen.window = Some(cfg.window);
    gen.degree_ratio = cfg.degree_ratio;
    gen.conflict_ratio = cfg.conflict_ratio;
    gen.threshold = ThresholdMode::FractionOfIncidentPairs(cfg.threshold_fraction);
    let (full, _) = generate(&gen)?;
    let subsets: Vec<Instance> = cfg.fractions.iter().map(|&f| edge_subset(&full, f)).collect();
    drop(full);
    // Sizes are timed round-robin so drifting machine load hits all alike.
    let mut times = vec![Vec::with_capacity(cfg.runs); subsets.len()];
    let mut objectives = vec![0.0; subsets.len()];
    for _ in 0..cfg.runs.max(1) {
        for (i, inst) in subsets.iter().enumerate() {
            let start = Instant::now();
            let (rec, _) = solve_greedy(inst)?;
            times[i].push(start.elapsed().as_secs_f64());
            ensure_feasible(inst, &rec, "greedy")?;
            objectives[i] = rec.objective();
        }
    }
    let rows: Vec<GreedyScalingRow> = subsets
        .iter()
        .zip(&cfg.fractions)
        .zip(times.into_iter().zip(objectives))
        .map(|((inst, &fraction), (t, objective))| GreedyScalingRow {
            fraction,
            edges: inst.edges.len(),
            conflicts: inst.conflicts.len(),
            runtime_s: median(t),
            objective,
        })
        .collect();
    let step_ratios: Vec<f64> = rows
        .windows(2)
        .map(|w| w[1].runtime_s / w[0].runtime_s.max(1e-12))
        .collect();
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.edges > 0 && r.runtime_s > 0.0)
        .map(|r| ((r.edges as f64).ln(), r.runtime_s.ln()))
        .collect();
    let slope = if pts.len() >= 2 {
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        if sxx > 0.0 { sxy / sxx } else { f64::NAN }
    } else {
        f64::NAN
    };
    let mut warnings = Vec::new();
    for (w, r) in rows.windows(2).zip(&step_ratios) {
        if w[1].runtime_s < w[0].runtime_s {
            warnings.push(format!(
                "runtime fell from {:.4}s to {:.4}s as edges grew from {} to {}",
                w[0].runtime_s, w[1].runtime_s, w[0].edges, w[1].edges
            ));
        }
        let growth = w[1].edges as f64 / w[0].edges.max(1) as f64;
        if *r > 2.5 * growth / 2.0 {
            warnings.push(format!(
                "runtime grew {r:.2}x from {} to {} edges",
                w[0].edges, w[1].edges
            ));
        }
    }
    Ok(GreedyScaling {
        table: BenchTable { rows, warnings },
        step_ratios,
        slope,
    })
}
