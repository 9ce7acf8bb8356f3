//! Exact C-REC: maximum-weight degree-constrained bipartite selection.
//!
//! The production path is a min-cost flow on
//! `source → buyers → sellers → sink`, where buyer and seller arcs carry the
//! degree bounds and each edge becomes a unit arc of cost `-w`. The LP
//! encoding (`A x ≤ D`, `0 ≤ x ≤ 1`, `A` the bipartite incidence matrix) is
//! kept to confirm that LP vertices are integral; `A` is totally unimodular.

use std::time::Instant;

use crate::lp::{simplex_solve, LinearProgram, LpError, SimplexOptions};
use crate::model::{check_feasible, ensure_valid, Instance, Method, Recommendation, SolveReport};
use crate::Result;

pub mod flow;

pub use flow::{FlowOutcome, MinCostFlow};

/// Power-of-ten factor turning weights into integer arc costs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightScale {
    pub factor: f64,
    /// Every scaled weight is an integer up to floating-point noise.
    pub exact: bool,
}

// Keeps |potentials| and path costs well inside i64.
const COST_BUDGET: f64 = 4.0e18;

/// Picks the smallest power of ten (up to 10⁹) that makes every weight
/// integral. When none does, uses the largest factor the overflow budget
/// allows and flags the scale as inexact; the flow optimum is then optimal
/// for weights rounded at that precision.
pub fn weight_scale(weights: &[f64], nodes: usize) -> WeightScale {
    let max_w = weights.iter().fold(0.0f64, |a, &w| a.max(w));
    let fits = |f: f64| max_w * f * (nodes as f64 + 2.0) <= COST_BUDGET;
    let integral = |f: f64| {
        weights.iter().all(|&w| {
            let v = w * f;
            (v - v.round()).abs() <= (v.abs() * 8.0 * f64::EPSILON).max(1e-6)
        })
    };
    let mut best_fit = None;
    for k in 0..=9 {
        let f = 10f64.powi(k);
        if !fits(f) {
            break;
        }
        if integral(f) {
            return WeightScale {
                factor: f,
                exact: true,
            };
        }
        best_fit = Some(f);
    }
    let factor = best_fit.unwrap_or_else(|| {
        let mut f = 1.0;
        while !fits(f) {
            f /= 10.0;
        }
        f
    });
    WeightScale {
        factor,
        exact: false,
    }
}

/// The flow network for an instance, with the arc id of every edge.
#[derive(Debug, Clone)]
pub struct CrecNetwork {
    pub graph: MinCostFlow,
    pub source: usize,
    pub sink: usize,
    /// `edge_arcs[e]` is the buyer→seller arc of edge `e`.
    pub edge_arcs: Vec<usize>,
    pub scale: WeightScale,
}

/// Node layout: `0` source, `1..=m` buyers, `m+1..=m+n` sellers, `m+n+1`
/// sink.
pub fn build_network(inst: &Instance) -> CrecNetwork {
    let m = inst.buyers;
    let n = inst.sellers;
    let nodes = m + n + 2;
    let weights: Vec<f64> = inst.edges.iter().map(|e| e.weight).collect();
    let scale = weight_scale(&weights, nodes);
    let mut graph = MinCostFlow::new(nodes);
    let source = 0;
    let sink = m + n + 1;
    for (i, &d) in inst.buyer_bounds.iter().enumerate() {
        graph.add_arc(source, 1 + i, i64::from(d), 0);
    }
    let edge_arcs = inst
        .edges
        .iter()
        .map(|e| {
            let cost = -(e.weight * scale.factor).round() as i64;
            graph.add_arc(1 + e.buyer, 1 + m + e.seller, 1, cost)
        })
        .collect();
    for (j, &d) in inst.seller_bounds.iter().enumerate() {
        graph.add_arc(1 + m + j, sink, i64::from(d), 0);
    }
    CrecNetwork {
        graph,
        source,
        sink,
        edge_arcs,
        scale,
    }
}

/// Maximum-weight selection under degree bounds. Conflicts are ignored.
pub fn solve_crec(inst: &Instance) -> Result<(Recommendation, SolveReport)> {
    ensure_valid(inst)?;
    let start = Instant::now();
    let mut net = build_network(inst);
    let outcome = net.graph.min_cost_any_flow(net.source, net.sink);
    let selected = net
        .edge_arcs
        .iter()
        .enumerate()
        .filter(|&(_, &a)| net.graph.flow_on(a) > 0)
        .map(|(e, _)| e);
    let rec = Recommendation::from_edges(inst, selected);
    let mut report = SolveReport::new(Method::CrecFlow, &rec, start.elapsed().as_secs_f64());
    report.feasible = check_feasible(&inst.without_conflicts(), &rec).is_ok();
    report.iterations = outcome.augmentations;
    report.optimal = Some(net.scale.exact);
    report.notes.push(format!(
        "weight scale {} ({}), {} phases",
        net.scale.factor,
        if net.scale.exact { "exact" } else { "rounded" },
        outcome.phases
    ));
    Ok((rec, report))
}

/// `A x ≤ D`, `0 ≤ x ≤ 1`, with one column per existing edge.
#[derive(Debug, Clone, PartialEq)]
pub struct LpEncoding {
    /// `m + n`: buyer rows first, then seller rows.
    pub rows: usize,
    /// The two nonzero rows of each column: `[buyer, m + seller]`.
    pub columns: Vec<[usize; 2]>,
    pub rhs: Vec<f64>,
    pub weights: Vec<f64>,
}

impl LpEncoding {
    pub fn dense(&self) -> Vec<Vec<f64>> {
        let mut a = vec![vec![0.0; self.columns.len()]; self.rows];
        for (c, rows) in self.columns.iter().enumerate() {
            for &r in rows {
                a[r][c] = 1.0;
            }
        }
        a
    }

    /// `A x`.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.rows];
        for (rows, &v) in self.columns.iter().zip(x) {
            for &r in rows {
                out[r] += v;
            }
        }
        out
    }

    pub fn to_program(&self) -> LinearProgram {
        let mut lp = LinearProgram::unit_box(self.columns.len());
        lp.objective.clone_from(&self.weights);
        let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); self.rows];
        for (c, cols) in self.columns.iter().enumerate() {
            for &r in cols {
                rows[r].push((c, 1.0));
            }
        }
        for (coeffs, &rhs) in rows.into_iter().zip(&self.rhs) {
            lp.add_row(coeffs, rhs);
        }
        lp
    }
}

pub fn build_lp(inst: &Instance) -> LpEncoding {
    let m = inst.buyers;
    LpEncoding {
        rows: m + inst.sellers,
        columns: inst.edges.iter().map(|e| [e.buyer, m + e.seller]).collect(),
        rhs: inst
            .buyer_bounds
            .iter()
            .chain(&inst.seller_bounds)
            .map(|&d| f64::from(d))
            .collect(),
        weights: inst.edges.iter().map(|e| e.weight).collect(),
    }
}

/// Vertex solution of the C-REC LP relaxation.
#[derive(Debug, Clone, PartialEq)]
pub struct CrecLpSolution {
    pub x: Vec<f64>,
    pub objective: f64,
    pub iterations: usize,
    /// Largest distance of any coordinate from {0, 1}.
    pub max_fractionality: f64,
}

pub fn solve_crec_lp(inst: &Instance) -> Result<CrecLpSolution> {
    ensure_valid(inst)?;
    let lp = build_lp(inst).to_program();
    let sol = simplex_solve(&lp, &SimplexOptions::default())?;
    let max_fractionality = sol
        .x
        .iter()
        .map(|v| (v - v.round()).abs())
        .fold(0.0, f64::max);
    Ok(CrecLpSolution {
        x: sol.x,
        objective: sol.objective,
        iterations: sol.iterations,
        max_fractionality,
    })
}

/// The LP route as a solver: fails rather than round a fractional vertex.
pub fn solve_crec_via_lp(inst: &Instance) -> Result<(Recommendation, SolveReport)> {
    let start = Instant::now();
    let sol = solve_crec_lp(inst)?;
    if sol.max_fractionality > 1e-7 {
        return Err(LpError::Numerical(format!(
            "LP vertex is fractional (max distance {:e})",
            sol.max_fractionality
        ))
        .into());
    }
    let rec = Recommendation::from_edges(
        inst,
        sol.x.iter().enumerate().filter(|(_, &v)| v > 0.5).map(|(e, _)| e),
    );
    let mut report = SolveReport::new(Method::CrecLp, &rec, start.elapsed().as_secs_f64());
    report.feasible = check_feasible(&inst.without_conflicts(), &rec).is_ok();
    report.upper_bound = Some(sol.objective);
    report.relaxation = Some(sol.objective);
    report.iterations = sol.iterations as u64;
    report.optimal = Some(true);
    Ok((rec, report))
}
