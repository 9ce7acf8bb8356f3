//! CAC-REC as a 0-1 integer program.
//!
//! Variables are one `x` per edge and one `z` per seller `k` and conflict
//! pair in `C_k` (pairs whose buyers are both adjacent to `k`). The rows are
//!
//! * degree rows, as in [`crate::crec::build_lp`];
//! * `x_ik + x_jk - z ≤ 1` and `2z - x_ik - x_jk ≤ 0`, which force
//!   `z = x_ik ∧ x_jk` at 0-1 points;
//! * `Σ z ≤ t(k)` per seller.
//!
//! A seller with `t(k) ≥ |C_k|` can never violate its threshold, so its
//! threshold row, `z` variables and linking rows are left out.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::time::{Duration, Instant};

use crate::cacrec_greedy::solve_greedy;
use crate::crec::build_lp;
pub use crate::lp::simplex_solve;
use crate::lp::{LinearProgram, LpError, LpSolution, SimplexOptions};
use crate::model::{
    check_feasible, ensure_valid, Adjacency, Instance, Method, Recommendation, SelectionState,
    SolveReport,
};
use crate::Result;

const INT_TOL: f64 = 1e-7;

/// `z` for the conflict pair `(edge_a, edge_b)` at `seller`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ZVar {
    pub seller: usize,
    pub edges: (usize, usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct MilpProgram {
    /// Relaxation with `0 ≤ x, z ≤ 1`. Columns `0..num_edge_vars` are the
    /// edges in instance order; `z_vars[i]` is column `num_edge_vars + i`.
    pub lp: LinearProgram,
    pub num_edge_vars: usize,
    pub z_vars: Vec<ZVar>,
    /// `(seller, row)` of every threshold row kept.
    pub threshold_rows: Vec<(usize, usize)>,
    /// Sellers whose threshold cannot bind.
    pub dropped_threshold_rows: Vec<usize>,
}

pub fn build_milp(inst: &Instance) -> MilpProgram {
    let base = build_lp(inst).to_program();
    let num_edge_vars = inst.edges.len();
    let adj = Adjacency::new(inst);
    let per_seller = adj.seller_conflict_pairs(inst);
    let mut z_vars = Vec::new();
    let mut kept: Vec<(usize, &Vec<(usize, usize)>)> = Vec::new();
    let mut dropped_threshold_rows = Vec::new();
    for (k, pairs) in per_seller.iter().enumerate() {
        if pairs.is_empty() {
            continue;
        }
        if inst.thresholds[k] as usize >= pairs.len() {
            dropped_threshold_rows.push(k);
        } else {
            kept.push((k, pairs));
        }
    }
    for &(k, pairs) in &kept {
        z_vars.extend(pairs.iter().map(|&edges| ZVar { seller: k, edges }));
    }
    let mut lp = LinearProgram::unit_box(num_edge_vars + z_vars.len());
    lp.objective[..num_edge_vars].copy_from_slice(&base.objective);
    lp.rows = base.rows;
    for (i, z) in z_vars.iter().enumerate() {
        let col = num_edge_vars + i;
        let (a, b) = z.edges;
        lp.add_row(vec![(a, 1.0), (b, 1.0), (col, -1.0)], 1.0);
        lp.add_row(vec![(col, 2.0), (a, -1.0), (b, -1.0)], 0.0);
    }
    let mut threshold_rows = Vec::with_capacity(kept.len());
    let mut col = num_edge_vars;
    for &(k, pairs) in &kept {
        threshold_rows.push((k, lp.rows.len()));
        let coeffs = (col..col + pairs.len()).map(|c| (c, 1.0)).collect();
        lp.add_row(coeffs, f64::from(inst.thresholds[k]));
        col += pairs.len();
    }
    MilpProgram {
        lp,
        num_edge_vars,
        z_vars,
        threshold_rows,
        dropped_threshold_rows,
    }
}

fn solve_relaxation(program: &MilpProgram) -> Result<LpSolution> {
    Ok(simplex_solve(&program.lp, &SimplexOptions::default())?)
}

/// Rounds the relaxation: edges in decreasing LP value (ties by weight
/// descending, then `(buyer, seller)`), each kept if still feasible.
pub fn solve_lp_rounding(inst: &Instance) -> Result<(Recommendation, SolveReport)> {
    ensure_valid(inst)?;
    let start = Instant::now();
    let program = build_milp(inst);
    let sol = solve_relaxation(&program)?;
    let x = &sol.x[..program.num_edge_vars];
    let mut order: Vec<usize> = (0..x.len()).filter(|&e| x[e] > INT_TOL).collect();
    order.sort_by(|&a, &b| {
        let (ea, eb) = (&inst.edges[a], &inst.edges[b]);
        x[b].total_cmp(&x[a])
            .then(eb.weight.total_cmp(&ea.weight))
            .then((ea.buyer, ea.seller).cmp(&(eb.buyer, eb.seller)))
    });
    let adj = Adjacency::new(inst);
    let mut state = SelectionState::new(inst, &adj);
    for e in order {
        state.try_add(e);
    }
    let rec = state.into_recommendation();
    let mut report = SolveReport::new(Method::LpRound, &rec, start.elapsed().as_secs_f64());
    report.feasible = check_feasible(inst, &rec).is_ok();
    report.upper_bound = Some(sol.objective);
    report.relaxation = Some(sol.objective);
    report.iterations = sol.iterations as u64;
    if sol.bland_engaged {
        report.notes.push("simplex fell back to Bland's rule".into());
    }
    Ok((rec, report))
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct IlpLimits {
    pub node_limit: Option<u64>,
    pub time_limit: Option<Duration>,
}

impl IlpLimits {
    pub fn none() -> Self {
        IlpLimits::default()
    }
}

#[derive(Debug, Clone)]
struct Node {
    bound: f64,
    depth: usize,
    seq: u64,
    fixings: Vec<(usize, f64)>,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Node {}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Node {
    // Max-heap: best bound, then deeper, then older.
    fn cmp(&self, other: &Self) -> Ordering {
        self.bound
            .total_cmp(&other.bound)
            .then(self.depth.cmp(&other.depth))
            .then(other.seq.cmp(&self.seq))
    }
}

/// Node LP with `fixings` applied. Pure in `(program, fixings)`.
fn evaluate_node(program: &MilpProgram, fixings: &[(usize, f64)]) -> Result<Option<LpSolution>> {
    let mut lp = program.lp.clone();
    for &(j, v) in fixings {
        lp.lower[j] = v;
        lp.upper[j] = v;
    }
    match simplex_solve(&lp, &SimplexOptions::default()) {
        Ok(sol) => Ok(Some(sol)),
        Err(LpError::Infeasible) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

fn most_fractional(x: &[f64]) -> Option<usize> {
    let mut best = None;
    let mut best_dist = INT_TOL;
    for (j, &v) in x.iter().enumerate() {
        let dist = (v - v.round()).abs();
        if dist > best_dist {
            best_dist = dist;
            best = Some(j);
        }
    }
    best
}

/// Best-first branch-and-bound on the relaxation of [`build_milp`].
///
/// Without limits the result is optimal and `upper_bound` equals the
/// objective. When a limit stops the search the incumbent is returned with
/// `optimal = Some(false)` and the best open bound as `upper_bound`.
pub fn solve_ilp(inst: &Instance, limits: &IlpLimits) -> Result<(Recommendation, SolveReport)> {
    ensure_valid(inst)?;
    let start = Instant::now();
    let program = build_milp(inst);
    let (mut incumbent, _) = solve_greedy(inst)?;
    let tol = |v: f64| 1e-6 * (1.0 + v.abs());

    let mut heap = BinaryHeap::new();
    heap.push(Node {
        bound: f64::INFINITY,
        depth: 0,
        seq: 0,
        fixings: Vec::new(),
    });
    let mut seq = 1;
    let mut nodes = 0u64;
    let mut iterations = 0u64;
    let mut root_bound = None;
    let mut stopped: Option<&str> = None;
    let mut open_bound = f64::NEG_INFINITY;

    while let Some(node) = heap.pop() {
        let inc = incumbent.objective();
        if node.bound <= inc + tol(inc) {
            heap.clear();
            break;
        }
        if limits.node_limit.is_some_and(|n| nodes >= n) {
            stopped = Some("node limit");
        } else if limits.time_limit.is_some_and(|t| start.elapsed() >= t) {
            stopped = Some("time limit");
        }
        if stopped.is_some() {
            open_bound = node.bound;
            break;
        }
        nodes += 1;
        let Some(sol) = evaluate_node(&program, &node.fixings)? else {
            continue;
        };
        iterations += sol.iterations as u64;
        if root_bound.is_none() {
            root_bound = Some(sol.objective);
        }
        if sol.objective <= inc + tol(inc) {
            continue;
        }
        let x = &sol.x[..program.num_edge_vars];
        match most_fractional(x) {
            None => {
                let rec = Recommendation::from_edges(
                    inst,
                    x.iter().enumerate().filter(|(_, &v)| v > 0.5).map(|(e, _)| e),
                );
                if rec.objective() > inc && check_feasible(inst, &rec).is_ok() {
                    incumbent = rec;
                }
            }
            Some(j) => {
                for v in [1.0, 0.0] {
                    let mut fixings = node.fixings.clone();
                    fixings.push((j, v));
                    heap.push(Node {
                        bound: sol.objective,
                        depth: node.depth + 1,
                        seq,
                        fixings,
                    });
                    seq += 1;
                }
            }
        }
    }

    let objective = incumbent.objective();
    let mut report = SolveReport::new(Method::Ilp, &incumbent, start.elapsed().as_secs_f64());
    report.feasible = check_feasible(inst, &incumbent).is_ok();
    report.nodes = nodes;
    report.iterations = iterations;
    report.relaxation = root_bound;
    match stopped {
        None => {
            report.optimal = Some(true);
            report.upper_bound = Some(objective);
        }
        Some(why) => {
            report.optimal = Some(false);
            report.upper_bound = Some(open_bound.max(objective));
            report.notes.push(format!("stopped by {why}"));
        }
    }
    report.notes.push(format!(
        "{} z variables, {} threshold rows, {} dropped",
        program.z_vars.len(),
        program.threshold_rows.len(),
        program.dropped_threshold_rows.len()
    ));
    Ok((incumbent, report))
}
