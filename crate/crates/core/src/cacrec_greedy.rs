//! Greedy CAC-REC: scan edges by decreasing weight and keep each one that
//! breaks no degree bound and no conflict threshold.
//!
//! With `d` the largest number of conflict pairs touching one buyer, the
//! feasible sets form a `(2 + d)`-extendible system, so the greedy value is
//! at least `OPT / (2 + d)`.

use std::time::Instant;

use serde::Serialize;

use crate::model::{
    check_feasible, ensure_valid, Adjacency, Instance, Method, Recommendation, SelectionState,
    SolveReport,
};
use crate::Result;

/// Edge ids by weight descending, ties by `(buyer, seller)` ascending.
pub fn greedy_order(inst: &Instance) -> Vec<usize> {
    let mut order: Vec<usize> = (0..inst.edges.len()).collect();
    order.sort_unstable_by(|&a, &b| {
        let (ea, eb) = (&inst.edges[a], &inst.edges[b]);
        eb.weight
            .total_cmp(&ea.weight)
            .then((ea.buyer, ea.seller).cmp(&(eb.buyer, eb.seller)))
    });
    order
}

pub fn solve_greedy(inst: &Instance) -> Result<(Recommendation, SolveReport)> {
    ensure_valid(inst)?;
    let start = Instant::now();
    let adj = Adjacency::new(inst);
    let mut state = SelectionState::new(inst, &adj);
    for e in greedy_order(inst) {
        state.try_add(e);
    }
    let rec = state.into_recommendation();
    let elapsed = start.elapsed().as_secs_f64();
    let mut report = SolveReport::new(Method::Greedy, &rec, elapsed);
    report.feasible = check_feasible(inst, &rec).is_ok();
    report.iterations = inst.edges.len() as u64;
    report
        .notes
        .push(format!("conflict degree d = {}", conflict_degree(inst).d));
    Ok((rec, report))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConflictDegreeSummary {
    /// Largest number of conflict pairs incident to a single buyer.
    pub d: usize,
    pub per_buyer: Vec<usize>,
    /// `histogram[c]` buyers have conflict degree `c`.
    pub histogram: Vec<usize>,
}

pub fn conflict_degree(inst: &Instance) -> ConflictDegreeSummary {
    let mut per_buyer = vec![0usize; inst.buyers];
    for &(a, b) in &inst.conflicts {
        per_buyer[a] += 1;
        per_buyer[b] += 1;
    }
    let d = per_buyer.iter().copied().max().unwrap_or(0);
    let mut histogram = vec![0usize; d + 1];
    for &c in &per_buyer {
        histogram[c] += 1;
    }
    ConflictDegreeSummary {
        d,
        per_buyer,
        histogram,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApproxCertificate {
    pub d: usize,
    pub greedy: f64,
    pub optimum: f64,
    /// `optimum / greedy`; 1 when both are zero.
    pub ratio: f64,
    pub bound: f64,
    pub holds: bool,
}

/// Compares a greedy value against a known optimum.
pub fn approximation_certificate(
    inst: &Instance,
    rec: &Recommendation,
    optimum: f64,
) -> ApproxCertificate {
    let d = conflict_degree(inst).d;
    let greedy = rec.objective();
    let bound = 2.0 + d as f64;
    let ratio = if greedy > 0.0 {
        optimum / greedy
    } else if optimum > 0.0 {
        f64::INFINITY
    } else {
        1.0
    };
    let holds = greedy * bound >= optimum - 1e-9 * (1.0 + optimum.abs());
    ApproxCertificate {
        d,
        greedy,
        optimum,
        ratio,
        bound,
        holds,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::first_addable_edge;

    fn conflict_pair() -> Instance {
        let mut inst = Instance::new(2, 1).with_bounds(2, 2);
        inst.add_edge(0, 0, 5.0);
        inst.add_edge(1, 0, 3.0);
        inst.add_conflict(0, 1);
        inst
    }

    #[test]
    fn zero_threshold_keeps_the_heavier_edge() {
        let inst = conflict_pair();
        let (rec, report) = solve_greedy(&inst).unwrap();
        assert_eq!(rec.selected(), &[0]);
        assert_eq!(rec.objective(), 5.0);
        assert!(report.feasible);
        assert!(first_addable_edge(&inst, &rec).is_none());
    }

    #[test]
    fn unconstrained_takes_everything() {
        let mut inst = Instance::new(3, 2).with_bounds(100, 100);
        for i in 0..3 {
            for j in 0..2 {
                inst.add_edge(i, j, (i * 2 + j) as f64 + 0.5);
            }
        }
        let (rec, _) = solve_greedy(&inst).unwrap();
        assert_eq!(rec.len(), 6);
        assert_eq!(rec.objective(), inst.total_weight());
    }

    #[test]
    fn ties_follow_buyer_then_seller() {
        let mut inst = Instance::new(2, 2).with_bounds(1, 1);
        inst.add_edge(1, 0, 1.0);
        inst.add_edge(0, 1, 1.0);
        inst.add_edge(0, 0, 1.0);
        inst.add_edge(1, 1, 1.0);
        assert_eq!(greedy_order(&inst), vec![2, 1, 0, 3]);
        let (rec, _) = solve_greedy(&inst).unwrap();
        assert_eq!(rec.pairs(&inst), vec![(0, 0), (1, 1)]);
    }

    #[test]
    fn conflict_degrees() {
        assert_eq!(conflict_degree(&Instance::new(3, 1)).d, 0);
        let mut tri = Instance::new(4, 1);
        tri.add_conflict(0, 1);
        tri.add_conflict(1, 2);
        tri.add_conflict(0, 2);
        let s = conflict_degree(&tri);
        assert_eq!(s.d, 2);
        assert_eq!(s.per_buyer, vec![2, 2, 2, 0]);
        assert_eq!(s.histogram, vec![1, 0, 3]);
    }

    #[test]
    fn certificate_ratio() {
        let inst = conflict_pair();
        let rec = Recommendation::from_edges(&inst, [1]);
        let c = approximation_certificate(&inst, &rec, 5.0);
        assert_eq!(c.d, 1);
        assert!((c.ratio - 5.0 / 3.0).abs() < 1e-12);
        assert!(c.holds);
        let c = approximation_certificate(&inst, &Recommendation::empty(), 5.0);
        assert!(!c.holds);
    }
}
