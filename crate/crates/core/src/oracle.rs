//! Exhaustive solvers for tiny instances, used as ground truth.
//!
//! Edges are enumerated in `(buyer, seller)` order, including an edge before
//! excluding it. Among optimal selections the first one met wins, i.e. the
//! lexicographically largest indicator vector over that order.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::model::{check_feasible, ensure_valid, Instance, Recommendation};
use crate::{Error, Result};

pub const MAX_ORACLE_EDGES: usize = 20;
pub const MAX_RMIS_JOBS: usize = 10;
pub const MAX_RMIS_MACHINES: usize = 5;

fn sorted_edges(inst: &Instance) -> Vec<usize> {
    let mut order: Vec<usize> = (0..inst.edges.len()).collect();
    order.sort_by_key(|&e| (inst.edges[e].buyer, inst.edges[e].seller));
    order
}

fn check_size(inst: &Instance) -> Result<()> {
    ensure_valid(inst)?;
    if inst.edges.len() > MAX_ORACLE_EDGES {
        return Err(Error::OracleTooLarge {
            what: "edge set",
            size: inst.edges.len(),
            cap: MAX_ORACLE_EDGES,
        });
    }
    Ok(())
}

struct Search<'a> {
    inst: &'a Instance,
    order: Vec<usize>,
    conflicts: HashSet<(usize, usize)>,
    use_conflicts: bool,
    buyer_load: Vec<u32>,
    seller_load: Vec<u32>,
    seller_pairs: Vec<u64>,
    chosen: Vec<usize>,
    best: Vec<usize>,
    best_value: f64,
}

impl Search<'_> {
    fn new_pairs(&self, edge: usize) -> u64 {
        let e = &self.inst.edges[edge];
        self.chosen
            .iter()
            .map(|&c| &self.inst.edges[c])
            .filter(|c| c.seller == e.seller)
            .filter(|c| {
                self.conflicts
                    .contains(&(c.buyer.min(e.buyer), c.buyer.max(e.buyer)))
            })
            .count() as u64
    }

    fn run(&mut self, pos: usize, value: f64) {
        if pos == self.order.len() {
            if value > self.best_value {
                self.best_value = value;
                self.best.clone_from(&self.chosen);
            }
            return;
        }
        let id = self.order[pos];
        let e = self.inst.edges[id];
        let pairs = if self.use_conflicts { self.new_pairs(id) } else { 0 };
        if self.buyer_load[e.buyer] < self.inst.buyer_bounds[e.buyer]
            && self.seller_load[e.seller] < self.inst.seller_bounds[e.seller]
            && self.seller_pairs[e.seller] + pairs <= u64::from(self.inst.thresholds[e.seller])
        {
            self.buyer_load[e.buyer] += 1;
            self.seller_load[e.seller] += 1;
            self.seller_pairs[e.seller] += pairs;
            self.chosen.push(id);
            self.run(pos + 1, value + e.weight);
            self.chosen.pop();
            self.buyer_load[e.buyer] -= 1;
            self.seller_load[e.seller] -= 1;
            self.seller_pairs[e.seller] -= pairs;
        }
        self.run(pos + 1, value);
    }
}

fn search(inst: &Instance, use_conflicts: bool) -> Result<(Recommendation, f64)> {
    check_size(inst)?;
    let mut s = Search {
        inst,
        order: sorted_edges(inst),
        conflicts: inst.conflicts.iter().copied().collect(),
        use_conflicts,
        buyer_load: vec![0; inst.buyers],
        seller_load: vec![0; inst.sellers],
        seller_pairs: vec![0; inst.sellers],
        chosen: Vec::new(),
        best: Vec::new(),
        best_value: f64::NEG_INFINITY,
    };
    s.run(0, 0.0);
    let rec = Recommendation::from_edges(inst, s.best);
    let objective = rec.objective();
    Ok((rec, objective))
}

/// Best selection under degree bounds only.
pub fn brute_force_crec(inst: &Instance) -> Result<(Recommendation, f64)> {
    search(inst, false)
}

/// Best selection under degree bounds and conflict thresholds.
pub fn brute_force_cacrec(inst: &Instance) -> Result<(Recommendation, f64)> {
    search(inst, true)
}

/// Plain enumeration of all `2^|E|` subsets, each checked with
/// [`check_feasible`]. Same tie rule as [`brute_force_cacrec`].
pub fn brute_force_cacrec_unpruned(inst: &Instance) -> Result<(Recommendation, f64)> {
    check_size(inst)?;
    let order = sorted_edges(inst);
    let k = order.len();
    let mut best: Option<(u32, f64)> = None;
    for mask in (0..1u32 << k).rev() {
        let ids: Vec<usize> = (0..k)
            .filter(|&p| mask >> (k - 1 - p) & 1 == 1)
            .map(|p| order[p])
            .collect();
        let value: f64 = ids.iter().map(|&e| inst.edges[e].weight).sum();
        if best.is_some_and(|(_, v)| value <= v) {
            continue;
        }
        if check_feasible(inst, &Recommendation::from_edges(inst, ids)).is_ok() {
            best = Some((mask, value));
        }
    }
    let (mask, _) = best.expect("the empty selection is feasible");
    let rec = Recommendation::from_edges(
        inst,
        (0..k).filter(|&p| mask >> (k - 1 - p) & 1 == 1).map(|p| order[p]),
    );
    let objective = rec.objective();
    Ok((rec, objective))
}

/// A job with a half-open time interval `[start, end)` and the revenue it
/// earns on each eligible machine (0-based machine ids).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Job {
    pub start: i64,
    pub end: i64,
    pub revenue: Vec<(usize, f64)>,
}

impl Job {
    pub fn overlaps(&self, other: &Job) -> bool {
        self.start < other.end && other.start < self.end
    }

    pub fn revenue_on(&self, machine: usize) -> Option<f64> {
        self.revenue
            .iter()
            .find(|&&(m, _)| m == machine)
            .map(|&(_, r)| r)
    }
}

/// Revenue maximization in interval scheduling.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RmisInstance {
    pub machines: usize,
    pub jobs: Vec<Job>,
}

impl RmisInstance {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidRmis(msg));
        if self.machines == 0 || self.jobs.is_empty() {
            return bad("need at least one machine and one job".into());
        }
        for (j, job) in self.jobs.iter().enumerate() {
            if job.start >= job.end {
                return bad(format!("job {} has an empty interval", j + 1));
            }
            let mut seen = HashSet::new();
            for &(m, r) in &job.revenue {
                if m >= self.machines {
                    return bad(format!("job {}: machine {} out of range", j + 1, m.wrapping_add(1)));
                }
                if !seen.insert(m) {
                    return bad(format!("job {}: machine {} listed twice", j + 1, m + 1));
                }
                if !(r.is_finite() && r >= 0.0) {
                    return bad(format!("job {}: revenue must be finite and nonnegative", j + 1));
                }
            }
        }
        Ok(())
    }
}

/// `schedule[j]` is the machine of job `j`, if it runs.
pub type Schedule = Vec<Option<usize>>;

/// Every scheduled job runs on an eligible machine and no machine runs two
/// overlapping jobs.
pub fn schedule_is_feasible(rmis: &RmisInstance, schedule: &Schedule) -> bool {
    if schedule.len() != rmis.jobs.len() {
        return false;
    }
    for (a, ma) in schedule.iter().enumerate() {
        let Some(ma) = *ma else { continue };
        if rmis.jobs[a].revenue_on(ma).is_none() {
            return false;
        }
        for b in a + 1..schedule.len() {
            if schedule[b] == Some(ma) && rmis.jobs[a].overlaps(&rmis.jobs[b]) {
                return false;
            }
        }
    }
    true
}

pub fn schedule_revenue(rmis: &RmisInstance, schedule: &Schedule) -> f64 {
    schedule
        .iter()
        .zip(&rmis.jobs)
        .filter_map(|(m, job)| m.and_then(|m| job.revenue_on(m)))
        .sum()
}

/// Best schedule by trying every job on every eligible machine or nowhere.
pub fn brute_force_rmis(rmis: &RmisInstance) -> Result<(Schedule, f64)> {
    rmis.validate()?;
    if rmis.jobs.len() > MAX_RMIS_JOBS {
        return Err(Error::OracleTooLarge {
            what: "job set",
            size: rmis.jobs.len(),
            cap: MAX_RMIS_JOBS,
        });
    }
    if rmis.machines > MAX_RMIS_MACHINES {
        return Err(Error::OracleTooLarge {
            what: "machine set",
            size: rmis.machines,
            cap: MAX_RMIS_MACHINES,
        });
    }
    fn go(
        rmis: &RmisInstance,
        j: usize,
        value: f64,
        cur: &mut Schedule,
        best: &mut (Schedule, f64),
    ) {
        if j == rmis.jobs.len() {
            if value > best.1 {
                *best = (cur.clone(), value);
            }
            return;
        }
        for &(m, r) in &rmis.jobs[j].revenue {
            let clash = (0..j).any(|i| cur[i] == Some(m) && rmis.jobs[i].overlaps(&rmis.jobs[j]));
            if !clash {
                cur[j] = Some(m);
                go(rmis, j + 1, value + r, cur, best);
            }
        }
        cur[j] = None;
        go(rmis, j + 1, value, cur, best);
    }
    let mut cur = vec![None; rmis.jobs.len()];
    let mut best = (cur.clone(), f64::NEG_INFINITY);
    go(rmis, 0, 0.0, &mut cur, &mut best);
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_edge() {
        let mut inst = Instance::new(1, 1).with_bounds(1, 1);
        inst.add_edge(0, 0, 2.0);
        let (rec, obj) = brute_force_crec(&inst).unwrap();
        assert_eq!(rec.selected(), &[0]);
        assert_eq!(obj, 2.0);
    }

    #[test]
    fn zero_bounds_give_nothing() {
        let mut inst = Instance::new(2, 1);
        inst.add_edge(0, 0, 2.0);
        inst.add_edge(1, 0, 2.0);
        let (rec, obj) = brute_force_crec(&inst).unwrap();
        assert!(rec.is_empty());
        assert_eq!(obj, 0.0);
    }

    #[test]
    fn conflicts_respected() {
        let mut inst = Instance::new(2, 1).with_bounds(2, 2);
        inst.add_edge(0, 0, 5.0);
        inst.add_edge(1, 0, 3.0);
        inst.add_conflict(0, 1);
        assert_eq!(brute_force_crec(&inst).unwrap().1, 8.0);
        assert_eq!(brute_force_cacrec(&inst).unwrap().1, 5.0);
        assert_eq!(brute_force_cacrec_unpruned(&inst).unwrap().1, 5.0);
    }

    #[test]
    fn ties_prefer_earlier_edges() {
        let mut inst = Instance::new(2, 1).with_bounds(1, 1);
        inst.add_edge(1, 0, 1.0);
        inst.add_edge(0, 0, 1.0);
        assert_eq!(brute_force_crec(&inst).unwrap().0.selected(), &[1]);
        assert_eq!(brute_force_cacrec_unpruned(&inst).unwrap().0.selected(), &[1]);
    }

    #[test]
    fn cap_is_enforced() {
        let mut inst = Instance::new(21, 1).with_bounds(1, 1);
        for i in 0..21 {
            inst.add_edge(i, 0, 1.0);
        }
        assert!(matches!(
            brute_force_crec(&inst),
            Err(Error::OracleTooLarge { size: 21, .. })
        ));
    }

    fn job(start: i64, end: i64, revenue: &[(usize, f64)]) -> Job {
        Job {
            start,
            end,
            revenue: revenue.to_vec(),
        }
    }

    #[test]
    fn rmis_examples() {
        let one = RmisInstance {
            machines: 1,
            jobs: vec![job(0, 1, &[(0, 5.0)])],
        };
        assert_eq!(brute_force_rmis(&one).unwrap(), (vec![Some(0)], 5.0));
        let two = RmisInstance {
            machines: 1,
            jobs: vec![job(0, 2, &[(0, 5.0)]), job(1, 3, &[(0, 3.0)])],
        };
        assert_eq!(brute_force_rmis(&two).unwrap().1, 5.0);
        let touching = RmisInstance {
            machines: 1,
            jobs: vec![job(1, 2, &[(0, 5.0)]), job(2, 3, &[(0, 3.0)])],
        };
        assert_eq!(brute_force_rmis(&touching).unwrap().1, 8.0);
    }

    #[test]
    fn rmis_validation() {
        let bad = RmisInstance {
            machines: 1,
            jobs: vec![job(2, 2, &[(0, 1.0)])],
        };
        assert!(matches!(brute_force_rmis(&bad), Err(Error::InvalidRmis(_))));
        let bad = RmisInstance {
            machines: 1,
            jobs: vec![job(0, 2, &[(1, 1.0)])],
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn schedule_checks() {
        let r = RmisInstance {
            machines: 2,
            jobs: vec![job(0, 2, &[(0, 5.0), (1, 1.0)]), job(1, 3, &[(0, 3.0)])],
        };
        assert!(schedule_is_feasible(&r, &vec![Some(1), Some(0)]));
        assert!(!schedule_is_feasible(&r, &vec![Some(0), Some(0)]));
        assert!(!schedule_is_feasible(&r, &vec![None, Some(1)]));
        assert_eq!(schedule_revenue(&r, &vec![Some(1), Some(0)]), 4.0);
    }
}
