//! Interval scheduling with revenues, reduced to CAC-REC.
//!
//! Jobs become buyers and machines become sellers. Job `j` may be recommended
//! to machine `m` iff `m` is eligible for `j`, with the revenue as weight.
//! Two jobs conflict iff their intervals overlap. Every job has degree bound
//! 1, every machine the number of jobs, and every threshold is 0, so a
//! feasible selection is exactly a feasible schedule with the same revenue.
//!
//! RMIS file format (1-based machines, half-open intervals):
//!
//! ```json
//! {"version":1,"machines":2,
//!  "jobs":[{"interval":[0,2],"eligible":[[1,5.0],[2,1.0]]}]}
//! ```

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::model::{check_feasible, Instance, Recommendation, FORMAT_VERSION};
use crate::oracle::{schedule_is_feasible, Job, RmisInstance, Schedule};
use crate::{Error, Result};

pub fn rmis_to_cacrec(rmis: &RmisInstance) -> Result<Instance> {
    rmis.validate()?;
    let n = rmis.jobs.len();
    let bound = u32::try_from(n).expect("job count fits in u32");
    let mut inst = Instance::new(n, rmis.machines);
    inst.buyer_bounds = vec![1; n];
    inst.seller_bounds = vec![bound; rmis.machines];
    for (j, job) in rmis.jobs.iter().enumerate() {
        for &(m, r) in &job.revenue {
            inst.add_edge(j, m, r);
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            if rmis.jobs[a].overlaps(&rmis.jobs[b]) {
                inst.add_conflict(a, b);
            }
        }
    }
    Ok(inst)
}

/// Reads a selection on `rmis_to_cacrec(rmis)` back as a schedule.
pub fn cacrec_solution_to_schedule(rmis: &RmisInstance, rec: &Recommendation) -> Result<Schedule> {
    let inst = rmis_to_cacrec(rmis)?;
    let feasibility = check_feasible(&inst, rec);
    if !feasibility.is_ok() {
        let msg = feasibility
            .violations
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join("; ");
        return Err(Error::Infeasible(msg));
    }
    let mut schedule = vec![None; rmis.jobs.len()];
    for &e in rec.selected() {
        let edge = &inst.edges[e];
        schedule[edge.buyer] = Some(edge.seller);
    }
    debug_assert!(schedule_is_feasible(rmis, &schedule));
    Ok(schedule)
}

/// The selection on `rmis_to_cacrec(rmis)` that encodes `schedule`.
pub fn schedule_to_cacrec_solution(
    rmis: &RmisInstance,
    schedule: &Schedule,
) -> Result<Recommendation> {
    if !schedule_is_feasible(rmis, schedule) {
        return Err(Error::Infeasible("schedule is not feasible".into()));
    }
    let inst = rmis_to_cacrec(rmis)?;
    let ids = inst
        .edges
        .iter()
        .enumerate()
        .filter(|(_, e)| schedule[e.buyer] == Some(e.seller))
        .map(|(k, _)| k);
    Ok(Recommendation::from_edges(&inst, ids))
}

#[derive(Serialize, Deserialize)]
struct JobDoc {
    interval: (i64, i64),
    eligible: Vec<(usize, f64)>,
}

#[derive(Serialize, Deserialize)]
struct RmisDoc {
    version: u32,
    machines: usize,
    jobs: Vec<JobDoc>,
}

pub fn rmis_to_json(rmis: &RmisInstance) -> String {
    let doc = RmisDoc {
        version: FORMAT_VERSION,
        machines: rmis.machines,
        jobs: rmis
            .jobs
            .iter()
            .map(|j| JobDoc {
                interval: (j.start, j.end),
                eligible: j.revenue.iter().map(|&(m, r)| (m + 1, r)).collect(),
            })
            .collect(),
    };
    let mut s = serde_json::to_string(&doc).expect("rmis serializes");
    s.push('\n');
    s
}

pub fn rmis_from_json(text: &str) -> Result<RmisInstance> {
    let doc: RmisDoc = serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
    if doc.version != FORMAT_VERSION {
        return Err(Error::VersionMismatch {
            found: doc.version,
            expected: FORMAT_VERSION,
        });
    }
    let rmis = RmisInstance {
        machines: doc.machines,
        jobs: doc
            .jobs
            .into_iter()
            .map(|j| Job {
                start: j.interval.0,
                end: j.interval.1,
                revenue: j
                    .eligible
                    .into_iter()
                    .map(|(m, r)| (m.wrapping_sub(1), r))
                    .collect(),
            })
            .collect(),
    };
    rmis.validate()?;
    Ok(rmis)
}

pub fn read_rmis(path: impl AsRef<Path>) -> Result<RmisInstance> {
    let path = path.as_ref();
    rmis_from_json(&fs::read_to_string(path).map_err(|e| Error::io(path, e))?)
}

pub fn write_rmis(rmis: &RmisInstance, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, rmis_to_json(rmis)).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{brute_force_cacrec, brute_force_rmis};

    fn overlapping() -> RmisInstance {
        RmisInstance {
            machines: 1,
            jobs: vec![
                Job { start: 0, end: 2, revenue: vec![(0, 5.0)] },
                Job { start: 1, end: 3, revenue: vec![(0, 3.0)] },
            ],
        }
    }

    #[test]
    fn two_overlapping_jobs() {
        let inst = rmis_to_cacrec(&overlapping()).unwrap();
        let w: Vec<f64> = inst.edges.iter().map(|e| e.weight).collect();
        assert_eq!(w, vec![5.0, 3.0]);
        assert_eq!(inst.conflicts, vec![(0, 1)]);
        assert_eq!(inst.buyer_bounds, vec![1, 1]);
        assert_eq!(inst.seller_bounds, vec![2]);
        assert_eq!(inst.thresholds, vec![0]);
        assert_eq!(brute_force_cacrec(&inst).unwrap().1, brute_force_rmis(&overlapping()).unwrap().1);
    }

    #[test]
    fn disjoint_jobs_have_no_conflicts() {
        let mut r = overlapping();
        r.jobs[1].start = 2;
        r.jobs[1].end = 4;
        assert!(rmis_to_cacrec(&r).unwrap().conflicts.is_empty());
    }

    #[test]
    fn schedule_round_trip() {
        let r = overlapping();
        let inst = rmis_to_cacrec(&r).unwrap();
        let (rec, _) = brute_force_cacrec(&inst).unwrap();
        let schedule = cacrec_solution_to_schedule(&r, &rec).unwrap();
        assert_eq!(schedule, vec![Some(0), None]);
        assert_eq!(schedule_to_cacrec_solution(&r, &schedule).unwrap(), rec);
        let both = Recommendation::from_edges(&inst, [0, 1]);
        assert!(matches!(cacrec_solution_to_schedule(&r, &both), Err(Error::Infeasible(_))));
    }

    #[test]
    fn file_round_trip() {
        let r = overlapping();
        let text = rmis_to_json(&r);
        assert_eq!(
            text,
            "{\"version\":1,\"machines\":1,\"jobs\":[{\"interval\":[0,2],\"eligible\":[[1,5.0]]},{\"interval\":[1,3],\"eligible\":[[1,3.0]]}]}\n"
        );
        assert_eq!(rmis_from_json(&text).unwrap(), r);
        assert!(rmis_from_json(&text.replace("[[1,5.0]]", "[[0,5.0]]")).is_err());
    }
}
