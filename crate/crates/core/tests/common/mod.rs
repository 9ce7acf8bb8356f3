#![allow(dead_code)]

use bsrec::genlab::{random_instance, RandomSpec};
use bsrec::oracle::{Job, RmisInstance};
use bsrec::Instance;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn instance(seed: u64, spec: &RandomSpec) -> Instance {
    random_instance(&mut rng(seed), spec)
}

pub fn small(seed: u64) -> Instance {
    instance(seed, &RandomSpec::default())
}

/// Feasibility straight from the definition, over a 0/1 edge indicator.
pub fn naive_feasible(inst: &Instance, x: &[bool]) -> bool {
    for i in 0..inst.buyers {
        let deg = inst.edges.iter().zip(x).filter(|(e, &s)| s && e.buyer == i).count();
        if deg > inst.buyer_bounds[i] as usize {
            return false;
        }
    }
    for j in 0..inst.sellers {
        let deg = inst.edges.iter().zip(x).filter(|(e, &s)| s && e.seller == j).count();
        if deg > inst.seller_bounds[j] as usize {
            return false;
        }
        let picked = |b: usize| {
            inst.edges
                .iter()
                .zip(x)
                .any(|(e, &s)| s && e.buyer == b && e.seller == j)
        };
        let pairs = inst
            .conflicts
            .iter()
            .filter(|&&(a, b)| picked(a) && picked(b))
            .count();
        if pairs > inst.thresholds[j] as usize {
            return false;
        }
    }
    true
}

pub fn selection_from_mask(inst: &Instance, mask: u64) -> Vec<bool> {
    (0..inst.edges.len()).map(|k| mask >> k & 1 == 1).collect()
}

pub fn ids(x: &[bool]) -> impl Iterator<Item = usize> + '_ {
    x.iter().enumerate().filter(|(_, &s)| s).map(|(k, _)| k)
}

pub fn random_rmis(seed: u64, max_jobs: usize, max_machines: usize) -> RmisInstance {
    let mut r = rng(seed);
    let machines = r.random_range(1..=max_machines);
    let n = r.random_range(1..=max_jobs);
    let jobs = (0..n)
        .map(|_| {
            let start = r.random_range(0..10i64);
            let end = start + r.random_range(1..5i64);
            let mut revenue = Vec::new();
            for m in 0..machines {
                if r.random_bool(0.7) {
                    revenue.push((m, r.random_range(0..10u32) as f64));
                }
            }
            Job {
                start,
                end,
                revenue,
            }
        })
        .collect();
    RmisInstance { machines, jobs }
}

/// `true` when `a` and `b` agree within `tol · (1 + |b|)`.
pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + b.abs())
}
