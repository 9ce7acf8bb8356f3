//! Synthetic instances shaped like the ranked marketplace graphs used in the
//! experiments.
//!
//! Buyers and sellers are ordered by rank. Each seller is connected to a
//! contiguous window of buyers; successive windows slide down the buyer
//! ranking by a fixed stride, so the top seller sees the top buyers. Conflict
//! pairs are sampled among buyers that share at least one seller.
//!
//! All randomness comes from `ChaCha8Rng::seed_from_u64(seed)`, so a config
//! produces the same instance on every platform.

use std::fmt::Write as _;

use rand::seq::index;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::model::{Adjacency, Instance};
use crate::{Error, Result};

/// Buyer and seller counts of the marketplace category in the experiments.
pub const MARKET_BUYERS: usize = 18_742;
pub const MARKET_SELLERS: usize = 1_884;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum ThresholdMode {
    /// The same threshold at every seller.
    Constant(u32),
    /// `floor(f · |C_k|)`, where `C_k` holds the conflict pairs whose buyers
    /// are both candidates of seller `k`.
    FractionOfIncidentPairs(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum WeightMode {
    /// Buyer value plus seller value.
    Money,
    /// `total_nodes / (buyer rank + seller rank)`, ranks 1-based.
    Rank,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenConfig {
    pub buyers: usize,
    pub sellers: usize,
    /// Fraction of buyers in each seller's window.
    pub density: f64,
    pub degree_ratio: f64,
    /// Fraction of candidate buyer pairs sampled into the conflict set.
    pub conflict_ratio: f64,
    pub threshold: ThresholdMode,
    pub weights: WeightMode,
    pub seed: u64,
    /// Window size; overrides `density`.
    pub window: Option<usize>,
    pub stride: Option<usize>,
    /// Rank-weight numerator; defaults to `buyers + sellers`.
    pub total_nodes: Option<usize>,
    /// Explicit monetary values; synthesized as `∝ 1/rank` when absent.
    pub buyer_values: Option<Vec<f64>>,
    pub seller_values: Option<Vec<f64>>,
}

impl GenConfig {
    pub fn new(buyers: usize, sellers: usize, seed: u64) -> Self {
        GenConfig {
            buyers,
            sellers,
            density: 0.005,
            degree_ratio: 0.5,
            conflict_ratio: 0.0,
            threshold: ThresholdMode::Constant(0),
            weights: WeightMode::Money,
            seed,
            window: None,
            stride: None,
            total_nodes: None,
            buyer_values: None,
            seller_values: None,
        }
    }

    pub fn check(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.buyers == 0 || self.sellers == 0 {
            return bad("buyer and seller counts must be positive".into());
        }
        if !(self.density > 0.0 && self.density <= 1.0) {
            return bad(format!("density {} not in (0, 1]", self.density));
        }
        if !(self.degree_ratio > 0.0 && self.degree_ratio <= 1.0) {
            return bad(format!("degree ratio {} not in (0, 1]", self.degree_ratio));
        }
        if !(0.0..=1.0).contains(&self.conflict_ratio) {
            return bad(format!("conflict ratio {} not in [0, 1]", self.conflict_ratio));
        }
        if let ThresholdMode::FractionOfIncidentPairs(f) = self.threshold {
            if !(0.0..=1.0).contains(&f) {
                return bad(format!("threshold fraction {f} not in [0, 1]"));
            }
        }
        for (name, values, len) in [
            ("buyer", &self.buyer_values, self.buyers),
            ("seller", &self.seller_values, self.sellers),
        ] {
            if let Some(v) = values {
                if v.len() != len {
                    return bad(format!("{name} values: expected {len}, found {}", v.len()));
                }
                if v.iter().any(|x| !(x.is_finite() && *x >= 0.0)) {
                    return bad(format!("{name} values must be finite and nonnegative"));
                }
            }
        }
        Ok(())
    }

    fn window_size(&self) -> usize {
        self.window
            .unwrap_or_else(|| (self.density * self.buyers as f64).round() as usize)
    }
}

/// Facts about one generated instance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GenReport {
    pub edges: usize,
    pub realized_density: f64,
    pub window: usize,
    pub stride: usize,
    /// Set when the requested window was larger than the buyer count.
    pub window_clamped: bool,
    /// Sellers whose window start was pulled back to stay in range.
    pub clamped_windows: usize,
    pub candidate_pairs: u64,
    pub conflicts: usize,
    /// SHA-256 of the `start,len` window table.
    pub window_hash: String,
}

pub fn money_weight(buyer_value: f64, seller_value: f64) -> f64 {
    buyer_value + seller_value
}

/// `i` and `j` are 1-based ranks.
pub fn rank_weight(i: usize, j: usize, total_nodes: usize) -> f64 {
    total_nodes as f64 / (i + j) as f64
}

fn round_cents(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}

/// Decreasing values `scale / rank`, rounded to cents.
pub fn synthetic_values(count: usize, scale: f64) -> Vec<f64> {
    (1..=count).map(|r| round_cents(scale / r as f64)).collect()
}

pub fn default_stride(buyers: usize, sellers: usize, window: usize) -> usize {
    if window >= buyers {
        0
    } else {
        let s = ((buyers - window) as f64 / sellers.saturating_sub(1).max(1) as f64).round();
        (s as usize).max(1)
    }
}

pub fn generate(cfg: &GenConfig) -> Result<(Instance, GenReport)> {
    cfg.check()?;
    let m = cfg.buyers;
    let n = cfg.sellers;
    let mut k = cfg.window_size();
    if k == 0 {
        return Err(Error::Config("window of zero buyers (raise density)".into()));
    }
    let window_clamped = k > m;
    k = k.min(m);
    let stride = cfg.stride.unwrap_or_else(|| default_stride(m, n, k));

    let mut starts = Vec::with_capacity(n);
    let mut clamped_windows = 0;
    for j in 0..n {
        let s = j.saturating_mul(stride);
        if s > m - k {
            clamped_windows += 1;
        }
        starts.push(s.min(m - k));
    }

    let mut table = String::new();
    for &s in &starts {
        writeln!(table, "{},{}", s + 1, k).unwrap();
    }
    let window_hash = format!("{:x}", Sha256::digest(table.as_bytes()));

    let buyer_values = cfg
        .buyer_values
        .clone()
        .unwrap_or_else(|| synthetic_values(m, 1.0e6));
    let seller_values = cfg
        .seller_values
        .clone()
        .unwrap_or_else(|| synthetic_values(n, 5.0e5));
    let total_nodes = cfg.total_nodes.unwrap_or(m + n);

    let mut inst = Instance::new(m, n);
    inst.edges.reserve(n * k);
    let mut candidates = vec![0u32; m];
    // Last buyer sharing a window with each buyer.
    let mut reach: Vec<usize> = (0..m).collect();
    for (j, &s) in starts.iter().enumerate() {
        for i in s..s + k {
            let w = match cfg.weights {
                WeightMode::Money => money_weight(buyer_values[i], seller_values[j]),
                WeightMode::Rank => rank_weight(i + 1, j + 1, total_nodes),
            };
            inst.add_edge(i, j, w);
            candidates[i] += 1;
            reach[i] = reach[i].max(s + k - 1);
        }
    }

    let bound = |c: usize| (cfg.degree_ratio * c as f64 - 1e-9).ceil().max(0.0) as u32;
    inst.buyer_bounds = candidates.iter().map(|&c| bound(c as usize)).collect();
    inst.seller_bounds = vec![bound(k); n];

    let mut prefix = Vec::with_capacity(m + 1);
    prefix.push(0u64);
    for (a, &r) in reach.iter().enumerate() {
        prefix.push(prefix[a] + (r - a) as u64);
    }
    let candidate_pairs = prefix[m];
    let amount = (cfg.conflict_ratio * candidate_pairs as f64).round() as u64;
    let amount = amount.min(candidate_pairs);
    if amount > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let mut picks: Vec<u64> =
            sample_u64(&mut rng, candidate_pairs, amount).into_iter().collect();
        picks.sort_unstable();
        inst.conflicts.reserve(picks.len());
        for x in picks {
            let a = prefix.partition_point(|&p| p <= x) - 1;
            let b = a + 1 + (x - prefix[a]) as usize;
            inst.conflicts.push((a, b));
        }
    }

    inst.thresholds = match cfg.threshold {
        ThresholdMode::Constant(v) => vec![v; n],
        ThresholdMode::FractionOfIncidentPairs(f) => incident_pair_counts(&inst)
            .into_iter()
            .map(|c| (f * c as f64 + 1e-9).floor() as u32)
            .collect(),
    };

    let report = GenReport {
        edges: inst.edges.len(),
        realized_density: inst.edges.len() as f64 / (m as f64 * n as f64),
        window: k,
        stride,
        window_clamped,
        clamped_windows,
        candidate_pairs,
        conflicts: inst.conflicts.len(),
        window_hash,
    };
    Ok((inst, report))
}

fn sample_u64(rng: &mut ChaCha8Rng, length: u64, amount: u64) -> Vec<u64> {
    let length = usize::try_from(length).expect("candidate pair count fits in usize");
    index::sample(rng, length, amount as usize)
        .into_iter()
        .map(|x| x as u64)
        .collect()
}

/// `|C_k|` for every seller.
pub fn incident_pair_counts(inst: &Instance) -> Vec<usize> {
    Adjacency::new(inst)
        .seller_conflict_pairs(inst)
        .iter()
        .map(Vec::len)
        .collect()
}

/// Restricts `inst` to its top `ceil(fraction · n)` sellers and the buyers
/// they touch. Bounds and thresholds are carried over unchanged.
pub fn edge_subset(inst: &Instance, fraction: f64) -> Instance {
    let keep_sellers = ((fraction * inst.sellers as f64).ceil() as usize).clamp(1, inst.sellers);
    let mut buyer_map = vec![usize::MAX; inst.buyers];
    for e in inst.edges.iter().filter(|e| e.seller < keep_sellers) {
        buyer_map[e.buyer] = 0;
    }
    let mut buyers = 0;
    for slot in buyer_map.iter_mut().filter(|s| **s == 0) {
        *slot = buyers;
        buyers += 1;
    }
    let mut out = Instance::new(buyers.max(1), keep_sellers);
    for e in inst.edges.iter().filter(|e| e.seller < keep_sellers) {
        out.add_edge(buyer_map[e.buyer], e.seller, e.weight);
    }
    out.buyer_bounds = (0..inst.buyers)
        .filter(|&i| buyer_map[i] != usize::MAX)
        .map(|i| inst.buyer_bounds[i])
        .collect();
    out.buyer_bounds.resize(out.buyers, 0);
    out.seller_bounds = inst.seller_bounds[..keep_sellers].to_vec();
    out.thresholds = inst.thresholds[..keep_sellers].to_vec();
    out.conflicts = inst
        .conflicts
        .iter()
        .filter(|&&(a, b)| buyer_map[a] != usize::MAX && buyer_map[b] != usize::MAX)
        .map(|&(a, b)| (buyer_map[a], buyer_map[b]))
        .collect();
    out
}

/// Shape limits for [`random_instance`].
#[derive(Debug, Clone)]
pub struct RandomSpec {
    pub max_buyers: usize,
    pub max_sellers: usize,
    pub max_edges: usize,
    pub max_bound: u32,
    pub max_conflicts: usize,
    pub max_threshold: u32,
    /// Integer weights in `0..=9`; otherwise cents in `[0, 10)`.
    pub integer_weights: bool,
}

impl Default for RandomSpec {
    fn default() -> Self {
        RandomSpec {
            max_buyers: 6,
            max_sellers: 6,
            max_edges: 12,
            max_bound: 3,
            max_conflicts: 6,
            max_threshold: 2,
            integer_weights: true,
        }
    }
}

/// A small random instance for tests and experiments.
pub fn random_instance<R: Rng + ?Sized>(rng: &mut R, spec: &RandomSpec) -> Instance {
    let m = rng.random_range(1..=spec.max_buyers.max(1));
    let n = rng.random_range(1..=spec.max_sellers.max(1));
    let mut inst = Instance::new(m, n);
    let mut pairs: Vec<(usize, usize)> = (0..m).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    pairs.shuffle(rng);
    let e = rng.random_range(0..=spec.max_edges.min(pairs.len()));
    for &(i, j) in &pairs[..e] {
        let w = if spec.integer_weights {
            f64::from(rng.random_range(0..=9u32))
        } else {
            f64::from(rng.random_range(0..1000u32)) / 100.0
        };
        inst.add_edge(i, j, w);
    }
    let mut buyer_pairs: Vec<(usize, usize)> = (0..m)
        .flat_map(|a| (a + 1..m).map(move |b| (a, b)))
        .collect();
    buyer_pairs.shuffle(rng);
    let c = rng.random_range(0..=spec.max_conflicts.min(buyer_pairs.len()));
    inst.conflicts = buyer_pairs[..c].to_vec();
    inst.conflicts.sort_unstable();
    inst.buyer_bounds = (0..m).map(|_| rng.random_range(0..=spec.max_bound)).collect();
    inst.seller_bounds = (0..n).map(|_| rng.random_range(0..=spec.max_bound)).collect();
    inst.thresholds = (0..n).map(|_| rng.random_range(0..=spec.max_threshold)).collect();
    inst
}
