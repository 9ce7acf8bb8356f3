//! Problem instances, selections, and the feasibility rules shared by every
//! solver.
//!
//! Indices are 0-based in memory and 1-based in files (see [`io`]). A buyer's
//! index doubles as its rank, 0 being the top buyer; likewise for sellers.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub mod io;

pub use io::{
    import_csv, instance_from_json, instance_to_json, read_instance, read_instance_unchecked,
    read_solution, solution_from_json, solution_to_json, write_instance, write_solution,
    CsvDefaults, SolutionDoc, FORMAT_VERSION,
};

/// A candidate recommendation of `buyer` to `seller`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub buyer: usize,
    pub seller: usize,
    pub weight: f64,
}

/// A C-REC / CAC-REC problem.
///
/// C-REC instances simply carry no conflicts. Thresholds are per seller; a
/// global threshold is stored by repeating it.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub buyers: usize,
    pub sellers: usize,
    pub edges: Vec<Edge>,
    pub buyer_bounds: Vec<u32>,
    pub seller_bounds: Vec<u32>,
    /// Unordered buyer pairs stored as `(min, max)`.
    pub conflicts: Vec<(usize, usize)>,
    pub thresholds: Vec<u32>,
}

impl Instance {
    /// An instance with no edges, all degree bounds zero and all thresholds
    /// zero.
    pub fn new(buyers: usize, sellers: usize) -> Self {
        Instance {
            buyers,
            sellers,
            edges: Vec::new(),
            buyer_bounds: vec![0; buyers],
            seller_bounds: vec![0; sellers],
            conflicts: Vec::new(),
            thresholds: vec![0; sellers],
        }
    }

    pub fn with_bounds(mut self, buyer_bound: u32, seller_bound: u32) -> Self {
        self.buyer_bounds = vec![buyer_bound; self.buyers];
        self.seller_bounds = vec![seller_bound; self.sellers];
        self
    }

    pub fn with_threshold(mut self, t: u32) -> Self {
        self.thresholds = vec![t; self.sellers];
        self
    }

    pub fn add_edge(&mut self, buyer: usize, seller: usize, weight: f64) -> usize {
        self.edges.push(Edge {
            buyer,
            seller,
            weight,
        });
        self.edges.len() - 1
    }

    /// Adds a conflict pair in canonical order.
    pub fn add_conflict(&mut self, a: usize, b: usize) {
        self.conflicts.push((a.min(b), a.max(b)));
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.weight).sum()
    }

    /// Drops every conflict pair, turning the instance into plain C-REC.
    pub fn without_conflicts(&self) -> Instance {
        let mut out = self.clone();
        out.conflicts.clear();
        out
    }
}

/// A broken [`Instance`] invariant. Indices in messages are 1-based, as in
/// files.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    NoBuyers,
    NoSellers,
    EdgeBuyerOutOfRange { edge: usize, buyer: usize },
    EdgeSellerOutOfRange { edge: usize, seller: usize },
    DuplicateEdge { first: usize, second: usize },
    BadWeight { edge: usize, weight: f64 },
    SelfConflict { conflict: usize, buyer: usize },
    ConflictOutOfRange { conflict: usize },
    ConflictNotCanonical { conflict: usize },
    DuplicateConflict { first: usize, second: usize },
    BuyerBoundsLength { expected: usize, found: usize },
    SellerBoundsLength { expected: usize, found: usize },
    ThresholdsLength { expected: usize, found: usize },
}

fn one_based(i: usize) -> usize {
    i.wrapping_add(1)
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Violation::*;
        match *self {
            NoBuyers => write!(f, "buyer count must be positive"),
            NoSellers => write!(f, "seller count must be positive"),
            EdgeBuyerOutOfRange { edge, buyer } => write!(
                f,
                "edge buyer index out of range (edge #{}, buyer {})",
                one_based(edge),
                one_based(buyer)
            ),
            EdgeSellerOutOfRange { edge, seller } => write!(
                f,
                "edge seller index out of range (edge #{}, seller {})",
                one_based(edge),
                one_based(seller)
            ),
            DuplicateEdge { first, second } => write!(
                f,
                "duplicate edge (edges #{} and #{})",
                one_based(first),
                one_based(second)
            ),
            BadWeight { edge, weight } => write!(
                f,
                "edge weight must be finite and nonnegative (edge #{}, weight {})",
                one_based(edge),
                weight
            ),
            SelfConflict { conflict, buyer } => write!(
                f,
                "self-conflict (conflict #{}, buyer {})",
                one_based(conflict),
                one_based(buyer)
            ),
            ConflictOutOfRange { conflict } => write!(
                f,
                "conflict buyer index out of range (conflict #{})",
                one_based(conflict)
            ),
            ConflictNotCanonical { conflict } => write!(
                f,
                "conflict pair not in (min, max) order (conflict #{})",
                one_based(conflict)
            ),
            DuplicateConflict { first, second } => write!(
                f,
                "duplicate conflict (conflicts #{} and #{})",
                one_based(first),
                one_based(second)
            ),
            BuyerBoundsLength { expected, found } => write!(
                f,
                "buyer degree bounds: expected {expected} entries, found {found}"
            ),
            SellerBoundsLength { expected, found } => write!(
                f,
                "seller degree bounds: expected {expected} entries, found {found}"
            ),
            ThresholdsLength { expected, found } => write!(
                f,
                "conflict thresholds: expected {expected} entries, found {found}"
            ),
        }
    }
}

/// Lists every broken invariant of `inst`; empty means the instance is
/// well-formed.
pub fn validate(inst: &Instance) -> Vec<Violation> {
    let mut out = Vec::new();
    if inst.buyers == 0 {
        out.push(Violation::NoBuyers);
    }
    if inst.sellers == 0 {
        out.push(Violation::NoSellers);
    }
    for (k, e) in inst.edges.iter().enumerate() {
        if e.buyer >= inst.buyers {
            out.push(Violation::EdgeBuyerOutOfRange {
                edge: k,
                buyer: e.buyer,
            });
        }
        if e.seller >= inst.sellers {
            out.push(Violation::EdgeSellerOutOfRange {
                edge: k,
                seller: e.seller,
            });
        }
        if !(e.weight.is_finite() && e.weight >= 0.0) {
            out.push(Violation::BadWeight {
                edge: k,
                weight: e.weight,
            });
        }
    }
    let edge_keys = inst
        .edges
        .iter()
        .map(|e| (e.buyer < inst.buyers && e.seller < inst.sellers).then_some((e.buyer, e.seller)));
    for (first, second) in duplicates(edge_keys, inst.buyers, inst.sellers) {
        out.push(Violation::DuplicateEdge { first, second });
    }
    for (k, &(a, b)) in inst.conflicts.iter().enumerate() {
        if a == b {
            out.push(Violation::SelfConflict {
                conflict: k,
                buyer: a,
            });
        }
        if a >= inst.buyers || b >= inst.buyers {
            out.push(Violation::ConflictOutOfRange { conflict: k });
        }
        if a > b {
            out.push(Violation::ConflictNotCanonical { conflict: k });
        }
    }
    let conflict_keys = inst
        .conflicts
        .iter()
        .map(|&(a, b)| (a < inst.buyers && b < inst.buyers).then_some((a.min(b), a.max(b))));
    for (first, second) in duplicates(conflict_keys, inst.buyers, inst.buyers) {
        out.push(Violation::DuplicateConflict { first, second });
    }
    if inst.buyer_bounds.len() != inst.buyers {
        out.push(Violation::BuyerBoundsLength {
            expected: inst.buyers,
            found: inst.buyer_bounds.len(),
        });
    }
    if inst.seller_bounds.len() != inst.sellers {
        out.push(Violation::SellerBoundsLength {
            expected: inst.sellers,
            found: inst.seller_bounds.len(),
        });
    }
    if inst.thresholds.len() != inst.sellers {
        out.push(Violation::ThresholdsLength {
            expected: inst.sellers,
            found: inst.thresholds.len(),
        });
    }
    out
}

// `(first, later)` index pairs of repeated keys, in order of the later index.
// Keys are bucketed by their first component; `None` keys are skipped.
fn duplicates(
    keys: impl Iterator<Item = Option<(usize, usize)>>,
    rows: usize,
    cols: usize,
) -> Vec<(usize, usize)> {
    let keys: Vec<Option<(usize, usize)>> = keys.collect();
    let mut start = vec![0usize; rows + 1];
    for &(r, _) in keys.iter().flatten() {
        start[r + 1] += 1;
    }
    for r in 0..rows {
        start[r + 1] += start[r];
    }
    let mut fill = start.clone();
    let mut bucket = vec![0usize; start[rows]];
    for (k, key) in keys.iter().enumerate() {
        if let Some((r, _)) = *key {
            bucket[fill[r]] = k;
            fill[r] += 1;
        }
    }
    let mut first = vec![usize::MAX; cols];
    let mut out = Vec::new();
    for r in 0..rows {
        let items = &bucket[start[r]..start[r + 1]];
        for &k in items {
            let c = keys[k].expect("bucketed keys exist").1;
            if first[c] == usize::MAX {
                first[c] = k;
            } else {
                out.push((first[c], k));
            }
        }
        for &k in items {
            first[keys[k].expect("bucketed keys exist").1] = usize::MAX;
        }
    }
    out.sort_unstable_by_key(|&(_, k)| k);
    out
}

/// Fails with [`Error::Invalid`] when `validate` reports anything.
pub fn ensure_valid(inst: &Instance) -> Result<()> {
    let v = validate(inst);
    if v.is_empty() {
        Ok(())
    } else {
        Err(Error::Invalid(v))
    }
}

/// A selected edge subset together with its total weight.
///
/// Edge ids are kept sorted and unique, and the objective is always summed in
/// ascending id order so equal selections produce bit-identical objectives.
#[derive(Debug, Clone, PartialEq)]
pub struct Recommendation {
    selected: Vec<usize>,
    objective: f64,
}

impl Recommendation {
    pub fn empty() -> Self {
        Recommendation {
            selected: Vec::new(),
            objective: 0.0,
        }
    }

    /// Builds a selection from edge ids of `inst`.
    ///
    /// # Panics
    /// If an id is not an edge of `inst`.
    pub fn from_edges(inst: &Instance, ids: impl IntoIterator<Item = usize>) -> Self {
        let mut selected: Vec<usize> = ids.into_iter().collect();
        selected.sort_unstable();
        selected.dedup();
        if let Some(&last) = selected.last() {
            assert!(last < inst.edges.len(), "edge id {last} out of range");
        }
        let objective = selected.iter().map(|&e| inst.edges[e].weight).sum();
        Recommendation {
            selected,
            objective,
        }
    }

    pub fn selected(&self) -> &[usize] {
        &self.selected
    }

    pub fn objective(&self) -> f64 {
        self.objective
    }

    pub fn len(&self) -> usize {
        self.selected.len()
    }

    pub fn is_empty(&self) -> bool {
        self.selected.is_empty()
    }

    pub fn contains(&self, edge: usize) -> bool {
        self.selected.binary_search(&edge).is_ok()
    }

    /// The selected `(buyer, seller)` pairs in lexicographic order.
    pub fn pairs(&self, inst: &Instance) -> Vec<(usize, usize)> {
        let mut p: Vec<_> = self
            .selected
            .iter()
            .map(|&e| (inst.edges[e].buyer, inst.edges[e].seller))
            .collect();
        p.sort_unstable();
        p
    }

    /// 0-1 indicator vector over the instance's edges.
    pub fn indicator(&self, inst: &Instance) -> Vec<bool> {
        let mut x = vec![false; inst.edges.len()];
        for &e in &self.selected {
            x[e] = true;
        }
        x
    }
}

/// Identifies the algorithm behind a solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "crec-flow")]
    CrecFlow,
    #[serde(rename = "crec-lp")]
    CrecLp,
    #[serde(rename = "greedy")]
    Greedy,
    #[serde(rename = "lp-round")]
    LpRound,
    #[serde(rename = "ilp")]
    Ilp,
    #[serde(rename = "sdp")]
    Sdp,
    #[serde(rename = "oracle")]
    Oracle,
}

impl Method {
    pub const ALL: [Method; 7] = [
        Method::CrecFlow,
        Method::CrecLp,
        Method::Greedy,
        Method::LpRound,
        Method::Ilp,
        Method::Sdp,
        Method::Oracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::CrecFlow => "crec-flow",
            Method::CrecLp => "crec-lp",
            Method::Greedy => "greedy",
            Method::LpRound => "lp-round",
            Method::Ilp => "ilp",
            Method::Sdp => "sdp",
            Method::Oracle => "oracle",
        }
    }

    /// Whether the method ignores conflict constraints.
    pub fn is_crec(self) -> bool {
        matches!(self, Method::CrecFlow | Method::CrecLp)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Method::ALL
            .iter()
            .copied()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown method `{s}`"))
    }
}

/// Outcome metadata of one solver run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveReport {
    pub method: Method,
    pub objective: f64,
    /// A proven bound on the optimum (LP or SDP relaxation value).
    pub upper_bound: Option<f64>,
    /// Value of the relaxation the method rounded from, if any.
    pub relaxation: Option<f64>,
    pub elapsed_s: f64,
    pub feasible: bool,
    /// Simplex pivots, SDP iterations, or flow augmentations.
    pub iterations: u64,
    pub nodes: u64,
    /// `Some(true)` when the method proved optimality.
    pub optimal: Option<bool>,
    pub converged: Option<bool>,
    pub notes: Vec<String>,
}

impl SolveReport {
    pub fn new(method: Method, rec: &Recommendation, elapsed_s: f64) -> Self {
        SolveReport {
            method,
            objective: rec.objective(),
            upper_bound: None,
            relaxation: None,
            elapsed_s,
            feasible: false,
            iterations: 0,
            nodes: 0,
            optimal: None,
            converged: None,
            notes: Vec::new(),
        }
    }

    /// Gap between the bound and the objective, when a bound is known.
    pub fn gap(&self) -> Option<f64> {
        self.upper_bound.map(|ub| (ub - self.objective).max(0.0))
    }

    /// `objective <= upper_bound` within `1e-6 * (1 + |upper_bound|)`.
    pub fn bound_consistent(&self) -> bool {
        match self.upper_bound {
            Some(ub) => self.objective <= ub + 1e-6 * (1.0 + ub.abs()),
            None => true,
        }
    }
}

/// A violated CAC-REC constraint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConstraintViolation {
    UnknownEdge { edge: usize },
    BuyerDegree { buyer: usize, degree: u32, bound: u32 },
    SellerDegree { seller: usize, degree: u32, bound: u32 },
    ConflictThreshold { seller: usize, pairs: u64, threshold: u32 },
}

impl fmt::Display for ConstraintViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ConstraintViolation::UnknownEdge { edge } => {
                write!(f, "selected edge #{} does not exist", one_based(edge))
            }
            ConstraintViolation::BuyerDegree {
                buyer,
                degree,
                bound,
            } => write!(
                f,
                "buyer {} has degree {degree} > bound {bound}",
                one_based(buyer)
            ),
            ConstraintViolation::SellerDegree {
                seller,
                degree,
                bound,
            } => write!(
                f,
                "seller {} has degree {degree} > bound {bound}",
                one_based(seller)
            ),
            ConstraintViolation::ConflictThreshold {
                seller,
                pairs,
                threshold,
            } => write!(
                f,
                "seller {} has {pairs} conflicting pairs > threshold {threshold}",
                one_based(seller)
            ),
        }
    }
}

/// Result of [`check_feasible`].
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Feasibility {
    pub violations: Vec<ConstraintViolation>,
}

impl Feasibility {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks degree bounds at every node and the conflict threshold at every
/// seller. Conflicts are the fixed set `C` of the instance: a pair counts at
/// seller `k` when both buyers are recommended to `k`. `inst` must be valid.
pub fn check_feasible(inst: &Instance, rec: &Recommendation) -> Feasibility {
    let mut violations = Vec::new();
    let mut buyer_deg = vec![0u32; inst.buyers];
    let mut seller_deg = vec![0u32; inst.sellers];
    let mut at_seller: Vec<Vec<usize>> = vec![Vec::new(); inst.sellers];
    for &e in rec.selected() {
        let Some(edge) = inst.edges.get(e) else {
            violations.push(ConstraintViolation::UnknownEdge { edge: e });
            continue;
        };
        buyer_deg[edge.buyer] += 1;
        seller_deg[edge.seller] += 1;
        at_seller[edge.seller].push(edge.buyer);
    }
    for (buyer, (&degree, &bound)) in buyer_deg.iter().zip(&inst.buyer_bounds).enumerate() {
        if degree > bound {
            violations.push(ConstraintViolation::BuyerDegree {
                buyer,
                degree,
                bound,
            });
        }
    }
    for (seller, (&degree, &bound)) in seller_deg.iter().zip(&inst.seller_bounds).enumerate() {
        if degree > bound {
            violations.push(ConstraintViolation::SellerDegree {
                seller,
                degree,
                bound,
            });
        }
    }
    if !inst.conflicts.is_empty() {
        let neighbors = conflict_neighbors(inst);
        let mut mark = vec![usize::MAX; inst.buyers];
        for (seller, buyers) in at_seller.iter().enumerate() {
            let pairs = count_pairs_among(buyers, &neighbors, &mut mark, seller);
            let threshold = inst.thresholds[seller];
            if pairs > u64::from(threshold) {
                violations.push(ConstraintViolation::ConflictThreshold {
                    seller,
                    pairs,
                    threshold,
                });
            }
        }
    }
    Feasibility { violations }
}

/// Number of conflict pairs `(i, j)` with both `i` and `j` recommended to
/// `seller`.
pub fn conflict_pairs_at_seller(
    inst: &Instance,
    rec: &Recommendation,
    seller: usize,
) -> Result<u64> {
    if seller >= inst.sellers {
        return Err(Error::SellerOutOfRange(seller));
    }
    let buyers: Vec<usize> = rec
        .selected()
        .iter()
        .map(|&e| &inst.edges[e])
        .filter(|e| e.seller == seller)
        .map(|e| e.buyer)
        .collect();
    let neighbors = conflict_neighbors(inst);
    let mut mark = vec![usize::MAX; inst.buyers];
    Ok(count_pairs_among(&buyers, &neighbors, &mut mark, seller))
}

// Counts conflict pairs inside `buyers` using `mark` as scratch; `stamp` must
// differ from every value already stored in `mark`.
fn count_pairs_among(
    buyers: &[usize],
    neighbors: &[Vec<usize>],
    mark: &mut [usize],
    stamp: usize,
) -> u64 {
    for &b in buyers {
        mark[b] = stamp;
    }
    let mut pairs = 0u64;
    for &b in buyers {
        pairs += neighbors[b]
            .iter()
            .filter(|&&c| c > b && mark[c] == stamp)
            .count() as u64;
    }
    pairs
}

/// Sorted conflict neighbor lists, one per buyer.
pub fn conflict_neighbors(inst: &Instance) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); inst.buyers];
    for &(a, b) in &inst.conflicts {
        adj[a].push(b);
        adj[b].push(a);
    }
    for list in &mut adj {
        list.sort_unstable();
        list.dedup();
    }
    adj
}

/// Incidence lists for a valid instance.
#[derive(Debug, Clone)]
pub struct Adjacency {
    pub buyer_edges: Vec<Vec<usize>>,
    pub seller_edges: Vec<Vec<usize>>,
    pub conflict_neighbors: Vec<Vec<usize>>,
}

impl Adjacency {
    pub fn new(inst: &Instance) -> Self {
        let mut buyer_edges = vec![Vec::new(); inst.buyers];
        let mut seller_edges = vec![Vec::new(); inst.sellers];
        for (k, e) in inst.edges.iter().enumerate() {
            buyer_edges[e.buyer].push(k);
            seller_edges[e.seller].push(k);
        }
        Adjacency {
            buyer_edges,
            seller_edges,
            conflict_neighbors: conflict_neighbors(inst),
        }
    }

    /// For every seller `k`, the conflict pairs both of whose buyers are
    /// adjacent to `k`, as pairs of edge ids `(edge (i, k), edge (j, k))`
    /// with `i < j`.
    pub fn seller_conflict_pairs(&self, inst: &Instance) -> Vec<Vec<(usize, usize)>> {
        let mut slot = vec![usize::MAX; inst.buyers];
        let mut out = Vec::with_capacity(inst.sellers);
        for edges in &self.seller_edges {
            for &e in edges {
                slot[inst.edges[e].buyer] = e;
            }
            let mut pairs = Vec::new();
            for &e in edges {
                let b = inst.edges[e].buyer;
                for &c in &self.conflict_neighbors[b] {
                    if c > b && slot[c] != usize::MAX {
                        pairs.push((e, slot[c]));
                    }
                }
            }
            for &e in edges {
                slot[inst.edges[e].buyer] = usize::MAX;
            }
            pairs.sort_unstable_by_key(|&(a, b)| (inst.edges[a].buyer, inst.edges[b].buyer));
            out.push(pairs);
        }
        out
    }
}

/// Incrementally built feasible selection: the rounding step shared by the
/// greedy, LP-rounding and SDP-rounding algorithms.
#[derive(Debug, Clone)]
pub struct SelectionState<'a> {
    inst: &'a Instance,
    neighbors: &'a [Vec<usize>],
    buyer_load: Vec<u32>,
    seller_load: Vec<u32>,
    seller_pairs: Vec<u64>,
    // Sellers each buyer is selected at: `slots[slot_start[i]..][..load]`,
    // kept sorted.
    slot_start: Vec<usize>,
    slots: Vec<usize>,
    chosen: Vec<usize>,
    taken: Vec<bool>,
}

impl<'a> SelectionState<'a> {
    pub fn new(inst: &'a Instance, adj: &'a Adjacency) -> Self {
        let mut slot_start = Vec::with_capacity(inst.buyers + 1);
        slot_start.push(0);
        for edges in &adj.buyer_edges {
            slot_start.push(slot_start.last().unwrap() + edges.len());
        }
        SelectionState {
            inst,
            neighbors: &adj.conflict_neighbors,
            buyer_load: vec![0; inst.buyers],
            seller_load: vec![0; inst.sellers],
            seller_pairs: vec![0; inst.sellers],
            slots: vec![0; inst.edges.len()],
            slot_start,
            chosen: Vec::new(),
            taken: vec![false; inst.edges.len()],
        }
    }

    fn sellers_of(&self, buyer: usize) -> &[usize] {
        let s = self.slot_start[buyer];
        &self.slots[s..s + self.buyer_load[buyer] as usize]
    }

    /// Conflict pairs that adding `edge` would create at its seller.
    pub fn new_pairs(&self, edge: usize) -> u64 {
        let e = &self.inst.edges[edge];
        self.neighbors[e.buyer]
            .iter()
            .filter(|&&c| self.sellers_of(c).binary_search(&e.seller).is_ok())
            .count() as u64
    }

    pub fn can_add(&self, edge: usize) -> bool {
        if self.taken[edge] {
            return false;
        }
        let e = &self.inst.edges[edge];
        if self.buyer_load[e.buyer] >= self.inst.buyer_bounds[e.buyer]
            || self.seller_load[e.seller] >= self.inst.seller_bounds[e.seller]
        {
            return false;
        }
        self.seller_pairs[e.seller] + self.new_pairs(edge) <= u64::from(self.inst.thresholds[e.seller])
    }

    fn record(&mut self, edge: usize) {
        let pairs = self.new_pairs(edge);
        let e = self.inst.edges[edge];
        let s = self.slot_start[e.buyer];
        let n = self.buyer_load[e.buyer] as usize;
        let pos = self.sellers_of(e.buyer).partition_point(|&x| x < e.seller);
        self.slots.copy_within(s + pos..s + n, s + pos + 1);
        self.slots[s + pos] = e.seller;
        self.buyer_load[e.buyer] += 1;
        self.seller_load[e.seller] += 1;
        self.seller_pairs[e.seller] += pairs;
        self.chosen.push(edge);
        self.taken[edge] = true;
    }

    /// Adds `edge` if that keeps the selection feasible.
    pub fn try_add(&mut self, edge: usize) -> bool {
        if !self.can_add(edge) {
            return false;
        }
        self.record(edge);
        true
    }

    pub fn into_recommendation(self) -> Recommendation {
        Recommendation::from_edges(self.inst, self.chosen)
    }
}

/// Some edge outside `rec` that could be added without breaking
/// feasibility, if any. `None` means `rec` is maximal.
pub fn first_addable_edge(inst: &Instance, rec: &Recommendation) -> Option<usize> {
    let adj = Adjacency::new(inst);
    let mut state = SelectionState::new(inst, &adj);
    for &e in rec.selected() {
        state.record(e);
    }
    (0..inst.edges.len()).find(|&e| state.can_add(e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_by_two() -> Instance {
        let mut inst = Instance::new(2, 2).with_bounds(1, 1);
        inst.add_edge(0, 0, 4.0);
        inst.add_edge(0, 1, 1.0);
        inst.add_edge(1, 0, 2.0);
        inst.add_edge(1, 1, 3.0);
        inst
    }

    #[test]
    fn well_formed_instance_has_no_violations() {
        assert!(validate(&two_by_two()).is_empty());
    }

    #[test]
    fn out_of_range_buyer_is_reported() {
        let mut inst = two_by_two();
        inst.add_edge(2, 0, 1.0);
        let v = validate(&inst);
        assert_eq!(v.len(), 1);
        assert!(v[0].to_string().starts_with("edge buyer index out of range"));
    }

    #[test]
    fn self_conflict_is_reported() {
        let mut inst = Instance::new(6, 1);
        inst.conflicts.push((4, 4));
        let v = validate(&inst);
        assert_eq!(v.len(), 1);
        assert!(v[0].to_string().starts_with("self-conflict"));
    }

    #[test]
    fn duplicate_and_non_canonical_entries() {
        let mut inst = two_by_two();
        inst.add_edge(1, 1, 9.0);
        inst.conflicts.push((1, 0));
        inst.conflicts.push((0, 1));
        inst.edges[0].weight = -1.0;
        let v = validate(&inst);
        assert!(v.contains(&Violation::DuplicateEdge { first: 3, second: 4 }));
        assert!(v.contains(&Violation::ConflictNotCanonical { conflict: 0 }));
        assert!(v.contains(&Violation::DuplicateConflict { first: 0, second: 1 }));
        assert!(v.contains(&Violation::BadWeight { edge: 0, weight: -1.0 }));
    }

    #[test]
    fn empty_selection_is_feasible() {
        let inst = two_by_two();
        assert!(check_feasible(&inst, &Recommendation::empty()).is_ok());
    }

    #[test]
    fn seller_degree_violation() {
        let mut inst = Instance::new(2, 1).with_bounds(1, 1);
        inst.add_edge(0, 0, 1.0);
        inst.add_edge(1, 0, 1.0);
        let rec = Recommendation::from_edges(&inst, [0, 1]);
        let f = check_feasible(&inst, &rec);
        assert_eq!(
            f.violations,
            vec![ConstraintViolation::SellerDegree {
                seller: 0,
                degree: 2,
                bound: 1
            }]
        );
    }

    #[test]
    fn zero_threshold_conflict_violation() {
        let mut inst = Instance::new(2, 1).with_bounds(2, 2);
        inst.add_edge(0, 0, 1.0);
        inst.add_edge(1, 0, 1.0);
        inst.add_conflict(0, 1);
        let rec = Recommendation::from_edges(&inst, [0, 1]);
        let f = check_feasible(&inst, &rec);
        assert_eq!(
            f.violations,
            vec![ConstraintViolation::ConflictThreshold {
                seller: 0,
                pairs: 1,
                threshold: 0
            }]
        );
    }

    #[test]
    fn conflict_count_without_conflicts_is_zero() {
        let inst = two_by_two();
        let rec = Recommendation::from_edges(&inst, 0..4);
        assert_eq!(conflict_pairs_at_seller(&inst, &rec, 0).unwrap(), 0);
    }

    #[test]
    fn triangle_counts_three_pairs() {
        let mut inst = Instance::new(3, 1).with_bounds(3, 3);
        for b in 0..3 {
            inst.add_edge(b, 0, 1.0);
        }
        inst.add_conflict(0, 1);
        inst.add_conflict(1, 2);
        inst.add_conflict(0, 2);
        let rec = Recommendation::from_edges(&inst, 0..3);
        assert_eq!(conflict_pairs_at_seller(&inst, &rec, 0).unwrap(), 3);
    }

    #[test]
    fn conflict_count_rejects_bad_seller() {
        let inst = two_by_two();
        assert!(matches!(
            conflict_pairs_at_seller(&inst, &Recommendation::empty(), 7),
            Err(Error::SellerOutOfRange(7))
        ));
    }

    #[test]
    fn unknown_selected_edge_is_a_violation() {
        let inst = two_by_two();
        let rec = Recommendation {
            selected: vec![9],
            objective: 0.0,
        };
        assert_eq!(
            check_feasible(&inst, &rec).violations,
            vec![ConstraintViolation::UnknownEdge { edge: 9 }]
        );
    }

    #[test]
    fn seller_conflict_pairs_only_counts_co_adjacent_buyers() {
        let mut inst = Instance::new(3, 2).with_bounds(2, 3);
        inst.add_edge(0, 0, 1.0);
        inst.add_edge(1, 0, 1.0);
        inst.add_edge(2, 1, 1.0);
        inst.add_edge(0, 1, 1.0);
        inst.add_conflict(0, 1);
        inst.add_conflict(1, 2);
        let adj = Adjacency::new(&inst);
        let ck = adj.seller_conflict_pairs(&inst);
        assert_eq!(ck[0], vec![(0, 1)]);
        assert!(ck[1].is_empty());
    }

    #[test]
    fn selection_state_respects_threshold() {
        let mut inst = Instance::new(3, 1).with_bounds(3, 3).with_threshold(1);
        for b in 0..3 {
            inst.add_edge(b, 0, 1.0);
        }
        inst.add_conflict(0, 1);
        inst.add_conflict(0, 2);
        let adj = Adjacency::new(&inst);
        let mut s = SelectionState::new(&inst, &adj);
        assert!(s.try_add(0));
        assert!(s.try_add(1));
        assert!(!s.try_add(2));
        assert!(!s.try_add(1));
        let rec = s.into_recommendation();
        assert_eq!(rec.selected(), &[0, 1]);
        assert!(first_addable_edge(&inst, &rec).is_none());
    }

    #[test]
    fn method_names_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.name().parse::<Method>().unwrap(), m);
        }
        assert!("simplex".parse::<Method>().is_err());
    }
}
