//! SDP relaxation of CAC-REC with random-projection rounding.
//!
//! With `X` the 0-1 edge vector and `Y = XXᵀ`, the problem becomes
//!
//! ```text
//! max ⟨W, Y⟩  s.t.  ⟨Dᵇ_i, Y⟩ ≤ D(i),  ⟨Dˢ_j, Y⟩ ≤ D(j),  ⟨C_k, Y⟩ ≤ t(k),
//!                   Y ⪰ 0,  diag(Y) ≤ 1,  Y ≥ 0 entrywise.
//! ```
//!
//! Matrices are indexed by edges only (dimension `|E|`). The last two
//! constraint families hold for every `XXᵀ` and keep the relaxation bounded.
//!
//! `⟨W, Y⟩` depends only on `diag(Y)`, which obeys exactly the C-REC LP
//! constraints, and `diag(y)` is feasible for every LP-feasible `y`. The SDP
//! optimum therefore equals the C-REC LP optimum, which is used as the
//! certified bound for the first-order solver.
//!
//! The solver is ADMM on `Y = Z` with `Y` in the PSD cone and `Z` in the
//! polyhedral set. The rounding factors `Y = VVᵀ`, projects the rows of `V`
//! onto Gaussian directions and adds edges by decreasing projection length
//! while feasibility allows.

use std::time::Instant;

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::lp::{simplex_solve, LinearProgram, SimplexOptions};
use crate::model::{
    check_feasible, ensure_valid, Adjacency, Instance, Method, Recommendation, SelectionState,
    SolveReport,
};
use crate::{Error, Result};

pub const DEFAULT_SDP_CAP: usize = 128;
pub const DEFAULT_RESTARTS: usize = 20;
const CLIP: f64 = 1e-9;

/// The data of the relaxation in compressed edge indexing.
#[derive(Debug, Clone, PartialEq)]
pub struct SdpProgram {
    pub dim: usize,
    pub weights: Vec<f64>,
    /// Edges of each buyer: the support of `Dᵇ_i`.
    pub buyer_edges: Vec<Vec<usize>>,
    pub seller_edges: Vec<Vec<usize>>,
    /// Edge pairs of `C_k`: `C_k` has `1/2` at `(a, b)` and `(b, a)`.
    pub conflict_pairs: Vec<Vec<(usize, usize)>>,
    pub buyer_rhs: Vec<f64>,
    pub seller_rhs: Vec<f64>,
    pub thresholds: Vec<f64>,
}

impl SdpProgram {
    pub fn weight_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_diagonal(&self.weights.clone().into())
    }

    fn indicator(&self, edges: &[usize]) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for &e in edges {
            m[(e, e)] = 1.0;
        }
        m
    }

    pub fn buyer_matrix(&self, i: usize) -> DMatrix<f64> {
        self.indicator(&self.buyer_edges[i])
    }

    pub fn seller_matrix(&self, j: usize) -> DMatrix<f64> {
        self.indicator(&self.seller_edges[j])
    }

    pub fn conflict_matrix(&self, k: usize) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for &(a, b) in &self.conflict_pairs[k] {
            m[(a, b)] = 0.5;
            m[(b, a)] = 0.5;
        }
        m
    }

    pub fn objective(&self, y: &DMatrix<f64>) -> f64 {
        self.weights.iter().enumerate().map(|(e, w)| w * y[(e, e)]).sum()
    }

    /// Largest violation of a trace, diagonal or sign constraint.
    pub fn max_violation(&self, y: &DMatrix<f64>) -> f64 {
        let mut worst: f64 = 0.0;
        for (edges, rhs) in self
            .buyer_edges
            .iter()
            .zip(&self.buyer_rhs)
            .chain(self.seller_edges.iter().zip(&self.seller_rhs))
        {
            let s: f64 = edges.iter().map(|&e| y[(e, e)]).sum();
            worst = worst.max(s - rhs);
        }
        for (pairs, t) in self.conflict_pairs.iter().zip(&self.thresholds) {
            let s: f64 = pairs.iter().map(|&(a, b)| y[(a, b)]).sum();
            worst = worst.max(s - t);
        }
        for e in 0..self.dim {
            worst = worst.max(y[(e, e)] - 1.0);
        }
        worst.max(-y.min())
    }

    /// The C-REC LP over the diagonal.
    fn diagonal_lp(&self) -> LinearProgram {
        let mut lp = LinearProgram::unit_box(self.dim);
        lp.objective.clone_from(&self.weights);
        for (edges, &rhs) in self
            .buyer_edges
            .iter()
            .zip(&self.buyer_rhs)
            .chain(self.seller_edges.iter().zip(&self.seller_rhs))
        {
            lp.add_row(edges.iter().map(|&e| (e, 1.0)).collect(), rhs);
        }
        lp
    }
}

pub fn build_sdp(inst: &Instance, cap: usize) -> Result<SdpProgram> {
    ensure_valid(inst)?;
    let dim = inst.edges.len();
    if dim > cap {
        return Err(Error::SdpTooLarge { dim, cap });
    }
    let adj = Adjacency::new(inst);
    let conflict_pairs = adj.seller_conflict_pairs(inst);
    Ok(SdpProgram {
        dim,
        weights: inst.edges.iter().map(|e| e.weight).collect(),
        buyer_edges: adj.buyer_edges,
        seller_edges: adj.seller_edges,
        conflict_pairs,
        buyer_rhs: inst.buyer_bounds.iter().map(|&d| f64::from(d)).collect(),
        seller_rhs: inst.seller_bounds.iter().map(|&d| f64::from(d)).collect(),
        thresholds: inst.thresholds.iter().map(|&t| f64::from(t)).collect(),
    })
}

#[derive(Debug, Clone)]
pub struct SdpOptions {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SdpOptions {
    fn default() -> Self {
        SdpOptions {
            tol: 1e-7,
            max_iter: 50_000,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SdpSolution {
    pub y: DMatrix<f64>,
    pub objective: f64,
    /// The C-REC LP optimum, equal to the exact SDP optimum.
    pub certified_bound: f64,
    pub iterations: usize,
    pub converged: bool,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub min_eigenvalue: f64,
}

/// Projects `v` onto `{0 ≤ v ≤ hi, Σ v ≤ cap}`.
fn project_capped(v: &mut [f64], hi: f64, cap: f64) {
    let clipped: f64 = v.iter().map(|x| x.clamp(0.0, hi)).sum();
    if clipped <= cap {
        v.iter_mut().for_each(|x| *x = x.clamp(0.0, hi));
        return;
    }
    let mut lo_t = 0.0;
    let mut hi_t = v.iter().fold(0.0f64, |a, &x| a.max(x));
    for _ in 0..100 {
        let mid = 0.5 * (lo_t + hi_t);
        let s: f64 = v.iter().map(|x| (x - mid).clamp(0.0, hi)).sum();
        if s > cap {
            lo_t = mid;
        } else {
            hi_t = mid;
        }
    }
    v.iter_mut().for_each(|x| *x = (*x - hi_t).clamp(0.0, hi));
}

fn project_groups(v: &mut [f64], groups: &[Vec<usize>], caps: &[f64]) {
    let mut covered = vec![false; v.len()];
    let mut buf = Vec::new();
    for (g, &cap) in groups.iter().zip(caps) {
        buf.clear();
        buf.extend(g.iter().map(|&e| v[e]));
        project_capped(&mut buf, 1.0, cap);
        for (&e, &x) in g.iter().zip(&buf) {
            v[e] = x;
            covered[e] = true;
        }
    }
    for (x, c) in v.iter_mut().zip(covered) {
        if !c {
            *x = x.clamp(0.0, 1.0);
        }
    }
}

impl SdpProgram {
    /// Dykstra's method for the diagonal: buyer-side and seller-side sets.
    fn project_diagonal(&self, d: &mut [f64]) {
        let n = d.len();
        let mut x = d.to_vec();
        let mut p = vec![0.0; n];
        let mut q = vec![0.0; n];
        let mut y = vec![0.0; n];
        for _ in 0..1000 {
            for i in 0..n {
                y[i] = x[i] + p[i];
            }
            project_groups(&mut y, &self.buyer_edges, &self.buyer_rhs);
            for i in 0..n {
                p[i] += x[i] - y[i];
            }
            let mut nx: Vec<f64> = (0..n).map(|i| y[i] + q[i]).collect();
            project_groups(&mut nx, &self.seller_edges, &self.seller_rhs);
            let mut change: f64 = 0.0;
            for i in 0..n {
                q[i] += y[i] - nx[i];
                change = change.max((nx[i] - x[i]).abs());
            }
            x = nx;
            if change < 1e-13 {
                break;
            }
        }
        d.copy_from_slice(&x);
    }

    fn project_polyhedron(&self, m: &DMatrix<f64>) -> DMatrix<f64> {
        let n = self.dim;
        let mut z = DMatrix::zeros(n, n);
        for a in 0..n {
            for b in a + 1..n {
                let v = (0.5 * (m[(a, b)] + m[(b, a)])).max(0.0);
                z[(a, b)] = v;
                z[(b, a)] = v;
            }
        }
        let mut buf = Vec::new();
        for (pairs, &t) in self.conflict_pairs.iter().zip(&self.thresholds) {
            buf.clear();
            buf.extend(pairs.iter().map(|&(a, b)| 0.5 * (m[(a, b)] + m[(b, a)])));
            project_capped(&mut buf, f64::INFINITY, t);
            for (&(a, b), &v) in pairs.iter().zip(&buf) {
                z[(a, b)] = v;
                z[(b, a)] = v;
            }
        }
        let mut d: Vec<f64> = (0..n).map(|e| m[(e, e)]).collect();
        self.project_diagonal(&mut d);
        for (e, v) in d.into_iter().enumerate() {
            z[(e, e)] = v;
        }
        z
    }
}

fn project_psd(m: DMatrix<f64>) -> DMatrix<f64> {
    let eig = SymmetricEigen::new(m);
    let vals = eig.eigenvalues.map(|l| l.max(0.0));
    let scaled = &eig.eigenvectors * DMatrix::from_diagonal(&vals);
    &scaled * eig.eigenvectors.transpose()
}

fn min_eigenvalue(m: &DMatrix<f64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    SymmetricEigen::new(m.clone()).eigenvalues.min()
}

/// ADMM on the relaxation. The returned `y` satisfies every linear
/// constraint; its smallest eigenvalue is reported.
pub fn solve_sdp(program: &SdpProgram, opts: &SdpOptions) -> Result<SdpSolution> {
    let n = program.dim;
    let certified_bound = if n == 0 {
        0.0
    } else {
        simplex_solve(&program.diagonal_lp(), &SimplexOptions::default())?.objective
    };
    let scale = program.weights.iter().fold(0.0f64, |a, &w| a.max(w));
    if n == 0 || scale == 0.0 || certified_bound == 0.0 {
        return Ok(SdpSolution {
            y: DMatrix::zeros(n, n),
            objective: 0.0,
            certified_bound,
            iterations: 0,
            converged: true,
            primal_residual: 0.0,
            dual_residual: 0.0,
            min_eigenvalue: 0.0,
        });
    }
    let w = DMatrix::from_diagonal(&program.weights.iter().map(|w| w / scale).collect::<Vec<_>>().into());
    let mut z = DMatrix::<f64>::zeros(n, n);
    let mut u = DMatrix::<f64>::zeros(n, n);
    let mut rho = 1.0;
    let mut iterations = 0;
    let mut converged = false;
    let (mut r_norm, mut s_norm) = (f64::INFINITY, f64::INFINITY);
    let mut last_checkpoint = f64::NEG_INFINITY;
    let bound_tol = opts.tol * (1.0 + certified_bound.abs());
    let res_tol = opts.tol * (n as f64).sqrt();
    while iterations < opts.max_iter {
        iterations += 1;
        let x = project_psd(&z - &u + &w / rho);
        let z_prev = std::mem::replace(&mut z, program.project_polyhedron(&(&x + &u)));
        let r = &x - &z;
        u += &r;
        r_norm = r.norm();
        s_norm = rho * (&z - &z_prev).norm();
        if r_norm < res_tol && s_norm < res_tol {
            let obj = program.objective(&z);
            if (certified_bound - obj).abs() <= bound_tol
                || (iterations % 100 == 0 && (obj - last_checkpoint).abs() <= bound_tol)
            {
                converged = true;
                break;
            }
        }
        if iterations % 100 == 0 {
            last_checkpoint = program.objective(&z);
        }
        if iterations % 10 == 0 {
            if r_norm > 10.0 * s_norm {
                rho *= 2.0;
                u /= 2.0;
            } else if s_norm > 10.0 * r_norm {
                rho /= 2.0;
                u *= 2.0;
            }
        }
    }
    let objective = program.objective(&z);
    let min_eigenvalue = min_eigenvalue(&z);
    Ok(SdpSolution {
        y: z,
        objective,
        certified_bound,
        iterations,
        converged,
        primal_residual: r_norm,
        dual_residual: s_norm,
        min_eigenvalue,
    })
}

/// Rows of `V` with `VVᵀ = Y`, by pivoted Cholesky after clipping
/// eigenvalues below `1e-9` to zero.
pub fn cholesky_vectors(y: &DMatrix<f64>) -> Result<Vec<Vec<f64>>> {
    let n = y.nrows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let sym = (y + y.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym.clone());
    let max_abs = eig.eigenvalues.amax();
    let min = eig.eigenvalues.min();
    if min < -1e-4 * (1.0 + max_abs) {
        return Err(Error::NotPsd(min));
    }
    let mut a = if eig.eigenvalues.iter().any(|&l| l < CLIP) && min < 0.0 {
        let vals = eig.eigenvalues.map(|l| if l < CLIP { 0.0 } else { l });
        &eig.eigenvectors * DMatrix::from_diagonal(&vals) * eig.eigenvectors.transpose()
    } else {
        sym
    };
    let mut perm: Vec<usize> = (0..n).collect();
    let mut l = DMatrix::<f64>::zeros(n, n);
    let max_diag = (0..n).map(|i| a[(i, i)]).fold(0.0f64, f64::max);
    let stop = CLIP * max_diag.max(1.0);
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| a[(i, i)].total_cmp(&a[(j, j)]).then(j.cmp(&i)))
            .expect("nonempty range");
        if a[(p, p)] <= stop {
            break;
        }
        if p != k {
            a.swap_rows(k, p);
            a.swap_columns(k, p);
            l.swap_rows(k, p);
            perm.swap(k, p);
        }
        let pivot = a[(k, k)].sqrt();
        l[(k, k)] = pivot;
        for i in k + 1..n {
            l[(i, k)] = a[(i, k)] / pivot;
        }
        for i in k + 1..n {
            for j in k + 1..=i {
                let v = a[(i, j)] - l[(i, k)] * l[(j, k)];
                a[(i, j)] = v;
                a[(j, i)] = v;
            }
        }
    }
    let mut out = vec![Vec::new(); n];
    for (pos, &orig) in perm.iter().enumerate() {
        out[orig] = l.row(pos).iter().copied().collect();
    }
    Ok(out)
}

/// Best of `restarts` random-projection roundings. Restart `r` draws its
/// direction from `ChaCha8Rng` seeded with `seed` on stream `r`.
pub fn round_sdp(
    vectors: &[Vec<f64>],
    inst: &Instance,
    restarts: usize,
    seed: u64,
) -> Result<(Recommendation, SolveReport)> {
    ensure_valid(inst)?;
    assert_eq!(vectors.len(), inst.edges.len(), "one vector per edge");
    let start = Instant::now();
    let dim = vectors.first().map_or(0, Vec::len);
    let adj = Adjacency::new(inst);
    let mut best = Recommendation::empty();
    let mut best_restart = None;
    for r in 0..restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(r as u64);
        let dir: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
        let norm = dir.iter().map(|x| x * x).sum::<f64>().sqrt();
        let scores: Vec<f64> = vectors
            .iter()
            .map(|v| {
                if norm == 0.0 {
                    0.0
                } else {
                    v.iter().zip(&dir).map(|(a, b)| a * b).sum::<f64>().abs() / norm
                }
            })
            .collect();
        let mut order: Vec<usize> = (0..scores.len()).filter(|&e| scores[e] > CLIP).collect();
        order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
        let mut state = SelectionState::new(inst, &adj);
        for e in order {
            state.try_add(e);
        }
        let rec = state.into_recommendation();
        if best_restart.is_none() || rec.objective() > best.objective() {
            best = rec;
            best_restart = Some(r);
        }
    }
    let mut report = SolveReport::new(Method::Sdp, &best, start.elapsed().as_secs_f64());
    report.feasible = check_feasible(inst, &best).is_ok();
    report.iterations = restarts as u64;
    if let Some(r) = best_restart {
        report.notes.push(format!("best of {restarts} restarts: #{}", r + 1));
    }
    Ok((best, report))
}

#[derive(Debug, Clone)]
pub struct SdpPipeline {
    pub cap: usize,
    pub solver: SdpOptions,
    pub restarts: usize,
    pub seed: u64,
}

impl SdpPipeline {
    pub fn new(seed: u64) -> Self {
        SdpPipeline {
            cap: DEFAULT_SDP_CAP,
            solver: SdpOptions::default(),
            restarts: DEFAULT_RESTARTS,
            seed,
        }
    }
}

/// Relaxation, factorization and rounding in one call.
pub fn solve_sdp_rounding(
    inst: &Instance,
    cfg: &SdpPipeline,
) -> Result<(Recommendation, SolveReport)> {
    let start = Instant::now();
    let program = build_sdp(inst, cfg.cap)?;
    let sol = solve_sdp(&program, &cfg.solver)?;
    let vectors = cholesky_vectors(&sol.y)?;
    let (rec, mut report) = round_sdp(&vectors, inst, cfg.restarts, cfg.seed)?;
    report.elapsed_s = start.elapsed().as_secs_f64();
    report.relaxation = Some(sol.objective);
    report.upper_bound = Some(sol.certified_bound);
    report.iterations = sol.iterations as u64;
    report.converged = Some(sol.converged);
    report.notes.push(format!(
        "sdp objective {:.9}, residuals {:.1e}/{:.1e}, min eigenvalue {:.1e}",
        sol.objective, sol.primal_residual, sol.dual_residual, sol.min_eigenvalue
    ));
    Ok((rec, report))
}
