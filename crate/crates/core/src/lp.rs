//! Bounded-variable revised simplex.
//!
//! Solves `max cᵀx` subject to `Ax ≤ b` and `l ≤ x ≤ u` with finite `l`.
//! Rows are stored sparsely; the basis inverse is dense and updated in
//! product form, with a full refactorization every few hundred pivots.
//! Rows whose slack would start negative get an artificial variable and a
//! phase-one pass drives those to zero.
//!
//! Pricing is Dantzig's rule. After a run of degenerate pivots the solver
//! switches to Bland's rule for the rest of the phase, which rules out
//! cycling.

use nalgebra::DMatrix;

/// Row `Σ coeffs·x ≤ rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub coeffs: Vec<(usize, f64)>,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    /// Maximized.
    pub objective: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub rows: Vec<Row>,
}

impl LinearProgram {
    /// `num_vars` variables boxed in `[0, 1]` with zero objective.
    pub fn unit_box(num_vars: usize) -> Self {
        LinearProgram {
            objective: vec![0.0; num_vars],
            lower: vec![0.0; num_vars],
            upper: vec![1.0; num_vars],
            rows: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn add_row(&mut self, coeffs: Vec<(usize, f64)>, rhs: f64) {
        self.rows.push(Row { coeffs, rhs });
    }

    pub fn evaluate(&self, x: &[f64]) -> f64 {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    /// Largest violation of any row or bound at `x` (0 when feasible).
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let mut worst: f64 = 0.0;
        for r in &self.rows {
            let lhs: f64 = r.coeffs.iter().map(|&(j, a)| a * x[j]).sum();
            worst = worst.max(lhs - r.rhs);
        }
        for (j, &v) in x.iter().enumerate() {
            worst = worst.max(self.lower[j] - v).max(v - self.upper[j]);
        }
        worst
    }
}

#[derive(Debug, Clone)]
pub struct SimplexOptions {
    /// Defaults to `20 * (rows + columns) + 1000`.
    pub max_iterations: Option<usize>,
    /// Refuse programs with more rows; the basis inverse is dense.
    pub max_rows: usize,
    /// Consecutive degenerate pivots tolerated before Bland's rule.
    pub degenerate_limit: usize,
    /// Reduced-cost tolerance.
    pub optimality_tol: f64,
    pub feasibility_tol: f64,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        SimplexOptions {
            max_iterations: None,
            max_rows: 6000,
            degenerate_limit: 50,
            optimality_tol: 1e-9,
            feasibility_tol: 1e-9,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub objective: f64,
    pub iterations: usize,
    /// Whether the anti-cycling fallback was needed.
    pub bland_engaged: bool,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LpError {
    #[error("linear program is infeasible")]
    Infeasible,
    #[error("linear program is unbounded")]
    Unbounded,
    #[error("simplex iteration limit ({0}) reached")]
    IterationLimit(usize),
    #[error("linear program has {rows} rows, above the dense-basis cap of {cap}")]
    TooLarge { rows: usize, cap: usize },
    #[error("variable {0} has invalid bounds")]
    BadBounds(usize),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub fn simplex_solve(lp: &LinearProgram, opts: &SimplexOptions) -> Result<LpSolution, LpError> {
    if lp.rows.len() > opts.max_rows {
        return Err(LpError::TooLarge {
            rows: lp.rows.len(),
            cap: opts.max_rows,
        });
    }
    for j in 0..lp.num_vars() {
        let (l, u) = (lp.lower[j], lp.upper[j]);
        if !l.is_finite() || u.is_nan() || l > u + opts.feasibility_tol {
            return Err(LpError::BadBounds(j));
        }
    }
    let mut s = Tableau::new(lp, opts);
    if s.has_artificials {
        let phase_one: Vec<f64> = (0..s.n_total)
            .map(|j| if s.is_artificial(j) { -1.0 } else { 0.0 })
            .collect();
        s.cost = phase_one;
        s.run()?;
        let infeasibility: f64 = (0..s.n_total)
            .filter(|&j| s.is_artificial(j))
            .map(|j| s.x[j])
            .sum();
        let scale = 1.0 + lp.rows.iter().map(|r| r.rhs.abs()).fold(0.0, f64::max);
        if infeasibility > 1e-7 * scale {
            return Err(LpError::Infeasible);
        }
        for j in 0..s.n_total {
            if s.is_artificial(j) {
                s.upper[j] = 0.0;
                if s.status[j] != Status::Basic {
                    s.x[j] = 0.0;
                    s.status[j] = Status::AtLower;
                }
            }
        }
        s.bland = false;
        s.degenerate_run = 0;
    }
    let mut cost = vec![0.0; s.n_total];
    cost[..lp.num_vars()].copy_from_slice(&lp.objective);
    s.cost = cost;
    s.run()?;
    let x = s.x[..lp.num_vars()].to_vec();
    Ok(LpSolution {
        objective: lp.evaluate(&x),
        x,
        iterations: s.iterations,
        bland_engaged: s.bland_engaged,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    Basic,
    AtLower,
    AtUpper,
}

const PIVOT_TOL: f64 = 1e-9;

struct Tableau<'a> {
    opts: &'a SimplexOptions,
    m: usize,
    n_total: usize,
    first_artificial: usize,
    has_artificials: bool,
    cols: Vec<Vec<(usize, f64)>>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    cost: Vec<f64>,
    rhs: Vec<f64>,
    basis: Vec<usize>,
    status: Vec<Status>,
    x: Vec<f64>,
    binv: Vec<f64>,
    iterations: usize,
    max_iterations: usize,
    bland: bool,
    bland_engaged: bool,
    degenerate_run: usize,
    since_refactor: usize,
}

impl<'a> Tableau<'a> {
    fn new(lp: &LinearProgram, opts: &'a SimplexOptions) -> Self {
        let m = lp.rows.len();
        let n = lp.num_vars();
        let mut cols: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for (i, r) in lp.rows.iter().enumerate() {
            for &(j, a) in &r.coeffs {
                if a != 0.0 {
                    cols[j].push((i, a));
                }
            }
        }
        let mut lower = lp.lower.clone();
        let mut upper = lp.upper.clone();
        let mut x: Vec<f64> = lp.lower.clone();
        let mut status = vec![Status::AtLower; n];
        let rhs: Vec<f64> = lp.rows.iter().map(|r| r.rhs).collect();

        let mut residual = rhs.clone();
        for (j, col) in cols.iter().enumerate() {
            if x[j] != 0.0 {
                for &(i, a) in col {
                    residual[i] -= a * x[j];
                }
            }
        }
        // Slacks occupy n..n+m; artificials follow.
        for i in 0..m {
            cols.push(vec![(i, 1.0)]);
            lower.push(0.0);
            upper.push(f64::INFINITY);
        }
        let first_artificial = n + m;
        let mut basis = vec![0; m];
        let mut binv = vec![0.0; m * m];
        x.resize(n + m, 0.0);
        status.resize(n + m, Status::AtLower);
        for i in 0..m {
            if residual[i] >= -opts.feasibility_tol {
                basis[i] = n + i;
                x[n + i] = residual[i].max(0.0);
                status[n + i] = Status::Basic;
                binv[i * m + i] = 1.0;
            } else {
                let a = cols.len();
                cols.push(vec![(i, -1.0)]);
                lower.push(0.0);
                upper.push(f64::INFINITY);
                x.push(-residual[i]);
                status.push(Status::Basic);
                basis[i] = a;
                binv[i * m + i] = -1.0;
            }
        }
        let n_total = cols.len();
        let max_iterations = opts
            .max_iterations
            .unwrap_or(20 * (m + n_total) + 1000);
        Tableau {
            opts,
            m,
            n_total,
            first_artificial,
            has_artificials: n_total > first_artificial,
            cols,
            lower,
            upper,
            cost: Vec::new(),
            rhs,
            basis,
            status,
            x,
            binv,
            iterations: 0,
            max_iterations,
            bland: false,
            bland_engaged: false,
            degenerate_run: 0,
            since_refactor: 0,
        }
    }

    fn is_artificial(&self, j: usize) -> bool {
        j >= self.first_artificial
    }

    fn run(&mut self) -> Result<(), LpError> {
        let m = self.m;
        let refactor_every = 100.max(m / 2);
        let mut y = vec![0.0; m];
        let mut alpha = vec![0.0; m];
        loop {
            if self.since_refactor >= refactor_every {
                self.refactor()?;
            }
            // Duals y = c_B B⁻¹.
            y.iter_mut().for_each(|v| *v = 0.0);
            for r in 0..m {
                let c = self.cost[self.basis[r]];
                if c != 0.0 {
                    let row = &self.binv[r * m..(r + 1) * m];
                    for (yi, &b) in y.iter_mut().zip(row) {
                        *yi += c * b;
                    }
                }
            }
            let Some((q, increase)) = self.price(&y) else {
                return Ok(());
            };
            if self.iterations >= self.max_iterations {
                return Err(LpError::IterationLimit(self.max_iterations));
            }
            self.iterations += 1;
            self.since_refactor += 1;

            for (r, a) in alpha.iter_mut().enumerate() {
                let row = &self.binv[r * m..(r + 1) * m];
                *a = self.cols[q].iter().map(|&(i, v)| row[i] * v).sum();
            }
            let dir = if increase { 1.0 } else { -1.0 };

            // Ratio test; basic r moves by -dir·alpha[r] per unit step.
            let mut theta = f64::INFINITY;
            for r in 0..m {
                if let Some(lim) = self.row_limit(r, dir * alpha[r]) {
                    theta = theta.min(lim);
                }
            }
            let span = self.upper[q] - self.lower[q];
            let mut leave: Option<usize> = None;
            if theta.is_finite() && theta < span {
                let cutoff = theta + 1e-12;
                for r in 0..m {
                    let a = dir * alpha[r];
                    let Some(lim) = self.row_limit(r, a) else {
                        continue;
                    };
                    if lim > cutoff {
                        continue;
                    }
                    leave = match leave {
                        None => Some(r),
                        Some(best) => {
                            let better = if self.bland {
                                self.basis[r] < self.basis[best]
                            } else {
                                a.abs() > (dir * alpha[best]).abs()
                            };
                            Some(if better { r } else { best })
                        }
                    };
                }
            }
            let step = match leave {
                Some(_) => theta,
                None if span.is_finite() => span,
                None => return Err(LpError::Unbounded),
            };

            if step <= 1e-12 {
                self.degenerate_run += 1;
                if !self.bland && self.degenerate_run > self.opts.degenerate_limit {
                    self.bland = true;
                    self.bland_engaged = true;
                }
            } else {
                self.degenerate_run = 0;
            }

            self.x[q] += dir * step;
            for r in 0..m {
                let b = self.basis[r];
                self.x[b] -= dir * alpha[r] * step;
            }
            match leave {
                None => {
                    // Bound flip.
                    self.status[q] = if increase {
                        self.x[q] = self.upper[q];
                        Status::AtUpper
                    } else {
                        self.x[q] = self.lower[q];
                        Status::AtLower
                    };
                }
                Some(r) => {
                    let out = self.basis[r];
                    if dir * alpha[r] > 0.0 {
                        self.x[out] = self.lower[out];
                        self.status[out] = Status::AtLower;
                    } else {
                        self.x[out] = self.upper[out];
                        self.status[out] = Status::AtUpper;
                    }
                    self.basis[r] = q;
                    self.status[q] = Status::Basic;
                    self.pivot(r, &alpha);
                }
            }
        }
    }

    // Step length at which basic row `r` hits a bound, given its rate of
    // decrease `a`.
    fn row_limit(&self, r: usize, a: f64) -> Option<f64> {
        let b = self.basis[r];
        if a > PIVOT_TOL {
            Some(((self.x[b] - self.lower[b]) / a).max(0.0))
        } else if a < -PIVOT_TOL && self.upper[b].is_finite() {
            Some(((self.upper[b] - self.x[b]) / -a).max(0.0))
        } else {
            None
        }
    }

    fn price(&self, y: &[f64]) -> Option<(usize, bool)> {
        let tol = self.opts.optimality_tol;
        let mut best: Option<(usize, bool, f64)> = None;
        for j in 0..self.n_total {
            let st = self.status[j];
            if st == Status::Basic || self.upper[j] - self.lower[j] <= 0.0 {
                continue;
            }
            let d = self.cost[j] - self.cols[j].iter().map(|&(i, a)| y[i] * a).sum::<f64>();
            let candidate = match st {
                Status::AtLower if d > tol => Some(true),
                Status::AtUpper if d < -tol => Some(false),
                _ => None,
            };
            if let Some(increase) = candidate {
                if self.bland {
                    return Some((j, increase));
                }
                if best.is_none_or(|(_, _, v)| d.abs() > v) {
                    best = Some((j, increase, d.abs()));
                }
            }
        }
        best.map(|(j, inc, _)| (j, inc))
    }

    fn pivot(&mut self, r: usize, alpha: &[f64]) {
        let m = self.m;
        let p = alpha[r];
        let (head, rest) = self.binv.split_at_mut(r * m);
        let (pivot_row, tail) = rest.split_at_mut(m);
        pivot_row.iter_mut().for_each(|v| *v /= p);
        for (i, row) in head.chunks_mut(m).enumerate() {
            let f = alpha[i];
            if f != 0.0 {
                for (v, &pv) in row.iter_mut().zip(pivot_row.iter()) {
                    *v -= f * pv;
                }
            }
        }
        for (k, row) in tail.chunks_mut(m).enumerate() {
            let f = alpha[r + 1 + k];
            if f != 0.0 {
                for (v, &pv) in row.iter_mut().zip(pivot_row.iter()) {
                    *v -= f * pv;
                }
            }
        }
    }

    fn refactor(&mut self) -> Result<(), LpError> {
        let m = self.m;
        self.since_refactor = 0;
        if m == 0 {
            return Ok(());
        }
        let mut b = DMatrix::<f64>::zeros(m, m);
        for (r, &j) in self.basis.iter().enumerate() {
            for &(i, a) in &self.cols[j] {
                b[(i, r)] = a;
            }
        }
        let inv = b
            .try_inverse()
            .ok_or_else(|| LpError::Numerical("singular basis".into()))?;
        for r in 0..m {
            for i in 0..m {
                self.binv[r * m + i] = inv[(r, i)];
            }
        }
        // x_B = B⁻¹ (b - N x_N)
        let mut resid = self.rhs.clone();
        for j in 0..self.n_total {
            if self.status[j] != Status::Basic && self.x[j] != 0.0 {
                for &(i, a) in &self.cols[j] {
                    resid[i] -= a * self.x[j];
                }
            }
        }
        for r in 0..m {
            let row = &self.binv[r * m..(r + 1) * m];
            self.x[self.basis[r]] = row.iter().zip(&resid).map(|(a, b)| a * b).sum();
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn solve(lp: &LinearProgram) -> Result<LpSolution, LpError> {
        simplex_solve(lp, &SimplexOptions::default())
    }

    #[test]
    fn single_variable_box() {
        let mut lp = LinearProgram::unit_box(1);
        lp.objective[0] = 1.0;
        lp.add_row(vec![(0, 1.0)], 1.0);
        let s = solve(&lp).unwrap();
        assert_eq!(s.x, vec![1.0]);
        assert_eq!(s.objective, 1.0);
    }

    #[test]
    fn textbook_program() {
        // max 3x + 5y; x ≤ 4, 2y ≤ 12, 3x + 2y ≤ 18 → (2, 6), 36.
        let mut lp = LinearProgram {
            objective: vec![3.0, 5.0],
            lower: vec![0.0; 2],
            upper: vec![f64::INFINITY; 2],
            rows: Vec::new(),
        };
        lp.add_row(vec![(0, 1.0)], 4.0);
        lp.add_row(vec![(1, 2.0)], 12.0);
        lp.add_row(vec![(0, 3.0), (1, 2.0)], 18.0);
        let s = solve(&lp).unwrap();
        assert!((s.objective - 36.0).abs() < 1e-9);
        assert!((s.x[0] - 2.0).abs() < 1e-9 && (s.x[1] - 6.0).abs() < 1e-9);
    }

    #[test]
    fn unbounded_is_detected() {
        let lp = LinearProgram {
            objective: vec![1.0],
            lower: vec![0.0],
            upper: vec![f64::INFINITY],
            rows: vec![],
        };
        assert_eq!(solve(&lp), Err(LpError::Unbounded));
    }

    #[test]
    fn phase_one_handles_raised_lower_bounds() {
        // x + y ≤ 1 with x fixed at 1: y must be 0.
        let mut lp = LinearProgram::unit_box(2);
        lp.objective = vec![1.0, 2.0];
        lp.lower[0] = 1.0;
        lp.add_row(vec![(0, 1.0), (1, 1.0)], 1.0);
        let s = solve(&lp).unwrap();
        assert!((s.objective - 1.0).abs() < 1e-9);
        assert!(s.x[1].abs() < 1e-9);
    }

    #[test]
    fn infeasible_is_detected() {
        let mut lp = LinearProgram::unit_box(2);
        lp.lower = vec![1.0, 1.0];
        lp.add_row(vec![(0, 1.0), (1, 1.0)], 1.0);
        assert_eq!(solve(&lp), Err(LpError::Infeasible));
    }

    #[test]
    fn greater_or_equal_rows_via_negation() {
        // min x + y  s.t. x + y ≥ 1.5, x,y ∈ [0,1]  ==  max -x - y, -x - y ≤ -1.5
        let mut lp = LinearProgram::unit_box(2);
        lp.objective = vec![-1.0, -1.0];
        lp.add_row(vec![(0, -1.0), (1, -1.0)], -1.5);
        let s = solve(&lp).unwrap();
        assert!((s.objective + 1.5).abs() < 1e-9);
    }

    #[test]
    fn beale_cycling_example_terminates() {
        // Beale's example, stated as a maximization.
        let mut lp = LinearProgram {
            objective: vec![0.75, -150.0, 0.02, -6.0],
            lower: vec![0.0; 4],
            upper: vec![f64::INFINITY; 4],
            rows: Vec::new(),
        };
        lp.add_row(vec![(0, 0.25), (1, -60.0), (2, -0.04), (3, 9.0)], 0.0);
        lp.add_row(vec![(0, 0.5), (1, -90.0), (2, -0.02), (3, 3.0)], 0.0);
        lp.add_row(vec![(2, 1.0)], 1.0);
        let s = solve(&lp).unwrap();
        assert!((s.objective - 0.05).abs() < 1e-9);
    }

    #[test]
    fn too_many_rows_is_refused() {
        let mut lp = LinearProgram::unit_box(1);
        lp.add_row(vec![(0, 1.0)], 1.0);
        lp.add_row(vec![(0, 1.0)], 1.0);
        let opts = SimplexOptions {
            max_rows: 1,
            ..Default::default()
        };
        assert_eq!(
            simplex_solve(&lp, &opts),
            Err(LpError::TooLarge { rows: 2, cap: 1 })
        );
    }

    #[test]
    fn bad_bounds_are_refused() {
        let mut lp = LinearProgram::unit_box(1);
        lp.lower[0] = 2.0;
        assert_eq!(solve(&lp), Err(LpError::BadBounds(0)));
    }
}
