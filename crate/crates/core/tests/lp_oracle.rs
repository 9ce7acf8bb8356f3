mod common;

use bsrec::lp::{simplex_solve, LinearProgram, LpError, SimplexOptions};
use common::rng;
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::Rng;

/// Best vertex of `{Ax ≤ b, lower ≤ x ≤ upper}` by trying every choice of `n`
/// tight constraints. `None` when the polytope is empty.
fn vertex_optimum(lp: &LinearProgram) -> Option<f64> {
    let n = lp.num_vars();
    let mut cons: Vec<(Vec<f64>, f64)> = Vec::new();
    for r in &lp.rows {
        let mut a = vec![0.0; n];
        for &(j, v) in &r.coeffs {
            a[j] += v;
        }
        cons.push((a, r.rhs));
    }
    for j in 0..n {
        let mut a = vec![0.0; n];
        a[j] = 1.0;
        cons.push((a.clone(), lp.upper[j]));
        a[j] = -1.0;
        cons.push((a, -lp.lower[j]));
    }
    let mut best: Option<f64> = None;
    let mut pick = Vec::with_capacity(n);
    choose(&cons, n, 0, &mut pick, &mut |set| {
        let a = DMatrix::from_fn(n, n, |r, c| cons[set[r]].0[c]);
        let b = DVector::from_fn(n, |r, _| cons[set[r]].1);
        let Some(x) = a.lu().solve(&b) else { return };
        let x: Vec<f64> = x.iter().copied().collect();
        if lp.max_violation(&x) <= 1e-9 {
            let v = lp.evaluate(&x);
            best = Some(best.map_or(v, |b: f64| b.max(v)));
        }
    });
    best
}

fn choose(cons: &[(Vec<f64>, f64)], k: usize, from: usize, pick: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
    if pick.len() == k {
        f(pick);
        return;
    }
    for i in from..cons.len() {
        pick.push(i);
        choose(cons, k, i + 1, pick, f);
        pick.pop();
    }
}

fn random_lp(seed: u64, max_vars: usize, max_rows: usize) -> LinearProgram {
    let mut r = rng(seed);
    let n = r.random_range(1..=max_vars);
    let mut lp = LinearProgram::unit_box(n);
    for j in 0..n {
        lp.objective[j] = r.random_range(-3..=6) as f64;
        lp.lower[j] = r.random_range(-2..=0) as f64;
        lp.upper[j] = lp.lower[j] + r.random_range(0..=3) as f64;
    }
    for _ in 0..r.random_range(0..=max_rows) {
        let mut coeffs = Vec::new();
        for j in 0..n {
            if r.random_bool(0.7) {
                coeffs.push((j, r.random_range(-2..=3) as f64));
            }
        }
        let rhs = r.random_range(-2..=5) as f64;
        lp.add_row(coeffs, rhs);
    }
    lp
}

fn agree(lp: &LinearProgram) -> Result<(), String> {
    let oracle = vertex_optimum(lp);
    match (simplex_solve(lp, &SimplexOptions::default()), oracle) {
        (Ok(sol), Some(v)) => {
            if lp.max_violation(&sol.x) > 1e-7 {
                return Err(format!("simplex point violates by {}", lp.max_violation(&sol.x)));
            }
            if (sol.objective - v).abs() > 1e-6 * (1.0 + v.abs()) {
                return Err(format!("simplex {} vs vertex {v}", sol.objective));
            }
            Ok(())
        }
        (Err(LpError::Infeasible), None) => Ok(()),
        (got, want) => Err(format!("simplex {got:?} vs vertex {want:?}")),
    }
}

#[test]
fn simplex_matches_vertex_enumeration_up_to_eight_variables() {
    for seed in 0..300 {
        let lp = random_lp(seed, 8, 4);
        agree(&lp).unwrap_or_else(|e| panic!("seed {seed}: {e}\n{lp:?}"));
    }
}

#[test]
fn degenerate_programs() {
    // Many rows tight at the same vertex.
    let mut lp = LinearProgram::unit_box(3);
    lp.objective = vec![1.0, 1.0, 1.0];
    for _ in 0..4 {
        lp.add_row(vec![(0, 1.0), (1, 1.0)], 1.0);
        lp.add_row(vec![(1, 1.0), (2, 1.0)], 1.0);
        lp.add_row(vec![(0, 1.0), (2, 1.0)], 1.0);
    }
    agree(&lp).unwrap();
    let sol = simplex_solve(&lp, &SimplexOptions::default()).unwrap();
    assert!((sol.objective - 1.5).abs() < 1e-9);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn simplex_agrees_with_vertices(seed in any::<u64>()) {
        let lp = random_lp(seed, 5, 5);
        prop_assert!(agree(&lp).is_ok(), "{:?}", agree(&lp));
    }
}
