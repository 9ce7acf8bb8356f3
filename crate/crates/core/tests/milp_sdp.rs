mod common;

use bsrec::cacrec_milp::{build_milp, simplex_solve, solve_ilp, solve_lp_rounding, IlpLimits};
use bsrec::cacrec_sdp::{build_sdp, cholesky_vectors, round_sdp, solve_sdp, SdpOptions, DEFAULT_SDP_CAP};
use bsrec::genlab::RandomSpec;
use bsrec::lp::{LpError, SimplexOptions};
use bsrec::oracle::brute_force_cacrec;
use bsrec::{check_feasible, Recommendation};
use common::{ids, instance, naive_feasible, rng, selection_from_mask, small};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::Rng;

#[test]
fn fixing_x_leaves_feasible_z_exactly_for_feasible_selections() {
    let spec = RandomSpec {
        max_edges: 7,
        ..RandomSpec::default()
    };
    for seed in 0..120 {
        let inst = instance(seed, &spec);
        let milp = build_milp(&inst);
        for mask in 0..1u64 << inst.edges.len() {
            let x = selection_from_mask(&inst, mask);
            let mut lp = milp.lp.clone();
            for (k, &s) in x.iter().enumerate() {
                let v = if s { 1.0 } else { 0.0 };
                lp.lower[k] = v;
                lp.upper[k] = v;
            }
            // Forced z must equal the AND of its two x.
            for (i, z) in milp.z_vars.iter().enumerate() {
                let col = milp.num_edge_vars + i;
                let mut fixed = lp.clone();
                let both = x[z.edges.0] && x[z.edges.1];
                fixed.objective = vec![0.0; fixed.num_vars()];
                fixed.objective[col] = -1.0;
                if let Ok(sol) = simplex_solve(&fixed, &SimplexOptions::default()) {
                    let min_z = sol.x[col];
                    assert_eq!(min_z > 0.5, both, "seed {seed} mask {mask:b} z {i}");
                }
            }
            let got = simplex_solve(&lp, &SimplexOptions::default());
            let feasible = naive_feasible(&inst, &x);
            match got {
                Ok(_) => assert!(feasible, "seed {seed} mask {mask:b}"),
                Err(LpError::Infeasible) => assert!(!feasible, "seed {seed} mask {mask:b}"),
                Err(e) => panic!("{e}"),
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(250))]

    #[test]
    fn ilp_matches_brute_force(seed in any::<u64>()) {
        let inst = small(seed);
        let (rec, report) = solve_ilp(&inst, &IlpLimits::none()).unwrap();
        let (_, opt) = brute_force_cacrec(&inst).unwrap();
        prop_assert_eq!(rec.objective(), opt);
        prop_assert_eq!(report.optimal, Some(true));
        prop_assert!(check_feasible(&inst, &rec).is_ok());
    }

    #[test]
    fn lp_rounding_is_sandwiched(seed in any::<u64>()) {
        let inst = instance(seed, &RandomSpec { integer_weights: false, ..RandomSpec::default() });
        let (rec, report) = solve_lp_rounding(&inst).unwrap();
        let (_, opt) = brute_force_cacrec(&inst).unwrap();
        prop_assert!(check_feasible(&inst, &rec).is_ok());
        prop_assert!(rec.objective() <= opt + 1e-9);
        prop_assert!(report.upper_bound.unwrap() + 1e-7 >= opt);
    }

    #[test]
    fn node_limited_ilp_keeps_a_valid_bound(seed in any::<u64>()) {
        let inst = small(seed);
        let limits = IlpLimits { node_limit: Some(1), time_limit: None };
        let (rec, report) = solve_ilp(&inst, &limits).unwrap();
        let (_, opt) = brute_force_cacrec(&inst).unwrap();
        prop_assert!(check_feasible(&inst, &rec).is_ok());
        prop_assert!(rec.objective() <= opt);
        prop_assert!(report.upper_bound.unwrap() + 1e-7 >= opt);
    }

    #[test]
    fn integral_points_satisfy_the_sdp_identities(seed in any::<u64>(), mask in any::<u64>()) {
        let inst = small(seed);
        let p = build_sdp(&inst, DEFAULT_SDP_CAP).unwrap();
        let x = selection_from_mask(&inst, mask);
        let v = DVector::from_iterator(x.len(), x.iter().map(|&s| if s { 1.0 } else { 0.0 }));
        let y = &v * v.transpose();
        let rec = Recommendation::from_edges(&inst, ids(&x));
        prop_assert!((p.objective(&y) - rec.objective()).abs() < 1e-9);
        for i in 0..inst.buyers {
            let deg = inst.edges.iter().zip(&x).filter(|(e, &s)| s && e.buyer == i).count();
            prop_assert!(((p.buyer_matrix(i) * &y).trace() - deg as f64).abs() < 1e-12);
        }
        for j in 0..inst.sellers {
            let deg = inst.edges.iter().zip(&x).filter(|(e, &s)| s && e.seller == j).count();
            prop_assert!(((p.seller_matrix(j) * &y).trace() - deg as f64).abs() < 1e-12);
            let picked = |b: usize| inst.edges.iter().zip(&x).any(|(e, &s)| s && e.buyer == b && e.seller == j);
            let pairs = inst.conflicts.iter().filter(|&&(a, b)| picked(a) && picked(b)).count();
            prop_assert!(((p.conflict_matrix(j) * &y).trace() - pairs as f64).abs() < 1e-12);
        }
        prop_assert_eq!(p.max_violation(&y) <= 1e-12, naive_feasible(&inst, &x));
    }

    #[test]
    fn cholesky_reconstructs_psd_matrices(seed in any::<u64>(), n in 1usize..12, rank in 1usize..12) {
        let mut r = rng(seed);
        let g = DMatrix::from_fn(n, rank.min(n), |_, _| r.random_range(-1.0..1.0));
        let y = &g * g.transpose();
        let v = cholesky_vectors(&y).unwrap();
        prop_assert_eq!(v.len(), n);
        for a in 0..n {
            for b in 0..n {
                let dot: f64 = v[a].iter().zip(&v[b]).map(|(p, q)| p * q).sum();
                prop_assert!((dot - y[(a, b)]).abs() < 1e-6, "{} vs {}", dot, y[(a, b)]);
            }
        }
    }

    #[test]
    fn sdp_bounds_and_rounding(seed in any::<u64>(), round_seed in any::<u64>()) {
        let inst = small(seed);
        let p = build_sdp(&inst, DEFAULT_SDP_CAP).unwrap();
        let sol = solve_sdp(&p, &SdpOptions::default()).unwrap();
        let (_, opt) = brute_force_cacrec(&inst).unwrap();
        prop_assert!(sol.objective + 1e-4 >= opt, "{} < {}", sol.objective, opt);
        prop_assert!(sol.certified_bound + 1e-7 >= opt);
        let v = cholesky_vectors(&sol.y).unwrap();
        let (rec, _) = round_sdp(&v, &inst, 4, round_seed).unwrap();
        prop_assert!(check_feasible(&inst, &rec).is_ok());
        prop_assert!(rec.objective() <= opt);
        let (again, _) = round_sdp(&v, &inst, 4, round_seed).unwrap();
        prop_assert_eq!(rec, again);
    }
}

#[test]
fn not_psd_is_rejected() {
    let y = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]);
    assert!(cholesky_vectors(&y).is_err());
}
