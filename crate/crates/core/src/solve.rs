//! One entry point for every method.

use std::time::{Duration, Instant};

use crate::cacrec_greedy::solve_greedy;
use crate::cacrec_milp::{solve_ilp, solve_lp_rounding, IlpLimits};
use crate::cacrec_sdp::{solve_sdp_rounding, SdpOptions, SdpPipeline, DEFAULT_RESTARTS, DEFAULT_SDP_CAP};
use crate::crec::{solve_crec, solve_crec_via_lp};
use crate::model::{check_feasible, Instance, Method, Recommendation, SolveReport};
use crate::oracle::brute_force_cacrec;
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub node_limit: Option<u64>,
    pub time_limit: Option<Duration>,
    pub restarts: usize,
    /// Required by the SDP method.
    pub seed: Option<u64>,
    pub sdp_cap: usize,
    pub sdp: SdpOptions,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            node_limit: None,
            time_limit: None,
            restarts: DEFAULT_RESTARTS,
            seed: None,
            sdp_cap: DEFAULT_SDP_CAP,
            sdp: SdpOptions::default(),
        }
    }
}

/// Runs `method` on `inst`. C-REC methods ignore the conflict constraints.
pub fn solve(inst: &Instance, method: Method, opts: &SolveOptions) -> Result<(Recommendation, SolveReport)> {
    match method {
        Method::CrecFlow => solve_crec(inst),
        Method::CrecLp => solve_crec_via_lp(inst),
        Method::Greedy => solve_greedy(inst),
        Method::LpRound => solve_lp_rounding(inst),
        Method::Ilp => solve_ilp(
            inst,
            &IlpLimits {
                node_limit: opts.node_limit,
                time_limit: opts.time_limit,
            },
        ),
        Method::Sdp => {
            let seed = opts
                .seed
                .ok_or_else(|| Error::Config("the sdp method needs a seed".into()))?;
            let pipeline = SdpPipeline {
                cap: opts.sdp_cap,
                solver: opts.sdp.clone(),
                restarts: opts.restarts,
                seed,
            };
            solve_sdp_rounding(inst, &pipeline)
        }
        Method::Oracle => {
            let start = Instant::now();
            let (rec, _) = brute_force_cacrec(inst)?;
            let mut report = SolveReport::new(Method::Oracle, &rec, start.elapsed().as_secs_f64());
            report.feasible = check_feasible(inst, &rec).is_ok();
            report.optimal = Some(true);
            report.upper_bound = Some(rec.objective());
            Ok((rec, report))
        }
    }
}
