//! Solvers for recommending buyers to sellers under degree and conflict
//! constraints.
//!
//! The crate covers two problems over a weighted bipartite buyer/seller graph:
//!
//! * **C-REC**: pick a maximum-weight set of buyer/seller edges such that no
//!   node exceeds its degree bound (a bipartite b-matching). Solved exactly by
//!   [`crec::solve_crec`] with a min-cost flow, and cross-checked by the LP in
//!   [`crec::solve_crec_lp`].
//! * **CAC-REC**: C-REC plus a per-seller cap on the number of conflicting
//!   buyer pairs recommended to that seller. NP-hard; this crate ships a greedy
//!   heuristic with a `(2 + d)` guarantee ([`cacrec_greedy`]), an ILP with
//!   LP-rounding and branch-and-bound ([`cacrec_milp`]), and an SDP relaxation
//!   with random-projection rounding ([`cacrec_sdp`]).
//!
//! [`oracle`] holds exhaustive solvers used as ground truth in tests,
//! [`reductions`] the interval-scheduling reduction that shows hardness, and
//! [`genlab`] / [`bench`] the synthetic instance generator and experiment
//! harness.

pub mod bench;
pub mod cacrec_greedy;
pub mod cacrec_milp;
pub mod cacrec_sdp;
pub mod crec;
mod error;
pub mod genlab;
pub mod lp;
pub mod model;
pub mod oracle;
pub mod reductions;
pub mod solve;

pub use error::{Error, Result};
pub use solve::{solve, SolveOptions};
pub use model::{
    check_feasible, conflict_pairs_at_seller, validate, Edge, Feasibility, Instance, Method,
    Recommendation, SolveReport,
};
