//! Total value function, error metrics and convergence studies.

mod convergence;
mod errors;
mod total;

pub use convergence::{run_convergence, ConvergenceConfig, ConvergenceReport, ConvergenceRow};
pub use errors::{geodesic_error_bound, l2_distance_piecewise, linf_error};
pub use total::{backtrack_through, find_local_maxima, total_value, LocalMax, TotalValueField};
