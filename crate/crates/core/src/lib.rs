//! Elastic shape distances between open curves from a Hamilton–Jacobi–Bellman
//! formulation of the registration problem.
//!
//! The pipeline is: sample curves ([`curve`]), transform them to square-root-velocity
//! fields ([`srv`]), solve for the value function on an `N × N` grid ([`hjb`]), backtrack
//! the optimal reparametrisation ([`registration`]) and build geodesics ([`geodesic`]).
//! [`diagnostics`] holds the total value function, error metrics and convergence studies.

pub mod cli;
pub mod curve;
pub mod diagnostics;
pub mod error;
pub mod geodesic;
pub mod hjb;
pub mod io;
pub mod registration;
pub mod samples;
pub mod srv;

pub use curve::{apply_reparam, arc_length_parametrise, Reparam, SampledCurve};
pub use error::{Error, Result};
pub use hjb::{solve, FSource, GridSpec, Problem, Scheme, SchemeConfig, Solution, ValueField};
pub use srv::{approx_hf, approx_hf_ddp, eval_f, inverse_srvt, srvt, SrvField};
pub use geodesic::{geodesic, shape_distance, GeodesicResult};
pub use registration::{backtrack, eval_jh, ReparamPath};
