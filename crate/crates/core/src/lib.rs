//! Eigenvalue tail bounds for sums of independent random self-adjoint
//! matrices.
//!
//! The crate is organised in four layers:
//!
//! * [`linalg`]: dense real symmetric matrices, a cyclic Jacobi
//!   eigensolver, compressions `VᵀAV`, extremal isometries from the
//!   Courant-Fischer characterisation, coherence quantities and a
//!   complex-to-real embedding.
//! * [`bounds`]: closed-form Chernoff, Bennett, Bernstein and
//!   subexponential Bernstein bounds on the k-th eigenvalue, a numeric
//!   minimax Laplace evaluator, monotone bound inversion, the
//!   column-subsampling median interval and the covariance-estimation
//!   bounds with sample-size planning.
//! * [`ensemble`]: counter-based random streams, Gaussian sampling,
//!   Bernoulli column masks, finite-support ensembles with exact tail
//!   enumeration, and a Monte Carlo check of the rank-one Wishart moment
//!   dominance.
//! * [`experiments`]: reproducible end-to-end runners that compare the
//!   bounds against simulation and write CSV/JSON outputs.

pub mod bounds;
pub mod ensemble;
mod error;
pub mod experiments;
pub mod linalg;

pub use error::{Error, Result};
