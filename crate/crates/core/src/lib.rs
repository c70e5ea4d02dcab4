//! Certified analysis of the sign-change structure of solutions to
//! semilinear elliptic problems -Delta u = f(u) on rectangles.
//!
//! Given a spectral approximation `u_hat` (Legendre tensor coefficients)
//! together with certified error bounds rho = ||u - u_hat||_{H^1_0} and
//! sigma = ||u - u_hat||_{L^inf}, the crate
//!
//! * classifies a dyadic grid into certified-positive, certified-negative
//!   and undetermined cells, enclosing the nodal line ([`grid`]);
//! * bounds Laplacian eigenvalues from below and Sobolev embedding
//!   constants from above ([`constants`]);
//! * checks the no-nodal-domain conditions on every undetermined component
//!   and emits certified bounds on the number of nodal domains
//!   ([`verifier`]);
//! * ships a non-rigorous Newton-Galerkin solver to produce demonstration
//!   inputs ([`solver`]).
//!
//! Everything rigorous is built on the outward-rounded interval kernel in
//! [`interval`]. Solver outputs and heuristic error estimates are clearly
//! tagged as non-certified throughout.

pub mod basis;
pub mod constants;
pub mod grid;
pub mod interval;
pub mod render;
pub mod solver;
pub mod verifier;

pub use interval::{Interval, IntervalError};
