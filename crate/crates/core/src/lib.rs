//! Stability of small linear mechanical systems with damping, gyroscopic and
//! circulatory forces.
//!
//! The crate is organised bottom-up:
//!
//! - [`smallalg`]: polynomial roots and dense complex eigenproblems for n ≤ 8
//! - [`msystem`]: the `M q'' + (D+G) q' + (K+N) q = 0` representation and its spectrum
//! - [`hurwitz`]: algebraic stability conditions for real quartics
//! - [`krein`]: indefinite metrics, Krein signs and collision tracking
//! - [`paradox`]: circulatory thresholds and vanishing-damping limits
//! - [`umbrella`]: Whitney umbrella coordinates, EP sets and abscissa minimization
//! - [`models`]: the example systems (Ziegler, Brouwer, Maclaurin, Sobolev, ...)

pub mod error;
pub mod hurwitz;
pub mod krein;
pub mod models;
pub mod msystem;
pub mod paradox;
pub mod smallalg;
pub mod tol;
pub mod umbrella;

pub use error::{Error, Result};
pub use num_complex::Complex64;
