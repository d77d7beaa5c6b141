//! Named numerical tolerances shared across modules.

/// Default root / eigenvalue tolerance.
pub const EIG: f64 = 1e-12;

/// Iteration cap for the root finder and the QR sweep.
pub const MAX_ITER: usize = 500;

/// Default tolerance for sign tests on quartic coefficients.
pub const COEFF: f64 = 1e-9;

/// Relative threshold for numerical rank of a pencil or matrix.
pub const RANK: f64 = 1e-8;

/// Symmetry / Hermiticity check on input matrices.
pub const SYMMETRY: f64 = 1e-12;

/// An abscissa above this (relative to spectral scale) counts as growth.
pub const ONSET: f64 = 1e-12;

/// Parameter resolution of onset bisections.
pub const BISECT: f64 = 1e-10;

/// Floquet multipliers further than this outside the unit circle are unstable.
pub const FLOQUET: f64 = 1e-9;
