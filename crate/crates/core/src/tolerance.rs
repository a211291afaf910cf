//! Numerical tolerances shared by every geometric routine.

/// Algebraic identities: determinants, relator products, homomorphism checks.
pub const ALGEBRAIC: f64 = 1e-7;

/// Geometric closure of traced geodesics and conjugacy invariance of lengths.
pub const CLOSURE: f64 = 1e-6;

/// Degeneracy detection: coincident endpoints, vertex passes, tangencies.
pub const DEGENERACY: f64 = 1e-9;
