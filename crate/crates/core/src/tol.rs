//! Module-level default tolerances.

/// Default absolute tolerance on unit-scale data.
pub const DEFAULT: f64 = 1e-10;

/// Symmetry check for Takagi input, relative to the matrix norm.
pub const SYMMETRY: f64 = 1e-12;

/// Condition number above which a matrix is reported as singular.
pub const MAX_CONDITION: f64 = 1e14;

/// Margin kept from the boundary of the Siegel disc.
pub const SIEGEL_MARGIN: f64 = 1e-9;

/// Largest truncation weight accepted when embedding into a finite Fock space.
pub const TRUNCATION_WEIGHT: f64 = 1e-8;

/// Default cap on the truncated Fock dimension.
pub const MAX_FOCK_DIM: usize = 250_000;

/// Canonicity tolerance for an `n`-mode pair, scaled by dimension.
pub fn canonical(n: usize) -> f64 {
    DEFAULT * n.max(1) as f64
}
