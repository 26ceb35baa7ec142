//! Finite-mode bosonic canonical transformations acting in closed form on
//! ultracoherent vectors, a truncated-Fock brute-force oracle, and two
//! applications: decoherence of the van Hove model in squeezed baths and
//! Wigner-equation coefficients for an oscillator in a squeezed thermal bath.

pub mod cjson;
pub mod decoherence;
pub mod error;
pub mod fockoracle;
pub mod fockrep;
pub mod linops;
pub mod qbm;
pub mod random;
pub mod symplectic;
pub mod tol;

pub use error::{Error, Result};
pub use fockrep::{UltracoherentVector, WeylDisplacement};
pub use linops::{CMatrix, CVector, TakagiFactorization, C64};
pub use symplectic::{RotationGenerator, SqueezeGenerator, SymplecticPair};
