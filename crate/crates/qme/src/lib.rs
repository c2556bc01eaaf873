//! Quantum master equations for boundary-driven quadratic fermion chains.
//!
//! The model is a spinless-fermion tight-binding chain with the first and
//! last few sites each coupled to an independent Lorentzian reservoir.
//! Because both the Hamiltonian and every dissipator built here are
//! quadratic in Majorana operators, generators are represented by a
//! 2L x 2L Hermitian kernel M and steady states by a 2L x 2L covariance
//! matrix W, so the full machinery runs comfortably at L = 128.
//!
//! Five generator constructions are provided: the Redfield kernel, the
//! secular (Davies) and non-secular rotating-frame (NRE) GKSL forms, and
//! their Lieb-Robinson-localized variants that diagonalize only a window
//! of radius R around each reservoir site. The `oracle` module carries a
//! dense brute-force representation used to pin every sign and
//! normalization convention at small L before they are trusted at scale.

pub mod bath;
pub mod builders;
pub mod calibration;
pub mod lattice;
pub mod metrics;
pub mod oracle;
pub mod scenarios;
pub mod solver;

mod error;

pub use error::Error;

/// Convenience alias used throughout: complex scalar.
pub type C64 = nalgebra::Complex<f64>;
/// Dense complex matrix.
pub type CMatrix = nalgebra::DMatrix<C64>;
/// Dense real matrix.
pub type RMatrix = nalgebra::DMatrix<f64>;
/// Dense complex vector.
pub type CVector = nalgebra::DVector<C64>;

pub type Result<T> = std::result::Result<T, Error>;
