//! Numerical toolkit for multilinear Hausdorff operators and their commutators
//! on variable-exponent weighted function spaces.
//!
//! The crate is `no_std` (it needs `alloc`). Everything here is a pure
//! function over immutable inputs; IO, scenario files and the command-line
//! front end live in the `hausdorff` crate.
//!
//! Module map:
//!
//! * [`exponents`] closed-form variable exponents, exponent classes and the
//!   composite exponents of the boundedness theorems.
//! * [`quadrature`] polar-dyadic grids, test functions, power weights and the
//!   modular functional.
//! * [`norms`] Luxemburg, Herz, Morrey-Herz, central Morrey, CMO, Lipschitz
//!   and BMO norms plus the embedding and shell lemmas.
//! * [`matrixfam`] matrix families, kernels, the dyadic index and the theorem
//!   constants.
//! * [`operators`] pointwise evaluation of Hausdorff operators and commutators.
//! * [`verify`] scenarios, hypothesis checks, theorem verification, ratio scans
//!   and proof-level inequality witnesses.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod error;
pub mod exponents;
pub mod flags;
pub mod math;
pub mod matrixfam;
pub mod norms;
pub mod operators;
pub mod quadrature;
pub mod verify;

pub use error::{Error, Result};
pub use flags::{Flag, Flags};

/// A point of R^n, n <= 3. Unused trailing coordinates are zero.
pub type Point = [f64; 3];

/// Largest supported ambient dimension.
pub const MAX_DIM: usize = 3;
