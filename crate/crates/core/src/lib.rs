//! g-frames for finite-dimensional Hilbert C*-modules over the matrix
//! algebra `M_n(C)`.
//!
//! The module is `H = A^d` with `<x, y> = sum_i x_i y_i^*`. Vectors and
//! adjointable operators are stored in flattened form: a vector is the
//! `n x (n d)` row-block matrix `[x_1 | ... | x_d]`, and an operator
//! `T: A^d -> A^d'` is the `(n d) x (n d')` block matrix acting by right
//! multiplication. Under this representation the module adjoint is exactly
//! the conjugate transpose, and every frame quantity reduces to the spectrum
//! of a Hermitian matrix.
//!
//! On top of that sit the g-frame machinery ([`gframe`]), seeded instance
//! generators ([`gen`]), and executable checkers for the sum theorems
//! ([`sums`]) and perturbation-stability results ([`stability`]), each of
//! which returns a report comparing predicted and achieved bounds.
//! [`dispatch`] wires them to a theorem-id registry for the scenario runner.

#![no_std]

extern crate alloc;

pub mod algebra;
pub mod dispatch;
pub mod error;
pub mod gen;
pub mod gframe;
pub mod hmodule;
pub mod linalg;
pub mod report;
pub mod stability;
pub mod sums;

#[cfg(feature = "serde")]
mod serde_impls;

pub use algebra::{AlgebraElement, Tolerance};
pub use error::{Error, Result};
pub use gframe::{Classification, FrameBounds, FrameKind, GFrameFamily};
pub use hmodule::{AdjointableOp, ModuleVector};
pub use linalg::FlatMatrix;
pub use num_complex::Complex64;
pub use report::{Check, CheckConfig, PerturbationReport, StabilityId, TheoremId, TheoremReport, Verdict};
