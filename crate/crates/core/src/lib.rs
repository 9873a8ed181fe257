//! Discrete space-time integrable lattices.
//!
//! This crate builds the Lax pairs of the fully discrete NLS and
//! Ablowitz–Ladik lattices and of the semi-discrete-time NLS system,
//! generates their exact solutions, and checks the algebraic identities
//! that hold for them:
//!
//! - zero-curvature conditions and the partial-difference equations they encode,
//! - conservation of transfer-matrix traces and charges,
//! - classical (Sklyanin) Poisson structures, via forward-mode AD,
//! - classical and quantum Yang–Baxter equations,
//! - quantum exchange relations, both exactly (noncommutative normal
//!   ordering over exact coefficients) and in finite cyclic representations.
//!
//! The crate is `no_std` and needs only `alloc`.
//!
//! ## Conventions
//!
//! - Tensor products of 2×2 auxiliary matrices are row-major: `e_ij ⊗ e_kl`
//!   sits at row `2i + k`, column `2j + l` (0-based).
//! - Lattice indices are 0-based. Space is periodic when the data allow it;
//!   time is always open, and residual sweeps only visit sites whose stencil
//!   lies inside the stored time window.
//! - Every guarded denominator is compared against [`EPS_SING`].

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]
#![warn(missing_debug_implementations)]

extern crate alloc;

pub mod ad;
pub mod al;
pub mod algebra;
pub mod dense;
pub mod dnls;
pub mod error;
pub mod lattice;
pub mod ncalg;
pub mod poisson;
pub mod qboson;
pub mod rmatrix;
pub mod sample;
pub mod semidnls;

/// Double-precision complex scalar used by every numeric module.
pub type C64 = num_complex::Complex<f64>;

pub use error::{Error, Result, EPS_SING};

/// Shorthand constructor for a complex number.
#[inline]
pub const fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}
