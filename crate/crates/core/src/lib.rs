//! Periodic traveling waves of the Boussinesq equation (p = 2, 3) and the
//! Klein-Gordon-Zakharov system, with a complete linear-stability toolkit:
//!
//! * [`elliptic`] — complete elliptic integrals, their κ-derivatives, and
//!   Jacobi elliptic functions (AGM / Landen, ~1e-15 accuracy);
//! * [`waves`] — cnoidal and dnoidal wave construction with consistent
//!   (κ, w) ↔ (T, c) parametrizations;
//! * [`indices`] — closed-form stability indices ⟨H⁻¹ψ₀′, ψ₀′⟩, threshold
//!   speeds, threshold-period solvers, and the figure functions;
//! * [`spectral`] — Fourier-spectral discretizations of the linearized
//!   operators, Lamé reference spectra, and the numerical index that
//!   cross-checks every closed form;
//! * [`pencil`] — companion linearization of λ²ψ ± 2cλψ′ + Hψ = 0 and direct
//!   growing-mode scans;
//! * [`acceptance`] — the crate's numbered validation criteria;
//! * [`cli`] — the `pwave` command-line front end.

// Negated comparisons like `!(w > 0.0)` are deliberate: they reject NaN
// arguments, which `w <= 0.0` would let through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Indexed loops mirror the matrix formulas they implement.
#![allow(clippy::needless_range_loop)]

pub mod acceptance;
pub mod cli;
pub mod elliptic;
pub mod error;
pub mod indices;
pub mod pencil;
pub mod serialize;
pub mod spectral;
pub mod waves;

pub use error::{Error, Result};
