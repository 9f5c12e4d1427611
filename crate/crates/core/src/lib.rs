//! Numerics for symmetric-square L-functions of level-one Maass forms.
//!
//! The crate evaluates Zagier L-series, the exact first-moment formula for
//! `L(sym² u_j, 1/2+2it)` twisted by `λ_j(m²)`, the Voronoi summation formula
//! for Zagier coefficients at moduli `c ≡ 0 (mod 4)`, and the uniform
//! asymptotic expansions of ₂F₁, imaginary-order Bessel and Airy functions
//! that appear in those formulas.  Every identity comes with a verifier that
//! computes both sides independently.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod maass;
pub mod moment;
pub mod oscint;
pub mod specfun;
pub mod voronoi;
pub mod zagier;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use specfun::PrecisionContext;
