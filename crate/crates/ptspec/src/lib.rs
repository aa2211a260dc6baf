//! Spectral toolkit for one-dimensional second-derivative operators with a
//! point interaction at the origin.
//!
//! The library covers two geometries:
//!
//! * the whole line with a one-parameter interface at `x = 0`
//!   ([`line_model`]), where the point spectrum is either empty or all of
//!   `C \ [0, inf)` depending on the interface angle, and
//! * a finite interval `(-l, l)` with the same interface at the origin plus
//!   outer boundary conditions at `x = -l, l` ([`interval_spectra`]), where the
//!   spectrum is discrete, empty, or the entire complex plane.
//!
//! Supporting modules provide the boundary-condition algebra and symmetry
//! predicates ([`boundary_conditions`]), sampled piecewise functions with
//! finite-difference and quadrature machinery ([`piecewise_grid`]), an
//! argument-principle complex root finder ([`complex_roots`]), and an explicit
//! resolvent construction with compactness diagnostics ([`resolvent`]).

pub mod boundary_conditions;
pub mod complex_roots;
pub mod error;
pub mod interval_spectra;
pub mod line_model;
pub mod piecewise_grid;
pub mod resolvent;

pub use error::{Error, Result};
