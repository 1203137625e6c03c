//! Stretching potentials for one-dimensional bound states.
//!
//! A seeding potential is cut at a stationary point of one of its
//! eigenfunctions and a constant plateau at that eigenvalue is inserted.
//! The eigenvalue survives, the eigenfunction acquires a flat region, and
//! the rest of the spectrum moves. This crate builds such potentials,
//! solves them numerically and through closed-form quantization
//! conditions, and extends the construction to separable 2D wells and
//! slowly varying waveguides.
//!
//! Units are ħ = m = 1.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod eigensolver;
mod error;
pub mod potentials;
pub(crate) mod quadrature;
pub(crate) mod roots;
pub mod quantization;
pub mod specfun;
pub mod twod;

pub use error::{Error, Result};
pub use potentials::{
    EigenPair, Method, PiecewisePotential, Segment, SegmentForm, SeedingSpec, StretchPlan,
    UnitSystem, WaveFunction,
};
