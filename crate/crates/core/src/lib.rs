//! Exact Serre-weight multiplicities for `GL_2(Q_p)` and `PGL_2(Q_p)`.
//!
//! The crate computes the mod `p` reductions of K-types attached to tame
//! inertial types, tensored with algebraic representations of a given Hodge
//! type, and compares the `GL_2` multiplicities `a_{l,t}(s)` with the `PGL_2`
//! multiplicities `alpha_{lambda,tau}(sigma)`.

pub mod arith;
pub mod char_groups;
pub mod cli;
pub mod cycle_calculus;
pub mod error;
pub mod finite_group_reps;
pub mod gl2_types;
pub mod serre_weights;
pub mod transfer;
pub mod weight_lattice;

pub use error::{BmtError, Result};
pub use transfer::Engine;
