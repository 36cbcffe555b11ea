//! Numerical engine for isoperiodic deformations of real hyperelliptic curves,
//! equilibrium measures, Pell certificates, Toda lattice solutions and
//! constrained Schlesinger systems.

#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod curve;
pub mod equilibrium;
pub mod error;
pub mod frame;
pub mod isoflow;
pub mod json;
pub mod linalg;
pub mod pell;
pub mod periods;
pub mod poly;
pub mod quad;
pub mod report;
pub mod schlesinger;
pub mod theta;
pub mod variational;

pub use curve::{build_curve, BranchId, CurveSpec};
pub use error::{Error, Result};
