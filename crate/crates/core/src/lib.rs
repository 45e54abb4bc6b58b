//! Positivity-preserving fifth-order finite volume compact-WENO solver for
//! the one-dimensional Euler equations.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod benchmarks;
pub mod error;
pub mod euler;
pub mod positivity;
pub mod reconstruction;
pub mod riemann;
pub mod timestepper;

pub use error::{Result, SolverError};
pub use euler::{
    conserved_from_primitive, eigen_system, physical_flux, primitive_from_conserved, roe_average,
    sound_speed, ConservedState, EigenSystem, Flux, GasConstants, PrimitiveState, RoeState,
};
pub use reconstruction::{
    reconstruct_interfaces, InterfaceStates, ReconstructionMode, SchemeKind, VariableBasis,
};
pub use riemann::FluxKind;
pub use timestepper::{
    compute_dt, fill_ghosts, integrate, spatial_residual, ssp_rk3_step, BoundaryKind, Field,
    Grid1D, Minima, RunResult, SchemeConfig, StepControl, StepRecord,
};
