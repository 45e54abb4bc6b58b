//! Numerical fluxes and the exact Riemann solver.

pub mod exact;
pub mod hllc;
pub mod lax_friedrichs;

pub use exact::{exact_riemann, ExactRiemann, Wave};
pub use hllc::{hllc_flux, hllc_star_state, hllc_wavespeeds, StarState, WaveSpeeds};
pub use lax_friedrichs::{lax_friedrichs_flux, local_lax_friedrichs_flux};

use crate::error::{Result, SolverError};
use crate::euler::{ConservedState, Flux, GasConstants};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FluxKind {
    Hllc,
    /// Local Lax-Friedrichs.
    Llf,
}

impl FluxKind {
    pub fn name(self) -> &'static str {
        match self {
            FluxKind::Hllc => "hllc",
            FluxKind::Llf => "llf",
        }
    }

    #[inline]
    pub fn flux(
        self,
        ul: &ConservedState,
        ur: &ConservedState,
        gas: &GasConstants,
    ) -> Result<Flux> {
        match self {
            FluxKind::Hllc => hllc_flux(ul, ur, gas),
            FluxKind::Llf => local_lax_friedrichs_flux(ul, ur, gas),
        }
    }
}

impl std::str::FromStr for FluxKind {
    type Err = SolverError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hllc" => Ok(FluxKind::Hllc),
            "llf" => Ok(FluxKind::Llf),
            other => Err(SolverError::InvalidArgument(format!(
                "unknown flux '{other}' (expected hllc, llf)"
            ))),
        }
    }
}
