//! Rows of the nonlinear compact upwind system.
//!
//! Each row couples the left-biased interface values at `j-1/2`, `j+1/2` and
//! `j+3/2` to the cell averages of cells `j-1`, `j`, `j+1`. The three
//! third-order compact candidates are
//!
//! ```text
//! 2/3 u_{j-1/2} + 1/3 u_{j+1/2} = (ubar_{j-1} + 5 ubar_j) / 6
//! 1/3 u_{j-1/2} + 2/3 u_{j+1/2} = (5 ubar_j + ubar_{j+1}) / 6
//! 2/3 u_{j+1/2} + 1/3 u_{j+3/2} = (ubar_j + 5 ubar_{j+1}) / 6
//! ```
//!
//! and a row is their combination with the nonlinear weights.

use super::weights::StencilWeights;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompactRow {
    /// Coefficients of the interface values at `j-1/2`, `j+1/2`, `j+3/2`.
    pub lhs: [f64; 3],
    /// Coefficients of the cell averages of `j-1`, `j`, `j+1`.
    pub rhs: [f64; 3],
}

impl CompactRow {
    #[inline]
    pub fn from_omega(w: &[f64; 3]) -> Self {
        let [w0, w1, w2] = *w;
        Self {
            lhs: [
                (2.0 * w0 + w1) / 3.0,
                (w0 + 2.0 * (w1 + w2)) / 3.0,
                w2 / 3.0,
            ],
            rhs: [
                w0 / 6.0,
                (5.0 * (w0 + w1) + w2) / 6.0,
                (w1 + 5.0 * w2) / 6.0,
            ],
        }
    }
}

pub fn compact_row(w: &StencilWeights) -> CompactRow {
    CompactRow::from_omega(&w.omega)
}
