//! Smoothness indicators and nonlinear WENO weights over a five-cell stencil.

/// Regularizer added to the smoothness indicators.
pub const DEFAULT_EPSILON: f64 = 1e-13;

/// Linear (optimal) weights of the three candidate stencils.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearWeights(pub [f64; 3]);

impl LinearWeights {
    /// Weights that combine the three third-order compact candidates into the
    /// fifth-order compact upwind scheme.
    pub const COMPACT: LinearWeights = LinearWeights([0.2, 0.5, 0.3]);
    /// Weights of the explicit fifth-order WENO point reconstruction.
    pub const EXPLICIT: LinearWeights = LinearWeights([0.1, 0.6, 0.3]);
}

/// Indicators, global indicator and normalized weights for one interface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StencilWeights {
    pub beta: [f64; 3],
    /// `|beta_2 - beta_0|`
    pub tau5: f64,
    pub omega: [f64; 3],
}

impl StencilWeights {
    /// Fixed weights with zero indicators.
    pub fn linear(lw: LinearWeights) -> Self {
        Self {
            beta: [0.0; 3],
            tau5: 0.0,
            omega: lw.0,
        }
    }
}

/// Jiang-Shu indicators of the three candidates for five consecutive averages
/// centered on cell `j` (`ubar[2]`).
#[inline]
pub fn smoothness_indicators(ubar: &[f64; 5]) -> [f64; 3] {
    let [a, b, c, d, e] = *ubar;
    let b0 = 13.0 / 12.0 * sq(a - 2.0 * b + c) + 0.25 * sq(a - 4.0 * b + 3.0 * c);
    let b1 = 13.0 / 12.0 * sq(b - 2.0 * c + d) + 0.25 * sq(b - d);
    let b2 = 13.0 / 12.0 * sq(c - 2.0 * d + e) + 0.25 * sq(3.0 * c - 4.0 * d + e);
    [b0, b1, b2]
}

#[inline]
fn sq(x: f64) -> f64 {
    x * x
}

/// WENO-Z weights `alpha_k = c_k (1 + (tau5 / (beta_k + eps))^2)` with the
/// compact linear weights.
pub fn wenoz_weights(beta: [f64; 3], eps: f64) -> StencilWeights {
    wenoz_weights_with(beta, LinearWeights::COMPACT, eps)
}

#[inline]
pub fn wenoz_weights_with(beta: [f64; 3], lw: LinearWeights, eps: f64) -> StencilWeights {
    let tau5 = (beta[2] - beta[0]).abs();
    let mut alpha = [0.0; 3];
    for k in 0..3 {
        alpha[k] = lw.0[k] * (1.0 + sq(tau5 / (beta[k] + eps)));
    }
    StencilWeights {
        beta,
        tau5,
        omega: normalize(alpha),
    }
}

/// Jiang-Shu weights `alpha_k = c_k / (beta_k + eps)^2` with the compact
/// linear weights.
pub fn wenojs_weights(beta: [f64; 3], eps: f64) -> StencilWeights {
    wenojs_weights_with(beta, LinearWeights::COMPACT, eps)
}

#[inline]
pub fn wenojs_weights_with(beta: [f64; 3], lw: LinearWeights, eps: f64) -> StencilWeights {
    let mut alpha = [0.0; 3];
    for k in 0..3 {
        alpha[k] = lw.0[k] / sq(beta[k] + eps);
    }
    StencilWeights {
        beta,
        tau5: (beta[2] - beta[0]).abs(),
        omega: normalize(alpha),
    }
}

#[inline]
fn normalize(alpha: [f64; 3]) -> [f64; 3] {
    let inv = 1.0 / (alpha[0] + alpha[1] + alpha[2]);
    [alpha[0] * inv, alpha[1] * inv, alpha[2] * inv]
}

/// Which side of the stencil's center cell the interface lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// Value at `x_{j+1/2}` from cell `j`, stencil `ubar[0..5] = j-2..=j+2`.
    Left,
    /// Value at `x_{j-1/2}` from cell `j`, same stencil layout. Weights must
    /// have been computed on the reversed stencil.
    Right,
}

/// Explicit fifth-order WENO interface value from three third-order
/// candidate polynomials.
#[inline]
pub fn weno5_point_value(ubar: &[f64; 5], w: &StencilWeights, side: Side) -> f64 {
    let [a, b, c, d, e] = match side {
        Side::Left => *ubar,
        Side::Right => [ubar[4], ubar[3], ubar[2], ubar[1], ubar[0]],
    };
    let q0 = (2.0 * a - 7.0 * b + 11.0 * c) / 6.0;
    let q1 = (-b + 5.0 * c + 2.0 * d) / 6.0;
    let q2 = (2.0 * c + 5.0 * d - e) / 6.0;
    w.omega[0] * q0 + w.omega[1] * q1 + w.omega[2] * q2
}

/// The stencil in reverse order; [`Side::Right`] weights are computed on it.
pub fn reversed(ubar: &[f64; 5]) -> [f64; 5] {
    [ubar[4], ubar[3], ubar[2], ubar[1], ubar[0]]
}
