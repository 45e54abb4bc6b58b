//! Exact solution of the Riemann problem for an ideal gas.
//!
//! The star pressure is found by a bracketed Newton iteration on
//! `f_L(p) + f_R(p) + u_R - u_L = 0`; pressure positivity violations are
//! handled with the vacuum fan.

use crate::error::{Result, SolverError};
use crate::euler::{GasConstants, PrimitiveState};

const MAX_ITERATIONS: usize = 100;

/// One of the two nonlinear waves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Wave {
    Shock { speed: f64 },
    Rarefaction { head: f64, tail: f64 },
}

impl Wave {
    /// Shock speed, or the midpoint of the fan for a rarefaction.
    pub fn location(&self) -> f64 {
        match *self {
            Wave::Shock { speed } => speed,
            Wave::Rarefaction { head, tail } => 0.5 * (head + tail),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactRiemann {
    pub left: PrimitiveState,
    pub right: PrimitiveState,
    pub gamma: f64,
    pub p_star: f64,
    pub u_star: f64,
    pub rho_star_left: f64,
    pub rho_star_right: f64,
    /// Set when the data generate a vacuum between two rarefactions.
    pub vacuum: bool,
}

fn sound(w: &PrimitiveState, g: f64) -> f64 {
    (g * w.p / w.rho).sqrt()
}

/// `f_K(p)` and its derivative.
fn pressure_function(p: f64, w: &PrimitiveState, g: f64) -> (f64, f64) {
    let a = sound(w, g);
    if p > w.p {
        let ak = 2.0 / ((g + 1.0) * w.rho);
        let bk = (g - 1.0) / (g + 1.0) * w.p;
        let q = (ak / (p + bk)).sqrt();
        ((p - w.p) * q, q * (1.0 - 0.5 * (p - w.p) / (bk + p)))
    } else {
        let r = p / w.p;
        let ex = (g - 1.0) / (2.0 * g);
        (
            2.0 * a / (g - 1.0) * (r.powf(ex) - 1.0),
            r.powf(-(g + 1.0) / (2.0 * g)) / (w.rho * a),
        )
    }
}

impl ExactRiemann {
    pub fn new(left: PrimitiveState, right: PrimitiveState, gas: &GasConstants) -> Result<Self> {
        for (w, context) in [
            (&left, "exact riemann left"),
            (&right, "exact riemann right"),
        ] {
            if !(w.rho > 0.0 && w.p > 0.0 && w.u.is_finite()) {
                return Err(SolverError::NonPhysicalState {
                    context,
                    rho: w.rho,
                    internal_energy: w.p / w.rho,
                });
            }
        }
        let g = gas.gamma();
        let (al, ar) = (sound(&left, g), sound(&right, g));
        let du = right.u - left.u;
        let critical = 2.0 * (al + ar) / (g - 1.0);
        if critical <= du {
            return Ok(Self {
                left,
                right,
                gamma: g,
                p_star: 0.0,
                u_star: 0.5 * (left.u + 2.0 * al / (g - 1.0) + right.u - 2.0 * ar / (g - 1.0)),
                rho_star_left: 0.0,
                rho_star_right: 0.0,
                vacuum: true,
            });
        }
        let residual = |p: f64| {
            let (fl, dl) = pressure_function(p, &left, g);
            let (fr, dr) = pressure_function(p, &right, g);
            (fl + fr + du, dl + dr)
        };
        // g(0) < 0 here; find an upper bracket
        let mut lo = 0.0;
        let mut hi = left.p.max(right.p);
        while residual(hi).0 < 0.0 {
            lo = hi;
            hi *= 2.0;
            if !hi.is_finite() {
                return Err(SolverError::NoConvergence { iterations: 0 });
            }
        }
        // two-rarefaction guess, exact when both waves are rarefactions
        let ex = (g - 1.0) / (2.0 * g);
        let trr = ((al + ar - 0.5 * (g - 1.0) * du)
            / (al / left.p.powf(ex) + ar / right.p.powf(ex)))
        .powf(1.0 / ex);
        let mut p = if trr > lo && trr < hi {
            trr
        } else {
            0.5 * (lo + hi)
        };
        let scale = left.u.abs().max(right.u.abs()).max(al).max(ar);
        let mut converged = false;
        for _ in 0..MAX_ITERATIONS {
            let (f, df) = residual(p);
            if f.abs() <= 1e-14 * scale {
                converged = true;
                break;
            }
            if f < 0.0 {
                lo = p;
            } else {
                hi = p;
            }
            let mut next = p - f / df;
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            if (next - p).abs() <= 1e-15 * p || hi - lo <= 1e-15 * hi {
                p = next;
                converged = true;
                break;
            }
            p = next;
        }
        if !converged {
            return Err(SolverError::NoConvergence {
                iterations: MAX_ITERATIONS,
            });
        }
        let (fl, _) = pressure_function(p, &left, g);
        let (fr, _) = pressure_function(p, &right, g);
        let u_star = 0.5 * (left.u + right.u) + 0.5 * (fr - fl);
        let star_density = |w: &PrimitiveState| {
            if p > w.p {
                let r = p / w.p;
                let k = (g - 1.0) / (g + 1.0);
                w.rho * (r + k) / (k * r + 1.0)
            } else {
                w.rho * (p / w.p).powf(1.0 / g)
            }
        };
        Ok(Self {
            left,
            right,
            gamma: g,
            p_star: p,
            u_star,
            rho_star_left: star_density(&left),
            rho_star_right: star_density(&right),
            vacuum: false,
        })
    }

    pub fn left_wave(&self) -> Wave {
        let g = self.gamma;
        let w = &self.left;
        let a = sound(w, g);
        if self.vacuum {
            return Wave::Rarefaction {
                head: w.u - a,
                tail: w.u + 2.0 * a / (g - 1.0),
            };
        }
        if self.p_star > w.p {
            let r = self.p_star / w.p;
            Wave::Shock {
                speed: w.u - a * ((g + 1.0) / (2.0 * g) * r + (g - 1.0) / (2.0 * g)).sqrt(),
            }
        } else {
            let a_star = a * (self.p_star / w.p).powf((g - 1.0) / (2.0 * g));
            Wave::Rarefaction {
                head: w.u - a,
                tail: self.u_star - a_star,
            }
        }
    }

    pub fn right_wave(&self) -> Wave {
        let g = self.gamma;
        let w = &self.right;
        let a = sound(w, g);
        if self.vacuum {
            return Wave::Rarefaction {
                head: w.u + a,
                tail: w.u - 2.0 * a / (g - 1.0),
            };
        }
        if self.p_star > w.p {
            let r = self.p_star / w.p;
            Wave::Shock {
                speed: w.u + a * ((g + 1.0) / (2.0 * g) * r + (g - 1.0) / (2.0 * g)).sqrt(),
            }
        } else {
            let a_star = a * (self.p_star / w.p).powf((g - 1.0) / (2.0 * g));
            Wave::Rarefaction {
                head: w.u + a,
                tail: self.u_star + a_star,
            }
        }
    }

    /// Solution at similarity coordinate `xi = x / t`.
    pub fn sample(&self, xi: f64) -> PrimitiveState {
        let g = self.gamma;
        if self.vacuum {
            let Wave::Rarefaction { tail: tl, .. } = self.left_wave() else {
                unreachable!()
            };
            let Wave::Rarefaction { tail: tr, .. } = self.right_wave() else {
                unreachable!()
            };
            if xi <= tl {
                return self.sample_left_fan(xi, g);
            }
            if xi >= tr {
                return self.sample_right_fan(xi, g);
            }
            return PrimitiveState::new(0.0, 0.0, 0.0);
        }
        if xi <= self.u_star {
            match self.left_wave() {
                Wave::Shock { speed } => {
                    if xi <= speed {
                        self.left
                    } else {
                        PrimitiveState::new(self.rho_star_left, self.u_star, self.p_star)
                    }
                }
                Wave::Rarefaction { head, tail } => {
                    if xi <= head {
                        self.left
                    } else if xi >= tail {
                        PrimitiveState::new(self.rho_star_left, self.u_star, self.p_star)
                    } else {
                        self.sample_left_fan(xi, g)
                    }
                }
            }
        } else {
            match self.right_wave() {
                Wave::Shock { speed } => {
                    if xi >= speed {
                        self.right
                    } else {
                        PrimitiveState::new(self.rho_star_right, self.u_star, self.p_star)
                    }
                }
                Wave::Rarefaction { head, tail } => {
                    if xi >= head {
                        self.right
                    } else if xi <= tail {
                        PrimitiveState::new(self.rho_star_right, self.u_star, self.p_star)
                    } else {
                        self.sample_right_fan(xi, g)
                    }
                }
            }
        }
    }

    fn sample_left_fan(&self, xi: f64, g: f64) -> PrimitiveState {
        let w = &self.left;
        let a = sound(w, g);
        if xi <= w.u - a {
            return *w;
        }
        let c = 2.0 / (g + 1.0) + (g - 1.0) / ((g + 1.0) * a) * (w.u - xi);
        let c = c.max(0.0);
        PrimitiveState::new(
            w.rho * c.powf(2.0 / (g - 1.0)),
            2.0 / (g + 1.0) * (a + 0.5 * (g - 1.0) * w.u + xi),
            w.p * c.powf(2.0 * g / (g - 1.0)),
        )
    }

    fn sample_right_fan(&self, xi: f64, g: f64) -> PrimitiveState {
        let w = &self.right;
        let a = sound(w, g);
        if xi >= w.u + a {
            return *w;
        }
        let c = 2.0 / (g + 1.0) - (g - 1.0) / ((g + 1.0) * a) * (w.u - xi);
        let c = c.max(0.0);
        PrimitiveState::new(
            w.rho * c.powf(2.0 / (g - 1.0)),
            2.0 / (g + 1.0) * (-a + 0.5 * (g - 1.0) * w.u + xi),
            w.p * c.powf(2.0 * g / (g - 1.0)),
        )
    }
}

/// Exact solution of the Riemann problem `wl | wr` at `xi = x / t`.
pub fn exact_riemann(
    wl: &PrimitiveState,
    wr: &PrimitiveState,
    xi: f64,
    gas: &GasConstants,
) -> Result<PrimitiveState> {
    Ok(ExactRiemann::new(*wl, *wr, gas)?.sample(xi))
}
