//! Ideal-gas primitives for the one-dimensional Euler equations.
//!
//! States are stored in conservative form `(rho, rho*u, E)`. The equation of
//! state is `p = (gamma - 1) * (E - rho*u^2/2)`.

use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use nalgebra::{Matrix3, Vector3};

use crate::error::{Result, SolverError};

/// Ratio of specific heats.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GasConstants {
    gamma: f64,
}

impl GasConstants {
    pub const AIR: GasConstants = GasConstants { gamma: 1.4 };
    pub const MONATOMIC: GasConstants = GasConstants { gamma: 5.0 / 3.0 };

    pub fn new(gamma: f64) -> Result<Self> {
        if !(gamma > 1.0) || !gamma.is_finite() {
            return Err(SolverError::InvalidArgument(format!(
                "gamma must exceed 1, got {gamma}"
            )));
        }
        Ok(Self { gamma })
    }

    #[inline]
    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

/// Cell-average or point value of `(rho, rho*u, E)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ConservedState {
    pub rho: f64,
    pub mom: f64,
    pub ene: f64,
}

impl ConservedState {
    pub const ZERO: ConservedState = ConservedState {
        rho: 0.0,
        mom: 0.0,
        ene: 0.0,
    };

    #[inline]
    pub const fn new(rho: f64, mom: f64, ene: f64) -> Self {
        Self { rho, mom, ene }
    }

    /// Specific internal energy `E/rho - u^2/2`.
    #[inline]
    pub fn internal_energy(&self) -> f64 {
        let u = self.mom / self.rho;
        self.ene / self.rho - 0.5 * u * u
    }

    /// Membership in the admissible set: positive density and internal energy.
    #[inline]
    pub fn is_admissible(&self) -> bool {
        self.rho > 0.0 && self.internal_energy() > 0.0
    }

    #[inline]
    pub fn is_finite(&self) -> bool {
        self.rho.is_finite() && self.mom.is_finite() && self.ene.is_finite()
    }

    /// Mirror image under `x -> -x`: momentum changes sign.
    #[inline]
    pub fn reflect(&self) -> Self {
        Self::new(self.rho, -self.mom, self.ene)
    }

    #[inline]
    pub fn to_array(self) -> [f64; 3] {
        [self.rho, self.mom, self.ene]
    }

    #[inline]
    pub fn from_array(a: [f64; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }

    #[inline]
    pub fn to_vector(self) -> Vector3<f64> {
        Vector3::new(self.rho, self.mom, self.ene)
    }

    #[inline]
    pub fn from_vector(v: &Vector3<f64>) -> Self {
        Self::new(v[0], v[1], v[2])
    }

    pub fn max_abs(&self) -> f64 {
        self.rho.abs().max(self.mom.abs()).max(self.ene.abs())
    }
}

impl Add for ConservedState {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Self::new(self.rho + o.rho, self.mom + o.mom, self.ene + o.ene)
    }
}

impl Sub for ConservedState {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Self::new(self.rho - o.rho, self.mom - o.mom, self.ene - o.ene)
    }
}

impl Mul<f64> for ConservedState {
    type Output = Self;
    #[inline]
    fn mul(self, s: f64) -> Self {
        Self::new(self.rho * s, self.mom * s, self.ene * s)
    }
}

impl Mul<ConservedState> for f64 {
    type Output = ConservedState;
    #[inline]
    fn mul(self, u: ConservedState) -> ConservedState {
        u * self
    }
}

impl Div<f64> for ConservedState {
    type Output = Self;
    #[inline]
    fn div(self, s: f64) -> Self {
        Self::new(self.rho / s, self.mom / s, self.ene / s)
    }
}

impl Neg for ConservedState {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.rho, -self.mom, -self.ene)
    }
}

impl AddAssign for ConservedState {
    #[inline]
    fn add_assign(&mut self, o: Self) {
        self.rho += o.rho;
        self.mom += o.mom;
        self.ene += o.ene;
    }
}

/// `(rho, u, p)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrimitiveState {
    pub rho: f64,
    pub u: f64,
    pub p: f64,
}

impl PrimitiveState {
    #[inline]
    pub const fn new(rho: f64, u: f64, p: f64) -> Self {
        Self { rho, u, p }
    }

    #[inline]
    pub fn is_physical(&self) -> bool {
        self.rho > 0.0 && self.p > 0.0
    }

    #[inline]
    pub fn reflect(&self) -> Self {
        Self::new(self.rho, -self.u, self.p)
    }
}

/// Flux vector `(rho*u, rho*u^2 + p, u*(E + p))`, stored with the same layout
/// as a conserved state.
pub type Flux = ConservedState;

pub fn primitive_from_conserved(u: &ConservedState, gas: &GasConstants) -> Result<PrimitiveState> {
    if u.rho == 0.0 || !u.rho.is_finite() {
        return Err(SolverError::NonPhysicalState {
            context: "primitive_from_conserved",
            rho: u.rho,
            internal_energy: f64::NAN,
        });
    }
    let vel = u.mom / u.rho;
    let p = (gas.gamma() - 1.0) * (u.ene - 0.5 * u.rho * vel * vel);
    Ok(PrimitiveState::new(u.rho, vel, p))
}

pub fn conserved_from_primitive(w: &PrimitiveState, gas: &GasConstants) -> ConservedState {
    let mom = w.rho * w.u;
    let ene = w.p / (gas.gamma() - 1.0) + 0.5 * mom * w.u;
    ConservedState::new(w.rho, mom, ene)
}

/// Pressure without validation; callers guarantee `rho > 0`.
#[inline]
pub(crate) fn pressure(u: &ConservedState, gas: &GasConstants) -> f64 {
    (gas.gamma() - 1.0) * (u.ene - 0.5 * u.mom * u.mom / u.rho)
}

pub fn physical_flux(u: &ConservedState, gas: &GasConstants) -> Result<Flux> {
    if !(u.rho > 0.0) {
        return Err(SolverError::NonPhysicalState {
            context: "physical_flux",
            rho: u.rho,
            internal_energy: f64::NAN,
        });
    }
    Ok(flux_unchecked(u, gas))
}

#[inline]
pub(crate) fn flux_unchecked(u: &ConservedState, gas: &GasConstants) -> Flux {
    let vel = u.mom / u.rho;
    let p = pressure(u, gas);
    ConservedState::new(u.mom, u.mom * vel + p, vel * (u.ene + p))
}

pub fn sound_speed(rho: f64, p: f64, gas: &GasConstants) -> Result<f64> {
    if !(rho > 0.0) || !(p >= 0.0) {
        return Err(SolverError::InvalidArgument(format!(
            "sound speed needs rho > 0 and p >= 0, got rho={rho:e}, p={p:e}"
        )));
    }
    Ok((gas.gamma() * p / rho).sqrt())
}

/// Largest characteristic speed `|u| + a` of an admissible state.
pub fn max_wave_speed(u: &ConservedState, gas: &GasConstants) -> Result<f64> {
    if !u.is_admissible() {
        return Err(SolverError::NonPhysicalState {
            context: "max_wave_speed",
            rho: u.rho,
            internal_energy: u.internal_energy(),
        });
    }
    let vel = u.mom / u.rho;
    let p = pressure(u, gas);
    Ok(vel.abs() + (gas.gamma() * p / u.rho).sqrt())
}

/// Roe-averaged interface quantities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoeState {
    /// `sqrt(rho_r / rho_l)`
    pub r_rho: f64,
    pub u_t: f64,
    pub h_t: f64,
    pub a_t: f64,
}

pub fn roe_average(
    ul: &ConservedState,
    ur: &ConservedState,
    gas: &GasConstants,
) -> Result<RoeState> {
    for (side, s) in [("roe_average left", ul), ("roe_average right", ur)] {
        if !(s.rho > 0.0) {
            return Err(SolverError::NonPhysicalState {
                context: side,
                rho: s.rho,
                internal_energy: f64::NAN,
            });
        }
    }
    roe_average_unchecked(ul, ur, gas)
}

#[inline]
pub(crate) fn roe_average_unchecked(
    ul: &ConservedState,
    ur: &ConservedState,
    gas: &GasConstants,
) -> Result<RoeState> {
    let r_rho = (ur.rho / ul.rho).sqrt();
    let vl = ul.mom / ul.rho;
    let vr = ur.mom / ur.rho;
    let hl = (ul.ene + pressure(ul, gas)) / ul.rho;
    let hr = (ur.ene + pressure(ur, gas)) / ur.rho;
    let inv = 1.0 / (1.0 + r_rho);
    let u_t = (vl + vr * r_rho) * inv;
    let h_t = (hl + hr * r_rho) * inv;
    let residual = h_t - 0.5 * u_t * u_t;
    if !(residual > 0.0) {
        return Err(SolverError::DegenerateRoeAverage { residual });
    }
    let a_t = ((gas.gamma() - 1.0) * residual).sqrt();
    Ok(RoeState {
        r_rho,
        u_t,
        h_t,
        a_t,
    })
}

/// Eigen-decomposition of the flux Jacobian: `left * A * right = diag(lambdas)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenSystem {
    pub lambdas: [f64; 3],
    /// Columns are the right eigenvectors.
    pub right: Matrix3<f64>,
    /// Rows are the left eigenvectors; the inverse of `right`.
    pub left: Matrix3<f64>,
}

impl EigenSystem {
    /// Builds the system from velocity, total specific enthalpy and sound speed.
    #[inline]
    pub fn from_velocity_enthalpy(u: f64, h: f64, a: f64, gas: &GasConstants) -> Self {
        let c1 = (gas.gamma() - 1.0) / (a * a);
        let c2 = 0.5 * u * u * c1;
        let ua = u * a;
        let right = Matrix3::new(1.0, 1.0, 1.0, u - a, u, u + a, h - ua, 0.5 * u * u, h + ua);
        let inv_a = 1.0 / a;
        let left = Matrix3::new(
            0.5 * (c2 + u * inv_a),
            0.5 * (-c1 * u - inv_a),
            0.5 * c1,
            1.0 - c2,
            c1 * u,
            -c1,
            0.5 * (c2 - u * inv_a),
            0.5 * (-c1 * u + inv_a),
            0.5 * c1,
        );
        Self {
            lambdas: [u - a, u, u + a],
            right,
            left,
        }
    }

    #[inline]
    pub fn from_roe(roe: &RoeState, gas: &GasConstants) -> Self {
        Self::from_velocity_enthalpy(roe.u_t, roe.h_t, roe.a_t, gas)
    }
}

pub fn eigen_system(w: &PrimitiveState, gas: &GasConstants) -> Result<EigenSystem> {
    if !w.is_physical() {
        return Err(SolverError::NonPhysicalState {
            context: "eigen_system",
            rho: w.rho,
            internal_energy: w.p / ((gas.gamma() - 1.0) * w.rho),
        });
    }
    let a = (gas.gamma() * w.p / w.rho).sqrt();
    let h = a * a / (gas.gamma() - 1.0) + 0.5 * w.u * w.u;
    Ok(EigenSystem::from_velocity_enthalpy(w.u, h, a, gas))
}

#[cfg(test)]
mod tests {
    use super::*;

    const AIR: GasConstants = GasConstants::AIR;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn primitive_examples() {
        let w = primitive_from_conserved(&ConservedState::new(1.0, 0.0, 2.5), &AIR).unwrap();
        assert_eq!((w.rho, w.u), (1.0, 0.0));
        assert!((w.p - 1.0).abs() < 1e-15);

        // Lax left state (0.445, 0.698, 3.528)
        let lax = PrimitiveState::new(0.445, 0.698, 3.528);
        let u = conserved_from_primitive(&lax, &AIR);
        assert!((u.mom - 0.31061).abs() < 1e-12);
        assert!((u.ene - (3.528 / 0.4 + 0.5 * 0.445 * 0.698 * 0.698)).abs() < 1e-12);
        let back = primitive_from_conserved(&u, &AIR).unwrap();
        assert!(rel(back.u, 0.698) < 1e-14 && rel(back.p, 3.528) < 1e-14);

        let zero = primitive_from_conserved(&ConservedState::new(1.0, 0.0, 0.0), &AIR).unwrap();
        assert_eq!(zero.p, 0.0);
    }

    #[test]
    fn zero_density_is_rejected() {
        assert!(primitive_from_conserved(&ConservedState::new(0.0, 1.0, 1.0), &AIR).is_err());
        assert!(physical_flux(&ConservedState::new(-1.0, 0.0, 1.0), &AIR).is_err());
    }

    #[test]
    fn conserved_examples() {
        let u = conserved_from_primitive(&PrimitiveState::new(1.0, 0.0, 1.0), &AIR);
        assert!((u - ConservedState::new(1.0, 0.0, 2.5)).max_abs() < 1e-15);
        let u = conserved_from_primitive(&PrimitiveState::new(0.125, 0.0, 0.1), &AIR);
        assert!((u.ene - 0.25).abs() < 1e-15);
        let u = conserved_from_primitive(&PrimitiveState::new(3.0, 0.0, 0.0), &AIR);
        assert_eq!(u, ConservedState::new(3.0, 0.0, 0.0));
    }

    #[test]
    fn flux_examples() {
        let f = physical_flux(&ConservedState::new(1.0, 0.0, 2.5), &AIR).unwrap();
        assert!((f - ConservedState::new(0.0, 1.0, 0.0)).max_abs() < 1e-15);
        let f = physical_flux(&ConservedState::new(1.0, 1.0, 3.0), &AIR).unwrap();
        assert!((f.rho - 1.0).abs() < 1e-15);
        assert!((f.mom - 2.0).abs() < 1e-15);
        assert!((f.ene - 4.0).abs() < 1e-15);
        let f = physical_flux(&ConservedState::new(2.0, 0.0, 7.0), &AIR).unwrap();
        assert_eq!(f.rho, 0.0);
        assert_eq!(f.ene, 0.0);
    }

    #[test]
    fn sound_speed_examples() {
        assert!((sound_speed(1.0, 1.0, &AIR).unwrap() - 1.4f64.sqrt()).abs() < 1e-15);
        assert!((sound_speed(1.0, 1.0, &AIR).unwrap() - 1.18321595).abs() < 1e-8);
        assert_eq!(sound_speed(2.0, 0.0, &AIR).unwrap(), 0.0);
        let a = sound_speed(3.857143, 10.33333, &AIR).unwrap();
        assert!((a - (1.4f64 * 10.33333 / 3.857143).sqrt()).abs() < 1e-15);
        assert!((a - 1.93665).abs() < 1e-5);
        assert!(sound_speed(1.0, -1.0, &AIR).is_err());
        assert!(sound_speed(0.0, 1.0, &AIR).is_err());
    }

    #[test]
    fn eigen_values_at_rest() {
        let e = eigen_system(&PrimitiveState::new(1.0, 0.0, 1.0), &AIR).unwrap();
        let a = 1.4f64.sqrt();
        assert!((e.lambdas[0] + a).abs() < 1e-15);
        assert_eq!(e.lambdas[1], 0.0);
        assert!((e.lambdas[2] - a).abs() < 1e-15);
        assert!(eigen_system(&PrimitiveState::new(1.0, 0.0, -1.0), &AIR).is_err());
    }

    #[test]
    fn left_inverts_right() {
        let e = eigen_system(&PrimitiveState::new(0.7, -3.2, 12.0), &AIR).unwrap();
        let prod = e.left * e.right;
        assert!((prod - Matrix3::identity()).abs().max() < 1e-13);
    }

    #[test]
    fn roe_examples() {
        let u = conserved_from_primitive(&PrimitiveState::new(1.3, 0.4, 2.0), &AIR);
        let roe = roe_average(&u, &u, &AIR).unwrap();
        let h = (u.ene + 2.0) / 1.3;
        assert_eq!(roe.r_rho, 1.0);
        assert!(rel(roe.u_t, 0.4) < 1e-15);
        assert!(rel(roe.h_t, h) < 1e-15);
        assert!(rel(roe.a_t, (1.4f64 * 2.0 / 1.3).sqrt()) < 1e-14);

        let ul = conserved_from_primitive(&PrimitiveState::new(1.0, 0.0, 1.0), &AIR);
        let ur = conserved_from_primitive(&PrimitiveState::new(4.0, 3.0, 1.0), &AIR);
        let roe = roe_average(&ul, &ur, &AIR).unwrap();
        assert_eq!(roe.r_rho, 2.0);
        assert!((roe.u_t - 2.0).abs() < 1e-15);
    }

    #[test]
    fn degenerate_roe_average_errors() {
        // zero-energy states give H = u^2/2 exactly
        let ul = ConservedState::new(1.0, 1.0, 0.5);
        let ur = ConservedState::new(1.0, 1.0, 0.5);
        assert!(matches!(
            roe_average(&ul, &ur, &AIR),
            Err(SolverError::DegenerateRoeAverage { .. })
        ));
    }

    #[test]
    fn gas_constant_validation() {
        assert!(GasConstants::new(1.0).is_err());
        assert!(GasConstants::new(f64::NAN).is_err());
        assert_eq!(GasConstants::new(1.4).unwrap(), AIR);
    }
}
