//! HLLC flux with Roe-bounded acoustic wave speeds.

use crate::error::{Result, SolverError};
use crate::euler::{
    conserved_from_primitive, flux_unchecked, roe_average_unchecked, ConservedState, Flux,
    GasConstants, PrimitiveState,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveSpeeds {
    pub s_l: f64,
    pub s_m: f64,
    pub s_r: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StarState {
    pub rho_s: f64,
    /// Equal to the contact speed `S_M`.
    pub u_s: f64,
    pub p_s: f64,
    pub ene_s: f64,
}

impl StarState {
    pub fn to_conserved(&self) -> ConservedState {
        ConservedState::new(self.rho_s, self.rho_s * self.u_s, self.ene_s)
    }
}

fn check_physical(w: &PrimitiveState, context: &'static str) -> Result<()> {
    if w.is_physical() {
        Ok(())
    } else {
        Err(SolverError::NonPhysicalState {
            context,
            rho: w.rho,
            internal_energy: w.p / w.rho,
        })
    }
}

/// `S_L = min(u_l - a_l, u~ - a~)`, `S_R = max(u_r + a_r, u~ + a~)` and the
/// contact speed from the momentum balance.
pub fn hllc_wavespeeds(
    wl: &PrimitiveState,
    wr: &PrimitiveState,
    gas: &GasConstants,
) -> Result<WaveSpeeds> {
    check_physical(wl, "hllc left state")?;
    check_physical(wr, "hllc right state")?;
    let ul = conserved_from_primitive(wl, gas);
    let ur = conserved_from_primitive(wr, gas);
    wavespeeds_unchecked(wl, wr, &ul, &ur, gas)
}

#[inline]
fn wavespeeds_unchecked(
    wl: &PrimitiveState,
    wr: &PrimitiveState,
    ul: &ConservedState,
    ur: &ConservedState,
    gas: &GasConstants,
) -> Result<WaveSpeeds> {
    let g = gas.gamma();
    let al = (g * wl.p / wl.rho).sqrt();
    let ar = (g * wr.p / wr.rho).sqrt();
    let roe = roe_average_unchecked(ul, ur, gas)?;
    let s_l = (wl.u - al).min(roe.u_t - roe.a_t);
    let s_r = (wr.u + ar).max(roe.u_t + roe.a_t);
    let num = wr.rho * wr.u * (s_r - wr.u) - wl.rho * wl.u * (s_l - wl.u) + wl.p - wr.p;
    let den = wr.rho * (s_r - wr.u) - wl.rho * (s_l - wl.u);
    let s_m = num / den;
    if !(s_l <= s_m && s_m <= s_r) {
        return Err(SolverError::WaveSpeedOrdering { s_l, s_m, s_r });
    }
    Ok(WaveSpeeds { s_l, s_m, s_r })
}

/// Star state between the acoustic wave `s_edge` and the contact `s_m`.
pub fn hllc_star_state(
    w: &PrimitiveState,
    ene: f64,
    s_edge: f64,
    s_m: f64,
    _gas: &GasConstants,
) -> Result<StarState> {
    if s_edge == s_m {
        return Err(SolverError::CoincidentWaveSpeeds { speed: s_m });
    }
    Ok(star_unchecked(w, ene, s_edge, s_m))
}

#[inline]
fn star_unchecked(w: &PrimitiveState, ene: f64, s: f64, s_m: f64) -> StarState {
    let inv = 1.0 / (s - s_m);
    let p_s = w.rho * (w.u - s) * (w.u - s_m) + w.p;
    StarState {
        rho_s: w.rho * (s - w.u) * inv,
        u_s: s_m,
        p_s,
        ene_s: ((s - w.u) * ene - w.p * w.u + p_s * s_m) * inv,
    }
}

#[inline]
fn primitive_checked(
    u: &ConservedState,
    gas: &GasConstants,
    context: &'static str,
) -> Result<PrimitiveState> {
    if !(u.rho > 0.0) || !u.is_finite() {
        return Err(SolverError::NonPhysicalState {
            context,
            rho: u.rho,
            internal_energy: u.internal_energy(),
        });
    }
    let v = u.mom / u.rho;
    let p = (gas.gamma() - 1.0) * (u.ene - 0.5 * u.mom * v);
    let w = PrimitiveState::new(u.rho, v, p);
    check_physical(&w, context)?;
    Ok(w)
}

pub fn hllc_flux(ul: &ConservedState, ur: &ConservedState, gas: &GasConstants) -> Result<Flux> {
    let wl = primitive_checked(ul, gas, "hllc left state")?;
    let wr = primitive_checked(ur, gas, "hllc right state")?;
    let s = wavespeeds_unchecked(&wl, &wr, ul, ur, gas)?;
    let flux = if s.s_l > 0.0 {
        flux_unchecked(ul, gas)
    } else if s.s_m > 0.0 {
        let star = star_unchecked(&wl, ul.ene, s.s_l, s.s_m).to_conserved();
        flux_unchecked(ul, gas) + s.s_l * (star - *ul)
    } else if s.s_r >= 0.0 {
        let star = star_unchecked(&wr, ur.ene, s.s_r, s.s_m).to_conserved();
        flux_unchecked(ur, gas) + s.s_r * (star - *ur)
    } else {
        flux_unchecked(ur, gas)
    };
    Ok(flux)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::euler::physical_flux;

    const AIR: GasConstants = GasConstants::AIR;

    #[test]
    fn symmetric_quiescent_states() {
        let w = PrimitiveState::new(1.0, 0.0, 1.0);
        let s = hllc_wavespeeds(&w, &w, &AIR).unwrap();
        assert!((s.s_l + 1.4f64.sqrt()).abs() < 1e-15);
        assert!((s.s_r - 1.4f64.sqrt()).abs() < 1e-15);
        assert_eq!(s.s_m, 0.0);
    }

    #[test]
    fn mirror_inputs() {
        let wl = PrimitiveState::new(0.7, -1.3, 2.0);
        let wr = PrimitiveState::new(0.7, 1.3, 2.0);
        let s = hllc_wavespeeds(&wl, &wr, &AIR).unwrap();
        assert!(s.s_m.abs() < 1e-15);
        assert!((s.s_l + s.s_r).abs() < 1e-14);
        let f = hllc_flux(
            &conserved_from_primitive(&wl, &AIR),
            &conserved_from_primitive(&wr, &AIR),
            &AIR,
        )
        .unwrap();
        assert!(f.rho.abs() < 1e-14 && f.ene.abs() < 1e-14);
        assert!(f.mom > 0.0);
    }

    #[test]
    fn sod_wavespeeds_are_ordered() {
        let s = hllc_wavespeeds(
            &PrimitiveState::new(1.0, 0.0, 1.0),
            &PrimitiveState::new(0.125, 0.0, 0.1),
            &AIR,
        )
        .unwrap();
        assert!(s.s_l < 0.0 && 0.0 < s.s_m && s.s_m < s.s_r);
        // bounded by the exact contact (0.92745) and shock (1.75216) speeds
        assert!(s.s_m < 0.92745 && s.s_r < 1.75216, "{s:?}");
        assert!((s.s_l + 1.4f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn star_state_identity_when_u_equals_contact() {
        let w = PrimitiveState::new(1.7, 0.4, 2.3);
        let e = conserved_from_primitive(&w, &AIR).ene;
        let st = hllc_star_state(&w, e, -3.0, 0.4, &AIR).unwrap();
        assert!((st.rho_s - 1.7).abs() < 1e-15);
        assert!((st.p_s - 2.3).abs() < 1e-15);
        assert!((st.ene_s - e).abs() < 1e-14);
        assert!(matches!(
            hllc_star_state(&w, e, 0.4, 0.4, &AIR),
            Err(SolverError::CoincidentWaveSpeeds { .. })
        ));
    }

    #[test]
    fn supersonic_flow_takes_left_flux() {
        let ul = conserved_from_primitive(&PrimitiveState::new(1.0, 5.0, 1.0), &AIR);
        let ur = conserved_from_primitive(&PrimitiveState::new(0.8, 4.5, 0.9), &AIR);
        assert_eq!(
            hllc_flux(&ul, &ur, &AIR).unwrap(),
            physical_flux(&ul, &AIR).unwrap()
        );
        let ul = ul.reflect();
        let ur = ur.reflect();
        assert_eq!(
            hllc_flux(&ur, &ul, &AIR).unwrap(),
            physical_flux(&ul, &AIR).unwrap()
        );
    }

    #[test]
    fn non_physical_input_is_rejected() {
        let good = ConservedState::new(1.0, 0.0, 2.5);
        let bad = ConservedState::new(1.0, 0.0, -1.0);
        assert!(matches!(
            hllc_flux(&good, &bad, &AIR),
            Err(SolverError::NonPhysicalState { .. })
        ));
        assert!(hllc_flux(&ConservedState::new(0.0, 0.0, 1.0), &good, &AIR).is_err());
    }
}
