use crate::error::Result;
use crate::euler::{max_wave_speed, physical_flux, ConservedState, Flux, GasConstants};

/// `(F(Ul) + F(Ur))/2 - alpha (Ur - Ul)/2`.
pub fn lax_friedrichs_flux(
    ul: &ConservedState,
    ur: &ConservedState,
    alpha: f64,
    gas: &GasConstants,
) -> Result<Flux> {
    let fl = physical_flux(ul, gas)?;
    let fr = physical_flux(ur, gas)?;
    Ok(0.5 * (fl + fr) - 0.5 * alpha * (*ur - *ul))
}

/// Lax-Friedrichs flux with `alpha` the larger `|u| + a` of the two states.
pub fn local_lax_friedrichs_flux(
    ul: &ConservedState,
    ur: &ConservedState,
    gas: &GasConstants,
) -> Result<Flux> {
    let alpha = max_wave_speed(ul, gas)?.max(max_wave_speed(ur, gas)?);
    lax_friedrichs_flux(ul, ur, alpha, gas)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::euler::{conserved_from_primitive, PrimitiveState};

    const AIR: GasConstants = GasConstants::AIR;

    #[test]
    fn consistency_and_zero_dissipation() {
        let u = ConservedState::new(1.2, 0.3, 3.1);
        let f = physical_flux(&u, &AIR).unwrap();
        assert_eq!(lax_friedrichs_flux(&u, &u, 7.0, &AIR).unwrap(), f);
        let v = ConservedState::new(0.4, -0.1, 1.0);
        let mean = 0.5 * (f + physical_flux(&v, &AIR).unwrap());
        assert_eq!(lax_friedrichs_flux(&u, &v, 0.0, &AIR).unwrap(), mean);
    }

    #[test]
    fn sod_dissipation_opposes_the_jump() {
        let ul = conserved_from_primitive(&PrimitiveState::new(1.0, 0.0, 1.0), &AIR);
        let ur = conserved_from_primitive(&PrimitiveState::new(0.125, 0.0, 0.1), &AIR);
        let f = local_lax_friedrichs_flux(&ul, &ur, &AIR).unwrap();
        let central = lax_friedrichs_flux(&ul, &ur, 0.0, &AIR).unwrap();
        let d = f - central;
        let jump = ur - ul;
        assert!(d.rho * jump.rho < 0.0);
        assert!(d.ene * jump.ene < 0.0);
        assert!(f.rho > 0.0);
    }
}
