//! Positivity-preserving rescaling of reconstructed interface states.
//!
//! Each cell's two traces and the Gauss-Lobatto remainder point `W3` are
//! pulled toward the cell average, first in density and then in internal
//! energy, so that all three lie in the admissible set with floor `eps`.
//! The rescaling is affine about the average and therefore conservative.

use crate::error::{Result, SolverError};
use crate::euler::{ConservedState, GasConstants};
use crate::reconstruction::{InterfaceStates, GHOSTS};
use crate::timestepper::{fill_ghosts, BoundaryKind, Field};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimiterParams {
    /// Number of Gauss-Lobatto points.
    pub m_points: usize,
    /// End-point Gauss-Lobatto weight on `[-1/2, 1/2]`.
    pub w_hat_1: f64,
    /// Upper bound of the per-cell floor `eps = min(eps_cap, rho_bar)`.
    pub eps_cap: f64,
}

impl Default for LimiterParams {
    fn default() -> Self {
        Self {
            m_points: 4,
            w_hat_1: 1.0 / 12.0,
            eps_cap: 1e-13,
        }
    }
}

impl LimiterParams {
    pub fn new(m_points: usize, eps_cap: f64) -> Result<Self> {
        if m_points < 4 {
            return Err(SolverError::InvalidArgument(format!(
                "need at least 4 Gauss-Lobatto points, got {m_points}"
            )));
        }
        if !(eps_cap > 0.0) {
            return Err(SolverError::InvalidArgument(format!(
                "floor must be positive, got {eps_cap}"
            )));
        }
        Ok(Self {
            m_points,
            w_hat_1: 1.0 / (m_points * (m_points - 1)) as f64,
            eps_cap,
        })
    }

    #[inline]
    pub fn eps_for(&self, rho_bar: f64) -> f64 {
        self.eps_cap.min(rho_bar)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitedInterfacePair {
    /// Limited trace at the cell's right interface.
    pub u_minus: ConservedState,
    /// Limited trace at the cell's left interface.
    pub u_plus: ConservedState,
    pub theta1: f64,
    pub theta2: f64,
}

/// Density factor and the lumped interior value `rho(x*)`.
pub fn density_theta(
    rho_bar: f64,
    rho_minus: f64,
    rho_plus: f64,
    params: &LimiterParams,
) -> Result<(f64, f64)> {
    if !(rho_bar > 0.0) || !rho_bar.is_finite() {
        return Err(SolverError::NonPhysicalState {
            context: "limiter cell average",
            rho: rho_bar,
            internal_energy: f64::NAN,
        });
    }
    let w = params.w_hat_1;
    let lumped = (rho_bar - w * rho_plus - w * rho_minus) / (1.0 - 2.0 * w);
    let eps = params.eps_for(rho_bar);
    let rho_min = rho_minus.min(rho_plus).min(lumped);
    let theta = if rho_min >= eps {
        1.0
    } else {
        ((rho_bar - eps) / (rho_bar - rho_min)).clamp(0.0, 1.0)
    };
    Ok((theta, lumped))
}

/// `rho E - m^2/2 - eps rho^2`, which is `rho^2 (e - eps)`.
#[inline]
fn energy_excess(u: &ConservedState, eps: f64) -> f64 {
    u.rho * u.ene - 0.5 * u.mom * u.mom - eps * u.rho * u.rho
}

/// Largest `t` in `[0, 1]` with `e((1-t) u_bar + t w_hat) >= eps`.
pub fn energy_theta(
    u_bar: &ConservedState,
    w_hat: &ConservedState,
    eps: f64,
    _gas: &GasConstants,
) -> Result<f64> {
    if energy_excess(w_hat, eps) >= 0.0 && w_hat.rho > 0.0 {
        return Ok(1.0);
    }
    let f0 = energy_excess(u_bar, eps);
    if !(f0 > 0.0) {
        // an admissible average below the floor collapses the blend onto it
        if u_bar.rho > 0.0 && energy_excess(u_bar, 0.0) > 0.0 {
            return Ok(0.0);
        }
        return Err(SolverError::NoLimiterRoot);
    }
    let d = *w_hat - *u_bar;
    let a2 = d.rho * d.ene - 0.5 * d.mom * d.mom - eps * d.rho * d.rho;
    let a1 =
        u_bar.rho * d.ene + u_bar.ene * d.rho - u_bar.mom * d.mom - 2.0 * eps * u_bar.rho * d.rho;
    let a0 = f0;
    let blend = |t: f64| *u_bar + t * d;
    let ok = |t: f64| {
        let b = blend(t);
        b.rho > 0.0 && energy_excess(&b, eps) >= 0.0
    };

    let mut candidates = [f64::NAN; 2];
    if a2.abs() <= 1e-300 {
        if a1 != 0.0 {
            candidates[0] = -a0 / a1;
        }
    } else {
        let disc = a1 * a1 - 4.0 * a2 * a0;
        if disc >= 0.0 {
            let q = -0.5 * (a1 + a1.signum() * disc.sqrt());
            candidates = [q / a2, if q != 0.0 { a0 / q } else { f64::NAN }];
        }
    }
    let mut t = candidates
        .iter()
        .copied()
        .filter(|t| t.is_finite() && (0.0..=1.0).contains(t))
        .fold(f64::NAN, f64::min);

    if !(t.is_finite() && ok(t)) {
        // bisection keeps `lo` admissible
        let mut lo = 0.0;
        let mut hi = if t.is_finite() { t } else { 1.0 };
        if ok(hi) {
            lo = hi;
        } else {
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if ok(mid) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
        }
        t = lo;
    }
    Ok(t)
}

/// Limits the traces of one cell toward its average `u_bar`.
pub fn limit_cell(
    u_bar: &ConservedState,
    u_minus: &ConservedState,
    u_plus: &ConservedState,
    params: &LimiterParams,
    gas: &GasConstants,
) -> Result<LimitedInterfacePair> {
    let eps = params.eps_for(u_bar.rho);
    let (theta1, _) = density_theta(u_bar.rho, u_minus.rho, u_plus.rho, params)?;
    let mut m = *u_minus;
    let mut p = *u_plus;
    if theta1 < 1.0 {
        m.rho = (theta1 * (m.rho - u_bar.rho) + u_bar.rho).max(eps);
        p.rho = (theta1 * (p.rho - u_bar.rho) + u_bar.rho).max(eps);
    }
    let w = params.w_hat_1;
    let w3 = (*u_bar - w * p - w * m) * (1.0 / (1.0 - 2.0 * w));
    let mut theta2: f64 = 1.0;
    for cand in [&m, &p, &w3] {
        if theta2 == 0.0 {
            break;
        }
        theta2 = theta2.min(energy_theta(u_bar, cand, eps, gas)?);
    }
    if theta2 < 1.0 {
        m = theta2 * (m - *u_bar) + *u_bar;
        p = theta2 * (p - *u_bar) + *u_bar;
    }
    Ok(LimitedInterfacePair {
        u_minus: m,
        u_plus: p,
        theta1,
        theta2,
    })
}

/// Limits a single trace toward `u_bar` (used for traces owned by ghost cells).
pub fn limit_point(
    u_bar: &ConservedState,
    u: &ConservedState,
    params: &LimiterParams,
    gas: &GasConstants,
) -> Result<ConservedState> {
    let eps = params.eps_for(u_bar.rho);
    if !(u_bar.rho > 0.0) {
        return Err(SolverError::NonPhysicalState {
            context: "limiter ghost average",
            rho: u_bar.rho,
            internal_energy: u_bar.internal_energy(),
        });
    }
    let mut v = *u;
    if v.rho < eps {
        let theta = ((u_bar.rho - eps) / (u_bar.rho - v.rho)).clamp(0.0, 1.0);
        v.rho = (theta * (v.rho - u_bar.rho) + u_bar.rho).max(eps);
    }
    let t = energy_theta(u_bar, &v, eps, gas)?;
    if t < 1.0 {
        v = t * (v - *u_bar) + *u_bar;
    }
    Ok(v)
}

/// Limits `iface` in place given the padded cell averages (with [`GHOSTS`]
/// ghost cells on each side).
pub fn limit_interfaces(
    padded: &[ConservedState],
    n: usize,
    periodic: bool,
    iface: &mut InterfaceStates,
    params: &LimiterParams,
    gas: &GasConstants,
) -> Result<()> {
    if iface.len() != n + 1 {
        return Err(SolverError::SizeMismatch {
            expected: n + 1,
            found: iface.len(),
        });
    }
    for j in 0..n {
        let pair = limit_cell(
            &padded[j + GHOSTS],
            &iface.minus[j + 1],
            &iface.plus[j],
            params,
            gas,
        )?;
        iface.minus[j + 1] = pair.u_minus;
        iface.plus[j] = pair.u_plus;
    }
    if periodic {
        iface.minus[0] = iface.minus[n];
        iface.plus[n] = iface.plus[0];
    } else {
        iface.minus[0] = limit_point(&padded[GHOSTS - 1], &iface.minus[0], params, gas)?;
        iface.plus[n] = limit_point(&padded[GHOSTS + n], &iface.plus[n], params, gas)?;
    }
    Ok(())
}

/// Limited copy of `iface` for the cell averages of `field`.
pub fn apply_limiter(
    field: &Field,
    iface: &InterfaceStates,
    params: &LimiterParams,
    gas: &GasConstants,
) -> Result<InterfaceStates> {
    let padded = fill_ghosts(field, GHOSTS);
    let mut out = iface.clone();
    limit_interfaces(
        &padded,
        field.len(),
        field.bc == BoundaryKind::Periodic,
        &mut out,
        params,
        gas,
    )?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const AIR: GasConstants = GasConstants::AIR;

    fn e(u: &ConservedState) -> f64 {
        u.internal_energy()
    }

    #[test]
    fn default_weights() {
        let p = LimiterParams::default();
        assert_eq!(p.m_points, 4);
        assert!((p.w_hat_1 - 1.0 / 12.0).abs() < 1e-16);
        assert_eq!(LimiterParams::new(4, 1e-13).unwrap(), p);
        assert!((LimiterParams::new(5, 1e-13).unwrap().w_hat_1 - 0.05).abs() < 1e-16);
        assert!(LimiterParams::new(3, 1e-13).is_err());
    }

    #[test]
    fn density_theta_examples() {
        let p = LimiterParams::default();
        let (theta, lumped) = density_theta(1.0, 1.0, 1.0, &p).unwrap();
        assert_eq!(theta, 1.0);
        assert!((lumped - 1.0).abs() < 1e-15);

        let (theta, lumped) = density_theta(1.0, -0.2, 1.0, &p).unwrap();
        // lumped = (1 - (1 - 0.2)/12) / (5/6) = 1.12; minimum is the trace
        assert!((lumped - 1.12).abs() < 1e-14);
        assert!((theta - (1.0 - 1e-13) / 1.2).abs() < 1e-15);
        let rescaled = theta * (-0.2 - 1.0) + 1.0;
        assert!(rescaled >= 1e-13 * (1.0 - 1e-3));

        let eps = 1e-14;
        let (theta, _) = density_theta(eps, -1.0, eps, &p).unwrap();
        assert_eq!(theta, 0.0);
        assert!(density_theta(0.0, 1.0, 1.0, &p).is_err());
    }

    #[test]
    fn energy_theta_examples() {
        let eps = 1e-13;
        let ubar = ConservedState::new(1.0, 0.0, 2.5);
        let w = ConservedState::new(1.0, 0.0, 2.0 * eps);
        assert_eq!(energy_theta(&ubar, &w, eps, &AIR).unwrap(), 1.0);
        assert_eq!(energy_theta(&ubar, &ubar, eps, &AIR).unwrap(), 1.0);

        let w = ConservedState::new(1.0, 0.0, 0.0);
        let t = energy_theta(&ubar, &w, eps, &AIR).unwrap();
        let b = ubar + t * (w - ubar);
        assert!(t > 0.0 && t < 1.0);
        assert!(e(&b) >= eps && (e(&b) - eps).abs() < 1e-12, "{t} {}", e(&b));

        let w = ConservedState::new(0.8, 3.0, 1.0);
        let t = energy_theta(&ubar, &w, eps, &AIR).unwrap();
        let b = ubar + t * (w - ubar);
        assert!((e(&b) - eps).abs() < 1e-12);

        let bad = ConservedState::new(1.0, 0.0, 0.0);
        assert!(matches!(
            energy_theta(&bad, &ConservedState::new(1.0, 1.0, 0.0), eps, &AIR),
            Err(SolverError::NoLimiterRoot)
        ));
    }

    #[test]
    fn inactive_limiter_is_exact_identity() {
        let ubar = ConservedState::new(1.0, 0.3, 2.7);
        let m = ConservedState::new(1.05, 0.35, 2.8);
        let p = ConservedState::new(0.95, 0.25, 2.6);
        let r = limit_cell(&ubar, &m, &p, &LimiterParams::default(), &AIR).unwrap();
        assert_eq!((r.u_minus, r.u_plus, r.theta1, r.theta2), (m, p, 1.0, 1.0));
    }

    fn decomposition(ubar: &ConservedState, r: &LimitedInterfacePair, w: f64) -> ConservedState {
        (*ubar - w * r.u_plus - w * r.u_minus) * (1.0 / (1.0 - 2.0 * w))
    }

    fn gstate() -> impl Strategy<Value = ConservedState> {
        (-6.0f64..4.0, -3.0f64..3.0, -12.0f64..10.0).prop_map(|(lr, u, le)| {
            let rho = 10f64.powf(lr);
            let e = 10f64.powf(le);
            ConservedState::new(rho, rho * u, rho * e + 0.5 * rho * u * u)
        })
    }

    fn raw_trace() -> impl Strategy<Value = ConservedState> {
        (-2.0f64..4.0, -50.0f64..50.0, -5.0f64..20.0)
            .prop_map(|(r, m, e)| ConservedState::new(r, m, e))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(2000))]
        #[test]
        fn conservation_floors_idempotence(
            ubar in gstate(),
            dm in raw_trace(),
            dp in raw_trace(),
            sm in 0.0f64..2.0,
            sp in 0.0f64..2.0,
        ) {
            let params = LimiterParams::default();
            let m = ubar + sm * (dm - ubar);
            let p = ubar + sp * (dp - ubar);
            let r = limit_cell(&ubar, &m, &p, &params, &AIR).unwrap();
            let eps = params.eps_for(ubar.rho);
            let w3 = decomposition(&ubar, &r, params.w_hat_1);
            let recon = params.w_hat_1 * (r.u_plus + r.u_minus) + (1.0 - 2.0 * params.w_hat_1) * w3;
            prop_assert!((recon - ubar).max_abs() <= 1e-14 * ubar.max_abs().max(m.max_abs()).max(p.max_abs()));
            for s in [&r.u_minus, &r.u_plus] {
                prop_assert!(s.rho >= eps);
                // e = E/rho - u^2/2 is only resolved to a few ulps of E/rho
                let slack = 8.0 * f64::EPSILON * (s.ene / s.rho).abs();
                prop_assert!(e(s) >= eps * (1.0 - 1e-6) - slack, "{s:?}");
            }
            prop_assert!(w3.rho >= eps * (1.0 - 1e-6));
            prop_assert!((0.0..=1.0).contains(&r.theta1) && (0.0..=1.0).contains(&r.theta2));

            let again = limit_cell(&ubar, &r.u_minus, &r.u_plus, &params, &AIR).unwrap();
            // a re-solve of the energy root moves by rounding over the
            // conditioning of e(ubar) = E/rho - u^2/2
            let kappa = (ubar.ene / ubar.rho) / e(&ubar);
            let scale = ubar.max_abs().max(r.u_minus.max_abs()).max(r.u_plus.max_abs());
            let tol = 1e-14 * scale * kappa.max(1.0);
            prop_assert!((again.u_minus - r.u_minus).max_abs() <= tol);
            prop_assert!((again.u_plus - r.u_plus).max_abs() <= tol);
        }
    }

    #[test]
    fn single_point_limiting() {
        let params = LimiterParams::default();
        let ubar = ConservedState::new(1.0, 0.0, 2.5);
        let v = limit_point(&ubar, &ConservedState::new(-0.5, 0.0, -1.0), &params, &AIR).unwrap();
        assert!(v.rho >= 1e-13 && e(&v) >= 1e-13 * (1.0 - 1e-6));
        let ok = ConservedState::new(0.9, 0.1, 2.0);
        assert_eq!(limit_point(&ubar, &ok, &params, &AIR).unwrap(), ok);
    }
}
