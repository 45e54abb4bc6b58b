//! Reconstruction of interface values from cell averages.

pub mod compact;
pub mod interfaces;
pub mod tridiag;
pub mod weights;

pub use compact::{compact_row, CompactRow};
pub use interfaces::{
    reconstruct_scalar_minus, InterfaceStates, ReconstructionMode, Reconstructor, SchemeKind,
    VariableBasis, GHOSTS,
};
pub use tridiag::{
    solve_block_tridiagonal, solve_tridiagonal, BlockThomas, BlockTriSystem, Closure, TriSystem,
};
pub use weights::{
    smoothness_indicators, weno5_point_value, wenojs_weights, wenojs_weights_with, wenoz_weights,
    wenoz_weights_with, LinearWeights, Side, StencilWeights, DEFAULT_EPSILON,
};

use crate::error::Result;
use crate::euler::GasConstants;
use crate::timestepper::{fill_ghosts, BoundaryKind, Field};

/// Both traces at every interface of `field`.
pub fn reconstruct_interfaces(
    field: &Field,
    mode: ReconstructionMode,
    gas: &GasConstants,
) -> Result<InterfaceStates> {
    let padded = fill_ghosts(field, GHOSTS);
    let mut out = InterfaceStates::default();
    Reconstructor::new(mode, *gas, DEFAULT_EPSILON).reconstruct(
        &padded,
        field.len(),
        field.bc == BoundaryKind::Periodic,
        &mut out,
    )?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::euler::{conserved_from_primitive, ConservedState, PrimitiveState};
    use crate::timestepper::Grid1D;
    use std::f64::consts::PI;

    const AIR: GasConstants = GasConstants::AIR;

    const ALL_SCHEMES: [SchemeKind; 4] = [
        SchemeKind::Fvcw,
        SchemeKind::WenoJs,
        SchemeKind::WenoZ,
        SchemeKind::LinearCompact,
    ];

    fn modes() -> Vec<ReconstructionMode> {
        let mut v = Vec::new();
        for basis in [VariableBasis::Characteristic, VariableBasis::Conservative] {
            for scheme in ALL_SCHEMES {
                v.push(ReconstructionMode::new(basis, scheme));
            }
        }
        v
    }

    fn field_from(
        a: f64,
        b: f64,
        n: usize,
        bc: BoundaryKind,
        f: impl Fn(f64) -> PrimitiveState,
    ) -> Field {
        let grid = Grid1D::new(a, b, n).unwrap();
        let cells = (0..n)
            .map(|j| conserved_from_primitive(&f(grid.center(j)), &AIR))
            .collect();
        Field::new(grid, cells, bc).unwrap()
    }

    #[test]
    fn constant_field_reconstructs_constant() {
        for (bc, w) in [
            (BoundaryKind::Periodic, PrimitiveState::new(1.3, -0.4, 2.2)),
            (
                BoundaryKind::Transmissive,
                PrimitiveState::new(1.3, -0.4, 2.2),
            ),
            (BoundaryKind::Reflective, PrimitiveState::new(1.3, 0.0, 2.2)),
        ] {
            let u = conserved_from_primitive(&w, &AIR);
            let field = field_from(0.0, 1.0, 12, bc, |_| w);
            for mode in modes() {
                let s = reconstruct_interfaces(&field, mode, &AIR).unwrap();
                assert_eq!(s.len(), 13);
                for i in 0..13 {
                    for v in [s.minus[i], s.plus[i]] {
                        assert!((v - u).max_abs() < 1e-13, "{mode:?} {bc:?} {i}: {v:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn mirror_symmetric_field_gives_mirrored_traces() {
        // even density/pressure, odd velocity about x = 0.5 (an interface for even n)
        let field = field_from(0.0, 1.0, 20, BoundaryKind::Transmissive, |x| {
            let s = x - 0.5;
            PrimitiveState::new(
                1.0 + 0.5 * (-(s * s) * 30.0).exp() + if s.abs() < 0.2 { 0.3 } else { 0.0 },
                0.8 * s.signum() * (1.0 - (-(s * s) * 10.0).exp()),
                1.0 + 0.2 * (s * 7.0).cos(),
            )
        });
        for mode in modes() {
            let s = reconstruct_interfaces(&field, mode, &AIR).unwrap();
            let mid = 10;
            let (m, p) = (s.minus[mid], s.plus[mid]);
            let scale = m.max_abs();
            assert!((m.rho - p.rho).abs() < 1e-12 * scale, "{mode:?}");
            assert!((m.mom + p.mom).abs() < 1e-12 * scale, "{mode:?}");
            assert!((m.ene - p.ene).abs() < 1e-12 * scale, "{mode:?}");
        }
    }

    #[test]
    fn reflected_field_gives_reflected_reconstruction() {
        let n = 24;
        let f = |x: f64| {
            PrimitiveState::new(
                1.0 + 0.3 * (2.0 * PI * x).sin() + if x > 0.6 { 0.5 } else { 0.0 },
                0.3 + 0.2 * (4.0 * PI * x).cos(),
                1.0 + 0.1 * x,
            )
        };
        let field = field_from(0.0, 1.0, n, BoundaryKind::Transmissive, f);
        let reflected = field_from(0.0, 1.0, n, BoundaryKind::Transmissive, |x| {
            f(1.0 - x).reflect()
        });
        for mode in modes() {
            let s = reconstruct_interfaces(&field, mode, &AIR).unwrap();
            let r = reconstruct_interfaces(&reflected, mode, &AIR).unwrap();
            for i in 0..=n {
                let a = s.minus[i].reflect();
                let b = r.plus[n - i];
                assert!((a - b).max_abs() < 1e-12 * a.max_abs(), "{mode:?} {i}");
            }
        }
    }

    #[test]
    fn linear_compact_reproduces_quartic_point_values() {
        // cell averages of a quartic on a bounded grid; oracle is the exact
        // antiderivative
        let poly = |x: f64| 0.3 + 1.2 * x - 0.7 * x * x + 0.25 * x.powi(3) + 0.9 * x.powi(4);
        let prim = |x: f64| {
            0.3 * x + 0.6 * x * x - 0.7 / 3.0 * x.powi(3)
                + 0.25 / 4.0 * x.powi(4)
                + 0.9 / 5.0 * x.powi(5)
        };
        let n = 16;
        let h = 1.0 / n as f64;
        let padded: Vec<f64> = (0..n + 2 * GHOSTS)
            .map(|k| {
                let j = k as f64 - GHOSTS as f64;
                (prim((j + 1.0) * h) - prim(j * h)) / h
            })
            .collect();
        let vals = reconstruct_scalar_minus(
            &padded,
            n,
            false,
            SchemeKind::LinearCompact,
            DEFAULT_EPSILON,
        )
        .unwrap();
        for (i, v) in vals.iter().enumerate() {
            let exact = poly(i as f64 * h);
            assert!((v - exact).abs() < 1e-11, "interface {i}: {v} vs {exact}");
        }
    }

    #[test]
    fn characteristic_and_conservative_agree_for_linear_weights() {
        let field = field_from(0.0, 2.0, 16, BoundaryKind::Periodic, |x| {
            PrimitiveState::new(1.0 + 0.2 * (PI * x).sin(), 1.0, 1.0 + 0.1 * (PI * x).cos())
        });
        let c = reconstruct_interfaces(
            &field,
            ReconstructionMode::new(VariableBasis::Characteristic, SchemeKind::LinearCompact),
            &AIR,
        )
        .unwrap();
        let p = reconstruct_interfaces(
            &field,
            ReconstructionMode::new(VariableBasis::Conservative, SchemeKind::LinearCompact),
            &AIR,
        )
        .unwrap();
        for i in 0..c.len() {
            assert!((c.minus[i] - p.minus[i]).max_abs() < 1e-12);
            assert!((c.plus[i] - p.plus[i]).max_abs() < 1e-12);
        }
    }

    fn periodic_sine_error(n: usize, scheme: SchemeKind) -> f64 {
        let h = 2.0 / n as f64;
        let avg = |j: i64| {
            let (xl, xr) = (j as f64 * h, (j + 1) as f64 * h);
            1.0 + 0.2 * ((PI * xl).cos() - (PI * xr).cos()) / (PI * h)
        };
        let padded: Vec<f64> = (0..n + 2 * GHOSTS)
            .map(|k| avg(k as i64 - GHOSTS as i64))
            .collect();
        let vals = reconstruct_scalar_minus(&padded, n, true, scheme, DEFAULT_EPSILON).unwrap();
        vals.iter()
            .enumerate()
            .map(|(i, v)| (v - (1.0 + 0.2 * (PI * i as f64 * h).sin())).abs())
            .fold(0.0, f64::max)
    }

    #[test]
    fn fifth_order_interface_convergence() {
        for scheme in [SchemeKind::Fvcw, SchemeKind::LinearCompact] {
            let errs: Vec<f64> = [20, 40, 80, 160]
                .iter()
                .map(|&n| periodic_sine_error(n, scheme))
                .collect();
            for w in errs.windows(2) {
                if w[0] < 1e-4 {
                    let ratio = w[0] / w[1];
                    assert!((24.0..=40.0).contains(&ratio), "{scheme:?}: {errs:?}");
                }
            }
        }
    }

    #[test]
    fn single_jump_stays_essentially_non_oscillatory() {
        let n = 40;
        let padded: Vec<f64> = (0..n + 2 * GHOSTS)
            .map(|k| if k < 23 { 1.0 } else { 0.1 })
            .collect();
        // weights of every stencil crossing the jump between cells 19 and 20
        for i in 0..=n {
            let st: [f64; 5] = std::array::from_fn(|m| padded[i + m]);
            let w = wenoz_weights(smoothness_indicators(&st), DEFAULT_EPSILON);
            for k in 0..3 {
                let cells = (i + k)..(i + k + 3);
                if cells.contains(&22) && cells.contains(&23) {
                    assert!(
                        w.omega[k] < 1e-4,
                        "interface {i} stencil {k}: {:?}",
                        w.omega
                    );
                }
            }
        }
        let vals =
            reconstruct_scalar_minus(&padded, n, false, SchemeKind::Fvcw, DEFAULT_EPSILON).unwrap();
        for (i, v) in vals.iter().enumerate() {
            if (i as i64 - 20).abs() > 3 {
                assert!(*v <= 1.0 + 1e-10 && *v >= 0.1 - 1e-10, "interface {i}: {v}");
            }
        }
    }

    #[test]
    fn linear_weights_assemble_the_linear_scheme() {
        let row = compact_row(&StencilWeights::linear(LinearWeights::COMPACT));
        assert_eq!(
            row,
            CompactRow {
                lhs: [(2.0 * 0.2 + 0.5) / 3.0, (0.2 + 2.0 * 0.8) / 3.0, 0.3 / 3.0],
                rhs: [0.2 / 6.0, (5.0 * 0.7 + 0.3) / 6.0, (0.5 + 1.5) / 6.0],
            }
        );
        for k in 0..3 {
            assert!((row.lhs[k] - [0.3, 0.6, 0.1][k]).abs() < 1e-15);
            assert!((row.rhs[k] - [1.0 / 30.0, 19.0 / 30.0, 1.0 / 3.0][k]).abs() < 1e-15);
        }
    }

    #[test]
    fn too_few_cells_is_an_error() {
        let padded = vec![1.0; 4 + 2 * GHOSTS];
        assert!(reconstruct_scalar_minus(&padded, 4, true, SchemeKind::Fvcw, 1e-13).is_err());
        let padded = vec![1.0; 10];
        assert!(reconstruct_scalar_minus(&padded, 8, true, SchemeKind::Fvcw, 1e-13).is_err());
    }

    #[test]
    fn block_solver_matches_dense_on_random_systems() {
        use nalgebra::{DMatrix, DVector, Matrix3, Vector3};
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
        for trial in 0..100 {
            let n = rng.gen_range(3..=10);
            let closure = if trial % 2 == 0 {
                Closure::Bounded
            } else {
                Closure::Cyclic
            };
            let mut m = || Matrix3::from_fn(|_, _| rng.gen_range(-1.0..1.0));
            let lower: Vec<_> = (0..n).map(|_| m()).collect();
            let upper: Vec<_> = (0..n).map(|_| m()).collect();
            let diag: Vec<_> = (0..n).map(|_| m() + Matrix3::identity() * 6.0).collect();
            let rhs: Vec<_> = (0..n)
                .map(|_| Vector3::from_fn(|_, _| rng.gen_range(-3.0..3.0)))
                .collect();
            let sys = BlockTriSystem {
                lower,
                diag,
                upper,
                rhs,
                closure,
            };
            let x = solve_block_tridiagonal(&sys).unwrap();
            let mut dense = DMatrix::zeros(3 * n, 3 * n);
            for k in 0..n {
                let km = (k + n - 1) % n;
                let kp = (k + 1) % n;
                for i in 0..3 {
                    for j in 0..3 {
                        dense[(3 * k + i, 3 * k + j)] += sys.diag[k][(i, j)];
                        if k > 0 || closure == Closure::Cyclic {
                            dense[(3 * k + i, 3 * km + j)] += sys.lower[k][(i, j)];
                        }
                        if k + 1 < n || closure == Closure::Cyclic {
                            dense[(3 * k + i, 3 * kp + j)] += sys.upper[k][(i, j)];
                        }
                    }
                }
            }
            let b = DVector::from_iterator(3 * n, sys.rhs.iter().flat_map(|v| v.iter().copied()));
            let oracle = dense.lu().solve(&b).unwrap();
            let scale = oracle.amax();
            for k in 0..n {
                for i in 0..3 {
                    assert!((x[k][i] - oracle[3 * k + i]).abs() <= 1e-11 * scale);
                }
            }
        }
    }

    #[test]
    fn smooth_density_wave_interface_error_is_fifth_order() {
        let err = |n: usize| {
            let field = field_from(0.0, 2.0, n, BoundaryKind::Periodic, |_| {
                PrimitiveState::new(1.0, 1.0, 1.0)
            });
            // replace with exact cell averages of the density wave
            let h = 2.0 / n as f64;
            let cells: Vec<ConservedState> = (0..n)
                .map(|j| {
                    let (xl, xr) = (j as f64 * h, (j + 1) as f64 * h);
                    let rho = 1.0 + 0.2 * ((PI * xl).cos() - (PI * xr).cos()) / (PI * h);
                    ConservedState::new(rho, rho, 2.5 + 0.5 * rho)
                })
                .collect();
            let field = Field::new(field.grid, cells, BoundaryKind::Periodic).unwrap();
            let s = reconstruct_interfaces(
                &field,
                ReconstructionMode::new(VariableBasis::Characteristic, SchemeKind::Fvcw),
                &AIR,
            )
            .unwrap();
            (0..n)
                .map(|i| {
                    let exact = 1.0 + 0.2 * (PI * i as f64 * h).sin();
                    (s.minus[i].rho - exact)
                        .abs()
                        .max((s.plus[i].rho - exact).abs())
                })
                .fold(0.0, f64::max)
        };
        let errs: Vec<f64> = [20, 40, 80].iter().map(|&n| err(n)).collect();
        for w in errs.windows(2) {
            let order = (w[0] / w[1]).log2();
            assert!(order > 4.6, "{errs:?}");
        }
    }
}
