//! The ten one-dimensional test problems.

use crate::error::{Result, SolverError};
use crate::euler::{conserved_from_primitive, ConservedState, GasConstants, PrimitiveState};
use crate::timestepper::{BoundaryKind, Field, Grid1D};

/// Pointwise initial data, or a single-cell spike on a uniform background.
#[derive(Debug, Clone, Copy)]
pub enum InitialCondition {
    Pointwise(fn(f64) -> PrimitiveState),
    /// `spike` fills the one cell containing `x0 + h/4`, `background` the rest.
    Spike {
        x0: f64,
        background: PrimitiveState,
        spike: PrimitiveState,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ReferenceKind {
    /// Closed-form solution (the advected sine wave).
    Analytic,
    /// Riemann problem with a single jump at `x0`.
    ExactRiemann {
        x0: f64,
        left: PrimitiveState,
        right: PrimitiveState,
    },
    /// WENO-JS run on `n` cells, aggregated onto the coarse grid.
    FineGrid {
        n: usize,
    },
    None,
}

#[derive(Debug, Clone, Copy)]
pub struct ProblemSpec {
    pub name: &'static str,
    /// Position in the catalog, 1 to 10.
    pub id: u8,
    pub title: &'static str,
    pub domain: (f64, f64),
    pub gas: GasConstants,
    pub ic: InitialCondition,
    pub bc: BoundaryKind,
    pub t_final: f64,
    pub reference: ReferenceKind,
    pub default_n: usize,
}

const fn prim(rho: f64, u: f64, p: f64) -> PrimitiveState {
    PrimitiveState::new(rho, u, p)
}

const LAX_L: PrimitiveState = prim(0.445, 0.698, 3.528);
const LAX_R: PrimitiveState = prim(0.5, 0.0, 0.571);
const SOD_L: PrimitiveState = prim(1.0, 0.0, 1.0);
const SOD_R: PrimitiveState = prim(0.125, 0.0, 0.1);
const LOW_L: PrimitiveState = prim(1.0, -2.0, 0.4);
const LOW_R: PrimitiveState = prim(1.0, 2.0, 0.4);
const STRONG_L: PrimitiveState = prim(1.0, 0.0, 1e10);
const STRONG_R: PrimitiveState = prim(0.125, 0.0, 0.1);
const VAC_L: PrimitiveState = prim(7.0, -1.0, 0.2);
const VAC_R: PrimitiveState = prim(7.0, 1.0, 0.2);
// (rho, u, e) = (1, 0, 0.1) | (0.001, 0, 1e-7) with p = (gamma - 1) rho e, gamma = 5/3
const LEBLANC_L: PrimitiveState = prim(1.0, 0.0, 2.0 / 3.0 * 0.1);
const LEBLANC_R: PrimitiveState = prim(0.001, 0.0, 2.0 / 3.0 * 0.001 * 1e-7);

fn density_wave(x: f64) -> PrimitiveState {
    prim(1.0 + 0.2 * (std::f64::consts::PI * x).sin(), 1.0, 1.0)
}

fn lax(x: f64) -> PrimitiveState {
    if x < 0.0 {
        LAX_L
    } else {
        LAX_R
    }
}

fn sod(x: f64) -> PrimitiveState {
    if x < 0.0 {
        SOD_L
    } else {
        SOD_R
    }
}

fn shu_osher(x: f64) -> PrimitiveState {
    if x < -4.0 {
        prim(3.857143, 2.629369, 10.33333)
    } else {
        prim(1.0 + 0.2 * (5.0 * x).sin(), 0.0, 1.0)
    }
}

fn blast_wave(x: f64) -> PrimitiveState {
    if x < 0.1 {
        prim(1.0, 0.0, 1000.0)
    } else if x < 0.9 {
        prim(1.0, 0.0, 0.01)
    } else {
        prim(1.0, 0.0, 100.0)
    }
}

fn low_density(x: f64) -> PrimitiveState {
    if x < 0.5 {
        LOW_L
    } else {
        LOW_R
    }
}

fn strong_shock(x: f64) -> PrimitiveState {
    if x < 0.5 {
        STRONG_L
    } else {
        STRONG_R
    }
}

fn near_vacuum(x: f64) -> PrimitiveState {
    if x < 0.0 {
        VAC_L
    } else {
        VAC_R
    }
}

fn leblanc(x: f64) -> PrimitiveState {
    if x < 3.0 {
        LEBLANC_L
    } else {
        LEBLANC_R
    }
}

pub fn catalog() -> Vec<ProblemSpec> {
    use BoundaryKind::*;
    use InitialCondition::*;
    let air = GasConstants::AIR;
    vec![
        ProblemSpec {
            name: "density-perturbation",
            id: 1,
            title: "advection of a density perturbation",
            domain: (0.0, 2.0),
            gas: air,
            ic: Pointwise(density_wave),
            bc: Periodic,
            t_final: 2.0,
            reference: ReferenceKind::Analytic,
            default_n: 80,
        },
        ProblemSpec {
            name: "lax",
            id: 2,
            title: "Lax shock tube",
            domain: (-5.0, 5.0),
            gas: air,
            ic: Pointwise(lax),
            bc: Transmissive,
            t_final: 1.4,
            reference: ReferenceKind::ExactRiemann {
                x0: 0.0,
                left: LAX_L,
                right: LAX_R,
            },
            default_n: 200,
        },
        ProblemSpec {
            name: "sod",
            id: 3,
            title: "Sod shock tube",
            domain: (-5.0, 5.0),
            gas: air,
            ic: Pointwise(sod),
            bc: Transmissive,
            t_final: 2.0,
            reference: ReferenceKind::ExactRiemann {
                x0: 0.0,
                left: SOD_L,
                right: SOD_R,
            },
            default_n: 100,
        },
        ProblemSpec {
            name: "shu-osher",
            id: 4,
            title: "Mach 3 shock / entropy wave interaction",
            domain: (-5.0, 5.0),
            gas: air,
            ic: Pointwise(shu_osher),
            bc: Transmissive,
            t_final: 1.8,
            reference: ReferenceKind::FineGrid { n: 3200 },
            default_n: 200,
        },
        ProblemSpec {
            name: "blast-wave",
            id: 5,
            title: "Woodward-Colella interacting blast waves",
            domain: (0.0, 1.0),
            gas: air,
            ic: Pointwise(blast_wave),
            bc: Reflective,
            t_final: 0.038,
            reference: ReferenceKind::FineGrid { n: 3200 },
            default_n: 200,
        },
        ProblemSpec {
            name: "low-density",
            id: 6,
            title: "low density, low internal energy double rarefaction",
            domain: (0.0, 1.0),
            gas: air,
            ic: Pointwise(low_density),
            bc: Transmissive,
            t_final: 0.1,
            reference: ReferenceKind::ExactRiemann {
                x0: 0.5,
                left: LOW_L,
                right: LOW_R,
            },
            default_n: 400,
        },
        ProblemSpec {
            name: "strong-shock",
            id: 7,
            title: "strong shock from a 1e10 pressure ratio",
            domain: (0.0, 1.0),
            gas: air,
            ic: Pointwise(strong_shock),
            bc: Transmissive,
            t_final: 2.5e-6,
            reference: ReferenceKind::ExactRiemann {
                x0: 0.5,
                left: STRONG_L,
                right: STRONG_R,
            },
            default_n: 200,
        },
        ProblemSpec {
            name: "near-vacuum",
            id: 8,
            title: "double rarefaction with near-vacuum",
            domain: (-1.0, 1.0),
            gas: air,
            ic: Pointwise(near_vacuum),
            bc: Transmissive,
            t_final: 0.6,
            reference: ReferenceKind::ExactRiemann {
                x0: 0.0,
                left: VAC_L,
                right: VAC_R,
            },
            default_n: 400,
        },
        ProblemSpec {
            name: "sedov",
            id: 9,
            title: "planar Sedov blast wave",
            domain: (0.0, 4.0),
            gas: air,
            ic: Spike {
                x0: 2.0,
                background: prim(1.0, 0.0, 4e-13),
                spike: prim(1.0, 0.0, 2.56e8),
            },
            bc: Transmissive,
            t_final: 0.001,
            reference: ReferenceKind::None,
            default_n: 800,
        },
        ProblemSpec {
            name: "leblanc",
            id: 10,
            title: "LeBlanc shock tube",
            domain: (0.0, 9.0),
            gas: GasConstants::MONATOMIC,
            ic: Pointwise(leblanc),
            bc: Transmissive,
            t_final: 6.0,
            reference: ReferenceKind::ExactRiemann {
                x0: 3.0,
                left: LEBLANC_L,
                right: LEBLANC_R,
            },
            default_n: 400,
        },
    ]
}

pub fn problem(name: &str) -> Result<ProblemSpec> {
    catalog()
        .into_iter()
        .find(|p| p.name == name)
        .ok_or_else(|| {
            let names: Vec<_> = catalog().iter().map(|p| p.name).collect();
            SolverError::InvalidArgument(format!(
                "unknown problem '{name}' (expected one of {})",
                names.join(", ")
            ))
        })
}

/// Five-point Gauss-Legendre nodes and weights on `[-1/2, 1/2]`.
pub(crate) const GAUSS5: [(f64, f64); 5] = [
    (-0.453_089_922_969_331_9, 0.118_463_442_528_094_5),
    (-0.269_234_655_052_841_6, 0.239_314_335_249_683_2),
    (0.0, 0.284_444_444_444_444_4),
    (0.269_234_655_052_841_6, 0.239_314_335_249_683_2),
    (0.453_089_922_969_331_9, 0.118_463_442_528_094_5),
];

/// Gauss average of the conserved variables of `f` over `[xl, xl + h]`,
/// composite over `sub` equal pieces.
pub(crate) fn cell_average(
    f: impl Fn(f64) -> PrimitiveState,
    xl: f64,
    h: f64,
    sub: usize,
    gas: &GasConstants,
) -> ConservedState {
    let hs = h / sub as f64;
    let mut acc = ConservedState::ZERO;
    for s in 0..sub {
        let c = xl + (s as f64 + 0.5) * hs;
        for (x, w) in GAUSS5 {
            acc += w * conserved_from_primitive(&f(c + x * hs), gas);
        }
    }
    acc * (1.0 / sub as f64)
}

/// Cell averages of the initial data on `n` cells.
pub fn initialize(problem: &ProblemSpec, n: usize) -> Result<Field> {
    if n < 10 {
        return Err(SolverError::InvalidArgument(format!(
            "need at least 10 cells, got {n}"
        )));
    }
    let (a, b) = problem.domain;
    let grid = Grid1D::new(a, b, n)?;
    let gas = &problem.gas;
    let cells = match problem.ic {
        InitialCondition::Pointwise(f) => (0..n)
            .map(|j| cell_average(f, grid.edge(j), grid.h, 1, gas))
            .collect(),
        InitialCondition::Spike {
            x0,
            background,
            spike,
        } => {
            let k = (((x0 + 0.25 * grid.h) - a) / grid.h).floor() as usize;
            (0..n)
                .map(|j| conserved_from_primitive(if j == k { &spike } else { &background }, gas))
                .collect()
        }
    };
    Field::new(grid, cells, problem.bc)
}
