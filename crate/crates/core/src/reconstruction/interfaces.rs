//! Interface values `U-` and `U+` at every cell interface.
//!
//! `U-` (the trace from the left cell) is computed by the left-biased
//! algorithm. `U+` is its mirror image: in conservative variables the padded
//! averages are reversed with momentum negated, the same left-biased
//! algorithm runs, and the result is mirrored back. In characteristic
//! variables both traces share each interface's projection.
//!
//! Interfaces are numbered `0..=n`, interface `i` sitting between cells
//! `i - 1` and `i`. Cell averages are passed padded with [`GHOSTS`] ghost
//! cells on each side.

use nalgebra::{Matrix3, Vector3};

use super::compact::CompactRow;
use super::tridiag::{cyclic_thomas, thomas, BlockThomas, Closure, TriScratch};
use super::weights::{
    smoothness_indicators, weno5_point_value, wenojs_weights_with, wenoz_weights_with,
    LinearWeights, Side, StencilWeights,
};
use crate::error::{Result, SolverError};
use crate::euler::{roe_average_unchecked, ConservedState, EigenSystem, GasConstants};

/// Ghost cells required on each side of the padded array.
pub const GHOSTS: usize = 3;

/// Variables the scalar algorithm is applied to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VariableBasis {
    Characteristic,
    Conservative,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemeKind {
    /// Nonlinear compact scheme with WENO-Z weights.
    Fvcw,
    /// Explicit fifth-order WENO with Jiang-Shu weights.
    WenoJs,
    /// Explicit fifth-order WENO with WENO-Z weights.
    WenoZ,
    /// Compact scheme with the weights frozen at their linear values.
    LinearCompact,
}

impl SchemeKind {
    pub fn is_compact(self) -> bool {
        matches!(self, SchemeKind::Fvcw | SchemeKind::LinearCompact)
    }

    pub fn name(self) -> &'static str {
        match self {
            SchemeKind::Fvcw => "fvcw",
            SchemeKind::WenoJs => "weno-js",
            SchemeKind::WenoZ => "weno-z",
            SchemeKind::LinearCompact => "linear-compact",
        }
    }
}

impl std::str::FromStr for SchemeKind {
    type Err = SolverError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fvcw" => Ok(SchemeKind::Fvcw),
            "weno-js" => Ok(SchemeKind::WenoJs),
            "weno-z" => Ok(SchemeKind::WenoZ),
            "linear-compact" => Ok(SchemeKind::LinearCompact),
            other => Err(SolverError::InvalidArgument(format!(
                "unknown scheme '{other}' (expected fvcw, weno-js, weno-z, linear-compact)"
            ))),
        }
    }
}

impl std::str::FromStr for VariableBasis {
    type Err = SolverError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "characteristic" => Ok(VariableBasis::Characteristic),
            "conservative" => Ok(VariableBasis::Conservative),
            other => Err(SolverError::InvalidArgument(format!(
                "unknown variable basis '{other}' (expected characteristic, conservative)"
            ))),
        }
    }
}

impl VariableBasis {
    pub fn name(self) -> &'static str {
        match self {
            VariableBasis::Characteristic => "characteristic",
            VariableBasis::Conservative => "conservative",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ReconstructionMode {
    pub basis: VariableBasis,
    pub scheme: SchemeKind,
}

impl ReconstructionMode {
    pub const fn new(basis: VariableBasis, scheme: SchemeKind) -> Self {
        Self { basis, scheme }
    }
}

/// Traces at interfaces `0..=n`: `minus[i]` from cell `i-1`, `plus[i]` from cell `i`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct InterfaceStates {
    pub minus: Vec<ConservedState>,
    pub plus: Vec<ConservedState>,
}

impl InterfaceStates {
    pub fn len(&self) -> usize {
        self.minus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.minus.is_empty()
    }
}

/// Nonlinear weights of a compact row for the given scheme.
#[inline]
fn compact_omega(scheme: SchemeKind, stencil: &[f64; 5], eps: f64) -> [f64; 3] {
    match scheme {
        SchemeKind::LinearCompact => LinearWeights::COMPACT.0,
        _ => wenoz_weights_with(smoothness_indicators(stencil), LinearWeights::COMPACT, eps).omega,
    }
}

/// Explicit left-biased value used by the explicit schemes and by the
/// boundary rows of the compact schemes.
#[inline]
fn explicit_value(scheme: SchemeKind, stencil: &[f64; 5], eps: f64) -> f64 {
    let w = match scheme {
        SchemeKind::WenoJs => {
            wenojs_weights_with(smoothness_indicators(stencil), LinearWeights::EXPLICIT, eps)
        }
        SchemeKind::LinearCompact => StencilWeights::linear(LinearWeights::EXPLICIT),
        SchemeKind::Fvcw | SchemeKind::WenoZ => {
            wenoz_weights_with(smoothness_indicators(stencil), LinearWeights::EXPLICIT, eps)
        }
    };
    weno5_point_value(stencil, &w, Side::Left)
}

/// Scalar left-biased interface values for interfaces `0..=n`.
///
/// `padded` holds `n + 2*GHOSTS` cell averages. For periodic data the
/// compact system is cyclic over `n` interfaces; otherwise the rows at
/// interfaces `0` and `n` are explicit WENO values.
pub fn reconstruct_scalar_minus(
    padded: &[f64],
    n: usize,
    periodic: bool,
    scheme: SchemeKind,
    eps: f64,
) -> Result<Vec<f64>> {
    check_padded(padded.len(), n)?;
    let mut out = vec![0.0; n + 1];
    let mut bufs = ScalarBuffers::default();
    scalar_minus(padded, n, periodic, scheme, eps, &mut bufs, &mut out)?;
    Ok(out)
}

fn check_padded(len: usize, n: usize) -> Result<()> {
    if n < 5 {
        return Err(SolverError::InvalidArgument(format!(
            "reconstruction needs at least 5 cells, got {n}"
        )));
    }
    if len != n + 2 * GHOSTS {
        return Err(SolverError::SizeMismatch {
            expected: n + 2 * GHOSTS,
            found: len,
        });
    }
    Ok(())
}

#[derive(Debug, Default, Clone)]
struct ScalarBuffers {
    lower: Vec<f64>,
    diag: Vec<f64>,
    upper: Vec<f64>,
    scratch: TriScratch,
    cp: Vec<f64>,
}

#[inline]
fn stencil_at(padded: &[f64], i: usize) -> [f64; 5] {
    // cells i-3..=i+1, i.e. padded[i..i+5]
    [
        padded[i],
        padded[i + 1],
        padded[i + 2],
        padded[i + 3],
        padded[i + 4],
    ]
}

fn scalar_minus(
    padded: &[f64],
    n: usize,
    periodic: bool,
    scheme: SchemeKind,
    eps: f64,
    b: &mut ScalarBuffers,
    out: &mut [f64],
) -> Result<()> {
    if !scheme.is_compact() {
        for (i, o) in out.iter_mut().enumerate() {
            *o = explicit_value(scheme, &stencil_at(padded, i), eps);
        }
        return Ok(());
    }
    let rows = if periodic { n } else { n + 1 };
    b.lower.clear();
    b.diag.clear();
    b.upper.clear();
    for i in 0..rows {
        let st = stencil_at(padded, i);
        if !periodic && (i == 0 || i == n) {
            b.lower.push(0.0);
            b.diag.push(1.0);
            b.upper.push(0.0);
            out[i] = explicit_value(scheme, &st, eps);
        } else {
            let row = CompactRow::from_omega(&compact_omega(scheme, &st, eps));
            b.lower.push(row.lhs[0]);
            b.diag.push(row.lhs[1]);
            b.upper.push(row.lhs[2]);
            out[i] = row.rhs[0] * st[1] + row.rhs[1] * st[2] + row.rhs[2] * st[3];
        }
    }
    if periodic {
        cyclic_thomas(&b.lower, &b.diag, &b.upper, &mut out[..n], &mut b.scratch)?;
        out[n] = out[0];
    } else {
        thomas(&b.lower, &b.diag, &b.upper, out, &mut b.cp)?;
    }
    Ok(())
}

/// Stateful reconstructor holding the work buffers reused across stages.
#[derive(Debug, Clone)]
pub struct Reconstructor {
    mode: ReconstructionMode,
    gas: GasConstants,
    eps: f64,
    mirrored: Vec<ConservedState>,
    mirrored_minus: Vec<ConservedState>,
    scalar_in: Vec<f64>,
    scalar_out: Vec<f64>,
    scalar: ScalarBuffers,
    sys: CharSystems,
    block: BlockThomas,
}

impl Reconstructor {
    pub fn new(mode: ReconstructionMode, gas: GasConstants, eps: f64) -> Self {
        Self {
            mode,
            gas,
            eps,
            mirrored: Vec::new(),
            mirrored_minus: Vec::new(),
            scalar_in: Vec::new(),
            scalar_out: Vec::new(),
            scalar: ScalarBuffers::default(),
            sys: CharSystems::default(),
            block: BlockThomas::default(),
        }
    }

    pub fn mode(&self) -> ReconstructionMode {
        self.mode
    }

    /// Fills `out` with both traces at interfaces `0..=n`.
    pub fn reconstruct(
        &mut self,
        padded: &[ConservedState],
        n: usize,
        periodic: bool,
        out: &mut InterfaceStates,
    ) -> Result<()> {
        check_padded(padded.len(), n)?;
        out.minus.resize(n + 1, ConservedState::ZERO);
        out.plus.resize(n + 1, ConservedState::ZERO);
        if self.mode.basis == VariableBasis::Characteristic {
            return self.characteristic_both(padded, n, periodic, out);
        }
        self.conservative_minus(padded, n, periodic, &mut out.minus)?;

        let mut mirrored = std::mem::take(&mut self.mirrored);
        mirrored.clear();
        mirrored.extend(padded.iter().rev().map(ConservedState::reflect));
        let mut mm = std::mem::take(&mut self.mirrored_minus);
        mm.resize(n + 1, ConservedState::ZERO);
        let res = self.conservative_minus(&mirrored, n, periodic, &mut mm);
        if res.is_ok() {
            for i in 0..=n {
                out.plus[i] = mm[n - i].reflect();
            }
        }
        self.mirrored = mirrored;
        self.mirrored_minus = mm;
        res
    }

    fn conservative_minus(
        &mut self,
        padded: &[ConservedState],
        n: usize,
        periodic: bool,
        out: &mut [ConservedState],
    ) -> Result<()> {
        self.scalar_out.resize(n + 1, 0.0);
        for comp in 0..3 {
            self.scalar_in.clear();
            self.scalar_in
                .extend(padded.iter().map(|u| u.to_array()[comp]));
            scalar_minus(
                &self.scalar_in,
                n,
                periodic,
                self.mode.scheme,
                self.eps,
                &mut self.scalar,
                &mut self.scalar_out,
            )?;
            for (o, v) in out.iter_mut().zip(&self.scalar_out) {
                match comp {
                    0 => o.rho = *v,
                    1 => o.mom = *v,
                    _ => o.ene = *v,
                }
            }
        }
        Ok(())
    }

    /// Both traces in characteristic variables. Each interface projects its
    /// six neighbouring cells once with the Roe eigenvectors and contributes
    /// one row to the `U-` system and one to the `U+` system.
    fn characteristic_both(
        &mut self,
        padded: &[ConservedState],
        n: usize,
        periodic: bool,
        out: &mut InterfaceStates,
    ) -> Result<()> {
        let scheme = self.mode.scheme;
        let eps = self.eps;
        let gas = self.gas;
        let compact = scheme.is_compact();
        let rows = if periodic { n } else { n + 1 };
        let sys = &mut self.sys;
        if compact {
            sys.resize(rows);
        }
        for i in 0..rows {
            // interface i separates cells i-1 and i (padded indices i+2, i+3)
            let roe = roe_average_unchecked(&padded[i + GHOSTS - 1], &padded[i + GHOSTS], &gas)?;
            let eig = EigenSystem::from_roe(&roe, &gas);
            let l = &eig.left;
            // cells i-3..=i+2
            let mut v = [Vector3::zeros(); 6];
            for (m, vm) in v.iter_mut().enumerate() {
                *vm = l * padded[i + m].to_vector();
            }
            let boundary = !periodic && (i == 0 || i == n);
            if !compact || boundary {
                let mut wm = Vector3::zeros();
                let mut wp = Vector3::zeros();
                for k in 0..3 {
                    let st = [v[0][k], v[1][k], v[2][k], v[3][k], v[4][k]];
                    wm[k] = explicit_value(scheme, &st, eps);
                    let st = [v[5][k], v[4][k], v[3][k], v[2][k], v[1][k]];
                    wp[k] = explicit_value(scheme, &st, eps);
                }
                let vm = eig.right * wm;
                let vp = eig.right * wp;
                if compact {
                    sys.set_identity_row(i, vm, vp);
                } else {
                    out.minus[i] = ConservedState::from_vector(&vm);
                    out.plus[i] = ConservedState::from_vector(&vp);
                }
                continue;
            }
            let mut coef_m = [[0.0; 3]; 3];
            let mut coef_p = [[0.0; 3]; 3];
            let mut rm = Vector3::zeros();
            let mut rp = Vector3::zeros();
            for k in 0..3 {
                let st = [v[0][k], v[1][k], v[2][k], v[3][k], v[4][k]];
                let row = CompactRow::from_omega(&compact_omega(scheme, &st, eps));
                coef_m[k] = row.lhs;
                rm[k] = row.rhs[0] * v[1][k] + row.rhs[1] * v[2][k] + row.rhs[2] * v[3][k];
                let st = [v[5][k], v[4][k], v[3][k], v[2][k], v[1][k]];
                let row = CompactRow::from_omega(&compact_omega(scheme, &st, eps));
                // mirrored row: the lower neighbour of U+ is on the far side
                coef_p[k] = [row.lhs[2], row.lhs[1], row.lhs[0]];
                rp[k] = row.rhs[0] * v[4][k] + row.rhs[1] * v[3][k] + row.rhs[2] * v[2][k];
            }
            sys.set_row(i, l, &coef_m, rm, &coef_p, rp);
        }
        if compact {
            let closure = if periodic {
                Closure::Cyclic
            } else {
                Closure::Bounded
            };
            let s = &mut self.sys;
            self.block
                .solve(&s.lower_m, &s.diag_m, &s.upper_m, &mut s.rhs_m, closure)?;
            self.block
                .solve(&s.lower_p, &s.diag_p, &s.upper_p, &mut s.rhs_p, closure)?;
            for i in 0..rows {
                out.minus[i] = ConservedState::from_vector(&s.rhs_m[i]);
                out.plus[i] = ConservedState::from_vector(&s.rhs_p[i]);
            }
        }
        if periodic {
            out.minus[n] = out.minus[0];
            out.plus[n] = out.plus[0];
        }
        Ok(())
    }
}

/// Block rows of the `U-` and `U+` systems.
#[derive(Debug, Default, Clone)]
struct CharSystems {
    lower_m: Vec<Matrix3<f64>>,
    diag_m: Vec<Matrix3<f64>>,
    upper_m: Vec<Matrix3<f64>>,
    rhs_m: Vec<Vector3<f64>>,
    lower_p: Vec<Matrix3<f64>>,
    diag_p: Vec<Matrix3<f64>>,
    upper_p: Vec<Matrix3<f64>>,
    rhs_p: Vec<Vector3<f64>>,
}

impl CharSystems {
    fn resize(&mut self, rows: usize) {
        for v in [
            &mut self.lower_m,
            &mut self.diag_m,
            &mut self.upper_m,
            &mut self.lower_p,
            &mut self.diag_p,
            &mut self.upper_p,
        ] {
            v.resize(rows, Matrix3::zeros());
        }
        self.rhs_m.resize(rows, Vector3::zeros());
        self.rhs_p.resize(rows, Vector3::zeros());
    }

    fn set_identity_row(&mut self, i: usize, vm: Vector3<f64>, vp: Vector3<f64>) {
        self.lower_m[i] = Matrix3::zeros();
        self.diag_m[i] = Matrix3::identity();
        self.upper_m[i] = Matrix3::zeros();
        self.rhs_m[i] = vm;
        self.lower_p[i] = Matrix3::zeros();
        self.diag_p[i] = Matrix3::identity();
        self.upper_p[i] = Matrix3::zeros();
        self.rhs_p[i] = vp;
    }

    /// Row `k` of each block is `coef[k][j] * l.row(k)`.
    #[inline]
    fn set_row(
        &mut self,
        i: usize,
        l: &Matrix3<f64>,
        coef_m: &[[f64; 3]; 3],
        rm: Vector3<f64>,
        coef_p: &[[f64; 3]; 3],
        rp: Vector3<f64>,
    ) {
        let scaled =
            |coef: &[[f64; 3]; 3], j: usize| Matrix3::from_fn(|k, col| coef[k][j] * l[(k, col)]);
        self.lower_m[i] = scaled(coef_m, 0);
        self.diag_m[i] = scaled(coef_m, 1);
        self.upper_m[i] = scaled(coef_m, 2);
        self.rhs_m[i] = rm;
        self.lower_p[i] = scaled(coef_p, 0);
        self.diag_p[i] = scaled(coef_p, 1);
        self.upper_p[i] = scaled(coef_p, 2);
        self.rhs_p[i] = rp;
    }
}
