//! Method-of-lines driver: ghost cells, spatial residual, time-step
//! selection and third-order SSP Runge-Kutta.

use crate::error::{Result, SolverError};
use crate::euler::{max_wave_speed, ConservedState, GasConstants};
use crate::positivity::{limit_interfaces, LimiterParams};
use crate::reconstruction::{
    InterfaceStates, ReconstructionMode, Reconstructor, SchemeKind, VariableBasis, DEFAULT_EPSILON,
    GHOSTS,
};
use crate::riemann::FluxKind;

/// Uniform grid on `[a, b]` with `n` cells.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    pub a: f64,
    pub b: f64,
    pub n: usize,
    pub h: f64,
}

impl Grid1D {
    pub fn new(a: f64, b: f64, n: usize) -> Result<Self> {
        if !(a < b) || !a.is_finite() || !b.is_finite() {
            return Err(SolverError::InvalidArgument(format!(
                "invalid domain [{a}, {b}]"
            )));
        }
        if n < 5 {
            return Err(SolverError::InvalidArgument(format!(
                "need at least 5 cells, got {n}"
            )));
        }
        Ok(Self {
            a,
            b,
            n,
            h: (b - a) / n as f64,
        })
    }

    /// Position of interface `i` (between cells `i-1` and `i`).
    #[inline]
    pub fn edge(&self, i: usize) -> f64 {
        if i == self.n {
            self.b
        } else {
            self.a + i as f64 * self.h
        }
    }

    #[inline]
    pub fn center(&self, j: usize) -> f64 {
        self.a + (j as f64 + 0.5) * self.h
    }

    pub fn centers(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.center(j)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundaryKind {
    Periodic,
    /// Zero-gradient extrapolation.
    Transmissive,
    /// Solid wall: mirrored cells with negated momentum.
    Reflective,
}

impl BoundaryKind {
    pub fn name(self) -> &'static str {
        match self {
            BoundaryKind::Periodic => "periodic",
            BoundaryKind::Transmissive => "transmissive",
            BoundaryKind::Reflective => "reflective",
        }
    }
}

impl std::str::FromStr for BoundaryKind {
    type Err = SolverError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "periodic" => Ok(BoundaryKind::Periodic),
            "transmissive" => Ok(BoundaryKind::Transmissive),
            "reflective" => Ok(BoundaryKind::Reflective),
            other => Err(SolverError::InvalidArgument(format!(
                "unknown boundary '{other}' (expected periodic, transmissive, reflective)"
            ))),
        }
    }
}

/// Cell averages on a grid together with their boundary condition.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    pub grid: Grid1D,
    pub cells: Vec<ConservedState>,
    pub bc: BoundaryKind,
}

impl Field {
    pub fn new(grid: Grid1D, cells: Vec<ConservedState>, bc: BoundaryKind) -> Result<Self> {
        if cells.len() != grid.n {
            return Err(SolverError::SizeMismatch {
                expected: grid.n,
                found: cells.len(),
            });
        }
        if let Some(j) = cells.iter().position(|c| !c.is_finite()) {
            return Err(SolverError::NonFinite { step: 0, cell: j });
        }
        Ok(Self { grid, cells, bc })
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Sum of cell averages times `h`.
    pub fn totals(&self) -> ConservedState {
        let mut s = ConservedState::ZERO;
        for c in &self.cells {
            s += *c;
        }
        s * self.grid.h
    }

    pub fn minima(&self) -> Minima {
        let mut m = Minima::default();
        for c in &self.cells {
            m.include(c);
        }
        m
    }
}

/// Cell averages padded with `width` ghost cells on each side.
pub fn fill_ghosts(field: &Field, width: usize) -> Vec<ConservedState> {
    let mut out = Vec::with_capacity(field.len() + 2 * width);
    fill_ghosts_into(&field.cells, field.bc, width, &mut out);
    out
}

pub(crate) fn fill_ghosts_into(
    cells: &[ConservedState],
    bc: BoundaryKind,
    width: usize,
    out: &mut Vec<ConservedState>,
) {
    let n = cells.len();
    out.clear();
    for k in (0..width).rev() {
        // ghost at index -1-k
        out.push(match bc {
            BoundaryKind::Periodic => cells[(n - 1 - k % n) % n],
            BoundaryKind::Transmissive => cells[0],
            BoundaryKind::Reflective => cells[k.min(n - 1)].reflect(),
        });
    }
    out.extend_from_slice(cells);
    for k in 0..width {
        // ghost at index n+k
        out.push(match bc {
            BoundaryKind::Periodic => cells[k % n],
            BoundaryKind::Transmissive => cells[n - 1],
            BoundaryKind::Reflective => cells[n - 1 - k.min(n - 1)].reflect(),
        });
    }
}

/// Smallest density and specific internal energy seen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minima {
    pub rho: f64,
    pub e: f64,
}

impl Default for Minima {
    fn default() -> Self {
        Self {
            rho: f64::INFINITY,
            e: f64::INFINITY,
        }
    }
}

impl Minima {
    #[inline]
    pub fn include(&mut self, u: &ConservedState) {
        self.rho = self.rho.min(u.rho);
        self.e = self.e.min(u.internal_energy());
    }

    pub fn merge(&mut self, other: &Minima) {
        self.rho = self.rho.min(other.rho);
        self.e = self.e.min(other.e);
    }

    pub fn is_positive(&self) -> bool {
        self.rho > 0.0 && self.e > 0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeConfig {
    pub scheme: SchemeKind,
    pub basis: VariableBasis,
    pub flux: FluxKind,
    pub limiter: bool,
    pub limiter_params: LimiterParams,
    /// Regularizer of the nonlinear weights.
    pub eps: f64,
}

impl Default for SchemeConfig {
    fn default() -> Self {
        Self::new(SchemeKind::Fvcw)
    }
}

impl SchemeConfig {
    /// Characteristic basis, HLLC flux and the limiter on.
    pub fn new(scheme: SchemeKind) -> Self {
        Self {
            scheme,
            basis: VariableBasis::Characteristic,
            flux: FluxKind::Hllc,
            limiter: true,
            limiter_params: LimiterParams::default(),
            eps: DEFAULT_EPSILON,
        }
    }

    pub fn with_basis(mut self, basis: VariableBasis) -> Self {
        self.basis = basis;
        self
    }

    pub fn with_flux(mut self, flux: FluxKind) -> Self {
        self.flux = flux;
        self
    }

    pub fn with_limiter(mut self, on: bool) -> Self {
        self.limiter = on;
        self
    }

    pub fn mode(&self) -> ReconstructionMode {
        ReconstructionMode::new(self.basis, self.scheme)
    }

    /// `w_hat_1` with the limiter active, `0.5` otherwise.
    pub fn default_cfl(&self) -> f64 {
        if self.limiter {
            self.limiter_params.w_hat_1
        } else {
            0.5
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepControl {
    pub cfl: f64,
    pub dt_override: Option<f64>,
    /// Use `dt = cfl h^(5/3) / max(|u| + a)`.
    pub accuracy_scaling: bool,
}

impl StepControl {
    pub fn new(cfl: f64) -> Result<Self> {
        if !(cfl > 0.0 && cfl <= 1.0) {
            return Err(SolverError::InvalidArgument(format!(
                "cfl must lie in (0, 1], got {cfl}"
            )));
        }
        Ok(Self {
            cfl,
            dt_override: None,
            accuracy_scaling: false,
        })
    }

    pub fn for_config(cfg: &SchemeConfig) -> Self {
        Self {
            cfl: cfg.default_cfl(),
            dt_override: None,
            accuracy_scaling: false,
        }
    }

    pub fn with_accuracy_scaling(mut self, on: bool) -> Self {
        self.accuracy_scaling = on;
        self
    }

    pub fn with_dt(mut self, dt: f64) -> Self {
        self.dt_override = Some(dt);
        self
    }
}

pub fn max_signal_speed(cells: &[ConservedState], gas: &GasConstants) -> Result<f64> {
    let mut s: f64 = 0.0;
    for c in cells {
        s = s.max(max_wave_speed(c, gas)?);
    }
    Ok(s)
}

/// Time step for `field`, never exceeding `t_remaining`.
pub fn compute_dt(
    field: &Field,
    ctrl: &StepControl,
    gas: &GasConstants,
    t_remaining: f64,
) -> Result<f64> {
    dt_for_cells(&field.cells, field.grid.h, ctrl, gas, t_remaining)
}

fn dt_for_cells(
    cells: &[ConservedState],
    h: f64,
    ctrl: &StepControl,
    gas: &GasConstants,
    t_remaining: f64,
) -> Result<f64> {
    let dt = match ctrl.dt_override {
        Some(dt) => dt,
        None => {
            let s = max_signal_speed(cells, gas)?;
            if !(s > 0.0) {
                return Err(SolverError::InvalidArgument(
                    "zero signal speed; cannot choose a time step".into(),
                ));
            }
            let len = if ctrl.accuracy_scaling {
                h.powf(5.0 / 3.0)
            } else {
                h
            };
            ctrl.cfl * len / s
        }
    };
    Ok(dt.min(t_remaining))
}

/// Reusable evaluator of `L(U) = -(F_{j+1/2} - F_{j-1/2}) / h`.
#[derive(Debug, Clone)]
pub struct SpatialOperator {
    cfg: SchemeConfig,
    gas: GasConstants,
    recon: Reconstructor,
    padded: Vec<ConservedState>,
    iface: InterfaceStates,
    fluxes: Vec<ConservedState>,
    minima: Minima,
    speed: f64,
}

impl SpatialOperator {
    pub fn new(cfg: SchemeConfig, gas: GasConstants) -> Self {
        Self {
            cfg,
            gas,
            recon: Reconstructor::new(cfg.mode(), gas, cfg.eps),
            padded: Vec::new(),
            iface: InterfaceStates::default(),
            fluxes: Vec::new(),
            minima: Minima::default(),
            speed: 0.0,
        }
    }

    pub fn config(&self) -> &SchemeConfig {
        &self.cfg
    }

    /// Minima over stage inputs and the traces fed to the flux since the
    /// last call to [`SpatialOperator::take_minima`].
    pub fn take_minima(&mut self) -> Minima {
        std::mem::take(&mut self.minima)
    }

    /// Largest `|u| + a` over the limited traces since the last call. Only
    /// tracked while the limiter is on.
    pub fn take_max_speed(&mut self) -> f64 {
        std::mem::take(&mut self.speed)
    }

    /// Interface traces (after limiting) from the last evaluation.
    pub fn interface_states(&self) -> &InterfaceStates {
        &self.iface
    }

    pub fn evaluate(
        &mut self,
        cells: &[ConservedState],
        h: f64,
        bc: BoundaryKind,
        out: &mut [ConservedState],
    ) -> Result<()> {
        let n = cells.len();
        if out.len() != n {
            return Err(SolverError::SizeMismatch {
                expected: n,
                found: out.len(),
            });
        }
        let periodic = bc == BoundaryKind::Periodic;
        fill_ghosts_into(cells, bc, GHOSTS, &mut self.padded);
        self.recon
            .reconstruct(&self.padded, n, periodic, &mut self.iface)?;
        if self.cfg.limiter {
            limit_interfaces(
                &self.padded,
                n,
                periodic,
                &mut self.iface,
                &self.cfg.limiter_params,
                &self.gas,
            )?;
            let g = self.gas.gamma();
            for u in self.iface.minus.iter().chain(&self.iface.plus) {
                let v = u.mom / u.rho;
                let p = (g - 1.0) * (u.ene - 0.5 * u.mom * v);
                self.speed = self.speed.max(v.abs() + (g * p / u.rho).sqrt());
            }
        }
        for c in cells {
            self.minima.include(c);
        }
        for i in 0..=n {
            self.minima.include(&self.iface.minus[i]);
            self.minima.include(&self.iface.plus[i]);
        }
        self.fluxes.resize(n + 1, ConservedState::ZERO);
        for i in 0..=n {
            self.fluxes[i] =
                self.cfg
                    .flux
                    .flux(&self.iface.minus[i], &self.iface.plus[i], &self.gas)?;
        }
        let inv_h = 1.0 / h;
        for (j, o) in out.iter_mut().enumerate() {
            *o = (self.fluxes[j] - self.fluxes[j + 1]) * inv_h;
        }
        Ok(())
    }
}

pub fn spatial_residual(
    field: &Field,
    cfg: &SchemeConfig,
    gas: &GasConstants,
) -> Result<Vec<ConservedState>> {
    let mut op = SpatialOperator::new(*cfg, *gas);
    let mut out = vec![ConservedState::ZERO; field.len()];
    op.evaluate(&field.cells, field.grid.h, field.bc, &mut out)?;
    Ok(out)
}

/// Work arrays for [`ssp_rk3`].
#[derive(Debug, Clone, Default)]
pub struct Rk3Buffers {
    u1: Vec<ConservedState>,
    u2: Vec<ConservedState>,
    rhs: Vec<ConservedState>,
}

/// One step of the three-stage SSP Runge-Kutta scheme
///
/// ```text
/// U1 = U + dt L(U)
/// U2 = 3/4 U + 1/4 (U1 + dt L(U1))
/// U  = 1/3 U + 2/3 (U2 + dt L(U2))
/// ```
///
/// applied in place with an arbitrary right-hand side.
pub fn ssp_rk3<F>(
    u: &mut [ConservedState],
    dt: f64,
    bufs: &mut Rk3Buffers,
    mut rhs: F,
) -> Result<()>
where
    F: FnMut(&[ConservedState], &mut [ConservedState]) -> Result<()>,
{
    let n = u.len();
    bufs.rhs.resize(n, ConservedState::ZERO);
    bufs.u1.resize(n, ConservedState::ZERO);
    bufs.u2.resize(n, ConservedState::ZERO);

    rhs(u, &mut bufs.rhs)?;
    for j in 0..n {
        bufs.u1[j] = u[j] + dt * bufs.rhs[j];
    }
    rhs(&bufs.u1, &mut bufs.rhs)?;
    for j in 0..n {
        bufs.u2[j] = 0.75 * u[j] + 0.25 * (bufs.u1[j] + dt * bufs.rhs[j]);
    }
    rhs(&bufs.u2, &mut bufs.rhs)?;
    for j in 0..n {
        u[j] = (u[j] + 2.0 * (bufs.u2[j] + dt * bufs.rhs[j])) / 3.0;
    }
    Ok(())
}

pub fn ssp_rk3_step(
    field: &Field,
    dt: f64,
    cfg: &SchemeConfig,
    gas: &GasConstants,
) -> Result<Field> {
    if !(dt > 0.0) {
        return Err(SolverError::InvalidArgument(format!(
            "time step must be positive, got {dt}"
        )));
    }
    let mut op = SpatialOperator::new(*cfg, *gas);
    let mut out = field.clone();
    let (h, bc) = (field.grid.h, field.bc);
    ssp_rk3(&mut out.cells, dt, &mut Rk3Buffers::default(), |u, r| {
        op.evaluate(u, h, bc, r)
    })?;
    Ok(out)
}

/// Per-step diagnostics handed to observers and collected in the trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepRecord {
    /// 1-based index of the completed step.
    pub step: usize,
    /// Time at the end of the step.
    pub t: f64,
    pub dt: f64,
    /// Minima over the cell averages at the end of the step.
    pub cells: Minima,
    /// Minima over every stage input and every limited trace of the step.
    pub stages: Minima,
    /// Attempts discarded before this step was accepted.
    pub rejections: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub field: Field,
    pub t: f64,
    pub steps: usize,
    pub trace: Vec<StepRecord>,
}

impl RunResult {
    /// Minima over the whole run, cell averages only.
    pub fn cell_minima(&self) -> Minima {
        let mut m = Minima::default();
        for r in &self.trace {
            m.merge(&r.cells);
        }
        m
    }

    /// Minima over the whole run including stage values and traces.
    pub fn stage_minima(&self) -> Minima {
        let mut m = Minima::default();
        for r in &self.trace {
            m.merge(&r.stages);
        }
        m
    }
}

const MAX_REJECTIONS: usize = 40;

/// Advances `field` to `t_final`, calling `observer(record, field)` after
/// every step.
pub fn integrate<O>(
    field: &Field,
    t_final: f64,
    cfg: &SchemeConfig,
    ctrl: &StepControl,
    gas: &GasConstants,
    mut observer: O,
) -> Result<RunResult>
where
    O: FnMut(&StepRecord, &Field),
{
    if !(t_final >= 0.0) {
        return Err(SolverError::InvalidArgument(format!(
            "final time must be non-negative, got {t_final}"
        )));
    }
    let mut f = field.clone();
    let mut op = SpatialOperator::new(*cfg, *gas);
    let mut bufs = Rk3Buffers::default();
    let mut backup = Vec::new();
    let mut trace = Vec::new();
    let mut t = 0.0;
    let mut step = 0;
    let (h, bc) = (f.grid.h, f.bc);
    // with the limiter on, the step bound also covers the limited traces
    let guarded = cfg.limiter && ctrl.dt_override.is_none();
    let bound = ctrl.cfl * h;
    while t < t_final {
        let mut dt = dt_for_cells(&f.cells, h, ctrl, gas, t_final - t)?;
        step += 1;
        let mut rejections = 0;
        loop {
            if !(dt > 0.0) {
                return Err(SolverError::InvalidArgument(format!(
                    "time step collapsed to {dt} at t = {t}"
                )));
            }
            backup.clone_from(&f.cells);
            op.take_minima();
            op.take_max_speed();
            let res = ssp_rk3(&mut f.cells, dt, &mut bufs, |u, r| op.evaluate(u, h, bc, r));
            let speed = op.take_max_speed();
            let bad_cell = f.cells.iter().position(|c| !c.is_finite());
            let too_fast = guarded && dt * speed > bound * (1.0 + 1e-12);
            let failed = res.is_err() || bad_cell.is_some();
            if guarded && (too_fast || failed) && rejections < MAX_REJECTIONS {
                f.cells.clone_from(&backup);
                rejections += 1;
                dt = if failed {
                    0.5 * dt
                } else {
                    dt.min(bound / speed)
                };
                if speed > 0.0 {
                    dt = dt.min(bound / speed);
                }
                continue;
            }
            if let Some(cell) = bad_cell {
                return Err(SolverError::NonFinite { step, cell });
            }
            res?;
            break;
        }
        // the last step lands exactly on t_final
        t = if dt == t_final - t { t_final } else { t + dt };
        let record = StepRecord {
            step,
            t,
            dt,
            cells: f.minima(),
            stages: op.take_minima(),
            rejections,
        };
        observer(&record, &f);
        trace.push(record);
    }
    Ok(RunResult {
        field: f,
        t,
        steps: step,
        trace,
    })
}
