//! Discrete error norms and convergence orders.

use crate::error::{Result, SolverError};
use crate::euler::ConservedState;
use crate::timestepper::Field;

/// Conserved component a norm is taken over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Component {
    #[default]
    Density,
    Momentum,
    Energy,
}

impl Component {
    fn pick(self, u: &ConservedState) -> f64 {
        match self {
            Component::Density => u.rho,
            Component::Momentum => u.mom,
            Component::Energy => u.ene,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ErrorReport {
    pub l1: f64,
    pub l2: f64,
    pub linf: f64,
    pub order_l1: Option<f64>,
    pub order_l2: Option<f64>,
    pub order_linf: Option<f64>,
}

fn order(coarse: f64, fine: f64) -> Option<f64> {
    (coarse > 0.0 && fine > 0.0).then(|| (coarse / fine).log2())
}

impl ErrorReport {
    /// Fills in the orders of `self` relative to the next coarser report,
    /// assuming the grid was refined by a factor of two.
    pub fn with_orders_from(mut self, coarser: &ErrorReport) -> Self {
        self.order_l1 = order(coarser.l1, self.l1);
        self.order_l2 = order(coarser.l2, self.l2);
        self.order_linf = order(coarser.linf, self.linf);
        self
    }
}

/// `L1 = mean |e|`, `L2 = sqrt(mean e^2)`, `Linf = max |e|` on density.
pub fn error_norms(numerical: &Field, exact: &[ConservedState]) -> Result<ErrorReport> {
    error_norms_component(&numerical.cells, exact, Component::Density)
}

pub fn error_norms_component(
    numerical: &[ConservedState],
    exact: &[ConservedState],
    component: Component,
) -> Result<ErrorReport> {
    if numerical.len() != exact.len() {
        return Err(SolverError::SizeMismatch {
            expected: numerical.len(),
            found: exact.len(),
        });
    }
    if numerical.is_empty() {
        return Err(SolverError::InvalidArgument("empty field".into()));
    }
    let (mut s1, mut s2, mut mx) = (0.0f64, 0.0f64, 0.0f64);
    for (a, b) in numerical.iter().zip(exact) {
        let e = (component.pick(a) - component.pick(b)).abs();
        s1 += e;
        s2 += e * e;
        mx = mx.max(e);
    }
    let n = numerical.len() as f64;
    Ok(ErrorReport {
        l1: s1 / n,
        l2: (s2 / n).sqrt(),
        linf: mx,
        ..Default::default()
    })
}

/// Orders between successive entries of a refinement sequence.
pub fn fill_orders(reports: &mut [ErrorReport]) {
    for k in 1..reports.len() {
        let prev = reports[k - 1];
        reports[k] = reports[k].with_orders_from(&prev);
    }
}
