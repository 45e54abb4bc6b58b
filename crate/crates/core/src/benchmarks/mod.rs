//! Test problems, reference solutions, error norms and study drivers.

pub mod norms;
pub mod problems;
pub mod reference;
pub mod studies;

pub use norms::{error_norms, error_norms_component, fill_orders, Component, ErrorReport};
pub use problems::{catalog, initialize, problem, InitialCondition, ProblemSpec, ReferenceKind};
pub use reference::{
    aggregate, cache_dir, density_wave_averages, fine_grid_config, fine_grid_solution,
    fine_grid_solution_in, reference_solution, CACHE_ENV, FINE_GRID_CFL,
};
pub use studies::{
    compare_schemes, compare_schemes_with, convergence_study, convergence_study_with,
    locate_crossing, run_problem, ConvergenceRow, SchemeRun,
};
