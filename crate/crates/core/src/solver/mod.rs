//! Nonlinear solution and time integration.

pub mod newton;
pub mod time;

pub use newton::{newton_solve, NewtonConfig, NewtonProvider, NewtonReport};
pub use time::{dissipation_monitor, solve_step, time_step, total_energy, DissipationReport, TimeLoopState, MAX_BISECTIONS};
