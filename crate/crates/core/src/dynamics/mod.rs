//! Reference integration of Hamilton's equations, frequency-map inversion and
//! the analytic-versus-numeric error harness.

mod compare;
mod eom;
mod integrator;
mod inversion;

pub use compare::{compare_errors, eom_residual, linear_fit, CaseMeta, CaseSummary, CompareCase, CompareConfig, ErrorCurve, SchemePair};
pub use eom::{integrate_hamilton, to_cartesian, uniform_times, ActionAngleSystem, CartesianSystem, CompiledSeries, HamiltonianSystem};
pub use integrator::{Dopri5, StepStats, Trajectory};
pub use inversion::{invert_frequency_map, revert_series, FrequencyMap, Inversion, InversionMethod, InversionOptions};
