//! Birkhoff and Kolmogorov normal forms and the back-transformed torus solution.

mod birkhoff;
mod kolmogorov;
mod recursion;
mod result;
mod torus;

pub use birkhoff::birkhoff_normalize;
pub use kolmogorov::{kolmogorov_normalize, kolmogorov_step, KolmogorovStep};
pub use recursion::{verify_recursion, RecursionCheck};
pub use result::{Method, NormalFormResult, StepRecord};
pub use torus::{FrequencyRelation, TorusSolution, TrajCoord, TrajectorySeries};
