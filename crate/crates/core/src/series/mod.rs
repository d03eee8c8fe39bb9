//! Truncated Poisson series with exact `ℚ(√2)` or floating-point coefficients.

mod monomial;
mod poisson;
mod scalar;
mod serial;

pub use monomial::{CounterSymbol, ParamMonomial};
pub use poisson::{wave_norm, Bindings, PoissonSeries, TermKey, Trig};
pub use scalar::{Scalar, NUMERIC_ZERO};
pub use serial::{CounterJson, SeriesJson, TermJson};
