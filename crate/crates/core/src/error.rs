use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degree-of-freedom mismatch: {left} vs {right}")]
    DofMismatch { left: usize, right: usize },

    #[error("small divisor k={wave:?}: |k.omega| = {divisor:e} below guard")]
    SmallDivisor { wave: Vec<i32>, divisor: f64 },

    #[error("resonant wave k={wave:?}: k.omega vanishes identically")]
    Resonance { wave: Vec<i32> },

    #[error("wave k={wave:?} exceeds the Fourier cap |k| <= {cap}")]
    WaveCap { wave: Vec<i32>, cap: u32 },

    #[error("symbolic frequencies are supported only for a single degree of freedom; bind numeric values for {n_dof} DOF")]
    SymbolicMultiDof { n_dof: usize },

    #[error("series is not angle-only: found a term with p exponents {p_exp:?}")]
    NotAngleOnly { p_exp: Vec<u32> },

    #[error("series is not linear in p: found a term with p exponents {p_exp:?}")]
    NotLinearInP { p_exp: Vec<u32> },

    #[error("average over the angles is nonzero; homological equation has no periodic solution")]
    NonzeroAverage,

    #[error("secular (constant) term left in the right-hand side at order {order}")]
    SecularLeak { order: u32 },

    #[error("counterterm a_{order} cannot be isolated: {reason}")]
    CountertermSolve { order: u32, reason: String },

    #[error("omega0 appears outside the linear term omega0*p")]
    Omega0OutsideLinear,

    #[error("generating function must carry an eps grade >= 1")]
    ZeroGrade,

    #[error("invalid order: {0}")]
    InvalidOrder(String),

    #[error("unbound symbol: {0}")]
    Unbound(&'static str),

    #[error("non-analytic evaluation: {0}")]
    Domain(String),

    #[error("no root of the frequency map in [{lo}, {hi}] for target {target}")]
    NoRoot { lo: f64, hi: f64, target: f64 },

    #[error("root finder did not converge after {iterations} iterations (bracket [{lo}, {hi}])")]
    NonConvergence { iterations: usize, lo: f64, hi: f64 },

    #[error("integrator exceeded {steps} steps before t={t}")]
    TooManySteps { steps: usize, t: f64 },

    #[error("integrator step size underflow at t={t} (h={h:e})")]
    StepUnderflow { t: f64, h: f64 },

    #[error("invalid model: {0}")]
    Model(String),

    #[error("invalid argument: {0}")]
    Invalid(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Toml(#[from] toml::de::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
