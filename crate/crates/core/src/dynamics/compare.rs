//! Analytic-versus-numeric error curves for the two Lindstedt schemes.

use std::fmt::Write as _;
use std::io::Write;

use super::eom::{integrate_hamilton, uniform_times, ActionAngleSystem};
use super::integrator::Dopri5;
use super::inversion::{invert_frequency_map, FrequencyMap, InversionOptions};
use crate::error::{Error, Result};
use crate::lindstedt::{lindstedt_run, Scheme};
use crate::normalform::TorusSolution;
use crate::prep::{to_action_angle, ActionAngleHamiltonian, OscillatorModel};
use crate::series::Bindings;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CompareCase {
    pub eps: f64,
    pub omega0: f64,
    pub omega: f64,
}

impl CompareCase {
    /// The three cases `ε = 1, ω₀ = 1, ω ∈ {1.002, 1.02, 1.2}`.
    pub fn reference_cases() -> Vec<CompareCase> {
        [1.002, 1.02, 1.2].into_iter().map(|omega| CompareCase { eps: 1.0, omega0: 1.0, omega }).collect()
    }
}

#[derive(Clone, Debug)]
pub struct CompareConfig {
    pub order: u32,
    pub t_max: f64,
    pub samples: usize,
    /// Fraction of the window discarded before the linear fit.
    pub transient: f64,
    pub inversion: InversionOptions,
    pub integrator: Dopri5,
}

impl Default for CompareConfig {
    fn default() -> Self {
        CompareConfig {
            order: 4,
            t_max: 100.0,
            samples: 2000,
            transient: 0.1,
            inversion: InversionOptions::default(),
            integrator: Dopri5::with_tolerances(3e-14, 1e-16),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CaseMeta {
    pub eps: f64,
    pub omega0: f64,
    pub omega: f64,
    pub j0: f64,
    pub order: u32,
    /// `ω(J₀)` predicted by the scheme-B series.
    pub omega_scheme_b: f64,
}

/// `|q_analytic(t) − q_numeric(t)|` for both schemes on a common time grid.
#[derive(Clone, Debug)]
pub struct ErrorCurve {
    pub t: Vec<f64>,
    pub err_scheme_b: Vec<f64>,
    pub err_scheme_k: Vec<f64>,
    pub meta: CaseMeta,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CaseSummary {
    pub max_err_b: f64,
    pub max_err_k: f64,
    /// `log₁₀(max_err_b / max_err_k)`.
    pub log10_gap: f64,
    pub r2_b: f64,
    pub r2_k: f64,
    /// R² of the linear fit to the per-period maxima (diagnostic).
    pub envelope_r2_b: f64,
    pub envelope_r2_k: f64,
}

/// Least-squares line through `(x, y)`; returns `(intercept, slope, R²)`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|v| (v - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = x.iter().zip(y).map(|(a, b)| (b - intercept - slope * a).powi(2)).sum();
    (intercept, slope, if syy == 0.0 { 1.0 } else { 1.0 - ss_res / syy })
}

/// Per-block maxima of `y` over consecutive windows of length `period`.
fn block_maxima(t: &[f64], y: &[f64], period: f64) -> (Vec<f64>, Vec<f64>) {
    let (mut bt, mut by) = (Vec::new(), Vec::new());
    let Some(&t0) = t.first() else { return (bt, by) };
    let mut block = 0usize;
    let mut best: Option<(f64, f64)> = None;
    for (&ti, &yi) in t.iter().zip(y) {
        let b = ((ti - t0) / period).floor() as usize;
        if b != block {
            if let Some((a, v)) = best.take() {
                bt.push(a);
                by.push(v);
            }
            block = b;
        }
        if best.is_none_or(|(_, v)| yi > v) {
            best = Some((ti, yi));
        }
    }
    if let Some((a, v)) = best {
        bt.push(a);
        by.push(v);
    }
    (bt, by)
}

impl ErrorCurve {
    pub fn summary(&self, transient: f64) -> CaseSummary {
        let max = |v: &[f64]| v.iter().copied().fold(0.0, f64::max);
        let start = self.t.iter().position(|&t| t >= transient * self.t.last().copied().unwrap_or(0.0)).unwrap_or(0);
        let (max_err_b, max_err_k) = (max(&self.err_scheme_b), max(&self.err_scheme_k));
        let period = 2.0 * std::f64::consts::PI / self.meta.omega;
        let envelope = |y: &[f64]| {
            let (bt, by) = block_maxima(&self.t[start..], &y[start..], period);
            if bt.len() < 3 { f64::NAN } else { linear_fit(&bt, &by).2 }
        };
        CaseSummary {
            envelope_r2_b: envelope(&self.err_scheme_b),
            envelope_r2_k: envelope(&self.err_scheme_k),
            max_err_b,
            max_err_k,
            log10_gap: (max_err_b / max_err_k).log10(),
            r2_b: linear_fit(&self.t[start..], &self.err_scheme_b[start..]).2,
            r2_k: linear_fit(&self.t[start..], &self.err_scheme_k[start..]).2,
        }
    }

    /// CSV with a `# key=value` metadata block followed by the data.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        let m = &self.meta;
        writeln!(w, "# eps={}", m.eps)?;
        writeln!(w, "# omega0={}", m.omega0)?;
        writeln!(w, "# omega={}", m.omega)?;
        writeln!(w, "# J0={:.12e}", m.j0)?;
        writeln!(w, "# R={}", m.order)?;
        writeln!(w, "t,err_scheme_B,err_scheme_K")?;
        for i in 0..self.t.len() {
            writeln!(w, "{},{:.6e},{:.6e}", self.t[i], self.err_scheme_b[i], self.err_scheme_k[i])?;
        }
        Ok(())
    }
}

impl CaseSummary {
    /// Key-value text block.
    pub fn to_text(&self, meta: &CaseMeta) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "eps={}\nomega0={}\nomega={}\nJ0={:.9}\nR={}", meta.eps, meta.omega0, meta.omega, meta.j0, meta.order);
        let _ = writeln!(s, "omega_scheme_B={:.12}", meta.omega_scheme_b);
        let _ = writeln!(s, "max_err_scheme_B={:.6e}\nmax_err_scheme_K={:.6e}", self.max_err_b, self.max_err_k);
        let _ = writeln!(s, "log10_gap={:.4}\nr2_scheme_B={:.6}\nr2_scheme_K={:.6}", self.log10_gap, self.r2_b, self.r2_k);
        let _ = writeln!(s, "envelope_r2_scheme_B={:.6}\nenvelope_r2_scheme_K={:.6}", self.envelope_r2_b, self.envelope_r2_k);
        s
    }
}

/// Scheme-B and scheme-K solutions of one model, reusable across cases.
#[derive(Clone, Debug)]
pub struct SchemePair {
    pub hamiltonian: ActionAngleHamiltonian,
    pub scheme_b: TorusSolution,
    pub scheme_k: TorusSolution,
}

impl SchemePair {
    pub fn build(model: &OscillatorModel, order: u32) -> Result<Self> {
        if model.n_dof != 1 {
            return Err(Error::SymbolicMultiDof { n_dof: model.n_dof });
        }
        let aa = to_action_angle(model)?;
        let scheme_b = lindstedt_run(&aa, Scheme::B, order, &Scheme::B.default_base(&aa))?;
        let scheme_k = lindstedt_run(&aa, Scheme::K, order, &Scheme::K.default_base(&aa))?;
        Ok(SchemePair { hamiltonian: aa, scheme_b, scheme_k })
    }

    /// `J₀` of the torus with frequency `case.omega`, from the scheme-K map.
    pub fn amplitude(&self, case: &CompareCase, opts: &InversionOptions) -> Result<f64> {
        let map = FrequencyMap::new(&self.scheme_k.frequency)?;
        Ok(invert_frequency_map(&map, case.omega - case.omega0, case.eps, case.omega0, opts)?.j0)
    }

    pub fn error_curve(&self, case: &CompareCase, config: &CompareConfig) -> Result<ErrorCurve> {
        let j0 = self.amplitude(case, &config.inversion)?;
        let base = Bindings::default().with_eps(case.eps).with_omega0(case.omega0).with_j0(vec![j0]);
        let b_k = base.clone().with_omega(case.omega);
        let b_b = self.scheme_b.frequency.complete(&base)?;
        let times = uniform_times(config.t_max, config.samples);
        let system = ActionAngleSystem::new(&self.hamiltonian, &b_k)?;
        let numeric = integrate_hamilton(&system, &[0.0, j0], &times, &config.integrator)?;
        let mut err_b = Vec::with_capacity(times.len());
        let mut err_k = Vec::with_capacity(times.len());
        for (t, y) in times.iter().zip(&numeric.y) {
            err_b.push((self.scheme_b.state_at(*t, &b_b)?.0[0] - y[0]).abs());
            err_k.push((self.scheme_k.state_at(*t, &b_k)?.0[0] - y[0]).abs());
        }
        let meta = CaseMeta { eps: case.eps, omega0: case.omega0, omega: case.omega, j0, order: self.scheme_k.order, omega_scheme_b: b_b.omega.unwrap_or(f64::NAN) };
        Ok(ErrorCurve { t: times, err_scheme_b: err_b, err_scheme_k: err_k, meta })
    }
}

/// Runs every case: invert for `J₀`, build both solutions, integrate, compare.
pub fn compare_errors(model: &OscillatorModel, cases: &[CompareCase], config: &CompareConfig) -> Result<Vec<(ErrorCurve, CaseSummary)>> {
    let pair = SchemePair::build(model, config.order)?;
    cases
        .iter()
        .map(|c| {
            let curve = pair.error_curve(c, config)?;
            let summary = curve.summary(config.transient);
            Ok((curve, summary))
        })
        .collect()
}

/// Max-norm residual of Hamilton's equations along an analytic solution,
/// `max_t max(|q̇ − ∂H/∂J|, |J̇ + ∂H/∂q|)` (1 DOF).
pub fn eom_residual(solution: &TorusSolution, system: &ActionAngleSystem, b: &Bindings, times: &[f64]) -> Result<f64> {
    if solution.n_dof() != 1 {
        return Err(Error::SymbolicMultiDof { n_dof: solution.n_dof() });
    }
    let omega = b.omega.ok_or(Error::Unbound("omega"))?;
    let dq = solution.q[0].series.d_q(0);
    let dj = solution.j[0].series.d_q(0);
    let mut worst: f64 = 0.0;
    for &t in times {
        let phi = omega * t;
        let (q, j) = solution.state_at(t, b)?;
        let bq = b.clone().with_q(vec![phi]);
        let q_dot = omega * (1.0 + dq.evaluate(&bq)?);
        let j_dot = omega * dj.evaluate(&bq)?;
        let (h_j, h_q) = system.gradient(&q, &j);
        worst = worst.max((q_dot - h_j[0]).abs()).max((j_dot + h_q[0]).abs());
    }
    Ok(worst)
}
