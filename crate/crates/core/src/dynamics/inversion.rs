//! Frequency detuning `dω = f(J₀)` and its inversion.

use crate::error::{Error, Result};
use crate::normalform::FrequencyRelation;
use crate::series::{Bindings, PoissonSeries};

/// `dω = ω − ω₀` as a function of the amplitude `J₀` (one degree of freedom).
///
/// Built from either frequency relation: in the counterterm form the a_i may
/// carry `ω` in denominators, which is bound to `ω₀ + dω` before solving.
#[derive(Clone, Debug, PartialEq)]
pub struct FrequencyMap {
    relation: FrequencyRelation,
    detuning: PoissonSeries,
}

impl FrequencyMap {
    pub fn new(relation: &FrequencyRelation) -> Result<Self> {
        let corr = relation.correction_series(0)?;
        if corr.n_dof() != 1 {
            return Err(Error::SymbolicMultiDof { n_dof: corr.n_dof() });
        }
        let detuning = match relation {
            FrequencyRelation::Omega0FromOmega { .. } => corr.neg(),
            FrequencyRelation::OmegaFromOmega0 { .. } => corr,
        };
        Ok(FrequencyMap { relation: relation.clone(), detuning })
    }

    pub fn relation(&self) -> &FrequencyRelation {
        &self.relation
    }

    /// `Σ` of the detuning terms as a series in `J0` (and `ε`, `ω`, `ω₀`).
    pub fn detuning_series(&self) -> &PoissonSeries {
        &self.detuning
    }

    fn bindings(eps: f64, omega0: f64, domega: f64, j0: f64) -> Bindings {
        Bindings::default().with_eps(eps).with_omega0(omega0).with_omega(omega0 + domega).with_j0(vec![j0])
    }

    /// `f(J₀)` with `ω = ω₀ + dω` wherever `ω` appears.
    pub fn eval(&self, j0: f64, eps: f64, omega0: f64, domega: f64) -> Result<f64> {
        self.detuning.evaluate(&Self::bindings(eps, omega0, domega, j0))
    }

    pub fn derivative(&self, j0: f64, eps: f64, omega0: f64, domega: f64) -> Result<f64> {
        self.detuning.d_j0(0).evaluate(&Self::bindings(eps, omega0, domega, j0))
    }

    /// Coefficients `d_0, d_1, …` of `f` as a polynomial in `J₀`.
    pub fn polynomial(&self, eps: f64, omega0: f64, domega: f64) -> Result<Vec<f64>> {
        let b = Self::bindings(eps, omega0, domega, 1.0);
        let mut d: Vec<f64> = Vec::new();
        for (k, c) in self.detuning.iter() {
            let e2 = k.mono.j0_exp2[0];
            if e2 < 0 || e2 % 2 != 0 {
                return Err(Error::Domain(format!("detuning has the non-polynomial power J0^{e2}/2")));
            }
            let e = (e2 / 2) as usize;
            if d.len() <= e {
                d.resize(e + 1, 0.0);
            }
            d[e] += c.to_f64() * b.monomial(&k.mono)? * eps.powi(k.eps as i32);
        }
        Ok(d)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum InversionMethod {
    /// Truncated series reversion of `f` (to `order`, default its degree),
    /// evaluated at `dω`.
    Reversion { order: Option<usize> },
    /// Safeguarded Newton iteration with bisection fallback on `[0, J_max]`.
    Newton,
}

#[derive(Clone, Debug)]
pub struct InversionOptions {
    pub method: InversionMethod,
    pub tol: f64,
    pub max_iter: usize,
    /// Upper end of the Newton bracket; by default derived from the lowest
    /// nonvanishing coefficient of `f`.
    pub j_max: Option<f64>,
}

impl Default for InversionOptions {
    fn default() -> Self {
        InversionOptions { method: InversionMethod::Reversion { order: None }, tol: 1e-12, max_iter: 200, j_max: None }
    }
}

impl InversionOptions {
    pub fn newton() -> Self {
        InversionOptions { method: InversionMethod::Newton, ..Default::default() }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Inversion {
    pub j0: f64,
    /// `f(J₀) − dω`.
    pub residual: f64,
    pub iterations: usize,
    pub bracket: (f64, f64),
}

/// Truncated composition `a ∘ g` of power series without constant terms
/// (`a[0]` is ignored, `g[0]` must be zero).
fn compose(a: &[f64], g: &[f64], n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n + 1];
    let mut pow = vec![0.0; n + 1];
    pow[0] = 1.0;
    for ak in a.iter().skip(1) {
        let mut next = vec![0.0; n + 1];
        for (i, &pi) in pow.iter().enumerate() {
            if pi == 0.0 {
                continue;
            }
            for (j, &gj) in g.iter().enumerate().skip(1) {
                if i + j > n {
                    break;
                }
                next[i + j] += pi * gj;
            }
        }
        pow = next;
        for (o, p) in out.iter_mut().zip(&pow) {
            *o += ak * p;
        }
    }
    out
}

/// Coefficients `b_1..b_n` (index 0 unused) of the inverse of `Σ d_k x^k`.
pub fn revert_series(d: &[f64], n: usize) -> Result<Vec<f64>> {
    let d1 = d.get(1).copied().unwrap_or(0.0);
    if d.first().is_some_and(|&c| c != 0.0) || d1 == 0.0 {
        return Err(Error::Domain("series reversion needs f(0) = 0 and f'(0) != 0".into()));
    }
    let mut g = vec![0.0; n + 1];
    g[1] = 1.0 / d1;
    for _ in 0..n {
        let fg = compose(d, &g, n);
        for k in 1..=n {
            let target = if k == 1 { 1.0 } else { 0.0 };
            g[k] -= (fg[k] - target) / d1;
        }
    }
    Ok(g)
}

/// Solves `f(J₀) = dω` for the amplitude `J₀`.
pub fn invert_frequency_map(map: &FrequencyMap, domega: f64, eps: f64, omega0: f64, opts: &InversionOptions) -> Result<Inversion> {
    if domega == 0.0 {
        return Ok(Inversion { j0: 0.0, residual: map.eval(0.0, eps, omega0, 0.0)?, iterations: 0, bracket: (0.0, 0.0) });
    }
    let d = map.polynomial(eps, omega0, domega)?;
    match opts.method {
        InversionMethod::Reversion { order } => {
            let n = order.unwrap_or(d.len().saturating_sub(1)).max(1);
            let b = revert_series(&d, n)?;
            let j0: f64 = b.iter().enumerate().skip(1).map(|(k, bk)| bk * domega.powi(k as i32)).sum();
            Ok(Inversion { j0, residual: map.eval(j0, eps, omega0, domega)? - domega, iterations: n, bracket: (0.0, 0.0) })
        }
        InversionMethod::Newton => newton(map, &d, domega, eps, omega0, opts),
    }
}

fn default_j_max(d: &[f64], domega: f64) -> Result<f64> {
    for (k, &c) in d.iter().enumerate().skip(1) {
        if c != 0.0 {
            return Ok((2.0 * domega.abs() / c.abs()).powf(1.0 / k as f64));
        }
    }
    Err(Error::Domain("frequency map is independent of J0".into()))
}

fn newton(map: &FrequencyMap, d: &[f64], domega: f64, eps: f64, omega0: f64, opts: &InversionOptions) -> Result<Inversion> {
    let g = |j: f64| map.eval(j, eps, omega0, domega).map(|v| v - domega);
    let dg = |j: f64| map.derivative(j, eps, omega0, domega);
    let (mut lo, mut hi) = (0.0, opts.j_max.map_or_else(|| default_j_max(d, domega), Ok)?);
    let (g_lo, g_hi) = (g(lo)?, g(hi)?);
    if g_lo == 0.0 {
        return Ok(Inversion { j0: lo, residual: 0.0, iterations: 0, bracket: (lo, hi) });
    }
    if g_lo.signum() == g_hi.signum() {
        return Err(Error::NoRoot { lo, hi, target: domega });
    }
    let rising = g_hi > 0.0;
    let mut x = 0.5 * (lo + hi);
    for it in 1..=opts.max_iter {
        let gx = g(x)?;
        if (gx > 0.0) == rising {
            hi = x;
        } else {
            lo = x;
        }
        let slope = dg(x)?;
        let mut next = if slope != 0.0 { x - gx / slope } else { f64::NAN };
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - x).abs() <= opts.tol || hi - lo <= opts.tol {
            return Ok(Inversion { j0: next, residual: g(next)?, iterations: it, bracket: (lo, hi) });
        }
        x = next;
    }
    Err(Error::NonConvergence { iterations: opts.max_iter, lo, hi })
}
