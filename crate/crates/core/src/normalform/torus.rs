use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::series::{Bindings, ParamMonomial, PoissonSeries, Scalar, Trig};

/// Relation between the unperturbed frequency `ω₀` and the torus frequency `ω`.
///
/// Entries are indexed `[order - 1][dof]` and are p/q-free series in the
/// parameters (`J0`, `ω` or `ω₀`).
#[derive(Clone, Debug, PartialEq)]
pub enum FrequencyRelation {
    /// `ω₀ = ω + Σ ε^i a_i` (counterterm form).
    Omega0FromOmega { a: Vec<Vec<PoissonSeries>> },
    /// `ω = ω₀ + Σ ε^i c_i` (frequency-correction form).
    OmegaFromOmega0 { c: Vec<Vec<PoissonSeries>> },
}

impl FrequencyRelation {
    pub fn order(&self) -> usize {
        match self {
            FrequencyRelation::Omega0FromOmega { a } => a.len(),
            FrequencyRelation::OmegaFromOmega0 { c } => c.len(),
        }
    }

    /// Returns the series `Σ ε^i x_i` for one degree of freedom.
    pub fn correction_series(&self, dof: usize) -> Result<PoissonSeries> {
        let list = match self {
            FrequencyRelation::Omega0FromOmega { a } => a,
            FrequencyRelation::OmegaFromOmega0 { c } => c,
        };
        let mut out: Option<PoissonSeries> = None;
        for (i, per_dof) in list.iter().enumerate() {
            let term = per_dof[dof].shift_eps(i as i32 + 1)?;
            out = Some(match out {
                None => term,
                Some(acc) => acc.add(&term)?,
            });
        }
        out.ok_or_else(|| Error::Invalid("empty frequency relation".into()))
    }

    /// Fills in whichever of `ω`/`ω₀` is implied by the one that is bound (1 DOF).
    ///
    /// In the counterterm form with only `ω₀` bound, `ω + Σ ε^i a_i(ω) = ω₀`
    /// is solved for `ω` by the secant method.
    pub fn complete(&self, b: &Bindings) -> Result<Bindings> {
        let mut b = b.clone();
        let corr = self.correction_series(0)?;
        match self {
            FrequencyRelation::Omega0FromOmega { .. } => match (b.omega, b.omega0) {
                (Some(w), _) => b.omega0 = Some(w + corr.evaluate(&b)?),
                (None, Some(w0)) => b.omega = Some(solve_implicit_omega(&corr, &b, w0)?),
                (None, None) => return Err(Error::Unbound("omega")),
            },
            FrequencyRelation::OmegaFromOmega0 { .. } => {
                if b.omega0.is_none() {
                    return Err(Error::Unbound("omega0"));
                }
                b.omega = Some(b.omega0.unwrap() + corr.evaluate(&b)?);
            }
        }
        Ok(b)
    }

    /// In `ω₀ = ω + Σ ε^i a_i` form, the i-th counterterm; in the other form `−c_i`.
    pub fn counterterm(&self, order: usize, dof: usize) -> PoissonSeries {
        match self {
            FrequencyRelation::Omega0FromOmega { a } => a[order - 1][dof].clone(),
            FrequencyRelation::OmegaFromOmega0 { c } => c[order - 1][dof].neg(),
        }
    }
}

fn solve_implicit_omega(corr: &PoissonSeries, b: &Bindings, omega0: f64) -> Result<f64> {
    let g = |w: f64| -> Result<f64> { Ok(w + corr.evaluate(&b.clone().with_omega(w))? - omega0) };
    let (mut x0, mut x1) = (omega0, omega0 * (1.0 + 1e-3) + 1e-6);
    let (mut g0, mut g1) = (g(x0)?, g(x1)?);
    for _ in 0..100 {
        if g1 == 0.0 || (x1 - x0).abs() <= 1e-15 * x1.abs().max(1.0) {
            return Ok(x1);
        }
        if g1 == g0 {
            break;
        }
        let x2 = x1 - g1 * (x1 - x0) / (g1 - g0);
        (x0, g0) = (x1, g1);
        x1 = x2;
        g1 = g(x1)?;
    }
    if g1.abs() <= 1e-13 * omega0.abs().max(1.0) {
        Ok(x1)
    } else {
        Err(Error::NonConvergence { iterations: 100, lo: x0.min(x1), hi: x0.max(x1) })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TrajCoord {
    Q(usize),
    J(usize),
}

/// A coordinate along the torus as a trigonometric series in `φ = ω t`.
///
/// The series uses the angle slots for `φ`; for `Q(i)` the secular part
/// `φ_i` itself is implicit.
#[derive(Clone, Debug, PartialEq)]
pub struct TrajectorySeries {
    pub coordinate: TrajCoord,
    pub series: PoissonSeries,
}

impl TrajectorySeries {
    pub fn evaluate(&self, phi: &[f64], b: &Bindings) -> Result<f64> {
        let mut b = b.clone();
        b.q = Some(phi.to_vec());
        let v = self.series.evaluate(&b)?;
        Ok(match self.coordinate {
            TrajCoord::Q(i) => phi[i] + v,
            TrajCoord::J(_) => v,
        })
    }

    /// Coefficient lookup in the periodic part.
    pub fn coefficient(&self, eps: u32, mono: &ParamMonomial, trig: Trig, wave: &[i32]) -> Scalar {
        let n = self.series.n_dof();
        self.series.coefficient(eps, mono, &vec![0; n], trig, wave)
    }
}

/// The quasi-periodic solution `q(t)`, `J(t)` on the invariant torus.
#[derive(Clone, Debug, PartialEq)]
pub struct TorusSolution {
    pub order: u32,
    pub q: Vec<TrajectorySeries>,
    pub j: Vec<TrajectorySeries>,
    pub frequency: FrequencyRelation,
}

impl TorusSolution {
    pub fn n_dof(&self) -> usize {
        self.q.len()
    }

    pub fn to_json(&self) -> Value {
        let (form, list) = match &self.frequency {
            FrequencyRelation::Omega0FromOmega { a } => ("omega0_from_omega", a),
            FrequencyRelation::OmegaFromOmega0 { c } => ("omega_from_omega0", c),
        };
        let corrections: Vec<Vec<_>> = list.iter().map(|v| v.iter().map(PoissonSeries::to_json).collect()).collect();
        json!({
            "order": self.order,
            "frequency_relation": { "form": form, "corrections": corrections },
            "q": self.q.iter().map(|s| s.series.to_json()).collect::<Vec<_>>(),
            "J": self.j.iter().map(|s| s.series.to_json()).collect::<Vec<_>>(),
        })
    }

    /// `(q(t), J(t))` given complete bindings (eps, J0, ω and ω₀).
    pub fn state_at(&self, t: f64, b: &Bindings) -> Result<(Vec<f64>, Vec<f64>)> {
        let omega = match b.omega {
            Some(w) if self.n_dof() == 1 => vec![w],
            _ => return Err(Error::Unbound("omega")),
        };
        let phi: Vec<f64> = omega.iter().map(|w| w * t).collect();
        let q = self.q.iter().map(|s| s.evaluate(&phi, b)).collect::<Result<_>>()?;
        let j = self.j.iter().map(|s| s.evaluate(&phi, b)).collect::<Result<_>>()?;
        Ok((q, j))
    }

    /// Exact (or approximate, for numeric series) term-by-term equality.
    pub fn approx_eq(&self, other: &TorusSolution, rel: f64) -> bool {
        let series_eq = |a: &[TrajectorySeries], b: &[TrajectorySeries]| {
            a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.coordinate == y.coordinate && x.series.approx_eq(&y.series, rel))
        };
        let freq_eq = match (&self.frequency, &other.frequency) {
            (FrequencyRelation::Omega0FromOmega { a: x }, FrequencyRelation::Omega0FromOmega { a: y })
            | (FrequencyRelation::OmegaFromOmega0 { c: x }, FrequencyRelation::OmegaFromOmega0 { c: y }) => {
                x.len() == y.len()
                    && x.iter().zip(y).all(|(u, v)| u.len() == v.len() && u.iter().zip(v).all(|(s, t)| s.approx_eq(t, rel)))
            }
            _ => false,
        };
        series_eq(&self.q, &other.q) && series_eq(&self.j, &other.j) && freq_eq
    }
}
