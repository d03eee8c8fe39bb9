//! Exact (unexpanded) Hamilton equations for the oscillator models.

use super::integrator::{Dopri5, Trajectory};
use crate::error::{Error, Result};
use crate::prep::{ActionAngleHamiltonian, OscillatorModel};
use crate::series::{Bindings, PoissonSeries, Trig};

#[derive(Clone, Debug)]
struct CompiledTerm {
    coeff: f64,
    half_powers: Vec<i32>,
    wave: Vec<i32>,
    trig: Trig,
}

/// A series in `(q, J)` with every other parameter bound, for fast evaluation.
#[derive(Clone, Debug)]
pub struct CompiledSeries {
    terms: Vec<CompiledTerm>,
}

impl CompiledSeries {
    /// Binds every parameter except the action (the `J0` slot) and the angles.
    pub fn compile(s: &PoissonSeries, b: &Bindings) -> Result<Self> {
        let n = s.n_dof();
        let mut terms = Vec::with_capacity(s.len());
        for (k, c) in s.iter() {
            if k.p_degree() != 0 {
                return Err(Error::Invalid("compiled series must not depend on p".into()));
            }
            let mut rest = k.mono.clone();
            rest.j0_exp2 = vec![0; n];
            let mut coeff = c.to_f64() * b.monomial(&rest)?;
            if k.eps > 0 {
                coeff *= b.eps.ok_or(Error::Unbound("eps"))?.powi(k.eps as i32);
            }
            terms.push(CompiledTerm { coeff, half_powers: k.mono.j0_exp2.clone(), wave: k.wave.clone(), trig: k.trig });
        }
        Ok(CompiledSeries { terms })
    }

    pub fn eval(&self, q: &[f64], j: &[f64]) -> f64 {
        let mut total = 0.0;
        for t in &self.terms {
            let mut v = t.coeff;
            for (&e, &ji) in t.half_powers.iter().zip(j) {
                v *= match e {
                    0 => 1.0,
                    e if e % 2 == 0 => ji.powi(e / 2),
                    e => ji.sqrt().powi(e),
                };
            }
            let arg: f64 = t.wave.iter().zip(q).map(|(&w, &qi)| w as f64 * qi).sum();
            v *= match t.trig {
                Trig::Cos => arg.cos(),
                Trig::Sin => arg.sin(),
            };
            total += v;
        }
        total
    }
}

/// An autonomous Hamiltonian system with state `y = (coordinates, momenta)`.
pub trait HamiltonianSystem {
    fn n_dof(&self) -> usize;
    fn rhs(&self, y: &[f64], dy: &mut [f64]);
    fn energy(&self, y: &[f64]) -> f64;
}

/// Hamilton's equations in action-angle variables, state `(q, J)`.
#[derive(Clone, Debug)]
pub struct ActionAngleSystem {
    omega0: Vec<f64>,
    h: CompiledSeries,
    dh_dj: Vec<CompiledSeries>,
    dh_dq: Vec<CompiledSeries>,
}

impl ActionAngleSystem {
    /// `b` must bind `eps` and, for symbolic `ω₀`, `omega0`.
    pub fn new(h: &ActionAngleHamiltonian, b: &Bindings) -> Result<Self> {
        let n = h.n_dof;
        let omega0 = h.omega0.evaluate(n, b)?;
        let dh_dj = (0..n).map(|i| CompiledSeries::compile(&h.perturbation.d_j0(i), b)).collect::<Result<_>>()?;
        let dh_dq = (0..n).map(|i| CompiledSeries::compile(&h.perturbation.d_q(i), b)).collect::<Result<_>>()?;
        Ok(ActionAngleSystem { omega0, h: CompiledSeries::compile(&h.perturbation, b)?, dh_dj, dh_dq })
    }

    pub fn omega0(&self) -> &[f64] {
        &self.omega0
    }

    /// `∂H/∂J` and `∂H/∂q` at `(q, J)`.
    pub fn gradient(&self, q: &[f64], j: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let dj = self.dh_dj.iter().zip(&self.omega0).map(|(s, w)| w + s.eval(q, j)).collect();
        let dq = self.dh_dq.iter().map(|s| s.eval(q, j)).collect();
        (dj, dq)
    }
}

impl HamiltonianSystem for ActionAngleSystem {
    fn n_dof(&self) -> usize {
        self.omega0.len()
    }

    fn rhs(&self, y: &[f64], dy: &mut [f64]) {
        let n = self.n_dof();
        let (q, j) = y.split_at(n);
        for i in 0..n {
            dy[i] = self.omega0[i] + self.dh_dj[i].eval(q, j);
            dy[n + i] = -self.dh_dq[i].eval(q, j);
        }
    }

    fn energy(&self, y: &[f64]) -> f64 {
        let n = self.n_dof();
        let (q, j) = y.split_at(n);
        self.omega0.iter().zip(j).map(|(w, ji)| w * ji).sum::<f64>() + self.h.eval(q, j)
    }
}

#[derive(Clone, Debug)]
struct CartesianMonomial {
    coeff: f64,
    x_exp: Vec<u32>,
    y_exp: Vec<u32>,
}

/// Hamilton's equations in the original variables, state `(x, y)` with
/// `H = Σ ω₀ (x² + y²)/2 + Σ ε^e c x^a y^b` and `ẋ = ∂H/∂y`, `ẏ = −∂H/∂x`.
#[derive(Clone, Debug)]
pub struct CartesianSystem {
    omega0: Vec<f64>,
    terms: Vec<CartesianMonomial>,
}

fn monomial_value(x: &[f64], y: &[f64], xe: &[u32], ye: &[u32]) -> f64 {
    let mut v = 1.0;
    for i in 0..x.len() {
        v *= x[i].powi(xe[i] as i32) * y[i].powi(ye[i] as i32);
    }
    v
}

impl CartesianSystem {
    pub fn new(model: &OscillatorModel, b: &Bindings) -> Result<Self> {
        let n = model.n_dof;
        let omega0 = model.omega0.evaluate(n, b)?;
        let eps = b.eps.ok_or(Error::Unbound("eps"))?;
        let terms = model
            .terms
            .iter()
            .map(|t| CartesianMonomial { coeff: t.coeff.to_f64() * eps.powi(t.eps as i32), x_exp: t.x_exp.clone(), y_exp: t.y_exp.clone() })
            .collect();
        Ok(CartesianSystem { omega0, terms })
    }

    fn partial(&self, x: &[f64], y: &[f64], dof: usize, wrt_x: bool) -> f64 {
        let mut s = 0.0;
        for t in &self.terms {
            let (mut xe, mut ye) = (t.x_exp.clone(), t.y_exp.clone());
            let e = if wrt_x { &mut xe[dof] } else { &mut ye[dof] };
            if *e == 0 {
                continue;
            }
            let m = *e as f64;
            *e -= 1;
            s += t.coeff * m * monomial_value(x, y, &xe, &ye);
        }
        s
    }
}

impl HamiltonianSystem for CartesianSystem {
    fn n_dof(&self) -> usize {
        self.omega0.len()
    }

    fn rhs(&self, s: &[f64], ds: &mut [f64]) {
        let n = self.n_dof();
        let (x, y) = s.split_at(n);
        for i in 0..n {
            ds[i] = self.omega0[i] * y[i] + self.partial(x, y, i, false);
            ds[n + i] = -(self.omega0[i] * x[i] + self.partial(x, y, i, true));
        }
    }

    fn energy(&self, s: &[f64]) -> f64 {
        let n = self.n_dof();
        let (x, y) = s.split_at(n);
        let h0: f64 = (0..n).map(|i| 0.5 * self.omega0[i] * (x[i] * x[i] + y[i] * y[i])).sum();
        h0 + self.terms.iter().map(|t| t.coeff * monomial_value(x, y, &t.x_exp, &t.y_exp)).sum::<f64>()
    }
}

/// Converts action-angle `(q, J)` to `(x, y) = √(2J) (sin q, cos q)`.
pub fn to_cartesian(q: &[f64], j: &[f64]) -> Vec<f64> {
    let x = q.iter().zip(j).map(|(q, j)| (2.0 * j).sqrt() * q.sin());
    let y = q.iter().zip(j).map(|(q, j)| (2.0 * j).sqrt() * q.cos());
    x.chain(y).collect()
}

/// Integrates `system` from `y0` at `t = 0` and samples it at `times`.
pub fn integrate_hamilton<S: HamiltonianSystem>(system: &S, y0: &[f64], times: &[f64], opts: &Dopri5) -> Result<Trajectory> {
    if y0.len() != 2 * system.n_dof() {
        return Err(Error::DofMismatch { left: y0.len(), right: 2 * system.n_dof() });
    }
    opts.integrate(|_, y, dy| system.rhs(y, dy), 0.0, y0, times)
}

/// `n` uniformly spaced samples on `[0, t_max]`.
pub fn uniform_times(t_max: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![t_max],
        _ => (0..n).map(|i| t_max * i as f64 / (n - 1) as f64).collect(),
    }
}
