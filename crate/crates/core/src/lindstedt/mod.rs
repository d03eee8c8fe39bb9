//! Direct construction of the torus solution by termwise integration.
//!
//! Scheme B reparametrizes time with `φ = ω t`, `ω = ω₀ − Σ ε^i a_i`, and
//! divides by `ω₀`. Scheme K fixes `ω`, writes `ω₀ = ω + Σ ε^i a_i` and
//! divides by `ω`. In both, Hamilton's equations are Taylor-expanded around
//! `(φ, J₀)` in the corrections `δq = Σ ε^i q_i`, `δJ = Σ ε^i J_i`.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::freq::{DivisorGuard, FreqSymbol, Frequencies};
use crate::normalform::{FrequencyRelation, TorusSolution, TrajCoord, TrajectorySeries};
use crate::prep::ActionAngleHamiltonian;
use crate::series::{CounterSymbol, ParamMonomial, PoissonSeries, Scalar, TermKey, Trig};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scheme {
    B,
    K,
}

impl Scheme {
    /// The default divisor frequency: `ω₀` for scheme B, `ω` for scheme K.
    pub fn default_base(&self, h: &ActionAngleHamiltonian) -> Frequencies {
        match self {
            Scheme::B => h.omega0.clone(),
            Scheme::K => Frequencies::Symbolic(FreqSymbol::Omega),
        }
    }
}

/// Termwise `∫ f dφ / ν`, with the constant fixed so the result vanishes at `φ = 0`.
pub fn integrate_trig(f: &PoissonSeries, guard: &DivisorGuard) -> Result<PoissonSeries> {
    let mut out = f.empty_like();
    for (k, c) in f.iter() {
        if k.is_average() {
            return Err(Error::SecularLeak { order: k.eps });
        }
        let (inv, m) = guard.inverse_divisor(&k.wave)?;
        let coeff = c * &inv;
        let mono = k.mono.mul(&m);
        match k.trig {
            Trig::Cos => out.insert(TermKey { eps: k.eps, mono, p_exp: k.p_exp.clone(), trig: Trig::Sin, wave: k.wave.clone() }, coeff),
            Trig::Sin => {
                out.insert(TermKey { eps: k.eps, mono: mono.clone(), p_exp: k.p_exp.clone(), trig: Trig::Cos, wave: k.wave.clone() }, -&coeff);
                let zero = vec![0; k.wave.len()];
                out.insert(TermKey { eps: k.eps, mono, p_exp: k.p_exp.clone(), trig: Trig::Cos, wave: zero }, coeff);
            }
        }
    }
    Ok(out)
}

/// Solves the zero-average condition of `rhs` for `sym`, returning the
/// counterterm (eps-free) and the right-hand side with its average removed.
pub fn extract_secular(rhs: &PoissonSeries, sym: CounterSymbol) -> Result<(PoissonSeries, PoissonSeries)> {
    let a = rhs.average().solve_linear(sym)?;
    let cleaned = rhs.substitute_counter(sym, &a)?;
    if !cleaned.average().is_empty() {
        return Err(Error::CountertermSolve { order: sym.order, reason: "average survives substitution".into() });
    }
    Ok((a, cleaned))
}

fn multi_indices(n: usize, max: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        let mut next = Vec::new();
        for v in &out {
            let used: u32 = v.iter().sum();
            for e in 0..=(max - used) {
                let mut w = v.clone();
                w.push(e);
                next.push(w);
            }
        }
        out = next;
    }
    out
}

fn factorial(n: u32) -> i64 {
    (1..=n as i64).product()
}

/// Incremental Lindstedt construction.
#[derive(Clone, Debug)]
pub struct LindstedtState {
    pub scheme: Scheme,
    pub n_dof: usize,
    /// Orders computed so far.
    pub order: u32,
    guard: DivisorGuard,
    /// `∂h/∂J_i` and `−∂h/∂q_i`.
    field_q: Vec<PoissonSeries>,
    field_j: Vec<PoissonSeries>,
    /// `δq_i`, `δJ_i` accumulated through `order`.
    pub dq: Vec<PoissonSeries>,
    pub dj: Vec<PoissonSeries>,
    /// `a_r` per order and DOF.
    pub a: Vec<Vec<PoissonSeries>>,
    cache: HashMap<(Vec<u32>, Vec<u32>, bool, usize), PoissonSeries>,
}

impl LindstedtState {
    pub fn new(h: &ActionAngleHamiltonian, scheme: Scheme, base: &Frequencies) -> Result<Self> {
        let n = h.n_dof;
        base.check(n)?;
        if scheme == Scheme::B && *base != h.omega0 {
            return Err(Error::Invalid("scheme B divides by the unperturbed frequencies".into()));
        }
        let pert = &h.perturbation;
        Ok(LindstedtState {
            scheme,
            n_dof: n,
            order: 0,
            guard: DivisorGuard::new(base.clone()),
            field_q: (0..n).map(|i| pert.d_j0(i)).collect(),
            field_j: (0..n).map(|i| pert.d_q(i).neg()).collect(),
            dq: vec![PoissonSeries::new(n, u32::MAX, None); n],
            dj: vec![PoissonSeries::new(n, u32::MAX, None); n],
            a: Vec::new(),
            cache: HashMap::new(),
        })
    }

    /// `∂_q^α ∂_J^β` of a field component.
    fn derivative(&mut self, alpha: &[u32], beta: &[u32], is_q: bool, comp: usize) -> PoissonSeries {
        let key = (alpha.to_vec(), beta.to_vec(), is_q, comp);
        if let Some(s) = self.cache.get(&key) {
            return s.clone();
        }
        let s = if let Some(i) = alpha.iter().position(|&e| e > 0) {
            let mut a = alpha.to_vec();
            a[i] -= 1;
            self.derivative(&a, beta, is_q, comp).d_q(i)
        } else if let Some(i) = beta.iter().position(|&e| e > 0) {
            let mut b = beta.to_vec();
            b[i] -= 1;
            self.derivative(alpha, &b, is_q, comp).d_j0(i)
        } else if is_q {
            self.field_q[comp].clone()
        } else {
            self.field_j[comp].clone()
        };
        self.cache.insert(key, s.clone());
        s
    }

    /// Order-`r` part of the field evaluated on the current corrections.
    fn field_at_order(&mut self, r: u32) -> Result<(Vec<PoissonSeries>, Vec<PoissonSeries>)> {
        let n = self.n_dof;
        let cut = |s: &PoissonSeries| s.with_cutoffs(r, None);
        let dq: Vec<_> = self.dq.iter().map(cut).collect();
        let dj: Vec<_> = self.dj.iter().map(cut).collect();
        let max = r.saturating_sub(1);
        let mut fq = vec![PoissonSeries::new(n, r, None); n];
        let mut fj = vec![PoissonSeries::new(n, r, None); n];
        let mut pow_cache: HashMap<(bool, usize, u32), PoissonSeries> = HashMap::new();
        let mut power = |is_q: bool, i: usize, e: u32| -> Result<PoissonSeries> {
            if let Some(s) = pow_cache.get(&(is_q, i, e)) {
                return Ok(s.clone());
            }
            let base = if is_q { &dq[i] } else { &dj[i] };
            let s = base.pow(e)?.with_cutoffs(r, None);
            pow_cache.insert((is_q, i, e), s.clone());
            Ok(s)
        };
        for idx in multi_indices(2 * n, max) {
            let (alpha, beta) = idx.split_at(n);
            let mut prod = PoissonSeries::one(n).with_cutoffs(r, None);
            let mut denom = 1i64;
            for i in 0..n {
                if alpha[i] > 0 {
                    prod = prod.mul(&power(true, i, alpha[i])?)?;
                    denom *= factorial(alpha[i]);
                }
                if beta[i] > 0 {
                    prod = prod.mul(&power(false, i, beta[i])?)?;
                    denom *= factorial(beta[i]);
                }
            }
            if prod.is_empty() {
                continue;
            }
            let prod = prod.scale(&Scalar::rational(1, denom));
            for c in 0..n {
                let dq_c = self.derivative(alpha, beta, true, c).with_cutoffs(r, None);
                fq[c].accumulate(&dq_c.mul(&prod)?)?;
                let dj_c = self.derivative(alpha, beta, false, c).with_cutoffs(r, None);
                fj[c].accumulate(&dj_c.mul(&prod)?)?;
            }
        }
        Ok((fq.iter().map(|s| s.eps_part(r)).collect(), fj.iter().map(|s| s.eps_part(r)).collect()))
    }

    /// Computes order `order + 1`.
    pub fn advance(&mut self) -> Result<()> {
        let r = self.order + 1;
        let n = self.n_dof;
        let (fq, fj) = self.field_at_order(r)?;
        let mut a_r = Vec::with_capacity(n);
        let mut new_q = Vec::with_capacity(n);
        let mut new_j = Vec::with_capacity(n);
        for c in 0..n {
            let sym = CounterSymbol { order: r, dof: c as u32 };
            let mut rhs_q = fq[c].clone();
            rhs_q.add_term(r, Scalar::one(), ParamMonomial::counter_symbol(n, sym), vec![0; n], Trig::Cos, vec![0; n]);
            let mut rhs_j = fj[c].clone();
            if self.scheme == Scheme::B {
                // + Σ_{k<r} (a_k · ∇_φ)(q, J)_{r−k}
                for (k, ak) in self.a.iter().enumerate() {
                    let k = k as u32 + 1;
                    for (i, aki) in ak.iter().enumerate() {
                        let aki = aki.shift_eps(k as i32)?;
                        let qd = self.dq[c].eps_part(r - k).d_q(i);
                        let jd = self.dj[c].eps_part(r - k).d_q(i);
                        rhs_q.accumulate(&aki.mul(&qd)?)?;
                        rhs_j.accumulate(&aki.mul(&jd)?)?;
                    }
                }
            }
            let (a, cleaned) = extract_secular(&rhs_q, sym)?;
            if !rhs_j.average().is_empty() {
                return Err(Error::SecularLeak { order: r });
            }
            new_q.push(integrate_trig(&cleaned, &self.guard)?);
            new_j.push(integrate_trig(&rhs_j, &self.guard)?);
            a_r.push(a);
        }
        for c in 0..n {
            self.dq[c].accumulate(&new_q[c])?;
            self.dj[c].accumulate(&new_j[c])?;
        }
        self.a.push(a_r);
        self.order = r;
        Ok(())
    }

    pub fn solution(&self) -> TorusSolution {
        let n = self.n_dof;
        let q = (0..n).map(|i| TrajectorySeries { coordinate: TrajCoord::Q(i), series: self.dq[i].with_cutoffs(self.order, None) }).collect();
        let j = (0..n)
            .map(|i| {
                let mut s = self.dj[i].with_cutoffs(self.order, None);
                s.add_term(0, Scalar::one(), ParamMonomial::one(n).with_j0_exp2(i, 2), vec![0; n], Trig::Cos, vec![0; n]);
                TrajectorySeries { coordinate: TrajCoord::J(i), series: s }
            })
            .collect();
        let frequency = match self.scheme {
            Scheme::K => FrequencyRelation::Omega0FromOmega { a: self.a.clone() },
            Scheme::B => FrequencyRelation::OmegaFromOmega0 { c: self.a.iter().map(|v| v.iter().map(PoissonSeries::neg).collect()).collect() },
        };
        TorusSolution { order: self.order, q, j, frequency }
    }
}

/// Runs a Lindstedt scheme through order `order`.
pub fn lindstedt_run(h: &ActionAngleHamiltonian, scheme: Scheme, order: u32, base: &Frequencies) -> Result<TorusSolution> {
    if order == 0 {
        return Err(Error::InvalidOrder("Lindstedt construction requires order >= 1".into()));
    }
    let mut st = LindstedtState::new(h, scheme, base)?;
    for _ in 0..order {
        st.advance()?;
    }
    Ok(st.solution())
}
