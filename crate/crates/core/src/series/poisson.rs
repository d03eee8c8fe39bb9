use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use super::monomial::{CounterSymbol, ParamMonomial};
use super::scalar::Scalar;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Trig {
    Cos,
    Sin,
}

/// Everything that identifies a term except its coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TermKey {
    pub eps: u32,
    pub mono: ParamMonomial,
    pub p_exp: Vec<u32>,
    pub trig: Trig,
    pub wave: Vec<i32>,
}

pub fn wave_norm(k: &[i32]) -> u32 {
    k.iter().map(|x| x.unsigned_abs()).sum()
}

impl TermKey {
    pub fn p_degree(&self) -> u32 {
        self.p_exp.iter().sum()
    }

    pub fn wave_norm(&self) -> u32 {
        wave_norm(&self.wave)
    }

    pub fn is_average(&self) -> bool {
        self.wave.iter().all(|&k| k == 0)
    }
}

impl Ord for TermKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.eps
            .cmp(&other.eps)
            .then_with(|| self.wave_norm().cmp(&other.wave_norm()))
            .then_with(|| self.wave.cmp(&other.wave))
            .then_with(|| self.p_exp.cmp(&other.p_exp))
            .then_with(|| self.trig.cmp(&other.trig))
            .then_with(|| self.mono.cmp(&other.mono))
    }
}

impl PartialOrd for TermKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Values for the symbols appearing in a series.
#[derive(Clone, Debug, Default)]
pub struct Bindings {
    pub eps: Option<f64>,
    pub omega: Option<f64>,
    pub omega0: Option<f64>,
    pub j0: Option<Vec<f64>>,
    pub p: Option<Vec<f64>>,
    pub q: Option<Vec<f64>>,
    pub counters: BTreeMap<CounterSymbol, f64>,
}

impl Bindings {
    pub fn with_eps(mut self, v: f64) -> Self {
        self.eps = Some(v);
        self
    }
    pub fn with_omega(mut self, v: f64) -> Self {
        self.omega = Some(v);
        self
    }
    pub fn with_omega0(mut self, v: f64) -> Self {
        self.omega0 = Some(v);
        self
    }
    pub fn with_j0(mut self, v: Vec<f64>) -> Self {
        self.j0 = Some(v);
        self
    }
    pub fn with_p(mut self, v: Vec<f64>) -> Self {
        self.p = Some(v);
        self
    }
    pub fn with_q(mut self, v: Vec<f64>) -> Self {
        self.q = Some(v);
        self
    }

    pub fn monomial(&self, m: &ParamMonomial) -> Result<f64> {
        let mut v = 1.0;
        for (j, &e) in m.j0_exp2.iter().enumerate() {
            if e != 0 {
                let j0 = self.j0.as_ref().ok_or(Error::Unbound("J0"))?[j];
                if j0 < 0.0 && e % 2 != 0 {
                    return Err(Error::Domain(format!("J0 = {j0} raised to half-integer power")));
                }
                v *= if e % 2 == 0 { j0.powi(e / 2) } else { j0.sqrt().powi(e) };
            }
        }
        if m.omega_exp != 0 {
            v *= self.omega.ok_or(Error::Unbound("omega"))?.powi(m.omega_exp);
        }
        if m.omega0_exp != 0 {
            v *= self.omega0.ok_or(Error::Unbound("omega0"))?.powi(m.omega0_exp);
        }
        for (s, e) in &m.counter {
            v *= self.counters.get(s).ok_or(Error::Unbound("counterterm"))?.powi(*e as i32);
        }
        Ok(v)
    }
}

/// A truncated Poisson series in `n_dof` angle/action pairs.
///
/// Terms are stored canonically (first nonzero wave component positive, no
/// `sin(0)` terms, no zero coefficients) and terms beyond the cutoffs are
/// discarded on insertion.
#[derive(Clone, Debug, PartialEq)]
pub struct PoissonSeries {
    n_dof: usize,
    eps_cutoff: u32,
    p_cutoff: Option<u32>,
    terms: BTreeMap<TermKey, Scalar>,
}

fn add_vec_i(a: &[i32], b: &[i32], sign: i32) -> Vec<i32> {
    a.iter().zip(b).map(|(x, y)| x + sign * y).collect()
}

impl PoissonSeries {
    pub fn new(n_dof: usize, eps_cutoff: u32, p_cutoff: Option<u32>) -> Self {
        PoissonSeries { n_dof, eps_cutoff, p_cutoff, terms: BTreeMap::new() }
    }

    pub fn empty_like(&self) -> Self {
        PoissonSeries::new(self.n_dof, self.eps_cutoff, self.p_cutoff)
    }

    pub fn n_dof(&self) -> usize {
        self.n_dof
    }

    pub fn eps_cutoff(&self) -> u32 {
        self.eps_cutoff
    }

    pub fn p_cutoff(&self) -> Option<u32> {
        self.p_cutoff
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_exact(&self) -> bool {
        self.terms.values().all(Scalar::is_exact)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&TermKey, &Scalar)> {
        self.terms.iter()
    }

    /// Same terms with new cutoffs (terms beyond them are dropped).
    pub fn with_cutoffs(&self, eps_cutoff: u32, p_cutoff: Option<u32>) -> Self {
        let mut out = PoissonSeries::new(self.n_dof, eps_cutoff, p_cutoff);
        for (k, c) in &self.terms {
            out.insert(k.clone(), c.clone());
        }
        out
    }

    fn admits(&self, key: &TermKey) -> bool {
        key.eps <= self.eps_cutoff && self.p_cutoff.is_none_or(|pc| key.p_degree() <= pc)
    }

    /// Adds `coeff` to the term `key`, canonicalizing the wave first.
    pub fn insert(&mut self, mut key: TermKey, mut coeff: Scalar) {
        assert_eq!(key.wave.len(), self.n_dof, "wave length must equal n_dof");
        assert_eq!(key.p_exp.len(), self.n_dof, "p_exp length must equal n_dof");
        if coeff.is_zero() || !self.admits(&key) {
            return;
        }
        match key.wave.iter().find(|&&k| k != 0) {
            None if key.trig == Trig::Sin => return,
            Some(&k) if k < 0 => {
                key.wave.iter_mut().for_each(|k| *k = -*k);
                if key.trig == Trig::Sin {
                    coeff = -coeff;
                }
            }
            _ => {}
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(key) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                let s = o.get() + &coeff;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    /// Convenience constructor for a single term.
    pub fn add_term(&mut self, eps: u32, coeff: Scalar, mono: ParamMonomial, p_exp: Vec<u32>, trig: Trig, wave: Vec<i32>) {
        self.insert(TermKey { eps, mono, p_exp, trig, wave }, coeff);
    }

    pub fn term(n_dof: usize, eps: u32, coeff: Scalar, mono: ParamMonomial, p_exp: Vec<u32>, trig: Trig, wave: Vec<i32>) -> Self {
        let mut s = PoissonSeries::new(n_dof, u32::MAX, None);
        s.add_term(eps, coeff, mono, p_exp, trig, wave);
        s
    }

    /// Coefficient of the specified term (zero if absent). The wave is canonicalized.
    pub fn coefficient(&self, eps: u32, mono: &ParamMonomial, p_exp: &[u32], trig: Trig, wave: &[i32]) -> Scalar {
        let mut w = wave.to_vec();
        let mut sign = 1;
        if let Some(&k) = w.iter().find(|&&k| k != 0) {
            if k < 0 {
                w.iter_mut().for_each(|k| *k = -*k);
                if trig == Trig::Sin {
                    sign = -1;
                }
            }
        }
        let key = TermKey { eps, mono: mono.clone(), p_exp: p_exp.to_vec(), trig, wave: w };
        let c = self.terms.get(&key).cloned().unwrap_or_default();
        if sign < 0 {
            -c
        } else {
            c
        }
    }

    fn check_dof(&self, other: &PoissonSeries) -> Result<()> {
        if self.n_dof != other.n_dof {
            return Err(Error::DofMismatch { left: self.n_dof, right: other.n_dof });
        }
        Ok(())
    }

    fn combined_cutoffs(&self, other: &PoissonSeries) -> (u32, Option<u32>) {
        let p = match (self.p_cutoff, other.p_cutoff) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        (self.eps_cutoff.min(other.eps_cutoff), p)
    }

    pub fn add(&self, other: &PoissonSeries) -> Result<PoissonSeries> {
        self.check_dof(other)?;
        let (e, p) = self.combined_cutoffs(other);
        let mut out = self.with_cutoffs(e, p);
        for (k, c) in &other.terms {
            out.insert(k.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &PoissonSeries) -> Result<PoissonSeries> {
        self.add(&other.neg())
    }

    /// In-place accumulation keeping `self`'s cutoffs.
    pub fn accumulate(&mut self, other: &PoissonSeries) -> Result<()> {
        self.check_dof(other)?;
        for (k, c) in &other.terms {
            self.insert(k.clone(), c.clone());
        }
        Ok(())
    }

    pub fn neg(&self) -> PoissonSeries {
        self.map_coeffs(|c| -c)
    }

    pub fn scale(&self, s: &Scalar) -> PoissonSeries {
        self.map_coeffs(|c| c * s)
    }

    pub fn map_coeffs(&self, f: impl Fn(&Scalar) -> Scalar) -> PoissonSeries {
        let mut out = self.empty_like();
        for (k, c) in &self.terms {
            out.insert(k.clone(), f(c));
        }
        out
    }

    /// Multiplies every term by `s · m`.
    pub fn scale_mono(&self, s: &Scalar, m: &ParamMonomial) -> PoissonSeries {
        let mut out = self.empty_like();
        for (k, c) in &self.terms {
            let mut k = k.clone();
            k.mono = k.mono.mul(m);
            out.insert(k, c * s);
        }
        out
    }

    /// Multiplies by `ε^delta`, shifting the eps cutoff accordingly (terms
    /// falling below order zero are an error).
    pub fn shift_eps(&self, delta: i32) -> Result<PoissonSeries> {
        let cut = if self.eps_cutoff == u32::MAX {
            u32::MAX
        } else {
            (self.eps_cutoff as i64 + delta as i64).clamp(0, u32::MAX as i64 - 1) as u32
        };
        let mut out = PoissonSeries::new(self.n_dof, cut, self.p_cutoff);
        for (k, c) in &self.terms {
            let e = k.eps as i64 + delta as i64;
            if e < 0 {
                return Err(Error::Invalid(format!("eps shift {delta} makes order {e}")));
            }
            let mut k = k.clone();
            k.eps = e as u32;
            out.insert(k, c.clone());
        }
        Ok(out)
    }

    pub fn to_numeric(&self) -> PoissonSeries {
        self.map_coeffs(Scalar::to_numeric)
    }

    pub fn filter(&self, pred: impl Fn(&TermKey) -> bool) -> PoissonSeries {
        let mut out = self.empty_like();
        for (k, c) in &self.terms {
            if pred(k) {
                out.terms.insert(k.clone(), c.clone());
            }
        }
        out
    }

    /// Terms of exactly eps order `k`.
    pub fn eps_part(&self, k: u32) -> PoissonSeries {
        self.filter(|t| t.eps == k)
    }

    /// Terms of eps order `k` with the eps power removed.
    pub fn eps_component(&self, k: u32) -> PoissonSeries {
        let mut out = self.empty_like();
        for (t, c) in self.terms.iter().filter(|(t, _)| t.eps == k) {
            let mut t = t.clone();
            t.eps = 0;
            out.terms.insert(t, c.clone());
        }
        out
    }

    /// Terms of total p-degree `d`.
    pub fn p_degree_part(&self, d: u32) -> PoissonSeries {
        self.filter(|t| t.p_degree() == d)
    }

    /// The angle average (`k = 0` terms).
    pub fn average(&self) -> PoissonSeries {
        self.filter(TermKey::is_average)
    }

    pub fn oscillating(&self) -> PoissonSeries {
        self.filter(|t| !t.is_average())
    }

    pub fn max_eps(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.eps).max()
    }

    pub fn min_eps(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.eps).min()
    }

    pub fn max_p_degree(&self) -> u32 {
        self.terms.keys().map(TermKey::p_degree).max().unwrap_or(0)
    }

    pub fn max_wave_norm(&self) -> u32 {
        self.terms.keys().map(TermKey::wave_norm).max().unwrap_or(0)
    }

    pub fn mul(&self, other: &PoissonSeries) -> Result<PoissonSeries> {
        self.check_dof(other)?;
        let (e, p) = self.combined_cutoffs(other);
        let mut out = PoissonSeries::new(self.n_dof, e, p);
        let half = Scalar::rational(1, 2);
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                let eps = ka.eps + kb.eps;
                if eps > e {
                    continue;
                }
                let p_exp: Vec<u32> = ka.p_exp.iter().zip(&kb.p_exp).map(|(x, y)| x + y).collect();
                if p.is_some_and(|pc| p_exp.iter().sum::<u32>() > pc) {
                    continue;
                }
                let mono = ka.mono.mul(&kb.mono);
                let c = &(ca * cb) * &half;
                let plus = add_vec_i(&ka.wave, &kb.wave, 1);
                let minus = add_vec_i(&ka.wave, &kb.wave, -1);
                // cos a cos b = ½[cos(a−b) + cos(a+b)]
                // sin a sin b = ½[cos(a−b) − cos(a+b)]
                // sin a cos b = ½[sin(a+b) + sin(a−b)]
                // cos a sin b = ½[sin(a+b) − sin(a−b)]
                let (t, s_plus, s_minus) = match (ka.trig, kb.trig) {
                    (Trig::Cos, Trig::Cos) => (Trig::Cos, 1, 1),
                    (Trig::Sin, Trig::Sin) => (Trig::Cos, -1, 1),
                    (Trig::Sin, Trig::Cos) => (Trig::Sin, 1, 1),
                    (Trig::Cos, Trig::Sin) => (Trig::Sin, 1, -1),
                };
                let key = |wave| TermKey { eps, mono: mono.clone(), p_exp: p_exp.clone(), trig: t, wave };
                out.insert(key(plus), if s_plus > 0 { c.clone() } else { -&c });
                out.insert(key(minus), if s_minus > 0 { c } else { -&c });
            }
        }
        Ok(out)
    }

    pub fn pow(&self, n: u32) -> Result<PoissonSeries> {
        let mut acc = PoissonSeries::one(self.n_dof).with_cutoffs(self.eps_cutoff, self.p_cutoff);
        for _ in 0..n {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// The unit series.
    pub fn one(n_dof: usize) -> PoissonSeries {
        PoissonSeries::term(n_dof, 0, Scalar::one(), ParamMonomial::one(n_dof), vec![0; n_dof], Trig::Cos, vec![0; n_dof])
    }

    /// A p- and q-independent series `c · m · εᵉ`.
    pub fn constant(n_dof: usize, eps: u32, c: Scalar, m: ParamMonomial) -> PoissonSeries {
        PoissonSeries::term(n_dof, eps, c, m, vec![0; n_dof], Trig::Cos, vec![0; n_dof])
    }

    /// `∂/∂q_i`.
    pub fn d_q(&self, i: usize) -> PoissonSeries {
        let mut out = self.empty_like();
        for (k, c) in &self.terms {
            let ki = k.wave[i];
            if ki == 0 {
                continue;
            }
            let mut nk = k.clone();
            let nc = match k.trig {
                Trig::Cos => {
                    nk.trig = Trig::Sin;
                    c.scale_int(-(ki as i64))
                }
                Trig::Sin => {
                    nk.trig = Trig::Cos;
                    c.scale_int(ki as i64)
                }
            };
            out.terms.insert(nk, nc);
        }
        out
    }

    /// `∂/∂p_i`.
    pub fn d_p(&self, i: usize) -> PoissonSeries {
        let mut out = self.empty_like();
        for (k, c) in &self.terms {
            let e = k.p_exp[i];
            if e == 0 {
                continue;
            }
            let mut nk = k.clone();
            nk.p_exp[i] -= 1;
            out.insert(nk, c.scale_int(e as i64));
        }
        out
    }

    /// `∂/∂J0_i` acting on the parameter monomials.
    pub fn d_j0(&self, i: usize) -> PoissonSeries {
        let mut out = self.empty_like();
        for (k, c) in &self.terms {
            if let Some((f, m)) = k.mono.d_j0(i) {
                let mut nk = k.clone();
                nk.mono = m;
                out.insert(nk, c * &f);
            }
        }
        out
    }

    /// Poisson bracket `{f, g} = Σ_i (∂f/∂q_i ∂g/∂p_i − ∂f/∂p_i ∂g/∂q_i)`.
    pub fn bracket(&self, other: &PoissonSeries) -> Result<PoissonSeries> {
        self.check_dof(other)?;
        let (e, p) = self.combined_cutoffs(other);
        let mut out = PoissonSeries::new(self.n_dof, e, p);
        for i in 0..self.n_dof {
            let a = self.d_q(i).mul(&other.d_p(i))?;
            let b = self.d_p(i).mul(&other.d_q(i))?;
            out.accumulate(&a)?;
            out.accumulate(&b.neg())?;
        }
        Ok(out)
    }

    /// Value at `q = 0, p = 0` as a p/q-free series.
    pub fn at_origin(&self) -> PoissonSeries {
        let mut out = self.empty_like();
        for (k, c) in &self.terms {
            if k.p_degree() != 0 || k.trig == Trig::Sin {
                continue;
            }
            let mut nk = k.clone();
            nk.wave.iter_mut().for_each(|w| *w = 0);
            out.insert(nk, c.clone());
        }
        out
    }

    /// Drops every term depending on p (evaluation at `p = 0`).
    pub fn at_p_zero(&self) -> PoissonSeries {
        self.filter(|k| k.p_degree() == 0)
    }

    /// Replaces the placeholder `sym` by the p/q-free series `value`.
    pub fn substitute_counter(&self, sym: CounterSymbol, value: &PoissonSeries) -> Result<PoissonSeries> {
        self.check_dof(value)?;
        let mut out = self.empty_like();
        let value = value.with_cutoffs(u32::MAX, None);
        let mut powers: Vec<PoissonSeries> = vec![PoissonSeries::one(self.n_dof)];
        for (k, c) in &self.terms {
            let (e, rest) = k.mono.without_counter(sym);
            if e == 0 {
                out.insert(k.clone(), c.clone());
                continue;
            }
            while powers.len() <= e as usize {
                let next = powers.last().unwrap().mul(&value)?;
                powers.push(next);
            }
            let mut base = k.clone();
            base.mono = rest;
            let single = PoissonSeries::term(self.n_dof, base.eps, c.clone(), base.mono, base.p_exp, base.trig, base.wave);
            out.accumulate(&single.mul(&powers[e as usize])?)?;
        }
        Ok(out)
    }

    /// Solves `self = 0` for the placeholder `sym`. `self` must be linear in
    /// `sym` with a single-monomial coefficient.
    pub fn solve_linear(&self, sym: CounterSymbol) -> Result<PoissonSeries> {
        let fail = |reason: &str| Error::CountertermSolve { order: sym.order, reason: reason.into() };
        let mut coef = self.empty_like();
        let mut rest = self.empty_like();
        for (k, c) in &self.terms {
            let (e, m) = k.mono.without_counter(sym);
            let mut nk = k.clone();
            nk.mono = m;
            match e {
                0 => rest.insert(nk, c.clone()),
                1 => coef.insert(nk, c.clone()),
                _ => return Err(fail("nonlinear occurrence")),
            }
        }
        if coef.len() != 1 {
            return Err(fail(if coef.is_empty() { "placeholder absent" } else { "coefficient is not a single monomial" }));
        }
        let (ck, cc) = coef.terms.iter().next().unwrap();
        if !ck.is_average() || ck.p_degree() != 0 {
            return Err(fail("coefficient depends on the angles or actions"));
        }
        let inv_m = ck.mono.inverse().ok_or_else(|| fail("coefficient contains other placeholders"))?;
        let inv_c = cc.inverse().ok_or_else(|| fail("zero coefficient"))?;
        let mut out = rest.scale_mono(&(-&inv_c), &inv_m).with_cutoffs(u32::MAX, None);
        if ck.eps > 0 {
            out = out.shift_eps(-(ck.eps as i32))?;
        }
        Ok(out)
    }

    pub fn evaluate(&self, b: &Bindings) -> Result<f64> {
        let mut total = 0.0;
        for (k, c) in &self.terms {
            let mut v = c.to_f64() * b.monomial(&k.mono)?;
            if k.eps > 0 {
                v *= b.eps.ok_or(Error::Unbound("eps"))?.powi(k.eps as i32);
            }
            if k.p_degree() > 0 {
                let p = b.p.as_ref().ok_or(Error::Unbound("p"))?;
                for (pi, &e) in p.iter().zip(&k.p_exp) {
                    v *= pi.powi(e as i32);
                }
            }
            if !k.is_average() {
                let q = b.q.as_ref().ok_or(Error::Unbound("q"))?;
                let arg: f64 = k.wave.iter().zip(q).map(|(&w, &qi)| w as f64 * qi).sum();
                v *= match k.trig {
                    Trig::Cos => arg.cos(),
                    Trig::Sin => arg.sin(),
                };
            }
            total += v;
        }
        Ok(total)
    }

    /// Binds J0/omega/omega0 values numerically, leaving p, q and eps symbolic.
    pub fn bind_params(&self, b: &Bindings) -> Result<PoissonSeries> {
        let mut out = self.empty_like();
        for (k, c) in &self.terms {
            let v = c.to_f64() * b.monomial(&k.mono)?;
            let mut nk = k.clone();
            nk.mono = ParamMonomial::one(self.n_dof);
            out.insert(nk, Scalar::Numeric(v));
        }
        Ok(out)
    }

    /// Approximate equality: identical keys (up to numerically tiny terms) and
    /// coefficients within relative tolerance `rel`.
    pub fn approx_eq(&self, other: &PoissonSeries, rel: f64) -> bool {
        let Ok(d) = self.sub(other) else { return false };
        d.terms.iter().all(|(k, c)| {
            let scale = self.terms.get(k).map_or(0.0, Scalar::abs_f64).max(other.terms.get(k).map_or(0.0, Scalar::abs_f64));
            c.abs_f64() <= rel * scale.max(1.0)
        })
    }

    /// Removes every term whose coefficient magnitude is below `tol`.
    pub fn prune(&self, tol: f64) -> PoissonSeries {
        let mut out = self.empty_like();
        for (k, c) in &self.terms {
            if c.abs_f64() >= tol {
                out.terms.insert(k.clone(), c.clone());
            }
        }
        out
    }
}

impl fmt::Display for PoissonSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let single = self.n_dof == 1;
        let mut first = true;
        for (k, c) in &self.terms {
            let mut factors: Vec<String> = Vec::new();
            match k.eps {
                0 => {}
                1 => factors.push("eps".into()),
                e => factors.push(format!("eps^{e}")),
            }
            if !k.mono.is_one() {
                factors.push(k.mono.to_string());
            }
            for (i, &e) in k.p_exp.iter().enumerate() {
                let name = if single { "p".to_string() } else { format!("p_{}", i + 1) };
                match e {
                    0 => {}
                    1 => factors.push(name),
                    _ => factors.push(format!("{name}^{e}")),
                }
            }
            if !k.is_average() {
                let arg = wave_string(&k.wave);
                factors.push(match k.trig {
                    Trig::Cos => format!("cos({arg})"),
                    Trig::Sin => format!("sin({arg})"),
                });
            }
            let (neg, mag) = if c.signum() < 0 && !matches!(c.parts(), Some((a, b)) if !num_traits::Zero::is_zero(a) && !num_traits::Zero::is_zero(b)) {
                (true, -c)
            } else {
                (false, c.clone())
            };
            let body = if factors.is_empty() {
                mag.to_string()
            } else if mag.is_one() {
                factors.join("*")
            } else {
                format!("{mag}*{}", factors.join("*"))
            };
            match (first, neg) {
                (true, true) => write!(f, "-{body}")?,
                (true, false) => write!(f, "{body}")?,
                (false, true) => write!(f, " - {body}")?,
                (false, false) => write!(f, " + {body}")?,
            }
            first = false;
        }
        Ok(())
    }
}

fn wave_string(k: &[i32]) -> String {
    let single = k.len() == 1;
    let mut s = String::new();
    for (i, &ki) in k.iter().enumerate() {
        if ki == 0 {
            continue;
        }
        let name = if single { "q".to_string() } else { format!("q_{}", i + 1) };
        let mag = ki.unsigned_abs();
        let term = if mag == 1 { name } else { format!("{mag}{name}") };
        if s.is_empty() {
            if ki < 0 {
                s.push('-');
            }
        } else {
            s.push_str(if ki < 0 { "-" } else { "+" });
        }
        s.push_str(&term);
    }
    s
}
