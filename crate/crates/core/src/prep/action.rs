use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::model::OscillatorModel;
use crate::error::{Error, Result};
use crate::freq::Frequencies;
use crate::series::{CounterSymbol, ParamMonomial, PoissonSeries, Scalar, TermKey, Trig};

/// Hamiltonian in action-angle variables of the unperturbed oscillator.
///
/// The perturbation depends on the action `J` through the `j0_exp2` slot of
/// the parameter monomial (i.e. `J` itself, before any translation); p and
/// eps cutoffs are unbounded.
#[derive(Clone, Debug, PartialEq)]
pub struct ActionAngleHamiltonian {
    pub n_dof: usize,
    pub omega0: Frequencies,
    pub perturbation: PoissonSeries,
}

/// Hamiltonian expanded around the reference actions `J = J0 + p`.
#[derive(Clone, Debug, PartialEq)]
pub struct PreparedHamiltonian {
    pub n_dof: usize,
    pub omega0: Frequencies,
    /// Everything except `ω₀ · p`.
    pub perturbation: PoissonSeries,
    pub expansion_order: u32,
}

fn unit(n: usize, j: usize) -> Vec<i32> {
    let mut v = vec![0; n];
    v[j] = 1;
    v
}

/// `x_j = √(2J_j) sin q_j`, `y_j = √(2J_j) cos q_j`.
pub fn to_action_angle(model: &OscillatorModel) -> Result<ActionAngleHamiltonian> {
    let n = model.n_dof;
    model.omega0.check(n).map_err(|e| Error::Model(e.to_string()))?;
    let root_j = |j: usize, trig: Trig| {
        let sqrt2 = if model.terms.iter().all(|t| t.coeff.is_exact()) { Scalar::sqrt2() } else { Scalar::sqrt2().to_numeric() };
        PoissonSeries::term(n, 0, sqrt2, ParamMonomial::one(n).with_j0_exp2(j, 1), vec![0; n], trig, unit(n, j))
    };
    let mut pert = PoissonSeries::new(n, u32::MAX, None);
    for t in &model.terms {
        if t.x_exp.len() != n || t.y_exp.len() != n {
            return Err(Error::Model("exponent vector length differs from dof".into()));
        }
        let mut acc = PoissonSeries::constant(n, t.eps, t.coeff.clone(), ParamMonomial::one(n));
        for j in 0..n {
            acc = acc.mul(&root_j(j, Trig::Sin).pow(t.x_exp[j])?)?;
            acc = acc.mul(&root_j(j, Trig::Cos).pow(t.y_exp[j])?)?;
        }
        pert.accumulate(&acc)?;
    }
    Ok(ActionAngleHamiltonian { n_dof: n, omega0: model.omega0.clone(), perturbation: pert })
}

/// `binom(h/2, m)` for integer `h` (so half-integer upper arguments).
fn half_binomial(h: i32, m: u32) -> BigRational {
    let top = BigRational::new(BigInt::from(h), BigInt::from(2));
    let mut acc = BigRational::one();
    for i in 0..m {
        acc = acc * (&top - BigRational::from_integer(BigInt::from(i))) / BigRational::from_integer(BigInt::from(i + 1));
    }
    acc
}

fn is_polynomial(h: i32) -> bool {
    h >= 0 && h % 2 == 0
}

/// For one degree of freedom: the list `(m, binom(h/2, m))` for the
/// expansion of `(J0 + p)^{h/2}`.
fn expansion(h: i32, order: u32) -> Vec<(u32, BigRational)> {
    let top = if is_polynomial(h) { (h / 2) as u32 } else { order };
    (0..=top).map(|m| (m, half_binomial(h, m))).filter(|(_, c)| !c.is_zero()).collect()
}

/// Replaces `J` by `J0 + p` and expands: integer powers exactly, other
/// powers to degree `order` in p. Pure constants are dropped unless
/// `keep_constants` is set.
pub fn translate_and_expand(h: &ActionAngleHamiltonian, order: u32, keep_constants: bool) -> Result<PreparedHamiltonian> {
    let n = h.n_dof;
    let non_poly = h.perturbation.iter().any(|(k, _)| k.mono.j0_exp2.iter().any(|&e| !is_polynomial(e)));
    let p_cutoff = if non_poly { Some(order) } else { None };
    let mut pert = PoissonSeries::new(n, u32::MAX, p_cutoff);
    for (key, c) in h.perturbation.iter() {
        if key.p_degree() != 0 {
            return Err(Error::Invalid("action-angle Hamiltonian must not depend on p".into()));
        }
        // Cartesian product of the per-DOF expansions.
        let mut partial: Vec<(Vec<u32>, Vec<i32>, Scalar)> = vec![(vec![0; n], key.mono.j0_exp2.clone(), c.clone())];
        for j in 0..n {
            let terms = expansion(key.mono.j0_exp2[j], order);
            let mut next = Vec::new();
            for (p_exp, j0, coeff) in &partial {
                for (m, b) in &terms {
                    let mut p_exp = p_exp.clone();
                    p_exp[j] += m;
                    if p_cutoff.is_some_and(|pc| p_exp.iter().sum::<u32>() > pc) {
                        continue;
                    }
                    let mut j0 = j0.clone();
                    j0[j] -= 2 * *m as i32;
                    next.push((p_exp, j0, coeff.scale_big(b)));
                }
            }
            partial = next;
        }
        for (p_exp, j0, coeff) in partial {
            let mut mono = key.mono.clone();
            mono.j0_exp2 = j0;
            let nk = TermKey { eps: key.eps, mono, p_exp, trig: key.trig, wave: key.wave.clone() };
            if !keep_constants && nk.p_degree() == 0 && nk.is_average() {
                continue;
            }
            pert.insert(nk, coeff);
        }
    }
    Ok(PreparedHamiltonian { n_dof: n, omega0: h.omega0.clone(), perturbation: pert, expansion_order: order })
}

/// Model → action-angle → expanded, in one call.
pub fn prepare(model: &OscillatorModel, order: u32) -> Result<PreparedHamiltonian> {
    translate_and_expand(&to_action_angle(model)?, order, false)
}

impl PreparedHamiltonian {
    /// `ω₀ · p + perturbation`.
    pub fn full_series(&self) -> Result<PoissonSeries> {
        let lin = self.omega0.linear_term(self.n_dof)?.with_cutoffs(u32::MAX, self.perturbation.p_cutoff());
        lin.add(&self.perturbation)
    }

    /// The starting series for the Kolmogorov scheme:
    /// `(ω + Σ_{i=1}^{order} ε^i a_i) · p + perturbation` with placeholder `a_i`.
    pub fn kolmogorov_series(&self, target: &Frequencies, order: u32) -> Result<PoissonSeries> {
        match self.omega0 {
            Frequencies::Symbolic(_) => substitute_frequency_series(&self.full_series()?, order, target),
            Frequencies::Values(_) => {
                let mut s = self.perturbation.clone();
                s.accumulate(&target.linear_term(self.n_dof)?)?;
                s.accumulate(&counterterm_placeholders(self.n_dof, order))?;
                Ok(s)
            }
        }
    }
}

/// `Σ_{i=1}^{order} Σ_j ε^i a_{i,j} p_j`.
pub fn counterterm_placeholders(n: usize, order: u32) -> PoissonSeries {
    let mut s = PoissonSeries::new(n, u32::MAX, None);
    for i in 1..=order {
        for j in 0..n {
            let mut p = vec![0; n];
            p[j] = 1;
            let sym = CounterSymbol { order: i, dof: j as u32 };
            s.add_term(i, Scalar::one(), ParamMonomial::counter_symbol(n, sym), p, Trig::Cos, vec![0; n]);
        }
    }
    s
}

/// Replaces the linear term `ω₀ · p` by `(ν + Σ_{i=1}^{order} ε^i a_i) · p`,
/// where `ν` is the target frequency and `a_i` are placeholders.
pub fn substitute_frequency_series(h: &PoissonSeries, order: u32, target: &Frequencies) -> Result<PoissonSeries> {
    let n = h.n_dof();
    let mut out = h.empty_like();
    for (k, c) in h.iter() {
        if k.mono.omega0_exp == 0 {
            out.insert(k.clone(), c.clone());
            continue;
        }
        let linear = k.eps == 0 && k.p_degree() == 1 && k.is_average() && k.mono == ParamMonomial::one(n).with_omega0(1) && c.is_one();
        if !linear {
            return Err(Error::Omega0OutsideLinear);
        }
    }
    out.accumulate(&target.linear_term(n)?)?;
    out.accumulate(&counterterm_placeholders(n, order))?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freq::FreqSymbol;

    fn m(j0: i32) -> ParamMonomial {
        ParamMonomial::one(1).with_j0_exp2(0, j0)
    }

    #[test]
    fn quartic_action_angle() {
        let aa = to_action_angle(&OscillatorModel::quartic()).unwrap();
        let s = &aa.perturbation;
        assert_eq!(s.coefficient(1, &m(4), &[0], Trig::Cos, &[0]), Scalar::rational(3, 8));
        assert_eq!(s.coefficient(1, &m(4), &[0], Trig::Cos, &[2]), Scalar::rational(-1, 2));
        assert_eq!(s.coefficient(1, &m(4), &[0], Trig::Cos, &[4]), Scalar::rational(1, 8));
        assert_eq!(s.len(), 3);
    }

    #[test]
    fn half_binomial_values() {
        assert_eq!(half_binomial(3, 2), BigRational::new(3.into(), 8.into()));
        assert_eq!(half_binomial(3, 3), BigRational::new((-1).into(), 16.into()));
        assert_eq!(expansion(4, 7).len(), 3);
    }

    #[test]
    fn cubic_expansion_is_truncated() {
        let h = prepare(&OscillatorModel::cubic(), 3).unwrap();
        assert_eq!(h.perturbation.p_cutoff(), Some(3));
        assert_eq!(h.perturbation.max_p_degree(), 3);
        // −(√2/2) J^{3/2} sin q  →  p-linear coefficient −3/(2√2) √J0
        assert_eq!(h.perturbation.coefficient(1, &m(3), &[0], Trig::Sin, &[1]), Scalar::qsqrt2(0, 1, -1, 2));
        assert_eq!(h.perturbation.coefficient(1, &m(1), &[1], Trig::Sin, &[1]), Scalar::qsqrt2(0, 1, -3, 4));
    }

    #[test]
    fn substitute_rejects_stray_omega0() {
        let mut h = PoissonSeries::new(1, 9, None);
        h.add_term(1, Scalar::one(), m(2).with_omega0(1), vec![0], Trig::Cos, vec![2]);
        let t = Frequencies::Symbolic(FreqSymbol::Omega);
        assert!(matches!(substitute_frequency_series(&h, 2, &t), Err(Error::Omega0OutsideLinear)));
    }
}
