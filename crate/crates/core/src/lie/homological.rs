use crate::error::{Error, Result};
use crate::freq::DivisorGuard;
use crate::series::{PoissonSeries, TermKey, Trig};

/// Solves `{ω·p, X} + h = ⟨h⟩` termwise for any p-degree, returning `(X, ⟨h⟩)`.
///
/// `c cos(k·q) → (c/(k·ω)) sin(k·q)`, `c sin(k·q) → −(c/(k·ω)) cos(k·q)`.
pub fn solve_homological(h: &PoissonSeries, guard: &DivisorGuard) -> Result<(PoissonSeries, PoissonSeries)> {
    guard.freq.check(h.n_dof())?;
    let mut x = h.empty_like();
    let mut avg = h.empty_like();
    for (k, c) in h.iter() {
        if k.is_average() {
            avg.insert(k.clone(), c.clone());
            continue;
        }
        let (inv, m) = guard.inverse_divisor(&k.wave)?;
        let mut coeff = c * &inv;
        let trig = match k.trig {
            Trig::Cos => Trig::Sin,
            Trig::Sin => {
                coeff = -coeff;
                Trig::Cos
            }
        };
        x.insert(TermKey { eps: k.eps, mono: k.mono.mul(&m), p_exp: k.p_exp.clone(), trig, wave: k.wave.clone() }, coeff);
    }
    Ok((x, avg))
}

/// Angle-only homological equation (χ₁-type).
pub fn solve_homological_angle(h: &PoissonSeries, guard: &DivisorGuard) -> Result<(PoissonSeries, PoissonSeries)> {
    if let Some((k, _)) = h.iter().find(|(k, _)| k.p_degree() != 0) {
        return Err(Error::NotAngleOnly { p_exp: k.p_exp.clone() });
    }
    solve_homological(h, guard)
}

/// p-linear homological equation (χ₂-type); `h` must have zero average.
pub fn solve_homological_linear(h: &PoissonSeries, guard: &DivisorGuard) -> Result<PoissonSeries> {
    if let Some((k, _)) = h.iter().find(|(k, _)| k.p_degree() != 1) {
        return Err(Error::NotLinearInP { p_exp: k.p_exp.clone() });
    }
    let (x, avg) = solve_homological(h, guard)?;
    if !avg.is_empty() {
        return Err(Error::NonzeroAverage);
    }
    Ok(x)
}

/// `K_i = −∂X/∂q_i (q = 0)`: makes the p-correction of the χ₁ flow vanish at `q = 0`.
pub fn fix_k_constant(x: &PoissonSeries) -> Vec<PoissonSeries> {
    (0..x.n_dof()).map(|i| x.d_q(i).at_origin().neg()).collect()
}

/// `S_i = −∂χ̃₂/∂p_i (q = 0)`: makes the q-correction of the χ₂ flow vanish at `q = 0`.
pub fn fix_s_constant(chi2: &PoissonSeries) -> Vec<PoissonSeries> {
    (0..chi2.n_dof()).map(|i| chi2.d_p(i).at_origin().neg()).collect()
}

/// `{ν·p, X} + h − ⟨h⟩`, which must vanish for a solved equation.
pub fn homological_residual(h: &PoissonSeries, x: &PoissonSeries, guard: &DivisorGuard) -> Result<PoissonSeries> {
    let lin = guard.freq.linear_term(h.n_dof())?.with_cutoffs(h.eps_cutoff(), h.p_cutoff());
    let mut r = lin.bracket(x)?;
    r.accumulate(&h.oscillating())?;
    Ok(r)
}
