use super::kolmogorov::s_dot_p;
use super::result::{Method, NormalFormResult};
use crate::error::{Error, Result};
use crate::freq::DivisorGuard;
use crate::lie::{lie_transform, solve_homological, transform_coordinates, CoordinateFunction, GeneratingFunction, GeneratorKind};
use crate::prep::PreparedHamiltonian;
use crate::series::PoissonSeries;

/// Birkhoff normalization with divisors `k · ω₀` (`guard.freq`).
///
/// Each step removes all angle dependence at order n with a single mixed
/// generator `X + K·q + S·p`. The constants are chosen so that the composed
/// transformation maps the origin to the origin through order n; at step 1
/// this is `K = −∂X/∂q(0,0)`, `S = −∂X/∂p(0,0)`, and at later steps the
/// order-n displacement of the origin by the earlier generators is
/// subtracted as well.
pub fn birkhoff_normalize(h: &PreparedHamiltonian, order: u32, guard: &DivisorGuard) -> Result<NormalFormResult> {
    if order == 0 {
        return Err(Error::InvalidOrder("Birkhoff normalization requires order >= 1".into()));
    }
    let n = h.n_dof;
    guard.freq.check(n)?;
    let p_cut = h.perturbation.p_cutoff();
    let mut cur = h.full_series()?.with_cutoffs(order + 1, p_cut);
    let mut ledger: Vec<GeneratingFunction> = Vec::new();
    for r in 1..=order {
        let f = cur.eps_part(r);
        let (x, _avg) = solve_homological(&f.oscillating(), guard)?;
        let mut k_const = Vec::with_capacity(n);
        let mut s_const = Vec::with_capacity(n);
        for i in 0..n {
            let gq = transform_coordinates(&ledger, &CoordinateFunction::q(n, i, r, p_cut))?.series.at_origin().eps_part(r);
            let gp = transform_coordinates(&ledger, &CoordinateFunction::p(n, i, r, p_cut))?.series.at_origin().eps_part(r);
            let s = x.d_p(i).at_origin().add(&gq)?.neg();
            let k = gp.sub(&x.d_q(i).at_origin())?;
            s_const.push(s.with_cutoffs(u32::MAX, None).shift_eps(-(r as i32))?);
            k_const.push(k.with_cutoffs(u32::MAX, None).shift_eps(-(r as i32))?);
        }
        let mut series = x;
        series.accumulate(&s_dot_p(&s_const, r)?)?;
        let mut chi = GeneratingFunction::new(GeneratorKind::BirkhoffMixed, r, r, series);
        chi.k_const = k_const;
        chi.s_const = s_const;
        if chi.series.is_empty() && !chi.has_secular() {
            continue;
        }
        cur = lie_transform(&cur, &chi, order + 1)?;
        ledger.push(chi);
    }
    let normal_form = cur.with_cutoffs(order, p_cut);
    let mut counterterms = Vec::new();
    let mut constants = Vec::new();
    for r in 1..=order {
        let part = normal_form.eps_component(r);
        counterterms.push((0..n).map(|j| p_linear_average(&part, j)).collect());
        constants.push(part.average().p_degree_part(0));
    }
    Ok(NormalFormResult {
        method: Method::Birkhoff,
        order,
        n_dof: n,
        frequencies: guard.freq.clone(),
        remainder_head: cur.eps_part(order + 1),
        normal_form,
        ledger,
        counterterms,
        constants,
        steps: Vec::new(),
    })
}

/// Coefficient series of `p_j` in the angle average.
fn p_linear_average(s: &PoissonSeries, j: usize) -> PoissonSeries {
    let n = s.n_dof();
    let mut out = PoissonSeries::new(n, u32::MAX, None);
    for (k, c) in s.average().iter() {
        if k.p_degree() == 1 && k.p_exp[j] == 1 {
            let mut k = k.clone();
            k.p_exp = vec![0; n];
            out.insert(k, c.clone());
        }
    }
    out
}
