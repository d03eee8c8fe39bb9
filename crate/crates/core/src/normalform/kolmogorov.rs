use super::result::{Method, NormalFormResult, StepRecord};
use crate::error::{Error, Result};
use crate::freq::{DivisorGuard, Frequencies};
use crate::lie::{
    fix_k_constant, fix_s_constant, lie_transform, solve_homological_angle, solve_homological_linear, GeneratingFunction,
    GeneratorKind,
};
use crate::prep::PreparedHamiltonian;
use crate::series::{CounterSymbol, PoissonSeries, Trig};

/// Output of one Kolmogorov step.
#[derive(Clone, Debug)]
pub struct KolmogorovStep {
    pub h: PoissonSeries,
    /// `a_r`, one entry per degree of freedom.
    pub a: Vec<PoissonSeries>,
    pub chi1: GeneratingFunction,
    pub chi2: GeneratingFunction,
    pub constant: PoissonSeries,
    pub record: StepRecord,
}

fn unit_p(n: usize, j: usize) -> Vec<u32> {
    let mut v = vec![0; n];
    v[j] = 1;
    v
}

/// `ν · v` for a vector of p/q-free series.
pub(crate) fn freq_dot(freq: &Frequencies, v: &[PoissonSeries]) -> Result<PoissonSeries> {
    let n = v.len();
    let mut out = PoissonSeries::new(n, u32::MAX, None);
    for (i, vi) in v.iter().enumerate() {
        let term = match freq {
            Frequencies::Symbolic(_) => vi.scale_mono(&crate::series::Scalar::one(), &freq.symbol_power(n, 1)),
            Frequencies::Values(w) => vi.scale(&w[i]),
        };
        out.accumulate(&term)?;
    }
    Ok(out)
}

/// `Σ_j S_j p_j` at eps order `r`.
pub(crate) fn s_dot_p(s: &[PoissonSeries], r: u32) -> Result<PoissonSeries> {
    let n = s.len();
    let mut out = PoissonSeries::new(n, u32::MAX, None);
    for (j, sj) in s.iter().enumerate() {
        let p = PoissonSeries::term(n, r, crate::series::Scalar::one(), crate::series::ParamMonomial::one(n), unit_p(n, j), Trig::Cos, vec![0; n]);
        out.accumulate(&sj.mul(&p)?)?;
    }
    Ok(out)
}

/// One step of the Kolmogorov algorithm at order `r`.
///
/// `h_prev` is in normal form through order `r − 1` and carries the
/// placeholder `a_r · p` at order `r`.
pub fn kolmogorov_step(h_prev: &PoissonSeries, r: u32, guard: &DivisorGuard) -> Result<KolmogorovStep> {
    let n = h_prev.n_dof();
    let cut = h_prev.eps_cutoff();
    // (1) counterterm from the zero-average condition on the p-linear part
    let mut h = h_prev.clone();
    let mut a = Vec::with_capacity(n);
    for j in 0..n {
        let sym = CounterSymbol { order: r, dof: j as u32 };
        let lin = h.eps_part(r).average().filter(|k| k.p_exp == unit_p(n, j));
        let mut cond = PoissonSeries::new(n, u32::MAX, None);
        for (k, c) in lin.iter() {
            let mut k = k.clone();
            k.p_exp = vec![0; n];
            cond.insert(k, c.clone());
        }
        let value = cond.solve_linear(sym)?;
        h = h.substitute_counter(sym, &value)?;
        a.push(value);
    }
    let h_before = h.clone();

    // (2) angle-only generator
    let h_r0 = h.eps_part(r).p_degree_part(0);
    let (x, avg) = solve_homological_angle(&h_r0, guard)?;
    let k_const: Vec<PoissonSeries> = fix_k_constant(&x).iter().map(|k| k.with_cutoffs(u32::MAX, None).shift_eps(-(r as i32))).collect::<Result<_>>()?;
    let mut chi1 = GeneratingFunction::new(GeneratorKind::AngleOnly, r, r, x);
    chi1.k_const = k_const;

    // (3) intermediate Hamiltonian
    let h_hat = lie_transform(&h, &chi1, cut)?;

    // (4) p-linear generator
    let h_r1 = h_hat.eps_part(r).p_degree_part(1);
    let chi2_tilde = solve_homological_linear(&h_r1, guard)?;
    let s = fix_s_constant(&chi2_tilde);
    let mut series = chi2_tilde;
    series.accumulate(&s_dot_p(&s, 0)?)?;
    let mut chi2 = GeneratingFunction::new(GeneratorKind::LinearInP, r, r, series);
    chi2.s_const = s.iter().map(|x| x.with_cutoffs(u32::MAX, None).shift_eps(-(r as i32))).collect::<Result<_>>()?;

    // (5) normalized Hamiltonian
    let h_new = lie_transform(&h_hat, &chi2, cut)?;

    let constant = avg.shift_eps(-(r as i32))?.sub(&freq_dot(&guard.freq, &chi1.k_const)?)?;
    Ok(KolmogorovStep {
        record: StepRecord { step: r, h_before, h_hat, h_after: h_new.clone() },
        h: h_new,
        a,
        chi1,
        chi2,
        constant,
    })
}

/// Runs `order` Kolmogorov steps towards the torus of frequency `guard.freq`.
pub fn kolmogorov_normalize(h: &PreparedHamiltonian, order: u32, guard: &DivisorGuard) -> Result<NormalFormResult> {
    if order == 0 {
        return Err(Error::InvalidOrder("Kolmogorov normalization requires order >= 1".into()));
    }
    let n = h.n_dof;
    guard.freq.check(n)?;
    let p_cut = h.perturbation.p_cutoff();
    let mut cur = h.kolmogorov_series(&guard.freq, order)?.with_cutoffs(order + 1, p_cut);
    let mut ledger = Vec::new();
    let mut counterterms = Vec::new();
    let mut constants = Vec::new();
    let mut steps = Vec::new();
    for r in 1..=order {
        let st = kolmogorov_step(&cur, r, guard)?;
        for chi in [st.chi1, st.chi2] {
            if !chi.series.is_empty() || chi.has_secular() {
                ledger.push(chi);
            }
        }
        counterterms.push(st.a);
        constants.push(st.constant);
        steps.push(st.record);
        cur = st.h;
    }
    let normal_form = cur.with_cutoffs(order, p_cut);
    let remainder_head = cur.eps_part(order + 1);
    Ok(NormalFormResult {
        method: Method::Kolmogorov,
        order,
        n_dof: n,
        frequencies: guard.freq.clone(),
        normal_form,
        remainder_head,
        ledger,
        counterterms,
        constants,
        steps,
    })
}
