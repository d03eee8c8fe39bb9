//! Closed-form bookkeeping of one Kolmogorov step, used only to cross-check
//! the sequential two-transform driver.
//!
//! After step `r` every piece `h_{k,i}^{(r)}` (eps order `k`, p-degree `i`)
//! is a finite combination `Σ 1/(j! s!) L₂^j L₁^s h_{k−jr−sr, i+s}^{(r−1)}`
//! of pieces of the previous Hamiltonian. For `k = m r`, `i = 1` the sum
//! over `j` runs to `m − 2` and is completed by `(m−1)/m! L₂^{m−1} h_{r,1}`.

use super::kolmogorov::{freq_dot, kolmogorov_step};
use crate::error::{Error, Result};
use crate::freq::DivisorGuard;
use crate::lie::GeneratingFunction;
use crate::prep::PreparedHamiltonian;
use crate::series::{PoissonSeries, Scalar};

/// One compared piece.
#[derive(Clone, Debug)]
pub struct RecursionCheck {
    pub step: u32,
    pub k: u32,
    pub i: u32,
    pub closed_form: PoissonSeries,
    pub sequential: PoissonSeries,
}

impl RecursionCheck {
    pub fn matches(&self) -> bool {
        self.closed_form == self.sequential
    }
}

/// Previous Hamiltonian split into eps-stripped pieces plus the two
/// eps-stripped generators of the step.
struct StepPieces<'a> {
    r: u32,
    h_prev: &'a PoissonSeries,
    chi1: GeneratingFunction,
    chi2: GeneratingFunction,
    guard: &'a DivisorGuard,
}

fn strip(chi: &GeneratingFunction) -> Result<GeneratingFunction> {
    let mut out = chi.clone();
    out.series = chi.series.with_cutoffs(u32::MAX, chi.series.p_cutoff()).shift_eps(-(chi.eps_grade as i32))?;
    out.eps_grade = 0;
    Ok(out)
}

fn factorial(n: u32) -> i64 {
    (1..=n as i64).product()
}

impl StepPieces<'_> {
    fn piece(&self, k: u32, i: u32) -> PoissonSeries {
        self.h_prev.eps_component(k).p_degree_part(i).with_cutoffs(u32::MAX, self.h_prev.p_cutoff())
    }

    fn apply(chi: &GeneratingFunction, f: &PoissonSeries, times: u32) -> Result<PoissonSeries> {
        let mut out = f.clone();
        for _ in 0..times {
            out = chi.lie_derivative(&out)?;
        }
        Ok(out)
    }

    /// `Σ_{j=0}^{j_max} Σ_s 1/(j! s!) L₂^j L₁^s h_{k−jr−sr, i+s}`.
    fn double_sum(&self, k: u32, i: u32, j_max: i64) -> Result<PoissonSeries> {
        let r = self.r;
        let mut out = self.piece(0, 0).empty_like();
        for j in 0..=j_max.max(-1) {
            let j = j as u32;
            if j * r >= k {
                break;
            }
            let s_max = (k - j * r - 1) / r;
            for s in 0..=s_max {
                let inner = Self::apply(&self.chi1, &self.piece(k - j * r - s * r, i + s), s)?;
                let term = Self::apply(&self.chi2, &inner, j)?;
                out.accumulate(&term.scale(&Scalar::rational(1, factorial(j) * factorial(s))))?;
            }
        }
        Ok(out)
    }

    fn closed_form(&self, k: u32, i: u32) -> Result<PoissonSeries> {
        let r = self.r;
        let f = ((k - 1) / r) as i64;
        match i {
            0 if k < r => Ok(self.piece(k, 0)),
            0 if k == r => self.piece(r, 0).average().sub(&freq_dot(&self.guard.freq, &self.chi1.k_const)?),
            0 if k < 2 * r => Ok(self.piece(k, 0)),
            0 if k == 2 * r => {
                let mut out = self.piece(2 * r, 0);
                out.accumulate(&self.chi1.lie_derivative(&self.piece(r, 1))?)?;
                Ok(out)
            }
            0 if !k.is_multiple_of(r) => {
                let mut out = self.double_sum(k, 0, f - 2)?;
                let e = (f - 1) as u32;
                let tail = Self::apply(&self.chi2, &self.piece(k - e * r, 0), e)?;
                out.accumulate(&tail.scale(&Scalar::rational(1, factorial(e))))?;
                Ok(out)
            }
            0 => self.double_sum(k, 0, f - 1),
            1 if k <= r => Ok(self.piece(0, 0).empty_like()),
            1 if !k.is_multiple_of(r) => self.double_sum(k, 1, f - 1),
            1 => {
                let m = k / r;
                let mut out = self.double_sum(k, 1, m as i64 - 2)?;
                let tail = Self::apply(&self.chi2, &self.piece(r, 1), m - 1)?;
                out.accumulate(&tail.scale(&Scalar::rational((m - 1) as i64, factorial(m))))?;
                Ok(out)
            }
            _ if k <= r => Ok(self.piece(k, i)),
            _ => self.double_sum(k, i, f),
        }
    }
}

/// Runs `steps` Kolmogorov steps at eps cutoff `k_max` and compares every
/// piece `h_{k,i}^{(r)}`, `1 ≤ k ≤ k_max`, `0 ≤ i ≤ i_max`, assembled from
/// the closed forms against the sequential transform output.
pub fn verify_recursion(h: &PreparedHamiltonian, steps: u32, k_max: u32, i_max: u32, guard: &DivisorGuard) -> Result<Vec<RecursionCheck>> {
    if steps == 0 || k_max < steps {
        return Err(Error::InvalidOrder(format!("need 1 <= steps <= k_max, got steps={steps}, k_max={k_max}")));
    }
    let mut cur = h.kolmogorov_series(&guard.freq, k_max)?.with_cutoffs(k_max, h.perturbation.p_cutoff());
    let mut out = Vec::new();
    for r in 1..=steps {
        let st = kolmogorov_step(&cur, r, guard)?;
        let pieces = StepPieces { r, h_prev: &st.record.h_before, chi1: strip(&st.chi1)?, chi2: strip(&st.chi2)?, guard };
        for k in 1..=k_max {
            for i in 0..=i_max {
                let sequential = st.h.eps_component(k).p_degree_part(i).with_cutoffs(u32::MAX, st.h.p_cutoff());
                out.push(RecursionCheck { step: r, k, i, closed_form: pieces.closed_form(k, i)?, sequential });
            }
        }
        cur = st.h;
    }
    Ok(out)
}
