use super::generator::GeneratingFunction;
use crate::error::{Error, Result};
use crate::series::{PoissonSeries, Scalar};

/// `exp(L_χ) H = Σ_j (1/j!) L_χ^j H`, truncated at `eps_cutoff`.
pub fn lie_transform(h: &PoissonSeries, chi: &GeneratingFunction, eps_cutoff: u32) -> Result<PoissonSeries> {
    if chi.eps_grade == 0 {
        return Err(Error::ZeroGrade);
    }
    let cut = eps_cutoff.min(h.eps_cutoff());
    let mut acc = h.with_cutoffs(cut, h.p_cutoff());
    let mut term = acc.clone();
    let mut j = 1i64;
    loop {
        term = chi.lie_derivative(&term)?.scale(&Scalar::rational(1, j));
        if term.is_empty() {
            break;
        }
        acc.accumulate(&term)?;
        j += 1;
    }
    Ok(acc)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coord {
    Q,
    P,
}

/// A coordinate expressed in transformed variables: an optional identity
/// part (`q_i` or `p_i`) plus a Poisson series. The angle `q_i` itself is
/// not a valid Poisson-series term, hence the split.
#[derive(Clone, Debug, PartialEq)]
pub struct CoordinateFunction {
    pub identity: Option<(Coord, usize)>,
    pub series: PoissonSeries,
}

impl CoordinateFunction {
    pub fn q(n_dof: usize, i: usize, eps_cutoff: u32, p_cutoff: Option<u32>) -> Self {
        CoordinateFunction { identity: Some((Coord::Q, i)), series: PoissonSeries::new(n_dof, eps_cutoff, p_cutoff) }
    }

    pub fn p(n_dof: usize, i: usize, eps_cutoff: u32, p_cutoff: Option<u32>) -> Self {
        CoordinateFunction { identity: Some((Coord::P, i)), series: PoissonSeries::new(n_dof, eps_cutoff, p_cutoff) }
    }

    /// `L_χ` applied to the identity part alone.
    fn identity_derivative(&self, chi: &GeneratingFunction) -> Result<PoissonSeries> {
        let cut = self.series.eps_cutoff();
        Ok(match self.identity {
            None => self.series.empty_like(),
            // {q_i, χ} = ∂χ/∂p_i ; {q_i, K·q} = 0
            Some((Coord::Q, i)) => chi.series.d_p(i).with_cutoffs(cut, self.series.p_cutoff()),
            // {p_i, χ} = −∂χ/∂q_i ; {p_i, K·q} = −K_i
            Some((Coord::P, i)) => {
                let mut d = chi.series.d_q(i).neg().with_cutoffs(cut, self.series.p_cutoff());
                if let Some(k) = chi.scaled_k()?.get(i) {
                    d.accumulate(&k.neg())?;
                }
                d
            }
        })
    }

    /// `exp(L_χ)` applied to the coordinate function.
    pub fn transform(&self, chi: &GeneratingFunction) -> Result<Self> {
        if chi.eps_grade == 0 {
            return Err(Error::ZeroGrade);
        }
        let mut first = self.identity_derivative(chi)?;
        first.accumulate(&chi.lie_derivative(&self.series)?)?;
        let mut acc = self.series.clone();
        acc.accumulate(&first)?;
        let mut term = first;
        let mut j = 2i64;
        loop {
            term = chi.lie_derivative(&term)?.scale(&Scalar::rational(1, j));
            if term.is_empty() {
                break;
            }
            acc.accumulate(&term)?;
            j += 1;
        }
        Ok(CoordinateFunction { identity: self.identity, series: acc })
    }
}

/// Applies `exp(L_χ)` for every generator in ledger order (step 1 first),
/// expressing an old coordinate through the new ones.
pub fn transform_coordinates(ledger: &[GeneratingFunction], f: &CoordinateFunction) -> Result<CoordinateFunction> {
    let mut out = f.clone();
    for chi in ledger {
        out = out.transform(chi)?;
    }
    Ok(out)
}

/// Applies the ledger to a Hamiltonian-type series.
pub fn transform_series(ledger: &[GeneratingFunction], f: &PoissonSeries, eps_cutoff: u32) -> Result<PoissonSeries> {
    let mut out = f.clone();
    for chi in ledger {
        out = lie_transform(&out, chi, eps_cutoff)?;
    }
    Ok(out)
}
