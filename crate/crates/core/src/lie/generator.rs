use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{PoissonSeries, SeriesJson};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorKind {
    /// `χ₁ = X(q) + K·q`.
    AngleOnly,
    /// `χ₂ = χ̃₂(q, p) + S·p`, linear in p.
    LinearInP,
    /// Birkhoff generator: arbitrary p-degree plus `K·q`.
    BirkhoffMixed,
}

/// A Lie generating function `ε^r χ`.
///
/// `series` already carries the `ε^r` factor on every term (including any
/// `S·p` part); `k_const` and `s_const` are the bare coefficient vectors,
/// one p/q-free series per degree of freedom. The secular `K·q` part is
/// kept out of `series` and applied through dedicated bracket rules.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratingFunction {
    pub kind: GeneratorKind,
    pub step: u32,
    pub eps_grade: u32,
    pub series: PoissonSeries,
    pub k_const: Vec<PoissonSeries>,
    pub s_const: Vec<PoissonSeries>,
}

impl GeneratingFunction {
    pub fn new(kind: GeneratorKind, step: u32, eps_grade: u32, series: PoissonSeries) -> Self {
        GeneratingFunction { kind, step, eps_grade, series, k_const: Vec::new(), s_const: Vec::new() }
    }

    pub fn n_dof(&self) -> usize {
        self.series.n_dof()
    }

    pub fn has_secular(&self) -> bool {
        self.k_const.iter().any(|k| !k.is_empty())
    }

    /// `ε^r K_i` as series.
    pub fn scaled_k(&self) -> Result<Vec<PoissonSeries>> {
        self.k_const.iter().map(|k| k.with_cutoffs(u32::MAX, None).shift_eps(self.eps_grade as i32)).collect()
    }

    /// `L_χ f = {f, χ}`, including the secular rule `{f, K·q} = −K·∂f/∂p`.
    pub fn lie_derivative(&self, f: &PoissonSeries) -> Result<PoissonSeries> {
        let mut out = f.bracket(&self.series)?;
        for (i, k) in self.scaled_k()?.iter().enumerate() {
            if k.is_empty() {
                continue;
            }
            let d = f.d_p(i);
            if !d.is_empty() {
                out.accumulate(&d.mul(k)?.neg())?;
            }
        }
        Ok(out)
    }

    /// `−χ`: the generator of the inverse flow.
    pub fn negated(&self) -> Self {
        GeneratingFunction {
            kind: self.kind,
            step: self.step,
            eps_grade: self.eps_grade,
            series: self.series.neg(),
            k_const: self.k_const.iter().map(PoissonSeries::neg).collect(),
            s_const: self.s_const.iter().map(PoissonSeries::neg).collect(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.eps_grade == 0 {
            return Err(Error::ZeroGrade);
        }
        match self.kind {
            GeneratorKind::AngleOnly => {
                if let Some((k, _)) = self.series.iter().find(|(k, _)| k.p_degree() != 0) {
                    return Err(Error::NotAngleOnly { p_exp: k.p_exp.clone() });
                }
            }
            GeneratorKind::LinearInP => {
                if let Some((k, _)) = self.series.iter().find(|(k, _)| k.p_degree() != 1) {
                    return Err(Error::NotLinearInP { p_exp: k.p_exp.clone() });
                }
            }
            GeneratorKind::BirkhoffMixed => {}
        }
        Ok(())
    }

    pub fn to_record(&self) -> GeneratorRecord {
        GeneratorRecord {
            kind: self.kind,
            step: self.step,
            eps_grade: self.eps_grade,
            series: self.series.to_json(),
            k_const: self.k_const.iter().map(PoissonSeries::to_json).collect(),
            s_const: self.s_const.iter().map(PoissonSeries::to_json).collect(),
        }
    }

    pub fn from_record(r: &GeneratorRecord) -> Result<Self> {
        Ok(GeneratingFunction {
            kind: r.kind,
            step: r.step,
            eps_grade: r.eps_grade,
            series: PoissonSeries::from_json(&r.series)?,
            k_const: r.k_const.iter().map(PoissonSeries::from_json).collect::<Result<_>>()?,
            s_const: r.s_const.iter().map(PoissonSeries::from_json).collect::<Result<_>>()?,
        })
    }
}

/// Serialized form of a [`GeneratingFunction`].
#[derive(Serialize, Deserialize)]
pub struct GeneratorRecord {
    pub kind: GeneratorKind,
    pub step: u32,
    pub eps_grade: u32,
    pub series: SeriesJson,
    #[serde(rename = "K_const")]
    pub k_const: Vec<SeriesJson>,
    #[serde(rename = "S_const")]
    pub s_const: Vec<SeriesJson>,
}
