use serde::Serialize;
use serde_json::{json, Value};

use super::torus::{FrequencyRelation, TorusSolution, TrajCoord, TrajectorySeries};
use crate::error::Result;
use crate::freq::{FreqSymbol, Frequencies};
use crate::lie::{transform_coordinates, CoordinateFunction, GeneratingFunction, GeneratorKind};
use crate::series::{ParamMonomial, PoissonSeries, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Birkhoff,
    Kolmogorov,
}

/// Intermediate Hamiltonians of one Kolmogorov step.
#[derive(Clone, Debug)]
pub struct StepRecord {
    pub step: u32,
    /// `H^{(r−1)}` after substituting `a_r`.
    pub h_before: PoissonSeries,
    /// `Ĥ^{(r)} = exp(L_{χ₁}) H^{(r−1)}`.
    pub h_hat: PoissonSeries,
    /// `H^{(r)} = exp(L_{χ₂}) Ĥ^{(r)}`.
    pub h_after: PoissonSeries,
}

#[derive(Clone, Debug)]
pub struct NormalFormResult {
    pub method: Method,
    pub order: u32,
    pub n_dof: usize,
    /// Divisor frequencies: target `ω` (Kolmogorov) or `ω₀` (Birkhoff).
    pub frequencies: Frequencies,
    /// `Z^{(R)}`, truncated at order R.
    pub normal_form: PoissonSeries,
    /// Terms of order R+1 (incomplete in high p-degree; diagnostics only).
    pub remainder_head: PoissonSeries,
    pub ledger: Vec<GeneratingFunction>,
    /// Kolmogorov: `a_r` (`ω₀ = ω + Σ ε^r a_r`). Birkhoff: frequency
    /// corrections `c_r` (`ω = ω₀ + Σ ε^r c_r`). Indexed `[r − 1][dof]`.
    pub counterterms: Vec<Vec<PoissonSeries>>,
    /// `C_r` (Kolmogorov) or the angle-free constant at order r (Birkhoff).
    pub constants: Vec<PoissonSeries>,
    /// Kolmogorov only.
    pub steps: Vec<StepRecord>,
}

impl NormalFormResult {
    pub fn generator(&self, step: u32, kind: GeneratorKind) -> Option<&GeneratingFunction> {
        self.ledger.iter().find(|g| g.step == step && g.kind == kind)
    }

    pub fn frequency_relation(&self) -> FrequencyRelation {
        match self.method {
            Method::Kolmogorov => FrequencyRelation::Omega0FromOmega { a: self.counterterms.clone() },
            Method::Birkhoff => FrequencyRelation::OmegaFromOmega0 { c: self.counterterms.clone() },
        }
    }

    /// Back-transforms the torus `p̃ = 0`, `q̃ = φ` to the original variables.
    pub fn torus_solution(&self) -> Result<TorusSolution> {
        let n = self.n_dof;
        let pc = self.normal_form.p_cutoff();
        let mut q = Vec::with_capacity(n);
        let mut j = Vec::with_capacity(n);
        for i in 0..n {
            let qi = transform_coordinates(&self.ledger, &CoordinateFunction::q(n, i, self.order, pc))?;
            q.push(TrajectorySeries { coordinate: TrajCoord::Q(i), series: qi.series.at_p_zero().with_cutoffs(self.order, None) });
            let pi = transform_coordinates(&self.ledger, &CoordinateFunction::p(n, i, self.order, pc))?;
            let mut ji = pi.series.at_p_zero().with_cutoffs(self.order, None);
            ji.accumulate(&PoissonSeries::constant(n, 0, Scalar::one(), ParamMonomial::one(n).with_j0_exp2(i, 2)))?;
            j.push(TrajectorySeries { coordinate: TrajCoord::J(i), series: ji });
        }
        Ok(TorusSolution { order: self.order, q, j, frequency: self.frequency_relation() })
    }

    /// JSON document with a manifest and every computed series.
    pub fn to_json(&self, model_hash: Option<&str>) -> Value {
        let freq = match &self.frequencies {
            Frequencies::Symbolic(FreqSymbol::Omega) => json!("omega"),
            Frequencies::Symbolic(FreqSymbol::Omega0) => json!("omega0"),
            Frequencies::Values(v) => json!(v.iter().map(Scalar::to_string).collect::<Vec<_>>()),
        };
        json!({
            "manifest": {
                "method": self.method,
                "order": self.order,
                "n_dof": self.n_dof,
                "model_hash": model_hash,
                "frequencies": freq,
            },
            "normal_form": self.normal_form.to_json(),
            "remainder_head": self.remainder_head.to_json(),
            "ledger": self.ledger.iter().map(GeneratingFunction::to_record).collect::<Vec<_>>(),
            "counterterms": self.counterterms.iter().map(|v| v.iter().map(PoissonSeries::to_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "constants": self.constants.iter().map(PoissonSeries::to_json).collect::<Vec<_>>(),
        })
    }
}
