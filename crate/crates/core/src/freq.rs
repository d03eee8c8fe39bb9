//! Frequency vectors: a symbolic `ω`/`ω₀` (one degree of freedom) or explicit values.

use crate::error::{Error, Result};
use crate::series::{wave_norm, Bindings, ParamMonomial, PoissonSeries, Scalar, Trig};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FreqSymbol {
    /// The fixed (target) frequency `ω`.
    Omega,
    /// The unperturbed frequency `ω₀`.
    Omega0,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Frequencies {
    Symbolic(FreqSymbol),
    Values(Vec<Scalar>),
}

impl Frequencies {
    pub fn values_f64(v: &[f64]) -> Self {
        Frequencies::Values(v.iter().map(|&x| Scalar::numeric(x)).collect())
    }

    pub fn is_symbolic(&self) -> bool {
        matches!(self, Frequencies::Symbolic(_))
    }

    /// Fails unless the frequencies can be used with `n_dof` degrees of freedom.
    pub fn check(&self, n_dof: usize) -> Result<()> {
        match self {
            Frequencies::Symbolic(_) if n_dof != 1 => Err(Error::SymbolicMultiDof { n_dof }),
            Frequencies::Values(v) if v.len() != n_dof => Err(Error::DofMismatch { left: v.len(), right: n_dof }),
            _ => Ok(()),
        }
    }

    /// The monomial carrying the symbol to power `e` (identity for explicit values).
    pub fn symbol_power(&self, n_dof: usize, e: i32) -> ParamMonomial {
        let m = ParamMonomial::one(n_dof);
        match self {
            Frequencies::Symbolic(FreqSymbol::Omega) => m.with_omega(e),
            Frequencies::Symbolic(FreqSymbol::Omega0) => m.with_omega0(e),
            Frequencies::Values(_) => m,
        }
    }

    /// `ν · p` as a series.
    pub fn linear_term(&self, n_dof: usize) -> Result<PoissonSeries> {
        self.check(n_dof)?;
        let mut s = PoissonSeries::new(n_dof, u32::MAX, None);
        for j in 0..n_dof {
            let mut p = vec![0; n_dof];
            p[j] = 1;
            let (c, m) = match self {
                Frequencies::Symbolic(_) => (Scalar::one(), self.symbol_power(n_dof, 1)),
                Frequencies::Values(v) => (v[j].clone(), ParamMonomial::one(n_dof)),
            };
            s.add_term(0, c, m, p, Trig::Cos, vec![0; n_dof]);
        }
        Ok(s)
    }

    /// `k · ν` as coefficient times monomial.
    pub fn dot(&self, k: &[i32]) -> Result<(Scalar, ParamMonomial)> {
        let n = k.len();
        self.check(n)?;
        Ok(match self {
            Frequencies::Symbolic(_) => (Scalar::from_int(k[0] as i64), self.symbol_power(n, 1)),
            Frequencies::Values(v) => {
                let mut acc = Scalar::zero();
                for (ki, vi) in k.iter().zip(v) {
                    acc = &acc + &vi.scale_int(*ki as i64);
                }
                (acc, ParamMonomial::one(n))
            }
        })
    }

    /// Numerical values given bindings for the symbols.
    pub fn evaluate(&self, n_dof: usize, b: &Bindings) -> Result<Vec<f64>> {
        self.check(n_dof)?;
        Ok(match self {
            Frequencies::Symbolic(FreqSymbol::Omega) => vec![b.omega.ok_or(Error::Unbound("omega"))?],
            Frequencies::Symbolic(FreqSymbol::Omega0) => vec![b.omega0.ok_or(Error::Unbound("omega0"))?],
            Frequencies::Values(v) => v.iter().map(Scalar::to_f64).collect(),
        })
    }

    fn magnitude(&self) -> f64 {
        match self {
            Frequencies::Symbolic(_) => 1.0,
            Frequencies::Values(v) => v.iter().map(|x| x.to_f64().powi(2)).sum::<f64>().sqrt(),
        }
    }
}

/// Safeguards for dividing by `k · ω`.
#[derive(Clone, Debug, PartialEq)]
pub struct DivisorGuard {
    pub freq: Frequencies,
    /// Minimum accepted `|k · ω|` for explicit frequency values.
    pub min_divisor: f64,
    /// Maximum accepted `|k|₁`; `None` disables the cap.
    pub max_wave: Option<u32>,
}

impl DivisorGuard {
    /// Default guard: `min_divisor = 1e-12 |ω|`, no wave cap.
    pub fn new(freq: Frequencies) -> Self {
        let min_divisor = 1e-12 * freq.magnitude();
        DivisorGuard { freq, min_divisor, max_wave: None }
    }

    /// Sets the wave cap to `2 · max_input_wave · order`.
    pub fn with_default_cap(mut self, max_input_wave: u32, order: u32) -> Self {
        self.max_wave = Some((2 * max_input_wave * order).max(1));
        self
    }

    /// `1 / (k · ω)` as coefficient times monomial.
    pub fn inverse_divisor(&self, k: &[i32]) -> Result<(Scalar, ParamMonomial)> {
        if let Some(cap) = self.max_wave {
            if wave_norm(k) > cap {
                return Err(Error::WaveCap { wave: k.to_vec(), cap });
            }
        }
        let (c, m) = self.freq.dot(k)?;
        if c.is_exact() && c.is_zero() {
            return Err(Error::Resonance { wave: k.to_vec() });
        }
        if !self.freq.is_symbolic() && c.abs_f64() < self.min_divisor {
            return Err(Error::SmallDivisor { wave: k.to_vec(), divisor: c.abs_f64() });
        }
        let inv = c.inverse().ok_or_else(|| Error::SmallDivisor { wave: k.to_vec(), divisor: c.abs_f64() })?;
        Ok((inv, m.inverse().expect("frequency monomial has no placeholders")))
    }
}
