use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::freq::{FreqSymbol, Frequencies};
use crate::series::Scalar;

/// A polynomial perturbation term `ε^eps · coeff · Π x_j^{x_exp_j} y_j^{y_exp_j}`
/// in Cartesian coordinates (`y` is the momentum conjugate to `x`).
#[derive(Clone, Debug, PartialEq)]
pub struct CartesianTerm {
    pub eps: u32,
    pub coeff: Scalar,
    pub x_exp: Vec<u32>,
    pub y_exp: Vec<u32>,
}

/// `H = Σ_j (ω₀_j / 2)(y_j² + x_j²) + Σ terms`.
#[derive(Clone, Debug, PartialEq)]
pub struct OscillatorModel {
    pub name: String,
    pub n_dof: usize,
    /// Unperturbed frequencies: symbolic `ω₀` (1 DOF only) or explicit values.
    pub omega0: Frequencies,
    pub terms: Vec<CartesianTerm>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    name: Option<String>,
    dof: usize,
    omega0: toml::Value,
    #[serde(default, rename = "term")]
    terms: Vec<TermFile>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TermFile {
    eps: u32,
    coeff: toml::Value,
    #[serde(default)]
    sqrt2: bool,
    x: Vec<u32>,
    #[serde(alias = "p")]
    y: Vec<u32>,
}

fn parse_rational(s: &str) -> Result<Scalar> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: i64 = n.parse().map_err(|_| Error::Model(format!("bad rational {s:?}")))?;
    let d: i64 = d.parse().map_err(|_| Error::Model(format!("bad rational {s:?}")))?;
    if d == 0 {
        return Err(Error::Model(format!("zero denominator in {s:?}")));
    }
    Ok(Scalar::rational(n, d))
}

/// Parses `"n/d"`, an integer (both exact) or a decimal (numeric).
pub fn parse_scalar(s: &str) -> Result<Scalar> {
    parse_rational(s).or_else(|_| s.trim().parse::<f64>().map(Scalar::numeric).map_err(|_| Error::Model(format!("bad number {s:?}"))))
}

fn parse_number(v: &toml::Value) -> Result<Scalar> {
    match v {
        toml::Value::Integer(i) => Ok(Scalar::from_int(*i)),
        toml::Value::Float(f) => Ok(Scalar::numeric(*f)),
        toml::Value::String(s) => parse_rational(s),
        other => Err(Error::Model(format!("expected a number or \"n/d\", got {other}"))),
    }
}

impl OscillatorModel {
    /// `ε x⁴/4`, symbolic `ω₀`.
    pub fn quartic() -> Self {
        OscillatorModel {
            name: "quartic".into(),
            n_dof: 1,
            omega0: Frequencies::Symbolic(FreqSymbol::Omega0),
            terms: vec![CartesianTerm { eps: 1, coeff: Scalar::rational(1, 4), x_exp: vec![4], y_exp: vec![0] }],
        }
    }

    /// `−ε x³/3`, symbolic `ω₀`.
    pub fn cubic() -> Self {
        OscillatorModel {
            name: "cubic".into(),
            n_dof: 1,
            omega0: Frequencies::Symbolic(FreqSymbol::Omega0),
            terms: vec![CartesianTerm { eps: 1, coeff: Scalar::rational(-1, 3), x_exp: vec![3], y_exp: vec![0] }],
        }
    }

    pub fn catalog(name: &str) -> Result<Self> {
        match name {
            "quartic" => Ok(Self::quartic()),
            "cubic" => Ok(Self::cubic()),
            other => Err(Error::Model(format!("unknown model {other:?} (available: quartic, cubic)"))),
        }
    }

    /// Parses the TOML model-file format:
    ///
    /// ```toml
    /// name = "quartic"
    /// dof = 1
    /// omega0 = "symbolic"        # or a list: [1, "3/2", 1.618]
    /// [[term]]
    /// eps = 1
    /// coeff = "1/4"              # rational string, integer or float
    /// sqrt2 = false              # multiply coeff by √2
    /// x = [4]
    /// y = [0]
    /// ```
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let f: ModelFile = toml::from_str(text)?;
        if f.dof == 0 {
            return Err(Error::Model("dof must be positive".into()));
        }
        let omega0 = match &f.omega0 {
            toml::Value::String(s) if s == "symbolic" => Frequencies::Symbolic(FreqSymbol::Omega0),
            toml::Value::Array(a) => Frequencies::Values(a.iter().map(parse_number).collect::<Result<_>>()?),
            other => return Err(Error::Model(format!("omega0 must be \"symbolic\" or a list, got {other}"))),
        };
        omega0.check(f.dof).map_err(|e| Error::Model(e.to_string()))?;
        let mut terms = Vec::new();
        for t in f.terms {
            if t.x.len() != f.dof || t.y.len() != f.dof {
                return Err(Error::Model(format!("term exponent lists must have length {}", f.dof)));
            }
            let mut coeff = parse_number(&t.coeff)?;
            if t.sqrt2 {
                coeff = &coeff * &Scalar::sqrt2();
            }
            terms.push(CartesianTerm { eps: t.eps, coeff, x_exp: t.x, y_exp: t.y });
        }
        Ok(OscillatorModel { name: f.name.unwrap_or_else(|| "custom".into()), n_dof: f.dof, omega0, terms })
    }

    /// Converts every coefficient (and explicit ω₀ values) to floating point.
    pub fn to_numeric(&self) -> Self {
        let mut m = self.clone();
        for t in &mut m.terms {
            t.coeff = t.coeff.to_numeric();
        }
        if let Frequencies::Values(v) = &mut m.omega0 {
            v.iter_mut().for_each(|x| *x = x.to_numeric());
        }
        m
    }

    /// Stable content hash (hex SHA-256 of a canonical description).
    pub fn hash(&self) -> String {
        let mut desc = format!("dof={};omega0={:?};", self.n_dof, self.omega0);
        for t in &self.terms {
            desc.push_str(&format!("{}:{}:{:?}:{:?};", t.eps, t.coeff, t.x_exp, t.y_exp));
        }
        let digest = Sha256::digest(desc.as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Expansion order in the action shift needed for an order-`total_order`
/// normal form. The J₀-degree bounds on the generators mean that terms of
/// p-degree above `n` never reach order `n`.
pub fn required_expansion_order(_step: u32, total_order: u32) -> u32 {
    total_order
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_model_file() {
        let text = r#"
            dof = 2
            omega0 = [1, "3/2"]
            [[term]]
            eps = 1
            coeff = "-1/3"
            sqrt2 = true
            x = [3, 0]
            y = [0, 1]
        "#;
        let m = OscillatorModel::from_toml_str(text).unwrap();
        assert_eq!(m.n_dof, 2);
        assert_eq!(m.omega0, Frequencies::Values(vec![Scalar::one(), Scalar::rational(3, 2)]));
        assert_eq!(m.terms[0].coeff, Scalar::qsqrt2(0, 1, -1, 3));
    }

    #[test]
    fn rejects_symbolic_multi_dof() {
        let text = "dof = 2\nomega0 = \"symbolic\"\n";
        assert!(OscillatorModel::from_toml_str(text).is_err());
    }

    #[test]
    fn hash_distinguishes_models() {
        assert_ne!(OscillatorModel::quartic().hash(), OscillatorModel::cubic().hash());
        assert_eq!(OscillatorModel::quartic().hash(), OscillatorModel::quartic().hash());
    }
}
