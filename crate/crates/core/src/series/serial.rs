//! JSON text format for series.
//!
//! Integers that do not fit an `i64` are written as decimal strings; both
//! forms are accepted on input.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::monomial::{CounterSymbol, ParamMonomial};
use super::poisson::{PoissonSeries, TermKey, Trig};
use super::scalar::Scalar;
use crate::error::{Error, Result};

#[derive(Serialize, Deserialize)]
pub struct SeriesJson {
    pub n_dof: usize,
    pub mode: String,
    pub eps_cutoff: u32,
    pub p_cutoff: Option<u32>,
    pub terms: Vec<TermJson>,
}

#[derive(Serialize, Deserialize)]
pub struct TermJson {
    pub eps: u32,
    pub coeff: Value,
    pub j0_exp2: Vec<i32>,
    pub omega_exp: i32,
    pub omega0_exp: i32,
    pub p_exp: Vec<u32>,
    pub trig: String,
    pub wave: Vec<i32>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub counter: Vec<CounterJson>,
}

#[derive(Serialize, Deserialize)]
pub struct CounterJson {
    pub order: u32,
    pub dof: u32,
    pub power: u32,
}

fn int_value(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(v) => Value::from(v),
        None => Value::from(n.to_string()),
    }
}

fn parse_int(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => n.as_i64().map(BigInt::from).ok_or_else(|| Error::Invalid(format!("non-integer {n}"))),
        Value::String(s) => s.parse().map_err(|_| Error::Invalid(format!("bad integer {s:?}"))),
        other => Err(Error::Invalid(format!("expected integer, got {other}"))),
    }
}

fn coeff_value(c: &Scalar) -> Value {
    match c {
        Scalar::Exact { a, b } => serde_json::json!({
            "a_num": int_value(a.numer()),
            "a_den": int_value(a.denom()),
            "b_num": int_value(b.numer()),
            "b_den": int_value(b.denom()),
        }),
        Scalar::Numeric(v) => serde_json::json!({ "value": v }),
    }
}

fn parse_coeff(v: &Value) -> Result<Scalar> {
    if let Some(x) = v.get("value") {
        return x.as_f64().map(Scalar::Numeric).ok_or_else(|| Error::Invalid("numeric coefficient must be a number".into()));
    }
    let field = |name: &str| v.get(name).ok_or_else(|| Error::Invalid(format!("coefficient missing {name}"))).and_then(parse_int);
    let rational = |n: BigInt, d: BigInt| {
        if d.is_zero() {
            Err(Error::Invalid("zero denominator".into()))
        } else {
            Ok(BigRational::new(n, d))
        }
    };
    let a = rational(field("a_num")?, field("a_den")?)?;
    let b = rational(field("b_num")?, field("b_den")?)?;
    Ok(Scalar::from_parts(a, b))
}

impl PoissonSeries {
    pub fn to_json(&self) -> SeriesJson {
        let terms = self
            .iter()
            .map(|(k, c)| TermJson {
                eps: k.eps,
                coeff: coeff_value(c),
                j0_exp2: k.mono.j0_exp2.clone(),
                omega_exp: k.mono.omega_exp,
                omega0_exp: k.mono.omega0_exp,
                p_exp: k.p_exp.clone(),
                trig: match k.trig {
                    Trig::Cos => "cos".into(),
                    Trig::Sin => "sin".into(),
                },
                wave: k.wave.clone(),
                counter: k.mono.counter.iter().map(|(s, e)| CounterJson { order: s.order, dof: s.dof, power: *e }).collect(),
            })
            .collect();
        SeriesJson {
            n_dof: self.n_dof(),
            mode: if self.is_exact() { "exact".into() } else { "numeric".into() },
            eps_cutoff: self.eps_cutoff(),
            p_cutoff: self.p_cutoff(),
            terms,
        }
    }

    pub fn from_json(j: &SeriesJson) -> Result<PoissonSeries> {
        let mut s = PoissonSeries::new(j.n_dof, j.eps_cutoff, j.p_cutoff);
        for t in &j.terms {
            if t.j0_exp2.len() != j.n_dof || t.p_exp.len() != j.n_dof || t.wave.len() != j.n_dof {
                return Err(Error::Invalid("term vector length differs from n_dof".into()));
            }
            let trig = match t.trig.as_str() {
                "cos" => Trig::Cos,
                "sin" => Trig::Sin,
                other => return Err(Error::Invalid(format!("unknown trig {other:?}"))),
            };
            let mut counter: Vec<(CounterSymbol, u32)> =
                t.counter.iter().filter(|c| c.power > 0).map(|c| (CounterSymbol { order: c.order, dof: c.dof }, c.power)).collect();
            counter.sort();
            let mono = ParamMonomial { j0_exp2: t.j0_exp2.clone(), omega_exp: t.omega_exp, omega0_exp: t.omega0_exp, counter };
            let key = TermKey { eps: t.eps, mono, p_exp: t.p_exp.clone(), trig, wave: t.wave.clone() };
            s.insert(key, parse_coeff(&t.coeff)?);
        }
        Ok(s)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("series JSON is always serializable")
    }

    pub fn from_json_str(text: &str) -> Result<PoissonSeries> {
        let j: SeriesJson = serde_json::from_str(text)?;
        PoissonSeries::from_json(&j)
    }
}
