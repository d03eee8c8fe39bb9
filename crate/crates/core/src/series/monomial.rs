use std::fmt;

use serde::{Deserialize, Serialize};

use super::scalar::Scalar;

/// Placeholder for the not-yet-determined counterterm `a_{order, dof}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CounterSymbol {
    pub order: u32,
    pub dof: u32,
}

/// Product of parameter powers: `Π J0_j^{j0_exp2_j/2} · ω^{omega_exp} · ω0^{omega0_exp}`
/// times optional counterterm placeholders.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ParamMonomial {
    /// Twice the exponent of each `J0_j`, so half-integer powers stay integral.
    pub j0_exp2: Vec<i32>,
    pub omega_exp: i32,
    pub omega0_exp: i32,
    /// Sorted, with strictly positive powers.
    pub counter: Vec<(CounterSymbol, u32)>,
}

impl ParamMonomial {
    pub fn one(n_dof: usize) -> Self {
        ParamMonomial { j0_exp2: vec![0; n_dof], omega_exp: 0, omega0_exp: 0, counter: Vec::new() }
    }

    pub fn n_dof(&self) -> usize {
        self.j0_exp2.len()
    }

    pub fn is_one(&self) -> bool {
        self.j0_exp2.iter().all(|&e| e == 0) && self.omega_exp == 0 && self.omega0_exp == 0 && self.counter.is_empty()
    }

    pub fn with_j0_exp2(mut self, dof: usize, exp2: i32) -> Self {
        self.j0_exp2[dof] = exp2;
        self
    }

    pub fn with_omega(mut self, e: i32) -> Self {
        self.omega_exp = e;
        self
    }

    pub fn with_omega0(mut self, e: i32) -> Self {
        self.omega0_exp = e;
        self
    }

    pub fn counter_symbol(n_dof: usize, sym: CounterSymbol) -> Self {
        let mut m = ParamMonomial::one(n_dof);
        m.counter.push((sym, 1));
        m
    }

    pub fn mul(&self, other: &ParamMonomial) -> ParamMonomial {
        debug_assert_eq!(self.n_dof(), other.n_dof());
        let j0_exp2 = self.j0_exp2.iter().zip(&other.j0_exp2).map(|(a, b)| a + b).collect();
        let mut counter = self.counter.clone();
        for &(s, e) in &other.counter {
            match counter.binary_search_by(|(c, _)| c.cmp(&s)) {
                Ok(i) => counter[i].1 += e,
                Err(i) => counter.insert(i, (s, e)),
            }
        }
        ParamMonomial {
            j0_exp2,
            omega_exp: self.omega_exp + other.omega_exp,
            omega0_exp: self.omega0_exp + other.omega0_exp,
            counter,
        }
    }

    /// Inverse; `None` if the monomial contains counterterm placeholders.
    pub fn inverse(&self) -> Option<ParamMonomial> {
        if !self.counter.is_empty() {
            return None;
        }
        Some(ParamMonomial {
            j0_exp2: self.j0_exp2.iter().map(|e| -e).collect(),
            omega_exp: -self.omega_exp,
            omega0_exp: -self.omega0_exp,
            counter: Vec::new(),
        })
    }

    /// `∂/∂J0_dof`, returning the factor and the lowered monomial.
    pub fn d_j0(&self, dof: usize) -> Option<(Scalar, ParamMonomial)> {
        let h = self.j0_exp2[dof];
        if h == 0 {
            return None;
        }
        let mut m = self.clone();
        m.j0_exp2[dof] -= 2;
        Some((Scalar::rational(h as i64, 2), m))
    }

    pub fn counter_power(&self, sym: CounterSymbol) -> u32 {
        self.counter.iter().find(|(s, _)| *s == sym).map_or(0, |&(_, e)| e)
    }

    /// Removes `sym` entirely, returning its power.
    pub fn without_counter(&self, sym: CounterSymbol) -> (u32, ParamMonomial) {
        let mut m = self.clone();
        let pos = m.counter.iter().position(|(s, _)| *s == sym);
        match pos {
            Some(i) => {
                let (_, e) = m.counter.remove(i);
                (e, m)
            }
            None => (0, m),
        }
    }

    /// Maximum half-integer J0 exponent across degrees of freedom, as a float.
    pub fn max_j0_exponent(&self) -> f64 {
        self.j0_exp2.iter().map(|&e| e as f64 / 2.0).fold(f64::NEG_INFINITY, f64::max)
    }
}

fn fmt_half(e2: i32) -> String {
    if e2 % 2 == 0 {
        (e2 / 2).to_string()
    } else {
        format!("{e2}/2")
    }
}

impl fmt::Display for ParamMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        let single = self.n_dof() == 1;
        for (j, &e) in self.j0_exp2.iter().enumerate() {
            if e != 0 {
                let name = if single { "J0".to_string() } else { format!("J0_{}", j + 1) };
                if e == 2 {
                    parts.push(name);
                } else {
                    parts.push(format!("{name}^{}", fmt_half(e)));
                }
            }
        }
        for (name, e) in [("omega", self.omega_exp), ("omega0", self.omega0_exp)] {
            match e {
                0 => {}
                1 => parts.push(name.to_string()),
                _ => parts.push(format!("{name}^{e}")),
            }
        }
        for (s, e) in &self.counter {
            let name = if single { format!("a_{}", s.order) } else { format!("a_{}_{}", s.order, s.dof + 1) };
            if *e == 1 {
                parts.push(name);
            } else {
                parts.push(format!("{name}^{e}"));
            }
        }
        write!(f, "{}", parts.join("*"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiply_and_invert() {
        let a = ParamMonomial::one(1).with_j0_exp2(0, 3).with_omega(-1);
        let b = a.inverse().unwrap();
        assert!(a.mul(&b).is_one());
    }

    #[test]
    fn derivative_half_power() {
        let m = ParamMonomial::one(1).with_j0_exp2(0, 3);
        let (c, d) = m.d_j0(0).unwrap();
        assert_eq!(c, Scalar::rational(3, 2));
        assert_eq!(d.j0_exp2, vec![1]);
    }

    #[test]
    fn counter_merge() {
        let s = CounterSymbol { order: 2, dof: 0 };
        let m = ParamMonomial::counter_symbol(1, s);
        let mm = m.mul(&m);
        assert_eq!(mm.counter_power(s), 2);
        assert!(mm.inverse().is_none());
        assert_eq!(mm.to_string(), "a_2^2");
    }
}
