#![allow(dead_code)]

use isokam::series::{ParamMonomial, PoissonSeries, Scalar, TermKey, Trig};

/// Which frequency symbol carries the divisors.
#[derive(Clone, Copy)]
pub enum Div {
    Omega,
    Omega0,
}

/// One expected term `ε^eps · c · J0^(j2/2) · div^(−d) · p^p · trig(k q)`.
#[derive(Clone)]
pub struct T {
    pub eps: u32,
    pub c: Scalar,
    pub j2: i32,
    pub d: i32,
    pub p: u32,
    pub trig: Trig,
    pub k: i32,
}

impl T {
    pub fn p(mut self, p: u32) -> Self {
        self.p = p;
        self
    }
}

pub fn r(n: i64, d: i64) -> Scalar {
    Scalar::rational(n, d)
}

/// `(n/d)·√2`.
pub fn s2(n: i64, d: i64) -> Scalar {
    Scalar::qsqrt2(0, 1, n, d)
}

pub fn sin(eps: u32, c: Scalar, j2: i32, d: i32, k: i32) -> T {
    T { eps, c, j2, d, p: 0, trig: Trig::Sin, k }
}

pub fn cos(eps: u32, c: Scalar, j2: i32, d: i32, k: i32) -> T {
    T { eps, c, j2, d, p: 0, trig: Trig::Cos, k }
}

pub fn konst(eps: u32, c: Scalar, j2: i32, d: i32) -> T {
    cos(eps, c, j2, d, 0)
}

pub fn mono(div: Div, j2: i32, d: i32) -> ParamMonomial {
    let m = ParamMonomial::one(1).with_j0_exp2(0, j2);
    match div {
        Div::Omega => m.with_omega(-d),
        Div::Omega0 => m.with_omega0(-d),
    }
}

pub fn build(div: Div, terms: &[T]) -> PoissonSeries {
    let mut s = PoissonSeries::new(1, u32::MAX, None);
    for t in terms {
        s.add_term(t.eps, t.c.clone(), mono(div, t.j2, t.d), vec![t.p], t.trig, vec![t.k]);
    }
    s
}

pub fn terms(s: &PoissonSeries) -> Vec<(TermKey, Scalar)> {
    let mut v: Vec<_> = s.iter().map(|(k, c)| (k.clone(), c.clone())).collect();
    v.sort_by(|a, b| a.0.cmp(&b.0));
    v
}

/// Exact term-by-term equality, ignoring cutoffs.
pub fn same_terms(a: &PoissonSeries, b: &PoissonSeries) -> bool {
    terms(a) == terms(b)
}

pub fn assert_series(label: &str, got: &PoissonSeries, div: Div, want: &[T]) {
    let want = build(div, want);
    assert!(same_terms(got, &want), "{label}:\n  got  {got}\n  want {want}");
}

/// `#[test]` wrappers (in a nested `tests` module) for plain check functions,
/// so the checks stay callable from the acceptance runner.
#[allow(unused_macros)]
macro_rules! tests {
    ($($name:ident),* $(,)?) => {
        #[cfg(test)]
        mod tests {
            $(#[test]
            fn $name() {
                super::$name()
            })*
        }
    };
}
#[allow(unused_imports)]
pub(crate) use tests;
