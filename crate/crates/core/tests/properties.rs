//! Algebraic properties of the bracket, Lie transforms and serialization on
//! randomly generated exact series.

mod common;

use common::same_terms;
use isokam::lie::{lie_transform, Coord, CoordinateFunction, GeneratingFunction, GeneratorKind};
use isokam::series::{Bindings, ParamMonomial, PoissonSeries, Scalar, Trig};
use proptest::prelude::*;

pub const CUT: u32 = 4;

#[derive(Clone, Debug)]
pub struct RawTerm {
    eps: u32,
    num: i64,
    den: i64,
    sqrt2: bool,
    j2: Vec<i32>,
    omega: i32,
    p: Vec<u32>,
    sin: bool,
    wave: Vec<i32>,
}

pub fn raw_term(n: usize, eps: std::ops::RangeInclusive<u32>, p_max: u32) -> impl Strategy<Value = RawTerm> {
    (
        eps,
        (-6i64..=6).prop_filter("nonzero", |v| *v != 0),
        1i64..=4,
        any::<bool>(),
        prop::collection::vec(-1i32..=4, n),
        -2i32..=1,
        prop::collection::vec(0u32..=p_max, n),
        any::<bool>(),
        prop::collection::vec(-3i32..=3, n),
    )
        .prop_map(|(eps, num, den, sqrt2, j2, omega, p, sin, wave)| RawTerm { eps, num, den, sqrt2, j2, omega, p, sin, wave })
}

pub fn assemble(n: usize, raw: &[RawTerm]) -> PoissonSeries {
    let mut s = PoissonSeries::new(n, CUT, None);
    for t in raw {
        let c = if t.sqrt2 { Scalar::qsqrt2(t.num, t.den, 1, t.den + 1) } else { Scalar::rational(t.num, t.den) };
        let mut m = ParamMonomial::one(n).with_omega(t.omega);
        for (i, &e) in t.j2.iter().enumerate() {
            m = m.with_j0_exp2(i, e);
        }
        s.add_term(t.eps, c, m, t.p.clone(), if t.sin { Trig::Sin } else { Trig::Cos }, t.wave.clone());
    }
    s
}

pub fn series(n: usize) -> impl Strategy<Value = PoissonSeries> {
    prop::collection::vec(raw_term(n, 0..=2, 2), 0..=4).prop_map(move |raw| assemble(n, &raw))
}

pub fn dof() -> impl Strategy<Value = usize> {
    1usize..=2
}

pub fn generator(n: usize) -> impl Strategy<Value = GeneratingFunction> {
    (1u32..=2, prop::collection::vec(raw_term(n, 0..=0, 2), 1..=3), prop::collection::vec(prop::collection::vec(raw_term(n, 0..=0, 0), 0..=1), n)).prop_map(
        move |(grade, raw, k_raw)| {
            let mut raw = raw;
            raw.iter_mut().for_each(|t| t.eps = grade);
            let mut chi = GeneratingFunction::new(GeneratorKind::BirkhoffMixed, grade, grade, assemble(n, &raw));
            chi.k_const = k_raw
                .iter()
                .map(|ks| {
                    let mut ks = ks.clone();
                    ks.iter_mut().for_each(|t| t.wave = vec![0; n]);
                    ks.iter_mut().for_each(|t| t.sin = false);
                    assemble(n, &ks).with_cutoffs(u32::MAX, None)
                })
                .collect();
            chi
        },
    )
}

pub fn zero_below_cut(s: &PoissonSeries) -> bool {
    s.iter().all(|(k, _)| k.eps > CUT)
}

pub fn bracket(a: &PoissonSeries, b: &PoissonSeries) -> PoissonSeries {
    a.bracket(b).unwrap()
}

/// `{A, B}` for coordinate functions; returns `(constant part, series part)`.
pub fn coordinate_bracket(a: &CoordinateFunction, b: &CoordinateFunction) -> (i32, PoissonSeries) {
    let with_identity = |id: Option<(Coord, usize)>, s: &PoissonSeries, left: bool| -> PoissonSeries {
        match id {
            None => s.empty_like(),
            // {q_i, g} = ∂g/∂p_i, {p_i, g} = −∂g/∂q_i; reversed order flips the sign.
            Some((Coord::Q, i)) => if left { s.d_p(i) } else { s.d_p(i).neg() },
            Some((Coord::P, i)) => if left { s.d_q(i).neg() } else { s.d_q(i) },
        }
    };
    let constant = match (a.identity, b.identity) {
        (Some((Coord::Q, i)), Some((Coord::P, j))) if i == j => 1,
        (Some((Coord::P, i)), Some((Coord::Q, j))) if i == j => -1,
        _ => 0,
    };
    let mut s = with_identity(a.identity, &b.series, true);
    s.accumulate(&with_identity(b.identity, &a.series, false)).unwrap();
    s.accumulate(&bracket(&a.series, &b.series)).unwrap();
    (constant, s)
}

pub fn series_pair() -> impl Strategy<Value = (PoissonSeries, PoissonSeries)> {
    dof().prop_flat_map(|n| (series(n), series(n)))
}

pub fn series_triple() -> impl Strategy<Value = (PoissonSeries, PoissonSeries, PoissonSeries)> {
    dof().prop_flat_map(|n| (series(n), series(n), series(n)))
}

pub fn generator_and_series() -> impl Strategy<Value = (GeneratingFunction, PoissonSeries)> {
    dof().prop_flat_map(|n| (generator(n), series(n)))
}

pub fn antisymmetry(f: &PoissonSeries, g: &PoissonSeries) -> Result<(), TestCaseError> {
    let s = bracket(f, g).add(&bracket(g, f)).unwrap();
    prop_assert!(s.is_empty(), "{}", s);
    Ok(())
}

pub fn leibniz(f: &PoissonSeries, g: &PoissonSeries, h: &PoissonSeries) -> Result<(), TestCaseError> {
    let lhs = bracket(&f.mul(g).unwrap(), h);
    let rhs = f.mul(&bracket(g, h)).unwrap().add(&bracket(f, h).mul(g).unwrap()).unwrap();
    prop_assert!(zero_below_cut(&lhs.sub(&rhs).unwrap()));
    Ok(())
}

pub fn jacobi(f: &PoissonSeries, g: &PoissonSeries, h: &PoissonSeries) -> Result<(), TestCaseError> {
    let mut s = bracket(f, &bracket(g, h));
    s.accumulate(&bracket(g, &bracket(h, f))).unwrap();
    s.accumulate(&bracket(h, &bracket(f, g))).unwrap();
    prop_assert!(zero_below_cut(&s), "{}", s);
    Ok(())
}

/// Every `{Q_i, P_j}` of the transformed coordinates is canonical below the cut.
pub fn canonical(chi: &GeneratingFunction) -> Result<(), TestCaseError> {
    let n = chi.n_dof();
    let coords: Vec<CoordinateFunction> = (0..n)
        .flat_map(|i| [CoordinateFunction::q(n, i, CUT, None), CoordinateFunction::p(n, i, CUT, None)])
        .map(|c| c.transform(chi).unwrap())
        .collect();
    for a in &coords {
        for b in &coords {
            let (c, s) = coordinate_bracket(a, b);
            let want = match (a.identity, b.identity) {
                (Some((Coord::Q, i)), Some((Coord::P, j))) if i == j => 1,
                (Some((Coord::P, i)), Some((Coord::Q, j))) if i == j => -1,
                _ => 0,
            };
            prop_assert_eq!(c, want);
            prop_assert!(zero_below_cut(&s), "{:?} {:?}: {}", a.identity, b.identity, s);
        }
    }
    Ok(())
}

pub fn inverse_flow(chi: &GeneratingFunction, f: &PoissonSeries) -> Result<(), TestCaseError> {
    let forward = lie_transform(f, chi, CUT).unwrap();
    let back = lie_transform(&forward, &chi.negated(), CUT).unwrap();
    prop_assert!(same_terms(&back, f), "{} vs {}", back, f);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn bracket_is_antisymmetric((f, g) in series_pair()) {
        antisymmetry(&f, &g)?;
    }

    #[test]
    fn bracket_obeys_leibniz((f, g, h) in series_triple()) {
        leibniz(&f, &g, &h)?;
    }

    #[test]
    fn bracket_obeys_jacobi((f, g, h) in series_triple()) {
        jacobi(&f, &g, &h)?;
    }

    #[test]
    fn exact_and_numeric_agree(
        (f, g) in dof().prop_flat_map(|n| (series(n), series(n))),
        eps in 0.05f64..0.5, omega in 0.5f64..2.0, j0 in 0.1f64..1.0, p in -0.05f64..0.05, q in -3.0f64..3.0,
    ) {
        let n = f.n_dof();
        let b = Bindings::default().with_eps(eps).with_omega(omega).with_omega0(omega).with_j0(vec![j0; n]).with_p(vec![p; n]).with_q(vec![q; n]);
        let exact = bracket(&f, &g);
        let numeric = bracket(&f.to_numeric(), &g.to_numeric());
        prop_assert!(exact.to_numeric().approx_eq(&numeric, 1e-12));
        let (x, y) = (exact.evaluate(&b).unwrap(), numeric.evaluate(&b).unwrap());
        prop_assert!((x - y).abs() <= 1e-10 * x.abs().max(1.0), "{} vs {}", x, y);
    }

    #[test]
    fn json_round_trip(f in dof().prop_flat_map(series)) {
        let back = PoissonSeries::from_json_str(&f.to_json_string()).unwrap();
        prop_assert_eq!(&back, &f);
        let num = f.to_numeric();
        let back = PoissonSeries::from_json_str(&num.to_json_string()).unwrap();
        prop_assert_eq!(&back, &num);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn lie_transform_is_canonical(chi in dof().prop_flat_map(generator)) {
        canonical(&chi)?;
    }

    #[test]
    fn inverse_flow_restores_series((chi, f) in generator_and_series()) {
        inverse_flow(&chi, &f)?;
    }

    #[test]
    fn generator_record_round_trip(chi in dof().prop_flat_map(generator)) {
        let text = serde_json::to_string(&chi.to_record()).unwrap();
        let back = GeneratingFunction::from_record(&serde_json::from_str(&text).unwrap()).unwrap();
        prop_assert_eq!(back, chi);
    }
}
