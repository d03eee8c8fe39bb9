//! Exact order-3 constructions for the odd coupling `ε x³` (half-integer
//! powers of `J₀`, `√2` coefficients).

mod common;

use common::*;
use isokam::freq::{DivisorGuard, FreqSymbol, Frequencies};
use isokam::lie::GeneratorKind;
use isokam::lindstedt::{lindstedt_run, Scheme};
use isokam::normalform::{birkhoff_normalize, kolmogorov_normalize, FrequencyRelation, NormalFormResult, TorusSolution};
use isokam::prep::{prepare, to_action_angle, OscillatorModel};
use isokam::series::PoissonSeries;

fn kolmogorov(order: u32) -> NormalFormResult {
    let h = prepare(&OscillatorModel::cubic(), order).unwrap();
    kolmogorov_normalize(&h, order, &DivisorGuard::new(Frequencies::Symbolic(FreqSymbol::Omega))).unwrap()
}

fn birkhoff() -> NormalFormResult {
    let h = prepare(&OscillatorModel::cubic(), 3).unwrap();
    birkhoff_normalize(&h, 3, &DivisorGuard::new(Frequencies::Symbolic(FreqSymbol::Omega0))).unwrap()
}

fn lindstedt(scheme: Scheme) -> TorusSolution {
    let aa = to_action_angle(&OscillatorModel::cubic()).unwrap();
    lindstedt_run(&aa, scheme, 3, &scheme.default_base(&aa)).unwrap()
}

/// Orders 1 and 2 of `q`, shared by all methods (divisor symbol aside).
fn q_low() -> Vec<T> {
    vec![
        konst(1, s2(-2, 3), 1, 1),
        cos(1, s2(3, 4), 1, 1, 1),
        cos(1, s2(-1, 12), 1, 1, 3),
        sin(2, r(1, 1), 2, 2, 1),
        sin(2, r(3, 16), 2, 2, 2),
        sin(2, r(-1, 3), 2, 2, 3),
        sin(2, r(1, 8), 2, 2, 4),
        sin(2, r(-1, 144), 2, 2, 6),
    ]
}

fn j_low() -> Vec<T> {
    vec![
        konst(0, r(1, 1), 2, 0),
        sin(1, s2(1, 2), 3, 1, 1),
        sin(1, s2(-1, 6), 3, 1, 3),
        konst(2, r(5, 6), 4, 2),
        cos(2, r(-2, 3), 4, 2, 1),
        cos(2, r(-2, 3), 4, 2, 2),
        cos(2, r(2, 3), 4, 2, 3),
        cos(2, r(-1, 6), 4, 2, 4),
    ]
}

fn q_torus_fixing() -> Vec<T> {
    let mut v = q_low();
    v.extend([
        konst(3, s2(-38, 81), 3, 3),
        cos(3, s2(1, 2), 3, 3, 1),
        cos(3, s2(-1, 4), 3, 3, 2),
        cos(3, s2(145, 288), 3, 3, 3),
        cos(3, s2(-1, 3), 3, 3, 4),
        cos(3, s2(1, 32), 3, 3, 5),
        cos(3, s2(1, 36), 3, 3, 6),
        cos(3, s2(-1, 96), 3, 3, 7),
        cos(3, s2(1, 2592), 3, 3, 9),
    ]);
    v
}

fn j_torus_fixing() -> Vec<T> {
    let mut v = j_low();
    v.extend([
        sin(3, s2(7, 8), 5, 3, 1),
        sin(3, s2(-8, 9), 5, 3, 2),
        sin(3, s2(13, 16), 5, 3, 3),
        sin(3, s2(-4, 9), 5, 3, 4),
        sin(3, s2(7, 144), 5, 3, 5),
    ]);
    v
}

fn q_birkhoff() -> Vec<T> {
    let mut v = q_low();
    v.extend([
        konst(3, s2(-83, 81), 3, 3),
        cos(3, s2(9, 8), 3, 3, 1),
        cos(3, s2(-1, 4), 3, 3, 2),
        cos(3, s2(125, 288), 3, 3, 3),
        cos(3, s2(-1, 3), 3, 3, 4),
        cos(3, s2(1, 32), 3, 3, 5),
        cos(3, s2(1, 36), 3, 3, 6),
        cos(3, s2(-1, 96), 3, 3, 7),
        cos(3, s2(1, 2592), 3, 3, 9),
    ]);
    v
}

fn j_birkhoff() -> Vec<T> {
    let mut v = j_low();
    v.extend([
        sin(3, s2(31, 24), 5, 3, 1),
        sin(3, s2(-8, 9), 5, 3, 2),
        sin(3, s2(97, 144), 5, 3, 3),
        sin(3, s2(-4, 9), 5, 3, 4),
        sin(3, s2(7, 144), 5, 3, 5),
    ]);
    v
}

fn relation_list(rel: &FrequencyRelation) -> Vec<PoissonSeries> {
    match rel {
        FrequencyRelation::Omega0FromOmega { a } => a.iter().map(|v| v[0].clone()).collect(),
        FrequencyRelation::OmegaFromOmega0 { c } => c.iter().map(|v| v[0].clone()).collect(),
    }
}

pub fn kolmogorov_counterterms_and_generators() {
    let nf = kolmogorov(3);
    let a: Vec<_> = nf.counterterms.iter().map(|v| v[0].clone()).collect();
    assert!(a[0].is_empty() && a[2].is_empty(), "a1 = {}, a3 = {}", a[0], a[2]);
    assert_series("a2", &a[1], Div::Omega, &[konst(0, r(5, 6), 2, 1)]);

    let chi11 = nf.generator(1, GeneratorKind::AngleOnly).unwrap();
    assert_series("X1", &chi11.series, Div::Omega, &[cos(1, s2(1, 2), 3, 1, 1), cos(1, s2(-1, 18), 3, 1, 3)]);
    assert!(chi11.k_const[0].is_empty());

    let chi21 = nf.generator(1, GeneratorKind::LinearInP).unwrap();
    assert_series(
        "chi2_1",
        &chi21.series,
        Div::Omega,
        &[konst(1, s2(-2, 3), 1, 1).p(1), cos(1, s2(3, 4), 1, 1, 1).p(1), cos(1, s2(-1, 12), 1, 1, 3).p(1)],
    );
    assert_series("S1", &chi21.s_const[0], Div::Omega, &[konst(0, s2(-2, 3), 1, 1)]);

    let chi12 = nf.generator(2, GeneratorKind::AngleOnly).unwrap();
    assert_series("chi1_2", &chi12.series, Div::Omega, &[sin(2, r(5, 16), 4, 2, 2), sin(2, r(-1, 16), 4, 2, 4), sin(2, r(1, 144), 4, 2, 6)]);
    assert_series("K2", &chi12.k_const[0], Div::Omega, &[konst(0, r(-5, 12), 4, 2)]);

    let chi22 = nf.generator(2, GeneratorKind::LinearInP).unwrap();
    assert_series(
        "chi2_2",
        &chi22.series,
        Div::Omega,
        &[sin(2, r(1, 2), 2, 2, 1).p(1), sin(2, r(13, 32), 2, 2, 2).p(1), sin(2, r(-1, 6), 2, 2, 3).p(1), sin(2, r(1, 288), 2, 2, 6).p(1)],
    );

    let chi13 = nf.generator(3, GeneratorKind::AngleOnly).unwrap();
    assert_series(
        "chi1_3",
        &chi13.series,
        Div::Omega,
        &[
            cos(3, s2(49, 192), 5, 3, 1),
            cos(3, s2(-5, 12), 5, 3, 2),
            cos(3, s2(43, 864), 5, 3, 3),
            cos(3, s2(1, 6), 5, 3, 4),
            cos(3, s2(-29, 480), 5, 3, 5),
            cos(3, s2(-1, 36), 5, 3, 6),
            cos(3, s2(7, 384), 5, 3, 7),
            cos(3, s2(-11, 10368), 5, 3, 9),
        ],
    );

    let chi23 = nf.generator(3, GeneratorKind::LinearInP).unwrap();
    assert_series(
        "chi2_3",
        &chi23.series,
        Div::Omega,
        &[
            konst(3, s2(-107, 324), 3, 3).p(1),
            cos(3, s2(295, 384), 3, 3, 1).p(1),
            cos(3, s2(-47, 72), 3, 3, 2).p(1),
            cos(3, s2(133, 576), 3, 3, 3).p(1),
            cos(3, s2(-1, 36), 3, 3, 4).p(1),
            cos(3, s2(13, 576), 3, 3, 5).p(1),
            cos(3, s2(-1, 72), 3, 3, 6).p(1),
            cos(3, s2(7, 2304), 3, 3, 7).p(1),
            cos(3, s2(-1, 20736), 3, 3, 9).p(1),
        ],
    );
}

pub fn first_order_normal_form_terms() {
    let nf = kolmogorov(3);
    let z1 = nf.normal_form.eps_part(1);
    assert_series(
        "Z1",
        &z1,
        Div::Omega,
        &[
            sin(1, s2(-3, 16), -1, 0, 1).p(2),
            sin(1, s2(1, 16), -1, 0, 3).p(2),
            sin(1, s2(1, 32), -3, 0, 1).p(3),
            sin(1, s2(-1, 96), -3, 0, 3).p(3),
        ],
    );
    assert!(nf.normal_form.iter().all(|(k, _)| k.eps == 0 || k.p_degree() >= 2));
}

pub fn torus_fixing_solutions() {
    let kol = kolmogorov(3).torus_solution().unwrap();
    let lk = lindstedt(Scheme::K);
    for sol in [&kol, &lk] {
        assert_series("q", &sol.q[0].series, Div::Omega, &q_torus_fixing());
        assert_series("J", &sol.j[0].series, Div::Omega, &j_torus_fixing());
        let a = relation_list(&sol.frequency);
        assert!(a[0].is_empty() && a[2].is_empty());
        assert_series("a2", &a[1], Div::Omega, &[konst(0, r(5, 6), 2, 1)]);
    }
    assert!(same_terms(&kol.q[0].series, &lk.q[0].series));
    assert!(same_terms(&kol.j[0].series, &lk.j[0].series));
}

pub fn birkhoff_solution_and_scheme_b() {
    let bk = birkhoff().torus_solution().unwrap();
    let lb = lindstedt(Scheme::B);
    for sol in [&bk, &lb] {
        assert_series("q", &sol.q[0].series, Div::Omega0, &q_birkhoff());
        assert_series("J", &sol.j[0].series, Div::Omega0, &j_birkhoff());
        let c = relation_list(&sol.frequency);
        assert!(c[0].is_empty() && c[2].is_empty());
        assert_series("c2", &c[1], Div::Omega0, &[konst(0, r(-5, 6), 2, 1)]);
    }
}

pub fn birkhoff_diverges_from_kolmogorov_at_third_order() {
    let bk = birkhoff().torus_solution().unwrap();
    let kol = kolmogorov(3).torus_solution().unwrap();
    let third = |s: &PoissonSeries| s.eps_component(3).iter().map(|(k, c)| (k.wave.clone(), k.trig, c.clone())).collect::<Vec<_>>();
    assert_eq!(third(&bk.q[0].series).len(), third(&kol.q[0].series).len());
    assert_ne!(third(&bk.q[0].series), third(&kol.q[0].series));
    assert_ne!(third(&bk.j[0].series), third(&kol.j[0].series));
    // Orders below three agree once divisors are identified.
    for k in 1..=2 {
        let strip = |s: &PoissonSeries| s.eps_component(k).iter().map(|(key, c)| (key.wave.clone(), key.trig, key.mono.j0_exp2.clone(), c.clone())).collect::<Vec<_>>();
        assert_eq!(strip(&bk.q[0].series), strip(&kol.q[0].series));
    }
}

pub fn initial_conditions_through_order_three() {
    let solutions = [birkhoff().torus_solution().unwrap(), kolmogorov(3).torus_solution().unwrap(), lindstedt(Scheme::B), lindstedt(Scheme::K)];
    for sol in &solutions {
        assert!(sol.q[0].series.at_origin().is_empty(), "q(0) = {}", sol.q[0].series.at_origin());
        assert_series("J(0)", &sol.j[0].series.at_origin(), Div::Omega, &[konst(0, r(1, 1), 2, 0)]);
    }
}

pub fn generator_j0_degree_bounds() {
    // For an odd coupling of degree k = 3: χ₁^(n) ~ J₀^((n+2)/2), χ₂^(n) ~ J₀^(n/2).
    for n in 1..=3u32 {
        let nf = kolmogorov(n);
        for step in 1..=n {
            let max_j0 = |s: &PoissonSeries| s.iter().map(|(k, _)| k.mono.max_j0_exponent()).fold(f64::NEG_INFINITY, f64::max);
            let chi1 = nf.generator(step, GeneratorKind::AngleOnly).unwrap();
            let chi2 = nf.generator(step, GeneratorKind::LinearInP).unwrap();
            let bound1 = (step as f64 + 2.0) / 2.0;
            let bound2 = step as f64 / 2.0;
            assert!(max_j0(&chi1.series) <= bound1, "n={n} step={step}: χ1 {}", chi1.series);
            assert!(chi1.k_const.iter().all(|k| max_j0(k) <= bound1));
            assert!(max_j0(&chi2.series) <= bound2, "n={n} step={step}: χ2 {}", chi2.series);
            assert!(chi2.s_const.iter().all(|s| max_j0(s) <= bound2));
            // The bounds are attained.
            assert_eq!(max_j0(&chi1.series), bound1);
            assert_eq!(max_j0(&chi2.series), bound2);
        }
    }
}

common::tests!(kolmogorov_counterterms_and_generators, first_order_normal_form_terms, torus_fixing_solutions, birkhoff_solution_and_scheme_b, birkhoff_diverges_from_kolmogorov_at_third_order, initial_conditions_through_order_three, generator_j0_degree_bounds);
