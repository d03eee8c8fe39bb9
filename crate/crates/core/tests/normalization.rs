//! Structural invariants of the normal forms beyond the printed examples.

mod common;

use common::same_terms;
use isokam::freq::{DivisorGuard, FreqSymbol, Frequencies};
use isokam::lie::GeneratorKind;
use isokam::normalform::{birkhoff_normalize, kolmogorov_normalize};
use isokam::prep::{prepare, to_action_angle, translate_and_expand, OscillatorModel};
use isokam::series::{Bindings, Scalar};
use isokam::Error;

fn symbolic(sym: FreqSymbol) -> DivisorGuard {
    DivisorGuard::new(Frequencies::Symbolic(sym))
}

const QUINTIC: &str = r#"
name = "quintic"
dof = 1
omega0 = "symbolic"
[[term]]
eps = 1
coeff = "1/5"
x = [5]
y = [0]
"#;

const TWO_DOF: &str = r#"
name = "coupled"
dof = 2
omega0 = [1.0, 1.6180339887498949]
[[term]]
eps = 1
coeff = "1/4"
x = [4, 0]
y = [0, 0]
[[term]]
eps = 1
coeff = "1/2"
x = [2, 2]
y = [0, 0]
"#;

#[test]
fn kolmogorov_shape_through_order() {
    for (model, order) in [(OscillatorModel::quartic(), 4), (OscillatorModel::cubic(), 3)] {
        let nf = kolmogorov_normalize(&prepare(&model, order).unwrap(), order, &symbolic(FreqSymbol::Omega)).unwrap();
        for (k, _) in nf.normal_form.iter() {
            let allowed = k.p_degree() >= 2 || (k.eps == 0 && k.p_degree() == 1) || (k.p_degree() == 0 && k.is_average());
            assert!(allowed, "{}: forbidden term {k:?}", model.name);
        }
        assert_eq!(nf.counterterms.len(), order as usize);
        assert_eq!(nf.ledger.len(), 2 * order as usize);
    }
}

#[test]
fn quintic_result_independent_of_extra_expansion() {
    let model = OscillatorModel::from_toml_str(QUINTIC).unwrap();
    let aa = to_action_angle(&model).unwrap();
    let guard = symbolic(FreqSymbol::Omega);
    let lo = kolmogorov_normalize(&translate_and_expand(&aa, 2, false).unwrap(), 2, &guard).unwrap();
    let hi = kolmogorov_normalize(&translate_and_expand(&aa, 3, false).unwrap(), 2, &guard).unwrap();
    for (a, b) in lo.counterterms.iter().zip(&hi.counterterms) {
        assert!(same_terms(&a[0], &b[0]), "{} vs {}", a[0], b[0]);
    }
    for (x, y) in lo.ledger.iter().zip(&hi.ledger) {
        assert!(same_terms(&x.series, &y.series), "step {} {:?}", x.step, x.kind);
        assert!(x.k_const.iter().zip(&y.k_const).all(|(u, v)| same_terms(u, v)));
    }
    let (sl, sh) = (lo.torus_solution().unwrap(), hi.torus_solution().unwrap());
    assert!(same_terms(&sl.q[0].series, &sh.q[0].series));
    assert!(same_terms(&sl.j[0].series, &sh.j[0].series));
    // ε² p² terms pick up {χ₁, ε p³} and legitimately differ; they only act at ε³.
    let relevant = |s: &isokam::series::PoissonSeries| s.filter(|k| k.p_degree() <= 1 || (k.p_degree() == 2 && k.eps <= 1));
    assert!(same_terms(&relevant(&lo.normal_form), &relevant(&hi.normal_form)));
}

#[test]
fn birkhoff_without_perturbation_is_trivial() {
    let model = OscillatorModel { terms: Vec::new(), ..OscillatorModel::quartic() };
    let nf = birkhoff_normalize(&prepare(&model, 2).unwrap(), 2, &symbolic(FreqSymbol::Omega0)).unwrap();
    assert!(nf.ledger.iter().all(|g| g.series.is_empty()));
    assert_eq!(nf.normal_form.len(), 1);
}

#[test]
fn two_dof_numeric_smoke() {
    let model = OscillatorModel::from_toml_str(TWO_DOF).unwrap();
    assert_eq!(model.n_dof, 2);
    let h = prepare(&model, 2).unwrap();

    let Frequencies::Values(w0) = &model.omega0 else { panic!("explicit frequencies expected") };
    let bk = birkhoff_normalize(&h, 2, &DivisorGuard::new(Frequencies::Values(w0.clone()))).unwrap();
    assert!(bk.normal_form.iter().all(|(k, _)| k.is_average()), "{}", bk.normal_form);

    let target = Frequencies::Values(vec![Scalar::numeric(1.01), Scalar::numeric(1.63)]);
    let kol = kolmogorov_normalize(&h, 2, &DivisorGuard::new(target)).unwrap();
    for (k, c) in kol.normal_form.iter() {
        let allowed = k.p_degree() >= 2 || (k.eps == 0 && k.p_degree() == 1) || (k.p_degree() == 0 && k.is_average());
        assert!(allowed || c.abs_f64() < 1e-12, "forbidden term {k:?} = {c}");
    }
    assert_eq!(kol.counterterms[0].len(), 2);

    let sol = kol.torus_solution().unwrap();
    assert_eq!(sol.n_dof(), 2);
    let b = Bindings::default().with_eps(0.01).with_j0(vec![0.1, 0.05]);
    for i in 0..2 {
        let at0 = sol.q[i].series.at_origin();
        assert!(at0.iter().all(|(_, c)| c.abs_f64() < 1e-12), "q_{i}(0) = {at0}");
        let j_at0 = sol.j[i].series.at_origin().evaluate(&b).unwrap();
        assert!((j_at0 - [0.1, 0.05][i]).abs() < 1e-14);
    }
    // The explicit counterterm form needs ω per degree of freedom.
    assert!(matches!(isokam::dynamics::FrequencyMap::new(&sol.frequency), Err(Error::SymbolicMultiDof { .. })));
}

#[test]
fn exact_resonance_is_reported() {
    let text = TWO_DOF.replace("[1.0, 1.6180339887498949]", r#"["1", "1"]"#);
    let model = OscillatorModel::from_toml_str(&text).unwrap();
    let h = prepare(&model, 2).unwrap();
    let err = birkhoff_normalize(&h, 2, &DivisorGuard::new(model.omega0.clone())).unwrap_err();
    assert!(matches!(err, Error::Resonance { .. }), "{err}");
}

#[test]
fn generator_kinds_alternate() {
    let nf = kolmogorov_normalize(&prepare(&OscillatorModel::quartic(), 3).unwrap(), 3, &symbolic(FreqSymbol::Omega)).unwrap();
    for (i, g) in nf.ledger.iter().enumerate() {
        let want = if i % 2 == 0 { GeneratorKind::AngleOnly } else { GeneratorKind::LinearInP };
        assert_eq!(g.kind, want);
        assert_eq!(g.step as usize, i / 2 + 1);
        g.validate().unwrap();
    }
}
