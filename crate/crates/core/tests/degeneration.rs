use rug::{Float, Rational};
use zerolocus::degeneration::{
    evaluate_period, grading_decomposition_residual, grading_numeric, limit_data, limit_grading, puncture_zero_locus,
    sector_independence_check, validate_admissibility, xi_obstruction, LimitConfig, PunctureKind,
};
use zerolocus::fixtures::{basis_vector, combo, fix_a, fix_a_puncture, fix_b, fix_b_trivial, fix_c, fix_d, unit};
use zerolocus::interior::numeric_filtration;
use zerolocus::{Error, ExactMatrix, Field, NumericScalar, Ring, Scalar, Subspace};

fn z(prec: u32, x: f64, y: f64) -> NumericScalar {
    NumericScalar::from_f64(prec, x, y)
}

#[test]
fn fix_b_admissible() {
    let a = validate_admissibility(&fix_b()).unwrap();
    let e2 = Subspace::span(3, &[basis_vector(3, 2)], &());
    assert_eq!(a.relative.m.get(-2), e2);
    assert_eq!(a.relative.m.get(-1), e2);
    assert!(a.relative.m.get(0).is_full());
}

#[test]
fn fix_d_not_admissible() {
    assert!(matches!(validate_admissibility(&fix_d()), Err(Error::NonAdmissible(_))));
}

#[test]
fn trivial_monodromy_keeps_w() {
    let g = fix_a_puncture();
    let a = validate_admissibility(&g).unwrap();
    assert_eq!(a.relative.m, g.shape().weight());
}

#[test]
fn fix_b_limit_data() {
    let d = limit_data(&fix_b()).unwrap();
    assert!(d.delta.is_zero());
    assert_eq!(d.y_hat_m.piece(0), Subspace::span(3, &[basis_vector(3, 0), basis_vector(3, 1)], &()));
    assert_eq!(d.y_hat_m.piece(-2), Subspace::span(3, &[basis_vector(3, 2)], &()));
    let shape = fix_b().shape().clone();
    assert_eq!(shape.lift_of(d.y_hat.matrix()), basis_vector(3, 0));
    assert_eq!(d.y_hat, d.y_infinity);
    let fo = Subspace::span(3, &[basis_vector(3, 0), combo(3, &[(1, Scalar::one()), (2, Scalar::i())])], &());
    assert_eq!(d.f_o.get(0), fo);
    assert!(d.h_operator.is_real());
}

#[test]
fn fix_c_limit_data() {
    let g = fix_c();
    let d = limit_data(&g).unwrap();
    assert_eq!(d.delta, unit(3, 2, 0));
    assert_eq!(g.shape().lift_of(d.y_hat.matrix()), basis_vector(3, 0));
    let complex_lift = combo(3, &[(0, Scalar::one()), (2, Scalar::i())]);
    assert_eq!(g.shape().lift_of(d.y_infinity.matrix()), complex_lift);
    assert_eq!(d.f_hat.get(0), Subspace::span(3, &[basis_vector(3, 0), basis_vector(3, 1)], &()));
}

#[test]
fn trivial_monodromy_limit_data() {
    let g = fix_a_puncture();
    let d = limit_data(&g).unwrap();
    assert!(d.h_operator.is_zero());
    assert_eq!(d.f_o, d.f_hat);
    assert_eq!(d.y_hat, d.y_infinity);
}

#[test]
fn fix_b_period() {
    let prec = 128;
    let y = 1.5;
    let f = evaluate_period(&fix_b(), &z(prec, 0.0, y)).unwrap();
    let s = (-2.0 * std::f64::consts::PI * y).exp();
    let v1 = vec![NumericScalar::from_f64(prec, 1.0, 0.0), NumericScalar::from_f64(prec, 0.0, 0.0), NumericScalar::from_f64(prec, s, 0.0)];
    let v2 = vec![NumericScalar::from_f64(prec, 0.0, 0.0), NumericScalar::from_f64(prec, 1.0, 0.0), NumericScalar::from_f64(prec, 0.0, y)];
    // s is only known to double precision here
    let f0 = f.get(0);
    for v in [v1, v2] {
        let r = f0.residual(&v);
        assert!(r.iter().all(|x| x.magnitude() < 1e-14), "{r:?}");
    }
}

#[test]
fn untwisted_orbit_and_monodromy_shift() {
    let prec = 128;
    let g = fix_b_trivial();
    let zz = z(prec, 0.2, 0.9);
    let f = evaluate_period(&g, &zz).unwrap();
    let orbit = numeric_filtration(g.f_infinity(), prec).image(&g.exp_zn(&zz));
    assert_eq!(f.get(0).dim(), orbit.get(0).dim());
    assert!(f.get(0).contains_subspace(&orbit.get(0)));
    let one = NumericScalar::from_f64(prec, 1.0, 0.0);
    let shifted = evaluate_period(&fix_b(), &zz.plus(&one)).unwrap();
    let base = evaluate_period(&fix_b(), &zz).unwrap();
    let en = fix_b().monodromy().exp_nilpotent().unwrap().to_numeric(prec);
    assert!(shifted.get(0).contains_subspace(&base.image(&en).get(0)));
}

#[test]
fn fix_b_grading_tends_to_e0() {
    let g = fix_b();
    let mut last = f64::INFINITY;
    for y in [1.0, 2.0, 4.0] {
        let (_, t, _) = grading_numeric(&g, &z(128, 0.0, y)).unwrap();
        let size = t.iter().map(|c| c.magnitude()).fold(0.0, f64::max);
        assert!(size < last);
        last = size;
    }
    assert!(last < 1e-10);
}

#[test]
fn trivial_germ_grading_is_constant() {
    let g = fix_b_trivial();
    for (x, y) in [(0.0, 0.5), (0.3, 2.0)] {
        let (_, t, _) = grading_numeric(&g, &z(128, x, y)).unwrap();
        assert!(t.iter().all(|c| c.magnitude() < 1e-30));
    }
}

#[test]
fn puncture_matches_interior() {
    // with N = 0 the period map is the interior germ at s = exp(2πiz)
    let p = fix_a_puncture();
    let i = fix_a();
    let zz = z(128, 0.1, 0.3);
    let (_, t, _) = grading_numeric(&p, &zz).unwrap();
    let s = zerolocus::degeneration::puncture_coordinate(&zz);
    let l = i.lift_at_numeric(&s).unwrap();
    for (a, b) in t.iter().zip(&l.coordinates) {
        assert!(a.minus(b).magnitude() < 1e-30);
    }
}

#[test]
fn fix_b_limit_is_exact() {
    let g = fix_b();
    let d = limit_data(&g).unwrap();
    let l = limit_grading(&g, &d, &LimitConfig::default()).unwrap();
    assert_eq!(l.exact, Some(vec![Scalar::zero(), Scalar::zero()]));
    assert!(l.coordinates.iter().all(|c| c.to_f64().abs() < 1e-20));
    assert!(xi_obstruction(&g, &d, &l).is_zero());
}

#[test]
fn fix_c_limit_and_obstruction() {
    let g = fix_c();
    let d = limit_data(&g).unwrap();
    let l = limit_grading(&g, &d, &LimitConfig::default()).unwrap();
    assert!(l.exact.is_none());
    assert!(l.error < 1e-10, "{}", l.error);
    assert!(l.coordinates.iter().all(|c| c.to_f64().abs() < 1e-10));
    let ob = xi_obstruction(&g, &d, &l);
    assert!(!ob.is_zero());
    assert!((ob.norm() - 1.0).abs() < 1e-10);
}

#[test]
fn sectors_agree() {
    let config = LimitConfig::default();
    for (g, x2) in [(fix_b(), 0.3), (fix_c(), 0.5)] {
        let d = limit_data(&g).unwrap();
        let r = sector_independence_check(&g, &d, 0.0, x2, &config).unwrap();
        assert!(r.agrees && r.difference < 1e-10, "{} {:?}", g.name, r);
    }
    let g = fix_a_puncture();
    let d = limit_data(&g).unwrap();
    let r = sector_independence_check(&g, &d, 0.0, 0.4, &config).unwrap();
    assert_eq!(r.difference, 0.0);
}

#[test]
fn classification() {
    let config = LimitConfig::default();
    let r = Rational::from((1, 4));
    let c = puncture_zero_locus(&fix_b(), &r, &config).unwrap();
    assert_eq!(c.kind, PunctureKind::NoAccumulation(vec![]));
    assert_eq!(puncture_zero_locus(&fix_b_trivial(), &r, &config).unwrap().kind, PunctureKind::WholeDisk);
    assert!(matches!(puncture_zero_locus(&fix_d(), &r, &config).unwrap().kind, PunctureKind::NonAdmissible(_)));
    let c = puncture_zero_locus(&fix_c(), &r, &config).unwrap();
    assert_eq!(c.kind, PunctureKind::NoAccumulation(vec![]));
    assert_eq!(c.diagnostics.y_ddag_integral, Some(true));
}

#[test]
fn whole_disk_has_zero_class_along_samples() {
    let g = fix_b_trivial();
    for k in 0..20 {
        let x = k as f64 / 20.0;
        let y = 0.3 + 0.1 * k as f64;
        let (_, t, _) = grading_numeric(&g, &z(128, x, y)).unwrap();
        assert!(t.iter().all(|c| c.magnitude() < 1e-30));
    }
}

#[test]
fn decomposition_residual() {
    let g = fix_b();
    let d = limit_data(&g).unwrap();
    let mut last = f64::INFINITY;
    for y in [5.0, 10.0, 20.0] {
        let r = grading_decomposition_residual(&g, &d, &z(128, 0.0, y)).unwrap();
        assert!(r.lowers_weight && r.stabilizes, "{r:?}");
        assert!(r.twisted_norm < last);
        last = r.twisted_norm;
    }
    let g = fix_c();
    let d = limit_data(&g).unwrap();
    let r = grading_decomposition_residual(&g, &d, &z(128, 0.0, 10.0)).unwrap();
    assert!(r.lowers_weight && r.stabilizes);
    let g = fix_b_trivial();
    let d = limit_data(&g).unwrap();
    let r = grading_decomposition_residual(&g, &d, &z(128, 0.1, 3.0)).unwrap();
    assert!(r.lowers_weight && r.stabilizes && r.twisted_norm == 0.0, "{r:?}");
}

#[test]
fn h_operator_invariants() {
    for g in [fix_b(), fix_c(), fix_b_trivial(), fix_a_puncture()] {
        let d = limit_data(&g).unwrap();
        let n = g.monodromy();
        assert_eq!(d.h_operator.commutator(n), n.scale(&Scalar::int(-2)));
        assert!(d.h_operator.is_real() && d.f_hat.preserved_by(&d.h_operator));
        let _ = ExactMatrix::identity(3, &());
    }
    let _ = Float::new(2);
}
