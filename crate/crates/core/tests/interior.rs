use proptest::prelude::*;
use rug::Rational;
use zerolocus::fixtures::{basis_vector, combo, fix_a, fix_a_shifted, fix_e, level_three};
use zerolocus::interior::{
    extension_class, interior_zero_locus, is_integral, transversality_check, zero_scan, ScanConfig, ZeroLocusKind,
};
use zerolocus::mhs::deligne_grading;
use zerolocus::{Error, NumericScalar, Scalar, Subspace};

fn lift(t1: Scalar, t2: Scalar) -> Vec<Scalar> {
    combo(3, &[(0, Scalar::one()), (1, t1), (2, t2)])
}

#[test]
fn filtration_at_half() {
    let g = fix_a();
    let f = g.filtration_at(&Scalar::frac(1, 2)).unwrap();
    let expected = Subspace::span(
        3,
        &[
            combo(3, &[(0, Scalar::one()), (1, Scalar::frac(1, 2)), (2, Scalar::gauss((0, 1), (-1, 2)))]),
            combo(3, &[(1, Scalar::one()), (2, Scalar::i())]),
        ],
        &(),
    );
    assert_eq!(f.get(0), expected);
    assert!(f.get(1).is_zero());
}

#[test]
fn constant_germ_filtration() {
    let g = fix_e();
    let s = Scalar::gauss((1, 3), (-1, 5));
    assert_eq!(g.filtration_at(&s).unwrap().get(0), g.f_base().get(0));
}

#[test]
fn out_of_radius() {
    assert!(matches!(fix_a().filtration_at(&Scalar::int(1)), Err(Error::OutOfRadius)));
}

#[test]
fn grading_at_center() {
    let g = fix_a();
    let y = g.grading_at(&Scalar::zero()).unwrap();
    assert_eq!(g.shape().lift_of(y.matrix()), basis_vector(3, 0));
    assert!(is_integral(g.shape(), &y));
}

#[test]
fn lift_at_tenth() {
    let g = fix_a();
    let y = g.grading_at(&Scalar::frac(1, 10)).unwrap();
    assert_eq!(g.shape().lift_of(y.matrix()), lift(Scalar::frac(1, 5), Scalar::zero()));
}

#[test]
fn numeric_lift_matches_exact() {
    let g = fix_a();
    let s = NumericScalar::from_f64(128, 0.125, -0.25);
    let l = g.lift_at_numeric(&s).unwrap();
    assert!((l.coordinates[0].re().to_f64() - 0.25).abs() < 1e-30);
    assert!((l.coordinates[1].re().to_f64() + 0.5).abs() < 1e-30);
    assert!(l.condition.is_finite());
}

#[test]
fn extension_class_at_quarter() {
    let c = extension_class(&fix_a(), &Scalar::frac(1, 4), None).unwrap();
    assert_eq!(c.reduced, vec!["1/2".to_string(), "0".to_string()]);
    assert!(!c.is_zero);
    let c = extension_class(&fix_a(), &Scalar::frac(1, 2), None).unwrap();
    assert!(c.is_zero);
}

#[test]
fn constant_germ_class_vanishes() {
    for s in [Scalar::frac(1, 3), Scalar::gauss((1, 7), (2, 9))] {
        assert!(extension_class(&fix_e(), &s, None).unwrap().is_zero);
    }
}

#[test]
fn fix_a_isolated_zero() {
    let d = interior_zero_locus(&fix_a(), &Rational::from((1, 5))).unwrap();
    assert_eq!(d.kind, ZeroLocusKind::Isolated);
    assert_eq!(d.roots.len(), 1);
    assert!(d.roots[0].exact && d.roots[0].center == Scalar::zero());
    assert_eq!(d.certified_radius, Rational::from((1, 5)));
}

#[test]
fn fix_e_whole_disk() {
    let d = interior_zero_locus(&fix_e(), &Rational::from((1, 2))).unwrap();
    assert_eq!(d.kind, ZeroLocusKind::WholeDisk);
}

#[test]
fn shifted_center_is_not_a_zero() {
    match interior_zero_locus(&fix_a_shifted(), &Rational::from((1, 5))) {
        Err(Error::NotAZeroAtCenter { distance, empty_radius }) => {
            assert_eq!(distance, 0.5);
            assert!(empty_radius > 0.2 && empty_radius <= 0.25);
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn scan_finds_lattice_points() {
    let report = zero_scan(&fix_a(), 0.7, &ScanConfig::default()).unwrap();
    let found: Vec<String> = report.candidates.iter().filter_map(|c| c.exact.clone()).collect();
    assert_eq!(report.candidates.len(), 5, "{found:?}");
    for z in ["0", "1/2", "-1/2", "1/2*i", "-1/2*i"] {
        let z: Scalar = z.parse().unwrap();
        assert!(found.iter().any(|f| f.parse::<Scalar>().unwrap() == z), "{z} missing from {found:?}");
    }
    assert!(report.candidates.iter().all(|c| c.confirmed && c.local_kind == Some(ZeroLocusKind::Isolated)));
}

#[test]
fn scan_small_disk() {
    let report = zero_scan(&fix_a(), 0.2, &ScanConfig::default()).unwrap();
    assert_eq!(report.candidates.len(), 1);
    assert_eq!(report.candidates[0].exact.as_deref(), Some("0"));
}

#[test]
fn scan_constant_germ() {
    let config = ScanConfig { resolution: 11, ..ScanConfig::default() };
    let report = zero_scan(&fix_e(), 0.5, &config).unwrap();
    assert!(report.everywhere);
    assert!(report.samples.iter().all(|s| s.distance < 1e-20));
}

#[test]
fn recentering_preserves_filtration() {
    let g = fix_a();
    let c = Scalar::frac(1, 2);
    let local = g.recenter(&c, 4).unwrap();
    let t = Scalar::gauss((1, 20), (1, 30));
    let direct = g.filtration_at(&(&c + &t)).unwrap();
    assert_eq!(local.filtration_at(&t).unwrap().get(0), direct.get(0));
}

#[test]
fn transversality() {
    let r = transversality_check(&fix_a()).unwrap();
    assert!(r.passes && r.vacuous);
    assert!(transversality_check(&fix_e()).unwrap().passes);
    let r = transversality_check(&level_three().unwrap()).unwrap();
    assert!(!r.passes && !r.vacuous);
    // X moves both F¹ and F⁰ two steps down; the smallest failing index is reported
    assert_eq!(r.witness, Some(0));
}

fn small_rational() -> impl Strategy<Value = Scalar> {
    (-40i64..40, -40i64..40).prop_map(|(a, b)| Scalar::gauss((a, 100), (b, 100)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    // the lift of FIX-A at σ + iτ is e₀ + 2σe₁ + 2τe₂
    #[test]
    fn fix_a_lift_formula(s in small_rational()) {
        let g = fix_a();
        let y = g.grading_at(&s).unwrap();
        let expected = lift(Scalar::real(s.re().clone() * 2u32), Scalar::real(s.im().clone() * 2u32));
        prop_assert_eq!(g.shape().lift_of(y.matrix()), expected);
    }

    #[test]
    fn grading_preserves_filtration(s in small_rational()) {
        let g = fix_a();
        let y = g.grading_at(&s).unwrap();
        prop_assert!(y.is_real());
        prop_assert!(y.preserves(&g.filtration_at(&s).unwrap()));
        prop_assert!(y.grades(&g.shape().weight()));
        let d = deligne_grading(&g.mhs_at(&s).unwrap()).unwrap();
        prop_assert_eq!(d.matrix(), y.matrix());
    }

    #[test]
    fn shifted_and_constant_gradings(s in small_rational()) {
        for g in [fix_e(), fix_a_shifted()] {
            let y = g.grading_at(&s).unwrap();
            prop_assert!(y.is_real() && y.preserves(&g.filtration_at(&s).unwrap()));
            let d = deligne_grading(&g.mhs_at(&s).unwrap()).unwrap();
            prop_assert_eq!(d.matrix(), y.matrix());
        }
    }
}
