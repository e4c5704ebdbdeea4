use proptest::prelude::*;
use std::collections::BTreeMap;
use zerolocus::filtration::{
    deligne_grading_prime, monodromy_weight_filtration, relative_weight_filtration, ExtensionShape, Grading,
    WeightFiltration,
};
use zerolocus::{Error, ExactMatrix, Scalar, Subspace};

fn e(n: usize, i: usize) -> Vec<Scalar> {
    (0..n).map(|k| Scalar::int((k == i) as i64)).collect()
}

fn span(n: usize, vs: &[Vec<Scalar>]) -> Subspace<Scalar> {
    Subspace::span(n, vs, &())
}

fn two_step() -> WeightFiltration<Scalar> {
    WeightFiltration::new(
        3,
        BTreeMap::from([(-1, span(3, &[e(3, 1), e(3, 2)])), (0, Subspace::full(3, &()))]),
        &(),
    )
    .unwrap()
}

#[test]
fn zero_operator_filtration() {
    let w = monodromy_weight_filtration(&ExactMatrix::zeros(3, 3, &()), 4).unwrap();
    assert!(w.get(4).is_full());
    assert!(w.get(3).is_zero());
}

#[test]
fn jordan_block_of_size_two() {
    // n = E(1←2) on the span of e1, e2 inside a 2-dimensional space
    let n = ExactMatrix::elementary(2, 0, 1, &());
    let l = monodromy_weight_filtration(&n, -1).unwrap();
    assert!(l.get(0).is_full());
    assert_eq!(l.get(-1), span(2, &[e(2, 0)]));
    assert_eq!(l.get(-2), span(2, &[e(2, 0)]));
    assert!(l.get(-3).is_zero());
}

#[test]
fn jordan_block_of_size_three() {
    let n = ExactMatrix::elementary(3, 0, 1, &()).add_ref(&ExactMatrix::elementary(3, 1, 2, &()));
    let w = monodromy_weight_filtration(&n, 0).unwrap();
    assert_eq!(w.weights(), vec![-2, 0, 2]);
    for k in [-2, 0, 2] {
        assert_eq!(w.graded_dim(k), 1);
    }
}

#[test]
fn non_nilpotent_rejected() {
    let m = ExactMatrix::identity(2, &());
    assert!(matches!(monodromy_weight_filtration(&m, 0), Err(Error::NotNilpotent)));
}

#[test]
fn relative_filtration_fix_b() {
    let n = ExactMatrix::elementary(3, 2, 1, &());
    let data = relative_weight_filtration(&n, &two_step()).unwrap();
    assert_eq!(data.m.get(-2), span(3, &[e(3, 2)]));
    assert_eq!(data.m.get(-1), span(3, &[e(3, 2)]));
    assert!(data.m.get(0).is_full());
    assert!(data.m.get(-3).is_zero());
}

#[test]
fn relative_filtration_fix_d_does_not_exist() {
    let n = ExactMatrix::elementary(3, 1, 0, &());
    assert!(matches!(relative_weight_filtration(&n, &two_step()), Err(Error::Nonexistence(_))));
}

#[test]
fn relative_filtration_of_zero_is_w() {
    let w = two_step();
    let data = relative_weight_filtration(&ExactMatrix::zeros(3, 3, &()), &w).unwrap();
    assert_eq!(data.m, w);
}

#[test]
fn unsupported_shape() {
    let w = WeightFiltration::new(
        3,
        BTreeMap::from([(-2, span(3, &[e(3, 2)])), (-1, span(3, &[e(3, 1), e(3, 2)])), (0, Subspace::full(3, &()))]),
        &(),
    )
    .unwrap();
    assert!(matches!(ExtensionShape::new(&w), Err(Error::UnsupportedShape(_))));
}

fn grading(pieces: &[(i32, Vec<Vec<Scalar>>)]) -> Grading<Scalar> {
    Grading::from_pieces(pieces.iter().map(|(k, vs)| (*k, span(3, vs))).collect()).unwrap()
}

#[test]
fn y_prime_fix_b() {
    let n = ExactMatrix::elementary(3, 2, 1, &());
    let y_m = grading(&[(0, vec![e(3, 0), e(3, 1)]), (-2, vec![e(3, 2)])]);
    let y = deligne_grading_prime(&n, &y_m, &two_step()).unwrap();
    let shape = ExtensionShape::new(&two_step()).unwrap();
    assert_eq!(shape.lift_of(y.matrix()), e(3, 0));
}

#[test]
fn y_prime_fix_c_is_complex() {
    let n = ExactMatrix::elementary(3, 2, 1, &());
    let v = vec![Scalar::one(), Scalar::zero(), Scalar::i()];
    let y_m = grading(&[(0, vec![v.clone(), e(3, 1)]), (-2, vec![e(3, 2)])]);
    let y = deligne_grading_prime(&n, &y_m, &two_step()).unwrap();
    let shape = ExtensionShape::new(&two_step()).unwrap();
    assert_eq!(shape.lift_of(y.matrix()), v);
}

#[test]
fn y_prime_with_zero_monodromy() {
    let w = two_step();
    let shape = ExtensionShape::new(&w).unwrap();
    let v = vec![Scalar::one(), Scalar::frac(1, 3), Scalar::frac(-2, 5)];
    let y_m = shape.grading(&v);
    let y = deligne_grading_prime(&ExactMatrix::zeros(3, 3, &()), &y_m, &w).unwrap();
    assert_eq!(y, y_m);
}

#[test]
fn extension_shape_of_skew_lattice() {
    // H = ker(2x + 3y - z) in Z^3
    let h = span(3, &[vec![Scalar::one(), Scalar::zero(), Scalar::int(2)], vec![Scalar::zero(), Scalar::one(), Scalar::int(3)]]);
    let w = WeightFiltration::new(3, BTreeMap::from([(-1, h.clone()), (0, Subspace::full(3, &()))]), &()).unwrap();
    let shape = ExtensionShape::new(&w).unwrap();
    let c = shape.functional();
    let dot = |v: &[Scalar]| v.iter().zip(c).fold(Scalar::zero(), |acc, (a, b)| &acc + &(a * b));
    assert_eq!(dot(shape.g0()), Scalar::one());
    assert!(shape.g0().iter().all(|x| x.is_integer()));
    for hb in shape.h_basis() {
        assert!(h.contains(hb));
        assert!(hb.iter().all(|x| x.is_integer()));
    }
    let mut cols = vec![shape.g0().to_vec()];
    cols.extend(shape.h_basis().iter().cloned());
    let det_inv = ExactMatrix::from_columns(3, &cols, &()).inverse().unwrap();
    assert!(det_inv.is_integral());
}

fn nilpotent_strategy(n: usize) -> impl Strategy<Value = ExactMatrix> {
    (proptest::collection::vec(-2i64..=2, n * n), proptest::collection::vec(-1i64..=1, n * n)).prop_map(move |(upper, conj)| {
        let u = ExactMatrix::from_fn(n, n, &(), |i, j| if j > i { Scalar::int(upper[i * n + j]) } else { Scalar::zero() });
        let g = ExactMatrix::from_fn(n, n, &(), |i, j| {
            if i == j {
                Scalar::one()
            } else if j > i {
                Scalar::int(conj[i * n + j])
            } else {
                Scalar::zero()
            }
        })
        .transpose();
        let gi = g.inverse().unwrap();
        g.mul_ref(&u).mul_ref(&gi)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn monodromy_filtration_is_conjugation_equivariant(n in nilpotent_strategy(5), c in -2i32..=2) {
        let w = monodromy_weight_filtration(&n, c).unwrap();
        prop_assert!(w.shifted_by(&n, -2));
        let g = ExactMatrix::from_fn(5, 5, &(), |i, j| if i == j { Scalar::one() } else if j == i + 1 { Scalar::int(2) } else { Scalar::zero() });
        let gn = g.mul_ref(&n).mul_ref(&g.inverse().unwrap());
        prop_assert_eq!(monodromy_weight_filtration(&gn, c).unwrap(), w.image(&g));
    }
}
