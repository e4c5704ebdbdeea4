//! Small hand-checkable germs used by tests, examples and the corpus.
//!
//! Basis conventions: `e₀` spans `Gr₀`, the remaining vectors span `H = W₋₁`.

use crate::algebra::{ExactMatrix, Scalar, Subspace};
use crate::error::Result;
use crate::filtration::{ExtensionShape, HodgeFiltration, WeightFiltration};
use crate::degeneration::PunctureGerm;
use crate::interior::InteriorGerm;
use crate::mhs::PolarizationForm;
use rug::Rational;
use std::collections::BTreeMap;

pub fn basis_vector(n: usize, i: usize) -> Vec<Scalar> {
    (0..n).map(|k| Scalar::int((k == i) as i64)).collect()
}

pub fn combo(n: usize, terms: &[(usize, Scalar)]) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(); n];
    for (i, c) in terms {
        v[*i] = &v[*i] + c;
    }
    v
}

fn span(n: usize, vs: &[Vec<Scalar>]) -> Subspace<Scalar> {
    Subspace::span(n, vs, &())
}

/// `W₋₁ = ⟨e₁, …, e_{n−1}⟩ ⊂ W₀ = V`.
pub fn two_step_weight(n: usize) -> WeightFiltration<Scalar> {
    let h: Vec<Vec<Scalar>> = (1..n).map(|i| basis_vector(n, i)).collect();
    WeightFiltration::new(n, BTreeMap::from([(-1, span(n, &h)), (0, Subspace::full(n, &()))]), &())
        .expect("two-step weight filtration")
}

/// Skew form with `Q(e_a, e_b) = 1` for each listed pair.
pub fn skew_form(n: usize, pairs: &[(usize, usize)]) -> ExactMatrix {
    let mut q = ExactMatrix::zeros(n, n, &());
    for &(a, b) in pairs {
        q.set(a, b, Scalar::one());
        q.set(b, a, Scalar::int(-1));
    }
    q
}

/// Rank-3 data: `ℤ(0)` extended by an elliptic-curve-type structure with `Q(e₁, e₂) = 1`.
pub fn elliptic_shape() -> (ExtensionShape, PolarizationForm) {
    let w = two_step_weight(3);
    let shape = ExtensionShape::new(&w).expect("two-step shape");
    let q = PolarizationForm::new(skew_form(3, &[(1, 2)]), shape.h()).expect("unimodular form");
    (shape, q)
}

/// `F⁰ = ⟨lift, e₁ + i e₂⟩`, `F¹ = 0`.
pub fn elliptic_filtration(lift: Vec<Scalar>) -> HodgeFiltration<Scalar> {
    let f0 = span(3, &[lift, combo(3, &[(1, Scalar::one()), (2, Scalar::i())])]);
    HodgeFiltration::new(3, BTreeMap::from([(0, f0)]), &()).expect("Hodge filtration")
}

/// `P: e₀ ↦ e₁ − i e₂`, zero on `H`.
pub fn fix_a_direction() -> ExactMatrix {
    let mut p = ExactMatrix::zeros(3, 3, &());
    p.set(1, 0, Scalar::one());
    p.set(2, 0, Scalar::gauss((0, 1), (-1, 1)));
    p
}

/// FIX-A: `Γ(s) = s·P` over `F⁰ = ⟨e₀, e₁ + i e₂⟩`; zeros at `2s ∈ ℤ + iℤ`.
pub fn fix_a() -> InteriorGerm {
    let (shape, q) = elliptic_shape();
    InteriorGerm::new(
        "FIX-A",
        shape,
        q,
        elliptic_filtration(basis_vector(3, 0)),
        vec![(1, fix_a_direction())],
        Rational::from(1),
    )
    .expect("FIX-A is valid")
}

/// FIX-E: the constant variation over the FIX-A base.
pub fn fix_e() -> InteriorGerm {
    let (shape, q) = elliptic_shape();
    InteriorGerm::new("FIX-E", shape, q, elliptic_filtration(basis_vector(3, 0)), vec![], Rational::from(1))
        .expect("FIX-E is valid")
}

/// FIX-A with the base lift moved to `e₀ + ½e₁`, so the center is not a zero.
pub fn fix_a_shifted() -> InteriorGerm {
    let (shape, q) = elliptic_shape();
    let lift = combo(3, &[(0, Scalar::one()), (1, Scalar::frac(1, 2))]);
    InteriorGerm::new(
        "FIX-A-shifted",
        shape,
        q,
        elliptic_filtration(lift),
        vec![(1, fix_a_direction())],
        Rational::from(1),
    )
    .expect("shifted FIX-A is valid")
}

/// Rank-5 germ whose `H` has Hodge numbers `(1, 1, 1, 1)` in weights `(1,−2) … (−2,1)`.
///
/// `a = e₁ − i e₃`, `b = e₂ + i e₄`, `F¹ = ⟨a⟩`, `F⁰ = ⟨e₀, a, b⟩`, `F⁻¹ = ⟨e₀, a, b, b̄⟩`,
/// and `Γ = s·X` with `X: a ↦ b̄, b ↦ −ā`. `X` lowers the Hodge index by two, breaking transversality.
pub fn level_three() -> Result<InteriorGerm> {
    let n = 5;
    let w = two_step_weight(n);
    let shape = ExtensionShape::new(&w)?;
    let q = PolarizationForm::new(skew_form(n, &[(1, 3), (2, 4)]), shape.h())?;
    let i = Scalar::i;
    let one = Scalar::one;
    let a = combo(n, &[(1, one()), (3, -i())]);
    let b = combo(n, &[(2, one()), (4, i())]);
    let conj = |v: &Vec<Scalar>| v.iter().map(|x| x.conj()).collect::<Vec<_>>();
    let (abar, bbar) = (conj(&a), conj(&b));
    let e0 = basis_vector(n, 0);
    let f = HodgeFiltration::new(
        n,
        BTreeMap::from([
            (1, span(n, std::slice::from_ref(&a))),
            (0, span(n, &[e0.clone(), a.clone(), b.clone()])),
            (-1, span(n, &[e0.clone(), a.clone(), b.clone(), bbar.clone()])),
            (-2, Subspace::full(n, &())),
        ]),
        &(),
    )?;
    // X in the frame (e₀, a, b, b̄, ā), then back to standard coordinates
    let frame = ExactMatrix::from_columns(n, &[e0, a, b, bbar.clone(), abar.clone()], &());
    let mut xf = ExactMatrix::zeros(n, n, &());
    xf.set(3, 1, Scalar::one());
    xf.set(4, 2, Scalar::int(-1));
    let x = frame.mul_ref(&xf).mul_ref(&frame.inverse()?);
    InteriorGerm::new("level-three", shape, q, f, vec![(1, x)], Rational::from(1))
}

fn puncture(name: &str, n: ExactMatrix, f0: Vec<Vec<Scalar>>, gamma: Vec<(usize, ExactMatrix)>) -> PunctureGerm {
    let (shape, q) = elliptic_shape();
    let f = HodgeFiltration::new(3, BTreeMap::from([(0, span(3, &f0))]), &()).expect("Hodge filtration");
    PunctureGerm::new(name, shape, q, n, f, gamma, Rational::from((1, 2))).expect("valid puncture germ")
}

/// `E(i←j)`: sends `e_j` to `e_i`.
pub fn unit(n: usize, i: usize, j: usize) -> ExactMatrix {
    ExactMatrix::elementary(n, i, j, &())
}

/// FIX-B: `N = E(2←1)`, `F_∞ = ⟨e₀, e₁⟩`, `Γ(s) = s·E(2←0)`; ℝ-split limit.
pub fn fix_b() -> PunctureGerm {
    puncture("FIX-B", unit(3, 2, 1), vec![basis_vector(3, 0), basis_vector(3, 1)], vec![(1, unit(3, 2, 0))])
}

/// FIX-B with `Γ ≡ 0`: the trivial extension.
pub fn fix_b_trivial() -> PunctureGerm {
    puncture("FIX-B-trivial", unit(3, 2, 1), vec![basis_vector(3, 0), basis_vector(3, 1)], vec![])
}

/// FIX-C: as FIX-B with `F_∞ = ⟨e₀ + i e₂, e₁⟩`, so `δ = E(2←0)`.
pub fn fix_c() -> PunctureGerm {
    let lift = combo(3, &[(0, Scalar::one()), (2, Scalar::i())]);
    puncture("FIX-C", unit(3, 2, 1), vec![lift, basis_vector(3, 1)], vec![(1, unit(3, 2, 0))])
}

/// FIX-D: `N = E(1←0)` kills `H`, so no relative weight filtration exists.
pub fn fix_d() -> PunctureGerm {
    puncture("FIX-D", unit(3, 1, 0), vec![basis_vector(3, 0), basis_vector(3, 1)], vec![])
}

/// FIX-A data read as a puncture germ with trivial monodromy.
pub fn fix_a_puncture() -> PunctureGerm {
    puncture(
        "FIX-A-puncture",
        ExactMatrix::zeros(3, 3, &()),
        vec![basis_vector(3, 0), combo(3, &[(1, Scalar::one()), (2, Scalar::i())])],
        vec![(1, fix_a_direction())],
    )
}
