//! Random generators shared by the property tests and the acceptance harness.

#![allow(dead_code)]

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rug::Rational;
use std::collections::BTreeMap;
use zerolocus::filtration::{ExtensionShape, HodgeFiltration, WeightFiltration};
use zerolocus::fixtures::{basis_vector, combo, skew_form, two_step_weight};
use zerolocus::interior::InteriorGerm;
use zerolocus::mhs::{chart_subalgebra, lie_algebra, Bigrading, ChartFlavor, MixedHodgeStructure, PolarizationForm};
use zerolocus::{ExactMatrix, Scalar, Subspace};

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small_int(rng: &mut TestRng, bound: i64) -> i64 {
    rng.gen_range(-bound..=bound)
}

/// Gaussian rational with numerators in `[-bound, bound]` and denominators up to `den`.
pub fn gauss(rng: &mut TestRng, bound: i64, den: i64) -> Scalar {
    Scalar::gauss(
        (small_int(rng, bound), rng.gen_range(1..=den)),
        (small_int(rng, bound), rng.gen_range(1..=den)),
    )
}

pub fn real(rng: &mut TestRng, bound: i64, den: i64) -> Scalar {
    Scalar::frac(small_int(rng, bound), rng.gen_range(1..=den))
}

fn span(n: usize, vs: &[Vec<Scalar>]) -> Subspace<Scalar> {
    Subspace::span(n, vs, &())
}

/// A random mixed Hodge structure of dimension at most 6: an `ℝ`-split structure
/// built from explicit `I^{p,q}` frames, moved by `exp(X)` with `X` lowering `W`.
pub fn random_mhs(rng: &mut TestRng) -> MixedHodgeStructure<Scalar> {
    let mut weights: Vec<i32> = (-2..=2).filter(|_| rng.gen_bool(0.5)).collect();
    if weights.is_empty() {
        weights.push(rng.gen_range(-2..=2));
    }
    // (weight of coordinate, frame vectors with their Hodge index p)
    let mut coord_weight: Vec<i32> = Vec::new();
    let mut items: Vec<(i32, Vec<(usize, bool)>)> = Vec::new();
    for &k in &weights {
        let count = rng.gen_range(1..=2);
        for _ in 0..count {
            let pair = k % 2 != 0 || rng.gen_bool(0.5);
            let need = if pair { 2 } else { 1 };
            if coord_weight.len() + need > 6 {
                break;
            }
            let a = coord_weight.len();
            coord_weight.extend(std::iter::repeat_n(k, need));
            if pair {
                // p > q with p + q = k
                let q = (k - 1).div_euclid(2) - rng.gen_range(0..=1);
                let p = k - q;
                items.push((p, vec![(a, true), (a + 1, true)]));
                items.push((q, vec![(a, true), (a + 1, false)]));
            } else {
                items.push((k / 2, vec![(a, false)]));
            }
        }
    }
    let n = coord_weight.len();
    let frame_vector = |spec: &Vec<(usize, bool)>| -> Vec<Scalar> {
        match spec.as_slice() {
            [(a, false)] => basis_vector(n, *a),
            [(a, _), (b, plus)] => combo(n, &[(*a, Scalar::one()), (*b, if *plus { Scalar::i() } else { -Scalar::i() })]),
            _ => unreachable!(),
        }
    };
    let ps: Vec<i32> = items.iter().map(|(p, _)| *p).collect();
    let (pmin, pmax) = (*ps.iter().min().unwrap(), *ps.iter().max().unwrap());
    let mut f = BTreeMap::new();
    for p in pmin..=pmax {
        let vs: Vec<Vec<Scalar>> = items.iter().filter(|(q, _)| *q >= p).map(|(_, s)| frame_vector(s)).collect();
        f.insert(p, span(n, &vs));
    }
    let mut w = BTreeMap::new();
    for &k in &weights {
        let vs: Vec<Vec<Scalar>> = (0..n).filter(|&i| coord_weight[i] <= k).map(|i| basis_vector(n, i)).collect();
        w.insert(k, span(n, &vs));
    }
    let w = WeightFiltration::new(n, w, &()).expect("weight filtration");
    let f = HodgeFiltration::new(n, f, &()).expect("Hodge filtration");
    let mut x = ExactMatrix::zeros(n, n, &());
    for i in 0..n {
        for j in 0..n {
            if coord_weight[i] < coord_weight[j] && rng.gen_bool(0.6) {
                x.set(i, j, gauss(rng, 3, 4));
            }
        }
    }
    let g = x.exp_nilpotent().expect("strictly weight-lowering");
    MixedHodgeStructure::new(f.image(&g), w).expect("W-lowering perturbations keep the MHS")
}

/// Checks the three defining properties of the Deligne bigrading directly.
pub fn bigrading_axioms(m: &MixedHodgeStructure<Scalar>, b: &Bigrading<Scalar>) -> Result<(), String> {
    let n = m.ambient();
    let sum = |pred: &dyn Fn(i32, i32) -> bool| -> Subspace<Scalar> {
        let mut acc = Subspace::zero(n, &());
        for (&(p, q), s) in b.pieces() {
            if pred(p, q) {
                acc = acc.sum(s).unwrap();
            }
        }
        acc
    };
    let total: usize = b.pieces().values().map(|s| s.dim()).sum();
    if total != n || !sum(&|_, _| true).is_full() {
        return Err("pieces do not decompose V".into());
    }
    let (fb, ft) = m.f.range();
    for p in fb - 1..=ft + 1 {
        if sum(&|a, _| a >= p) != m.f.get(p) {
            return Err(format!("F^{p} is not the sum of I^(a,b) with a >= {p}"));
        }
    }
    let (wb, wt) = m.w.range();
    for k in wb - 1..=wt + 1 {
        if sum(&|a, c| a + c <= k) != m.w.get(k) {
            return Err(format!("W_{k} is not the sum of I^(a,b) with a + b <= {k}"));
        }
    }
    for (&(p, q), s) in b.pieces() {
        let lower = sum(&|r, t| r < q && t < p);
        let target = b.piece(q, p).cloned().unwrap_or_else(|| Subspace::zero(n, &())).sum(&lower).unwrap();
        if !target.contains_subspace(&s.conj()) {
            return Err(format!("conj(I^({p},{q})) is not I^({q},{p}) modulo lower terms"));
        }
    }
    Ok(())
}

/// Random nilpotent `n × n` matrix `P·L·P⁻¹` with `L` strictly lower triangular.
pub fn random_nilpotent(rng: &mut TestRng, n: usize) -> ExactMatrix {
    let mut l = ExactMatrix::zeros(n, n, &());
    let mut p = ExactMatrix::identity(n, &());
    for i in 0..n {
        for j in 0..n {
            if j < i && rng.gen_bool(0.7) {
                l.set(i, j, gauss(rng, 3, 3));
            }
            if i != j && rng.gen_bool(0.4) {
                p.set(i, j, Scalar::int(small_int(rng, 2)));
            }
        }
    }
    // unit lower times unit upper keeps P invertible
    let (mut lo, mut up) = (ExactMatrix::identity(n, &()), ExactMatrix::identity(n, &()));
    for i in 0..n {
        for j in 0..n {
            if j < i {
                lo.set(i, j, p.get(i, j).clone());
            } else if j > i {
                up.set(i, j, p.get(i, j).clone());
            }
        }
    }
    let p = lo.mul_ref(&up);
    p.mul_ref(&l).mul_ref(&p.inverse().unwrap())
}

/// `(Γ₀, Γ₋₁)` of the two-step shape on `V = ℂe₀ ⊕ H`: `Γ₀` nilpotent on `H` and zero on
/// `e₀`; `Γ₋₁` sends `e₀` into `H` and kills `H`.
pub fn random_two_step_pair(rng: &mut TestRng) -> (ExactMatrix, ExactMatrix) {
    let n = rng.gen_range(3..=6);
    let a = random_nilpotent(rng, n - 1);
    let mut g0 = ExactMatrix::zeros(n, n, &());
    for i in 1..n {
        for j in 1..n {
            g0.set(i, j, a.get(i - 1, j - 1).clone());
        }
    }
    let mut g1 = ExactMatrix::zeros(n, n, &());
    for i in 1..n {
        g1.set(i, 0, gauss(rng, 4, 5));
    }
    (g0, g1)
}

/// Interior germ with integral base lift and `Γ₋₁(s) = s·∏(s − rⱼ)·B`; returns the `rⱼ`.
pub fn random_interior_germ(rng: &mut TestRng, index: usize) -> (InteriorGerm, Vec<Scalar>) {
    let genus = rng.gen_range(1..=2);
    let n = 1 + 2 * genus;
    let w = two_step_weight(n);
    let shape = ExtensionShape::new(&w).unwrap();
    let pairs: Vec<(usize, usize)> = (1..=genus).map(|j| (j, j + genus)).collect();
    let q = PolarizationForm::new(skew_form(n, &pairs), shape.h()).unwrap();
    let mut lift = vec![Scalar::zero(); n];
    lift[0] = Scalar::one();
    for x in lift.iter_mut().skip(1) {
        *x = Scalar::int(small_int(rng, 2));
    }
    let mut f0 = vec![lift];
    for j in 1..=genus {
        f0.push(combo(n, &[(j, Scalar::one()), (j + genus, Scalar::i())]));
    }
    let f = HodgeFiltration::new(n, BTreeMap::from([(0, span(n, &f0))]), &()).unwrap();
    let base = MixedHodgeStructure::new(f.clone(), shape.weight()).unwrap();
    let g = lie_algebra::<Scalar>(&shape, &q, &());
    let chart = chart_subalgebra(&base, &g, ChartFlavor::Interior).unwrap();
    let y = zerolocus::mhs::deligne_grading(&base).unwrap();
    let random_chart = |rng: &mut TestRng, k: i32| -> ExactMatrix {
        let mut m = ExactMatrix::zeros(n, n, &());
        for b in chart.basis() {
            let c = gauss(rng, 3, 3);
            m = m.add_ref(&ExactMatrix::from_flat(n, n, b.clone(), &()).scale(&c));
        }
        y.ad_component(&m, k)
    };
    let roots: Vec<Scalar> = (0..rng.gen_range(0..=2))
        .map(|_| Scalar::gauss((small_int(rng, 2), 5), (small_int(rng, 2), 5)))
        .collect();
    // s·∏(s − r) as coefficients of s^1 …
    let mut poly = vec![Scalar::one()];
    for r in &roots {
        let mut next = vec![Scalar::zero(); poly.len() + 1];
        for (k, c) in poly.iter().enumerate() {
            next[k + 1] = &next[k + 1] + c;
            next[k] = &next[k] - &(c * r);
        }
        poly = next;
    }
    let b = random_chart(rng, -1);
    let mut gamma: Vec<(usize, ExactMatrix)> = Vec::new();
    for (k, c) in poly.iter().enumerate() {
        let a = if k < 2 { random_chart(rng, 0) } else { ExactMatrix::zeros(n, n, &()) };
        gamma.push((k + 1, a.add_ref(&b.scale(c))));
    }
    let germ = InteriorGerm::new(format!("random-{index}"), shape, q, f, gamma, Rational::from(1)).unwrap();
    (germ, roots)
}

/// Sample points for the zero-set comparison: the prescribed roots, the center, and
/// random Gaussian rationals inside the unit disk.
pub fn sample_points(rng: &mut TestRng, roots: &[Scalar], count: usize) -> Vec<Scalar> {
    let mut pts: Vec<Scalar> = vec![Scalar::zero()];
    for r in roots {
        if !pts.contains(r) {
            pts.push(r.clone());
        }
    }
    while pts.len() < count {
        let s = gauss(rng, 9, 13);
        if s.norm_sqr() < 1 && !pts.contains(&s) {
            pts.push(s);
        }
    }
    pts
}

/// Checks that `Ψ(ad Γ₀(s))Γ₋₁(s)` and `Γ₋₁(s)` vanish at the same points, and that the
/// two series have the same valuation and lowest coefficient.
pub fn zero_set_equivalence(germ: &InteriorGerm, points: &[Scalar]) -> Result<usize, String> {
    use zerolocus::interior::split_gamma;
    use zerolocus::nilpotent::psi_series;
    let y = germ.grading_at(&Scalar::zero()).map_err(|e| e.to_string())?;
    let (g0, g1) = split_gamma(germ.gamma(), &y, germ.dim()).map_err(|e| e.to_string())?;
    let mut zeros = 0;
    for s in points {
        let a = g0.eval(s);
        let b = g1.eval(s);
        let psi = psi_series(&a, &b).map_err(|e| e.to_string())?;
        if psi.is_zero() != b.is_zero() {
            return Err(format!("zero sets differ at s = {s}"));
        }
        zeros += b.is_zero() as usize;
    }
    let psi = psi_series(&g0, &g1).map_err(|e| e.to_string())?;
    let valuation = |m: &zerolocus::PolyMatrix| m.entries().iter().filter(|p| p.degree().is_some()).map(|p| p.valuation()).min();
    let (v1, vp) = (valuation(&g1), valuation(&psi));
    if v1 != vp {
        return Err(format!("valuations differ: {v1:?} vs {vp:?}"));
    }
    if let Some(v) = v1 {
        if g1.coefficient(v) != psi.coefficient(v) {
            return Err("lowest coefficients differ".into());
        }
    }
    Ok(zeros)
}
