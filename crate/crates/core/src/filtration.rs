//! Weight and Hodge filtrations, gradings, monodromy and relative weight
//! filtrations, and the grading `Y′(N, Y_M)` in the two-step case.

use crate::algebra::{ExactMatrix, Field, Matrix, Ring, Scalar, Subspace};
use crate::error::{Error, Result};
use rug::Integer;
use std::collections::BTreeMap;

/// Increasing filtration `W_k`, zero below `lo` and the whole space from `lo + len − 1` on.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightFiltration<T: Field> {
    ambient: usize,
    lo: i32,
    steps: Vec<Subspace<T>>,
}

impl<T: Field> WeightFiltration<T> {
    /// Builds `W` from some of its steps. An unlisted `W_k` equals the nearest listed
    /// step below it; steps below the smallest index are zero; the largest listed
    /// step must be the whole space.
    pub fn new(ambient: usize, listed: BTreeMap<i32, Subspace<T>>, ctx: &T::Ctx) -> Result<Self> {
        let (&first, _) = listed
            .iter()
            .next()
            .ok_or_else(|| Error::Precondition("empty weight filtration".into()))?;
        let (&last, top) = listed.iter().next_back().unwrap();
        if !top.is_full() || top.ambient() != ambient {
            return Err(Error::Precondition("weight filtration must end at the whole space".into()));
        }
        let mut full = Vec::new();
        let mut current = Subspace::zero(ambient, ctx);
        for k in first..=last {
            if let Some(s) = listed.get(&k) {
                if s.ambient() != ambient {
                    return Err(Error::AmbientMismatch(ambient, s.ambient()));
                }
                if !s.contains_subspace(&current) {
                    return Err(Error::Precondition(format!("W_{} is not contained in W_{k}", k - 1)));
                }
                current = s.clone();
            }
            full.push(current.clone());
        }
        let mut lo = first;
        while full.len() > 1 && full[0].is_zero() {
            full.remove(0);
            lo += 1;
        }
        while full.len() > 1 && full[full.len() - 2].is_full() {
            full.pop();
        }
        Ok(WeightFiltration {
            ambient,
            lo,
            steps: full,
        })
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn ring_ctx(&self) -> &T::Ctx {
        self.steps[0].ring_ctx()
    }

    /// Smallest `k` with `W_k ≠ 0` and smallest `k` with `W_k = V`.
    pub fn range(&self) -> (i32, i32) {
        (self.lo, self.lo + self.steps.len() as i32 - 1)
    }

    pub fn get(&self, k: i32) -> Subspace<T> {
        let (lo, hi) = self.range();
        let ctx = self.steps[0].ring_ctx();
        if k < lo {
            Subspace::zero(self.ambient, ctx)
        } else if k >= hi {
            Subspace::full(self.ambient, ctx)
        } else {
            self.steps[(k - lo) as usize].clone()
        }
    }

    pub fn graded_dim(&self, k: i32) -> usize {
        self.get(k).dim() - self.get(k - 1).dim()
    }

    /// Indices `k` with `Gr_k ≠ 0`.
    pub fn weights(&self) -> Vec<i32> {
        let (lo, hi) = self.range();
        (lo..=hi).filter(|&k| self.graded_dim(k) > 0).collect()
    }

    /// `m·W_k ⊆ W_{k+shift}` for every `k`.
    pub fn shifted_by(&self, m: &Matrix<T>, shift: i32) -> bool {
        let (lo, hi) = self.range();
        (lo - 1..=hi).all(|k| self.get(k + shift).contains_subspace(&self.get(k).image(m)))
    }

    pub fn preserved_by(&self, m: &Matrix<T>) -> bool {
        self.shifted_by(m, 0)
    }

    pub fn image(&self, g: &Matrix<T>) -> Self {
        WeightFiltration {
            ambient: self.ambient,
            lo: self.lo,
            steps: self.steps.iter().map(|s| s.image(g)).collect(),
        }
    }

    /// Every step is real (conjugation invariant).
    pub fn is_real(&self) -> bool {
        self.steps.iter().all(|s| s.is_real())
    }

    pub fn steps(&self) -> BTreeMap<i32, Subspace<T>> {
        let (lo, hi) = self.range();
        (lo..=hi).map(|k| (k, self.get(k))).collect()
    }
}

/// Decreasing filtration `F^p`: the whole space up to `bottom`, zero above `top`.
#[derive(Clone, Debug, PartialEq)]
pub struct HodgeFiltration<T: Field> {
    ambient: usize,
    bottom: i32,
    steps: Vec<Subspace<T>>,
}

impl<T: Field> HodgeFiltration<T> {
    /// Builds `F` from some of its steps. An unlisted `F^p` equals the nearest listed
    /// step above it, or zero above the largest index; below the smallest listed index
    /// the filtration is the whole space.
    pub fn new(ambient: usize, listed: BTreeMap<i32, Subspace<T>>, ctx: &T::Ctx) -> Result<Self> {
        let (&first, _) = listed
            .iter()
            .next()
            .ok_or_else(|| Error::Precondition("empty Hodge filtration".into()))?;
        let (&last, _) = listed.iter().next_back().unwrap();
        let mut rev = Vec::new();
        let mut current = Subspace::zero(ambient, ctx);
        for p in (first..=last).rev() {
            if let Some(s) = listed.get(&p) {
                if s.ambient() != ambient {
                    return Err(Error::AmbientMismatch(ambient, s.ambient()));
                }
                if !s.contains_subspace(&current) {
                    return Err(Error::Precondition(format!("F^{} is not contained in F^{p}", p + 1)));
                }
                current = s.clone();
            }
            rev.push(current.clone());
        }
        let mut bottom = first - 1;
        let mut steps: Vec<Subspace<T>> = std::iter::once(Subspace::full(ambient, ctx)).chain(rev.into_iter().rev()).collect();
        while steps.len() > 1 && steps[1].is_full() {
            steps.remove(0);
            bottom += 1;
        }
        while steps.len() > 1 && steps.last().unwrap().is_zero() {
            steps.pop();
        }
        Ok(HodgeFiltration { ambient, bottom, steps })
    }

    /// The filtration with a single nontrivial step `F^p = s`.
    pub fn single(p: i32, s: Subspace<T>) -> Result<Self> {
        let ctx = s.ring_ctx().clone();
        let ambient = s.ambient();
        Self::new(ambient, BTreeMap::from([(p, s)]), &ctx)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn ring_ctx(&self) -> &T::Ctx {
        self.steps[0].ring_ctx()
    }

    /// Largest `p` with `F^p = V` and largest `p` with `F^p ≠ 0`.
    pub fn range(&self) -> (i32, i32) {
        (self.bottom, self.bottom + self.steps.len() as i32 - 1)
    }

    pub fn get(&self, p: i32) -> Subspace<T> {
        let (bottom, top) = self.range();
        let ctx = self.steps[0].ring_ctx();
        if p <= bottom {
            Subspace::full(self.ambient, ctx)
        } else if p > top {
            Subspace::zero(self.ambient, ctx)
        } else {
            self.steps[(p - bottom) as usize].clone()
        }
    }

    pub fn image(&self, g: &Matrix<T>) -> Self {
        HodgeFiltration {
            ambient: self.ambient,
            bottom: self.bottom,
            steps: self.steps.iter().map(|s| s.image(g)).collect(),
        }
    }

    pub fn conj(&self) -> Self {
        HodgeFiltration {
            ambient: self.ambient,
            bottom: self.bottom,
            steps: self.steps.iter().map(|s| s.conj()).collect(),
        }
    }

    pub fn preserved_by(&self, m: &Matrix<T>) -> bool {
        let (b, t) = self.range();
        (b..=t + 1).all(|p| self.get(p).contains_subspace(&self.get(p).image(m)))
    }

    /// `F^p ∩ s` for every `p`, as subspaces of the ambient space.
    pub fn restrict(&self, s: &Subspace<T>) -> BTreeMap<i32, Subspace<T>> {
        let (b, t) = self.range();
        (b..=t + 1).map(|p| (p, self.get(p).intersect(s).expect("same ambient"))).collect()
    }

    pub fn steps(&self) -> BTreeMap<i32, Subspace<T>> {
        let (b, t) = self.range();
        (b..=t).map(|p| (p, self.get(p))).collect()
    }
}

/// Semisimple endomorphism with integer eigenvalues, stored by its eigenspaces.
#[derive(Clone, Debug)]
pub struct Grading<T: Field> {
    pieces: BTreeMap<i32, Subspace<T>>,
    basis: Matrix<T>,
    weights: Vec<i32>,
    matrix: Matrix<T>,
}

impl<T: Field> PartialEq for Grading<T> {
    fn eq(&self, o: &Self) -> bool {
        self.pieces == o.pieces
    }
}

impl<T: Field> Grading<T> {
    pub fn from_pieces(pieces: BTreeMap<i32, Subspace<T>>) -> Result<Self> {
        let pieces: BTreeMap<i32, Subspace<T>> = pieces.into_iter().filter(|(_, s)| !s.is_zero()).collect();
        let first = pieces.values().next().ok_or_else(|| Error::Precondition("empty grading".into()))?;
        let n = first.ambient();
        let ctx = first.ring_ctx().clone();
        let mut cols = Vec::new();
        let mut weights = Vec::new();
        for (&k, s) in &pieces {
            for v in s.basis() {
                cols.push(v.clone());
                weights.push(k);
            }
        }
        if cols.len() != n {
            return Err(Error::Precondition("grading pieces do not span the space".into()));
        }
        let basis = Matrix::from_columns(n, &cols, &ctx);
        let inv = basis.inverse().map_err(|_| Error::Precondition("grading pieces are not independent".into()))?;
        let diag = Matrix::from_fn(n, n, &ctx, |i, j| {
            if i == j {
                T::from_scalar(&Scalar::int(weights[i] as i64), &ctx)
            } else {
                T::zero(&ctx)
            }
        });
        let matrix = basis.mul_ref(&diag).mul_ref(&inv);
        Ok(Grading {
            pieces,
            basis,
            weights,
            matrix,
        })
    }

    /// Recovers the eigenspaces of `y` among the candidate eigenvalues.
    pub fn from_matrix(y: &Matrix<T>, candidates: impl IntoIterator<Item = i32>) -> Result<Self> {
        let n = y.rows();
        let ctx = y.ring_ctx().clone();
        let mut pieces = BTreeMap::new();
        for k in candidates {
            let shifted = y.sub_ref(&Matrix::identity(n, &ctx).scale(&T::from_scalar(&Scalar::int(k as i64), &ctx)));
            let ker = shifted.kernel();
            if !ker.is_empty() {
                pieces.insert(k, Subspace::span(n, &ker, &ctx));
            }
        }
        let g = Self::from_pieces(pieces)?;
        let scale = y.max_magnitude().max(1.0);
        if !g.matrix.sub_ref(y).is_negligible(scale) {
            return Err(Error::Precondition("matrix is not a grading with the given eigenvalues".into()));
        }
        Ok(g)
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.matrix
    }

    pub fn pieces(&self) -> &BTreeMap<i32, Subspace<T>> {
        &self.pieces
    }

    pub fn piece(&self, k: i32) -> Subspace<T> {
        self.pieces
            .get(&k)
            .cloned()
            .unwrap_or_else(|| Subspace::zero(self.matrix.rows(), self.matrix.ring_ctx()))
    }

    pub fn ambient(&self) -> usize {
        self.matrix.rows()
    }

    /// `W_k = ⊕_{i≤k} piece_i` for all `k`.
    pub fn grades(&self, w: &WeightFiltration<T>) -> bool {
        let (lo, hi) = w.range();
        let ctx = self.matrix.ring_ctx();
        (lo - 1..=hi).all(|k| {
            let mut acc = Subspace::zero(self.ambient(), ctx);
            for (_, s) in self.pieces.range(..=k) {
                acc = acc.sum(s).expect("same ambient");
            }
            acc == w.get(k)
        })
    }

    pub fn preserves(&self, f: &HodgeFiltration<T>) -> bool {
        f.preserved_by(&self.matrix)
    }

    pub fn is_real(&self) -> bool {
        let scale = self.matrix.max_magnitude().max(1.0);
        self.matrix.sub_ref(&self.matrix.conj()).is_negligible(scale)
    }

    /// `g·Y·g^{-1}`, with pieces `g·piece`.
    pub fn act(&self, g: &Matrix<T>) -> Result<Self> {
        g.inverse()?;
        Self::from_pieces(self.pieces.iter().map(|(&k, s)| (k, s.image(g))).collect())
    }

    /// Components of `x` in the eigenspaces of `ad Y`.
    pub fn ad_components(&self, x: &Matrix<T>) -> BTreeMap<i32, Matrix<T>> {
        let inv = self.basis.inverse().expect("basis is invertible");
        let xp = inv.mul_ref(x).mul_ref(&self.basis);
        let n = self.ambient();
        let ctx = self.matrix.ring_ctx().clone();
        let mut out: BTreeMap<i32, Matrix<T>> = BTreeMap::new();
        for i in 0..n {
            for j in 0..n {
                if xp.get(i, j).is_zero() {
                    continue;
                }
                let k = self.weights[i] - self.weights[j];
                let m = out.entry(k).or_insert_with(|| Matrix::zeros(n, n, &ctx));
                m.set(i, j, xp.get(i, j).clone());
            }
        }
        out.into_iter()
            .map(|(k, m)| (k, self.basis.mul_ref(&m).mul_ref(&inv)))
            .collect()
    }

    /// Component of `x` in the `ad Y` eigenspace for eigenvalue `k`.
    pub fn ad_component(&self, x: &Matrix<T>, k: i32) -> Matrix<T> {
        self.ad_components(x)
            .remove(&k)
            .unwrap_or_else(|| Matrix::zeros(self.ambient(), self.ambient(), self.matrix.ring_ctx()))
    }
}

/// Lattice data of the two-step weight filtration `0 ⊂ W₋₁ = H ⊂ W₀ = V` with
/// `Gr₀` of rank one, over the standard lattice `ℤ^n`.
///
/// A grading of such a `W` is determined by the lift `v₀` of the `Gr₀` generator:
/// `Y[v₀] = −I + v₀ ⊗ c`, where `c` is the primitive integral functional with
/// kernel `H` and `c(g₀) = 1`.
#[derive(Clone, Debug)]
pub struct ExtensionShape {
    n: usize,
    h: Subspace<Scalar>,
    c: Vec<Scalar>,
    g0: Vec<Scalar>,
    h_basis: Vec<Vec<Scalar>>,
    frame_inv: ExactMatrix,
}

impl ExtensionShape {
    pub fn new(w: &WeightFiltration<Scalar>) -> Result<Self> {
        let n = w.ambient();
        let h = w.get(-1);
        if !w.get(-2).is_zero() || !w.get(0).is_full() || h.dim() + 1 != n {
            return Err(Error::UnsupportedShape(
                "expected W_{-2} = 0, W_0 = V and Gr_0 of rank one".into(),
            ));
        }
        if !h.basis().iter().flatten().all(|x| x.is_real()) {
            return Err(Error::UnsupportedShape("W_{-1} is not defined over the rationals".into()));
        }
        let phi = h.annihilator().pop().expect("codimension one");
        let mut den = Integer::from(1);
        for x in &phi {
            den.lcm_mut(x.re().denom());
        }
        let mut ints: Vec<Integer> = phi
            .iter()
            .map(|x| (x.re().clone() * Integer::from(&den)).into_numer_denom().0)
            .collect();
        let mut g = Integer::new();
        for x in &ints {
            g.gcd_mut(x);
        }
        for x in ints.iter_mut() {
            *x /= &g;
        }
        if ints.iter().find(|x| **x != 0).is_some_and(|x| *x < 0) {
            for x in ints.iter_mut() {
                *x = Integer::from(-&*x);
            }
        }
        // unimodular column reduction of c to (±1, 0, …, 0)
        let mut a = ints.clone();
        let mut u: Vec<Vec<Integer>> = (0..n)
            .map(|i| (0..n).map(|j| Integer::from((i == j) as i32)).collect())
            .collect();
        loop {
            let nz: Vec<usize> = (0..n).filter(|&i| a[i] != 0).collect();
            if nz.len() <= 1 {
                break;
            }
            let p = *nz.iter().min_by_key(|&&i| a[i].clone().abs()).unwrap();
            for &j in &nz {
                if j == p {
                    continue;
                }
                let q = a[j].clone().div_rem_floor(a[p].clone()).0;
                let step = Integer::from(&q * &a[p]);
                a[j] -= step;
                for row in u.iter_mut() {
                    let delta = Integer::from(&q * &row[p]);
                    row[j] -= delta;
                }
            }
        }
        let p = (0..n).find(|&i| a[i] != 0).expect("nonzero functional");
        if a[p] < 0 {
            for row in u.iter_mut() {
                row[p] = Integer::from(-&row[p]);
            }
        }
        let col = |j: usize| -> Vec<Scalar> { (0..n).map(|i| Scalar::real(u[i][j].clone().into())).collect() };
        let g0 = col(p);
        let h_basis: Vec<Vec<Scalar>> = (0..n).filter(|&j| j != p).map(col).collect();
        let c: Vec<Scalar> = ints.into_iter().map(|x| Scalar::real(x.into())).collect();
        let mut frame = vec![g0.clone()];
        frame.extend(h_basis.iter().cloned());
        let frame_inv = ExactMatrix::from_columns(n, &frame, &()).inverse()?;
        Ok(ExtensionShape {
            n,
            h,
            c,
            g0,
            h_basis,
            frame_inv,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> &Subspace<Scalar> {
        &self.h
    }

    /// The primitive integral functional vanishing on `H`.
    pub fn functional(&self) -> &[Scalar] {
        &self.c
    }

    /// Integral vector with `c(g₀) = 1`.
    pub fn g0(&self) -> &[Scalar] {
        &self.g0
    }

    /// A ℤ-basis of `H ∩ ℤ^n`.
    pub fn h_basis(&self) -> &[Vec<Scalar>] {
        &self.h_basis
    }

    pub fn weight(&self) -> WeightFiltration<Scalar> {
        WeightFiltration::new(
            self.n,
            BTreeMap::from([(-1, self.h.clone()), (0, Subspace::full(self.n, &()))]),
            &(),
        )
        .expect("valid two-step filtration")
    }

    pub fn weight_in<T: Field>(&self, ctx: &T::Ctx) -> WeightFiltration<T> {
        let h: Vec<Vec<T>> = self.h.basis().iter().map(|v| convert(v, ctx)).collect();
        WeightFiltration::new(
            self.n,
            BTreeMap::from([(-1, Subspace::span(self.n, &h, ctx)), (0, Subspace::full(self.n, ctx))]),
            ctx,
        )
        .expect("valid two-step filtration")
    }

    /// `Y[v₀] = −I + v₀ ⊗ c`.
    pub fn grading_matrix<T: Field>(&self, v0: &[T]) -> Matrix<T> {
        let ctx = v0[0].ctx();
        let c: Vec<T> = convert(&self.c, &ctx);
        Matrix::from_fn(self.n, self.n, &ctx, |i, j| {
            let mut x = v0[i].times(&c[j]);
            if i == j {
                x = x.minus(&T::one(&ctx));
            }
            x
        })
    }

    pub fn grading<T: Field>(&self, v0: &[T]) -> Grading<T> {
        let ctx = v0[0].ctx();
        let h: Vec<Vec<T>> = self.h.basis().iter().map(|v| convert(v, &ctx)).collect();
        Grading::from_pieces(BTreeMap::from([
            (-1, Subspace::span(self.n, &h, &ctx)),
            (0, Subspace::span(self.n, &[v0.to_vec()], &ctx)),
        ]))
        .expect("lift is transverse to H")
    }

    /// The lift `v₀ = Y·g₀ + g₀` of a grading of `W`.
    pub fn lift_of<T: Field>(&self, y: &Matrix<T>) -> Vec<T> {
        let ctx = y.ring_ctx().clone();
        let g0: Vec<T> = convert(&self.g0, &ctx);
        y.mul_vec(&g0).iter().zip(&g0).map(|(a, b)| a.plus(b)).collect()
    }

    /// Coordinates `t` with `v₀ = g₀ + Σ t_j h_j`.
    pub fn coordinates<T: Field>(&self, v0: &[T]) -> Vec<T> {
        let ctx = v0[0].ctx();
        let inv = self.frame_inv.map(&ctx, |x| T::from_scalar(x, &ctx));
        inv.mul_vec(v0)[1..].to_vec()
    }

    /// Coordinates of `v ∈ H` in the ℤ-basis of `H`.
    pub fn h_coordinates<T: Field>(&self, v: &[T]) -> Vec<T> {
        self.coordinates(v)
    }

    /// `Σ t_j h_j`.
    pub fn from_h_coordinates<T: Field>(&self, t: &[T], ctx: &T::Ctx) -> Vec<T> {
        let mut v = vec![T::zero(ctx); self.n];
        for (tj, hj) in t.iter().zip(&self.h_basis) {
            for (x, y) in v.iter_mut().zip(hj) {
                *x = x.plus(&tj.times(&T::from_scalar(y, ctx)));
            }
        }
        v
    }

    pub fn lift_from_coordinates<T: Field>(&self, t: &[T]) -> Vec<T> {
        let ctx = t.first().map(|x| x.ctx()).expect("nonempty coordinates");
        let mut v: Vec<T> = convert(&self.g0, &ctx);
        for (tj, hj) in t.iter().zip(&self.h_basis) {
            for (x, y) in v.iter_mut().zip(hj) {
                *x = x.plus(&tj.times(&T::from_scalar(y, &ctx)));
            }
        }
        v
    }

    /// `Y[v₀]` preserves `ℤ^n` exactly when `v₀` is integral.
    pub fn is_integral_lift(&self, v0: &[Scalar]) -> bool {
        v0.iter().all(|x| x.is_integer())
    }

    /// Largest distance of a lift coordinate to the nearest integer; imaginary
    /// parts count in full.
    pub fn lattice_distance(&self, t: &[Scalar]) -> rug::Rational {
        let mut best = rug::Rational::new();
        for x in t {
            let re = x.re().clone();
            let nearest = rug::Rational::from(re.round_ref());
            let d = rug::Rational::from(&re - &nearest).abs();
            let im = x.im().clone().abs();
            for v in [d, im] {
                if v > best {
                    best = v;
                }
            }
        }
        best
    }
}

/// Entrywise embedding of exact vectors.
pub fn convert<T: Ring>(v: &[Scalar], ctx: &T::Ctx) -> Vec<T> {
    v.iter().map(|x| T::from_scalar(x, ctx)).collect()
}

/// Chain vectors `N^d v` of a Jordan basis of `n` on the invariant subspace `s`,
/// each with the weight `center + (a − 1) − 2d` for a chain of length `a`.
fn jordan_weights<T: Field>(n: &Matrix<T>, s: &Subspace<T>, center: i32) -> Result<Vec<(i32, Vec<T>)>> {
    let dim = n.rows();
    let ctx = n.ring_ctx().clone();
    if !n.is_nilpotent() {
        return Err(Error::NotNilpotent);
    }
    let mut kernels = vec![Subspace::zero(dim, &ctx)];
    let mut power = Matrix::identity(dim, &ctx);
    loop {
        power = power.mul_ref(n);
        let k = Subspace::span(dim, &power.kernel(), &ctx).intersect(s)?;
        let done = k == *s;
        kernels.push(k);
        if done {
            break;
        }
    }
    let depth = kernels.len() - 1;
    let mut out = Vec::new();
    for a in (1..=depth).rev() {
        let above = if a < depth {
            kernels[a + 1].image(n)
        } else {
            Subspace::zero(dim, &ctx)
        };
        let floor = kernels[a - 1].sum(&above)?;
        for v in floor.complement_in(&kernels[a]) {
            let mut x = v;
            for d in 0..a {
                out.push((center + (a as i32 - 1) - 2 * d as i32, x.clone()));
                x = n.mul_vec(&x);
            }
        }
    }
    Ok(out)
}

fn filtration_from_chains<T: Field>(
    dim: usize,
    chains: &[(i32, Vec<T>)],
    ctx: &T::Ctx,
) -> BTreeMap<i32, Subspace<T>> {
    let mut out = BTreeMap::new();
    if chains.is_empty() {
        return out;
    }
    let lo = chains.iter().map(|c| c.0).min().unwrap();
    let hi = chains.iter().map(|c| c.0).max().unwrap();
    for k in lo..=hi {
        let vs: Vec<Vec<T>> = chains.iter().filter(|c| c.0 <= k).map(|c| c.1.clone()).collect();
        out.insert(k, Subspace::span(dim, &vs, ctx));
    }
    out
}

/// Checks `N·L_i ⊆ L_{i−2}` and that `N^l` induces `Gr_{c+l} ≅ Gr_{c−l}`.
fn check_monodromy_axioms<T: Field>(
    n: &Matrix<T>,
    l: &dyn Fn(i32) -> Subspace<T>,
    center: i32,
    span: i32,
) -> Result<()> {
    for i in center - span - 2..=center + span + 2 {
        if !l(i - 2).contains_subspace(&l(i).image(n)) {
            return Err(Error::Consistency(format!("N does not lower L_{i} by two")));
        }
    }
    let mut power = n.clone();
    for k in 1..=span + 1 {
        let lhs = l(center + k).image(&power).sum(&l(center - k - 1))?;
        if lhs != l(center - k) {
            return Err(Error::Consistency(format!("N^{k} is not onto Gr_{}", center - k)));
        }
        let up = l(center + k).dim() - l(center + k - 1).dim();
        let down = l(center - k).dim() - l(center - k - 1).dim();
        if up != down {
            return Err(Error::Consistency(format!("Gr_{} and Gr_{} differ in rank", center + k, center - k)));
        }
        power = power.mul_ref(n);
    }
    Ok(())
}

/// The monodromy weight filtration of a nilpotent `n`, centered at `center`.
pub fn monodromy_weight_filtration<T: Field>(n: &Matrix<T>, center: i32) -> Result<WeightFiltration<T>> {
    let dim = n.rows();
    let ctx = n.ring_ctx().clone();
    let full = Subspace::full(dim, &ctx);
    let chains = jordan_weights(n, &full, center)?;
    let mut steps = filtration_from_chains(dim, &chains, &ctx);
    if steps.is_empty() {
        steps.insert(center, full.clone());
    }
    let w = WeightFiltration::new(dim, steps, &ctx)?;
    let span = dim as i32;
    check_monodromy_axioms(n, &|k| w.get(k), center, span)?;
    Ok(w)
}

/// Relative weight filtration `M` of `(N, W)` for the two-step `W`.
#[derive(Clone, Debug)]
pub struct RelativeWeightData {
    pub m: WeightFiltration<Scalar>,
    /// Lift `v₀` of the `Gr₀` generator with `N·v₀ ∈ L₋₂`.
    pub lift: Vec<Scalar>,
}

pub fn relative_weight_filtration(n: &ExactMatrix, w: &WeightFiltration<Scalar>) -> Result<RelativeWeightData> {
    let shape = ExtensionShape::new(w)?;
    let dim = shape.dim();
    if !w.preserved_by(n) {
        return Err(Error::Precondition("N does not preserve W".into()));
    }
    if !n.is_nilpotent() {
        return Err(Error::NotNilpotent);
    }
    let h = shape.h().clone();
    let chains = jordan_weights(n, &h, -1)?;
    let l_steps = filtration_from_chains(dim, &chains, &());
    let l = |k: i32| -> Subspace<Scalar> {
        match (l_steps.keys().next(), l_steps.keys().next_back()) {
            (Some(&lo), Some(&hi)) => {
                if k < lo {
                    Subspace::zero(dim, &())
                } else if k > hi {
                    h.clone()
                } else {
                    l_steps[&k].clone()
                }
            }
            _ => Subspace::zero(dim, &()),
        }
    };
    check_monodromy_axioms(n, &l, -1, dim as i32)?;
    // N(g0 + Σ x_j h_j) ∈ L₋₂
    let ann = l(-2).annihilator_matrix();
    let g0 = shape.g0().to_vec();
    let rhs: Vec<Scalar> = ann.mul_vec(&n.mul_vec(&g0)).iter().map(|x| -x).collect();
    let cols: Vec<Vec<Scalar>> = shape.h_basis().iter().map(|hj| ann.mul_vec(&n.mul_vec(hj))).collect();
    let (x, directions) = if ann.rows() == 0 {
        (vec![Scalar::zero(); cols.len()], vec![])
    } else {
        let a = ExactMatrix::from_columns(ann.rows(), &cols, &());
        let x = solve_particular(&a, &rhs).ok_or_else(|| {
            Error::Nonexistence("no lift v0 of the Gr_0 generator with N v0 in L_{-2}".into())
        })?;
        (x, a.kernel())
    };
    let lift_for = |x: &[Scalar]| -> Vec<Scalar> {
        let mut v = g0.clone();
        for (xj, hj) in x.iter().zip(shape.h_basis()) {
            for (a, b) in v.iter_mut().zip(hj) {
                *a = &*a + &(xj * b);
            }
        }
        v
    };
    let build = |v0: &Vec<Scalar>| -> Result<WeightFiltration<Scalar>> {
        let lo = l_steps.keys().next().copied().unwrap_or(-1).min(-1);
        let hi = l_steps.keys().next_back().copied().unwrap_or(-1).max(0);
        let line = Subspace::span(dim, std::slice::from_ref(v0), &());
        let mut steps = BTreeMap::new();
        for j in lo..=hi {
            let s = if j <= -1 { l(j) } else { l(j).sum(&line)? };
            steps.insert(j, s);
        }
        steps.insert(hi + 1, Subspace::full(dim, &()));
        WeightFiltration::new(dim, steps, &())
    };
    let lift = lift_for(&x);
    let m = build(&lift)?;
    for d in &directions {
        let shifted: Vec<Scalar> = x.iter().zip(d).map(|(a, b)| a + b).collect();
        if build(&lift_for(&shifted))? != m {
            return Err(Error::Consistency("relative weight filtration depends on the lift".into()));
        }
    }
    let (lo, hi) = m.range();
    for j in lo - 2..=hi + 2 {
        if !m.get(j - 2).contains_subspace(&m.get(j).image(n)) {
            return Err(Error::Consistency(format!("N does not lower M_{j} by two")));
        }
        if m.get(j).intersect(&h)? != l(j) {
            return Err(Error::Consistency(format!("M_{j} does not induce L_{j} on Gr_-1")));
        }
        let expected = if j >= 0 { dim } else { h.dim() };
        if m.get(j).sum(&h)?.dim() != expected.max(h.dim()) {
            return Err(Error::Consistency(format!("M_{j} does not induce the trivial filtration on Gr_0")));
        }
    }
    Ok(RelativeWeightData { m, lift })
}

/// A solution of `a·x = b` with free variables set to zero.
pub fn solve_particular<T: Field>(a: &Matrix<T>, b: &[T]) -> Option<Vec<T>> {
    let ctx = a.ring_ctx().clone();
    let aug = a.hstack(&Matrix::from_columns(a.rows(), &[b.to_vec()], &ctx));
    let (r, pivots) = aug.rref();
    if pivots.contains(&a.cols()) {
        return None;
    }
    let mut x = vec![T::zero(&ctx); a.cols()];
    for (row, &p) in pivots.iter().enumerate() {
        x[p] = r.get(row, a.cols()).clone();
    }
    Some(x)
}

/// The unique grading `Y′` of the two-step `w` commuting with `n` and `y_m`.
pub fn deligne_grading_prime<T: Field>(
    n: &Matrix<T>,
    y_m: &Grading<T>,
    w: &WeightFiltration<Scalar>,
) -> Result<Grading<T>> {
    let shape = ExtensionShape::new(w)?;
    let ctx = n.ring_ctx().clone();
    let dim = shape.dim();
    let scale = n.max_magnitude().max(y_m.matrix().max_magnitude()).max(1.0);
    let bracket = y_m.matrix().commutator(n).add_ref(&n.scale(&T::from_scalar(&Scalar::int(2), &ctx)));
    if !bracket.is_negligible(scale) {
        return Err(Error::Precondition("[Y_M, N] != -2N".into()));
    }
    let wt: WeightFiltration<T> = shape.weight_in(&ctx);
    if !wt.preserved_by(y_m.matrix()) || !wt.preserved_by(n) {
        return Err(Error::Precondition("Y_M or N does not preserve W".into()));
    }
    let g0: Vec<T> = convert(shape.g0(), &ctx);
    let y0 = shape.grading_matrix(&g0);
    let c: Vec<T> = convert(shape.functional(), &ctx);
    let outer = |h: &[T]| Matrix::from_fn(dim, dim, &ctx, |i, j| h[i].times(&c[j]));
    let targets = [n, y_m.matrix()];
    let mut cols: Vec<Vec<T>> = Vec::new();
    for hj in shape.h_basis() {
        let e = outer(&convert(hj, &ctx));
        let mut col = Vec::new();
        for t in targets {
            col.extend(e.commutator(t).flatten());
        }
        cols.push(col);
    }
    let mut rhs = Vec::new();
    for t in targets {
        rhs.extend(y0.commutator(t).flatten().into_iter().map(|x| x.negate()));
    }
    let a = Matrix::from_columns(rhs.len(), &cols, &ctx);
    let x = a.solve(&rhs).map_err(|e| match e {
        Error::Inconsistent => Error::Consistency("no grading of W commutes with N and Y_M".into()),
        Error::NotUnique(d) => Error::Consistency(format!("{d}-dimensional family of gradings commutes with N and Y_M")),
        other => other,
    })?;
    let v0 = shape.lift_from_coordinates(&x);
    let y = shape.grading(&v0);
    for t in targets {
        if !y.matrix().commutator(t).is_negligible(scale) {
            return Err(Error::Consistency("Y' does not commute with its inputs".into()));
        }
    }
    if y_m.is_real() && !y.is_real() {
        return Err(Error::Consistency("Y' is not real although Y_M is".into()));
    }
    Ok(y)
}
