//! Mixed Hodge structures: validation, Deligne bigradings and gradings, the induced
//! bigrading on endomorphisms, chart subalgebras and coordinates, δ-splittings and
//! polarizations.

use crate::algebra::{ExactMatrix, Field, Matrix, Ring, Scalar, Subspace};
use crate::error::{Error, Result};
use crate::filtration::{convert, ExtensionShape, Grading, HodgeFiltration, WeightFiltration};
use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq)]
pub struct MixedHodgeStructure<T: Field> {
    pub f: HodgeFiltration<T>,
    pub w: WeightFiltration<T>,
}

/// Outcome of a purity check; `violation` is the first failing `(k, p)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MhsReport {
    pub valid: bool,
    pub violation: Option<(i32, i32)>,
}

/// Checks that `F` induces a pure Hodge structure of weight `k` on every `Gr^W_k`:
/// `Gr_k = F^p ⊕ conj(F^{k−p+1})` for all `p`.
pub fn validate_mhs<T: Field>(f: &HodgeFiltration<T>, w: &WeightFiltration<T>) -> Result<MhsReport> {
    if f.ambient() != w.ambient() {
        return Err(Error::AmbientMismatch(f.ambient(), w.ambient()));
    }
    let (bottom, top) = f.range();
    for k in w.weights() {
        let wk = w.get(k);
        let below = w.get(k - 1);
        for p in (bottom.min(k - top) - 1)..=(top.max(k - bottom) + 1) {
            let a = f.get(p).intersect(&wk)?.sum(&below)?;
            let b = f.get(k - p + 1).conj().intersect(&wk)?.sum(&below)?;
            let spans = a.sum(&b)?.dim() == wk.dim();
            let meets = a.intersect(&b)?.dim() == below.dim();
            if !(spans && meets) {
                return Ok(MhsReport {
                    valid: false,
                    violation: Some((k, p)),
                });
            }
        }
    }
    Ok(MhsReport {
        valid: true,
        violation: None,
    })
}

impl<T: Field> MixedHodgeStructure<T> {
    pub fn new(f: HodgeFiltration<T>, w: WeightFiltration<T>) -> Result<Self> {
        let report = validate_mhs(&f, &w)?;
        if let Some((k, p)) = report.violation {
            return Err(Error::InvalidMhs { k, p });
        }
        Ok(MixedHodgeStructure { f, w })
    }

    pub fn ambient(&self) -> usize {
        self.f.ambient()
    }

    pub fn image(&self, g: &Matrix<T>) -> Result<Self> {
        Self::new(self.f.image(g), self.w.image(g))
    }
}

/// Deligne's `I^{p,q}` decomposition.
#[derive(Clone, Debug, PartialEq)]
pub struct Bigrading<T: Field> {
    pieces: BTreeMap<(i32, i32), Subspace<T>>,
}

pub fn deligne_bigrading<T: Field>(m: &MixedHodgeStructure<T>) -> Result<Bigrading<T>> {
    let (bottom, top) = m.f.range();
    let mut pieces = BTreeMap::new();
    for p in bottom..=top {
        for q in bottom..=top {
            let k = p + q;
            let mut acc = m.f.get(q).conj().intersect(&m.w.get(k))?;
            for j in 1..=(q - bottom + 2) {
                acc = acc.sum(&m.f.get(q - j).conj().intersect(&m.w.get(k - j - 1))?)?;
            }
            let piece = m.f.get(p).intersect(&m.w.get(k))?.intersect(&acc)?;
            if !piece.is_zero() {
                pieces.insert((p, q), piece);
            }
        }
    }
    let b = Bigrading { pieces };
    b.check(m)?;
    Ok(b)
}

impl<T: Field> Bigrading<T> {
    pub fn pieces(&self) -> &BTreeMap<(i32, i32), Subspace<T>> {
        &self.pieces
    }

    pub fn piece(&self, p: i32, q: i32) -> Option<&Subspace<T>> {
        self.pieces.get(&(p, q))
    }

    fn ambient(&self) -> usize {
        self.pieces.values().next().map(|s| s.ambient()).unwrap_or(0)
    }

    fn ctx(&self) -> T::Ctx {
        self.pieces.values().next().expect("nonempty bigrading").ring_ctx().clone()
    }

    fn sum_where(&self, pred: impl Fn(i32, i32) -> bool) -> Subspace<T> {
        let mut acc = Subspace::zero(self.ambient(), &self.ctx());
        for (&(p, q), s) in &self.pieces {
            if pred(p, q) {
                acc = acc.sum(s).expect("same ambient");
            }
        }
        acc
    }

    /// Re-verifies direct sum and the three defining properties.
    pub fn check(&self, m: &MixedHodgeStructure<T>) -> Result<()> {
        let n = m.ambient();
        let total: usize = self.pieces.values().map(|s| s.dim()).sum();
        if total != n || !self.sum_where(|_, _| true).is_full() {
            return Err(Error::Consistency("bigrading pieces do not form a direct sum decomposition".into()));
        }
        let (bottom, top) = m.f.range();
        for p in bottom..=top + 1 {
            if self.sum_where(|a, _| a >= p) != m.f.get(p) {
                return Err(Error::Consistency(format!("F^{p} is not the sum of I^(a,b) with a >= {p}")));
            }
        }
        let (lo, hi) = m.w.range();
        for k in lo - 1..=hi {
            if self.sum_where(|a, b| a + b <= k) != m.w.get(k) {
                return Err(Error::Consistency(format!("W_{k} is not the sum of I^(a,b) with a+b <= {k}")));
            }
        }
        for (&(p, q), s) in &self.pieces {
            let lower = self.sum_where(|r, t| r < q && t < p);
            let target = self.piece(q, p).cloned().unwrap_or_else(|| Subspace::zero(n, &self.ctx())).sum(&lower)?;
            let dim_qp = self.piece(q, p).map(|x| x.dim()).unwrap_or(0);
            if !target.contains_subspace(&s.conj()) || dim_qp != s.dim() {
                return Err(Error::Consistency(format!("conj(I^({p},{q})) is not I^({q},{p}) modulo lower terms")));
            }
        }
        Ok(())
    }

    /// `conj(I^{p,q}) = I^{q,p}` exactly.
    pub fn is_real_split(&self) -> bool {
        self.pieces.iter().all(|(&(p, q), s)| self.piece(q, p).is_some_and(|t| *t == s.conj()))
    }

    pub fn grading(&self) -> Grading<T> {
        let mut by_weight: BTreeMap<i32, Subspace<T>> = BTreeMap::new();
        for (&(p, q), s) in &self.pieces {
            let e = by_weight
                .entry(p + q)
                .or_insert_with(|| Subspace::zero(s.ambient(), s.ring_ctx()));
            *e = e.sum(s).expect("same ambient");
        }
        Grading::from_pieces(by_weight).expect("bigrading spans")
    }

    pub fn image(&self, g: &Matrix<T>) -> Self {
        Bigrading {
            pieces: self.pieces.iter().map(|(&k, s)| (k, s.image(g))).collect(),
        }
    }

    /// Adapted basis: columns ordered by `p` descending, then `q` descending.
    pub fn frame(&self) -> (Matrix<T>, Vec<(i32, i32)>) {
        let mut keys: Vec<&(i32, i32)> = self.pieces.keys().collect();
        keys.sort_by(|a, b| b.cmp(a));
        let mut cols = Vec::new();
        let mut labels = Vec::new();
        for k in keys {
            for v in self.pieces[k].basis() {
                cols.push(v.clone());
                labels.push(*k);
            }
        }
        (Matrix::from_columns(self.ambient(), &cols, &self.ctx()), labels)
    }
}

pub fn deligne_grading<T: Field>(m: &MixedHodgeStructure<T>) -> Result<Grading<T>> {
    let y = deligne_bigrading(m)?.grading();
    if !y.grades(&m.w) || !y.preserves(&m.f) {
        return Err(Error::Consistency("Deligne grading fails to grade W or preserve F".into()));
    }
    Ok(y)
}

/// The bigrading `𝔤^{r,s}` of `End(V)` induced by `I^{p,q}`.
#[derive(Clone, Debug)]
pub struct EndBigrading<T: Field> {
    frame: Matrix<T>,
    frame_inv: Matrix<T>,
    labels: Vec<(i32, i32)>,
}

pub fn induced_endomorphism_bigrading<T: Field>(m: &MixedHodgeStructure<T>) -> Result<EndBigrading<T>> {
    EndBigrading::new(&deligne_bigrading(m)?)
}

impl<T: Field> EndBigrading<T> {
    pub fn new(b: &Bigrading<T>) -> Result<Self> {
        let (frame, labels) = b.frame();
        let frame_inv = frame.inverse()?;
        Ok(EndBigrading {
            frame,
            frame_inv,
            labels,
        })
    }

    pub fn dim(&self) -> usize {
        self.frame.rows()
    }

    /// All `(r, s)` occurring as differences of labels.
    pub fn types(&self) -> Vec<(i32, i32)> {
        let mut out: Vec<(i32, i32)> = self
            .labels
            .iter()
            .flat_map(|a| self.labels.iter().map(move |b| (a.0 - b.0, a.1 - b.1)))
            .collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn components(&self, x: &Matrix<T>) -> BTreeMap<(i32, i32), Matrix<T>> {
        let n = self.dim();
        let ctx = x.ring_ctx().clone();
        let xp = self.frame_inv.mul_ref(x).mul_ref(&self.frame);
        let mut out: BTreeMap<(i32, i32), Matrix<T>> = BTreeMap::new();
        let scale = xp.max_magnitude().max(1.0);
        for i in 0..n {
            for j in 0..n {
                if xp.get(i, j).negligible(scale) {
                    continue;
                }
                let t = (self.labels[i].0 - self.labels[j].0, self.labels[i].1 - self.labels[j].1);
                out.entry(t)
                    .or_insert_with(|| Matrix::zeros(n, n, &ctx))
                    .set(i, j, xp.get(i, j).clone());
            }
        }
        out.into_iter()
            .map(|(t, m)| (t, self.frame.mul_ref(&m).mul_ref(&self.frame_inv)))
            .collect()
    }

    pub fn component(&self, x: &Matrix<T>, r: i32, s: i32) -> Matrix<T> {
        self.components(x)
            .remove(&(r, s))
            .unwrap_or_else(|| Matrix::zeros(self.dim(), self.dim(), x.ring_ctx()))
    }

    /// Whether `x` lies in `𝔤^{r,s}`.
    pub fn has_type(&self, x: &Matrix<T>, r: i32, s: i32) -> bool {
        self.components(x).keys().all(|&t| t == (r, s))
    }

    /// `𝔤^{r,s}` as a subspace of the flattened `n×n` matrices.
    pub fn piece(&self, r: i32, s: i32) -> Subspace<T> {
        self.span_where(|t| t == (r, s))
    }

    pub fn span_where(&self, pred: impl Fn((i32, i32)) -> bool) -> Subspace<T> {
        let n = self.dim();
        let ctx = self.frame.ring_ctx().clone();
        let mut vs = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let t = (self.labels[i].0 - self.labels[j].0, self.labels[i].1 - self.labels[j].1);
                if pred(t) {
                    let e = Matrix::elementary(n, i, j, &ctx);
                    vs.push(self.frame.mul_ref(&e).mul_ref(&self.frame_inv).flatten());
                }
            }
        }
        Subspace::span(n * n, &vs, &ctx)
    }
}

/// Skew integral form on `V` whose restriction to `W₋₁` polarizes `Gr₋₁`.
///
/// Convention: `i^{p−q}·Q(u, conj u) > 0` on nonzero `u ∈ I^{p,q}`, `p + q = −1`;
/// on `I^{0,−1}` this is `h(u, v) = i·Q(u, conj v)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolarizationForm {
    matrix: ExactMatrix,
}

impl PolarizationForm {
    pub fn new(matrix: ExactMatrix, h: &Subspace<Scalar>) -> Result<Self> {
        if !matrix.is_square() || matrix.rows() != h.ambient() {
            return Err(Error::DimensionMismatch("polarization must be n x n".into()));
        }
        if !matrix.is_integral() {
            return Err(Error::Precondition("polarization must be integral".into()));
        }
        if !matrix.add_ref(&matrix.transpose()).is_zero() {
            return Err(Error::Precondition("polarization must be skew-symmetric".into()));
        }
        let bh = h.basis_matrix();
        if bh.transpose().mul_ref(&matrix).mul_ref(&bh).inverse().is_err() {
            return Err(Error::Precondition("polarization is degenerate on W_-1".into()));
        }
        Ok(PolarizationForm { matrix })
    }

    pub fn matrix(&self) -> &ExactMatrix {
        &self.matrix
    }

    pub fn pair<T: Field>(&self, u: &[T], v: &[T]) -> T {
        let ctx = u[0].ctx();
        let q = self.matrix.map(&ctx, |x| T::from_scalar(x, &ctx));
        let qv = q.mul_vec(v);
        u.iter().zip(&qv).fold(T::zero(&ctx), |acc, (a, b)| acc.plus(&a.times(b)))
    }

    /// `X` is an infinitesimal isometry on `h`.
    pub fn is_infinitesimal_isometry(&self, x: &ExactMatrix, h: &Subspace<Scalar>) -> bool {
        let bh = h.basis_matrix();
        let sym = x.transpose().mul_ref(&self.matrix).add_ref(&self.matrix.mul_ref(x));
        bh.transpose().mul_ref(&sym).mul_ref(&bh).is_zero()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PolarizationReport {
    pub valid: bool,
    /// `Q(F^p, F^{−p}) = 0` on `W₋₁`.
    pub isotropic: bool,
    /// First `(p, q)` where the Hermitian form fails to be positive.
    pub failure: Option<(i32, i32)>,
    /// `i^{p−q}·Q(b, conj b)` for the echelon basis vectors `b` of each `I^{p,q}`.
    pub values: Vec<((i32, i32), Vec<String>)>,
}

/// Hodge–Riemann checks for the weight `−1` structure `F ∩ W₋₁`.
pub fn validate_polarization(f: &HodgeFiltration<Scalar>, h: &Subspace<Scalar>, q: &PolarizationForm) -> Result<PolarizationReport> {
    let (bottom, top) = f.range();
    let fh = |p: i32| f.get(p).intersect(h).expect("same ambient");
    let mut isotropic = true;
    for p in bottom..=top + 1 {
        for a in fh(p).basis() {
            for b in fh(-p).basis() {
                if !q.pair(a, b).is_zero() {
                    isotropic = false;
                }
            }
        }
    }
    let mut failure = None;
    let mut values = Vec::new();
    for p in bottom - 1..=top + 1 {
        let qq = -1 - p;
        let piece = fh(p).intersect(&fh(qq).conj())?;
        if piece.is_zero() {
            continue;
        }
        let phase = match (p - qq).rem_euclid(4) {
            0 => Scalar::one(),
            1 => Scalar::i(),
            2 => Scalar::int(-1),
            _ => -Scalar::i(),
        };
        let basis = piece.basis();
        let d = basis.len();
        let gram = ExactMatrix::from_fn(d, d, &(), |j, k| {
            let conj: Vec<Scalar> = basis[k].iter().map(|x| x.conj()).collect();
            &phase * &q.pair(&basis[j], &conj)
        });
        values.push(((p, qq), (0..d).map(|j| gram.get(j, j).to_string()).collect()));
        let positive = (1..=d).all(|m| {
            let idx: Vec<usize> = (0..m).collect();
            let minor = determinant(&gram.select(&idx, &idx));
            minor.is_real() && minor.re().cmp0().is_gt()
        });
        if !positive && failure.is_none() {
            failure = Some((p, qq));
        }
    }
    Ok(PolarizationReport {
        valid: isotropic && failure.is_none(),
        isotropic,
        failure,
        values,
    })
}

/// Exact determinant by fraction-free elimination over the Gaussian rationals.
pub fn determinant(m: &ExactMatrix) -> Scalar {
    let n = m.rows();
    let mut a = m.clone();
    let mut det = Scalar::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a.get(r, c).is_zero()) else {
            return Scalar::zero();
        };
        if p != c {
            for j in 0..n {
                let t = a.get(p, j).clone();
                a.set(p, j, a.get(c, j).clone());
                a.set(c, j, t);
            }
            det = -det;
        }
        let pivot = a.get(c, c).clone();
        det = &det * &pivot;
        for r in c + 1..n {
            let f = a.get(r, c) / &pivot;
            if f.is_zero() {
                continue;
            }
            for j in c..n {
                let v = a.get(r, j) - &(&f * a.get(c, j));
                a.set(r, j, v);
            }
        }
    }
    det
}

/// The Lie algebra `𝔤_ℂ`: endomorphisms mapping `V` into `W₋₁` (so zero on `Gr₀`)
/// and acting on `W₋₁` as infinitesimal isometries of `Q`; flattened row-major.
pub fn lie_algebra<T: Field>(shape: &ExtensionShape, q: &PolarizationForm, ctx: &T::Ctx) -> Subspace<T> {
    let n = shape.dim();
    let c: Vec<T> = convert(shape.functional(), ctx);
    let hb: Vec<Vec<T>> = shape.h().basis().iter().map(|v| convert(v, ctx)).collect();
    let qm = q.matrix().map(ctx, |x| T::from_scalar(x, ctx));
    let conditions = |x: &Matrix<T>| -> Vec<T> {
        let mut out = Vec::new();
        let cx = x.transpose().mul_vec(&c);
        out.extend(cx);
        let sym = x.transpose().mul_ref(&qm).add_ref(&qm.mul_ref(x));
        for a in &hb {
            let sa = sym.mul_vec(a);
            for b in &hb {
                out.push(b.iter().zip(&sa).fold(T::zero(ctx), |acc, (u, v)| acc.plus(&u.times(v))));
            }
        }
        out
    };
    let mut cols = Vec::new();
    for i in 0..n {
        for j in 0..n {
            cols.push(conditions(&Matrix::elementary(n, i, j, ctx)));
        }
    }
    let rows = cols[0].len();
    let a = Matrix::from_columns(rows, &cols, ctx);
    Subspace::span(n * n, &a.kernel(), ctx)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ChartFlavor {
    /// `q_F = ⊕_{p<0, p+q≤0} 𝔤^{p,q}`.
    Interior,
    /// `q_∞ = ⊕_{r<0} 𝔤^{r,s}`.
    Puncture,
}

/// The chart subalgebra inside `𝔤`, checked to be a nilpotent subalgebra
/// complementary to the stabilizer of `F`.
pub fn chart_subalgebra<T: Field>(
    m: &MixedHodgeStructure<T>,
    g: &Subspace<T>,
    flavor: ChartFlavor,
) -> Result<Subspace<T>> {
    let eb = induced_endomorphism_bigrading(m)?;
    let n = m.ambient();
    let ctx = g.ring_ctx().clone();
    let mut total = Subspace::zero(n * n, &ctx);
    let mut chart = Subspace::zero(n * n, &ctx);
    let mut stab = Subspace::zero(n * n, &ctx);
    for (r, s) in eb.types() {
        let piece = eb.piece(r, s).intersect(g)?;
        total = total.sum(&piece)?;
        let in_chart = match flavor {
            ChartFlavor::Interior => r < 0 && r + s <= 0,
            ChartFlavor::Puncture => r < 0,
        };
        if in_chart {
            chart = chart.sum(&piece)?;
        } else if r >= 0 {
            stab = stab.sum(&piece)?;
        }
    }
    if total != *g {
        return Err(Error::Precondition("the Lie algebra is not compatible with the bigrading".into()));
    }
    if chart.dim() + stab.dim() != g.dim() || !chart.intersect(&stab)?.is_zero() {
        return Err(Error::Consistency("chart subalgebra is not complementary to the stabilizer of F".into()));
    }
    let basis: Vec<Matrix<T>> = chart.basis().iter().map(|v| Matrix::from_flat(n, n, v.clone(), &ctx)).collect();
    let mut generic = Matrix::zeros(n, n, &ctx);
    for (k, b) in basis.iter().enumerate() {
        generic = generic.add_ref(&b.scale(&T::from_scalar(&Scalar::int(k as i64 + 1), &ctx)));
        for c in &basis {
            if !chart.contains(&b.commutator(c).flatten()) {
                return Err(Error::Consistency("chart subspace is not closed under brackets".into()));
            }
        }
    }
    let scale = generic.max_magnitude().max(1.0);
    if !generic.pow(n as u32).is_negligible(scale.powi(n as i32)) {
        return Err(Error::Consistency("chart subalgebra is not nilpotent".into()));
    }
    Ok(chart)
}

/// Block factorization `u = B·L·B⁻¹` with `L` block lower unitriangular and
/// `u·F_base = target`, for a frame `B` adapted to the Hodge blocks (top first).
///
/// `targets[b]` holds a basis of the target step matching the first `b + 1` blocks,
/// written in frame coordinates. Works over any ring given an inverse for the
/// square top blocks.
pub fn block_lower_factor<R: Ring>(
    sizes: &[usize],
    targets: &[Matrix<R>],
    inv: impl Fn(&Matrix<R>) -> Result<Matrix<R>>,
) -> Result<Matrix<R>> {
    let n: usize = sizes.iter().sum();
    let ctx = targets[0].ring_ctx().clone();
    let mut l = Matrix::identity(n, &ctx);
    let mut offset = 0;
    for (b, &size) in sizes.iter().enumerate() {
        let m = offset + size;
        let d = &targets[b];
        if d.cols() != m {
            return Err(Error::OutOfChart(format!("target step {b} has dimension {} instead of {m}", d.cols())));
        }
        let top: Vec<usize> = (0..m).collect();
        let all_cols: Vec<usize> = (0..m).collect();
        let s = d.select(&top, &all_cols);
        let s_inv = inv(&s).map_err(|_| Error::OutOfChart(format!("target is not transverse at block {b}")))?;
        let x = d.mul_ref(&s_inv);
        for j in offset..m {
            for i in 0..n {
                l.set(i, j, x.get(i, j).clone());
            }
        }
        offset = m;
    }
    Ok(l)
}

/// Hodge blocks of a frame: sizes of consecutive runs of equal `p`.
pub fn hodge_blocks(labels: &[(i32, i32)]) -> Vec<(i32, usize)> {
    let mut out: Vec<(i32, usize)> = Vec::new();
    for &(p, _) in labels {
        match out.last_mut() {
            Some((q, c)) if *q == p => *c += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

/// The unique `Γ ∈ q` with `exp(Γ)·F_base = target`.
pub fn chart_coordinate<T: Field>(
    target: &HodgeFiltration<T>,
    base: &MixedHodgeStructure<T>,
    q: &Subspace<T>,
) -> Result<Matrix<T>> {
    let n = base.ambient();
    let ctx = q.ring_ctx().clone();
    let (frame, labels) = deligne_bigrading(base)?.frame();
    let frame_inv = frame.inverse()?;
    let blocks = hodge_blocks(&labels);
    let sizes: Vec<usize> = blocks.iter().map(|b| b.1).collect();
    let targets: Vec<Matrix<T>> = blocks
        .iter()
        .map(|(p, _)| {
            let basis = target.get(*p).basis().to_vec();
            frame_inv.mul_ref(&Matrix::from_columns(n, &basis, &ctx))
        })
        .collect();
    let l = block_lower_factor(&sizes, &targets, |m| m.inverse())?;
    let u = frame.mul_ref(&l).mul_ref(&frame_inv);
    let gamma = u.log_unipotent()?;
    if !q.contains(&gamma.flatten()) {
        return Err(Error::OutOfChart("the chart coordinate leaves the chart subalgebra".into()));
    }
    if base.f.image(&gamma.exp_nilpotent()?) != *target {
        return Err(Error::OutOfChart("chart roundtrip failed".into()));
    }
    Ok(gamma)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SplittingData<T: Field> {
    pub delta: Matrix<T>,
    pub f_hat: HodgeFiltration<T>,
}

/// Deligne's δ-splitting: real `δ ∈ Λ` with `F = exp(iδ)·F̂` and `(F̂, W)` ℝ-split.
///
/// Solves `conj(Y) = exp(u)·Y` for `u` by induction on the `ad Y` depth (each new
/// component is the current defect divided by its depth), then sets `δ = (i/2)·u`.
pub fn delta_splitting<T: Field>(m: &MixedHodgeStructure<T>) -> Result<SplittingData<T>> {
    let n = m.ambient();
    let ctx = m.f.ring_ctx().clone();
    let bigrading = deligne_bigrading(m)?;
    let y = bigrading.grading();
    let ym = y.matrix();
    let target = ym.conj().sub_ref(ym);
    let scale = ym.max_magnitude().max(1.0);
    let act = |u: &Matrix<T>| -> Result<Matrix<T>> {
        let e = u.exp_nilpotent()?;
        let ei = u.neg_ref().exp_nilpotent()?;
        Ok(e.mul_ref(ym).mul_ref(&ei))
    };
    let mut u = Matrix::zeros(n, n, &ctx);
    let depth = 2 * n as i32;
    for d in 1..=depth {
        let defect = target.sub_ref(&act(&u)?.sub_ref(ym));
        let comp = y.ad_component(&defect, -d);
        u = u.add_ref(&comp.scale_rational(&rug::Rational::from((1, d as u32))));
    }
    if !act(&u)?.sub_ref(&ym.conj()).is_negligible(scale) {
        return Err(Error::SplittingFailure(depth));
    }
    let half_i = T::from_scalar(&Scalar::gauss((0, 1), (1, 2)), &ctx);
    let delta = u.scale(&half_i);
    let dscale = delta.max_magnitude().max(1.0);
    if !delta.im_part().is_negligible(dscale) {
        return Err(Error::Consistency("splitting operator is not real".into()));
    }
    let delta = delta.re_part();
    let eb = EndBigrading::new(&bigrading)?;
    if eb.components(&delta).keys().any(|&(r, s)| r >= 0 || s >= 0) {
        return Err(Error::Consistency("splitting operator is not in Lambda".into()));
    }
    let minus_i = T::from_scalar(&Scalar::gauss((0, 1), (-1, 1)), &ctx);
    let f_hat = m.f.image(&delta.scale(&minus_i).exp_nilpotent()?);
    let split = deligne_bigrading(&MixedHodgeStructure::new(f_hat.clone(), m.w.clone())?)?;
    if !split.is_real_split() {
        return Err(Error::Consistency("corrected structure is not R-split".into()));
    }
    Ok(SplittingData { delta, f_hat })
}

/// Whether `g` lies in `G_ℂ`: preserves `W`, is `±1` on `Gr₀` and an isometry of `Q` on `W₋₁`.
pub fn is_group_element(g: &ExactMatrix, shape: &ExtensionShape, q: &PolarizationForm) -> bool {
    let w = shape.weight();
    if !w.preserved_by(g) || g.inverse().is_err() {
        return false;
    }
    let g0 = shape.g0();
    let c = shape.functional();
    let image = g.mul_vec(g0);
    let on_gr0 = image.iter().zip(c).fold(Scalar::zero(), |acc, (a, b)| &acc + &(a * b));
    if on_gr0 != Scalar::one() && on_gr0 != Scalar::int(-1) {
        return false;
    }
    let bh = shape.h().basis_matrix();
    let lhs = bh.transpose().mul_ref(&g.transpose()).mul_ref(q.matrix()).mul_ref(g).mul_ref(&bh);
    let rhs = bh.transpose().mul_ref(q.matrix()).mul_ref(&bh);
    lhs == rhs
}
