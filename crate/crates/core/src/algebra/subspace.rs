use super::{Field, Matrix};
use crate::error::{Error, Result};

/// Linear subspace of `T^n`, stored as the nonzero rows of its reduced row echelon
/// form. In exact mode two equal subspaces have identical representations.
#[derive(Clone, Debug)]
pub struct Subspace<T: Field> {
    ambient: usize,
    basis: Vec<Vec<T>>,
    pivots: Vec<usize>,
    ctx: T::Ctx,
}

impl<T: Field> PartialEq for Subspace<T> {
    fn eq(&self, o: &Self) -> bool {
        if self.ambient != o.ambient || self.dim() != o.dim() {
            return false;
        }
        if T::is_exact() {
            self.basis == o.basis
        } else {
            self.pivots == o.pivots && o.basis.iter().all(|v| self.contains(v))
        }
    }
}

impl<T: Field> Subspace<T> {
    pub fn span(ambient: usize, vectors: &[Vec<T>], ctx: &T::Ctx) -> Self {
        if vectors.is_empty() {
            return Self::zero(ambient, ctx);
        }
        assert!(vectors.iter().all(|v| v.len() == ambient), "vector length differs from ambient dimension");
        let m = Matrix::from_rows(vectors.to_vec(), ctx).expect("rectangular");
        let (r, pivots) = m.rref();
        let basis = (0..pivots.len()).map(|i| r.row(i)).collect();
        Subspace {
            ambient,
            basis,
            pivots,
            ctx: ctx.clone(),
        }
    }

    pub fn zero(ambient: usize, ctx: &T::Ctx) -> Self {
        Subspace {
            ambient,
            basis: vec![],
            pivots: vec![],
            ctx: ctx.clone(),
        }
    }

    pub fn full(ambient: usize, ctx: &T::Ctx) -> Self {
        let id = Matrix::<T>::identity(ambient, ctx);
        Subspace {
            ambient,
            basis: id.row_vectors(),
            pivots: (0..ambient).collect(),
            ctx: ctx.clone(),
        }
    }

    /// Span of the columns of `m`.
    pub fn column_span(m: &Matrix<T>) -> Self {
        Self::span(m.rows(), &m.columns(), m.ring_ctx())
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.ambient
    }

    pub fn basis(&self) -> &[Vec<T>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn ring_ctx(&self) -> &T::Ctx {
        &self.ctx
    }

    /// `n × dim` matrix whose columns are the basis vectors.
    pub fn basis_matrix(&self) -> Matrix<T> {
        Matrix::from_columns(self.ambient, &self.basis, &self.ctx)
    }

    fn check(&self, o: &Self) -> Result<()> {
        if self.ambient != o.ambient {
            return Err(Error::AmbientMismatch(self.ambient, o.ambient));
        }
        Ok(())
    }

    /// `v − Σ v[pivot_i]·b_i`; zero exactly when `v` lies in the span.
    pub fn residual(&self, v: &[T]) -> Vec<T> {
        let mut r = v.to_vec();
        for (b, &p) in self.basis.iter().zip(&self.pivots) {
            let c = v[p].clone();
            if c.is_zero() {
                continue;
            }
            for (x, y) in r.iter_mut().zip(b) {
                *x = x.minus(&c.times(y));
            }
        }
        r
    }

    pub fn contains(&self, v: &[T]) -> bool {
        let scale = v.iter().map(|x| x.magnitude()).fold(1.0, f64::max);
        self.residual(v).iter().all(|x| x.negligible(scale))
    }

    pub fn contains_subspace(&self, o: &Self) -> bool {
        o.ambient == self.ambient && o.basis.iter().all(|v| self.contains(v))
    }

    /// Coordinates of `v` in the echelon basis, if `v` lies in the span.
    pub fn coordinates(&self, v: &[T]) -> Option<Vec<T>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    pub fn sum(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let mut vs = self.basis.clone();
        vs.extend(o.basis.iter().cloned());
        Ok(Self::span(self.ambient, &vs, &self.ctx))
    }

    /// Rows `φ` with `φ·v = 0` exactly for `v` in the span; a basis of the annihilator.
    pub fn annihilator(&self) -> Vec<Vec<T>> {
        let mut out = Vec::new();
        for c in (0..self.ambient).filter(|c| !self.pivots.contains(c)) {
            let mut phi = vec![T::zero(&self.ctx); self.ambient];
            phi[c] = T::one(&self.ctx);
            for (b, &p) in self.basis.iter().zip(&self.pivots) {
                phi[p] = b[c].negate();
            }
            out.push(phi);
        }
        out
    }

    pub fn annihilator_matrix(&self) -> Matrix<T> {
        let rows = self.annihilator();
        if rows.is_empty() {
            return Matrix::zeros(0, self.ambient, &self.ctx);
        }
        Matrix::from_rows(rows, &self.ctx).expect("rectangular")
    }

    /// Kernel of the stacked annihilators.
    pub fn intersect(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        if self.is_zero() || o.is_zero() {
            return Ok(Self::zero(self.ambient, &self.ctx));
        }
        let mut rows = self.annihilator();
        rows.extend(o.annihilator());
        if rows.is_empty() {
            return Ok(Self::full(self.ambient, &self.ctx));
        }
        let m = Matrix::from_rows(rows, &self.ctx).expect("rectangular");
        Ok(Self::span(self.ambient, &m.kernel(), &self.ctx))
    }

    pub fn conj(&self) -> Self {
        let vs: Vec<Vec<T>> = self.basis.iter().map(|v| v.iter().map(|x| x.conj()).collect()).collect();
        Self::span(self.ambient, &vs, &self.ctx)
    }

    pub fn is_real(&self) -> bool {
        *self == self.conj()
    }

    /// `m·S`.
    pub fn image(&self, m: &Matrix<T>) -> Self {
        let vs: Vec<Vec<T>> = self.basis.iter().map(|v| m.mul_vec(v)).collect();
        Self::span(m.rows(), &vs, &self.ctx)
    }

    /// `{x : m·x ∈ S}`.
    pub fn preimage(&self, m: &Matrix<T>) -> Self {
        let ann = self.annihilator_matrix();
        if ann.rows() == 0 {
            return Self::full(m.cols(), &self.ctx);
        }
        Self::span(m.cols(), &ann.mul_ref(m).kernel(), &self.ctx)
    }

    /// Vectors completing a basis of `self` to a basis of `larger`, chosen greedily
    /// from the echelon basis of `larger`.
    pub fn complement_in(&self, larger: &Self) -> Vec<Vec<T>> {
        let mut acc = self.clone();
        let mut out = Vec::new();
        for v in &larger.basis {
            if !acc.contains(v) {
                acc = acc.sum(&Self::span(self.ambient, std::slice::from_ref(v), &self.ctx)).expect("same ambient");
                out.push(v.clone());
            }
        }
        out
    }
}
