use super::{Field, NumericScalar, Poly, Ring, Scalar};
use crate::error::{Error, Result};
use rug::Rational;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Dense row-major matrix over a ring.
#[derive(Clone, PartialEq)]
pub struct Matrix<T: Ring> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
    ctx: T::Ctx,
}

pub type ExactMatrix = Matrix<Scalar>;
pub type NumericMatrix = Matrix<NumericScalar>;
pub type PolyMatrix = Matrix<Poly>;

impl<T: Ring> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize, ctx: &T::Ctx) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::zero(ctx); rows * cols],
            ctx: ctx.clone(),
        }
    }

    pub fn identity(n: usize, ctx: &T::Ctx) -> Self {
        let mut m = Self::zeros(n, n, ctx);
        for i in 0..n {
            m.data[i * n + i] = T::one(ctx);
        }
        m
    }

    /// The elementary map `E(i←j)`: sends `e_j` to `e_i` and kills the other basis vectors.
    pub fn elementary(n: usize, i: usize, j: usize, ctx: &T::Ctx) -> Self {
        let mut m = Self::zeros(n, n, ctx);
        m.data[i * n + j] = T::one(ctx);
        m
    }

    pub fn from_fn(rows: usize, cols: usize, ctx: &T::Ctx, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix {
            rows,
            cols,
            data,
            ctx: ctx.clone(),
        }
    }

    pub fn from_rows(rows: Vec<Vec<T>>, ctx: &T::Ctx) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
            ctx: ctx.clone(),
        })
    }

    /// Matrix whose columns are the given vectors (all of length `n`).
    pub fn from_columns(n: usize, cols: &[Vec<T>], ctx: &T::Ctx) -> Self {
        Self::from_fn(n, cols.len(), ctx, |i, j| cols[j][i].clone())
    }

    pub fn from_flat(rows: usize, cols: usize, data: Vec<T>, ctx: &T::Ctx) -> Self {
        assert_eq!(data.len(), rows * cols);
        Matrix {
            rows,
            cols,
            data,
            ctx: ctx.clone(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn ring_ctx(&self) -> &T::Ctx {
        &self.ctx
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<T> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<T>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn row_vectors(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    /// Row-major entries; also the coordinates of an endomorphism in `End(V)`.
    pub fn flatten(&self) -> Vec<T> {
        self.data.clone()
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn map<U: Ring>(&self, ctx: &U::Ctx, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
            ctx: ctx.clone(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, &self.ctx, |i, j| self.get(j, i).clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(&self.ctx, |x| x.times(c))
    }

    pub fn scale_rational(&self, q: &Rational) -> Self {
        self.map(&self.ctx, |x| x.scale_rational(q))
    }

    fn zip(&self, o: &Self, f: impl Fn(&T, &T) -> T) -> Self {
        assert!(
            self.rows == o.rows && self.cols == o.cols,
            "shape mismatch {}x{} vs {}x{}",
            self.rows,
            self.cols,
            o.rows,
            o.cols
        );
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| f(a, b)).collect(),
            ctx: self.ctx.clone(),
        }
    }

    pub fn add_ref(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a.plus(b))
    }

    pub fn sub_ref(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a.minus(b))
    }

    pub fn mul_ref(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "inner dimension mismatch");
        let mut out = Self::zeros(self.rows, o.cols, &self.ctx);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * o.cols + j;
                    out.data[idx] = out.data[idx].plus(&a.times(b));
                }
            }
        }
        out
    }

    pub fn neg_ref(&self) -> Self {
        self.map(&self.ctx, |x| x.negate())
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = T::zero(&self.ctx);
                for (j, x) in v.iter().enumerate() {
                    acc = acc.plus(&self.get(i, j).times(x));
                }
                acc
            })
            .collect()
    }

    /// `[a, b] = ab − ba`.
    pub fn commutator(&self, o: &Self) -> Self {
        self.mul_ref(o).sub_ref(&o.mul_ref(self))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::identity(self.rows, &self.ctx);
        for _ in 0..k {
            out = out.mul_ref(self);
        }
        out
    }

    pub fn trace(&self) -> T {
        let mut acc = T::zero(&self.ctx);
        for i in 0..self.rows.min(self.cols) {
            acc = acc.plus(self.get(i, i));
        }
        acc
    }

    /// Submatrix of the given rows and columns.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), &self.ctx, |i, j| self.get(rows[i], cols[j]).clone())
    }

    pub fn vstack(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.cols);
        let mut data = self.data.clone();
        data.extend(o.data.iter().cloned());
        Matrix {
            rows: self.rows + o.rows,
            cols: self.cols,
            data,
            ctx: self.ctx.clone(),
        }
    }

    pub fn hstack(&self, o: &Self) -> Self {
        assert_eq!(self.rows, o.rows);
        Self::from_fn(self.rows, self.cols + o.cols, &self.ctx, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                o.get(i, j - self.cols).clone()
            }
        })
    }

    /// True when `self^rows = 0`.
    pub fn is_nilpotent(&self) -> bool {
        self.is_square() && self.pow(self.rows as u32).is_zero()
    }

    /// `Σ x^k / k!`, which terminates because `x` is nilpotent.
    pub fn exp_nilpotent(&self) -> Result<Self> {
        if !self.is_nilpotent() {
            return Err(Error::NotNilpotent);
        }
        let mut out = Self::identity(self.rows, &self.ctx);
        let mut term = Self::identity(self.rows, &self.ctx);
        for k in 1..=self.rows {
            term = term.mul_ref(self).scale_rational(&Rational::from((1, k as u64)));
            if term.is_zero() {
                break;
            }
            out = out.add_ref(&term);
        }
        Ok(out)
    }

    /// Mercator series `Σ (−1)^{k+1} (u − I)^k / k` for unipotent `u`.
    pub fn log_unipotent(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::NotUnipotent);
        }
        let x = self.sub_ref(&Self::identity(self.rows, &self.ctx));
        if !x.is_nilpotent() {
            return Err(Error::NotUnipotent);
        }
        let mut out = Self::zeros(self.rows, self.rows, &self.ctx);
        let mut power = Self::identity(self.rows, &self.ctx);
        for k in 1..=self.rows {
            power = power.mul_ref(&x);
            if power.is_zero() {
                break;
            }
            let sign = if k % 2 == 1 { 1i64 } else { -1 };
            out = out.add_ref(&power.scale_rational(&Rational::from((sign, k as u64))));
        }
        Ok(out)
    }
}

impl<T: Field> Matrix<T> {
    pub fn conj(&self) -> Self {
        self.map(&self.ctx, |x| x.conj())
    }

    pub fn re_part(&self) -> Self {
        self.map(&self.ctx, |x| x.re_part())
    }

    pub fn im_part(&self) -> Self {
        self.map(&self.ctx, |x| x.im_part())
    }

    /// Largest entry magnitude.
    pub fn max_magnitude(&self) -> f64 {
        self.data.iter().map(|x| x.magnitude()).fold(0.0, f64::max)
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).magnitude()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Zero in exact mode; zero relative to `scale` in numeric mode.
    pub fn is_negligible(&self, scale: f64) -> bool {
        self.data.iter().all(|x| x.negligible(scale))
    }

    /// Reduced row echelon form and pivot columns. Numeric pivots below
    /// `max|entry|·2^{-prec/2}` are treated as zero.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let scale = self.max_magnitude();
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let mut best = None;
            let mut best_mag = 0.0;
            for i in r..m.rows {
                let x = m.get(i, c);
                if x.negligible(scale) {
                    continue;
                }
                let mag = x.magnitude();
                if best.is_none() || (!T::is_exact() && mag > best_mag) {
                    best = Some(i);
                    best_mag = mag;
                    if T::is_exact() {
                        break;
                    }
                }
            }
            let Some(p) = best else {
                for i in r..m.rows {
                    m.set(i, c, T::zero(&m.ctx));
                }
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = m.get(r, c).inv().expect("pivot is nonzero");
            for j in 0..m.cols {
                let v = m.get(r, j).times(&inv);
                m.set(r, j, v);
            }
            m.set(r, c, T::one(&m.ctx));
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in 0..m.cols {
                    let v = m.get(i, j).minus(&f.times(m.get(r, j)));
                    m.set(i, j, v);
                }
                m.set(i, c, T::zero(&m.ctx));
            }
            pivots.push(c);
            r += 1;
        }
        if !T::is_exact() {
            for i in r..m.rows {
                for j in 0..m.cols {
                    m.set(i, j, T::zero(&m.ctx));
                }
            }
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{x : self·x = 0}`.
    pub fn kernel(&self) -> Vec<Vec<T>> {
        let (r, pivots) = self.rref();
        let mut out = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![T::zero(&self.ctx); self.cols];
            v[free] = T::one(&self.ctx);
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = r.get(row, free).negate();
            }
            out.push(v);
        }
        out
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::Singular);
        }
        let n = self.rows;
        let aug = self.hstack(&Self::identity(n, &self.ctx));
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::Singular);
        }
        Ok(Self::from_fn(n, n, &self.ctx, |i, j| r.get(i, n + j).clone()))
    }

    /// Unique solution of `self·x = b`.
    pub fn solve(&self, b: &[T]) -> Result<Vec<T>> {
        let col = Self::from_columns(self.rows, &[b.to_vec()], &self.ctx);
        let (r, pivots) = self.hstack(&col).rref();
        if pivots.contains(&self.cols) {
            return Err(Error::Inconsistent);
        }
        if pivots.len() < self.cols {
            return Err(Error::NotUnique(self.cols - pivots.len()));
        }
        Ok((0..self.cols).map(|i| r.get(i, self.cols).clone()).collect())
    }
}

impl PolyMatrix {
    pub fn eval(&self, s: &Scalar) -> ExactMatrix {
        self.map(&(), |p| p.eval(s))
    }

    pub fn eval_numeric(&self, s: &NumericScalar) -> NumericMatrix {
        self.map(&s.precision(), |p| p.eval_numeric(s))
    }

    /// Highest degree among the entries.
    pub fn degree(&self) -> Option<usize> {
        self.entries().iter().filter_map(|p| p.degree()).max()
    }

    /// Coefficient matrix of `t^k`.
    pub fn coefficient(&self, k: usize) -> ExactMatrix {
        self.map(&(), |p| p.coeff(k))
    }

    pub fn from_coefficients(n: usize, terms: &[(usize, ExactMatrix)], trunc: Option<usize>) -> Self {
        Self::from_fn(n, n, &trunc, |i, j| {
            let mut coeffs = Vec::new();
            for (k, m) in terms {
                if coeffs.len() <= *k {
                    coeffs.resize(k + 1, Scalar::zero());
                }
                coeffs[*k] = &coeffs[*k] + m.get(i, j);
            }
            Poly::with_trunc(coeffs, trunc)
        })
    }

    pub fn derivative(&self) -> Self {
        self.map(&None, |p| p.derivative())
    }

    /// Inverse of a power series matrix whose constant term is invertible.
    pub fn inverse_series(&self) -> Result<Self> {
        let trunc = *self.ring_ctx();
        let k = trunc.ok_or_else(|| Error::Precondition("series inverse needs a truncation order".into()))?;
        let a0 = self.coefficient(0);
        let a0_inv = a0.inverse()?;
        let a0_inv_p = constant_series(&a0_inv, trunc);
        let x = a0_inv_p.mul_ref(&self.sub_ref(&constant_series(&a0, trunc)));
        let n = self.rows();
        let mut out = Self::identity(n, &trunc);
        let mut term = Self::identity(n, &trunc);
        for _ in 0..k {
            term = term.mul_ref(&x).neg_ref();
            out = out.add_ref(&term);
        }
        Ok(out.mul_ref(&a0_inv_p))
    }
}

/// Constant polynomial matrix.
pub fn constant_series(m: &ExactMatrix, trunc: Option<usize>) -> PolyMatrix {
    m.map(&trunc, |x| Poly::with_trunc(vec![x.clone()], trunc))
}

impl ExactMatrix {
    pub fn to_numeric(&self, prec: u32) -> NumericMatrix {
        self.map(&prec, |x| NumericScalar::from_scalar(x, &prec))
    }

    pub fn is_real(&self) -> bool {
        self.entries().iter().all(|x| x.is_real())
    }

    pub fn is_integral(&self) -> bool {
        self.entries().iter().all(|x| x.is_integer())
    }

    pub fn to_poly(&self) -> PolyMatrix {
        constant_series(self, None)
    }
}

impl<'a, T: Ring> Add<&'a Matrix<T>> for &'a Matrix<T> {
    type Output = Matrix<T>;
    fn add(self, o: &Matrix<T>) -> Matrix<T> {
        self.add_ref(o)
    }
}

impl<'a, T: Ring> Sub<&'a Matrix<T>> for &'a Matrix<T> {
    type Output = Matrix<T>;
    fn sub(self, o: &Matrix<T>) -> Matrix<T> {
        self.sub_ref(o)
    }
}

impl<'a, T: Ring> Mul<&'a Matrix<T>> for &'a Matrix<T> {
    type Output = Matrix<T>;
    fn mul(self, o: &Matrix<T>) -> Matrix<T> {
        self.mul_ref(o)
    }
}

impl<T: Ring> Neg for &Matrix<T> {
    type Output = Matrix<T>;
    fn neg(self) -> Matrix<T> {
        self.neg_ref()
    }
}

impl<T: Ring + fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{:?}", self.get(i, j))?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(i: usize, j: usize) -> ExactMatrix {
        ExactMatrix::elementary(3, i, j, &())
    }

    #[test]
    fn exp_terminates_at_order_two() {
        let x = &e(1, 2) + &e(2, 0);
        let expected = &(&ExactMatrix::identity(3, &()) + &x) + &e(1, 0).scale(&Scalar::frac(1, 2));
        assert_eq!(x.exp_nilpotent().unwrap(), expected);
        assert_eq!(expected.log_unipotent().unwrap(), x);
    }

    #[test]
    fn exp_rejects_non_nilpotent() {
        let x = &e(0, 1) + &e(1, 0);
        assert!(matches!(x.exp_nilpotent(), Err(Error::NotNilpotent)));
    }

    #[test]
    fn inverse_and_kernel() {
        let m = ExactMatrix::from_rows(
            vec![
                vec![Scalar::int(1), Scalar::int(2), Scalar::int(3)],
                vec![Scalar::int(0), Scalar::i(), Scalar::int(1)],
                vec![Scalar::int(1), Scalar::int(0), Scalar::frac(1, 2)],
            ],
            &(),
        )
        .unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(&m * &inv, ExactMatrix::identity(3, &()));
        let singular = ExactMatrix::from_rows(
            vec![vec![Scalar::int(1), Scalar::int(2)], vec![Scalar::int(2), Scalar::int(4)]],
            &(),
        )
        .unwrap();
        let k = singular.kernel();
        assert_eq!(k.len(), 1);
        assert!(singular.mul_vec(&k[0]).iter().all(|x| x.is_zero()));
    }

    #[test]
    fn series_inverse() {
        let t = Some(4);
        let terms = vec![(0, ExactMatrix::identity(2, &())), (1, ExactMatrix::elementary(2, 0, 1, &()).add_ref(&ExactMatrix::elementary(2, 1, 0, &())))];
        let a = PolyMatrix::from_coefficients(2, &terms, t);
        let b = a.inverse_series().unwrap();
        assert_eq!(a.mul_ref(&b), PolyMatrix::identity(2, &t));
    }
}
