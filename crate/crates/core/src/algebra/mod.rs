//! Coefficient rings, matrices, subspaces and univariate polynomials.

mod matrix;
mod numeric;
mod poly;
mod scalar;
mod subspace;

pub use matrix::{constant_series, ExactMatrix, Matrix, NumericMatrix, PolyMatrix};
pub use numeric::{decimal_digits, format_float, pi, tolerance, NumericScalar};
pub use poly::Poly;
pub use scalar::Scalar;
pub use subspace::Subspace;

use rug::Rational;
use std::fmt::Debug;

/// Commutative ring operations shared by exact scalars, numeric scalars and polynomials.
///
/// `Ctx` carries whatever a value needs to be built from nothing: the precision
/// of a numeric scalar, the truncation order of a power series.
pub trait Ring: Clone + PartialEq + Debug + Send + Sync + 'static {
    type Ctx: Clone + PartialEq + Debug + Send + Sync;

    fn zero(ctx: &Self::Ctx) -> Self;
    fn one(ctx: &Self::Ctx) -> Self;
    fn ctx(&self) -> Self::Ctx;
    fn plus(&self, rhs: &Self) -> Self;
    fn minus(&self, rhs: &Self) -> Self;
    fn times(&self, rhs: &Self) -> Self;
    fn negate(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn from_scalar(s: &Scalar, ctx: &Self::Ctx) -> Self;

    fn from_rational(q: &Rational, ctx: &Self::Ctx) -> Self {
        Self::from_scalar(&Scalar::real(q.clone()), ctx)
    }

    fn scale_rational(&self, q: &Rational) -> Self {
        self.times(&Self::from_rational(q, &self.ctx()))
    }
}

/// Fields with complex conjugation; exact or approximate.
pub trait Field: Ring {
    fn inv(&self) -> Option<Self>;
    fn conj(&self) -> Self;
    /// Real part, as a field element.
    fn re_part(&self) -> Self;
    /// Imaginary part, as a field element.
    fn im_part(&self) -> Self;
    /// |re| + |im| as a float; used for pivot choice and norms.
    fn magnitude(&self) -> f64;
    /// Exact zero test in exact mode; relative tolerance test in numeric mode.
    fn negligible(&self, scale: f64) -> bool;
    fn is_exact() -> bool;

    fn div(&self, rhs: &Self) -> Option<Self> {
        rhs.inv().map(|r| self.times(&r))
    }

    fn imag_unit(ctx: &Self::Ctx) -> Self {
        Self::from_scalar(&Scalar::i(), ctx)
    }
}
