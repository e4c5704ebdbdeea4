//! The transport series `Ψ(ad u)v` and the dot action on gradings.

use crate::algebra::{Field, Matrix, Ring};
use crate::error::{Error, Result};
use crate::filtration::Grading;
use rug::{Integer, Rational};

/// `log(exp(u + v)·exp(−u))`.
pub fn bch_transport<R: Ring>(u: &Matrix<R>, v: &Matrix<R>) -> Result<Matrix<R>> {
    let sum = u.add_ref(v).exp_nilpotent()?;
    let back = u.neg_ref().exp_nilpotent()?;
    v.exp_nilpotent()?;
    sum.mul_ref(&back).log_unipotent()
}

/// `v + Σ_{j≥1} (ad u)^j v / (j+1)!`, i.e. `Ψ(t) = (e^t − 1)/t` applied to `ad u`.
///
/// The series stops once `(ad u)^j v` vanishes; `ad u` is nilpotent of order at most
/// `2n − 1` on `n × n` matrices.
pub fn psi_series<R: Ring>(u: &Matrix<R>, v: &Matrix<R>) -> Result<Matrix<R>> {
    if !u.is_nilpotent() {
        return Err(Error::NotNilpotent);
    }
    let n = u.rows();
    let mut out = v.clone();
    let mut term = v.clone();
    let mut factorial = Integer::from(1);
    for j in 1..(2 * n) {
        term = u.commutator(&term);
        if term.is_zero() {
            break;
        }
        factorial *= (j + 1) as u32;
        out = out.add_ref(&term.scale_rational(&Rational::from((1, factorial.clone()))));
    }
    Ok(out)
}

/// `g·Y·g⁻¹`, with pieces `g·V_k`.
pub fn act_on_grading<T: Field>(g: &Matrix<T>, y: &Grading<T>) -> Result<Grading<T>> {
    y.act(g)
}

#[derive(Clone, Debug)]
pub struct TransportReport<T: Field> {
    /// `exp(Γ)·Y − Y − Ψ(ad Γ₀)Γ₋₁`.
    pub residual: Matrix<T>,
    pub holds: bool,
}

/// Compares `exp(Γ₀ + Γ₋₁)·Y` with `Y + Ψ(ad Γ₀)Γ₋₁`.
pub fn grading_transport_identity_check<T: Field>(
    gamma0: &Matrix<T>,
    gamma_minus1: &Matrix<T>,
    y: &Grading<T>,
) -> Result<TransportReport<T>> {
    let g = gamma0.add_ref(gamma_minus1).exp_nilpotent()?;
    let moved = act_on_grading(&g, y)?;
    let predicted = y.matrix().add_ref(&psi_series(gamma0, gamma_minus1)?);
    let residual = moved.matrix().sub_ref(&predicted);
    let scale = predicted.max_magnitude().max(1.0);
    let holds = residual.is_negligible(scale);
    Ok(TransportReport { residual, holds })
}
