//! Small numeric helpers shared by the solvers.

use crate::algebra::Scalar;
use rug::float::Round;
use rug::{Float, Integer, Rational};

/// A rational number not smaller than `sqrt(r2)`.
pub fn rational_sqrt_upper(r2: &Rational) -> Rational {
    if r2.cmp0().is_le() {
        return Rational::new();
    }
    let (mut f, _) = Float::with_val_round(96, r2, Round::Up);
    f.sqrt_round(Round::Up);
    f.to_rational().expect("finite")
}

/// Last continued-fraction convergent of `x` with denominator at most `max_den`.
pub fn reconstruct(x: &Rational, max_den: u64) -> Rational {
    let max_den = Integer::from(max_den);
    let (mut p0, mut q0, mut p1, mut q1) = (Integer::from(0), Integer::from(1), Integer::from(1), Integer::from(0));
    let mut rest = x.clone();
    loop {
        let a = Integer::from(rest.floor_ref());
        let p2 = Integer::from(&a * &p1) + &p0;
        let q2 = Integer::from(&a * &q1) + &q0;
        if q2 > max_den {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = rest - Rational::from(a);
        if frac.cmp0().is_eq() {
            break;
        }
        rest = frac.recip();
    }
    if q1 == 0 {
        return Rational::from(Integer::from(x.floor_ref()));
    }
    Rational::from((p1, q1))
}

/// Gaussian rational with small denominators close to `z`, when it differs from `z`
/// by less than `1/max_den²`.
pub fn reconstruct_scalar(z: &Scalar, max_den: u64) -> Option<Scalar> {
    let re = reconstruct(z.re(), max_den);
    let im = reconstruct(z.im(), max_den);
    let q = Scalar::new(re, im);
    let d = Rational::from(max_den);
    let bound = Rational::from(1) / (Rational::from(&d * &d));
    let diff = (&q - z).norm_sqr();
    if diff < Rational::from(&bound * &bound) {
        Some(q)
    } else {
        None
    }
}

/// Rational value of a float, for exact comparisons.
pub fn float_to_rational(x: &Float) -> Rational {
    x.to_rational().unwrap_or_default()
}
