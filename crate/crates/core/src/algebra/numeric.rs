use super::{Field, Ring, Scalar};
use rug::float::Round;
use rug::{Complex, Float, Rational};
use std::fmt;

/// Relative rank tolerance `2^{-prec/2}` used by numeric pivoting.
pub fn tolerance(prec: u32) -> f64 {
    2f64.powi(-((prec / 2) as i32))
}

/// Complex number with an explicit binary precision.
#[derive(Clone, PartialEq)]
pub struct NumericScalar(Complex);

impl NumericScalar {
    pub fn new(value: Complex) -> Self {
        NumericScalar(value)
    }

    pub fn from_f64(prec: u32, re: f64, im: f64) -> Self {
        NumericScalar(Complex::with_val(prec, (re, im)))
    }

    pub fn from_floats(re: &Float, im: &Float) -> Self {
        let prec = re.prec().min(im.prec());
        NumericScalar(Complex::with_val(prec, (re, im)))
    }

    pub fn precision(&self) -> u32 {
        self.0.prec().0.min(self.0.prec().1)
    }

    pub fn value(&self) -> &Complex {
        &self.0
    }

    pub fn re(&self) -> &Float {
        self.0.real()
    }

    pub fn im(&self) -> &Float {
        self.0.imag()
    }

    pub fn abs(&self) -> Float {
        Float::with_val(self.precision(), self.0.abs_ref())
    }

    pub fn exp(&self) -> Self {
        NumericScalar(Complex::with_val(self.precision(), self.0.exp_ref()))
    }

    /// Exact rational value of the real and imaginary parts.
    pub fn to_scalar(&self) -> Option<Scalar> {
        Some(Scalar::new(self.re().to_rational()?, self.im().to_rational()?))
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re().to_f64(), self.im().to_f64())
    }

    /// Decimal rendering with `digits` significant digits per component.
    pub fn format_parts(&self, digits: usize) -> (String, String) {
        (format_float(self.re(), digits), format_float(self.im(), digits))
    }
}

/// Decimal rendering of a float with a fixed count of significant digits.
pub fn format_float(x: &Float, digits: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    x.to_string_radix(10, Some(digits))
}

/// Number of decimal digits carried by a binary precision.
pub fn decimal_digits(prec: u32) -> usize {
    ((prec as f64) * std::f64::consts::LOG10_2).floor() as usize
}

fn min_prec(a: &NumericScalar, b: &NumericScalar) -> u32 {
    a.precision().min(b.precision())
}

impl fmt::Debug for NumericScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = self.to_f64_pair();
        write!(f, "{re:e}{im:+e}i")
    }
}

impl fmt::Display for NumericScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = self.format_parts(decimal_digits(self.precision()).min(40));
        write!(f, "({re}, {im})")
    }
}

impl Ring for NumericScalar {
    type Ctx = u32;

    fn zero(prec: &u32) -> Self {
        NumericScalar(Complex::new(*prec))
    }
    fn one(prec: &u32) -> Self {
        NumericScalar(Complex::with_val(*prec, 1))
    }
    fn ctx(&self) -> u32 {
        self.precision()
    }
    fn plus(&self, rhs: &Self) -> Self {
        NumericScalar(Complex::with_val(min_prec(self, rhs), &self.0 + &rhs.0))
    }
    fn minus(&self, rhs: &Self) -> Self {
        NumericScalar(Complex::with_val(min_prec(self, rhs), &self.0 - &rhs.0))
    }
    fn times(&self, rhs: &Self) -> Self {
        NumericScalar(Complex::with_val(min_prec(self, rhs), &self.0 * &rhs.0))
    }
    fn negate(&self) -> Self {
        NumericScalar(Complex::with_val(self.precision(), -&self.0))
    }
    fn is_zero(&self) -> bool {
        self.0.real().is_zero() && self.0.imag().is_zero()
    }
    fn from_scalar(s: &Scalar, prec: &u32) -> Self {
        NumericScalar(s.to_complex(*prec))
    }
    fn from_rational(q: &Rational, prec: &u32) -> Self {
        NumericScalar(Complex::with_val(*prec, (q, 0)))
    }
    fn scale_rational(&self, q: &Rational) -> Self {
        let p = self.precision();
        let re = Float::with_val(p, self.0.real() * q);
        let im = Float::with_val(p, self.0.imag() * q);
        NumericScalar(Complex::with_val(p, (re, im)))
    }
}

impl Field for NumericScalar {
    fn inv(&self) -> Option<Self> {
        if Ring::is_zero(self) {
            return None;
        }
        Some(NumericScalar(Complex::with_val(self.precision(), self.0.recip_ref())))
    }
    fn conj(&self) -> Self {
        NumericScalar(Complex::with_val(self.precision(), self.0.conj_ref()))
    }
    fn re_part(&self) -> Self {
        NumericScalar(Complex::with_val(self.precision(), (self.0.real(), 0)))
    }
    fn im_part(&self) -> Self {
        NumericScalar(Complex::with_val(self.precision(), (self.0.imag(), 0)))
    }
    fn magnitude(&self) -> f64 {
        let re = self.0.real().to_f64_round(Round::Up).abs();
        let im = self.0.imag().to_f64_round(Round::Up).abs();
        re + im
    }
    fn negligible(&self, scale: f64) -> bool {
        self.magnitude() <= scale.max(f64::MIN_POSITIVE) * tolerance(self.precision())
    }
    fn is_exact() -> bool {
        false
    }
}

/// `pi` at the given precision.
pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, rug::float::Constant::Pi)
}
