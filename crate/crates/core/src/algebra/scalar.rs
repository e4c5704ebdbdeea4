use super::{Field, Ring};
use crate::error::Error;
use rug::{Complex, Integer, Rational};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

/// Exact Gaussian rational `re + im·i`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    re: Rational,
    im: Rational,
}

impl Scalar {
    pub fn new(re: Rational, im: Rational) -> Self {
        Scalar { re, im }
    }

    pub fn real(re: Rational) -> Self {
        Scalar {
            re,
            im: Rational::new(),
        }
    }

    pub fn int(n: i64) -> Self {
        Scalar::real(Rational::from(n))
    }

    pub fn frac(num: i64, den: i64) -> Self {
        Scalar::real(Rational::from((num, den)))
    }

    /// `(a/b) + (c/d)·i` from small integers.
    pub fn gauss(a: (i64, i64), c: (i64, i64)) -> Self {
        Scalar::new(Rational::from(a), Rational::from(c))
    }

    pub fn i() -> Self {
        Scalar::new(Rational::new(), Rational::from(1))
    }

    pub fn zero() -> Self {
        Scalar::default()
    }

    pub fn one() -> Self {
        Scalar::int(1)
    }

    pub fn re(&self) -> &Rational {
        &self.re
    }

    pub fn im(&self) -> &Rational {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.cmp0().is_eq() && self.im.cmp0().is_eq()
    }

    pub fn is_real(&self) -> bool {
        self.im.cmp0().is_eq()
    }

    pub fn is_integer(&self) -> bool {
        *self.re.denom() == 1 && *self.im.denom() == 1
    }

    pub fn conj(&self) -> Self {
        Scalar::new(self.re.clone(), Rational::from(-&self.im))
    }

    /// |z|² exactly.
    pub fn norm_sqr(&self) -> Rational {
        Rational::from(&self.re * &self.re) + Rational::from(&self.im * &self.im)
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(Scalar::new(
            Rational::from(&self.re / &n),
            Rational::from(-&self.im) / &n,
        ))
    }

    pub fn scale(&self, q: &Rational) -> Self {
        Scalar::new(Rational::from(&self.re * q), Rational::from(&self.im * q))
    }

    pub fn to_complex(&self, prec: u32) -> Complex {
        Complex::with_val(prec, (&self.re, &self.im))
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    /// Nearest Gaussian integer, ties rounded away from zero.
    pub fn round(&self) -> (Integer, Integer) {
        (self.re.clone().round().into_numer_denom().0, self.im.clone().round().into_numer_denom().0)
    }
}

fn parse_rational(text: &str) -> Result<Rational, Error> {
    let bad = || Error::Parse(format!("malformed rational '{text}'"));
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (text, None),
    };
    let digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    if !digits(num) {
        return Err(bad());
    }
    let n = Integer::from_str(num).map_err(|_| bad())?;
    let Some(d) = den else {
        return Ok(Rational::from(n));
    };
    if !digits(d) {
        return Err(bad());
    }
    let d = Integer::from_str(d).map_err(|_| bad())?;
    if d == 0 {
        return Err(Error::Parse(format!("zero denominator in '{text}'")));
    }
    if Integer::from(n.gcd_ref(&d)) != 1 {
        return Err(Error::NonReducedRational(text.to_string()));
    }
    Ok(Rational::from((n, d)))
}

impl FromStr for Scalar {
    type Err = Error;

    /// Accepts `a`, `a/b`, `c/d*i`, `i`, `a/b+c/d*i`, `a/b-i` and so on.
    /// Fractions must be reduced with positive denominators.
    fn from_str(raw: &str) -> Result<Self, Error> {
        let text: String = raw
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| if c == '\u{2212}' { '-' } else { c })
            .collect();
        if text.is_empty() {
            return Err(Error::Parse("empty scalar".into()));
        }
        let mut terms: Vec<(bool, &str)> = Vec::new();
        let mut start = 0;
        let bytes = text.as_bytes();
        let mut negative = false;
        if bytes[0] == b'+' || bytes[0] == b'-' {
            negative = bytes[0] == b'-';
            start = 1;
        }
        for (k, &b) in bytes.iter().enumerate().skip(start) {
            if b == b'+' || b == b'-' {
                terms.push((negative, &text[start..k]));
                negative = b == b'-';
                start = k + 1;
            }
        }
        terms.push((negative, &text[start..]));
        if terms.len() > 2 {
            return Err(Error::Parse(format!("too many terms in '{raw}'")));
        }
        let mut re: Option<Rational> = None;
        let mut im: Option<Rational> = None;
        for (neg, term) in terms {
            let (value, imaginary) = if let Some(coef) = term.strip_suffix('i') {
                let coef = coef.strip_suffix('*').unwrap_or(coef);
                let v = if coef.is_empty() {
                    Rational::from(1)
                } else {
                    parse_rational(coef)?
                };
                (v, true)
            } else {
                (parse_rational(term)?, false)
            };
            let value = if neg { -value } else { value };
            let slot = if imaginary { &mut im } else { &mut re };
            if slot.is_some() {
                return Err(Error::Parse(format!("repeated component in '{raw}'")));
            }
            *slot = Some(value);
        }
        Ok(Scalar::new(re.unwrap_or_default(), im.unwrap_or_default()))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let imag = |f: &mut fmt::Formatter<'_>, q: &Rational, lead: bool| -> fmt::Result {
            let abs = Rational::from(q.abs_ref());
            let sign = if q.cmp0().is_lt() { "-" } else if lead { "" } else { "+" };
            if abs == 1 {
                write!(f, "{sign}i")
            } else {
                write!(f, "{sign}{abs}*i")
            }
        };
        match (self.re.cmp0().is_eq(), self.im.cmp0().is_eq()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => imag(f, &self.im, true),
            (false, false) => {
                write!(f, "{}", self.re)?;
                imag(f, &self.im, false)
            }
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        Scalar::new(Rational::from(&self.re + &o.re), Rational::from(&self.im + &o.im))
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        Scalar::new(Rational::from(&self.re - &o.re), Rational::from(&self.im - &o.im))
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        let re = Rational::from(&self.re * &o.re) - Rational::from(&self.im * &o.im);
        let im = Rational::from(&self.re * &o.im) + Rational::from(&self.im * &o.re);
        Scalar::new(re, im)
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    /// Panics on division by zero, like integer division.
    fn div(self, o: &Scalar) -> Scalar {
        self * &o.inv().expect("division by zero scalar")
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::new(Rational::from(-&self.re), Rational::from(-&self.im))
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar { <&Scalar as $tr<&Scalar>>::$m(&self, &o) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::int(n)
    }
}

impl From<Rational> for Scalar {
    fn from(q: Rational) -> Self {
        Scalar::real(q)
    }
}

impl Ring for Scalar {
    type Ctx = ();

    fn zero(_: &()) -> Self {
        Scalar::zero()
    }
    fn one(_: &()) -> Self {
        Scalar::one()
    }
    fn ctx(&self) {}
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn negate(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn from_scalar(s: &Scalar, _: &()) -> Self {
        s.clone()
    }
    fn scale_rational(&self, q: &Rational) -> Self {
        self.scale(q)
    }
}

impl Field for Scalar {
    fn inv(&self) -> Option<Self> {
        Scalar::inv(self)
    }
    fn conj(&self) -> Self {
        Scalar::conj(self)
    }
    fn re_part(&self) -> Self {
        Scalar::real(self.re.clone())
    }
    fn im_part(&self) -> Self {
        Scalar::real(self.im.clone())
    }
    fn magnitude(&self) -> f64 {
        self.re.to_f64().abs() + self.im.to_f64().abs()
    }
    fn negligible(&self, _scale: f64) -> bool {
        self.is_zero()
    }
    fn is_exact() -> bool {
        true
    }
}
