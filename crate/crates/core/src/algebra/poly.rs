use super::{NumericScalar, Ring, Scalar};
use rug::{Integer, Rational};
use std::fmt;

/// Univariate polynomial over the Gaussian rationals, coefficients from degree 0 up.
///
/// With `trunc = Some(k)` the value is a power series known modulo `t^{k+1}` and
/// products are truncated accordingly.
#[derive(Clone, PartialEq)]
pub struct Poly {
    coeffs: Vec<Scalar>,
    trunc: Option<usize>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs, trunc: None }
    }

    pub fn with_trunc(coeffs: Vec<Scalar>, trunc: Option<usize>) -> Self {
        let mut p = Poly::new(coeffs);
        p.trunc = trunc;
        p.apply_trunc();
        p
    }

    fn apply_trunc(&mut self) {
        if let Some(k) = self.trunc {
            self.coeffs.truncate(k + 1);
            while self.coeffs.last().is_some_and(|c| c.is_zero()) {
                self.coeffs.pop();
            }
        }
    }

    pub fn constant(c: Scalar) -> Self {
        Poly::new(vec![c])
    }

    /// `c·t^k`.
    pub fn monomial(c: Scalar, k: usize) -> Self {
        let mut v = vec![Scalar::zero(); k];
        v.push(c);
        Poly::new(v)
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Scalar {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn trunc(&self) -> Option<usize> {
        self.trunc
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    /// Multiplicity of the root at the origin.
    pub fn valuation(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    pub fn eval(&self, s: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * s) + c;
        }
        acc
    }

    pub fn eval_numeric(&self, s: &NumericScalar) -> NumericScalar {
        let prec = s.precision();
        let mut acc = NumericScalar::zero(&prec);
        for c in self.coeffs.iter().rev() {
            acc = acc.times(s).plus(&NumericScalar::from_scalar(c, &prec));
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.scale(&Rational::from(k as u64)))
            .collect();
        Poly::with_trunc(coeffs, self.trunc.map(|k| k.saturating_sub(1)))
    }

    /// `p(t + a)` by Taylor shift.
    pub fn shift(&self, a: &Scalar) -> Poly {
        let mut out = Poly::new(vec![]);
        let base = Poly::new(vec![a.clone(), Scalar::one()]);
        for c in self.coeffs.iter().rev() {
            out = out.times(&base).plus(&Poly::constant(c.clone()));
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        Poly::with_trunc(self.coeffs.iter().map(|x| x * c).collect(), self.trunc)
    }

    pub fn monic(&self) -> Poly {
        match self.leading() {
            Some(lc) => self.scale(&lc.inv().expect("nonzero leading coefficient")),
            None => self.clone(),
        }
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by zero polynomial");
        let lc_inv = d.leading().unwrap().inv().unwrap();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Scalar::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd {
            let k = rem.len() - 1 - dd;
            let c = rem.last().unwrap() * &lc_inv;
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[k + j] = &rem[k + j] - &(&c * dc);
            }
            quot[k] = c;
            rem.pop();
            while rem.last().is_some_and(|c| c.is_zero()) {
                rem.pop();
            }
        }
        (Poly::new(quot), Poly::new(rem))
    }

    /// Monic greatest common divisor; gcd(0, 0) = 0.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.coeffs.is_empty() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Square-free decomposition `p = lc · Π f_m^m` (Yun); returns the pairs `(f_m, m)`
    /// with nonconstant monic `f_m`.
    pub fn squarefree_decomposition(&self) -> Vec<(Poly, usize)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.div_rem(&a0).0;
        let c = df.div_rem(&a0).0;
        let mut d = c.minus(&b.derivative());
        let mut m = 1;
        while b.degree().unwrap_or(0) > 0 {
            let a = b.gcd(&d);
            if a.degree().unwrap_or(0) > 0 {
                out.push((a.clone(), m));
            }
            b = b.div_rem(&a).0;
            let c = d.div_rem(&a).0;
            d = c.minus(&b.derivative());
            m += 1;
        }
        out
    }

    /// Multiplies by the least common denominator so that all parts are integers.
    pub fn clear_denominators(&self) -> Poly {
        let mut l = Integer::from(1);
        for c in &self.coeffs {
            l.lcm_mut(c.re().denom());
            l.lcm_mut(c.im().denom());
        }
        self.scale(&Scalar::real(Rational::from(l)))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})t")?,
                _ => write!(f, "({c})t^{k}")?,
            }
        }
        Ok(())
    }
}

fn join_trunc(a: Option<usize>, b: Option<usize>) -> Option<usize> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl Ring for Poly {
    type Ctx = Option<usize>;

    fn zero(ctx: &Option<usize>) -> Self {
        Poly::with_trunc(vec![], *ctx)
    }
    fn one(ctx: &Option<usize>) -> Self {
        Poly::with_trunc(vec![Scalar::one()], *ctx)
    }
    fn ctx(&self) -> Option<usize> {
        self.trunc
    }
    fn plus(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| &self.coeff(k) + &rhs.coeff(k)).collect();
        Poly::with_trunc(coeffs, join_trunc(self.trunc, rhs.trunc))
    }
    fn minus(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| &self.coeff(k) - &rhs.coeff(k)).collect();
        Poly::with_trunc(coeffs, join_trunc(self.trunc, rhs.trunc))
    }
    fn times(&self, rhs: &Self) -> Self {
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return Poly::with_trunc(vec![], join_trunc(self.trunc, rhs.trunc));
        }
        let trunc = join_trunc(self.trunc, rhs.trunc);
        let mut n = self.coeffs.len() + rhs.coeffs.len() - 1;
        if let Some(k) = trunc {
            n = n.min(k + 1);
        }
        let mut out = vec![Scalar::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if i + j >= n {
                    break;
                }
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Poly::with_trunc(out, trunc)
    }
    fn negate(&self) -> Self {
        Poly::with_trunc(self.coeffs.iter().map(|c| -c).collect(), self.trunc)
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn from_scalar(s: &Scalar, ctx: &Option<usize>) -> Self {
        Poly::with_trunc(vec![s.clone()], *ctx)
    }
}
