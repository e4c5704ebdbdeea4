//! Certified isolation of the complex roots of a univariate polynomial inside a disk.
//!
//! Roots are approximated by Aberth iteration and then certified with the
//! Weierstrass-correction inclusion disks `D(z_i, d·|p(z_i)| / |lc·Π_{j≠i}(z_i − z_j)|)`:
//! every root lies in their union, and pairwise disjoint disks each hold exactly one
//! root. All certification arithmetic is exact.

use crate::algebra::{Poly, Scalar};
use crate::error::{Error, Result};
use crate::util::{rational_sqrt_upper, reconstruct_scalar};
use rug::{Complex, Float, Rational};
use serde::Serialize;

/// Axis-aligned box with rational corners.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IsolatingBox {
    pub re_lo: String,
    pub re_hi: String,
    pub im_lo: String,
    pub im_hi: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CertifiedRoot {
    /// Center of the inclusion disk (the root itself when `exact`).
    pub center: Scalar,
    /// Rational upper bound on the distance from `center` to the root.
    pub radius: Rational,
    pub multiplicity: usize,
    pub exact: bool,
}

impl CertifiedRoot {
    pub fn isolating_box(&self) -> IsolatingBox {
        let lo = |c: &Rational| Rational::from(c - &self.radius).to_string();
        let hi = |c: &Rational| Rational::from(c + &self.radius).to_string();
        IsolatingBox {
            re_lo: lo(self.center.re()),
            re_hi: hi(self.center.re()),
            im_lo: lo(self.center.im()),
            im_hi: hi(self.center.im()),
        }
    }
}

fn horner(p: &[Complex], z: &Complex, prec: u32) -> (Complex, Complex) {
    let mut v = Complex::new(prec);
    let mut dv = Complex::new(prec);
    for c in p.iter().rev() {
        dv = Complex::with_val(prec, &dv * z) + &v;
        v = Complex::with_val(prec, &v * z) + c;
    }
    (v, dv)
}

/// Aberth–Ehrlich iteration for all roots of a square-free polynomial.
fn aberth(p: &Poly, prec: u32) -> Vec<Complex> {
    let d = p.degree().unwrap_or(0);
    if d == 0 {
        return vec![];
    }
    let lc = p.leading().unwrap();
    let coeffs: Vec<Complex> = p.coeffs().iter().map(|c| (c / lc).to_complex(prec)).collect();
    let bound = (0..d)
        .map(|k| {
            let a = coeffs[k].clone().abs().real().to_f64();
            2.0 * a.powf(1.0 / (d - k) as f64)
        })
        .fold(0.0, f64::max)
        .max(1e-3);
    let mut z: Vec<Complex> = (0..d)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * (k as f64 + 0.37) / d as f64;
            let r = 0.5 * bound;
            Complex::with_val(prec, (r * theta.cos(), r * theta.sin()))
        })
        .collect();
    let eps = Float::with_val(prec, Float::i_exp(1, -(prec as i32) + 16));
    for _ in 0..(200 + prec as usize) {
        let mut biggest = Float::new(prec);
        for k in 0..d {
            let (v, dv) = horner(&coeffs, &z[k], prec);
            if v.real().is_zero() && v.imag().is_zero() {
                continue;
            }
            let w = Complex::with_val(prec, &v / &dv);
            let mut s = Complex::new(prec);
            for j in 0..d {
                if j != k {
                    let diff = Complex::with_val(prec, &z[k] - &z[j]);
                    s += diff.recip();
                }
            }
            let denom = Complex::with_val(prec, 1) - Complex::with_val(prec, &w * &s);
            let step = Complex::with_val(prec, &w / &denom);
            let size = Float::with_val(prec, step.abs_ref());
            let scale = Float::with_val(prec, z[k].abs_ref()) + 1u32;
            let rel = size / scale;
            if rel > biggest {
                biggest = rel;
            }
            z[k] -= step;
        }
        if biggest < eps {
            break;
        }
    }
    z
}

fn to_scalar(z: &Complex) -> Scalar {
    Scalar::new(
        z.real().to_rational().unwrap_or_default(),
        z.imag().to_rational().unwrap_or_default(),
    )
}

/// Exact inclusion radii (upper bounds) for a square-free polynomial.
fn inclusion_radii(p: &Poly, approx: &[Scalar]) -> Option<Vec<Rational>> {
    let d = approx.len();
    let lc2 = p.leading()?.norm_sqr();
    let mut out = Vec::with_capacity(d);
    for i in 0..d {
        let mut denom = lc2.clone();
        for j in 0..d {
            if j != i {
                let diff = &approx[i] - &approx[j];
                let n = diff.norm_sqr();
                if n == 0 {
                    return None;
                }
                denom *= n;
            }
        }
        let r2 = Rational::from((d * d) as u64) * p.eval(&approx[i]).norm_sqr() / denom;
        out.push(rational_sqrt_upper(&r2));
    }
    Some(out)
}

fn disjoint(a: &CertifiedRoot, b: &CertifiedRoot) -> bool {
    let dist2 = (&a.center - &b.center).norm_sqr();
    let sum = Rational::from(&a.radius + &b.radius);
    dist2 > Rational::from(&sum * &sum)
}

enum Side {
    Inside,
    Outside,
    Unknown,
}

fn side(root: &CertifiedRoot, r: &Rational) -> Side {
    let m = root.center.norm_sqr();
    let outer = Rational::from(r + &root.radius);
    if m > Rational::from(&outer * &outer) {
        return Side::Outside;
    }
    let inner = Rational::from(r - &root.radius);
    if inner.cmp0().is_gt() && m < Rational::from(&inner * &inner) {
        return Side::Inside;
    }
    Side::Unknown
}

fn certify_squarefree(f: &Poly, m: usize, prec: u32) -> Option<Vec<CertifiedRoot>> {
    let approx: Vec<Scalar> = aberth(f, prec).iter().map(to_scalar).collect();
    let mut roots = Vec::new();
    let mut pending = Vec::new();
    for z in &approx {
        // snap to a short exact root when one is nearby
        if let Some(q) = reconstruct_scalar(z, 1 << 20) {
            if f.eval(&q).is_zero() && !roots.iter().any(|r: &CertifiedRoot| r.center == q) {
                roots.push(CertifiedRoot {
                    center: q,
                    radius: Rational::new(),
                    multiplicity: m,
                    exact: true,
                });
                continue;
            }
        }
        pending.push(z.clone());
    }
    if !pending.is_empty() {
        let mut g = f.clone();
        for r in &roots {
            g = g.div_rem(&Poly::new(vec![-&r.center, Scalar::one()])).0;
        }
        let approx: Vec<Scalar> = if g.degree() == Some(pending.len()) {
            pending
        } else {
            return None;
        };
        let radii = inclusion_radii(&g, &approx)?;
        for (z, r) in approx.into_iter().zip(radii) {
            roots.push(CertifiedRoot {
                center: z,
                radius: r,
                multiplicity: m,
                exact: false,
            });
        }
    }
    Some(roots)
}

/// All roots of `p` in the open disk `|s| < radius`, with multiplicities.
pub fn isolate_roots(p: &Poly, radius: &Rational, prec: u32) -> Result<Vec<CertifiedRoot>> {
    if p.degree().is_none() {
        return Err(Error::RootIsolation("zero polynomial has no isolated roots".into()));
    }
    let mut prec = prec.max(64);
    for _ in 0..5 {
        if let Some(found) = attempt(p, radius, prec)? {
            return Ok(found);
        }
        prec *= 2;
    }
    Err(Error::RootIsolation("could not separate roots or decide them against the disk boundary".into()))
}

fn attempt(p: &Poly, radius: &Rational, prec: u32) -> Result<Option<Vec<CertifiedRoot>>> {
    let v = p.valuation();
    let mut all = Vec::new();
    if v > 0 {
        all.push(CertifiedRoot {
            center: Scalar::zero(),
            radius: Rational::new(),
            multiplicity: v,
            exact: true,
        });
    }
    let rest = Poly::new(p.coeffs()[v..].to_vec());
    for (f, m) in rest.squarefree_decomposition() {
        match certify_squarefree(&f, m, prec) {
            Some(rs) => all.extend(rs),
            None => return Ok(None),
        }
    }
    for i in 0..all.len() {
        for j in i + 1..all.len() {
            if !disjoint(&all[i], &all[j]) {
                return Ok(None);
            }
        }
    }
    let mut inside = Vec::new();
    for r in all {
        match side(&r, radius) {
            Side::Inside => inside.push(r),
            Side::Outside => {}
            Side::Unknown => {
                if r.exact {
                    return Err(Error::RootIsolation(format!("root {} lies on the disk boundary", r.center)));
                }
                return Ok(None);
            }
        }
    }
    inside.sort_by(|a, b| {
        let (ar, ai) = a.center.to_f64_pair();
        let (br, bi) = b.center.to_f64_pair();
        ar.total_cmp(&br).then(ai.total_cmp(&bi))
    });
    Ok(Some(inside))
}
