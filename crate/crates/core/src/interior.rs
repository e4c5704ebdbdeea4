//! Normal-function germs around an interior point: the real grading `Y(s)`,
//! integrality, extension classes, and the local zero locus `Γ₋₁(s) = 0`.

use crate::algebra::{constant_series, ExactMatrix, Field, Matrix, NumericMatrix, NumericScalar, Poly, PolyMatrix, Scalar, Subspace};
use crate::error::{Error, Result};
use crate::filtration::{convert, ExtensionShape, Grading, HodgeFiltration};
use crate::mhs::{
    block_lower_factor, chart_subalgebra, deligne_bigrading, hodge_blocks, lie_algebra, validate_polarization, ChartFlavor,
    MixedHodgeStructure, PolarizationForm,
};
use crate::nilpotent::psi_series;
use crate::roots::{isolate_roots, CertifiedRoot};
use crate::util::reconstruct_scalar;
use rayon::prelude::*;
use rug::{Float, Rational};
use serde::Serialize;

/// `F(s) = exp(Γ(s))·F` near a base point, with `Γ(s) = Σ_k s^k Γ_k` in `q_F`.
#[derive(Clone, Debug)]
pub struct InteriorGerm {
    pub name: String,
    shape: ExtensionShape,
    polarization: PolarizationForm,
    f_base: HodgeFiltration<Scalar>,
    gamma: Vec<(usize, ExactMatrix)>,
    radius: Rational,
    gamma_poly: PolyMatrix,
    exp_gamma: PolyMatrix,
}

impl InteriorGerm {
    pub fn new(
        name: impl Into<String>,
        shape: ExtensionShape,
        polarization: PolarizationForm,
        f_base: HodgeFiltration<Scalar>,
        gamma: Vec<(usize, ExactMatrix)>,
        radius: Rational,
    ) -> Result<Self> {
        let n = shape.dim();
        if radius.cmp0().is_le() {
            return Err(Error::InvalidGerm("radius must be positive".into()));
        }
        let base = MixedHodgeStructure::new(f_base.clone(), shape.weight())?;
        let report = validate_polarization(&f_base, shape.h(), &polarization)?;
        if !report.valid {
            return Err(Error::InvalidGerm(format!("polarization check failed: {:?}", report.failure)));
        }
        let g = lie_algebra::<Scalar>(&shape, &polarization, &());
        let q = chart_subalgebra(&base, &g, ChartFlavor::Interior)?;
        for (k, m) in &gamma {
            if *k == 0 {
                return Err(Error::InvalidGerm("gamma must vanish at the base point".into()));
            }
            if m.rows() != n || m.cols() != n {
                return Err(Error::DimensionMismatch(format!("gamma coefficient of s^{k} is not {n} x {n}")));
            }
            if !q.contains(&m.flatten()) {
                return Err(Error::InvalidGerm(format!("gamma coefficient of s^{k} is not in q_F")));
            }
        }
        let gamma_poly = PolyMatrix::from_coefficients(n, &gamma, None);
        let exp_gamma = gamma_poly.exp_nilpotent()?;
        Ok(InteriorGerm {
            name: name.into(),
            shape,
            polarization,
            f_base,
            gamma,
            radius,
            gamma_poly,
            exp_gamma,
        })
    }

    pub fn shape(&self) -> &ExtensionShape {
        &self.shape
    }

    pub fn polarization(&self) -> &PolarizationForm {
        &self.polarization
    }

    pub fn f_base(&self) -> &HodgeFiltration<Scalar> {
        &self.f_base
    }

    pub fn gamma(&self) -> &[(usize, ExactMatrix)] {
        &self.gamma
    }

    pub fn gamma_poly(&self) -> &PolyMatrix {
        &self.gamma_poly
    }

    pub fn radius(&self) -> &Rational {
        &self.radius
    }

    pub fn dim(&self) -> usize {
        self.shape.dim()
    }

    fn check_radius(&self, s: &Scalar) -> Result<()> {
        if s.norm_sqr() >= Rational::from(&self.radius * &self.radius) {
            return Err(Error::OutOfRadius);
        }
        Ok(())
    }

    fn check_radius_numeric(&self, s: &NumericScalar) -> Result<()> {
        if s.abs() >= Float::with_val(s.precision(), &self.radius) {
            return Err(Error::OutOfRadius);
        }
        Ok(())
    }

    pub fn gamma_at(&self, s: &Scalar) -> ExactMatrix {
        self.gamma_poly.eval(s)
    }

    /// `exp(Γ(s))·F`.
    pub fn filtration_at(&self, s: &Scalar) -> Result<HodgeFiltration<Scalar>> {
        self.check_radius(s)?;
        Ok(self.f_base.image(&self.exp_gamma.eval(s)))
    }

    pub fn filtration_at_numeric(&self, s: &NumericScalar) -> Result<HodgeFiltration<NumericScalar>> {
        self.check_radius_numeric(s)?;
        let prec = s.precision();
        let g = self.exp_gamma.eval_numeric(s);
        let f = numeric_filtration(&self.f_base, prec);
        Ok(f.image(&g))
    }

    /// Unique real grading of `W` preserving `F(s)`.
    pub fn grading_at(&self, s: &Scalar) -> Result<Grading<Scalar>> {
        let f = self.filtration_at(s)?;
        let lift = real_lift(&self.shape, &f)?;
        Ok(self.shape.grading(&lift.lift))
    }

    /// Lift coordinates `t` of `Y(s)`: the `Gr₀` lift is `g₀ + Σ t_j h_j`.
    pub fn lift_coordinates_at(&self, s: &Scalar) -> Result<Vec<Scalar>> {
        let f = self.filtration_at(s)?;
        Ok(real_lift(&self.shape, &f)?.coordinates)
    }

    pub fn lift_at_numeric(&self, s: &NumericScalar) -> Result<RealLift<NumericScalar>> {
        let f = self.filtration_at_numeric(s)?;
        real_lift(&self.shape, &f)
    }

    /// The mixed Hodge structure at an exact point.
    pub fn mhs_at(&self, s: &Scalar) -> Result<MixedHodgeStructure<Scalar>> {
        MixedHodgeStructure::new(self.filtration_at(s)?, self.shape.weight())
    }

    /// The same variation, re-expanded around `s1` with `Γ` truncated after `t^order`.
    pub fn recenter(&self, s1: &Scalar, order: usize) -> Result<InteriorGerm> {
        self.check_radius(s1)?;
        let trunc = Some(order);
        let base_f = self.filtration_at(s1)?;
        let base = MixedHodgeStructure::new(base_f.clone(), self.shape.weight())?;
        let (frame, labels) = deligne_bigrading(&base)?.frame();
        let frame_inv = frame.inverse()?;
        let shifted = self.gamma_poly.map(&trunc, |p| Poly::with_trunc(p.shift(s1).coeffs().to_vec(), trunc));
        let e = shifted.exp_nilpotent()?;
        let fp = constant_series(&frame_inv, trunc);
        let blocks = hodge_blocks(&labels);
        let sizes: Vec<usize> = blocks.iter().map(|b| b.1).collect();
        let targets: Vec<PolyMatrix> = blocks
            .iter()
            .map(|(p, _)| {
                let basis = self.f_base.get(*p).basis_matrix();
                fp.mul_ref(&e).mul_ref(&constant_series(&basis, trunc))
            })
            .collect();
        let l = block_lower_factor(&sizes, &targets, |m| m.inverse_series())?;
        let u = constant_series(&frame, trunc).mul_ref(&l).mul_ref(&fp);
        let gamma1 = u.log_unipotent()?;
        let remaining = Rational::from(&self.radius - &crate::util::rational_sqrt_upper(&s1.norm_sqr()));
        let terms: Vec<(usize, ExactMatrix)> = (1..=order)
            .map(|k| (k, gamma1.coefficient(k)))
            .filter(|(_, m)| !m.is_zero())
            .collect();
        InteriorGerm::new(
            format!("{} @ {}", self.name, s1),
            self.shape.clone(),
            self.polarization.clone(),
            base_f,
            terms,
            remaining.max(Rational::from((1, 1u64 << 20))),
        )
    }
}

pub fn numeric_filtration(f: &HodgeFiltration<Scalar>, prec: u32) -> HodgeFiltration<NumericScalar> {
    let steps = f
        .steps()
        .into_iter()
        .map(|(p, s)| {
            let vs: Vec<Vec<NumericScalar>> = s.basis().iter().map(|v| convert(v, &prec)).collect();
            (p, Subspace::span(f.ambient(), &vs, &prec))
        })
        .collect();
    HodgeFiltration::new(f.ambient(), steps, &prec).expect("numeric image of a valid filtration")
}

/// The real lift of the `Gr₀` generator into `F^0`, with coordinates and a
/// condition estimate of the linear system that produced it.
#[derive(Clone, Debug)]
pub struct RealLift<T: Field> {
    pub lift: Vec<T>,
    pub coordinates: Vec<T>,
    pub condition: f64,
}

/// Solves `g₀ + Σ t_j h_j ∈ F^{p*}` for real `t`, where `p*` is the largest index
/// with `F^{p*} ⊄ W₋₁`; real and imaginary parts are split into one real system.
pub fn real_lift<T: Field>(shape: &ExtensionShape, f: &HodgeFiltration<T>) -> Result<RealLift<T>> {
    let ctx = f.ring_ctx().clone();
    let n = shape.dim();
    let h: Subspace<T> = Subspace::span(n, &shape.h().basis().iter().map(|v| convert(v, &ctx)).collect::<Vec<_>>(), &ctx);
    let (bottom, top) = f.range();
    let pstar = (bottom..=top)
        .rev()
        .find(|&p| !h.contains_subspace(&f.get(p)))
        .unwrap_or(bottom);
    let ann = f.get(pstar).annihilator_matrix();
    let g0: Vec<T> = convert(shape.g0(), &ctx);
    let cols: Vec<Vec<T>> = shape.h_basis().iter().map(|hj| ann.mul_vec(&convert(hj, &ctx))).collect();
    let rhs_c: Vec<T> = ann.mul_vec(&g0).into_iter().map(|x| x.negate()).collect();
    let split = |v: &[T]| -> Vec<T> { v.iter().map(|x| x.re_part()).chain(v.iter().map(|x| x.im_part())).collect() };
    let a = Matrix::from_columns(2 * ann.rows(), &cols.iter().map(|c| split(c)).collect::<Vec<_>>(), &ctx);
    let b = split(&rhs_c);
    let (t, condition) = if a.rows() == a.cols() {
        let inv = a.inverse().map_err(|_| Error::IllConditioned { condition: f64::INFINITY })?;
        let cond = a.norm_inf() * inv.norm_inf();
        (inv.mul_vec(&b), cond)
    } else {
        let t = a.solve(&b).map_err(|e| match e {
            Error::NotUnique(_) | Error::Inconsistent => Error::IllConditioned { condition: f64::INFINITY },
            other => other,
        })?;
        (t, f64::NAN)
    };
    if !T::is_exact() {
        let scale = b.iter().map(|x| x.magnitude()).fold(1.0, f64::max) * condition.max(1.0);
        let r = a.mul_vec(&t);
        if r.iter().zip(&b).any(|(x, y)| !x.minus(y).negligible(scale)) {
            return Err(Error::IllConditioned { condition });
        }
    }
    let lift = shape.lift_from_coordinates(&t);
    Ok(RealLift {
        lift,
        coordinates: t,
        condition,
    })
}

/// `Y[v₀]` preserves `ℤ^n` exactly when `v₀` is integral.
pub fn is_integral(shape: &ExtensionShape, y: &Grading<Scalar>) -> bool {
    shape.lift_of(y.matrix()).iter().all(|x| x.is_integer())
}

/// The point of `H_ℝ/H_ℤ` given by `(Y(s) − Y_ℤ)(1)`, in `ℤ`-basis coordinates.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExtensionClass {
    /// Coordinates of `(Y(s) − Y_ℤ)·g₀`.
    pub coordinates: Vec<String>,
    /// Representative in `[0, 1)^m`.
    pub reduced: Vec<String>,
    /// Lattice vector subtracted during reduction.
    pub shift: Vec<String>,
    pub is_zero: bool,
}

pub fn extension_class(germ: &InteriorGerm, s: &Scalar, reference: Option<&[Scalar]>) -> Result<ExtensionClass> {
    let t = germ.lift_coordinates_at(s)?;
    let m = t.len();
    let r0: Vec<Scalar> = match reference {
        Some(v) => {
            if !v.iter().all(|x| x.is_integer()) {
                return Err(Error::Precondition("reference grading is not integral".into()));
            }
            germ.shape.coordinates(v)
        }
        None => vec![Scalar::zero(); m],
    };
    let d: Vec<Rational> = t.iter().zip(&r0).map(|(a, b)| (a - b).re().clone()).collect();
    let shift: Vec<Rational> = d.iter().map(|x| Rational::from(rug::Integer::from(x.floor_ref()))).collect();
    let reduced: Vec<Rational> = d.iter().zip(&shift).map(|(a, b)| Rational::from(a - b)).collect();
    Ok(ExtensionClass {
        coordinates: d.iter().map(|x| x.to_string()).collect(),
        reduced: reduced.iter().map(|x| x.to_string()).collect(),
        shift: shift.iter().map(|x| x.to_string()).collect(),
        is_zero: reduced.iter().all(|x| x.cmp0().is_eq()),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ZeroLocusKind {
    Empty,
    Isolated,
    WholeDisk,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ZeroLocusDescription {
    pub kind: ZeroLocusKind,
    pub roots: Vec<CertifiedRoot>,
    /// Radius of the disk that was searched.
    pub radius: Rational,
    /// Radius within which no other integral-grading component can enter.
    pub certified_radius: Rational,
    /// Monic gcd of the coordinate polynomials of `Γ₋₁`, when nonzero.
    pub equation: Option<Poly>,
}

/// `(Γ₀, Γ₋₁)`: components of `Γ(s)` in the `ad Y` eigenvalues `0` and `−1`.
pub fn split_gamma(gamma: &[(usize, ExactMatrix)], y: &Grading<Scalar>, n: usize) -> Result<(PolyMatrix, PolyMatrix)> {
    let mut g0 = Vec::new();
    let mut g1 = Vec::new();
    for (k, m) in gamma {
        let comps = y.ad_components(m);
        for (&e, c) in &comps {
            match e {
                0 => g0.push((*k, c.clone())),
                -1 => g1.push((*k, c.clone())),
                other => {
                    return Err(Error::InvalidGerm(format!("gamma has a component of ad Y eigenvalue {other}")));
                }
            }
        }
    }
    Ok((PolyMatrix::from_coefficients(n, &g0, None), PolyMatrix::from_coefficients(n, &g1, None)))
}

/// Monic gcd of all entries; `None` when every entry vanishes.
pub fn entry_gcd(m: &PolyMatrix) -> Option<Poly> {
    let mut g: Option<Poly> = None;
    for p in m.entries() {
        if p.degree().is_none() {
            continue;
        }
        g = Some(match g {
            None => p.monic(),
            Some(q) => q.gcd(p),
        });
    }
    g
}

/// Bound `D(ρ)` on `max_j |t_j(s) − t_j(0)|` over `|s| ≤ ρ`.
///
/// With `a(s) = Ψ(ad Γ₀(s))Γ₋₁(s)·v₀ = Σ s^k a_k`, the real lift moves by the
/// unique real `d ≡ a(s) mod F⁰H(s)`. At `F⁰H(s) = F⁰H` this is the real-linear map
/// `L(a) = 2·Re(π⁻a)` (`π⁻` projects onto `conj F⁰H`), and
/// `|L_j(s^k a_k)| ≤ |s|^k·sqrt(L_j(a_k)² + L_j(i·a_k)²)`. Motion of `F⁰H(s)` under
/// `Γ₀` is covered by a perturbation bound on the projection.
#[derive(Clone, Debug)]
pub struct DisplacementBound {
    linear: Vec<Vec<f64>>,
    a_norms: Vec<f64>,
    gamma_h_norms: Vec<f64>,
    kappa: f64,
    beta: f64,
    row_norms: Vec<f64>,
}

fn abs_scalar(x: &Scalar) -> f64 {
    let (a, b) = x.to_f64_pair();
    a.hypot(b)
}

fn frobenius(m: &ExactMatrix) -> f64 {
    m.entries().iter().map(|x| abs_scalar(x).powi(2)).sum::<f64>().sqrt()
}

impl DisplacementBound {
    pub fn new(germ: &InteriorGerm, y0: &Grading<Scalar>) -> Result<Self> {
        let shape = &germ.shape;
        let n = shape.dim();
        let (g0p, g1p) = split_gamma(&germ.gamma, y0, n)?;
        let v0 = shape.lift_of(y0.matrix());
        let a_poly = psi_series(&g0p, &g1p)?;
        let deg = a_poly.degree().unwrap_or(0);
        let fh = germ.f_base.get(0).intersect(shape.h())?;
        let b: Vec<Vec<Scalar>> = fh.basis().iter().map(|v| shape.h_coordinates(v)).collect();
        let bbar: Vec<Vec<Scalar>> = b.iter().map(|v| v.iter().map(|x| x.conj()).collect()).collect();
        let m = shape.h_basis().len();
        let mut kcols = b.clone();
        kcols.extend(bbar.iter().cloned());
        let k0 = ExactMatrix::from_columns(m, &kcols, &());
        let k0_inv = k0.inverse().map_err(|_| Error::InvalidGerm("F^0 H is not a Hodge half of H".into()))?;
        let bbar_m = ExactMatrix::from_columns(m, &bbar, &());
        let g = b.len();
        let sel_rows: Vec<usize> = (g..2 * g).collect();
        let all: Vec<usize> = (0..m).collect();
        let proj = bbar_m.mul_ref(&k0_inv.select(&sel_rows, &all));
        let lmap = |a: &[Scalar]| -> Vec<f64> {
            proj.mul_vec(a).iter().map(|x| 2.0 * x.re().to_f64()).collect()
        };
        let mut linear = vec![vec![0.0; deg + 1]; m];
        let mut a_norms = vec![0.0; deg + 1];
        for k in 1..=deg {
            let ak = a_poly.coefficient(k).mul_vec(&v0);
            let ah = shape.h_coordinates(&ak);
            let iah: Vec<Scalar> = ah.iter().map(|x| x * &Scalar::i()).collect();
            let l1 = lmap(&ah);
            let l2 = lmap(&iah);
            for j in 0..m {
                linear[j][k] = l1[j].hypot(l2[j]);
            }
            a_norms[k] = ah.iter().map(|x| abs_scalar(x).powi(2)).sum::<f64>().sqrt();
        }
        // Γ₀ restricted to H, in H-coordinates
        let hb = ExactMatrix::from_columns(n, shape.h_basis(), &());
        let gdeg = g0p.degree().unwrap_or(0);
        let mut gamma_h_norms = vec![0.0; gdeg + 1];
        for k in 1..=gdeg {
            let ck = g0p.coefficient(k).mul_ref(&hb);
            let ch = ExactMatrix::from_columns(m, &ck.columns().iter().map(|c| shape.h_coordinates(c)).collect::<Vec<_>>(), &());
            gamma_h_norms[k] = frobenius(&ch);
        }
        let row_norms = vec![1.0; m];
        Ok(DisplacementBound {
            linear,
            a_norms,
            gamma_h_norms,
            kappa: frobenius(&k0_inv),
            beta: frobenius(&ExactMatrix::from_columns(m, &b, &())),
            row_norms,
        })
    }

    pub fn at(&self, rho: f64) -> f64 {
        let poly = |c: &[f64]| c.iter().enumerate().map(|(k, x)| x * rho.powi(k as i32)).sum::<f64>();
        let eps = poly(&self.gamma_h_norms);
        let eta = eps.exp_m1();
        let a = poly(&self.a_norms);
        let correction = if eta == 0.0 {
            0.0
        } else {
            let denom = 1.0 - self.kappa * std::f64::consts::SQRT_2 * eta * self.beta;
            if denom <= 0.0 {
                return f64::INFINITY;
            }
            let kappa_s = self.kappa / denom;
            let dpi = eta * self.beta * kappa_s * (1.0 + std::f64::consts::SQRT_2 * self.kappa * self.beta);
            2.0 * dpi * a
        };
        let worst = self
            .linear
            .iter()
            .zip(&self.row_norms)
            .map(|(c, r)| poly(c) + r * correction)
            .fold(0.0, f64::max);
        worst * (1.0 + 1e-9)
    }

    /// Largest `ρ ≤ limit` (to 2^-40 relative) with `D(ρ) < threshold`.
    pub fn radius_below(&self, threshold: f64, limit: f64) -> f64 {
        if self.at(limit) < threshold {
            return limit;
        }
        let (mut lo, mut hi) = (0.0, limit);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if self.at(mid) < threshold {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }
}

fn rational_below(x: f64) -> Rational {
    let scaled = (x * (1u64 << 40) as f64).floor();
    Rational::from((scaled as u64, 1u64 << 40))
}

/// Largest distance of a coordinate to the nearest integer.
pub fn lattice_distance(t: &[Scalar]) -> f64 {
    t.iter()
        .map(|x| {
            let re = x.re();
            let nearest = Rational::from(re.round_ref());
            let d = Rational::from(re - &nearest).abs().to_f64();
            d.max(x.im().to_f64().abs())
        })
        .fold(0.0, f64::max)
}

/// Zero locus near the base point, on the disk `|s| < r`.
pub fn interior_zero_locus(germ: &InteriorGerm, r: &Rational) -> Result<ZeroLocusDescription> {
    let r = if *r > germ.radius { germ.radius.clone() } else { r.clone() };
    let y0 = germ.grading_at(&Scalar::zero())?;
    let t0 = germ.shape.coordinates(&germ.shape.lift_of(y0.matrix()));
    let bound = DisplacementBound::new(germ, &y0)?;
    if !is_integral(&germ.shape, &y0) {
        let distance = lattice_distance(&t0);
        let empty = bound.radius_below(distance, germ.radius.to_f64());
        return Err(Error::NotAZeroAtCenter {
            distance,
            empty_radius: empty,
        });
    }
    let certified = rational_below(bound.radius_below(0.5, r.to_f64())).min(r.clone());
    let certified = if certified == rational_below(r.to_f64()) && bound.at(r.to_f64()) < 0.5 {
        r.clone()
    } else {
        certified
    };
    let (_, g1) = split_gamma(&germ.gamma, &y0, germ.dim())?;
    match entry_gcd(&g1) {
        None => Ok(ZeroLocusDescription {
            kind: ZeroLocusKind::WholeDisk,
            roots: vec![],
            radius: r,
            certified_radius: certified,
            equation: None,
        }),
        Some(g) => {
            let roots = isolate_roots(&g, &r, 128)?;
            Ok(ZeroLocusDescription {
                kind: if roots.is_empty() { ZeroLocusKind::Empty } else { ZeroLocusKind::Isolated },
                roots,
                radius: r,
                certified_radius: certified,
                equation: Some(g),
            })
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanSample {
    pub re: f64,
    pub im: f64,
    pub distance: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanCandidate {
    /// Exact location when rational reconstruction and exact integrality succeeded.
    pub exact: Option<String>,
    pub re: f64,
    pub im: f64,
    pub distance: f64,
    pub confirmed: bool,
    /// Local kind of the zero locus at the re-centered germ.
    pub local_kind: Option<ZeroLocusKind>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanReport {
    pub samples: Vec<ScanSample>,
    pub candidates: Vec<ScanCandidate>,
    /// Every sample is integral within tolerance.
    pub everywhere: bool,
    pub tolerance: f64,
}

#[derive(Clone, Debug)]
pub struct ScanConfig {
    pub resolution: usize,
    pub precision: u32,
    pub tolerance: f64,
    pub recenter_order: usize,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            resolution: 41,
            precision: 128,
            tolerance: 1e-10,
            recenter_order: 6,
        }
    }
}

fn numeric_point(prec: u32, re: &Float, im: &Float) -> NumericScalar {
    NumericScalar::new(rug::Complex::with_val(prec, (re, im)))
}

fn float_distance(t: &[NumericScalar]) -> (Vec<Float>, f64) {
    let mut worst = 0.0f64;
    let mut res = Vec::new();
    for x in t {
        let re = x.re().clone();
        let nearest = Float::with_val(re.prec(), re.round_ref());
        let d = Float::with_val(re.prec(), &re - &nearest);
        worst = worst.max(d.to_f64().abs()).max(x.im().to_f64().abs());
        res.push(d);
    }
    (res, worst)
}

/// Grid scan of the integrality distance of `Y(s)` over `|s| < r`, with refinement
/// of local minima and exact confirmation of each candidate.
pub fn zero_scan(germ: &InteriorGerm, r: f64, config: &ScanConfig) -> Result<ScanReport> {
    let prec = config.precision;
    let res = config.resolution.max(3);
    let step = 2.0 * r / (res - 1) as f64;
    let points: Vec<(usize, usize, f64, f64)> = (0..res)
        .flat_map(|i| (0..res).map(move |j| (i, j)))
        .map(|(i, j)| (i, j, -r + step * i as f64, -r + step * j as f64))
        .filter(|&(_, _, x, y)| x.hypot(y) < r)
        .collect();
    let samples: Vec<(usize, usize, ScanSample)> = points
        .par_iter()
        .filter_map(|&(i, j, x, y)| {
            let s = NumericScalar::from_f64(prec, x, y);
            let lift = germ.lift_at_numeric(&s).ok()?;
            let (_, d) = float_distance(&lift.coordinates);
            Some((i, j, ScanSample { re: x, im: y, distance: d }))
        })
        .collect();
    let mut grid = vec![vec![f64::INFINITY; res]; res];
    for (i, j, s) in &samples {
        grid[*i][*j] = s.distance;
    }
    let everywhere = !samples.is_empty() && samples.iter().all(|s| s.2.distance < config.tolerance);
    let mut candidates = Vec::new();
    if !everywhere {
        let mut seeds = Vec::new();
        for (i, j, s) in &samples {
            let d = s.distance;
            if d > 0.25 {
                continue;
            }
            let mut minimal = true;
            for di in -1i64..=1 {
                for dj in -1i64..=1 {
                    let (a, b) = (*i as i64 + di, *j as i64 + dj);
                    if (di, dj) == (0, 0) || a < 0 || b < 0 || a >= res as i64 || b >= res as i64 {
                        continue;
                    }
                    let nd = grid[a as usize][b as usize];
                    if nd < d || (nd == d && (a, b) < (*i as i64, *j as i64)) {
                        minimal = false;
                    }
                }
            }
            if minimal {
                seeds.push((s.re, s.im));
            }
        }
        let refined: Vec<ScanCandidate> = seeds
            .par_iter()
            .filter_map(|&(x, y)| refine_candidate(germ, x, y, r, config).ok())
            .collect();
        for c in refined {
            if c.distance >= config.tolerance {
                continue;
            }
            let dup = candidates.iter().any(|o: &ScanCandidate| {
                (o.exact.is_some() && o.exact == c.exact) || ((o.re - c.re).hypot(o.im - c.im) < 1e-8)
            });
            if !dup {
                candidates.push(c);
            }
        }
    }
    candidates.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let mut samples: Vec<ScanSample> = samples.into_iter().map(|s| s.2).collect();
    samples.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(ScanReport {
        samples,
        candidates,
        everywhere,
        tolerance: config.tolerance,
    })
}

/// Gauss–Newton on `t(σ, τ) − round(t)`, then exact confirmation.
fn refine_candidate(germ: &InteriorGerm, x: f64, y: f64, r: f64, config: &ScanConfig) -> Result<ScanCandidate> {
    let prec = config.precision;
    let mut sx = Float::with_val(prec, x);
    let mut sy = Float::with_val(prec, y);
    let eval = |a: &Float, b: &Float| -> Result<Vec<Float>> {
        let lift = germ.lift_at_numeric(&numeric_point(prec, a, b))?;
        Ok(float_distance(&lift.coordinates).0)
    };
    let h = Float::with_val(prec, Float::i_exp(1, -(prec as i32) / 3));
    let mut distance = f64::INFINITY;
    for _ in 0..60 {
        let f0 = eval(&sx, &sy)?;
        distance = f0.iter().map(|v| v.to_f64().abs()).fold(0.0, f64::max);
        if distance < 2f64.powi(-(prec as i32) / 2) {
            break;
        }
        let fx = eval(&Float::with_val(prec, &sx + &h), &sy)?;
        let fy = eval(&sx, &Float::with_val(prec, &sy + &h))?;
        let jx: Vec<Float> = fx.iter().zip(&f0).map(|(a, b)| Float::with_val(prec, a - b) / &h).collect();
        let jy: Vec<Float> = fy.iter().zip(&f0).map(|(a, b)| Float::with_val(prec, a - b) / &h).collect();
        let dot = |u: &[Float], v: &[Float]| u.iter().zip(v).fold(Float::new(prec), |acc, (a, b)| acc + Float::with_val(prec, a * b));
        let (a11, a12, a22) = (dot(&jx, &jx), dot(&jx, &jy), dot(&jy, &jy));
        let (b1, b2) = (dot(&jx, &f0), dot(&jy, &f0));
        let det = Float::with_val(prec, &a11 * &a22) - Float::with_val(prec, &a12 * &a12);
        if det.is_zero() {
            break;
        }
        let dx = (Float::with_val(prec, &a22 * &b1) - Float::with_val(prec, &a12 * &b2)) / &det;
        let dy = (Float::with_val(prec, &a11 * &b2) - Float::with_val(prec, &a12 * &b1)) / &det;
        sx -= dx;
        sy -= dy;
        if Float::with_val(53, sx.to_f64().hypot(sy.to_f64())) >= r {
            return Err(Error::OutOfRadius);
        }
    }
    let mut cand = ScanCandidate {
        exact: None,
        re: sx.to_f64(),
        im: sy.to_f64(),
        distance,
        confirmed: false,
        local_kind: None,
    };
    let approx = Scalar::new(sx.to_rational().unwrap_or_default(), sy.to_rational().unwrap_or_default());
    if let Some(q) = reconstruct_scalar(&approx, 1 << 20) {
        if let Ok(t) = germ.lift_coordinates_at(&q) {
            if t.iter().all(|v| v.is_integer()) {
                cand.exact = Some(q.to_string());
                cand.confirmed = true;
                if let Ok(local) = germ.recenter(&q, config.recenter_order) {
                    let probe = Rational::from((1, 1u64 << 10)).min(local.radius.clone());
                    if let Ok(desc) = interior_zero_locus(&local, &probe) {
                        cand.local_kind = Some(desc.kind);
                    }
                }
            }
        }
    }
    Ok(cand)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TransversalityReport {
    pub passes: bool,
    /// Vacuous when `F^{p−1} = V` for every `p` with `F^p ≠ V`.
    pub vacuous: bool,
    /// Smallest `p` with `ω·F^p ⊄ F^{p−1}`.
    pub witness: Option<i32>,
}

/// Checks `exp(−Γ)·d/ds exp(Γ)` maps `F^p` into `F^{p−1}`, coefficient by coefficient.
pub fn transversality_check(germ: &InteriorGerm) -> Result<TransversalityReport> {
    let f = &germ.f_base;
    let (bottom, top) = f.range();
    let vacuous = top - bottom <= 1;
    let e = &germ.exp_gamma;
    let e_inv = germ.gamma_poly.neg_ref().exp_nilpotent()?;
    let omega = e_inv.mul_ref(&e.derivative());
    let deg = omega.degree().unwrap_or(0);
    let coeffs: Vec<ExactMatrix> = (0..=deg).map(|k| omega.coefficient(k)).collect();
    for p in bottom + 1..=top {
        let fp = f.get(p);
        let target = f.get(p - 1);
        for c in &coeffs {
            if !target.contains_subspace(&fp.image(c)) {
                return Ok(TransversalityReport {
                    passes: false,
                    vacuous,
                    witness: Some(p),
                });
            }
        }
    }
    Ok(TransversalityReport {
        passes: true,
        vacuous,
        witness: None,
    })
}

/// Numeric `exp(Γ(s))` as a matrix.
pub fn exp_gamma_numeric(germ: &InteriorGerm, s: &NumericScalar) -> NumericMatrix {
    germ.exp_gamma.eval_numeric(s)
}
