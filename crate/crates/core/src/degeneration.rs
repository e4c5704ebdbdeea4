//! Germs at a puncture: admissibility, limiting data, numeric period sampling,
//! the limit grading `Y^‡` and the classification of the zero locus near `s = 0`.

use crate::algebra::{ExactMatrix, Field, NumericMatrix, NumericScalar, PolyMatrix, Ring, Scalar};
use crate::error::{Error, Result};
use crate::filtration::{deligne_grading_prime, relative_weight_filtration, ExtensionShape, Grading, HodgeFiltration, RelativeWeightData};
use crate::interior::{entry_gcd, numeric_filtration, real_lift, split_gamma};
use crate::mhs::{
    chart_subalgebra, deligne_grading, delta_splitting, induced_endomorphism_bigrading, lie_algebra, validate_polarization,
    ChartFlavor, MixedHodgeStructure, PolarizationForm, PolarizationReport,
};
use crate::nilpotent::psi_series;
use crate::richardson::extrapolate_to_zero;
use crate::roots::{isolate_roots, CertifiedRoot};
use rayon::prelude::*;
use rug::{Complex, Float, Rational};
use serde::Serialize;

/// `F(s) = exp((log s / 2πi)·N)·exp(Γ(s))·F_∞` over a punctured disk.
#[derive(Clone, Debug)]
pub struct PunctureGerm {
    pub name: String,
    shape: ExtensionShape,
    polarization: PolarizationForm,
    n: ExactMatrix,
    f_infinity: HodgeFiltration<Scalar>,
    gamma: Vec<(usize, ExactMatrix)>,
    radius: Rational,
    gamma_poly: PolyMatrix,
    exp_gamma: PolyMatrix,
    n_powers: Vec<ExactMatrix>,
}

impl PunctureGerm {
    /// Checks the structural invariants that do not depend on the relative weight filtration.
    pub fn new(
        name: impl Into<String>,
        shape: ExtensionShape,
        polarization: PolarizationForm,
        n: ExactMatrix,
        f_infinity: HodgeFiltration<Scalar>,
        gamma: Vec<(usize, ExactMatrix)>,
        radius: Rational,
    ) -> Result<Self> {
        let dim = shape.dim();
        if n.rows() != dim || n.cols() != dim {
            return Err(Error::DimensionMismatch(format!("N is not {dim} x {dim}")));
        }
        if f_infinity.ambient() != dim {
            return Err(Error::AmbientMismatch(f_infinity.ambient(), dim));
        }
        if radius.cmp0().is_le() {
            return Err(Error::InvalidGerm("radius must be positive".into()));
        }
        if !n.is_integral() {
            return Err(Error::InvalidGerm("N must be integral".into()));
        }
        let e = n.exp_nilpotent().map_err(|_| Error::InvalidGerm("N is not nilpotent".into()))?;
        if !e.is_integral() {
            return Err(Error::InvalidGerm("exp(N) does not preserve the lattice".into()));
        }
        if !shape.weight().preserved_by(&n) {
            return Err(Error::InvalidGerm("N does not preserve W".into()));
        }
        if !polarization.is_infinitesimal_isometry(&n, shape.h()) {
            return Err(Error::InvalidGerm("N is not an infinitesimal isometry of Q on W_-1".into()));
        }
        for (k, m) in &gamma {
            if *k == 0 {
                return Err(Error::InvalidGerm("gamma must vanish at s = 0".into()));
            }
            if m.rows() != dim || m.cols() != dim {
                return Err(Error::DimensionMismatch(format!("gamma coefficient of s^{k} is not {dim} x {dim}")));
            }
        }
        let gamma_poly = PolyMatrix::from_coefficients(dim, &gamma, None);
        let exp_gamma = gamma_poly.exp_nilpotent()?;
        let mut n_powers = vec![ExactMatrix::identity(dim, &())];
        while !n_powers.last().unwrap().is_zero() {
            let next = n_powers.last().unwrap().mul_ref(&n);
            n_powers.push(next);
        }
        n_powers.pop();
        Ok(PunctureGerm {
            name: name.into(),
            shape,
            polarization,
            n,
            f_infinity,
            gamma,
            radius,
            gamma_poly,
            exp_gamma,
            n_powers,
        })
    }

    pub fn shape(&self) -> &ExtensionShape {
        &self.shape
    }

    pub fn polarization(&self) -> &PolarizationForm {
        &self.polarization
    }

    pub fn monodromy(&self) -> &ExactMatrix {
        &self.n
    }

    pub fn f_infinity(&self) -> &HodgeFiltration<Scalar> {
        &self.f_infinity
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

    /// `exp(zN)` at working precision, from the exact powers of `N`.
    pub fn exp_zn(&self, z: &NumericScalar) -> NumericMatrix {
        let prec = z.precision();
        let mut out = NumericMatrix::zeros(self.dim(), self.dim(), &prec);
        let mut coeff = NumericScalar::from_f64(prec, 1.0, 0.0);
        for (k, p) in self.n_powers.iter().enumerate() {
            if k > 0 {
                coeff = coeff.times(z).scale_rational(&Rational::from((1, k as u32)));
            }
            out = out.add_ref(&p.to_numeric(prec).scale(&coeff));
        }
        out
    }

    pub fn exp_gamma_numeric(&self, s: &NumericScalar) -> NumericMatrix {
        self.exp_gamma.eval_numeric(s)
    }
}

/// `s = exp(2πiz)`.
pub fn puncture_coordinate(z: &NumericScalar) -> NumericScalar {
    let prec = z.precision();
    let two_pi_i = Complex::with_val(prec, (0, Float::with_val(prec, crate::algebra::pi(prec) * 2u32)));
    NumericScalar::new(Complex::with_val(prec, &two_pi_i * z.value())).exp()
}

/// Output of the admissibility check: `M` and the limiting mixed Hodge structure.
#[derive(Clone, Debug)]
pub struct Admissible {
    pub relative: RelativeWeightData,
    pub limit_mhs: MixedHodgeStructure<Scalar>,
}

/// `M` exists, `(F_∞, M)` is a mixed Hodge structure, `N ∈ 𝔤^{−1,−1}` and `Γ` takes values in `q_∞`.
pub fn validate_admissibility(germ: &PunctureGerm) -> Result<Admissible> {
    let w = germ.shape.weight();
    let relative = relative_weight_filtration(&germ.n, &w).map_err(|e| match e {
        Error::Nonexistence(msg) => Error::NonAdmissible(format!("relative weight filtration: {msg}")),
        Error::Consistency(msg) => Error::NonAdmissible(format!("relative weight filtration: {msg}")),
        other => other,
    })?;
    let limit_mhs = MixedHodgeStructure::new(germ.f_infinity.clone(), relative.m.clone()).map_err(|e| match e {
        Error::InvalidMhs { k, p } => {
            Error::NonAdmissible(format!("(F_inf, M) is not a mixed Hodge structure: Gr_{k} fails at p = {p}"))
        }
        other => other,
    })?;
    let eb = induced_endomorphism_bigrading(&limit_mhs)?;
    if !eb.has_type(&germ.n, -1, -1) {
        return Err(Error::NonAdmissible("N is not a (-1,-1)-morphism of (F_inf, M)".into()));
    }
    let g = lie_algebra::<Scalar>(&germ.shape, &germ.polarization, &());
    let q = chart_subalgebra(&limit_mhs, &g, ChartFlavor::Puncture)?;
    for (k, m) in &germ.gamma {
        if !q.contains(&m.flatten()) {
            return Err(Error::InvalidGerm(format!("gamma coefficient of s^{k} is not in q_inf")));
        }
    }
    Ok(Admissible { relative, limit_mhs })
}

/// A matrix that is exact when every input was.
#[derive(Clone, Debug, PartialEq)]
pub enum MatrixValue {
    Exact(ExactMatrix),
    Numeric(NumericMatrix),
}

impl MatrixValue {
    pub fn is_zero(&self) -> bool {
        match self {
            MatrixValue::Exact(m) => m.is_zero(),
            MatrixValue::Numeric(m) => m.is_negligible(1.0),
        }
    }

    pub fn norm(&self) -> f64 {
        match self {
            MatrixValue::Exact(m) => m.max_magnitude(),
            MatrixValue::Numeric(m) => m.max_magnitude(),
        }
    }
}

/// Extrapolation schedule for `Y^‡`.
#[derive(Clone, Debug)]
pub struct LimitConfig {
    pub x: f64,
    pub y0: f64,
    pub order: usize,
    pub precision: u32,
}

impl Default for LimitConfig {
    fn default() -> Self {
        LimitConfig {
            x: 0.0,
            y0: 4.0,
            order: 6,
            precision: 256,
        }
    }
}

impl LimitConfig {
    /// `y_k = y₀·2^k` for `k = 0..order+2`.
    pub fn schedule(&self) -> Vec<f64> {
        (0..self.order + 3).map(|k| self.y0 * 2f64.powi(k as i32)).collect()
    }
}

/// `Y^‡` as lift coordinates in the `ℤ`-basis of `H`.
#[derive(Clone, Debug)]
pub struct LimitGrading {
    pub coordinates: Vec<Float>,
    /// Estimated max-norm error of `coordinates`.
    pub error: f64,
    /// Set on the `δ = 0` branch, where `Y^‡ = Ŷ` exactly.
    pub exact: Option<Vec<Scalar>>,
    pub history: Vec<f64>,
}

impl LimitGrading {
    pub fn lift(&self, shape: &ExtensionShape) -> Vec<NumericScalar> {
        let prec = self.coordinates.first().map(|c| c.prec()).unwrap_or(64);
        let t: Vec<NumericScalar> = self.coordinates.iter().map(|c| NumericScalar::from_floats(c, &Float::new(prec))).collect();
        shape.lift_from_coordinates(&t)
    }

    pub fn grading(&self, shape: &ExtensionShape) -> Grading<NumericScalar> {
        shape.grading(&self.lift(shape))
    }

    pub fn exact_grading(&self, shape: &ExtensionShape) -> Option<Grading<Scalar>> {
        self.exact.as_ref().map(|t| shape.grading(&shape.lift_from_coordinates(t)))
    }

    /// Largest distance of a coordinate to `ℤ`.
    pub fn lattice_distance(&self) -> f64 {
        if let Some(t) = &self.exact {
            return crate::interior::lattice_distance(t);
        }
        self.coordinates
            .iter()
            .map(|c| Float::with_val(c.prec(), c - Float::with_val(c.prec(), c.round_ref())).abs().to_f64())
            .fold(0.0, f64::max)
    }
}

/// Limiting data at the puncture.
#[derive(Clone, Debug)]
pub struct LimitData {
    pub relative: RelativeWeightData,
    pub limit_mhs: MixedHodgeStructure<Scalar>,
    pub delta: ExactMatrix,
    pub f_hat: HodgeFiltration<Scalar>,
    pub y_hat_m: Grading<Scalar>,
    pub y_hat: Grading<Scalar>,
    pub h_operator: ExactMatrix,
    pub f_o: HodgeFiltration<Scalar>,
    pub f_o_polarization: PolarizationReport,
    pub y_infinity: Grading<Scalar>,
}

fn scaled_exp(x: &ExactMatrix, c: Scalar) -> Result<ExactMatrix> {
    x.scale(&c).exp_nilpotent()
}

/// Limiting data with its consistency checks; any failed check aborts.
pub fn limit_data(germ: &PunctureGerm) -> Result<LimitData> {
    let adm = validate_admissibility(germ)?;
    let w = germ.shape.weight();
    let split = delta_splitting(&adm.limit_mhs)?;
    let hat = MixedHodgeStructure::new(split.f_hat.clone(), adm.relative.m.clone())?;
    let y_hat_m = deligne_grading(&hat)?;
    let y_hat = deligne_grading_prime(&germ.n, &y_hat_m, &w)?;
    let y_m_inf = deligne_grading(&adm.limit_mhs)?;
    let y_infinity = deligne_grading_prime(&germ.n, &y_m_inf, &w)?;
    let h_operator = y_hat_m.matrix().sub_ref(y_hat.matrix());
    let two_n = germ.n.scale(&Scalar::int(2));
    if h_operator.commutator(&germ.n) != two_n.neg_ref() {
        return Err(Error::Consistency("[H, N] != -2N".into()));
    }
    if !h_operator.is_real() {
        return Err(Error::Consistency("H is not real".into()));
    }
    if !split.f_hat.preserved_by(&h_operator) {
        return Err(Error::Consistency("H does not preserve F_hat".into()));
    }
    if !y_infinity.preserves(&germ.f_infinity) {
        return Err(Error::Consistency("Y_inf does not preserve F_inf".into()));
    }
    let conjugated = y_infinity.act(&scaled_exp(&split.delta, Scalar::gauss((0, 1), (-1, 1)))?)?;
    if conjugated != y_hat {
        return Err(Error::Consistency("Y_hat != exp(-i delta).Y_inf".into()));
    }
    let f_o = split.f_hat.image(&scaled_exp(&germ.n, Scalar::i())?);
    let y_fo = deligne_grading(&MixedHodgeStructure::new(f_o.clone(), w)?)?;
    if y_fo != y_hat {
        return Err(Error::Consistency("Y_(F_o, W) != Y_hat".into()));
    }
    let f_o_polarization = validate_polarization(&f_o, germ.shape.h(), &germ.polarization)?;
    if !f_o_polarization.valid {
        return Err(Error::Consistency(format!("F_o is not polarized on W_-1: {:?}", f_o_polarization.failure)));
    }
    Ok(LimitData {
        relative: adm.relative,
        limit_mhs: adm.limit_mhs,
        delta: split.delta,
        f_hat: split.f_hat,
        y_hat_m,
        y_hat,
        h_operator,
        f_o,
        f_o_polarization,
        y_infinity,
    })
}

fn numeric_z(prec: u32, x: f64, y: f64) -> NumericScalar {
    NumericScalar::from_f64(prec, x, y)
}

/// `F(z)` for `Im z > 0`, at the precision of `z`.
pub fn evaluate_period(germ: &PunctureGerm, z: &NumericScalar) -> Result<HodgeFiltration<NumericScalar>> {
    let prec = z.precision();
    if z.im().cmp0() != Some(std::cmp::Ordering::Greater) {
        return Err(Error::Precondition("Im z must be positive".into()));
    }
    let s = puncture_coordinate(z);
    if s.abs() >= Float::with_val(prec, &germ.radius) {
        return Err(Error::OutOfRadius);
    }
    if s.abs().is_zero() && !germ.gamma.is_empty() {
        return Err(Error::PrecisionUnderflow);
    }
    let a = germ.exp_zn(z);
    let b = germ.exp_gamma_numeric(&s);
    let a_inv = germ.exp_zn(&z.negate());
    let check = a.mul_ref(&a_inv).sub_ref(&NumericMatrix::identity(germ.dim(), &prec));
    if !check.is_negligible(a.max_magnitude().powi(2).max(1.0)) {
        return Err(Error::PrecisionUnderflow);
    }
    Ok(numeric_filtration(&germ.f_infinity, prec).image(&a.mul_ref(&b)))
}

/// The real grading `Y(z)` with its lift coordinates and condition estimate.
pub fn grading_numeric(germ: &PunctureGerm, z: &NumericScalar) -> Result<(Grading<NumericScalar>, Vec<NumericScalar>, f64)> {
    let f = evaluate_period(germ, z)?;
    let lift = real_lift(&germ.shape, &f)?;
    Ok((germ.shape.grading(&lift.lift), lift.coordinates, lift.condition))
}

/// `Y^‡ = lim Y(x + iy)` as `y → ∞`, by Richardson extrapolation in `1/y`.
pub fn limit_grading(germ: &PunctureGerm, data: &LimitData, config: &LimitConfig) -> Result<LimitGrading> {
    let prec = config.precision;
    let ys = config.schedule();
    let samples: Vec<Result<Vec<Float>>> = ys
        .par_iter()
        .map(|&y| {
            let (_, t, _) = grading_numeric(germ, &numeric_z(prec, config.x, y))?;
            let scale = t.iter().map(|c| c.magnitude()).fold(1.0, f64::max);
            if t.iter().any(|c| !c.im_part().negligible(scale)) {
                return Err(Error::Consistency("numeric grading is not real".into()));
            }
            Ok(t.iter().map(|c| c.re().clone()).collect())
        })
        .collect();
    let values: Vec<Vec<Float>> = samples.into_iter().collect::<Result<_>>()?;
    let hs: Vec<Float> = ys.iter().map(|y| Float::with_val(prec, 1.0 / y)).collect();
    let floor = 2f64.powi(-(prec as i32) / 2);
    let ext = extrapolate_to_zero(&hs, &values, floor)?;
    let mut out = LimitGrading {
        coordinates: ext.value,
        error: ext.error,
        exact: None,
        history: ext.history,
    };
    if data.delta.is_zero() {
        let t = germ.shape.coordinates(&germ.shape.lift_of(data.y_hat.matrix()));
        let gap = t
            .iter()
            .zip(&out.coordinates)
            .map(|(e, c)| Float::with_val(prec, c - e.re()).abs().to_f64() + e.im().to_f64().abs())
            .fold(0.0, f64::max);
        if gap > out.error.max(1e-20) * 4.0 {
            return Err(Error::Consistency(format!("extrapolated limit misses Y_hat by {gap:e} on the split branch")));
        }
        out.exact = Some(t);
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct SectorReport {
    pub agrees: bool,
    pub difference: f64,
    pub tolerance: f64,
}

pub fn sector_independence_check(germ: &PunctureGerm, data: &LimitData, x1: f64, x2: f64, config: &LimitConfig) -> Result<SectorReport> {
    let a = limit_grading(germ, data, &LimitConfig { x: x1, ..config.clone() })?;
    let b = limit_grading(germ, data, &LimitConfig { x: x2, ..config.clone() })?;
    let difference = match (&a.exact, &b.exact) {
        (Some(p), Some(q)) => {
            if p == q {
                0.0
            } else {
                f64::INFINITY
            }
        }
        _ => a
            .coordinates
            .iter()
            .zip(&b.coordinates)
            .map(|(u, v)| Float::with_val(u.prec(), u - v).abs().to_f64())
            .fold(0.0, f64::max),
    };
    let tolerance = (a.error + b.error).max(2f64.powi(-(config.precision as i32) / 2));
    Ok(SectorReport {
        agrees: difference <= tolerance,
        difference,
        tolerance,
    })
}

/// `Y^‡ − Y_∞`; exact on the split branch.
pub fn xi_obstruction(germ: &PunctureGerm, data: &LimitData, limit: &LimitGrading) -> MatrixValue {
    match limit.exact_grading(&germ.shape) {
        Some(y) => MatrixValue::Exact(y.matrix().sub_ref(data.y_infinity.matrix())),
        None => {
            let prec = limit.coordinates.first().map(|c| c.prec()).unwrap_or(64);
            let y = limit.grading(&germ.shape);
            MatrixValue::Numeric(y.matrix().sub_ref(&data.y_infinity.matrix().to_numeric(prec)))
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum PunctureKind {
    NonAdmissible(String),
    NoZerosNearPuncture,
    NoAccumulation(Vec<CertifiedRoot>),
    WholeDisk,
}

impl PunctureKind {
    pub fn label(&self) -> &'static str {
        match self {
            PunctureKind::NonAdmissible(_) => "NonAdmissible",
            PunctureKind::NoZerosNearPuncture => "NoZerosNearPuncture",
            PunctureKind::NoAccumulation(_) => "NoAccumulation",
            PunctureKind::WholeDisk => "WholeDisk",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PunctureDiagnostics {
    pub y_ddag_integral: Option<bool>,
    pub lattice_distance: Option<f64>,
    pub limit_error: Option<f64>,
    pub obstruction_norm: Option<f64>,
    pub gamma_minus1_zero: Option<bool>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PunctureClassification {
    pub kind: PunctureKind,
    pub diagnostics: PunctureDiagnostics,
    /// Equation solved for the roots, when one was formed.
    pub equation: Option<crate::algebra::Poly>,
}

/// Integrality decision for a numeric limit: integral only when both the lattice
/// distance and the error bar are below `2^{−prec/4}`; non-integral only when the
/// distance clears twice the error bar.
pub fn decide_integrality(limit: &LimitGrading, prec: u32) -> Result<bool> {
    let d = limit.lattice_distance();
    if let Some(t) = &limit.exact {
        return Ok(t.iter().all(|x| x.is_integer()));
    }
    let tol = 2f64.powi(-(prec as i32) / 4);
    if d < tol && limit.error < tol {
        return Ok(true);
    }
    if d > 2.0 * limit.error && d >= tol {
        return Ok(false);
    }
    Err(Error::UndecidedIntegrality {
        distance: d,
        error: limit.error,
    })
}

fn without_zero(roots: Vec<CertifiedRoot>) -> Vec<CertifiedRoot> {
    roots.into_iter().filter(|r| !(r.exact && r.center.is_zero())).collect()
}

fn roots_of(m: &PolyMatrix, r: &Rational) -> Result<(Vec<CertifiedRoot>, Option<crate::algebra::Poly>)> {
    match entry_gcd(m) {
        None => Ok((vec![], None)),
        Some(g) if g.degree() == Some(0) => Ok((vec![], Some(g))),
        Some(g) => Ok((without_zero(isolate_roots(&g, r, 128)?), Some(g))),
    }
}

/// Classification of the zeros of the normal function on the punctured disk `0 < |s| < r`.
pub fn puncture_zero_locus(germ: &PunctureGerm, r: &Rational, config: &LimitConfig) -> Result<PunctureClassification> {
    let r = if *r > germ.radius { germ.radius.clone() } else { r.clone() };
    let mut diagnostics = PunctureDiagnostics {
        y_ddag_integral: None,
        lattice_distance: None,
        limit_error: None,
        obstruction_norm: None,
        gamma_minus1_zero: None,
    };
    let data = match limit_data(germ) {
        Ok(d) => d,
        Err(Error::NonAdmissible(reason)) => {
            return Ok(PunctureClassification {
                kind: PunctureKind::NonAdmissible(reason),
                diagnostics,
                equation: None,
            })
        }
        Err(e) => return Err(e),
    };
    let limit = limit_grading(germ, &data, config)?;
    diagnostics.lattice_distance = Some(limit.lattice_distance());
    diagnostics.limit_error = Some(if limit.exact.is_some() { 0.0 } else { limit.error });
    let integral = decide_integrality(&limit, config.precision)?;
    diagnostics.y_ddag_integral = Some(integral);
    if !integral {
        let obstruction = xi_obstruction(germ, &data, &limit);
        diagnostics.obstruction_norm = Some(obstruction.norm());
        return Ok(PunctureClassification {
            kind: PunctureKind::NoZerosNearPuncture,
            diagnostics,
            equation: None,
        });
    }
    // Y^‡ is integral: snap it to the lattice so the obstruction is exact
    let t: Vec<Scalar> = match &limit.exact {
        Some(t) => t.clone(),
        None => limit
            .coordinates
            .iter()
            .map(|c| Scalar::real(Rational::from(c.to_integer().unwrap_or_default())))
            .collect(),
    };
    let y_ddag = germ.shape.grading(&germ.shape.lift_from_coordinates(&t));
    let obstruction = y_ddag.matrix().sub_ref(data.y_infinity.matrix());
    diagnostics.obstruction_norm = Some(obstruction.max_magnitude());
    let (g0, g1) = split_gamma(&germ.gamma, &data.y_infinity, germ.dim())?;
    let g1_zero = g1.degree().is_none();
    diagnostics.gamma_minus1_zero = Some(g1_zero);
    if obstruction.is_zero() {
        if g1_zero {
            return Ok(PunctureClassification {
                kind: PunctureKind::WholeDisk,
                diagnostics,
                equation: None,
            });
        }
        let (roots, equation) = roots_of(&g1, &r)?;
        return Ok(PunctureClassification {
            kind: PunctureKind::NoAccumulation(roots),
            diagnostics,
            equation,
        });
    }
    // Ψ(ad Γ₀)Γ₋₁ = Y^‡ − Y_∞
    let lhs = psi_series(&g0, &g1)?;
    let rhs = obstruction.to_poly();
    let (roots, equation) = roots_of(&lhs.sub_ref(&rhs), &r)?;
    Ok(PunctureClassification {
        kind: PunctureKind::NoAccumulation(roots),
        diagnostics,
        equation,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DecompositionReport {
    /// `Y(s) − Y_∞(s)` maps `V` into `W₋₁` and `W₋₁` to zero, to tolerance.
    pub lowers_weight: bool,
    /// `Y(s) − Y_∞(s)` preserves `F(s)`, to tolerance.
    pub stabilizes: bool,
    pub residual_norm: f64,
    /// Max-norm of `exp(z·ad N)·Ψ(ad Γ₀(s))Γ₋₁(s)`.
    pub twisted_norm: f64,
    /// `log₂` of the same norm, taken before rounding to `f64`; `-inf` when it vanishes.
    pub twisted_log2: f64,
}

/// Checks `Y(s) = Y_∞(s) + ζ(s)` with `ζ(s) ∈ W₋₁End ∩ Stab F(s)` at one point.
pub fn grading_decomposition_residual(germ: &PunctureGerm, data: &LimitData, z: &NumericScalar) -> Result<DecompositionReport> {
    let prec = z.precision();
    let s = puncture_coordinate(z);
    let f = evaluate_period(germ, z)?;
    let (y, _, _) = grading_numeric(germ, z)?;
    let g = germ.exp_zn(z).mul_ref(&germ.exp_gamma_numeric(&s));
    let y_inf_s = g.mul_ref(&data.y_infinity.matrix().to_numeric(prec)).mul_ref(&g.inverse()?);
    let residual = y.matrix().sub_ref(&y_inf_s);
    let scale = y_inf_s.max_magnitude().max(1.0);
    let c: Vec<NumericScalar> = crate::filtration::convert(germ.shape.functional(), &prec);
    let lowers_h = germ
        .shape
        .h_basis()
        .iter()
        .all(|h| residual.mul_vec(&crate::filtration::convert(h, &prec)).iter().all(|x| x.negligible(scale)));
    let lowers_gr0 = residual.transpose().mul_vec(&c).iter().all(|x| x.negligible(scale));
    let stabilizes = residual.is_negligible(scale) || f.preserved_by(&residual);
    let (g0, g1) = split_gamma(&germ.gamma, &data.y_infinity, germ.dim())?;
    let a = psi_series(&g0, &g1)?.eval_numeric(&s);
    let twisted = germ.exp_zn(z).mul_ref(&a).mul_ref(&germ.exp_zn(&z.negate()));
    Ok(DecompositionReport {
        lowers_weight: lowers_h && lowers_gr0,
        stabilizes,
        residual_norm: residual.max_magnitude(),
        twisted_norm: twisted.max_magnitude(),
        twisted_log2: twisted
            .entries()
            .iter()
            .map(|x| x.abs())
            .filter(|x| !x.is_zero())
            .map(|x| x.log2().to_f64())
            .fold(f64::NEG_INFINITY, f64::max),
    })
}

/// `Im z` samples along the ray `Re z = x`, with the lift coordinates of `Y(z)`.
pub fn sample_ray(germ: &PunctureGerm, x: f64, ys: &[f64], prec: u32) -> Result<Vec<(f64, Vec<NumericScalar>)>> {
    ys.par_iter()
        .map(|&y| {
            let (_, t, _) = grading_numeric(germ, &numeric_z(prec, x, y))?;
            Ok((y, t))
        })
        .collect()
}
