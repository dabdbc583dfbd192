//! Parametric measures on Q_p and their truncated countable products.
//!
//! Two one-dimensional families:
//!
//! * q-Gaussian: density f(x) = C·∫ exp(−β|ξ|^q)·χ_1((γ − x)ξ) w(dξ),
//!   evaluated by the exact shell series — the character integral over the
//!   shell |ξ| = p^k is p^k(1 − 1/p) when |(γ−x)ξ| ≤ 1 on it, −p^{k−1} on
//!   the first oscillating shell, and 0 beyond, so the density depends on
//!   x only through |x − γ| and is a sum of nonnegative terms.
//! * second type: f(x) = Σ_j C_j·Ch_{B_j}(x/v) + h(x/v) with disjoint
//!   balls of radius ≥ 1 and a perturbation table h bounded by
//!   δ = sup|h/f| < 1. A countable disjoint cover of Q_p is truncated to
//!   a finite ball list; the density is 0 beyond the covered region and a
//!   coverage flag reports when a point fell outside.
//!
//! Products over k = 1..K factors carry the diagonal scaling J = diag(v_k)
//! and support the Kakutani machinery in [`kakutani`], inverse-CDF
//! sampling in [`sampler`], and the regular representation in [`rep`].

pub mod io;
pub mod kakutani;
pub mod rep;
pub mod sampler;

pub use kakutani::{
    cocycle_residual, kakutani_affinity, kakutani_dichotomy, pd_of_measure,
    quasi_invariance_factor, CylinderSet, DichotomyVerdict, KakutaniReport,
};
pub use rep::regular_rep_apply;
pub use sampler::InverseCdfSampler;

use crate::lattice::{LatticeError, LatticeSpec};
use crate::padic::{Ball, BallRelation, PAdic, PadicError};
use std::fmt;

/// Quadrature lattice used for normalization constants and affinity
/// integrals unless a caller supplies one: m = n = 4.
pub fn default_quadrature(p: u32) -> LatticeSpec {
    LatticeSpec::new(p, 4, 4).expect("default quadrature spec is valid")
}

#[derive(Debug, Clone, PartialEq)]
pub enum MeasureError {
    InvalidParameter(String),
    /// Density series could not reach the requested tolerance.
    SeriesPrecision {
        requested: f64,
        terms: usize,
    },
    /// Quasi-invariance factor hit a zero denominator.
    AbsoluteContinuity,
    /// Second-type balls must be pairwise disjoint.
    BallsNotDisjoint,
    /// Total mass differs from 1 beyond tolerance.
    MassNotNormalized {
        mass: f64,
    },
    /// δ = sup|h/f| must stay below 1.
    PerturbationTooLarge {
        delta: f64,
    },
    DimensionMismatch,
    Lattice(LatticeError),
    Padic(PadicError),
}

impl fmt::Display for MeasureError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeasureError::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            MeasureError::SeriesPrecision { requested, terms } => {
                write!(
                    f,
                    "shell series missed tolerance {requested} after {terms} terms"
                )
            }
            MeasureError::AbsoluteContinuity => {
                write!(
                    f,
                    "absolute continuity violated (zero density in denominator)"
                )
            }
            MeasureError::BallsNotDisjoint => write!(f, "cover balls are not pairwise disjoint"),
            MeasureError::MassNotNormalized { mass } => {
                write!(f, "total mass {mass} differs from 1")
            }
            MeasureError::PerturbationTooLarge { delta } => {
                write!(f, "perturbation bound δ = {delta} not below 1")
            }
            MeasureError::DimensionMismatch => write!(f, "coordinate count mismatch"),
            MeasureError::Lattice(e) => write!(f, "{e}"),
            MeasureError::Padic(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for MeasureError {}

impl From<LatticeError> for MeasureError {
    fn from(e: LatticeError) -> Self {
        MeasureError::Lattice(e)
    }
}

impl From<PadicError> for MeasureError {
    fn from(e: PadicError) -> Self {
        MeasureError::Padic(e)
    }
}

/// Anything that evaluates a density against Haar measure on Q_p.
pub trait DensityOnQp {
    fn density(&self, x: &PAdic) -> Result<f64, MeasureError>;
}

/// q-Gaussian measure μ_{β,γ,q} with the normalization constant fixed by
/// quadrature on the registered default lattice.
#[derive(Debug, Clone)]
pub struct QGaussianSpec {
    p: u32,
    beta: f64,
    gamma: PAdic,
    q: f64,
    series_tol: f64,
    norm_const: f64,
}

const SERIES_GUARD: usize = 2000;

impl QGaussianSpec {
    pub fn new(p: u32, beta: f64, gamma: PAdic, q: f64) -> Result<Self, MeasureError> {
        if beta.is_nan() || beta <= 0.0 {
            return Err(MeasureError::InvalidParameter(format!(
                "beta must be > 0, got {beta}"
            )));
        }
        if q.is_nan() || q <= 0.0 {
            return Err(MeasureError::InvalidParameter(format!(
                "q must be > 0, got {q}"
            )));
        }
        if gamma.p() != p {
            return Err(MeasureError::InvalidParameter(
                "gamma has wrong prime".into(),
            ));
        }
        let mut spec = QGaussianSpec {
            p,
            beta,
            gamma,
            q,
            series_tol: 1e-13,
            norm_const: 1.0,
        };
        let quad = default_quadrature(p);
        let mut mass = 0.0;
        for i in 0..quad.size() {
            mass += spec.density_unnormalized(&quad.point(i))?;
        }
        mass *= quad.cell_measure();
        if mass.is_nan() || mass <= 0.0 {
            return Err(MeasureError::MassNotNormalized { mass });
        }
        spec.norm_const = 1.0 / mass;
        Ok(spec)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn gamma(&self) -> &PAdic {
        &self.gamma
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    fn shell_factor(&self, k: i64) -> f64 {
        (-self.beta * (self.p as f64).powf(k as f64 * self.q)).exp()
    }

    /// Shell series for ∫ exp(−β|ξ|^q) χ_1((γ−x)ξ) dξ, arranged as a sum
    /// of nonnegative terms so the result is ≥ 0 in floating point.
    fn density_unnormalized(&self, x: &PAdic) -> Result<f64, MeasureError> {
        let p = self.p as f64;
        let z = self.gamma.sub(x);
        let tol = self.series_tol;
        match z.ord() {
            Some(j) => {
                // Σ_{k ≤ j} p^k (1−1/p) (E_k − E_{j+1}); tail after k0 is
                // below p^{k0}/(p−1)
                let e_cut = self.shell_factor(j + 1);
                let mut acc = 0.0;
                let mut k = j;
                let mut terms = 0usize;
                loop {
                    let tail_bound = p.powf(k as f64) / (p - 1.0);
                    if tail_bound < tol {
                        break;
                    }
                    let term = p.powf(k as f64) * (1.0 - 1.0 / p) * (self.shell_factor(k) - e_cut);
                    acc += term;
                    k -= 1;
                    terms += 1;
                    if terms > SERIES_GUARD {
                        return Err(MeasureError::SeriesPrecision {
                            requested: tol,
                            terms,
                        });
                    }
                }
                Ok(acc)
            }
            None => {
                // x = γ: full series Σ_k p^k (1−1/p) E_k; upper shells die
                // by the exponential, lower by the measure factor
                let k_hi = ((750.0 / self.beta).ln() / ((p.ln()) * self.q)).ceil() as i64 + 2;
                let mut acc = 0.0;
                let mut k = k_hi;
                let mut terms = 0usize;
                loop {
                    let tail_bound = p.powf(k as f64) / (p - 1.0);
                    if k < k_hi && tail_bound < tol {
                        break;
                    }
                    acc += p.powf(k as f64) * (1.0 - 1.0 / p) * self.shell_factor(k);
                    k -= 1;
                    terms += 1;
                    if terms > SERIES_GUARD {
                        return Err(MeasureError::SeriesPrecision {
                            requested: tol,
                            terms,
                        });
                    }
                }
                Ok(acc)
            }
        }
    }
}

impl DensityOnQp for QGaussianSpec {
    fn density(&self, x: &PAdic) -> Result<f64, MeasureError> {
        Ok(self.norm_const * self.density_unnormalized(x)?)
    }
}

/// Second-type measure: locally constant ball density plus a bounded
/// perturbation table, both evaluated at x/v.
#[derive(Debug, Clone)]
pub struct SecondTypeSpec {
    p: u32,
    balls: Vec<(Ball, f64)>,
    perturbation: Vec<(Ball, f64)>,
    v: PAdic,
    delta: f64,
}

impl SecondTypeSpec {
    /// Validates: v ≠ 0; ball radii ≥ 1 with the first ball the unit ball
    /// at 0; weights in (0, 1]; pairwise disjointness on representatives;
    /// each perturbation ball inside a cover ball with δ = max|h/f| < 1;
    /// total mass |v|·(Σ C_j·w(B_j) + Σ h·w) = 1.
    pub fn new(
        p: u32,
        balls: Vec<(Ball, f64)>,
        perturbation: Vec<(Ball, f64)>,
        v: PAdic,
    ) -> Result<Self, MeasureError> {
        if v.is_zero() {
            return Err(MeasureError::InvalidParameter(
                "scaling element v must be nonzero".into(),
            ));
        }
        if balls.is_empty() {
            return Err(MeasureError::InvalidParameter(
                "need at least one cover ball".into(),
            ));
        }
        let first = &balls[0].0;
        if !first.center.is_zero() || first.radius_exp != 0 {
            return Err(MeasureError::InvalidParameter(
                "first cover ball must be the unit ball at 0".into(),
            ));
        }
        let mut min_radius = i64::MAX;
        for (ball, weight) in balls.iter() {
            if ball.radius_exp < 0 {
                return Err(MeasureError::InvalidParameter(
                    "cover ball radii must be ≥ 1 (radius_exp ≥ 0)".into(),
                ));
            }
            min_radius = min_radius.min(ball.radius_exp);
            if !(*weight > 0.0 && *weight <= 1.0) {
                return Err(MeasureError::InvalidParameter(format!(
                    "ball weight {weight} outside (0, 1]"
                )));
            }
        }
        if min_radius != 0 {
            return Err(MeasureError::InvalidParameter(
                "inf of ball radii must be 1".into(),
            ));
        }
        for i in 0..balls.len() {
            for j in i + 1..balls.len() {
                if balls[i].0.relation(&balls[j].0) != BallRelation::Disjoint {
                    return Err(MeasureError::BallsNotDisjoint);
                }
            }
        }
        let mut delta: f64 = 0.0;
        for (pb, value) in perturbation.iter() {
            let host = balls.iter().find(|(ball, _)| {
                matches!(
                    pb.relation(ball),
                    BallRelation::FirstInsideSecond | BallRelation::Equal
                )
            });
            let Some((_, weight)) = host else {
                return Err(MeasureError::InvalidParameter(
                    "perturbation ball not inside any cover ball".into(),
                ));
            };
            delta = delta.max(value.abs() / weight);
        }
        for i in 0..perturbation.len() {
            for j in i + 1..perturbation.len() {
                if perturbation[i].0.relation(&perturbation[j].0) != BallRelation::Disjoint {
                    return Err(MeasureError::BallsNotDisjoint);
                }
            }
        }
        if delta >= 1.0 {
            return Err(MeasureError::PerturbationTooLarge { delta });
        }
        let mut mass: f64 = 0.0;
        for (ball, weight) in balls.iter() {
            mass += weight * ball.measure();
        }
        for (ball, value) in perturbation.iter() {
            mass += value * ball.measure();
        }
        mass *= v.norm();
        if (mass - 1.0).abs() > 1e-9 {
            return Err(MeasureError::MassNotNormalized { mass });
        }
        Ok(SecondTypeSpec {
            p,
            balls,
            perturbation,
            v,
            delta,
        })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn scaling(&self) -> &PAdic {
        &self.v
    }

    /// Same cover rebased onto a different scaling element.
    pub fn with_scaling(&self, v: PAdic) -> Result<Self, MeasureError> {
        SecondTypeSpec::new(self.p, self.balls.clone(), self.perturbation.clone(), v)
    }

    /// The locally constant part f(u) = Σ C_j Ch_{B_j}(u).
    fn base_density_at(&self, u: &PAdic) -> Option<f64> {
        self.balls
            .iter()
            .find(|(ball, _)| ball.contains(u))
            .map(|(_, w)| *w)
    }

    fn perturbation_at(&self, u: &PAdic) -> f64 {
        self.perturbation
            .iter()
            .find(|(ball, _)| ball.contains(u))
            .map(|(_, v)| *v)
            .unwrap_or(0.0)
    }

    /// Density value plus a coverage flag; `false` means the point fell
    /// beyond the truncated cover (density extended by 0 there).
    pub fn density_with_coverage(&self, x: &PAdic) -> Result<(f64, bool), MeasureError> {
        let u = x.mul(&self.v.inv()?);
        match self.base_density_at(&u) {
            Some(base) => Ok((base + self.perturbation_at(&u), true)),
            None => Ok((0.0, false)),
        }
    }
}

impl DensityOnQp for SecondTypeSpec {
    fn density(&self, x: &PAdic) -> Result<f64, MeasureError> {
        Ok(self.density_with_coverage(x)?.0)
    }
}

/// One-dimensional factor of a product measure.
#[derive(Debug, Clone)]
pub enum OneDimMeasureSpec {
    QGaussian(QGaussianSpec),
    SecondType(SecondTypeSpec),
}

impl DensityOnQp for OneDimMeasureSpec {
    fn density(&self, x: &PAdic) -> Result<f64, MeasureError> {
        match self {
            OneDimMeasureSpec::QGaussian(s) => s.density(x),
            OneDimMeasureSpec::SecondType(s) => s.density(x),
        }
    }
}

impl OneDimMeasureSpec {
    pub fn p(&self) -> u32 {
        match self {
            OneDimMeasureSpec::QGaussian(s) => s.p(),
            OneDimMeasureSpec::SecondType(s) => s.p(),
        }
    }
}

/// A density translated by a shift: density(x − shift).
pub struct Shifted<'a, D: DensityOnQp + ?Sized> {
    pub base: &'a D,
    pub shift: PAdic,
}

impl<'a, D: DensityOnQp + ?Sized> DensityOnQp for Shifted<'a, D> {
    fn density(&self, x: &PAdic) -> Result<f64, MeasureError> {
        self.base.density(&x.sub(&self.shift))
    }
}

/// Countable product measure truncated to K declared factors, scaled by
/// the diagonal operator J = diag(v_k).
#[derive(Debug, Clone)]
pub struct ProductMeasureSpec {
    factors: Vec<OneDimMeasureSpec>,
    scaling: Vec<PAdic>,
    shift: Option<Vec<PAdic>>,
}

impl ProductMeasureSpec {
    pub fn new(
        factors: Vec<OneDimMeasureSpec>,
        scaling: Vec<PAdic>,
        shift: Option<Vec<PAdic>>,
    ) -> Result<Self, MeasureError> {
        if factors.is_empty() || factors.len() != scaling.len() {
            return Err(MeasureError::DimensionMismatch);
        }
        if scaling.iter().any(|v| v.is_zero()) {
            return Err(MeasureError::InvalidParameter(
                "diagonal entries must be nonzero".into(),
            ));
        }
        if let Some(s) = &shift {
            if s.len() != factors.len() {
                return Err(MeasureError::DimensionMismatch);
            }
        }
        Ok(ProductMeasureSpec {
            factors,
            scaling,
            shift,
        })
    }

    /// q-Gaussian product with per-factor β_k = β₀·|v_k|^{−q}.
    pub fn q_gaussian(
        p: u32,
        beta0: f64,
        gamma: PAdic,
        q: f64,
        scaling: Vec<PAdic>,
    ) -> Result<Self, MeasureError> {
        let mut factors = Vec::with_capacity(scaling.len());
        for v in scaling.iter() {
            if v.is_zero() {
                return Err(MeasureError::InvalidParameter(
                    "diagonal entries must be nonzero".into(),
                ));
            }
            let beta = beta0 * v.norm().powf(-q);
            factors.push(OneDimMeasureSpec::QGaussian(QGaussianSpec::new(
                p,
                beta,
                gamma.clone(),
                q,
            )?));
        }
        ProductMeasureSpec::new(factors, scaling, None)
    }

    /// Second-type product: one cover template rebased per coordinate onto
    /// v_k.
    pub fn second_type(
        template: &SecondTypeSpec,
        scaling: Vec<PAdic>,
    ) -> Result<Self, MeasureError> {
        let mut factors = Vec::with_capacity(scaling.len());
        for v in scaling.iter() {
            factors.push(OneDimMeasureSpec::SecondType(
                template.with_scaling(v.clone())?,
            ));
        }
        ProductMeasureSpec::new(factors, scaling, None)
    }

    pub fn truncation(&self) -> usize {
        self.factors.len()
    }

    pub fn p(&self) -> u32 {
        self.factors[0].p()
    }

    pub fn factors(&self) -> &[OneDimMeasureSpec] {
        &self.factors
    }

    pub fn scaling(&self) -> &[PAdic] {
        &self.scaling
    }

    /// Density of factor k at x, honoring the optional product-level shift.
    pub fn factor_density(&self, k: usize, x: &PAdic) -> Result<f64, MeasureError> {
        let factor = &self.factors[k];
        match &self.shift {
            None => factor.density(x),
            Some(s) => factor.density(&x.sub(&s[k])),
        }
    }
}
