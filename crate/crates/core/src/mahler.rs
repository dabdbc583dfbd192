//! Mahler expansions on Z_p and the difference-quotient calculus.
//!
//! Continuous functions on Z_p expand exactly in the binomial basis
//! C(x, m); the coefficients of an interpolation through integer samples
//! come from the finite-difference formula a_m = Σ_k (−1)^{m−k} C(m,k) f(k),
//! computed here as an iterated exact difference table. On top of that sit
//! the partial difference quotients
//!
//! ```text
//! Φ¹F(x; h; ζ)  = (F(x + ζh) − F(x)) / ζ
//! Φᵇ F(x; h; ζ) = (F(x + ζh) − F(x)) / j_b(ζ)          0 < b < 1
//! Φⁿ⁺¹, Φⁿ⁺ᵇ    by recursion in the last (h, ζ) pair
//! ```
//!
//! and a C(t)-norm estimator taking the sup of ‖Φ̄^v F‖ over a finite grid
//! of tuples and a fixed quarter-integer probe set of orders v ≤ t. Any
//! finite grid yields a lower bound of the true sup norm; the fixed probe
//! grid keeps the estimate monotone in t and in grid refinement.

use crate::padic::{PAdic, PadicError};
use std::collections::HashMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum CalculusError {
    /// ζ (or ζh) was zero; the ζ → 0 extension is [`derivative_probe`].
    ZeroStep,
    /// Argument outside the declared domain (e.g. Mahler evaluation off Z_p).
    OutsideDomain,
    /// A grid lookup missed (point not among the stored samples).
    MissingSample,
    /// The limit probe did not contract by the required factor p.
    NoConvergence {
        ratios: Vec<f64>,
    },
    /// Empty sample set or grid.
    EmptyGrid,
    Padic(PadicError),
}

impl fmt::Display for CalculusError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CalculusError::ZeroStep => write!(f, "difference quotient requires ζh ≠ 0"),
            CalculusError::OutsideDomain => write!(f, "argument outside the declared domain"),
            CalculusError::MissingSample => write!(f, "point is not a stored grid sample"),
            CalculusError::NoConvergence { ratios } => {
                write!(f, "limit probe not contracting by ≥ p: ratios {ratios:?}")
            }
            CalculusError::EmptyGrid => write!(f, "empty grid"),
            CalculusError::Padic(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CalculusError {}

impl From<PadicError> for CalculusError {
    fn from(e: PadicError) -> Self {
        CalculusError::Padic(e)
    }
}

/// Finite Mahler expansion Σ a_m·C(x, m) on the unit ball.
#[derive(Debug, Clone)]
pub struct MahlerExpansion {
    coefficients: Vec<PAdic>,
}

impl MahlerExpansion {
    pub fn coefficients(&self) -> &[PAdic] {
        &self.coefficients
    }
}

/// Coefficients of the expansion interpolating `samples[k] = f(k)` for
/// k = 0..=M, via the exact forward-difference table a_m = (Δ^m f)(0).
pub fn mahler_coefficients(samples: &[PAdic]) -> Result<MahlerExpansion, CalculusError> {
    if samples.is_empty() {
        return Err(CalculusError::EmptyGrid);
    }
    let mut table = samples.to_vec();
    let mut coefficients = Vec::with_capacity(samples.len());
    coefficients.push(table[0].clone());
    for level in 1..samples.len() {
        for i in 0..samples.len() - level {
            table[i] = table[i + 1].sub(&table[i]);
        }
        coefficients.push(table[0].clone());
    }
    Ok(MahlerExpansion { coefficients })
}

/// Σ a_m·C(x, m) with the binomials built up in exact truncated
/// arithmetic: C(x, m) = C(x, m−1)·(x − (m−1))/m, which stays in Z_p for
/// x ∈ Z_p.
pub fn mahler_evaluate(expansion: &MahlerExpansion, x: &PAdic) -> Result<PAdic, CalculusError> {
    if x.ord().is_some_and(|o| o < 0) {
        return Err(CalculusError::OutsideDomain);
    }
    let p = x.p();
    let prec = x.precision();
    let mut acc = PAdic::zero(p, prec);
    let mut binom = PAdic::one(p, prec);
    for (m, a) in expansion.coefficients.iter().enumerate() {
        if m > 0 {
            let shift = PAdic::from_integer(m as i64 - 1, p, prec);
            let m_inv = PAdic::from_rational(1, m as i64, p, prec)?;
            binom = binom.mul(&x.sub(&shift)).mul(&m_inv);
        }
        acc = acc.add(&a.mul(&binom));
    }
    Ok(acc)
}

/// Finite carrier for a map U → Q_p: exact samples over a grid in a ball.
#[derive(Debug, Clone)]
pub struct GridFunction {
    samples: HashMap<PAdic, PAdic>,
    ball: crate::padic::Ball,
    resolution_exp: i64,
}

impl GridFunction {
    pub fn new(
        ball: crate::padic::Ball,
        resolution_exp: i64,
        points: impl IntoIterator<Item = (PAdic, PAdic)>,
    ) -> Result<Self, CalculusError> {
        let mut samples = HashMap::new();
        for (x, v) in points {
            if !ball.contains(&x) {
                return Err(CalculusError::OutsideDomain);
            }
            samples.insert(x, v);
        }
        if samples.is_empty() {
            return Err(CalculusError::EmptyGrid);
        }
        Ok(GridFunction {
            samples,
            ball,
            resolution_exp,
        })
    }

    pub fn ball(&self) -> &crate::padic::Ball {
        &self.ball
    }

    pub fn resolution_exp(&self) -> i64 {
        self.resolution_exp
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn eval(&self, x: &PAdic) -> Result<PAdic, CalculusError> {
        self.samples
            .get(x)
            .cloned()
            .ok_or(CalculusError::MissingSample)
    }

    pub fn points(&self) -> impl Iterator<Item = &PAdic> {
        self.samples.keys()
    }
}

/// Φ¹F(x; h; ζ) = (F(x + ζh) − F(x)) / ζ, exact at working precision.
pub fn difference_quotient_1(
    f: &dyn Fn(&PAdic) -> PAdic,
    x: &PAdic,
    h: &PAdic,
    zeta: &PAdic,
) -> Result<PAdic, CalculusError> {
    if zeta.is_zero() || h.is_zero() {
        return Err(CalculusError::ZeroStep);
    }
    let shifted = x.add(&zeta.mul(h));
    let num = f(&shifted).sub(&f(x));
    Ok(num.mul(&zeta.inv()?))
}

/// Φⁿ by recursion in the last (h, ζ) pair; `hs` and `zetas` must have the
/// same length n ≥ 1. Symmetric under simultaneous permutation of the
/// pairs for polynomial F.
pub fn difference_quotient_n(
    f: &dyn Fn(&PAdic) -> PAdic,
    x: &PAdic,
    hs: &[PAdic],
    zetas: &[PAdic],
) -> Result<PAdic, CalculusError> {
    assert_eq!(hs.len(), zetas.len(), "need matching (h, ζ) pairs");
    match hs.len() {
        0 => Ok(f(x)),
        1 => difference_quotient_1(f, x, &hs[0], &zetas[0]),
        n => {
            let (h_last, z_last) = (&hs[n - 1], &zetas[n - 1]);
            if z_last.is_zero() || h_last.is_zero() {
                return Err(CalculusError::ZeroStep);
            }
            let shifted = x.add(&z_last.mul(h_last));
            let upper = difference_quotient_n(f, &shifted, &hs[..n - 1], &zetas[..n - 1])?;
            let lower = difference_quotient_n(f, x, &hs[..n - 1], &zetas[..n - 1])?;
            Ok(upper.sub(&lower).mul(&z_last.inv()?))
        }
    }
}

/// Fractional quotient value: the Λ_p-valued Φᵇ is carried as its real
/// magnitude together with the p-adic unit part of the numerator, which is
/// all that composition and the C(t) norms consume.
#[derive(Debug, Clone)]
pub struct FracQuotient {
    pub magnitude: f64,
    pub unit: PAdic,
}

/// ΦᵇF(x; h; ζ) = (F(x + ζh) − F(x)) / j_b(ζ) for 0 < b < 1:
/// magnitude |F(x+ζh) − F(x)|·|ζ|^{−b}, unit part of the numerator.
pub fn fractional_quotient(
    f: &dyn Fn(&PAdic) -> PAdic,
    x: &PAdic,
    h: &PAdic,
    zeta: &PAdic,
    b: f64,
) -> Result<FracQuotient, CalculusError> {
    assert!(b > 0.0 && b < 1.0, "fractional order must lie in (0, 1)");
    if zeta.is_zero() || h.is_zero() {
        return Err(CalculusError::ZeroStep);
    }
    let shifted = x.add(&zeta.mul(h));
    let num = f(&shifted).sub(&f(x));
    let p = x.p() as f64;
    let zeta_ord = zeta.ord().expect("nonzero") as f64;
    // |num| · |ζ|^{-b} with |ζ|^{-b} = p^{b·ord ζ}
    let magnitude = num.norm() * p.powf(b * zeta_ord);
    Ok(FracQuotient {
        magnitude,
        unit: num.unit_part(),
    })
}

/// Φ̄¹F(x; h; 0) = F′(x)h by limit probing at ζ = p, p², …: accepts once
/// successive probe differences shrink by a factor ≥ p each step.
pub fn derivative_probe(
    f: &dyn Fn(&PAdic) -> PAdic,
    x: &PAdic,
    h: &PAdic,
    probes: usize,
) -> Result<PAdic, CalculusError> {
    assert!(probes >= 3, "need at least three probes");
    let p = x.p();
    let prec = x.precision();
    let mut values = Vec::with_capacity(probes);
    for k in 1..=probes as i64 {
        let zeta = PAdic::one(p, prec).mul_p_pow(k);
        values.push(difference_quotient_1(f, x, h, &zeta)?);
    }
    let diffs: Vec<f64> = values.windows(2).map(|w| w[1].sub(&w[0]).norm()).collect();
    let mut ratios = Vec::new();
    for w in diffs.windows(2) {
        if w[0] == 0.0 && w[1] == 0.0 {
            continue; // exact agreement, e.g. polynomial degree ≤ 1
        }
        if w[0] == 0.0 {
            return Err(CalculusError::NoConvergence {
                ratios: vec![f64::INFINITY],
            });
        }
        ratios.push(w[1] / w[0]);
    }
    let contracting = ratios.iter().all(|&r| r <= 1.0 / p as f64 + 1e-12);
    if !contracting {
        return Err(CalculusError::NoConvergence { ratios });
    }
    Ok(values.pop().expect("probes >= 3"))
}

/// C(t)-norm weight of the m-th binomial basis polynomial C(·, m) over a
/// sample grid in a single ball — the J(t, m) table entry used when
/// expansions are compared across smoothness classes. Multi-chart norms
/// are out of scope; the grid must live in one ball.
pub fn binomial_basis_weight(m: usize, grid: &[CtTuple], t: f64) -> Result<f64, CalculusError> {
    if grid.is_empty() {
        return Err(CalculusError::EmptyGrid);
    }
    let p = grid[0].x.p();
    let prec = grid[0].x.precision();
    let basis = move |x: &PAdic| -> PAdic {
        let mut binom = PAdic::one(p, prec);
        for j in 0..m {
            let shift = PAdic::from_integer(j as i64, p, prec);
            let inv = PAdic::from_rational(1, j as i64 + 1, p, prec).expect("j+1 nonzero");
            binom = binom.mul(&x.sub(&shift)).mul(&inv);
        }
        binom
    };
    ct_norm_estimate(&basis, grid, t)
}

/// One grid tuple (x, h_1.., ζ_1..) for the C(t)-norm estimator; a tuple
/// participates in every order v whose arity its pairs cover.
#[derive(Debug, Clone)]
pub struct CtTuple {
    pub x: PAdic,
    pub hs: Vec<PAdic>,
    pub zetas: Vec<PAdic>,
}

/// Fractional probe offsets: sup over v ≤ t is estimated on
/// {k + j/4 : j = 0..3} ∩ [0, t]. A fixed grid keeps the estimate monotone
/// in t by construction.
const FRACTIONAL_PROBES: [f64; 3] = [0.25, 0.5, 0.75];

/// Lower-bound estimate of the C(t, U → Y) norm over the sampled tuples:
/// sup of ‖Φ̄^v F‖ for quarter-grid orders v ≤ t. Monotone nondecreasing
/// under grid refinement and in t.
pub fn ct_norm_estimate(
    f: &dyn Fn(&PAdic) -> PAdic,
    grid: &[CtTuple],
    t: f64,
) -> Result<f64, CalculusError> {
    if grid.is_empty() {
        return Err(CalculusError::EmptyGrid);
    }
    assert!(t >= 0.0, "t must be nonnegative");
    let mut sup: f64 = 0.0;
    for tuple in grid {
        assert_eq!(tuple.hs.len(), tuple.zetas.len(), "tuple pairs must match");
        // v = 0 term: ‖F‖ on the grid
        sup = sup.max(f(&tuple.x).norm());
        let max_order = tuple.hs.len();
        for n in 0..=max_order {
            if n >= 1 && n as f64 <= t {
                let v = difference_quotient_n(f, &tuple.x, &tuple.hs[..n], &tuple.zetas[..n])?;
                sup = sup.max(v.norm());
            }
            for &b in FRACTIONAL_PROBES.iter() {
                let order = n as f64 + b;
                if order > t || n + 1 > max_order {
                    continue;
                }
                // Φ^{n+b} = Φᵇ(ΦⁿF) in the (n+1)-th pair
                let inner_h = tuple.hs[..n].to_vec();
                let inner_z = tuple.zetas[..n].to_vec();
                let g = |y: &PAdic| -> PAdic {
                    difference_quotient_n(f, y, &inner_h, &inner_z)
                        .expect("inner quotient arguments checked")
                };
                let fq = fractional_quotient(&g, &tuple.x, &tuple.hs[n], &tuple.zetas[n], b)?;
                sup = sup.max(fq.magnitude);
            }
        }
    }
    Ok(sup)
}
