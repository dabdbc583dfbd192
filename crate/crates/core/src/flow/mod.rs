//! Stochastic flows on principal congruence subgroups of GL_d(Z_p).
//!
//! Time runs over a p-adic ball B(K, 0, p^R) paved by p^level disjoint
//! cosets whose representatives are j·p^{-R} in digit order; consecutive
//! representatives differ by exactly p^{-R}, so every Euler step carries
//! the same time increment. One step left-translates along the group
//! exponential:
//!
//! ```text
//! ξ_{k+1} = ξ_k · exp( a(ξ_k)·Δt + A(ξ_k)·Δw_k )
//! ```
//!
//! which realizes the exponential chart of the left-invariant connection;
//! drift and diffusion values stay in p·M_d(Z_p) so the exponential always
//! converges and the trajectory never leaves {g ≡ I mod p}.

pub mod histogram;
pub mod noise;
pub mod picard;

pub use histogram::{
    quasi_invariance_empirical, transition_histogram, NoiseConfig, QuasiInvarianceRow,
    QuasiInvarianceTable, TransitionHistogram,
};
pub use noise::{sample_noise, NoisePath};
pub use picard::{picard_iterate, PicardCoeff, PicardResult};

use crate::measure::MeasureError;
use crate::padic::{matrix_exp, PAdic, PMatrix, PadicError};
use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum FlowError {
    SpecInvalid(String),
    /// Zero diagonal entry in the noise scaling operator.
    DegenerateScaling,
    /// Euler argument left the exp convergence ball at the given step.
    StepOutsideDomain {
        step: usize,
        norm_exp: i64,
    },
    /// Noise path length or dimension does not fit the time lattice.
    NoiseMismatch,
    /// Quotient too large to enumerate.
    CapacityExceeded {
        classes: u128,
    },
    Measure(MeasureError),
    Padic(PadicError),
}

impl fmt::Display for FlowError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FlowError::SpecInvalid(msg) => write!(f, "invalid flow spec: {msg}"),
            FlowError::DegenerateScaling => write!(f, "zero diagonal entry in noise scaling"),
            FlowError::StepOutsideDomain { step, norm_exp } => {
                write!(
                    f,
                    "step {step}: exp argument norm p^{norm_exp} outside domain"
                )
            }
            FlowError::NoiseMismatch => write!(f, "noise path does not match the time lattice"),
            FlowError::CapacityExceeded { classes } => {
                write!(f, "quotient with {classes} classes exceeds capacity")
            }
            FlowError::Measure(e) => write!(f, "{e}"),
            FlowError::Padic(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for FlowError {}

impl From<MeasureError> for FlowError {
    fn from(e: MeasureError) -> Self {
        FlowError::Measure(e)
    }
}

impl From<PadicError> for FlowError {
    fn from(e: PadicError) -> Self {
        FlowError::Padic(e)
    }
}

/// Disjoint paving of the time ball B(K, 0, p^R) by p^level cosets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TimeLattice {
    pub p: u32,
    pub radius_exp: i32,
    pub level: u32,
}

impl TimeLattice {
    pub fn new(p: u32, radius_exp: i32, level: u32) -> Result<Self, FlowError> {
        if p < 2 {
            return Err(FlowError::SpecInvalid("p must be prime ≥ 2".into()));
        }
        let reps = (p as f64).powi(level as i32);
        if reps > (1u64 << 24) as f64 {
            return Err(FlowError::SpecInvalid(format!(
                "p^{level} cosets exceed capacity"
            )));
        }
        Ok(TimeLattice {
            p,
            radius_exp,
            level,
        })
    }

    pub fn rep_count(&self) -> usize {
        (self.p as usize).pow(self.level)
    }

    /// Number of Euler transitions (consecutive representative pairs).
    pub fn step_count(&self) -> usize {
        self.rep_count() - 1
    }

    /// Representative t_j = j·p^{-R} under the digit-index order.
    pub fn rep(&self, j: usize, precision: usize) -> PAdic {
        assert!(j < self.rep_count());
        PAdic::from_integer(j as i64, self.p, precision).mul_p_pow(-(self.radius_exp as i64))
    }

    /// Constant increment t_{j+1} − t_j = p^{-R}.
    pub fn delta(&self, precision: usize) -> PAdic {
        PAdic::one(self.p, precision).mul_p_pow(-(self.radius_exp as i64))
    }

    /// Paving radius exponent of each coset: p^{R − level}.
    pub fn coset_radius_exp(&self) -> i64 {
        self.radius_exp as i64 - self.level as i64
    }
}

/// Drift / diffusion-component field over the group, evaluated in the
/// Lie-algebra chart.
#[derive(Debug, Clone)]
pub enum FieldSpec {
    Zero,
    /// Constant Lie-algebra value: the left-invariant field in the
    /// left-translated exponential chart.
    Constant(PMatrix),
    /// a(ξ) = [log ξ, B]: state-dependent, lands in p²·M_d(Z_p).
    LogBracket(PMatrix),
}

impl FieldSpec {
    fn evaluate(
        &self,
        xi: &PMatrix,
        p: u32,
        d: usize,
        precision: usize,
    ) -> Result<PMatrix, FlowError> {
        match self {
            FieldSpec::Zero => Ok(PMatrix::zero(p, d, precision)),
            FieldSpec::Constant(m) => Ok(m.clone()),
            FieldSpec::LogBracket(b) => {
                let log = crate::padic::matrix_log(xi)?;
                Ok(log.commutator(b))
            }
        }
    }

    fn validate(&self, p: u32, d: usize) -> Result<(), FlowError> {
        let check = |m: &PMatrix, what: &str| -> Result<(), FlowError> {
            if m.p() != p || m.dim() != d {
                return Err(FlowError::SpecInvalid(format!("{what} has wrong shape")));
            }
            if m.min_ord().is_some_and(|o| o < 1) {
                return Err(FlowError::SpecInvalid(format!(
                    "{what} must take values in p·M_d(Z_p)"
                )));
            }
            Ok(())
        };
        match self {
            FieldSpec::Zero => Ok(()),
            FieldSpec::Constant(m) => check(m, "constant field"),
            FieldSpec::LogBracket(b) => check(b, "bracket operand"),
        }
    }
}

/// Drift/diffusion data for a flow on {g ∈ GL_d(Z_p) : g ≡ I mod p}.
#[derive(Debug, Clone)]
pub struct GroupFlowSpec {
    p: u32,
    d: usize,
    precision: usize,
    start: PMatrix,
    drift: FieldSpec,
    /// Images of the noise basis vectors: A(Δw) = Σ_i Δw_i · diffusion[i].
    diffusion: Vec<PMatrix>,
}

impl GroupFlowSpec {
    pub fn new(
        start: PMatrix,
        drift: FieldSpec,
        diffusion: Vec<PMatrix>,
    ) -> Result<Self, FlowError> {
        let p = start.p();
        let d = start.dim();
        let precision = start.precision();
        if p == 2 {
            return Err(FlowError::SpecInvalid("matrix exp needs odd p".into()));
        }
        if !start.is_congruent_identity_mod_p() {
            return Err(FlowError::SpecInvalid(
                "start point must be ≡ I mod p".into(),
            ));
        }
        drift.validate(p, d)?;
        for (i, m) in diffusion.iter().enumerate() {
            if m.p() != p || m.dim() != d {
                return Err(FlowError::SpecInvalid(format!(
                    "diffusion[{i}] has wrong shape"
                )));
            }
            if m.min_ord().is_some_and(|o| o < 1) {
                return Err(FlowError::SpecInvalid(format!(
                    "diffusion[{i}] must take values in p·M_d(Z_p)"
                )));
            }
        }
        if !diffusion.is_empty() && padic_column_rank(&diffusion) < diffusion.len() {
            return Err(FlowError::SpecInvalid(
                "diffusion operator has nontrivial kernel on the noise space".into(),
            ));
        }
        Ok(GroupFlowSpec {
            p,
            d,
            precision,
            start,
            drift,
            diffusion,
        })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn precision(&self) -> usize {
        self.precision
    }

    pub fn start(&self) -> &PMatrix {
        &self.start
    }

    pub fn noise_dim(&self) -> usize {
        self.diffusion.len()
    }

    /// Same dynamics from a different start point.
    pub fn with_start(&self, start: PMatrix) -> Result<Self, FlowError> {
        GroupFlowSpec::new(start, self.drift.clone(), self.diffusion.clone())
    }
}

/// Column rank of the family {L_i} viewed as vectors in Q_p^{d²}, by
/// Gaussian elimination with max-norm pivoting.
fn padic_column_rank(mats: &[PMatrix]) -> usize {
    let rows = mats[0].dim() * mats[0].dim();
    let mut cols: Vec<Vec<PAdic>> = mats.iter().map(|m| m.entries().to_vec()).collect();
    let mut rank = 0usize;
    let mut used = vec![false; rows];
    for c in 0..cols.len() {
        // find the max-norm unused row in this column
        let mut best: Option<(usize, i64)> = None;
        for (r, entry) in cols[c].iter().enumerate() {
            if used[r] {
                continue;
            }
            if let Some(o) = entry.ord() {
                if best.is_none_or(|(_, bo)| o < bo) {
                    best = Some((r, o));
                }
            }
        }
        let Some((pivot_row, _)) = best else { continue };
        used[pivot_row] = true;
        rank += 1;
        let pivot = cols[c][pivot_row].clone();
        let pivot_inv = pivot.inv().expect("pivot nonzero");
        for other in c + 1..cols.len() {
            if cols[other][pivot_row].is_zero() {
                continue;
            }
            let factor = cols[other][pivot_row].mul(&pivot_inv);
            let pivot_col = cols[c].clone();
            for (slot, pivot_entry) in cols[other].iter_mut().zip(pivot_col.iter()) {
                *slot = slot.sub(&factor.mul(pivot_entry));
            }
        }
    }
    rank
}

/// One exponential Euler step ξ·exp(a(ξ)Δt + A(ξ)Δw).
pub fn euler_exp_step(
    xi: &PMatrix,
    spec: &GroupFlowSpec,
    dt: &PAdic,
    dw: &[PAdic],
) -> Result<PMatrix, FlowError> {
    if dw.len() != spec.diffusion.len() {
        return Err(FlowError::NoiseMismatch);
    }
    let mut arg = spec
        .drift
        .evaluate(xi, spec.p, spec.d, spec.precision)?
        .scalar_mul(dt);
    for (w, basis) in dw.iter().zip(spec.diffusion.iter()) {
        arg = arg.add(&basis.scalar_mul(w));
    }
    if let Some(o) = arg.min_ord() {
        if o < 1 {
            return Err(FlowError::StepOutsideDomain {
                step: 0,
                norm_exp: -o,
            });
        }
    }
    Ok(xi.mul(&matrix_exp(&arg)?))
}

/// Sampled path of the flow: (t_k, ξ_k) in coset order.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<PAdic>,
    pub points: Vec<PMatrix>,
}

impl Trajectory {
    pub fn endpoint(&self) -> &PMatrix {
        self.points.last().expect("nonempty trajectory")
    }

    /// JSON lines: one record per step with k, the time digits, and the
    /// matrix entry digits.
    pub fn write_jsonl(&self, w: &mut impl std::io::Write) -> std::io::Result<()> {
        for (k, (t, m)) in self.times.iter().zip(self.points.iter()).enumerate() {
            let entries: Vec<serde_json::Value> = m.entries().iter().map(padic_json).collect();
            let record = serde_json::json!({
                "k": k,
                "t": padic_json(t),
                "matrix": entries,
            });
            writeln!(w, "{record}")?;
        }
        Ok(())
    }
}

fn padic_json(x: &PAdic) -> serde_json::Value {
    serde_json::json!({
        "ord": x.ord().unwrap_or(0),
        "digits": x.digits(),
    })
}

/// Fold [`euler_exp_step`] over the paving in coset order. Deterministic
/// given the noise path.
pub fn simulate_flow(
    spec: &GroupFlowSpec,
    time: &TimeLattice,
    noise: &NoisePath,
) -> Result<Trajectory, FlowError> {
    if noise.increments().len() != time.step_count() || noise.dim() != spec.noise_dim() {
        return Err(FlowError::NoiseMismatch);
    }
    if time.p != spec.p {
        return Err(FlowError::SpecInvalid("time lattice prime mismatch".into()));
    }
    let dt = time.delta(spec.precision);
    let mut times = Vec::with_capacity(time.rep_count());
    let mut points = Vec::with_capacity(time.rep_count());
    times.push(time.rep(0, spec.precision));
    points.push(spec.start.clone());
    for (k, dw) in noise.increments().iter().enumerate() {
        let next = euler_exp_step(points.last().unwrap(), spec, &dt, dw).map_err(|e| match e {
            FlowError::StepOutsideDomain { norm_exp, .. } => {
                FlowError::StepOutsideDomain { step: k, norm_exp }
            }
            other => other,
        })?;
        times.push(time.rep(k + 1, spec.precision));
        points.push(next);
    }
    Ok(Trajectory { times, points })
}
