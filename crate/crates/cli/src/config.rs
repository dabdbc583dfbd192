//! One JSON document per run, schema-validated before any computation;
//! unknown fields are rejected. The `experiment` field must match the
//! subcommand on the command line.

use padiclab::measure::io::{OneDimMeasureFile, ProductMeasureFile, RationalRepr};
use serde::Deserialize;

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeDims {
    pub m: i32,
    pub n: i32,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeDims {
    pub radius_exp: i32,
    pub level: u32,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenerateSpec {
    pub p: u32,
    pub m: i32,
    pub n: i32,
    #[serde(default)]
    pub seed: u64,
}

/// Input function for the harmonic-analysis commands: a CSV produced by
/// this tool, or a seeded random function.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionInput {
    #[serde(default)]
    pub input: Option<String>,
    #[serde(default)]
    pub generate: Option<GenerateSpec>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensityConfig {
    pub experiment: String,
    pub measure: OneDimMeasureFile,
    pub lattice: LatticeDims,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FourierConfig {
    pub experiment: String,
    #[serde(flatten)]
    pub function: FunctionInput,
    #[serde(default)]
    pub inverse: bool,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VladimirovConfig {
    pub experiment: String,
    pub b: f64,
    #[serde(flatten)]
    pub function: FunctionInput,
    /// Cross-check the kernel form against the multiplier form on the
    /// zero-mean part of the function.
    #[serde(default = "default_true")]
    pub kernel_check: bool,
    #[serde(default)]
    pub tolerance: Option<f64>,
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PdConfig {
    pub experiment: String,
    pub b: f64,
    pub x_index: usize,
    #[serde(default)]
    pub unit_ball_only: bool,
    #[serde(flatten)]
    pub function: FunctionInput,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RieszConfig {
    pub experiment: String,
    pub p: u32,
    pub n: u32,
    pub q: f64,
    pub y: RationalRepr,
    pub cutoff: u32,
    #[serde(default)]
    pub tolerance: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KakutaniConfig {
    pub experiment: String,
    pub measure: ProductMeasureFile,
    pub shift: Vec<RationalRepr>,
    #[serde(default)]
    pub truncation: Option<usize>,
    #[serde(default)]
    pub lattice: Option<LatticeDims>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplePlan {
    pub count: usize,
    pub lattice: LatticeDims,
    #[serde(default = "default_tail")]
    pub tail_digits: usize,
    #[serde(default)]
    pub seed: u64,
}

fn default_tail() -> usize {
    4
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuasiInvConfig {
    pub experiment: String,
    pub measure: ProductMeasureFile,
    pub shift: Vec<RationalRepr>,
    pub sample: SamplePlan,
    /// Also verify the cocycle identity on random (z, h) splits.
    #[serde(default = "default_true")]
    pub check_cocycle: bool,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CylinderBallRepr {
    pub center: RationalRepr,
    pub radius_exp: i64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PdMeasureConfig {
    pub experiment: String,
    pub measure: ProductMeasureFile,
    pub b_values: Vec<f64>,
    pub direction: Vec<RationalRepr>,
    pub cylinder: Vec<CylinderBallRepr>,
    #[serde(default = "default_r_resolution")]
    pub r_resolution: i32,
    #[serde(default = "default_r_resolution")]
    pub quad_resolution: i32,
}

fn default_r_resolution() -> i32 {
    3
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DriftRepr {
    Zero,
    Constant { matrix: Vec<RationalRepr> },
    LogBracket { matrix: Vec<RationalRepr> },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlowRepr {
    pub p: u32,
    pub d: usize,
    #[serde(default = "default_precision")]
    pub precision: usize,
    /// Start point entries (row major); defaults to the identity.
    #[serde(default)]
    pub start: Option<Vec<RationalRepr>>,
    pub drift: DriftRepr,
    pub diffusion: Vec<Vec<RationalRepr>>,
}

fn default_precision() -> usize {
    padiclab::padic::DEFAULT_PRECISION
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseRepr {
    pub measure: OneDimMeasureFile,
    pub lattice: LatticeDims,
    #[serde(default = "default_tail")]
    pub tail_digits: usize,
    pub scaling: Vec<RationalRepr>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateConfig {
    pub experiment: String,
    pub flow: FlowRepr,
    pub time: TimeDims,
    pub noise: NoiseRepr,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HistogramConfig {
    pub experiment: String,
    pub flow: FlowRepr,
    pub time: TimeDims,
    pub noise: NoiseRepr,
    pub m_q: u32,
    pub n_samples: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub threads: Option<usize>,
    /// Optional left shift for the quasi-invariance ratio table.
    #[serde(default)]
    pub shift: Option<Vec<RationalRepr>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegRepConfig {
    pub experiment: String,
    pub measure: ProductMeasureFile,
    pub h: Vec<RationalRepr>,
    pub sample: SamplePlan,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PicardCoeffRepr {
    pub time_power: u32,
    pub noise_power: u32,
    pub constant: RationalRepr,
    pub linear: RationalRepr,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PicardConfig {
    pub experiment: String,
    pub p: u32,
    #[serde(default = "default_precision")]
    pub precision: usize,
    pub x0: RationalRepr,
    pub coeffs: Vec<PicardCoeffRepr>,
    pub time: TimeDims,
    pub noise: NoiseRepr,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
}

fn default_max_iter() -> usize {
    25
}
