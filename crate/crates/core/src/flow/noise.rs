//! Seeded noise paths over the time paving.
//!
//! Each coset transition gets an independent d-dimensional increment;
//! coordinate i is drawn through the inverse-CDF sampler of the declared
//! one-dimensional measure and scaled by the i-th diagonal entry of the
//! scaling operator. The (seed, spec) pair regenerates paths bit-exactly.

use super::FlowError;
use crate::lattice::LatticeSpec;
use crate::measure::{InverseCdfSampler, OneDimMeasureSpec};
use crate::padic::PAdic;
use crate::rng::DetRng;

#[derive(Debug, Clone)]
pub struct NoisePath {
    increments: Vec<Vec<PAdic>>,
    dim: usize,
    seed: u64,
}

impl NoisePath {
    pub fn from_increments(increments: Vec<Vec<PAdic>>, dim: usize, seed: u64) -> Self {
        NoisePath {
            increments,
            dim,
            seed,
        }
    }

    pub fn increments(&self) -> &[Vec<PAdic>] {
        &self.increments
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

/// Draw the per-coset increments for a time lattice: `dim` independent
/// coordinates per transition, coordinate i scaled by `scaling[i]`.
pub fn sample_noise(
    measure: &OneDimMeasureSpec,
    sampler_lattice: &LatticeSpec,
    tail_digits: usize,
    time: &super::TimeLattice,
    dim: usize,
    scaling: &[PAdic],
    seed: u64,
) -> Result<NoisePath, FlowError> {
    if scaling.len() != dim {
        return Err(FlowError::NoiseMismatch);
    }
    if scaling.iter().any(|v| v.is_zero()) {
        return Err(FlowError::DegenerateScaling);
    }
    let sampler = InverseCdfSampler::new(measure, *sampler_lattice, tail_digits)?;
    let mut rng = DetRng::new(seed);
    let steps = time.step_count();
    let mut increments = Vec::with_capacity(steps);
    for _ in 0..steps {
        let mut dw = Vec::with_capacity(dim);
        for v in scaling.iter() {
            dw.push(sampler.sample(&mut rng).mul(v));
        }
        increments.push(dw);
    }
    Ok(NoisePath {
        increments,
        dim,
        seed,
    })
}
