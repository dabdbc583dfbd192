//! Regular representation T_h of shifts on L²(ν) for a truncated product
//! measure ν: T_h f(g) = √(ν^h(dg)/ν(dg)) · f(g − h). Unitarity and the
//! composition law T_g T_h = T_{g+h} follow from the cocycle identity of
//! the quasi-invariance factor.

use super::{kakutani::quasi_invariance_factor, MeasureError, ProductMeasureSpec};
use super::{InverseCdfSampler, OneDimMeasureSpec};
use crate::lattice::LatticeSpec;
use crate::padic::PAdic;
use crate::rng::DetRng;
use num_complex::Complex64;

/// Apply T_h to a function known at the given sample points.
pub fn regular_rep_apply(
    points: &[Vec<PAdic>],
    h: &[PAdic],
    f: &dyn Fn(&[PAdic]) -> Complex64,
    spec: &ProductMeasureSpec,
) -> Result<Vec<Complex64>, MeasureError> {
    let k = spec.truncation();
    if h.len() < k {
        return Err(MeasureError::DimensionMismatch);
    }
    let mut out = Vec::with_capacity(points.len());
    for g in points {
        if g.len() < k {
            return Err(MeasureError::DimensionMismatch);
        }
        let rho = quasi_invariance_factor(spec, h, g, k)?;
        let translated: Vec<PAdic> = (0..k).map(|i| g[i].sub(&h[i])).collect();
        out.push(rho.sqrt() * f(&translated));
    }
    Ok(out)
}

/// Draw i.i.d. sample points of the product measure, coordinate k sampled
/// through its own inverse-CDF sampler on the given lattice.
pub fn sample_product_points(
    spec: &ProductMeasureSpec,
    lattice: &LatticeSpec,
    tail_digits: usize,
    count: usize,
    rng: &mut DetRng,
) -> Result<Vec<Vec<PAdic>>, MeasureError> {
    let samplers: Vec<InverseCdfSampler> = spec
        .factors()
        .iter()
        .map(|f| match f {
            OneDimMeasureSpec::QGaussian(s) => InverseCdfSampler::new(s, *lattice, tail_digits),
            OneDimMeasureSpec::SecondType(s) => InverseCdfSampler::new(s, *lattice, tail_digits),
        })
        .collect::<Result<_, _>>()?;
    let mut points = Vec::with_capacity(count);
    for _ in 0..count {
        points.push(samplers.iter().map(|s| s.sample(rng)).collect());
    }
    Ok(points)
}
