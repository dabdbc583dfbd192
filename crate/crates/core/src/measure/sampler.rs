//! Sampling p-adic values from a real density on Q_p.
//!
//! Inverse CDF over the cells of a registered lattice, ordered by the
//! digit-index bijection, followed by a uniform digit tail beyond the
//! lattice resolution: the law matches the density on every cell the
//! tests can see, and a (seed, spec) pair regenerates bit-identical draws.

use super::{DensityOnQp, MeasureError};
use crate::lattice::LatticeSpec;
use crate::padic::PAdic;
use crate::rng::DetRng;

#[derive(Debug, Clone)]
pub struct InverseCdfSampler {
    lattice: LatticeSpec,
    probabilities: Vec<f64>,
    cumulative: Vec<f64>,
    tail_digits: usize,
}

impl InverseCdfSampler {
    pub fn new<D: DensityOnQp + ?Sized>(
        density: &D,
        lattice: LatticeSpec,
        tail_digits: usize,
    ) -> Result<Self, MeasureError> {
        let mut probabilities = Vec::with_capacity(lattice.size());
        let cell = lattice.cell_measure();
        for i in 0..lattice.size() {
            let d = density.density(&lattice.point(i))?;
            if d < 0.0 {
                return Err(MeasureError::InvalidParameter("negative density".into()));
            }
            probabilities.push(d * cell);
        }
        let total: f64 = probabilities.iter().sum();
        if total.is_nan() || total <= 0.0 {
            return Err(MeasureError::InvalidParameter(
                "density has no mass on the sampling lattice".into(),
            ));
        }
        for p in probabilities.iter_mut() {
            *p /= total;
        }
        let mut cumulative = Vec::with_capacity(probabilities.len());
        let mut acc = 0.0;
        for &p in probabilities.iter() {
            acc += p;
            cumulative.push(acc);
        }
        *cumulative.last_mut().expect("nonempty") = 1.0;
        Ok(InverseCdfSampler {
            lattice,
            probabilities,
            cumulative,
            tail_digits,
        })
    }

    pub fn lattice(&self) -> &LatticeSpec {
        &self.lattice
    }

    /// Probability assigned to lattice cell i.
    pub fn cell_probability(&self, i: usize) -> f64 {
        self.probabilities[i]
    }

    /// Cell index containing a sampled value (for goodness-of-fit counts).
    pub fn cell_of(&self, x: &PAdic) -> Option<usize> {
        self.lattice.index_of(x)
    }

    pub fn sample(&self, rng: &mut DetRng) -> PAdic {
        let u = rng.next_f64();
        let cell = self.cumulative.partition_point(|&c| c <= u);
        let cell = cell.min(self.cumulative.len() - 1);
        let rep = self.lattice.point(cell);
        if self.tail_digits == 0 {
            return rep;
        }
        // uniform element of the cell: rep + p^n·(uniform digits), padded
        // to the representative's precision so arithmetic keeps its window
        let p = self.lattice.p;
        let mut digits = vec![0u32; rep.precision()];
        for d in digits.iter_mut().take(self.tail_digits) {
            *d = rng.next_below(p);
        }
        if digits.iter().all(|&d| d == 0) {
            return rep;
        }
        let tail = PAdic::from_digits(p, self.lattice.n as i64, &digits);
        rep.add(&tail)
    }
}
