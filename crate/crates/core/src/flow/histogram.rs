//! Empirical transition measures on finite congruence quotients.
//!
//! A trajectory endpoint is projected to G/G_{m_q} by reducing every
//! matrix entry modulo p^{m_q}; the class id packs the d² residues in
//! base p^{m_q}. Monte-Carlo paths are independent given per-path child
//! seeds, so the histogram is identical for any thread count.

use super::{simulate_flow, FlowError, GroupFlowSpec, NoisePath, TimeLattice};
use crate::lattice::LatticeSpec;
use crate::measure::{InverseCdfSampler, OneDimMeasureSpec};
use crate::padic::{PAdic, PMatrix};
use crate::rng::DetRng;
use std::collections::HashMap;

/// How to draw the noise for each path.
#[derive(Debug, Clone)]
pub struct NoiseConfig<'a> {
    pub measure: &'a OneDimMeasureSpec,
    pub sampler_lattice: LatticeSpec,
    pub tail_digits: usize,
    pub scaling: Vec<PAdic>,
}

const CLASS_CAPACITY: u128 = 1 << 20;

/// Class id of a group element in G/G_{m_q}.
pub fn quotient_class(g: &PMatrix, m_q: u32) -> u64 {
    let base = (g.p() as u64).pow(m_q);
    let mut id = 0u64;
    for e in g.entries() {
        id = id * base + e.residue_mod_p_pow(m_q);
    }
    id
}

fn class_count(p: u32, d: usize, m_q: u32) -> u128 {
    (p as u128).pow(m_q * (d * d) as u32)
}

/// Normalized endpoint counts over quotient classes; counts are integers
/// so the total mass is exactly n_samples.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionHistogram {
    /// (class id, count), sorted by class id; empty classes omitted.
    pub classes: Vec<(u64, u64)>,
    pub n_samples: u64,
    pub m_q: u32,
}

impl TransitionHistogram {
    pub fn total_count(&self) -> u64 {
        self.classes.iter().map(|(_, c)| c).sum()
    }

    pub fn frequency(&self, class_id: u64) -> f64 {
        match self.classes.binary_search_by_key(&class_id, |(c, _)| *c) {
            Ok(i) => self.classes[i].1 as f64 / self.n_samples as f64,
            Err(_) => 0.0,
        }
    }

    /// Total-variation distance between two histograms on the same quotient.
    pub fn tv_distance(&self, other: &TransitionHistogram) -> f64 {
        let mut ids: Vec<u64> = self.classes.iter().map(|(c, _)| *c).collect();
        ids.extend(other.classes.iter().map(|(c, _)| *c));
        ids.sort_unstable();
        ids.dedup();
        0.5 * ids
            .iter()
            .map(|&c| (self.frequency(c) - other.frequency(c)).abs())
            .sum::<f64>()
    }

    /// CSV rows (class-id, count, frequency).
    pub fn write_csv(&self, w: &mut impl std::io::Write) -> std::io::Result<()> {
        writeln!(
            w,
            "# {{\"n_samples\":{},\"m_q\":{}}}",
            self.n_samples, self.m_q
        )?;
        writeln!(w, "class_id,count,frequency")?;
        for (c, n) in self.classes.iter() {
            writeln!(w, "{c},{n},{:.17e}", *n as f64 / self.n_samples as f64)?;
        }
        Ok(())
    }
}

fn run_paths(
    spec: &GroupFlowSpec,
    time: &TimeLattice,
    noise_cfg: &NoiseConfig<'_>,
    m_q: u32,
    n_samples: usize,
    seed: u64,
    threads: usize,
) -> Result<HashMap<u64, u64>, FlowError> {
    let sampler = InverseCdfSampler::new(
        noise_cfg.measure,
        noise_cfg.sampler_lattice,
        noise_cfg.tail_digits,
    )?;
    if noise_cfg.scaling.len() != spec.noise_dim() {
        return Err(FlowError::NoiseMismatch);
    }
    if noise_cfg.scaling.iter().any(|v| v.is_zero()) {
        return Err(FlowError::DegenerateScaling);
    }
    let root = DetRng::new(seed);
    let threads = threads.max(1).min(n_samples.max(1));
    let chunk = n_samples.div_ceil(threads);
    let results: Vec<Result<HashMap<u64, u64>, FlowError>> = std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for t in 0..threads {
            let lo = t * chunk;
            let hi = ((t + 1) * chunk).min(n_samples);
            if lo >= hi {
                break;
            }
            let sampler = &sampler;
            let root = &root;
            let spec = &*spec;
            let noise_cfg = &*noise_cfg;
            handles.push(scope.spawn(move || {
                let mut counts: HashMap<u64, u64> = HashMap::new();
                for idx in lo..hi {
                    let mut rng = root.child(idx as u64);
                    let steps = time.step_count();
                    let mut increments = Vec::with_capacity(steps);
                    for _ in 0..steps {
                        let dw: Vec<PAdic> = noise_cfg
                            .scaling
                            .iter()
                            .map(|v| sampler.sample(&mut rng).mul(v))
                            .collect();
                        increments.push(dw);
                    }
                    let noise =
                        NoisePath::from_increments(increments, spec.noise_dim(), idx as u64);
                    let traj = simulate_flow(spec, time, &noise)?;
                    *counts
                        .entry(quotient_class(traj.endpoint(), m_q))
                        .or_insert(0) += 1;
                }
                Ok(counts)
            }));
        }
        handles
            .into_iter()
            .map(|h| h.join().expect("worker panicked"))
            .collect()
    });
    let mut total: HashMap<u64, u64> = HashMap::new();
    for r in results {
        for (k, v) in r? {
            *total.entry(k).or_insert(0) += v;
        }
    }
    Ok(total)
}

/// Empirical law of the endpoint on G/G_{m_q} over n_samples independent
/// paths (per-path seeds derived from `seed`).
pub fn transition_histogram(
    spec: &GroupFlowSpec,
    time: &TimeLattice,
    noise_cfg: &NoiseConfig<'_>,
    m_q: u32,
    n_samples: usize,
    seed: u64,
    threads: usize,
) -> Result<TransitionHistogram, FlowError> {
    let classes = class_count(spec.p(), spec.dim(), m_q);
    if classes > CLASS_CAPACITY {
        return Err(FlowError::CapacityExceeded { classes });
    }
    let counts = run_paths(spec, time, noise_cfg, m_q, n_samples, seed, threads)?;
    let mut classes: Vec<(u64, u64)> = counts.into_iter().collect();
    classes.sort_unstable_by_key(|(c, _)| *c);
    Ok(TransitionHistogram {
        classes,
        n_samples: n_samples as u64,
        m_q,
    })
}

/// One quotient class in the ratio table.
#[derive(Debug, Clone)]
pub struct QuasiInvarianceRow {
    pub class_id: u64,
    pub base_count: u64,
    pub shifted_count: u64,
    /// shifted/base frequency ratio; `None` when the class is empty under
    /// the base measure.
    pub ratio: Option<f64>,
    pub ci_low: f64,
    pub ci_high: f64,
    /// Evidence against quasi-invariance at this resolution: the shifted
    /// run saw nothing although the base count is large enough (≥ 9, a
    /// 3σ Poisson bound) that a positive ratio should have shown up.
    pub flagged: bool,
}

#[derive(Debug, Clone)]
pub struct QuasiInvarianceTable {
    pub rows: Vec<QuasiInvarianceRow>,
    pub n_samples: u64,
    /// Number of quotient classes populated by neither run.
    pub empty_classes: u128,
}

/// Per-class ratio estimates P_h/P between the h-shifted start and the
/// base start, using shared per-path noise (identical seeds). Ratio
/// confidence intervals are 3-standard-error delta-method bounds.
#[allow(clippy::too_many_arguments)]
pub fn quasi_invariance_empirical(
    spec: &GroupFlowSpec,
    h: &PMatrix,
    time: &TimeLattice,
    noise_cfg: &NoiseConfig<'_>,
    m_q: u32,
    n_samples: usize,
    seed: u64,
    threads: usize,
) -> Result<QuasiInvarianceTable, FlowError> {
    if !h.is_congruent_identity_mod_p() {
        return Err(FlowError::SpecInvalid(
            "shift h must lie in the congruence subgroup".into(),
        ));
    }
    let base = transition_histogram(spec, time, noise_cfg, m_q, n_samples, seed, threads)?;
    let shifted_spec = spec.with_start(h.mul(spec.start()))?;
    let shifted = transition_histogram(
        &shifted_spec,
        time,
        noise_cfg,
        m_q,
        n_samples,
        seed,
        threads,
    )?;

    let mut ids: Vec<u64> = base.classes.iter().map(|(c, _)| *c).collect();
    ids.extend(shifted.classes.iter().map(|(c, _)| *c));
    ids.sort_unstable();
    ids.dedup();
    let count_in = |hist: &TransitionHistogram, id: u64| -> u64 {
        match hist.classes.binary_search_by_key(&id, |(c, _)| *c) {
            Ok(i) => hist.classes[i].1,
            Err(_) => 0,
        }
    };
    let mut rows = Vec::with_capacity(ids.len());
    for id in ids.iter() {
        let b = count_in(&base, *id);
        let s = count_in(&shifted, *id);
        let (ratio, ci_low, ci_high) = if b > 0 {
            let r = s as f64 / b as f64;
            if s > 0 {
                let se = r * (1.0 / s as f64 + 1.0 / b as f64).sqrt();
                (Some(r), (r - 3.0 * se).max(0.0), r + 3.0 * se)
            } else {
                // zero shifted count: 3σ Poisson upper bound 9/b
                (Some(0.0), 0.0, 9.0 / b as f64)
            }
        } else {
            (None, 0.0, f64::INFINITY)
        };
        rows.push(QuasiInvarianceRow {
            class_id: *id,
            base_count: b,
            shifted_count: s,
            ratio,
            ci_low,
            ci_high,
            flagged: s == 0 && b >= 9,
        });
    }
    let empty_classes = class_count(spec.p(), spec.dim(), m_q) - ids.len() as u128;
    Ok(QuasiInvarianceTable {
        rows,
        n_samples: n_samples as u64,
        empty_classes,
    })
}

impl QuasiInvarianceTable {
    pub fn write_csv(&self, w: &mut impl std::io::Write) -> std::io::Result<()> {
        writeln!(
            w,
            "# {{\"n_samples\":{},\"empty_classes\":{}}}",
            self.n_samples, self.empty_classes
        )?;
        writeln!(
            w,
            "class_id,base_count,shifted_count,ratio,ci_low,ci_high,flagged"
        )?;
        for r in self.rows.iter() {
            let ratio = r.ratio.map_or(String::from("nan"), |v| format!("{v:.12e}"));
            writeln!(
                w,
                "{},{},{},{},{:.12e},{:.12e},{}",
                r.class_id, r.base_count, r.shifted_count, ratio, r.ci_low, r.ci_high, r.flagged
            )?;
        }
        Ok(())
    }
}
