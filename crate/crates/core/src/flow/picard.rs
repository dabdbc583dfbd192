//! Truncated Picard iteration for scalar antiderivational equations over
//! the time paving.
//!
//! The antiderivation operators P̂ have no closed computable form on the
//! paving; this module realizes them as single Riemann sums — a
//! reconstruction, kept pluggable through the coefficient family:
//!
//! ```text
//! X_{n+1}(t_j) = x0 + Σ_{(k,l)} Σ_{i<j} (α_{k,l} + β_{k,l}·X_n(t_i)) · Δt^k · Δw_i^l
//! ```
//!
//! Convergence is monitored, not assumed: successive-difference sup norms
//! are reported, a non-contracting run yields a divergence report rather
//! than an error, and iteration stops early once the difference norm falls
//! below p^{−precision+1}.

use super::{FlowError, NoisePath, TimeLattice};
use crate::padic::PAdic;

/// One term a_{k,l} of the truncated coefficient family, acting affinely
/// on the unknown: integrand (constant + linear·X(t_i)) with weight
/// Δt^{time_power}·Δw_i^{noise_power}.
#[derive(Debug, Clone)]
pub struct PicardCoeff {
    pub time_power: u32,
    pub noise_power: u32,
    pub constant: PAdic,
    pub linear: PAdic,
}

#[derive(Debug, Clone)]
pub struct PicardResult {
    /// Fixed-point approximation on the paving representatives.
    pub values: Vec<PAdic>,
    /// Successive-difference sup norms, one per completed iteration.
    pub diff_norms: Vec<f64>,
    pub converged: bool,
    pub diverged: bool,
    pub iterations: usize,
}

pub fn picard_iterate(
    coeffs: &[PicardCoeff],
    x0: &PAdic,
    noise: &NoisePath,
    time: &TimeLattice,
    max_iter: usize,
) -> Result<PicardResult, FlowError> {
    if noise.increments().len() != time.step_count() {
        return Err(FlowError::NoiseMismatch);
    }
    if noise.dim() < 1 && coeffs.iter().any(|c| c.noise_power > 0) {
        return Err(FlowError::NoiseMismatch);
    }
    for c in coeffs.iter() {
        if c.time_power + c.noise_power == 0 {
            return Err(FlowError::SpecInvalid(
                "coefficient (0,0) is not part of the expansion".into(),
            ));
        }
    }
    let p = x0.p();
    let prec = x0.precision();
    let reps = time.rep_count();
    let dt = time.delta(prec);
    let threshold = (p as f64).powi(-(prec as i32) + 1);

    // Δt^k and per-step Δw^l caches
    let max_tp = coeffs.iter().map(|c| c.time_power).max().unwrap_or(0);
    let mut dt_pows = vec![PAdic::one(p, prec)];
    for _ in 0..max_tp {
        dt_pows.push(dt_pows.last().unwrap().mul(&dt));
    }
    let max_np = coeffs.iter().map(|c| c.noise_power).max().unwrap_or(0);
    let dw_pows: Vec<Vec<PAdic>> = noise
        .increments()
        .iter()
        .map(|dw| {
            let w = dw.first().cloned().unwrap_or_else(|| PAdic::zero(p, prec));
            let mut pows = vec![PAdic::one(p, prec)];
            for _ in 0..max_np {
                pows.push(pows.last().unwrap().mul(&w));
            }
            pows
        })
        .collect();

    let mut current = vec![x0.clone(); reps];
    let mut diff_norms = Vec::new();
    let mut converged = false;
    let mut diverged = false;
    let mut iterations = 0usize;

    for _ in 0..max_iter {
        iterations += 1;
        let mut next = Vec::with_capacity(reps);
        // running partial sums per coefficient, extended as j advances
        let mut partials: Vec<PAdic> = vec![PAdic::zero(p, prec); coeffs.len()];
        next.push(x0.clone());
        for j in 1..reps {
            let i = j - 1; // newly covered transition
            for (c_idx, c) in coeffs.iter().enumerate() {
                let integrand = c.constant.add(&c.linear.mul(&current[i]));
                let weight =
                    dt_pows[c.time_power as usize].mul(&dw_pows[i][c.noise_power as usize]);
                partials[c_idx] = partials[c_idx].add(&integrand.mul(&weight));
            }
            let mut acc = x0.clone();
            for partial in partials.iter() {
                acc = acc.add(partial);
            }
            next.push(acc);
        }
        let diff = current
            .iter()
            .zip(next.iter())
            .map(|(a, b)| a.sub(b).norm())
            .fold(0.0f64, f64::max);
        diff_norms.push(diff);
        current = next;
        if diff <= threshold {
            converged = true;
            break;
        }
        if diff_norms.len() >= 2 && diff > diff_norms[diff_norms.len() - 2] {
            diverged = true;
            break;
        }
    }
    Ok(PicardResult {
        values: current,
        diff_norms,
        converged,
        diverged,
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::super::tests::{noise_measure, unit_scaling, N};
    use super::super::{sample_noise, TimeLattice};
    use super::*;
    use crate::lattice::LatticeSpec;

    const P: u32 = 3;

    fn test_noise(time: &TimeLattice, seed: u64) -> NoisePath {
        let lattice = LatticeSpec::new(P, 1, 2).unwrap();
        sample_noise(
            &noise_measure(P),
            &lattice,
            4,
            time,
            1,
            &unit_scaling(P, 1, 1),
            seed,
        )
        .unwrap()
    }

    #[test]
    fn all_zero_coefficients_freeze_at_x0() {
        let time = TimeLattice::new(P, 0, 2).unwrap();
        let noise = test_noise(&time, 1);
        let x0 = PAdic::from_integer(4, P, N);
        let res = picard_iterate(&[], &x0, &noise, &time, 10).unwrap();
        assert!(res.converged);
        assert_eq!(res.iterations, 1);
        assert!(res.values.iter().all(|v| v == &x0));
    }

    #[test]
    fn pure_noise_coefficient_accumulates_increments() {
        // a_{0,1} = 1, everything else 0: X(t_j) = x0 + Σ_{i<j} Δw_i
        let time = TimeLattice::new(P, 0, 2).unwrap();
        let noise = test_noise(&time, 2);
        let x0 = PAdic::one(P, N);
        let coeff = PicardCoeff {
            time_power: 0,
            noise_power: 1,
            constant: PAdic::one(P, N),
            linear: PAdic::zero(P, N),
        };
        let res = picard_iterate(&[coeff], &x0, &noise, &time, 10).unwrap();
        assert!(res.converged);
        // direct summation oracle
        let mut acc = x0.clone();
        for (j, dw) in noise.increments().iter().enumerate() {
            acc = acc.add(&dw[0]);
            assert_eq!(res.values[j + 1], acc, "prefix sum at step {j}");
        }
    }

    #[test]
    fn contractive_linear_coefficient_converges_geometrically() {
        let time = TimeLattice::new(P, 0, 3).unwrap();
        let noise = test_noise(&time, 3);
        let x0 = PAdic::one(P, N);
        // linear coefficient of norm p^{-1}
        let c = PAdic::one(P, N).mul_p_pow(1);
        let coeff = PicardCoeff {
            time_power: 0,
            noise_power: 1,
            constant: PAdic::zero(P, N),
            linear: c.clone(),
        };
        let res = picard_iterate(&[coeff], &x0, &noise, &time, 30).unwrap();
        assert!(res.converged);
        assert!(!res.diverged);
        let rate = c.norm();
        for w in res.diff_norms.windows(2) {
            if w[0] == 0.0 {
                break;
            }
            assert!(
                w[1] <= rate * w[0] + 1e-15,
                "ratio bounded by |coefficient|"
            );
        }
    }

    #[test]
    fn non_contractive_coefficient_yields_divergence_report() {
        let time = TimeLattice::new(P, 0, 2).unwrap();
        let noise = test_noise(&time, 4);
        let x0 = PAdic::one(P, N);
        // linear coefficient of norm p with noise of norm ≤ 1 can expand
        let coeff = PicardCoeff {
            time_power: 0,
            noise_power: 1,
            constant: PAdic::zero(P, N),
            linear: PAdic::one(P, N).mul_p_pow(-2),
        };
        let res = picard_iterate(&[coeff], &x0, &noise, &time, 12).unwrap();
        assert!(res.diverged, "diff norms: {:?}", res.diff_norms);
        assert!(!res.converged);
    }

    #[test]
    fn rejects_constant_term_without_integration() {
        let time = TimeLattice::new(P, 0, 1).unwrap();
        let noise = test_noise(&time, 5);
        let coeff = PicardCoeff {
            time_power: 0,
            noise_power: 0,
            constant: PAdic::one(P, N),
            linear: PAdic::zero(P, N),
        };
        assert!(matches!(
            picard_iterate(&[coeff], &PAdic::one(P, N), &noise, &time, 5),
            Err(FlowError::SpecInvalid(_))
        ));
    }
}
