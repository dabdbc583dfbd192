//! Matrices over Q_p with the ultrametric operator norm, and the
//! exponential / logarithm series on the convergence ball ‖·‖ ≤ p^{-1}
//! (p odd). `exp(p·M_d(Z_p)) ⊆ I + p·M_d(Z_p)`, the principal congruence
//! subgroup, which is what the flow module steps through.

use super::{PAdic, PadicError};
use std::fmt;

/// d×d matrix of truncated p-adic scalars; operator norm is the max entry
/// norm, so ‖XY‖ ≤ ‖X‖·‖Y‖ holds exactly.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PMatrix {
    d: usize,
    entries: Vec<PAdic>,
}

impl PMatrix {
    pub fn from_entries(d: usize, entries: Vec<PAdic>) -> Self {
        assert_eq!(entries.len(), d * d, "entry count must be d^2");
        assert!(d >= 1);
        let p = entries[0].p();
        assert!(entries.iter().all(|e| e.p() == p), "mixed primes");
        PMatrix { d, entries }
    }

    pub fn zero(p: u32, d: usize, precision: usize) -> Self {
        PMatrix {
            d,
            entries: vec![PAdic::zero(p, precision); d * d],
        }
    }

    pub fn identity(p: u32, d: usize, precision: usize) -> Self {
        let mut m = PMatrix::zero(p, d, precision);
        for i in 0..d {
            m.entries[i * d + i] = PAdic::one(p, precision);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn p(&self) -> u32 {
        self.entries[0].p()
    }

    pub fn precision(&self) -> usize {
        self.entries.iter().map(|e| e.precision()).min().unwrap()
    }

    pub fn get(&self, i: usize, j: usize) -> &PAdic {
        &self.entries[i * self.d + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: PAdic) {
        self.entries[i * self.d + j] = value;
    }

    pub fn entries(&self) -> &[PAdic] {
        &self.entries
    }

    pub fn add(&self, other: &PMatrix) -> PMatrix {
        self.zip(other, |a, b| a.add(b))
    }

    pub fn sub(&self, other: &PMatrix) -> PMatrix {
        self.zip(other, |a, b| a.sub(b))
    }

    fn zip(&self, other: &PMatrix, f: impl Fn(&PAdic, &PAdic) -> PAdic) -> PMatrix {
        assert_eq!(self.d, other.d, "dimension mismatch");
        let entries = self
            .entries
            .iter()
            .zip(other.entries.iter())
            .map(|(a, b)| f(a, b))
            .collect();
        PMatrix { d: self.d, entries }
    }

    pub fn mul(&self, other: &PMatrix) -> PMatrix {
        assert_eq!(self.d, other.d, "dimension mismatch");
        let d = self.d;
        let mut out = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                let mut acc = self.get(i, 0).mul(other.get(0, j));
                for k in 1..d {
                    acc = acc.add(&self.get(i, k).mul(other.get(k, j)));
                }
                out.push(acc);
            }
        }
        PMatrix { d, entries: out }
    }

    pub fn scalar_mul(&self, s: &PAdic) -> PMatrix {
        let entries = self.entries.iter().map(|e| e.mul(s)).collect();
        PMatrix { d: self.d, entries }
    }

    /// XY − YX.
    pub fn commutator(&self, other: &PMatrix) -> PMatrix {
        self.mul(other).sub(&other.mul(self))
    }

    /// Minimal entry valuation; `None` for the zero matrix. The operator
    /// norm is p^{-min_ord}.
    pub fn min_ord(&self) -> Option<i64> {
        self.entries.iter().filter_map(|e| e.ord()).min()
    }

    pub fn norm(&self) -> f64 {
        match self.min_ord() {
            None => 0.0,
            Some(o) => (self.p() as f64).powi(-o as i32),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    /// Congruence-subgroup membership test: g ≡ I (mod p) with all entries
    /// in Z_p, checked exactly on digits.
    pub fn is_congruent_identity_mod_p(&self) -> bool {
        let prec = self.precision();
        let diff = self.sub(&PMatrix::identity(self.p(), self.d, prec));
        diff.min_ord().is_none_or(|o| o >= 1)
            && self.entries.iter().all(|e| e.ord().is_none_or(|o| o >= 0))
    }
}

impl fmt::Display for PMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.d {
            for j in 0..self.d {
                if j > 0 {
                    write!(f, "  ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

fn require_odd(p: u32) -> Result<(), PadicError> {
    if p == 2 {
        Err(PadicError::PrimeMustBeOdd { p })
    } else {
        Ok(())
    }
}

/// exp(X) = Σ X^j / j! for ‖X‖ ≤ p^{-1}, p odd.
///
/// The tail is cut once the a-priori valuation bound
/// ord(X^j/j!) ≥ j·v − (j−1)/(p−1) exceeds the working window, so the
/// truncation error sits below the stored precision. The result is ≡ I
/// (mod p).
pub fn matrix_exp(x: &PMatrix) -> Result<PMatrix, PadicError> {
    let p = x.p();
    require_odd(p)?;
    let prec = x.precision() as i64;
    let v = match x.min_ord() {
        None => return Ok(PMatrix::identity(p, x.dim(), x.precision())),
        Some(v) => v,
    };
    if v < 1 {
        return Err(PadicError::OutsideExpDomain { min_ord: v });
    }
    let mut sum = PMatrix::identity(p, x.dim(), x.precision());
    let mut term = x.clone();
    sum = sum.add(&term);
    let mut j: i64 = 1;
    loop {
        j += 1;
        // stop when j·v − (j−1)/(p−1) > prec + 1, an exact integer test
        let bound_num = j * v * (p as i64 - 1) - (j - 1);
        if bound_num > (prec + 1) * (p as i64 - 1) {
            break;
        }
        let inv_j = PAdic::from_rational(1, j, p, x.precision())?;
        term = term.mul(x).scalar_mul(&inv_j);
        if term.is_zero() {
            break;
        }
        sum = sum.add(&term);
    }
    Ok(sum)
}

/// log(g) = Σ (−1)^{j+1} (g − I)^j / j for ‖g − I‖ ≤ p^{-1}, p odd.
/// Inverse of [`matrix_exp`] on its domain to working precision.
pub fn matrix_log(g: &PMatrix) -> Result<PMatrix, PadicError> {
    let p = g.p();
    require_odd(p)?;
    let prec = g.precision() as i64;
    let y = g.sub(&PMatrix::identity(p, g.dim(), g.precision()));
    let v = match y.min_ord() {
        None => return Ok(PMatrix::zero(p, g.dim(), g.precision())),
        Some(v) => v,
    };
    if v < 1 {
        return Err(PadicError::OutsideLogDomain { min_ord: v });
    }
    let mut sum = y.clone();
    let mut power = y.clone();
    let mut j: i64 = 1;
    loop {
        j += 1;
        // ord(Y^j / j) ≥ j·v − log_p(j); stop once past the window
        let log_p_j = (j as f64).log(p as f64).ceil() as i64;
        if j * v - log_p_j > prec + 1 {
            break;
        }
        power = power.mul(&y);
        if power.is_zero() {
            break;
        }
        let sign = if j % 2 == 0 { -1 } else { 1 };
        let coeff = PAdic::from_rational(sign, j, p, g.precision())?;
        sum = sum.add(&power.scalar_mul(&coeff));
    }
    Ok(sum)
}
