//! Exact truncated arithmetic in Q_p.
//!
//! An element is `p^ord · (d_0 + d_1 p + … )` with `d_0 ≠ 0` unless the
//! element is zero: a known residue class modulo p^{ord+known}, where
//! `known` counts the significant digits (at most the declared precision
//! N). Arithmetic is exact residue arithmetic over the common absolute
//! window: negatives are the wrapped complement digits, cancellation
//! shortens the window, and digits beyond it are deterministically zero —
//! no rounding modes, and `x.sub(&x)` as well as `x.add(&x.neg())` are
//! exactly zero.
//!
//! The norm is `|x| = p^{-ord}`, multiplicative on the nose, and the strong
//! triangle inequality holds exactly with equality when norms differ.

mod matrix;

pub use matrix::{matrix_exp, matrix_log, PMatrix};

use num_complex::Complex64;
use std::f64::consts::TAU;
use std::fmt;

/// Default number of significant base-p digits.
pub const DEFAULT_PRECISION: usize = 12;

/// Errors from scalar and matrix p-adic operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PadicError {
    /// Denominator of a rational input was zero.
    ZeroDenominator,
    /// Inversion or division by the zero element.
    DivisionByZero,
    /// An operation that requires a nonzero argument got zero (e.g. j_b).
    ZeroArgument,
    /// Requested precision does not fit the u128 modular-arithmetic window.
    PrecisionTooLarge { p: u32, precision: usize },
    /// Series argument outside the exp convergence ball ‖X‖ ≤ p^{-1}.
    OutsideExpDomain { min_ord: i64 },
    /// Series argument outside the log convergence ball ‖g − I‖ ≤ p^{-1}.
    OutsideLogDomain { min_ord: i64 },
    /// Matrix exp/log require p odd; the p = 2 convergence ball is smaller
    /// and is rejected rather than special-cased.
    PrimeMustBeOdd { p: u32 },
}

impl fmt::Display for PadicError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PadicError::ZeroDenominator => write!(f, "zero denominator"),
            PadicError::DivisionByZero => write!(f, "division by the zero element"),
            PadicError::ZeroArgument => write!(f, "operation requires a nonzero argument"),
            PadicError::PrecisionTooLarge { p, precision } => {
                write!(
                    f,
                    "precision {precision} too large for p = {p} (p^N must fit in u128)"
                )
            }
            PadicError::OutsideExpDomain { min_ord } => {
                write!(
                    f,
                    "matrix exp needs ‖X‖ ≤ p^-1, got entry valuation {min_ord}"
                )
            }
            PadicError::OutsideLogDomain { min_ord } => {
                write!(
                    f,
                    "matrix log needs ‖g − I‖ ≤ p^-1, got entry valuation {min_ord}"
                )
            }
            PadicError::PrimeMustBeOdd { p } => write!(f, "p = {p}: matrix exp/log require odd p"),
        }
    }
}

impl std::error::Error for PadicError {}

/// Truncated-precision element of Q_p.
///
/// Equality and hashing compare (p, ord, digits) — the represented value —
/// and ignore the bookkeeping `known` window.
#[derive(Debug, Clone)]
pub struct PAdic {
    p: u32,
    ord: i64,
    digits: Vec<u32>,
    known: usize,
}

impl PartialEq for PAdic {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.ord == other.ord && self.digits == other.digits
    }
}

impl Eq for PAdic {}

impl std::hash::Hash for PAdic {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.p.hash(state);
        self.ord.hash(state);
        self.digits.hash(state);
    }
}

fn check_precision(p: u32, precision: usize) -> Result<(), PadicError> {
    assert!(p >= 2, "p must be at least 2");
    assert!(precision >= 1, "precision must be at least 1");
    // p^(precision + 2) must fit in u128 for unit inversion and polar parts
    if (precision as f64 + 2.0) * (p as f64).log2() > 126.0 {
        return Err(PadicError::PrecisionTooLarge { p, precision });
    }
    Ok(())
}

impl PAdic {
    /// The zero element (canonical form: ord 0, all digits zero).
    pub fn zero(p: u32, precision: usize) -> Self {
        check_precision(p, precision).expect("precision fits");
        PAdic {
            p,
            ord: 0,
            digits: vec![0; precision],
            known: precision,
        }
    }

    pub fn one(p: u32, precision: usize) -> Self {
        let mut x = PAdic::zero(p, precision);
        x.digits[0] = 1;
        x
    }

    /// Build from an explicit valuation and digit vector; digits are read
    /// lowest power first and renormalized so the leading digit is nonzero.
    /// The full vector counts as known (the element is that exact residue).
    pub fn from_digits(p: u32, ord: i64, digits: &[u32]) -> Self {
        check_precision(p, digits.len()).expect("precision fits");
        assert!(digits.iter().all(|&d| d < p), "digit out of range");
        let window: Vec<u64> = digits.iter().map(|&d| d as u64).collect();
        finalize(p, ord, &window, digits.len(), ord + digits.len() as i64)
    }

    pub fn from_integer(value: i64, p: u32, precision: usize) -> Self {
        Self::from_rational(value, 1, p, precision).expect("unit denominator")
    }

    /// Exact p-adic expansion of numerator/denominator to N digits.
    pub fn from_rational(
        numerator: i64,
        denominator: i64,
        p: u32,
        precision: usize,
    ) -> Result<Self, PadicError> {
        check_precision(p, precision)?;
        if denominator == 0 {
            return Err(PadicError::ZeroDenominator);
        }
        if numerator == 0 {
            return Ok(PAdic::zero(p, precision));
        }
        let p128 = p as i128;
        let mut num = numerator as i128;
        let mut den = denominator as i128;
        let mut ord: i64 = 0;
        while num % p128 == 0 {
            num /= p128;
            ord += 1;
        }
        while den % p128 == 0 {
            den /= p128;
            ord -= 1;
        }
        let modulus: i128 = p128.checked_pow(precision as u32).expect("modulus fits");
        let num_mod = num.rem_euclid(modulus);
        let den_mod = den.rem_euclid(modulus);
        let den_inv = mod_inverse(den_mod, modulus).expect("denominator unit part invertible");
        let unit = (num_mod * den_inv).rem_euclid(modulus);
        let mut digits = vec![0u32; precision];
        let mut u = unit;
        for d in digits.iter_mut() {
            *d = (u % p128) as u32;
            u /= p128;
        }
        debug_assert_ne!(digits[0], 0, "unit part is a unit");
        Ok(PAdic {
            p,
            ord,
            digits,
            known: precision,
        })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn precision(&self) -> usize {
        self.digits.len()
    }

    /// Count of significant digits (≤ precision); digits beyond are zero.
    pub fn known(&self) -> usize {
        self.known
    }

    /// The residue is known modulo p^{abs_prec}; +∞ (i64::MAX) for zero.
    fn abs_prec(&self) -> i64 {
        if self.is_zero() {
            i64::MAX
        } else {
            self.ord + self.known as i64
        }
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    pub fn is_zero(&self) -> bool {
        self.digits[0] == 0
    }

    /// Valuation ord_p; `None` for the zero element (ord = +∞).
    pub fn ord(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.ord)
        }
    }

    /// |x| = p^{-ord}, 0 for the zero element.
    pub fn norm(&self) -> f64 {
        match self.ord() {
            None => 0.0,
            Some(o) => (self.p as f64).powi(-o as i32),
        }
    }

    /// Exponent e with |x| = p^e; `None` for zero.
    pub fn norm_exp(&self) -> Option<i64> {
        self.ord().map(|o| -o)
    }

    /// |j_b(x)| = |x|^b. The Λ_p-valued j_b is carried as this magnitude
    /// together with [`PAdic::unit_part`]; only the magnitude feeds the
    /// C(t) norms downstream.
    pub fn j_b_norm(&self, b: f64) -> Result<f64, PadicError> {
        assert!(b > 0.0 && b <= 1.0, "j_b is defined for 0 < b ≤ 1");
        let o = self.ord().ok_or(PadicError::ZeroArgument)?;
        Ok((self.p as f64).powf(-b * o as f64))
    }

    /// Same digits with the valuation reset to zero.
    pub fn unit_part(&self) -> PAdic {
        let mut x = self.clone();
        x.ord = 0;
        x
    }

    /// Multiply by p^k (exact).
    pub fn mul_p_pow(&self, k: i64) -> PAdic {
        if self.is_zero() {
            return self.clone();
        }
        let mut x = self.clone();
        x.ord += k;
        x
    }

    /// Truncate (or zero-extend) to a new stored precision. Extension does
    /// not extend the known window.
    pub fn with_precision(&self, precision: usize) -> PAdic {
        check_precision(self.p, precision).expect("precision fits");
        if self.is_zero() {
            return PAdic::zero(self.p, precision);
        }
        let window: Vec<u64> = self.digits.iter().map(|&d| d as u64).collect();
        finalize(self.p, self.ord, &window, precision, self.abs_prec())
    }

    /// Digit of p^k in the expansion (0 outside the stored window).
    pub fn digit_at(&self, k: i64) -> u32 {
        if self.is_zero() {
            return 0;
        }
        let idx = k - self.ord;
        if idx < 0 || idx as usize >= self.digits.len() {
            0
        } else {
            self.digits[idx as usize]
        }
    }

    /// Residue modulo p^k for elements of Z_p (ord ≥ 0), as a plain integer.
    pub fn residue_mod_p_pow(&self, k: u32) -> u64 {
        let mut acc = 0u64;
        let mut pw = 1u64;
        for i in 0..k as i64 {
            acc += self.digit_at(i) as u64 * pw;
            pw *= self.p as u64;
        }
        acc
    }

    fn assert_compatible(&self, other: &PAdic) {
        assert_eq!(self.p, other.p, "mixed primes in p-adic arithmetic");
    }

    /// Exact residue sum over the common absolute window
    /// min(abs_prec(x), abs_prec(y)).
    pub fn add(&self, other: &PAdic) -> PAdic {
        self.assert_compatible(other);
        let cap = self.digits.len().min(other.digits.len());
        if self.is_zero() {
            return other.with_precision(cap);
        }
        if other.is_zero() {
            return self.with_precision(cap);
        }
        let abs = self.abs_prec().min(other.abs_prec());
        let base = self.ord.min(other.ord);
        // one operand entirely below the other's known window
        if other.ord >= abs {
            return self.with_precision(cap);
        }
        if self.ord >= abs {
            return other.with_precision(cap);
        }
        let len = (abs - base) as usize;
        let mut acc = vec![0u64; len];
        for (i, &d) in self.digits.iter().enumerate() {
            let pos = (self.ord - base) as usize + i;
            if pos < len {
                acc[pos] += d as u64;
            }
        }
        for (i, &d) in other.digits.iter().enumerate() {
            let pos = (other.ord - base) as usize + i;
            if pos < len {
                acc[pos] += d as u64;
            }
        }
        carry_reduce(&mut acc, self.p);
        finalize(self.p, base, &acc, cap, abs)
    }

    /// Exact residue difference over the common absolute window; a wrapped
    /// result is the complement representation of the negative value, so
    /// `x.sub(x)` is exactly zero.
    pub fn sub(&self, other: &PAdic) -> PAdic {
        self.assert_compatible(other);
        let cap = self.digits.len().min(other.digits.len());
        if other.is_zero() {
            return self.with_precision(cap);
        }
        let abs = self.abs_prec().min(other.abs_prec());
        let base = self.ord.min(other.ord);
        let len = (abs - base) as usize;
        let mut xs = vec![0i64; len];
        if !self.is_zero() {
            for (i, &d) in self.digits.iter().enumerate() {
                let pos = (self.ord - base) as usize + i;
                if pos < len {
                    xs[pos] += d as i64;
                }
            }
        }
        for (i, &d) in other.digits.iter().enumerate() {
            let pos = (other.ord - base) as usize + i;
            if pos < len {
                xs[pos] -= d as i64;
            }
        }
        // borrow-propagate modulo p^len: a final borrow wraps, which is
        // exactly the complement representation of the residue
        let p = self.p as i64;
        let mut borrow = 0i64;
        let mut mag = vec![0u64; len];
        for i in 0..len {
            let mut v = xs[i] - borrow;
            borrow = 0;
            while v < 0 {
                v += p;
                borrow += 1;
            }
            mag[i] = v as u64;
        }
        finalize(self.p, base, &mag, cap, abs)
    }

    /// Additive inverse: 0 − x in residue arithmetic, so x + (−x) = 0.
    pub fn neg(&self) -> PAdic {
        if self.is_zero() {
            return self.clone();
        }
        PAdic::zero(self.p, self.digits.len()).sub(self)
    }

    /// Exact product; the known window is min(known_x, known_y) relative
    /// digits from ord_x + ord_y.
    pub fn mul(&self, other: &PAdic) -> PAdic {
        self.assert_compatible(other);
        let cap = self.digits.len().min(other.digits.len());
        if self.is_zero() || other.is_zero() {
            return PAdic::zero(self.p, cap);
        }
        let known = self.known.min(other.known);
        let mut acc = vec![0u64; known];
        for (i, &a) in self.digits.iter().enumerate().take(known) {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.digits.iter().enumerate() {
                if i + j >= known {
                    break;
                }
                acc[i + j] += a as u64 * b as u64;
            }
        }
        carry_reduce(&mut acc, self.p);
        let ord = self.ord + other.ord;
        finalize(self.p, ord, &acc, cap, ord + known as i64)
    }

    /// Multiplicative inverse; the unit part is inverted modulo p^known.
    pub fn inv(&self) -> Result<PAdic, PadicError> {
        if self.is_zero() {
            return Err(PadicError::DivisionByZero);
        }
        let p128 = self.p as i128;
        let modulus = p128.pow(self.known as u32);
        let mut unit: i128 = 0;
        for &d in self.digits.iter().take(self.known).rev() {
            unit = unit * p128 + d as i128;
        }
        let inv = mod_inverse(unit, modulus).expect("unit is invertible mod p^known");
        let mut digits = vec![0u64; self.known];
        let mut u = inv;
        for d in digits.iter_mut() {
            *d = (u % p128) as u64;
            u /= p128;
        }
        Ok(finalize(
            self.p,
            -self.ord,
            &digits,
            self.digits.len(),
            -self.ord + self.known as i64,
        ))
    }

    pub fn div(&self, other: &PAdic) -> Result<PAdic, PadicError> {
        Ok(self.mul(&other.inv()?))
    }

    /// Exact rational value (numerator, denominator) when it fits i128;
    /// denominator is a power of p.
    pub fn to_rational(&self) -> Option<(i128, i128)> {
        if self.is_zero() {
            return Some((0, 1));
        }
        let p128 = self.p as i128;
        let mut unit: i128 = 0;
        for &d in self.digits.iter().rev() {
            unit = unit.checked_mul(p128)?.checked_add(d as i128)?;
        }
        if self.ord >= 0 {
            let scale = p128.checked_pow(u32::try_from(self.ord).ok()?)?;
            Some((unit.checked_mul(scale)?, 1))
        } else {
            let den = p128.checked_pow(u32::try_from(-self.ord).ok()?)?;
            Some((unit, den))
        }
    }

    /// Polar (fractional) part Σ_{k<0} d_k p^k as (numerator, p-power
    /// exponent): the value is numerator / p^exponent ∈ [0, 1).
    pub fn polar_part(&self) -> (u128, u32) {
        match self.ord() {
            None => (0, 0),
            Some(o) if o >= 0 => (0, 0),
            Some(o) => {
                let e = (-o) as u32;
                let p128 = self.p as u128;
                let mut num: u128 = 0;
                let count = (e as usize).min(self.digits.len());
                for i in (0..count).rev() {
                    num = num * p128 + self.digits[i] as u128;
                }
                (num, e)
            }
        }
    }
}

/// The rank-zero additive character χ_1(x) = exp(2πi·{x}_p), where {x}_p is
/// the polar part of the expansion. |χ_1(x)| = 1 and χ_1 ≡ 1 on Z_p.
pub fn additive_character(x: &PAdic) -> Complex64 {
    let (num, e) = x.polar_part();
    if num == 0 {
        return Complex64::new(1.0, 0.0);
    }
    let den = (x.p() as u128).pow(e);
    let angle = TAU * (num as f64) / (den as f64);
    Complex64::new(angle.cos(), angle.sin())
}

/// Carry-propagate a raw accumulator into base-p digits. A carry escaping
/// the window is part of the discarded tail (deterministic truncation);
/// `add` sizes its buffer with a spare slot so nothing escapes there.
fn carry_reduce(acc: &mut [u64], p: u32) {
    let p = p as u64;
    let mut carry = 0u64;
    for a in acc.iter_mut() {
        let v = *a + carry;
        *a = v % p;
        carry = v / p;
    }
}

/// Canonical element from a digit window starting at valuation `base`,
/// known modulo p^{abs}. Digits at positions ≥ abs − base are unknown and
/// ignored; a window with no significant digit is the zero element.
fn finalize(p: u32, base: i64, window: &[u64], cap: usize, abs: i64) -> PAdic {
    let known_len = ((abs - base).max(0) as usize).min(window.len());
    match window[..known_len].iter().position(|&d| d != 0) {
        None => PAdic::zero(p, cap),
        Some(s) => {
            let ord = base + s as i64;
            let known = ((abs - ord) as usize).min(cap);
            let mut digits = vec![0u32; cap];
            for (i, d) in digits.iter_mut().enumerate().take(known) {
                if s + i < window.len() {
                    *d = window[s + i] as u32;
                }
            }
            PAdic {
                p,
                ord,
                digits,
                known,
            }
        }
    }
}

fn mod_inverse(a: i128, modulus: i128) -> Option<i128> {
    let (mut r0, mut r1) = (modulus, a.rem_euclid(modulus));
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(modulus))
}

impl fmt::Display for PAdic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let shown: Vec<String> = self.digits.iter().map(|d| d.to_string()).collect();
        write!(f, "[{}]·{}^{}", shown.join(","), self.p, self.ord)
    }
}

/// Closed ball {x : |x − center| ≤ p^{radius_exp}} in Q_p.
#[derive(Debug, Clone, PartialEq)]
pub struct Ball {
    pub center: PAdic,
    pub radius_exp: i64,
}

/// Ultrametric position of two balls: they are never partially overlapping.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BallRelation {
    Disjoint,
    Equal,
    FirstInsideSecond,
    SecondInsideFirst,
}

impl Ball {
    pub fn new(center: PAdic, radius_exp: i64) -> Self {
        Ball { center, radius_exp }
    }

    /// Unit ball Z_p.
    pub fn unit(p: u32, precision: usize) -> Self {
        Ball {
            center: PAdic::zero(p, precision),
            radius_exp: 0,
        }
    }

    pub fn radius(&self) -> f64 {
        (self.center.p() as f64).powi(self.radius_exp as i32)
    }

    /// Haar measure p^{radius_exp}.
    pub fn measure(&self) -> f64 {
        self.radius()
    }

    pub fn contains(&self, x: &PAdic) -> bool {
        match x.sub(&self.center).ord() {
            None => true,
            Some(o) => o >= -self.radius_exp,
        }
    }

    pub fn relation(&self, other: &Ball) -> BallRelation {
        let gap = other.center.sub(&self.center);
        let max_r = self.radius_exp.max(other.radius_exp);
        let touching = match gap.ord() {
            None => true,
            Some(o) => o >= -max_r,
        };
        if !touching {
            return BallRelation::Disjoint;
        }
        match self.radius_exp.cmp(&other.radius_exp) {
            std::cmp::Ordering::Equal => BallRelation::Equal,
            std::cmp::Ordering::Less => BallRelation::FirstInsideSecond,
            std::cmp::Ordering::Greater => BallRelation::SecondInsideFirst,
        }
    }
}


#[cfg(test)]
mod tests {
    use super::*;

    fn p3(num: i64, den: i64) -> PAdic {
        PAdic::from_rational(num, den, 3, 8).unwrap()
    }

    #[test]
    fn from_rational_identity_element() {
        let x = PAdic::from_rational(1, 1, 3, 8).unwrap();
        assert_eq!(x.ord(), Some(0));
        assert_eq!(x.digits()[0], 1);
        assert!(x.digits()[1..].iter().all(|&d| d == 0));
    }

    #[test]
    fn from_rational_prime_and_inverse_valuation() {
        let x = PAdic::from_rational(3, 1, 3, 8).unwrap();
        assert_eq!(x.ord(), Some(1));
        assert_eq!(x.digits()[0], 1);
        let y = PAdic::from_rational(1, 3, 3, 8).unwrap();
        assert_eq!(y.ord(), Some(-1));
        assert_eq!(x.mul(&y), PAdic::one(3, 8));
    }

    #[test]
    fn zero_denominator_rejected() {
        assert_eq!(
            PAdic::from_rational(1, 0, 3, 8),
            Err(PadicError::ZeroDenominator)
        );
    }

    #[test]
    fn norm_definition() {
        assert_eq!(PAdic::zero(5, 8).norm(), 0.0);
        let p = PAdic::from_integer(5, 5, 8);
        assert_eq!(p.norm(), 1.0 / 5.0);
    }

    #[test]
    fn exact_round_trip_of_terminating_expansions() {
        // rationals with a p-power denominator terminate within the window,
        // so digits -> rational -> digits is the identity
        for num in [1i64, 2, 9, 41, 100] {
            for den in [1i64, 3, 9, 27] {
                let x = PAdic::from_rational(num, den, 3, 20).unwrap();
                let (rn, rd) = x.to_rational().unwrap();
                assert_eq!(rn as i64 * den, rd as i64 * num, "{num}/{den} survives");
                let back = PAdic::from_rational(
                    i64::try_from(rn).unwrap(),
                    i64::try_from(rd).unwrap(),
                    3,
                    20,
                )
                .unwrap();
                assert_eq!(back, x);
            }
        }
    }

    #[test]
    fn negative_integers_use_complement_digits() {
        let x = PAdic::from_integer(-1, 3, 6);
        assert_eq!(x.digits(), &[2, 2, 2, 2, 2, 2]);
        assert_eq!(x.ord(), Some(0));
        // the complement is the residue of −1, so −1 + 1 = 0 exactly
        assert!(x.add(&PAdic::one(3, 6)).is_zero());
        assert!(PAdic::from_integer(7, 3, 6)
            .add(&PAdic::from_integer(-7, 3, 6))
            .is_zero());
        assert!(x.neg().sub(&PAdic::one(3, 6)).is_zero());
    }

    #[test]
    fn sub_is_exact() {
        let a = p3(22, 9);
        let b = p3(22, 9);
        assert!(a.sub(&b).is_zero());
        let c = p3(1, 1).sub(&p3(1, 3));
        // 1 - 1/3 = 2/3
        let d = p3(2, 3);
        assert_eq!(c, d);
    }

    #[test]
    fn add_cancellation_raises_valuation() {
        let a = p3(4, 1);
        let b = p3(-1, 1);
        let s = a.add(&b); // exact 3
        assert_eq!(s.ord(), Some(1));
        assert_eq!(s.digit_at(1), 1);
    }

    #[test]
    fn mul_norm_multiplicative() {
        let a = p3(6, 1);
        let b = p3(15, 2);
        let prod = a.mul(&b);
        assert_eq!(prod.norm(), a.norm() * b.norm());
    }

    #[test]
    fn norm_multiplicative_exhaustive_over_small_digit_vectors() {
        // every digit vector of length 3 for p ∈ {2, 3}, all ord pairs
        for p in [2u32, 3] {
            let mut elements = vec![PAdic::zero(p, 3)];
            for ord in -1..=1i64 {
                for code in 0..(p * p * p) {
                    let digits = [code % p, (code / p) % p, (code / (p * p)) % p];
                    elements.push(PAdic::from_digits(p, ord, &digits));
                }
            }
            for x in elements.iter() {
                for y in elements.iter() {
                    // exact statement lives on the valuation exponents
                    let expect = match (x.ord(), y.ord()) {
                        (Some(a), Some(b)) => Some(a + b),
                        _ => None,
                    };
                    assert_eq!(x.mul(y).ord(), expect);
                }
            }
        }
    }

    #[test]
    fn inversion_round_trip() {
        for num in [1i64, 2, 4, 5, 7, 22] {
            let x = p3(num, 1);
            assert_eq!(x.mul(&x.inv().unwrap()), PAdic::one(3, 8));
        }
    }

    #[test]
    fn inv_of_zero_is_error() {
        assert_eq!(PAdic::zero(3, 8).inv(), Err(PadicError::DivisionByZero));
    }

    #[test]
    fn j_b_norm_values() {
        let p = PAdic::from_integer(5, 5, 8);
        let half = p.j_b_norm(0.5).unwrap();
        assert!((half - (5.0f64).powf(-0.5)).abs() < 1e-15);
        let unit = PAdic::from_integer(2, 5, 8);
        assert_eq!(unit.j_b_norm(0.7).unwrap(), 1.0);
        // j_1(x) := x, so the magnitude at b = 1 is |x|
        assert_eq!(p.j_b_norm(1.0).unwrap(), p.norm());
        assert_eq!(
            PAdic::zero(5, 8).j_b_norm(0.5),
            Err(PadicError::ZeroArgument)
        );
    }

    #[test]
    fn character_trivial_on_integers() {
        for v in [0i64, 1, 5, 81, -4] {
            let x = PAdic::from_integer(v, 3, 8);
            let c = additive_character(&x);
            assert!((c - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn character_primitive_value() {
        let x = PAdic::from_rational(1, 3, 3, 8).unwrap();
        let c = additive_character(&x);
        let expect = Complex64::new((TAU / 3.0).cos(), (TAU / 3.0).sin());
        assert!((c - expect).norm() < 1e-12);
    }

    #[test]
    fn character_is_homomorphism() {
        let mut rng = crate::rng::DetRng::new(11);
        for _ in 0..200 {
            let x = super::testutil::random_padic(&mut rng, 3, 8);
            let y = super::testutil::random_padic(&mut rng, 3, 8);
            let lhs = additive_character(&x.add(&y));
            let rhs = additive_character(&x) * additive_character(&y);
            assert!((lhs - rhs).norm() < 1e-12);
        }
    }

    #[test]
    fn ultrametric_and_multiplicativity_on_random_pairs() {
        let mut rng = crate::rng::DetRng::new(5);
        for _ in 0..10_000 {
            let x = super::testutil::random_padic(&mut rng, 3, 6);
            let y = super::testutil::random_padic(&mut rng, 3, 6);
            let s = x.add(&y);
            let bound = x.norm().max(y.norm());
            assert!(s.norm() <= bound);
            if x.norm() != y.norm() {
                assert_eq!(s.norm(), bound);
            }
            let expect = match (x.ord(), y.ord()) {
                (Some(a), Some(b)) => Some(a + b),
                _ => None,
            };
            assert_eq!(x.mul(&y).ord(), expect);
        }
    }

    #[test]
    fn ball_relations() {
        let unit = Ball::unit(3, 8);
        let smaller = Ball::new(PAdic::from_integer(1, 3, 8), -1);
        let far = Ball::new(PAdic::from_rational(1, 9, 3, 8).unwrap(), -1);
        assert_eq!(unit.relation(&smaller), BallRelation::SecondInsideFirst);
        assert_eq!(smaller.relation(&unit), BallRelation::FirstInsideSecond);
        assert_eq!(unit.relation(&far), BallRelation::Disjoint);
        assert_eq!(unit.relation(&Ball::unit(3, 8)), BallRelation::Equal);
        assert!(unit.contains(&PAdic::from_integer(7, 3, 8)));
        assert!(!unit.contains(&PAdic::from_rational(1, 3, 3, 8).unwrap()));
    }
}
