//! Complex-valued harmonic analysis on finite quotients of Q_p.
//!
//! Functions live on the quotient p^{-m}Z_p / p^{n}Z_p: supported in the
//! ball of radius p^m, constant on cosets of radius p^{-n}. The coset
//! representatives are exactly i·p^{-m} for i = 0..p^{m+n}, so the digit
//! indexing is a plain integer index and the additive character pairing
//! χ_1(x_j·y_i) reduces to the root of unity e^{2πi·ij/p^{m+n}}. The
//! Fourier transform is therefore an exact radix-p FFT, and every radial
//! integral decomposes into shells |x| = p^k of Haar measure p^k(1 − 1/p),
//! which is exact for the locally constant integrands the lattice carries.

use crate::padic::{PAdic, PadicError};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;
use std::fmt;
use std::io::{BufRead, Write};

#[derive(Debug, Clone, PartialEq)]
pub enum LatticeError {
    /// m + n < 0 or the lattice would not fit in memory.
    InvalidSpec {
        p: u32,
        m: i32,
        n: i32,
    },
    /// Point index outside 0..p^{m+n}, or a point off the lattice support.
    IndexOutOfRange,
    /// Two functions on different lattice specs were combined.
    SpecMismatch,
    /// Operator order b must be positive for kernel integrals.
    InvalidOrder {
        b: f64,
    },
    /// The character integral diverges (y = 0) or the cutoff cannot
    /// resolve the character's constancy radius.
    Divergence(String),
    Io(String),
    Parse(String),
    Padic(PadicError),
}

impl fmt::Display for LatticeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeError::InvalidSpec { p, m, n } => {
                write!(f, "invalid lattice spec p={p}, m={m}, n={n}")
            }
            LatticeError::IndexOutOfRange => write!(f, "lattice index out of range"),
            LatticeError::SpecMismatch => write!(f, "lattice specs do not match"),
            LatticeError::InvalidOrder { b } => write!(f, "kernel order must be positive, got {b}"),
            LatticeError::Divergence(msg) => write!(f, "divergent integral: {msg}"),
            LatticeError::Io(msg) => write!(f, "io error: {msg}"),
            LatticeError::Parse(msg) => write!(f, "parse error: {msg}"),
            LatticeError::Padic(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for LatticeError {}

impl From<PadicError> for LatticeError {
    fn from(e: PadicError) -> Self {
        LatticeError::Padic(e)
    }
}

const MAX_LATTICE_SIZE: usize = 1 << 24;

/// Finite quotient p^{-m}Z_p / p^{n}Z_p (support exponent m, resolution
/// exponent n, size p^{m+n}).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeSpec {
    pub p: u32,
    pub m: i32,
    pub n: i32,
}

impl LatticeSpec {
    pub fn new(p: u32, m: i32, n: i32) -> Result<Self, LatticeError> {
        if p < 2 || m + n < 0 {
            return Err(LatticeError::InvalidSpec { p, m, n });
        }
        let bits = (m + n) as f64 * (p as f64).log2();
        if bits > (MAX_LATTICE_SIZE as f64).log2() {
            return Err(LatticeError::InvalidSpec { p, m, n });
        }
        Ok(LatticeSpec { p, m, n })
    }

    pub fn size(&self) -> usize {
        (self.p as usize).pow((self.m + self.n) as u32)
    }

    /// Swap support and resolution: the carrier of the Fourier transform.
    pub fn dual(&self) -> LatticeSpec {
        LatticeSpec {
            p: self.p,
            m: self.n,
            n: self.m,
        }
    }

    /// Representative x_i = i·p^{-m}; precision is sized so products of two
    /// lattice points keep their polar part exact.
    pub fn point(&self, index: usize) -> PAdic {
        assert!(index < self.size(), "index out of range");
        let prec = crate::padic::DEFAULT_PRECISION.max((self.m + self.n) as usize * 2 + 4);
        PAdic::from_integer(index as i64, self.p, prec).mul_p_pow(-(self.m as i64))
    }

    /// Cell index of x, reducing modulo p^n Z_p; `None` when x is outside
    /// the support ball.
    pub fn index_of(&self, x: &PAdic) -> Option<usize> {
        if x.ord().is_some_and(|o| o < -(self.m as i64)) {
            return None;
        }
        let mut index = 0usize;
        let mut pw = 1usize;
        for k in -(self.m as i64)..(self.n as i64) {
            index += x.digit_at(k) as usize * pw;
            pw *= self.p as usize;
        }
        Some(index)
    }

    /// Norm exponent e with |x_i| = p^e; `None` for the zero cell.
    pub fn norm_exp_of_index(&self, index: usize) -> Option<i32> {
        if index == 0 {
            return None;
        }
        Some(self.m - int_valuation(index, self.p) as i32)
    }

    /// Index of −x_i.
    pub fn reflect_index(&self, index: usize) -> usize {
        if index == 0 {
            0
        } else {
            self.size() - index
        }
    }

    /// Haar measure of one cell.
    pub fn cell_measure(&self) -> f64 {
        (self.p as f64).powi(-self.n)
    }

    /// Support exponent inside which kernel results are certified for
    /// lattice-class functions (the boundary shell policy).
    pub fn boundary_shell_exp(&self) -> i32 {
        self.m
    }
}

fn int_valuation(mut i: usize, p: u32) -> u32 {
    let p = p as usize;
    let mut v = 0;
    while i.is_multiple_of(p) {
        i /= p;
        v += 1;
    }
    v
}

/// Complex-valued function on a lattice, indexed by coset representatives.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeFunction {
    spec: LatticeSpec,
    values: Vec<Complex64>,
}

impl LatticeFunction {
    pub fn from_values(spec: LatticeSpec, values: Vec<Complex64>) -> Result<Self, LatticeError> {
        if values.len() != spec.size() {
            return Err(LatticeError::IndexOutOfRange);
        }
        Ok(LatticeFunction { spec, values })
    }

    pub fn from_fn(spec: LatticeSpec, f: impl FnMut(usize) -> Complex64) -> Self {
        let values = (0..spec.size()).map(f).collect();
        LatticeFunction { spec, values }
    }

    pub fn zero(spec: LatticeSpec) -> Self {
        LatticeFunction {
            spec,
            values: vec![Complex64::new(0.0, 0.0); spec.size()],
        }
    }

    /// Indicator of the ball |x| ≤ p^r (  r ≤ m).
    pub fn indicator_norm_le(spec: LatticeSpec, r: i32) -> Self {
        LatticeFunction::from_fn(spec, |i| {
            let inside = match spec.norm_exp_of_index(i) {
                None => true,
                Some(e) => e <= r,
            };
            if inside {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    pub fn spec(&self) -> &LatticeSpec {
        &self.spec
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn value(&self, index: usize) -> Complex64 {
        self.values[index]
    }

    /// Subtract the Haar mean (zero-frequency component).
    pub fn subtract_mean(&self) -> LatticeFunction {
        let total_measure = (self.spec.p as f64).powi(self.spec.m);
        let mean = haar_integral(self) / total_measure;
        LatticeFunction {
            spec: self.spec,
            values: self.values.iter().map(|v| v - mean).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &LatticeFunction) -> f64 {
        assert_eq!(self.spec, other.spec, "spec mismatch");
        self.values
            .iter()
            .zip(other.values.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// ∫ f dw = p^{-n} Σ f(x_i): exact for the locally constant class the
/// lattice represents, with w(Z_p) = 1.
pub fn haar_integral(f: &LatticeFunction) -> Complex64 {
    f.values.iter().sum::<Complex64>() * f.spec.cell_measure()
}

/// L² pairing (f, g) = p^{-n} Σ f·conj(g).
pub fn inner_product(f: &LatticeFunction, g: &LatticeFunction) -> Result<Complex64, LatticeError> {
    if f.spec != g.spec {
        return Err(LatticeError::SpecMismatch);
    }
    let s: Complex64 = f
        .values
        .iter()
        .zip(g.values.iter())
        .map(|(a, b)| a * b.conj())
        .sum();
    Ok(s * f.spec.cell_measure())
}

/// F[f](x) = ∫ f(y) χ_1(xy) w(dy), carried to the dual lattice (m and n
/// swap). Exact for lattice-class f, and (f, g) = (F[f], F[g]).
pub fn fourier(f: &LatticeFunction) -> LatticeFunction {
    let values = fft_pow_p(&f.values, f.spec.p as usize, 1.0);
    let scale = f.spec.cell_measure();
    LatticeFunction {
        spec: f.spec.dual(),
        values: values.into_iter().map(|v| v * scale).collect(),
    }
}

/// F^{-1}[g](y) = ∫ g(x) χ_1(−xy) w(dx); inverse of [`fourier`] on the
/// dual lattice.
pub fn fourier_inverse(g: &LatticeFunction) -> LatticeFunction {
    let values = fft_pow_p(&g.values, g.spec.p as usize, -1.0);
    let scale = g.spec.cell_measure();
    LatticeFunction {
        spec: g.spec.dual(),
        values: values.into_iter().map(|v| v * scale).collect(),
    }
}

/// Unnormalized radix-p transform X[k] = Σ_j f[j]·e^{sign·2πi·jk/N} for
/// N a power of p.
fn fft_pow_p(values: &[Complex64], p: usize, sign: f64) -> Vec<Complex64> {
    let n = values.len();
    let table: Vec<Complex64> = (0..n)
        .map(|t| {
            let angle = sign * TAU * t as f64 / n as f64;
            Complex64::new(angle.cos(), angle.sin())
        })
        .collect();
    fft_rec(values.to_vec(), p, &table, 1)
}

fn fft_rec(
    v: Vec<Complex64>,
    p: usize,
    table: &[Complex64],
    depth_stride: usize,
) -> Vec<Complex64> {
    let n = v.len();
    if n == 1 {
        return v;
    }
    debug_assert_eq!(n % p, 0);
    let m = n / p;
    let subs: Vec<Vec<Complex64>> = (0..p)
        .map(|r| {
            let sub: Vec<Complex64> = v[r..].iter().step_by(p).cloned().collect();
            fft_rec(sub, p, table, depth_stride * p)
        })
        .collect();
    let total = table.len();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for (k, slot) in out.iter_mut().enumerate() {
        let mut acc = Complex64::new(0.0, 0.0);
        for (r, sub) in subs.iter().enumerate() {
            let tw = table[(r * k * depth_stride) % total];
            acc += tw * sub[k % m];
        }
        *slot = acc;
    }
    out
}

/// D^b in multiplier form: inverse Fourier of |x|^b·F[f](x), with the
/// spec's convention |0|^b := 0 at the zero frequency. The semigroup law
/// D^a D^b = D^{a+b} is exact in this form.
pub fn vladimirov_multiplier(f: &LatticeFunction, b: f64) -> LatticeFunction {
    let mut g = fourier(f);
    apply_norm_power(&mut g, |norm_exp| {
        (f.spec.p as f64).powf(b * norm_exp as f64)
    });
    fourier_inverse(&g)
}

/// Multiplier form for complex order: |x|^b := exp(b·log|x|).
pub fn vladimirov_multiplier_complex(f: &LatticeFunction, b: Complex64) -> LatticeFunction {
    let ln_p = (f.spec.p as f64).ln();
    let mut g = fourier(f);
    apply_norm_power_c(&mut g, |norm_exp| (b * (norm_exp as f64 * ln_p)).exp());
    fourier_inverse(&g)
}

fn apply_norm_power(g: &mut LatticeFunction, pow: impl Fn(i32) -> f64) {
    let spec = *g.spec();
    for (i, v) in g.values_mut().iter_mut().enumerate() {
        match spec.norm_exp_of_index(i) {
            None => *v = Complex64::new(0.0, 0.0),
            Some(e) => *v *= pow(e),
        }
    }
}

fn apply_norm_power_c(g: &mut LatticeFunction, pow: impl Fn(i32) -> Complex64) {
    let spec = *g.spec();
    for (i, v) in g.values_mut().iter_mut().enumerate() {
        match spec.norm_exp_of_index(i) {
            None => *v = Complex64::new(0.0, 0.0),
            Some(e) => *v *= pow(e),
        }
    }
}

/// Exact constant relating the kernel and multiplier forms:
/// PD(b, f) = c·F^{-1}[|ξ|^b F f] with c = (1 − p^{−1−b})/(p^b − 1).
pub fn vladimirov_kernel_constant(p: u32, b: f64) -> f64 {
    let pf = p as f64;
    (1.0 - pf.powf(-1.0 - b)) / (pf.powf(b) - 1.0)
}

/// Analytic value of the zero-frequency cell dropped by the |0|^b := 0
/// convention: ∫_{|ξ| ≤ p^{-m}} |ξ|^b dξ = p^{-m(b+1)}(1−1/p)/(1−p^{−(b+1)}).
/// For functions with nonzero mean the multiplier route differs from the
/// exact operator by F[f](0) times this constant.
pub fn vladimirov_zero_cell_correction(spec: &LatticeSpec, b: f64) -> f64 {
    let p = spec.p as f64;
    p.powf(-(spec.m as f64) * (b + 1.0)) * (1.0 - 1.0 / p) / (1.0 - p.powf(-(b + 1.0)))
}

/// PD(b, f)(x) = ∫_K (f(x) − f(y))·|x − y|^{−1−b} w(dy) with f extended by
/// zero beyond the support ball; the exterior tail is added in closed form
/// (f there is 0 and |x − y| = |y|), so the value is exact for
/// lattice-class f. The singular diagonal contributes nothing since the
/// numerator vanishes on the cell of x.
pub fn pd_kernel(f: &LatticeFunction, b: f64, x_index: usize) -> Result<Complex64, LatticeError> {
    if b <= 0.0 {
        return Err(LatticeError::InvalidOrder { b });
    }
    let spec = *f.spec();
    if x_index >= spec.size() {
        return Err(LatticeError::IndexOutOfRange);
    }
    let p = spec.p as f64;
    let fx = f.value(x_index);
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..spec.size() {
        if j == x_index {
            continue;
        }
        let diff_idx = j.abs_diff(x_index);
        let dist_exp = spec.m - int_valuation(diff_idx, spec.p) as i32;
        let kernel = p.powf(-(1.0 + b) * dist_exp as f64);
        acc += (fx - f.value(j)) * kernel;
    }
    acc *= spec.cell_measure();
    // shells |y| > p^m: f(y) = 0 and |x − y| = |y|
    let tail = fx * ((1.0 - 1.0 / p) * p.powf(-((spec.m + 1) as f64) * b) / (1.0 - p.powf(-b)));
    Ok(acc + tail)
}

/// PD_c: the same integral restricted to the unit ball B(K, 0, 1).
pub fn pd_c(f: &LatticeFunction, b: f64, x_index: usize) -> Result<Complex64, LatticeError> {
    if b <= 0.0 {
        return Err(LatticeError::InvalidOrder { b });
    }
    let spec = *f.spec();
    if x_index >= spec.size() {
        return Err(LatticeError::IndexOutOfRange);
    }
    let p = spec.p as f64;
    let fx = f.value(x_index);
    let step = (spec.p as usize).pow(spec.m.max(0) as u32);
    let mut acc = Complex64::new(0.0, 0.0);
    let mut j = 0usize;
    while j < spec.size() {
        if j != x_index {
            let diff_idx = j.abs_diff(x_index);
            let dist_exp = spec.m - int_valuation(diff_idx, spec.p) as i32;
            let kernel = p.powf(-(1.0 + b) * dist_exp as f64);
            acc += (fx - f.value(j)) * kernel;
        }
        j += step;
    }
    Ok(acc * spec.cell_measure())
}

/// Result of the character-integral cross check ∫ |x|^{nq} χ_1(yx) w(dx).
#[derive(Debug, Clone)]
pub struct RieszCheck {
    /// Shell-ordered lattice sum at the requested cutoff.
    pub lattice_sum: Complex64,
    /// Closed form (1 − p^{nq})·(1 − p^{−(nq+1)})^{−1}·|y|^{−(nq+1)}.
    pub closed_form: f64,
    /// Reported bound on the truncation error (the unresolved inner ball).
    pub reported_tolerance: f64,
}

/// Evaluates ∫_{Q_p} |x|^{nq} χ_1(yx) w(dx) both as a truncated lattice sum
/// and in closed form. The integral converges only through character
/// cancellation on large shells; the sum is therefore accumulated shell by
/// shell in increasing |x| so each oscillatory shell cancels internally
/// before the next is added.
pub fn riesz_integral_check(
    p: u32,
    n_exp: u32,
    q: f64,
    y: &PAdic,
    cutoff: u32,
) -> Result<RieszCheck, LatticeError> {
    let ord_y = match y.ord() {
        None => return Err(LatticeError::Divergence("y = 0".into())),
        Some(o) => o,
    };
    // support must reach the oscillating shell k = ord_y + 1 and the
    // resolution must refine the character's constancy radius p^{ord_y}
    let needed = (ord_y + 1).max(-ord_y).max(1) as u32;
    if cutoff < needed {
        return Err(LatticeError::Divergence(format!(
            "cutoff {cutoff} cannot resolve character of |y| = p^{}, need ≥ {needed}",
            -ord_y
        )));
    }
    let spec = LatticeSpec::new(p, cutoff as i32, cutoff as i32)?;
    let pf = p as f64;
    let nq = n_exp as f64 * q;

    // group indices by shell |x| = p^k, k = m − v_p(i)
    let mut shells: Vec<Vec<usize>> = vec![Vec::new(); 2 * cutoff as usize + 1];
    for i in 1..spec.size() {
        let v = int_valuation(i, p);
        // k = cutoff − v ranges over −cutoff..=cutoff
        shells[(2 * cutoff - v) as usize].push(i);
    }
    let mut lattice_sum = Complex64::new(0.0, 0.0);
    let cell = spec.cell_measure();
    for shell in shells.iter() {
        // ascending k: shells[v] listed from v = 2*cutoff (k = −cutoff) down
        let mut shell_total = Complex64::new(0.0, 0.0);
        for &i in shell.iter() {
            let x = spec.point(i);
            let norm_exp = spec.norm_exp_of_index(i).expect("nonzero index");
            let weight = pf.powf(nq * norm_exp as f64);
            shell_total += crate::padic::additive_character(&y.mul(&x)) * weight;
        }
        lattice_sum += shell_total * cell;
    }

    let norm_y = y.norm();
    let closed_form = (1.0 - pf.powf(nq)) / (1.0 - pf.powf(-(nq + 1.0))) * norm_y.powf(-(nq + 1.0));
    let reported_tolerance =
        (1.0 - 1.0 / pf) * pf.powf(-(cutoff as f64) * (nq + 1.0)) / (1.0 - pf.powf(-(nq + 1.0)));
    Ok(RieszCheck {
        lattice_sum,
        closed_form,
        reported_tolerance,
    })
}

#[derive(Serialize, Deserialize)]
struct CsvHeader {
    p: u32,
    m: i32,
    n: i32,
}

impl LatticeFunction {
    /// CSV with a JSON metadata line: `# {"p":..,"m":..,"n":..}`, a header
    /// row, then (digit-index, real, imag) rows.
    pub fn write_csv(&self, w: &mut impl Write) -> Result<(), LatticeError> {
        let header = CsvHeader {
            p: self.spec.p,
            m: self.spec.m,
            n: self.spec.n,
        };
        let meta = serde_json::to_string(&header).map_err(|e| LatticeError::Io(e.to_string()))?;
        writeln!(w, "# {meta}").map_err(|e| LatticeError::Io(e.to_string()))?;
        writeln!(w, "digit_index,real,imag").map_err(|e| LatticeError::Io(e.to_string()))?;
        for (i, v) in self.values.iter().enumerate() {
            writeln!(w, "{i},{:.17e},{:.17e}", v.re, v.im)
                .map_err(|e| LatticeError::Io(e.to_string()))?;
        }
        Ok(())
    }

    /// Reads the format written by [`LatticeFunction::write_csv`]; extra
    /// leading `#` metadata lines (e.g. a config hash) are tolerated as
    /// long as one of them carries the (p, m, n) header.
    pub fn read_csv(r: &mut impl BufRead) -> Result<Self, LatticeError> {
        let mut header: Option<CsvHeader> = None;
        let mut rows: Vec<String> = Vec::new();
        for line in r.lines() {
            let line = line.map_err(|e| LatticeError::Io(e.to_string()))?;
            if let Some(meta) = line.strip_prefix('#') {
                if header.is_none() {
                    header = serde_json::from_str(meta.trim()).ok();
                }
                continue;
            }
            rows.push(line);
        }
        let header =
            header.ok_or_else(|| LatticeError::Parse("missing JSON header line".into()))?;
        let spec = LatticeSpec::new(header.p, header.m, header.n)?;
        let mut values = vec![Complex64::new(0.0, 0.0); spec.size()];
        for line in rows {
            if line.starts_with("digit_index") || line.is_empty() {
                continue;
            }
            let mut parts = line.split(',');
            let idx: usize = parts
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| LatticeError::Parse(format!("bad row: {line}")))?;
            let re: f64 = parts
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| LatticeError::Parse(format!("bad row: {line}")))?;
            let im: f64 = parts
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| LatticeError::Parse(format!("bad row: {line}")))?;
            if idx >= values.len() {
                return Err(LatticeError::IndexOutOfRange);
            }
            values[idx] = Complex64::new(re, im);
        }
        LatticeFunction::from_values(spec, values)
    }
}
