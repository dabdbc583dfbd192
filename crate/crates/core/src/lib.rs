//! Numerical laboratory for analysis over the p-adic numbers.
//!
//! The crate provides five layers, each usable on its own:
//!
//! * [`padic`] — exact truncated arithmetic in Q_p: valuations, ultrametric
//!   norms, balls, the rank-zero additive character, and p-adic matrices
//!   with convergent exp/log series.
//! * [`mahler`] — Mahler (binomial-basis) interpolation on Z_p and the
//!   difference-quotient calculus of integer and fractional order, with a
//!   C(t)-norm estimator.
//! * [`lattice`] — complex-valued harmonic analysis on finite quotients
//!   p^{-m}Z_p / p^{n}Z_p: Haar integration, a radix-p fast Fourier
//!   transform, the Vladimirov operator in multiplier and kernel form, and
//!   a closed-form character-integral cross check.
//! * [`measure`] — parametric measures on Q_p (q-Gaussian and second-type
//!   locally constant families), countable products truncated to K factors,
//!   Kakutani affinities and dichotomy verdicts, quasi-invariance factors
//!   with the cocycle identity, pseudo-differentiability of measure curves,
//!   and the regular representation operator.
//! * [`flow`] — seeded noise paths over a p-adic time ball, the exponential
//!   Euler scheme on principal congruence subgroups of GL_d(Z_p), a Picard
//!   iteration for antiderivational equations, and empirical transition
//!   measures on finite quotients.

pub mod flow;
pub mod lattice;
pub mod mahler;
pub mod measure;
pub mod padic;
pub mod rng;

pub use lattice::{LatticeFunction, LatticeSpec};
pub use padic::{Ball, PAdic, PMatrix};
pub use rng::DetRng;
