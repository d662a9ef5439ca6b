//! Seeded realizations of the random processes behind hyperdimensional
//! encodings, each paired with its closed-form expected kernel.

mod config;
mod discrete;
mod interval;
mod mix;
mod periodic;
pub mod prf;

use std::fmt;

use crate::error::{invalid, HdError, Result};
use crate::vector::HyperVector;

pub use config::{EncoderConfig, EncoderType};
pub use discrete::{DiscreteMode, DiscreteTripleEncoder};
pub use interval::{IntervalStepEncoder, SigmoidEncoder};
pub use mix::EpsilonMixed;
pub use periodic::PeriodicEncoder;

/// A closed interval `[a, b]` carrying the Lebesgue measure.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Domain1D {
    a: f64,
    b: f64,
}

impl Domain1D {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) || b - a <= 0.0 {
            return Err(invalid("domain", format!("need finite a < b, got [{a}, {b}]")));
        }
        Ok(Self { a, b })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn length(&self) -> f64 {
        self.b - self.a
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.a && x <= self.b
    }

    pub fn check(&self, x: f64) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(HdError::OutOfDomain {
                x,
                a: self.a,
                b: self.b,
            })
        }
    }

    /// Measure of `[c, d]` intersected with the domain.
    pub fn measure(&self, c: f64, d: f64) -> f64 {
        (d.min(self.b) - c.max(self.a)).max(0.0)
    }

    /// `n` equidistant points including both endpoints.
    pub fn linspace(&self, n: usize) -> Vec<f64> {
        linspace(self.a, self.b, n)
    }
}

pub(crate) fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => {
            let step = (b - a) / (n - 1) as f64;
            (0..n)
                .map(|j| if j == n - 1 { b } else { a + j as f64 * step })
                .collect()
        }
    }
}

/// A random encoding of an interval into `R^D`.
///
/// Implementations are immutable and realize component `i` at `x` as a pure
/// function of `(seed, i, x)`.
pub trait Encoder: Send + Sync + fmt::Debug {
    fn dim(&self) -> usize;

    fn domain(&self) -> Domain1D;

    fn seed(&self) -> u64;

    /// Distance beyond which the expected kernel vanishes.
    fn length_scale(&self) -> f64;

    /// Component `i` of the unnormalized sample at `x`. The caller guarantees
    /// `x` lies in the domain and `i < dim`.
    fn component(&self, i: usize, x: f64) -> f64;

    /// Analytic `order`-th derivative of component `i`, when the sample
    /// functions are differentiable.
    fn component_derivative(&self, _i: usize, _x: f64, _order: usize) -> Option<f64> {
        None
    }

    /// `E[Φ(x) Φ(x')]`, the `D → ∞` limit of the scaled inner product.
    fn expected_kernel(&self, x: f64, x2: f64) -> f64;

    /// Metric under which the expected kernel has compact support.
    fn distance(&self, x: f64, x2: f64) -> f64 {
        (x - x2).abs()
    }

    fn config(&self) -> EncoderConfig;

    fn encode(&self, x: f64) -> Result<HyperVector> {
        self.domain().check(x)?;
        Ok(HyperVector::from_raw(
            (0..self.dim()).map(|i| self.component(i, x)).collect(),
        ))
    }
}

pub(crate) fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 {
        return Err(invalid("dim", "must be at least 1"));
    }
    Ok(())
}

pub(crate) fn check_positive(name: &'static str, v: f64) -> Result<()> {
    if !(v.is_finite() && v > 0.0) {
        return Err(invalid(name, format!("must be positive and finite, got {v}")));
    }
    Ok(())
}

/// Triangular kernel `max(0, 1 - d / λ)`.
#[inline]
pub fn triangular(d: f64, lambda: f64) -> f64 {
    (1.0 - d / lambda).max(0.0)
}
