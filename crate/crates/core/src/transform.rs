//! Forward and inverse hyperdimensional transforms of functions on an interval.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{invalid, HdError, Result};
use crate::normalization::NormalizedEncoder;
use crate::quadrature::Quadrature;
use crate::vector::HyperVector;

type Eval = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A real function known through an evaluator or a table.
#[derive(Clone)]
pub enum SampledFunction {
    Closure(Eval),
    /// Linear interpolation between `(x, y)` pairs; no extrapolation.
    Table {
        xs: Vec<f64>,
        ys: Vec<f64>,
    },
}

impl fmt::Debug for SampledFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Closure(_) => f.write_str("SampledFunction::Closure"),
            Self::Table { xs, .. } => write!(f, "SampledFunction::Table({} points)", xs.len()),
        }
    }
}

impl SampledFunction {
    pub fn new(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self::Closure(Arc::new(f))
    }

    pub fn constant(c: f64) -> Self {
        Self::new(move |_| c)
    }

    pub fn table(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() < 2 || xs.len() != ys.len() {
            return Err(invalid("table", "need at least two (x, y) pairs"));
        }
        if xs.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(invalid("table", "x values must be strictly increasing"));
        }
        Ok(Self::Table { xs, ys })
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        let v = match self {
            Self::Closure(f) => f(x),
            Self::Table { xs, ys } => {
                let last = xs.len() - 1;
                if !(x >= xs[0] && x <= xs[last]) {
                    return Err(HdError::OutOfDomain {
                        x,
                        a: xs[0],
                        b: xs[last],
                    });
                }
                let j = (xs.partition_point(|&p| p <= x).max(1) - 1).min(last - 1);
                let t = (x - xs[j]) / (xs[j + 1] - xs[j]);
                ys[j] + t * (ys[j + 1] - ys[j])
            }
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(HdError::NonFinite { x, value: v })
        }
    }

    pub fn sample(&self, xs: &[f64]) -> Result<Vec<f64>> {
        xs.iter().map(|&x| self.eval(x)).collect()
    }
}

fn check_nodes(enc: &NormalizedEncoder, q: &Quadrature) -> Result<()> {
    let d = enc.domain();
    let n = q.nodes();
    d.check(n[0])?;
    d.check(n[n.len() - 1])
}

/// `Σ_j c_j Δ(x_j)` for coefficients `c_j` attached to the nodes of `q`.
///
/// Each component is summed in node order, so the result does not depend on
/// the number of threads.
pub fn forward_coefficients(coeffs: &[f64], enc: &NormalizedEncoder, q: &Quadrature) -> Result<HyperVector> {
    if coeffs.len() != q.len() {
        return Err(HdError::DimensionMismatch {
            left: coeffs.len(),
            right: q.len(),
        });
    }
    check_nodes(enc, q)?;
    let scaled: Vec<f64> = coeffs
        .iter()
        .zip(q.nodes())
        .map(|(c, &x)| c / enc.norm().eval(x))
        .collect();
    let base = enc.base();
    let nodes = q.nodes();
    let values = (0..enc.dim())
        .into_par_iter()
        .map(|i| {
            let mut s = 0.0;
            for (c, &x) in scaled.iter().zip(nodes) {
                if *c != 0.0 {
                    s += c * base.component(i, x);
                }
            }
            s
        })
        .collect();
    Ok(HyperVector::from_raw(values))
}

/// `F = Σ_j w_j f(x_j) Δ(x_j)`.
pub fn forward(f: &SampledFunction, enc: &NormalizedEncoder, q: &Quadrature) -> Result<HyperVector> {
    let coeffs: Vec<f64> = q
        .nodes()
        .iter()
        .zip(q.weights())
        .map(|(&x, w)| Ok(w * f.eval(x)?))
        .collect::<Result<_>>()?;
    forward_coefficients(&coeffs, enc, q)
}

/// Transform of the point mass at `x`, which is the encoding itself.
pub fn transform_dirac(enc: &NormalizedEncoder, x: f64) -> Result<HyperVector> {
    enc.encode_normalized(x)
}

/// Transform of the indicator of `[c, d)`, closed at the right end of the
/// domain. With `(c, d) = (a, b)` this is `𝟙_X`.
pub fn transform_indicator(enc: &NormalizedEncoder, c: f64, d: f64, q: &Quadrature) -> Result<HyperVector> {
    let dom = enc.domain();
    if !(dom.a() <= c && c < d && d <= dom.b()) {
        return Err(invalid("interval", format!("need a <= c < d <= b, got [{c}, {d}]")));
    }
    let closed = d == dom.b();
    let coeffs: Vec<f64> = q
        .nodes()
        .iter()
        .zip(q.weights())
        .map(|(&x, &w)| {
            if x >= c && (x < d || (closed && x == d)) {
                w
            } else {
                0.0
            }
        })
        .collect();
    forward_coefficients(&coeffs, enc, q)
}

/// `f̃(x) = ⟨F, Δ(x)⟩`.
pub fn inverse_eval(f: &HyperVector, enc: &NormalizedEncoder, x: f64) -> Result<f64> {
    if f.dim() != enc.dim() {
        return Err(HdError::DimensionMismatch {
            left: f.dim(),
            right: enc.dim(),
        });
    }
    f.inner_scaled(&enc.encode_normalized(x)?)
}

/// [`inverse_eval`] at many points, in parallel.
pub fn inverse_eval_many(f: &HyperVector, enc: &NormalizedEncoder, xs: &[f64]) -> Result<Vec<f64>> {
    xs.par_iter().map(|&x| inverse_eval(f, enc, x)).collect()
}

/// The `D → ∞` limit of `inverse_eval(forward(f))`:
/// `Σ_j w_j f(x_j) k(x, x_j) / (n(x) n(x_j))`.
pub fn smooth_oracle(f: &SampledFunction, enc: &NormalizedEncoder, x: f64, q: &Quadrature) -> Result<f64> {
    enc.domain().check(x)?;
    check_nodes(enc, q)?;
    let mut s = 0.0;
    for (&xj, w) in q.nodes().iter().zip(q.weights()) {
        let k = enc.expected_kernel(x, xj);
        if k != 0.0 {
            s += w * f.eval(xj)? * k;
        }
    }
    Ok(s)
}

/// [`smooth_oracle`] at many points, in parallel.
pub fn smooth_oracle_many(
    f: &SampledFunction,
    enc: &NormalizedEncoder,
    xs: &[f64],
    q: &Quadrature,
) -> Result<Vec<f64>> {
    xs.par_iter().map(|&x| smooth_oracle(f, enc, x, q)).collect()
}
