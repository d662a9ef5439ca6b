//! Fuzzy transform over a uniform triangular partition, kept as a baseline.

use crate::encodings::Domain1D;
use crate::error::{invalid, Result};
use crate::quadrature::Quadrature;
use crate::transform::SampledFunction;

/// Hat functions `A_1 … A_n` centred on `n` equidistant nodes with `x_1 = a`
/// and `x_n = b`.
#[derive(Clone, Debug, PartialEq)]
pub struct FuzzyPartition {
    domain: Domain1D,
    nodes: Vec<f64>,
    h: f64,
}

impl FuzzyPartition {
    pub fn new(domain: Domain1D, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(invalid("nodes", "a fuzzy partition needs at least two nodes"));
        }
        Ok(Self {
            domain,
            nodes: domain.linspace(n),
            h: domain.length() / (n - 1) as f64,
        })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn domain(&self) -> Domain1D {
        self.domain
    }

    /// `A_s(x)` with `s` counted from zero.
    pub fn basis(&self, s: usize, x: f64) -> f64 {
        (1.0 - (x - self.nodes[s]).abs() / self.h).max(0.0)
    }
}

/// `G_s = ∫ f A_s / ∫ A_s`, both integrals taken with `q`.
pub fn fuzzy_transform(f: &SampledFunction, p: &FuzzyPartition, q: &Quadrature) -> Result<Vec<f64>> {
    let fx = f.sample(q.nodes())?;
    Ok((0..p.len())
        .map(|s| {
            let (mut num, mut den) = (0.0, 0.0);
            for ((&x, w), fv) in q.nodes().iter().zip(q.weights()).zip(&fx) {
                let a = p.basis(s, x);
                num += w * fv * a;
                den += w * a;
            }
            num / den
        })
        .collect())
}

/// `Σ_s G_s A_s(x)`, the piecewise-linear interpolant of the components.
pub fn fuzzy_inverse(g: &[f64], p: &FuzzyPartition, x: f64) -> Result<f64> {
    if g.len() != p.len() {
        return Err(crate::error::HdError::DimensionMismatch {
            left: g.len(),
            right: p.len(),
        });
    }
    p.domain.check(x)?;
    let s = (((x - p.domain.a()) / p.h).floor() as usize).min(p.len() - 2);
    Ok(g[s] * p.basis(s, x) + g[s + 1] * p.basis(s + 1, x))
}
