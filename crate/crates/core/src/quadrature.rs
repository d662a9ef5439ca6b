//! Node/weight rules for integrals over an interval.

use crate::encodings::Domain1D;
use crate::error::{invalid, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rule {
    Midpoint,
    Trapezoid,
}

/// Positive weights on strictly increasing nodes.
#[derive(Clone, Debug, PartialEq)]
pub struct Quadrature {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl Quadrature {
    pub fn new(nodes: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if nodes.is_empty() || nodes.len() != weights.len() {
            return Err(invalid("quadrature", "need at least one node and one weight per node"));
        }
        if nodes.windows(2).any(|w| !(w[1] > w[0])) || nodes.iter().any(|x| !x.is_finite()) {
            return Err(invalid("quadrature", "nodes must be finite and strictly increasing"));
        }
        if weights.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(invalid("quadrature", "weights must be positive"));
        }
        Ok(Self { nodes, weights })
    }

    /// Composite midpoint rule with `n` equal cells.
    pub fn midpoint(domain: Domain1D, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(invalid("quadrature", "need at least one cell"));
        }
        let h = domain.length() / n as f64;
        let nodes = (0..n).map(|j| domain.a() + (j as f64 + 0.5) * h).collect();
        Self::new(nodes, vec![h; n])
    }

    /// Composite trapezoid rule on `n ≥ 2` equidistant points.
    pub fn trapezoid(domain: Domain1D, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(invalid("quadrature", "trapezoid rule needs two points"));
        }
        let nodes = domain.linspace(n);
        let weights = crate::normalization::trapezoid_weights(&nodes);
        Self::new(nodes, weights)
    }

    pub fn with_rule(domain: Domain1D, rule: Rule, n: usize) -> Result<Self> {
        match rule {
            Rule::Midpoint => Self::midpoint(domain, n),
            Rule::Trapezoid => Self::trapezoid(domain, n),
        }
    }

    /// Number of midpoint cells giving twenty nodes per length scale.
    pub fn default_size(domain: Domain1D, lambda: f64) -> usize {
        (20.0 * domain.length() / lambda).ceil().max(1.0) as usize
    }

    /// Midpoint rule with [`Quadrature::default_size`] cells.
    pub fn for_length_scale(domain: Domain1D, lambda: f64) -> Result<Self> {
        crate::encodings::check_positive("lambda", lambda)?;
        Self::midpoint(domain, Self::default_size(domain, lambda))
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, w)| w * f(x)).sum()
    }
}
