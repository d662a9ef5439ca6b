//! Derivatives and integrals of back-transformed functions.
//!
//! Because `f̃(x) = ⟨F, Δ(x)⟩` is linear in `Δ(x)`, the derivative of `f̃` is
//! the inner product of `F` with the derivative of the encoding, and the
//! integral of `f̃` is the inner product with the transform of the indicator.

use rayon::prelude::*;

use crate::encodings::Domain1D;
use crate::error::{invalid, HdError, Result};
use crate::normalization::NormalizedEncoder;
use crate::vector::HyperVector;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DerivativeMethod {
    FiniteDifference {
        h: f64,
    },
    /// Analytic component derivatives; sigmoid encoders only, order ≤ 2.
    ExactSigmoid,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DerivativeSpec {
    pub order: usize,
    pub method: DerivativeMethod,
}

impl DerivativeSpec {
    pub fn finite_difference(order: usize, h: f64) -> Result<Self> {
        if !(h.is_finite() && h > 0.0) {
            return Err(invalid("h", format!("must be positive, got {h}")));
        }
        Ok(Self {
            order,
            method: DerivativeMethod::FiniteDifference { h },
        })
    }

    /// Finite differences with `h = λ / 5`.
    pub fn default_for(order: usize, lambda: f64) -> Result<Self> {
        Self::finite_difference(order, lambda / 5.0)
    }

    pub fn exact(order: usize) -> Result<Self> {
        if order > 2 {
            return Err(HdError::Unsupported(format!(
                "exact sigmoid derivatives go up to order 2, requested {order}"
            )));
        }
        Ok(Self {
            order,
            method: DerivativeMethod::ExactSigmoid,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StencilKind {
    Central,
    Forward,
    Backward,
}

/// Sample points and weights of a difference formula at one location.
#[derive(Clone, Debug, PartialEq)]
pub struct Stencil {
    pub kind: StencilKind,
    pub points: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Weights of the `order`-th derivative at zero for samples at `offsets`.
pub fn fornberg_weights(order: usize, offsets: &[f64]) -> Vec<f64> {
    let n = offsets.len();
    let mut c = vec![vec![0.0; order + 1]; n];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = offsets[0];
    for i in 1..n {
        let mn = i.min(order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = offsets[i];
        for j in 0..i {
            let c3 = offsets[i] - offsets[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[order]).collect()
}

/// Second-order accurate stencil for the `order`-th derivative at `x`.
///
/// Central where it fits inside `domain`; otherwise one-sided with
/// `order + 2` points.
pub fn stencil(domain: Domain1D, x: f64, order: usize, h: f64) -> Result<Stencil> {
    domain.check(x)?;
    if order == 0 {
        return Ok(Stencil {
            kind: StencilKind::Central,
            points: vec![x],
            weights: vec![1.0],
        });
    }
    let tol = 1e-12 * domain.length();
    let fits = |lo: i64, hi: i64| x + lo as f64 * h >= domain.a() - tol && x + hi as f64 * h <= domain.b() + tol;
    let p = order.div_ceil(2) as i64;
    let m = order as i64 + 1;
    let (kind, offsets): (StencilKind, Vec<i64>) = if fits(-p, p) {
        (StencilKind::Central, (-p..=p).collect())
    } else if fits(0, m) {
        (StencilKind::Forward, (0..=m).collect())
    } else if fits(-m, 0) {
        (StencilKind::Backward, (-m..=0).collect())
    } else {
        return Err(HdError::Stencil {
            x,
            a: domain.a(),
            b: domain.b(),
        });
    };
    let raw = fornberg_weights(order, &offsets.iter().map(|&k| k as f64).collect::<Vec<_>>());
    let scale = h.powi(order as i32);
    let (mut points, mut weights) = (Vec::new(), Vec::new());
    for (k, w) in offsets.iter().zip(raw) {
        if w != 0.0 {
            points.push((x + *k as f64 * h).clamp(domain.a(), domain.b()));
            weights.push(w / scale);
        }
    }
    Ok(Stencil { kind, points, weights })
}

fn exact_component(enc: &NormalizedEncoder, i: usize, x: f64, order: usize, n: [f64; 3]) -> Result<f64> {
    let base = enc.base();
    let missing = || HdError::Unsupported("exact derivatives need a sigmoid encoder".into());
    let phi = base.component(i, x);
    let [n0, n1, n2] = n;
    match order {
        0 => Ok(phi / n0),
        1 => {
            let d1 = base.component_derivative(i, x, 1).ok_or_else(missing)?;
            Ok(d1 / n0 - phi * n1 / (n0 * n0))
        }
        _ => {
            let d1 = base.component_derivative(i, x, 1).ok_or_else(missing)?;
            let d2 = base.component_derivative(i, x, 2).ok_or_else(missing)?;
            Ok(d2 / n0 - 2.0 * d1 * n1 / (n0 * n0) + phi * (2.0 * n1 * n1 / (n0 * n0 * n0) - n2 / (n0 * n0)))
        }
    }
}

/// The `order`-th derivative of `x ↦ Δ(x)`.
pub fn encoding_derivative(enc: &NormalizedEncoder, x: f64, spec: DerivativeSpec) -> Result<HyperVector> {
    match spec.method {
        DerivativeMethod::FiniteDifference { h } => {
            let st = stencil(enc.domain(), x, spec.order, h)?;
            let scaled: Vec<f64> = st
                .points
                .iter()
                .zip(&st.weights)
                .map(|(&p, w)| w / enc.norm().eval(p))
                .collect();
            let base = enc.base();
            let values = (0..enc.dim())
                .into_par_iter()
                .map(|i| {
                    let mut s = 0.0;
                    for (w, &p) in scaled.iter().zip(&st.points) {
                        s += w * base.component(i, p);
                    }
                    s
                })
                .collect();
            Ok(HyperVector::from_raw(values))
        }
        DerivativeMethod::ExactSigmoid => {
            if spec.order > 2 {
                return Err(HdError::Unsupported(format!(
                    "exact sigmoid derivatives go up to order 2, requested {}",
                    spec.order
                )));
            }
            enc.domain().check(x)?;
            let norm = enc.norm();
            let n = [norm.eval(x), norm.derivative(x), norm.second_derivative(x)];
            if enc.base().component_derivative(0, x, 1).is_none() {
                return Err(HdError::Unsupported("exact derivatives need a sigmoid encoder".into()));
            }
            let values = (0..enc.dim())
                .into_par_iter()
                .map(|i| exact_component(enc, i, x, spec.order, n))
                .collect::<Result<Vec<f64>>>()?;
            Ok(HyperVector::from_raw(values))
        }
    }
}

/// `dⁿ f̃ / dxⁿ (x) = ⟨F, Δ⁽ⁿ⁾(x)⟩`.
pub fn derivative_eval(f: &HyperVector, enc: &NormalizedEncoder, x: f64, spec: DerivativeSpec) -> Result<f64> {
    if f.dim() != enc.dim() {
        return Err(HdError::DimensionMismatch {
            left: f.dim(),
            right: enc.dim(),
        });
    }
    f.inner_scaled(&encoding_derivative(enc, x, spec)?)
}

/// `∫ f̃ = ⟨F, 𝟙_X⟩`.
pub fn integral(f: &HyperVector, one_x: &HyperVector) -> Result<f64> {
    f.inner_scaled(one_x)
}
