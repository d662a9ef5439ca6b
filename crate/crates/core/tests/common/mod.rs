#![allow(dead_code)]

use std::sync::Arc;

use hdtransform::encodings::{Domain1D, IntervalStepEncoder, PeriodicEncoder, SigmoidEncoder};
use hdtransform::{NormalizationSettings, NormalizedEncoder, Quadrature};

pub fn unit() -> Domain1D {
    Domain1D::new(0.0, 1.0).unwrap()
}

pub fn interval(d: Domain1D, lambda: f64, dim: usize, seed: u64) -> NormalizedEncoder {
    let base = IntervalStepEncoder::new(d, lambda, dim, seed).unwrap();
    NormalizedEncoder::solve(Arc::new(base), NormalizationSettings::default())
        .unwrap()
        .0
}

pub fn sigmoid(d: Domain1D, lambda: f64, dim: usize, seed: u64) -> NormalizedEncoder {
    let base = SigmoidEncoder::new(d, lambda, dim, seed).unwrap();
    NormalizedEncoder::solve(Arc::new(base), NormalizationSettings::default())
        .unwrap()
        .0
}

pub fn periodic(d: Domain1D, cells: usize, dim: usize, seed: u64) -> NormalizedEncoder {
    let base = PeriodicEncoder::new(d, cells, dim, seed).unwrap();
    NormalizedEncoder::solve(Arc::new(base), NormalizationSettings::default())
        .unwrap()
        .0
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300)
}

/// Points of `d` at least `margin` away from both ends.
pub fn interior(d: Domain1D, margin: f64, n: usize) -> Vec<f64> {
    Domain1D::new(d.a() + margin, d.b() - margin).unwrap().linspace(n)
}

/// `E[F_i G_i]` for the transforms of `f` and `g`, from the expected kernel.
pub fn cross_moment(enc: &NormalizedEncoder, f: &dyn Fn(f64) -> f64, g: &dyn Fn(f64) -> f64, q: &Quadrature) -> f64 {
    let (nodes, w) = (q.nodes(), q.weights());
    let fv: Vec<f64> = nodes.iter().zip(w).map(|(&x, w)| w * f(x)).collect();
    let gv: Vec<f64> = nodes.iter().zip(w).map(|(&x, w)| w * g(x)).collect();
    let mut s = 0.0;
    for (a, &x) in nodes.iter().enumerate() {
        for (b, &y) in nodes.iter().enumerate() {
            s += fv[a] * gv[b] * enc.expected_kernel(x, y);
        }
    }
    s
}

/// `E[p_i²]` for `p = Σ_j c_j Δ(x_j)`.
pub fn probe_moment(enc: &NormalizedEncoder, points: &[f64], coeffs: &[f64]) -> f64 {
    let mut s = 0.0;
    for (a, &x) in points.iter().enumerate() {
        for (b, &y) in points.iter().enumerate() {
            s += coeffs[a] * coeffs[b] * enc.expected_kernel(x, y);
        }
    }
    s
}

/// `E[F_i p_i]`, the infinite-dimensional value of `⟨F, p⟩`.
pub fn probe_mean(
    enc: &NormalizedEncoder,
    f: &dyn Fn(f64) -> f64,
    q: &Quadrature,
    points: &[f64],
    coeffs: &[f64],
) -> f64 {
    let (nodes, w) = (q.nodes(), q.weights());
    points
        .iter()
        .zip(coeffs)
        .map(|(&x, c)| {
            c * nodes
                .iter()
                .zip(w)
                .map(|(&y, w)| w * f(y) * enc.expected_kernel(x, y))
                .sum::<f64>()
        })
        .sum()
}

/// Standard deviation of `⟨F, p⟩` for `F` the transform of `f` and
/// `p = Σ_j c_j Δ(x_j)`, treating `F_i` and `p_i` as independent.
pub fn probe_noise(
    enc: &NormalizedEncoder,
    f: impl Fn(f64) -> f64,
    q: &Quadrature,
    points: &[f64],
    coeffs: &[f64],
) -> f64 {
    let ff = cross_moment(enc, &f, &f, q);
    let pp = probe_moment(enc, points, coeffs);
    let mean = probe_mean(enc, &f, q, points, coeffs);
    ((ff * pp - mean * mean).max(0.0) / enc.dim() as f64).sqrt()
}
