//! Interval encoders built on a lattice of anchor points spaced `λ` apart.
//!
//! Each component `i` draws Rademacher values `r_i(x_k)` at the anchors
//! `x_k = origin + kλ` and one switch fraction `u_i ∈ (0, 1)`. Inside the
//! cell `[x_k, x_{k+1})` the component holds `r_i(x_k)` left of the switch
//! point `t_i = x_k + u_i λ` and `r_i(x_{k+1})` from it onward. Sharing
//! `u_i` across cells makes the component piecewise constant on segments of
//! length exactly `λ` with a uniformly random phase, which is what yields the
//! triangular kernel `max(0, 1 - |x - x'| / λ)` for every pair of points.

use super::prf::{derive_seed, prf, rademacher, unit_open};
use super::{check_dim, check_positive, triangular, Domain1D, Encoder, EncoderConfig, EncoderType};
use crate::error::Result;

const TAG_ANCHOR: u64 = 1;
const TAG_SWITCH: u64 = 2;

/// Beyond this many sharpness units a logistic term is saturated to machine
/// precision and is folded into the base value.
const SIGMOID_CUTOFF: f64 = 40.0;

/// Number of switch-fraction nodes used to average the sigmoid kernel.
const SIGMOID_KERNEL_NODES: usize = 200;

#[derive(Clone, Copy, Debug)]
struct Lattice {
    origin: f64,
    lambda: f64,
    anchor_seed: u64,
    switch_seed: u64,
}

impl Lattice {
    fn new(origin: f64, lambda: f64, seed: u64) -> Self {
        Self {
            origin,
            lambda,
            anchor_seed: derive_seed(seed, TAG_ANCHOR),
            switch_seed: derive_seed(seed, TAG_SWITCH),
        }
    }

    #[inline]
    fn anchor(&self, i: usize, k: i64) -> f64 {
        rademacher(prf(self.anchor_seed, i as u64, k as u64))
    }

    #[inline]
    fn switch_fraction(&self, i: usize) -> f64 {
        unit_open(prf(self.switch_seed, i as u64, 0))
    }

    /// Index of the anchor whose value component `i` holds at `x`.
    #[inline]
    fn segment(&self, x: f64, u: f64) -> i64 {
        let k = ((x - self.origin) / self.lambda).floor() as i64;
        if x < self.switch_point(k, u) {
            k
        } else {
            k + 1
        }
    }

    /// Position of the switch from segment `j` to `j + 1`.
    #[inline]
    fn switch_point(&self, j: i64, u: f64) -> f64 {
        self.origin + (j as f64 + u) * self.lambda
    }
}

/// Piecewise-constant `{-1, +1}` encoder of an interval.
#[derive(Clone, Debug)]
pub struct IntervalStepEncoder {
    domain: Domain1D,
    dim: usize,
    seed: u64,
    lattice: Lattice,
}

impl IntervalStepEncoder {
    /// Anchors start at the left endpoint.
    pub fn new(domain: Domain1D, lambda: f64, dim: usize, seed: u64) -> Result<Self> {
        Self::with_origin(domain, lambda, dim, seed, domain.a())
    }

    pub fn with_origin(domain: Domain1D, lambda: f64, dim: usize, seed: u64, anchor_origin: f64) -> Result<Self> {
        check_dim(dim)?;
        check_positive("lambda", lambda)?;
        if !anchor_origin.is_finite() {
            return Err(crate::error::invalid("anchor_origin", "must be finite"));
        }
        Ok(Self {
            domain,
            dim,
            seed,
            lattice: Lattice::new(anchor_origin, lambda, seed),
        })
    }

    pub fn lambda(&self) -> f64 {
        self.lattice.lambda
    }

    pub fn anchor_origin(&self) -> f64 {
        self.lattice.origin
    }

    /// Position of anchor `k`.
    pub fn anchor_position(&self, k: i64) -> f64 {
        self.lattice.origin + k as f64 * self.lattice.lambda
    }

    /// Value of component `i` at anchor `k`.
    pub fn anchor_value(&self, i: usize, k: i64) -> f64 {
        self.lattice.anchor(i, k)
    }

    /// Switch point of component `i` inside the cell starting at anchor `k`.
    pub fn switch_point(&self, i: usize, k: i64) -> f64 {
        self.lattice.switch_point(k, self.lattice.switch_fraction(i))
    }
}

impl Encoder for IntervalStepEncoder {
    fn dim(&self) -> usize {
        self.dim
    }

    fn domain(&self) -> Domain1D {
        self.domain
    }

    fn seed(&self) -> u64 {
        self.seed
    }

    fn length_scale(&self) -> f64 {
        self.lattice.lambda
    }

    #[inline]
    fn component(&self, i: usize, x: f64) -> f64 {
        let u = self.lattice.switch_fraction(i);
        self.lattice.anchor(i, self.lattice.segment(x, u))
    }

    fn expected_kernel(&self, x: f64, x2: f64) -> f64 {
        triangular((x - x2).abs(), self.lattice.lambda)
    }

    fn config(&self) -> EncoderConfig {
        EncoderConfig {
            anchor_origin: Some(self.lattice.origin),
            ..EncoderConfig::base(
                EncoderType::Interval,
                self.domain,
                self.lattice.lambda,
                self.dim,
                self.seed,
            )
        }
    }
}

/// Smooth variant of [`IntervalStepEncoder`]: every jump between anchor values
/// is replaced by a logistic ramp of width `tau` centred on the same switch
/// point.
#[derive(Clone, Debug)]
pub struct SigmoidEncoder {
    step: IntervalStepEncoder,
    tau: f64,
}

#[inline]
fn logistic(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

impl SigmoidEncoder {
    /// Sharpness defaults to `λ / 20`.
    pub fn new(domain: Domain1D, lambda: f64, dim: usize, seed: u64) -> Result<Self> {
        Self::with_tau(domain, lambda, dim, seed, lambda / 20.0)
    }

    pub fn with_tau(domain: Domain1D, lambda: f64, dim: usize, seed: u64, tau: f64) -> Result<Self> {
        let step = IntervalStepEncoder::new(domain, lambda, dim, seed)?;
        Self::from_step(step, tau)
    }

    /// Shares anchors, anchor values and switch points with `step`.
    pub fn from_step(step: IntervalStepEncoder, tau: f64) -> Result<Self> {
        check_positive("tau", tau)?;
        Ok(Self { step, tau })
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn step(&self) -> &IntervalStepEncoder {
        &self.step
    }

    /// Switch indices whose logistic term is not saturated at `x`.
    #[inline]
    fn window(&self, x: f64, u: f64) -> (i64, i64) {
        let lat = &self.step.lattice;
        let reach = SIGMOID_CUTOFF * self.tau;
        let lo = ((x - reach - lat.origin) / lat.lambda - u).ceil() as i64;
        let hi = ((x + reach - lat.origin) / lat.lambda - u).floor() as i64;
        (lo, hi)
    }

    /// `order`-th derivative (0, 1 or 2) of component `i` at `x`.
    fn eval(&self, i: usize, x: f64, order: usize) -> f64 {
        let lat = &self.step.lattice;
        let u = lat.switch_fraction(i);
        let (lo, hi) = self.window(x, u);
        let mut acc = if order == 0 { lat.anchor(i, lo) } else { 0.0 };
        let mut prev = lat.anchor(i, lo);
        for j in lo..=hi {
            let next = lat.anchor(i, j + 1);
            let jump = next - prev;
            prev = next;
            if jump == 0.0 {
                continue;
            }
            let s = logistic((x - lat.switch_point(j, u)) / self.tau);
            acc += jump
                * match order {
                    0 => s,
                    1 => s * (1.0 - s) / self.tau,
                    _ => s * (1.0 - s) * (1.0 - 2.0 * s) / (self.tau * self.tau),
                };
        }
        acc
    }

    /// Segment weights `w_j(x)` with `φ(x) = Σ_j r(x_j) w_j(x)`, for segments
    /// `first..first + out.len()`.
    fn weights(&self, x: f64, u: f64, first: i64, out: &mut [f64]) {
        let lat = &self.step.lattice;
        let sig = |j: i64| logistic((x - lat.switch_point(j, u)) / self.tau);
        let mut left = sig(first - 1);
        for (w, j) in out.iter_mut().zip(first..) {
            let right = sig(j);
            *w = left - right;
            left = right;
        }
    }

    /// Analytic derivative of the unnormalized component, orders 0 to 2.
    pub fn component_derivative_exact(&self, i: usize, x: f64, order: usize) -> f64 {
        self.eval(i, x, order.min(2))
    }
}

impl Encoder for SigmoidEncoder {
    fn dim(&self) -> usize {
        self.step.dim
    }

    fn domain(&self) -> Domain1D {
        self.step.domain
    }

    fn seed(&self) -> u64 {
        self.step.seed
    }

    fn length_scale(&self) -> f64 {
        self.step.lattice.lambda
    }

    fn component(&self, i: usize, x: f64) -> f64 {
        self.eval(i, x, 0)
    }

    fn component_derivative(&self, i: usize, x: f64, order: usize) -> Option<f64> {
        (order <= 2).then(|| self.eval(i, x, order))
    }

    /// Averages `Σ_j w_j(x) w_j(x')` over the switch fraction with a midpoint
    /// rule; anchor values are independent so cross terms vanish.
    fn expected_kernel(&self, x: f64, x2: f64) -> f64 {
        let lat = &self.step.lattice;
        let reach = SIGMOID_CUTOFF * self.tau;
        let lo = ((x.min(x2) - reach - lat.origin) / lat.lambda).floor() as i64 - 1;
        let hi = ((x.max(x2) + reach - lat.origin) / lat.lambda).ceil() as i64 + 1;
        let len = (hi - lo + 1) as usize;
        let mut w1 = vec![0.0; len];
        let mut w2 = vec![0.0; len];
        let mut total = 0.0;
        for q in 0..SIGMOID_KERNEL_NODES {
            let u = (q as f64 + 0.5) / SIGMOID_KERNEL_NODES as f64;
            self.weights(x, u, lo, &mut w1);
            self.weights(x2, u, lo, &mut w2);
            total += crate::vector::dot(&w1, &w2);
        }
        total / SIGMOID_KERNEL_NODES as f64
    }

    fn config(&self) -> EncoderConfig {
        EncoderConfig {
            kind: EncoderType::Sigmoid,
            tau: Some(self.tau),
            ..self.step.config()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> Domain1D {
        Domain1D::new(0.0, 1.0).unwrap()
    }

    #[test]
    fn components_are_bipolar_and_deterministic() {
        let enc = IntervalStepEncoder::new(unit(), 0.25, 512, 3).unwrap();
        for &x in &[0.0, 0.13, 0.5, 0.77, 1.0] {
            let v = enc.encode(x).unwrap();
            assert!(v.iter().all(|&c| c == 1.0 || c == -1.0));
            assert_eq!(v, enc.encode(x).unwrap());
            assert_eq!(v.inner_scaled(&v).unwrap(), 1.0);
        }
    }

    #[test]
    fn anchor_points_give_anchor_vectors() {
        let enc = IntervalStepEncoder::new(unit(), 0.25, 256, 11).unwrap();
        for k in 0..=4 {
            let x = enc.anchor_position(k);
            let v = enc.encode(x).unwrap();
            for i in 0..256 {
                assert_eq!(v[i], enc.anchor_value(i, k), "k={k} i={i}");
            }
        }
    }

    #[test]
    fn switch_points_lie_inside_their_cells() {
        let enc = IntervalStepEncoder::new(unit(), 0.25, 64, 5).unwrap();
        for i in 0..64 {
            for k in 0..4 {
                let t = enc.switch_point(i, k);
                assert!(t > enc.anchor_position(k) && t < enc.anchor_position(k + 1));
                let before = enc.component(i, t - 1e-9);
                let at = enc.component(i, t);
                assert_eq!(before, enc.anchor_value(i, k));
                assert_eq!(at, enc.anchor_value(i, k + 1));
            }
        }
    }

    #[test]
    fn out_of_domain_is_an_error() {
        let enc = IntervalStepEncoder::new(unit(), 0.25, 8, 1).unwrap();
        assert!(enc.encode(-0.01).is_err());
        assert!(enc.encode(1.01).is_err());
    }

    #[test]
    fn kernel_example_point_pair() {
        let enc = IntervalStepEncoder::new(unit(), 0.25, 10_000, 2024).unwrap();
        let ip = enc
            .encode(0.4)
            .unwrap()
            .inner_scaled(&enc.encode(0.5).unwrap())
            .unwrap();
        assert!((enc.expected_kernel(0.4, 0.5) - 0.6).abs() < 1e-12);
        assert!((ip - 0.6).abs() <= 4.0 / 100.0, "ip = {ip}");
    }

    #[test]
    fn expected_kernel_support() {
        let enc = IntervalStepEncoder::new(unit(), 0.25, 8, 1).unwrap();
        assert_eq!(enc.expected_kernel(0.3, 0.3), 1.0);
        assert_eq!(enc.expected_kernel(0.1, 0.4), 0.0);
        assert_eq!(enc.expected_kernel(0.0, 0.9), 0.0);
        assert!(enc.expected_kernel(0.1, 0.34) > 0.0);
    }

    #[test]
    fn differing_components_grow_with_distance() {
        let enc = IntervalStepEncoder::new(unit(), 0.25, 2048, 17).unwrap();
        let x = 0.25;
        let base = enc.encode(x).unwrap();
        let mut last = 0;
        for step in 1..=50 {
            let x2 = x + 0.25 * step as f64 / 50.0 * 0.999;
            let v = enc.encode(x2).unwrap();
            let diff = base.iter().zip(v.iter()).filter(|(a, b)| a != b).count();
            assert!(diff >= last);
            last = diff;
        }
    }

    #[test]
    fn origin_shifts_the_lattice() {
        let d = unit();
        let a = IntervalStepEncoder::with_origin(d, 0.25, 128, 9, -0.1).unwrap();
        let v = a.encode(0.15).unwrap();
        for i in 0..128 {
            assert_eq!(v[i], a.anchor_value(i, 1));
        }
    }

    #[test]
    fn sigmoid_matches_step_far_from_switches() {
        let step = IntervalStepEncoder::new(unit(), 0.25, 400, 8).unwrap();
        let sig = SigmoidEncoder::from_step(step.clone(), 1e-6).unwrap();
        let x = 0.4;
        for i in 0..400 {
            let t = step.switch_point(i, 1);
            if (x - t).abs() > 1e-3 {
                assert!((sig.component(i, x) - step.component(i, x)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn sigmoid_at_switch_point_is_midpoint() {
        let step = IntervalStepEncoder::new(unit(), 0.25, 64, 8).unwrap();
        let sig = SigmoidEncoder::from_step(step.clone(), 0.25 / 20.0).unwrap();
        for i in 0..64 {
            let t = step.switch_point(i, 1);
            let mid = 0.5 * (step.anchor_value(i, 1) + step.anchor_value(i, 2));
            assert!((sig.component(i, t) - mid).abs() < 1e-8);
        }
    }

    #[test]
    fn sigmoid_derivative_matches_central_difference() {
        let sig = SigmoidEncoder::new(unit(), 0.25, 256, 21).unwrap();
        let h = 1e-6;
        let mut worst = 0.0f64;
        for &x in &[0.1, 0.31, 0.5, 0.62, 0.9] {
            let scale = (0..256)
                .map(|i| sig.component_derivative(i, x, 1).unwrap().abs())
                .fold(0.0, f64::max);
            for i in 0..256 {
                let exact = sig.component_derivative(i, x, 1).unwrap();
                let fd = (sig.component(i, x + h) - sig.component(i, x - h)) / (2.0 * h);
                // per-component relative error, floored at the largest slope
                // so saturated components do not divide by ~0
                let err = (exact - fd).abs() / exact.abs().max(1e-3 * scale).max(1e-12);
                worst = worst.max(err);
            }
        }
        assert!(worst <= 1e-5, "worst relative error {worst}");
    }

    #[test]
    fn sigmoid_second_derivative_matches_difference_of_first() {
        let sig = SigmoidEncoder::new(unit(), 0.25, 64, 4).unwrap();
        let h = 1e-6;
        for &x in &[0.2, 0.45, 0.8] {
            for i in 0..64 {
                let exact = sig.component_derivative(i, x, 2).unwrap();
                let fd = (sig.component_derivative(i, x + h, 1).unwrap()
                    - sig.component_derivative(i, x - h, 1).unwrap())
                    / (2.0 * h);
                assert!((exact - fd).abs() <= 1e-4 * (1.0 + exact.abs()), "{exact} vs {fd}");
            }
        }
    }

    #[test]
    fn sigmoid_kernel_is_close_to_triangular() {
        let sig = SigmoidEncoder::new(unit(), 0.25, 8, 4).unwrap();
        // Each ramp loses about 4τ of squared amplitude and half the ramps flip sign.
        let deficit = 2.0 * sig.tau() / 0.25;
        assert!((sig.expected_kernel(0.5, 0.5) - (1.0 - deficit)).abs() < 1e-3);
        for &(x, y) in &[(0.5, 0.6), (0.3, 0.52), (0.1, 0.6)] {
            let k = sig.expected_kernel(x, y);
            let tri = triangular((x - y).abs(), 0.25);
            assert!((k - tri).abs() <= deficit + 0.01, "{x},{y}: {k} vs {tri}");
        }
    }

    #[test]
    fn sigmoid_kernel_agrees_with_monte_carlo() {
        let sig = SigmoidEncoder::new(unit(), 0.25, 20_000, 77).unwrap();
        let a = sig.encode(0.4).unwrap();
        let b = sig.encode(0.55).unwrap();
        let mc = a.inner_scaled(&b).unwrap();
        let k = sig.expected_kernel(0.4, 0.55);
        assert!((mc - k).abs() < 4.0 / (20_000f64).sqrt(), "{mc} vs {k}");
    }
}
