use std::sync::Arc;

use super::prf::{derive_seed, prf, rademacher, unit_open};
use super::{Domain1D, Encoder, EncoderConfig};
use crate::error::{invalid, Result};

const TAG_MIX: u64 = 0x51;
const TAG_NOISE: u64 = 0x52;

/// Wraps an encoder so that each component is, with probability `ε`, replaced
/// by an independent Rademacher function of `x` (a fresh sign per point).
///
/// The expected kernel becomes `(1 - ε) k(x, x') + ε δ(x, x')`, which is
/// strictly positive definite for any `ε > 0`.
#[derive(Clone, Debug)]
pub struct EpsilonMixed {
    base: Arc<dyn Encoder>,
    epsilon: f64,
    mix_seed: u64,
    noise_seed: u64,
}

impl EpsilonMixed {
    pub fn new(base: Arc<dyn Encoder>, epsilon: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&epsilon) {
            return Err(invalid("epsilon", format!("must lie in [0, 1], got {epsilon}")));
        }
        let seed = base.seed();
        Ok(Self {
            base,
            epsilon,
            mix_seed: derive_seed(seed, TAG_MIX),
            noise_seed: derive_seed(seed, TAG_NOISE),
        })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn base(&self) -> &Arc<dyn Encoder> {
        &self.base
    }

    #[inline]
    fn is_noise(&self, i: usize) -> bool {
        unit_open(prf(self.mix_seed, i as u64, 0)) < self.epsilon
    }
}

impl Encoder for EpsilonMixed {
    fn dim(&self) -> usize {
        self.base.dim()
    }

    fn domain(&self) -> Domain1D {
        self.base.domain()
    }

    fn seed(&self) -> u64 {
        self.base.seed()
    }

    fn length_scale(&self) -> f64 {
        self.base.length_scale()
    }

    fn component(&self, i: usize, x: f64) -> f64 {
        if self.is_noise(i) {
            // +0.0 and -0.0 are the same point
            let key = if x == 0.0 { 0u64 } else { x.to_bits() };
            rademacher(prf(self.noise_seed, i as u64, key))
        } else {
            self.base.component(i, x)
        }
    }

    fn component_derivative(&self, i: usize, x: f64, order: usize) -> Option<f64> {
        if self.epsilon > 0.0 && self.is_noise(i) {
            None
        } else {
            self.base.component_derivative(i, x, order)
        }
    }

    fn expected_kernel(&self, x: f64, x2: f64) -> f64 {
        let delta = if x == x2 { 1.0 } else { 0.0 };
        (1.0 - self.epsilon) * self.base.expected_kernel(x, x2) + self.epsilon * delta
    }

    fn distance(&self, x: f64, x2: f64) -> f64 {
        self.base.distance(x, x2)
    }

    fn config(&self) -> EncoderConfig {
        EncoderConfig {
            epsilon: Some(self.epsilon),
            ..self.base.config()
        }
    }
}
