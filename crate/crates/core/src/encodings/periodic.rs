use super::prf::{derive_seed, prf, rademacher, unit_open};
use super::{check_dim, triangular, Domain1D, Encoder, EncoderConfig, EncoderType};
use crate::error::{invalid, Result};

const TAG_ANCHOR: u64 = 1;
const TAG_SWITCH: u64 = 2;

/// Interval encoder with periodic boundary conditions.
///
/// The interval is split into `n_cells` cells of width `λ = (b - a) / n_cells`;
/// anchor values repeat with period `n_cells`, so `encode(a) == encode(b)`.
#[derive(Clone, Debug)]
pub struct PeriodicEncoder {
    domain: Domain1D,
    n_cells: usize,
    dim: usize,
    seed: u64,
    anchor_seed: u64,
    switch_seed: u64,
}

impl PeriodicEncoder {
    pub fn new(domain: Domain1D, n_cells: usize, dim: usize, seed: u64) -> Result<Self> {
        check_dim(dim)?;
        if n_cells < 2 {
            return Err(invalid("n_cells", format!("must be at least 2, got {n_cells}")));
        }
        Ok(Self {
            domain,
            n_cells,
            dim,
            seed,
            anchor_seed: derive_seed(seed, TAG_ANCHOR),
            switch_seed: derive_seed(seed, TAG_SWITCH),
        })
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn lambda(&self) -> f64 {
        self.domain.length() / self.n_cells as f64
    }
}

impl Encoder for PeriodicEncoder {
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
        self.lambda()
    }

    #[inline]
    fn component(&self, i: usize, x: f64) -> f64 {
        let n = self.n_cells as i64;
        let s = (x - self.domain.a()) / self.domain.length() * n as f64;
        let k = s.floor();
        let u = unit_open(prf(self.switch_seed, i as u64, 0));
        let seg = if s - k < u { k as i64 } else { k as i64 + 1 };
        rademacher(prf(self.anchor_seed, i as u64, seg.rem_euclid(n) as u64))
    }

    fn expected_kernel(&self, x: f64, x2: f64) -> f64 {
        triangular(self.distance(x, x2), self.lambda())
    }

    /// Wrap-around distance on the circle of circumference `b - a`.
    fn distance(&self, x: f64, x2: f64) -> f64 {
        let len = self.domain.length();
        let d = (x - x2).abs();
        if d <= len / 2.0 {
            d
        } else {
            len - d
        }
    }

    fn config(&self) -> EncoderConfig {
        EncoderConfig {
            n_cells: Some(self.n_cells),
            lambda: None,
            ..EncoderConfig::base(EncoderType::Periodic, self.domain, self.lambda(), self.dim, self.seed)
        }
    }
}
