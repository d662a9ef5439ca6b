//! Encoder of a finite product set `U × V × W` under the counting measure.

use serde::{Deserialize, Serialize};

use super::check_dim;
use super::prf::{derive_seed, prf, rademacher};
use crate::error::{invalid, HdError, Result};
use crate::vector::HyperVector;

/// How the three per-slot random vectors are combined.
///
/// The modes realize the three regimes of a length scale `l` under the
/// metric `d(x, x') = 1 - (#matching slots) / 3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiscreteMode {
    /// `(r1 + r2 + r3) / √3`; kernel is the simple matching coefficient (`l ≥ 2/3`).
    Sum,
    /// `(r1 r2 + r2 r3 + r3 r1) / √3`; correlated only when two slots match (`1/3 ≤ l < 2/3`).
    PairProduct,
    /// `r1 r2 r3`; correlated only with itself (`l < 1/3`).
    TripleProduct,
}

impl DiscreteMode {
    pub fn from_length_scale(l: f64) -> Result<Self> {
        if !(l.is_finite() && l > 0.0) {
            return Err(invalid("length_scale", format!("must be positive, got {l}")));
        }
        Ok(if l < 1.0 / 3.0 {
            Self::TripleProduct
        } else if l < 2.0 / 3.0 {
            Self::PairProduct
        } else {
            Self::Sum
        })
    }
}

#[derive(Clone, Debug)]
pub struct DiscreteTripleEncoder {
    sizes: [usize; 3],
    dim: usize,
    seed: u64,
    mode: DiscreteMode,
    slot_seeds: [u64; 3],
}

impl DiscreteTripleEncoder {
    pub fn new(sizes: [usize; 3], dim: usize, seed: u64, mode: DiscreteMode) -> Result<Self> {
        check_dim(dim)?;
        if sizes.contains(&0) {
            return Err(invalid("sizes", "every set needs at least one element"));
        }
        Ok(Self {
            sizes,
            dim,
            seed,
            mode,
            slot_seeds: [1, 2, 3].map(|t| derive_seed(seed, 0x10 + t)),
        })
    }

    pub fn sizes(&self) -> [usize; 3] {
        self.sizes
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn mode(&self) -> DiscreteMode {
        self.mode
    }

    fn check(&self, x: [usize; 3]) -> Result<()> {
        for (&v, &n) in x.iter().zip(&self.sizes) {
            if v >= n {
                return Err(HdError::OutOfDomain {
                    x: v as f64,
                    a: 0.0,
                    b: (n - 1) as f64,
                });
            }
        }
        Ok(())
    }

    #[inline]
    fn r(&self, slot: usize, i: usize, v: usize) -> f64 {
        rademacher(prf(self.slot_seeds[slot], i as u64, v as u64))
    }

    /// Unnormalized sample at the triple `x`.
    pub fn encode_discrete(&self, x: [usize; 3]) -> Result<HyperVector> {
        self.check(x)?;
        let inv_sqrt3 = 1.0 / 3f64.sqrt();
        let values = (0..self.dim)
            .map(|i| {
                let (r1, r2, r3) = (self.r(0, i, x[0]), self.r(1, i, x[1]), self.r(2, i, x[2]));
                match self.mode {
                    DiscreteMode::Sum => (r1 + r2 + r3) * inv_sqrt3,
                    DiscreteMode::PairProduct => (r1 * r2 + r2 * r3 + r3 * r1) * inv_sqrt3,
                    DiscreteMode::TripleProduct => r1 * r2 * r3,
                }
            })
            .collect();
        Ok(HyperVector::from_raw(values))
    }

    /// Normalized sample `φ(x) / n`.
    pub fn encode_normalized(&self, x: [usize; 3]) -> Result<HyperVector> {
        Ok(self.encode_discrete(x)?.scale(1.0 / self.normalization_constant()))
    }

    pub fn expected_kernel(&self, x: [usize; 3], x2: [usize; 3]) -> f64 {
        let d = |s: usize| if x[s] == x2[s] { 1.0 } else { 0.0 };
        let (d1, d2, d3) = (d(0), d(1), d(2));
        match self.mode {
            DiscreteMode::Sum => (d1 + d2 + d3) / 3.0,
            DiscreteMode::PairProduct => (d1 * d2 + d2 * d3 + d3 * d1) / 3.0,
            DiscreteMode::TripleProduct => d1 * d2 * d3,
        }
    }

    /// Closed-form `n` with `n² = Σ_{x'} k(x, x')`, the same for every `x`.
    pub fn normalization_constant(&self) -> f64 {
        let [u, v, w] = self.sizes.map(|s| s as f64);
        let n2 = match self.mode {
            DiscreteMode::Sum => (u * v + v * w + w * u) / 3.0,
            DiscreteMode::PairProduct => (u + v + w) / 3.0,
            DiscreteMode::TripleProduct => 1.0,
        };
        n2.sqrt()
    }

    /// Matching-slot distance `1 - (#matches) / 3`.
    pub fn distance(&self, x: [usize; 3], x2: [usize; 3]) -> f64 {
        let matches = (0..3).filter(|&s| x[s] == x2[s]).count();
        1.0 - matches as f64 / 3.0
    }

    /// Every element of the product set, in lexicographic order.
    pub fn elements(&self) -> Vec<[usize; 3]> {
        let [u, v, w] = self.sizes;
        let mut out = Vec::with_capacity(u * v * w);
        for a in 0..u {
            for b in 0..v {
                for c in 0..w {
                    out.push([a, b, c]);
                }
            }
        }
        out
    }
}
