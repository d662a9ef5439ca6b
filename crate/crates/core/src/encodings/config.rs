//! Serializable encoder parameters.
//!
//! Schema (TOML keys): `type` (interval | sigmoid | periodic | discrete), `a`,
//! `b`, `lambda`, `dim`, `seed`, `tau`, `epsilon`, `n_cells`, `sizes`,
//! `anchor_origin`, `mode`. Unused keys for a given type are omitted.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{
    DiscreteMode, DiscreteTripleEncoder, Domain1D, Encoder, EpsilonMixed, IntervalStepEncoder, PeriodicEncoder,
    SigmoidEncoder,
};
use crate::error::{invalid, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EncoderType {
    Interval,
    Sigmoid,
    Periodic,
    Discrete,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EncoderConfig {
    #[serde(rename = "type")]
    pub kind: EncoderType,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    pub dim: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_cells: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sizes: Option<[usize; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub anchor_origin: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<DiscreteMode>,
}

impl EncoderConfig {
    pub(crate) fn base(kind: EncoderType, domain: Domain1D, lambda: f64, dim: usize, seed: u64) -> Self {
        Self {
            kind,
            a: Some(domain.a()),
            b: Some(domain.b()),
            lambda: Some(lambda),
            dim,
            seed,
            tau: None,
            epsilon: None,
            n_cells: None,
            sizes: None,
            anchor_origin: None,
            mode: None,
        }
    }

    fn domain(&self) -> Result<Domain1D> {
        match (self.a, self.b) {
            (Some(a), Some(b)) => Domain1D::new(a, b),
            _ => Err(invalid("a/b", "interval encoders need both endpoints")),
        }
    }

    fn lambda(&self) -> Result<f64> {
        self.lambda
            .ok_or_else(|| invalid("lambda", "required for this encoder type"))
    }

    /// Builds an interval encoder, wrapping it in [`EpsilonMixed`] when
    /// `epsilon` is set.
    pub fn build(&self) -> Result<Arc<dyn Encoder>> {
        let enc: Arc<dyn Encoder> = match self.kind {
            EncoderType::Interval => {
                let d = self.domain()?;
                Arc::new(IntervalStepEncoder::with_origin(
                    d,
                    self.lambda()?,
                    self.dim,
                    self.seed,
                    self.anchor_origin.unwrap_or(d.a()),
                )?)
            }
            EncoderType::Sigmoid => {
                let d = self.domain()?;
                let lambda = self.lambda()?;
                let step = IntervalStepEncoder::with_origin(
                    d,
                    lambda,
                    self.dim,
                    self.seed,
                    self.anchor_origin.unwrap_or(d.a()),
                )?;
                Arc::new(SigmoidEncoder::from_step(step, self.tau.unwrap_or(lambda / 20.0))?)
            }
            EncoderType::Periodic => {
                let d = self.domain()?;
                let n_cells = self
                    .n_cells
                    .ok_or_else(|| invalid("n_cells", "required for periodic encoders"))?;
                Arc::new(PeriodicEncoder::new(d, n_cells, self.dim, self.seed)?)
            }
            EncoderType::Discrete => return Err(invalid("type", "discrete encoders are built with build_discrete")),
        };
        match self.epsilon {
            Some(eps) if eps > 0.0 => Ok(Arc::new(EpsilonMixed::new(enc, eps)?)),
            Some(eps) if eps < 0.0 => Err(invalid("epsilon", format!("must lie in [0, 1], got {eps}"))),
            _ => Ok(enc),
        }
    }

    pub fn build_discrete(&self) -> Result<DiscreteTripleEncoder> {
        if self.kind != EncoderType::Discrete {
            return Err(invalid("type", "expected `discrete`"));
        }
        let sizes = self
            .sizes
            .ok_or_else(|| invalid("sizes", "required for discrete encoders"))?;
        DiscreteTripleEncoder::new(sizes, self.dim, self.seed, self.mode.unwrap_or(DiscreteMode::Sum))
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| invalid("config", e.to_string()))
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| invalid("config", e.to_string()))
    }
}

impl DiscreteTripleEncoder {
    pub fn config(&self) -> EncoderConfig {
        EncoderConfig {
            kind: EncoderType::Discrete,
            a: None,
            b: None,
            lambda: None,
            dim: self.dim(),
            seed: self.seed(),
            tau: None,
            epsilon: None,
            n_cells: None,
            sizes: Some(self.sizes()),
            anchor_origin: None,
            mode: Some(self.mode()),
        }
    }
}
