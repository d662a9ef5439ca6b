//! Product encodings of two variables and the marginal, conditional and
//! partial-derivative algebra built on binding.

use std::sync::Arc;

use rayon::prelude::*;

use crate::calculus::{encoding_derivative, DerivativeSpec};
use crate::error::{invalid, HdError, Result};
use crate::normalization::NormalizedEncoder;
use crate::quadrature::Quadrature;
use crate::vector::HyperVector;

pub type Bivariate = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

/// Order of the double sum in [`forward2_ordered`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SumOrder {
    XOuter,
    YOuter,
}

/// `Δ(x, y) = Δ_x(x) ⊗ Δ_y(y)` for two independently seeded encoders.
#[derive(Clone, Debug)]
pub struct ProductEncoder {
    enc_x: NormalizedEncoder,
    enc_y: NormalizedEncoder,
}

impl ProductEncoder {
    pub fn new(enc_x: NormalizedEncoder, enc_y: NormalizedEncoder) -> Result<Self> {
        if enc_x.dim() != enc_y.dim() {
            return Err(HdError::DimensionMismatch {
                left: enc_x.dim(),
                right: enc_y.dim(),
            });
        }
        if enc_x.base().seed() == enc_y.base().seed() {
            return Err(invalid("seed", "the two axes need different seeds"));
        }
        Ok(Self { enc_x, enc_y })
    }

    pub fn enc_x(&self) -> &NormalizedEncoder {
        &self.enc_x
    }

    pub fn enc_y(&self) -> &NormalizedEncoder {
        &self.enc_y
    }

    pub fn axis(&self, axis: Axis) -> &NormalizedEncoder {
        match axis {
            Axis::X => &self.enc_x,
            Axis::Y => &self.enc_y,
        }
    }

    pub fn dim(&self) -> usize {
        self.enc_x.dim()
    }

    pub fn encode_pair(&self, x: f64, y: f64) -> Result<HyperVector> {
        self.enc_x.encode_normalized(x)?.bind(&self.enc_y.encode_normalized(y)?)
    }

    /// `k_x(x, x') k_y(y, y') / (n_x(x) n_x(x') n_y(y) n_y(y'))`.
    pub fn expected_kernel(&self, (x, y): (f64, f64), (x2, y2): (f64, f64)) -> f64 {
        self.enc_x.expected_kernel(x, x2) * self.enc_y.expected_kernel(y, y2)
    }
}

/// Left-to-right binding of several vectors.
pub fn bind_all(vectors: &[HyperVector]) -> Result<HyperVector> {
    let (first, rest) = vectors.split_first().ok_or(HdError::EmptySystem)?;
    rest.iter().try_fold(first.clone(), |acc, v| acc.bind(v))
}

/// `F = Σ_i Σ_j w_i w_j f(x_i, y_j) Δ(x_i, y_j)`, `x` outer.
pub fn forward2(f: &Bivariate, pe: &ProductEncoder, qx: &Quadrature, qy: &Quadrature) -> Result<HyperVector> {
    forward2_ordered(f, pe, qx, qy, SumOrder::XOuter)
}

pub fn forward2_ordered(
    f: &Bivariate,
    pe: &ProductEncoder,
    qx: &Quadrature,
    qy: &Quadrature,
    order: SumOrder,
) -> Result<HyperVector> {
    let (ex, ey) = (&pe.enc_x, &pe.enc_y);
    for (e, q) in [(ex, qx), (ey, qy)] {
        let n = q.nodes();
        e.domain().check(n[0])?;
        e.domain().check(n[n.len() - 1])?;
    }
    let (xs, ys) = (qx.nodes(), qy.nodes());
    let mut coeffs = vec![0.0; xs.len() * ys.len()];
    for (a, (&x, wx)) in xs.iter().zip(qx.weights()).enumerate() {
        let nx = ex.norm().eval(x);
        for (b, (&y, wy)) in ys.iter().zip(qy.weights()).enumerate() {
            let v = f(x, y);
            if !v.is_finite() {
                return Err(invalid("f", format!("non-finite value {v} at ({x}, {y})")));
            }
            coeffs[a * ys.len() + b] = wx * wy * v / (nx * ey.norm().eval(y));
        }
    }
    let (bx, by) = (ex.base(), ey.base());
    let values = (0..pe.dim())
        .into_par_iter()
        .map(|i| {
            let px: Vec<f64> = xs.iter().map(|&x| bx.component(i, x)).collect();
            let py: Vec<f64> = ys.iter().map(|&y| by.component(i, y)).collect();
            let mut s = 0.0;
            match order {
                SumOrder::XOuter => {
                    for (a, pa) in px.iter().enumerate() {
                        let row = &coeffs[a * ys.len()..(a + 1) * ys.len()];
                        for (c, pb) in row.iter().zip(&py) {
                            s += c * (pa * pb);
                        }
                    }
                }
                SumOrder::YOuter => {
                    for (b, pb) in py.iter().enumerate() {
                        for (a, pa) in px.iter().enumerate() {
                            s += coeffs[a * ys.len() + b] * (pa * pb);
                        }
                    }
                }
            }
            s
        })
        .collect();
    Ok(HyperVector::from_raw(values))
}

/// `f̃(x, y) = ⟨F, Δ(x, y)⟩`.
pub fn inverse_eval2(f: &HyperVector, pe: &ProductEncoder, x: f64, y: f64) -> Result<f64> {
    f.inner_scaled(&pe.encode_pair(x, y)?)
}

/// `∫_Y f̃(x, y) dy = ⟨F, Δ_x(x) ⊗ 𝟙_Y⟩`.
pub fn marginal_eval(f: &HyperVector, pe: &ProductEncoder, x: f64, one_y: &HyperVector) -> Result<f64> {
    f.inner_scaled(&pe.enc_x.encode_normalized(x)?.bind(one_y)?)
}

/// The three groupings `⟨F, Δ_x(x) ⊗ 𝟙_Y⟩`, `⟨F ⊗ Δ_x(x), 𝟙_Y⟩` and
/// `⟨F ⊗ 𝟙_Y, Δ_x(x)⟩` of the marginal.
pub fn marginal_forms(f: &HyperVector, pe: &ProductEncoder, x: f64, one_y: &HyperVector) -> Result<[f64; 3]> {
    let dx = pe.enc_x.encode_normalized(x)?;
    Ok([
        f.inner_scaled(&dx.bind(one_y)?)?,
        f.bind(&dx)?.inner_scaled(one_y)?,
        f.bind(one_y)?.inner_scaled(&dx)?,
    ])
}

/// `F ⊗ Δ_axis(value)`, to be read with the other axis's encoder.
pub fn condition(f: &HyperVector, pe: &ProductEncoder, axis: Axis, value: f64) -> Result<HyperVector> {
    f.bind(&pe.axis(axis).encode_normalized(value)?)
}

/// `∂f̃/∂axis (x, y)`.
pub fn partial_derivative_eval(
    f: &HyperVector,
    pe: &ProductEncoder,
    x: f64,
    y: f64,
    wrt: Axis,
    spec: DerivativeSpec,
) -> Result<f64> {
    let probe = match wrt {
        Axis::X => encoding_derivative(&pe.enc_x, x, spec)?.bind(&pe.enc_y.encode_normalized(y)?)?,
        Axis::Y => pe
            .enc_x
            .encode_normalized(x)?
            .bind(&encoding_derivative(&pe.enc_y, y, spec)?)?,
    };
    f.inner_scaled(&probe)
}

/// Mean over `points` of `|(1/D) Σ_i φ_i(x)|` for the unnormalized sample.
/// For a zero-centred process each term is of order `1/√D`.
pub fn centering_statistic(enc: &NormalizedEncoder, points: &[f64]) -> Result<f64> {
    if points.is_empty() {
        return Err(HdError::EmptySystem);
    }
    let base = enc.base();
    let total: f64 = points
        .iter()
        .map(|&x| {
            enc.domain().check(x)?;
            let s: f64 = (0..enc.dim()).map(|i| base.component(i, x)).sum();
            Ok((s / enc.dim() as f64).abs())
        })
        .collect::<Result<Vec<f64>>>()?
        .iter()
        .sum();
    Ok(total / points.len() as f64)
}

/// Computes [`centering_statistic`] and logs a warning when it exceeds
/// `4/√D`. Returns the statistic and whether it passed.
pub fn check_centering(enc: &NormalizedEncoder, points: &[f64]) -> Result<(f64, bool)> {
    let stat = centering_statistic(enc, points)?;
    let ok = stat <= 4.0 / (enc.dim() as f64).sqrt();
    if !ok {
        log::warn!("encoding is not zero-centred: mean |component average| = {stat}");
    }
    Ok((stat, ok))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encodings::{Domain1D, Encoder, IntervalStepEncoder};

    fn enc(seed: u64, dim: usize) -> NormalizedEncoder {
        let d = Domain1D::new(0.0, 1.0).unwrap();
        let base: Arc<dyn Encoder> = Arc::new(IntervalStepEncoder::new(d, 0.25, dim, seed).unwrap());
        NormalizedEncoder::with_constant(base, 0.5).unwrap()
    }

    #[test]
    fn shared_seed_is_refused() {
        assert!(ProductEncoder::new(enc(1, 16), enc(1, 16)).is_err());
        assert!(ProductEncoder::new(enc(1, 16), enc(2, 8)).is_err());
        assert!(ProductEncoder::new(enc(1, 16), enc(2, 16)).is_ok());
    }

    #[test]
    fn sum_order_does_not_matter() {
        let pe = ProductEncoder::new(enc(1, 64), enc(2, 64)).unwrap();
        let d = Domain1D::new(0.0, 1.0).unwrap();
        let q = Quadrature::midpoint(d, 30).unwrap();
        let f: Bivariate = Arc::new(|x, y| (3.0 * x).sin() + x * y);
        let a = forward2_ordered(&f, &pe, &q, &q, SumOrder::XOuter).unwrap();
        let b = forward2_ordered(&f, &pe, &q, &q, SumOrder::YOuter).unwrap();
        let scale = a.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for (u, v) in a.iter().zip(b.iter()) {
            assert!((u - v).abs() <= 1e-12 * scale);
        }
    }

    #[test]
    fn condition_matches_pair_evaluation() {
        let pe = ProductEncoder::new(enc(3, 128), enc(4, 128)).unwrap();
        let f = HyperVector::new((0..128).map(|i| ((i * 7 % 13) as f64) - 6.0).collect()).unwrap();
        let c = condition(&f, &pe, Axis::X, 0.3).unwrap();
        let lhs = c.inner_scaled(&pe.enc_y().encode_normalized(0.8).unwrap()).unwrap();
        let rhs = inverse_eval2(&f, &pe, 0.3, 0.8).unwrap();
        assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs.abs()));
    }

    #[test]
    fn bind_all_folds() {
        let a = HyperVector::new(vec![1.0, 2.0]).unwrap();
        let b = HyperVector::new(vec![3.0, -1.0]).unwrap();
        let c = HyperVector::new(vec![0.5, 4.0]).unwrap();
        assert_eq!(bind_all(&[a, b, c]).unwrap().as_slice(), &[1.5, -8.0]);
        assert!(bind_all(&[]).is_err());
    }
}
