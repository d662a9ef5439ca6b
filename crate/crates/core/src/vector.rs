//! Dense hypervectors with the dimension-scaled inner product.
//!
//! All reductions run sequentially in ascending index order so that results
//! are bit-reproducible regardless of how callers parallelize around them.

use std::ops::Index;

use crate::error::{HdError, Result};

/// A `D`-dimensional real vector.
#[derive(Clone, Debug, PartialEq)]
pub struct HyperVector {
    values: Vec<f64>,
}

impl HyperVector {
    /// Wraps `values`, rejecting empty input and non-finite entries.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(crate::error::invalid("dim", "must be at least 1"));
        }
        if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(HdError::NonFinite { x: i as f64, value: *v });
        }
        Ok(Self { values })
    }

    /// Internal constructor for values already known to be finite.
    pub(crate) fn from_raw(values: Vec<f64>) -> Self {
        debug_assert!(!values.is_empty());
        Self { values }
    }

    pub fn zeros(dim: usize) -> Self {
        Self::from_raw(vec![0.0; dim.max(1)])
    }

    pub fn ones(dim: usize) -> Self {
        Self::from_raw(vec![1.0; dim.max(1)])
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.values
    }

    pub fn iter(&self) -> std::slice::Iter<'_, f64> {
        self.values.iter()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(HdError::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(())
    }

    /// `(1/D) Σ u_i v_i`, summed in ascending index order.
    pub fn inner_scaled(&self, other: &Self) -> Result<f64> {
        self.check(other)?;
        Ok(dot(&self.values, &other.values) / self.dim() as f64)
    }

    /// Elementwise product (binding).
    pub fn bind(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self::from_raw(
            self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect(),
        ))
    }

    /// `alpha * self + beta * other`.
    pub fn axpy(alpha: f64, u: &Self, beta: f64, v: &Self) -> Result<Self> {
        u.check(v)?;
        Ok(Self::from_raw(
            u.values
                .iter()
                .zip(&v.values)
                .map(|(a, b)| alpha * a + beta * b)
                .collect(),
        ))
    }

    pub fn scale(&self, alpha: f64) -> Self {
        Self::from_raw(self.values.iter().map(|v| alpha * v).collect())
    }

    /// In-place `self += alpha * other`.
    pub fn add_scaled(&mut self, alpha: f64, other: &Self) -> Result<()> {
        self.check(other)?;
        for (a, b) in self.values.iter_mut().zip(&other.values) {
            *a += alpha * b;
        }
        Ok(())
    }

    /// Root-mean-square of the components.
    pub fn rms(&self) -> f64 {
        (dot(&self.values, &self.values) / self.dim() as f64).sqrt()
    }
}

impl Index<usize> for HyperVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.values[i]
    }
}

/// Plain sequential dot product.
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (x, y) in a.iter().zip(b) {
        acc += x * y;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn hv(v: &[f64]) -> HyperVector {
        HyperVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn inner_scaled_examples() {
        assert_eq!(HyperVector::ones(4).inner_scaled(&HyperVector::ones(4)).unwrap(), 1.0);
        assert_eq!(HyperVector::ones(4).inner_scaled(&HyperVector::zeros(4)).unwrap(), 0.0);
        assert_eq!(
            hv(&[1., -1., 1., -1.]).inner_scaled(&HyperVector::ones(4)).unwrap(),
            0.0
        );
    }

    #[test]
    fn bind_examples() {
        let u = hv(&[0.3, -2.0, 5.0]);
        assert_eq!(u.bind(&HyperVector::ones(3)).unwrap(), u);
        assert_eq!(HyperVector::zeros(3).bind(&u).unwrap(), HyperVector::zeros(3));
        assert_eq!(hv(&[2., 3.]).bind(&hv(&[4., 5.])).unwrap(), hv(&[8., 15.]));
    }

    #[test]
    fn axpy_examples() {
        let u = hv(&[1.5, -2.0]);
        let v = hv(&[7.0, 0.25]);
        assert_eq!(HyperVector::axpy(1., &u, 0., &v).unwrap(), u);
        assert_eq!(HyperVector::axpy(0., &u, 1., &v).unwrap(), v);
        assert_eq!(
            HyperVector::axpy(2., &hv(&[1., 1.]), 3., &hv(&[1., 0.])).unwrap(),
            hv(&[5., 2.])
        );
    }

    #[test]
    fn mismatched_dims_are_rejected() {
        let u = HyperVector::ones(3);
        let v = HyperVector::ones(4);
        assert!(matches!(u.inner_scaled(&v), Err(HdError::DimensionMismatch { .. })));
        assert!(u.bind(&v).is_err());
        assert!(HyperVector::axpy(1., &u, 1., &v).is_err());
    }

    #[test]
    fn rejects_nan_and_empty() {
        assert!(HyperVector::new(vec![]).is_err());
        assert!(HyperVector::new(vec![1.0, f64::NAN]).is_err());
        assert!(HyperVector::new(vec![f64::INFINITY]).is_err());
    }

    fn vec_pair(len: usize) -> impl Strategy<Value = (Vec<f64>, Vec<f64>, Vec<f64>)> {
        (
            prop::collection::vec(-10.0f64..10.0, len),
            prop::collection::vec(-10.0f64..10.0, len),
            prop::collection::vec(-10.0f64..10.0, len),
        )
    }

    proptest! {
        #[test]
        fn symmetry_is_exact((u, v, _) in (1usize..40).prop_flat_map(vec_pair)) {
            let (u, v) = (hv(&u), hv(&v));
            prop_assert_eq!(u.inner_scaled(&v).unwrap(), v.inner_scaled(&u).unwrap());
        }

        #[test]
        fn bilinearity(
            (u, w, v) in (1usize..40).prop_flat_map(vec_pair),
            a in -3.0f64..3.0,
            b in -3.0f64..3.0,
        ) {
            let (u, w, v) = (hv(&u), hv(&w), hv(&v));
            let lhs = HyperVector::axpy(a, &u, b, &w).unwrap().inner_scaled(&v).unwrap();
            let rhs = a * u.inner_scaled(&v).unwrap() + b * w.inner_scaled(&v).unwrap();
            let scale = (a.abs() * u.rms() + b.abs() * w.rms()) * v.rms() + 1e-300;
            prop_assert!((lhs - rhs).abs() <= 1e-12 * scale);
        }

        #[test]
        fn bind_distributes_over_axpy(
            (u, w, x) in (1usize..40).prop_flat_map(vec_pair),
            a in -3.0f64..3.0,
            b in -3.0f64..3.0,
        ) {
            let (u, w, x) = (hv(&u), hv(&w), hv(&x));
            let lhs = HyperVector::axpy(a, &u, b, &w).unwrap().bind(&x).unwrap();
            let rhs = HyperVector::axpy(a, &u.bind(&x).unwrap(), b, &w.bind(&x).unwrap()).unwrap();
            for (l, r) in lhs.iter().zip(rhs.iter()) {
                prop_assert!((l - r).abs() <= 1e-12 * (1.0 + l.abs()));
            }
        }

        // Integer-valued components make every product exact, so the
        // reassociation in <u*x, v> = <u, x*v> must hold bitwise.
        #[test]
        fn bind_moves_across_inner_product_exactly(
            u in prop::collection::vec(-50i32..50, 16),
            x in prop::collection::vec(-50i32..50, 16),
            v in prop::collection::vec(-50i32..50, 16),
        ) {
            let f = |s: &[i32]| hv(&s.iter().map(|&k| k as f64).collect::<Vec<_>>());
            let (u, x, v) = (f(&u), f(&x), f(&v));
            let lhs = u.bind(&x).unwrap().inner_scaled(&v).unwrap();
            let rhs = u.inner_scaled(&x.bind(&v).unwrap()).unwrap();
            prop_assert_eq!(lhs.to_bits(), rhs.to_bits());
        }

        #[test]
        fn bind_moves_across_inner_product_reals(
            (u, x, v) in (1usize..40).prop_flat_map(vec_pair),
        ) {
            let (u, x, v) = (hv(&u), hv(&x), hv(&v));
            let lhs = u.bind(&x).unwrap().inner_scaled(&v).unwrap();
            let rhs = u.inner_scaled(&x.bind(&v).unwrap()).unwrap();
            let scale: f64 = u.iter().zip(x.iter()).zip(v.iter())
                .map(|((a, b), c)| (a * b * c).abs()).sum::<f64>() / u.dim() as f64;
            prop_assert!((lhs - rhs).abs() <= 1e-14 * (scale + 1e-300));
        }
    }
}
