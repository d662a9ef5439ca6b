mod common;

use std::sync::Arc;

use common::{cross_moment, interior, interval, probe_mean, probe_moment, sigmoid, unit};
use hdtransform::calculus::{stencil, DerivativeMethod, DerivativeSpec};
use hdtransform::encodings::prf::{mix64, rademacher, unit_open};
use hdtransform::multivariate::{
    centering_statistic, check_centering, condition, forward2, forward2_ordered, inverse_eval2, marginal_eval,
    partial_derivative_eval, Axis, Bivariate, ProductEncoder, SumOrder,
};
use hdtransform::transform::{inverse_eval, smooth_oracle, transform_indicator};
use hdtransform::{NormalizedEncoder, Quadrature, SampledFunction};

fn pair(lambda: f64, dim: usize, seed: u64) -> ProductEncoder {
    ProductEncoder::new(
        interval(unit(), lambda, dim, seed),
        interval(unit(), lambda, dim, seed + 1000),
    )
    .unwrap()
}

fn sq_norm(enc: &NormalizedEncoder, x: f64) -> f64 {
    enc.norm().eval(x).powi(2)
}

#[test]
fn self_inner_of_a_pair_matches_the_kernel() {
    let dim = 10_000;
    let pe = ProductEncoder::new(sigmoid(unit(), 0.2, dim, 1), sigmoid(unit(), 0.2, dim, 2)).unwrap();
    for (x, y) in [(0.1, 0.9), (0.5, 0.5), (0.0, 1.0), (0.33, 0.71)] {
        let v = pe.encode_pair(x, y).unwrap();
        let got = v.inner_scaled(&v).unwrap() * sq_norm(pe.enc_x(), x) * sq_norm(pe.enc_y(), y);
        let expect = pe.enc_x().base().expected_kernel(x, x) * pe.enc_y().base().expected_kernel(y, y);
        assert!(
            (got - expect).abs() <= 4.0 / (dim as f64).sqrt(),
            "({x}, {y}): {got} vs {expect}"
        );
    }
}

#[test]
fn pairs_far_apart_in_x_are_uncorrelated() {
    let dim = 10_000;
    let pe = pair(0.1, dim, 3);
    let (x, x2, y) = (0.2, 0.35, 0.6);
    assert_eq!(pe.expected_kernel((x, y), (x2, y)), 0.0);
    let got = pe
        .encode_pair(x, y)
        .unwrap()
        .inner_scaled(&pe.encode_pair(x2, y).unwrap())
        .unwrap();
    let raw = got * pe.enc_x().norm().eval(x) * pe.enc_x().norm().eval(x2) * sq_norm(pe.enc_y(), y);
    assert!(raw.abs() <= 4.0 / (dim as f64).sqrt(), "{raw}");
}

#[test]
fn product_kernel_concentrates() {
    let dim = 10_000;
    let pe = pair(0.25, dim, 5);
    let bound = 4.0 / (dim as f64).sqrt();
    let mut state = 77u64;
    let mut next = || {
        state = mix64(state);
        unit_open(state)
    };
    let mut hits = 0;
    for _ in 0..500 {
        let (x, y, x2, y2) = (next(), next(), next(), next());
        let got = pe
            .encode_pair(x, y)
            .unwrap()
            .inner_scaled(&pe.encode_pair(x2, y2).unwrap())
            .unwrap();
        let scale = pe.enc_x().norm().eval(x)
            * pe.enc_x().norm().eval(x2)
            * pe.enc_y().norm().eval(y)
            * pe.enc_y().norm().eval(y2);
        if (got - pe.expected_kernel((x, y), (x2, y2))).abs() * scale <= bound {
            hits += 1;
        }
    }
    assert!(hits >= 495, "{hits}/500 within 4/√D");
}

#[test]
fn sum_order_does_not_change_the_transform() {
    let pe = pair(0.2, 500, 8);
    let q = Quadrature::midpoint(unit(), 40).unwrap();
    let f: Bivariate = Arc::new(|x, y| (3.0 * x).sin() + x * y * y);
    let a = forward2_ordered(&f, &pe, &q, &q, SumOrder::XOuter).unwrap();
    let b = forward2_ordered(&f, &pe, &q, &q, SumOrder::YOuter).unwrap();
    let scale = a.rms();
    for (u, v) in a.iter().zip(b.iter()) {
        assert!((u - v).abs() <= 1e-12 * scale);
    }
}

type Term<'a> = (&'a dyn Fn(f64) -> f64, &'a dyn Fn(f64) -> f64);

struct Separable {
    pe: ProductEncoder,
    q: Quadrature,
}

impl Separable {
    fn new(dim: usize) -> Self {
        Self {
            pe: pair(0.1, dim, 11),
            q: Quadrature::midpoint(unit(), 100).unwrap(),
        }
    }

    /// Predicted standard deviation of `⟨F, a ⊗ b⟩` for
    /// `F = Σ_t H(g_t ⊗ h_t)` with probe stencils `a` on x and `b` on y.
    fn noise(&self, terms: &[Term], a: (&[f64], &[f64]), b: (&[f64], &[f64])) -> f64 {
        let (ex, ey, q) = (self.pe.enc_x(), self.pe.enc_y(), &self.q);
        let (pa, pb) = (probe_moment(ex, a.0, a.1), probe_moment(ey, b.0, b.1));
        let mut second = 0.0;
        let mut mean = 0.0;
        for (g, h) in terms {
            mean += probe_mean(ex, *g, q, a.0, a.1) * probe_mean(ey, *h, q, b.0, b.1);
            for (g2, h2) in terms {
                second += cross_moment(ex, *g, *g2, q) * pa * cross_moment(ey, *h, *h2, q) * pb;
            }
        }
        ((second - mean * mean).max(0.0) / self.pe.dim() as f64).sqrt()
    }
}

fn rms_z(z: &[f64]) -> f64 {
    (z.iter().map(|v| v * v).sum::<f64>() / z.len() as f64).sqrt()
}

#[test]
fn separable_function_factorizes_through_the_oracles() {
    let s = Separable::new(50_000);
    let g = |x: f64| x;
    let h = |y: f64| 1.0 + y;
    let f: Bivariate = Arc::new(move |x, y| g(x) * h(y));
    let fv = forward2(&f, &s.pe, &s.q, &s.q).unwrap();
    let (gs, hs) = (SampledFunction::new(g), SampledFunction::new(h));
    let mut z = Vec::new();
    for x in interior(unit(), 0.1, 5) {
        for y in interior(unit(), 0.1, 5) {
            let oracle =
                smooth_oracle(&gs, s.pe.enc_x(), x, &s.q).unwrap() * smooth_oracle(&hs, s.pe.enc_y(), y, &s.q).unwrap();
            let sigma = s.noise(&[(&g, &h)], (&[x], &[1.0]), (&[y], &[1.0]));
            z.push((inverse_eval2(&fv, &s.pe, x, y).unwrap() - oracle) / sigma);
        }
    }
    assert!(rms_z(&z) <= 1.5, "rms deviation {} standard deviations", rms_z(&z));
}

#[test]
#[ignore = "bivariate noise at D = 50,000 is about 0.04, comparable to the tolerance"]
fn separable_function_factorizes_pointwise() {
    let s = Separable::new(50_000);
    let f: Bivariate = Arc::new(|x, y| x * (1.0 + y));
    let fv = forward2(&f, &s.pe, &s.q, &s.q).unwrap();
    let (gs, hs) = (SampledFunction::new(|x| x), SampledFunction::new(|y| 1.0 + y));
    for x in interior(unit(), 0.1, 7) {
        for y in interior(unit(), 0.1, 7) {
            let oracle =
                smooth_oracle(&gs, s.pe.enc_x(), x, &s.q).unwrap() * smooth_oracle(&hs, s.pe.enc_y(), y, &s.q).unwrap();
            let got = inverse_eval2(&fv, &s.pe, x, y).unwrap();
            assert!((got - oracle).abs() <= 0.05, "({x}, {y}): {got} vs {oracle}");
        }
    }
}

#[test]
fn marginal_of_a_function_of_x_alone() {
    let s = Separable::new(50_000);
    let g = |x: f64| (4.0 * x).sin() + 0.5;
    let f: Bivariate = Arc::new(move |x, _| g(x));
    let fv = forward2(&f, &s.pe, &s.q, &s.q).unwrap();
    let one_y = transform_indicator(s.pe.enc_y(), 0.0, 1.0, &s.q).unwrap();
    let gs = SampledFunction::new(g);
    let measure = 1.0;
    for x in interior(unit(), 0.1, 15) {
        let got = marginal_eval(&fv, &s.pe, x, &one_y).unwrap();
        let expect = measure * smooth_oracle(&gs, s.pe.enc_x(), x, &s.q).unwrap();
        assert!((got - expect).abs() <= 0.05 * measure, "x = {x}: {got} vs {expect}");
    }
}

#[test]
fn conditioning_recovers_the_other_factor() {
    let s = Separable::new(50_000);
    let g = |x: f64| x * x;
    let h = |y: f64| 2.0 - y;
    let f: Bivariate = Arc::new(move |x, y| g(x) * h(y));
    let fv = forward2(&f, &s.pe, &s.q, &s.q).unwrap();
    let y0 = 0.4;
    let cond = condition(&fv, &s.pe, Axis::Y, y0).unwrap();
    let scale = smooth_oracle(&SampledFunction::new(h), s.pe.enc_y(), y0, &s.q).unwrap();
    let gs = SampledFunction::new(g);
    let mut z = Vec::new();
    for x in interior(unit(), 0.1, 25) {
        let got = inverse_eval(&cond, s.pe.enc_x(), x).unwrap();
        let expect = scale * smooth_oracle(&gs, s.pe.enc_x(), x, &s.q).unwrap();
        z.push((got - expect) / s.noise(&[(&g, &h)], (&[x], &[1.0]), (&[y0], &[1.0])));
    }
    assert!(rms_z(&z) <= 1.5, "rms deviation {} standard deviations", rms_z(&z));
}

#[test]
fn partial_derivative_of_a_sum() {
    let s = Separable::new(50_000);
    let f: Bivariate = Arc::new(|x, y| x + y);
    let fv = forward2(&f, &s.pe, &s.q, &s.q).unwrap();
    let spec = DerivativeSpec::default_for(1, 0.1).unwrap();
    let DerivativeMethod::FiniteDifference { h } = spec.method else {
        unreachable!()
    };
    let id = |x: f64| x;
    let one = |_: f64| 1.0;
    let (ex, ey) = (s.pe.enc_x(), s.pe.enc_y());
    let mut z = Vec::new();
    for x in interior(unit(), 0.2, 5) {
        let st = stencil(unit(), x, 1, h).unwrap();
        let dx = |f: &dyn Fn(f64) -> f64| probe_mean(ex, f, &s.q, &st.points, &st.weights);
        for y in interior(unit(), 0.2, 5) {
            let (my1, myy) = (
                probe_mean(ey, &one, &s.q, &[y], &[1.0]),
                probe_mean(ey, &id, &s.q, &[y], &[1.0]),
            );
            let oracle = dx(&id) * my1 + dx(&one) * myy;
            assert!((oracle - 1.0).abs() <= 0.1, "oracle ({x}, {y}) = {oracle}");
            let got = partial_derivative_eval(&fv, &s.pe, x, y, Axis::X, spec).unwrap();
            let sigma = s.noise(&[(&id, &one), (&one, &id)], (&st.points, &st.weights), (&[y], &[1.0]));
            z.push((got - oracle) / sigma);
        }
    }
    assert!(rms_z(&z) <= 1.5, "rms deviation {} standard deviations", rms_z(&z));
}

#[test]
#[ignore = "finite-difference noise of a bivariate step encoding at D = 50,000 exceeds 0.1"]
fn partial_derivative_of_a_sum_pointwise() {
    let s = Separable::new(50_000);
    let f: Bivariate = Arc::new(|x, y| x + y);
    let fv = forward2(&f, &s.pe, &s.q, &s.q).unwrap();
    let spec = DerivativeSpec::default_for(1, 0.1).unwrap();
    for x in interior(unit(), 0.2, 5) {
        for y in interior(unit(), 0.2, 5) {
            let got = partial_derivative_eval(&fv, &s.pe, x, y, Axis::X, spec).unwrap();
            assert!((got - 1.0).abs() <= 0.1, "({x}, {y}): {got}");
        }
    }
}

#[test]
fn step_encodings_are_zero_centred() {
    let enc = interval(unit(), 0.05, 10_000, 21);
    let pts = unit().linspace(50);
    let (stat, ok) = check_centering(&enc, &pts).unwrap();
    assert!(ok, "{stat}");
    assert_eq!(stat, centering_statistic(&enc, &pts).unwrap());
    // Signs drawn from the same generator average out at the same rate.
    let mean: f64 = (0..10_000u64).map(|i| rademacher(mix64(i))).sum::<f64>() / 10_000.0;
    assert!(mean.abs() <= 4.0 / 100.0);
}
