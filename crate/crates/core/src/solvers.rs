//! Linear differential and integral equations as ridge regression.
//!
//! Every constraint `⟨F, r⟩ = b` on the transform `F` is one row. With rows
//! `R = [r_1 … r_m]` the solver minimizes
//! `Σ_i (⟨F, r_i⟩ - b_i)² + λ_r ⟨F, F⟩`, where `⟨·,·⟩` is the inner product
//! scaled by `1/D`. The minimizer is `F = Rᵀ α` with `(G + λ_r I) α = b` and
//! `G_ik = ⟨r_i, r_k⟩`, so only an `m × m` system is factorized.

use std::sync::Arc;

use rayon::prelude::*;

use crate::calculus::{encoding_derivative, DerivativeMethod, DerivativeSpec};
use crate::error::{invalid, HdError, Result};
use crate::multivariate::ProductEncoder;
use crate::normalization::NormalizedEncoder;
use crate::transform::SampledFunction;
use crate::vector::{dot, HyperVector};

/// The constraint `⟨F, r⟩ = target`.
#[derive(Clone, Debug, PartialEq)]
pub struct FunctionalRow {
    pub r: HyperVector,
    pub target: f64,
}

impl FunctionalRow {
    pub fn scaled(&self, alpha: f64) -> Self {
        Self {
            r: self.r.scale(alpha),
            target: alpha * self.target,
        }
    }
}

#[derive(Clone, Debug)]
pub struct RidgeProblem {
    rows: Vec<FunctionalRow>,
    ridge: f64,
}

impl RidgeProblem {
    pub fn new(rows: Vec<FunctionalRow>, ridge: f64) -> Result<Self> {
        let first = rows.first().ok_or(HdError::EmptySystem)?;
        if let Some(bad) = rows.iter().find(|r| r.r.dim() != first.r.dim()) {
            return Err(HdError::DimensionMismatch {
                left: first.r.dim(),
                right: bad.r.dim(),
            });
        }
        if !(ridge.is_finite() && ridge >= 0.0) {
            return Err(invalid("ridge", format!("must be non-negative, got {ridge}")));
        }
        if let Some(r) = rows.iter().find(|r| !r.target.is_finite()) {
            return Err(invalid("target", format!("non-finite target {}", r.target)));
        }
        Ok(Self { rows, ridge })
    }

    pub fn rows(&self) -> &[FunctionalRow] {
        &self.rows
    }

    pub fn ridge(&self) -> f64 {
        self.ridge
    }

    pub fn dim(&self) -> usize {
        self.rows[0].r.dim()
    }

    pub fn push(&mut self, row: FunctionalRow) -> Result<()> {
        if row.r.dim() != self.dim() {
            return Err(HdError::DimensionMismatch {
                left: self.dim(),
                right: row.r.dim(),
            });
        }
        self.rows.push(row);
        Ok(())
    }

    /// `G_ik = ⟨r_i, r_k⟩`, row-major.
    pub fn gram(&self) -> Vec<f64> {
        let m = self.rows.len();
        let inv_d = 1.0 / self.dim() as f64;
        let upper: Vec<Vec<f64>> = (0..m)
            .into_par_iter()
            .map(|i| {
                let ri = self.rows[i].r.as_slice();
                (i..m).map(|k| dot(ri, self.rows[k].r.as_slice()) * inv_d).collect()
            })
            .collect();
        let mut g = vec![0.0; m * m];
        for (i, row) in upper.iter().enumerate() {
            for (off, v) in row.iter().enumerate() {
                g[i * m + i + off] = *v;
                g[(i + off) * m + i] = *v;
            }
        }
        g
    }

    pub fn targets(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.target).collect()
    }

    /// `max_i |⟨F, r_i⟩ - b_i|`.
    pub fn constraint_residual(&self, f: &HyperVector) -> Result<f64> {
        self.rows
            .iter()
            .try_fold(0.0f64, |m, row| Ok(m.max((f.inner_scaled(&row.r)? - row.target).abs())))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveMethod {
    Cholesky,
    CholeskyWithJitter,
    ConjugateGradient,
}

#[derive(Clone, Debug)]
pub struct RidgeSolution {
    pub f: HyperVector,
    pub alpha: Vec<f64>,
    pub method: SolveMethod,
    /// `‖(G + λ_r I) α - b‖∞`.
    pub residual: f64,
}

fn cholesky(a: &[f64], m: usize) -> Option<Vec<f64>> {
    let mut l = vec![0.0; m * m];
    for j in 0..m {
        let mut d = a[j * m + j];
        for k in 0..j {
            d -= l[j * m + k] * l[j * m + k];
        }
        if !(d > 0.0 && d.is_finite()) {
            return None;
        }
        let djj = d.sqrt();
        l[j * m + j] = djj;
        for i in j + 1..m {
            let mut s = a[i * m + j];
            for k in 0..j {
                s -= l[i * m + k] * l[j * m + k];
            }
            l[i * m + j] = s / djj;
        }
    }
    Some(l)
}

fn cholesky_solve(l: &[f64], m: usize, b: &[f64]) -> Vec<f64> {
    let mut y = b.to_vec();
    for i in 0..m {
        let mut s = y[i];
        for k in 0..i {
            s -= l[i * m + k] * y[k];
        }
        y[i] = s / l[i * m + i];
    }
    for i in (0..m).rev() {
        let mut s = y[i];
        for k in i + 1..m {
            s -= l[k * m + i] * y[k];
        }
        y[i] = s / l[i * m + i];
    }
    y
}

fn matvec(a: &[f64], m: usize, x: &[f64]) -> Vec<f64> {
    (0..m).map(|i| dot(&a[i * m..(i + 1) * m], x)).collect()
}

fn residual_of(a: &[f64], m: usize, x: &[f64], b: &[f64]) -> Vec<f64> {
    matvec(a, m, x).iter().zip(b).map(|(ax, b)| b - ax).collect()
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn conjugate_gradient(a: &[f64], m: usize, b: &[f64], tol: f64) -> (Vec<f64>, f64) {
    let mut x = vec![0.0; m];
    let mut r = b.to_vec();
    let mut p = r.clone();
    let mut rr = dot(&r, &r);
    for _ in 0..(20 * m).max(100) {
        if inf_norm(&r) <= tol {
            break;
        }
        let ap = matvec(a, m, &p);
        let pap = dot(&p, &ap);
        if !(pap > 0.0) {
            break;
        }
        let step = rr / pap;
        for i in 0..m {
            x[i] += step * p[i];
            r[i] -= step * ap[i];
        }
        let rr_new = dot(&r, &r);
        let beta = rr_new / rr;
        rr = rr_new;
        for i in 0..m {
            p[i] = r[i] + beta * p[i];
        }
    }
    let res = inf_norm(&residual_of(a, m, &x, b));
    (x, res)
}

/// Solves the dual system by Cholesky, retrying once with a diagonal jitter of
/// `1e-10 · trace(G) / m` and falling back to conjugate gradients.
pub fn ridge_solve_detailed(p: &RidgeProblem) -> Result<RidgeSolution> {
    let m = p.rows.len();
    let mut a = p.gram();
    for i in 0..m {
        a[i * m + i] += p.ridge;
    }
    let b = p.targets();
    let tol = 1e-8 * inf_norm(&b).max(f64::MIN_POSITIVE);
    let trace: f64 = (0..m).map(|i| a[i * m + i]).sum();
    if p.ridge == 0.0 {
        log::warn!("ridge parameter is zero; the system may be singular");
    }

    let mut attempt = None;
    if p.ridge == 0.0 {
        // Unregularized systems go straight to conjugate gradients.
    } else if let Some(l) = cholesky(&a, m) {
        attempt = Some((l, SolveMethod::Cholesky));
    } else {
        let mut jittered = a.clone();
        let jitter = 1e-10 * trace / m as f64;
        for i in 0..m {
            jittered[i * m + i] += jitter;
        }
        if let Some(l) = cholesky(&jittered, m) {
            log::warn!("Cholesky needed a diagonal jitter of {jitter}");
            attempt = Some((l, SolveMethod::CholeskyWithJitter));
        }
    }

    let (alpha, method, residual) = match attempt {
        Some((l, method)) => {
            let mut x = cholesky_solve(&l, m, &b);
            let mut r = residual_of(&a, m, &x, &b);
            for _ in 0..3 {
                if inf_norm(&r) <= tol {
                    break;
                }
                let dx = cholesky_solve(&l, m, &r);
                x.iter_mut().zip(&dx).for_each(|(x, d)| *x += d);
                r = residual_of(&a, m, &x, &b);
            }
            let res = inf_norm(&r);
            if res <= tol {
                (x, method, res)
            } else {
                log::warn!("Cholesky residual {res} above tolerance; trying conjugate gradients");
                let (x, res) = conjugate_gradient(&a, m, &b, tol);
                (x, SolveMethod::ConjugateGradient, res)
            }
        }
        None => {
            if p.ridge > 0.0 {
                log::warn!("Cholesky failed; falling back to conjugate gradients");
            }
            let (x, res) = conjugate_gradient(&a, m, &b, tol);
            (x, SolveMethod::ConjugateGradient, res)
        }
    };
    if !(residual <= tol) {
        // Accept residuals at the level of rounding in `A α`.
        let a_norm = (0..m)
            .map(|i| a[i * m..(i + 1) * m].iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max);
        let backward = 1e-8 * (inf_norm(&b) + a_norm * inf_norm(&alpha));
        if !(residual <= backward) {
            return Err(HdError::Conditioning(format!(
                "dual system residual {residual} exceeds {tol} (m = {m}, ridge = {})",
                p.ridge
            )));
        }
        log::warn!("dual system residual {residual} is above 1e-8 ‖b‖ but within rounding of ‖A‖‖α‖");
    }

    let dim = p.dim();
    let values = (0..dim)
        .into_par_iter()
        .map(|c| {
            let mut s = 0.0;
            for (a, row) in alpha.iter().zip(&p.rows) {
                s += a * row.r[c];
            }
            s
        })
        .collect();
    Ok(RidgeSolution {
        f: HyperVector::from_raw(values),
        alpha,
        method,
        residual,
    })
}

pub fn ridge_solve(p: &RidgeProblem) -> Result<HyperVector> {
    ridge_solve_detailed(p).map(|s| s.f)
}

/// A coefficient `a_k(x)` or right-hand side `b(x)`.
#[derive(Clone)]
pub enum Coefficient {
    Constant(f64),
    Function(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl std::fmt::Debug for Coefficient {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Constant(c) => write!(f, "Constant({c})"),
            Self::Function(_) => f.write_str("Function"),
        }
    }
}

impl Coefficient {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Self::Constant(c) => *c,
            Self::Function(f) => f(x),
        }
    }
}

impl From<f64> for Coefficient {
    fn from(c: f64) -> Self {
        Self::Constant(c)
    }
}

fn derivative_vector(enc: &NormalizedEncoder, x: f64, order: usize, method: DerivativeMethod) -> Result<HyperVector> {
    if order == 0 {
        enc.encode_normalized(x)
    } else {
        encoding_derivative(enc, x, DerivativeSpec { order, method })
    }
}

/// `Σ_k a_k(x) Δ⁽ᵏ⁾(x)` with target `b(x)`, for `Σ_k a_k f⁽ᵏ⁾ = b`.
pub fn ode_row(
    enc: &NormalizedEncoder,
    x: f64,
    coeffs: &[Coefficient],
    rhs: &Coefficient,
    method: DerivativeMethod,
) -> Result<FunctionalRow> {
    if coeffs.is_empty() {
        return Err(invalid("coefficients", "need at least a_0"));
    }
    let mut r = HyperVector::zeros(enc.dim());
    for (k, a) in coeffs.iter().enumerate() {
        let ak = a.eval(x);
        if !ak.is_finite() {
            return Err(HdError::NonFinite { x, value: ak });
        }
        if ak != 0.0 {
            r.add_scaled(ak, &derivative_vector(enc, x, k, method)?)?;
        }
    }
    Ok(FunctionalRow { r, target: rhs.eval(x) })
}

/// `f⁽ᵒʳᵈᵉʳ⁾(x) = value`.
pub fn boundary_row(
    enc: &NormalizedEncoder,
    x: f64,
    order: usize,
    value: f64,
    method: DerivativeMethod,
) -> Result<FunctionalRow> {
    Ok(FunctionalRow {
        r: derivative_vector(enc, x, order, method)?,
        target: value,
    })
}

/// The observation `f(x) = y`.
pub fn data_row(enc: &NormalizedEncoder, x: f64, y: f64) -> Result<FunctionalRow> {
    Ok(FunctionalRow {
        r: enc.encode_normalized(x)?,
        target: y,
    })
}

/// `f⁽ᵒʳᵈᵉʳ⁾(point) = value`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryCondition {
    pub point: f64,
    pub order: usize,
    pub value: f64,
}

/// A linear ODE `Σ_k a_k(x) f⁽ᵏ⁾(x) = b(x)` with boundary conditions.
#[derive(Clone, Debug)]
pub struct LinearOde {
    pub coeffs: Vec<Coefficient>,
    pub rhs: Coefficient,
    pub conditions: Vec<BoundaryCondition>,
}

impl LinearOde {
    /// Rows at `points` followed by one row per boundary condition.
    pub fn problem(
        &self,
        enc: &NormalizedEncoder,
        points: &[f64],
        ridge: f64,
        method: DerivativeMethod,
    ) -> Result<RidgeProblem> {
        let mut rows: Vec<FunctionalRow> = points
            .par_iter()
            .map(|&x| ode_row(enc, x, &self.coeffs, &self.rhs, method))
            .collect::<Result<_>>()?;
        for bc in &self.conditions {
            rows.push(boundary_row(enc, bc.point, bc.order, bc.value, method)?);
        }
        RidgeProblem::new(rows, ridge)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OdeKind {
    Decay,
    Harmonic,
    Damped,
}

/// Reference equations on `[0, ∞)` with known solutions.
///
/// * decay: `f' + k f = 0`, `f(0) = 1`, solution `e^{-kx}`
/// * harmonic: `f'' + k² f = 0`, `f(0) = 1`, `f'(0) = 0`, solution `cos(kx)`
/// * damped: `f'' + 2β f' + k² f = 0`, `f(0) = 1`, `f'(0) = 0`, solution
///   `e^{-βx}(cos(ωx) + (β/ω) sin(ωx))` with `ω = √(k² - β²)`
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OdePreset {
    pub kind: OdeKind,
    pub k: f64,
    pub beta: f64,
}

impl OdePreset {
    pub const DEFAULT_BETA: f64 = 2.0;

    pub fn decay(k: f64) -> Self {
        Self {
            kind: OdeKind::Decay,
            k,
            beta: 0.0,
        }
    }

    pub fn harmonic(k: f64) -> Self {
        Self {
            kind: OdeKind::Harmonic,
            k,
            beta: 0.0,
        }
    }

    pub fn damped(k: f64, beta: f64) -> Result<Self> {
        if !(beta > 0.0 && beta < k) {
            return Err(invalid(
                "beta",
                format!("need 0 < beta < k, got beta = {beta}, k = {k}"),
            ));
        }
        Ok(Self {
            kind: OdeKind::Damped,
            k,
            beta,
        })
    }

    pub fn from_name(name: &str, k: f64, beta: Option<f64>) -> Result<Self> {
        match name {
            "decay" => Ok(Self::decay(k)),
            "harmonic" => Ok(Self::harmonic(k)),
            "damped" => Self::damped(k, beta.unwrap_or(Self::DEFAULT_BETA)),
            other => Err(invalid("preset", format!("unknown ODE preset `{other}`"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            OdeKind::Decay => "decay",
            OdeKind::Harmonic => "harmonic",
            OdeKind::Damped => "damped",
        }
    }

    /// `a_0, a_1, …`.
    pub fn coefficients(&self) -> Vec<f64> {
        let k2 = self.k * self.k;
        match self.kind {
            OdeKind::Decay => vec![self.k, 1.0],
            OdeKind::Harmonic => vec![k2, 0.0, 1.0],
            OdeKind::Damped => vec![k2, 2.0 * self.beta, 1.0],
        }
    }

    pub fn conditions(&self) -> Vec<BoundaryCondition> {
        let start = BoundaryCondition {
            point: 0.0,
            order: 0,
            value: 1.0,
        };
        match self.kind {
            OdeKind::Decay => vec![start],
            _ => vec![
                start,
                BoundaryCondition {
                    point: 0.0,
                    order: 1,
                    value: 0.0,
                },
            ],
        }
    }

    pub fn ode(&self) -> LinearOde {
        LinearOde {
            coeffs: self.coefficients().into_iter().map(Coefficient::Constant).collect(),
            rhs: Coefficient::Constant(0.0),
            conditions: self.conditions(),
        }
    }

    pub fn analytic(&self, x: f64) -> f64 {
        match self.kind {
            OdeKind::Decay => (-self.k * x).exp(),
            OdeKind::Harmonic => (self.k * x).cos(),
            OdeKind::Damped => {
                let w = (self.k * self.k - self.beta * self.beta).sqrt();
                (-self.beta * x).exp() * ((w * x).cos() + self.beta / w * (w * x).sin())
            }
        }
    }
}

/// Rows for `f(x) = b(x) + λ_F ∫ k(y, x) f(y) dy` at `points`:
/// `r = Δ_φ(x) - λ_F K ⊗ Δ_ψ(x)`, target `b(x)`.
///
/// `K` is the bivariate transform of `k` under `pe`, whose first axis (`φ`)
/// carries `y` and must use the same encoder as `enc_f`.
pub fn fredholm_rows(
    pe: &ProductEncoder,
    enc_f: &NormalizedEncoder,
    k: &HyperVector,
    lambda_f: f64,
    b: &SampledFunction,
    points: &[f64],
    ridge: f64,
) -> Result<RidgeProblem> {
    let phi = pe.enc_x();
    if phi.base().config() != enc_f.base().config() || phi.norm() != enc_f.norm() {
        return Err(HdError::EncoderMismatch(
            "the solution encoder must equal the first axis of the kernel encoding".into(),
        ));
    }
    if k.dim() != pe.dim() {
        return Err(HdError::DimensionMismatch {
            left: k.dim(),
            right: pe.dim(),
        });
    }
    let rows = points
        .par_iter()
        .map(|&x| {
            let mut r = enc_f.encode_normalized(x)?;
            if lambda_f != 0.0 {
                r.add_scaled(-lambda_f, &k.bind(&pe.enc_y().encode_normalized(x)?)?)?;
            }
            Ok(FunctionalRow { r, target: b.eval(x)? })
        })
        .collect::<Result<Vec<_>>>()?;
    RidgeProblem::new(rows, ridge)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vec_of(v: &[f64]) -> HyperVector {
        HyperVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn single_row_closed_form() {
        let r = vec_of(&[1.0, -2.0, 0.5, 3.0]);
        let rr = r.inner_scaled(&r).unwrap();
        let p = RidgeProblem::new(
            vec![FunctionalRow {
                r: r.clone(),
                target: 2.0,
            }],
            0.7,
        )
        .unwrap();
        let f = ridge_solve(&p).unwrap();
        for (a, b) in f.iter().zip(r.iter()) {
            assert!((a - b * 2.0 / (rr + 0.7)).abs() < 1e-14);
        }
    }

    #[test]
    fn empty_and_mismatched_systems() {
        assert!(matches!(RidgeProblem::new(vec![], 1.0), Err(HdError::EmptySystem)));
        let rows = vec![
            FunctionalRow {
                r: vec_of(&[1.0]),
                target: 0.0,
            },
            FunctionalRow {
                r: vec_of(&[1.0, 2.0]),
                target: 0.0,
            },
        ];
        assert!(RidgeProblem::new(rows, 1.0).is_err());
    }

    #[test]
    fn duplicate_rows_are_tolerated() {
        let r = vec_of(&[1.0, 0.0, 2.0]);
        let rows = vec![
            FunctionalRow {
                r: r.clone(),
                target: 1.0
            };
            2
        ];
        let sol = ridge_solve_detailed(&RidgeProblem::new(rows, 1e-3).unwrap()).unwrap();
        assert_eq!(sol.method, SolveMethod::Cholesky);
        assert!(sol.residual <= 1e-8);
    }

    #[test]
    fn singular_system_without_ridge_falls_back() {
        let r = vec_of(&[1.0, 0.0, 2.0]);
        let rows = vec![
            FunctionalRow {
                r: r.clone(),
                target: 1.0
            };
            2
        ];
        let sol = ridge_solve_detailed(&RidgeProblem::new(rows, 0.0).unwrap()).unwrap();
        assert_eq!(sol.method, SolveMethod::ConjugateGradient);
        let p = RidgeProblem::new(vec![FunctionalRow { r, target: 1.0 }], 0.0).unwrap();
        assert!(p.constraint_residual(&sol.f).unwrap() < 1e-8);
    }

    #[test]
    fn cholesky_factor_reconstructs() {
        let a = [4.0, 2.0, 0.4, 2.0, 5.0, 1.0, 0.4, 1.0, 3.0];
        let l = cholesky(&a, 3).unwrap();
        let x = cholesky_solve(&l, 3, &[1.0, 2.0, 3.0]);
        assert!(inf_norm(&residual_of(&a, 3, &x, &[1.0, 2.0, 3.0])) < 1e-14);
        assert!(cholesky(&[1.0, 2.0, 2.0, 1.0], 2).is_none());
    }

    #[test]
    fn presets_satisfy_their_equations() {
        for p in [
            OdePreset::decay(10.0),
            OdePreset::harmonic(10.0),
            OdePreset::damped(10.0, 2.0).unwrap(),
        ] {
            let c = p.coefficients();
            let h = 1e-4;
            for x in [0.1, 0.4, 0.8] {
                let f = |x| p.analytic(x);
                let d1 = (f(x + h) - f(x - h)) / (2.0 * h);
                let d2 = (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
                let lhs = c[0] * f(x) + c[1] * d1 + c.get(2).copied().unwrap_or(0.0) * d2;
                assert!(lhs.abs() < 1e-3, "{} at {x}: {lhs}", p.name());
            }
            assert!((p.analytic(0.0) - 1.0).abs() < 1e-15);
        }
        assert!(OdePreset::damped(1.0, 2.0).is_err());
        assert!(OdePreset::from_name("wave", 1.0, None).is_err());
    }

    #[test]
    fn scaled_row() {
        let row = FunctionalRow {
            r: vec_of(&[1.0, 2.0]),
            target: 3.0,
        };
        let s = row.scaled(-2.0);
        assert_eq!(s.r.as_slice(), &[-2.0, -4.0]);
        assert_eq!(s.target, -6.0);
    }
}
