//! Normalization functions for interval encodings.
//!
//! A normalization function `n` makes the kernel-weighted mass
//! `∫ k(x, x') / (n(x) n(x')) dx'` equal to one at every `x`. It is found by
//! successive approximation on a grid: start from `n₀(x) = sqrt(∫ k(x, x') dx')`,
//! evaluate the mass `1̃ᵢ` under the current iterate and update
//! `nᵢ₊₁ = nᵢ · sqrt(1̃ᵢ)`. Integrals use the composite trapezoid rule on the
//! grid itself.

use std::fmt::Write as _;
use std::sync::Arc;

use crate::encodings::{Domain1D, Encoder};
use crate::error::{invalid, HdError, Result};
use crate::vector::HyperVector;

/// Positive function tabulated on a grid and interpolated by a natural cubic
/// spline, so that its first two derivatives exist and agree with finite
/// differences of [`eval`](Self::eval). Constant beyond the ends.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalizationFn {
    grid: Vec<f64>,
    values: Vec<f64>,
    /// Spline second derivatives at the grid points.
    curvature: Vec<f64>,
}

impl NormalizationFn {
    pub fn new(grid: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if grid.len() < 2 || grid.len() != values.len() {
            return Err(invalid("grid", "need at least two grid points with one value each"));
        }
        if grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(invalid("grid", "must be strictly increasing"));
        }
        if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
            return Err(invalid("values", format!("must be positive and finite, found {v}")));
        }
        let curvature = natural_spline(&grid, &values);
        Ok(Self {
            grid,
            values,
            curvature,
        })
    }

    /// The constant function `c` on `domain`.
    pub fn constant(domain: Domain1D, c: f64) -> Result<Self> {
        Self::new(vec![domain.a(), domain.b()], vec![c, c])
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Segment index and local offsets `(j, x - g[j], g[j+1] - x, g[j+1] - g[j])`.
    fn segment(&self, x: f64) -> (usize, f64, f64, f64) {
        let g = &self.grid;
        let j = (g.partition_point(|&p| p <= x).max(1) - 1).min(g.len() - 2);
        (j, x - g[j], g[j + 1] - x, g[j + 1] - g[j])
    }

    fn outside(&self, x: f64) -> Option<f64> {
        let last = self.grid.len() - 1;
        if x < self.grid[0] {
            Some(self.values[0])
        } else if x > self.grid[last] {
            Some(self.values[last])
        } else {
            None
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        if let Some(v) = self.outside(x) {
            return v;
        }
        let (j, a, b, h) = self.segment(x);
        let (y, m) = (&self.values, &self.curvature);
        (m[j] * b.powi(3) + m[j + 1] * a.powi(3)) / (6.0 * h)
            + (y[j] / h - m[j] * h / 6.0) * b
            + (y[j + 1] / h - m[j + 1] * h / 6.0) * a
    }

    pub fn derivative(&self, x: f64) -> f64 {
        if self.outside(x).is_some() {
            return 0.0;
        }
        let (j, a, b, h) = self.segment(x);
        let (y, m) = (&self.values, &self.curvature);
        (m[j + 1] * a * a - m[j] * b * b) / (2.0 * h) + (y[j + 1] - y[j]) / h - (m[j + 1] - m[j]) * h / 6.0
    }

    pub fn second_derivative(&self, x: f64) -> f64 {
        if self.outside(x).is_some() {
            return 0.0;
        }
        let (j, a, b, h) = self.segment(x);
        (self.curvature[j] * b + self.curvature[j + 1] * a) / h
    }

    /// `x,n` CSV table, one row per grid point.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,n\n");
        for (x, n) in self.grid.iter().zip(&self.values) {
            let _ = writeln!(out, "{x},{n}");
        }
        out
    }
}

/// Second derivatives of the natural cubic spline through `(grid, values)`.
fn natural_spline(grid: &[f64], values: &[f64]) -> Vec<f64> {
    let n = grid.len();
    let mut m = vec![0.0; n];
    if n < 3 {
        return m;
    }
    // Thomas algorithm on the interior equations.
    let mut diag = vec![0.0; n];
    let mut rhs = vec![0.0; n];
    for i in 1..n - 1 {
        let (h0, h1) = (grid[i] - grid[i - 1], grid[i + 1] - grid[i]);
        diag[i] = 2.0 * (h0 + h1);
        rhs[i] = 6.0 * ((values[i + 1] - values[i]) / h1 - (values[i] - values[i - 1]) / h0);
        if i > 1 {
            let w = h0 / diag[i - 1];
            diag[i] -= w * h0;
            rhs[i] -= w * rhs[i - 1];
        }
    }
    for i in (1..n - 1).rev() {
        let h1 = grid[i + 1] - grid[i];
        m[i] = (rhs[i] - h1 * m[i + 1]) / diag[i];
    }
    m
}

/// Composite trapezoid weights for an increasing grid.
pub fn trapezoid_weights(grid: &[f64]) -> Vec<f64> {
    let m = grid.len();
    let mut w = vec![0.0; m];
    for j in 0..m.saturating_sub(1) {
        let h = grid[j + 1] - grid[j];
        w[j] += 0.5 * h;
        w[j + 1] += 0.5 * h;
    }
    w
}

fn check_grid(domain: Domain1D, grid: &[f64]) -> Result<()> {
    if grid.len() < 2 {
        return Err(invalid("grid", "need at least two points"));
    }
    let tol = 1e-12 * domain.length();
    if (grid[0] - domain.a()).abs() > tol || (grid[grid.len() - 1] - domain.b()).abs() > tol {
        return Err(invalid("grid", "must span the whole domain"));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(invalid("grid", "must be strictly increasing"));
    }
    Ok(())
}

fn kernel_matrix(kernel: &dyn Fn(f64, f64) -> f64, grid: &[f64]) -> Vec<Vec<f64>> {
    grid.iter()
        .map(|&x| grid.iter().map(|&y| kernel(x, y)).collect())
        .collect()
}

fn initial_from_matrix(kmat: &[Vec<f64>], grid: &[f64], w: &[f64]) -> Result<Vec<f64>> {
    kmat.iter()
        .zip(grid)
        .map(|(row, &x)| {
            let mass: f64 = row.iter().zip(w).map(|(k, w)| k * w).sum();
            if mass > 0.0 && mass.is_finite() {
                Ok(mass.sqrt())
            } else {
                Err(HdError::DegenerateKernel { x, value: mass })
            }
        })
        .collect()
}

fn tilde_from_matrix(kmat: &[Vec<f64>], n: &[f64], w: &[f64]) -> Vec<f64> {
    kmat.iter()
        .zip(n)
        .map(|(row, nx)| {
            let s: f64 = row.iter().zip(n).zip(w).map(|((k, ny), w)| w * k / ny).sum();
            s / nx
        })
        .collect()
}

/// `n₀(x_j) = sqrt(∫ k(x_j, x') dx')` on `grid`.
pub fn initial_guess(kernel: &dyn Fn(f64, f64) -> f64, domain: Domain1D, grid: &[f64]) -> Result<NormalizationFn> {
    check_grid(domain, grid)?;
    let w = trapezoid_weights(grid);
    let kmat = kernel_matrix(kernel, grid);
    NormalizationFn::new(grid.to_vec(), initial_from_matrix(&kmat, grid, &w)?)
}

/// `1̃(x_j) = ∫ k(x_j, x') / (n(x_j) n(x')) dx'` on `grid`.
pub fn tilde_one(
    kernel: &dyn Fn(f64, f64) -> f64,
    norm: &NormalizationFn,
    domain: Domain1D,
    grid: &[f64],
) -> Result<Vec<f64>> {
    check_grid(domain, grid)?;
    let w = trapezoid_weights(grid);
    let kmat = kernel_matrix(kernel, grid);
    let n: Vec<f64> = grid.iter().map(|&x| norm.eval(x)).collect();
    Ok(tilde_from_matrix(&kmat, &n, &w))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormalizationSettings {
    /// Number of equidistant grid points, endpoints included.
    pub grid_size: usize,
    /// Maximum number of updates.
    pub iterations: usize,
    /// Stop early once the residual drops below this value.
    pub tolerance: Option<f64>,
}

impl Default for NormalizationSettings {
    fn default() -> Self {
        Self {
            grid_size: 100,
            iterations: 10,
            tolerance: None,
        }
    }
}

/// One step of the iteration: the iterate and the mass it produces.
#[derive(Clone, Debug)]
pub struct Iterate {
    pub n: Vec<f64>,
    pub tilde_one: Vec<f64>,
    pub residual: f64,
}

#[derive(Clone, Debug)]
pub struct NormalizationReport {
    pub norm: NormalizationFn,
    /// `max_j |1̃(x_j) - 1|` for the returned function.
    pub residual: f64,
    /// Iterates `n₀ … n_final`, each with its mass.
    pub history: Vec<Iterate>,
}

impl NormalizationReport {
    pub fn residual_trace(&self) -> Vec<f64> {
        self.history.iter().map(|it| it.residual).collect()
    }
}

fn max_dev(t: &[f64]) -> f64 {
    t.iter().map(|v| (v - 1.0).abs()).fold(0.0, f64::max)
}

/// Successive approximation of the normalization equation.
///
/// Fails with [`HdError::NonConvergence`] if the residual grows three
/// iterations in a row.
pub fn solve_normalization(
    kernel: &dyn Fn(f64, f64) -> f64,
    domain: Domain1D,
    settings: NormalizationSettings,
) -> Result<NormalizationReport> {
    if settings.grid_size < 2 {
        return Err(invalid("grid_size", "need at least two points"));
    }
    let grid = domain.linspace(settings.grid_size);
    let w = trapezoid_weights(&grid);
    let kmat = kernel_matrix(kernel, &grid);
    if let Some(j) = (0..grid.len()).find(|&j| !(kmat[j][j] > 0.0)) {
        return Err(HdError::DegenerateKernel {
            x: grid[j],
            value: kmat[j][j],
        });
    }
    let mut n = initial_from_matrix(&kmat, &grid, &w)?;
    let mut history = Vec::with_capacity(settings.iterations + 1);
    let mut growth = 0;
    for step in 0..=settings.iterations {
        let t = tilde_from_matrix(&kmat, &n, &w);
        let residual = max_dev(&t);
        if let Some(prev) = history.last().map(|it: &Iterate| it.residual) {
            growth = if residual > prev { growth + 1 } else { 0 };
        }
        history.push(Iterate {
            n: n.clone(),
            tilde_one: t.clone(),
            residual,
        });
        if growth >= 3 || !residual.is_finite() {
            return Err(HdError::NonConvergence {
                trace: history.iter().map(|it| it.residual).collect(),
            });
        }
        let done = settings.tolerance.is_some_and(|tol| residual < tol);
        if step == settings.iterations || done {
            break;
        }
        for (nj, tj) in n.iter_mut().zip(&t) {
            *nj *= tj.sqrt();
        }
    }
    let last = history.last().expect("at least one iterate");
    Ok(NormalizationReport {
        norm: NormalizationFn::new(grid, last.n.clone())?,
        residual: last.residual,
        history,
    })
}

/// An encoder divided by its normalization function.
#[derive(Clone, Debug)]
pub struct NormalizedEncoder {
    base: Arc<dyn Encoder>,
    norm: NormalizationFn,
}

impl NormalizedEncoder {
    pub fn new(base: Arc<dyn Encoder>, norm: NormalizationFn) -> Result<Self> {
        let d = base.domain();
        let g = norm.grid();
        let tol = 1e-12 * d.length();
        if g[0] > d.a() + tol || g[g.len() - 1] < d.b() - tol {
            return Err(invalid("norm", "normalization grid must cover the encoder domain"));
        }
        Ok(Self { base, norm })
    }

    /// Solves for the normalization of `base` under its expected kernel.
    pub fn solve(base: Arc<dyn Encoder>, settings: NormalizationSettings) -> Result<(Self, NormalizationReport)> {
        let kernel = |x: f64, y: f64| base.expected_kernel(x, y);
        let spacing = base.domain().length() / settings.grid_size.max(2).saturating_sub(1) as f64;
        if spacing > base.length_scale() / 4.0 {
            log::warn!(
                "normalization grid spacing {spacing} is coarse for length scale {}; \
                 the trapezoid rule will misjudge the kernel mass",
                base.length_scale()
            );
        }
        let report = solve_normalization(&kernel, base.domain(), settings)?;
        Ok((Self::new(base, report.norm.clone())?, report))
    }

    pub fn with_constant(base: Arc<dyn Encoder>, c: f64) -> Result<Self> {
        let norm = NormalizationFn::constant(base.domain(), c)?;
        Self::new(base, norm)
    }

    pub fn base(&self) -> &Arc<dyn Encoder> {
        &self.base
    }

    pub fn norm(&self) -> &NormalizationFn {
        &self.norm
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn domain(&self) -> Domain1D {
        self.base.domain()
    }

    pub fn length_scale(&self) -> f64 {
        self.base.length_scale()
    }

    /// Component `i` of `Δ(x) = φ(x) / n(x)`; `x` must be in the domain.
    #[inline]
    pub fn component(&self, i: usize, x: f64) -> f64 {
        self.base.component(i, x) / self.norm.eval(x)
    }

    pub fn encode_normalized(&self, x: f64) -> Result<HyperVector> {
        self.domain().check(x)?;
        let inv = 1.0 / self.norm.eval(x);
        Ok(HyperVector::from_raw(
            (0..self.dim()).map(|i| self.base.component(i, x) * inv).collect(),
        ))
    }

    /// `k(x, x') / (n(x) n(x'))`.
    pub fn expected_kernel(&self, x: f64, x2: f64) -> f64 {
        self.base.expected_kernel(x, x2) / (self.norm.eval(x) * self.norm.eval(x2))
    }
}
