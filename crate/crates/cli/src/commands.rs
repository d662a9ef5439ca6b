//! One function per subcommand. Each returns the paths it wrote.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use hdtransform::calculus::{encoding_derivative, stencil, DerivativeMethod, DerivativeSpec, StencilKind};
use hdtransform::encodings::{prf, Domain1D, Encoder, EncoderConfig, EncoderType, IntervalStepEncoder, SigmoidEncoder};
use hdtransform::fuzzy::{fuzzy_inverse, fuzzy_transform, FuzzyPartition};
use hdtransform::multivariate::{forward2, Bivariate, ProductEncoder};
use hdtransform::normalization::{solve_normalization, NormalizationSettings, NormalizedEncoder};
use hdtransform::output::Table;
use hdtransform::presets::{preset, preset_names, Preset};
use hdtransform::solvers::{fredholm_rows, ridge_solve_detailed, BoundaryCondition, Coefficient, LinearOde, OdePreset};
use hdtransform::transform::{forward, inverse_eval_many, smooth_oracle_many, SampledFunction};
use hdtransform::{HdError, Quadrature};

use crate::config::RunConfig;
use crate::error::CliError;

type Out = Result<Vec<PathBuf>, CliError>;

pub fn run(cfg: &RunConfig, out: &Path, svg: bool) -> Out {
    match cfg.command() {
        "normalize" => normalize(cfg, out, svg),
        "kernels" => kernels(cfg, out, svg),
        "recover" => recover(cfg, out, svg),
        "derivatives" => derivatives(cfg, out, svg),
        "solve-ode" => solve_ode(cfg, out, svg),
        "solve-fredholm" => solve_fredholm(cfg, out, svg),
        "fuzzy-baseline" => fuzzy_baseline(cfg, out, svg),
        other => Err(CliError::Config(format!("unknown command `{other}`"))),
    }
}

fn emit(table: &Table, out: &Path, name: &str, svg: bool, files: &mut Vec<PathBuf>) -> Result<(), CliError> {
    std::fs::create_dir_all(out)?;
    let path = out.join(format!("{name}.csv"));
    table.write_csv(&path)?;
    files.push(path);
    if svg {
        let path = out.join(format!("{name}.svg"));
        std::fs::write(&path, table.to_svg(name))?;
        files.push(path);
    }
    Ok(())
}

fn domain(cfg: &RunConfig) -> Result<Domain1D, CliError> {
    Ok(Domain1D::new(cfg.f64("a")?, cfg.f64("b")?)?)
}

fn tau(cfg: &RunConfig, lambda: f64) -> Result<Option<f64>, CliError> {
    let t = match cfg.get("tau") {
        Some(_) => cfg.f64("tau")?,
        None => 0.0,
    };
    Ok(if t > 0.0 { Some(t) } else { None }.or(Some(lambda / 20.0)))
}

/// Unnormalized encoder from the `encoder`, `lambda` and `tau` keys.
fn base_encoder(
    cfg: &RunConfig,
    d: Domain1D,
    lambda: f64,
    dim: usize,
    seed: u64,
) -> Result<Arc<dyn Encoder>, CliError> {
    if !(lambda > 0.0) || lambda > d.length() {
        return Err(CliError::Config(format!(
            "lambda = {lambda} must lie in (0, b - a = {}]",
            d.length()
        )));
    }
    let kind = match cfg.get("encoder").unwrap_or("interval") {
        "interval" => EncoderType::Interval,
        "sigmoid" => EncoderType::Sigmoid,
        "periodic" => EncoderType::Periodic,
        other => return Err(CliError::Config(format!("unknown encoder `{other}`"))),
    };
    let mut ec = EncoderConfig {
        kind,
        a: Some(d.a()),
        b: Some(d.b()),
        lambda: Some(lambda),
        dim,
        seed,
        tau: None,
        epsilon: None,
        n_cells: None,
        sizes: None,
        anchor_origin: None,
        mode: None,
    };
    match kind {
        EncoderType::Sigmoid => ec.tau = tau(cfg, lambda)?,
        EncoderType::Periodic => {
            let cells = d.length() / lambda;
            if (cells - cells.round()).abs() > 1e-9 * cells {
                return Err(CliError::Config(format!(
                    "periodic encoders need lambda to divide b - a; got {cells} cells"
                )));
            }
            ec.n_cells = Some(cells.round() as usize);
            ec.lambda = None;
        }
        _ => {}
    }
    Ok(ec.build()?)
}

fn settings(cfg: &RunConfig) -> Result<NormalizationSettings, CliError> {
    Ok(NormalizationSettings {
        grid_size: cfg.usize("grid")?,
        ..NormalizationSettings::default()
    })
}

fn normalized(cfg: &RunConfig, d: Domain1D, lambda: f64, dim: usize, seed: u64) -> Result<NormalizedEncoder, CliError> {
    let base = base_encoder(cfg, d, lambda, dim, seed)?;
    Ok(NormalizedEncoder::solve(base, settings(cfg)?)?.0)
}

fn quadrature(cfg: &RunConfig, d: Domain1D, lambda: f64) -> Result<Quadrature, CliError> {
    Ok(match cfg.usize("quadrature")? {
        0 => Quadrature::for_length_scale(d, lambda)?,
        n => Quadrature::midpoint(d, n)?,
    })
}

fn find_preset(cfg: &RunConfig) -> Result<Preset, CliError> {
    let name = cfg.str("preset");
    preset(name)
        .ok_or_else(|| CliError::Config(format!("unknown preset `{name}`; known: {}", preset_names().join(", "))))
}

fn rmse(a: &[f64], b: &[f64]) -> f64 {
    (a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>() / a.len() as f64).sqrt()
}

fn max_abs(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn normalize(cfg: &RunConfig, out: &Path, svg: bool) -> Out {
    let d = domain(cfg)?;
    let lambda = cfg.f64("lambda")?;
    let base = base_encoder(cfg, d, lambda, 1, 0)?;
    let tol = cfg.f64("tolerance")?;
    let settings = NormalizationSettings {
        grid_size: cfg.usize("grid")?,
        iterations: cfg.usize("iterations")?,
        tolerance: (tol > 0.0).then_some(tol),
    };
    let kernel = |x: f64, y: f64| base.expected_kernel(x, y);
    let report = solve_normalization(&kernel, d, settings)?;
    let grid = report.norm.grid().to_vec();
    let columns: Vec<String> = std::iter::once("x".to_string())
        .chain((0..report.history.len()).map(|i| format!("iter_{i}")))
        .collect();
    let mut n_table = Table::new(columns.clone());
    let mut t_table = Table::new(columns);
    for t in [&mut n_table, &mut t_table] {
        cfg.echo(t);
        t.meta("result.residual", report.residual);
        t.meta(
            "result.residual_trace",
            report
                .residual_trace()
                .iter()
                .map(|r| r.to_string())
                .collect::<Vec<_>>()
                .join(" "),
        );
    }
    n_table.meta("result.quantity", "n");
    t_table.meta("result.quantity", "tilde_one");
    for (j, &x) in grid.iter().enumerate() {
        n_table.push(
            std::iter::once(x)
                .chain(report.history.iter().map(|it| it.n[j]))
                .collect(),
        )?;
        t_table.push(
            std::iter::once(x)
                .chain(report.history.iter().map(|it| it.tilde_one[j]))
                .collect(),
        )?;
    }
    let mut files = Vec::new();
    emit(&n_table, out, "normalization", svg, &mut files)?;
    emit(&t_table, out, "tilde_one", svg, &mut files)?;
    log::info!("normalization residual {}", report.residual);
    Ok(files)
}

fn kernels(cfg: &RunConfig, out: &Path, svg: bool) -> Out {
    let d = domain(cfg)?;
    let lambda = cfg.f64("lambda")?;
    let enc = normalized(cfg, d, lambda, cfg.usize("dim")?, cfg.u64("seed")?)?;
    let xps: Vec<f64> = cfg.list("x_primes")?;
    for &xp in &xps {
        d.check(xp)?;
    }
    let xs = d.linspace(cfg.usize("points")?);
    let mut columns = vec!["x".to_string()];
    for prefix in ["k", "kn", "emp"] {
        columns.extend((0..xps.len()).map(|j| format!("{prefix}_{j}")));
    }
    let mut table = Table::new(columns);
    cfg.echo(&mut table);
    let probes = xps
        .iter()
        .map(|&xp| enc.encode_normalized(xp))
        .collect::<Result<Vec<_>, HdError>>()?;
    let encs = xs
        .iter()
        .map(|&x| enc.encode_normalized(x))
        .collect::<Result<Vec<_>, HdError>>()?;
    let mut areas = vec![0.0; xps.len()];
    let w = hdtransform::normalization::trapezoid_weights(&xs);
    for (j, &x) in xs.iter().enumerate() {
        let mut row = vec![x];
        row.extend(xps.iter().map(|&xp| enc.base().expected_kernel(x, xp)));
        for (s, &xp) in xps.iter().enumerate() {
            let kn = enc.expected_kernel(x, xp);
            areas[s] += w[j] * kn;
            row.push(kn);
        }
        for p in &probes {
            row.push(encs[j].inner_scaled(p)?);
        }
        table.push(row)?;
    }
    for (s, (xp, area)) in xps.iter().zip(&areas).enumerate() {
        table.meta(format!("result.x_prime_{s}"), xp);
        table.meta(format!("result.area_{s}"), area);
    }
    let mut files = Vec::new();
    emit(&table, out, "kernels", svg, &mut files)?;
    Ok(files)
}

fn recover(cfg: &RunConfig, out: &Path, svg: bool) -> Out {
    let p = find_preset(cfg)?;
    let d = p.domain();
    let f = p.function();
    let dims: Vec<usize> = cfg.list("dims")?;
    let lambdas: Vec<f64> = cfg.list("lambdas")?;
    let seeds: Vec<u64> = cfg.list("seeds")?;
    if dims.is_empty() || seeds.is_empty() {
        return Err(CliError::Config("`dims` and `seeds` need at least one entry".into()));
    }
    let settings: Vec<(usize, f64)> = if lambdas.is_empty() {
        let l = cfg.f64("lambda")?;
        dims.iter().map(|&dim| (dim, l)).collect()
    } else {
        lambdas.iter().map(|&l| (dims[0], l)).collect()
    };
    let xs = d.linspace(cfg.usize("points")?);
    let truth: Vec<f64> = xs.iter().map(|&x| (p.f)(x)).collect();
    let mut summary = Table::new(["setting", "dim", "lambda", "seed", "rmse", "rmse_oracle"]);
    cfg.echo(&mut summary);
    summary.meta("result.rmse_region", "points at least lambda away from both ends");
    let mut files = Vec::new();
    let mut index = 0;
    for &(dim, lambda) in &settings {
        let q = quadrature(cfg, d, lambda)?;
        for &seed in &seeds {
            let enc = normalized(cfg, d, lambda, dim, seed)?;
            let fv = forward(&f, &enc, &q)?;
            let ft = inverse_eval_many(&fv, &enc, &xs)?;
            let oracle = smooth_oracle_many(&f, &enc, &xs, &q)?;
            let interior: Vec<usize> = (0..xs.len())
                .filter(|&j| xs[j] - d.a() >= lambda && d.b() - xs[j] >= lambda)
                .collect();
            let pick = |v: &[f64]| interior.iter().map(|&j| v[j]).collect::<Vec<_>>();
            let err = rmse(&pick(&ft), &pick(&truth));
            let err_oracle = rmse(&pick(&oracle), &pick(&truth));
            summary.push(vec![index as f64, dim as f64, lambda, seed as f64, err, err_oracle])?;

            let mut table = Table::new(["x", "f_true", "f_tilde", "oracle"]);
            cfg.echo(&mut table);
            table.meta("result.setting", index);
            table.meta("result.dim", dim);
            table.meta("result.lambda", lambda);
            table.meta("result.seed", seed);
            for j in 0..xs.len() {
                table.push(vec![xs[j], truth[j], ft[j], oracle[j]])?;
            }
            emit(&table, out, &format!("recover_{index}"), svg, &mut files)?;
            log::info!("dim {dim}, lambda {lambda}, seed {seed}: rmse {err}");
            index += 1;
        }
    }
    let path = out.join("rmse.csv");
    summary.write_csv(&path)?;
    files.push(path);
    Ok(files)
}

fn derivatives(cfg: &RunConfig, out: &Path, svg: bool) -> Out {
    let d = domain(cfg)?;
    let lambda = cfg.f64("lambda")?;
    if !(lambda > 0.0) || lambda > d.length() {
        return Err(CliError::Config(format!("lambda = {lambda} must lie in (0, b - a]")));
    }
    let seed = cfg.u64("seed")?;
    let comp = cfg.usize("component")?;
    let dim = comp + 1;
    let h = match cfg.f64("h")? {
        h if h > 0.0 => h,
        _ => lambda / 5.0,
    };
    let step = IntervalStepEncoder::new(d, lambda, dim, seed)?;
    let sig = SigmoidEncoder::from_step(step.clone(), tau(cfg, lambda)?.unwrap_or(lambda / 20.0))?;
    let s = settings(cfg)?;
    let step_enc = NormalizedEncoder::solve(Arc::new(step), s)?.0;
    let sig_enc = NormalizedEncoder::solve(Arc::new(sig), s)?.0;
    let xs = d.linspace(cfg.usize("points")?);
    let fd1 = DerivativeSpec::finite_difference(1, h)?;
    let fd2 = DerivativeSpec::finite_difference(2, h)?;
    let ex1 = DerivativeSpec::exact(1)?;
    let ex2 = DerivativeSpec::exact(2)?;
    let mut cols: [Vec<f64>; 4] = Default::default();
    let mut one_sided = 0;
    for &x in &xs {
        for (col, (enc, spec)) in
            cols.iter_mut()
                .zip([(&step_enc, fd1), (&step_enc, fd2), (&sig_enc, ex1), (&sig_enc, ex2)])
        {
            col.push(encoding_derivative(enc, x, spec)?[comp]);
        }
        if stencil(d, x, 2, h)?.kind != StencilKind::Central {
            one_sided += 1;
        }
    }
    let rescale = cfg.bool("rescale")?;
    let mut table = Table::new(["x", "step_fd_d1", "step_fd_d2", "sigmoid_exact_d1", "sigmoid_exact_d2"]);
    cfg.echo(&mut table);
    table.meta("result.rescaled", rescale);
    table.meta("result.h", h);
    table.meta("result.one_sided_points", one_sided);
    table.meta(
        "result.boundary_stencil",
        "one-sided differences of the same order near the ends",
    );
    if rescale {
        for (name, col) in ["step_fd_d1", "step_fd_d2", "sigmoid_exact_d1", "sigmoid_exact_d2"]
            .iter()
            .zip(cols.iter_mut())
        {
            let m = col.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            if m > 0.0 {
                col.iter_mut().for_each(|v| *v /= m);
            }
            table.meta(format!("result.scale_{name}"), m);
        }
    }
    for (j, &x) in xs.iter().enumerate() {
        table.push(vec![x, cols[0][j], cols[1][j], cols[2][j], cols[3][j]])?;
    }
    let mut files = Vec::new();
    emit(&table, out, "derivatives", svg, &mut files)?;
    Ok(files)
}

fn parse_bcs(text: &str) -> Result<Vec<BoundaryCondition>, CliError> {
    text.split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|item| {
            let parts: Vec<&str> = item.split(':').map(str::trim).collect();
            let bad = || CliError::Config(format!("boundary condition `{item}` is not x:order:value"));
            if parts.len() != 3 {
                return Err(bad());
            }
            Ok(BoundaryCondition {
                point: parts[0].parse().map_err(|_| bad())?,
                order: parts[1].parse().map_err(|_| bad())?,
                value: parts[2].parse().map_err(|_| bad())?,
            })
        })
        .collect()
}

fn solve_ode(cfg: &RunConfig, out: &Path, svg: bool) -> Out {
    let d = domain(cfg)?;
    let conditions = parse_bcs(cfg.str("bc"))?;
    if !conditions.is_empty() && cfg.str("coeffs").is_empty() {
        log::warn!("`bc` only applies together with `coeffs`; the preset's own conditions are used");
    }
    let lambda = cfg.f64("lambda")?;
    let enc = normalized(cfg, d, lambda, cfg.usize("dim")?, cfg.u64("seed")?)?;
    let h = match cfg.f64("h")? {
        h if h > 0.0 => h,
        _ => lambda / 5.0,
    };
    let coeffs: Vec<f64> = cfg.list("coeffs")?;
    let (ode, analytic): (LinearOde, Option<OdePreset>) = if coeffs.is_empty() {
        let p = OdePreset::from_name(cfg.str("preset"), cfg.f64("k")?, Some(cfg.f64("beta")?))?;
        (p.ode(), Some(p))
    } else {
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(CliError::Config("coefficients must be finite".into()));
        }
        let ode = LinearOde {
            coeffs: coeffs.into_iter().map(Coefficient::Constant).collect(),
            rhs: Coefficient::Constant(cfg.f64("rhs")?),
            conditions,
        };
        (ode, None)
    };
    let points = d.linspace(cfg.usize("points")?);
    let problem = ode.problem(
        &enc,
        &points,
        cfg.f64("ridge")?,
        DerivativeMethod::FiniteDifference { h },
    )?;
    let sol = ridge_solve_detailed(&problem)?;
    let xs = d.linspace(cfg.usize("eval_points")?);
    let ys = inverse_eval_many(&sol.f, &enc, &xs)?;
    let columns: Vec<&str> = match analytic {
        Some(_) => vec!["x", "analytic", "hd_solution"],
        None => vec!["x", "hd_solution"],
    };
    let mut table = Table::new(columns);
    cfg.echo(&mut table);
    table.meta("result.h", h);
    table.meta("result.solve_method", format!("{:?}", sol.method));
    table.meta("result.dual_residual", sol.residual);
    if let Some(p) = analytic {
        let exact: Vec<f64> = xs.iter().map(|&x| p.analytic(x)).collect();
        table.meta("result.max_abs_error", max_abs(&ys, &exact));
        for j in 0..xs.len() {
            table.push(vec![xs[j], exact[j], ys[j]])?;
        }
    } else {
        for j in 0..xs.len() {
            table.push(vec![xs[j], ys[j]])?;
        }
    }
    let mut files = Vec::new();
    emit(&table, out, "ode", svg, &mut files)?;
    Ok(files)
}

fn read_table(path: &str, want: &[&str]) -> Result<Vec<Vec<f64>>, CliError> {
    if path.is_empty() {
        return Err(CliError::Config(format!(
            "a CSV with columns {} is required",
            want.join(",")
        )));
    }
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{path}: {e}")))?;
    let t = Table::from_csv(&text)?;
    want.iter()
        .map(|c| {
            t.column(c)
                .ok_or_else(|| CliError::Config(format!("{path}: missing column `{c}`")))
        })
        .collect()
}

/// Bilinear interpolation on a tensor grid given as scattered `(y, x, k)` rows.
fn grid_kernel(cols: Vec<Vec<f64>>) -> Result<Bivariate, CliError> {
    let uniq = |v: &[f64]| {
        let mut u = v.to_vec();
        u.sort_by(f64::total_cmp);
        u.dedup();
        u
    };
    let (ys, xs) = (uniq(&cols[0]), uniq(&cols[1]));
    if ys.len() < 2 || xs.len() < 2 || ys.len() * xs.len() != cols[2].len() {
        return Err(CliError::Config(
            "kernel table must be a full tensor grid with at least 2x2 nodes".into(),
        ));
    }
    let mut k = vec![f64::NAN; ys.len() * xs.len()];
    for ((y, x), v) in cols[0].iter().zip(&cols[1]).zip(&cols[2]) {
        let i = ys.partition_point(|p| p < y);
        let j = xs.partition_point(|p| p < x);
        k[i * xs.len() + j] = *v;
    }
    if k.iter().any(|v| !v.is_finite()) {
        return Err(CliError::Config(
            "kernel table has missing or non-finite entries".into(),
        ));
    }
    let locate = |g: &[f64], v: f64| {
        let j = (g.partition_point(|p| *p <= v).max(1) - 1).min(g.len() - 2);
        (j, ((v - g[j]) / (g[j + 1] - g[j])).clamp(0.0, 1.0))
    };
    Ok(Arc::new(move |y, x| {
        let (i, s) = locate(&ys, y);
        let (j, t) = locate(&xs, x);
        let n = xs.len();
        let at = |a: usize, b: usize| k[a * n + b];
        (1.0 - s) * ((1.0 - t) * at(i, j) + t * at(i, j + 1)) + s * ((1.0 - t) * at(i + 1, j) + t * at(i + 1, j + 1))
    }))
}

/// Kernel, right-hand side and, for the built-in case, the exact solution.
type FredholmInput = (Bivariate, SampledFunction, Option<fn(f64) -> f64>);

fn solve_fredholm(cfg: &RunConfig, out: &Path, svg: bool) -> Out {
    let d = Domain1D::new(0.0, 1.0)?;
    let lambda = cfg.f64("lambda")?;
    let dim = cfg.usize("dim")?;
    let seed = cfg.u64("seed")?;
    let (kernel, rhs, analytic): FredholmInput = match cfg.str("kernel") {
        "separable" => (
            Arc::new(|y, x| y * x),
            SampledFunction::new(|x| 2.0 * x / 3.0),
            Some(|x| x),
        ),
        "table" => {
            let kt = read_table(cfg.str("kernel_file"), &["y", "x", "k"])?;
            let bt = read_table(cfg.str("rhs_file"), &["x", "b"])?;
            let mut it = bt.into_iter();
            let (bx, by) = (it.next().unwrap_or_default(), it.next().unwrap_or_default());
            (grid_kernel(kt)?, SampledFunction::table(bx, by)?, None)
        }
        other => return Err(CliError::Config(format!("unknown kernel `{other}`"))),
    };
    let phi = normalized(cfg, d, lambda, dim, seed)?;
    let psi = normalized(cfg, d, lambda, dim, prf::derive_seed(seed, 0x7073_6921))?;
    let pe = ProductEncoder::new(phi.clone(), psi)?;
    let q = quadrature(cfg, d, lambda)?;
    let k = forward2(&kernel, &pe, &q, &q)?;
    let points = d.linspace(cfg.usize("points")?);
    let problem = fredholm_rows(&pe, &phi, &k, cfg.f64("lambda_f")?, &rhs, &points, cfg.f64("ridge")?)?;
    let sol = ridge_solve_detailed(&problem)?;
    let xs = d.linspace(cfg.usize("eval_points")?);
    let ys = inverse_eval_many(&sol.f, &phi, &xs)?;
    let mut table = match analytic {
        Some(_) => Table::new(["x", "analytic", "hd_solution"]),
        None => Table::new(["x", "hd_solution"]),
    };
    cfg.echo(&mut table);
    table.meta("result.solve_method", format!("{:?}", sol.method));
    match analytic {
        Some(g) => {
            let exact: Vec<f64> = xs.iter().map(|&x| g(x)).collect();
            table.meta("result.max_abs_error", max_abs(&ys, &exact));
            for j in 0..xs.len() {
                table.push(vec![xs[j], exact[j], ys[j]])?;
            }
        }
        None => {
            for j in 0..xs.len() {
                table.push(vec![xs[j], ys[j]])?;
            }
        }
    }
    let mut files = Vec::new();
    emit(&table, out, "fredholm", svg, &mut files)?;
    Ok(files)
}

fn fuzzy_baseline(cfg: &RunConfig, out: &Path, svg: bool) -> Out {
    let p = find_preset(cfg)?;
    let d = p.domain();
    let f = p.function();
    let lambda = cfg.f64("lambda")?;
    let q = quadrature(cfg, d, lambda)?;
    let part = FuzzyPartition::new(d, cfg.usize("nodes")?)?;
    let g = fuzzy_transform(&f, &part, &q)?;
    let enc = {
        let base: Arc<dyn Encoder> = Arc::new(IntervalStepEncoder::new(
            d,
            lambda,
            cfg.usize("dim")?,
            cfg.u64("seed")?,
        )?);
        NormalizedEncoder::solve(base, settings(cfg)?)?.0
    };
    let fv = forward(&f, &enc, &q)?;
    let xs = d.linspace(cfg.usize("points")?);
    let hd = inverse_eval_many(&fv, &enc, &xs)?;
    let fz = xs
        .iter()
        .map(|&x| fuzzy_inverse(&g, &part, x))
        .collect::<Result<Vec<_>, HdError>>()?;
    let truth: Vec<f64> = xs.iter().map(|&x| (p.f)(x)).collect();
    let mut table = Table::new(["x", "f_true", "fuzzy", "hd"]);
    cfg.echo(&mut table);
    table.meta("result.rmse_fuzzy", rmse(&fz, &truth));
    table.meta("result.rmse_hd", rmse(&hd, &truth));
    for j in 0..xs.len() {
        table.push(vec![xs[j], truth[j], fz[j], hd[j]])?;
    }
    let mut files = Vec::new();
    emit(&table, out, "fuzzy", svg, &mut files)?;
    Ok(files)
}
