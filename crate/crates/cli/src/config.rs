//! Flat `key=value` run configuration.
//!
//! A config file holds one `key=value` pair per line. Blank lines are skipped
//! and so are `#` lines without an `=`. Lines of the form `# key=value` are
//! read as settings too, so the metadata header of any CSV written by `hdt`
//! is itself a valid config file. Keys starting with `result.` and the key
//! `command` are informational and ignored (a `command` naming another
//! subcommand is an error).
//!
//! Values resolve with the precedence command line > config file > defaults.

use std::collections::BTreeMap;

use hdtransform::output::Table;

use crate::error::CliError;

#[derive(Debug)]
pub struct Key {
    pub name: &'static str,
    pub default: &'static str,
    pub help: &'static str,
}

const fn key(name: &'static str, default: &'static str, help: &'static str) -> Key {
    Key { name, default, help }
}

#[derive(Debug)]
pub struct Schema {
    pub command: &'static str,
    pub about: &'static str,
    pub keys: &'static [Key],
}

pub const SCHEMAS: &[Schema] = &[
    Schema {
        command: "normalize",
        about: "Solve for the normalization function and write every iterate",
        keys: &[
            key("encoder", "interval", "interval | sigmoid | periodic"),
            key("a", "0", "left end of the domain"),
            key("b", "1", "right end of the domain"),
            key("lambda", "0.25", "length scale"),
            key("tau", "0", "sigmoid ramp width (0 = lambda/20)"),
            key("grid", "100", "number of grid points"),
            key("iterations", "10", "number of updates"),
            key("tolerance", "0", "stop once the residual drops below this (0 = off)"),
        ],
    },
    Schema {
        command: "kernels",
        about: "Expected and empirical kernel slices k(., x')",
        keys: &[
            key("encoder", "interval", "interval | sigmoid | periodic"),
            key("a", "0", "left end of the domain"),
            key("b", "1", "right end of the domain"),
            key("lambda", "0.25", "length scale"),
            key("tau", "0", "sigmoid ramp width (0 = lambda/20)"),
            key("dim", "10000", "dimensionality"),
            key("seed", "1", "random seed"),
            key("x_primes", "0.1,0.3,0.5,0.7,0.9", "comma-separated slice positions"),
            key("points", "201", "evaluation points"),
            key("grid", "100", "normalization grid points"),
        ],
    },
    Schema {
        command: "recover",
        about: "Transform a preset function and evaluate the back-transform",
        keys: &[
            key("preset", "x_sin_10x", "function preset"),
            key("encoder", "interval", "interval | sigmoid | periodic"),
            key("lambda", "0.05", "length scale"),
            key("tau", "0", "sigmoid ramp width (0 = lambda/20)"),
            key("dims", "5000,10000,50000", "comma-separated dimensionalities"),
            key(
                "lambdas",
                "",
                "comma-separated length scales; sweeps these at the first dim",
            ),
            key("seeds", "1", "comma-separated seeds"),
            key("points", "500", "evaluation points"),
            key("quadrature", "0", "midpoint nodes (0 = twenty per length scale)"),
            key("grid", "100", "normalization grid points"),
        ],
    },
    Schema {
        command: "derivatives",
        about: "Derivatives of one encoding component, step (finite difference) and sigmoid (exact)",
        keys: &[
            key("a", "0", "left end of the domain"),
            key("b", "1", "right end of the domain"),
            key("lambda", "0.25", "length scale"),
            key("tau", "0", "sigmoid ramp width (0 = lambda/20)"),
            key("h", "0", "finite-difference step (0 = lambda/5)"),
            key("seed", "1", "random seed"),
            key("component", "0", "component index"),
            key("points", "401", "evaluation points"),
            key("grid", "100", "normalization grid points"),
            key("rescale", "true", "divide each column by its largest magnitude"),
        ],
    },
    Schema {
        command: "solve-ode",
        about: "Solve a linear ODE with boundary conditions by ridge regression",
        keys: &[
            key(
                "preset",
                "decay",
                "decay | harmonic | damped (ignored when coeffs is set)",
            ),
            key("k", "10", "preset rate"),
            key("beta", "2", "damping of the damped preset"),
            key("coeffs", "", "custom constant coefficients a0,a1,...,an"),
            key("rhs", "0", "custom constant right-hand side"),
            key("bc", "", "custom boundary conditions x:order:value;..."),
            key("encoder", "interval", "interval | sigmoid | periodic"),
            key("a", "0", "left end of the domain"),
            key("b", "1", "right end of the domain"),
            key("lambda", "0.05", "length scale"),
            key("tau", "0", "sigmoid ramp width (0 = lambda/20)"),
            key("dim", "5000", "dimensionality"),
            key("seed", "1", "random seed"),
            key("h", "0", "finite-difference step (0 = lambda/5)"),
            key("points", "500", "collocation points"),
            key("ridge", "1", "ridge parameter in the scaled inner-product metric"),
            key("eval_points", "500", "evaluation points"),
            key("grid", "100", "normalization grid points"),
        ],
    },
    Schema {
        command: "solve-fredholm",
        about: "Solve f(x) = b(x) + lambda_f * int k(y, x) f(y) dy on [0, 1]",
        keys: &[
            key("kernel", "separable", "separable (k = y x, b = 2x/3) | table"),
            key(
                "kernel_file",
                "",
                "CSV with columns y,x,k on a tensor grid (kernel=table)",
            ),
            key("rhs_file", "", "CSV with columns x,b (kernel=table)"),
            key("lambda_f", "1", "integral operator weight"),
            key("lambda", "0.1", "length scale"),
            key("dim", "10000", "dimensionality"),
            key("seed", "1", "random seed"),
            key("points", "200", "collocation points"),
            key("ridge", "1", "ridge parameter in the scaled inner-product metric"),
            key("eval_points", "500", "evaluation points"),
            key(
                "quadrature",
                "0",
                "midpoint nodes per axis (0 = twenty per length scale)",
            ),
            key("grid", "100", "normalization grid points"),
        ],
    },
    Schema {
        command: "fuzzy-baseline",
        about: "Fuzzy transform next to the hyperdimensional transform of a preset",
        keys: &[
            key("preset", "x_sin_10x", "function preset"),
            key("nodes", "21", "fuzzy partition nodes"),
            key("lambda", "0.05", "length scale"),
            key("dim", "10000", "dimensionality"),
            key("seed", "1", "random seed"),
            key("points", "500", "evaluation points"),
            key("quadrature", "0", "midpoint nodes (0 = twenty per length scale)"),
            key("grid", "100", "normalization grid points"),
        ],
    },
];

pub fn schema(command: &str) -> Option<&'static Schema> {
    SCHEMAS.iter().find(|s| s.command == command)
}

/// Parses config text into `(key, value)` pairs in file order.
pub fn parse_config_text(text: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut out = Vec::new();
    let mut commented = false;
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let body = match line.strip_prefix('#') {
            Some(rest) if rest.contains('=') => {
                commented = true;
                rest.trim()
            }
            Some(_) => continue,
            // The header of a CSV written by this tool ends its echoed settings.
            None if commented && !line.contains('=') => break,
            None => line,
        };
        let (k, v) = body
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("line {}: expected key=value, got `{line}`", n + 1)))?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

/// Fully resolved settings for one subcommand.
#[derive(Clone, Debug)]
pub struct RunConfig {
    schema: &'static Schema,
    values: BTreeMap<&'static str, String>,
}

impl RunConfig {
    pub fn resolve(
        schema: &'static Schema,
        file: &[(String, String)],
        cli: &[(String, String)],
    ) -> Result<Self, CliError> {
        let mut values: BTreeMap<&'static str, String> =
            schema.keys.iter().map(|k| (k.name, k.default.to_string())).collect();
        for (source, pairs) in [("config file", file), ("command line", cli)] {
            for (k, v) in pairs {
                if k.starts_with("result.") {
                    continue;
                }
                if k == "command" {
                    if v != schema.command {
                        return Err(CliError::Config(format!(
                            "{source} is for `{v}`, not `{}`",
                            schema.command
                        )));
                    }
                    continue;
                }
                let key =
                    schema.keys.iter().find(|s| s.name == k).ok_or_else(|| {
                        CliError::Config(format!("{source}: unknown key `{k}` for `{}`", schema.command))
                    })?;
                values.insert(key.name, v.clone());
            }
        }
        Ok(Self { schema, values })
    }

    pub fn command(&self) -> &'static str {
        self.schema.command
    }

    /// Value of `key`, or `None` when this subcommand has no such key.
    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn str(&self, key: &str) -> &str {
        self.values
            .get(key)
            .map(String::as_str)
            .unwrap_or_else(|| panic!("no key {key}"))
    }

    fn parse<T: std::str::FromStr>(&self, key: &str) -> Result<T, CliError>
    where
        T::Err: std::fmt::Display,
    {
        let v = self.str(key);
        v.parse().map_err(|e| CliError::Config(format!("`{key}` = `{v}`: {e}")))
    }

    pub fn f64(&self, key: &str) -> Result<f64, CliError> {
        let v: f64 = self.parse(key)?;
        if !v.is_finite() {
            return Err(CliError::Config(format!("`{key}` must be finite")));
        }
        Ok(v)
    }

    pub fn usize(&self, key: &str) -> Result<usize, CliError> {
        self.parse(key)
    }

    pub fn u64(&self, key: &str) -> Result<u64, CliError> {
        self.parse(key)
    }

    pub fn bool(&self, key: &str) -> Result<bool, CliError> {
        self.parse(key)
    }

    pub fn list<T: std::str::FromStr>(&self, key: &str) -> Result<Vec<T>, CliError>
    where
        T::Err: std::fmt::Display,
    {
        self.str(key)
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse()
                    .map_err(|e| CliError::Config(format!("`{key}` entry `{s}`: {e}")))
            })
            .collect()
    }

    /// Writes `command` and every resolved key, in schema order.
    pub fn echo(&self, table: &mut Table) {
        table.meta("command", self.schema.command);
        for k in self.schema.keys {
            table.meta(k.name, &self.values[k.name]);
        }
    }
}
