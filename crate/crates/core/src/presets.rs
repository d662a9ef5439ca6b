//! Named test functions.

use std::f64::consts::PI;

use crate::encodings::Domain1D;
use crate::transform::SampledFunction;

#[derive(Clone, Copy, Debug)]
pub struct Preset {
    pub name: &'static str,
    pub f: fn(f64) -> f64,
    pub derivative: fn(f64) -> f64,
    pub a: f64,
    pub b: f64,
}

impl Preset {
    pub fn domain(&self) -> Domain1D {
        Domain1D::new(self.a, self.b).expect("preset domains are valid")
    }

    pub fn function(&self) -> SampledFunction {
        SampledFunction::new(self.f)
    }
}

fn x_sin_10x(x: f64) -> f64 {
    x * (10.0 * x).sin()
}

fn d_x_sin_10x(x: f64) -> f64 {
    (10.0 * x).sin() + 10.0 * x * (10.0 * x).cos()
}

fn step(x: f64) -> f64 {
    if x < 0.5 {
        0.0
    } else {
        1.0
    }
}

pub const PRESETS: &[Preset] = &[
    Preset {
        name: "x_sin_10x",
        f: x_sin_10x,
        derivative: d_x_sin_10x,
        a: 0.0,
        b: 1.0,
    },
    Preset {
        name: "constant",
        f: |_| 1.0,
        derivative: |_| 0.0,
        a: 0.0,
        b: 1.0,
    },
    Preset {
        name: "linear",
        f: |x| x,
        derivative: |_| 1.0,
        a: 0.0,
        b: 1.0,
    },
    Preset {
        name: "step",
        f: step,
        derivative: |_| 0.0,
        a: 0.0,
        b: 1.0,
    },
    Preset {
        name: "sin",
        f: f64::sin,
        derivative: f64::cos,
        a: 0.0,
        b: 2.0 * PI,
    },
    Preset {
        name: "gauss",
        f: |x| (-50.0 * (x - 0.5) * (x - 0.5)).exp(),
        derivative: |x| -100.0 * (x - 0.5) * (-50.0 * (x - 0.5) * (x - 0.5)).exp(),
        a: 0.0,
        b: 1.0,
    },
];

pub fn preset(name: &str) -> Option<Preset> {
    PRESETS.iter().copied().find(|p| p.name == name)
}

pub fn preset_names() -> Vec<&'static str> {
    PRESETS.iter().map(|p| p.name).collect()
}
