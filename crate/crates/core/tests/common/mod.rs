#![allow(dead_code)]

pub mod racah;

use hanle_core::cli::presets;
use hanle_core::SystemParams;

pub fn preset(name: &str) -> SystemParams {
    presets::find(name).expect("known preset").params().unwrap()
}

pub fn eit_vacuum() -> SystemParams {
    preset("rb87-d1-Fg2-Fe1-vacuum")
}

pub fn eia_vacuum() -> SystemParams {
    preset("rb87-d1-Fg1-Fe2-vacuum")
}

/// Least-squares slope of `ys` against `xs`.
pub fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

pub fn relative(reference: f64, value: f64) -> f64 {
    (value - reference).abs() / reference.abs()
}
