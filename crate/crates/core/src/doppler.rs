//! Averaging over optical detuning, standing in for integration over atomic
//! velocity classes (`Δ = -kv`).

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::liouvillian::SystemParams;
use crate::parametric::{evaluate, linear_grid, SignalPoint};

/// Which signal to average.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    Static,
    InPhase,
    Quadrature,
}

impl Quantity {
    pub fn select(self, p: &SignalPoint) -> f64 {
        match self {
            Quantity::Static => p.static_signal,
            Quantity::InPhase => p.inphase,
            Quantity::Quadrature => p.quadrature,
        }
    }
}

/// Weight given to each detuning.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Weighting {
    /// Flat slice of the Doppler profile.
    #[default]
    Uniform,
    /// Gaussian centred on `Δ = 0` with the given standard deviation.
    Gaussian { sigma: f64 },
}

/// Detuning grid and weighting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetuningGrid {
    pub min: f64,
    pub max: f64,
    pub points: usize,
    pub weighting: Weighting,
}

impl Default for DetuningGrid {
    fn default() -> Self {
        DetuningGrid {
            min: -5.0,
            max: 5.0,
            points: 41,
            weighting: Weighting::Uniform,
        }
    }
}

impl DetuningGrid {
    pub fn new(min: f64, max: f64, points: usize) -> Result<Self> {
        let grid = DetuningGrid {
            min,
            max,
            points,
            weighting: Weighting::Uniform,
        };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.min.is_finite() && self.max.is_finite()) || self.min >= self.max {
            return Err(Error::Argument(format!(
                "detuning range [{}, {}] must be finite with min < max",
                self.min, self.max
            )));
        }
        if self.points < 3 || self.points.is_multiple_of(2) {
            return Err(Error::Argument(format!(
                "detuning grid needs an odd number of points >= 3, got {}",
                self.points
            )));
        }
        if let Weighting::Gaussian { sigma } = self.weighting {
            if !(sigma.is_finite() && sigma > 0.0) {
                return Err(Error::Argument(format!("gaussian width {sigma} must be > 0")));
            }
        }
        Ok(())
    }

    pub fn detunings(&self) -> Vec<f64> {
        linear_grid(self.min, self.max, self.points)
    }

    /// Normalized trapezoidal weights (sum to one).
    pub fn weights(&self) -> Vec<f64> {
        let n = self.points;
        let raw: Vec<f64> = self
            .detunings()
            .iter()
            .enumerate()
            .map(|(k, &d)| {
                let trap = if k == 0 || k == n - 1 { 0.5 } else { 1.0 };
                let w = match self.weighting {
                    Weighting::Uniform => 1.0,
                    Weighting::Gaussian { sigma } => (-0.5 * (d / sigma).powi(2)).exp(),
                };
                trap * w
            })
            .collect();
        let total: f64 = raw.iter().sum();
        raw.into_iter().map(|w| w / total).collect()
    }

    /// Weighted mean of `f` over the grid, reduced in grid order.
    pub fn mean(&self, f: impl Fn(f64) -> f64) -> Result<f64> {
        self.validate()?;
        Ok(self
            .detunings()
            .into_iter()
            .zip(self.weights())
            .map(|(d, w)| w * f(d))
            .sum())
    }
}

/// All three signals averaged over the detuning grid (parallel over Δ).
pub fn average_point(p: &SystemParams, grid: &DetuningGrid) -> Result<SignalPoint> {
    grid.validate()?;
    let points: Vec<SignalPoint> = grid
        .detunings()
        .par_iter()
        .map(|&detuning| {
            evaluate(&SystemParams { detuning, ..*p }).map_err(|e| e.at("detuning", detuning))
        })
        .collect::<Result<_>>()?;
    let mut acc = SignalPoint {
        b0: p.b0,
        static_signal: 0.0,
        inphase: 0.0,
        quadrature: 0.0,
    };
    for (pt, w) in points.iter().zip(grid.weights()) {
        acc.static_signal += w * pt.static_signal;
        acc.inphase += w * pt.inphase;
        acc.quadrature += w * pt.quadrature;
    }
    Ok(acc)
}

/// Uniform trapezoidal mean of one signal over `Δ ∈ [min, max]`.
pub fn average_over_detuning(
    p: &SystemParams,
    min: f64,
    max: f64,
    points: usize,
    quantity: Quantity,
) -> Result<f64> {
    let grid = DetuningGrid::new(min, max, points)?;
    Ok(quantity.select(&average_point(p, &grid)?))
}

/// Doppler-averaged field scan, in grid order.
pub fn scan_b0_averaged(p: &SystemParams, b0_grid: &[f64], grid: &DetuningGrid) -> Result<Vec<SignalPoint>> {
    b0_grid
        .par_iter()
        .map(|&b0| average_point(&SystemParams { b0, ..*p }, grid).map_err(|e| e.at("B0", b0)))
        .collect()
}
