//! First-order response to a modulated field `B(t) = B0 + B1 cos(δt)`: the
//! lock-in in-phase and quadrature absorption signals.
//!
//! Writing `σ = σ⁰ + σ¹(t)` with `σ¹` linear in `B1`, the correction obeys
//! `Ẏ¹ = M Y¹ + A cos(δt)` with `A = vec(i[M_z B1, σ⁰])`. The periodic
//! solution `Y¹ = α cos(δt) + β sin(δt)` satisfies
//!
//! ```text
//! δβ = Mα + A,    -δα = Mβ
//! ```
//!
//! whose solution is `α = -M (δ² + M²)⁻¹ A` and `β = δ (δ² + M²)⁻¹ A`. The
//! minus sign on `α` is what makes the perturbative signals agree with a
//! direct time integration followed by lock-in demodulation (see
//! [`crate::oracle`]).
//!
//! The lock-in reference is `sin(δt)`: the in-phase signal is the absorption
//! of `β` and the quadrature signal the absorption of `α`. With this choice
//! the quasi-static background and the Lorentzian sidebands at
//! `2 g_g B0 = δ` show up in quadrature, and the central dispersive resonance
//! in phase. Both signals are odd in `B0`.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::angular::{AngularState, Polarization};
use crate::error::{Error, Result};
use crate::liouvillian::{zeeman_complex, DensityMatrix, Superoperator, SystemParams};
use crate::linalg::{self, CMatrix, CVector};
use crate::steady::{absorption, solve_params};

/// Periodic first-order response.
#[derive(Debug, Clone, PartialEq)]
pub struct ParametricResponse {
    /// Coefficient of `cos(δt)`.
    pub alpha: CVector,
    /// Coefficient of `sin(δt)`.
    pub beta: CVector,
    pub inphase: f64,
    pub quadrature: f64,
}

/// One point of a field scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignalPoint {
    pub b0: f64,
    pub static_signal: f64,
    pub inphase: f64,
    pub quadrature: f64,
}

impl SignalPoint {
    pub fn scaled(self, w: f64) -> Self {
        SignalPoint {
            b0: self.b0,
            static_signal: w * self.static_signal,
            inphase: w * self.inphase,
            quadrature: w * self.quadrature,
        }
    }
}

/// `A = vec(i [M_z B1, σ⁰])`.
pub fn drive_vector(sigma0: &DensityMatrix, state: &AngularState, b1: f64) -> CVector {
    let mz = zeeman_complex(state) * Complex64::new(b1, 0.0);
    let s = sigma0.matrix();
    let commutator: CMatrix = &mz * s - s * &mz;
    linalg::vectorize(&(commutator * Complex64::new(0.0, 1.0)))
}

/// Solves for `(α, β)`; see the module documentation for the convention.
pub fn alpha_beta(m: &Superoperator, drive: &CVector, mod_freq: f64) -> Result<(CVector, CVector)> {
    if !mod_freq.is_finite() {
        return Err(Error::Argument(format!("modulation frequency {mod_freq}")));
    }
    let mm = m.matrix();
    let mut k = mm * mm;
    let d2 = Complex64::new(mod_freq * mod_freq, 0.0);
    for i in 0..k.nrows() {
        k[(i, i)] += d2;
    }
    let w = linalg::solve(&k, drive, &format!("(δ² + M²) at δ = {mod_freq}"))?;
    let alpha = -(mm * &w);
    let beta = w * Complex64::new(mod_freq, 0.0);
    Ok((alpha, beta))
}

/// `(in-phase, quadrature) = (absorption(β), absorption(α))`.
pub fn lockin_signals(
    alpha: &CVector,
    beta: &CVector,
    state: &AngularState,
    pol: &Polarization,
) -> (f64, f64) {
    let a = DensityMatrix::from_vector(alpha, state);
    let b = DensityMatrix::from_vector(beta, state);
    (absorption(&b, pol), absorption(&a, pol))
}

/// Signature of [`alpha_beta`], so that callers can substitute another solver.
pub type AlphaBetaFn = fn(&Superoperator, &CVector, f64) -> Result<(CVector, CVector)>;

/// Full first-order response at the parameters' static field.
pub fn response(
    m: &Superoperator,
    sigma0: &DensityMatrix,
    p: &SystemParams,
) -> Result<ParametricResponse> {
    response_with(m, sigma0, p, alpha_beta)
}

/// [`response`] with a caller-supplied `(α, β)` solver.
pub fn response_with(
    m: &Superoperator,
    sigma0: &DensityMatrix,
    p: &SystemParams,
    solver: AlphaBetaFn,
) -> Result<ParametricResponse> {
    let drive = drive_vector(sigma0, &p.state, p.b1);
    let (alpha, beta) = solver(m, &drive, p.mod_freq)?;
    let (inphase, quadrature) = lockin_signals(&alpha, &beta, &p.state, &p.polarization);
    Ok(ParametricResponse {
        alpha,
        beta,
        inphase,
        quadrature,
    })
}

/// Static, in-phase and quadrature signals at `p.b0`.
pub fn evaluate(p: &SystemParams) -> Result<SignalPoint> {
    evaluate_with(p, alpha_beta)
}

/// [`evaluate`] with a caller-supplied `(α, β)` solver.
pub fn evaluate_with(p: &SystemParams, solver: AlphaBetaFn) -> Result<SignalPoint> {
    let (m, sigma0) = solve_params(p)?;
    let r = response_with(&m, &sigma0, p, solver)?;
    Ok(SignalPoint {
        b0: p.b0,
        static_signal: absorption(&sigma0, &p.polarization),
        inphase: r.inphase,
        quadrature: r.quadrature,
    })
}

/// Evaluates [`evaluate`] at every static field of `grid`, in parallel, and
/// returns the points in grid order. Errors carry the failing `B0`.
pub fn scan_b0(p: &SystemParams, grid: &[f64]) -> Result<Vec<SignalPoint>> {
    if let Some(bad) = grid.iter().find(|b| !b.is_finite()) {
        return Err(Error::Argument(format!("scan grid contains {bad}")));
    }
    p.require_relaxation()?;
    grid.par_iter()
        .map(|&b0| evaluate(&SystemParams { b0, ..*p }).map_err(|e| e.at("B0", b0)))
        .collect()
}

/// `n` evenly spaced values from `min` to `max` inclusive.
pub fn linear_grid(min: f64, max: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![min],
        _ => (0..n)
            .map(|k| {
                if k == n - 1 {
                    max
                } else {
                    min + (max - min) * k as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}
