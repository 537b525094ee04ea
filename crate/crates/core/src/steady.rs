//! Zeroth-order steady state and the static absorption signal.

use num_complex::Complex64;

use crate::angular::{dipole_components, AngularState, Polarization};
use crate::error::{Error, Result};
use crate::liouvillian::{build_superoperator, source_vector, DensityMatrix, Superoperator, SystemParams};
use crate::linalg::{self, CMatrix, CVector};

/// Largest Hermitization correction accepted from the linear solve.
pub const HERMITIZATION_TOLERANCE: f64 = 1e-9;

/// Solves `M vec(σ) + P = 0` by LU with partial pivoting and returns the
/// Hermitized solution.
///
/// Fails when `M` is singular or its condition estimate exceeds
/// [`linalg::MAX_CONDITION`], and when the solution is not Hermitian to
/// [`HERMITIZATION_TOLERANCE`].
pub fn steady_state(m: &Superoperator, source: &CVector) -> Result<DensityMatrix> {
    steady_state_in(m, source, "steady state")
}

fn steady_state_in(m: &Superoperator, source: &CVector, context: &str) -> Result<DensityMatrix> {
    let y = linalg::solve(m.matrix(), &(-source), context)?;
    let mut sigma = DensityMatrix::from_vector(&y, m.state());
    let correction = sigma.hermitize();
    if correction > HERMITIZATION_TOLERANCE {
        return Err(Error::Solver {
            reason: format!("steady state is not Hermitian (defect {correction:.3e})"),
            condition: f64::NAN,
            context: context.to_string(),
        });
    }
    Ok(sigma)
}

/// Builds `M` at `p.b0` and solves for the steady state.
pub fn solve_params(p: &SystemParams) -> Result<(Superoperator, DensityMatrix)> {
    p.require_relaxation()?;
    let m = build_superoperator(p, p.b0)?;
    let sigma = steady_state_in(&m, &source_vector(p), &p.describe())?;
    Ok((m, sigma))
}

/// Absorption signal `Im Tr(σ P_e (e·Q) P_g)` in arbitrary units.
///
/// Positive values mean absorption: the rate at which the field populates
/// the excited state is `Ω` times this quantity.
pub fn absorption(sigma: &DensityMatrix, pol: &Polarization) -> f64 {
    AbsorptionProbe::new(sigma.state(), pol).measure(sigma.matrix())
}

/// [`absorption`] with the dipole operator precomputed, for repeated use.
#[derive(Debug, Clone)]
pub struct AbsorptionProbe {
    /// `(ground, excited, X_eg)` for the nonzero elements of `X`.
    terms: Vec<(usize, usize, Complex64)>,
}

impl AbsorptionProbe {
    pub fn new(state: &AngularState, pol: &Polarization) -> Self {
        let dg = state.dg();
        let x = dipole_components(state).absorption_operator(pol);
        let mut terms = Vec::new();
        for g in 0..dg {
            for e in 0..state.de() {
                if x[(e, g)] != Complex64::new(0.0, 0.0) {
                    terms.push((g, dg + e, x[(e, g)]));
                }
            }
        }
        AbsorptionProbe { terms }
    }

    /// `Im Tr(σ X)`; only the `(g, e)` block of `σ` contributes.
    pub fn measure(&self, sigma: &CMatrix) -> f64 {
        self.terms
            .iter()
            .map(|&(g, e, x)| sigma[(g, e)] * x)
            .sum::<Complex64>()
            .im
    }
}
