//! The optical Bloch (Liouville) equation of a Zeeman-degenerate two-level
//! transition, written as a superoperator acting on vectorized density
//! matrices.
//!
//! All rates are in units of the spontaneous decay rate `Γ = 1`; magnetic
//! fields enter as Larmor frequencies `μ_B B / ħ` in the same units. The
//! equation assembled here is
//!
//! ```text
//! σ̇ = -i[Δ P_e - M_z B + V, σ] - (1 + γ_coll)/2 {P_e, σ}
//!     + b Σ_q Q_ge^q σ Q_eg^q - γ σ + γ σ₀ + γ_coll P_e Tr(P_e σ)/(2Fe+1)
//! ```
//!
//! with `V = (Ω/2)(P_e (e·Q) P_g + h.c.)`. Everything except the constant
//! `γ σ₀` source is linear in `σ` and goes into [`Superoperator`]; the source
//! is [`source_vector`].

use num_complex::Complex64;

use crate::angular::{dipole_components, zeeman_operator, AngularState, Polarization};
use crate::error::{Error, Result};
use crate::linalg::{self, kron, left_mul, right_mul, CMatrix, CVector};

/// Physical parameters of one transition, in units of `Γ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    pub state: AngularState,
    /// Reduced Rabi frequency `Ω`.
    pub rabi: f64,
    /// Optical detuning `Δ = ω₀ - ω`.
    pub detuning: f64,
    /// Transit relaxation rate `γ`.
    pub gamma: f64,
    /// Collisional decoherence rate of the excited state.
    pub gamma_coll: f64,
    /// Branching ratio `b` back into the driven ground level.
    pub branching: f64,
    /// Static longitudinal field as a Larmor frequency.
    pub b0: f64,
    /// Modulation amplitude as a Larmor frequency.
    pub b1: f64,
    /// Angular modulation frequency `2πf`.
    pub mod_freq: f64,
    pub polarization: Polarization,
}

impl SystemParams {
    /// Parameters with `Ω = 0.01`, `γ = 10⁻³`, `2πf = 10⁻²`, no collisions, a
    /// closed transition, x polarization and `B1 = 0.1 γ`.
    pub fn new(state: AngularState) -> Self {
        let gamma = 1e-3;
        SystemParams {
            state,
            rabi: 0.01,
            detuning: 0.0,
            gamma,
            gamma_coll: 0.0,
            branching: 1.0,
            b0: 0.0,
            b1: 0.1 * gamma,
            mod_freq: 1e-2,
            polarization: Polarization::linear_x(),
        }
    }

    /// Checks the parameter invariants. `γ = 0` is allowed here (a closed,
    /// transit-free system); the steady-state solver requires `γ > 0`.
    pub fn validate(&self) -> Result<()> {
        let finite = [
            ("rabi", self.rabi),
            ("detuning", self.detuning),
            ("gamma", self.gamma),
            ("gamma_coll", self.gamma_coll),
            ("branching", self.branching),
            ("b0", self.b0),
            ("b1", self.b1),
            ("mod_freq", self.mod_freq),
        ];
        if let Some((name, v)) = finite.iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::Parameter(format!("{name} = {v} is not finite")));
        }
        if self.gamma < 0.0 {
            return Err(Error::Parameter(format!("gamma = {} must be >= 0", self.gamma)));
        }
        if self.gamma_coll < 0.0 {
            return Err(Error::Parameter(format!(
                "gamma_coll = {} must be >= 0",
                self.gamma_coll
            )));
        }
        if !(0.0..=1.0).contains(&self.branching) {
            return Err(Error::Parameter(format!(
                "branching = {} must lie in [0, 1]",
                self.branching
            )));
        }
        if self.rabi < 0.0 {
            return Err(Error::Parameter(format!("rabi = {} must be >= 0", self.rabi)));
        }
        Ok(())
    }

    pub(crate) fn require_relaxation(&self) -> Result<()> {
        if self.gamma > 0.0 {
            Ok(())
        } else {
            Err(Error::Parameter(format!(
                "gamma = {} must be > 0 for a unique steady state",
                self.gamma
            )))
        }
    }

    pub(crate) fn describe(&self) -> String {
        format!(
            "Fg={} Fe={} rabi={} detuning={} gamma={} gamma_coll={} b={} B0={}",
            self.state.fg(),
            self.state.fe(),
            self.rabi,
            self.detuning,
            self.gamma,
            self.gamma_coll,
            self.branching,
            self.b0
        )
    }
}

/// Density matrix in the basis `[g: -Fg..=Fg, e: -Fe..=Fe]`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
    state: AngularState,
}

impl DensityMatrix {
    pub fn from_matrix(matrix: CMatrix, state: &AngularState) -> Self {
        assert_eq!(matrix.shape(), (state.n(), state.n()), "density matrix shape");
        DensityMatrix {
            matrix,
            state: *state,
        }
    }

    pub fn from_vector(v: &CVector, state: &AngularState) -> Self {
        Self::from_matrix(linalg::devectorize(v, state.n()), state)
    }

    /// The isotropic ground state `σ₀ = P_g / (2Fg + 1)`.
    pub fn isotropic_ground(state: &AngularState) -> Self {
        let dg = state.dg();
        let w = Complex64::new(1.0 / dg as f64, 0.0);
        let matrix = CMatrix::from_fn(state.n(), state.n(), |i, j| {
            if i == j && i < dg {
                w
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        DensityMatrix {
            matrix,
            state: *state,
        }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn n(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn state(&self) -> &AngularState {
        &self.state
    }

    pub fn vectorize(&self) -> CVector {
        linalg::vectorize(&self.matrix)
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    /// Real parts of the diagonal.
    pub fn populations(&self) -> Vec<f64> {
        self.matrix.diagonal().iter().map(|z| z.re).collect()
    }

    pub fn excited_population(&self) -> f64 {
        self.populations()[self.state.dg()..].iter().sum()
    }

    /// Largest element of the anti-Hermitian part.
    pub fn hermiticity_defect(&self) -> f64 {
        linalg::anti_hermitian_defect(&self.matrix)
    }

    /// Replaces `σ` by `(σ + σ†)/2` and returns the size of the correction.
    pub fn hermitize(&mut self) -> f64 {
        let defect = self.hermiticity_defect();
        self.matrix = (&self.matrix + self.matrix.adjoint()) * Complex64::new(0.5, 0.0);
        defect
    }
}

/// The linear part of the Liouville equation, an `n² × n²` matrix acting on
/// row-major vectorized density matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct Superoperator {
    matrix: CMatrix,
    state: AngularState,
}

impl Superoperator {
    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// Dimension `n` of the density matrices it acts on.
    pub fn n(&self) -> usize {
        self.state.n()
    }

    pub fn state(&self) -> &AngularState {
        &self.state
    }

    pub fn apply(&self, v: &CVector) -> CVector {
        &self.matrix * v
    }

    /// `M σ` for a density matrix, returned as a matrix.
    pub fn apply_matrix(&self, sigma: &CMatrix) -> CMatrix {
        linalg::devectorize(&(&self.matrix * linalg::vectorize(sigma)), self.n())
    }
}

/// Embeds a `rows × cols` block at `(r0, c0)` of an `n × n` zero matrix.
fn embed(block: &CMatrix, n: usize, r0: usize, c0: usize) -> CMatrix {
    let mut m = CMatrix::zeros(n, n);
    m.view_mut((r0, c0), block.shape()).copy_from(block);
    m
}

fn projector(n: usize, range: std::ops::Range<usize>) -> CMatrix {
    CMatrix::from_fn(n, n, |i, j| {
        if i == j && range.contains(&i) {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// Atom-light coupling `V = (Ω/2)(P_e (e·Q) P_g + h.c.)` as an `n × n` matrix.
pub fn coupling_operator(p: &SystemParams) -> CMatrix {
    let state = &p.state;
    let q = dipole_components(state);
    let x = embed(&q.absorption_operator(&p.polarization), state.n(), state.dg(), 0);
    (&x + x.adjoint()) * Complex64::new(p.rabi / 2.0, 0.0)
}

/// Assembles `M` for the field value `field` (Larmor units) so that
/// `vec(σ̇) = M vec(σ) + vec(γ σ₀)`.
pub fn build_superoperator(p: &SystemParams, field: f64) -> Result<Superoperator> {
    p.validate()?;
    if !field.is_finite() {
        return Err(Error::Parameter(format!("field = {field} is not finite")));
    }
    let state = &p.state;
    let (n, dg, de) = (state.n(), state.dg(), state.de());
    let nn = n * n;
    let i = Complex64::new(0.0, 1.0);
    let real = |x: f64| Complex64::new(x, 0.0);

    let pe = projector(n, dg..n);
    let mz = zeeman_operator(state).map(real);
    let hamiltonian = &pe * real(p.detuning) - &mz * real(field) + coupling_operator(p);

    // -i[H, σ]
    let mut m = (left_mul(&hamiltonian) - right_mul(&hamiltonian)) * (-i);
    // -(Γ + γ_coll)/2 {P_e, σ}
    m -= (left_mul(&pe) + right_mul(&pe)) * real((1.0 + p.gamma_coll) / 2.0);
    // b Γ Σ_q Q_ge^q σ Q_eg^q, using vec(A σ B) = (A ⊗ Bᵀ) vec(σ)
    let dip = dipole_components(state);
    for q in -1..=1 {
        let a = embed(dip.ge(q), n, 0, dg);
        let b = embed(dip.eg(q), n, dg, 0);
        m += kron(&a, &b.transpose()) * real(p.branching);
    }
    // -γ σ
    for k in 0..nn {
        m[(k, k)] -= real(p.gamma);
    }
    // γ_coll P_e Tr(P_e σ) / (2Fe + 1)
    if p.gamma_coll != 0.0 {
        let w = real(p.gamma_coll / de as f64);
        for a in dg..n {
            for b in dg..n {
                m[(a * n + a, b * n + b)] += w;
            }
        }
    }
    Ok(Superoperator {
        matrix: m,
        state: *state,
    })
}

/// `vec(γ σ₀)`: `γ/(2Fg + 1)` on the ground-state diagonal, zero elsewhere.
pub fn source_vector(p: &SystemParams) -> CVector {
    let state = &p.state;
    let n = state.n();
    let w = Complex64::new(p.gamma / state.dg() as f64, 0.0);
    let mut v = CVector::zeros(n * n);
    for k in 0..state.dg() {
        v[k * n + k] = w;
    }
    v
}

/// Diagonal of the Zeeman operator as a complex matrix (helper for callers
/// that need `M_z` alongside superoperators).
pub(crate) fn zeeman_complex(state: &AngularState) -> CMatrix {
    zeeman_operator(state).map(|x| Complex64::new(x, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::vectorize;

    fn state(fg: f64, fe: f64) -> AngularState {
        AngularState::new(fg, fe, if fg > fe { 0.5 } else { -0.5 }, 1.0 / 6.0).unwrap()
    }

    fn pseudo_random_hermitian(n: usize, seed: u64) -> CMatrix {
        let mut s = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let mut next = move || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let a = CMatrix::from_fn(n, n, |_, _| Complex64::new(next(), next()));
        &a + a.adjoint()
    }

    fn trace_of(m: &Superoperator, v: &CVector) -> Complex64 {
        let n = m.n();
        let out = m.apply(v);
        (0..n).map(|k| out[k * n + k]).sum()
    }

    #[test]
    fn isotropic_ground_is_stationary_without_fields() {
        let mut p = SystemParams::new(state(2.0, 1.0));
        p.rabi = 0.0;
        p.gamma_coll = 3.0;
        let m = build_superoperator(&p, 0.0).unwrap();
        let sigma0 = DensityMatrix::isotropic_ground(&p.state);
        let out = m.apply(&sigma0.vectorize()) + source_vector(&p);
        assert!(linalg::max_abs(&out) < 1e-15);
        let out = m.apply(&sigma0.vectorize());
        // Without the source the only change is transit loss -γσ₀.
        assert!(linalg::max_abs(&(out + sigma0.vectorize() * Complex64::new(p.gamma, 0.0))) < 1e-15);
    }

    #[test]
    fn closed_transition_conserves_trace() {
        for (fg, fe) in [(2.0, 1.0), (1.0, 2.0), (1.0, 1.0), (0.5, 1.5)] {
            let mut p = SystemParams::new(state(fg, fe));
            p.gamma = 0.0;
            p.gamma_coll = 0.0;
            p.branching = 1.0;
            p.rabi = 0.7;
            p.detuning = 0.3;
            let m = build_superoperator(&p, 0.4).unwrap();
            for seed in 0..10 {
                let sigma = pseudo_random_hermitian(p.state.n(), seed);
                assert!(trace_of(&m, &vectorize(&sigma)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn collisional_repumping_conserves_trace() {
        let mut p = SystemParams::new(state(1.0, 2.0));
        p.gamma = 0.0;
        p.gamma_coll = 4.0;
        p.rabi = 0.3;
        let m = build_superoperator(&p, -0.2).unwrap();
        let sigma = pseudo_random_hermitian(p.state.n(), 42);
        assert!(trace_of(&m, &vectorize(&sigma)).norm() < 1e-12);
    }

    #[test]
    fn dimensions_for_rb87_d1() {
        for (fg, fe) in [(2.0, 1.0), (1.0, 2.0)] {
            let p = SystemParams::new(state(fg, fe));
            let m = build_superoperator(&p, 0.0).unwrap();
            assert_eq!(m.n(), 8);
            assert_eq!(m.matrix().shape(), (64, 64));
        }
    }

    #[test]
    fn preserves_hermiticity() {
        let mut p = SystemParams::new(state(1.0, 2.0));
        p.gamma_coll = 4.0;
        p.branching = 0.5;
        p.rabi = 0.5;
        p.detuning = -1.3;
        let m = build_superoperator(&p, 0.03).unwrap();
        for seed in 0..100 {
            let sigma = pseudo_random_hermitian(p.state.n(), seed);
            let out = m.apply_matrix(&sigma);
            assert!(linalg::anti_hermitian_defect(&out) < 1e-12);
        }
    }

    #[test]
    fn affine_in_field() {
        let mut p = SystemParams::new(state(2.0, 1.0));
        p.rabi = 0.2;
        let m0 = build_superoperator(&p, 0.0).unwrap();
        let m1 = build_superoperator(&p, 1.0).unwrap();
        let b = 0.037;
        let mb = build_superoperator(&p, b).unwrap();
        let expected = m0.matrix() + (m1.matrix() - m0.matrix()) * Complex64::new(b, 0.0);
        assert!((mb.matrix() - expected).camax() < 1e-12);
    }

    #[test]
    fn source_vector_entries() {
        let mut p = SystemParams::new(state(1.0, 2.0));
        p.gamma = 1e-3;
        let v = source_vector(&p);
        let n = p.state.n();
        for k in 0..3 {
            assert!((v[k * n + k].re - 1e-3 / 3.0).abs() < 1e-18);
        }
        let total: Complex64 = v.iter().sum();
        assert!((total.re - 1e-3).abs() < 1e-18);
        for k in 3..n {
            assert_eq!(v[k * n + k], Complex64::new(0.0, 0.0));
        }
    }

    #[test]
    fn rejects_invalid_parameters() {
        let mut p = SystemParams::new(state(2.0, 1.0));
        p.gamma = -1e-3;
        assert!(build_superoperator(&p, 0.0).is_err());
        let mut p = SystemParams::new(state(2.0, 1.0));
        p.branching = 1.2;
        assert!(build_superoperator(&p, 0.0).is_err());
        let p = SystemParams::new(state(2.0, 1.0));
        assert!(build_superoperator(&p, f64::NAN).is_err());
    }

    #[test]
    fn coupling_is_x_dipole_for_linear_x() {
        // e·Q restricted to the optical blocks is Hermitian for real e.
        let p = SystemParams::new(state(1.0, 2.0));
        let v = coupling_operator(&p);
        assert!(linalg::anti_hermitian_defect(&v) < 1e-15);
        assert!(v.camax() > 0.0);
    }
}
