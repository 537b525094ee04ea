//! Angular-momentum algebra for a single electric-dipole transition
//! `Fg -> Fe`: level structure, the dimensionless dipole operator, the
//! Zeeman operator, branching ratios and polarization vectors.
//!
//! Conventions (used everywhere in the crate):
//!
//! * Sublevels are ordered `[g: -Fg..=Fg, e: -Fe..=Fe]`.
//! * Spherical components follow Condon-Shortley. The vector operator
//!   satisfies `Q^{q†} = (-1)^q Q^{-q}` and its absorption matrix element is
//!   `<Fe me| Q^q |Fg mg> = <Fg mg; 1 q | Fe me>`.
//! * `Q_ge^q = P_g Q^q P_e`, so `<Fg mg| Q_ge^q |Fe me> = (-1)^q <Fg mg; 1 -q | Fe me>`,
//!   nonzero only for `mg = me + q`. With this normalization
//!   `Σ_q Q_eg^q Q_ge^q = 1_e`, which makes spontaneous decay with unit
//!   branching ratio trace preserving.
//! * The scalar product with a polarization is `e·Q = Σ_q (-1)^q c_q Q^{-q}`.

mod wigner;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};

pub use wigner::{
    clebsch_gordan, clebsch_gordan_twice, wigner3j, wigner3j_twice, wigner6j, wigner6j_squared_exact,
    wigner6j_twice, HalfInt, MAX_TWICE_J,
};

/// Level structure of the transition and gyromagnetic factors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngularState {
    fg: HalfInt,
    fe: HalfInt,
    /// Ground-state g factor.
    pub gg: f64,
    /// Excited-state g factor.
    pub ge: f64,
}

impl AngularState {
    pub fn new(fg: f64, fe: f64, gg: f64, ge: f64) -> Result<Self> {
        Self::from_halfint(HalfInt::new(fg)?, HalfInt::new(fe)?, gg, ge)
    }

    pub fn from_halfint(fg: HalfInt, fe: HalfInt, gg: f64, ge: f64) -> Result<Self> {
        let (tg, te) = (fg.twice(), fe.twice());
        if tg < 0 || te < 0 {
            return Err(Error::Parameter(format!(
                "angular momenta must be non-negative (Fg = {fg}, Fe = {fe})"
            )));
        }
        if (tg - te).abs() > 2 || (tg - te) % 2 != 0 {
            return Err(Error::Parameter(format!(
                "Fg = {fg} -> Fe = {fe} is not an electric-dipole transition"
            )));
        }
        if tg == 0 && te == 0 {
            return Err(Error::Parameter("Fg = Fe = 0 is dipole forbidden".into()));
        }
        if tg > MAX_TWICE_J || te > MAX_TWICE_J {
            return Err(Error::Parameter(format!(
                "angular momentum above {} is not supported",
                HalfInt::from_twice(MAX_TWICE_J)
            )));
        }
        if !gg.is_finite() || !ge.is_finite() {
            return Err(Error::Parameter("g factors must be finite".into()));
        }
        Ok(AngularState { fg, fe, gg, ge })
    }

    pub fn fg(&self) -> HalfInt {
        self.fg
    }

    pub fn fe(&self) -> HalfInt {
        self.fe
    }

    /// Number of ground sublevels, `2Fg + 1`.
    pub fn dg(&self) -> usize {
        (self.fg.twice() + 1) as usize
    }

    /// Number of excited sublevels, `2Fe + 1`.
    pub fn de(&self) -> usize {
        (self.fe.twice() + 1) as usize
    }

    pub fn n(&self) -> usize {
        self.dg() + self.de()
    }

    /// Doubled magnetic quantum number of ground sublevel `i`.
    pub fn ground_m_twice(&self, i: usize) -> i32 {
        2 * i as i32 - self.fg.twice()
    }

    /// Doubled magnetic quantum number of excited sublevel `i`.
    pub fn excited_m_twice(&self, i: usize) -> i32 {
        2 * i as i32 - self.fe.twice()
    }
}

/// Polarization vector in the spherical basis, `(c_-1, c_0, c_+1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Polarization {
    components: [Complex64; 3],
}

impl Polarization {
    /// Builds a polarization; the components must have unit norm.
    pub fn new(c_minus: Complex64, c_zero: Complex64, c_plus: Complex64) -> Result<Self> {
        let norm = c_minus.norm_sqr() + c_zero.norm_sqr() + c_plus.norm_sqr();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::Parameter(format!(
                "polarization norm is {norm}, expected 1"
            )));
        }
        Ok(Polarization {
            components: [c_minus, c_zero, c_plus],
        })
    }

    /// Linear polarization along x, with the quantization axis along z.
    pub fn linear_x() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Polarization {
            components: [Complex64::new(h, 0.0), Complex64::zero(), Complex64::new(-h, 0.0)],
        }
    }

    /// Linear polarization along the quantization axis (pure π light).
    pub fn linear_z() -> Self {
        Polarization {
            components: [Complex64::zero(), Complex64::new(1.0, 0.0), Complex64::zero()],
        }
    }

    /// Spherical component `c_q`, `q ∈ {-1, 0, 1}`.
    pub fn component(&self, q: i32) -> Complex64 {
        assert!((-1..=1).contains(&q), "spherical index {q}");
        self.components[(q + 1) as usize]
    }

    pub fn norm(&self) -> f64 {
        self.components.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// Spherical components of `P_g Q P_e`.
#[derive(Debug, Clone, PartialEq)]
pub struct DipoleComponents {
    ge: [DMatrix<Complex64>; 3],
    eg: [DMatrix<Complex64>; 3],
}

impl DipoleComponents {
    /// `Q_ge^q`, a `dg × de` matrix.
    pub fn ge(&self, q: i32) -> &DMatrix<Complex64> {
        &self.ge[(q + 1) as usize]
    }

    /// `Q_eg^q = (Q_ge^q)†`, a `de × dg` matrix.
    pub fn eg(&self, q: i32) -> &DMatrix<Complex64> {
        &self.eg[(q + 1) as usize]
    }

    /// The absorption part of `e·Q`, `P_e (e·Q) P_g = Σ_q c_q Q_eg^q` (`de × dg`).
    pub fn absorption_operator(&self, pol: &Polarization) -> DMatrix<Complex64> {
        (-1..=1).fold(DMatrix::zeros(self.eg[0].nrows(), self.eg[0].ncols()), |acc, q| {
            acc + self.eg(q) * pol.component(q)
        })
    }
}

/// Builds the dimensionless dipole matrices for `state`.
pub fn dipole_components(state: &AngularState) -> DipoleComponents {
    let (dg, de) = (state.dg(), state.de());
    let (tfg, tfe) = (state.fg.twice(), state.fe.twice());
    let build = |q: i32| {
        let phase = if q % 2 == 0 { 1.0 } else { -1.0 };
        DMatrix::from_fn(dg, de, |i, j| {
            let mg = state.ground_m_twice(i);
            let me = state.excited_m_twice(j);
            if mg != me + 2 * q {
                return Complex64::zero();
            }
            // Arguments are in range by construction of AngularState.
            let cg = clebsch_gordan_twice(tfg, mg, 2, -2 * q, tfe, me)
                .expect("quantum numbers validated by AngularState");
            Complex64::new(phase * cg, 0.0)
        })
    };
    let ge = [build(-1), build(0), build(1)];
    let eg = [ge[0].adjoint(), ge[1].adjoint(), ge[2].adjoint()];
    DipoleComponents { ge, eg }
}

/// Diagonal magnetic-moment operator `M_z` in Larmor units (`μ_B/ħ = 1`):
/// `g_g m_g` on ground sublevels and `g_e m_e` on excited sublevels.
///
/// The Zeeman Hamiltonian is `H_B = -M_z B`; the sign is applied by the
/// Liouvillian.
pub fn zeeman_operator(state: &AngularState) -> DMatrix<f64> {
    let dg = state.dg();
    let diag = (0..state.n()).map(|i| {
        if i < dg {
            state.gg * f64::from(state.ground_m_twice(i)) / 2.0
        } else {
            state.ge * f64::from(state.excited_m_twice(i - dg)) / 2.0
        }
    });
    DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(state.n(), diag))
}

struct HyperfineLevels {
    je: i32,
    jg: i32,
    i: i32,
    fe: i32,
}

impl HyperfineLevels {
    fn parse(je: f64, jg: f64, nuclear: f64, fe: f64) -> Result<Self> {
        Ok(HyperfineLevels {
            je: HalfInt::new(je)?.twice(),
            jg: HalfInt::new(jg)?.twice(),
            i: HalfInt::new(nuclear)?.twice(),
            fe: HalfInt::new(fe)?.twice(),
        })
    }

    /// Allowed ground hyperfine levels `|Jg - I| ..= Jg + I` (doubled).
    fn ground_levels(&self) -> impl Iterator<Item = i32> {
        ((self.jg - self.i).abs()..=self.jg + self.i).step_by(2)
    }

    fn unnormalized(&self, fg: i32) -> Result<f64> {
        let w = wigner6j_twice(self.je, self.jg, 2, fg, self.fe, self.i)?;
        Ok(f64::from(fg + 1) * f64::from(self.je + 1) * w * w)
    }

    fn unnormalized_exact(&self, fg: i32) -> BigRational {
        wigner6j_squared_exact(self.je, self.jg, 2, fg, self.fe, self.i)
            * BigRational::from_integer(BigInt::from((fg + 1) * (self.je + 1)))
    }
}

/// Fraction of spontaneous decays from `(Je, Fe)` that land in `(Jg, Fg)`,
/// for nuclear spin `I`. Returns 0 when the coupling is forbidden.
pub fn branching_ratio(je: f64, jg: f64, nuclear: f64, fe: f64, fg: f64) -> Result<f64> {
    let levels = HyperfineLevels::parse(je, jg, nuclear, fe)?;
    let fg = HalfInt::new(fg)?.twice();
    let total: f64 = levels
        .ground_levels()
        .map(|f| levels.unnormalized(f))
        .sum::<Result<f64>>()?;
    if total == 0.0 {
        return Ok(0.0);
    }
    Ok(levels.unnormalized(fg)? / total)
}

/// Exact rational version of [`branching_ratio`].
pub fn branching_ratio_exact(
    je: f64,
    jg: f64,
    nuclear: f64,
    fe: f64,
    fg: f64,
) -> Result<BigRational> {
    let levels = HyperfineLevels::parse(je, jg, nuclear, fe)?;
    let fg = HalfInt::new(fg)?.twice();
    let total = levels
        .ground_levels()
        .map(|f| levels.unnormalized_exact(f))
        .fold(BigRational::zero(), |acc, x| acc + x);
    if total.is_zero() {
        return Ok(total);
    }
    Ok(levels.unnormalized_exact(fg) / total)
}
