//! Named 87Rb D1 parameter bundles.
//!
//! Ground-state g-factors are `+1/2` for `F = 2` and `-1/2` for `F = 1`; both
//! excited D1 levels use `g_e = 1/6`. The central resonance is insensitive to
//! `g_e` at these field scales. Branching ratios and thermal weights are the
//! exact values `5/6, 1/2` and `5/8, 3/8`.

use serde::Serialize;

use crate::angular::{AngularState, Polarization};
use crate::error::Result;
use crate::liouvillian::SystemParams;

pub const GG_F2: f64 = 0.5;
pub const GG_F1: f64 = -0.5;
pub const GE_D1: f64 = 1.0 / 6.0;

/// A named parameter set for one hyperfine transition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
    pub fg: f64,
    pub fe: f64,
    pub gg: f64,
    pub ge: f64,
    pub rabi: f64,
    pub gamma: f64,
    pub gamma_coll: f64,
    pub mod_freq: f64,
    pub branching: f64,
    /// Thermal occupation of the lower level, used when composing transitions.
    pub weight: f64,
}

const VACUUM: (f64, f64, f64) = (1e-3, 0.0, 1e-2);
const BUFFER: (f64, f64, f64) = (1e-5, 4.0, 1e-3);

const fn preset(
    name: &'static str,
    description: &'static str,
    lower_f2: bool,
    (gamma, gamma_coll, mod_freq): (f64, f64, f64),
) -> Preset {
    Preset {
        name,
        description,
        fg: if lower_f2 { 2.0 } else { 1.0 },
        fe: if lower_f2 { 1.0 } else { 2.0 },
        gg: if lower_f2 { GG_F2 } else { GG_F1 },
        ge: GE_D1,
        rabi: 0.01,
        gamma,
        gamma_coll,
        mod_freq,
        branching: if lower_f2 { 5.0 / 6.0 } else { 0.5 },
        weight: if lower_f2 { 5.0 / 8.0 } else { 3.0 / 8.0 },
    }
}

static PRESETS: [Preset; 4] = [
    preset(
        "rb87-d1-Fg2-Fe1-vacuum",
        "87Rb D1 Fg=2 -> Fe=1, vacuum cell (EIT)",
        true,
        VACUUM,
    ),
    preset(
        "rb87-d1-Fg1-Fe2-vacuum",
        "87Rb D1 Fg=1 -> Fe=2, vacuum cell (EIA)",
        false,
        VACUUM,
    ),
    preset(
        "rb87-d1-Fg2-Fe1-buffer",
        "87Rb D1 Fg=2 -> Fe=1, neon buffer gas",
        true,
        BUFFER,
    ),
    preset(
        "rb87-d1-Fg1-Fe2-buffer",
        "87Rb D1 Fg=1 -> Fe=2, neon buffer gas (EIA turns into EIT)",
        false,
        BUFFER,
    ),
];

pub fn all() -> &'static [Preset] {
    &PRESETS
}

pub fn find(name: &str) -> Option<&'static Preset> {
    PRESETS.iter().find(|p| p.name == name)
}

impl Preset {
    /// Simulator parameters at `B0 = 0`, `Δ = 0`, x polarization and
    /// `B1 = 0.1 γ`.
    pub fn params(&self) -> Result<SystemParams> {
        let state = AngularState::new(self.fg, self.fe, self.gg, self.ge)?;
        let p = SystemParams {
            state,
            rabi: self.rabi,
            detuning: 0.0,
            gamma: self.gamma,
            gamma_coll: self.gamma_coll,
            branching: self.branching,
            b0: 0.0,
            b1: 0.1 * self.gamma,
            mod_freq: self.mod_freq,
            polarization: Polarization::linear_x(),
        };
        p.validate()?;
        Ok(p)
    }
}
