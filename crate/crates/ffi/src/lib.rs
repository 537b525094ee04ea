//! C ABI for the Hanle resonance simulator.
//!
//! Every function returns a [`HanleStatus`]; on failure the message is
//! available from [`hanle_last_error`] on the same thread. Simulators are
//! opaque handles created by [`hanle_simulator_new`] and released with
//! [`hanle_simulator_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hanle_core::angular::{branching_ratio, wigner3j, wigner6j, AngularState, Polarization};
use hanle_core::cli::presets;
use hanle_core::doppler::{scan_b0_averaged, DetuningGrid};
use hanle_core::parametric::{evaluate, scan_b0, SignalPoint};
use hanle_core::{Error, SystemParams};

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HanleStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidParameter = 3,
    SolverFailure = 4,
    IntegrationFailure = 5,
    UnknownPreset = 6,
    Panic = 7,
}

/// Light polarization.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HanlePolarization {
    /// Linear, perpendicular to the field (Hanle configuration).
    LinearX = 0,
    /// Linear, along the field.
    LinearZ = 1,
}

/// Physical parameters in units of Γ; fields as Larmor frequencies.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HanleParams {
    pub fg: f64,
    pub fe: f64,
    pub gg: f64,
    pub ge: f64,
    pub rabi: f64,
    pub detuning: f64,
    pub gamma: f64,
    pub gamma_coll: f64,
    pub branching: f64,
    pub b0: f64,
    pub b1: f64,
    pub mod_freq: f64,
    pub polarization: HanlePolarization,
}

/// Signals at one static field.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct HanleSignal {
    pub b0: f64,
    pub static_signal: f64,
    pub inphase: f64,
    pub quadrature: f64,
}

/// Opaque simulator handle.
pub struct HanleSimulator {
    params: SystemParams,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: impl Into<String>) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.into());
}

fn status_of(err: &Error) -> HanleStatus {
    match err {
        Error::Argument(_) => HanleStatus::InvalidArgument,
        Error::Parameter(_) => HanleStatus::InvalidParameter,
        Error::Solver { .. } => HanleStatus::SolverFailure,
        Error::Integration(_) => HanleStatus::IntegrationFailure,
        Error::AtPoint { source, .. } => status_of(source),
    }
}

fn fail(err: Error) -> HanleStatus {
    set_error(err.to_string());
    status_of(&err)
}

/// Runs `f`, converting panics into [`HanleStatus::Panic`].
fn guard(f: impl FnOnce() -> HanleStatus) -> HanleStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic");
            HanleStatus::Panic
        }
    }
}

fn null(what: &str) -> HanleStatus {
    set_error(format!("{what} is null"));
    HanleStatus::NullPointer
}

impl From<SignalPoint> for HanleSignal {
    fn from(p: SignalPoint) -> Self {
        HanleSignal {
            b0: p.b0,
            static_signal: p.static_signal,
            inphase: p.inphase,
            quadrature: p.quadrature,
        }
    }
}

impl HanleParams {
    fn to_core(self) -> Result<SystemParams, Error> {
        let state = AngularState::new(self.fg, self.fe, self.gg, self.ge)?;
        let p = SystemParams {
            state,
            rabi: self.rabi,
            detuning: self.detuning,
            gamma: self.gamma,
            gamma_coll: self.gamma_coll,
            branching: self.branching,
            b0: self.b0,
            b1: self.b1,
            mod_freq: self.mod_freq,
            polarization: match self.polarization {
                HanlePolarization::LinearX => Polarization::linear_x(),
                HanlePolarization::LinearZ => Polarization::linear_z(),
            },
        };
        p.validate()?;
        Ok(p)
    }
}

/// Copies the last error message of this thread into `buf` (NUL-terminated,
/// truncated to `len`). Returns the full message length in bytes.
///
/// # Safety
/// `buf` must be null or valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn hanle_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            ptr::copy_nonoverlapping(msg.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// Fills `out` with a named preset at `B0 = 0`.
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hanle_params_preset(name: *const c_char, out: *mut HanleParams) -> HanleStatus {
    if name.is_null() {
        return null("name");
    }
    if out.is_null() {
        return null("out");
    }
    let name = CStr::from_ptr(name).to_string_lossy().into_owned();
    guard(|| {
        let Some(preset) = presets::find(&name) else {
            set_error(format!("unknown preset {name:?}"));
            return HanleStatus::UnknownPreset;
        };
        let p = match preset.params() {
            Ok(p) => p,
            Err(e) => return fail(e),
        };
        *out = HanleParams {
            fg: preset.fg,
            fe: preset.fe,
            gg: preset.gg,
            ge: preset.ge,
            rabi: p.rabi,
            detuning: p.detuning,
            gamma: p.gamma,
            gamma_coll: p.gamma_coll,
            branching: p.branching,
            b0: p.b0,
            b1: p.b1,
            mod_freq: p.mod_freq,
            polarization: HanlePolarization::LinearX,
        };
        HanleStatus::Ok
    })
}

/// Creates a simulator. On success `*out` owns a handle that must be passed
/// to [`hanle_simulator_free`].
///
/// # Safety
/// `params` must point to a valid struct; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hanle_simulator_new(params: *const HanleParams, out: *mut *mut HanleSimulator) -> HanleStatus {
    if params.is_null() {
        return null("params");
    }
    if out.is_null() {
        return null("out");
    }
    let raw = *params;
    guard(|| match raw.to_core() {
        Ok(params) => {
            *out = Box::into_raw(Box::new(HanleSimulator { params }));
            HanleStatus::Ok
        }
        Err(e) => fail(e),
    })
}

/// Releases a simulator. Null is ignored.
///
/// # Safety
/// `sim` must come from [`hanle_simulator_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn hanle_simulator_free(sim: *mut HanleSimulator) {
    if !sim.is_null() {
        drop(Box::from_raw(sim));
    }
}

/// Static, in-phase and quadrature signals at static field `b0`.
///
/// # Safety
/// `sim` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hanle_simulator_evaluate(sim: *const HanleSimulator, b0: f64, out: *mut HanleSignal) -> HanleStatus {
    if sim.is_null() {
        return null("sim");
    }
    if out.is_null() {
        return null("out");
    }
    let p = SystemParams { b0, ..(*sim).params };
    guard(|| match evaluate(&p) {
        Ok(pt) => {
            *out = pt.into();
            HanleStatus::Ok
        }
        Err(e) => fail(e),
    })
}

/// Scans `n` static fields. With `doppler_points > 0` every point is averaged
/// uniformly over `doppler_points` detunings in `[doppler_min, doppler_max]`.
///
/// # Safety
/// `b0` must be readable and `out` writable for `n` elements.
#[no_mangle]
pub unsafe extern "C" fn hanle_simulator_scan(
    sim: *const HanleSimulator,
    b0: *const f64,
    n: usize,
    doppler_min: f64,
    doppler_max: f64,
    doppler_points: usize,
    out: *mut HanleSignal,
) -> HanleStatus {
    if sim.is_null() {
        return null("sim");
    }
    if n == 0 {
        return HanleStatus::Ok;
    }
    if b0.is_null() {
        return null("b0");
    }
    if out.is_null() {
        return null("out");
    }
    let params = (*sim).params;
    let grid = std::slice::from_raw_parts(b0, n).to_vec();
    let out = std::slice::from_raw_parts_mut(out, n);
    guard(|| {
        let result = if doppler_points == 0 {
            scan_b0(&params, &grid)
        } else {
            DetuningGrid::new(doppler_min, doppler_max, doppler_points)
                .and_then(|d| scan_b0_averaged(&params, &grid, &d))
        };
        match result {
            Ok(points) => {
                for (slot, pt) in out.iter_mut().zip(points) {
                    *slot = pt.into();
                }
                HanleStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Wigner 3-j symbol; arguments must be integers or half-integers.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hanle_wigner3j(j1: f64, j2: f64, j3: f64, m1: f64, m2: f64, m3: f64, out: *mut f64) -> HanleStatus {
    if out.is_null() {
        return null("out");
    }
    guard(|| match wigner3j(j1, j2, j3, m1, m2, m3) {
        Ok(v) => {
            *out = v;
            HanleStatus::Ok
        }
        Err(e) => fail(e),
    })
}

/// Wigner 6-j symbol `{j1 j2 j3; j4 j5 j6}`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hanle_wigner6j(j1: f64, j2: f64, j3: f64, j4: f64, j5: f64, j6: f64, out: *mut f64) -> HanleStatus {
    if out.is_null() {
        return null("out");
    }
    guard(|| match wigner6j(j1, j2, j3, j4, j5, j6) {
        Ok(v) => {
            *out = v;
            HanleStatus::Ok
        }
        Err(e) => fail(e),
    })
}

/// Fraction of spontaneous decays from hyperfine level `fe` (of fine level
/// `je`) that end in ground hyperfine level `fg` (of `jg`), nuclear spin `i`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hanle_branching_ratio(je: f64, jg: f64, i: f64, fe: f64, fg: f64, out: *mut f64) -> HanleStatus {
    if out.is_null() {
        return null("out");
    }
    guard(|| match branching_ratio(je, jg, i, fe, fg) {
        Ok(v) => {
            *out = v;
            HanleStatus::Ok
        }
        Err(e) => fail(e),
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn hanle_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
