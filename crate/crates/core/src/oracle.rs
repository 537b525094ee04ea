//! Direct time integration of the Liouville equation with the modulated
//! field `B(t) = B0 + B1 cos(δt)`, and a numeric lock-in.
//!
//! This path never forms a superoperator: the right-hand side is evaluated
//! on the density matrix itself. It exists to check the steady-state and
//! perturbative solvers.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::angular::dipole_components;
use crate::error::{Error, Result};
use crate::liouvillian::{coupling_operator, zeeman_complex, DensityMatrix, SystemParams};
use crate::linalg::{self, CMatrix};
use crate::steady::AbsorptionProbe;

/// Largest allowed `dt` times the fastest rate of the problem.
pub const MAX_STEP_FRACTION: f64 = 0.05;

struct Model {
    /// Nonzero elements `(row, col, h)` of `Δ P_e + V`.
    h_static: Vec<(usize, usize, Complex64)>,
    /// Diagonal of `M_z`.
    mz: Vec<f64>,
    /// Elementwise relaxation rate of `σ_ij` (transit plus excited decay).
    damping: Vec<f64>,
    /// `(g1, g2, e1, e2, c)`: `σ_g1g2 += c σ_e1e2` from spontaneous feeding.
    feed: Vec<(usize, usize, usize, usize, f64)>,
    p: SystemParams,
}

impl Model {
    fn new(p: &SystemParams) -> Result<Self> {
        p.validate()?;
        let state = &p.state;
        let (n, dg) = (state.n(), state.dg());
        let mut h_static = coupling_operator(p);
        for i in dg..n {
            h_static[(i, i)] += Complex64::new(p.detuning, 0.0);
        }
        let mz: Vec<f64> = zeeman_complex(state).diagonal().iter().map(|z| z.re).collect();
        let half_width = 0.5 * (1.0 + p.gamma_coll);
        let damping = (0..n * n)
            .map(|k| {
                let excited = usize::from(k / n >= dg) + usize::from(k % n >= dg);
                half_width * excited as f64 + p.gamma
            })
            .collect();

        let dip = dipole_components(state);
        let mut feed = Vec::new();
        for q in -1..=1 {
            let (ge, eg) = (dip.ge(q), dip.eg(q));
            for g1 in 0..dg {
                for e1 in 0..state.de() {
                    for e2 in 0..state.de() {
                        for g2 in 0..dg {
                            let c = (ge[(g1, e1)] * eg[(e2, g2)]).re * p.branching;
                            if c != 0.0 {
                                feed.push((g1, g2, dg + e1, dg + e2, c));
                            }
                        }
                    }
                }
            }
        }
        let h_static = (0..n)
            .flat_map(|r| (0..n).map(move |c| (r, c)))
            .filter(|&(r, c)| h_static[(r, c)] != Complex64::new(0.0, 0.0))
            .map(|(r, c)| (r, c, h_static[(r, c)]))
            .collect();
        Ok(Model {
            h_static,
            mz,
            damping,
            feed,
            p: *p,
        })
    }

    fn field(&self, t: f64) -> f64 {
        self.p.b0 + self.p.b1 * (self.p.mod_freq * t).cos()
    }

    /// Writes `σ̇(t)` into `out`.
    fn rhs(&self, t: f64, s: &CMatrix, out: &mut CMatrix) {
        let p = &self.p;
        let n = s.nrows();
        let dg = p.state.dg();
        let i = Complex64::new(0.0, 1.0);

        // -i[H_static, σ]
        out.fill(Complex64::new(0.0, 0.0));
        for &(r, k, h) in &self.h_static {
            let mh = -i * h;
            for c in 0..n {
                out[(r, c)] += mh * s[(k, c)];
                out[(c, k)] -= mh * s[(c, r)];
            }
        }

        // +iB[M_z, σ] and relaxation, elementwise since M_z is diagonal.
        let b = self.field(t);
        for c in 0..n {
            for r in 0..n {
                let rate = Complex64::new(-self.damping[r * n + c], b * (self.mz[r] - self.mz[c]));
                out[(r, c)] += s[(r, c)] * rate;
            }
        }

        for &(g1, g2, e1, e2, coef) in &self.feed {
            out[(g1, g2)] += s[(e1, e2)] * coef;
        }
        for k in 0..dg {
            out[(k, k)] += Complex64::new(p.gamma / dg as f64, 0.0);
        }
        if p.gamma_coll != 0.0 {
            let pop: Complex64 = (dg..n).map(|k| s[(k, k)]).sum();
            let w = pop * (p.gamma_coll / p.state.de() as f64);
            for k in dg..n {
                out[(k, k)] += w;
            }
        }
    }

    fn fastest_rate(&self) -> f64 {
        let p = &self.p;
        let g = p.state.gg.abs().max(p.state.ge.abs());
        [1.0 + p.gamma_coll, p.rabi, p.detuning.abs(), (p.b0.abs() + p.b1.abs()) * g, p.mod_freq.abs()]
            .into_iter()
            .fold(0.0, f64::max)
    }
}

/// Scratch space for one RK4 step.
struct Stepper {
    k: [CMatrix; 4],
    tmp: CMatrix,
}

impl Stepper {
    fn new(n: usize) -> Self {
        let z = CMatrix::zeros(n, n);
        Stepper {
            k: [z.clone(), z.clone(), z.clone(), z.clone()],
            tmp: z,
        }
    }

    /// Advances `s` from `t` to `t + h` in place.
    fn step(&mut self, model: &Model, t: f64, h: f64, s: &mut CMatrix) {
        let [k1, k2, k3, k4] = &mut self.k;
        let tmp = &mut self.tmp;
        model.rhs(t, s, k1);
        tmp.zip_zip_apply(s, k1, |y, a, b| *y = a + b * (0.5 * h));
        model.rhs(t + 0.5 * h, tmp, k2);
        tmp.zip_zip_apply(s, k2, |y, a, b| *y = a + b * (0.5 * h));
        model.rhs(t + 0.5 * h, tmp, k3);
        tmp.zip_zip_apply(s, k3, |y, a, b| *y = a + b * h);
        model.rhs(t + h, tmp, k4);
        let w = h / 6.0;
        for idx in 0..s.len() {
            s[idx] += (k1[idx] + (k2[idx] + k3[idx]) * 2.0 + k4[idx]) * w;
        }
    }
}

/// Largest step [`integrate`] accepts for these parameters.
pub fn max_step(p: &SystemParams) -> Result<f64> {
    Ok(MAX_STEP_FRACTION / Model::new(p)?.fastest_rate())
}

/// Integrates from `t = 0` to `t_end` with classical RK4, calling `observe`
/// with every state matrix including the initial and final ones. The step is
/// shortened so that an integer number of steps reaches `t_end`.
///
/// Fails if `dt` exceeds [`MAX_STEP_FRACTION`] over the fastest rate or if
/// the state stops being finite.
pub fn integrate_with(
    p: &SystemParams,
    init: &DensityMatrix,
    t_end: f64,
    dt: f64,
    mut observe: impl FnMut(f64, &CMatrix),
) -> Result<DensityMatrix> {
    let model = Model::new(p)?;
    if init.state() != &p.state {
        return Err(Error::Argument("initial state has a different level structure".into()));
    }
    if !(t_end.is_finite() && t_end >= 0.0) {
        return Err(Error::Argument(format!("t_end = {t_end}")));
    }
    let limit = MAX_STEP_FRACTION / model.fastest_rate();
    if !(dt > 0.0 && dt <= limit * (1.0 + 1e-12)) {
        return Err(Error::Argument(format!(
            "dt = {dt} must be positive and at most {limit:.4e}"
        )));
    }
    let steps = (t_end / dt - 1e-9).ceil().max(0.0) as usize;
    let h = if steps == 0 { 0.0 } else { t_end / steps as f64 };

    let mut s = init.matrix().clone();
    let mut stepper = Stepper::new(s.nrows());
    observe(0.0, &s);
    for k in 0..steps {
        let t = k as f64 * h;
        stepper.step(&model, t, h, &mut s);
        if (k % 1024 == 0 || k + 1 == steps) && s.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Integration(format!("non-finite state at t = {t}")));
        }
        observe((k + 1) as f64 * h, &s);
    }
    Ok(DensityMatrix::from_matrix(s, &p.state))
}

/// Sampled trajectory.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrix>,
}

/// Integrates and keeps every state; see [`integrate_with`].
pub fn integrate(p: &SystemParams, init: &DensityMatrix, t_end: f64, dt: f64) -> Result<Trajectory> {
    let mut traj = Trajectory {
        times: Vec::new(),
        states: Vec::new(),
    };
    integrate_with(p, init, t_end, dt, |t, s| {
        traj.times.push(t);
        traj.states.push(DensityMatrix::from_matrix(s.clone(), &p.state));
    })?;
    Ok(traj)
}

/// Demodulates `samples` (taken every `dt` starting at `start`) against
/// `cos(δt)` and `sin(δt)`:
/// `(2/T) ∫ λ(t) cos(δt) dt` and `(2/T) ∫ λ(t) sin(δt) dt` by the trapezoidal
/// rule. The samples must span exactly `periods` modulation periods.
pub fn numeric_lockin(
    samples: &[f64],
    start: f64,
    dt: f64,
    mod_freq: f64,
    periods: usize,
) -> Result<(f64, f64)> {
    if !(mod_freq > 0.0 && dt > 0.0) || periods == 0 || samples.len() < 2 {
        return Err(Error::Argument(
            "lock-in needs a positive frequency, step and period count".into(),
        ));
    }
    let span = (samples.len() - 1) as f64 * dt;
    let window = periods as f64 * TAU / mod_freq;
    if ((span - window) / window).abs() > 1e-9 {
        return Err(Error::Argument(format!(
            "samples span {span}, not {periods} whole periods ({window})"
        )));
    }
    let last = samples.len() - 1;
    let (mut c, mut s) = (0.0, 0.0);
    for (k, &v) in samples.iter().enumerate() {
        let w = if k == 0 || k == last { 0.5 } else { 1.0 };
        let phase = mod_freq * (start + k as f64 * dt);
        c += w * v * phase.cos();
        s += w * v * phase.sin();
    }
    let scale = 2.0 * dt / span;
    Ok((scale * c, scale * s))
}

/// Settings for [`lockin_signals`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LockinSettings {
    /// Transient discarded before demodulation, in units of `1/γ`.
    pub transient: f64,
    /// Demodulated periods.
    pub periods: usize,
    /// Step as a fraction of the largest allowed step.
    pub step_fraction: f64,
}

impl Default for LockinSettings {
    fn default() -> Self {
        LockinSettings {
            transient: 20.0,
            periods: 4,
            step_fraction: 1.0,
        }
    }
}

/// Time-domain lock-in measurement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LockinResult {
    pub inphase: f64,
    pub quadrature: f64,
    /// Mean absorption over the demodulation window.
    pub mean: f64,
    /// Largest anti-Hermitian element seen over the run.
    pub hermiticity_drift: f64,
}

/// Integrates from the isotropic ground state, discards the transient (an
/// integer number of periods at least `transient/γ` long) and demodulates the
/// absorption signal.
pub fn lockin_signals(p: &SystemParams, settings: &LockinSettings) -> Result<LockinResult> {
    if !(p.mod_freq > 0.0) {
        return Err(Error::Argument("lock-in needs mod_freq > 0".into()));
    }
    p.require_relaxation()?;
    if settings.transient < 5.0 {
        return Err(Error::Argument(format!(
            "transient {} / γ is shorter than 5 / γ",
            settings.transient
        )));
    }
    let model = Model::new(p)?;
    let period = TAU / p.mod_freq;
    let dt_max = settings.step_fraction * MAX_STEP_FRACTION / model.fastest_rate();
    let per_period = (period / dt_max).ceil() as usize;
    let dt = period / per_period as f64;
    let skip_periods = (settings.transient / p.gamma / period).ceil() as usize;
    let skip_steps = skip_periods * per_period;
    let total_steps = skip_steps + settings.periods * per_period;

    let probe = AbsorptionProbe::new(&p.state, &p.polarization);
    let mut samples = Vec::with_capacity(settings.periods * per_period + 1);
    let mut drift: f64 = 0.0;
    let mut step = 0usize;
    integrate_with(
        p,
        &DensityMatrix::isotropic_ground(&p.state),
        total_steps as f64 * dt,
        dt,
        |_, s| {
            if step >= skip_steps {
                samples.push(probe.measure(s));
            }
            if step.is_multiple_of(4096) || step == total_steps {
                drift = drift.max(linalg::anti_hermitian_defect(s));
            }
            step += 1;
        },
    )?;
    let start = skip_steps as f64 * dt;
    // Same reference as the perturbative signals: in phase with sin(δt).
    let (quadrature, inphase) = numeric_lockin(&samples, start, dt, p.mod_freq, settings.periods)?;
    let mean = {
        let last = samples.len() - 1;
        samples
            .iter()
            .enumerate()
            .map(|(k, v)| if k == 0 || k == last { 0.5 * v } else { *v })
            .sum::<f64>()
            / last as f64
    };
    Ok(LockinResult {
        inphase,
        quadrature,
        mean,
        hermiticity_drift: drift,
    })
}
