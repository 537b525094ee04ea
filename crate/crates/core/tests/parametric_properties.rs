mod common;

use common::{eit_vacuum, eia_vacuum, preset};
use hanle_core::cli::presets;
use hanle_core::doppler::{average_point, scan_b0_averaged, DetuningGrid};
use hanle_core::linalg;
use hanle_core::parametric::{alpha_beta, drive_vector, evaluate, linear_grid, scan_b0};
use hanle_core::steady::solve_params;
use hanle_core::{DensityMatrix, SystemParams};

#[test]
fn field_parity_of_all_signals() {
    // static even; both lock-in channels odd under B0 -> -B0
    for pr in presets::all() {
        let p = pr.params().unwrap();
        let sb = p.mod_freq / (2.0 * p.state.gg.abs());
        let grid = linear_grid(-2.0 * sb, 2.0 * sb, 41);
        let pts = scan_b0(&p, &grid).unwrap();
        let scale = pts.iter().map(|x| x.inphase.abs().max(x.quadrature.abs())).fold(0.0, f64::max);
        for (a, b) in pts.iter().zip(pts.iter().rev()) {
            assert!((a.static_signal - b.static_signal).abs() < 1e-9 * a.static_signal.abs());
            assert!((a.inphase + b.inphase).abs() < 1e-9 * scale, "{}", pr.name);
            assert!((a.quadrature + b.quadrature).abs() < 1e-9 * scale, "{}", pr.name);
        }
        assert!(pts[20].inphase.abs() < 1e-12 * scale && pts[20].quadrature.abs() < 1e-12 * scale);
    }
}

#[test]
fn first_order_response_is_hermitian() {
    for p in [eit_vacuum(), eia_vacuum(), preset("rb87-d1-Fg1-Fe2-buffer")] {
        for b0 in [-0.004, 0.0007, 0.011] {
            let p = SystemParams { b0, ..p };
            let (m, s) = solve_params(&p).unwrap();
            let a = drive_vector(&s, &p.state, p.b1);
            let (alpha, beta) = alpha_beta(&m, &a, p.mod_freq).unwrap();
            let scale = linalg::max_abs(&alpha).max(linalg::max_abs(&beta));
            for v in [&alpha, &beta] {
                let d = DensityMatrix::from_vector(v, &p.state);
                assert!(d.hermiticity_defect() < 1e-9 * scale);
            }
        }
    }
}

#[test]
fn modulation_frequency_zero_is_the_static_derivative() {
    // δ -> 0: the quadrature channel equals B1 dλ/dB0 and the in-phase one vanishes.
    let p = SystemParams { mod_freq: 0.0, b0: 0.003, ..eit_vacuum() };
    let pt = evaluate(&p).unwrap();
    let h = 1e-6;
    let up = evaluate(&SystemParams { b0: p.b0 + h, ..p }).unwrap().static_signal;
    let down = evaluate(&SystemParams { b0: p.b0 - h, ..p }).unwrap().static_signal;
    let derivative = (up - down) / (2.0 * h);
    assert_eq!(pt.inphase, 0.0);
    assert!((pt.quadrature - p.b1 * derivative).abs() < 1e-6 * pt.quadrature.abs());
}

#[test]
fn averaging_preserves_linearity_in_b1() {
    let grid = DetuningGrid::new(-2.0, 2.0, 9).unwrap();
    let p = SystemParams { b0: 0.006, ..eia_vacuum() };
    let one = average_point(&p, &grid).unwrap();
    let two = average_point(&SystemParams { b1: 2.0 * p.b1, ..p }, &grid).unwrap();
    assert!((two.inphase - 2.0 * one.inphase).abs() < 1e-12 * two.inphase.abs());
    assert!((two.quadrature - 2.0 * one.quadrature).abs() < 1e-12 * two.quadrature.abs());
    assert_eq!(two.static_signal, one.static_signal);
}

#[test]
fn doppler_grid_refinement_converges() {
    let coarse = DetuningGrid::default();
    let fine = DetuningGrid { points: 2 * coarse.points - 1, ..coarse };
    let finer = DetuningGrid { points: 2 * fine.points - 1, ..coarse };
    for p in [eit_vacuum(), eia_vacuum()] {
        for b0 in [0.001, 0.004, 0.01] {
            let p = SystemParams { b0, ..p };
            let a = average_point(&p, &fine).unwrap();
            let b = average_point(&p, &finer).unwrap();
            for (x, y) in [(a.static_signal, b.static_signal), (a.inphase, b.inphase), (a.quadrature, b.quadrature)] {
                assert!((x - y).abs() < 5e-3 * y.abs(), "B0={b0}: {x:e} vs {y:e}");
            }
            let c = average_point(&p, &coarse).unwrap();
            assert!((c.static_signal - b.static_signal).abs() < 5e-3 * b.static_signal.abs());
        }
    }
}

#[test]
fn averaged_scan_keeps_grid_order() {
    let grid = DetuningGrid::new(-1.0, 1.0, 5).unwrap();
    let b0 = [0.01, -0.002, 0.0, 0.004];
    let pts = scan_b0_averaged(&eit_vacuum(), &b0, &grid).unwrap();
    for (pt, b) in pts.iter().zip(b0) {
        assert_eq!(pt.b0, b);
        assert_eq!(*pt, average_point(&SystemParams { b0: b, ..eit_vacuum() }, &grid).unwrap());
    }
}

#[test]
fn scan_errors_carry_the_point() {
    let p = SystemParams { gamma: 1e-16, ..eit_vacuum() };
    let err = scan_b0(&p, &[0.0, 1e-3]).unwrap_err().to_string();
    assert!(err.contains("B0 = "), "{err}");
    let grid = DetuningGrid::new(-1.0, 1.0, 3).unwrap();
    let err = scan_b0_averaged(&p, &[0.0], &grid).unwrap_err().to_string();
    assert!(err.contains("B0 = ") && err.contains("detuning = "), "{err}");
}
