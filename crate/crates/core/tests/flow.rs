mod common;

use ncpii_core::airy::ai_deriv;
use ncpii_core::flow::{
    default_t0, identity_report, initial_jet, integrate, integrate_at, FlowError, FlowSpec,
};
use ncpii_core::fredholm::{CouplingMatrix, FredholmSpec};

#[test]
fn initial_jet_follows_airy_derivatives() {
    let c = CouplingMatrix::real(2, &[0.6, 0.2, 0.2, 0.5], &[0.0, 0.3]).unwrap();
    let t0 = default_t0(1);
    let jet = initial_jet(1, &c, t0, &FlowSpec::default()).unwrap();
    let sigma = [0.0, 0.3];
    let cm = [[0.6, 0.2], [0.2, 0.5]];
    for (m, wm) in jet.w.iter().enumerate() {
        for k in 0..2 {
            for l in 0..2 {
                let x = sigma[k] + sigma[l] + 2.0 * t0;
                let want = -2.0 * 2f64.powi(m as i32) * cm[k][l] * ai_deriv(1, m, x).unwrap();
                assert!((wm[(k, l)].re - want).abs() < 1e-20 + 1e-12 * want.abs());
            }
        }
    }
}

#[test]
fn start_too_early_is_rejected() {
    let c = CouplingMatrix::scalar(1.0).unwrap();
    for n in 1..=2 {
        assert!(matches!(
            initial_jet(n, &c, 1.0, &FlowSpec::default()),
            Err(FlowError::TStartTooSmall { .. })
        ));
        assert!(initial_jet(n, &c, default_t0(n), &FlowSpec::default()).is_ok());
    }
}

#[test]
fn tracks_linear_boundary_behavior() {
    let c = CouplingMatrix::real(2, &[0.6, 0.2, 0.2, 0.5], &[0.0, 0.3]).unwrap();
    let cm = [[0.6, 0.2], [0.2, 0.5]];
    let sigma = [0.0, 0.3];
    for n in 1..=2 {
        let t0 = default_t0(n);
        let traj = integrate(n, &c, t0, t0 + 1.0, &FlowSpec::default()).unwrap();
        let last = traj.states.last().unwrap();
        assert_eq!(last.t, t0 + 1.0);
        for k in 0..2 {
            for l in 0..2 {
                let x = sigma[k] + sigma[l] + 2.0 * last.t;
                let want = -2.0 * cm[k][l] * ai_deriv(n, 0, x).unwrap();
                let got = last.w[0][(k, l)].re;
                assert!(
                    ((got - want) / want).abs() < 1e-6,
                    "n = {n}: {got} vs {want}"
                );
            }
        }
    }
}

#[test]
fn scalar_flow_is_rescaled_hastings_mcleod() {
    // W(t) = -2 q(2 t)
    let c = CouplingMatrix::scalar(1.0).unwrap();
    let times = [0.0, 0.5, 1.0];
    let traj = integrate_at(1, &c, default_t0(1), &times, &FlowSpec::default()).unwrap();
    for t in times {
        let got = traj.nearest(t).w[0][(0, 0)].re;
        let want = -2.0 * common::hastings_mcleod(2.0 * t);
        assert!((got - want).abs() < 1e-8, "t = {t}: {got} vs {want}");
    }
}

#[test]
fn diagonal_coupling_decouples() {
    let both = CouplingMatrix::real(2, &[0.9, 0.0, 0.0, 0.4], &[0.0, 0.0]).unwrap();
    let a = CouplingMatrix::scalar(0.9).unwrap();
    let b = CouplingMatrix::scalar(0.4).unwrap();
    let t0 = default_t0(1);
    let spec = FlowSpec::default();
    let w =
        |c: &CouplingMatrix| integrate_at(1, c, t0, &[0.0], &spec).unwrap().states[0].w[0].clone();
    let wb = w(&both);
    assert!((wb[(0, 0)] - w(&a)[(0, 0)]).norm() < 1e-12);
    assert!((wb[(1, 1)] - w(&b)[(0, 0)]).norm() < 1e-12);
    assert!(wb[(0, 1)].norm() < 1e-15);
}

#[test]
fn stays_zero_without_coupling() {
    let c = CouplingMatrix::real(2, &[0.0; 4], &[0.0, 0.5]).unwrap();
    let traj = integrate(2, &c, 3.0, 0.0, &FlowSpec::default()).unwrap();
    assert!(traj.states.iter().all(|s| s.w_norm() == 0.0));
}

#[test]
fn blow_up_guard_triggers() {
    let c = CouplingMatrix::scalar(1.0).unwrap();
    let spec = FlowSpec {
        blowup: 0.1,
        ..FlowSpec::default()
    };
    assert!(matches!(
        integrate(1, &c, default_t0(1), 0.0, &spec),
        Err(FlowError::BlowUp { .. })
    ));
}

#[test]
fn identity_holds_for_scalar_coupling() {
    let report = identity_report(
        1,
        &CouplingMatrix::scalar(1.0).unwrap(),
        0.0,
        1.0,
        0.1,
        &FlowSpec::default(),
        &FredholmSpec::default(),
    )
    .unwrap();
    assert_eq!(report.rows.len(), 11);
    assert!(report.max_residual < 1e-3, "{report:?}");
}
