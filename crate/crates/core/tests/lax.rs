use nalgebra::DMatrix;
use ncpii_core::flow::{compile_rhs, JetState};
use ncpii_core::laxpair::{
    build_l, build_m, compatibility_residual_symbolic, lax_coefficients, zero_curvature_numeric,
};
use ncpii_core::ncalg::{GaussianRational, Letter, NcPoly};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_state(rng: &mut ChaCha8Rng, n: usize, r: usize) -> JetState {
    let w = (0..2 * n)
        .map(|_| {
            DMatrix::from_fn(r, r, |_, _| {
                Complex64::new(rng.random_range(-1.0..1.0), 0.0)
            })
        })
        .collect();
    JetState {
        t: rng.random_range(-1.0..1.0),
        w,
    }
}

fn random_lambda(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0))
}

#[test]
fn compatibility_through_third_member() {
    for n in 1..=3 {
        for r in compatibility_residual_symbolic(n).unwrap() {
            assert!(r.residual.is_zero(), "n = {n}, {}", r.equation);
        }
    }
}

#[test]
fn base_case_coefficients() {
    let i = GaussianRational::i();
    let half = GaussianRational::ratio(1, 2);
    for n in 1..=3 {
        let co = lax_coefficients(n).unwrap();
        assert_eq!(co.f_at(2 * n - 1), &NcPoly::w(0).scale(&-&i));
        assert!(co.e_at(2 * n - 1).is_zero());
        assert_eq!(co.g_at(2 * n - 2), &NcPoly::w(1).scale(&half.times_i()));
        assert_eq!(
            co.a_at(2 * n - 2),
            &(&NcPoly::w(0) * &NcPoly::w(0)).scale(&half)
        );
    }
}

#[test]
fn m_has_sigma1_parity() {
    // L obeys s1 L(lambda) s1 = L(-lambda) without the sign
    assert!(!build_l().has_sigma1_parity());
    for n in 1..=3 {
        assert!(build_m(&lax_coefficients(n).unwrap()).has_sigma1_parity());
    }
}

#[test]
fn zero_curvature_on_consistent_jets() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for n in 1..=2 {
        let rhs = compile_rhs(n).unwrap();
        for _ in 0..3 {
            let state = random_state(&mut rng, n, 2);
            let jet = rhs.consistent_jet(&state, &[0.0, 0.4]).unwrap();
            for _ in 0..5 {
                let z = zero_curvature_numeric(n, &jet, random_lambda(&mut rng)).unwrap();
                assert!(z.relative() < 1e-10, "n = {n}: {z:?}");
            }
        }
    }
}

#[test]
fn perturbation_response_is_linear_with_weight_four_to_minus_n() {
    // W_{2nS} reaches dM/dS only through the blocks +-dG_0/2, with weight 4^{-n}
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for n in 1..=2 {
        let rhs = compile_rhs(n).unwrap();
        let state = random_state(&mut rng, n, 2);
        let mut jet = rhs.consistent_jet(&state, &[0.1, -0.2]).unwrap();
        let top = Letter::W(2 * n as u32);
        let delta = 1e-3;
        let mut bumped = jet.get(top).unwrap().clone();
        bumped[(0, 1)] += Complex64::new(delta, 0.0);
        jet.set(top, bumped);
        let z = zero_curvature_numeric(n, &jet, random_lambda(&mut rng)).unwrap();
        let want = delta * 0.25f64.powi(n as i32);
        assert!(
            (z.residual - want).abs() < 1e-12 * (1.0 + z.scale),
            "n = {n}: {z:?}"
        );
    }
}
