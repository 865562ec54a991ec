use nalgebra::DMatrix;
use ncpii_core::ncalg::{
    antiderive, evaluate, from_json, to_json, CompiledPoly, GaussianRational, JetPoint, Letter,
    NcError, NcPoly, Word,
};
use num_complex::Complex64;
use proptest::prelude::*;

fn letter(allow_s: bool, max_order: u32) -> impl Strategy<Value = Letter> {
    let top = if allow_s { 3 } else { 2 };
    (0..top, 0..=max_order).prop_map(|(kind, k)| match kind {
        0 => Letter::U(k),
        1 => Letter::W(k),
        _ => Letter::S,
    })
}

fn coeff() -> impl Strategy<Value = GaussianRational> {
    (-6i64..=6, 1i64..=4, -3i64..=3).prop_map(|(a, b, c)| {
        &GaussianRational::ratio(a, b) + &GaussianRational::from_integer(c).times_i()
    })
}

fn poly_with(allow_s: bool, min_len: usize, max_order: u32) -> impl Strategy<Value = NcPoly> {
    prop::collection::vec(
        (
            coeff(),
            prop::collection::vec(letter(allow_s, max_order), min_len..4),
        ),
        0..5,
    )
    .prop_map(|terms| NcPoly::from_terms(terms.into_iter().map(|(c, ls)| (c, Word(ls)))))
}

fn poly() -> impl Strategy<Value = NcPoly> {
    poly_with(true, 0, 3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &NcPoly::one(), a.clone());
    }

    #[test]
    fn leibniz(a in poly(), b in poly()) {
        let lhs = (&a * &b).derive();
        let rhs = &(&a.derive() * &b) + &(&a * &b.derive());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn reversal_is_anti_automorphism(a in poly(), b in poly()) {
        prop_assert_eq!((&a * &b).reversed(), &b.reversed() * &a.reversed());
        prop_assert_eq!(a.reversed().reversed(), a.clone());
        prop_assert_eq!(a.derive().reversed(), a.reversed().derive());
    }

    #[test]
    fn antiderive_inverts_derive(p in poly_with(false, 1, 1)) {
        let q = antiderive(&p.derive()).unwrap();
        prop_assert_eq!(q, p);
    }

    #[test]
    fn antiderive_rejects_s(p in poly_with(false, 1, 1)) {
        let with_s = &p.derive() + &NcPoly::s();
        prop_assert_eq!(antiderive(&with_s), Err(NcError::SContamination));
    }

    #[test]
    fn json_round_trip(p in poly()) {
        prop_assert_eq!(from_json(&to_json(&p)).unwrap(), p.clone());
        let text = serde_json::to_string(&p).unwrap();
        let back: NcPoly = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in poly(), b in poly(), seed in 0u64..1000) {
        let jet = random_jet(seed, 2, 0.0);
        let ea = evaluate(&a, &jet).unwrap();
        let eb = evaluate(&b, &jet).unwrap();
        let prod = evaluate(&(&a * &b), &jet).unwrap();
        let sum = evaluate(&(&a + &b), &jet).unwrap();
        prop_assert!(max_abs(&(prod - &ea * &eb)) < 1e-9);
        prop_assert!(max_abs(&(sum - (&ea + &eb))) < 1e-9);
        let compiled = CompiledPoly::new(&a).eval(&jet).unwrap();
        prop_assert!(max_abs(&(compiled - ea)) < 1e-9);
    }

    #[test]
    fn derive_matches_path_differences(p in poly(), seed in 0u64..1000) {
        // fourth-order central stencil along a cubic path
        let h = 1e-3;
        let t = 0.2;
        let at = |s: f64| evaluate(&p, &random_jet(seed, 2, s)).unwrap();
        let eight = Complex64::new(8.0, 0.0);
        let fd = (at(t - 2.0 * h) - at(t - h) * eight + at(t + h) * eight - at(t + 2.0 * h))
            / Complex64::new(12.0 * h, 0.0);
        let exact = evaluate(&p.derive(), &random_jet(seed, 2, t)).unwrap();
        let scale = 1.0 + max_abs(&exact);
        prop_assert!(max_abs(&(fd - exact)) / scale < 1e-6);
    }
}

fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Jets of a matrix cubic path `P(t) = A + B t + C t^2 + D t^3` for both `U`
/// and `W`, with `S = diag(sigma) + t`.
fn random_jet(seed: u64, r: usize, t: f64) -> JetPoint {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut mat = || {
        DMatrix::from_fn(r, r, |_, _| {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        })
    };
    let mut jet = JetPoint::new(r);
    let sigma: Vec<f64> = (0..r).map(|k| 0.25 * k as f64).collect();
    jet.set_s(&sigma, t);
    let kinds: [fn(u32) -> Letter; 2] = [Letter::U, Letter::W];
    for kind in kinds {
        let c: Vec<DMatrix<Complex64>> = (0..4).map(|_| mat()).collect();
        for k in 0..8u32 {
            // k-th derivative of sum_j c_j t^j
            let mut m = DMatrix::zeros(r, r);
            for (j, cj) in c.iter().enumerate() {
                let j = j as u32;
                if j >= k {
                    let falling: f64 = ((j - k + 1)..=j).map(f64::from).product();
                    m += cj * Complex64::new(falling * t.powi((j - k) as i32), 0.0);
                }
            }
            jet.set(kind(k), m);
        }
    }
    jet
}

#[test]
fn non_total_derivative_is_rejected() {
    let p = &NcPoly::u(1) * &NcPoly::u(0);
    assert_eq!(
        antiderive(&p),
        Err(NcError::NotATotalDerivative { weight: 5 })
    );
}
