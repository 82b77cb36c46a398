use std::f64::consts::LN_2;

use proptest::prelude::*;
use williamson::gaussian::{
    entanglement_entropy, entropy_difference_bound, is_pure, mode_entropy, reduced_state,
    GaussianState,
};
use williamson::random;
use williamson::Matrix;

fn conjugate(s: &Matrix, g: &Matrix) -> Matrix {
    (&(&s.transpose() * g) * s).symmetrize()
}

#[test]
fn terms_increase_with_d() {
    let grid: Vec<f64> = (0..2000).map(|k| 1.0 + k as f64 * 0.01).collect();
    for w in grid.windows(2) {
        assert!(mode_entropy(w[1]) > mode_entropy(w[0]));
    }
    assert_eq!(mode_entropy(1.0), 0.0);
    assert!((mode_entropy(3.0) - 2.0 * LN_2).abs() < 1e-15);
}

#[test]
fn two_mode_squeezed_vacuum() {
    // Pure two-mode squeezed state: each half is thermal with d = cosh 2r.
    let r: f64 = 0.6;
    let (c, s) = ((2.0 * r).cosh(), (2.0 * r).sinh());
    let g = Matrix::from_rows(&[
        [c, s, 0.0, 0.0],
        [s, c, 0.0, 0.0],
        [0.0, 0.0, c, -s],
        [0.0, 0.0, -s, c],
    ])
    .unwrap();
    assert!(is_pure(&g).unwrap());
    let state = GaussianState::centered(g).unwrap();
    let a = state.reduce(&[0]).unwrap().entropy().unwrap();
    let b = state.reduce(&[1]).unwrap().entropy().unwrap();
    assert!((a.entropy - mode_entropy(c)).abs() < 1e-12);
    assert!((a.entropy - b.entropy).abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn symplectic_invariance(seed in any::<u64>(), n in 1usize..5) {
        let mut rng = random::rng(seed);
        let g = random::covariance::<f64>(&mut rng, n, 1.0, 4.0, 0.5);
        let s = random::symplectic::<f64>(&mut rng, n, 0.5);
        let h = entanglement_entropy(&g).unwrap().entropy;
        let hs = entanglement_entropy(&conjugate(&s, &g)).unwrap().entropy;
        prop_assert!((h - hs).abs() <= 1e-8, "{h} vs {hs}");
    }

    #[test]
    fn zero_entropy_iff_pure(seed in any::<u64>(), n in 1usize..5, mixed in any::<bool>()) {
        let mut rng = random::rng(seed);
        let g = if mixed {
            random::covariance::<f64>(&mut rng, n, 1.05, 3.0, 0.5)
        } else {
            let s = random::symplectic::<f64>(&mut rng, n, 0.5);
            (&s.transpose() * &s).symmetrize()
        };
        let h = entanglement_entropy(&g).unwrap().entropy;
        prop_assert_eq!(is_pure(&g).unwrap(), !mixed);
        if mixed {
            prop_assert!(h > 1e-3);
        } else {
            prop_assert!(h.abs() <= 1e-9, "{h}");
        }
    }

    #[test]
    fn product_state_entropy_adds(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let nu: Vec<f64> = (0..3).map(|_| random::uniform(&mut rng, 1.0, 5.0)).collect();
        let mut dd = nu.clone();
        dd.extend_from_slice(&nu);
        let g = Matrix::from_diagonal(&dd);
        let h = entanglement_entropy(&reduced_state(&g, &[0, 2]).unwrap()).unwrap().entropy;
        prop_assert!((h - mode_entropy(nu[0]) - mode_entropy(nu[2])).abs() < 1e-12);
    }

    #[test]
    fn continuity_interior(seed in any::<u64>(), n in 1usize..4, t in 1e-4f64..1e-1) {
        let mut rng = random::rng(seed);
        let g = random::covariance::<f64>(&mut rng, n, 1.5, 4.0, 0.3);
        let e = random::unit_symmetric::<f64>(&mut rng, 2 * n);
        let g2 = (&g + &e.scale(t)).symmetrize();
        let r = entropy_difference_bound(&g, &g2).unwrap();
        prop_assert!(r.holds, "{r:?}");
    }
}
