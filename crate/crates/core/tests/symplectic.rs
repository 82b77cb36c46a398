use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use proptest::prelude::*;
use williamson::densemat::{determinant, spd_eig};
use williamson::random;
use williamson::symplectic::{gauge_align, is_symplectic, rotate_modes};
use williamson::{norm, standard_form, symplectic_spectrum, williamson, Matrix, NormKind};

fn op(a: &Matrix) -> f64 {
    norm(a, NormKind::Operator).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

/// `√(ac − b²)` with the determinant evaluated exactly.
fn exact_d(a: f64, b: f64, c: f64) -> f64 {
    let q = |v: f64| BigRational::from_float(v).unwrap();
    let det = q(a) * q(c) - q(b) * q(b);
    assert!(det > BigRational::from_integer(BigInt::from(0)));
    det.to_f64().unwrap().sqrt()
}

#[test]
fn known_one_mode_values() {
    let d = symplectic_spectrum(&Matrix::from_rows(&[[2.0, 1.0], [1.0, 5.0]]).unwrap()).unwrap();
    assert_eq!(d, vec![3.0]);
    let f = williamson(&Matrix::from_diagonal(&[4.0, 1.0, 9.0, 1.0])).unwrap();
    assert_eq!(f.d, vec![6.0, 1.0]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn factorization_agrees_with_spectrum(seed in any::<u64>(), n in 1usize..6, kappa in 1.0f64..1e4) {
        let m = random::spd::<f64>(&mut random::rng(seed), 2 * n, kappa);
        let f = williamson(&m).unwrap();
        let d = symplectic_spectrum(&m).unwrap();
        for (a, b) in f.d.iter().zip(&d) {
            prop_assert!(rel(*a, *b) <= 1e-10);
        }
        prop_assert!(f.d.windows(2).all(|w| w[0] >= w[1]));
        prop_assert!(f.pairing_deviation <= 1e-8);
        prop_assert!(f.residual_diag <= 1e-8 * op(&m));
        prop_assert!(f.residual_symp <= 1e-8);
        prop_assert!(is_symplectic(&f.s, 1e-8).unwrap());
        prop_assert!((determinant(&f.s).unwrap() - 1.0).abs() <= 1e-8);
    }

    #[test]
    fn diagonal_norms_dominated(seed in any::<u64>(), n in 1usize..6, kappa in 1.0f64..1e5) {
        let m = random::spd::<f64>(&mut random::rng(seed), 2 * n, kappa);
        let d = symplectic_spectrum(&m).unwrap();
        let s = spd_eig(&m).unwrap();
        prop_assert!(d[0] <= s.max() * (1.0 + 1e-12));
        prop_assert!(1.0 / d[n - 1] <= (1.0 / s.min()) * (1.0 + 1e-12));
    }

    #[test]
    fn scaling_covariance(seed in any::<u64>(), n in 1usize..5, c in 0.1f64..10.0) {
        let mut rng = random::rng(seed);
        // Well separated symplectic eigenvalues keep the canonical gauge stable.
        let nu: Vec<f64> = (0..n).map(|k| 1.0 + k as f64 + random::uniform::<f64>(&mut rng, 0.0, 0.5)).collect();
        let mut dd = nu.clone();
        dd.extend_from_slice(&nu);
        let sy = random::symplectic::<f64>(&mut rng, n, 0.5);
        let m = (&(&sy.transpose() * &Matrix::from_diagonal(&dd)) * &sy).symmetrize();
        let d = symplectic_spectrum(&m).unwrap();
        let dc = symplectic_spectrum(&m.scale(c)).unwrap();
        for (a, b) in d.iter().zip(&dc) {
            prop_assert!(rel(*b, c * a) <= 1e-10);
        }
        let s = williamson(&m).unwrap().s;
        let sc = williamson(&m.scale(c)).unwrap().s;
        prop_assert!(op(&(&s - &sc)) <= 1e-8 * op(&s), "{}", op(&(&s - &sc)));
    }

    #[test]
    fn recovers_planted_spectrum(seed in any::<u64>(), n in 1usize..6) {
        let mut rng = random::rng(seed);
        let mut nu: Vec<f64> = (0..n).map(|_| random::uniform::<f64>(&mut rng, 0.5, 5.0)).collect();
        let mut dd = nu.clone();
        dd.extend_from_slice(&nu);
        let sy = random::symplectic::<f64>(&mut rng, n, 0.7);
        prop_assert!(is_symplectic(&sy, 1e-10).unwrap());
        let m = (&(&sy.transpose() * &Matrix::from_diagonal(&dd)) * &sy).symmetrize();
        nu.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let d = symplectic_spectrum(&m).unwrap();
        for (a, b) in d.iter().zip(&nu) {
            prop_assert!(rel(*a, *b) <= 1e-9);
        }
    }

    #[test]
    fn one_mode_closed_form(a in 1e-3f64..1e3, c in 1e-3f64..1e3, t in -0.999f64..0.999) {
        let b = t * (a * c).sqrt();
        let m = Matrix::from_rows(&[[a, b], [b, c]]).unwrap();
        let d = symplectic_spectrum(&m).unwrap();
        prop_assert!(rel(d[0], exact_d(a, b, c)) <= 1e-12, "{} vs {}", d[0], exact_d(a, b, c));
    }

    #[test]
    fn alignment_undoes_mode_rotations(seed in any::<u64>(), n in 1usize..5) {
        let mut rng = random::rng(seed);
        let nu: Vec<f64> = (0..n).map(|k| 1.0 + 2.0 * k as f64).collect();
        let mut dd = nu.clone();
        dd.extend_from_slice(&nu);
        let sy = random::symplectic::<f64>(&mut rng, n, 0.5);
        let m = (&(&sy.transpose() * &Matrix::from_diagonal(&dd)) * &sy).symmetrize();
        let f = williamson(&m).unwrap();
        let angles: Vec<f64> = (0..n).map(|_| random::uniform::<f64>(&mut rng, -3.0, 3.0)).collect();
        let mut g = f.clone();
        g.s = rotate_modes(&f.s, &angles).unwrap();
        prop_assert!(op(&(&(&(&g.s.transpose() * &m) * &g.s) - &f.diagonal())) <= 1e-8 * op(&m));
        let al = gauge_align(&f, &g).unwrap();
        prop_assert!(al.distance <= 1e-9 * op(&f.s), "{}", al.distance);
        for (x, y) in al.angles.iter().zip(&angles) {
            let w = (x - y).rem_euclid(std::f64::consts::TAU);
            prop_assert!(w.min(std::f64::consts::TAU - w) <= 1e-8);
        }
    }
}

#[test]
fn standard_form_is_symplectic() {
    for n in 1..6 {
        let s = standard_form::<f64>(n).unwrap();
        assert!(is_symplectic(&s, 0.0).unwrap());
        assert_eq!(determinant(&s).unwrap(), 1.0);
    }
}
