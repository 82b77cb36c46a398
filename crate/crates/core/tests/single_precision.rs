use williamson::gaussian::entanglement_entropy;
use williamson::perturb::{bound_spectrum, counterexample_scaling};
use williamson::symplectic::{symplectic_defect, williamson};
use williamson::{random, DenseMatrix, NormKind};

#[test]
fn f32_pipeline() {
    let m = random::spd::<f64>(&mut random::rng(2), 6, 50.0);
    let m32: DenseMatrix<f32> = m.cast();
    let f = williamson(&m32).unwrap();
    let f64_d = williamson(&m).unwrap().d;
    for (a, b) in f.d.iter().zip(&f64_d) {
        assert!((*a as f64 - b).abs() <= 1e-4 * b);
    }
    assert!(symplectic_defect(&f.s).unwrap() < 1e-3);
    let r = bound_spectrum(&m32, &m32.scale(1.01), NormKind::Trace).unwrap();
    assert!(r.holds);
    let h = entanglement_entropy(&DenseMatrix::from_diagonal(&[3.0f32, 3.0])).unwrap();
    assert!((h.entropy - 2.0 * std::f32::consts::LN_2).abs() < 1e-5);
    assert!(counterexample_scaling(33.0f32, 0.05, 1.0).unwrap().report.holds);
}
