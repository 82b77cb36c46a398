//! Williamson normal forms, symplectic spectra and executable perturbation
//! bounds for real symmetric positive definite matrices.
//!
//! The numerical core is generic over [`Scalar`] (`f32` or `f64`); the
//! aliases at the crate root fix it to `f64`, which is what every tolerance
//! in the crate is tuned for.
//!
//! ```
//! use williamson::{williamson, Matrix};
//!
//! let m = Matrix::from_diagonal(&[9.0, 1.0]);
//! let f = williamson(&m).unwrap();
//! assert_eq!(f.d, vec![3.0]);
//! assert!(f.residual_diag < 1e-12 && f.residual_symp < 1e-12);
//! ```

pub mod densemat;
pub mod error;
pub mod gaussian;
pub mod perturb;
pub mod random;
pub mod scalar;
pub mod symplectic;

pub use densemat::{norm, singular_values, sym_eig, DenseMatrix, NormKind};
pub use error::{Error, Result};
pub use scalar::Scalar;
pub use symplectic::{standard_form, symplectic_spectrum, williamson};

pub type Matrix = DenseMatrix<f64>;
pub type Spectrum = densemat::Spectrum<f64>;
pub type WilliamsonFactorization = symplectic::WilliamsonFactorization<f64>;
pub type GaugeAlignment = symplectic::GaugeAlignment<f64>;
pub type BoundReport = perturb::BoundReport<f64>;
pub type PerturbationCase = perturb::PerturbationCase<f64>;
pub type SweepReport = perturb::SweepReport<f64>;
pub type GaussianState = gaussian::GaussianState<f64>;
pub type EntropyReport = gaussian::EntropyReport<f64>;
